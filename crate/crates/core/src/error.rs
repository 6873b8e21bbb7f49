use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point lies on the focal ring (distance {distance:e} below the ring tolerance)")]
    FocalRingSingularity { distance: f64 },

    #[error("point lies on the z-axis where this quantity is singular")]
    AxisPoint,

    #[error("toroidal chart degenerates at xi = 0, eta = 0 (point at infinity)")]
    DegenerateLimit,

    #[error("argument {x} too close to the singular point x = 1 of the Legendre series")]
    TooCloseToSingularity { x: f64 },

    #[error("adaptive quadrature exceeded its budget (estimated error {estimate:e})")]
    QuadratureFailure { estimate: f64 },

    #[error("point lies within the dead zone around the sphere r = a")]
    BranchBoundary,

    #[error("series did not converge: {0}")]
    NotConverged(String),

    #[error("the two points coincide")]
    CoincidentPoints,

    #[error("invalid torus geometry: {0}")]
    InvalidGeometry(String),

    #[error("point lies inside the conductor")]
    InsideConductor,

    #[error(
        "axial toroidal harmonics have no expansion in spherical harmonics: \
         they are singular at both the origin and infinity"
    )]
    NoSphericalExpansion,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
