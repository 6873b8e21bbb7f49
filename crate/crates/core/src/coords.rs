//! Cartesian, cylindrical, spherical and toroidal coordinates.
//!
//! Toroidal coordinates `(xi, eta, phi)` are taken relative to a focal ring of
//! radius `a` in the plane `z = 0`. Every derived quantity is computed from the
//! factored form `D = sqrt(((rho - a)^2 + z^2) ((rho + a)^2 + z^2))`, which
//! keeps full relative precision near the focal ring and far from it:
//!
//! * `beta = cosh(xi) = (r^2 + a^2) / D`
//! * `chi = coth(xi) = (r^2 + a^2) / (2 rho a)`
//! * `cos(eta) = (r^2 - a^2) / D`, `sin(eta) = 2 a z / D`, so `eta` comes from
//!   `atan2` rather than `acos`
//! * `Delta = sqrt(2 (beta - cos eta)) = 2 a / sqrt(D)`

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default relative distance to the focal ring below which points are rejected.
pub const DEFAULT_RING_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        CartesianPoint { x, y, z }
    }

    /// Point in the half-plane `phi = 0`.
    pub fn from_cylindrical(rho: f64, phi: f64, z: f64) -> Self {
        CartesianPoint::new(rho * phi.cos(), rho * phi.sin(), z)
    }

    pub fn r(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn phi(&self) -> f64 {
        self.y.atan2(self.x)
    }

    /// `cos(theta) = z / r`; the origin is assigned `u = 1`.
    pub fn u(&self) -> f64 {
        let r = self.r();
        if r == 0.0 {
            1.0
        } else {
            (self.z / r).clamp(-1.0, 1.0)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn distance(&self, other: &CartesianPoint) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn scaled(&self, s: f64) -> CartesianPoint {
        CartesianPoint::new(self.x * s, self.y * s, self.z * s)
    }
}

/// A point described in toroidal coordinates, carrying the cylindrical and
/// spherical quantities it was built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToroidalPoint {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
    pub beta: f64,
    /// `+inf` on the z-axis.
    pub chi: f64,
    pub delta: f64,
    pub r: f64,
    pub rho: f64,
    pub u: f64,
    /// Set when `rho == 0`; alternate harmonics are singular there.
    pub on_axis: bool,
}

impl ToroidalPoint {
    /// Builds a point from toroidal coordinates by way of the Cartesian map.
    pub fn from_toroidal(xi: f64, eta: f64, phi: f64, a: f64) -> Result<ToroidalPoint> {
        let c = to_cartesian_raw(xi, eta, phi, a)?;
        to_toroidal(&c, a)
    }

    pub fn sin_eta(&self) -> f64 {
        self.eta.sin()
    }

    pub fn cos_eta(&self) -> f64 {
        self.eta.cos()
    }
}

fn check_radius(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "focal radius must be positive and finite, got {a}"
        )));
    }
    Ok(())
}

/// Converts to toroidal coordinates with the default ring tolerance.
pub fn to_toroidal(p: &CartesianPoint, a: f64) -> Result<ToroidalPoint> {
    to_toroidal_with(p, a, DEFAULT_RING_EPS)
}

/// Converts to toroidal coordinates, rejecting points closer to the focal
/// ring than `ring_eps * a`.
pub fn to_toroidal_with(p: &CartesianPoint, a: f64, ring_eps: f64) -> Result<ToroidalPoint> {
    check_radius(a)?;
    if !p.is_finite() {
        return Err(Error::InvalidArgument("non-finite point".into()));
    }
    let rho = p.rho();
    let z = p.z;
    let r2 = rho * rho + z * z;
    let r = r2.sqrt();
    let near = (rho - a) * (rho - a) + z * z;
    if near < ring_eps * ring_eps * a * a {
        return Err(Error::FocalRingSingularity {
            distance: near.sqrt() / a,
        });
    }
    let far = (rho + a) * (rho + a) + z * z;
    let d = (near * far).sqrt();
    let sum = r2 + a * a;
    let beta = (sum / d).max(1.0);
    let xi = 0.5 * (far / near).ln();
    // sign(0) = +1: the disc r < a gets eta = pi, never -pi
    let z_signed = if z == 0.0 { 0.0 } else { z };
    let eta = (2.0 * a * z_signed).atan2((r - a) * (r + a));
    let on_axis = rho == 0.0;
    let chi = if on_axis {
        f64::INFINITY
    } else {
        (sum / (2.0 * rho * a)).max(1.0)
    };
    let delta = 2.0 * a / d.sqrt();
    Ok(ToroidalPoint {
        xi,
        eta,
        phi: p.phi(),
        beta,
        chi,
        delta,
        r,
        rho,
        u: p.u(),
        on_axis,
    })
}

fn to_cartesian_raw(xi: f64, eta: f64, phi: f64, a: f64) -> Result<CartesianPoint> {
    check_radius(a)?;
    if !xi.is_finite() || xi < 0.0 {
        return Err(Error::InvalidArgument(format!("xi must be finite and >= 0, got {xi}")));
    }
    // cosh(xi) - cos(eta) = 2 sinh^2(xi/2) + 2 sin^2(eta/2), free of cancellation
    let sh = (0.5 * xi).sinh();
    let se = (0.5 * eta).sin();
    let denom = 2.0 * (sh * sh + se * se);
    if denom == 0.0 {
        return Err(Error::DegenerateLimit);
    }
    let rho = a * xi.sinh() / denom;
    let z = a * eta.sin() / denom;
    if !rho.is_finite() || !z.is_finite() {
        return Err(Error::DegenerateLimit);
    }
    Ok(CartesianPoint::from_cylindrical(rho, phi, z))
}

/// Inverse map. `xi = 0, eta = 0` is the point at infinity and is rejected.
pub fn to_cartesian(t: &ToroidalPoint, a: f64) -> Result<CartesianPoint> {
    to_cartesian_raw(t.xi, t.eta, t.phi, a)
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}
