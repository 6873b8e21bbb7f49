//! Potential of a conducting torus held at `V0`, as a toroidal series and
//! as interior/exterior spherical series, plus the grid maps comparing them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coeffs::build_table;
use crate::coords::{to_toroidal, CartesianPoint};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numeric::{neumann, CompensatedSum, ExtF64};
use crate::special::{assoc_legendre_row, legendre_zero, p_half_sequence, q_half_series, EvalResult, SeriesOptions};

/// Terms inspected by the convergence classifier, per window.
const WINDOW: usize = 10;

/// Terms below `CONVERGED_TAIL * |V0|` count as converged.
pub const CONVERGED_TAIL: f64 = 1e-12;

/// Relative margin of the regions where the spherical series are trusted.
pub const SAFE_MARGIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusGeometry {
    pub major_radius: f64,
    pub minor_radius: f64,
    /// `sqrt(R0^2 - r0^2)`
    pub focal_radius: f64,
    /// `R0 / r0`
    pub beta0: f64,
    pub xi0: f64,
}

impl TorusGeometry {
    pub fn new(major_radius: f64, minor_radius: f64) -> Result<Self> {
        if !(minor_radius > 0.0 && major_radius.is_finite() && minor_radius < major_radius) {
            return Err(Error::InvalidGeometry(format!(
                "need 0 < r0 < R0, got R0 = {major_radius}, r0 = {minor_radius}"
            )));
        }
        let beta0 = major_radius / minor_radius;
        Ok(TorusGeometry {
            major_radius,
            minor_radius,
            focal_radius: (major_radius * major_radius - minor_radius * minor_radius).sqrt(),
            beta0,
            xi0: beta0.acosh(),
        })
    }

    /// `R0 - r0^2 / R0`, the lower bound on the interior series' radius of
    /// convergence.
    pub fn inner_limit(&self) -> f64 {
        self.major_radius - self.minor_radius.powi(2) / self.major_radius
    }

    /// Radius separating the two spherical branches in the error map.
    pub fn branch_radius(&self) -> f64 {
        0.5 * (self.focal_radius + self.major_radius)
    }
}

pub fn torus_params(major_radius: f64, minor_radius: f64) -> Result<TorusGeometry> {
    TorusGeometry::new(major_radius, minor_radius)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesStatus {
    Converged,
    /// Terms still decrease but have not reached the threshold.
    Slow,
    Diverged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Regular harmonics, `r -> 0`.
    Inner,
    /// Irregular harmonics, `r -> infinity`.
    Outer,
}

/// A series value with its convergence classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub status: SeriesStatus,
    /// Largest term magnitude among the last few terms.
    pub tail: f64,
    pub terms: usize,
}

impl SeriesEval {
    fn to_result(self) -> EvalResult {
        EvalResult {
            value: self.value,
            converged: self.status == SeriesStatus::Converged,
            terms_used: self.terms,
            est_error: self.tail,
        }
    }
}

/// Classifies a series from the magnitudes of its terms (angular factors
/// excluded): converged when the last window is below `threshold`, diverged
/// when it exceeds the window before it or contains a non-finite value, slow
/// otherwise.
pub fn classify(magnitudes: &[f64], threshold: f64) -> (SeriesStatus, f64) {
    if magnitudes.iter().any(|t| !t.is_finite()) {
        return (SeriesStatus::Diverged, f64::INFINITY);
    }
    let len = magnitudes.len();
    let last_start = len.saturating_sub(WINDOW);
    let prev_start = len.saturating_sub(2 * WINDOW);
    let window_max = |s: &[f64]| s.iter().fold(0.0f64, |a, b| a.max(*b));
    let tail = window_max(&magnitudes[last_start..]);
    if tail < threshold {
        return (SeriesStatus::Converged, tail);
    }
    if last_start > prev_start && tail > window_max(&magnitudes[prev_start..last_start]) {
        return (SeriesStatus::Diverged, tail);
    }
    (SeriesStatus::Slow, tail)
}

/// A torus at potential `V0` with its series coefficients precomputed.
#[derive(Clone, Debug)]
pub struct TorusSolution {
    pub geometry: TorusGeometry,
    pub v0: f64,
    pub n_max: u32,
    pub k_max: u32,
    /// `Q_{n-1/2}(beta0) / P_{n-1/2}(beta0)`
    ratios: Vec<ExtF64>,
    /// `(2 V0/pi) P_k(0) Σ_n ε_n (-1)^n ratio_n c_{nk}`
    inner: Vec<f64>,
    /// `(2 V0/pi) P_k(0) Σ_n ε_n ratio_n c_{nk}`
    outer: Vec<f64>,
}

impl TorusSolution {
    pub fn new(geometry: TorusGeometry, v0: f64, n_max: u32, k_max: u32) -> Result<Self> {
        if !v0.is_finite() {
            return Err(Error::InvalidArgument("V0 must be finite".into()));
        }
        let opts = SeriesOptions::default();
        let p = p_half_sequence(0, n_max, geometry.beta0, &opts)?;
        let ratios = (0..=n_max)
            .map(|n| Ok(q_half_series(n, 0, geometry.beta0, &opts)?.value / p[n as usize].value))
            .collect::<Result<Vec<_>>>()?;
        let table = build_table(0, n_max.max(1), k_max.max(1))?;
        let scale = 2.0 * v0 / PI;
        let mut inner = Vec::with_capacity(k_max as usize + 1);
        let mut outer = Vec::with_capacity(k_max as usize + 1);
        for k in 0..=k_max {
            let zero = legendre_zero(k, 0);
            if zero == 0.0 {
                inner.push(0.0);
                outer.push(0.0);
                continue;
            }
            let mut si = CompensatedSum::new();
            let mut so = CompensatedSum::new();
            for n in 0..=n_max {
                let t = (ratios[n as usize] * table.c_ext(n, k)).to_f64() * neumann(n as usize);
                so.add(t);
                si.add(if n % 2 == 0 { t } else { -t });
            }
            inner.push(scale * zero * si.value());
            outer.push(scale * zero * so.value());
        }
        Ok(TorusSolution {
            geometry,
            v0,
            n_max,
            k_max,
            ratios,
            inner,
            outer,
        })
    }

    /// 120 toroidal orders and 170 spherical degrees, enough for the default maps.
    pub fn with_default_truncation(geometry: TorusGeometry, v0: f64) -> Result<Self> {
        TorusSolution::new(geometry, v0, 120, 170)
    }

    pub fn ratio(&self, n: u32) -> ExtF64 {
        self.ratios[n as usize]
    }

    /// Coefficient of `(r/a)^k P_k(u)` (inner) or `(a/r)^{k+1} P_k(u)` (outer).
    pub fn spherical_coefficient(&self, branch: Branch, k: u32) -> f64 {
        match branch {
            Branch::Inner => self.inner[k as usize],
            Branch::Outer => self.outer[k as usize],
        }
    }

    /// `lim r V / a` as `r -> infinity`: the `k = 0` exterior coefficient.
    pub fn monopole(&self) -> f64 {
        self.outer[0]
    }

    fn threshold(&self) -> f64 {
        CONVERGED_TAIL * self.v0.abs().max(f64::MIN_POSITIVE)
    }

    /// The toroidal series at any point off the focal ring, continued inside
    /// the conductor without complaint.
    pub fn toroidal_series(&self, p: &CartesianPoint) -> Result<SeriesEval> {
        let a = self.geometry.focal_radius;
        let t = to_toroidal(p, a)?;
        let pseq = p_half_sequence(0, self.n_max, t.beta, &SeriesOptions::default())?;
        let scale = self.v0 * t.delta / PI;
        let mut acc = CompensatedSum::new();
        let mut mags = Vec::with_capacity(self.n_max as usize + 1);
        for n in 0..=self.n_max {
            let v = (self.ratios[n as usize] * pseq[n as usize].value).to_f64() * neumann(n as usize) * scale;
            acc.add(v * (n as f64 * t.eta).cos());
            mags.push(v.abs());
        }
        let (status, tail) = classify(&mags, self.threshold());
        Ok(SeriesEval {
            value: acc.value(),
            status,
            tail,
            terms: mags.len(),
        })
    }

    /// One spherical branch at any point, without a safe-region check.
    pub fn spherical_series(&self, p: &CartesianPoint, branch: Branch) -> SeriesEval {
        let a = self.geometry.focal_radius;
        let r = p.r();
        let pk = assoc_legendre_row(0, self.k_max, p.u());
        let (ratio, mut radial, coeffs) = match branch {
            Branch::Inner => (r / a, 1.0, &self.inner),
            Branch::Outer => (a / r, a / r, &self.outer),
        };
        let mut acc = CompensatedSum::new();
        let mut mags = Vec::with_capacity(self.k_max as usize + 1);
        for k in 0..=self.k_max as usize {
            let v = coeffs[k] * radial;
            acc.add(v * pk[k]);
            if coeffs[k] != 0.0 {
                mags.push(v.abs());
            }
            radial *= ratio;
        }
        let (status, tail) = classify(&mags, self.threshold());
        SeriesEval {
            value: acc.value(),
            status,
            tail,
            terms: self.k_max as usize + 1,
        }
    }

    /// Toroidal solution outside the conductor.
    pub fn potential_toroidal(&self, p: &CartesianPoint) -> Result<EvalResult> {
        let t = to_toroidal(p, self.geometry.focal_radius)?;
        if t.beta > self.geometry.beta0 * (1.0 + 1e-14) {
            return Err(Error::InsideConductor);
        }
        Ok(self.toroidal_series(p)?.to_result())
    }

    /// Spherical solution on the requested branch; refuses points outside
    /// `r < a (1 - 0.1)` (inner) or `r > R0 (1 + 0.1)` (outer).
    pub fn potential_spherical(&self, p: &CartesianPoint, branch: Branch) -> Result<EvalResult> {
        let r = p.r();
        let g = &self.geometry;
        match branch {
            Branch::Inner if r >= g.focal_radius * (1.0 - SAFE_MARGIN) => {
                return Err(Error::NotConverged(format!(
                    "interior series used at r = {r}, outside r < {}",
                    g.focal_radius * (1.0 - SAFE_MARGIN)
                )))
            }
            Branch::Outer if r <= g.major_radius * (1.0 + SAFE_MARGIN) => {
                return Err(Error::NotConverged(format!(
                    "exterior series used at r = {r}, outside r > {}",
                    g.major_radius * (1.0 + SAFE_MARGIN)
                )))
            }
            _ => {}
        }
        Ok(self.spherical_series(p, branch).to_result())
    }

    /// `true` when `p` is strictly inside the conducting tube.
    pub fn is_inside(&self, p: &CartesianPoint) -> bool {
        let g = &self.geometry;
        (p.rho() - g.major_radius).hypot(p.z) < g.minor_radius
    }

    fn branch_for(&self, p: &CartesianPoint) -> Branch {
        if p.r() < self.geometry.branch_radius() {
            Branch::Inner
        } else {
            Branch::Outer
        }
    }

    fn cell(&self, rho: f64, z: f64, what: MapKind) -> (f64, CellFlag) {
        let p = CartesianPoint::new(rho, 0.0, z);
        let inside = self.is_inside(&p);
        let base = if inside { CellFlag::Inside } else { CellFlag::Ok };
        let status_flag = |s: SeriesStatus| match s {
            SeriesStatus::Converged => CellFlag::Ok,
            SeriesStatus::Slow => CellFlag::Slow,
            SeriesStatus::Diverged => CellFlag::Div,
        };
        let toroidal = || -> std::result::Result<SeriesEval, (f64, CellFlag)> {
            let t = to_toroidal(&p, self.geometry.focal_radius).map_err(|_| (f64::NAN, CellFlag::Sing))?;
            if t.xi >= 2.0 * self.geometry.xi0 {
                return Err((f64::NAN, CellFlag::Div));
            }
            self.toroidal_series(&p).map_err(|_| (f64::NAN, CellFlag::Sing))
        };
        match what {
            MapKind::PotentialToroidal => match toroidal() {
                Ok(s) => (s.value, status_flag(s.status).max(base)),
                Err(e) => e,
            },
            MapKind::PotentialSpherical => {
                let s = self.spherical_series(&p, self.branch_for(&p));
                (s.value, status_flag(s.status).max(base))
            }
            MapKind::Error => {
                let s = self.spherical_series(&p, self.branch_for(&p));
                match toroidal() {
                    Ok(t) => {
                        let err = ((s.value - t.value) / self.v0).abs();
                        let flag = status_flag(s.status).max(status_flag(t.status)).max(base);
                        (err, flag)
                    }
                    Err((_, flag)) => (f64::NAN, flag.max(status_flag(s.status))),
                }
            }
        }
    }

    /// Fills a grid in the half-plane `phi = 0`.
    pub fn map(&self, spec: &GridSpec, what: MapKind, exec: Execution) -> Result<FieldGrid> {
        spec.validate()?;
        let cells: Vec<(f64, f64)> = (0..spec.n_z)
            .flat_map(|iz| (0..spec.n_rho).map(move |ir| (spec.rho_at(ir), spec.z_at(iz))))
            .collect();
        let out = exec.map(&cells, |&(rho, z)| self.cell(rho, z, what));
        let (values, flags) = out.into_iter().unzip();
        Ok(FieldGrid {
            spec: *spec,
            a: self.geometry.focal_radius,
            values,
            flags,
        })
    }

    /// `|V_spherical - V_toroidal| / |V0|` with the interior branch below
    /// `(a + R0)/2` and the exterior branch above.
    pub fn error_map(&self, spec: &GridSpec, exec: Execution) -> Result<FieldGrid> {
        self.map(spec, MapKind::Error, exec)
    }

    /// Largest `rho` on `z = 0` in `(0, rho_max]` (scanned with `samples`
    /// points) at which the interior series is not classified as diverging.
    pub fn inner_convergence_radius(&self, rho_max: f64, samples: usize) -> f64 {
        let mut last = 0.0;
        for i in 1..=samples {
            let rho = rho_max * i as f64 / samples as f64;
            let s = self.spherical_series(&CartesianPoint::new(rho, 0.0, 0.0), Branch::Inner);
            if s.status == SeriesStatus::Diverged {
                break;
            }
            last = rho;
        }
        last
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapKind {
    Error,
    PotentialToroidal,
    PotentialSpherical,
}

/// Per-cell flag, ordered by precedence (higher wins).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellFlag {
    Ok,
    Inside,
    Slow,
    Div,
    Sing,
}

impl CellFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            CellFlag::Ok => "OK",
            CellFlag::Inside => "INSIDE",
            CellFlag::Slow => "SLOW",
            CellFlag::Div => "DIV",
            CellFlag::Sing => "SING",
        }
    }

    pub fn parse(s: &str) -> Option<CellFlag> {
        Some(match s {
            "OK" => CellFlag::Ok,
            "INSIDE" => CellFlag::Inside,
            "SLOW" => CellFlag::Slow,
            "DIV" => CellFlag::Div,
            "SING" => CellFlag::Sing,
            _ => return None,
        })
    }
}

/// Sample points `rho_min..=rho_max` by `z_min..=z_max`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rho_min: f64,
    pub rho_max: f64,
    pub n_rho: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub n_z: usize,
}

impl GridSpec {
    /// `rho in [0, rho_max]`, `z in [-z_max, z_max]`.
    pub fn half_plane(rho_max: f64, z_max: f64, n_rho: usize, n_z: usize) -> Self {
        GridSpec {
            rho_min: 0.0,
            rho_max,
            n_rho,
            z_min: -z_max,
            z_max,
            n_z,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.rho_min, self.rho_max, self.z_min, self.z_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.n_rho == 0 || self.n_z == 0 || self.rho_min < 0.0 {
            return Err(Error::InvalidArgument(format!("invalid grid {self:?}")));
        }
        if self.rho_max < self.rho_min || self.z_max < self.z_min {
            return Err(Error::InvalidArgument("grid ranges must be increasing".into()));
        }
        Ok(())
    }

    fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    pub fn rho_at(&self, i: usize) -> f64 {
        GridSpec::lerp(self.rho_min, self.rho_max, i, self.n_rho)
    }

    pub fn z_at(&self, i: usize) -> f64 {
        GridSpec::lerp(self.z_min, self.z_max, i, self.n_z)
    }

    pub fn rho_step(&self) -> f64 {
        if self.n_rho > 1 {
            (self.rho_max - self.rho_min) / (self.n_rho - 1) as f64
        } else {
            0.0
        }
    }
}

/// Values and flags in row-major order, `z` outer and `rho` inner.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    /// Focal radius of the geometry that produced the grid.
    pub a: f64,
    pub values: Vec<f64>,
    pub flags: Vec<CellFlag>,
}

impl FieldGrid {
    pub fn index(&self, i_rho: usize, i_z: usize) -> usize {
        i_z * self.spec.n_rho + i_rho
    }

    /// `(rho, z, value, flag)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, CellFlag)> + '_ {
        (0..self.spec.n_z).flat_map(move |iz| {
            (0..self.spec.n_rho).map(move |ir| {
                let i = self.index(ir, iz);
                (self.spec.rho_at(ir), self.spec.z_at(iz), self.values[i], self.flags[i])
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_solution() -> TorusSolution {
        TorusSolution::with_default_truncation(TorusGeometry::new(1.0, 0.5).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn geometry() {
        let g = torus_params(1.0, 0.6).unwrap();
        assert!((g.focal_radius - 0.8).abs() < 1e-15);
        assert!((g.beta0 - 5.0 / 3.0).abs() < 1e-15);
        assert!(torus_params(1.0, 1.0).is_err());
        assert!(torus_params(1.0, 0.0).is_err());
        assert!(torus_params(1.0, 1e-9).unwrap().beta0 > 1e8);
    }

    #[test]
    fn classifier() {
        let decaying: Vec<f64> = (0..40).map(|k| 0.5f64.powi(k)).collect();
        assert_eq!(classify(&decaying, 1e-12).0, SeriesStatus::Slow);
        let fast: Vec<f64> = (0..60).map(|k| 0.5f64.powi(k)).collect();
        assert_eq!(classify(&fast, 1e-12).0, SeriesStatus::Converged);
        let growing: Vec<f64> = (0..40).map(|k| 1.1f64.powi(k)).collect();
        assert_eq!(classify(&growing, 1e-12).0, SeriesStatus::Diverged);
        assert_eq!(classify(&[1.0, f64::NAN], 1e-12).0, SeriesStatus::Diverged);
    }

    #[test]
    fn surface_value() {
        let s = default_solution();
        let g = s.geometry;
        let p = CartesianPoint::new(g.major_radius, 0.0, g.minor_radius);
        let v = s.potential_toroidal(&p).unwrap();
        assert!((v.value - 1.0).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn branches_agree_with_toroidal() {
        let s = default_solution();
        let a = s.geometry.focal_radius;
        let th = PI / 4.0;
        let p = CartesianPoint::new(0.3 * a * th.sin(), 0.0, 0.3 * a * th.cos());
        let vt = s.potential_toroidal(&p).unwrap().value;
        let vs = s.potential_spherical(&p, Branch::Inner).unwrap().value;
        assert!((vt - vs).abs() < 1e-6);
        let p = CartesianPoint::new(3.0 * th.sin(), 0.0, 3.0 * th.cos());
        let vt = s.potential_toroidal(&p).unwrap().value;
        let vs = s.potential_spherical(&p, Branch::Outer).unwrap().value;
        assert!((vt - vs).abs() < 1e-8);
        assert!(s
            .potential_spherical(&CartesianPoint::new(0.9, 0.0, 0.0), Branch::Outer)
            .is_err());
    }

    #[test]
    fn inside_is_rejected() {
        let s = default_solution();
        assert_eq!(
            s.potential_toroidal(&CartesianPoint::new(1.0, 0.0, 0.1)),
            Err(Error::InsideConductor)
        );
    }

    #[test]
    fn flag_precedence() {
        assert!(CellFlag::Sing > CellFlag::Div);
        assert!(CellFlag::Div > CellFlag::Slow);
        assert!(CellFlag::Slow > CellFlag::Inside);
        assert!(CellFlag::Inside > CellFlag::Ok);
    }

    #[test]
    fn small_map() {
        let s = default_solution();
        let grid = s
            .error_map(&GridSpec::half_plane(2.0, 2.0, 2, 2), Execution::Sequential)
            .unwrap();
        assert_eq!(grid.values.len(), 4);
        assert_eq!(grid.cells().count(), 4);
    }
}
