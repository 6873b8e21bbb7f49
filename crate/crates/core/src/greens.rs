//! The inverse distance `1/|p1 - p2|`, directly and as spherical, toroidal
//! and cylindrical harmonic series.

use std::f64::consts::PI;

use crate::coords::{to_toroidal, CartesianPoint};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numeric::neumann;
use crate::special::{p_half_sequence, q_half_neg_order, q_half_series, EvalResult, SeriesOptions};

/// Consecutive negligible terms required before a series is cut off.
const LOOKBACK: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointPair {
    pub p1: CartesianPoint,
    pub p2: CartesianPoint,
    /// Focal radius used by the toroidal expansion.
    pub a: f64,
}

impl PointPair {
    pub fn new(p1: CartesianPoint, p2: CartesianPoint, a: f64) -> Self {
        PointPair { p1, p2, a }
    }

    pub fn swapped(&self) -> Self {
        PointPair::new(self.p2, self.p1, self.a)
    }

    /// `(rho1^2 + rho2^2 + (z1-z2)^2) / (2 rho1 rho2)`.
    pub fn chi_bar(&self) -> f64 {
        let (r1, r2) = (self.p1.rho(), self.p2.rho());
        let dz = self.p1.z - self.p2.z;
        (r1 * r1 + r2 * r2 + dz * dz) / (2.0 * r1 * r2)
    }
}

/// Series caps and the relative tolerance used for adaptive truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenLimits {
    pub n_max: u32,
    pub m_max: u32,
    pub tol: f64,
}

impl Default for GreenLimits {
    fn default() -> Self {
        GreenLimits {
            n_max: 400,
            m_max: 400,
            tol: 1e-13,
        }
    }
}

pub fn green_direct(pp: &PointPair) -> Result<f64> {
    let d = pp.p1.distance(&pp.p2);
    if d == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(1.0 / d)
}

/// Tracks the magnitudes of the last few terms of a series.
struct Tail {
    recent: [f64; LOOKBACK],
    seen: usize,
}

impl Tail {
    fn new() -> Self {
        Tail {
            recent: [f64::INFINITY; LOOKBACK],
            seen: 0,
        }
    }

    fn push(&mut self, magnitude: f64) {
        self.recent.rotate_left(1);
        self.recent[LOOKBACK - 1] = magnitude;
        self.seen += 1;
    }

    /// Geometric tail bound from the largest recent magnitude.
    fn bound(&self, ratio: f64) -> f64 {
        let last = self.recent.iter().fold(0.0f64, |a, b| a.max(*b));
        if ratio < 1.0 {
            last * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    }
}

/// `sqrt((n-m)!/(n+m)!) P_n^m(u)` for `n = m..=n_max` (index `n`), by a
/// recurrence that stays bounded for large degree.
fn normalized_legendre_row(m: u32, n_max: u32, u: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max as usize + 1];
    if m > n_max {
        return out;
    }
    let s = ((1.0 - u) * (1.0 + u)).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 1..=m {
        pmm *= ((2 * i - 1) as f64 / (2 * i) as f64).sqrt() * s;
    }
    out[m as usize] = pmm;
    if m == n_max {
        return out;
    }
    let mf = m as f64;
    out[m as usize + 1] = (2.0 * mf + 1.0).sqrt() * u * pmm;
    for n in (m + 2)..=n_max {
        let nf = n as f64;
        let a = (2.0 * nf - 1.0) * u * out[n as usize - 1];
        let b = ((nf - 1.0).powi(2) - mf * mf).sqrt() * out[n as usize - 2];
        out[n as usize] = (a - b) / (nf * nf - mf * mf).sqrt();
    }
    out
}

/// Coefficient of `cos(m (phi1 - phi2))` in the spherical expansion,
/// summed over degree up to `n_max`.
pub fn spherical_azimuthal_term(pp: &PointPair, m: u32, n_max: u32) -> f64 {
    let (inner, outer) = order_by_radius(pp);
    let (r1, r2) = (inner.r(), outer.r());
    let row1 = normalized_legendre_row(m, n_max, inner.u());
    let row2 = normalized_legendre_row(m, n_max, outer.u());
    let mut sum = 0.0;
    for n in m..=n_max {
        let radial = (r1 / r2).powi(n as i32) / r2;
        sum += radial * row1[n as usize] * row2[n as usize];
    }
    neumann(m as usize) * sum
}

fn order_by_radius(pp: &PointPair) -> (CartesianPoint, CartesianPoint) {
    if pp.p1.r() <= pp.p2.r() {
        (pp.p1, pp.p2)
    } else {
        (pp.p2, pp.p1)
    }
}

/// Spherical-harmonic series, valid for `r1 != r2`. `est_error` is absolute.
pub fn green_spherical(pp: &PointPair, limits: &GreenLimits) -> Result<EvalResult> {
    green_direct(pp)?;
    let (inner, outer) = order_by_radius(pp);
    let (r1, r2) = (inner.r(), outer.r());
    if r1 == r2 {
        return Err(Error::NotConverged("spherical expansion needs r1 != r2".into()));
    }
    let ratio = r1 / r2;
    let (u1, u2) = (inner.u(), outer.u());
    let dphi = inner.phi() - outer.phi();
    let n_max = limits.n_max;
    let rows1: Vec<Vec<f64>> = (0..=n_max).map(|m| normalized_legendre_row(m, n_max, u1)).collect();
    let rows2: Vec<Vec<f64>> = (0..=n_max).map(|m| normalized_legendre_row(m, n_max, u2)).collect();
    let cos_m: Vec<f64> = (0..=n_max).map(|m| (m as f64 * dphi).cos()).collect();
    let mut sum = 0.0;
    let mut tail = Tail::new();
    let mut radial = 1.0 / r2;
    let mut used = 0;
    let mut est = f64::INFINITY;
    for n in 0..=n_max as usize {
        let mut term = 0.0;
        let mut magnitude = 0.0;
        for m in 0..=n {
            let v = neumann(m) * rows1[m][n] * rows2[m][n];
            term += v * cos_m[m];
            magnitude += v.abs();
        }
        sum += radial * term;
        tail.push(radial * magnitude);
        radial *= ratio;
        used = n + 1;
        est = tail.bound(ratio) + 4.0 * f64::EPSILON * sum.abs();
        if tail.seen >= LOOKBACK && est <= limits.tol * sum.abs() {
            break;
        }
    }
    Ok(EvalResult {
        value: sum,
        converged: est <= limits.tol * sum.abs(),
        terms_used: used,
        est_error: est,
    })
}

/// Toroidal-harmonic double series, valid for `beta1 != beta2`. The point
/// closer to the focal ring is used with `Q`. `est_error` is absolute.
pub fn green_toroidal(pp: &PointPair, limits: &GreenLimits) -> Result<EvalResult> {
    green_direct(pp)?;
    let a = pp.a;
    let t1 = to_toroidal(&pp.p1, a)?;
    let t2 = to_toroidal(&pp.p2, a)?;
    let (far, near) = if t1.beta <= t2.beta { (t1, t2) } else { (t2, t1) };
    if far.beta == near.beta {
        return Err(Error::NotConverged("toroidal expansion needs beta1 != beta2".into()));
    }
    let ratio_n = (far.xi - near.xi).exp();
    let ratio_m = if far.xi > 0.0 {
        (0.5 * far.xi).tanh() / (0.5 * near.xi).tanh()
    } else {
        0.0
    };
    let deta = far.eta - near.eta;
    let dphi = far.phi - near.phi;
    let opts = SeriesOptions::default();
    let mut total = 0.0;
    let mut outer_tail = Tail::new();
    let mut used = 0;
    let mut est = f64::INFINITY;
    let mut all_inner_converged = true;
    for m in 0..=limits.m_max {
        let p_seq = p_half_sequence(m, limits.n_max, far.beta, &opts)?;
        let mut inner = 0.0;
        let mut inner_mag = 0.0;
        let mut tail = Tail::new();
        let mut inner_est = f64::INFINITY;
        for n in 0..=limits.n_max {
            let q = q_half_neg_order(n, m, near.beta, &opts)?;
            let v = (p_seq[n as usize].value * q.value).to_f64() * neumann(n as usize);
            inner += v * (n as f64 * deta).cos();
            inner_mag += v.abs();
            tail.push(v.abs());
            used += 1;
            inner_est = tail.bound(ratio_n);
            if tail.seen >= LOOKBACK && inner_est <= 0.1 * limits.tol * inner_mag {
                break;
            }
        }
        all_inner_converged &= inner_est <= 0.1 * limits.tol * inner_mag.max(f64::MIN_POSITIVE);
        let em = neumann(m as usize);
        total += em * inner * (m as f64 * dphi).cos();
        outer_tail.push(em * inner_mag);
        est = outer_tail.bound(ratio_m) + 4.0 * f64::EPSILON * total.abs();
        if outer_tail.seen >= LOOKBACK && est <= limits.tol * total.abs() {
            break;
        }
    }
    let scale = far.delta * near.delta / (2.0 * PI * a);
    let value = scale * total;
    let est = scale * est;
    Ok(EvalResult {
        value,
        converged: all_inner_converged && est <= limits.tol * value.abs(),
        terms_used: used,
        est_error: est,
    })
}

/// Coefficient of `cos(m (phi1 - phi2))` in the cylindrical expansion.
pub fn cylindrical_azimuthal_term(pp: &PointPair, m: u32) -> Result<f64> {
    let (r1, r2) = (pp.p1.rho(), pp.p2.rho());
    if r1 == 0.0 || r2 == 0.0 {
        return Err(Error::AxisPoint);
    }
    let q = q_half_series(m, 0, pp.chi_bar(), &SeriesOptions::default())?;
    Ok(neumann(m as usize) * q.value.to_f64() / (PI * (r1 * r2).sqrt()))
}

/// Cylindrical series in `Q_{m-1/2}(chi_bar)`, valid for any two distinct
/// points off the z-axis. `est_error` is absolute.
pub fn green_cylindrical(pp: &PointPair, limits: &GreenLimits) -> Result<EvalResult> {
    green_direct(pp)?;
    let (r1, r2) = (pp.p1.rho(), pp.p2.rho());
    if r1 == 0.0 || r2 == 0.0 {
        return Err(Error::AxisPoint);
    }
    let chi_bar = pp.chi_bar();
    let ratio = (-chi_bar.acosh()).exp();
    let dphi = pp.p1.phi() - pp.p2.phi();
    let opts = SeriesOptions::default();
    let mut sum = 0.0;
    let mut tail = Tail::new();
    let mut used = 0;
    let mut est = f64::INFINITY;
    for m in 0..=limits.m_max {
        let q = q_half_series(m, 0, chi_bar, &opts)?.value.to_f64();
        let v = neumann(m as usize) * q;
        sum += v * (m as f64 * dphi).cos();
        tail.push(v.abs());
        used += 1;
        est = tail.bound(ratio) + 4.0 * f64::EPSILON * sum.abs();
        if tail.seen >= LOOKBACK && est <= limits.tol * sum.abs() {
            break;
        }
    }
    let scale = 1.0 / (PI * (r1 * r2).sqrt());
    Ok(EvalResult {
        value: scale * sum,
        converged: est <= limits.tol * sum.abs(),
        terms_used: used,
        est_error: scale * est,
    })
}

/// The three expansions next to the direct value.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenComparison {
    pub direct: f64,
    pub spherical: Result<EvalResult>,
    pub toroidal: Result<EvalResult>,
    pub cylindrical: Result<EvalResult>,
}

impl GreenComparison {
    /// Largest relative deviation from the direct value; infinite if any
    /// expansion failed.
    pub fn max_dev(&self) -> f64 {
        [&self.spherical, &self.toroidal, &self.cylindrical]
            .iter()
            .map(|r| match r {
                Ok(v) => ((v.value - self.direct) / self.direct).abs(),
                Err(_) => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

pub fn compare(pp: &PointPair, limits: &GreenLimits) -> Result<GreenComparison> {
    Ok(GreenComparison {
        direct: green_direct(pp)?,
        spherical: green_spherical(pp, limits),
        toroidal: green_toroidal(pp, limits),
        cylindrical: green_cylindrical(pp, limits),
    })
}

pub fn compare_batch(pairs: &[PointPair], limits: &GreenLimits, exec: Execution) -> Vec<Result<GreenComparison>> {
    exec.map(pairs, |pp| compare(pp, limits))
}
