//! Ring toroidal harmonics as spherical-harmonic series, and solid spherical
//! harmonics as series of axial toroidal harmonics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coeffs::build_table;
use crate::coords::{to_toroidal, CartesianPoint};
use crate::error::{Error, Result};
use crate::numeric::{neumann, CompensatedSum};
use crate::special::{
    assoc_legendre, assoc_legendre_row, legendre_zero, q_half_series, whipple_factor, EvalResult, Family, HarmonicSpec,
    Kind, Parity, SeriesOptions,
};

/// Hard cap on the truncation order returned by [`truncation_estimate`].
pub const DEFAULT_TERM_CAP: u32 = 512;

/// Half-width of the shell around `r = a` where neither ring series is used.
pub const BRANCH_DEAD_ZONE: f64 = 1e-9;

/// Cancellation (peak partial sum over final sum) beyond which a toroidal
/// series is reported as slowly converging.
pub const CANCELLATION_LIMIT: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    /// `(r/a)^n P_n^m(u)`
    Regular,
    /// `(a/r)^{n+1} P_n^m(u)`
    Irregular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    RingInSphericalInner,
    RingInSphericalOuter,
    SphericalInToroidal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Converges,
    Diverges,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationEstimate {
    pub k_max: u32,
    /// The envelope had not dropped below the tolerance at the cap.
    pub capped: bool,
}

/// Outcome of a series in toroidal harmonics, with the cancellation metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToroidalSeries {
    pub result: EvalResult,
    /// Largest partial sum over the final sum; 1 means no cancellation.
    pub cancellation: f64,
    /// Set when the cancellation exceeds [`CANCELLATION_LIMIT`].
    pub slow: bool,
}

/// Smallest `k` at which `sqrt(pi) e^{-k xi} / sqrt((2k-1) sinh xi)`, the
/// large-order envelope of `Q_{k-1/2}(cosh xi)`, times the coefficient bound
/// `(k+1)^{2n+1+m}` drops below `tol`.
pub fn truncation_estimate(xi: f64, n: u32, m: u32, tol: f64) -> TruncationEstimate {
    truncation_estimate_capped(xi, n, m, tol, DEFAULT_TERM_CAP)
}

pub fn truncation_estimate_capped(xi: f64, n: u32, m: u32, tol: f64, cap: u32) -> TruncationEstimate {
    if xi.is_nan() || xi <= 0.0 {
        return TruncationEstimate {
            k_max: cap,
            capped: true,
        };
    }
    let ln_tol = tol.ln();
    let ln_base = 0.5 * PI.ln() - 0.5 * xi.sinh().ln();
    let power = (2 * n + 1 + m) as f64;
    let start = n.max(m).max(1);
    for k in start..=cap {
        let kf = k as f64;
        let ln_env = ln_base - kf * xi - 0.5 * (2.0 * kf - 1.0).ln() + power * (kf + 1.0).ln();
        if ln_env < ln_tol {
            return TruncationEstimate {
                k_max: k,
                capped: false,
            };
        }
    }
    TruncationEstimate {
        k_max: cap,
        capped: true,
    }
}

pub fn convergence_region(kind: RegionKind, p: &CartesianPoint, a: f64) -> Region {
    let r = p.r();
    let near_sphere = (r - a).abs() <= BRANCH_DEAD_ZONE * a;
    match kind {
        RegionKind::RingInSphericalInner | RegionKind::RingInSphericalOuter if near_sphere => Region::Boundary,
        RegionKind::RingInSphericalInner if r < a => Region::Converges,
        RegionKind::RingInSphericalOuter if r > a => Region::Converges,
        RegionKind::RingInSphericalInner | RegionKind::RingInSphericalOuter => Region::Diverges,
        RegionKind::SphericalInToroidal => {
            let rho = p.rho();
            if rho == 0.0 || !r.is_finite() {
                Region::Diverges
            } else if (rho - a).hypot(p.z) <= BRANCH_DEAD_ZONE * a {
                Region::Boundary
            } else {
                Region::Converges
            }
        }
    }
}

/// Individual terms `k = 0..=k_max` of the spherical series for the standard
/// ring harmonic `(n, m, parity)` at `p`, before the overall factor
/// `2 (-1)^m cos(m phi)`. Terms with `k < m` are zero.
pub fn ring_series_terms(n: u32, m: u32, parity: Parity, p: &CartesianPoint, a: f64, k_max: u32) -> Result<Vec<f64>> {
    let r = p.r();
    if (r - a).abs() < BRANCH_DEAD_ZONE * a {
        return Err(Error::BranchBoundary);
    }
    let table = build_table(m, n.max(1), k_max.max(1))?;
    let u = p.u();
    let plm = assoc_legendre_row(m, k_max, u);
    let inner = r < a;
    let ratio = if inner { r / a } else { a / r };
    let mut terms = vec![0.0; k_max as usize + 1];
    let mut radial = if inner { 1.0 } else { ratio };
    for k in 0..=k_max {
        if k >= m {
            let (coef, zero) = match parity {
                Parity::Cos => (table.c_ext(n, k), legendre_zero(k, m)),
                Parity::Sin => (table.s_ext(n, k), legendre_zero(k + 1, m)),
            };
            let mut sign = 1.0;
            if inner && n % 2 == 1 {
                sign = -sign;
            }
            if !inner && parity == Parity::Sin {
                sign = -sign;
            }
            terms[k as usize] = (coef * (sign * zero * radial * plm[k as usize])).to_f64();
        }
        radial *= ratio;
    }
    Ok(terms)
}

/// The standard ring harmonic `Delta P_{n-1/2}^m(beta) trig(n eta) cos(m phi)`
/// summed as a series of spherical harmonics, interior (`r < a`) or exterior
/// (`r > a`). `est_error` is absolute.
pub fn ring_via_spherical(
    n: u32,
    m: u32,
    parity: Parity,
    p: &CartesianPoint,
    a: f64,
    k_max: u32,
    tol: f64,
) -> Result<EvalResult> {
    if parity == Parity::Sin && n == 0 {
        return Ok(EvalResult::exact(0.0));
    }
    let terms = ring_series_terms(n, m, parity, p, a, k_max)?;
    let r = p.r();
    let ratio = if r < a { r / a } else { a / r };
    let pref = 2.0 * if m.is_multiple_of(2) { 1.0 } else { -1.0 } * (m as f64 * p.phi()).cos();
    let mut acc = CompensatedSum::new();
    for t in &terms {
        acc.add(*t);
    }
    // parity zeros alternate, so look back over the last few terms
    let last = terms.iter().rev().take(4).fold(0.0f64, |acc, t| acc.max(t.abs()));
    let tail = if ratio < 1.0 {
        last * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    let est = (tail + 4.0 * f64::EPSILON * acc.max_term() * terms.len() as f64) * pref.abs().max(2.0);
    Ok(EvalResult {
        value: pref * acc.value(),
        converged: est <= tol,
        terms_used: terms.len(),
        est_error: est,
    })
}

/// A solid spherical harmonic `(r/a)^n P_n^m(u) cos(m phi)` or
/// `(a/r)^{n+1} P_n^m(u) cos(m phi)` summed as a series of standard axial
/// toroidal harmonics `Delta Q_{k-1/2}^m(beta) trig(k eta)`, `k = 0..=k_max`.
/// `est_error` is absolute.
pub fn spherical_via_toroidal(
    n: u32,
    m: u32,
    regularity: Regularity,
    p: &CartesianPoint,
    a: f64,
    k_max: u32,
    tol: f64,
) -> Result<ToroidalSeries> {
    if m > n {
        return Err(Error::InvalidArgument(format!("order {m} exceeds degree {n}")));
    }
    let t = to_toroidal(p, a)?;
    if t.on_axis {
        return Err(Error::NotConverged(
            "the toroidal series diverges on the z-axis and at infinity (xi = 0)".into(),
        ));
    }
    let k_max = k_max.max(1);
    let table = build_table(m, k_max, n.max(1))?;
    let even = (n + m).is_multiple_of(2);
    let irregular = regularity == Regularity::Irregular;
    let opts = SeriesOptions::default();
    let mut acc = CompensatedSum::new();
    let mut recent = [0.0f64; 3];
    let mut terms = 0;
    for k in 0..=k_max {
        if !even && k == 0 {
            continue;
        }
        let q = q_half_series(k, m, t.beta, &opts)?;
        let (c_neg, s_neg) = table.neg_m_ext(k, n);
        let sigma = if irregular && k % 2 == 1 { -1.0 } else { 1.0 };
        let kf = k as f64;
        let term = if even {
            (c_neg * q.value).to_f64() * neumann(k as usize) * sigma * (kf * t.eta).cos()
        } else {
            (s_neg * q.value).to_f64() * sigma * (kf * t.eta).sin()
        };
        acc.add(term);
        recent.rotate_left(1);
        recent[2] = term.abs();
        terms += 1;
    }
    let outer = if even {
        legendre_zero_positive(n, m)
    } else {
        2.0 * legendre_zero_positive(n + 1, m) * if irregular { 1.0 } else { -1.0 }
    };
    let sign_m = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pref = t.delta / PI * sign_m * outer * (m as f64 * t.phi).cos();
    let q_ratio = (-t.xi).exp();
    let last = recent.iter().fold(0.0f64, |x, y| x.max(*y));
    let tail = last * q_ratio / (1.0 - q_ratio);
    let cancellation = acc.cancellation();
    let rounding = 4.0 * f64::EPSILON * acc.max_term().max(acc.value().abs() * cancellation) * (terms as f64).sqrt();
    let est = (tail + rounding) * pref.abs();
    Ok(ToroidalSeries {
        result: EvalResult {
            value: pref * acc.value(),
            converged: est <= tol,
            terms_used: terms,
            est_error: est,
        },
        cancellation,
        slow: cancellation > CANCELLATION_LIMIT,
    })
}

/// `P_n^m(0)` with positive order.
fn legendre_zero_positive(n: u32, m: u32) -> f64 {
    assoc_legendre(n, m as i32, 0.0)
}

/// Spherical-harmonic series for any ring harmonic; alternate harmonics are
/// rescaled from the standard ones. Axial harmonics have no such series.
pub fn expand_harmonic(spec: &HarmonicSpec, p: &CartesianPoint, a: f64, k_max: u32, tol: f64) -> Result<EvalResult> {
    if spec.kind == Kind::Axial {
        return Err(Error::NoSphericalExpansion);
    }
    let standard = ring_via_spherical(spec.n, spec.m, spec.parity, p, a, k_max, tol)?;
    match spec.family {
        Family::Standard => Ok(standard),
        Family::Alternate => {
            let w = whipple_factor(Kind::Ring, spec.n, spec.m).to_f64();
            Ok(EvalResult {
                value: standard.value / w,
                est_error: standard.est_error / w.abs(),
                converged: standard.est_error / w.abs() <= tol,
                ..standard
            })
        }
    }
}
