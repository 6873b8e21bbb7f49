//! Toroidal functions, associated Legendre functions, and direct evaluation
//! of the four families of toroidal harmonics.

mod legendre;
pub mod oracle;
pub mod quadrature;

pub use legendre::{
    assoc_legendre, assoc_legendre_row, legendre_p_half, legendre_p_half_ext, legendre_q_half, legendre_zero,
    p_half_sequence, p_half_series, q_half_neg_order, q_half_series, HalfValue, QCache, SeriesOptions,
    MAX_SERIES_TERMS,
};
pub use oracle::{oracle_p_half, oracle_q_half, oracle_ring_integral};

pub(crate) use legendre::half_series_sum_big;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coords::ToroidalPoint;
use crate::error::{Error, Result};
use crate::numeric::{gamma_half_int, ExtF64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Standard,
    Alternate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Ring,
    Axial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Cos,
    Sin,
}

impl Parity {
    pub fn trig(self, x: f64) -> f64 {
        match self {
            Parity::Cos => x.cos(),
            Parity::Sin => x.sin(),
        }
    }
}

/// One solid toroidal harmonic. `n` is the toroidal order (the multiplier of
/// `eta`), `m` the azimuthal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicSpec {
    pub family: Family,
    pub kind: Kind,
    pub parity: Parity,
    pub n: u32,
    pub m: u32,
}

impl HarmonicSpec {
    pub fn new(family: Family, kind: Kind, parity: Parity, n: u32, m: u32) -> Self {
        HarmonicSpec {
            family,
            kind,
            parity,
            n,
            m,
        }
    }

    pub fn standard_ring(parity: Parity, n: u32, m: u32) -> Self {
        HarmonicSpec::new(Family::Standard, Kind::Ring, parity, n, m)
    }

    /// `sin(0 eta)` makes the whole harmonic vanish.
    pub fn is_identically_zero(&self) -> bool {
        self.parity == Parity::Sin && self.n == 0
    }
}

/// Result of a series evaluation. For special-function values `est_error`
/// is relative; for the expansion series it is absolute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub converged: bool,
    pub terms_used: usize,
    pub est_error: f64,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            converged: true,
            terms_used: 0,
            est_error: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfSign {
    Plus,
    Minus,
}

/// `Γ(n + 1/2)` or `Γ(-n + 1/2)` for `n >= 0`.
pub fn gamma_half(n: u32, sign: HalfSign) -> f64 {
    match sign {
        HalfSign::Plus => gamma_half_int(n as i64),
        HalfSign::Minus => gamma_half_int(-(n as i64)),
    }
}

/// Value of a toroidal harmonic at `t` (focal radius `a`), with azimuthal
/// factor `cos(m phi)`:
///
/// * standard ring: `Delta P_{n-1/2}^m(beta) trig(n eta)`
/// * standard axial: `Delta Q_{n-1/2}^m(beta) trig(n eta)`
/// * alternate ring: `sqrt(a/rho) Q_{m-1/2}^n(chi) trig(n eta)`
/// * alternate axial: `sqrt(a/rho) P_{m-1/2}^n(chi) trig(n eta)`
pub fn harmonic_eval(spec: &HarmonicSpec, t: &ToroidalPoint, a: f64, tol: f64) -> Result<EvalResult> {
    if spec.is_identically_zero() {
        return Ok(EvalResult::exact(0.0));
    }
    let (n, m) = (spec.n, spec.m);
    let (func, prefactor) = match spec.family {
        Family::Standard => {
            let f = match spec.kind {
                Kind::Ring => legendre_p_half_ext(n, m, t.beta, tol)?,
                Kind::Axial => q_half_series(n, m, t.beta, &SeriesOptions::with_tol(tol))?,
            };
            (f, t.delta)
        }
        Family::Alternate => {
            if t.on_axis || !t.chi.is_finite() {
                return Err(Error::AxisPoint);
            }
            let f = match spec.kind {
                Kind::Ring => q_half_series(m, n, t.chi, &SeriesOptions::with_tol(tol))?,
                Kind::Axial => legendre_p_half_ext(m, n, t.chi, tol)?,
            };
            (f, (a / t.rho).sqrt())
        }
    };
    let angular = spec.parity.trig(n as f64 * t.eta) * (m as f64 * t.phi).cos();
    let value = (func.value * prefactor * angular).to_f64();
    let est_error = func.est_error + 4.0 * f64::EPSILON;
    Ok(EvalResult {
        value,
        converged: func.converged,
        terms_used: func.terms_used,
        est_error,
    })
}

/// Factor `w` with `standard = w * alternate` for the harmonic `(n, m)` of
/// the given kind, from the Whipple formulae.
pub fn whipple_factor(kind: Kind, n: u32, m: u32) -> ExtF64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let gamma = crate::numeric::gamma_half_int_ext(n as i64 - m as i64);
    let num = match kind {
        Kind::Ring => 2.0 / PI.sqrt(),
        Kind::Axial => PI * PI.sqrt(),
    };
    ExtF64::new(sign * num) / gamma
}
