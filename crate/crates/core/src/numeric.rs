//! Floating-point helpers shared by the series evaluators.
//!
//! [`ExtF64`] carries an `f64` mantissa with a separate binary exponent so that
//! Legendre functions of high degree and the expansion coefficients can exceed
//! the `f64` range without losing mantissa precision.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A real number stored as `mant * 2^exp` with `0.5 <= |mant| < 1` (or zero).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtF64 {
    mant: f64,
    exp: i64,
}

impl ExtF64 {
    pub const ZERO: ExtF64 = ExtF64 { mant: 0.0, exp: 0 };
    pub const ONE: ExtF64 = ExtF64 { mant: 0.5, exp: 1 };

    pub fn new(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return ExtF64 { mant: x, exp: 0 };
        }
        let (m, e) = libm::frexp(x);
        ExtF64 { mant: m, exp: e as i64 }
    }

    fn from_parts(mant: f64, exp: i64) -> Self {
        let mut v = ExtF64::new(mant);
        if v.mant != 0.0 && v.mant.is_finite() {
            v.exp += exp;
        }
        v
    }

    /// Builds `sign * exp(ln_abs)`.
    pub fn from_ln(sign: f64, ln_abs: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY || sign == 0.0 {
            return ExtF64::ZERO;
        }
        let e2 = (ln_abs / LN_2).floor();
        let mant = (ln_abs - e2 * LN_2).exp() * sign.signum();
        ExtF64::from_parts(mant, e2 as i64)
    }

    /// `self * 2^e`, exact.
    pub fn ldexp(self, e: i64) -> Self {
        ExtF64::from_parts(self.mant, self.exp + e)
    }

    pub fn to_f64(self) -> f64 {
        if self.mant == 0.0 || !self.mant.is_finite() {
            return self.mant;
        }
        if self.exp > 1100 {
            return f64::INFINITY.copysign(self.mant);
        }
        if self.exp < -1100 {
            return 0.0f64.copysign(self.mant);
        }
        libm::ldexp(self.mant, self.exp as i32)
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.mant.is_finite()
    }

    pub fn signum(self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum()
        }
    }

    pub fn abs(self) -> Self {
        ExtF64 {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(self) -> f64 {
        if self.mant == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.mant.abs().ln() + self.exp as f64 * LN_2
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = self;
        let mut acc = ExtF64::ONE;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        if n < 0 {
            ExtF64::ONE / acc
        } else {
            acc
        }
    }

    pub fn cmp_abs(self, other: ExtF64) -> Ordering {
        if self.mant == 0.0 || other.mant == 0.0 {
            return self.mant.abs().total_cmp(&other.mant.abs());
        }
        self.exp
            .cmp(&other.exp)
            .then(self.mant.abs().total_cmp(&other.mant.abs()))
    }
}

impl From<f64> for ExtF64 {
    fn from(x: f64) -> Self {
        ExtF64::new(x)
    }
}

impl Mul for ExtF64 {
    type Output = ExtF64;
    fn mul(self, rhs: ExtF64) -> ExtF64 {
        ExtF64::from_parts(self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl Mul<f64> for ExtF64 {
    type Output = ExtF64;
    fn mul(self, rhs: f64) -> ExtF64 {
        self * ExtF64::new(rhs)
    }
}

impl Div for ExtF64 {
    type Output = ExtF64;
    fn div(self, rhs: ExtF64) -> ExtF64 {
        ExtF64::from_parts(self.mant / rhs.mant, self.exp - rhs.exp)
    }
}

impl Div<f64> for ExtF64 {
    type Output = ExtF64;
    fn div(self, rhs: f64) -> ExtF64 {
        self / ExtF64::new(rhs)
    }
}

impl Add for ExtF64 {
    type Output = ExtF64;
    fn add(self, rhs: ExtF64) -> ExtF64 {
        if self.mant == 0.0 {
            return rhs;
        }
        if rhs.mant == 0.0 {
            return self;
        }
        let (big, small) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let shift = big.exp - small.exp;
        if shift > 60 {
            return big;
        }
        ExtF64::from_parts(big.mant + libm::ldexp(small.mant, -(shift as i32)), big.exp)
    }
}

impl Neg for ExtF64 {
    type Output = ExtF64;
    fn neg(self) -> ExtF64 {
        ExtF64 {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl Sub for ExtF64 {
    type Output = ExtF64;
    fn sub(self, rhs: ExtF64) -> ExtF64 {
        self + (-rhs)
    }
}

/// Neumaier's variant of Kahan summation, with the running extremes of the
/// partial sums kept for cancellation diagnostics.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    max_partial: f64,
    max_term: f64,
    count: usize,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.count += 1;
        self.max_term = self.max_term.max(x.abs());
        self.max_partial = self.max_partial.max((self.sum + self.comp).abs());
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn max_term(&self) -> f64 {
        self.max_term
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Ratio of the largest partial sum to the final sum; `1` means no
    /// cancellation, `10^d` means roughly `d` digits were lost.
    pub fn cancellation(&self) -> f64 {
        let v = self.value().abs();
        let peak = self.max_partial.max(self.max_term);
        if peak == 0.0 {
            1.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            (peak / v).max(1.0)
        }
    }
}

/// Neumann factor: 1 for index 0, 2 otherwise.
#[inline]
pub fn neumann(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        2.0
    }
}

/// `n!!` with `n!! = 1` for `n <= 0` (so `(-1)!! = 1`).
pub fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

pub fn ln_double_factorial(n: i64) -> f64 {
    let mut acc = 0.0;
    let mut k = n;
    while k > 1 {
        acc += (k as f64).ln();
        k -= 2;
    }
    acc
}

pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `Γ(j + 1/2)` for any integer `j`, as an [`ExtF64`].
pub fn gamma_half_int_ext(j: i64) -> ExtF64 {
    let mut acc = ExtF64::new(PI.sqrt());
    if j >= 0 {
        for i in 0..j {
            acc = acc * (i as f64 + 0.5);
        }
    } else {
        for i in 1..=(-j) {
            acc = acc / (0.5 - i as f64);
        }
    }
    acc
}

/// `Γ(j + 1/2)` for any integer `j`.
pub fn gamma_half_int(j: i64) -> f64 {
    gamma_half_int_ext(j).to_f64()
}

/// `√π / Γ(j + 1/2)`, the normalization that turns `C, S` into `c, s`.
pub fn sqrt_pi_over_gamma_half(j: i64) -> ExtF64 {
    let mut acc = ExtF64::ONE;
    if j >= 0 {
        for i in 0..j {
            acc = acc / (i as f64 + 0.5);
        }
    } else {
        for i in 1..=(-j) {
            acc = acc * (0.5 - i as f64);
        }
    }
    acc
}

/// `Γ(k - m + 1/2) / Γ(k + m + 1/2)` for integer `k` and `m >= 0`.
pub fn gamma_half_ratio(k: i64, m: i64) -> ExtF64 {
    let mut acc = ExtF64::ONE;
    for i in (k - m)..(k + m) {
        acc = acc / (i as f64 + 0.5);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_roundtrip_and_range() {
        for &x in &[1.0, -3.5, 1e-300, 7.25e200, -0.1] {
            assert_eq!(ExtF64::new(x).to_f64(), x);
        }
        let big = ExtF64::new(1e300) * ExtF64::new(1e300);
        assert!(big.to_f64().is_infinite());
        assert!((big.ln_abs() - 600.0 * 10f64.ln()).abs() < 1e-10);
        let back = big / ExtF64::new(1e300);
        assert!((back.to_f64() / 1e300 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ext_add_aligns_exponents() {
        let a = ExtF64::new(1.0) + ExtF64::new(2f64.powi(-40));
        assert_eq!(a.to_f64(), 1.0 + 2f64.powi(-40));
        let z = ExtF64::new(3.0) - ExtF64::new(3.0);
        assert!(z.is_zero());
    }

    #[test]
    fn ext_from_ln() {
        let v = ExtF64::from_ln(-1.0, 2.0f64.ln() * 5.0);
        assert!((v.to_f64() + 32.0).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-12).abs() < 1e-20);
        assert!(s.cancellation() > 1e11);
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), 1.0);
        assert_eq!(double_factorial(0), 1.0);
        assert_eq!(double_factorial(5), 15.0);
        assert_eq!(double_factorial(6), 48.0);
        assert!((ln_double_factorial(7) - 105f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn half_integer_gamma() {
        let sp = PI.sqrt();
        assert!((gamma_half_int(0) - sp).abs() < 1e-15);
        assert!((gamma_half_int(2) - 0.75 * sp).abs() < 1e-15);
        assert!((gamma_half_int(-2) - 4.0 * sp / 3.0).abs() < 1e-15);
        assert!((gamma_half_int(-1) + 2.0 * sp).abs() < 1e-15);
        let r = gamma_half_ratio(3, 2).to_f64();
        assert!((r - gamma_half_int(1) / gamma_half_int(5)).abs() < 1e-15);
        assert!((sqrt_pi_over_gamma_half(-1).to_f64() + 0.5).abs() < 1e-16);
    }
}
