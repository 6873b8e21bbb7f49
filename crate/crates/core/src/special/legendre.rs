//! Legendre functions of half-integer degree (toroidal functions) for
//! arguments `x > 1`, and integer-degree associated Legendre functions on
//! `[-1, 1]`.
//!
//! Conventions: `P_{n-1/2}^m(x) = (x^2-1)^{m/2} d^m/dx^m P_{n-1/2}(x)` and
//! likewise for `Q`, so `P^m > 0` and `Q^m` carries the sign `(-1)^m`. The
//! integer-degree `P_n^m(u)` has no Condon-Shortley phase.
//!
//! Both half-integer series have positive terms. With `t = (x-1)/(x+1)`,
//!
//! ```text
//! P_{n-1/2}^m(x) = sqrt(2 pi) (x^2-1)^{m/2} (x+1)^{-n-m-1/2} / (Γ(n-m+1/2) (2n-1)!!)
//!                  * Σ_k (2(n+m+k)-1)!! (2(n+k)-1)!! / (k! (m+k)! 2^m 4^k) t^k
//! Q_{n-1/2}^m(x) = pi (-1)^m (x^2-1)^{m/2} / (2x)^{n+m+1/2}
//!                  * Σ_k (4k+2n+2m-1)!! / ((2k)!! (2k+2n)!!) (2x)^{-2k}
//! ```
//!
//! The `P` series converges like `t^k`, fast near `x = 1`; the `Q` series like
//! `x^{-2k}`, fast for large `x` and slowly as `x -> 1`.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::RwLock;

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::numeric::{ln_double_factorial, ln_factorial, CompensatedSum, ExtF64};
use crate::special::EvalResult;

/// Hard cap on the number of series terms in double precision.
pub const MAX_SERIES_TERMS: usize = 20_000_000;

/// Controls for the half-integer series.
#[derive(Clone, Copy, Debug)]
pub struct SeriesOptions {
    /// Requested relative tolerance; values below `4 eps` are raised to `4 eps`.
    pub tol: f64,
    pub max_terms: usize,
    /// Estimated digits lost in double precision above which the series is
    /// re-summed in 256-bit arithmetic.
    pub fallback_digits: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            tol: 1e-14,
            max_terms: MAX_SERIES_TERMS,
            fallback_digits: 6.0,
        }
    }
}

impl SeriesOptions {
    pub fn with_tol(tol: f64) -> Self {
        SeriesOptions {
            tol,
            ..Default::default()
        }
    }
}

/// A half-integer Legendre value that may lie outside the `f64` range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfValue {
    pub value: ExtF64,
    pub terms_used: usize,
    /// Relative error estimate.
    pub est_error: f64,
    pub converged: bool,
    pub extended: bool,
}

impl HalfValue {
    fn exact(value: ExtF64) -> Self {
        HalfValue {
            value,
            terms_used: 0,
            est_error: 0.0,
            converged: true,
            extended: false,
        }
    }

    pub fn to_eval(self) -> EvalResult {
        EvalResult {
            value: self.value.to_f64(),
            converged: self.converged,
            terms_used: self.terms_used,
            est_error: self.est_error,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    P,
    Q,
}

/// One of the two series above, normalized so the leading term is 1.
#[derive(Clone, Copy, Debug)]
struct HalfSeries {
    family: Family,
    n: u64,
    m: u64,
}

impl HalfSeries {
    /// Numerator and denominator of `term_{k+1} / term_k`, excluding the
    /// power of the series variable.
    fn ratio_parts(&self, k: u64) -> (u128, u128) {
        let (n, m, k) = (self.n as u128, self.m as u128, k as u128);
        match self.family {
            Family::P => ((2 * (n + m + k) + 1) * (2 * (n + k) + 1), 4 * (k + 1) * (m + k + 1)),
            Family::Q => {
                let a = 2 * n + 2 * m;
                ((4 * k + a + 1) * (4 * k + a + 3), 4 * (2 * k + 2) * (2 * k + 2 * n + 2))
            }
        }
    }

    fn variable(&self, x: f64) -> f64 {
        match self.family {
            Family::P => (x - 1.0) / (x + 1.0),
            Family::Q => 1.0 / (x * x),
        }
    }

    fn variable_big(&self, x: f64) -> BigFloat {
        let bx = BigFloat::from_f64(x);
        let one = BigFloat::from_i64(1);
        match self.family {
            Family::P => bx.sub(&one).div(&bx.add(&one)),
            Family::Q => one.div(&bx.mul(&bx)),
        }
    }

    /// Sign and log-magnitude of everything outside the normalized sum.
    fn ln_prefactor(&self, x: f64) -> (f64, f64) {
        let (n, m) = (self.n as f64, self.m as f64);
        let ln_xm1 = (x - 1.0).ln();
        let ln_xp1 = (x + 1.0).ln();
        match self.family {
            Family::P => {
                let j = self.n as i64 - self.m as i64;
                let (g_sign, g_ln) = ln_gamma_half(j);
                let ln = 0.5 * (2.0 * PI).ln() + if self.m > 0 { 0.5 * m * (ln_xm1 + ln_xp1) } else { 0.0 }
                    - (n + m + 0.5) * ln_xp1
                    + ln_double_factorial(2 * (self.n + self.m) as i64 - 1)
                    - g_ln
                    - ln_factorial(self.m)
                    - m * LN_2;
                (g_sign, ln)
            }
            Family::Q => {
                let sign = if self.m.is_multiple_of(2) { 1.0 } else { -1.0 };
                let ln = PI.ln() + if self.m > 0 { 0.5 * m * (ln_xm1 + ln_xp1) } else { 0.0 }
                    - (n + m + 0.5) * (2.0 * x).ln()
                    + ln_double_factorial(2 * (self.n + self.m) as i64 - 1)
                    - n * LN_2
                    - ln_factorial(self.n);
                (sign, ln)
            }
        }
    }

    /// Sums `Σ_k τ_k` with `τ_0 = 1` in double precision. Returns the sum as
    /// an extended value, the number of terms, the relative tail bound, and
    /// whether the budget was exhausted.
    fn sum_f64(&self, x: f64, max_terms: usize) -> (ExtF64, usize, f64, bool) {
        let t = self.variable(x);
        let mut acc = CompensatedSum::new();
        let mut term = 1.0f64;
        let mut scale_exp: i64 = 0;
        let mut k: u64 = 0;
        loop {
            acc.add(term);
            let (num, den) = self.ratio_parts(k);
            let ratio = num as f64 / den as f64 * t;
            let next = term * ratio;
            let (num1, den1) = self.ratio_parts(k + 1);
            let q = (num1 as f64 / den1 as f64 * t).max(t);
            let sum = acc.value();
            if q < 1.0 {
                let tail = next / (1.0 - q);
                if tail <= 0.25 * f64::EPSILON * sum {
                    let total = ExtF64::new(sum).ldexp(scale_exp);
                    return (total, k as usize + 1, tail / sum, false);
                }
            }
            if k as usize + 1 >= max_terms {
                let total = ExtF64::new(sum).ldexp(scale_exp);
                let tail = if q < 1.0 { next / (1.0 - q) / sum } else { f64::INFINITY };
                return (total, k as usize + 1, tail, true);
            }
            term = next;
            if sum > 1e250 {
                // rescale running sum and term together
                let s = acc.value() * 2f64.powi(-700);
                acc = CompensatedSum::new();
                acc.add(s);
                term *= 2f64.powi(-700);
                scale_exp += 700;
            }
            k += 1;
        }
    }

    /// Sums the same normalized series in 256-bit arithmetic, running at
    /// least `min_terms` terms.
    fn sum_big(&self, x: f64, min_terms: usize, max_terms: usize) -> (BigFloat, usize, bool) {
        let t = self.variable_big(x);
        let t_f = self.variable(x);
        let mut term = BigFloat::from_i64(1);
        let mut sum = BigFloat::zero();
        let mut k: u64 = 0;
        loop {
            sum = sum.add(&term);
            let (num, den) = self.ratio_parts(k);
            term = term.mul_int(num).div_int(den).mul(&t);
            let (num1, den1) = self.ratio_parts(k + 1);
            let q = (num1 as f64 / den1 as f64 * t_f).max(t_f);
            let count = k as usize + 1;
            if count >= min_terms && q < 1.0 {
                let bits = 240 + (1.0 / (1.0 - q)).log2().ceil() as i64;
                if term.negligible_against(&sum, bits) {
                    return (sum, count, false);
                }
            }
            if count >= max_terms {
                return (sum, count, true);
            }
            k += 1;
        }
    }

    fn evaluate(&self, x: f64, opts: &SeriesOptions) -> Result<HalfValue> {
        let (sign, ln_pref) = self.ln_prefactor(x);
        let pref = ExtF64::from_ln(sign, ln_pref);
        let (sum, terms, tail, exhausted) = self.sum_f64(x, opts.max_terms);
        if exhausted {
            return Err(Error::TooCloseToSingularity { x });
        }
        // all terms are positive, so the only loss is rounding accumulation
        let lost_digits = 0.5 * (terms as f64).log10();
        let tol = opts.tol.max(4.0 * f64::EPSILON);
        if lost_digits > opts.fallback_digits {
            let (big, big_terms, big_exhausted) = self.sum_big(x, terms.min(opts.max_terms), opts.max_terms);
            if big_exhausted {
                return Err(Error::TooCloseToSingularity { x });
            }
            let est = 4.0 * f64::EPSILON * (1.0 + ln_pref.abs() * 0.25);
            return Ok(HalfValue {
                value: pref * big.to_ext(),
                terms_used: big_terms,
                est_error: est,
                converged: est <= tol,
                extended: true,
            });
        }
        // prefactor rounding grows with |ln|
        let est = tail.max(0.0) + 2.0 * f64::EPSILON * (1.0 + lost_digits) + f64::EPSILON * (1.0 + ln_pref.abs());
        Ok(HalfValue {
            value: pref * sum,
            terms_used: terms,
            est_error: est,
            converged: est <= tol,
            extended: false,
        })
    }
}

/// Sign and `ln|Γ(j + 1/2)|` for integer `j`.
fn ln_gamma_half(j: i64) -> (f64, f64) {
    let ln_sqrt_pi = 0.5 * PI.ln();
    if j >= 0 {
        let mut ln = ln_sqrt_pi;
        for i in 0..j {
            ln += (i as f64 + 0.5).ln();
        }
        (1.0, ln)
    } else {
        let mut ln = ln_sqrt_pi;
        for i in 1..=(-j) {
            ln -= (i as f64 - 0.5).ln();
        }
        (if (-j) % 2 == 0 { 1.0 } else { -1.0 }, ln)
    }
}

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "toroidal functions need x >= 1, got {x}"
        )));
    }
    if x.is_infinite() {
        return Err(Error::InvalidArgument("infinite argument".into()));
    }
    Ok(())
}

/// `P_{n-1/2}^m(x)` summed directly from its series.
pub fn p_half_series(n: u32, m: u32, x: f64, opts: &SeriesOptions) -> Result<HalfValue> {
    check_arg(x)?;
    if x == 1.0 {
        return Ok(HalfValue::exact(if m == 0 { ExtF64::ONE } else { ExtF64::ZERO }));
    }
    HalfSeries {
        family: Family::P,
        n: n as u64,
        m: m as u64,
    }
    .evaluate(x, opts)
}

/// `Q_{n-1/2}^m(x)` summed from its series. `x = 1` is singular.
pub fn q_half_series(n: u32, m: u32, x: f64, opts: &SeriesOptions) -> Result<HalfValue> {
    check_arg(x)?;
    if x == 1.0 {
        return Err(Error::TooCloseToSingularity { x });
    }
    HalfSeries {
        family: Family::Q,
        n: n as u64,
        m: m as u64,
    }
    .evaluate(x, opts)
}

/// The normalized `P` or `Q` sum in 256-bit arithmetic, for oracle use.
pub(crate) fn half_series_sum_big(is_p: bool, n: u32, m: u32, x: f64, min_terms: usize) -> Result<(BigFloat, usize)> {
    let s = HalfSeries {
        family: if is_p { Family::P } else { Family::Q },
        n: n as u64,
        m: m as u64,
    };
    let (sum, terms, exhausted) = s.sum_big(x, min_terms, 10 * MAX_SERIES_TERMS);
    if exhausted {
        return Err(Error::TooCloseToSingularity { x });
    }
    Ok((sum, terms))
}

/// `P_{n-1/2}^m(x)` for `n = 0..=n_max`, seeded by the series at `n = 0, 1`
/// and continued by the forward degree recurrence
/// `(n+1/2-m) P_{n+1/2} = 2 n x P_{n-1/2} - (n-1/2+m) P_{n-3/2}`.
pub fn p_half_sequence(m: u32, n_max: u32, x: f64, opts: &SeriesOptions) -> Result<Vec<HalfValue>> {
    check_arg(x)?;
    let p0 = p_half_series(0, m, x, opts)?;
    let mut out = vec![p0];
    if n_max == 0 {
        return Ok(out);
    }
    let p1 = p_half_series(1, m, x, opts)?;
    out.push(p1);
    if x == 1.0 {
        for _ in 2..=n_max {
            out.push(p0);
        }
        return Ok(out);
    }
    let seed_err = p0.est_error.max(p1.est_error);
    let converged = p0.converged && p1.converged;
    let terms = p0.terms_used + p1.terms_used;
    let scale = if p1.value.is_zero() {
        ExtF64::ONE
    } else {
        p1.value.abs()
    };
    let mut prev = (p0.value / scale).to_f64();
    let mut cur = (p1.value / scale).to_f64();
    let mut scale = scale;
    let mf = m as f64;
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 * nf * x * cur - (nf - 0.5 + mf) * prev) / (nf + 0.5 - mf);
        prev = cur;
        cur = next;
        if cur.abs() > 1e200 {
            let s = ExtF64::new(cur.abs());
            prev = (ExtF64::new(prev) / s).to_f64();
            cur = (ExtF64::new(cur) / s).to_f64();
            scale = scale * s;
        }
        out.push(HalfValue {
            value: ExtF64::new(cur) * scale,
            terms_used: terms,
            est_error: seed_err + 4.0 * f64::EPSILON * (n as f64 + 1.0),
            converged,
            extended: false,
        });
    }
    Ok(out)
}

/// `P_{n-1/2}^m(x)`: series for `n <= 1`, forward recurrence above.
pub fn legendre_p_half(n: u32, m: u32, x: f64, tol: f64) -> Result<EvalResult> {
    Ok(legendre_p_half_ext(n, m, x, tol)?.to_eval())
}

pub fn legendre_p_half_ext(n: u32, m: u32, x: f64, tol: f64) -> Result<HalfValue> {
    let opts = SeriesOptions::with_tol(tol);
    if n <= 1 {
        return p_half_series(n, m, x, &opts);
    }
    let mut seq = p_half_sequence(m, n, x, &opts)?;
    let mut v = seq.pop().expect("non-empty sequence");
    v.converged = v.est_error <= tol.max(4.0 * f64::EPSILON);
    Ok(v)
}

/// `Q_{n-1/2}^m(x)`, always from its own series (the forward recurrence in
/// `n` is unstable for this decaying solution).
pub fn legendre_q_half(n: u32, m: u32, x: f64, tol: f64) -> Result<EvalResult> {
    Ok(q_half_series(n, m, x, &SeriesOptions::with_tol(tol))?.to_eval())
}

/// `Q_{n-1/2}^{-m}(x) = (-1)^m Γ(n-m+1/2)/Γ(n+m+1/2) Q_{n-1/2}^m(x)`.
pub fn q_half_neg_order(n: u32, m: u32, x: f64, opts: &SeriesOptions) -> Result<HalfValue> {
    let mut v = q_half_series(n, m, x, opts)?;
    let mut g = crate::numeric::gamma_half_ratio(n as i64, m as i64);
    if m % 2 == 1 {
        g = -g;
    }
    v.value = v.value * g;
    Ok(v)
}

/// Memo table for `Q_{n-1/2}^m(x)`, safe to share between threads.
#[derive(Debug, Default)]
pub struct QCache {
    map: RwLock<HashMap<(u32, u32, u64), HalfValue>>,
}

impl QCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: u32, m: u32, x: f64) -> Result<HalfValue> {
        let key = (n, m, x.to_bits());
        if let Some(v) = self.map.read().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let v = q_half_series(n, m, x, &SeriesOptions::default())?;
        self.map.write().expect("cache lock").insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `P_n^m(u)` without the Condon-Shortley phase, for `|m| <= n` and
/// `|u| <= 1`; negative orders use
/// `P_n^{-m} = (-1)^m (n-m)!/(n+m)! P_n^m`.
pub fn assoc_legendre(n: u32, m: i32, u: f64) -> f64 {
    let am = m.unsigned_abs();
    if am > n {
        return 0.0;
    }
    let row = assoc_legendre_row(am, n, u);
    let v = row[n as usize];
    if m >= 0 {
        v
    } else {
        let mut ratio = 1.0;
        for k in (n - am + 1)..=(n + am) {
            ratio /= k as f64;
        }
        if am % 2 == 1 {
            -ratio * v
        } else {
            ratio * v
        }
    }
}

/// `P_k^m(u)` for `k = 0..=k_max` (zero for `k < m`).
pub fn assoc_legendre_row(m: u32, k_max: u32, u: f64) -> Vec<f64> {
    let mut out = vec![0.0; k_max as usize + 1];
    if m > k_max {
        return out;
    }
    let s = ((1.0 - u) * (1.0 + u)).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 1..=m {
        pmm *= (2 * i - 1) as f64 * s;
    }
    out[m as usize] = pmm;
    if m == k_max {
        return out;
    }
    let mut p_prev = pmm;
    let mut p_cur = u * (2 * m + 1) as f64 * pmm;
    out[m as usize + 1] = p_cur;
    for l in (m + 2)..=k_max {
        let next = ((2 * l - 1) as f64 * u * p_cur - (l + m - 1) as f64 * p_prev) / (l - m) as f64;
        p_prev = p_cur;
        p_cur = next;
        out[l as usize] = p_cur;
    }
    out
}

/// `P_k^{-m}(0)`: zero when `k + m` is odd, otherwise
/// `(-1)^{(k+m)/2} (k-m-1)!! / (k+m)!!`. Returns 0 for `k < m`, which never
/// enters the expansions.
pub fn legendre_zero(k: u32, m: u32) -> f64 {
    if k < m || (k + m) % 2 == 1 {
        return 0.0;
    }
    let half_sum = (k + m) / 2;
    let half_diff = (k - m) / 2;
    let mut v = 1.0;
    for i in 0..half_sum {
        v /= (k + m - 2 * i) as f64;
        if i < half_diff {
            v *= (k - m - 1 - 2 * i) as f64;
        }
    }
    if half_sum % 2 == 1 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // mpmath legenp/legenq (type 3) at 40 digits
    const P_REF: [(u32, u32, f64, f64); 4] = [
        (0, 0, 1.8, 0.917_699_100_461_866_3),
        (2, 1, 1.8, 3.671_832_527_537_225),
        (3, 2, 2.5, 60.070_675_708_326_72),
        (1, 0, 1.3, 1.107_644_334_760_956_8),
    ];
    const Q_REF: [(u32, u32, f64, f64); 4] = [
        (0, 0, 1.8, 1.772_268_478_700_450_3),
        (2, 1, 1.8, -0.160_544_862_606_914_64),
        (3, 2, 2.5, 0.068_496_500_320_103_79),
        (1, 0, 1.3, 0.553_648_546_643_905),
    ];

    #[test]
    fn p_matches_reference_values() {
        for (n, m, x, want) in P_REF {
            let got = legendre_p_half(n, m, x, 1e-14).unwrap();
            assert!(got.converged);
            assert!(rel(got.value, want) < 1e-14, "P({n},{m},{x}) = {}", got.value);
        }
    }

    #[test]
    fn q_matches_reference_values() {
        for (n, m, x, want) in Q_REF {
            let got = legendre_q_half(n, m, x, 1e-14).unwrap();
            assert!(got.converged);
            assert!(rel(got.value, want) < 1e-14, "Q({n},{m},{x}) = {}", got.value);
        }
    }

    #[test]
    fn p_at_one() {
        assert_eq!(legendre_p_half(0, 0, 1.0, 1e-14).unwrap().value, 1.0);
        assert_eq!(legendre_p_half(3, 0, 1.0, 1e-14).unwrap().value, 1.0);
        assert_eq!(legendre_p_half(3, 2, 1.0, 1e-14).unwrap().value, 0.0);
        let near = legendre_p_half(0, 0, 1.0 + 1e-9, 1e-14).unwrap();
        assert!((near.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn q_far_field_limit() {
        let x = 1e6;
        let v = legendre_q_half(0, 0, x, 1e-14).unwrap().value;
        assert!((v * (2.0 * x).sqrt() - PI).abs() < 1e-10);
    }

    #[test]
    fn q_rejects_one_and_budget() {
        assert!(matches!(
            legendre_q_half(0, 0, 1.0, 1e-12),
            Err(Error::TooCloseToSingularity { .. })
        ));
        assert!(matches!(
            legendre_q_half(0, 0, 1.0 + 1e-8, 1e-12),
            Err(Error::TooCloseToSingularity { .. })
        ));
        assert!(matches!(
            legendre_q_half(0, 0, 0.5, 1e-12),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn q_slow_convergence_near_one() {
        let v = legendre_q_half(1, 0, 1.0 + 1e-4, 1e-12).unwrap();
        assert!(v.converged);
        assert!(v.terms_used > 10_000);
        assert!(v.value.is_finite() && v.value > 0.0);
    }

    #[test]
    fn extended_fallback_agrees_with_double() {
        let forced = SeriesOptions {
            fallback_digits: 0.0,
            ..Default::default()
        };
        for (n, m, x, want) in Q_REF {
            let v = q_half_series(n, m, x, &forced).unwrap();
            assert!(v.extended);
            assert!(rel(v.value.to_f64(), want) < 1e-14);
        }
        for (n, m, x, want) in P_REF {
            let v = p_half_series(n, m, x, &forced).unwrap();
            assert!(v.extended);
            assert!(rel(v.value.to_f64(), want) < 1e-14);
        }
    }

    #[test]
    fn recurrence_matches_series() {
        let opts = SeriesOptions::default();
        for m in 0..6 {
            for &x in &[1.2, 2.0, 3.5, 5.0] {
                let seq = p_half_sequence(m, 30, x, &opts).unwrap();
                for n in 0..=30u32 {
                    let direct = p_half_series(n, m, x, &opts).unwrap().value.to_f64();
                    let r = seq[n as usize].value.to_f64();
                    assert!(rel(r, direct) < 1e-11, "n={n} m={m} x={x}: {r} vs {direct}");
                }
            }
        }
    }

    #[test]
    fn high_degree_values_leave_f64_range() {
        let v = legendre_p_half_ext(600, 0, 10.0, 1e-12).unwrap();
        assert!(v.value.to_f64().is_infinite());
        assert!(v.value.ln_abs() > 700.0);
        let q = q_half_series(600, 0, 10.0, &SeriesOptions::default()).unwrap();
        assert!(q.value.to_f64() == 0.0);
        assert!(q.value.ln_abs() < -700.0);
    }

    #[test]
    fn assoc_legendre_values() {
        assert_eq!(assoc_legendre(1, 0, 0.3), 0.3);
        assert!((assoc_legendre(2, 0, 0.5) + 0.125).abs() < 1e-16);
        assert!((assoc_legendre(1, 1, 0.6) - 0.8).abs() < 1e-15);
        let u = 0.37;
        let p = assoc_legendre(4, 2, u);
        let pn = assoc_legendre(4, -2, u);
        assert!((pn - p * 2.0 / 720.0).abs() < 1e-15);
        assert!((assoc_legendre(3, 2, u) - 15.0 * u * (1.0 - u * u)).abs() < 1e-14);
    }

    #[test]
    fn legendre_at_zero() {
        assert_eq!(legendre_zero(0, 0), 1.0);
        assert_eq!(legendre_zero(1, 0), 0.0);
        assert_eq!(legendre_zero(2, 0), -0.5);
        assert_eq!(legendre_zero(4, 0), 3.0 / 8.0);
        for k in 0..12u32 {
            for m in 0..=k {
                let direct = assoc_legendre(k, -(m as i32), 0.0);
                assert!((legendre_zero(k, m) - direct).abs() < 1e-15, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn cache_is_shared() {
        let cache = QCache::new();
        let a = cache.get(2, 1, 1.5).unwrap();
        let b = cache.get(2, 1, 1.5).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
    }
}
