//! Independent reference values: the half-integer series summed entirely in
//! 256-bit arithmetic, and the ring-charge integral by quadrature.

use std::f64::consts::PI;

use num_bigint::BigInt;

use crate::bigfloat::{big_double_factorial, big_factorial, BigFloat};
use crate::coords::CartesianPoint;
use crate::error::{Error, Result};
use crate::numeric::double_factorial;
use crate::special::half_series_sum_big;
use crate::special::quadrature::integrate;

/// Minimum number of terms summed by the extended-precision oracles.
pub const ORACLE_MIN_TERMS: usize = 300;

fn check(x: f64) -> Result<()> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("oracle needs finite x > 1, got {x}")));
    }
    Ok(())
}

/// `(x^2 - 1)^{m/2}` and `(x+1)^{-1/2}`-style powers in big arithmetic.
fn half_power(base: &BigFloat, twice_exp: i64) -> BigFloat {
    let whole = base.powi((twice_exp.unsigned_abs() / 2) as u32);
    let v = if twice_exp.unsigned_abs() % 2 == 1 {
        whole.mul(&base.sqrt())
    } else {
        whole
    };
    if twice_exp < 0 {
        BigFloat::from_i64(1).div(&v)
    } else {
        v
    }
}

/// `Γ(j + 1/2) / sqrt(pi)` as an exact ratio of integers.
fn gamma_half_over_sqrt_pi(j: i64) -> (BigInt, BigInt) {
    if j >= 0 {
        (big_double_factorial(2 * j - 1), BigInt::from(2).pow(j as u32))
    } else {
        let i = -j;
        let num = BigInt::from(-2).pow(i as u32);
        (num, big_double_factorial(2 * i - 1))
    }
}

/// `P_{n-1/2}^m(x)` with every operation in 256-bit arithmetic.
pub fn oracle_p_half(n: u32, m: u32, x: f64) -> Result<f64> {
    check(x)?;
    let (sum, _) = half_series_sum_big(true, n, m, x, ORACLE_MIN_TERMS)?;
    let bx = BigFloat::from_f64(x);
    let one = BigFloat::from_i64(1);
    let xp1 = bx.add(&one);
    let x2m1 = bx.mul(&bx).sub(&one);
    // sqrt(2 pi) / Γ(n-m+1/2) = sqrt(2) / R with R rational; the (2n-1)!!
    // of the prefactor cancels against the leading series term
    let (r_num, r_den) = gamma_half_over_sqrt_pi(n as i64 - m as i64);
    let lead = BigFloat::from_bigint(big_double_factorial(2 * (n + m) as i64 - 1));
    let lead_den = BigFloat::from_bigint(big_factorial(m as u64) * BigInt::from(2).pow(m));
    let pref = BigFloat::from_i64(2)
        .sqrt()
        .mul(&BigFloat::from_bigint(r_den))
        .div(&BigFloat::from_bigint(r_num))
        .mul(&half_power(&x2m1, m as i64))
        .mul(&half_power(&xp1, -(2 * (n + m) as i64 + 1)))
        .mul(&lead)
        .div(&lead_den);
    Ok(pref.mul(&sum).to_f64())
}

/// `Q_{n-1/2}^m(x)` with every operation in 256-bit arithmetic.
pub fn oracle_q_half(n: u32, m: u32, x: f64) -> Result<f64> {
    check(x)?;
    let (sum, _) = half_series_sum_big(false, n, m, x, ORACLE_MIN_TERMS)?;
    let bx = BigFloat::from_f64(x);
    let one = BigFloat::from_i64(1);
    let x2m1 = bx.mul(&bx).sub(&one);
    let two_x = bx.mul_int(2);
    let lead = BigFloat::from_bigint(big_double_factorial(2 * (n + m) as i64 - 1));
    let lead_den = BigFloat::from_bigint(big_factorial(n as u64) * BigInt::from(2).pow(n));
    let mut pref = BigFloat::pi()
        .mul(&half_power(&x2m1, m as i64))
        .mul(&half_power(&two_x, -(2 * (n + m) as i64 + 1)))
        .mul(&lead)
        .div(&lead_den);
    if m % 2 == 1 {
        pref = pref.neg();
    }
    Ok(pref.mul(&sum).to_f64())
}

/// The standard ring harmonic of toroidal order 0 and azimuthal order `m`,
/// as the potential of a ring source with density `cos(m phi')`:
/// `(2m-1)!!/((-2)^m pi) * ∫ cos(m phi') a dphi' / |p - ring(phi')|`.
pub fn oracle_ring_integral(m: u32, p: &CartesianPoint, a: f64, tol: f64) -> Result<f64> {
    let (rho, z, phi) = (p.rho(), p.z, p.phi());
    let r2 = rho * rho + z * z;
    if (rho - a).powi(2) + z * z < (1e-12 * a).powi(2) {
        return Err(Error::FocalRingSingularity {
            distance: ((rho - a).powi(2) + z * z).sqrt(),
        });
    }
    let mf = m as f64;
    let pref = double_factorial(2 * m as i64 - 1) / ((-2f64).powi(m as i32) * PI);
    let integrand = |t: f64| {
        let d2 = r2 + a * a - 2.0 * rho * a * (phi - t).cos();
        (mf * t).cos() * a / d2.sqrt()
    };
    let (v, _) = integrate(integrand, phi - PI, phi + PI, &[phi], tol / pref.abs())?;
    Ok(pref * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{legendre_p_half, legendre_q_half};

    #[test]
    fn oracle_c_agrees_with_double_series() {
        for (n, m, x) in [(2u32, 1u32, 1.8), (3, 2, 1.25), (0, 0, 3.0), (1, 3, 1.1), (4, 0, 7.0)] {
            let p = oracle_p_half(n, m, x).unwrap();
            let q = oracle_q_half(n, m, x).unwrap();
            let pd = legendre_p_half(n, m, x, 1e-14).unwrap().value;
            let qd = legendre_q_half(n, m, x, 1e-14).unwrap().value;
            assert!(((p - pd) / p).abs() < 1e-13, "P {n} {m} {x}: {p} {pd}");
            assert!(((q - qd) / q).abs() < 1e-13, "Q {n} {m} {x}: {q} {qd}");
        }
    }

    #[test]
    fn ring_integral_on_axis() {
        let a = 1.5;
        let z = 0.7;
        let v = oracle_ring_integral(0, &CartesianPoint::new(0.0, 0.0, z), a, 1e-13).unwrap();
        assert!((v - 2.0 * a / (z * z + a * a).sqrt()).abs() < 1e-12);
    }
}
