//! Minimal binary floating point with a 256-bit mantissa (about 77 decimal
//! digits), enough to re-sum the Legendre series without rounding loss.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::ExtF64;

/// Mantissa precision in bits.
pub const PREC: u64 = 256;

const PI_DIGITS: &str = "31415926535897932384626433832795028841971693993751\
                         05820974944592307816406286208998628034825342117067";

/// `mant * 2^exp`.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        BigFloat { mant: n, exp: 0 }.normalize()
    }

    pub fn from_u128(n: u128) -> Self {
        BigFloat::from_bigint(BigInt::from(n))
    }

    pub fn from_i64(n: i64) -> Self {
        BigFloat::from_bigint(BigInt::from(n))
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "BigFloat::from_f64 needs a finite value");
        if x == 0.0 {
            return BigFloat::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        BigFloat {
            mant: BigInt::from(mant) * sign,
            exp,
        }
        .normalize()
    }

    pub fn pi() -> Self {
        let digits: BigInt = PI_DIGITS.parse().expect("valid digits");
        let scale = BigInt::from(10u32).pow((PI_DIGITS.len() - 1) as u32);
        BigFloat::from_bigint(digits).div(&BigFloat::from_bigint(scale))
    }

    fn normalize(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let bits = self.mant.bits();
        if bits > PREC {
            let sh = bits - PREC;
            self.mant >>= sh as usize;
            self.exp += sh as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &BigFloat) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.top_exp() >= other.top_exp() {
            (self, other)
        } else {
            (other, self)
        };
        if hi.top_exp() - lo.top_exp() > (PREC as i64) + 8 {
            return hi.clone();
        }
        let e = hi.exp.min(lo.exp);
        let a = &hi.mant << ((hi.exp - e) as usize);
        let b = &lo.mant << ((lo.exp - e) as usize);
        BigFloat { mant: a + b, exp: e }.normalize()
    }

    pub fn sub(&self, other: &BigFloat) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BigFloat) -> Self {
        BigFloat {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .normalize()
    }

    pub fn div(&self, other: &BigFloat) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return BigFloat::zero();
        }
        let sh = (PREC as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << (sh as usize);
        BigFloat {
            mant: num / &other.mant,
            exp: self.exp - sh - other.exp,
        }
        .normalize()
    }

    pub fn mul_int(&self, n: u128) -> Self {
        self.mul(&BigFloat::from_u128(n))
    }

    pub fn div_int(&self, n: u128) -> Self {
        self.div(&BigFloat::from_u128(n))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = BigFloat::from_i64(1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigFloat sqrt of a negative value");
        if self.is_zero() {
            return BigFloat::zero();
        }
        let mut sh = (2 * PREC as i64 + 2 - self.mant.bits() as i64).max(0);
        if (self.exp - sh).rem_euclid(2) != 0 {
            sh += 1;
        }
        let m: BigUint = (&self.mant << (sh as usize))
            .to_biguint()
            .expect("non-negative mantissa");
        BigFloat {
            mant: BigInt::from(m.sqrt()),
            exp: (self.exp - sh) / 2,
        }
        .normalize()
    }

    fn top_exp(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn cmp_abs(&self, other: &BigFloat) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let ord = self.top_exp().cmp(&other.top_exp());
        if ord != Ordering::Equal {
            return ord;
        }
        let e = self.exp.min(other.exp);
        let a = self.mant.abs() << ((self.exp - e) as usize);
        let b = other.mant.abs() << ((other.exp - e) as usize);
        a.cmp(&b)
    }

    /// `true` when `|self| < 2^-bits * |reference|`.
    pub fn negligible_against(&self, reference: &BigFloat, bits: i64) -> bool {
        self.is_zero() || self.top_exp() + bits < reference.top_exp()
    }

    /// Rounds to an [`ExtF64`] (round toward zero in the last bit).
    pub fn to_ext(&self) -> ExtF64 {
        if self.is_zero() {
            return ExtF64::ZERO;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(62);
        let top = (&self.mant >> (shift as usize)).to_i64().expect("62-bit mantissa fits");
        let e = self.exp + shift as i64;
        ExtF64::new(top as f64).ldexp(e)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ext().to_f64()
    }
}

/// Product of the odd or even integers `n, n-2, ...` down to 1 or 2.
pub fn big_double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn big_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}
