//! The same recurrences in exact rational arithmetic, for small indices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `sqrt(pi) / Γ(j + 1/2)`, which is rational for integer `j`.
pub fn sqrt_pi_over_gamma_half(j: i64) -> BigRational {
    let mut acc = BigRational::one();
    if j >= 0 {
        for i in 0..j {
            acc /= rat(2 * i + 1, 2);
        }
    } else {
        for i in 1..=(-j) {
            acc *= rat(1 - 2 * i, 2);
        }
    }
    acc
}

/// `Γ(n - m + 1/2) / Γ(n + m + 1/2)`.
pub fn gamma_half_ratio(n: i64, m: i64) -> BigRational {
    let mut acc = BigRational::one();
    for i in (n - m)..(n + m) {
        acc /= rat(2 * i + 1, 2);
    }
    acc
}

#[derive(Clone, Debug)]
pub struct ExactTable {
    pub m: u32,
    pub big_c: Vec<Vec<BigRational>>,
    pub big_s: Vec<Vec<BigRational>>,
}

impl ExactTable {
    pub fn build(m: u32, n_max: u32, k_max: u32) -> ExactTable {
        let width = k_max as usize + 1;
        let mi = m as i64;
        let mut big_c = vec![
            vec![BigRational::one(); width],
            (0..width).map(|k| rat(2 * k as i64 + 1, 2)).collect(),
        ];
        let mut big_s = vec![
            vec![BigRational::zero(); width],
            (0..width).map(|k| rat(k as i64 + mi + 1, 1)).collect(),
        ];
        for n in 1..n_max as usize {
            // (n - 1/2)^2 - m^2
            let b = rat((2 * n as i64 - 1).pow(2) - 4 * mi * mi, 4);
            for rows in [&mut big_c, &mut big_s] {
                let next = (0..width)
                    .map(|k| rat(2 * k as i64 + 1, 1) * &rows[n][k] + &b * &rows[n - 1][k])
                    .collect();
                rows.push(next);
            }
        }
        big_c.truncate(n_max as usize + 1);
        big_s.truncate(n_max as usize + 1);
        ExactTable { m, big_c, big_s }
    }

    pub fn c(&self, n: u32, k: u32) -> BigRational {
        sqrt_pi_over_gamma_half(n as i64 - self.m as i64) * &self.big_c[n as usize][k as usize]
    }

    pub fn s(&self, n: u32, k: u32) -> BigRational {
        sqrt_pi_over_gamma_half(n as i64 - self.m as i64) * &self.big_s[n as usize][k as usize]
    }

    pub fn c_neg(&self, n: u32, k: u32) -> BigRational {
        gamma_half_ratio(n as i64, self.m as i64) * self.c(n, k)
    }

    pub fn s_neg(&self, n: u32, k: u32) -> BigRational {
        let (m, k) = (self.m as i64, k as i64);
        gamma_half_ratio(n as i64, m) * rat(k - m + 1, k + m + 1) * self.s(n, k as u32)
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_sine_order_uses_nineteen_eighths() {
        let t = ExactTable::build(0, 5, 20);
        for k in 0..=20i64 {
            let kk = BigRational::from_integer(BigInt::from(k));
            let want = rat(4, 1) * (&kk + rat(1, 1)) * (rat(2, 1) * &kk + rat(1, 1)) * (&kk * &kk + &kk + rat(19, 8));
            assert_eq!(t.big_s[4][k as usize], want);
        }
    }

    #[test]
    fn gamma_factors() {
        assert_eq!(sqrt_pi_over_gamma_half(0), rat(1, 1));
        assert_eq!(sqrt_pi_over_gamma_half(1), rat(2, 1));
        assert_eq!(sqrt_pi_over_gamma_half(2), rat(4, 3));
        assert_eq!(sqrt_pi_over_gamma_half(-1), rat(-1, 2));
        assert_eq!(sqrt_pi_over_gamma_half(-2), rat(3, 4));
        assert_eq!(gamma_half_ratio(1, 1), rat(2, 1) * rat(2, 3));
    }
}
