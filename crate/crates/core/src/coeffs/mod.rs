//! Expansion coefficients linking ring toroidal harmonics to spherical
//! harmonics.
//!
//! For fixed azimuthal order `m`, `C[n][k]` and `S[n][k]` (toroidal order `n`,
//! spherical degree `k`) satisfy
//!
//! ```text
//! X[n+1][k] = (2k+1) X[n][k] + ((n-1/2)^2 - m^2) X[n-1][k]
//! C[0][k] = 1, C[1][k] = k + 1/2, S[0][k] = 0, S[1][k] = k + m + 1
//! ```
//!
//! and the normalized `c, s = sqrt(pi)/Γ(n-m+1/2) * (C, S)`. The expansion of
//! spherical harmonics in toroidal ones reads the same numbers with the
//! toroidal index first, so one table serves both directions.

pub mod exact;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{gamma_half_ratio, sqrt_pi_over_gamma_half, ExtF64};
use crate::special::legendre_zero;

/// Immutable coefficient table for one azimuthal order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    m: u32,
    n_max: u32,
    k_max: u32,
    big_c: Vec<Vec<ExtF64>>,
    big_s: Vec<Vec<ExtF64>>,
    c: Vec<Vec<ExtF64>>,
    s: Vec<Vec<ExtF64>>,
}

/// Builds `C, S, c, s` for `n = 0..=n_max`, `k = 0..=k_max` by forward
/// recurrence in `n`.
pub fn build_table(m: u32, n_max: u32, k_max: u32) -> Result<CoeffTable> {
    if n_max < 1 || k_max < 1 {
        return Err(Error::InvalidArgument(
            "coefficient tables need n_max, k_max >= 1".into(),
        ));
    }
    let width = k_max as usize + 1;
    let mf = m as f64;
    let mut big_c = Vec::with_capacity(n_max as usize + 1);
    let mut big_s = Vec::with_capacity(n_max as usize + 1);
    big_c.push(vec![ExtF64::ONE; width]);
    big_s.push(vec![ExtF64::ZERO; width]);
    big_c.push((0..width).map(|k| ExtF64::new(k as f64 + 0.5)).collect());
    big_s.push((0..width).map(|k| ExtF64::new(k as f64 + mf + 1.0)).collect());
    for n in 1..n_max as usize {
        let b = (n as f64 - 0.5).powi(2) - mf * mf;
        let step = |rows: &Vec<Vec<ExtF64>>| -> Vec<ExtF64> {
            (0..width)
                .map(|k| rows[n][k] * (2 * k + 1) as f64 + rows[n - 1][k] * b)
                .collect()
        };
        let next_c = step(&big_c);
        let next_s = step(&big_s);
        big_c.push(next_c);
        big_s.push(next_s);
    }
    let normalize = |rows: &Vec<Vec<ExtF64>>| -> Vec<Vec<ExtF64>> {
        rows.iter()
            .enumerate()
            .map(|(n, row)| {
                let f = sqrt_pi_over_gamma_half(n as i64 - m as i64);
                row.iter().map(|v| *v * f).collect()
            })
            .collect()
    };
    let c = normalize(&big_c);
    let s = normalize(&big_s);
    Ok(CoeffTable {
        m,
        n_max,
        k_max,
        big_c,
        big_s,
        c,
        s,
    })
}

#[derive(Serialize, Deserialize)]
struct RawFile {
    m: u32,
    n_max: u32,
    k_max: u32,
    #[serde(rename = "C")]
    big_c: Vec<Vec<f64>>,
    #[serde(rename = "S")]
    big_s: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct NormalizedFile {
    m: u32,
    n_max: u32,
    k_max: u32,
    c: Vec<Vec<f64>>,
    s: Vec<Vec<f64>>,
}

fn to_plain(rows: &[Vec<ExtF64>]) -> Result<Vec<Vec<f64>>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let x = v.to_f64();
                    if x.is_finite() {
                        Ok(x)
                    } else {
                        Err(Error::InvalidArgument(
                            "coefficient exceeds the double range and cannot be exported".into(),
                        ))
                    }
                })
                .collect()
        })
        .collect()
}

fn from_plain(rows: Vec<Vec<f64>>) -> Vec<Vec<ExtF64>> {
    rows.into_iter()
        .map(|row| row.into_iter().map(ExtF64::new).collect())
        .collect()
}

impl CoeffTable {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    fn check(&self, n: u32, k: u32) {
        assert!(
            n <= self.n_max && k <= self.k_max,
            "coefficient index ({n}, {k}) outside table {}x{}",
            self.n_max,
            self.k_max
        );
    }

    /// Unnormalized `C[n][k]`.
    pub fn big_c(&self, n: u32, k: u32) -> ExtF64 {
        self.check(n, k);
        self.big_c[n as usize][k as usize]
    }

    /// Unnormalized `S[n][k]`.
    pub fn big_s(&self, n: u32, k: u32) -> ExtF64 {
        self.check(n, k);
        self.big_s[n as usize][k as usize]
    }

    pub fn c_ext(&self, n: u32, k: u32) -> ExtF64 {
        self.check(n, k);
        self.c[n as usize][k as usize]
    }

    pub fn s_ext(&self, n: u32, k: u32) -> ExtF64 {
        self.check(n, k);
        self.s[n as usize][k as usize]
    }

    /// `c^{-m}` and `s^{-m}` at toroidal order `n`, spherical degree `k`:
    /// `c^{-m} = Γ(n-m+1/2)/Γ(n+m+1/2) c^m` and
    /// `s^{-m} = Γ(n-m+1/2)/Γ(n+m+1/2) (k-m+1)/(k+m+1) s^m`.
    pub fn neg_m_ext(&self, n: u32, k: u32) -> (ExtF64, ExtF64) {
        let g = gamma_half_ratio(n as i64, self.m as i64);
        let mf = self.m as f64;
        let kf = k as f64;
        let c = self.c_ext(n, k) * g;
        let s = self.s_ext(n, k) * g * ((kf - mf + 1.0) / (kf + mf + 1.0));
        (c, s)
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = RawFile {
            m: self.m,
            n_max: self.n_max,
            k_max: self.k_max,
            big_c: to_plain(&self.big_c)?,
            big_s: to_plain(&self.big_s)?,
        };
        Ok(serde_json::to_string(&raw).expect("plain numbers serialize"))
    }

    /// Same layout as [`CoeffTable::to_json`] with keys `c`, `s` holding the
    /// normalized coefficients.
    pub fn to_json_normalized(&self) -> Result<String> {
        let raw = NormalizedFile {
            m: self.m,
            n_max: self.n_max,
            k_max: self.k_max,
            c: to_plain(&self.c)?,
            s: to_plain(&self.s)?,
        };
        Ok(serde_json::to_string(&raw).expect("plain numbers serialize"))
    }

    /// Parses either layout. Normalized files have their `C, S` recovered by
    /// dividing out the Gamma factor.
    pub fn from_json(text: &str) -> Result<CoeffTable> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let parse_err = |e: serde_json::Error| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        };
        let (m, n_max, k_max, big_c, big_s, c, s) = if value.get("C").is_some() {
            let raw: RawFile = serde_json::from_value(value).map_err(parse_err)?;
            let big_c = from_plain(raw.big_c);
            let big_s = from_plain(raw.big_s);
            let scale = |rows: &Vec<Vec<ExtF64>>| scale_rows(rows, raw.m, false);
            let (c, s) = (scale(&big_c), scale(&big_s));
            (raw.m, raw.n_max, raw.k_max, big_c, big_s, c, s)
        } else {
            let raw: NormalizedFile = serde_json::from_value(value).map_err(parse_err)?;
            let c = from_plain(raw.c);
            let s = from_plain(raw.s);
            let scale = |rows: &Vec<Vec<ExtF64>>| scale_rows(rows, raw.m, true);
            let (big_c, big_s) = (scale(&c), scale(&s));
            (raw.m, raw.n_max, raw.k_max, big_c, big_s, c, s)
        };
        let rows = n_max as usize + 1;
        let cols = k_max as usize + 1;
        for (name, t) in [("C", &big_c), ("S", &big_s)] {
            if t.len() != rows || t.iter().any(|r| r.len() != cols) {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("{name} is not a {rows}x{cols} array"),
                });
            }
        }
        Ok(CoeffTable {
            m,
            n_max,
            k_max,
            big_c,
            big_s,
            c,
            s,
        })
    }
}

fn scale_rows(rows: &[Vec<ExtF64>], m: u32, inverse: bool) -> Vec<Vec<ExtF64>> {
    rows.iter()
        .enumerate()
        .map(|(n, row)| {
            let f = sqrt_pi_over_gamma_half(n as i64 - m as i64);
            row.iter().map(|v| if inverse { *v / f } else { *v * f }).collect()
        })
        .collect()
}

/// Normalized `c[n][k]`.
pub fn coeff_c(table: &CoeffTable, n: u32, k: u32) -> f64 {
    table.c_ext(n, k).to_f64()
}

/// Normalized `s[n][k]`.
pub fn coeff_s(table: &CoeffTable, n: u32, k: u32) -> f64 {
    table.s_ext(n, k).to_f64()
}

/// `(c^{-m}, s^{-m})` at toroidal order `n`, spherical degree `k`.
pub fn coeff_neg_m(table: &CoeffTable, n: u32, k: u32) -> (f64, f64) {
    let (c, s) = table.neg_m_ext(n, k);
    (c.to_f64(), s.to_f64())
}

/// Scaled residual of the triangular recurrence
/// `2i(k-m) h[n][k-1] - (n-m+1/2) h[n+1][k] + 2n h[n][k] - (n+m-1/2) h[n-1][k] = 0`
/// with `h[n][k] = (-1)^k (c[n][k] P_k^{-m}(0) + i s[n][k] P_{k+1}^{-m}(0))`.
///
/// The magnitude is divided by the largest of the four terms. Requires
/// `1 <= n < n_max` and `max(1, m) <= k <= k_max`: the `n = 0` row has no
/// lower neighbour, and degrees below `m` are not part of the expansion.
pub fn erofeenko_residual(table: &CoeffTable, n: u32, k: u32) -> Result<f64> {
    if n < 1 || n >= table.n_max || k < table.m.max(1) || k > table.k_max {
        return Err(Error::InvalidArgument(format!(
            "residual needs 1 <= n < {} and {} <= k <= {}, got ({n}, {k})",
            table.n_max,
            table.m.max(1),
            table.k_max
        )));
    }
    let m = table.m;
    let h = |nn: u32, kk: u32| -> (ExtF64, ExtF64) {
        let sign = if kk.is_multiple_of(2) { 1.0 } else { -1.0 };
        let re = table.c_ext(nn, kk) * (sign * legendre_zero(kk, m));
        let im = table.s_ext(nn, kk) * (sign * legendre_zero(kk + 1, m));
        (re, im)
    };
    let (mf, nf, kf) = (m as f64, n as f64, k as f64);
    // 2i(k-m) h[n][k-1] swaps real and imaginary parts
    let (lr, li) = h(n, k - 1);
    let t0 = (li * (-2.0 * (kf - mf)), lr * (2.0 * (kf - mf)));
    let (ur, ui) = h(n + 1, k);
    let t1 = (ur * -(nf - mf + 0.5), ui * -(nf - mf + 0.5));
    let (cr, ci) = h(n, k);
    let t2 = (cr * (2.0 * nf), ci * (2.0 * nf));
    let (dr, di) = h(n - 1, k);
    let t3 = (dr * -(nf + mf - 0.5), di * -(nf + mf - 0.5));
    let terms = [t0, t1, t2, t3];
    let scale = terms
        .iter()
        .flat_map(|(r, i)| [r.abs(), i.abs()])
        .max_by(|a, b| a.cmp_abs(*b))
        .expect("four terms");
    if scale.is_zero() {
        return Ok(0.0);
    }
    let re: f64 = terms.iter().map(|(r, _)| (*r / scale).to_f64()).sum();
    let im: f64 = terms.iter().map(|(_, i)| (*i / scale).to_f64()).sum();
    Ok(re.hypot(im))
}
