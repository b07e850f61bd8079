//! Classical building blocks: Dedekind eta products, Eisenstein series,
//! and the Hauptmoduls they generate.
//!
//! - [`euler_product`]: prod_{n>=1} (1 - q^n) via the pentagonal number
//!   theorem (sparse exact construction, O(sqrt(prec)) terms).
//! - [`EtaQuotientSpec`] / [`eta_quotient`]: products
//!   prod_d eta(d tau)^{r_d} expanded as integral q-series. The fractional
//!   prefactor q^{sum(d r_d)/24} must have integer exponent, which is
//!   checked, and the series is expanded from that leading exponent.
//! - [`eisenstein4`] / [`eisenstein6`]: E4 = 1 + 240 sum sigma_3(n) q^n and
//!   E6 = 1 - 504 sum sigma_5(n) q^n, normalized weight 4 and 6 level-1
//!   series, with the discriminant identity E4^3 - E6^2 = 1728 eta^24
//!   available as a cross-check.
//! - [`hauptmodul_level1`]: E4^3 / eta^24 - 744 = q^-1 + 196884 q + ... ,
//!   the normalized (zero constant term) level-1 Hauptmodul.

use crate::errors::Error;
use crate::series::{qr, QRat, QSeries};
use crate::Result;
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;
use std::str::FromStr;

/// prod_{n>=1} (1 - q^n) to the given window, by the pentagonal number
/// theorem: sum_{k in Z} (-1)^k q^{k(3k-1)/2}.
pub fn euler_product(prec: i64) -> QSeries {
    assert!(prec >= 1);
    let mut coeffs = vec![QRat::from_integer(BigInt::from(0)); prec as usize];
    let mut k: i64 = 0;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 >= prec && g2 >= prec {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for g in [g1, g2] {
            if g < prec {
                coeffs[g as usize] += qr(sign);
            }
        }
        k += 1;
        if k > prec {
            break;
        }
    }
    // k = 0 contributes q^0 twice above (g1 = g2 = 0); correct it.
    coeffs[0] -= qr(1);
    QSeries::from_coeffs(0, coeffs, prec)
}

/// An eta quotient prod_d eta(d tau)^{r_d}, stored as (d, r_d) pairs with
/// distinct increasing d and nonzero r_d. Text form: `d1^r1*d2^r2*...`,
/// e.g. `1^2*11^2` or `1^24*2^-24`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<(u64, i64)>,
}

impl EtaQuotientSpec {
    /// Build from (d, r_d) pairs; merges repeats, drops zero exponents.
    pub fn new(factors: &[(u64, i64)]) -> Self {
        let mut merged: Vec<(u64, i64)> = Vec::new();
        for &(d, r) in factors {
            assert!(d >= 1, "eta argument multiplier must be >= 1");
            match merged.iter_mut().find(|(e, _)| *e == d) {
                Some((_, acc)) => *acc += r,
                None => merged.push((d, r)),
            }
        }
        merged.retain(|(_, r)| *r != 0);
        merged.sort_by_key(|(d, _)| *d);
        EtaQuotientSpec { factors: merged }
    }

    /// The (d, r_d) pairs.
    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    /// sum_d d * r_d (must be divisible by 24 for an integral expansion).
    pub fn weighted_sum(&self) -> i64 {
        self.factors.iter().map(|&(d, r)| d as i64 * r).sum()
    }

    /// Leading exponent sum_d d * r_d / 24; errors if not an integer.
    pub fn leading_exponent(&self) -> Result<i64> {
        let w = self.weighted_sum();
        if w.rem_euclid(24) != 0 {
            return Err(Error::EtaExponent {
                spec: self.to_string(),
                weighted_sum: w,
            });
        }
        Ok(w / 24)
    }

    /// Union (pointwise sum of exponents) with another spec: the spec of
    /// the product of the two eta quotients.
    pub fn product(&self, other: &EtaQuotientSpec) -> EtaQuotientSpec {
        let mut all = self.factors.clone();
        all.extend_from_slice(&other.factors);
        EtaQuotientSpec::new(&all)
    }
}

impl fmt::Display for EtaQuotientSpec {
    /// Writes `d1^r1*d2^r2*...`; the empty spec prints `1^0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1^0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(d, r)| format!("{d}^{r}"))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.trim().split('*') {
            let (d, r) = part
                .split_once('^')
                .ok_or_else(|| Error::EtaParse(format!("factor {part:?} is not d^r")))?;
            let d: u64 = d
                .trim()
                .parse()
                .map_err(|e| Error::EtaParse(format!("bad multiplier {d:?}: {e}")))?;
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|e| Error::EtaParse(format!("bad exponent {r:?}: {e}")))?;
            if d == 0 {
                return Err(Error::EtaParse("multiplier 0 not allowed".into()));
            }
            factors.push((d, r));
        }
        Ok(EtaQuotientSpec::new(&factors))
    }
}

/// Expand an eta quotient to the window `[leading_exponent, prec)`.
///
/// The expansion is exact and always has integer coefficients with leading
/// coefficient 1 (each factor is a unit power series times a q-power, and
/// inverting a unit integral series keeps integrality).
pub fn eta_quotient(spec: &EtaQuotientSpec, prec: i64) -> Result<QSeries> {
    let lead = spec.leading_exponent()?;
    let mut acc = QSeries::one();
    // Positive window needed for the unit part of the product.
    let unit_prec = (prec - lead).max(1);
    for &(d, r) in spec.factors() {
        // After q -> q^d the window ends at (base_prec - 1) * d + 1, which
        // must reach unit_prec.
        let base_prec = (unit_prec - 1 + d as i64 - 1) / d as i64 + 1;
        let base = euler_product(base_prec.max(1)).v_op(d);
        let powed = base.pow(r.unsigned_abs());
        let factor = if r < 0 { powed.invert()? } else { powed };
        acc = acc.mul(&factor);
    }
    Ok(acc.shifted(lead).truncated(prec))
}

/// sigma_k(n): sum of the k-th powers of the divisors of n.
fn sigma(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::from(0);
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// E4 = 1 + 240 sum_{n>=1} sigma_3(n) q^n.
pub fn eisenstein4(prec: i64) -> QSeries {
    eisenstein(3, 240, prec)
}

/// E6 = 1 - 504 sum_{n>=1} sigma_5(n) q^n.
pub fn eisenstein6(prec: i64) -> QSeries {
    eisenstein(5, -504, prec)
}

fn eisenstein(k: u32, scale: i64, prec: i64) -> QSeries {
    assert!(prec >= 1);
    let mut coeffs = vec![QRat::from_integer(BigInt::one())];
    for n in 1..prec {
        coeffs.push(QRat::from_integer(sigma(k, n as u64) * BigInt::from(scale)));
    }
    QSeries::from_coeffs(0, coeffs, prec)
}

/// The normalized level-1 Hauptmodul j - 744 = E4^3 / eta^24 - 744
/// = q^-1 + 196884 q + 21493760 q^2 + ... (zero constant term).
pub fn hauptmodul_level1(prec: i64) -> QSeries {
    // Inverting eta^24 (valuation 1) from a window [1, w) justifies
    // [-1, w - 2), so take w = prec + 2.
    let window = prec + 2;
    let e4 = eisenstein4(window);
    let eta24 = eta_quotient(&EtaQuotientSpec::new(&[(1, 24)]), window)
        .expect("1^24 has integral leading exponent");
    let j = e4.pow(3).mul(&eta24.invert().expect("eta^24 is a unit times q"));
    j.sub(&QSeries::constant(qr(744))).truncated(prec)
}
