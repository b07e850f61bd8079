//! Two-variable series in (q1, q2).
//!
//! A [`BiSeries`] is a Laurent series in q2 whose coefficients are
//! [`QSeries`] in q1, each carrying its own q1-window. The q2 direction has
//! its own exclusive cutoff `prec2`; q2-exponents inside the window with no
//! stored entry are exactly zero (with an unbounded q1-window).
//!
//! This is exactly the shape of the two-variable generating function
//! F(q1, q2) = sum_m f_m(q1) q2^m and of the products that appear in the
//! cleared-denominator generating-function identity, where one factor is a
//! series in q2 alone (each q2-coefficient a rational constant, embedded as
//! an exact q1-constant) and another is a series in q1 alone (a single
//! q2-exponent 0 coefficient, fully known in the q2 direction).

use crate::series::{QRat, QSeries, PREC_INF};
use crate::Result;
use std::collections::BTreeMap;

/// Saturating window addition (mirrors the scalar-series rule).
fn sat_add(a: i64, b: i64) -> i64 {
    if a >= PREC_INF || b >= PREC_INF {
        PREC_INF
    } else {
        a + b
    }
}

/// A series sum_e c_e(q1) q2^e with per-coefficient q1-windows.
#[derive(Clone, Debug)]
pub struct BiSeries {
    coeffs: BTreeMap<i64, QSeries>,
    prec2: i64,
}

impl BiSeries {
    /// The zero bi-series, known everywhere.
    pub fn zero() -> Self {
        BiSeries {
            coeffs: BTreeMap::new(),
            prec2: PREC_INF,
        }
    }

    /// Zero on q2-exponents below `prec2`, unknown beyond.
    pub fn zero_to(prec2: i64) -> Self {
        BiSeries {
            coeffs: BTreeMap::new(),
            prec2,
        }
    }

    /// Embed a series in q2 alone: each coefficient becomes an exact
    /// q1-constant (unbounded q1-window). The q2-window is inherited.
    pub fn from_q2(s: &QSeries) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in s.support() {
            coeffs.insert(e, QSeries::constant(c.clone()));
        }
        BiSeries {
            coeffs,
            prec2: s.prec(),
        }
    }

    /// Embed a series in q1 alone at q2-exponent 0 (fully known in q2).
    pub fn from_q1(s: &QSeries) -> Self {
        let mut coeffs = BTreeMap::new();
        if !s.is_known_zero() || s.prec() < PREC_INF {
            coeffs.insert(0, s.clone());
        }
        BiSeries {
            coeffs,
            prec2: PREC_INF,
        }
    }

    /// Set the coefficient of q2^e. Panics if `e` is outside the q2-window.
    pub fn set(&mut self, e: i64, c: QSeries) {
        assert!(e < self.prec2, "q2-exponent {e} beyond window {}", self.prec2);
        if c.is_known_zero() && c.prec() >= PREC_INF {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    /// q2-window cutoff (exclusive).
    pub fn prec2(&self) -> i64 {
        self.prec2
    }

    /// Smallest q2-exponent with a stored coefficient (None if all zero).
    pub fn val2(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn eff_val2(&self) -> i64 {
        self.val2().unwrap_or(PREC_INF)
    }

    /// Coefficient of q2^e (known-zero inside the window when absent).
    /// Panics if `e` is beyond the q2-window.
    pub fn coeff2(&self, e: i64) -> QSeries {
        assert!(e < self.prec2, "q2-exponent {e} beyond window {}", self.prec2);
        self.coeffs.get(&e).cloned().unwrap_or_else(QSeries::zero)
    }

    /// Stored q2-exponents in increasing order.
    pub fn support2(&self) -> impl Iterator<Item = (i64, &QSeries)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Sum: q2-window is the minimum; q1-windows combine per coefficient.
    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let prec2 = self.prec2.min(other.prec2);
        let mut coeffs: BTreeMap<i64, QSeries> = BTreeMap::new();
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if *e >= prec2 {
                continue;
            }
            match coeffs.get_mut(e) {
                Some(acc) => *acc = acc.add(c),
                None => {
                    coeffs.insert(*e, c.clone());
                }
            }
        }
        BiSeries { coeffs, prec2 }
    }

    /// Negation.
    pub fn neg(&self) -> BiSeries {
        BiSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect(),
            prec2: self.prec2,
        }
    }

    /// Difference.
    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        self.add(&other.neg())
    }

    /// Scalar multiple by an exact rational.
    pub fn scale(&self, c: &QRat) -> BiSeries {
        BiSeries {
            coeffs: self.coeffs.iter().map(|(e, s)| (*e, s.scale(c))).collect(),
            prec2: self.prec2,
        }
    }

    /// Product. The q2-window follows the product rule
    /// `min(val2(a) + prec2(b), val2(b) + prec2(a))`; each output
    /// q2-coefficient is a sum of q1-products, so its q1-window is the
    /// minimum over contributing pairs (zero coefficients, having unbounded
    /// q1-windows, never shrink it).
    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let prec2 =
            sat_add(self.eff_val2(), other.prec2).min(sat_add(other.eff_val2(), self.prec2));
        let mut coeffs: BTreeMap<i64, QSeries> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                if e >= prec2 {
                    continue;
                }
                let prod = ca.mul(cb);
                match coeffs.get_mut(&e) {
                    Some(acc) => *acc = acc.add(&prod),
                    None => {
                        coeffs.insert(e, prod);
                    }
                }
            }
        }
        BiSeries { coeffs, prec2 }
    }

    /// theta in the q2 direction: multiplies the coefficient of q2^e by e.
    pub fn theta2(&self) -> BiSeries {
        BiSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, c.scale(&QRat::from_integer((*e).into()))))
                .collect(),
            prec2: self.prec2,
        }
    }

    /// Compare coefficientwise on the shared window. Returns the number of
    /// (q2, q1) coefficient pairs compared and the first mismatch, if any.
    pub fn agrees(&self, other: &BiSeries) -> Result<BiAgreement> {
        let hi2 = self.prec2.min(other.prec2);
        let lo2 = self
            .val2()
            .into_iter()
            .chain(other.val2())
            .min()
            .unwrap_or(hi2 - 1);
        let mut compared: u64 = 0;
        for e2 in lo2..hi2 {
            let a = self.coeff2(e2);
            let b = other.coeff2(e2);
            if a.is_known_zero() && b.is_known_zero() {
                compared += 1;
                continue;
            }
            let agg = a.agrees(&b)?;
            compared += agg.compared().max(0) as u64;
            if let Some((e1, ca, cb)) = agg.first_mismatch {
                return Ok(BiAgreement {
                    lo2,
                    hi2,
                    compared,
                    first_mismatch: Some((e2, e1, ca, cb)),
                });
            }
        }
        Ok(BiAgreement {
            lo2,
            hi2,
            compared,
            first_mismatch: None,
        })
    }
}

/// Result of a two-variable semantic comparison.
#[derive(Debug, Clone)]
pub struct BiAgreement {
    /// First compared q2-exponent.
    pub lo2: i64,
    /// One past the last compared q2-exponent.
    pub hi2: i64,
    /// Total informative coefficient comparisons performed.
    pub compared: u64,
    /// First mismatch as (q2-exponent, q1-exponent, lhs, rhs).
    pub first_mismatch: Option<(i64, i64, QRat, QRat)>,
}

impl BiAgreement {
    /// True if all compared coefficients matched.
    pub fn ok(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::qr;

    fn qs(val: i64, ints: &[i64], prec: i64) -> QSeries {
        QSeries::from_ints(val, ints, prec)
    }

    #[test]
    fn embed_and_multiply() {
        // (q2^-1 + q2) * (f(q1) at q2^0) has f at q2-exponents -1 and 1.
        let a = BiSeries::from_q2(&qs(-1, &[1, 0, 1], 5));
        let f = qs(0, &[3, 4], 7);
        let b = BiSeries::from_q1(&f);
        let p = a.mul(&b);
        // min(val2(a) + prec2(b), val2(b) + prec2(a)) = min(-1 + inf, 0 + 5)
        assert_eq!(p.prec2(), 5);
        let c = p.coeff2(1);
        assert!(c.agrees(&f).unwrap().ok());
        assert!(p.coeff2(0).is_known_zero());
    }

    #[test]
    fn q2_window_product_rule() {
        let a = BiSeries::from_q2(&qs(-2, &[1, 1], 6));
        let b = BiSeries::from_q2(&qs(1, &[1], 9));
        let p = a.mul(&b);
        assert_eq!(p.prec2(), (-2 + 9).min(1 + 6));
    }

    #[test]
    fn theta2_weights() {
        let mut f = BiSeries::zero_to(4);
        f.set(-2, QSeries::one());
        f.set(3, QSeries::constant(qr(5)));
        let t = f.theta2();
        assert_eq!(t.coeff2(-2).coeff(0).unwrap(), qr(-2));
        assert_eq!(t.coeff2(3).coeff(0).unwrap(), qr(15));
    }

    #[test]
    fn agreement_reports_mismatch_location() {
        let mut x = BiSeries::zero_to(3);
        x.set(1, qs(0, &[1, 2], 4));
        let mut y = BiSeries::zero_to(3);
        y.set(1, qs(0, &[1, 3], 4));
        let agg = x.agrees(&y).unwrap();
        let (e2, e1, a, b) = agg.first_mismatch.unwrap();
        assert_eq!((e2, e1), (1, 1));
        assert_eq!((a, b), (qr(2), qr(3)));
    }
}
