//! Exact truncated Laurent q-series.
//!
//! [`QSeries`] is the single carrier for every expansion in this crate: a
//! Laurent series in q with exact rational coefficients, known on an
//! explicitly tracked exponent window. The window semantics are:
//!
//! - exponents below [`QSeries::valuation`] carry coefficient exactly 0,
//! - exponents in `[valuation, prec)` are known exactly,
//! - exponents at or above `prec` are unknown (truncated away).
//!
//! `prec` is exclusive. A series known to be zero everywhere (the canonical
//! zero) has an unbounded window, represented by the sentinel [`PREC_INF`].
//!
//! Precision bookkeeping follows the sharp rules
//!
//! - `prec(a + b) = min(prec(a), prec(b))`,
//! - `prec(a * b) = min(val(a) + prec(b), val(b) + prec(a))`,
//!
//! so a product is never claimed on a window wider than its factors justify.
//! Equality is semantic: two series are compared coefficientwise on the
//! intersection of their known windows, and a comparison whose intersection
//! contains no informative exponent is an error, never a silent pass.
//!
//! Operators provided here (all exact):
//!
//! - [`QSeries::ustar`]: U*_k, sending sum a(n) q^n to sum k a(kn) q^n
//!   (multiplicative in k: U*_j U*_k = U*_{jk}),
//! - [`QSeries::v_op`]: V_m, the substitution q -> q^m,
//! - [`QSeries::theta`]: theta = q d/dq,
//! - [`QSeries::mod_reduce`]: coefficientwise reduction into [0, M), with
//!   integrality checked (a non-integral coefficient is a hard error that
//!   names the offending exponent),
//! - [`QSeries::principal_part`], [`QSeries::constant_term`],
//!   [`QSeries::invert`], [`QSeries::pow`].

use crate::errors::Error;
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact rational coefficient type.
pub type QRat = Ratio<BigInt>;

/// Sentinel precision for series whose window is unbounded (known
/// everywhere), e.g. the exact zero series, constants, and principal parts.
/// Kept far below `i64::MAX` so window arithmetic cannot overflow.
pub const PREC_INF: i64 = i64::MAX / 4;

/// Rational from an integer.
pub fn qr(n: i64) -> QRat {
    QRat::from_integer(BigInt::from(n))
}

/// Rational n/d.
pub fn qrat(n: i64, d: i64) -> QRat {
    QRat::new(BigInt::from(n), BigInt::from(d))
}

/// Saturating window addition: anything at or beyond [`PREC_INF`] stays there.
fn sat_add(a: i64, b: i64) -> i64 {
    if a >= PREC_INF || b >= PREC_INF {
        PREC_INF
    } else {
        a + b
    }
}

/// Ceiling division for a possibly negative numerator and positive divisor.
fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

/// A Laurent q-series with exact rational coefficients on a tracked window.
#[derive(Clone, Debug)]
pub struct QSeries {
    /// Exponent of the first stored coefficient. Exponents below `val` are
    /// exactly zero.
    val: i64,
    /// Exclusive end of the known window. Exponents in
    /// `[val + coeffs.len(), prec)` are exactly zero.
    prec: i64,
    /// Stored coefficients; `coeffs[i]` is the coefficient of
    /// `q^(val + i)`. Kept trimmed: no leading or trailing zeros.
    coeffs: Vec<QRat>,
}

impl QSeries {
    // ---- construction ---------------------------------------------------

    /// The exact zero series (known zero on an unbounded window).
    pub fn zero() -> Self {
        QSeries {
            val: 0,
            prec: PREC_INF,
            coeffs: Vec::new(),
        }
    }

    /// A series known to be zero on `(-inf, prec)` and unknown beyond.
    pub fn zero_to(prec: i64) -> Self {
        QSeries {
            val: 0,
            prec,
            coeffs: Vec::new(),
        }
    }

    /// The constant series 1.
    pub fn one() -> Self {
        Self::constant(QRat::one())
    }

    /// A constant series (fully known).
    pub fn constant(c: QRat) -> Self {
        Self::monomial(0, c)
    }

    /// The monomial c * q^exp (fully known).
    pub fn monomial(exp: i64, c: QRat) -> Self {
        let mut s = QSeries {
            val: exp,
            prec: PREC_INF,
            coeffs: vec![c],
        };
        s.normalize();
        s
    }

    /// Build from a dense coefficient slice: `coeffs[i]` is the coefficient
    /// of `q^(val + i)`; coefficients from `val + coeffs.len()` up to `prec`
    /// are declared zero. Panics if the slice overruns `prec`.
    pub fn from_coeffs(val: i64, coeffs: Vec<QRat>, prec: i64) -> Self {
        assert!(
            sat_add(val, coeffs.len() as i64) <= prec,
            "stored coefficients overrun the declared window"
        );
        let mut s = QSeries { val, prec, coeffs };
        s.normalize();
        s
    }

    /// Convenience: dense integer coefficients.
    pub fn from_ints(val: i64, ints: &[i64], prec: i64) -> Self {
        Self::from_coeffs(val, ints.iter().map(|&n| qr(n)).collect(), prec)
    }

    fn normalize(&mut self) {
        // Trim trailing zeros (they are representable as window zeros).
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        // Trim leading zeros, bumping the valuation.
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.val = 0;
        }
    }

    // ---- window accessors -------------------------------------------------

    /// Smallest exponent with a (known) nonzero coefficient, or `None` for a
    /// series that is zero everywhere on its window.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Exclusive end of the known window.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// True if every known coefficient is zero.
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True if the coefficient of `q^n` is known.
    pub fn knows(&self, n: i64) -> bool {
        n < self.prec
    }

    /// Coefficient of `q^n`. Errors if `n` is beyond the known window.
    pub fn coeff(&self, n: i64) -> Result<QRat> {
        if n >= self.prec {
            return Err(Error::CoefficientUnknown {
                exponent: n,
                val: self.val,
                prec: self.prec,
            });
        }
        let i = n - self.val;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Ok(QRat::zero())
        } else {
            Ok(self.coeffs[i as usize].clone())
        }
    }

    /// Coefficient of `q^n` as an integer; errors if unknown or non-integral.
    pub fn coeff_int(&self, n: i64, context: &str) -> Result<BigInt> {
        let c = self.coeff(n)?;
        if c.denom().is_one() {
            Ok(c.numer().clone())
        } else {
            Err(Error::NonIntegral {
                exponent: n,
                value: c,
                context: context.to_string(),
            })
        }
    }

    /// Iterate over the stored (exponent, coefficient) pairs with nonzero
    /// coefficient, in increasing exponent order.
    pub fn support(&self) -> impl Iterator<Item = (i64, &QRat)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    /// True if every known coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// First exponent carrying a non-integral coefficient, if any.
    pub fn first_non_integral(&self) -> Option<(i64, QRat)> {
        self.support()
            .find(|(_, c)| !c.denom().is_one())
            .map(|(e, c)| (e, c.clone()))
    }

    // ---- ring operations ----------------------------------------------------

    /// Effective valuation for window bookkeeping: a known-zero series acts
    /// as valuation +infinity in the product precision rule.
    fn eff_val(&self) -> i64 {
        if self.coeffs.is_empty() {
            PREC_INF
        } else {
            self.val
        }
    }

    /// Sum. Window: `min(prec(a), prec(b))`.
    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = self.prec.min(other.prec);
        let lo = self.val.min(other.val);
        let hi_stored = (self.val + self.coeffs.len() as i64)
            .max(other.val + other.coeffs.len() as i64)
            .min(prec);
        if hi_stored <= lo {
            return QSeries::zero_to(prec);
        }
        let len = (hi_stored - lo) as usize;
        let mut coeffs = vec![QRat::zero(); len];
        for (src, base) in [(self, self.val), (other, other.val)] {
            for (i, c) in src.coeffs.iter().enumerate() {
                let e = base + i as i64;
                if e < prec {
                    coeffs[(e - lo) as usize] += c;
                }
            }
        }
        QSeries::from_coeffs(lo, coeffs, prec)
    }

    /// Negation (window unchanged).
    pub fn neg(&self) -> QSeries {
        QSeries {
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Difference.
    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    /// Scalar multiple. Scaling by exactly 0 yields the exact zero series.
    pub fn scale(&self, c: &QRat) -> QSeries {
        if c.is_zero() {
            return QSeries::zero();
        }
        QSeries {
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Common-denominator split: returns `(den, ints)` with
    /// `coeffs[i] = ints[i] / den`.
    fn scaled_ints(&self) -> (BigInt, Vec<BigInt>) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (den, ints)
    }

    /// Product. Window: `min(val(a) + prec(b), val(b) + prec(a))`.
    ///
    /// Schoolbook convolution over a common denominator, so integral inputs
    /// multiply entirely in `BigInt`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = sat_add(self.eff_val(), other.prec).min(sat_add(other.eff_val(), self.prec));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return QSeries::zero_to(prec);
        }
        let val = self.val + other.val;
        let keep = if prec >= PREC_INF {
            self.coeffs.len() + other.coeffs.len() - 1
        } else {
            ((prec - val).max(0) as usize).min(self.coeffs.len() + other.coeffs.len() - 1)
        };
        if keep == 0 {
            return QSeries::zero_to(prec);
        }
        let (da, ia) = self.scaled_ints();
        let (db, ib) = other.scaled_ints();
        let mut acc = vec![BigInt::zero(); keep];
        for (i, a) in ia.iter().enumerate() {
            if i >= keep || a.is_zero() {
                continue;
            }
            for (j, b) in ib.iter().enumerate().take(keep - i) {
                if !b.is_zero() {
                    acc[i + j] += a * b;
                }
            }
        }
        let den = da * db;
        let coeffs = acc.into_iter().map(|n| QRat::new(n, den.clone())).collect();
        QSeries::from_coeffs(val, coeffs, prec)
    }

    /// Nonnegative integer power by binary powering. `a^0 = 1` exactly.
    pub fn pow(&self, k: u64) -> QSeries {
        let mut result = QSeries::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse. The leading known coefficient must be
    /// nonzero. Knowing `a` on `[val, prec)` determines `1/a` on
    /// `[-val, -val + (prec - val))`; an exactly-known monomial inverts
    /// exactly.
    pub fn invert(&self) -> Result<QSeries> {
        if self.coeffs.is_empty() {
            return Err(Error::InvertLeadingZero);
        }
        let a0 = &self.coeffs[0];
        if self.coeffs.len() == 1 && self.prec >= PREC_INF {
            // Exact monomial: exact inverse.
            return Ok(QSeries::monomial(-self.val, a0.recip()));
        }
        let terms = if self.prec >= PREC_INF {
            self.coeffs.len()
        } else {
            (self.prec - self.val) as usize
        };
        let inv0 = a0.recip();
        let mut out = Vec::with_capacity(terms);
        out.push(inv0.clone());
        for k in 1..terms {
            // b_k = -(1/a_0) * sum_{j=1..k} a_j b_{k-j}
            let mut s = QRat::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-(&inv0 * s));
        }
        Ok(QSeries::from_coeffs(
            -self.val,
            out,
            -self.val + terms as i64,
        ))
    }

    /// Restrict the window to end at `new_prec` (materializing known zeros
    /// if the current window is unbounded). Never extends a finite window.
    pub fn truncated(&self, new_prec: i64) -> QSeries {
        let prec = self.prec.min(new_prec);
        let keep = ((prec - self.val).max(0) as usize).min(self.coeffs.len());
        QSeries::from_coeffs(self.val, self.coeffs[..keep].to_vec(), prec)
    }

    /// Multiply by q^k (shift every exponent by k).
    pub fn shifted(&self, k: i64) -> QSeries {
        if self.coeffs.is_empty() {
            return QSeries::zero_to(sat_add(self.prec, k));
        }
        QSeries {
            val: self.val + k,
            prec: sat_add(self.prec, k),
            coeffs: self.coeffs.clone(),
        }
    }

    // ---- coefficient operators -----------------------------------------------

    /// U*_k: sends sum a(n) q^n to sum k a(kn) q^n. Multiplicative in k
    /// (U*_j followed by U*_k is U*_{jk}), and U*_{p^k} is the k-th iterate
    /// of U*_p. Output window ends at ceil(prec / k).
    pub fn ustar(&self, k: u64) -> QSeries {
        assert!(k >= 1);
        let k_i = k as i64;
        let prec = if self.prec >= PREC_INF {
            PREC_INF
        } else {
            ceil_div(self.prec, k_i)
        };
        if self.coeffs.is_empty() {
            return QSeries::zero_to(prec);
        }
        let factor = qr(k_i);
        // Multiples of k inside the stored range [val, val + len).
        let n_lo = ceil_div(self.val, k_i);
        let n_hi = ceil_div(self.val + self.coeffs.len() as i64, k_i);
        let mut out = Vec::with_capacity((n_hi - n_lo).max(0) as usize);
        for n in n_lo..n_hi {
            let idx = (n * k_i - self.val) as usize;
            out.push(&self.coeffs[idx] * &factor);
        }
        QSeries::from_coeffs(n_lo.min(prec), out, prec)
    }

    /// V_m: the substitution q -> q^m. Coefficients between multiples of m
    /// are exactly zero, so the output window ends at (prec - 1) * m + 1.
    pub fn v_op(&self, m: u64) -> QSeries {
        assert!(m >= 1);
        let m_i = m as i64;
        let prec = if self.prec >= PREC_INF {
            PREC_INF
        } else {
            (self.prec - 1) * m_i + 1
        };
        if self.coeffs.is_empty() {
            return QSeries::zero_to(prec);
        }
        let mut out = vec![QRat::zero(); (self.coeffs.len() - 1) * m as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * m as usize] = c.clone();
        }
        QSeries::from_coeffs(self.val * m_i, out, prec)
    }

    /// theta = q d/dq: multiplies the coefficient of q^n by n. Realizes the
    /// normalized derivative -(1/2 pi i) d/dtau up to the sign convention of
    /// the caller; the window is unchanged.
    pub fn theta(&self) -> QSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * qr(self.val + i as i64))
            .collect();
        QSeries::from_coeffs(self.val, coeffs, self.prec)
    }

    /// Reduce every known coefficient into `[0, modulus)`. Errors on the
    /// first non-integral coefficient (integrality is a precondition, and
    /// its failure is a data fault, not a congruence failure).
    pub fn mod_reduce(&self, modulus: &BigInt) -> Result<QSeries> {
        assert!(modulus > &BigInt::one());
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.denom().is_one() {
                return Err(Error::NonIntegral {
                    exponent: self.val + i as i64,
                    value: c.clone(),
                    context: format!("reduction mod {modulus}"),
                });
            }
            out.push(QRat::from_integer(c.numer().mod_floor(modulus)));
        }
        Ok(QSeries::from_coeffs(self.val, out, self.prec))
    }

    /// The terms with negative exponent. Fully known (unbounded window)
    /// whenever the input window reaches exponent 0.
    pub fn principal_part(&self) -> QSeries {
        let cut = 0.min(self.prec);
        let keep = ((cut - self.val).max(0) as usize).min(self.coeffs.len());
        let prec = if self.prec >= 0 { PREC_INF } else { self.prec };
        QSeries::from_coeffs(self.val, self.coeffs[..keep].to_vec(), prec)
    }

    /// The coefficient of q^0.
    pub fn constant_term(&self) -> Result<QRat> {
        self.coeff(0)
    }

    /// Largest pole order (= -valuation when the valuation is negative).
    pub fn pole_order(&self) -> i64 {
        match self.valuation() {
            Some(v) if v < 0 => -v,
            _ => 0,
        }
    }

    // ---- comparison -----------------------------------------------------------

    /// Compare coefficientwise on the intersection of the known windows.
    /// Errors if the intersection contains no informative exponent.
    pub fn agrees(&self, other: &QSeries) -> Result<Agreement> {
        let hi = self.prec.min(other.prec);
        let lo = match (self.valuation(), other.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            // Both known zero: they agree on the whole shared window.
            (None, None) => {
                return Ok(Agreement {
                    lo: hi - 1,
                    hi,
                    first_mismatch: None,
                })
            }
        };
        if hi <= lo {
            return Err(Error::EmptyOverlap {
                prec_a: self.prec,
                prec_b: other.prec,
            });
        }
        // Two exact series: any disagreement lies within the stored
        // supports, so scanning through the last stored exponent decides
        // equality without walking the unbounded window.
        let hi = if hi >= PREC_INF {
            self.support()
                .chain(other.support())
                .map(|(e, _)| e)
                .max()
                .unwrap_or(lo)
                + 1
        } else {
            hi
        };
        for e in lo..hi {
            let a = self.coeff(e)?;
            let b = other.coeff(e)?;
            if a != b {
                return Ok(Agreement {
                    lo,
                    hi,
                    first_mismatch: Some((e, a, b)),
                });
            }
        }
        Ok(Agreement {
            lo,
            hi,
            first_mismatch: None,
        })
    }

    // ---- serialization -----------------------------------------------------------

    /// Canonical text form `valuation;prec;c_val,...,c_{prec-1}` with exact
    /// rationals (`p/q`, or bare `p` for integers). Requires a finite window.
    pub fn to_text(&self) -> Result<String> {
        if self.prec >= PREC_INF {
            return Err(Error::SeriesParse(
                "cannot serialize a series with an unbounded window".into(),
            ));
        }
        let val = if self.coeffs.is_empty() {
            self.prec - 1
        } else {
            self.val
        };
        let mut parts = Vec::with_capacity((self.prec - val).max(0) as usize);
        for e in val..self.prec {
            parts.push(fmt_rat(&self.coeff(e).expect("within window")));
        }
        Ok(format!("{};{};{}", val, self.prec, parts.join(",")))
    }

    /// Parse the canonical text form produced by [`QSeries::to_text`].
    pub fn from_text(text: &str) -> Result<QSeries> {
        let mut it = text.trim().splitn(3, ';');
        let val: i64 = it
            .next()
            .ok_or_else(|| Error::SeriesParse("missing valuation".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::SeriesParse(format!("bad valuation: {e}")))?;
        let prec: i64 = it
            .next()
            .ok_or_else(|| Error::SeriesParse("missing precision".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::SeriesParse(format!("bad precision: {e}")))?;
        let body = it
            .next()
            .ok_or_else(|| Error::SeriesParse("missing coefficient list".into()))?
            .trim();
        let coeffs: Vec<QRat> = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(parse_rat)
                .collect::<Result<Vec<_>>>()?
        };
        if val + coeffs.len() as i64 != prec {
            return Err(Error::SeriesParse(format!(
                "window [{val}, {prec}) expects {} coefficients, found {}",
                prec - val,
                coeffs.len()
            )));
        }
        Ok(QSeries::from_coeffs(val, coeffs, prec))
    }
}

/// Result of a semantic comparison of two series.
#[derive(Debug, Clone)]
pub struct Agreement {
    /// First compared exponent.
    pub lo: i64,
    /// One past the last compared exponent.
    pub hi: i64,
    /// First disagreeing exponent with the two coefficient values.
    pub first_mismatch: Option<(i64, QRat, QRat)>,
}

impl Agreement {
    /// True if every compared coefficient matched.
    pub fn ok(&self) -> bool {
        self.first_mismatch.is_none()
    }

    /// Number of exponents compared.
    pub fn compared(&self) -> i64 {
        self.hi - self.lo
    }
}

/// Semantic equality: coefficientwise agreement on the (nonempty)
/// intersection of the known windows. Comparisons with an empty informative
/// intersection are `false`; use [`QSeries::agrees`] to distinguish that
/// case explicitly.
impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.agrees(other), Ok(a) if a.ok())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.support() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let coeff_part = if mag.is_one() && e != 0 {
                String::new()
            } else {
                format!("{}", mag)
            };
            let q_part = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            match (coeff_part.is_empty(), q_part.is_empty()) {
                (true, _) => write!(f, "{q_part}")?,
                (false, true) => write!(f, "{coeff_part}")?,
                (false, false) => write!(f, "{coeff_part}*{q_part}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec < PREC_INF {
            write!(f, " + O(q^{})", self.prec)?;
        }
        Ok(())
    }
}

/// Format a rational as `p` or `p/q`.
pub fn fmt_rat(c: &QRat) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parse a rational written as `p` or `p/q`.
pub fn parse_rat(text: &str) -> Result<QRat> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|e| Error::SeriesParse(format!("bad numerator {num:?}: {e}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|e| Error::SeriesParse(format!("bad denominator {den:?}: {e}")))?;
    if d.is_zero() {
        return Err(Error::SeriesParse("zero denominator".into()));
    }
    Ok(QRat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(val: i64, ints: &[i64], prec: i64) -> QSeries {
        QSeries::from_ints(val, ints, prec)
    }

    #[test]
    fn window_semantics() {
        let a = s(-2, &[1, 0, 3], 4);
        assert_eq!(a.valuation(), Some(-2));
        assert_eq!(a.prec(), 4);
        assert_eq!(a.coeff(-5).unwrap(), qr(0)); // below valuation: known zero
        assert_eq!(a.coeff(0).unwrap(), qr(3));
        assert_eq!(a.coeff(3).unwrap(), qr(0)); // trailing window zero
        assert!(a.coeff(4).is_err()); // beyond the window: unknown
    }

    #[test]
    fn trims_to_canonical_form() {
        let a = QSeries::from_ints(-3, &[0, 0, 5, 0], 4);
        assert_eq!(a.valuation(), Some(-1));
        let z = QSeries::from_ints(2, &[0, 0], 9);
        assert!(z.is_known_zero());
        assert_eq!(z.prec(), 9);
    }

    #[test]
    fn add_takes_min_window() {
        let a = s(-1, &[1, 1], 5);
        let b = s(0, &[2, 2, 2], 3);
        let c = a.add(&b);
        assert_eq!(c.prec(), 3);
        assert_eq!(c.coeff(-1).unwrap(), qr(1));
        assert_eq!(c.coeff(0).unwrap(), qr(3));
        assert_eq!(c.coeff(1).unwrap(), qr(2));
        assert!(c.coeff(3).is_err());
    }

    #[test]
    fn mul_window_rule() {
        // prec(a*b) = min(val(a) + prec(b), val(b) + prec(a))
        let a = s(-2, &[1], 6); // q^-2, known to 6
        let b = s(3, &[1], 10); // q^3, known to 10
        let c = a.mul(&b);
        assert_eq!(c.valuation(), Some(1));
        assert_eq!(c.prec(), (-2 + 10).min(3 + 6)); // = 8
        assert_eq!(c.coeff(1).unwrap(), qr(1));
    }

    #[test]
    fn mul_with_known_zero_keeps_window() {
        let z = QSeries::zero();
        let b = s(2, &[7], 9);
        let c = z.mul(&b);
        assert!(c.is_known_zero());
        // zero is known everywhere, so the product window is val(b) + prec(z).
        assert_eq!(c.prec(), PREC_INF);
        let z5 = QSeries::zero_to(5);
        let d = z5.mul(&b);
        assert_eq!(d.prec(), 2 + 5);
    }

    #[test]
    fn geometric_series_inversion() {
        // 1/(1 - q) = 1 + q + q^2 + ...
        let one_minus_q = s(0, &[1, -1], PREC_INF).truncated(8);
        let inv = one_minus_q.invert().unwrap();
        assert_eq!(inv.prec(), 8);
        for e in 0..8 {
            assert_eq!(inv.coeff(e).unwrap(), qr(1));
        }
        // inverse really is an inverse on the justified window
        let prod = one_minus_q.mul(&inv);
        assert_eq!(prod.coeff(0).unwrap(), qr(1));
        for e in 1..prod.prec() {
            assert_eq!(prod.coeff(e).unwrap(), qr(0));
        }
    }

    #[test]
    fn invert_exact_monomial() {
        let m = QSeries::monomial(-3, qr(2));
        let inv = m.invert().unwrap();
        assert_eq!(inv.prec(), PREC_INF);
        assert_eq!(inv.coeff(3).unwrap(), qrat(1, 2));
    }

    #[test]
    fn invert_rejects_zero_leading() {
        assert!(QSeries::zero_to(5).invert().is_err());
    }

    #[test]
    fn binomial_power() {
        let one_plus_q = s(0, &[1, 1], PREC_INF);
        let p = one_plus_q.pow(5);
        let expect = [1, 5, 10, 10, 5, 1];
        for (e, v) in expect.iter().enumerate() {
            assert_eq!(p.coeff(e as i64).unwrap(), qr(*v));
        }
        assert_eq!(p.prec(), PREC_INF);
    }

    #[test]
    fn ustar_and_v_interplay() {
        let a = s(-2, &[3, -1, 4, 7, 2, 5], 4);
        let p = 2u64;
        // U*_p(V_p(a)) = p * a on the full support.
        let uv = a.v_op(p).ustar(p);
        let pa = a.scale(&qr(2));
        let agg = uv.agrees(&pa).unwrap();
        assert!(agg.ok(), "{agg:?}");
        // V_p(U*_p(a)) keeps exactly the exponents divisible by p (scaled by p).
        let vu = a.ustar(p).v_op(p);
        for e in vu.valuation().unwrap()..vu.prec() {
            if e.rem_euclid(2) == 0 {
                assert_eq!(vu.coeff(e).unwrap(), a.coeff(e).unwrap() * qr(2));
            } else {
                assert_eq!(vu.coeff(e).unwrap(), qr(0));
            }
        }
    }

    #[test]
    fn ustar_window_is_ceiling() {
        let a = s(-2, &[1, 1, 1, 1, 1, 1, 1], 5);
        let u = a.ustar(2);
        assert_eq!(u.prec(), 3); // ceil(5/2)
        assert_eq!(u.coeff(-1).unwrap(), qr(2) * a.coeff(-2).unwrap());
        assert_eq!(u.coeff(2).unwrap(), qr(2) * a.coeff(4).unwrap());
        // composite U*: U*_6 = U*_2 U*_3 with factor 6
        let b = s(0, &[1, 2, 3, 4, 5, 6, 7], 7);
        let u6 = b.ustar(6);
        let u23 = b.ustar(3).ustar(2);
        assert!(u6.agrees(&u23).unwrap().ok());
        assert_eq!(u6.coeff(1).unwrap(), qr(6 * 7));
    }

    #[test]
    fn theta_leibniz() {
        let a = s(-1, &[2, 0, 3, 1], 3);
        let b = s(0, &[1, -5, 4], 3);
        let lhs = a.mul(&b).theta();
        let rhs = a.theta().mul(&b).add(&a.mul(&b.theta()));
        assert!(lhs.agrees(&rhs).unwrap().ok());
    }

    #[test]
    fn mod_reduce_and_integrality() {
        let a = s(-1, &[5, -3, 7], 2);
        let r = a.mod_reduce(&BigInt::from(4)).unwrap();
        assert_eq!(r.coeff(-1).unwrap(), qr(1));
        assert_eq!(r.coeff(0).unwrap(), qr(1)); // -3 mod 4
        assert_eq!(r.coeff(1).unwrap(), qr(3));
        let bad = QSeries::from_coeffs(0, vec![qrat(1, 2)], 1);
        match bad.mod_reduce(&BigInt::from(3)) {
            Err(Error::NonIntegral { exponent, .. }) => assert_eq!(exponent, 0),
            other => panic!("expected NonIntegral, got {other:?}"),
        }
    }

    #[test]
    fn principal_part_and_constant() {
        let a = s(-3, &[1, 2, 0, 4, 5], 4);
        let p = a.principal_part();
        assert_eq!(p.prec(), PREC_INF);
        assert_eq!(p.coeff(-3).unwrap(), qr(1));
        assert_eq!(p.coeff(-1).unwrap(), qr(0));
        assert_eq!(p.coeff(0).unwrap(), qr(0));
        assert_eq!(a.constant_term().unwrap(), qr(4));
    }

    #[test]
    fn serialization_round_trip() {
        let a = QSeries::from_coeffs(-2, vec![qr(1), qrat(-3, 2), qr(0), qr(7)], 4);
        let text = a.to_text().unwrap();
        assert_eq!(text, "-2;4;1,-3/2,0,7,0,0");
        let b = QSeries::from_text(&text).unwrap();
        assert!(a.agrees(&b).unwrap().ok());
        assert_eq!(a.prec(), b.prec());
        assert!(QSeries::from_text("0;2;1").is_err()); // wrong arity
    }

    #[test]
    fn agreement_windows() {
        let a = s(0, &[1, 2, 3], 3);
        let b = s(0, &[1, 2], 2);
        let agg = a.agrees(&b).unwrap();
        assert!(agg.ok());
        assert_eq!((agg.lo, agg.hi), (0, 2));
        // A comparison whose shared window carries no informative exponent
        // must error, not silently pass: here `a` has information only from
        // exponent 5 on, while `z` is known just below it.
        let a5 = s(5, &[1], 9);
        let z = QSeries::zero_to(5);
        assert!(matches!(a5.agrees(&z), Err(Error::EmptyOverlap { .. })));
    }

    #[test]
    fn v_op_window() {
        let a = s(-1, &[1, 2, 3], 2);
        let v = a.v_op(3);
        assert_eq!(v.valuation(), Some(-3));
        assert_eq!(v.prec(), (2 - 1) * 3 + 1);
        assert_eq!(v.coeff(-3).unwrap(), qr(1));
        assert_eq!(v.coeff(-2).unwrap(), qr(0));
        assert_eq!(v.coeff(0).unwrap(), qr(2));
        assert_eq!(v.coeff(3).unwrap(), qr(3));
    }
}
