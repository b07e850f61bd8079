//! Plicates: principal-part transplants between groups.
//!
//! A function in the span of the canonical basis is pinned down by its
//! constant term and principal part,
//!
//! ```text
//! f = a_0 + sum_{n >= 1} a_n q^{-n} + O(q) = a_0 + sum_{n > g} a_n f_n,
//! ```
//!
//! so the pair `(a_0; a_1, a_2, ...)` is a faithful, group-independent
//! fingerprint. The m-plicate keeps the fingerprint and moves the group:
//! `f^(m)` lives on the reduction of Gamma by m (level divided down, plus
//! list filtered). Whether the transplant is an honest modular function is a
//! finite check on the target group: the coefficients the fingerprint demands
//! at the gap orders must agree with what its span combination produces,
//!
//! ```text
//! d_l = a_l - sum_{n > g'} a_n a'(n, -l) = 0    for 1 <= l <= g'.
//! ```
//!
//! When some `d_l != 0` the plicate is mock — no genuine expansion exists —
//! and materializing it reports the defect vector instead of a series.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::basis::{expand_in_f_basis, Context};
use crate::errors::Error;
use crate::groups::{factorize, Group};
use crate::Result;
use crate::series::{fmt_rat, QRat, QSeries, PREC_INF};

/// Constant term plus principal-part coefficients of a span element,
/// together with the group the data is currently read on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JCombo {
    group: Group,
    constant: QRat,
    /// n -> a_n for n >= 1, nonzero entries only.
    coeffs: BTreeMap<i64, QRat>,
}

impl JCombo {
    /// Assemble a combo from explicit data. Zero coefficients are dropped;
    /// exponents must be >= 1.
    pub fn new(group: Group, constant: QRat, coeffs: impl IntoIterator<Item = (i64, QRat)>) -> Self {
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            assert!(n >= 1, "principal-part exponent must be >= 1, got {n}");
            if !c.is_zero() {
                map.insert(n, c);
            }
        }
        JCombo {
            group,
            constant,
            coeffs: map,
        }
    }

    /// Group the fingerprint is currently read on.
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Constant term a_0.
    pub fn constant(&self) -> &QRat {
        &self.constant
    }

    /// Principal-part coefficient a_n (zero when absent).
    pub fn coeff(&self, n: i64) -> QRat {
        self.coeffs.get(&n).cloned().unwrap_or_else(QRat::zero)
    }

    /// Nonzero principal-part coefficients, ascending in n.
    pub fn coeffs(&self) -> &BTreeMap<i64, QRat> {
        &self.coeffs
    }

    /// Deepest pole order carried (0 for a constant).
    pub fn max_pole(&self) -> i64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }
}

impl fmt::Display for JCombo {
    /// Prints the principal-part polynomial, deepest pole first:
    /// `q^-3 + 2*q^-1 + 5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&n, c) in self.coeffs.iter().rev() {
            let mag = fmt_rat(&c.abs());
            let sign = c < &QRat::zero();
            match (first, sign) {
                (true, false) => {}
                (true, true) => write!(f, "-")?,
                (false, false) => write!(f, " + ")?,
                (false, true) => write!(f, " - ")?,
            }
            if mag == "1" {
                write!(f, "q^-{n}")?;
            } else {
                write!(f, "{mag}*q^-{n}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", fmt_rat(&self.constant))?;
        } else if !self.constant.is_zero() {
            let mag = fmt_rat(&self.constant.abs());
            if self.constant < QRat::zero() {
                write!(f, " - {mag}")?;
            } else {
                write!(f, " + {mag}")?;
            }
        }
        Ok(())
    }
}

/// Read a series' fingerprint off its expansion, verifying span membership on
/// the series' declared window (truncate the input first to relax the check).
/// A nonzero residual is [`Error::NotInSpan`].
pub fn j_expand(ctx: &Context, group: &Group, f: &QSeries) -> Result<JCombo> {
    let entry = ctx.entry(group)?;
    let g = entry.genus;
    let pole = f.pole_order();
    let want = if f.prec() >= PREC_INF {
        entry.prec
    } else {
        f.prec()
    }
    .max(g + 2);
    // Verify on the window both sides know: the input's declared window,
    // clamped to what the shipped data can reach at this pole range.
    let table = match ctx.f_table(group, pole.max(g + 1), want) {
        Ok(t) => t,
        Err(Error::PrecisionShortfall { available, .. }) if available >= g + 2 => {
            ctx.f_table(group, pole.max(g + 1), available)?
        }
        Err(e) => return Err(e),
    };
    let cutoff = want.min(table.prec_floor());
    let expansion = expand_in_f_basis(&f.truncated(cutoff), &table)?;
    if !expansion.residual.is_known_zero() {
        return Err(Error::NotInSpan {
            group: group.to_string(),
            residual: expansion.residual.to_string(),
        });
    }
    let mut coeffs = BTreeMap::new();
    for n in 1..=pole {
        let c = f.coeff(-n)?;
        if !c.is_zero() {
            coeffs.insert(n, c);
        }
    }
    Ok(JCombo {
        group: group.clone(),
        constant: expansion.constant,
        coeffs,
    })
}

/// The m-plicate: same fingerprint, group reduced by m. Total — mockness
/// shows up later, when the result is tested or materialized.
pub fn plicate(combo: &JCombo, m: u64) -> JCombo {
    JCombo {
        group: combo.group.reduce_m(m),
        constant: combo.constant.clone(),
        coeffs: combo.coeffs.clone(),
    }
}

/// Gap-order defects d_l = a_l - sum_{n > g'} a_n a'(n, -l) on the combo's
/// own group, for 1 <= l <= g'. Empty exactly when the combo is the
/// fingerprint of an honest span element.
pub fn holomorphy_defects(ctx: &Context, combo: &JCombo) -> Result<Vec<(i64, QRat)>> {
    let entry = ctx.entry(&combo.group)?;
    let g = entry.genus;
    if g == 0 {
        return Ok(Vec::new());
    }
    let table = ctx.f_table(&combo.group, combo.max_pole().max(g + 1), g + 2)?;
    let mut defects = Vec::new();
    for l in 1..=g {
        let mut d = combo.coeff(l);
        for (&n, a_n) in &combo.coeffs {
            if n > g {
                d = d - a_n * &table.a(n, -l)?;
            }
        }
        if !d.is_zero() {
            defects.push((l, d));
        }
    }
    Ok(defects)
}

/// One prime step of a plicate with an eager holomorphy test; `context`
/// labels the failure if the step lands on a mock combo.
pub fn plicate_step(ctx: &Context, combo: &JCombo, p: u64, context: &str) -> Result<JCombo> {
    let next = plicate(combo, p);
    let defects = holomorphy_defects(ctx, &next)?;
    if defects.is_empty() {
        Ok(next)
    } else {
        Err(Error::Mock {
            group: next.group.to_string(),
            residuals: defects,
            context: context.to_string(),
        })
    }
}

/// Expand the combo on its own group with positive window at least `prec`,
/// labelling a holomorphy failure with `context`.
pub fn materialize_as(ctx: &Context, combo: &JCombo, prec: i64, context: &str) -> Result<QSeries> {
    let defects = holomorphy_defects(ctx, combo)?;
    if !defects.is_empty() {
        return Err(Error::Mock {
            group: combo.group.to_string(),
            residuals: defects,
            context: context.to_string(),
        });
    }
    let entry = ctx.entry(&combo.group)?;
    let g = entry.genus;
    let table = ctx.f_table(&combo.group, combo.max_pole().max(g + 1), prec)?;
    let terms: Vec<(i64, QRat)> = combo
        .coeffs
        .iter()
        .filter(|&(&n, _)| n > g)
        .map(|(&n, c)| (n, c.clone()))
        .collect();
    Ok(table.combine(&terms, &combo.constant)?.truncated(prec))
}

/// [`materialize_as`] with a generic context label.
pub fn materialize(ctx: &Context, combo: &JCombo, prec: i64) -> Result<QSeries> {
    materialize_as(ctx, combo, prec, "materialize")
}

/// The m-plicate as a series: reduce prime by prime (ascending), testing
/// holomorphy after every step, then expand to window `prec`. Any mock
/// intermediate aborts with its defect vector.
pub fn plicate_series(ctx: &Context, combo: &JCombo, m: u64, prec: i64) -> Result<QSeries> {
    let mut cur = combo.clone();
    for (p, k) in factorize(m) {
        for _ in 0..k {
            cur = plicate_step(ctx, &cur, p, &format!("{m}-plicate, prime step {p}"))?;
        }
    }
    materialize_as(ctx, &cur, prec, &format!("{m}-plicate"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::qr;

    fn ctx() -> Context {
        Context::new()
    }

    #[test]
    fn expand_roundtrips_a_basis_row() {
        let ctx = ctx();
        let g11: Group = "11".parse().unwrap();
        let table = ctx.f_table(&g11, 4, 30).unwrap();
        let f3 = table.row(3).unwrap().clone();
        let combo = j_expand(&ctx, &g11, &f3).unwrap();
        assert_eq!(combo.max_pole(), 3);
        assert_eq!(combo.coeff(3), qr(1));
        assert_eq!(combo.coeff(1), table.a(3, -1).unwrap());
        assert!(combo.constant().is_zero());
        let back = materialize(&ctx, &combo, 30).unwrap();
        assert!(back.agrees(&f3).unwrap().ok());
    }

    #[test]
    fn two_plicate_of_level_22_row_lands_on_level_11() {
        let ctx = ctx();
        let g22: Group = "22".parse().unwrap();
        let t22 = ctx.f_table(&g22, 3, 25).unwrap();
        let combo = j_expand(&ctx, &g22, t22.row(3).unwrap()).unwrap();
        let two = plicate(&combo, 2);
        assert_eq!(two.group().to_string(), "11");
        assert!(holomorphy_defects(&ctx, &two).unwrap().is_empty());
        let s = plicate_series(&ctx, &combo, 2, 25).unwrap();
        let t11 = ctx.f_table(&"11".parse().unwrap(), 3, 25).unwrap();
        assert!(s.agrees(t11.row(3).unwrap()).unwrap().ok());
    }

    #[test]
    fn eleven_plicate_of_level_22_row_lands_on_level_2() {
        let ctx = ctx();
        let g22: Group = "22".parse().unwrap();
        let t22 = ctx.f_table(&g22, 3, 25).unwrap();
        let combo = j_expand(&ctx, &g22, t22.row(3).unwrap()).unwrap();
        let eleven = plicate(&combo, 11);
        assert_eq!(eleven.group().to_string(), "2");
        let s = plicate_series(&ctx, &combo, 11, 20).unwrap();
        let t2 = ctx.f_table(&"2".parse().unwrap(), 3, 20).unwrap();
        let expect = t2
            .combine(&[(1, combo.coeff(1)), (3, qr(1))], &qr(0))
            .unwrap();
        assert!(s.agrees(&expect).unwrap().ok());
    }

    #[test]
    fn mock_plicate_reports_defect() {
        let ctx = ctx();
        let gp: Group = "22+2".parse().unwrap();
        let tp = ctx.f_table(&gp, 2, 25).unwrap();
        let combo = j_expand(&ctx, &gp, tp.row(2).unwrap()).unwrap();
        let two = plicate(&combo, 2);
        assert_eq!(two.group().to_string(), "11");
        let defects = holomorphy_defects(&ctx, &two).unwrap();
        assert_eq!(defects, vec![(1, qr(-2))]);
        match materialize(&ctx, &two, 10) {
            Err(Error::Mock { residuals, .. }) => assert_eq!(residuals, vec![(1, qr(-2))]),
            other => panic!("expected mock, got {other:?}"),
        }
    }

    #[test]
    fn off_span_series_is_rejected() {
        let ctx = ctx();
        let g11: Group = "11".parse().unwrap();
        let bad = QSeries::monomial(-2, qr(1)).truncated(10);
        match j_expand(&ctx, &g11, &bad) {
            Err(Error::NotInSpan { .. }) => {}
            other => panic!("expected NotInSpan, got {other:?}"),
        }
    }

    #[test]
    fn display_prints_principal_part() {
        let g: Group = "11".parse().unwrap();
        let combo = JCombo::new(g, qr(5), [(3, qr(1)), (1, qr(-2))]);
        assert_eq!(combo.to_string(), "q^-3 - 2*q^-1 + 5");
    }
}
