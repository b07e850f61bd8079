//! Structural identities tying the two bases together, verified on finite
//! windows: the duality grid, the theta-expansion of basis rows, the
//! two-variable generating function of the f-rows (numerator and
//! cleared-denominator forms), and the coefficient reduction of the
//! holomorphic-row generating identity.
//!
//! With g the genus, f_m the basis rows (f_0 = 1, gap rows zero), h_n the
//! weight-2 rows and chi(k) = [q^{-k}] f_{g+1} (so chi(g+1) = 1, chi(0) = 0,
//! chi(l) = a(g+1,-l) in the gap and chi(-k) = a(g+1,k) for k >= 1):
//!
//! ```text
//! duality:   a(m,n) = -b(n,m)                    (m > g, -g <= n)
//! theta:     theta f_m + m h_m
//!              + sum_{l=1..g} l (a(m,-l) h_l - a(m,l) h_{-l}) = 0
//! genfun:    with F(q1,q2) = sum_{m>=0} f_m(q1) q2^m,
//!   (f_{g+1}(q2) - f_{g+1}(q1)) F(q1,q2)
//!     = sum_{j in [-g,g+1], j != 0} chi(j) h_j(q2)
//!     + sum_{m=g+1}^{2g+1} f_m(q1) sum_{l=max(1,m-g-1)}^{g} chi(m-l) h_{-l}(q2)
//! ```
//!
//! and the cleared form replaces the first sum by
//! `-theta f_{g+1}(q2) + sum_j (1-j) chi(j) h_j(q2)`, the two being equal
//! because `-theta f_{g+1} = sum_j j chi(j) h_j` (the theta identity at
//! m = g+1). The holomorphic-row reduction states that for l = 1..g the
//! expansion `h_{-l}(q2) = q2^l - sum_{m>g} a(m,-l) q2^m` holds, which is
//! the duality grid read along a row.

use num_traits::Zero;

use crate::basis::{theta_row_residual, BasisTable, Context};
use crate::biseries::BiSeries;
use crate::errors::Error;
use crate::groups::Group;
use crate::series::{QRat, QSeries};
use crate::Result;

/// Outcome of one identity verification: a named check over a window with
/// the number of coefficient comparisons and rendered witnesses for any
/// failures (empty means pass).
#[derive(Clone, Debug)]
pub struct IdentityReport {
    /// Which identity ran.
    pub name: String,
    /// Group label.
    pub group: String,
    /// Human description of the verified window.
    pub window: String,
    /// Number of coefficient comparisons that were made.
    pub checked: u64,
    /// Rendered witnesses of failures; empty means the identity held.
    pub failures: Vec<String>,
}

impl IdentityReport {
    /// True when every comparison passed.
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verify a(m,n) = -b(n,m) over m = g+1..=m_max, n = -g..=n_max (the n = 0
/// column reads the zero row and holds by convention).
pub fn verify_duality(
    ctx: &Context,
    group: &Group,
    m_max: i64,
    n_max: i64,
) -> Result<IdentityReport> {
    let entry = ctx.entry(group)?;
    let g = entry.genus;
    let prec = m_max.max(n_max) + 1;
    let basis = ctx.f_table(group, m_max.max(n_max + 1).max(g + 1), prec)?;
    let cusp = ctx.cusp_table(group, n_max, prec)?;
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for m in (g + 1)..=m_max {
        for n in -g..=n_max {
            let a = basis.a(m, n)?;
            let b = cusp.b(n, m)?;
            checked += 1;
            if a != -b.clone() && failures.len() < 8 {
                failures.push(format!("a({m},{n}) = {a} but b({n},{m}) = {b}"));
            }
        }
    }
    Ok(IdentityReport {
        name: "duality".into(),
        group: group.to_string(),
        window: format!("m = {}..={m_max}, n = -{g}..={n_max}", g + 1),
        checked,
        failures,
    })
}

/// Verify the theta-expansion identity for every row m = g+1..=m_max, each
/// residual required to be known-zero on a positive window of at least
/// `prec` coefficients.
pub fn verify_theta_rows(
    ctx: &Context,
    group: &Group,
    m_max: i64,
    prec: i64,
) -> Result<IdentityReport> {
    let entry = ctx.entry(group)?;
    let g = entry.genus;
    let basis = ctx.f_table(group, (m_max + 1).max(g + 1), prec + 1)?;
    let cusp = ctx.cusp_table(group, m_max, prec + 1)?;
    let mut checked = 0u64;
    let mut failures = Vec::new();
    let mut narrowest = i64::MAX;
    for m in (g + 1)..=m_max {
        let res = theta_row_residual(&basis, &cusp, m)?;
        narrowest = narrowest.min(res.prec());
        checked += (res.prec() + m).max(0) as u64;
        if !res.is_known_zero() {
            let (n, c) = res
                .support()
                .next()
                .map(|(n, c)| (n, c.clone()))
                .expect("non-zero residual has support");
            if failures.len() < 8 {
                failures.push(format!("row m = {m}: residual {c} q^{n}"));
            }
        }
        if res.prec() < prec && failures.len() < 8 {
            failures.push(format!(
                "row m = {m}: residual window ends at {} < {prec}",
                res.prec()
            ));
        }
    }
    Ok(IdentityReport {
        name: "theta".into(),
        group: group.to_string(),
        window: format!("m = {}..={m_max}, windows to {narrowest}", g + 1),
        checked,
        failures,
    })
}

/// chi(k) = [q^{-k}] f_{g+1}, with chi(0) = 0.
fn chi(basis: &BasisTable, k: i64) -> Result<QRat> {
    if k == 0 {
        return Ok(QRat::zero());
    }
    basis.a(basis.genus() + 1, -k)
}

/// F(q1,q2) = sum_{m=0}^{m2} f_m(q1) q2^m with q2-window m2+1 (row 0 is the
/// constant 1; gap rows are zero).
pub fn build_f_gen(basis: &BasisTable, m2: i64, prec1: i64) -> Result<BiSeries> {
    let g = basis.genus();
    let mut f = BiSeries::zero_to(m2 + 1);
    f.set(0, QSeries::one());
    for m in (g + 1)..=m2 {
        f.set(m, basis.row(m)?.truncated(prec1));
    }
    Ok(f)
}

/// Verify the two-variable generating-function identity in both groupings
/// (numerator form and cleared form; see the module header) on the window
/// q2-degree up to m2 - g - 1, with q1-windows inherited from `prec1`.
pub fn verify_genfun(
    ctx: &Context,
    group: &Group,
    m2: i64,
    prec1: i64,
) -> Result<IdentityReport> {
    let entry = ctx.entry(group)?;
    let g = entry.genus;
    if m2 < g + 2 || prec1 < 1 {
        return Err(Error::Usage(format!(
            "generating-function window m2 = {m2}, prec1 = {prec1} contains no informative \
             coefficient (need m2 >= {}, prec1 >= 1)",
            g + 2
        )));
    }
    let prec = prec1.max(m2 - g + 1).max(g + 2);
    let basis = ctx.f_table(group, m2.max(2 * g + 2), prec)?;
    let cusp = ctx.cusp_table(group, g + 1, prec)?;

    let f_gen = build_f_gen(&basis, m2, prec1)?;
    let fg1 = basis.row(g + 1)?;
    // (f_{g+1}(q2) - f_{g+1}(q1)) F(q1,q2)
    let factor = BiSeries::from_q2(&fg1.truncated(m2 - g)).sub(&BiSeries::from_q1(fg1));
    let lhs = factor.mul(&f_gen);

    // Shared tail: the f_m(q1) x h_{-l}(q2) block.
    let mut tail = BiSeries::zero();
    for m in (g + 1)..=(2 * g + 1) {
        let mut inner = QSeries::zero();
        for l in (m - g - 1).max(1)..=g {
            inner = inner.add(&cusp.row(-l)?.scale(&chi(&basis, m - l)?));
        }
        if !inner.is_known_zero() {
            tail = tail.add(&BiSeries::from_q1(&basis.row(m)?.truncated(prec1)).mul(
                &BiSeries::from_q2(&inner.truncated(m2 - g)),
            ));
        }
    }

    // Numerator grouping: sum_j chi(j) h_j(q2).
    let mut head_numerator = BiSeries::zero();
    // Cleared grouping: -theta f_{g+1}(q2) + sum_j (1-j) chi(j) h_j(q2).
    let mut head_cleared = BiSeries::from_q2(&fg1.truncated(m2 - g).theta().neg());
    for j in (-g..=(g + 1)).filter(|&j| j != 0) {
        let c = chi(&basis, j)?;
        if c.is_zero() {
            continue;
        }
        let h_j = BiSeries::from_q2(&cusp.row(j)?.truncated(m2 - g));
        head_numerator = head_numerator.add(&h_j.scale(&c));
        let weight = crate::series::qr(1 - j) * &c;
        head_cleared = head_cleared.add(&h_j.scale(&weight));
    }

    let mut checked = 0u64;
    let mut failures = Vec::new();
    let mut window = String::new();
    for (label, head) in [("numerator", head_numerator), ("cleared", head_cleared)] {
        let rhs = head.add(&tail);
        let agree = lhs.agrees(&rhs)?;
        checked += agree.compared;
        window = format!("q2-degrees {}..={}", agree.lo2, agree.hi2);
        if let Some((e2, e1, left, right)) = &agree.first_mismatch {
            failures.push(format!(
                "{label} form: at q1^{e1} q2^{e2} left {left} != right {right}"
            ));
        }
    }
    Ok(IdentityReport {
        name: "genfun".into(),
        group: group.to_string(),
        window,
        checked,
        failures,
    })
}

/// Verify the coefficient reduction of the holomorphic-row generating
/// identity: for l = 1..g, the q2-expansion h_{-l}(q2) = q2^l
/// - sum_{m>g} a(m,-l) q2^m coefficientwise out to degree m2.
pub fn verify_genj_reduced(ctx: &Context, group: &Group, m2: i64) -> Result<IdentityReport> {
    let entry = ctx.entry(group)?;
    let g = entry.genus;
    let prec = m2 + 1;
    let basis = ctx.f_table(group, m2.max(g + 1).max(2), prec)?;
    let mut checked = 0u64;
    let mut failures = Vec::new();
    if g == 0 {
        return Ok(IdentityReport {
            name: "genj".into(),
            group: group.to_string(),
            window: "genus 0: no holomorphic rows".into(),
            checked,
            failures,
        });
    }
    let cusp = ctx.cusp_table(group, 1, prec)?;
    for l in 1..=g {
        for m in 1..=m2 {
            let b = cusp.b(-l, m)?;
            let expect = if m == l {
                crate::series::qr(1)
            } else if m <= g {
                QRat::zero()
            } else {
                -basis.a(m, -l)?
            };
            checked += 1;
            if b != expect && failures.len() < 8 {
                failures.push(format!("l = {l}: [q^{m}] h_-{l} = {b}, expected {expect}"));
            }
        }
    }
    Ok(IdentityReport {
        name: "genj".into(),
        group: group.to_string(),
        window: format!("l = 1..={g}, q2-degrees 1..={m2}"),
        checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new()
    }

    #[test]
    fn duality_holds_on_small_grids() {
        let ctx = ctx();
        for label in ["1", "11", "22+2"] {
            let group: Group = label.parse().unwrap();
            let report = verify_duality(&ctx, &group, 8, 8).unwrap();
            assert!(report.ok(), "{label}: {:?}", report.failures);
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn theta_rows_expand_on_level_11() {
        let ctx = ctx();
        let group: Group = "11".parse().unwrap();
        let report = verify_theta_rows(&ctx, &group, 4, 12).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn genfun_holds_at_genus_zero() {
        let ctx = ctx();
        let group: Group = "1".parse().unwrap();
        let report = verify_genfun(&ctx, &group, 8, 9).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        assert!(report.checked > 0);
    }

    #[test]
    fn genfun_holds_at_genus_one() {
        let ctx = ctx();
        let group: Group = "11".parse().unwrap();
        let report = verify_genfun(&ctx, &group, 10, 10).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn genfun_holds_at_genus_two() {
        let ctx = ctx();
        let group: Group = "22".parse().unwrap();
        let report = verify_genfun(&ctx, &group, 9, 8).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn genj_reduction_holds() {
        let ctx = ctx();
        for label in ["11", "22"] {
            let group: Group = label.parse().unwrap();
            let report = verify_genj_reduced(&ctx, &group, 12).unwrap();
            assert!(report.ok(), "{label}: {:?}", report.failures);
        }
    }

    #[test]
    fn tiny_window_is_rejected() {
        let ctx = ctx();
        let group: Group = "11".parse().unwrap();
        match verify_genfun(&ctx, &group, 2, 5) {
            Err(Error::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }
}
