//! Congruence scanners over the basis coefficient grid.
//!
//! For a group of genus g >= 1 with echelon basis rows f_m and coefficients
//! a(m,n), the families below are checked over a range of n, filtered to the
//! stated coprimality. Every value is verified to be an integer before
//! reduction; a non-integer anywhere is a hard error, never a "failure".
//!
//! ```text
//! tcong   (p > g, p∤m, m > g; p∤n):
//!           a(m p^r, n) + sum_l a(m,-l) a(l p^r, n) == 0         (mod p^r)
//! ladder  (p∤N, p > g, m > g; p∤n):
//!           a(m p^r, n) + sum_l a(m p^{r-1},-l) a(l p, n) == 0   (mod p)
//! strong  (p∤N, p∤m, m > g; p∤n):
//!           a(m p^r, n) + sum_l sum_{p^j | gcd(l,p)}
//!               p^j a(m,-l) a(l p^{r-2j}, n) == 0                (mod p^r)
//! modp    (p∤N, m > g; p∤n): the tcong sum, modulus p only
//!           (p | m and p <= g are allowed)
//! swap    (p∤N, p > g, m > g; p∤n):
//!           sum_l a(m p^{r-1},-l) a(l p, n)
//!               == sum_l a(m,-l) a(l p^r, n)                     (mod p)
//! allp    (p > g, m > g; p∤n): the tcong sum, modulus p only
//!           (p | N and p | m are allowed)
//! vseries (p | N, m > g), as q-series on a window:
//!           f_{p^r m} + sum_l a(m,-l) f_{l p^r}
//!               == V(p^r) f^{(p^r)}_m                            (mod p)
//! plicate (replicate exists, integer coefficients), as q-series:
//!           f == f^{(p)}                                         (mod p)
//! ```
//!
//! Probe mode deliberately breaks each family to guard the scanner against
//! vacuous passes: the coefficient families scan p | n instead of p ∤ n,
//! vseries drops the gap-correction sum from its left-hand side, and plicate
//! reduces the same difference f - f^{(p)} by a small prime foreign to both p
//! and the level, where the statement claims nothing. A probe is expected to
//! surface at least one failure witness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::basis::{BasisTable, Context};
use crate::errors::Error;
use crate::groups::Group;
use crate::hecke::{ceil_div, prime_power};
use crate::replicate::{j_expand, materialize_as, plicate_step};
use crate::series::{qr, QRat, QSeries, PREC_INF};
use crate::Result;

/// The congruence statements the scanner knows how to check.
#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub enum Family {
    /// Modulus p^r; holds for any p > g with p ∤ m, including p | N.
    TCong,
    /// Modulus p via the stepped gap coefficients a(m p^{r-1}, -l).
    Ladder,
    /// Modulus p^r with the gcd-weighted double sum; p ∤ N, p ∤ m.
    Strong,
    /// Modulus p; p ∤ N but p | m and p <= g are allowed.
    ModP,
    /// The two gap-correction sums agree mod p.
    Swap,
    /// Modulus p for any prime p > g, including p | N and p | m.
    AllP,
    /// Series congruence against V(p^r) of the p^r-plicate; p | N.
    VSeries,
    /// Series congruence of a function against its p-plicate.
    Plicate,
}

impl Family {
    /// Stable identifier used by the CLI and in reports.
    pub fn id(self) -> &'static str {
        match self {
            Family::TCong => "tcong",
            Family::Ladder => "ladder",
            Family::Strong => "strong",
            Family::ModP => "modp",
            Family::Swap => "swap",
            Family::AllP => "allp",
            Family::VSeries => "vseries",
            Family::Plicate => "plicate",
        }
    }

    /// All scannable families, in report order.
    pub fn all() -> [Family; 8] {
        [
            Family::TCong,
            Family::Ladder,
            Family::Strong,
            Family::ModP,
            Family::Swap,
            Family::AllP,
            Family::VSeries,
            Family::Plicate,
        ]
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::all()
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown congruence family '{s}' (expected one of {})",
                    Family::all().map(|f| f.id()).join(", ")
                ))
            })
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Outcome of one congruence scan.
#[derive(Clone, Debug)]
pub struct CongruenceReport {
    /// Family identifier.
    pub family: String,
    /// Group label.
    pub group: String,
    /// Base row index m.
    pub m: i64,
    /// The prime p.
    pub p: u64,
    /// The exponent r.
    pub r: u32,
    /// Top of the scanned n-range (coefficient families) or of the
    /// compared exponent window (series families).
    pub n_max: i64,
    /// The modulus the values were reduced by.
    pub modulus: BigInt,
    /// True when the scan ran in probe (deliberate-violation) mode.
    pub probe: bool,
    /// Number of values or coefficients checked.
    pub checked: u64,
    /// Total failing values.
    pub failed: u64,
    /// Rendered witnesses for the first few failures.
    pub failures: Vec<String>,
}

impl CongruenceReport {
    /// True when every checked value satisfied the congruence.
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn hypothesis(family: Family, detail: String) -> Error {
    Error::Hypothesis {
        family: family.id().to_string(),
        detail,
    }
}

/// Run one family over its parameter grid. For the coefficient families the
/// scan covers 1 <= n <= n_max with the n-filter stated in the module
/// header; for the series families n_max bounds the compared window.
pub fn scan(
    ctx: &Context,
    group: &Group,
    family: Family,
    m: i64,
    p: u64,
    r: u32,
    n_max: i64,
    probe: bool,
) -> Result<CongruenceReport> {
    let entry = ctx.entry(group)?;
    let g = entry.genus;
    let level = group.level();
    let divides_level = level % p == 0;
    if r < 1 || m < 1 || n_max < 1 {
        return Err(Error::Usage(format!(
            "congruence scan needs r >= 1, m >= 1, n_max >= 1 (got r = {r}, m = {m}, n_max = {n_max})"
        )));
    }
    if g < 1 {
        return Err(hypothesis(family, format!("genus of {group} is 0; the statements need genus >= 1")));
    }
    if m <= g {
        return Err(hypothesis(family, format!("m = {m} must exceed the genus {g}")));
    }
    let needs_p_gt_g = matches!(
        family,
        Family::TCong | Family::Ladder | Family::Swap | Family::AllP
    );
    if needs_p_gt_g && p as i64 <= g {
        return Err(hypothesis(family, format!("p = {p} must exceed the genus {g}")));
    }
    let needs_coprime_level = matches!(
        family,
        Family::Ladder | Family::Strong | Family::ModP | Family::Swap
    );
    if needs_coprime_level && divides_level {
        return Err(hypothesis(family, format!("p = {p} must not divide the level {level}")));
    }
    let needs_coprime_m = matches!(family, Family::TCong | Family::Strong);
    if needs_coprime_m && m as u64 % p == 0 {
        return Err(hypothesis(family, format!("p = {p} must not divide m = {m}")));
    }
    if family == Family::VSeries && !divides_level {
        return Err(hypothesis(family, format!("p = {p} must divide the level {level}")));
    }

    match family {
        Family::VSeries => scan_vseries(ctx, group, g, m, p, r, n_max, probe),
        Family::Plicate => {
            let basis = ctx.f_table(group, m, entry.prec.min(n_max + 1).max(g + 2))?;
            check_plicate_inner(ctx, group, basis.row(m)?, m, p, r, n_max, probe)
        }
        _ => scan_coefficients(ctx, group, family, g, m, p, r, n_max, probe),
    }
}

/// Convenience wrapper for the headline mod-p^r statement.
pub fn check_tcong(
    ctx: &Context,
    group: &Group,
    m: i64,
    p: u64,
    r: u32,
    n_max: i64,
) -> Result<CongruenceReport> {
    scan(ctx, group, Family::TCong, m, p, r, n_max, false)
}

/// Compare a function against its p-plicate mod p on a shared window of
/// `window` positive coefficients. Both sides must have integer
/// coefficients and the plicate must materialize.
pub fn check_plicate_cong(
    ctx: &Context,
    group: &Group,
    f: &QSeries,
    p: u64,
    window: i64,
) -> Result<CongruenceReport> {
    check_plicate_inner(ctx, group, f, f.pole_order(), p, 1, window, false)
}

fn scan_coefficients(
    ctx: &Context,
    group: &Group,
    family: Family,
    g: i64,
    m: i64,
    p: u64,
    r: u32,
    n_max: i64,
    probe: bool,
) -> Result<CongruenceReport> {
    let q = prime_power(p, r)?;
    let m_top = m
        .checked_mul(q)
        .filter(|&t| t < PREC_INF)
        .ok_or_else(|| Error::Usage(format!("row index m * p^r = {m} * {q} overflows")))?;
    let basis = ctx.f_table(group, m_top.max(g + 1), n_max + 1)?;
    let modulus = match family {
        Family::TCong | Family::Strong => BigInt::from(p).pow(r),
        _ => BigInt::from(p),
    };
    let pi = p as i64;
    let mut checked = 0u64;
    let mut failed = 0u64;
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let admissible = if probe { n % pi == 0 } else { n % pi != 0 };
        if !admissible {
            continue;
        }
        let v = coefficient_value(family, &basis, g, m, pi, q, n)?;
        if !v.denom().is_one() {
            return Err(Error::NonIntegral {
                exponent: n,
                value: v,
                context: format!("{family} scan on {group} at m = {m}, p = {p}, r = {r}"),
            });
        }
        checked += 1;
        if !v.numer().mod_floor(&modulus).is_zero() {
            failed += 1;
            if failures.len() < 8 {
                failures.push(format!("n = {n}: value {} != 0 (mod {modulus})", v.numer()));
            }
        }
    }
    Ok(CongruenceReport {
        family: family.id().to_string(),
        group: group.to_string(),
        m,
        p,
        r,
        n_max,
        modulus,
        probe,
        checked,
        failed,
        failures,
    })
}

/// The integer whose vanishing mod the family's modulus is asserted at
/// column n. Row indices that land in the pole gap read the zero row.
fn coefficient_value(
    family: Family,
    basis: &BasisTable,
    g: i64,
    m: i64,
    p: i64,
    q: i64,
    n: i64,
) -> Result<QRat> {
    match family {
        Family::TCong | Family::ModP | Family::AllP => {
            let mut v = basis.a(m * q, n)?;
            for l in 1..=g {
                v = v + basis.a(m, -l)? * basis.a(l * q, n)?;
            }
            Ok(v)
        }
        Family::Ladder => {
            let mut v = basis.a(m * q, n)?;
            for l in 1..=g {
                v = v + basis.a(m * (q / p), -l)? * basis.a(l * p, n)?;
            }
            Ok(v)
        }
        Family::Strong => {
            let mut v = basis.a(m * q, n)?;
            for l in 1..=g {
                let c = basis.a(m, -l)?;
                v = v + c.clone() * basis.a(l * q, n)?;
                if l % p == 0 {
                    // j = 1 branch: index l p^{r-2} stays integral because
                    // p | l; it may land in the gap, where the row is zero.
                    v = v + qr(p) * c * basis.a((l / p) * (q / p), n)?;
                }
            }
            Ok(v)
        }
        Family::Swap => {
            let mut v = QRat::zero();
            for l in 1..=g {
                v = v + basis.a(m * (q / p), -l)? * basis.a(l * p, n)?
                    - basis.a(m, -l)? * basis.a(l * q, n)?;
            }
            Ok(v)
        }
        Family::VSeries | Family::Plicate => unreachable!("series families"),
    }
}

fn scan_vseries(
    ctx: &Context,
    group: &Group,
    g: i64,
    m: i64,
    p: u64,
    r: u32,
    window: i64,
    probe: bool,
) -> Result<CongruenceReport> {
    let family = Family::VSeries;
    let label = format!("{family} on {group} at m = {m}, p = {p}, r = {r}");
    let q = prime_power(p, r)?;
    let m_top = m
        .checked_mul(q)
        .filter(|&t| t < PREC_INF)
        .ok_or_else(|| Error::Usage(format!("row index m * p^r = {m} * {q} overflows")))?;
    let basis = ctx.f_table(group, m_top.max(g + 1), window + 1)?;
    // Left side: f_{p^r m} plus the gap correction (dropped in probe mode,
    // deliberately malforming the statement).
    let mut terms = vec![(m_top, qr(1))];
    if !probe {
        for l in 1..=g {
            terms.push((l * q, basis.a(m, -l)?));
        }
    }
    let lhs = basis.combine(&terms, &QRat::zero())?;
    // Right side: V(p^r) of the p^r-plicate of f_m.
    let mut combo = j_expand(ctx, group, basis.row(m)?)?;
    for _ in 0..r {
        combo = plicate_step(ctx, &combo, p, &label)?;
    }
    let need = ceil_div(window, q) + 1;
    let rhs = materialize_as(ctx, &combo, need, &label)?.v_op(q as u64);
    let modulus = BigInt::from(p);
    let diff = lhs.sub(&rhs).truncated(window + 1);
    let red = diff.mod_reduce(&modulus)?;
    let mut failed = 0u64;
    let mut failures = Vec::new();
    for (e, c) in red.support() {
        if !c.is_zero() {
            failed += 1;
            if failures.len() < 8 {
                failures.push(format!("q^{e}: sides differ by {c} (mod {modulus})"));
            }
        }
    }
    Ok(CongruenceReport {
        family: family.id().to_string(),
        group: group.to_string(),
        m,
        p,
        r,
        n_max: window,
        modulus,
        probe,
        checked: (red.prec() + m_top).max(0) as u64,
        failed,
        failures,
    })
}

/// Smallest prime dividing neither `p` nor `level`; used as the probe modulus
/// for the plicate family.
fn foreign_prime(p: u64, level: u64) -> u64 {
    [2, 3, 5, 7, 11, 13]
        .into_iter()
        .find(|&q| p % q != 0 && level % q != 0)
        .expect("levels in the catalog have at most two prime factors")
}

fn check_plicate_inner(
    ctx: &Context,
    group: &Group,
    f: &QSeries,
    m: i64,
    p: u64,
    r: u32,
    window: i64,
    probe: bool,
) -> Result<CongruenceReport> {
    let family = Family::Plicate;
    let label = format!("{family} congruence on {group} at p = {p}");
    let combo = j_expand(ctx, group, f)?;
    let mut pl = combo;
    for _ in 0..r {
        pl = plicate_step(ctx, &pl, p, &label)?;
    }
    let prec = if f.prec() >= PREC_INF {
        window + 1
    } else {
        f.prec().min(window + 1)
    };
    let fp = materialize_as(ctx, &pl, prec, &label)?;
    // Probe mode swaps in a modulus the statement says nothing about: the
    // difference f - f^{(p)} is generically nonzero away from p, so reducing
    // it by a prime foreign to p and the level must surface witnesses.
    let modulus = if probe {
        BigInt::from(foreign_prime(p, group.level()))
    } else {
        BigInt::from(p)
    };
    let diff = f.truncated(prec).sub(&fp);
    let red = diff.mod_reduce(&modulus)?;
    let mut failed = 0u64;
    let mut failures = Vec::new();
    for (e, c) in red.support() {
        if !c.is_zero() {
            failed += 1;
            if failures.len() < 8 {
                failures.push(format!("q^{e}: sides differ by {c} (mod {modulus})"));
            }
        }
    }
    Ok(CongruenceReport {
        family: family.id().to_string(),
        group: group.to_string(),
        m,
        p,
        r,
        n_max: window,
        modulus,
        probe,
        checked: (red.prec() + f.pole_order()).max(0) as u64,
        failed,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new()
    }

    fn eleven() -> Group {
        "11".parse().unwrap()
    }

    #[test]
    fn tcong_passes_mod_nine() {
        let report = check_tcong(&ctx(), &eleven(), 2, 3, 2, 30).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        assert!(report.checked >= 20);
        assert_eq!(report.modulus, BigInt::from(9));
    }

    #[test]
    fn tcong_allows_level_primes() {
        let report = check_tcong(&ctx(), &eleven(), 2, 11, 1, 20).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn tcong_probe_finds_witnesses() {
        let report = scan(&ctx(), &eleven(), Family::TCong, 2, 3, 2, 50, true).unwrap();
        assert!(!report.ok(), "probe unexpectedly passed");
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn ladder_passes_and_rejects_level_primes() {
        let ctx = ctx();
        let report = scan(&ctx, &eleven(), Family::Ladder, 2, 3, 2, 30, false).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        match scan(&ctx, &eleven(), Family::Ladder, 2, 11, 1, 20, false) {
            Err(Error::Hypothesis { family, .. }) => assert_eq!(family, "ladder"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn strong_passes_mod_nine() {
        let report = scan(&ctx(), &eleven(), Family::Strong, 2, 3, 2, 30, false).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        assert_eq!(report.modulus, BigInt::from(9));
    }

    #[test]
    fn modp_allows_p_dividing_m() {
        let report = scan(&ctx(), &eleven(), Family::ModP, 4, 2, 2, 31, false).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn swap_passes_mod_three() {
        let report = scan(&ctx(), &eleven(), Family::Swap, 2, 3, 2, 30, false).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn allp_covers_level_and_divisible_m() {
        let report = scan(&ctx(), &eleven(), Family::AllP, 2, 11, 1, 20, false).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn vseries_passes_on_level_22() {
        let group: Group = "22".parse().unwrap();
        let report = scan(&ctx(), &group, Family::VSeries, 3, 2, 1, 40, false).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        assert!(report.checked >= 40);
    }

    #[test]
    fn vseries_probe_finds_witnesses() {
        // At p = 2 the dropped correction is structurally even (l = 1 reads
        // the gap row and a(m,-2) is even by the plicate congruence), so the
        // probe runs at p = 11 where a(3,-1) = 1 survives the reduction.
        let group: Group = "22".parse().unwrap();
        let report = scan(&ctx(), &group, Family::VSeries, 3, 11, 1, 40, true).unwrap();
        assert!(!report.ok(), "probe unexpectedly passed");
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn coefficient_probes_find_witnesses() {
        let ctx = ctx();
        for family in [
            Family::Ladder,
            Family::Strong,
            Family::ModP,
            Family::Swap,
            Family::AllP,
        ] {
            let report = scan(&ctx, &eleven(), family, 2, 3, 2, 60, true).unwrap();
            assert!(!report.ok(), "{family} probe unexpectedly passed");
        }
    }

    #[test]
    fn plicate_matches_example_congruences() {
        let ctx = ctx();
        let group: Group = "22".parse().unwrap();
        let basis = ctx.f_table(&group, 3, 101).unwrap();
        let f = basis.row(3).unwrap();
        for p in [2u64, 11] {
            let report = check_plicate_cong(&ctx, &group, f, p, 100).unwrap();
            assert!(report.ok(), "p = {p}: {:?}", report.failures);
            assert!(report.checked >= 100);
        }
    }

    #[test]
    fn plicate_probe_finds_witnesses() {
        // The difference f_{22,3} - f^{(2)} is 0 mod 2 but its q^3 term is
        // -16, which a reduction mod 3 (foreign to p = 2 and N = 22) exposes.
        let group: Group = "22".parse().unwrap();
        let report = scan(&ctx(), &group, Family::Plicate, 3, 2, 1, 30, true).unwrap();
        assert_eq!(report.modulus, BigInt::from(3));
        assert!(!report.ok(), "probe unexpectedly passed");
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn family_ids_round_trip() {
        for f in Family::all() {
            let parsed: Family = f.id().parse().unwrap();
            assert_eq!(parsed, f);
        }
        assert!("bogus".parse::<Family>().is_err());
    }
}
