//! Canonical bases of the weight-0 and weight-2 spaces with poles only at
//! infinity.
//!
//! For a supported group of genus g the weight-0 space M_0^{!,infty} has a
//! canonical basis
//!
//!   f_0 = 1,   f_m = q^-m + sum_{l=1..g} a(m,-l) q^-l + sum_{n>=1} a(m,n) q^n
//!
//! for m > g (the gap theorem leaves no basis element with pole order in
//! 1..g; the builder stores zero rows there so closed-form Hecke identities
//! can reference them uniformly). Rows are produced by reducing monomials in
//! the shipped generators — X^i, Y X^i, Z X^i cover every pole order > g —
//! against the rows already built, so pivots stay 1 and integral generators
//! yield integral rows.
//!
//! The weight-2 space S_2^{!,infty} gets the dual basis
//!
//!   h_{-l} = q^l + O(q^{g+1})  (l = 1..g, echelonized cusp seeds),
//!   h_0 = 0,
//!   h_n = q^-n + sum_{m>g} b(n,m) q^m  (n >= 1),
//!
//! where h_n is cut from f_{n+l} h_{-l}: clearing the intermediate poles
//! must leave constant term zero (the residue of a weight-2 form with its
//! only pole at infinity vanishes), which the builder asserts. At genus 0
//! there are no cusp seeds and the dual rows are h_n = -(theta J_n)/n.
//!
//! Duality pairs the two tables: a(m,n) = -b(n,m) wherever both sides are
//! defined, which [`validate_entry`] checks on a grid together with a full
//! positive-window expansion of -theta f_m in the h-basis.

use crate::catalog::{CatalogEntry, Generators, SeriesId, ValidateOptions, ValidationReport};
use crate::errors::Error;
use crate::groups::Group;
use crate::series::{qr, QRat, QSeries, PREC_INF};
use crate::Result;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Echelonized basis of M_0^{!,infty}: rows f_0, (zero gap rows), f_{g+1}...
#[derive(Clone, Debug)]
pub struct BasisTable {
    group: Group,
    genus: i64,
    m_max: i64,
    prec_floor: i64,
    requested_prec: i64,
    rows: Vec<QSeries>,
}

impl BasisTable {
    /// The group the table lives on.
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Genus of the entry the table was built from.
    pub fn genus(&self) -> i64 {
        self.genus
    }

    /// Largest pole order covered.
    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    /// Smallest positive-exponent precision over the built rows.
    pub fn prec_floor(&self) -> i64 {
        self.prec_floor
    }

    /// Row f_m (f_0 = 1; rows with 1 <= m <= genus are identically zero, the
    /// convention that makes the closed-form Hecke identities uniform).
    pub fn row(&self, m: i64) -> Result<&QSeries> {
        if m < 0 || m > self.m_max {
            return Err(self.range_err(m));
        }
        Ok(&self.rows[m as usize])
    }

    /// Basis coefficient a(m,n) = [q^n] f_m for m = 0 or m > genus.
    /// Indices 1 <= m <= genus are rejected: those rows do not exist as
    /// basis elements, and a caller asking for their coefficients has a bug.
    pub fn a(&self, m: i64, n: i64) -> Result<QRat> {
        if m != 0 && m <= self.genus {
            return Err(self.range_err(m));
        }
        self.row(m)?.coeff(n)
    }

    /// Materialize the combination sum_m terms[m] f_m + constant.
    pub fn combine(&self, terms: &[(i64, QRat)], constant: &QRat) -> Result<QSeries> {
        let mut acc = QSeries::constant(constant.clone());
        for (m, c) in terms {
            acc = acc.add(&self.row(*m)?.scale(c));
        }
        Ok(acc)
    }

    fn range_err(&self, m: i64) -> Error {
        Error::TableRange {
            table: "f-basis".into(),
            group: self.group.to_string(),
            covered: format!("m = 0 or {} ..= {}", self.genus + 1, self.m_max),
            requested: m,
        }
    }
}

/// Genus-0 view of a [`BasisTable`]: rows are the Faber polynomials of the
/// Hauptmodul, J_{Gamma,n} = q^-n + O(q) with zero constant term.
#[derive(Clone, Debug)]
pub struct FaberTable(BasisTable);

impl FaberTable {
    /// The underlying basis table (rows J_n = f_n; the spaces coincide at
    /// genus 0).
    pub fn as_basis(&self) -> &BasisTable {
        &self.0
    }

    /// Faber coefficient c(n,l) = [q^l] J_n.
    pub fn c(&self, n: i64, l: i64) -> Result<QRat> {
        self.0.a(n, l)
    }

    /// Row J_n (J_0 = 1).
    pub fn j_row(&self, n: i64) -> Result<&QSeries> {
        self.0.row(n)
    }

    /// Largest index covered.
    pub fn n_max(&self) -> i64 {
        self.0.m_max()
    }
}

/// Build the Faber rows J_0..J_{n_max} of a genus-0 entry, with every row
/// known on [-n_max, prec).
pub fn faber_genus0(entry: &CatalogEntry, n_max: i64, prec: i64) -> Result<FaberTable> {
    if entry.genus != 0 {
        return Err(Error::CatalogInvalid {
            group: entry.group.to_string(),
            detail: format!("faber_genus0 called on a genus-{} entry", entry.genus),
        });
    }
    Ok(FaberTable(build_f_basis(entry, n_max, prec)?))
}

/// Build the echelonized f-basis up to pole order `m_max`, guaranteeing
/// every row is known on positive exponents up to at least `prec`.
pub fn build_f_basis(entry: &CatalogEntry, m_max: i64, prec: i64) -> Result<BasisTable> {
    let g = entry.genus;
    let prec = prec.max(g + 2);
    let m_max = m_max.max(g + 1);
    let mut rows: Vec<QSeries> = Vec::with_capacity((m_max + 1) as usize);
    rows.push(QSeries::one());
    for _ in 1..=g {
        rows.push(QSeries::zero());
    }
    match &entry.gens {
        Generators::Hauptmodul(recipe) => {
            let t = recipe.expand(prec + m_max + 2)?;
            check_normalized(entry, SeriesId::Hauptmodul, &t, 1)?;
            rows.push(t);
            for m in 2..=m_max {
                let cur = rows[(m - 1) as usize].mul(&rows[1]);
                rows.push(reduce_row(entry, cur, m, g, &rows)?);
            }
        }
        Generators::FunctionField { .. } => {
            let gens = entry.pool_generators()?;
            for (id, s) in &gens {
                let pole = match id {
                    SeriesId::X => g + 1,
                    SeriesId::Y => g + 2,
                    SeriesId::Extra(i) => g + 3 + *i as i64,
                    _ => unreachable!("pool_generators yields only X/Y/Z ids"),
                };
                check_normalized(entry, *id, s, pole)?;
            }
            // Cache of X powers; xpow[k] = X^k.
            let mut xpow: Vec<QSeries> = vec![QSeries::one(), gens[0].1.clone()];
            for m in (g + 1)..=m_max {
                let cur = pool_monomial(entry, &gens, g, m, &mut xpow)?;
                rows.push(reduce_row(entry, cur, m, g, &rows)?);
            }
        }
    }
    let prec_floor = rows
        .iter()
        .map(|r| r.prec())
        .min()
        .unwrap_or(PREC_INF);
    if prec_floor < prec {
        return Err(Error::PrecisionShortfall {
            operation: format!("f-basis to m = {m_max} on {}", entry.group),
            required: prec,
            available: prec_floor,
            requested: prec,
        });
    }
    Ok(BasisTable {
        group: entry.group.clone(),
        genus: g,
        m_max,
        prec_floor,
        requested_prec: prec,
        rows,
    })
}

/// Pick the pool monomial with pole order exactly m: X^i when (g+1) | m,
/// otherwise W X^i for the unique non-X generator W whose pole order is
/// congruent to m mod g+1.
fn pool_monomial(
    entry: &CatalogEntry,
    gens: &[(SeriesId, QSeries)],
    g: i64,
    m: i64,
    xpow: &mut Vec<QSeries>,
) -> Result<QSeries> {
    let a = g + 1;
    let mut xpower = |k: i64| -> QSeries {
        while (xpow.len() as i64) <= k {
            let next = xpow.last().expect("xpow seeded").mul(&xpow[1]);
            xpow.push(next);
        }
        xpow[k as usize].clone()
    };
    if m % a == 0 {
        return Ok(xpower(m / a));
    }
    for (i, (_, w)) in gens.iter().enumerate().skip(1) {
        let pole = a + 1 + (i as i64 - 1);
        if m >= pole && (m - pole) % a == 0 {
            return Ok(w.mul(&xpower((m - pole) / a)));
        }
    }
    Err(Error::PoleOrderUnreachable {
        group: entry.group.to_string(),
        order: m,
        max: gens.iter().map(|(_, s)| s.pole_order()).max().unwrap_or(0),
    })
}

/// Reduce a monic pole-order-m candidate against the finished rows below it:
/// clear q^-k for g < k < m and the constant term; coefficients at q^-l for
/// l <= g stay (they are the a(m,-l) of the echelon form).
fn reduce_row(
    entry: &CatalogEntry,
    mut cur: QSeries,
    m: i64,
    g: i64,
    rows: &[QSeries],
) -> Result<QSeries> {
    if cur.valuation() != Some(-m) || !cur.coeff(-m)?.is_one() {
        return Err(Error::CatalogInvalid {
            group: entry.group.to_string(),
            detail: format!(
                "pool candidate for pole order {m} is not monic of valuation {}",
                -m
            ),
        });
    }
    for k in ((g + 1)..m).rev() {
        let c = cur.coeff(-k)?;
        if !c.is_zero() {
            cur = cur.sub(&rows[k as usize].scale(&c));
        }
    }
    let c0 = cur.coeff(0)?;
    if !c0.is_zero() {
        cur = cur.sub(&QSeries::constant(c0));
    }
    Ok(cur)
}

fn check_normalized(
    entry: &CatalogEntry,
    id: SeriesId,
    s: &QSeries,
    pole: i64,
) -> Result<()> {
    let ok = s.valuation() == Some(-pole) && s.coeff(-pole)?.is_one();
    // Hauptmoduln are additionally normalized to zero constant term.
    let ok = ok && (id != SeriesId::Hauptmodul || s.coeff(0)?.is_zero());
    if ok {
        Ok(())
    } else {
        Err(Error::CatalogInvalid {
            group: entry.group.to_string(),
            detail: format!("generator {id} is not normalized (pole order {pole}, monic)"),
        })
    }
}

// ---------------------------------------------------------------------------
// weight-2 tables
// ---------------------------------------------------------------------------

/// Echelonized basis of S_2^{!,infty}: holomorphic rows h_{-l} (l = 1..g),
/// h_0 = 0, and pole rows h_n (n >= 1).
#[derive(Clone, Debug)]
pub struct CuspTable {
    group: Group,
    genus: i64,
    k_max: i64,
    prec_floor: i64,
    pole_rows: Vec<QSeries>,
    cusp_rows: Vec<QSeries>,
    zero_row: QSeries,
}

impl CuspTable {
    /// The group the table lives on.
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Genus of the entry the table was built from.
    pub fn genus(&self) -> i64 {
        self.genus
    }

    /// Largest pole order covered.
    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    /// Smallest positive-exponent precision over the rows.
    pub fn prec_floor(&self) -> i64 {
        self.prec_floor
    }

    /// Row h_n: pole rows for n >= 1, h_0 = 0, holomorphic rows h_{-l} for
    /// n = -l with 1 <= l <= genus.
    pub fn row(&self, n: i64) -> Result<&QSeries> {
        if n == 0 {
            Ok(&self.zero_row)
        } else if n >= 1 && n <= self.k_max {
            Ok(&self.pole_rows[(n - 1) as usize])
        } else if n < 0 && -n <= self.genus {
            Ok(&self.cusp_rows[(-n - 1) as usize])
        } else {
            Err(Error::TableRange {
                table: "weight-2".into(),
                group: self.group.to_string(),
                covered: format!("n = -{} ..= {}", self.genus, self.k_max),
                requested: n,
            })
        }
    }

    /// Dual coefficient b(n,m) = [q^m] h_n.
    pub fn b(&self, n: i64, m: i64) -> Result<QRat> {
        self.row(n)?.coeff(m)
    }
}

/// Build the weight-2 table for a genus >= 1 entry by echelonizing the
/// shipped cusp seeds and cutting pole rows from f_{n+l} h_{-l}. Genus-0
/// entries are rejected; their dual rows are theta-derivatives of Faber
/// rows, see [`theta_cusp_table`].
pub fn build_cusp_tables(
    entry: &CatalogEntry,
    basis: &BasisTable,
    k_max: i64,
    prec: i64,
) -> Result<CuspTable> {
    let g = entry.genus;
    if g == 0 {
        return Err(Error::CuspTablesGenusZero);
    }
    let k_max = k_max.max(1);
    if basis.m_max() < (k_max + 1).max(g + 1) {
        return Err(Error::TableRange {
            table: "f-basis".into(),
            group: entry.group.to_string(),
            covered: format!("m <= {}", basis.m_max()),
            requested: (k_max + 1).max(g + 1),
        });
    }
    if entry.cusp_seeds.len() as i64 != g {
        return Err(Error::CatalogInvalid {
            group: entry.group.to_string(),
            detail: format!(
                "genus {g} entry ships {} cusp seeds",
                entry.cusp_seeds.len()
            ),
        });
    }

    // Echelonize the seeds into h_{-l} = q^l + O(q^{g+1}).
    let mut work: Vec<QSeries> = entry.cusp_seeds.clone();
    let mut cusp_rows: Vec<QSeries> = Vec::with_capacity(g as usize);
    for l in 1..=g {
        let idx = work
            .iter()
            .position(|s| s.valuation() == Some(l))
            .ok_or_else(|| Error::CatalogInvalid {
                group: entry.group.to_string(),
                detail: format!("cusp seeds have no row of valuation {l} after reduction"),
            })?;
        let mut h = work.remove(idx);
        let lead = h.coeff(l)?;
        if !lead.is_one() {
            h = h.scale(&(QRat::one() / lead));
        }
        for w in work.iter_mut() {
            let c = w.coeff(l)?;
            if !c.is_zero() {
                *w = w.sub(&h.scale(&c));
            }
        }
        for done in cusp_rows.iter_mut() {
            let c = done.coeff(l)?;
            if !c.is_zero() {
                *done = done.sub(&h.scale(&c));
            }
        }
        cusp_rows.push(h);
    }

    // Pole rows h_n, ascending.
    let mut pole_rows: Vec<QSeries> = Vec::with_capacity(k_max as usize);
    for n in 1..=k_max {
        let l0 = 1.max(g + 1 - n);
        let mut cur = basis.row(n + l0)?.mul(&cusp_rows[(l0 - 1) as usize]);
        for k in (1..n).rev() {
            let c = cur.coeff(-k)?;
            if !c.is_zero() {
                cur = cur.sub(&pole_rows[(k - 1) as usize].scale(&c));
            }
        }
        let c0 = cur.coeff(0)?;
        if !c0.is_zero() {
            return Err(Error::CannotClear {
                exponent: 0,
                context: format!(
                    "h_{n} on {}: constant term {c0} survives, but the residue \
                     of a weight-2 form with its only pole at infinity is zero",
                    entry.group
                ),
            });
        }
        for l in 1..=g {
            let c = cur.coeff(l)?;
            if !c.is_zero() {
                cur = cur.sub(&cusp_rows[(l - 1) as usize].scale(&c));
            }
        }
        pole_rows.push(cur);
    }

    let prec_floor = pole_rows
        .iter()
        .chain(cusp_rows.iter())
        .map(|r| r.prec())
        .min()
        .unwrap_or(PREC_INF);
    if prec_floor < prec {
        return Err(Error::PrecisionShortfall {
            operation: format!("weight-2 table to n = {k_max} on {}", entry.group),
            required: prec,
            available: prec_floor,
            requested: prec,
        });
    }
    Ok(CuspTable {
        group: entry.group.clone(),
        genus: g,
        k_max,
        prec_floor,
        pole_rows,
        cusp_rows,
        zero_row: QSeries::zero(),
    })
}

/// The genus-0 weight-2 table: h_n = -(theta J_n)/n for n >= 1, no
/// holomorphic rows. Duality against the Faber table is then the symmetry
/// n c(m,n) = m c(n,m).
pub fn theta_cusp_table(basis: &BasisTable) -> Result<CuspTable> {
    if basis.genus() != 0 {
        return Err(Error::CatalogInvalid {
            group: basis.group().to_string(),
            detail: "theta_cusp_table is the genus-0 route".into(),
        });
    }
    let mut pole_rows = Vec::with_capacity(basis.m_max() as usize);
    for n in 1..=basis.m_max() {
        let minus_inv_n = QRat::new((-1).into(), n.into());
        pole_rows.push(basis.row(n)?.theta().scale(&minus_inv_n));
    }
    let prec_floor = pole_rows.iter().map(|r| r.prec()).min().unwrap_or(PREC_INF);
    Ok(CuspTable {
        group: basis.group().clone(),
        genus: 0,
        k_max: basis.m_max(),
        prec_floor,
        pole_rows,
        cusp_rows: Vec::new(),
        zero_row: QSeries::zero(),
    })
}

// ---------------------------------------------------------------------------
// expansion
// ---------------------------------------------------------------------------

/// Result of peeling a series against the f-basis.
#[derive(Clone, Debug)]
pub struct Expansion {
    /// Coefficients (m, c_m) with m > genus, ascending.
    pub coeffs: Vec<(i64, QRat)>,
    /// Coefficient of f_0 = 1.
    pub constant: QRat,
    /// What is left after subtracting the combination: zero (to working
    /// precision) exactly when the input lies in the span. Pole orders in
    /// 1..genus cannot be peeled and land here.
    pub residual: QSeries,
}

/// Expand a series in the f-basis: peel principal-part coefficients from the
/// deepest pole down to q^-(g+1), then the constant. The caller decides what
/// a nonzero residual means.
pub fn expand_in_f_basis(f: &QSeries, table: &BasisTable) -> Result<Expansion> {
    let g = table.genus();
    let pole = f.pole_order();
    if pole > table.m_max() {
        return Err(Error::TableRange {
            table: "f-basis".into(),
            group: table.group().to_string(),
            covered: format!("m <= {}", table.m_max()),
            requested: pole,
        });
    }
    let mut cur = f.clone();
    let mut coeffs = Vec::new();
    for m in ((g + 1)..=pole).rev() {
        let c = cur.coeff(-m)?;
        if !c.is_zero() {
            cur = cur.sub(&table.row(m)?.scale(&c));
            coeffs.push((m, c));
        }
    }
    let constant = cur.coeff(0)?;
    let residual = cur.sub(&QSeries::constant(constant.clone()));
    coeffs.reverse();
    Ok(Expansion {
        coeffs,
        constant,
        residual,
    })
}

// ---------------------------------------------------------------------------
// context cache
// ---------------------------------------------------------------------------

/// Cross-group cache of catalog entries and built tables. Tables grow on
/// demand: a request that exceeds the cached size/precision triggers a
/// rebuild at the merged requirements.
#[derive(Default)]
pub struct Context {
    entries: Mutex<HashMap<Group, Arc<CatalogEntry>>>,
    f_tables: Mutex<HashMap<Group, Arc<BasisTable>>>,
    cusp_tables: Mutex<HashMap<Group, Arc<CuspTable>>>,
}

impl Context {
    /// Fresh empty cache.
    pub fn new() -> Self {
        Self::default()
    }

    /// Catalog entry for a group (cached).
    pub fn entry(&self, group: &Group) -> Result<Arc<CatalogEntry>> {
        let mut cache = self.entries.lock().expect("entry cache poisoned");
        if let Some(e) = cache.get(group) {
            return Ok(e.clone());
        }
        let e = Arc::new(crate::catalog::load(group)?);
        cache.insert(group.clone(), e.clone());
        Ok(e)
    }

    /// f-basis covering pole orders up to `m_max` with positive-exponent
    /// precision at least `prec`.
    pub fn f_table(&self, group: &Group, m_max: i64, prec: i64) -> Result<Arc<BasisTable>> {
        {
            let cache = self.f_tables.lock().expect("f cache poisoned");
            if let Some(t) = cache.get(group) {
                if t.m_max() >= m_max && t.prec_floor() >= prec {
                    return Ok(t.clone());
                }
            }
        }
        let entry = self.entry(group)?;
        let (m_req, p_req) = {
            let cache = self.f_tables.lock().expect("f cache poisoned");
            match cache.get(group) {
                Some(t) => (m_max.max(t.m_max()), prec.max(t.requested_prec)),
                None => (m_max, prec),
            }
        };
        let built = Arc::new(build_f_basis(&entry, m_req, p_req)?);
        self.f_tables
            .lock()
            .expect("f cache poisoned")
            .insert(group.clone(), built.clone());
        Ok(built)
    }

    /// Weight-2 table covering pole orders up to `k_max` with precision at
    /// least `prec`; dispatches between the genus-0 theta route and the
    /// seed-echelon route.
    pub fn cusp_table(&self, group: &Group, k_max: i64, prec: i64) -> Result<Arc<CuspTable>> {
        {
            let cache = self.cusp_tables.lock().expect("cusp cache poisoned");
            if let Some(t) = cache.get(group) {
                if t.k_max() >= k_max && t.prec_floor() >= prec {
                    return Ok(t.clone());
                }
            }
        }
        let entry = self.entry(group)?;
        let g = entry.genus;
        let built = if g == 0 {
            let basis = self.f_table(group, k_max, prec)?;
            Arc::new(theta_cusp_table(&basis)?)
        } else {
            let basis = self.f_table(group, (k_max + 1).max(g + 1), prec)?;
            Arc::new(build_cusp_tables(&entry, &basis, k_max, prec)?)
        };
        self.cusp_tables
            .lock()
            .expect("cusp cache poisoned")
            .insert(group.clone(), built.clone());
        Ok(built)
    }
}

// ---------------------------------------------------------------------------
// entry validation (driven from catalog::validate)
// ---------------------------------------------------------------------------

pub(crate) fn validate_entry(
    entry: &CatalogEntry,
    opts: &ValidateOptions,
    report: &mut ValidationReport,
) -> Result<()> {
    let g = entry.genus;
    let push = |report: &mut ValidationReport, name: &str, pass: bool, detail: String| {
        report.checks.push(crate::catalog::CheckResult {
            name: name.to_string(),
            pass,
            detail,
        });
    };

    // Shape.
    let mut shape_issues = Vec::new();
    if g < 0 {
        shape_issues.push(format!("negative genus {g}"));
    }
    if entry.infinity_weierstrass {
        shape_issues.push("builder requires infinity to be a non-Weierstrass point".into());
    }
    match &entry.gens {
        Generators::Hauptmodul(_) => {
            if g != 0 {
                shape_issues.push("recipe generators on a positive-genus entry".into());
            }
            if !entry.cusp_seeds.is_empty() {
                shape_issues.push("genus-0 entry ships cusp seeds".into());
            }
            match entry.series(SeriesId::Hauptmodul, g + 3) {
                Ok(t) => {
                    if let Err(e) = check_normalized(entry, SeriesId::Hauptmodul, &t, 1) {
                        shape_issues.push(e.to_string());
                    }
                }
                Err(e) => shape_issues.push(format!("recipe does not materialize: {e}")),
            }
        }
        Generators::FunctionField { x, y, extra } => {
            if g < 1 {
                shape_issues.push("function-field generators on a genus-0 entry".into());
            }
            for (s, pole, id) in std::iter::once((x, g + 1, SeriesId::X))
                .chain(std::iter::once((y, g + 2, SeriesId::Y)))
                .chain(
                    extra
                        .iter()
                        .enumerate()
                        .map(|(i, z)| (z, g + 3 + i as i64, SeriesId::Extra(i as u8))),
                )
            {
                if let Err(e) = check_normalized(entry, id, s, pole) {
                    shape_issues.push(e.to_string());
                }
                if !s.is_integral() {
                    shape_issues.push(format!("generator {id} has a non-integral coefficient"));
                }
                if s.prec() < entry.prec {
                    shape_issues.push(format!(
                        "generator {id} known to {} < declared prec {}",
                        s.prec(),
                        entry.prec
                    ));
                }
            }
            if entry.cusp_seeds.len() as i64 != g {
                shape_issues.push(format!(
                    "{} cusp seeds for genus {g}",
                    entry.cusp_seeds.len()
                ));
            }
            for (i, s) in entry.cusp_seeds.iter().enumerate() {
                if s.valuation().map(|v| v < 1).unwrap_or(true) {
                    shape_issues.push(format!("cusp seed {i} is not holomorphic-vanishing"));
                }
                if s.prec() < entry.prec {
                    shape_issues.push(format!(
                        "cusp seed {i} known to {} < declared prec {}",
                        s.prec(),
                        entry.prec
                    ));
                }
            }
        }
    }
    push(
        report,
        "shape",
        shape_issues.is_empty(),
        if shape_issues.is_empty() {
            format!("genus {g}, generators normalized")
        } else {
            shape_issues.join("; ")
        },
    );
    if !shape_issues.is_empty() {
        return Ok(());
    }

    // Grid build: f-basis and weight-2 table at moderate precision.
    let m_max = opts.m_max.max(opts.n_max + g + 1).max(2 * g + 3);
    let n_max = opts.n_max.max(g + 3);
    let grid_prec = (opts.n_max + 1).max(g + 2);
    let basis = match build_f_basis(entry, m_max, grid_prec) {
        Ok(b) => {
            push(
                report,
                "f-basis",
                true,
                format!("rows to m = {m_max}, precision floor {}", b.prec_floor()),
            );
            b
        }
        Err(e) => {
            push(report, "f-basis", false, e.to_string());
            return Ok(());
        }
    };

    let non_integral: Vec<String> = ((g + 1)..=m_max)
        .filter_map(|m| {
            basis
                .row(m)
                .ok()
                .and_then(|r| r.first_non_integral())
                .map(|(n, c)| format!("a({m},{n}) = {c}"))
        })
        .collect();
    push(
        report,
        "integrality",
        non_integral.is_empty(),
        if non_integral.is_empty() {
            format!("rows f_{} .. f_{m_max} have integer coefficients", g + 1)
        } else {
            non_integral.join("; ")
        },
    );

    let cusp = if g == 0 {
        theta_cusp_table(&basis)
    } else {
        build_cusp_tables(entry, &basis, n_max, grid_prec)
    };
    let cusp = match cusp {
        Ok(c) => {
            push(
                report,
                "weight-2",
                true,
                format!("rows to n = {n_max}, precision floor {}", c.prec_floor()),
            );
            c
        }
        Err(e) => {
            push(report, "weight-2", false, e.to_string());
            return Ok(());
        }
    };

    // Duality grid: a(m,n) = -b(n,m) for m > g and every n with a row,
    // including the holomorphic rows n = -l.
    let mut duality_bad = Vec::new();
    let mut duality_count = 0usize;
    for m in (g + 1)..=opts.m_max {
        for n in (-g..=opts.n_max).filter(|&n| n != 0) {
            let a = basis.a(m, n)?;
            let b = cusp.b(n, m)?;
            duality_count += 1;
            if a != -b.clone() {
                duality_bad.push(format!("a({m},{n}) = {a} but b({n},{m}) = {b}"));
            }
        }
    }
    push(
        report,
        "duality",
        duality_bad.is_empty(),
        if duality_bad.is_empty() {
            format!("a(m,n) = -b(n,m) at {duality_count} grid points")
        } else {
            duality_bad.truncate(4.min(duality_bad.len()));
            duality_bad.join("; ")
        },
    );

    // Theta expansion of the first rows over the full shipped window:
    //   -theta f_m = m h_m + sum_l l (a(m,-l) h_l - a(m,l) h_{-l}).
    // At full precision this ties every shipped coefficient into the
    // echelon structure, so a single corrupted deep coefficient shows up.
    let (tb, tc) = if opts.full_window_theta && g >= 1 {
        let fb = build_f_basis(entry, 2 * g + 3, g + 2)?;
        let fc = build_cusp_tables(entry, &fb, g + 3, g + 2)?;
        (fb, fc)
    } else {
        (basis, cusp)
    };
    let mut theta_bad = Vec::new();
    for m in (g + 1)..=(g + 3) {
        match theta_row_residual(&tb, &tc, m) {
            Ok(res) => {
                if !res.is_known_zero() {
                    let (n, c) = res.support().next().map(|(n, c)| (n, c.clone())).unwrap();
                    theta_bad.push(format!(
                        "row m = {m}: residual {c} q^{n} (window to {})",
                        res.prec()
                    ));
                }
            }
            Err(e) => theta_bad.push(format!("row m = {m}: {e}")),
        }
    }
    push(
        report,
        "theta-expansion",
        theta_bad.is_empty(),
        if theta_bad.is_empty() {
            format!(
                "-theta f_m matches its h-expansion for m = {}..{} on the full window",
                g + 1,
                g + 3
            )
        } else {
            theta_bad.join("; ")
        },
    );
    Ok(())
}

/// Residual of the weight-2 expansion of -theta f_m:
/// theta f_m + m h_m + sum_{l=1..g} l (a(m,-l) h_l - a(m,l) h_{-l}).
pub fn theta_row_residual(basis: &BasisTable, cusp: &CuspTable, m: i64) -> Result<QSeries> {
    let g = basis.genus();
    let mut acc = basis.row(m)?.theta().add(&cusp.row(m)?.scale(&qr(m)));
    for l in 1..=g {
        let al = basis.a(m, -l)?;
        let pl = basis.a(m, l)?;
        acc = acc.add(&cusp.row(l)?.scale(&(al * qr(l))));
        acc = acc.sub(&cusp.row(-l)?.scale(&(pl * qr(l))));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn level1_basis(m_max: i64, prec: i64) -> BasisTable {
        let g: Group = "1".parse().unwrap();
        let entry = catalog::load(&g).unwrap();
        build_f_basis(&entry, m_max, prec).unwrap()
    }

    #[test]
    fn level1_faber_rows() {
        let b = level1_basis(4, 6);
        // J_1 = q^-1 + 196884 q + 21493760 q^2 + ...
        assert_eq!(b.a(1, 1).unwrap(), qr(196884));
        assert_eq!(b.a(1, 2).unwrap(), qr(21493760));
        // Echelon shape: zero constant, cleared lower poles.
        for m in 1..=4 {
            assert_eq!(b.a(m, 0).unwrap(), qr(0), "constant of J_{m}");
            for k in 1..m {
                assert_eq!(b.a(m, -k).unwrap(), qr(0), "q^-{k} in J_{m}");
            }
            assert_eq!(b.a(m, -m).unwrap(), qr(1), "leading coefficient of J_{m}");
        }
        // c(2,1) = 2 c(1,2) by the Faber symmetry n c(m,n) = m c(n,m).
        assert_eq!(b.a(2, 1).unwrap(), qr(42987520));
    }

    #[test]
    fn level1_faber_duality_grid() {
        let b = level1_basis(8, 10);
        let h = theta_cusp_table(&b).unwrap();
        for m in 1..=8 {
            for n in 1..=8 {
                assert_eq!(
                    b.a(m, n).unwrap(),
                    -h.b(n, m).unwrap(),
                    "duality at ({m},{n})"
                );
            }
        }
    }

    #[test]
    fn level2_faber_rows_integral() {
        let g: Group = "2".parse().unwrap();
        let entry = catalog::load(&g).unwrap();
        let b = build_f_basis(&entry, 12, 24).unwrap();
        for m in 1..=12 {
            assert!(b.row(m).unwrap().is_integral(), "J_{m} integral");
            assert_eq!(b.a(m, 0).unwrap(), qr(0));
        }
        // theta rows pair with the Faber rows.
        let h = theta_cusp_table(&b).unwrap();
        for m in 1..=10 {
            for n in 1..=10 {
                assert_eq!(b.a(m, n).unwrap(), -h.b(n, m).unwrap());
            }
        }
    }

    #[test]
    fn expansion_round_trip_level1() {
        let b = level1_basis(6, 10);
        // F = 3 f_5 - 2 f_2 + 7.
        let f = b
            .combine(&[(5, qr(3)), (2, qr(-2))], &qr(7))
            .unwrap();
        let e = expand_in_f_basis(&f, &b).unwrap();
        assert_eq!(e.coeffs, vec![(2, qr(-2)), (5, qr(3))]);
        assert_eq!(e.constant, qr(7));
        assert!(e.residual.is_known_zero());
    }

    #[test]
    fn genus0_cusp_table_route_is_theta() {
        let g: Group = "1".parse().unwrap();
        let entry = catalog::load(&g).unwrap();
        let b = build_f_basis(&entry, 3, 6).unwrap();
        match build_cusp_tables(&entry, &b, 3, 6) {
            Err(Error::CuspTablesGenusZero) => {}
            other => panic!("expected genus-0 rejection, got {other:?}"),
        }
        let ctx = Context::new();
        let grp: Group = "1".parse().unwrap();
        let h = ctx.cusp_table(&grp, 3, 6).unwrap();
        assert_eq!(h.genus(), 0);
        // h_1 = -theta J_1: coefficient b(1,1) = -196884.
        assert_eq!(h.b(1, 1).unwrap(), qr(-196884));
    }

    #[test]
    fn context_grows_tables() {
        let ctx = Context::new();
        let g: Group = "1".parse().unwrap();
        let t1 = ctx.f_table(&g, 2, 5).unwrap();
        assert!(t1.m_max() >= 2);
        let t2 = ctx.f_table(&g, 4, 8).unwrap();
        assert!(t2.m_max() >= 4 && t2.prec_floor() >= 8);
        let t3 = ctx.f_table(&g, 3, 6).unwrap();
        assert_eq!(t3.m_max(), t2.m_max(), "cached table reused");
    }
}
