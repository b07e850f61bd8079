//! Command-line surface over the library: builds tables, prints expansions
//! and coefficient grids, applies the Hecke and replicate operators, and runs
//! the verification / congruence / catalog-validation suites.
//!
//! This module is a thin adapter. Flags are validated before any computation
//! starts, precision windows are sized through the library's own window
//! helpers, and every number printed comes from a library call; parity tests
//! compare the binary's output against direct library calls.
//!
//! Output is deterministic: identical invocations produce byte-identical
//! bytes (no timestamps). Exit codes:
//!
//! - 0: success — every requested check passed (also `--help`/`--version`);
//! - 1: a verification or congruence report carries failures;
//! - 2: usage or data error — bad flags, unsupported group, insufficient
//!   precision (the message names the required window), or a mock replicate
//!   (the message carries the holomorphy residuals).
//!
//! JSON payloads carry `"schema": "hecke-grid/v1"` and sort keys
//! alphabetically; check-list payloads always have the shape
//! `{"checks":[...],"schema":...}`, degenerating to `{"checks":[]}` when
//! there is nothing to report. CSV grids carry (m, n) headers.

use std::ffi::OsString;
use std::fmt;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::basis::{faber_genus0, Context};
use crate::catalog::{self, ValidateOptions};
use crate::congruence::{scan, CongruenceReport, Family};
use crate::errors::Error;
use crate::groups::{factorize, Group};
use crate::hecke::{
    apply_t_m, apply_t_pr, input_prec_for_t_m, input_prec_for_t_pr,
};
use crate::identities::{
    verify_duality, verify_genfun, verify_genj_reduced, verify_theta_rows, IdentityReport,
};
use crate::replicate::{j_expand, plicate_series, JCombo};
use crate::series::{fmt_rat, QSeries, PREC_INF};
use crate::Result;

/// Version tag carried by every JSON payload.
pub const JSON_SCHEMA: &str = "hecke-grid/v1";

// ---------------------------------------------------------------------------
// flag types
// ---------------------------------------------------------------------------

/// Output format, selectable on every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmitFormat {
    /// Human-readable text.
    Table,
    /// Comma-separated values.
    Csv,
    /// JSON (schema "hecke-grid/v1", alphabetical keys).
    Json,
}

/// An element reference: `f:<m>` is the basis row f_m, `J:<n>` the Faber row
/// J_n of a genus-0 group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Element {
    F(i64),
    J(i64),
}

impl Element {
    /// Display label of the selected row, e.g. `f_3`.
    fn label(self) -> String {
        match self {
            Element::F(m) => format!("f_{m}"),
            Element::J(n) => format!("J_{n}"),
        }
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Element> {
        let err = || Error::Usage(format!("element must be f:<m> or J:<n>, got '{s}'"));
        let (kind, idx) = s.split_once(':').ok_or_else(err)?;
        let idx: i64 = idx.trim().parse().map_err(|_| err())?;
        if idx < 1 {
            return Err(Error::Usage(format!(
                "element index must be >= 1, got {idx}"
            )));
        }
        match kind.trim() {
            "f" => Ok(Element::F(idx)),
            "J" | "j" => Ok(Element::J(idx)),
            _ => Err(err()),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::F(m) => write!(f, "f:{m}"),
            Element::J(n) => write!(f, "J:{n}"),
        }
    }
}

/// A Hecke operator: `T(p^r)` for a prime-power block, `T(m)` for the
/// composite operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum HeckeOp {
    Pr { p: u64, r: u32 },
    M(u64),
}

impl FromStr for HeckeOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<HeckeOp> {
        let err = || Error::Usage(format!("operator must be T(m) or T(p^r), got '{s}'"));
        let inner = s
            .trim()
            .strip_prefix("T(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(err)?;
        if let Some((ps, rs)) = inner.split_once('^') {
            let p: u64 = ps.trim().parse().map_err(|_| err())?;
            let r: u32 = rs.trim().parse().map_err(|_| err())?;
            if factorize(p) != vec![(p, 1)] {
                return Err(Error::Usage(format!("T(p^r) needs a prime p, got {p}")));
            }
            if r < 1 {
                return Err(Error::Usage("T(p^r) needs r >= 1".into()));
            }
            Ok(HeckeOp::Pr { p, r })
        } else {
            let m: u64 = inner.trim().parse().map_err(|_| err())?;
            if m < 1 {
                return Err(Error::Usage("T(m) needs m >= 1".into()));
            }
            Ok(HeckeOp::M(m))
        }
    }
}

impl fmt::Display for HeckeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeOp::Pr { p, r } => write!(f, "T({p}^{r})"),
            HeckeOp::M(m) => write!(f, "T({m})"),
        }
    }
}

/// Identity selector for `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IdentityKind {
    /// Duality a(m, n) = -b(n, m) on an (m, n) grid.
    Duality,
    /// Theta-derivative expansion of every basis row.
    Theta,
    /// Two-variable generating-function identity (cleared and plain form).
    Genfun,
    /// Holomorphic weight-2 rows against the negative-order basis columns.
    Genj,
    /// All of the above, in the order listed.
    All,
}

// ---------------------------------------------------------------------------
// command tree
// ---------------------------------------------------------------------------

/// Exact-arithmetic canonical bases, Hecke operators, and coefficient
/// congruences for modular functions on Gamma_0(N)+S.
#[derive(Debug, Parser)]
#[command(name = "hecke-grid", version, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print a canonical weight-0 basis row f_m.
    Basis {
        /// Group label, e.g. 11 or 22+2.
        #[arg(long)]
        group: Group,
        /// Row index (pole order at infinity).
        #[arg(long)]
        m: i64,
        /// Guaranteed output coefficients: the window ends at q^prec.
        #[arg(long, default_value_t = 10)]
        prec: i64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
    /// Print a weight-2 row h_n (n >= 1: pole rows; n < 0: holomorphic rows).
    Cusp {
        /// Group label, e.g. 11 or 22+2.
        #[arg(long)]
        group: Group,
        /// Row index; negative indices -1 .. -genus select holomorphic rows.
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// Guaranteed output coefficients: the window ends at q^prec.
        #[arg(long, default_value_t = 10)]
        prec: i64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
    /// Export the coefficient grid a(m, n) for 1 <= m <= mmax,
    /// -genus <= n <= nmax.
    Grid {
        /// Group label, e.g. 11 or 22+2.
        #[arg(long)]
        group: Group,
        /// Largest row index m.
        #[arg(long)]
        mmax: i64,
        /// Largest column index n.
        #[arg(long)]
        nmax: i64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
    /// Print a Faber row J_n of a genus-0 group.
    Faber {
        /// Genus-0 group label, e.g. 1 or 2+2.
        #[arg(long)]
        group: Group,
        /// Row index n >= 1.
        #[arg(long)]
        n: i64,
        /// Guaranteed output coefficients: the window ends at q^prec.
        #[arg(long, default_value_t = 10)]
        prec: i64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
    /// Compute the m-plicate of an element: fingerprint, holomorphy verdict,
    /// and (when weakly holomorphic) its q-expansion.
    Replicate {
        /// Group label, e.g. 22 or 22+2.
        #[arg(long)]
        group: Group,
        /// Element: f:<m> or J:<n>.
        #[arg(long)]
        element: Element,
        /// Plicate index m >= 1.
        #[arg(long)]
        m: u64,
        /// Guaranteed output coefficients: the window ends at q^prec.
        #[arg(long, default_value_t = 10)]
        prec: i64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
    /// Apply a Hecke operator T(p^r) or T(m) to an element.
    Hecke {
        /// Group label, e.g. 11 or 22+2.
        #[arg(long)]
        group: Group,
        /// Element: f:<m> or J:<n>.
        #[arg(long)]
        element: Element,
        /// Operator, e.g. T(4) or T(2^2).
        #[arg(long)]
        op: HeckeOp,
        /// Guaranteed output coefficients: the window ends at q^prec.
        #[arg(long, default_value_t = 10)]
        prec: i64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
    /// Scan one congruence family over a coefficient window.
    Congruence {
        /// Family id: tcong, ladder, strong, modp, swap, allp, vseries,
        /// plicate.
        #[arg(long)]
        variant: Family,
        /// Group label, e.g. 11 or 22.
        #[arg(long)]
        group: Group,
        /// Base row index m.
        #[arg(long)]
        m: i64,
        /// The prime p.
        #[arg(long)]
        p: u64,
        /// The exponent r of the modulus / operator index.
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Top of the scanned coefficient range.
        #[arg(long)]
        nmax: i64,
        /// Deliberately violate the hypotheses to demonstrate
        /// non-vacuousness (expected outcome: failure witnesses).
        #[arg(long)]
        probe: bool,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
    /// Verify a structural identity on a finite window.
    Verify {
        /// Identity to check (or `all`).
        #[arg(long, value_enum)]
        identity: IdentityKind,
        /// Group label, e.g. 11 or 22+2.
        #[arg(long)]
        group: Group,
        /// Largest basis-row index in the window.
        #[arg(long, default_value_t = 12)]
        mmax: i64,
        /// Largest dual-row index in the window (duality only).
        #[arg(long, default_value_t = 12)]
        nmax: i64,
        /// Positive coefficient window for the series identities.
        #[arg(long, default_value_t = 20)]
        prec: i64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
    /// List the shipped catalog entries, or run their self-validation.
    Catalog {
        /// Restrict to one group (default: every shipped group).
        #[arg(long)]
        group: Option<Group>,
        /// Run the validation suite instead of listing.
        #[arg(long)]
        validate: bool,
        /// Output format.
        #[arg(long, value_enum, default_value_t = EmitFormat::Table)]
        emit: EmitFormat,
    },
}

// ---------------------------------------------------------------------------
// entry points
// ---------------------------------------------------------------------------

/// Parse `std::env::args_os` and run; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Parse the given argv and run; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version print to stdout and succeed; real parse
            // errors go to stderr and are usage errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let ctx = Context::new();
    match cli.cmd {
        Cmd::Basis {
            group,
            m,
            prec,
            emit,
        } => cmd_basis(&ctx, &group, m, prec, emit),
        Cmd::Cusp {
            group,
            n,
            prec,
            emit,
        } => cmd_cusp(&ctx, &group, n, prec, emit),
        Cmd::Grid {
            group,
            mmax,
            nmax,
            emit,
        } => cmd_grid(&ctx, &group, mmax, nmax, emit),
        Cmd::Faber {
            group,
            n,
            prec,
            emit,
        } => cmd_faber(&ctx, &group, n, prec, emit),
        Cmd::Replicate {
            group,
            element,
            m,
            prec,
            emit,
        } => cmd_replicate(&ctx, &group, element, m, prec, emit),
        Cmd::Hecke {
            group,
            element,
            op,
            prec,
            emit,
        } => cmd_hecke(&ctx, &group, element, op, prec, emit),
        Cmd::Congruence {
            variant,
            group,
            m,
            p,
            r,
            nmax,
            probe,
            emit,
        } => cmd_congruence(&ctx, &group, variant, m, p, r, nmax, probe, emit),
        Cmd::Verify {
            identity,
            group,
            mmax,
            nmax,
            prec,
            emit,
        } => cmd_verify(&ctx, &group, identity, mmax, nmax, prec, emit),
        Cmd::Catalog {
            group,
            validate,
            emit,
        } => cmd_catalog(&ctx, group.as_ref(), validate, emit),
    }
}

// ---------------------------------------------------------------------------
// subcommand handlers
// ---------------------------------------------------------------------------

/// Build an element's q-expansion with positive window at least `prec`.
fn element_series(ctx: &Context, group: &Group, el: Element, prec: i64) -> Result<QSeries> {
    let entry = ctx.entry(group)?;
    match el {
        Element::F(m) => {
            let table = ctx.f_table(group, m.max(entry.genus + 1), prec)?;
            Ok(table.row(m)?.truncated(prec))
        }
        Element::J(n) => {
            if entry.genus != 0 {
                return Err(Error::Usage(format!(
                    "J:<n> selects a Faber row, which needs a genus-0 group; \
                     {group} has genus {}",
                    entry.genus
                )));
            }
            let faber = faber_genus0(&entry, n.max(1), prec)?;
            Ok(faber.j_row(n)?.truncated(prec))
        }
    }
}

fn require_positive(name: &str, v: i64) -> Result<()> {
    if v < 1 {
        return Err(Error::Usage(format!("--{name} must be >= 1, got {v}")));
    }
    Ok(())
}

fn cmd_basis(ctx: &Context, group: &Group, m: i64, prec: i64, emit: EmitFormat) -> Result<i32> {
    require_positive("m", m)?;
    require_positive("prec", prec)?;
    let row = element_series(ctx, group, Element::F(m), prec)?;
    print_series(emit, group, &format!("f_{m}"), &row);
    Ok(0)
}

fn cmd_cusp(ctx: &Context, group: &Group, n: i64, prec: i64, emit: EmitFormat) -> Result<i32> {
    require_positive("prec", prec)?;
    let table = ctx.cusp_table(group, n.max(1), prec)?;
    let row = table.row(n)?.truncated(prec);
    print_series(emit, group, &format!("h_{n}"), &row);
    Ok(0)
}

fn cmd_faber(ctx: &Context, group: &Group, n: i64, prec: i64, emit: EmitFormat) -> Result<i32> {
    require_positive("n", n)?;
    require_positive("prec", prec)?;
    let row = element_series(ctx, group, Element::J(n), prec)?;
    print_series(emit, group, &format!("J_{n}"), &row);
    Ok(0)
}

fn cmd_grid(ctx: &Context, group: &Group, mmax: i64, nmax: i64, emit: EmitFormat) -> Result<i32> {
    require_positive("mmax", mmax)?;
    if nmax < 0 {
        return Err(Error::Usage(format!("--nmax must be >= 0, got {nmax}")));
    }
    let entry = ctx.entry(group)?;
    let g = entry.genus;
    let table = ctx.f_table(group, mmax.max(g + 1), nmax + 1)?;
    let cols: Vec<i64> = (-g..=nmax).collect();
    let mut rows: Vec<(i64, Vec<String>)> = Vec::new();
    for m in 1..=mmax {
        // Gap rows (1 <= m <= genus) read as the zero row, matching the
        // closed-form Hecke conventions.
        let row = table.row(m)?;
        let mut cells = Vec::with_capacity(cols.len());
        for &n in &cols {
            cells.push(fmt_rat(&row.coeff(n)?));
        }
        rows.push((m, cells));
    }
    print_grid(emit, group, mmax, nmax, &cols, &rows);
    Ok(0)
}

fn cmd_replicate(
    ctx: &Context,
    group: &Group,
    element: Element,
    m: u64,
    prec: i64,
    emit: EmitFormat,
) -> Result<i32> {
    if m < 1 {
        return Err(Error::Usage(format!("--m must be >= 1, got {m}")));
    }
    require_positive("prec", prec)?;
    let entry = ctx.entry(group)?;
    let f = element_series(ctx, group, element, prec.max(entry.genus + 2))?;
    let combo = j_expand(ctx, group, &f)?;
    let target = group.reduce_m(m);
    match plicate_series(ctx, &combo, m, prec) {
        Ok(series) => {
            print_replicate(emit, group, element, m, &combo, &target, Ok(&series));
            Ok(0)
        }
        Err(Error::Mock {
            group: mock_group,
            residuals,
            ..
        }) => {
            print_replicate(
                emit,
                group,
                element,
                m,
                &combo,
                &target,
                Err((&mock_group, &residuals)),
            );
            Ok(2)
        }
        Err(e) => Err(e),
    }
}

fn cmd_hecke(
    ctx: &Context,
    group: &Group,
    element: Element,
    op: HeckeOp,
    prec: i64,
    emit: EmitFormat,
) -> Result<i32> {
    require_positive("prec", prec)?;
    let need = match op {
        HeckeOp::Pr { p, r } => input_prec_for_t_pr(p, r, prec)?,
        HeckeOp::M(m) => input_prec_for_t_m(m, prec)?,
    };
    let f = element_series(ctx, group, element, need)?;
    let result = match op {
        HeckeOp::Pr { p, r } => apply_t_pr(ctx, group, &f, p, r, prec)?,
        HeckeOp::M(m) => apply_t_m(ctx, group, &f, m, prec)?,
    };
    print_series(emit, group, &format!("{} | {op}", element.label()), &result);
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_congruence(
    ctx: &Context,
    group: &Group,
    variant: Family,
    m: i64,
    p: u64,
    r: u32,
    nmax: i64,
    probe: bool,
    emit: EmitFormat,
) -> Result<i32> {
    let report = scan(ctx, group, variant, m, p, r, nmax, probe)?;
    let checks = vec![check_from_congruence(&report)];
    print_checks(emit, &checks);
    Ok(if report.ok() { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    ctx: &Context,
    group: &Group,
    identity: IdentityKind,
    mmax: i64,
    nmax: i64,
    prec: i64,
    emit: EmitFormat,
) -> Result<i32> {
    require_positive("mmax", mmax)?;
    require_positive("prec", prec)?;
    let mut reports: Vec<IdentityReport> = Vec::new();
    let kinds: &[IdentityKind] = match identity {
        IdentityKind::All => &[
            IdentityKind::Duality,
            IdentityKind::Theta,
            IdentityKind::Genfun,
            IdentityKind::Genj,
        ],
        _ => std::slice::from_ref(&identity),
    };
    for kind in kinds {
        reports.push(match kind {
            IdentityKind::Duality => verify_duality(ctx, group, mmax, nmax)?,
            IdentityKind::Theta => verify_theta_rows(ctx, group, mmax, prec)?,
            IdentityKind::Genfun => verify_genfun(ctx, group, mmax, prec)?,
            IdentityKind::Genj => verify_genj_reduced(ctx, group, mmax)?,
            IdentityKind::All => unreachable!("expanded above"),
        });
    }
    let checks: Vec<CheckLine> = reports.iter().map(check_from_identity).collect();
    let all_ok = reports.iter().all(|r| r.ok());
    print_checks(emit, &checks);
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_catalog(
    ctx: &Context,
    group: Option<&Group>,
    validate: bool,
    emit: EmitFormat,
) -> Result<i32> {
    if validate {
        let opts = ValidateOptions::default();
        let reports = match group {
            Some(g) => vec![catalog::validate(ctx.entry(g)?.as_ref(), &opts)],
            None => catalog::validate_all(&opts),
        };
        let mut checks = Vec::new();
        for report in &reports {
            for check in &report.checks {
                checks.push(CheckLine {
                    name: check.name.clone(),
                    group: report.group.clone(),
                    pass: check.pass,
                    detail: check.detail.clone(),
                    failures: Vec::new(),
                });
            }
        }
        let all_ok = reports.iter().all(|r| r.pass());
        print_checks(emit, &checks);
        return Ok(if all_ok { 0 } else { 1 });
    }
    let groups: Vec<Group> = match group {
        Some(g) => vec![g.clone()],
        None => catalog::supported_groups(),
    };
    let mut entries = Vec::new();
    for g in &groups {
        let entry = ctx.entry(g)?;
        entries.push((
            g.to_string(),
            entry.genus,
            entry.prec,
            entry.cusp_seeds.len(),
            catalog::goldens(g).len(),
        ));
    }
    print_catalog(emit, &entries);
    Ok(0)
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

/// One pass/fail line of a verification, congruence, or validation run.
struct CheckLine {
    name: String,
    group: String,
    pass: bool,
    detail: String,
    failures: Vec<String>,
}

fn check_from_identity(r: &IdentityReport) -> CheckLine {
    CheckLine {
        name: r.name.clone(),
        group: r.group.clone(),
        pass: r.ok(),
        detail: format!("{}; {} checked", r.window, r.checked),
        failures: r.failures.clone(),
    }
}

fn check_from_congruence(r: &CongruenceReport) -> CheckLine {
    CheckLine {
        name: r.family.clone(),
        group: r.group.clone(),
        pass: r.ok(),
        detail: format!(
            "m = {}, p = {}, r = {}, n_max = {}, modulus {}, probe {}; {} checked, {} failed",
            r.m, r.p, r.r, r.n_max, r.modulus, r.probe, r.checked, r.failed
        ),
        failures: r.failures.clone(),
    }
}

/// JSON for a list of check lines: `{"checks":[...],"schema":...}` with
/// alphabetical keys; an empty list renders as `{"checks":[]}` plus the
/// schema tag.
fn checks_json(checks: &[CheckLine]) -> String {
    let arr: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "group": c.group,
                "pass": c.pass,
                "detail": c.detail,
                "failures": c.failures,
            })
        })
        .collect();
    json!({ "checks": arr, "schema": JSON_SCHEMA }).to_string()
}

fn print_checks(emit: EmitFormat, checks: &[CheckLine]) {
    match emit {
        EmitFormat::Table => {
            for c in checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                println!("{} on {}: {} ({})", c.name, c.group, verdict, c.detail);
                for f in &c.failures {
                    println!("  {f}");
                }
            }
        }
        EmitFormat::Csv => {
            println!("name,group,pass,detail,failures");
            for c in checks {
                println!(
                    "{},{},{},{},{}",
                    csv_field(&c.name),
                    csv_field(&c.group),
                    c.pass,
                    csv_field(&c.detail),
                    csv_field(&c.failures.join("; "))
                );
            }
        }
        EmitFormat::Json => println!("{}", checks_json(checks)),
    }
}

/// Coefficient pairs (exponent, value) over the stored support.
fn coeff_pairs(s: &QSeries) -> Vec<(i64, String)> {
    s.support().map(|(e, c)| (e, fmt_rat(c))).collect()
}

fn series_json(group: &Group, label: &str, s: &QSeries) -> String {
    let coeffs: Vec<Value> = coeff_pairs(s)
        .into_iter()
        .map(|(e, c)| json!([e, c]))
        .collect();
    let prec = if s.prec() >= PREC_INF {
        Value::Null
    } else {
        json!(s.prec())
    };
    json!({
        "schema": JSON_SCHEMA,
        "kind": "series",
        "group": group.to_string(),
        "label": label,
        "prec": prec,
        "coefficients": coeffs,
    })
    .to_string()
}

fn print_series(emit: EmitFormat, group: &Group, label: &str, s: &QSeries) {
    match emit {
        EmitFormat::Table => {
            println!("{label} on {group}");
            println!("{s}");
        }
        EmitFormat::Csv => {
            println!("exponent,coefficient");
            for (e, c) in coeff_pairs(s) {
                println!("{e},{}", csv_field(&c));
            }
        }
        EmitFormat::Json => println!("{}", series_json(group, label, s)),
    }
}

fn print_grid(
    emit: EmitFormat,
    group: &Group,
    mmax: i64,
    nmax: i64,
    cols: &[i64],
    rows: &[(i64, Vec<String>)],
) {
    match emit {
        EmitFormat::Table => {
            println!("a(m, n) on {group}, m <= {mmax}, n <= {nmax}");
            let mut header: Vec<String> = vec!["m\\n".into()];
            header.extend(cols.iter().map(|n| n.to_string()));
            let mut body: Vec<Vec<String>> = vec![header];
            for (m, cells) in rows {
                let mut line = vec![m.to_string()];
                line.extend(cells.iter().cloned());
                body.push(line);
            }
            let widths: Vec<usize> = (0..body[0].len())
                .map(|j| body.iter().map(|row| row[j].len()).max().unwrap_or(0))
                .collect();
            for row in &body {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:>w$}"))
                    .collect();
                println!("{}", line.join("  "));
            }
        }
        EmitFormat::Csv => {
            let mut header: Vec<String> = vec!["m\\n".into()];
            header.extend(cols.iter().map(|n| n.to_string()));
            println!("{}", header.join(","));
            for (m, cells) in rows {
                let mut line = vec![m.to_string()];
                line.extend(cells.iter().map(|c| csv_field(c)));
                println!("{}", line.join(","));
            }
        }
        EmitFormat::Json => {
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|(m, cells)| json!({ "m": m, "values": cells }))
                .collect();
            println!(
                "{}",
                json!({
                    "schema": JSON_SCHEMA,
                    "kind": "grid",
                    "group": group.to_string(),
                    "mmax": mmax,
                    "nmax": nmax,
                    "columns": cols,
                    "rows": rows_json,
                })
            );
        }
    }
}

type MockInfo<'a> = (&'a str, &'a [(i64, crate::series::QRat)]);

#[allow(clippy::too_many_arguments)]
fn print_replicate(
    emit: EmitFormat,
    group: &Group,
    element: Element,
    m: u64,
    combo: &JCombo,
    target: &Group,
    outcome: std::result::Result<&QSeries, MockInfo<'_>>,
) {
    match emit {
        EmitFormat::Table => {
            println!("element {element} on {group}");
            println!("fingerprint: {combo}");
            match outcome {
                Ok(series) => {
                    println!("{m}-plicate on {target}: weakly holomorphic");
                    println!("{series}");
                }
                Err((mock_group, residuals)) => {
                    println!("{m}-plicate on {target}: MOCK (not weakly holomorphic)");
                    println!("residuals on {mock_group}:");
                    for (l, d) in residuals {
                        println!("  d_{l} = {}", fmt_rat(d));
                    }
                }
            }
        }
        EmitFormat::Csv => match outcome {
            Ok(series) => {
                println!("exponent,coefficient");
                for (e, c) in coeff_pairs(series) {
                    println!("{e},{}", csv_field(&c));
                }
            }
            Err((_, residuals)) => {
                println!("gap_order,residual");
                for (l, d) in residuals {
                    println!("{l},{}", csv_field(&fmt_rat(d)));
                }
            }
        },
        EmitFormat::Json => {
            let fingerprint: Vec<Value> = combo
                .coeffs()
                .iter()
                .map(|(n, c)| json!([n, fmt_rat(c)]))
                .collect();
            let mut obj = serde_json::Map::new();
            obj.insert("schema".into(), json!(JSON_SCHEMA));
            obj.insert("kind".into(), json!("replicate"));
            obj.insert("group".into(), json!(group.to_string()));
            obj.insert("element".into(), json!(element.to_string()));
            obj.insert("m".into(), json!(m));
            obj.insert("constant".into(), json!(fmt_rat(combo.constant())));
            obj.insert("fingerprint".into(), Value::Array(fingerprint));
            obj.insert("plicate_group".into(), json!(target.to_string()));
            match outcome {
                Ok(series) => {
                    obj.insert("holomorphic".into(), json!(true));
                    let coeffs: Vec<Value> = coeff_pairs(series)
                        .into_iter()
                        .map(|(e, c)| json!([e, c]))
                        .collect();
                    obj.insert("series".into(), Value::Array(coeffs));
                    obj.insert("series_prec".into(), json!(series.prec()));
                }
                Err((mock_group, residuals)) => {
                    obj.insert("holomorphic".into(), json!(false));
                    obj.insert("mock_group".into(), json!(mock_group));
                    let res: Vec<Value> = residuals
                        .iter()
                        .map(|(l, d)| json!([l, fmt_rat(d)]))
                        .collect();
                    obj.insert("residuals".into(), Value::Array(res));
                }
            }
            println!("{}", Value::Object(obj));
        }
    }
}

/// Human form of a window bound: synthesized-on-demand entries carry an
/// unbounded sentinel.
fn fmt_prec(prec: i64) -> String {
    if prec >= PREC_INF {
        "inf".into()
    } else {
        prec.to_string()
    }
}

fn print_catalog(emit: EmitFormat, entries: &[(String, i64, i64, usize, usize)]) {
    match emit {
        EmitFormat::Table => {
            let mut body: Vec<Vec<String>> = vec![vec![
                "group".into(),
                "genus".into(),
                "prec".into(),
                "cusp-seeds".into(),
                "pinned-prefixes".into(),
            ]];
            for (group, genus, prec, seeds, pins) in entries {
                body.push(vec![
                    group.clone(),
                    genus.to_string(),
                    fmt_prec(*prec),
                    seeds.to_string(),
                    pins.to_string(),
                ]);
            }
            let widths: Vec<usize> = (0..body[0].len())
                .map(|j| body.iter().map(|row| row[j].len()).max().unwrap_or(0))
                .collect();
            for row in &body {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:<w$}"))
                    .collect();
                println!("{}", line.join("  ").trim_end());
            }
        }
        EmitFormat::Csv => {
            println!("group,genus,prec,cusp_seeds,pinned_prefixes");
            for (group, genus, prec, seeds, pins) in entries {
                println!(
                    "{},{genus},{},{seeds},{pins}",
                    csv_field(group),
                    fmt_prec(*prec)
                );
            }
        }
        EmitFormat::Json => {
            let arr: Vec<Value> = entries
                .iter()
                .map(|(group, genus, prec, seeds, pins)| {
                    let prec_value = if *prec >= PREC_INF {
                        Value::Null
                    } else {
                        json!(prec)
                    };
                    json!({
                        "group": group,
                        "genus": genus,
                        "prec": prec_value,
                        "cusp_seeds": seeds,
                        "pinned_prefixes": pins,
                    })
                })
                .collect();
            println!(
                "{}",
                json!({ "schema": JSON_SCHEMA, "kind": "catalog", "entries": arr })
            );
        }
    }
}

/// Quote a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_syntax_round_trips() {
        assert_eq!("f:3".parse::<Element>().unwrap(), Element::F(3));
        assert_eq!("J:2".parse::<Element>().unwrap(), Element::J(2));
        assert_eq!("j:2".parse::<Element>().unwrap(), Element::J(2));
        assert!("f3".parse::<Element>().is_err());
        assert!("f:0".parse::<Element>().is_err());
        assert!("g:2".parse::<Element>().is_err());
        assert_eq!(Element::F(3).to_string(), "f:3");
    }

    #[test]
    fn hecke_op_syntax_round_trips() {
        assert_eq!("T(8)".parse::<HeckeOp>().unwrap(), HeckeOp::M(8));
        assert_eq!(
            "T(2^3)".parse::<HeckeOp>().unwrap(),
            HeckeOp::Pr { p: 2, r: 3 }
        );
        assert!("T(4^2)".parse::<HeckeOp>().is_err());
        assert!("T(0)".parse::<HeckeOp>().is_err());
        assert!("U(2)".parse::<HeckeOp>().is_err());
        assert_eq!(HeckeOp::Pr { p: 2, r: 3 }.to_string(), "T(2^3)");
        assert_eq!(HeckeOp::M(8).to_string(), "T(8)");
    }

    #[test]
    fn empty_check_list_renders_minimal_json() {
        let rendered = checks_json(&[]);
        assert!(
            rendered.starts_with("{\"checks\":[]"),
            "got {rendered}"
        );
        assert!(rendered.contains(JSON_SCHEMA));
    }

    #[test]
    fn csv_fields_are_quoted_when_needed() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn clap_tree_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
