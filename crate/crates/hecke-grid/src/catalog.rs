//! Shipped expansion data for the supported groups.
//!
//! The catalog maps each supported group Gamma_0(N)+S to the exact data the
//! basis builders need:
//!
//! - genus 0 entries carry a Hauptmodul recipe (an eta-quotient construction
//!   or the classical level-1 j), materialized live at any precision;
//! - higher-genus entries ship generator q-expansions as checksummed data
//!   files: X with pole order g+1, Y with pole order g+2, and (for the
//!   genus-2 entry, whose pole-order semigroup <g+1, g+2> misses g+3) one
//!   extra generator with pole order g+3. They also ship a basis of cusp
//!   expansions (weight-2 holomorphic rows) used to build the weight-2
//!   tables.
//!
//! Every shipped series records its provenance (which independent oracle
//! produced it) and, where available, a golden prefix: the leading
//! coefficients are pinned in code and re-checked by [`validate`], so a
//! corrupted data file is caught by the checksum, the goldens, or the
//! duality/echelon invariants — whichever trips first.
//!
//! The supported set is closed under prime reduction (every reduce_p image
//! of a shipped group is shipped), which the catalog-wide validation
//! checks. Set the `HECKE_GRID_CATALOG` environment variable to override
//! the directory data files are read from.

use crate::basis;
use crate::classics::{self, EtaQuotientSpec};
use crate::errors::Error;
use crate::groups::Group;
use crate::series::{qr, QSeries};
use crate::Result;
use sha2::{Digest, Sha256};
use std::fmt;
use std::str::FromStr;

/// Environment variable that overrides the catalog data directory.
pub const CATALOG_DIR_ENV: &str = "HECKE_GRID_CATALOG";

/// Embedded data files (the shipped defaults).
const DATA_11: &str = include_str!("../data/11.hgc");
const DATA_17: &str = include_str!("../data/17.hgc");
const DATA_19: &str = include_str!("../data/19.hgc");
const DATA_22: &str = include_str!("../data/22.hgc");
const DATA_22_2: &str = include_str!("../data/22+2.hgc");

/// Construction recipe for a genus-0 Hauptmodul, normalized to
/// q^-1 + 0 + O(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HauptmodulRecipe {
    /// E4^3 / eta^24 - 744 (level 1).
    LevelOneJ,
    /// eta quotient plus a constant.
    EtaPlus { spec: EtaQuotientSpec, add: i64 },
    /// t + scale / t + add for an eta quotient t (used when the group
    /// includes an Atkin-Lehner involution that inverts t up to scale).
    EtaFrickeSum {
        spec: EtaQuotientSpec,
        scale: i64,
        add: i64,
    },
}

impl HauptmodulRecipe {
    /// Materialize the Hauptmodul on the window [-1, prec).
    pub fn expand(&self, prec: i64) -> Result<QSeries> {
        match self {
            HauptmodulRecipe::LevelOneJ => Ok(classics::hauptmodul_level1(prec)),
            HauptmodulRecipe::EtaPlus { spec, add } => Ok(classics::eta_quotient(spec, prec)?
                .add(&QSeries::constant(qr(*add)))),
            HauptmodulRecipe::EtaFrickeSum { spec, scale, add } => {
                let t = classics::eta_quotient(spec, prec)?;
                Ok(t.add(&t.invert()?.scale(&qr(*scale)))
                    .add(&QSeries::constant(qr(*add))))
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            HauptmodulRecipe::LevelOneJ => "recipe:E4^3/eta(1)^24-744".to_string(),
            HauptmodulRecipe::EtaPlus { spec, add } => format!("recipe:{spec}+{add}"),
            HauptmodulRecipe::EtaFrickeSum { spec, scale, add } => {
                format!("recipe:t+{scale}/t+{add} for t={spec}")
            }
        }
    }
}

/// Identifier of a shipped (or recipe-derived) series within an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesId {
    /// Genus-0 Hauptmodul.
    Hauptmodul,
    /// Generator with pole order g+1.
    X,
    /// Generator with pole order g+2.
    Y,
    /// Extra generator (index from 0; pole order g+3+i).
    Extra(u8),
    /// Cusp-expansion seed (index from 0).
    Seed(u8),
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesId::Hauptmodul => write!(f, "t"),
            SeriesId::X => write!(f, "X"),
            SeriesId::Y => write!(f, "Y"),
            SeriesId::Extra(i) => write!(f, "Z{i}"),
            SeriesId::Seed(i) => write!(f, "seed{i}"),
        }
    }
}

impl FromStr for SeriesId {
    type Err = Error;

    fn from_str(s: &str) -> Result<SeriesId> {
        match s {
            "t" => Ok(SeriesId::Hauptmodul),
            "X" => Ok(SeriesId::X),
            "Y" => Ok(SeriesId::Y),
            _ => {
                if let Some(i) = s.strip_prefix('Z') {
                    Ok(SeriesId::Extra(i.parse().map_err(|_| {
                        Error::SeriesParse(format!("bad series id {s:?}"))
                    })?))
                } else if let Some(i) = s.strip_prefix("seed") {
                    Ok(SeriesId::Seed(i.parse().map_err(|_| {
                        Error::SeriesParse(format!("bad series id {s:?}"))
                    })?))
                } else {
                    Err(Error::SeriesParse(format!("bad series id {s:?}")))
                }
            }
        }
    }
}

/// Function-field generators for an entry.
#[derive(Clone, Debug)]
pub enum Generators {
    /// Genus 0: a Hauptmodul recipe (materialized on demand).
    Hauptmodul(HauptmodulRecipe),
    /// Genus >= 1: shipped generator expansions. `x` has pole order g+1,
    /// `y` pole order g+2, and `extra[i]` pole order g+3+i; together their
    /// pole orders generate every integer > g.
    FunctionField {
        x: QSeries,
        y: QSeries,
        extra: Vec<QSeries>,
    },
}

/// One catalog entry: everything shipped for a single group.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// The group.
    pub group: Group,
    /// Genus of the compactified quotient curve.
    pub genus: i64,
    /// Whether the cusp at infinity is a Weierstrass point of that curve
    /// (false for every shipped entry; recorded so the basis builder can
    /// refuse shapes it does not handle).
    pub infinity_weierstrass: bool,
    /// Generator data.
    pub gens: Generators,
    /// Cusp-expansion seeds (weight-2 holomorphic rows before echelon
    /// reduction); `genus` of them for the shipped entries.
    pub cusp_seeds: Vec<QSeries>,
    /// Positive-exponent window available from the shipped data
    /// ([`crate::series::PREC_INF`] for live recipes).
    pub prec: i64,
    /// Provenance, one line per shipped series: which independent oracle
    /// produced it and how many leading coefficients are pinned in code.
    pub provenance: Vec<(SeriesId, String)>,
}

/// A golden prefix: leading coefficients of a shipped series pinned in code.
#[derive(Clone, Debug)]
pub struct Golden {
    /// Which series the prefix pins.
    pub id: SeriesId,
    /// The pinned leading window.
    pub prefix: QSeries,
}

impl CatalogEntry {
    /// The generator series the weight-0 pool is built from, in pole-order
    /// order (X, Y, extras). Errors for genus 0 (use the Faber route).
    pub fn pool_generators(&self) -> Result<Vec<(SeriesId, QSeries)>> {
        match &self.gens {
            Generators::Hauptmodul(_) => Err(Error::CatalogInvalid {
                group: self.group.to_string(),
                detail: "genus-0 entries have no function-field generator pool".into(),
            }),
            Generators::FunctionField { x, y, extra } => {
                let mut v = vec![(SeriesId::X, x.clone()), (SeriesId::Y, y.clone())];
                for (i, z) in extra.iter().enumerate() {
                    v.push((SeriesId::Extra(i as u8), z.clone()));
                }
                Ok(v)
            }
        }
    }

    /// Look up a shipped/derived series by id, materializing recipes at the
    /// given precision.
    pub fn series(&self, id: SeriesId, prec: i64) -> Result<QSeries> {
        match (&self.gens, id) {
            (Generators::Hauptmodul(r), SeriesId::Hauptmodul) => r.expand(prec),
            (Generators::FunctionField { x, .. }, SeriesId::X) => Ok(x.truncated(prec)),
            (Generators::FunctionField { y, .. }, SeriesId::Y) => Ok(y.truncated(prec)),
            (Generators::FunctionField { extra, .. }, SeriesId::Extra(i))
                if (i as usize) < extra.len() =>
            {
                Ok(extra[i as usize].truncated(prec))
            }
            (_, SeriesId::Seed(i)) if (i as usize) < self.cusp_seeds.len() => {
                Ok(self.cusp_seeds[i as usize].truncated(prec))
            }
            _ => Err(Error::CatalogInvalid {
                group: self.group.to_string(),
                detail: format!("entry has no series {id}"),
            }),
        }
    }
}

/// The supported groups, in canonical order.
pub fn supported_groups() -> Vec<Group> {
    [
        "1", "2", "2+2", "11", "17", "19", "22", "22+2",
    ]
    .iter()
    .map(|s| s.parse().expect("builtin group labels parse"))
    .collect()
}

fn supported_list() -> String {
    supported_groups()
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Golden prefixes pinned in code for the given group (empty when the
/// entry has none).
pub fn goldens(group: &Group) -> Vec<Golden> {
    let label = group.to_string();
    let pin = |id: SeriesId, val: i64, ints: &[i64]| Golden {
        id,
        prefix: QSeries::from_ints(val, ints, val + ints.len() as i64),
    };
    match label.as_str() {
        "1" => vec![pin(SeriesId::Hauptmodul, -1, &[1, 0, 196884, 21493760])],
        "2" => vec![pin(
            SeriesId::Hauptmodul,
            -1,
            &[1, 0, 276, -2048, 11202, -49152, 184024],
        )],
        "2+" => vec![pin(SeriesId::Hauptmodul, -1, &[1, 0, 4372, 96256])],
        "11" => vec![
            pin(SeriesId::X, -2, &[1, 2, 4, 5, 8, 1, 7, -11]),
            pin(SeriesId::Y, -3, &[1, 3, 7, 12, 17, 26, 19, 37, -15]),
            pin(SeriesId::Seed(0), 1, &[1, -2, -1, 2, 1, 2, -2, 0, -2]),
        ],
        "22" => vec![
            pin(SeriesId::X, -3, &[1, 0, 1, 4, 2, 2, 0, 0, 2]),
            pin(SeriesId::Y, -4, &[1, -1, 2, 1, 3, -2, 1]),
            pin(SeriesId::Seed(0), 1, &[1, -2, -1, 2, 1]),
            pin(SeriesId::Seed(1), 2, &[1, 0, -2, 0, -1]),
        ],
        "22+2" => vec![
            pin(SeriesId::X, -2, &[1, 0, 0, 1, 2, 1, 3, -3]),
            pin(SeriesId::Seed(0), 1, &[1, 0, -1, -2, 1]),
        ],
        _ => Vec::new(),
    }
}

/// Load the entry for a group: live recipes for the genus-0 groups,
/// checksum-verified data files otherwise. Honors [`CATALOG_DIR_ENV`].
pub fn load(group: &Group) -> Result<CatalogEntry> {
    let label = group.to_string();
    match label.as_str() {
        "1" => Ok(genus0_entry(group, HauptmodulRecipe::LevelOneJ)),
        "2" => Ok(genus0_entry(
            group,
            HauptmodulRecipe::EtaPlus {
                spec: "1^24*2^-24".parse().expect("builtin spec"),
                add: 24,
            },
        )),
        "2+" => Ok(genus0_entry(
            group,
            HauptmodulRecipe::EtaFrickeSum {
                spec: "1^24*2^-24".parse().expect("builtin spec"),
                scale: 4096,
                add: 24,
            },
        )),
        "11" | "17" | "19" | "22" | "22+2" => {
            let text = data_file_text(&label)?;
            parse_entry(group, &text)
        }
        _ => Err(Error::UnsupportedGroup {
            group: label,
            supported: supported_list(),
        }),
    }
}

fn genus0_entry(group: &Group, recipe: HauptmodulRecipe) -> CatalogEntry {
    let provenance = vec![(SeriesId::Hauptmodul, recipe.describe())];
    CatalogEntry {
        group: group.clone(),
        genus: 0,
        infinity_weierstrass: false,
        gens: Generators::Hauptmodul(recipe),
        cusp_seeds: Vec::new(),
        prec: crate::series::PREC_INF,
        provenance,
    }
}

fn data_file_text(label: &str) -> Result<String> {
    if let Ok(dir) = std::env::var(CATALOG_DIR_ENV) {
        let path = std::path::Path::new(&dir).join(format!("{label}.hgc"));
        return std::fs::read_to_string(&path).map_err(|e| Error::CatalogParse {
            group: label.to_string(),
            detail: format!("cannot read {}: {e}", path.display()),
        });
    }
    Ok(match label {
        "11" => DATA_11,
        "17" => DATA_17,
        "19" => DATA_19,
        "22" => DATA_22,
        "22+2" => DATA_22_2,
        _ => unreachable!("data_file_text called for non-data group"),
    }
    .to_string())
}

/// Serialize an entry to the data-file text form (used by the generator
/// tool; the checksum line covers everything after itself).
pub fn entry_to_text(entry: &CatalogEntry) -> Result<String> {
    let (x, y, extra) = match &entry.gens {
        Generators::FunctionField { x, y, extra } => (x, y, extra),
        Generators::Hauptmodul(_) => {
            return Err(Error::CatalogInvalid {
                group: entry.group.to_string(),
                detail: "genus-0 entries are recipes, not data files".into(),
            })
        }
    };
    let mut body = String::new();
    let prov = |id: SeriesId| -> String {
        entry
            .provenance
            .iter()
            .find(|(pid, _)| *pid == id)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| "unspecified".to_string())
    };
    let mut push_series = |kind: &str, id: SeriesId, s: &QSeries| -> Result<()> {
        body.push_str(&format!("{kind} {id} {}\n", prov(id)));
        body.push_str(&s.to_text()?);
        body.push('\n');
        Ok(())
    };
    push_series("gen", SeriesId::X, x)?;
    push_series("gen", SeriesId::Y, y)?;
    for (i, z) in extra.iter().enumerate() {
        push_series("gen", SeriesId::Extra(i as u8), z)?;
    }
    for (i, s) in entry.cusp_seeds.iter().enumerate() {
        push_series("seed", SeriesId::Seed(i as u8), s)?;
    }
    let digest = hex_sha256(&body);
    Ok(format!(
        "hecke-grid-catalog v1\ngroup {}\ngenus {}\ninfinity-weierstrass {}\nprec {}\nsha256 {}\n{}",
        entry.group, entry.genus, entry.infinity_weierstrass, entry.prec, digest, body
    ))
}

fn hex_sha256(body: &str) -> String {
    let mut h = Sha256::new();
    h.update(body.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_entry(group: &Group, text: &str) -> Result<CatalogEntry> {
    let label = group.to_string();
    let perr = |detail: String| Error::CatalogParse {
        group: label.clone(),
        detail,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| perr("empty file".into()))?;
    if header.trim() != "hecke-grid-catalog v1" {
        return Err(perr(format!("unrecognized header {header:?}")));
    }
    let mut genus: Option<i64> = None;
    let mut infinity_weierstrass = false;
    let mut prec: Option<i64> = None;
    let mut declared_sha: Option<String> = None;
    let mut file_group: Option<String> = None;
    for line in lines.by_ref() {
        let line = line.trim();
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| perr(format!("malformed header line {line:?}")))?;
        match key {
            "group" => file_group = Some(value.to_string()),
            "genus" => {
                genus = Some(
                    value
                        .parse()
                        .map_err(|e| perr(format!("bad genus: {e}")))?,
                )
            }
            "infinity-weierstrass" => {
                infinity_weierstrass = value
                    .parse()
                    .map_err(|e| perr(format!("bad infinity-weierstrass: {e}")))?
            }
            "prec" => {
                prec = Some(
                    value
                        .parse()
                        .map_err(|e| perr(format!("bad prec: {e}")))?,
                )
            }
            "sha256" => {
                declared_sha = Some(value.to_string());
                break;
            }
            _ => return Err(perr(format!("unknown header key {key:?}"))),
        }
    }
    let declared_sha = declared_sha.ok_or_else(|| perr("missing sha256 line".into()))?;
    // The checksum covers everything after the sha256 line.
    let body_start = text
        .find("sha256 ")
        .and_then(|i| text[i..].find('\n').map(|j| i + j + 1))
        .ok_or_else(|| perr("missing body".into()))?;
    let body = &text[body_start..];
    let found = hex_sha256(body);
    if found != declared_sha {
        return Err(Error::CatalogChecksum {
            group: label.clone(),
            expected: declared_sha,
            found,
        });
    }
    if file_group.as_deref() != Some(label.as_str()) {
        return Err(perr(format!(
            "file is for group {:?}, expected {label:?}",
            file_group.unwrap_or_default()
        )));
    }
    let genus = genus.ok_or_else(|| perr("missing genus".into()))?;
    let prec = prec.ok_or_else(|| perr("missing prec".into()))?;

    let mut x: Option<QSeries> = None;
    let mut y: Option<QSeries> = None;
    let mut extra: Vec<(u8, QSeries)> = Vec::new();
    let mut seeds: Vec<(u8, QSeries)> = Vec::new();
    let mut provenance = Vec::new();
    let mut body_lines = body.lines();
    while let Some(head) = body_lines.next() {
        let head = head.trim();
        if head.is_empty() {
            continue;
        }
        let mut parts = head.splitn(3, ' ');
        let kind = parts.next().unwrap_or_default();
        let id: SeriesId = parts
            .next()
            .ok_or_else(|| perr(format!("series line {head:?} missing id")))?
            .parse()?;
        let prov = parts.next().unwrap_or("unspecified").to_string();
        let series_text = body_lines
            .next()
            .ok_or_else(|| perr(format!("series {id} missing expansion line")))?;
        let series = QSeries::from_text(series_text)?;
        provenance.push((id, prov));
        match (kind, id) {
            ("gen", SeriesId::X) => x = Some(series),
            ("gen", SeriesId::Y) => y = Some(series),
            ("gen", SeriesId::Extra(i)) => extra.push((i, series)),
            ("seed", SeriesId::Seed(i)) => seeds.push((i, series)),
            _ => return Err(perr(format!("unexpected series line {head:?}"))),
        }
    }
    extra.sort_by_key(|(i, _)| *i);
    seeds.sort_by_key(|(i, _)| *i);
    let entry = CatalogEntry {
        group: group.clone(),
        genus,
        infinity_weierstrass,
        gens: Generators::FunctionField {
            x: x.ok_or_else(|| perr("missing generator X".into()))?,
            y: y.ok_or_else(|| perr("missing generator Y".into()))?,
            extra: extra.into_iter().map(|(_, s)| s).collect(),
        },
        cusp_seeds: seeds.into_iter().map(|(_, s)| s).collect(),
        prec,
        provenance,
    };
    Ok(entry)
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

/// Options for [`validate`].
#[derive(Clone, Debug)]
pub struct ValidateOptions {
    /// Largest basis-row index for the duality grid.
    pub m_max: i64,
    /// Largest weight-2 row index for the duality grid.
    pub n_max: i64,
    /// Check the theta-derivative expansion of the first rows over the full
    /// shipped positive window (this is what catches a corrupted high-index
    /// coefficient that the finite duality grid cannot see).
    pub full_window_theta: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            m_max: 16,
            n_max: 20,
            full_window_theta: true,
        }
    }
}

/// One validation check outcome.
#[derive(Clone, Debug)]
pub struct CheckResult {
    /// Short identifier of the check.
    pub name: String,
    /// Whether it passed.
    pub pass: bool,
    /// Human-readable detail (failure reason or summary).
    pub detail: String,
}

/// Validation report for one entry (or the whole catalog).
#[derive(Clone, Debug)]
pub struct ValidationReport {
    /// The validated group (`*` for catalog-wide checks).
    pub group: String,
    /// Individual check outcomes.
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    /// True if every check passed.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass,
            detail,
        });
    }
}

/// Validate one entry: shape checks (valuations, genus, seed echelon),
/// a full basis rebuild with integrality, the duality grid, the
/// theta-derivative expansion over the full shipped window, and the golden
/// prefixes.
pub fn validate(entry: &CatalogEntry, opts: &ValidateOptions) -> ValidationReport {
    let mut report = ValidationReport {
        group: entry.group.to_string(),
        checks: Vec::new(),
    };
    match basis::validate_entry(entry, opts, &mut report) {
        Ok(()) => {}
        Err(e) => report.push("validation-run", false, format!("aborted: {e}")),
    }
    // Golden prefixes.
    let pins = goldens(&entry.group);
    if pins.is_empty() {
        report.push("golden-prefix", true, "no pinned prefixes".into());
    } else {
        let mut bad = Vec::new();
        for g in &pins {
            let got = entry.series(g.id, g.prefix.prec());
            match got {
                Ok(s) => match s.agrees(&g.prefix) {
                    Ok(a) if a.ok() => {}
                    Ok(a) => bad.push(format!(
                        "{}: first mismatch at q^{}",
                        g.id,
                        a.first_mismatch.map(|(e, _, _)| e).unwrap_or_default()
                    )),
                    Err(e) => bad.push(format!("{}: {e}", g.id)),
                },
                Err(e) => bad.push(format!("{}: {e}", g.id)),
            }
        }
        report.push(
            "golden-prefix",
            bad.is_empty(),
            if bad.is_empty() {
                format!("{} pinned prefixes match", pins.len())
            } else {
                bad.join("; ")
            },
        );
    }
    report
}

/// Validate the whole catalog: every entry, plus closure of the supported
/// set under prime reduction.
pub fn validate_all(opts: &ValidateOptions) -> Vec<ValidationReport> {
    let mut reports = Vec::new();
    let supported = supported_groups();
    for g in &supported {
        match load(g) {
            Ok(entry) => reports.push(validate(&entry, opts)),
            Err(e) => reports.push(ValidationReport {
                group: g.to_string(),
                checks: vec![CheckResult {
                    name: "load".into(),
                    pass: false,
                    detail: e.to_string(),
                }],
            }),
        }
    }
    // Replicate closure: reduce_p of every shipped group at every prime
    // dividing its level must be shipped.
    let mut closure = ValidationReport {
        group: "*".into(),
        checks: Vec::new(),
    };
    let mut missing = Vec::new();
    for g in &supported {
        for (p, _) in crate::groups::factorize(g.level()) {
            let r = g.reduce_p(p);
            if !supported.contains(&r) {
                missing.push(format!("{g} --[{p}]--> {r}"));
            }
        }
    }
    closure.push(
        "replicate-closure",
        missing.is_empty(),
        if missing.is_empty() {
            "supported set closed under prime reduction".into()
        } else {
            missing.join("; ")
        },
    );
    reports.push(closure);
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supported_set_is_reduction_closed() {
        let supported = supported_groups();
        for g in &supported {
            for (p, _) in crate::groups::factorize(g.level()) {
                assert!(
                    supported.contains(&g.reduce_p(p)),
                    "{g} reduces at {p} to {} which is not shipped",
                    g.reduce_p(p)
                );
            }
        }
    }

    #[test]
    fn unsupported_group_is_an_error() {
        let g: Group = "15".parse().unwrap();
        match load(&g) {
            Err(Error::UnsupportedGroup { group, supported }) => {
                assert_eq!(group, "15");
                assert!(supported.contains("22+2"));
            }
            other => panic!("expected UnsupportedGroup, got {other:?}"),
        }
    }

    #[test]
    fn genus0_recipes_materialize() {
        for label in ["1", "2", "2+2"] {
            let g: Group = label.parse().unwrap();
            let entry = load(&g).unwrap();
            assert_eq!(entry.genus, 0);
            let t = entry.series(SeriesId::Hauptmodul, 8).unwrap();
            assert_eq!(t.valuation(), Some(-1));
            assert_eq!(t.coeff(-1).unwrap(), qr(1));
            assert_eq!(t.coeff(0).unwrap(), qr(0), "normalized constant for {label}");
            assert!(t.is_integral());
        }
    }

    #[test]
    fn fricke_sum_hauptmodul_prefix() {
        // t + 4096/t + 24 for t = (eta(tau)/eta(2tau))^24: the pole-1
        // function invariant under the full involution set at level 2.
        let g: Group = "2+2".parse().unwrap();
        let t = load(&g).unwrap().series(SeriesId::Hauptmodul, 4).unwrap();
        assert_eq!(t.coeff(1).unwrap(), qr(4372));
        assert_eq!(t.coeff(2).unwrap(), qr(96256));
        assert_eq!(t.coeff(3).unwrap(), qr(1240002));
    }

    #[test]
    fn checksum_detects_corruption() {
        let text = data_file_text("11").unwrap();
        // Flip one digit in the body (after the sha256 line).
        let idx = text.find("sha256").unwrap();
        let body_at = idx + text[idx..].find('\n').unwrap() + 1;
        let target = text[body_at..]
            .find(|c: char| c.is_ascii_digit())
            .map(|i| body_at + i)
            .unwrap();
        let mut corrupted = text.clone();
        let old = corrupted.as_bytes()[target];
        let new = if old == b'9' { b'8' } else { old + 1 };
        unsafe { corrupted.as_bytes_mut()[target] = new };
        let g: Group = "11".parse().unwrap();
        match parse_entry(&g, &corrupted) {
            Err(Error::CatalogChecksum { .. }) => {}
            other => panic!("expected checksum error, got {other:?}"),
        }
    }

    #[test]
    fn entry_text_round_trip() {
        let g: Group = "11".parse().unwrap();
        let entry = load(&g).unwrap();
        let text = entry_to_text(&entry).unwrap();
        let back = parse_entry(&g, &text).unwrap();
        assert_eq!(back.genus, entry.genus);
        assert_eq!(back.prec, entry.prec);
        if let (
            Generators::FunctionField { x: a, .. },
            Generators::FunctionField { x: b, .. },
        ) = (&entry.gens, &back.gens)
        {
            assert!(a.agrees(b).unwrap().ok());
        } else {
            panic!("expected function-field generators");
        }
    }
}
