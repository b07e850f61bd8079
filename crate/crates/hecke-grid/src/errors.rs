//! Crate-wide error type.
//!
//! Every fallible public operation returns [`crate::Result`], whose error
//! carries enough structure for callers (and the CLI) to report exactly what
//! went wrong: the offending exponent for integrality faults, the required
//! window for precision shortfalls, the residual vector for failed holomorphy
//! tests, and so on.

use crate::series::QRat;
use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    // ---- series -------------------------------------------------------
    /// A coefficient outside the known window of a series was requested.
    #[error("coefficient of q^{exponent} is outside the known window [{val}, {prec})")]
    CoefficientUnknown { exponent: i64, val: i64, prec: i64 },

    /// Inversion requires a nonzero leading coefficient.
    #[error("cannot invert a series whose leading known coefficient is zero")]
    InvertLeadingZero,

    /// Reduction mod p^r (or an integrality-sensitive step) met a
    /// non-integral coefficient. Non-integrality is always a hard fault,
    /// never a "congruence failure".
    #[error("non-integral coefficient {value} at q^{exponent} in {context}")]
    NonIntegral {
        exponent: i64,
        value: QRat,
        context: String,
    },

    /// Two series were compared on windows that share no informative exponent.
    #[error("series windows share no informative exponent (cutoffs {prec_a} and {prec_b})")]
    EmptyOverlap { prec_a: i64, prec_b: i64 },

    /// A serialized series (or series field) failed to parse.
    #[error("malformed series text: {0}")]
    SeriesParse(String),

    // ---- classics ------------------------------------------------------
    /// Eta-quotient exponent sum violates the 24 | sum(d * r_d) condition.
    #[error("eta quotient {spec} has sum(d * r_d) = {weighted_sum}, not divisible by 24")]
    EtaExponent { spec: String, weighted_sum: i64 },

    /// An eta-quotient spec string failed to parse.
    #[error("malformed eta-quotient spec: {0}")]
    EtaParse(String),

    // ---- groups --------------------------------------------------------
    /// A listed q is not an exact divisor of N (q | N with gcd(q, N/q) = 1).
    #[error("{q} is not an exact divisor of {n}")]
    NotExactDivisor { q: u64, n: u64 },

    /// A group label failed to parse.
    #[error("malformed group label: {0}")]
    GroupParse(String),

    // ---- catalog -------------------------------------------------------
    /// The requested group is not in the shipped catalog.
    #[error("group {group} is not in the catalog (supported: {supported})")]
    UnsupportedGroup { group: String, supported: String },

    /// A catalog data file failed its checksum.
    #[error("catalog data for {group} failed its checksum (expected {expected}, found {found})")]
    CatalogChecksum {
        group: String,
        expected: String,
        found: String,
    },

    /// A catalog data file is malformed.
    #[error("malformed catalog data for {group}: {detail}")]
    CatalogParse { group: String, detail: String },

    /// Catalog validation failed.
    #[error("catalog validation failed for {group}: {detail}")]
    CatalogInvalid { group: String, detail: String },

    // ---- basis ---------------------------------------------------------
    /// The generator pool cannot reach the requested pole order.
    #[error("generator pool for {group} cannot produce pole order {order} (max {max})")]
    PoleOrderUnreachable { group: String, order: i64, max: i64 },

    /// The elimination had to clear an exponent for which no row exists.
    #[error("elimination cannot clear exponent q^{exponent} while reducing {context}")]
    CannotClear { exponent: i64, context: String },

    /// A table was asked for data beyond its built range.
    #[error("{table} table for {group} covers {covered}, requested {requested}")]
    TableRange {
        table: String,
        group: String,
        covered: String,
        requested: i64,
    },

    /// Weight-2 rows with poles are undefined at genus 0.
    #[error("cusp tables undefined for genus 0; use theta-derivatives of Faber rows")]
    CuspTablesGenusZero,

    /// A series is not in the span of the basis rows: the expansion left a
    /// nonzero residual.
    #[error("series is not in the basis span: residual {residual} (group {group})")]
    NotInSpan { group: String, residual: String },

    // ---- replicate / hecke ----------------------------------------------
    /// A plicate failed the holomorphy test; the residual vector d_l is the
    /// obstruction (the shadow does not vanish).
    #[error("{context}: plicate is mock on {group}; residuals {residuals:?}")]
    Mock {
        group: String,
        /// Pairs (l, d_l) with d_l != 0, for 1 <= l <= genus.
        residuals: Vec<(i64, QRat)>,
        context: String,
    },

    /// The input window is too small for the requested output precision.
    #[error("{operation} needs input known to exponent {required} for output precision {requested}, but input is known only to {available}")]
    PrecisionShortfall {
        operation: String,
        required: i64,
        available: i64,
        requested: i64,
    },

    /// The closed-form Hecke action is only implemented in proved regimes.
    #[error("closed-form T(p^r) action unsupported in this regime: {detail}")]
    RegimeUnsupported { detail: String },

    // ---- congruence ------------------------------------------------------
    /// A congruence-family hypothesis was violated by the requested
    /// parameters (hypotheses are machine-enforced).
    #[error("congruence {family}: hypothesis violated: {detail}")]
    Hypothesis { family: String, detail: String },

    // ---- cli / io ---------------------------------------------------------
    /// Usage or data error surfaced by the CLI layer.
    #[error("{0}")]
    Usage(String),

    /// Underlying I/O error (catalog files, output streams).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
