//! Exact-arithmetic engine for canonical bases of weakly holomorphic modular
//! functions on the groups Gamma_0(N)+S, together with the generalized Hecke
//! operators T(p^r) / T(m) that act on their q-expansions.
//!
//! Everything is computed over exact rationals (arbitrary precision, no
//! floating point) on explicitly tracked exponent windows:
//!
//! - [`series`]: truncated Laurent q-series [`series::QSeries`] and the
//!   coefficient operators U*_p, V_m, theta = q d/dq, reduction mod p^r.
//! - [`biseries`]: two-variable series in (q1, q2) used by the
//!   generating-function identities.
//! - [`classics`]: Dedekind eta products, Eisenstein series E4/E6, and the
//!   classical Hauptmoduls they generate.
//! - [`groups`]: the groups Gamma_0(N)+S (S a Hall-closed set of exact
//!   divisors) and their prime reductions N+S -> N^(p)+S^(p).
//! - [`catalog`]: shipped, checksummed expansion data for the supported
//!   groups, plus self-validation.
//! - [`basis`]: the canonical weight-0 basis rows f_{Gamma,m}, the weight-2
//!   rows h_{Gamma,n}, genus-0 Faber polynomials, and the coefficient grids
//!   a(m, n) / b(n, m) they define.
//! - [`replicate`]: expansion of a function in the basis-row system, the
//!   p-plicate f -> f^(p) living on the reduced group, and the holomorphy
//!   test that decides whether a plicate is again weakly holomorphic.
//! - [`hecke`]: the operators T(p^r) and T(m) on q-expansions, their
//!   closed-form action on basis rows, and the replication identities.
//! - [`identities`]: duality a(m, n) = -b(n, m), the two-variable
//!   generating-function identity, and the theta-derivative identity.
//! - [`congruence`]: coefficient congruences mod p^r attached to the Hecke
//!   action, with machine-enforced hypotheses and failure witnesses.
//! - [`cli`]: the command-line front end (a thin adapter over the library).

pub mod basis;
pub mod biseries;
pub mod catalog;
pub mod classics;
pub mod cli;
pub mod congruence;
pub mod errors;
pub mod groups;
pub mod hecke;
pub mod identities;
pub mod replicate;
pub mod series;

pub use errors::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
