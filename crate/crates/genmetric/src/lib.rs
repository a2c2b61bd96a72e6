//! Generalized metric structures made executable.
//!
//! The crate works with six families of distance-like functions: metrics,
//! partial metrics and strong partial metrics, together with their arity-`n`
//! generalizations (n-Metrics, partial n-Metrics, strong partial n-Metrics).
//!
//! * [`space`] stores finite spaces as symmetric tables, checks every axiom
//!   exhaustively and converts between families.
//! * [`spaces`] is a catalog of concrete example spaces, both as finite tables
//!   and as closed-form evaluators over the real line.
//! * [`alignment`] computes gap alignment scores, which form strong partial
//!   metrics on words under valid scoring schemes.
//! * [`topology`] builds the finite topology generated by open balls and
//!   reports T0/T1/T2 separation.
//! * [`sequences`] gives finite-prefix verdicts for Cauchy sequences, limits,
//!   special limits and Cauchy pairs.
//! * [`fixedpoint`] iterates maps, checks contraction conditions and produces
//!   fixed, common fixed and coincidence point certificates.
//!
//! ```
//! use genmetric::spaces::{build_space, CatalogName, CatalogSpec};
//! use genmetric::space::{check_axioms, Tolerance};
//!
//! let space = build_space(&CatalogSpec::new(CatalogName::FiveMetricNegative, vec![])).unwrap();
//! let report = check_axioms(&space, Tolerance::default());
//! assert!(report.overall);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod alignment;
pub mod error;
pub mod fixedpoint;
pub mod sequences;
pub mod space;
pub mod spaces;
pub mod topology;

pub use error::{Error, Result};
