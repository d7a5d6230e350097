//! Exact analysis of what finite observations reveal, and how to release
//! functions of distributed secrets without revealing more than a budget.
//!
//! The model is worst-case rather than probabilistic: an uncertain variable
//! is a total assignment of values to finitely many worlds, and every
//! quantity is derived from the sets of values such assignments can take.
//! All arithmetic is over exact rationals; logarithms are deferred to
//! presentation time so that comparisons against budgets stay exact.
//!
//! The crate covers, in dependency order:
//!
//! * [`space`]: sample spaces, ranges, conditional ranges, push-forwards.
//! * [`query`]: tabulated and built-in functions of several variables.
//! * [`measures`]: entropy, information and leakage over ranges.
//! * [`partitions`]: overlap and taxicab partitions, maximin information,
//!   disassociation tests, relaxed overlap families.
//! * [`common`]: the largest variable two parties both determine.
//! * [`privacy`]: perfect and budgeted privacy verdicts, and the optimal
//!   release that is exactly private.
//! * [`quantizer`]: budget-driven quantization of numeric queries with
//!   certified leakage and accuracy.

pub mod common;
pub mod dataset;
pub mod error;
pub mod measures;
pub mod meb;
pub mod partitions;
pub mod privacy;
pub mod quantizer;
pub mod query;
pub mod rational;
pub mod space;
pub mod value;

mod dsu;

pub use error::{Error, Result};
pub use measures::{LogBase, LogValue, MeasureResult};
pub use query::{Builtin, QueryBody, QueryFunction};
pub use space::{RangeSet, SampleSpace};
pub use value::Value;
