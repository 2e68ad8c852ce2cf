//! Exact enumeration and sieving of the feasible distance distributions of
//! binary orthogonal arrays.
//!
//! The pipeline has three layers:
//!
//! * [`distributions`] lists every nonnegative integer solution of the moment
//!   system for a parameter triple `(n, M, τ)`, split into the `P`/`Q`/`W`
//!   sets of internal, external and all reference points.
//! * [`sieves`] relates an array to the array with one column deleted and to
//!   the two halves obtained by splitting on that column, and rules out
//!   distributions (or pairs of distributions) that no such relation can
//!   realise.
//! * [`orchestrator`] lays out a workbook of related triples and applies the
//!   sieves until nothing more can be removed. An empty `W` set certifies that
//!   no array with those parameters exists.
//!
//! [`oracle`] builds explicit arrays for ground truth, [`moments`] holds the
//! exact constants, and [`cli`] backs the `boa` binary.
//!
//! Runnable examples live in `examples/`: `moment_constants`,
//! `enumerate_sets`, `column_deletion`, `run_workbook`, `coexistence` and
//! `verify_array`.
//!
//! ```
//! use boa_sieve::orchestrator::SieveOptions;
//! use boa_sieve::{build_workbook, enumerate_initial, ParameterTriple, SetKind, Verdict};
//!
//! let target = ParameterTriple::new(7, 48, 3)?;
//! assert_eq!(enumerate_initial(target, SetKind::W)?.len(), 94);
//! let mut workbook = build_workbook(target, 2)?;
//! let report = workbook.run_fixed_point(&SieveOptions::default())?;
//! assert_eq!(report.target_verdict(), Verdict::Undecided { survivors: 68 });
//! # Ok::<(), boa_sieve::Error>(())
//! ```

pub mod cli;
pub mod distributions;
pub mod error;
pub mod moments;
pub mod oracle;
pub mod orchestrator;
pub mod sieves;

pub use distributions::{
    brute_force_enumerate, classify, enumerate_initial, mirror, DistanceDistribution,
    DistributionSet, ParameterTriple, SetKind,
};
pub use error::{Error, Result};
pub use orchestrator::{build_workbook, coexistence_propagate, RunReport, Verdict, Workbook};
