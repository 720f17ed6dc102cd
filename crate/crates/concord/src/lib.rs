//! Chance-corrected inter-rater agreement and cross-group meta-analysis.
//!
//! The crate computes weighted Cohen's kappas (with asymptotic standard
//! errors, confidence intervals, significance tests, and guideline-based
//! verbal interpretations), fits a heteroscedastic normal model across
//! groups of kappas to draw funnel plots and run held-out outlier tests,
//! reproduces the consensus-group audit of the Italian VQR dual-evaluation
//! experiment, and ships a Monte Carlo harness that calibrates the
//! asymptotics against simulation.
//!
//! Start with the runnable examples (`cargo run --example kappa_from_ratings`)
//! or the `concord` binary; the embedded VQR dataset lives in [`dataset`].
//!
//! ```
//! use concord::{interpret, weighted_kappa, ContingencyTable, Guideline, WeightScheme};
//!
//! # fn main() -> concord::Result<()> {
//! let table = ContingencyTable::from_counts(&[vec![25, 5], vec![5, 15]])?;
//! let est = weighted_kappa(&table, &WeightScheme::unweighted(2)?)?;
//! assert!((est.kappa - 0.28 / 0.48).abs() < 1e-12);
//! assert_eq!(interpret(est.kappa, Guideline::LandisKoch), "Moderate");
//! # Ok(())
//! # }
//! ```

// index loops read better than zipped iterators in the (i, j) matrix kernels
#![allow(clippy::needless_range_loop)]

pub mod audit;
pub mod categories;
pub mod cli;
pub mod dataset;
pub mod dist;
pub mod error;
pub mod interpret;
pub mod io;
pub mod kappa;
pub mod meta;
pub mod report;
pub mod sim;
pub mod svg;
pub mod table;
pub mod weights;

pub use categories::{CategorySet, MeritClass, RatingPair};
pub use error::{Error, Result};
pub use interpret::{interpret, Guideline};
pub use kappa::{
    confidence_interval, significance_test, standard_error, weighted_kappa, KappaEstimate, Sided,
};
pub use meta::{
    fit, funnel_points, leave_one_out, multi_exceedance_probability, prediction_interval,
    test_group, GroupKappa, MetaModel, OutlierTest, PredictionBand,
};
pub use table::ContingencyTable;
pub use weights::WeightScheme;
