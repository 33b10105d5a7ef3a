//! Numerical radius, Crawford number and spectral quantities of dense complex
//! matrices, with a machine-checkable catalog of numerical-radius
//! inequalities and seeded ensembles to sweep them over.
//!
//! ```
//! use numrad_core::{evaluate, example_matrix, EvalConfig};
//!
//! let a = example_matrix("remark22").unwrap();
//! let report = &evaluate("I-MAIN", &[a], &EvalConfig::default()).unwrap()[0];
//! assert!(report.holds);
//! assert!((report.lhs.unwrap() - 3.5).abs() < 1e-9);
//! ```

pub mod ensembles;
pub mod error;
pub mod inequalities;
pub mod io;
pub mod matcore;
pub mod quantities;
pub mod repro;
pub mod search;
pub mod sweep;
pub mod tolerances;

pub use ensembles::{draw, example_matrix, trial_rng, EnsembleSpec, Family};
pub use error::{Error, MatrixError, Result};
pub use inequalities::{
    catalog_list, check_implication, evaluate, evaluate_many, mu, BoundReport, CatalogEntry,
    EvalConfig, ImplicationId, ImplicationReport, Sign, Variant,
};
pub use matcore::{abs_parts, block2, herm_eig, op_norm, power_psd, sqrt_psd, CMatrix};
pub use num_complex::Complex64;
pub use quantities::{
    alpha_min_bound, crawford, numerical_radius, spectral_radius, QuantityResult, SearchOptions,
};
pub use sweep::{run_sweep, SweepConfig, SweepOutput, SweepSummary, TrialRow};
