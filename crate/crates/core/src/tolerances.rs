//! Central numerical tolerances.
//!
//! Search and comparison tolerances that callers may want to override live in
//! [`SearchOptions`](crate::quantities::SearchOptions) and
//! [`EvalConfig`](crate::inequalities::EvalConfig); the defaults come from here.

/// Inputs to the Hermitian eigensolvers must satisfy
/// `||H - H*||_F <= HERMITIAN_INPUT_TOL * (1 + ||H||_F)`.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius mass is below this fraction
/// of `||H||_F`.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues down to `-PSD_CLAMP_TOL * ||P||` are clamped to zero before
/// taking PSD powers; anything more negative is an error.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// Number of equispaced angles in the support-function grid.
pub const DEFAULT_GRID: usize = 1024;

/// Final bracket width of the golden-section refinement over angles.
pub const DEFAULT_REFINE_TOL: f64 = 1e-12;

/// Final bracket width of the golden-section search over `alpha in [0, 1]`.
pub const DEFAULT_ALPHA_TOL: f64 = 1e-10;

/// Relative comparison tolerance: an inequality holds when
/// `lhs <= rhs + TOL_CMP * max(1, |rhs|)`.
pub const TOL_CMP: f64 = 1e-8;

/// Tolerance used when testing the hypotheses and conclusions of the
/// implication checks.
pub const TOL_IMPLICATION: f64 = 1e-6;

/// The intertwining precondition `|A| B = B* |A|` is accepted when the
/// Frobenius residual is below `INTERTWINE_TOL * (1 + ||A|| ||B||)`.
pub const INTERTWINE_TOL: f64 = 1e-10;

/// Gelfand iteration stops on a relative change below this value.
pub const GELFAND_REL_TOL: f64 = 1e-10;

pub const GELFAND_MAX_SQUARINGS: usize = 60;
