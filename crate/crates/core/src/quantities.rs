//! Scalar quantities: numerical radius, Crawford number, spectral radius,
//! and the optimized alpha bound.
//!
//! The numerical radius and Crawford number are computed through the support
//! function of the numerical range,
//!
//! ```text
//! h(theta) = lambda_max(H(theta)),   H(theta) = (e^{i theta} A + e^{-i theta} A*) / 2
//!                                             = cos(theta) Re(A) - sin(theta) Im(A),
//! ```
//!
//! so that `w(A) = max h` and, because `W(A)` is convex and compact,
//! `c(A) = max(0, -min h)`. The search evaluates `h` on an equispaced grid of
//! angles and polishes the best grid cells with golden-section search. Since
//! `H(theta + pi) = -H(theta)`, one eigenvalue solve at `theta` yields both
//! `h(theta)` and `h(theta + pi) = -lambda_min(H(theta))`, halving the grid
//! cost for even grid sizes.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::MatrixError;
use crate::matcore::{herm_eig, herm_eigvals, sqrt_psd, CMatrix};
use crate::matcore::eig::eigvals_unchecked;
use crate::search::{golden_max, golden_min};
use crate::tolerances::{
    DEFAULT_ALPHA_TOL, DEFAULT_GRID, DEFAULT_REFINE_TOL, GELFAND_MAX_SQUARINGS, GELFAND_REL_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    NumericalRadius,
    Crawford,
    SpectralRadius,
    OpNorm,
    AlphaBound,
}

/// A computed scalar with the certificate that produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantityResult {
    pub value: f64,
    pub kind: QuantityKind,
    /// Optimal angle in `[0, 2 pi)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_star: Option<f64>,
    /// Unit vector realizing the value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Complex64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_star: Option<f64>,
    /// Number of function evaluations (eigenvalue solves).
    pub iterations: usize,
}

/// Knobs for the angle search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Equispaced angles in `[0, 2 pi)`.
    pub grid: usize,
    /// Golden-section stopping width in radians.
    pub refine_tol: f64,
    /// Golden-section stopping width for the alpha search.
    pub alpha_tol: f64,
    /// How many of the best grid-local optima are refined.
    pub candidates: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            refine_tol: DEFAULT_REFINE_TOL,
            alpha_tol: DEFAULT_ALPHA_TOL,
            candidates: 3,
        }
    }
}

/// `H(theta) = cos(theta) re - sin(theta) im` for Hermitian `re`, `im`.
fn rotated(re: &CMatrix, im: &CMatrix, theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    let mut out = re.scale_real(c);
    for (o, z) in out.as_mut_slice().iter_mut().zip(im.as_slice()) {
        *o -= z * s;
    }
    out
}

/// Largest eigenvalue and a unit eigenvector of
/// `H(theta) = (e^{i theta} A + e^{-i theta} A*) / 2`.
pub fn support_lambda_max(a: &CMatrix, theta: f64) -> (f64, Vec<Complex64>) {
    let e = Complex64::from_polar(1.0, theta);
    let h = (&a.scale(e) + &a.adjoint().scale(e.conj())).scale_real(0.5);
    let eig = herm_eig(&h).expect("H(theta) is Hermitian");
    (eig.max(), eig.top_vector())
}

/// Support function sampler shared by the radius and Crawford searches.
struct Support {
    re: CMatrix,
    im: CMatrix,
}

impl Support {
    fn new(a: &CMatrix) -> Self {
        let (re, im) = a.cartesian_parts();
        Self { re, im }
    }

    fn h(&self, theta: f64) -> f64 {
        let vals = eigvals_unchecked(rotated(&self.re, &self.im, theta).symmetrized());
        *vals.last().expect("non-empty")
    }

    /// `h` on `grid` equispaced angles.
    fn sample(&self, grid: usize) -> (Vec<f64>, usize) {
        let step = TAU / grid as f64;
        let mut h = vec![0.0; grid];
        if grid.is_multiple_of(2) {
            let half = grid / 2;
            for k in 0..half {
                let vals = eigvals_unchecked(rotated(&self.re, &self.im, k as f64 * step).symmetrized());
                h[k] = *vals.last().expect("non-empty");
                h[k + half] = -vals[0];
            }
            (h, half)
        } else {
            for (k, hk) in h.iter_mut().enumerate() {
                *hk = self.h(k as f64 * step);
            }
            (h, grid)
        }
    }
}

/// Indices of grid-local optima (cyclic), best first, ties by smallest index.
fn local_optima(h: &[f64], maximize: bool, keep: usize) -> Vec<usize> {
    let g = h.len();
    let better = |x: f64, y: f64| if maximize { x >= y } else { x <= y };
    let mut idx: Vec<usize> = (0..g)
        .filter(|&k| {
            let prev = h[(k + g - 1) % g];
            let next = h[(k + 1) % g];
            better(h[k], prev) && better(h[k], next)
        })
        .collect();
    idx.sort_by(|&i, &j| {
        let ord = h[i].total_cmp(&h[j]);
        let ord = if maximize { ord.reverse() } else { ord };
        ord.then(i.cmp(&j))
    });
    idx.truncate(keep.max(1));
    idx
}

fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Global optimum of the support function: `(theta, h(theta), evals)`.
fn optimize_support(sup: &Support, opts: &SearchOptions, maximize: bool) -> (f64, f64, usize) {
    let grid = opts.grid.max(3);
    let step = TAU / grid as f64;
    let (h, mut evals) = sup.sample(grid);

    // Best grid point, ties to the smallest angle.
    let mut best_k = 0;
    for k in 1..grid {
        let improves = if maximize { h[k] > h[best_k] } else { h[k] < h[best_k] };
        if improves {
            best_k = k;
        }
    }
    let mut best = (best_k as f64 * step, h[best_k]);

    for k in local_optima(&h, maximize, opts.candidates) {
        let center = k as f64 * step;
        let p = if maximize {
            golden_max(|t| sup.h(t), center - step, center + step, opts.refine_tol)
        } else {
            golden_min(|t| sup.h(t), center - step, center + step, opts.refine_tol)
        };
        evals += p.evals;
        let theta = wrap_angle(p.x);
        let improves = if maximize { p.fx > best.1 } else { p.fx < best.1 };
        let ties_left = p.fx == best.1 && theta < best.0;
        if improves || ties_left {
            best = (theta, p.fx);
        }
    }
    (best.0, best.1, evals)
}

/// Numerical radius `w(A) = max_{|x| = 1} |<Ax, x>|`.
pub fn numerical_radius(a: &CMatrix) -> QuantityResult {
    numerical_radius_with(a, &SearchOptions::default())
}

pub fn numerical_radius_with(a: &CMatrix, opts: &SearchOptions) -> QuantityResult {
    let sup = Support::new(a);
    let (theta, value, evals) = optimize_support(&sup, opts, true);
    let (_, x) = support_lambda_max(a, theta);
    QuantityResult {
        value: value.max(0.0),
        kind: QuantityKind::NumericalRadius,
        theta_star: Some(theta),
        witness: Some(x),
        alpha_star: None,
        iterations: evals + 1,
    }
}

/// Crawford number `c(A) = min_{|x| = 1} |<Ax, x>|`, the distance from the
/// origin to the numerical range.
pub fn crawford(a: &CMatrix) -> QuantityResult {
    crawford_with(a, &SearchOptions::default())
}

pub fn crawford_with(a: &CMatrix, opts: &SearchOptions) -> QuantityResult {
    let sup = Support::new(a);
    let (theta, min_h, evals) = optimize_support(&sup, opts, false);
    let value = (-min_h).max(0.0);
    let witness = if value > 0.0 {
        Some(support_lambda_max(a, theta).1)
    } else {
        None
    };
    QuantityResult {
        value,
        kind: QuantityKind::Crawford,
        theta_star: Some(theta),
        witness,
        alpha_star: None,
        iterations: evals,
    }
}

/// Crawford number of a Hermitian matrix: `0` when the spectrum straddles the
/// origin, otherwise the smaller eigenvalue modulus at the ends.
pub fn crawford_hermitian(h: &CMatrix) -> Result<f64, MatrixError> {
    let vals = herm_eigvals(h)?;
    Ok(crawford_from_spectrum(vals[0], vals[vals.len() - 1]))
}

pub(crate) fn crawford_from_spectrum(lo: f64, hi: f64) -> f64 {
    if lo <= 0.0 && hi >= 0.0 {
        0.0
    } else {
        lo.abs().min(hi.abs())
    }
}

/// Both routes for `r(PQ)` with `P, Q` PSD.
#[derive(Clone, Copy, Debug)]
pub struct PsdProductRadius {
    /// `lambda_max(P^{1/2} Q P^{1/2})`.
    pub value: f64,
    /// `||P^{1/2} Q^{1/2}||^2`.
    pub norm_route: f64,
}

impl PsdProductRadius {
    pub fn discrepancy(&self) -> f64 {
        (self.value - self.norm_route).abs()
    }
}

/// `r(PQ)` for PSD `P`, `Q` via the Hermitian similarity `P^{1/2} Q P^{1/2}`.
pub fn spectral_radius_psd_product(p: &CMatrix, q: &CMatrix) -> Result<f64, MatrixError> {
    Ok(spectral_radius_psd_product_routes(p, q)?.value)
}

pub fn spectral_radius_psd_product_routes(
    p: &CMatrix,
    q: &CMatrix,
) -> Result<PsdProductRadius, MatrixError> {
    if p.n() != q.n() {
        return Err(MatrixError::DimensionMismatch {
            left: p.n(),
            right: q.n(),
        });
    }
    let p_half = sqrt_psd(p)?;
    let q_half = sqrt_psd(q)?;
    let sandwich = (&(&p_half * q) * &p_half).symmetrized();
    let value = herm_eigvals(&sandwich)?.last().copied().unwrap_or(0.0).max(0.0);
    let norm = crate::matcore::op_norm(&(&p_half * &q_half));
    Ok(PsdProductRadius {
        value,
        norm_route: norm * norm,
    })
}

/// Spectral radius of a general square matrix by the Gelfand formula with
/// repeated squaring, `b_m = ||A^{2^m}||^{1/2^m}`.
///
/// Each power is renormalized to unit norm and the scale is tracked in log
/// space. The sequence is non-increasing; iteration stops once two successive
/// relative changes fall below `1e-10` and the exponent `2^m` has reached the
/// dimension, or after 60 squarings.
pub fn spectral_radius_general(a: &CMatrix) -> f64 {
    gelfand(a).0
}

/// Returns `(radius, squarings)`.
pub(crate) fn gelfand(a: &CMatrix) -> (f64, usize) {
    let n = a.n();
    let norm0 = crate::matcore::op_norm(a);
    if norm0 == 0.0 {
        return (0.0, 0);
    }
    // log ||A^k|| = log_scale + log ||M||, with M = A^k / exp(log_scale)
    let mut m = a.scale_real(1.0 / norm0);
    let mut log_scale = norm0.ln();
    let mut k: f64 = 1.0;
    let mut b = norm0;
    let mut quiet = 0;
    for step in 1..=GELFAND_MAX_SQUARINGS {
        m = &m * &m;
        log_scale *= 2.0;
        k *= 2.0;
        let nm = crate::matcore::op_norm(&m);
        if nm == 0.0 {
            return (0.0, step);
        }
        log_scale += nm.ln();
        m = m.scale_real(1.0 / nm);
        let next = (log_scale / k).exp();
        debug_assert!(
            next <= b * (1.0 + 1e-9),
            "Gelfand sequence increased: {b} -> {next}"
        );
        let next = next.min(b);
        let rel = (b - next) / b;
        b = next;
        if b == 0.0 {
            return (0.0, step);
        }
        if rel <= GELFAND_REL_TOL {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 2 && k >= n as f64 {
            return (b, step);
        }
    }
    (b, GELFAND_MAX_SQUARINGS)
}

/// Spectral radius choosing the exact Hermitian route when it applies.
pub fn spectral_radius(a: &CMatrix) -> f64 {
    if a.hermitian_residual() == 0.0 {
        let vals = herm_eigvals(a).expect("Hermitian");
        vals[0].abs().max(vals[vals.len() - 1].abs())
    } else {
        spectral_radius_general(a)
    }
}

/// `min_{0 <= alpha <= 1} || alpha |A|^2 + (1 - alpha) |A*|^2 ||`.
///
/// The objective is a pointwise maximum of affine functions of `alpha`, hence
/// convex, so golden-section search is global. Both endpoints are also
/// compared; ties go to the smaller `alpha`.
pub fn alpha_min_bound(a: &CMatrix) -> QuantityResult {
    alpha_min_bound_with(a, &SearchOptions::default())
}

pub fn alpha_min_bound_with(a: &CMatrix, opts: &SearchOptions) -> QuantityResult {
    let adj = a.adjoint();
    let p = (&adj * a).symmetrized();
    let q = (a * &adj).symmetrized();
    let f = |alpha: f64| alpha_objective(&p, &q, alpha);

    let p_int = golden_min(f, 0.0, 1.0, opts.alpha_tol);
    let f0 = f(0.0);
    let f1 = f(1.0);
    // Differences at rounding level count as ties, which keep the smaller alpha.
    let better = |fx: f64, best: f64| fx < best - 8.0 * f64::EPSILON * best.abs();
    let mut best = (0.0, f0);
    if better(p_int.fx, best.1) {
        best = (p_int.x, p_int.fx);
    }
    if better(f1, best.1) {
        best = (1.0, f1);
    }
    QuantityResult {
        value: best.1,
        kind: QuantityKind::AlphaBound,
        theta_star: None,
        witness: None,
        alpha_star: Some(best.0),
        iterations: p_int.evals + 2,
    }
}

/// `|| alpha P + (1 - alpha) Q ||` for PSD `P`, `Q`.
pub(crate) fn alpha_objective(p: &CMatrix, q: &CMatrix, alpha: f64) -> f64 {
    let mut m = p.scale_real(alpha);
    for (o, z) in m.as_mut_slice().iter_mut().zip(q.as_slice()) {
        *o += z * (1.0 - alpha);
    }
    let vals = eigvals_unchecked(m.symmetrized());
    vals[vals.len() - 1].abs().max(vals[0].abs())
}

/// Half-open angle normalization used for reporting.
pub fn normalize_angle(theta: f64) -> f64 {
    wrap_angle(theta)
}
