//! Hermitian eigensolvers.
//!
//! Two independent routes are provided:
//!
//! * [`herm_eig`]: cyclic complex Jacobi with accumulated eigenvectors. This is
//!   the reference decomposition used for everything that needs vectors or
//!   functional calculus.
//! * [`herm_eigvals`]: Householder reduction to real tridiagonal form followed
//!   by implicit QL. Eigenvalues only; roughly an order of magnitude cheaper,
//!   which matters for the angle sweeps in the numerical radius search.

use num_complex::Complex64;

use super::{CMatrix, C0, C1};
use crate::error::MatrixError;
use crate::tolerances::{HERMITIAN_INPUT_TOL, JACOBI_OFF_TOL, JACOBI_MAX_SWEEPS};

/// Eigendecomposition `H = V diag(eigenvalues) V*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub vectors: CMatrix,
    /// Number of Jacobi sweeps performed.
    pub sweeps: usize,
}

impl HermEig {
    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Eigenvector for the `k`-th smallest eigenvalue.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Eigenvector for the largest eigenvalue.
    pub fn top_vector(&self) -> Vec<Complex64> {
        self.vectors.column(self.eigenvalues.len() - 1)
    }

    /// `V diag(f(lambda)) V*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.vectors.n();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C0;
                for (k, &w) in fl.iter().enumerate() {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    /// `V diag(lambda) V*`.
    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|l| l)
    }
}

fn checked_symmetrized(h: &CMatrix) -> Result<CMatrix, MatrixError> {
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_INPUT_TOL * (1.0 + h.frobenius_norm()) {
        return Err(MatrixError::NotHermitian { residual });
    }
    Ok(h.symmetrized())
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized first; inputs whose Hermitian residual exceeds
/// `1e-10 (1 + ||H||_F)` are rejected. Sweeps continue until the off-diagonal
/// Frobenius mass drops to `1e-13 ||H||_F`.
pub fn herm_eig(h: &CMatrix) -> Result<HermEig, MatrixError> {
    let mut a = checked_symmetrized(h)?;
    let n = a.n();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = JACOBI_OFF_TOL * scale;

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS && off_diagonal_norm(&a) > target {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, k| v[(r, order[k])]);
    Ok(HermEig {
        eigenvalues,
        vectors,
        sweeps,
    })
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// With `a[p][q] = |b| e^{i phi}` the unitary is `U = diag(1, e^{-i phi}) J`
/// restricted to rows/columns `p, q`, where `J` is the real rotation that
/// diagonalizes `[[a_pp, |b|], [|b|, a_qq]]`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let abs_b = b.norm();
    if abs_b == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations that cannot change the diagonal in floating point.
    if abs_b < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C0;
        a[(q, p)] = C0;
        return;
    }
    let phase = b / abs_b;
    let zeta = (aqq - app) / (2.0 * abs_b);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();
    let n = a.n();

    // A <- A U
    for r in 0..n {
        let ap = a[(r, p)];
        let aq = a[(r, q)];
        a[(r, p)] = ap * c - aq * ph_conj * s;
        a[(r, q)] = ap * s + aq * ph_conj * c;
    }
    // A <- U* A
    for k in 0..n {
        let ap = a[(p, k)];
        let aq = a[(q, k)];
        a[(p, k)] = ap * c - aq * phase * s;
        a[(q, k)] = ap * s + aq * phase * c;
    }
    // V <- V U
    for r in 0..n {
        let vp = v[(r, p)];
        let vq = v[(r, q)];
        v[(r, p)] = vp * c - vq * ph_conj * s;
        v[(r, q)] = vp * s + vq * ph_conj * c;
    }
    a[(p, q)] = C0;
    a[(q, p)] = C0;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// Eigenvalues (ascending) of a Hermitian matrix via tridiagonalization and
/// implicit QL. Same input contract as [`herm_eig`].
pub fn herm_eigvals(h: &CMatrix) -> Result<Vec<f64>, MatrixError> {
    let a = checked_symmetrized(h)?;
    Ok(eigvals_unchecked(a))
}

/// Eigenvalues of an exactly Hermitian matrix (caller guarantees symmetry).
pub(crate) fn eigvals_unchecked(mut a: CMatrix) -> Vec<f64> {
    let (mut d, mut e) = tridiagonalize(&mut a);
    tql_eigenvalues(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

/// Householder reduction of a Hermitian matrix to a real symmetric
/// tridiagonal `(diagonal, off-diagonal)` pair. `a` is destroyed.
/// `off[i]` couples `diag[i]` and `diag[i+1]`; `off[n-1] = 0`.
fn tridiagonalize(a: &mut CMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.n();
    let mut v = vec![C0; n];
    let mut p = vec![C0; n];
    let mut off = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let xnorm = (lo..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = a[(lo, k)];
        let phase = if x0.norm() == 0.0 { C1 } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        for i in lo..n {
            v[i] = a[(i, k)];
        }
        v[lo] -= alpha;
        let vv: f64 = (lo..n).map(|i| v[i].norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        let beta = 2.0 / vv;
        // p = beta * A_sub v
        for i in lo..n {
            let mut acc = C0;
            for j in lo..n {
                acc += a[(i, j)] * v[j];
            }
            p[i] = acc * beta;
        }
        // K = beta/2 * v* p  (real for Hermitian A)
        let vp: Complex64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        let kk = 0.5 * beta * vp.re;
        for i in lo..n {
            p[i] -= v[i] * kk;
        }
        // A_sub <- A_sub - v q* - q v*
        for i in lo..n {
            for j in lo..n {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[(i, j)] -= upd;
            }
        }
        a[(lo, k)] = alpha;
        a[(k, lo)] = alpha.conj();
        for i in (lo + 1)..n {
            a[(i, k)] = C0;
            a[(k, i)] = C0;
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].re).collect();
    for i in 0..n.saturating_sub(1) {
        // A diagonal unitary similarity turns complex off-diagonals into
        // their moduli without changing the spectrum.
        off[i] = a[(i + 1, i)].norm();
    }
    (diag, off)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
fn tql_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                // Give up on this block; the residual coupling is tiny by now.
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
