//! One-sided (Hestenes) Jacobi SVD.
//!
//! Used as the independent route for the operator norm and in tests; the
//! production path for `||A||` goes through `herm_eig(A* A)`.

use num_complex::Complex64;

use super::{dot, vec_norm, CMatrix, C0};

/// `A = U diag(singular_values) V*`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.u.n();
        CMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.u[(i, k)] * self.v[(j, k)].conj() * self.singular_values[k])
                .sum()
        })
    }
}

const MAX_SWEEPS: usize = 80;

pub fn svd(a: &CMatrix) -> SvdResult {
    let n = a.n();
    // Work on columns: W = A V, rotate pairs of columns until orthogonal.
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![C0; n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Diagonalize the 2x2 Gram block [[alpha, gamma], [conj(gamma), beta]].
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph = phase.conj();
                for cols in [&mut w, &mut v] {
                    for r in 0..n {
                        let xp = cols[p][r];
                        let xq = cols[q][r];
                        cols[p][r] = xp * c - xq * ph * s;
                        cols[q][r] = xp * s + xq * ph * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sig: Vec<(f64, usize)> = w.iter().enumerate().map(|(j, c)| (vec_norm(c), j)).collect();
    sig.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let smax = sig.first().map_or(0.0, |s| s.0);

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut singular_values = Vec::with_capacity(n);
    let mut v_cols = Vec::with_capacity(n);
    for &(s, j) in &sig {
        v_cols.push(v[j].clone());
        singular_values.push(s);
        if s > 1e-14 * smax && s > 0.0 {
            u_cols.push(w[j].iter().map(|z| z / s).collect());
        } else {
            u_cols.push(Vec::new());
        }
    }
    // Complete U for numerically zero singular values.
    for k in 0..n {
        if !u_cols[k].is_empty() {
            continue;
        }
        let mut chosen = None;
        for e in 0..n {
            let mut x = vec![C0; n];
            x[e] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for other in u_cols.iter().filter(|c| !c.is_empty()) {
                    let proj = dot(other, &x);
                    for (xi, oi) in x.iter_mut().zip(other) {
                        *xi -= oi * proj;
                    }
                }
            }
            let nx = vec_norm(&x);
            if nx > 0.5 {
                chosen = Some(x.into_iter().map(|z| z / nx).collect());
                break;
            }
        }
        u_cols[k] = chosen.expect("an orthogonal complement vector exists");
    }

    let u = CMatrix::from_fn(n, |i, k| u_cols[k][i]);
    let v = CMatrix::from_fn(n, |i, k| v_cols[k][i]);
    SvdResult {
        singular_values,
        u,
        v,
    }
}
