//! Operator norm and PSD functional calculus.

use super::{herm_eig, svd, CMatrix, HermEig, SvdResult};
use crate::error::MatrixError;
use crate::tolerances::PSD_CLAMP_TOL;

/// Operator (spectral) norm `sigma_1(A) = sqrt(lambda_max(A* A))`.
pub fn op_norm(a: &CMatrix) -> f64 {
    let gram = (&a.adjoint() * a).symmetrized();
    let eig = herm_eig(&gram).expect("A*A is Hermitian by construction");
    eig.max().max(0.0).sqrt()
}

/// Eigendecomposition of a PSD matrix with rounding-level negative
/// eigenvalues clamped to zero.
fn psd_eig(p: &CMatrix) -> Result<HermEig, MatrixError> {
    let mut eig = herm_eig(p)?;
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, l| m.max(l.abs()));
    let threshold = -PSD_CLAMP_TOL * scale;
    let min = eig.min();
    if min < threshold {
        return Err(MatrixError::NotPsd {
            eigenvalue: min,
            threshold,
        });
    }
    for l in &mut eig.eigenvalues {
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(eig)
}

/// `P^s` for Hermitian PSD `P` and `s` in `[0, 1]`, with `0^0 = 1`.
pub fn power_psd(p: &CMatrix, s: f64) -> Result<CMatrix, MatrixError> {
    if !(0.0..=1.0).contains(&s) {
        return Err(MatrixError::BadExponent(s));
    }
    let eig = psd_eig(p)?;
    Ok(eig.map_spectrum(|l| l.powf(s)))
}

/// Principal square root of a Hermitian PSD matrix.
pub fn sqrt_psd(p: &CMatrix) -> Result<CMatrix, MatrixError> {
    let eig = psd_eig(p)?;
    Ok(eig.map_spectrum(f64::sqrt))
}

/// Positive parts `(|A|, |A*|) = ((A*A)^{1/2}, (AA*)^{1/2})`.
///
/// Built from the SVD `A = U S V*` as `V S V*` and `U S U*` rather than by
/// square-rooting the Gram matrices: a rounding-level eigenvalue `eps ||A||^2`
/// of `A*A` would become `sqrt(eps) ||A||` after the square root, while the
/// Jacobi SVD keeps small singular values at `eps ||A||`.
pub fn abs_parts(a: &CMatrix) -> (CMatrix, CMatrix) {
    let SvdResult {
        singular_values: s,
        u,
        v,
    } = svd(a);
    let build = |q: &CMatrix| {
        let n = q.n();
        CMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| q[(i, k)] * q[(j, k)].conj() * s[k]).sum()
        })
        .symmetrized()
    };
    (build(&v), build(&u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::svd;
    use crate::test_util::{ginibre, rng};

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn op_norm_examples() {
        let a = CMatrix::from_real_rows(&[[1.0, 4.0], [1.0, 1.0]]);
        let expected = ((19.0 + 325f64.sqrt()) / 2.0).sqrt();
        assert!((op_norm(&a) - expected).abs() < 1e-13);
        assert!((expected - 4.302_775_6).abs() < 1e-7);
        assert!((op_norm(&CMatrix::identity(5)) - 1.0).abs() < 1e-15);
        let r = CMatrix::from_real_rows(&[[0.0, 3.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!((op_norm(&r) - 3.0).abs() < 1e-14);
        assert_eq!(op_norm(&CMatrix::zeros(3)), 0.0);
    }

    #[test]
    fn op_norm_matches_svd_route() {
        let mut rng = rng(3);
        for n in [1, 2, 4, 9, 20] {
            let a = ginibre(&mut rng, n);
            let s = svd(&a);
            assert!((op_norm(&a) - s.singular_values[0]).abs() <= 1e-11 * (1.0 + s.singular_values[0]));
        }
    }

    #[test]
    fn sqrt_examples() {
        let r = sqrt_psd(&CMatrix::diag_real(&[0.0, 9.0, 1.0])).unwrap();
        assert!(close(&r, &CMatrix::diag_real(&[0.0, 3.0, 1.0]), 1e-14));
        let r = sqrt_psd(&CMatrix::from_real_rows(&[[2.0, 5.0], [5.0, 17.0]])).unwrap();
        assert!(close(&r, &CMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 4.0]]), 1e-12));
        let r = power_psd(&CMatrix::diag_real(&[4.0, 9.0]), 0.5).unwrap();
        assert!(close(&r, &CMatrix::diag_real(&[2.0, 3.0]), 1e-14));
    }

    #[test]
    fn power_edges() {
        let p = CMatrix::diag_real(&[0.0, 4.0]);
        assert!(close(&power_psd(&p, 0.0).unwrap(), &CMatrix::identity(2), 0.0));
        assert!(close(&power_psd(&p, 1.0).unwrap(), &p, 1e-15));
        assert!(matches!(power_psd(&p, 1.5), Err(MatrixError::BadExponent(_))));
    }

    #[test]
    fn rejects_materially_negative() {
        let err = sqrt_psd(&CMatrix::diag_real(&[1.0, -0.5])).unwrap_err();
        assert!(matches!(err, MatrixError::NotPsd { .. }));
        assert!(err.to_string().contains("not PSD"));
        // Rounding-level negatives are clamped.
        let r = sqrt_psd(&CMatrix::diag_real(&[1.0, -1e-14])).unwrap();
        assert_eq!(r[(1, 1)].re, 0.0);
        assert!(sqrt_psd(&CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]])).is_err());
    }

    #[test]
    fn abs_parts_examples() {
        let a = CMatrix::from_real_rows(&[[1.0, 4.0], [1.0, 1.0]]);
        let (p, q) = abs_parts(&a);
        assert!(close(&p, &CMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 4.0]]), 1e-12));
        assert!(close(&q, &CMatrix::from_real_rows(&[[4.0, 1.0], [1.0, 1.0]]), 1e-12));

        let a = CMatrix::from_real_rows(&[[0.0, 2.0], [0.0, 0.0]]);
        let (p, q) = abs_parts(&a);
        assert!(close(&p, &CMatrix::diag_real(&[0.0, 2.0]), 1e-14));
        assert!(close(&q, &CMatrix::diag_real(&[2.0, 0.0]), 1e-14));

        let mut rng = rng(5);
        let u = crate::ensembles::haar_unitary(&mut rng, 4);
        let (p, q) = abs_parts(&u);
        assert!(close(&p, &CMatrix::identity(4), 1e-12));
        assert!(close(&q, &CMatrix::identity(4), 1e-12));
    }
}
