//! Golden-section search on a bracketing interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Outcome of a one-dimensional search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchPoint {
    pub x: f64,
    pub fx: f64,
    /// Function evaluations spent.
    pub evals: usize,
}

/// Minimizes a unimodal `f` on `[lo, hi]` until the bracket is at most `tol`
/// wide. Ties keep the left sub-interval, so flat regions resolve toward
/// `lo`.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> SearchPoint {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evals += 1;
        // Guard against a bracket that stops shrinking in floating point.
        if evals > 400 {
            break;
        }
    }
    if fc <= fd {
        SearchPoint { x: c, fx: fc, evals }
    } else {
        SearchPoint { x: d, fx: fd, evals }
    }
}

/// Maximizes a unimodal `f` on `[lo, hi]`; ties resolve toward `lo`.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> SearchPoint {
    let p = golden_min(|x| -f(x), lo, hi, tol);
    SearchPoint { fx: -p.fx, ..p }
}
