//! Per-input cache of the quantities the catalog needs.
//!
//! A sweep evaluates dozens of entries on the same inputs and many of them
//! share `w(A)`, `||A||`, `|A|`, or a product such as `AB + BA`. Everything
//! here is computed lazily, once per [`Evaluator`].

use std::cell::{OnceCell, RefCell};
use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use super::{inputs_digest, within, BoundReport, CatalogEntry, EvalConfig, Variant};
use crate::error::{MatrixError, Result};
use crate::matcore::eig::eigvals_unchecked;
use crate::matcore::{abs_parts, op_norm, CMatrix};
use crate::quantities::{
    crawford_from_spectrum, numerical_radius_with, spectral_radius,
    spectral_radius_psd_product_routes, PsdProductRadius, QuantityResult,
};
use crate::tolerances::{HERMITIAN_INPUT_TOL, PSD_CLAMP_TOL};

/// Hermitian and skew-Hermitian halves with their norms and Crawford numbers.
pub(crate) struct Cartesian {
    pub norm_re: f64,
    pub norm_im: f64,
    pub c_re: f64,
    pub c_im: f64,
}

#[derive(Default)]
struct Facts {
    norm: OnceCell<f64>,
    w: OnceCell<QuantityResult>,
    sq_norm: OnceCell<f64>,
    abs: OnceCell<(CMatrix, CMatrix)>,
    r_abs: OnceCell<PsdProductRadius>,
    cart: OnceCell<Cartesian>,
    spectral: OnceCell<f64>,
    gram_sum_norm: OnceCell<f64>,
    psd: OnceCell<std::result::Result<(), String>>,
}

/// A link `lhs <= rhs` of an evaluated inequality.
pub(crate) struct Link {
    pub lhs: f64,
    pub rhs: f64,
}

pub(crate) fn link(lhs: f64, rhs: f64) -> Link {
    Link { lhs, rhs }
}

pub(crate) enum Outcome {
    Links(Vec<Link>, BTreeMap<String, Value>),
    NotApplicable(String, BTreeMap<String, Value>),
}

pub(crate) struct Evaluator<'a> {
    inputs: &'a [CMatrix],
    pub cfg: &'a EvalConfig,
    digest: String,
    facts: Vec<Facts>,
    derived_w: RefCell<HashMap<Vec<u8>, f64>>,
    derived_norm: RefCell<HashMap<Vec<u8>, f64>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(inputs: &'a [CMatrix], cfg: &'a EvalConfig) -> Result<Self> {
        if let Some(first) = inputs.first() {
            for m in inputs {
                if m.n() != first.n() {
                    return Err(MatrixError::DimensionMismatch {
                        left: first.n(),
                        right: m.n(),
                    }
                    .into());
                }
            }
        }
        Ok(Self {
            inputs,
            cfg,
            digest: inputs_digest(inputs),
            facts: inputs.iter().map(|_| Facts::default()).collect(),
            derived_w: RefCell::new(HashMap::new()),
            derived_norm: RefCell::new(HashMap::new()),
        })
    }

    pub fn input(&self, i: usize) -> &CMatrix {
        &self.inputs[i]
    }

    pub fn evaluate(&self, entry: &CatalogEntry, variant: Variant) -> BoundReport {
        let outcome = (entry.eval)(self, variant);
        let mut report = BoundReport {
            id: entry.id.to_string(),
            sign: variant.sign_label().to_string(),
            lhs: None,
            rhs: None,
            slack: None,
            holds: true,
            applicable: false,
            details: BTreeMap::new(),
            inputs_digest: self.digest.clone(),
        };
        if let Variant::Power(s) = variant {
            report.details.insert("s".into(), json!(s));
        }
        match outcome {
            Outcome::NotApplicable(reason, details) => {
                report.details.extend(details);
                report.details.insert("reason".into(), json!(reason));
            }
            Outcome::Links(links, details) => {
                report.details.extend(details);
                let tol = self.cfg.tol_cmp;
                let norm_slack = |l: &Link| (l.rhs - l.lhs) / l.rhs.abs().max(1.0);
                let worst = links
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| norm_slack(a).total_cmp(&norm_slack(b)))
                    .map(|(i, _)| i)
                    .expect("at least one link");
                let w = &links[worst];
                report.applicable = true;
                report.lhs = Some(w.lhs);
                report.rhs = Some(w.rhs);
                report.slack = Some(w.rhs - w.lhs);
                report.holds = links.iter().all(|l| within(l.lhs, l.rhs, tol));
                if links.len() > 1 {
                    let rows: Vec<Value> = links
                        .iter()
                        .map(|l| {
                            json!({
                                "lhs": l.lhs,
                                "rhs": l.rhs,
                                "slack": l.rhs - l.lhs,
                                "holds": within(l.lhs, l.rhs, tol),
                            })
                        })
                        .collect();
                    report.details.insert("links".into(), Value::Array(rows));
                    report.details.insert("worst_link".into(), json!(worst));
                }
            }
        }
        report
    }

    pub fn norm(&self, i: usize) -> f64 {
        *self.facts[i].norm.get_or_init(|| op_norm(&self.inputs[i]))
    }

    pub fn w_result(&self, i: usize) -> &QuantityResult {
        self.facts[i]
            .w
            .get_or_init(|| numerical_radius_with(&self.inputs[i], &self.cfg.search))
    }

    pub fn w(&self, i: usize) -> f64 {
        self.w_result(i).value
    }

    /// `||A^2||`.
    pub fn sq_norm(&self, i: usize) -> f64 {
        *self.facts[i].sq_norm.get_or_init(|| {
            let a = &self.inputs[i];
            op_norm(&(a * a))
        })
    }

    /// `(|A|, |A*|)`.
    pub fn abs(&self, i: usize) -> &(CMatrix, CMatrix) {
        self.facts[i].abs.get_or_init(|| abs_parts(&self.inputs[i]))
    }

    /// `r(|A| |A*|)` with its norm-route cross-check.
    pub fn r_abs_routes(&self, i: usize) -> PsdProductRadius {
        *self.facts[i].r_abs.get_or_init(|| {
            let (p, q) = self.abs(i);
            spectral_radius_psd_product_routes(p, q).expect("positive parts are PSD")
        })
    }

    pub fn r_abs(&self, i: usize) -> f64 {
        self.r_abs_routes(i).value
    }

    pub fn spectral(&self, i: usize) -> f64 {
        *self.facts[i]
            .spectral
            .get_or_init(|| spectral_radius(&self.inputs[i]))
    }

    /// `||A*A + AA*||`.
    pub fn gram_sum_norm(&self, i: usize) -> f64 {
        *self.facts[i].gram_sum_norm.get_or_init(|| {
            let a = &self.inputs[i];
            let adj = a.adjoint();
            hermitian_norm(&(&(&adj * a) + &(a * &adj)))
        })
    }

    pub fn cartesian(&self, i: usize) -> &Cartesian {
        self.facts[i].cart.get_or_init(|| {
            let (re, im) = self.inputs[i].cartesian_parts();
            let (lo_r, hi_r) = extremes(&re);
            let (lo_i, hi_i) = extremes(&im);
            Cartesian {
                norm_re: lo_r.abs().max(hi_r.abs()),
                norm_im: lo_i.abs().max(hi_i.abs()),
                c_re: crawford_from_spectrum(lo_r, hi_r),
                c_im: crawford_from_spectrum(lo_i, hi_i),
            }
        })
    }

    /// `w^2(A) - (c^2(Re A) + c^2(Im A)) / 2`, clamped at zero.
    pub fn refined_w2(&self, i: usize) -> f64 {
        let c = self.cartesian(i);
        let w = self.w(i);
        (w * w - 0.5 * (c.c_re * c.c_re + c.c_im * c.c_im)).max(0.0)
    }

    /// PSD test with the clamping tolerance; `Err` carries the reason.
    pub fn psd(&self, i: usize) -> std::result::Result<(), String> {
        self.facts[i]
            .psd
            .get_or_init(|| {
                let a = &self.inputs[i];
                let scale = a.max_abs().max(1.0);
                let res = a.hermitian_residual();
                if res > HERMITIAN_INPUT_TOL * scale {
                    return Err(format!("input {i} is not Hermitian (residual {res:e})"));
                }
                let (lo, hi) = extremes(&a.symmetrized());
                let threshold = -PSD_CLAMP_TOL * lo.abs().max(hi.abs());
                if lo < threshold {
                    return Err(format!("input {i} is not PSD (eigenvalue {lo:e})"));
                }
                Ok(())
            })
            .clone()
    }

    /// Numerical radius of a matrix built from the inputs, memoized by value.
    pub fn w_of(&self, m: &CMatrix) -> f64 {
        let key = m.canonical_bytes();
        if let Some(v) = self.derived_w.borrow().get(&key) {
            return *v;
        }
        let v = numerical_radius_with(m, &self.cfg.search).value;
        self.derived_w.borrow_mut().insert(key, v);
        v
    }

    /// Operator norm of a matrix built from the inputs, memoized by value.
    pub fn norm_of(&self, m: &CMatrix) -> f64 {
        let key = m.canonical_bytes();
        if let Some(v) = self.derived_norm.borrow().get(&key) {
            return *v;
        }
        let v = op_norm(m);
        self.derived_norm.borrow_mut().insert(key, v);
        v
    }
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub(crate) fn extremes(h: &CMatrix) -> (f64, f64) {
    let vals = eigvals_unchecked(h.symmetrized());
    (vals[0], vals[vals.len() - 1])
}

/// Operator norm of a Hermitian matrix from its extreme eigenvalues.
pub(crate) fn hermitian_norm(h: &CMatrix) -> f64 {
    let (lo, hi) = extremes(h);
    lo.abs().max(hi.abs())
}
