//! Numerical checks of the "if ... then ..." consequences.
//!
//! Each check evaluates the hypothesis and the conclusion independently and
//! reports both; nothing is asserted about converses, which fail in general.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::facts::Evaluator;
use super::catalog::anticommutator;
use super::{inputs_digest, EvalConfig, Sign};
use crate::error::{Error, Result};
use crate::matcore::CMatrix;
use crate::tolerances::TOL_IMPLICATION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImplicationId {
    /// `r(|A||A*|) = 0  =>  w(A) = ||A||/2`.
    #[serde(rename = "C2.2")]
    RankZeroHalfNorm,
    /// `w(A) = (||A|| + sqrt||A^2||)/2  =>  r(|A||A*|) = ||A^2||`.
    #[serde(rename = "C2.4")]
    SquareNormEquality,
    /// `w(AB +- BA) = 2 sqrt2 ||B|| w(A), B != 0  =>  c(Re A) = c(Im A) = 0`.
    #[serde(rename = "C3.4")]
    CommutatorEquality,
    /// `r(A) = ||A||` or `r(|A||A*|) = 0  =>  equality in the main bound`.
    #[serde(rename = "P2.5")]
    MainEquality,
}

impl ImplicationId {
    pub const ALL: [ImplicationId; 4] = [
        ImplicationId::RankZeroHalfNorm,
        ImplicationId::SquareNormEquality,
        ImplicationId::CommutatorEquality,
        ImplicationId::MainEquality,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ImplicationId::RankZeroHalfNorm => "C2.2",
            ImplicationId::SquareNormEquality => "C2.4",
            ImplicationId::CommutatorEquality => "C3.4",
            ImplicationId::MainEquality => "P2.5",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            ImplicationId::CommutatorEquality => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for ImplicationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ImplicationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ImplicationId::ALL
            .into_iter()
            .find(|i| i.code().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownImplication(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub id: ImplicationId,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    #[serde(default)]
    pub details: BTreeMap<String, Value>,
    pub inputs_digest: String,
}

impl ImplicationReport {
    /// The implication is not contradicted: hypothesis false or conclusion true.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_holds || self.conclusion_holds
    }
}

fn near(x: f64, y: f64, tol: f64, scale: f64) -> bool {
    (x - y).abs() <= tol * scale.max(1.0)
}

/// Evaluates hypothesis and conclusion with tolerance `1e-6`.
pub fn check_implication(
    id: ImplicationId,
    inputs: &[CMatrix],
    cfg: &EvalConfig,
) -> Result<ImplicationReport> {
    if inputs.len() != id.arity() {
        return Err(Error::Arity {
            id: id.code().to_string(),
            expected: id.arity(),
            got: inputs.len(),
        });
    }
    let ev = Evaluator::new(inputs, cfg)?;
    let tol = TOL_IMPLICATION;
    let mut d = BTreeMap::new();
    let (hyp, concl) = match id {
        ImplicationId::RankZeroHalfNorm => {
            let (r, n, w) = (ev.r_abs(0), ev.norm(0), ev.w(0));
            d.insert("r_abs".into(), json!(r));
            d.insert("w".into(), json!(w));
            d.insert("norm".into(), json!(n));
            (r <= tol * (n * n).max(1.0), near(w, 0.5 * n, tol, n))
        }
        ImplicationId::SquareNormEquality => {
            let (r, n, w, sq) = (ev.r_abs(0), ev.norm(0), ev.w(0), ev.sq_norm(0));
            let bound = 0.5 * (n + sq.sqrt());
            d.insert("w".into(), json!(w));
            d.insert("kit03_rhs".into(), json!(bound));
            d.insert("r_abs".into(), json!(r));
            d.insert("sq_norm".into(), json!(sq));
            (near(w, bound, tol, n), near(r, sq, tol, sq))
        }
        ImplicationId::CommutatorEquality => {
            let nb = ev.norm(1);
            let target = 2.0 * SQRT_2 * nb * ev.w(0);
            let mut hyp = false;
            if nb > 0.0 {
                for sign in [Sign::Plus, Sign::Minus] {
                    let lhs = ev.w_of(&anticommutator(ev.input(0), ev.input(1), sign));
                    d.insert(format!("w_comm{}", sign.symbol()), json!(lhs));
                    hyp |= near(lhs, target, tol, target);
                }
            } else {
                d.insert("reason".into(), json!("B = 0"));
            }
            let c = ev.cartesian(0);
            d.insert("target".into(), json!(target));
            d.insert("c_re".into(), json!(c.c_re));
            d.insert("c_im".into(), json!(c.c_im));
            (hyp, c.c_re <= tol && c.c_im <= tol)
        }
        ImplicationId::MainEquality => {
            let (r_abs, n, w, rho) = (ev.r_abs(0), ev.norm(0), ev.w(0), ev.spectral(0));
            let type_i = near(rho, n, tol, n);
            let type_ii = r_abs <= tol * (n * n).max(1.0);
            let bound = 0.5 * (n + r_abs.sqrt());
            d.insert("spectral_radius".into(), json!(rho));
            d.insert("r_abs".into(), json!(r_abs));
            d.insert("w".into(), json!(w));
            d.insert("main_rhs".into(), json!(bound));
            d.insert("type_i".into(), json!(type_i));
            d.insert("type_ii".into(), json!(type_ii));
            (type_i || type_ii, near(w, bound, tol, n))
        }
    };
    Ok(ImplicationReport {
        id,
        hypothesis_holds: hyp,
        conclusion_holds: concl,
        details: d,
        inputs_digest: inputs_digest(inputs),
    })
}
