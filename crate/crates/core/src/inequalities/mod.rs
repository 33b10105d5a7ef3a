//! Machine-checkable catalog of numerical-radius inequalities.
//!
//! Each [`CatalogEntry`] is evaluated on concrete matrices into a
//! [`BoundReport`]. Chains (`a <= b <= c`) produce a single report whose
//! `lhs`/`rhs` are those of the tightest link (smallest normalized slack) and
//! whose `details["links"]` lists every link. Entries with a `+/-` form are
//! evaluated once per sign; the parametrized product bound is evaluated once
//! per exponent `s` of the power family `f(t) = t^s`, `g(t) = t^(1-s)`.

mod catalog;
mod facts;
mod implications;

pub use catalog::{catalog_list, find_entry, CatalogEntry};
pub use implications::{check_implication, ImplicationId, ImplicationReport};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, MatrixError, Result};
use crate::matcore::{op_norm, CMatrix};
use crate::quantities::SearchOptions;
use crate::tolerances::{INTERTWINE_TOL, TOL_CMP};

pub(crate) use facts::Evaluator;

/// Evaluation settings shared by every entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Relative comparison tolerance.
    pub tol_cmp: f64,
    pub search: SearchOptions,
    /// Exponents `s` for the power-family product bound.
    pub powers: Vec<f64>,
    /// Relative residual accepted for `|A| B = B* |A|`.
    pub intertwine_tol: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            tol_cmp: TOL_CMP,
            search: SearchOptions::default(),
            powers: vec![0.25, 0.5, 0.75],
            intertwine_tol: INTERTWINE_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub(crate) fn apply(self, a: &CMatrix, b: &CMatrix) -> CMatrix {
        match self {
            Sign::Plus => a + b,
            Sign::Minus => a - b,
        }
    }
}

/// Which instance of an entry is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Variant {
    Plain,
    Signed(Sign),
    /// Exponent `s` of `f(t) = t^s`, `g(t) = t^(1-s)`.
    Power(f64),
}

impl Variant {
    pub fn sign_label(&self) -> &'static str {
        match self {
            Variant::Signed(s) => s.symbol(),
            _ => "n/a",
        }
    }
}

/// One inequality instance evaluated on concrete inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub id: String,
    /// `"+"`, `"-"` or `"n/a"`.
    pub sign: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// `rhs - lhs`.
    pub slack: Option<f64>,
    pub holds: bool,
    pub applicable: bool,
    #[serde(default)]
    pub details: BTreeMap<String, Value>,
    pub inputs_digest: String,
}

impl BoundReport {
    /// Row key used in sweep summaries: the id with its sign or exponent,
    /// e.g. `I-FH+` or `I-GEN-FG[s=0.25]`.
    pub fn row_key(&self) -> String {
        let sign = if self.sign == "n/a" { "" } else { self.sign.as_str() };
        match self.detail("s") {
            Some(s) => format!("{}{sign}[s={s}]", self.id),
            None => format!("{}{sign}", self.id),
        }
    }

    /// Links of a chain report as `(lhs, rhs)`; a single-link report yields
    /// one pair.
    pub fn links(&self) -> Vec<(f64, f64)> {
        if let Some(Value::Array(links)) = self.details.get("links") {
            return links
                .iter()
                .filter_map(|l| Some((l.get("lhs")?.as_f64()?, l.get("rhs")?.as_f64()?)))
                .collect();
        }
        match (self.lhs, self.rhs) {
            (Some(l), Some(r)) => vec![(l, r)],
            _ => Vec::new(),
        }
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.get(key).and_then(Value::as_f64)
    }

    /// `slack / max(1, |rhs|)`.
    pub fn normalized_slack(&self) -> Option<f64> {
        Some(self.slack? / self.rhs?.abs().max(1.0))
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign == "n/a" { "" } else { self.sign.as_str() };
        let s = self
            .detail("s")
            .map(|s| format!(" s={s}"))
            .unwrap_or_default();
        if !self.applicable {
            let reason = self
                .details
                .get("reason")
                .and_then(Value::as_str)
                .unwrap_or("precondition failed");
            return write!(f, "{:<12}{sign:<2}{s} not applicable: {reason}", self.id);
        }
        write!(
            f,
            "{:<12}{sign:<2}{s} {} lhs={:.12e} rhs={:.12e} slack={:+.3e}",
            self.id,
            if self.holds { "HOLDS" } else { "VIOLATED" },
            self.lhs.unwrap_or(f64::NAN),
            self.rhs.unwrap_or(f64::NAN),
            self.slack.unwrap_or(f64::NAN),
        )
    }
}

/// `holds` rule: `lhs <= rhs + tol * max(1, |rhs|)`.
pub fn within(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * rhs.abs().max(1.0)
}

/// Stable 64-bit hex digest of the canonical bytes of all inputs.
pub fn inputs_digest(inputs: &[CMatrix]) -> String {
    let mut h = Sha256::new();
    for m in inputs {
        h.update(m.canonical_bytes());
    }
    hex::encode(&h.finalize()[..8])
}

/// `mu(A, B) = (||A||^2 + ||B||^2 + sqrt((||A||^2 - ||B||^2)^2 + 4 ||BA||^2)) / 2`.
pub fn mu(a: &CMatrix, b: &CMatrix) -> Result<f64, MatrixError> {
    let ba = b.checked_mul(a)?;
    Ok(mu_from_norms(op_norm(a), op_norm(b), op_norm(&ba)))
}

pub(crate) fn mu_from_norms(na: f64, nb: f64, nba: f64) -> f64 {
    let (a2, b2) = (na * na, nb * nb);
    0.5 * (a2 + b2 + ((a2 - b2).powi(2) + 4.0 * nba * nba).sqrt())
}

/// Frobenius residual of the intertwining condition `|A| B = B* |A|`.
pub fn intertwining_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    let (abs_a, _) = crate::matcore::abs_parts(a);
    (&(&abs_a * b) - &(&b.adjoint() * &abs_a)).frobenius_norm()
}

/// Parses ids like `I-MAIN`, `I-COMM-MU+`, `I-FH-` or `I-OK±` into the
/// catalog entry and an optional sign filter.
pub fn parse_id(raw: &str) -> Result<(&'static CatalogEntry, Option<Sign>)> {
    let raw = raw.trim();
    let (base, sign) = if let Some(b) = raw.strip_suffix('±') {
        (b, None)
    } else if let Some(b) = raw.strip_suffix("+-") {
        (b, None)
    } else if let Some(b) = raw.strip_suffix('+') {
        (b, Some(Sign::Plus))
    } else if raw.ends_with('-') && find_entry(raw).is_none() {
        (&raw[..raw.len() - 1], Some(Sign::Minus))
    } else {
        (raw, None)
    };
    let entry = find_entry(base).ok_or_else(|| Error::UnknownInequality(raw.to_string()))?;
    if sign.is_some() && !entry.signed {
        return Err(Error::UnknownInequality(raw.to_string()));
    }
    Ok((entry, sign))
}

/// Variants of an entry under `cfg`, optionally restricted to one sign.
pub fn variants(entry: &CatalogEntry, cfg: &EvalConfig, sign: Option<Sign>) -> Vec<Variant> {
    if entry.signed {
        match sign {
            Some(s) => vec![Variant::Signed(s)],
            None => vec![Variant::Signed(Sign::Plus), Variant::Signed(Sign::Minus)],
        }
    } else if entry.parametrized {
        cfg.powers.iter().map(|&s| Variant::Power(s)).collect()
    } else {
        vec![Variant::Plain]
    }
}

/// Row key of a variant, matching [`BoundReport::row_key`].
pub fn variant_key(id: &str, v: Variant) -> String {
    match v {
        Variant::Plain => id.to_string(),
        Variant::Signed(s) => format!("{id}{}", s.symbol()),
        Variant::Power(s) => format!("{id}[s={s}]"),
    }
}

/// Evaluates every variant of `id` (e.g. both signs) on `inputs`.
pub fn evaluate(id: &str, inputs: &[CMatrix], cfg: &EvalConfig) -> Result<Vec<BoundReport>> {
    let (entry, sign) = parse_id(id)?;
    check_arity(entry, inputs)?;
    let ev = Evaluator::new(inputs, cfg)?;
    Ok(variants(entry, cfg, sign)
        .into_iter()
        .map(|v| ev.evaluate(entry, v))
        .collect())
}

/// Evaluates one variant of one entry.
pub fn evaluate_variant(
    id: &str,
    variant: Variant,
    inputs: &[CMatrix],
    cfg: &EvalConfig,
) -> Result<BoundReport> {
    let (entry, _) = parse_id(id)?;
    check_arity(entry, inputs)?;
    Ok(Evaluator::new(inputs, cfg)?.evaluate(entry, variant))
}

/// Evaluates every listed entry (all variants) on shared inputs, reusing
/// intermediate quantities across entries.
pub fn evaluate_many(
    entries: &[&'static CatalogEntry],
    inputs: &[CMatrix],
    cfg: &EvalConfig,
) -> Result<Vec<BoundReport>> {
    for e in entries {
        check_arity(e, inputs)?;
    }
    let ev = Evaluator::new(inputs, cfg)?;
    Ok(entries
        .iter()
        .flat_map(|e| {
            variants(e, cfg, None)
                .into_iter()
                .map(|v| ev.evaluate(e, v))
                .collect::<Vec<_>>()
        })
        .collect())
}

fn check_arity(entry: &CatalogEntry, inputs: &[CMatrix]) -> Result<()> {
    if inputs.len() != entry.arity {
        return Err(Error::Arity {
            id: entry.id.to_string(),
            expected: entry.arity,
            got: inputs.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests;
