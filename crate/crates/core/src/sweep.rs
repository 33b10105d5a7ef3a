//! Ensemble sweeps: draw trials, evaluate catalog entries, fold summaries.
//!
//! Trials run on a dedicated rayon pool but are collected in trial order, and
//! every trial's matrices depend only on `(seed, trial)`, so output is
//! byte-identical for any thread count.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{draw, EnsembleSpec};
use crate::error::{Error, Result};
use crate::inequalities::{
    catalog_list, evaluate_many, parse_id, variant_key, variants, BoundReport, CatalogEntry, EvalConfig, Sign,
};

/// One evaluated (entry, variant, trial) triple. `id` carries the exponent
/// of parametrized entries, e.g. `I-GEN-FG[s=0.5]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub id: String,
    pub key: String,
    pub sign: String,
    pub trial: u64,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub holds: bool,
    pub applicable: bool,
}

impl TrialRow {
    fn from_report(r: &BoundReport, trial: u64) -> Self {
        let id = match r.detail("s") {
            Some(s) => format!("{}[s={s}]", r.id),
            None => r.id.clone(),
        };
        Self {
            id,
            key: r.row_key(),
            sign: r.sign.clone(),
            trial,
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            holds: r.holds,
            applicable: r.applicable,
        }
    }
}

/// Per-row-key fold over all trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub id: String,
    pub key: String,
    pub sign: String,
    pub trials: u64,
    pub applicable: u64,
    pub violations: u64,
    pub min_slack: Option<f64>,
    pub mean_slack: Option<f64>,
    pub max_slack: Option<f64>,
    /// Fraction of comparable trials where this row's rhs is strictly below
    /// the other row's rhs. Rows are comparable on a trial when both are
    /// applicable and report the same lhs.
    pub tighter_than: BTreeMap<String, f64>,
    pub seed: u64,
    pub spec: EnsembleSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub spec: EnsembleSpec,
    pub trials: u64,
    /// Entry ids (optionally with a sign suffix); empty selects every entry
    /// whose arity matches the family.
    pub entries: Vec<String>,
    pub eval: EvalConfig,
    pub threads: usize,
}

impl SweepConfig {
    pub fn new(spec: EnsembleSpec, trials: u64) -> Self {
        Self {
            spec,
            trials,
            entries: Vec::new(),
            eval: EvalConfig::default(),
            threads: 1,
        }
    }

    pub fn with_entries<S: AsRef<str>>(mut self, ids: &[S]) -> Self {
        self.entries = ids.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub spec: EnsembleSpec,
    pub trials: u64,
    pub summaries: Vec<SweepSummary>,
    pub rows: Vec<TrialRow>,
}

impl SweepOutput {
    pub fn violations(&self) -> u64 {
        self.summaries.iter().map(|s| s.violations).sum()
    }

    pub fn summary(&self, key: &str) -> Option<&SweepSummary> {
        self.summaries.iter().find(|s| s.key == key)
    }

    pub fn write_json(&self, w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    /// Per-trial rows with the fixed column set
    /// `id, sign, trial, lhs, rhs, slack, holds, applicable`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["id", "sign", "trial", "lhs", "rhs", "slack", "holds", "applicable"])?;
        let num = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            out.write_record([
                r.id.clone(),
                r.sign.clone(),
                r.trial.to_string(),
                num(r.lhs),
                num(r.rhs),
                num(r.slack),
                r.holds.to_string(),
                r.applicable.to_string(),
            ])?;
        }
        out.flush().map_err(|e| Error::Io {
            path: "<csv>".into(),
            source: e,
        })?;
        Ok(())
    }

    /// Writes JSON or CSV according to the file extension.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let io = |e| Error::Io {
            path: path.display().to_string(),
            source: e,
        };
        let file = File::create(path).map_err(io)?;
        let mut w = BufWriter::new(file);
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => self.write_csv(&mut w)?,
            _ => self.write_json(&mut w)?,
        }
        w.flush().map_err(io)?;
        Ok(())
    }
}

/// Resolves the entry selection against the family arity.
pub fn select_entries(
    spec: &EnsembleSpec,
    ids: &[String],
) -> Result<Vec<(&'static CatalogEntry, Option<Sign>)>> {
    let arity = spec.arity()?;
    if ids.is_empty() {
        return Ok(catalog_list()
            .iter()
            .filter(|e| e.arity == arity)
            .map(|e| (e, None))
            .collect());
    }
    ids.iter()
        .map(|raw| {
            let (entry, sign) = parse_id(raw)?;
            if entry.arity != arity {
                return Err(Error::FamilyArity {
                    id: entry.id.to_string(),
                    entry_arity: entry.arity,
                    family: spec.family.to_string(),
                    family_arity: arity,
                });
            }
            Ok((entry, sign))
        })
        .collect()
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.spec.validate()?;
    let selected = select_entries(&cfg.spec, &cfg.entries)?;
    let entries: Vec<&'static CatalogEntry> = {
        let mut seen = Vec::new();
        for (e, _) in &selected {
            if !seen.iter().any(|s: &&CatalogEntry| s.id == e.id) {
                seen.push(*e);
            }
        }
        seen
    };
    let keep = |r: &BoundReport| {
        selected.iter().any(|(e, sign)| {
            e.id == r.id && sign.is_none_or(|s| s.symbol() == r.sign)
        })
    };

    let run_trial = |trial: u64| -> Result<Vec<TrialRow>> {
        let inputs = draw(&cfg.spec, trial)?;
        Ok(evaluate_many(&entries, &inputs, &cfg.eval)?
            .iter()
            .filter(|r| keep(r))
            .map(|r| TrialRow::from_report(r, trial))
            .collect())
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let per_trial: Vec<Vec<TrialRow>> =
        pool.install(|| (0..cfg.trials).into_par_iter().map(run_trial).collect::<Result<_>>())?;

    let mut keys: Vec<(String, String, String)> = Vec::new();
    for (e, sign) in &selected {
        for v in variants(e, &cfg.eval, *sign) {
            let key = variant_key(e.id, v);
            if !keys.iter().any(|(k, _, _)| *k == key) {
                keys.push((key, e.id.to_string(), v.sign_label().to_string()));
            }
        }
    }
    let summaries = summarize(&keys, &per_trial, cfg);
    Ok(SweepOutput {
        spec: cfg.spec.clone(),
        trials: cfg.trials,
        summaries,
        rows: per_trial.into_iter().flatten().collect(),
    })
}

fn summarize(
    keys: &[(String, String, String)],
    per_trial: &[Vec<TrialRow>],
    cfg: &SweepConfig,
) -> Vec<SweepSummary> {
    // trial -> key -> row
    let index: Vec<BTreeMap<&str, &TrialRow>> = per_trial
        .iter()
        .map(|rows| rows.iter().map(|r| (r.key.as_str(), r)).collect())
        .collect();
    keys.iter()
        .map(|(key, id, sign)| {
            let mut applicable = 0u64;
            let mut violations = 0u64;
            let mut slack_min = f64::INFINITY;
            let mut slack_max = f64::NEG_INFINITY;
            let mut slack_sum = 0.0;
            for rows in &index {
                let Some(r) = rows.get(key.as_str()) else { continue };
                if !r.applicable {
                    continue;
                }
                applicable += 1;
                if !r.holds {
                    violations += 1;
                }
                let s = r.slack.unwrap_or(f64::NAN);
                slack_min = slack_min.min(s);
                slack_max = slack_max.max(s);
                slack_sum += s;
            }
            let mut tighter_than = BTreeMap::new();
            for (other, _, _) in keys {
                if other == key {
                    continue;
                }
                let (mut comparable, mut tighter) = (0u64, 0u64);
                for rows in &index {
                    let (Some(a), Some(b)) = (rows.get(key.as_str()), rows.get(other.as_str()))
                    else {
                        continue;
                    };
                    let (Some(la), Some(ra), Some(lb), Some(rb)) = (a.lhs, a.rhs, b.lhs, b.rhs)
                    else {
                        continue;
                    };
                    if (la - lb).abs() > 1e-12 * la.abs().max(1.0) {
                        continue;
                    }
                    comparable += 1;
                    if ra < rb {
                        tighter += 1;
                    }
                }
                if comparable > 0 {
                    tighter_than.insert(other.clone(), tighter as f64 / comparable as f64);
                }
            }
            let stat = |x: f64| (applicable > 0).then_some(x);
            SweepSummary {
                id: id.clone(),
                key: key.clone(),
                sign: sign.clone(),
                trials: cfg.trials,
                applicable,
                violations,
                min_slack: stat(slack_min),
                mean_slack: stat(slack_sum / applicable.max(1) as f64),
                max_slack: stat(slack_max),
                tighter_than,
                seed: cfg.spec.seed,
                spec: cfg.spec.clone(),
            }
        })
        .collect()
}
