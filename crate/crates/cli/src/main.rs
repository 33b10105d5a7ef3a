use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use numrad_core::inequalities::{evaluate_variant, parse_id, variants};
use numrad_core::io::read_matrix;
use numrad_core::repro::{run_repro, Injection};
use numrad_core::{
    catalog_list, run_sweep, BoundReport, EnsembleSpec, EvalConfig, Family, Sign, SweepConfig,
};

/// Numerical radius inequalities: reproduce the worked examples, check
/// matrices against the catalog, and sweep random ensembles.
#[derive(Parser, Debug)]
#[command(name = "numrad", version)]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TolArgs {
    /// Relative comparison tolerance for `lhs <= rhs`.
    #[arg(long, global = true)]
    tol_cmp: Option<f64>,
    /// Angle grid size for the numerical-radius search.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Golden-section stopping width over angles.
    #[arg(long, global = true)]
    refine_tol: Option<f64>,
}

impl TolArgs {
    fn config(&self) -> Result<EvalConfig> {
        let mut cfg = EvalConfig::default();
        if let Some(t) = self.tol_cmp {
            if !(t >= 0.0 && t.is_finite()) {
                bail!("--tol-cmp must be a finite nonnegative number");
            }
            cfg.tol_cmp = t;
        }
        if let Some(g) = self.grid {
            if g < 4 {
                bail!("--grid must be at least 4");
            }
            cfg.search.grid = g;
        }
        if let Some(r) = self.refine_tol {
            if !(r > 0.0 && r.is_finite()) {
                bail!("--refine-tol must be positive");
            }
            cfg.search.refine_tol = r;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recompute the worked examples and compare with the expected values.
    Repro {
        #[arg(long)]
        json: bool,
        /// Override one expected value, as QUANTITY=VALUE (exercises the
        /// failure path).
        #[arg(long, hide = true)]
        inject: Option<String>,
    },
    /// Evaluate catalog entries on matrices read from JSON files.
    Check {
        /// Matrix files, in the entry's input order.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Entry id (e.g. I-MAIN, I-FH+, I-OK) or `all` for every entry of
        /// matching arity.
        #[arg(long, short = 'i', default_value = "all")]
        inequality: String,
        /// Restrict signed entries to one sign.
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Option<Sign>,
        #[arg(long)]
        json: bool,
    },
    /// Run an ensemble sweep and summarize every selected entry.
    Sweep {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated entry ids; default is every entry matching the
        /// family arity.
        #[arg(long, value_delimiter = ',')]
        entries: Vec<String>,
        /// Family parameter as KEY=VALUE, repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Write per-trial rows and summaries; `.csv` or `.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, env = "NUMRAD_THREADS", default_value_t = 1)]
        threads: usize,
        /// Print summaries as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the catalog.
    List {
        #[arg(long)]
        json: bool,
    },
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        _ => Err(format!("expected + or -, got `{s}`")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` signals a violated inequality or a failed check.
fn run(cli: Cli) -> Result<bool> {
    let cfg = cli.tol.config()?;
    match cli.command {
        Command::Repro { json, inject } => repro(&cfg, json, inject.as_deref()),
        Command::Check {
            files,
            inequality,
            sign,
            json,
        } => check(&cfg, &files, &inequality, sign, json),
        Command::Sweep {
            family,
            n,
            trials,
            seed,
            entries,
            params,
            out,
            threads,
            json,
        } => {
            let mut spec = EnsembleSpec::new(family, n, seed);
            for p in &params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| anyhow!("--param expects KEY=VALUE, got `{p}`"))?;
                let value = serde_json::from_str::<Value>(v).unwrap_or(Value::String(v.into()));
                spec = spec.with_param(k, value);
            }
            let mut sc = SweepConfig::new(spec, trials)
                .with_entries(&entries)
                .with_threads(threads);
            sc.eval = cfg;
            sweep(&sc, out, json)
        }
        Command::List { json } => {
            list(json)?;
            Ok(true)
        }
    }
}

fn repro(cfg: &EvalConfig, json: bool, inject: Option<&str>) -> Result<bool> {
    let inj = inject
        .map(|s| -> Result<Injection> {
            let (q, v) = s
                .rsplit_once('=')
                .ok_or_else(|| anyhow!("--inject expects QUANTITY=VALUE"))?;
            Ok(Injection {
                quantity: q.to_string(),
                expected: v.parse().context("--inject value")?,
            })
        })
        .transpose()?;
    let report = run_repro(cfg, inj.as_ref());
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for c in &report.checks {
            println!(
                "{} {:<10} {:<28} expected {:<22} got {:<22} (tol {:e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.example,
                c.quantity,
                c.expected,
                c.actual,
                c.tol
            );
        }
        for r in &report.reports {
            println!("{r}");
        }
        println!("{}", if report.pass { "PASS" } else { "FAIL" });
    }
    Ok(report.pass)
}

fn check(
    cfg: &EvalConfig,
    files: &[PathBuf],
    inequality: &str,
    sign: Option<Sign>,
    json: bool,
) -> Result<bool> {
    let inputs = files
        .iter()
        .map(|p| read_matrix(p))
        .collect::<numrad_core::Result<Vec<_>>>()?;
    let selected: Vec<_> = if inequality.eq_ignore_ascii_case("all") {
        let list: Vec<_> = catalog_list()
            .iter()
            .filter(|e| e.arity == inputs.len())
            .map(|e| (e, sign))
            .collect();
        if list.is_empty() {
            bail!("no catalog entry takes {} input(s)", inputs.len());
        }
        list
    } else {
        let (entry, parsed) = parse_id(inequality)?;
        vec![(entry, sign.or(parsed))]
    };
    let mut reports: Vec<BoundReport> = Vec::new();
    for (entry, s) in &selected {
        let vs = variants(entry, cfg, if entry.signed { *s } else { None });
        for v in vs {
            reports.push(evaluate_variant(
                entry.id, v, &inputs, cfg,
            )?);
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        for r in &reports {
            println!("{r}");
            if let Some(res) = r.detail("intertwining_residual") {
                if !r.applicable {
                    println!("    intertwining residual ||(|A|B - B*|A|)||_F = {res:e}");
                }
            }
        }
    }
    Ok(reports.iter().all(|r| !r.applicable || r.holds))
}

fn sweep(sc: &SweepConfig, out: Option<PathBuf>, json: bool) -> Result<bool> {
    let result = run_sweep(sc)?;
    if let Some(path) = &out {
        result.write_to(path)?;
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&result.summaries)?);
    } else {
        println!(
            "family={} n={} trials={} seed={}",
            sc.spec.family, sc.spec.n, sc.trials, sc.spec.seed
        );
        let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.3e}"));
        for s in &result.summaries {
            println!(
                "{:<22} applicable {:>6}/{:<6} violations {:<4} slack min {} mean {} max {}",
                s.key,
                s.applicable,
                s.trials,
                s.violations,
                fmt(s.min_slack),
                fmt(s.mean_slack),
                fmt(s.max_slack)
            );
            for (other, frac) in &s.tighter_than {
                println!("    tighter than {other}: {frac}");
            }
        }
        if let Some(path) = &out {
            println!("wrote {}", path.display());
        }
    }
    Ok(result.violations() == 0)
}

fn list(json: bool) -> Result<()> {
    let entries = catalog_list();
    if json {
        println!("{}", serde_json::to_string_pretty(entries)?);
        return Ok(());
    }
    for e in entries {
        let sign = if e.signed { "+/-" } else { "" };
        println!(
            "{:<12}{:<4} arity {}  ({})  {}",
            e.id, sign, e.arity, e.inputs, e.statement
        );
        if e.precondition != "none" {
            println!("    precondition: {}", e.precondition);
        }
        println!("    anchor: {}", e.anchor);
    }
    Ok(())
}
