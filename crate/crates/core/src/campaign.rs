//! Seeded verification campaign: LP optimum against brute force.
//!
//! Every instance `i` of size `n` is drawn from a seed derived from
//! `(seed, n, i)`, so a campaign is reproducible record by record and the
//! records do not depend on scheduling.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::instance::{random_instance, UbqpInstance, ValueDomain};
use crate::layout::Layout;
use crate::lift::{recover_x, LiftedPoint, Recovery};
use crate::lpsolve::{check_point, solve, LpOptions, LpProblem, LpSolution, LpStatus, PivotRule};
use crate::oracle::{brute_force_min, BruteForce, ORACLE_CAP};
use crate::reduction::{assemble, LpFile};
use crate::scalar::{NumericMode, Rational, Scalar};

/// Largest `n` at which an exact campaign also solves in float and compares.
pub const FLOAT_CROSS_CHECK_MAX_N: usize = 6;

/// Largest allowed `|exact - float|` in the cross-check.
pub const FLOAT_AGREEMENT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub count_per_n: usize,
    pub lo: Rational,
    pub hi: Rational,
    pub domain: ValueDomain,
    /// Match threshold on `|lp - bf|`.
    pub epsilon: Rational,
    pub seed: u64,
    pub mode: NumericMode,
    pub pivot: PivotRule,
    /// Residual allowed when rounding the recovered point.
    pub recovery_tol: Rational,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            n_min: 3,
            n_max: 8,
            count_per_n: 200,
            lo: Rational::from_integer(-50),
            hi: Rational::from_integer(50),
            domain: ValueDomain::Integer,
            epsilon: Rational::new(1, 1_000_000),
            seed: 42,
            mode: NumericMode::Exact,
            pivot: PivotRule::Dantzig,
            recovery_tol: Rational::new(1, 1_000_000),
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 3 || self.n_min > self.n_max || self.n_max > ORACLE_CAP {
            return Err(Error::Parameter(format!(
                "need 3 <= n_min <= n_max <= {ORACLE_CAP}, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        if self.count_per_n == 0 {
            return Err(Error::Parameter("count per n must be at least 1".into()));
        }
        if self.lo > self.hi {
            return Err(Error::Parameter(format!("empty range [{}, {}]", self.lo, self.hi)));
        }
        if self.epsilon.is_negative() || self.recovery_tol.is_negative() {
            return Err(Error::Parameter("tolerances must be nonnegative".into()));
        }
        Ok(())
    }

    /// Tolerance of the lower-bound check: zero in exact mode.
    pub fn lower_bound_slack(&self) -> Rational {
        match self.mode {
            NumericMode::Exact => Rational::zero(),
            NumericMode::Float => self.epsilon.clone(),
        }
    }

    fn lp_options(&self) -> LpOptions {
        LpOptions {
            pivot: self.pivot,
            ..Default::default()
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of instance `index` of size `n`.
pub fn derived_seed(seed: u64, n: usize, index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ n as u64) ^ index as u64)
}

/// One row of the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignRecord {
    pub n: usize,
    pub index: usize,
    pub seed: u64,
    pub lp_status: LpStatus,
    pub lp_objective: String,
    pub bf_objective: String,
    /// `lp - bf`
    pub gap: String,
    pub gap_f64: f64,
    /// `|gap| < epsilon`
    pub matched: bool,
    /// `lp <= bf + slack`
    pub lower_bound_ok: bool,
    /// Rounded recovery as a bit string, `x_1` first.
    pub recovered_x: String,
    /// Pre-rounding recovery values, comma separated.
    pub recovered_values: String,
    pub recovery_residual: String,
    pub recovery_binary: bool,
    pub recovered_is_argmin: bool,
    pub bf_argmin_count: usize,
    pub iterations: usize,
    pub dropped_rows: usize,
    /// Float-mode objective, for exact runs with `n <= 6`.
    pub float_objective: Option<f64>,
    pub float_agrees: Option<bool>,
    /// Counterexample bundle, if written.
    pub bundle: Option<String>,
    pub wall_time_ms: f64,
}

impl CampaignRecord {
    /// The record without its timing, for determinism comparisons.
    pub fn without_timing(&self) -> CampaignRecord {
        CampaignRecord {
            wall_time_ms: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n: usize,
    pub count: usize,
    pub matched: usize,
    pub match_rate: f64,
    pub recovered_binary: usize,
    pub mean_iterations: f64,
    pub mean_wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub records: Vec<CampaignRecord>,
    pub per_n: Vec<SizeSummary>,
    /// `(n, index)` of every mismatch.
    pub counterexamples: Vec<(usize, usize)>,
}

impl CampaignReport {
    pub fn all_matched(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn match_rate(&self) -> f64 {
        let matched = self.records.iter().filter(|r| r.matched).count();
        matched as f64 / self.records.len().max(1) as f64
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Validation(format!("{other:?}")),
        })?;
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Where the campaign writes its files.
#[derive(Clone, Debug, Default)]
pub struct CampaignOutput {
    /// Directory for `report.csv` and `report.json`.
    pub out: Option<PathBuf>,
    /// Directory for counterexample bundles.
    pub counterexample_dir: Option<PathBuf>,
}

struct Solved {
    status: LpStatus,
    objective: Rational,
    objective_text: String,
    primal_json: serde_json::Value,
    solution_json: serde_json::Value,
    recovery: std::result::Result<Recovery<Rational>, Recovery<Rational>>,
    iterations: usize,
    dropped: usize,
}

fn solve_in<S: Scalar>(p: &LpProblem, layout: &Layout, opts: &LpOptions, tol: &Rational) -> Result<Solved> {
    let sol: LpSolution<S> = solve(p, opts)?;
    if sol.status == LpStatus::Optimal {
        let check = check_point(p, &sol.primal)?;
        let limit = if S::MODE == NumericMode::Exact { 0.0 } else { 1e-6 };
        if check.max_eq_residual.to_f64() > limit || check.min_component.to_f64() < -limit {
            return Err(Error::SolverBug(format!(
                "returned point violates the constraints (residual {}, min component {})",
                check.max_eq_residual, check.min_component
            )));
        }
    }
    let w = &sol.primal[8 * layout.big_n()..];
    let lifted = LiftedPoint::from_w(layout, w)?;
    let recovery = match recover_x(&lifted, layout, &S::from_rational(tol)) {
        Ok(r) => Ok(to_rational_recovery(r)),
        Err(e) => Err(to_rational_recovery(e.0)),
    };
    Ok(Solved {
        status: sol.status,
        objective: sol.objective.to_rational(),
        objective_text: sol.objective.to_string(),
        primal_json: json!(sol.primal.iter().map(Scalar::to_json).collect::<Vec<_>>()),
        solution_json: sol.to_json(),
        recovery,
        iterations: sol.iterations,
        dropped: sol.dropped_rows.len(),
    })
}

fn to_rational_recovery<S: Scalar>(r: Recovery<S>) -> Recovery<Rational> {
    Recovery {
        x: r.x,
        values: r.values.iter().map(Scalar::to_rational).collect(),
        residual: r.residual.to_rational(),
    }
}

fn bits(x: &[u8]) -> String {
    x.iter().map(|b| char::from(b'0' + b)).collect()
}

/// Runs instance `index` of size `n`. A lower-bound violation is an error.
pub fn run_instance(cfg: &CampaignConfig, n: usize, index: usize, bundles: Option<&Path>) -> Result<CampaignRecord> {
    let start = Instant::now();
    let seed = derived_seed(cfg.seed, n, index);
    let inst = random_instance(n, &cfg.lo, &cfg.hi, cfg.domain, seed)?;
    let lp = assemble(&inst);
    let p = lp.problem();
    let opts = cfg.lp_options();
    let solved = match cfg.mode {
        NumericMode::Exact => solve_in::<Rational>(&p, &lp.layout, &opts, &cfg.recovery_tol)?,
        NumericMode::Float => solve_in::<f64>(&p, &lp.layout, &opts, &cfg.recovery_tol)?,
    };
    if solved.status != LpStatus::Optimal {
        return Err(Error::SolverBug(format!(
            "n = {n}, index {index}: solver stopped with status {} on a feasible bounded LP",
            solved.status
        )));
    }
    let bf = brute_force_min(&inst)?;
    let gap = &solved.objective - &bf.value;
    let lower_bound_ok = gap <= cfg.lower_bound_slack();
    let matched = gap.abs() < cfg.epsilon;
    let (rec, recovery_binary) = match &solved.recovery {
        Ok(r) => (r, true),
        Err(r) => (r, false),
    };
    let recovered_is_argmin = recovery_binary && bf.is_argmin(&rec.x);

    let (float_objective, float_agrees) = if cfg.mode == NumericMode::Exact && n <= FLOAT_CROSS_CHECK_MAX_N {
        let f: LpSolution<f64> = solve(&p, &opts)?;
        let agrees = f.status == LpStatus::Optimal && (f.objective - solved.objective.to_f64()).abs() <= FLOAT_AGREEMENT;
        (Some(f.objective), Some(agrees))
    } else {
        (None, None)
    };

    let mut record = CampaignRecord {
        n,
        index,
        seed,
        lp_status: solved.status,
        lp_objective: solved.objective_text.clone(),
        bf_objective: bf.value.to_string(),
        gap: gap.to_string(),
        gap_f64: gap.to_f64(),
        matched,
        lower_bound_ok,
        recovered_x: bits(&rec.x),
        recovered_values: rec.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        recovery_residual: rec.residual.to_string(),
        recovery_binary,
        recovered_is_argmin,
        bf_argmin_count: bf.argmin_count(),
        iterations: solved.iterations,
        dropped_rows: solved.dropped,
        float_objective,
        float_agrees,
        bundle: None,
        wall_time_ms: 0.0,
    };
    if !matched || !lower_bound_ok {
        if let Some(dir) = bundles {
            let path = write_bundle(dir, &inst, &lp, &solved, &bf, &record)?;
            record.bundle = Some(path.display().to_string());
        }
    }
    if !lower_bound_ok {
        return Err(Error::SolverBug(format!(
            "n = {n}, index {index} (seed {seed}): LP optimum {} exceeds the binary minimum {}; bundle {:?}",
            record.lp_objective, record.bf_objective, record.bundle
        )));
    }
    record.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(record)
}

fn write_bundle(
    dir: &Path,
    inst: &UbqpInstance,
    lp: &crate::reduction::AssembledLp,
    solved: &Solved,
    bf: &BruteForce,
    record: &CampaignRecord,
) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(format!("counterexample_n{}_i{:04}.json", record.n, record.index));
    let mut record = record.clone();
    record.bundle = Some(path.display().to_string());
    let instance: serde_json::Value = serde_json::from_str(&inst.to_json())?;
    let names = lp.var_names();
    let primal = solved.primal_json.as_array().cloned().unwrap_or_default();
    let support: Vec<serde_json::Value> = names
        .iter()
        .zip(&primal)
        .filter(|(_, v)| !matches!(v.as_str(), Some("0")) && v.as_f64() != Some(0.0))
        .map(|(name, v)| json!([name, v]))
        .collect();
    let bundle = json!({
        "record": record,
        "instance": instance,
        "lp": LpFile::from_assembled(lp),
        "solution": solved.solution_json,
        "nonzero_variables": support,
        "recovered_values": record.recovered_values.split(',').collect::<Vec<_>>(),
        "brute_force": {
            "min": bf.value.to_string(),
            "argmins": bf.argmins().iter().map(|x| bits(x)).collect::<Vec<_>>(),
        },
    });
    let mut text = serde_json::to_string_pretty(&bundle)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Runs the full campaign and writes the requested outputs.
pub fn run_campaign(cfg: &CampaignConfig, output: &CampaignOutput) -> Result<CampaignReport> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (cfg.n_min..=cfg.n_max)
        .flat_map(|n| (0..cfg.count_per_n).map(move |i| (n, i)))
        .collect();
    let bundles = output.counterexample_dir.as_deref();
    let results: Vec<Result<CampaignRecord>> = jobs
        .par_iter()
        .map(|&(n, i)| {
            let r = run_instance(cfg, n, i, bundles);
            if i + 1 == cfg.count_per_n {
                info!("finished instance {} of size n = {n}", i + 1);
            }
            r
        })
        .collect();
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        records.push(r?);
    }
    records.sort_by_key(|r| (r.n, r.index));
    let per_n = (cfg.n_min..=cfg.n_max)
        .map(|n| {
            let rs: Vec<&CampaignRecord> = records.iter().filter(|r| r.n == n).collect();
            let count = rs.len();
            let matched = rs.iter().filter(|r| r.matched).count();
            let denom = count.max(1) as f64;
            SizeSummary {
                n,
                count,
                matched,
                match_rate: matched as f64 / denom,
                recovered_binary: rs.iter().filter(|r| r.recovery_binary).count(),
                mean_iterations: rs.iter().map(|r| r.iterations as f64).sum::<f64>() / denom,
                mean_wall_time_ms: rs.iter().map(|r| r.wall_time_ms).sum::<f64>() / denom,
            }
        })
        .collect();
    let counterexamples: Vec<(usize, usize)> = records.iter().filter(|r| !r.matched).map(|r| (r.n, r.index)).collect();
    if !counterexamples.is_empty() {
        warn!("{} instances where the LP optimum is below the binary minimum", counterexamples.len());
    }
    let report = CampaignReport {
        config: cfg.clone(),
        records,
        per_n,
        counterexamples,
    };
    if let Some(dir) = &output.out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        report.write_csv(&dir.join("report.csv"))?;
        report.write_json(&dir.join("report.json"))?;
    }
    Ok(report)
}
