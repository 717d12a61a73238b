//! Command-line front end. `run` returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::campaign::{run_campaign, CampaignConfig, CampaignOutput};
use crate::error::{Error, Result};
use crate::instance::{random_instance, UbqpInstance, ValueDomain};
use crate::lpsolve::{solve, LpOptions, LpSolution, PivotRule};
use crate::oracle::brute_force_min;
use crate::reduction::{assemble, LpFile};
use crate::scalar::{NumericMode, Rational};
use crate::selftest::{run_selftest, Outcome};

/// Exit code when every instance matched.
pub const EXIT_OK: i32 = 0;
/// Exit code for internal errors and bad input.
pub const EXIT_ERROR: i32 = 1;
/// Exit code when the campaign found instances with a gap.
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ubqp", version, about = "Linear relaxation of binary quadratic programs, checked against brute force")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random instance as JSON.
    Gen(GenArgs),
    /// Build the LP of an instance.
    Reduce(ReduceArgs),
    /// Solve an LP file.
    Solve(SolveArgs),
    /// Minimize an instance by enumeration.
    Oracle(OracleArgs),
    /// Compare LP optima with brute force over a seeded campaign.
    Verify(VerifyArgs),
    /// Run the golden checks on the worked examples.
    Selftest,
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    Rational::parse_decimal(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, default_value = "-50", value_parser = rational, allow_hyphen_values = true)]
    pub lo: Rational,
    #[arg(long, default_value = "50", value_parser = rational, allow_hyphen_values = true)]
    pub hi: Rational,
    #[arg(long, value_enum, default_value_t = ValueDomain::Integer)]
    pub domain: ValueDomain,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Instance JSON.
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave out variable names.
    #[arg(long)]
    pub no_names: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// LP JSON.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = NumericMode::Exact)]
    pub mode: NumericMode,
    #[arg(long, value_enum, default_value_t = PivotRule::Dantzig)]
    pub pivot: PivotRule,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Instance JSON.
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a single size; overrides `--n-min` and `--n-max`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub n_min: usize,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, default_value = "1e-6", value_parser = rational)]
    pub epsilon: Rational,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = NumericMode::Exact)]
    pub mode: NumericMode,
    #[arg(long, value_enum, default_value_t = PivotRule::Dantzig)]
    pub pivot: PivotRule,
    /// Directory for report.csv and report.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for counterexample bundles; defaults to `<out>/counterexamples`.
    #[arg(long)]
    pub counterexample_dir: Option<PathBuf>,
}

impl VerifyArgs {
    pub fn config(&self) -> CampaignConfig {
        let (n_min, n_max) = self.n.map_or((self.n_min, self.n_max), |n| (n, n));
        CampaignConfig {
            n_min,
            n_max,
            count_per_n: self.count,
            lo: self.range.lo.clone(),
            hi: self.range.hi.clone(),
            domain: self.range.domain,
            epsilon: self.epsilon.clone(),
            seed: self.seed,
            mode: self.mode,
            pivot: self.pivot,
            ..Default::default()
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Error::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| Error::io(Path::new("<stdout>"), e))
        }
    }
}

fn to_text(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(a) => {
            let inst = random_instance(a.n, &a.range.lo, &a.range.hi, a.range.domain, a.seed)?;
            emit(a.out.as_deref(), &inst.to_json())?;
        }
        Command::Reduce(a) => {
            let inst = UbqpInstance::read(&a.input)?;
            let lp = assemble(&inst);
            let mut file = LpFile::from_assembled(&lp);
            if a.no_names {
                file.var_names.clear();
            }
            match &a.out {
                Some(path) => file.write(path)?,
                None => emit(None, &serde_json::to_string(&file)?)?,
            }
        }
        Command::Solve(a) => {
            let p = LpFile::read(&a.input)?.to_problem()?;
            let opts = LpOptions {
                pivot: a.pivot,
                max_iters: a.max_iters,
                ..Default::default()
            };
            let v = match a.mode {
                NumericMode::Exact => solve::<Rational>(&p, &opts)?.to_json(),
                NumericMode::Float => {
                    let s: LpSolution<f64> = solve(&p, &opts)?;
                    s.to_json()
                }
            };
            emit(a.out.as_deref(), &to_text(&v)?)?;
        }
        Command::Oracle(a) => {
            let inst = UbqpInstance::read(&a.input)?;
            let bf = brute_force_min(&inst)?;
            let argmins: Vec<String> = bf
                .argmins()
                .iter()
                .map(|x| x.iter().map(|b| char::from(b'0' + b)).collect())
                .collect();
            let v = json!({ "n": bf.n, "min": bf.value.to_string(), "argmins": argmins });
            emit(a.out.as_deref(), &to_text(&v)?)?;
        }
        Command::Verify(a) => {
            let cfg = a.config();
            let output = CampaignOutput {
                counterexample_dir: a
                    .counterexample_dir
                    .clone()
                    .or_else(|| a.out.as_ref().map(|o| o.join("counterexamples"))),
                out: a.out.clone(),
            };
            let report = run_campaign(&cfg, &output)?;
            for s in &report.per_n {
                println!(
                    "n = {:2}: {}/{} matched ({:.1}%), {} binary recoveries, {:.0} pivots, {:.1} ms mean",
                    s.n,
                    s.matched,
                    s.count,
                    100.0 * s.match_rate,
                    s.recovered_binary,
                    s.mean_iterations,
                    s.mean_wall_time_ms
                );
            }
            println!(
                "{} records, {} counterexamples",
                report.records.len(),
                report.counterexamples.len()
            );
            return Ok(if report.all_matched() { EXIT_OK } else { EXIT_MISMATCH });
        }
        Command::Selftest => {
            let checks = run_selftest();
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| c.outcome == Outcome::Fail).count();
            let differs = checks.iter().filter(|c| c.outcome == Outcome::PrintedDiffers).count();
            println!("{} checks, {failed} failed, {differs} differ from the printed values", checks.len());
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_ERROR });
        }
    }
    Ok(EXIT_OK)
}
