//! `qcorr`: command-line front end and table reproduction harness.
//!
//! Exit codes: 0 when every tolerance is met, 2 when a reproduced value misses its
//! tolerance, 1 on any execution error (bad arguments included).

mod commands;
mod config;
mod fixtures;
mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "qcorr", version, about = "Quantum-correlation detection toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// 64-bit seed for every random draw.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Zero tolerance for classification.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Monte-Carlo sample count.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

/// State source: a catalog name, a parametric family, `haar<n>`, or a JSON file.
#[derive(Args, Debug, Clone, Default)]
pub struct StateArgs {
    #[arg(long)]
    pub state: Option<String>,
    /// Angle for `e-theta`.
    #[arg(long)]
    pub theta: Option<f64>,
    /// `α` for `qubit-qutrit`.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// `γ` for `qubit-qutrit`.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Parameter of the `horodecki` family.
    #[arg(long = "param-b")]
    pub param_b: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Emit a state as a JSON density matrix.
    State(StateArgs),
    /// All applicable measures for one state.
    Measure(StateArgs),
    /// Random-measurement witness protocol.
    Witness(WitnessArgs),
    /// Qubit-qutrit detection fractions per number of local measurements.
    Fractions(FractionArgs),
    /// Nonclassicality map value and discord under dephasing.
    Ncc(NccArgs),
    /// Three-qubit SLOCC classification.
    Classify(ClassifyArgs),
    /// Bound-entanglement inequality for the b-family.
    Boundent(BoundentArgs),
    /// Level-2 locality feasibility test.
    Npa(NpaArgs),
    /// Recompute a table's theory column and compare.
    Reproduce(ReproduceArgs),
    /// Execute a JSON run configuration.
    Run(RunArgs),
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 10)]
    pub max_rounds: usize,
    /// Subsystem carrying the partial transpose.
    #[arg(long, default_value_t = 0)]
    pub pt_side: usize,
    /// Draw random observables from the first round instead of the correlation set.
    #[arg(long)]
    pub random_only: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Region {
    Rectangle,
    Physical,
}

#[derive(Args, Debug)]
pub struct FractionArgs {
    /// Number of local measurements; all of 1..=4 when omitted.
    #[arg(long)]
    pub ops: Option<usize>,
    #[arg(long, value_enum, default_value_t = Region::Rectangle)]
    pub region: Region,
}

#[derive(Args, Debug)]
pub struct NccArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Explicit dephasing strengths, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "sweep")]
    pub lambda: Vec<f64>,
    /// Dephasing grid as start:stop:step.
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Option<Sweep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Generic,
    Haar,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["state", "random"])))]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Classify this many random states.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, value_enum, default_value_t = Family::Generic)]
    pub family: Family,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("points").required(true).multiple(true).args(["b", "sweep", "threshold"])))]
pub struct BoundentArgs {
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Option<Sweep>,
    /// Also locate the detection threshold.
    #[arg(long)]
    pub threshold: bool,
}

#[derive(Args, Debug)]
pub struct NpaArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// `w`, `ghz`, or a JSON file of per-party `[M0, M1]` matrices.
    #[arg(long, default_value = "w")]
    pub settings: String,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Table id, or `all`.
    pub table: String,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    pub config: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    /// Grid points in input order; the last point may fall short of `stop` by less than a step.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

fn parse_sweep(s: &str) -> std::result::Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err("expected start:stop:step".into());
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    let sw = Sweep {
        start: num(a)?,
        stop: num(b)?,
        step: num(c)?,
    };
    if !(sw.step > 0.0) || sw.stop < sw.start {
        return Err("need step > 0 and stop >= start".into());
    }
    Ok(sw)
}

/// Worker pool sized by `QCORR_THREADS` when set.
fn init_pool() -> Result<()> {
    if let Ok(v) = std::env::var("QCORR_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("QCORR_THREADS='{v}' is not a count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = init_pool().and_then(|_| commands::execute(&cli));
    match result {
        Ok(outcome) if outcome.breach => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
