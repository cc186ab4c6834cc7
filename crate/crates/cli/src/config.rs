use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::Deserialize;

use crate::Cli;

/// JSON form of one invocation. Fields map one-to-one onto flags, so a config runs
/// exactly what the equivalent command line would.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: String,
    pub table: Option<String>,
    pub state: Option<String>,
    pub random: Option<usize>,
    pub family: Option<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub b: Option<f64>,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda: Option<Vec<f64>>,
    pub sweep: Option<String>,
    pub settings: Option<String>,
    pub max_rounds: Option<usize>,
    pub ops: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("config {}", path.display()))
    }

    pub fn to_args(&self) -> Result<Vec<String>> {
        if self.subcommand == "run" {
            bail!("config: a run config cannot nest another run");
        }
        let mut a = vec!["qcorr".to_string(), self.subcommand.clone()];
        if let Some(t) = &self.table {
            a.push(t.clone());
        }
        let mut flag = |name: &str, v: Option<String>| {
            if let Some(v) = v {
                a.push(format!("--{name}"));
                a.push(v);
            }
        };
        // `b` is the sweep point for boundent and the family parameter everywhere else.
        let b_flag = if self.subcommand == "boundent" { "b" } else { "param-b" };
        flag("state", self.state.clone());
        flag("random", self.random.map(|x| x.to_string()));
        flag("family", self.family.clone());
        flag("seed", self.seed.map(|x| x.to_string()));
        flag("tol", self.tol.map(|x| x.to_string()));
        flag("samples", self.samples.map(|x| x.to_string()));
        flag(b_flag, self.b.map(|x| x.to_string()));
        flag("theta", self.theta.map(|x| x.to_string()));
        flag("alpha", self.alpha.map(|x| x.to_string()));
        flag("gamma", self.gamma.map(|x| x.to_string()));
        flag(
            "lambda",
            self.lambda
                .as_ref()
                .map(|l| l.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
        );
        flag("sweep", self.sweep.clone());
        flag("settings", self.settings.clone());
        flag("max-rounds", self.max_rounds.map(|x| x.to_string()));
        flag("ops", self.ops.map(|x| x.to_string()));
        flag("format", self.format.clone());
        flag("out", self.out.as_ref().map(|p| p.display().to_string()));
        Ok(a)
    }

    pub fn to_cli(&self) -> Result<Cli> {
        Cli::try_parse_from(self.to_args()?).map_err(|e| anyhow::anyhow!("config: {}", e.render()))
    }
}
