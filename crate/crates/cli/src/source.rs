use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use qcorr::measures::as_pure;
use qcorr::states::{self, TwoParamQubitQutrit};
use qcorr::{DensityMatrix, PureState};

use crate::StateArgs;

pub struct Loaded {
    pub name: String,
    pub rho: DensityMatrix,
    pub pure: Option<PureState>,
}

impl Loaded {
    fn pure(name: &str, psi: PureState) -> Self {
        Self {
            name: name.into(),
            rho: psi.to_density(),
            pure: Some(psi),
        }
    }

    fn mixed(name: &str, rho: DensityMatrix) -> Self {
        let pure = as_pure(&rho);
        Self {
            name: name.into(),
            rho,
            pure,
        }
    }

    pub fn require_pure(&self) -> Result<&PureState> {
        self.pure
            .as_ref()
            .ok_or_else(|| anyhow!("state '{}' is not pure", self.name))
    }
}

fn need(v: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    v.ok_or_else(|| anyhow!("state '{family}' needs --{flag}"))
}

/// Resolves a state spec. Parametric families take their numbers from the flags;
/// `haar<n>` draws an `n`-qubit Haar state from `seed`.
pub fn load(args: &StateArgs, default: Option<&str>, seed: u64) -> Result<Loaded> {
    let spec = match (&args.state, default) {
        (Some(s), _) => s.as_str(),
        (None, Some(d)) => d,
        (None, None) => bail!("--state is required"),
    };
    let lower = spec.to_ascii_lowercase();
    if lower.ends_with(".json") || Path::new(spec).is_file() {
        return from_file(Path::new(spec));
    }
    match lower.as_str() {
        "e-theta" => Ok(Loaded::pure(spec, states::e_theta(need(args.theta, "theta", spec)?)?)),
        "horodecki" => Ok(Loaded::mixed(spec, states::horodecki_b(need(args.param_b, "param-b", spec)?)?)),
        "qubit-qutrit" => {
            let p = TwoParamQubitQutrit::new(need(args.alpha, "alpha", spec)?, need(args.gamma, "gamma", spec)?)?;
            Ok(Loaded::mixed(spec, states::qubit_qutrit(&p)?))
        }
        _ => {
            if let Some(n) = lower.strip_prefix("haar").and_then(|s| s.parse::<usize>().ok()) {
                return Ok(Loaded::pure(spec, states::haar_random_pure(n, seed)?));
            }
            Ok(Loaded::mixed(spec, states::catalog(spec)?))
        }
    }
}

/// Accepts the density-matrix JSON emitted by `qcorr state` or a pure-state vector.
fn from_file(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let name = path.display().to_string();
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {name}"))?;
    // Only the matrix form carries a row count.
    if value.get("rows").is_some() {
        let rho: DensityMatrix = serde_json::from_value(value).with_context(|| format!("{name}: bad density matrix"))?;
        Ok(Loaded::mixed(&name, rho))
    } else {
        let psi: PureState = serde_json::from_value(value).with_context(|| format!("{name}: bad pure state"))?;
        Ok(Loaded::pure(&name, psi))
    }
}
