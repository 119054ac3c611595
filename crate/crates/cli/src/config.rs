//! Run configuration: one TOML file with a table per subcommand. Every
//! field has a default, so an empty file (or none) is a valid config.

use std::path::Path;

use curie_core::exact::{TransientMethod, TransientSpec};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub transient: TransientConfig,
    pub profile: ProfileConfig,
    pub converge: ConvergeConfig,
    pub verify: VerifyConfig,
    pub simulate: SimulateConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransientConfig {
    pub truncation_tol: f64,
    pub method: String,
    pub ode_step_tol: f64,
    pub max_terms: u64,
}

impl Default for TransientConfig {
    fn default() -> Self {
        let d = TransientSpec::default();
        Self {
            truncation_tol: d.truncation_tol,
            method: "uniformization".into(),
            ode_step_tol: d.ode_step_tol,
            max_terms: d.max_terms,
        }
    }
}

impl TransientConfig {
    pub fn spec(&self) -> Result<TransientSpec, CliError> {
        let method = match self.method.as_str() {
            "uniformization" => TransientMethod::Uniformization,
            "rk-ode" => TransientMethod::RkOde,
            other => {
                return Err(CliError::Config(format!(
                    "transient.method: expected \"uniformization\" or \"rk-ode\", got \"{other}\""
                )))
            }
        };
        let spec = TransientSpec {
            truncation_tol: self.truncation_tol,
            method,
            ode_step_tol: self.ode_step_tol,
            max_terms: self.max_terms,
        };
        spec.validate()
            .map_err(|e| CliError::Config(format!("transient: {e}")))?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    pub betas: Vec<f64>,
    /// Plus-fractions; `1.0` gives the profile itself.
    pub lambdas: Vec<f64>,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_points: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            betas: vec![0.0, 0.25, 0.5],
            lambdas: vec![1.0, 0.75],
            theta_min: -3.0,
            theta_max: 5.0,
            theta_points: 81,
        }
    }
}

impl ProfileConfig {
    pub fn thetas(&self) -> Vec<f64> {
        grid(self.theta_min, self.theta_max, self.theta_points)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeConfig {
    pub betas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub thetas: Vec<f64>,
    /// System sizes, strictly increasing.
    pub ladder: Vec<u64>,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            betas: vec![0.0],
            lambdas: vec![1.0],
            thetas: vec![0.0],
            ladder: vec![256, 512, 1024, 2048],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Largest n of the exhaustive full-vs-reduced sweep (at most 10).
    pub reduction_max_n: u64,
    pub reduction_betas: Vec<f64>,
    pub reduction_times: Vec<f64>,
    pub balance_sizes: Vec<u64>,
    pub balance_betas: Vec<f64>,
    pub drift_sizes: Vec<u64>,
    pub drift_betas: Vec<f64>,
    pub lyapunov_grid: usize,
    pub moment_beta: f64,
    pub moment_lambda: f64,
    pub moment_offset: f64,
    pub moment_ladder: Vec<u64>,
    pub moment_spread_max: f64,
    pub ou_n: u64,
    pub ou_beta: f64,
    pub ou_lambda: f64,
    pub ou_times: Vec<f64>,
    pub ou_trajectories: u64,
    pub ou_se_multiple: f64,
    /// Factor applied to one two-coordinate rate before the balance checks.
    /// Any value other than 1 breaks reversibility; used to exercise the
    /// failure path.
    pub rate_perturbation: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            reduction_max_n: 6,
            reduction_betas: vec![0.0, 0.3, 0.7, 0.95],
            reduction_times: vec![0.1, 1.0, 5.0],
            balance_sizes: vec![16, 256],
            balance_betas: vec![0.0, 0.5, 0.9],
            drift_sizes: vec![64, 512],
            drift_betas: vec![0.0, 0.5, 0.9, 0.99],
            lyapunov_grid: 20,
            moment_beta: 0.3,
            moment_lambda: 0.75,
            moment_offset: 2.0,
            moment_ladder: vec![128, 256, 512],
            moment_spread_max: 4.0,
            ou_n: 1024,
            ou_beta: 0.3,
            ou_lambda: 0.75,
            ou_times: vec![0.5, 1.0],
            ou_trajectories: 10_000,
            ou_se_multiple: 4.0,
            rate_perturbation: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub n: u64,
    pub beta: f64,
    pub lambda: f64,
    pub trajectories: u64,
    pub times: Vec<f64>,
    /// Also run the full spin system and emit per-site autocorrelations.
    pub full: bool,
    /// Rescaled start `(u, v)` of the OU moment table; the chain starts at
    /// the nearest valid lattice point to `(u, v)·√n`.
    pub ou_start: [f64; 2],
    pub se_multiple: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            n: 256,
            beta: 0.3,
            lambda: 0.75,
            trajectories: 10_000,
            times: vec![0.5, 1.0, 2.0],
            full: false,
            ou_start: [1.0, -0.5],
            se_multiple: 4.0,
        }
    }
}

pub fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn check_betas(field: &str, betas: &[f64]) -> Result<(), CliError> {
    if betas.is_empty() {
        return Err(CliError::Config(format!("{field}: list is empty")));
    }
    for (i, &b) in betas.iter().enumerate() {
        check_beta(&format!("{field}[{i}]"), b)?;
    }
    Ok(())
}

fn check_beta(field: &str, b: f64) -> Result<(), CliError> {
    if !(0.0..1.0).contains(&b) {
        return Err(CliError::Config(format!(
            "{field} = {b}: inverse temperature must satisfy 0 <= beta < 1 (high-temperature phase)"
        )));
    }
    Ok(())
}

fn check_lambdas(field: &str, lambdas: &[f64]) -> Result<(), CliError> {
    if lambdas.is_empty() {
        return Err(CliError::Config(format!("{field}: list is empty")));
    }
    for (i, &l) in lambdas.iter().enumerate() {
        check_lambda(&format!("{field}[{i}]"), l)?;
    }
    Ok(())
}

fn check_lambda(field: &str, l: f64) -> Result<(), CliError> {
    if !(0.5..=1.0).contains(&l) {
        return Err(CliError::Config(format!(
            "{field} = {l}: plus-fraction must lie in [0.5, 1]"
        )));
    }
    Ok(())
}

fn check_ladder(field: &str, ladder: &[u64]) -> Result<(), CliError> {
    if ladder.is_empty() {
        return Err(CliError::Config(format!("{field}: list is empty")));
    }
    if ladder[0] == 0 {
        return Err(CliError::Config(format!("{field}[0]: system size must be positive")));
    }
    for (i, w) in ladder.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(CliError::Config(format!(
                "{field}[{}] = {} does not exceed {field}[{i}] = {}: sizes must be strictly increasing",
                i + 1,
                w[1],
                w[0]
            )));
        }
    }
    Ok(())
}

fn check_times(field: &str, times: &[f64]) -> Result<(), CliError> {
    if times.is_empty() {
        return Err(CliError::Config(format!("{field}: list is empty")));
    }
    for (i, &t) in times.iter().enumerate() {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Config(format!("{field}[{i}] = {t}: times must be finite and >= 0")));
        }
    }
    Ok(())
}

fn check_positive(field: &str, x: f64) -> Result<(), CliError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(CliError::Config(format!("{field} = {x}: must be positive")));
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.threads == Some(0) {
            return Err(CliError::Config("threads: must be at least 1".into()));
        }
        self.transient.spec()?;

        let p = &self.profile;
        check_betas("profile.betas", &p.betas)?;
        check_lambdas("profile.lambdas", &p.lambdas)?;
        if p.theta_points == 0 || !(p.theta_min <= p.theta_max) {
            return Err(CliError::Config(
                "profile: need theta_points >= 1 and theta_min <= theta_max".into(),
            ));
        }

        let c = &self.converge;
        check_betas("converge.betas", &c.betas)?;
        check_lambdas("converge.lambdas", &c.lambdas)?;
        check_ladder("converge.ladder", &c.ladder)?;
        if c.thetas.is_empty() {
            return Err(CliError::Config("converge.thetas: list is empty".into()));
        }

        let v = &self.verify;
        if !(2..=10).contains(&v.reduction_max_n) {
            return Err(CliError::Config(format!(
                "verify.reduction_max_n = {}: must lie in [2, 10]",
                v.reduction_max_n
            )));
        }
        check_betas("verify.reduction_betas", &v.reduction_betas)?;
        check_times("verify.reduction_times", &v.reduction_times)?;
        check_betas("verify.balance_betas", &v.balance_betas)?;
        check_ladder("verify.balance_sizes", &v.balance_sizes)?;
        check_betas("verify.drift_betas", &v.drift_betas)?;
        check_ladder("verify.drift_sizes", &v.drift_sizes)?;
        if v.lyapunov_grid < 2 {
            return Err(CliError::Config("verify.lyapunov_grid: must be at least 2".into()));
        }
        check_beta("verify.moment_beta", v.moment_beta)?;
        check_lambda("verify.moment_lambda", v.moment_lambda)?;
        if v.moment_lambda == 1.0 {
            return Err(CliError::Config(
                "verify.moment_lambda = 1: moment checks need a proper plus-set".into(),
            ));
        }
        check_ladder("verify.moment_ladder", &v.moment_ladder)?;
        check_positive("verify.moment_spread_max", v.moment_spread_max)?;
        check_beta("verify.ou_beta", v.ou_beta)?;
        check_lambda("verify.ou_lambda", v.ou_lambda)?;
        check_times("verify.ou_times", &v.ou_times)?;
        check_positive("verify.ou_se_multiple", v.ou_se_multiple)?;
        if v.ou_trajectories < 2 || v.ou_n == 0 {
            return Err(CliError::Config(
                "verify: ou_trajectories must be >= 2 and ou_n >= 1".into(),
            ));
        }
        check_positive("verify.rate_perturbation", v.rate_perturbation)?;

        let s = &self.simulate;
        if s.n == 0 {
            return Err(CliError::Config("simulate.n: system size must be positive".into()));
        }
        check_beta("simulate.beta", s.beta)?;
        check_lambda("simulate.lambda", s.lambda)?;
        check_times("simulate.times", &s.times)?;
        check_positive("simulate.se_multiple", s.se_multiple)?;
        if s.trajectories < 2 {
            return Err(CliError::Config("simulate.trajectories: need at least 2".into()));
        }
        Ok(())
    }
}
