//! The invariant suite behind `curie verify`.

use std::path::Path;

use curie_core::chain::{
    detailed_balance_residual, drift_inequality_margin, mag_generator, mag_log_weights,
    mag_stationary, stationarity_residual, two_coord_generator, two_coord_log_weights,
    two_coord_stationary, ModelParams,
};
use curie_core::exact::{moment_decay_suite, reduction_equality_check, TransientSpec};
use curie_core::limit::{gaussian_tv_same_cov, psi_profile, Mat2, OULimit};
use curie_core::mc::{ou_moment_check, SimSpec};
use curie_core::quadrature::{integrate, QuadratureSpec};
use curie_core::Beta;
use serde::Serialize;

use crate::config::VerifyConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// The check passes when `observed <= tolerance`.
    pub tolerance: f64,
    pub observed: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

fn check(name: &str, tolerance: f64, observed: f64) -> Check {
    Check {
        name: name.into(),
        tolerance,
        observed,
        pass: observed <= tolerance,
    }
}

pub fn run_checks(cfg: &VerifyConfig, spec: &TransientSpec, seed: u64) -> Result<Report, CliError> {
    let mut checks = Vec::new();
    let beta = Beta::new;

    let mut worst: f64 = 0.0;
    for n in 2..=cfg.reduction_max_n {
        for a in 0..=n {
            for &b in &cfg.reduction_betas {
                let p = ModelParams::new(n, beta(b)?, a)?;
                for &t in &cfg.reduction_times {
                    worst = worst.max(reduction_equality_check(&p, t, spec)?);
                }
            }
        }
    }
    checks.push(check("reduction_equality", 1e-9, worst));
    log::info!("reduction equality done");

    let (mut pi_res, mut db_res): (f64, f64) = (0.0, 0.0);
    for &n in &cfg.balance_sizes {
        for &b in &cfg.balance_betas {
            let p = ModelParams::new(n, beta(b)?, n)?;
            let g = mag_generator(&p);
            pi_res = pi_res.max(stationarity_residual(&g, &mag_stationary(&p)));
            db_res = db_res.max(detailed_balance_residual(&g, &mag_log_weights(&p)));

            let q = ModelParams::with_fraction(n, beta(b)?, 0.75)?;
            let mut g2 = two_coord_generator(&q);
            if cfg.rate_perturbation != 1.0 {
                let (to, _) = g2.row(0).next().expect("state 0 has a neighbour");
                g2 = g2.with_scaled_rate(0, to, cfg.rate_perturbation)?;
            }
            pi_res = pi_res.max(stationarity_residual(&g2, &two_coord_stationary(&q)));
            db_res = db_res.max(detailed_balance_residual(&g2, &two_coord_log_weights(&q)));
        }
    }
    checks.push(check("stationarity_residual", 1e-10, pi_res));
    checks.push(check("detailed_balance", 1e-12, db_res));

    let mut violation: f64 = 0.0;
    for &n in &cfg.drift_sizes {
        for &b in &cfg.drift_betas {
            let p = ModelParams::new(n, beta(b)?, n)?;
            let m = drift_inequality_margin(&p);
            if -m > violation {
                violation = -m;
            }
        }
    }
    checks.push(check("drift_inequality", 1e-12, violation));

    let mut lyap: f64 = 0.0;
    let k = cfg.lyapunov_grid;
    for i in 0..k {
        let l = 0.5 + 0.5 * i as f64 / (k - 1) as f64;
        for j in 0..k {
            let b = 0.95 * j as f64 / (k - 1) as f64;
            lyap = lyap.max(OULimit::new(l, beta(b)?)?.lyapunov_residual());
        }
    }
    checks.push(check("lyapunov_residual", 1e-13, lyap));

    let md = moment_decay_suite(
        beta(cfg.moment_beta)?,
        cfg.moment_lambda,
        &cfg.moment_ladder,
        cfg.moment_offset,
        spec,
    )?;
    checks.push(check("moment_decay_first_spread", cfg.moment_spread_max, nan_to_inf(md.first_spread())));
    checks.push(check("moment_decay_second_spread", cfg.moment_spread_max, nan_to_inf(md.second_spread())));
    checks.push(check("moment_decay_h_spread", cfg.moment_spread_max, nan_to_inf(md.h_spread())));
    log::info!("moment decay done");

    let p = ModelParams::with_fraction(cfg.ou_n, beta(cfg.ou_beta)?, cfg.ou_lambda)?;
    let start = crate::simulate::lattice_start(&p, [1.0, -0.5]);
    let sim = SimSpec::at_times(cfg.ou_trajectories, seed, &cfg.ou_times)?;
    let worst_z = ou_moment_check(&p, start, &sim)?
        .iter()
        .map(|r| r.max_z())
        .fold(0.0, f64::max);
    checks.push(check("ou_moments_max_z", cfg.ou_se_multiple, worst_z));
    log::info!("OU moments done");

    checks.push(check("gaussian_tv_oracle", 1e-6, gaussian_tv_oracle_deviation()?));
    let psi0 = psi_profile(beta(0.0)?, 0.0)?;
    checks.push(check("psi_beta0_theta0", 1e-6, (psi0 - 0.382_924_9).abs()));

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(Report { checks, all_pass })
}

fn nan_to_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Largest difference between the closed-form Gaussian TV and a nested
/// adaptive integration of `½|p - q|` over a fixed set of pairs.
fn gaussian_tv_oracle_deviation() -> Result<f64, CliError> {
    let cases = [
        ([0.5, -0.3], Mat2::new(1.0, 0.2, 0.2, 0.7)),
        ([1.5, 0.0], Mat2::new(2.0, -0.4, -0.4, 0.5)),
        ([-0.2, 0.9], Mat2::new(0.6, 0.0, 0.0, 1.4)),
        ([2.0, 1.0], Mat2::new(1.2, 0.9, 0.9, 1.1)),
    ];
    let mut worst: f64 = 0.0;
    for (mu, cov) in cases {
        let closed = gaussian_tv_same_cov(mu, &cov)?;
        worst = worst.max((closed - tv_by_integration(mu, &cov)?).abs());
    }
    Ok(worst)
}

fn tv_by_integration(mu: [f64; 2], cov: &Mat2<f64>) -> Result<f64, CliError> {
    let inv = cov.inverse()?;
    let c = 1.0 / (2.0 * std::f64::consts::PI * cov.det().sqrt());
    let dens = |x: [f64; 2], m: [f64; 2]| {
        let d = [x[0] - m[0], x[1] - m[1]];
        let q = d[0] * (inv.m[0][0] * d[0] + inv.m[0][1] * d[1])
            + d[1] * (inv.m[1][0] * d[0] + inv.m[1][1] * d[1]);
        c * (-0.5 * q).exp()
    };
    // Frame with first axis normal to the line where the densities cross.
    let w = inv.apply(mu);
    let wn = w[0].hypot(w[1]);
    let e = [w[0] / wn, w[1] / wn];
    let f = [-e[1], e[0]];
    let s0 = (e[0] * mu[0] + e[1] * mu[1]) / 2.0;
    let r0 = (f[0] * mu[0] + f[1] * mu[1]) / 2.0;
    let reach = 12.0 * cov.m[0][0].max(cov.m[1][1]).sqrt() + mu[0].abs() + mu[1].abs();
    let quad = QuadratureSpec::new(1e-13, 1e-11, 40)?;
    let inner = |s: f64| {
        integrate(
            |r: f64| {
                let x = [e[0] * s + f[0] * r, e[1] * s + f[1] * r];
                (dens(x, [0.0, 0.0]) - dens(x, mu)).abs()
            },
            r0 - reach,
            r0 + reach,
            &quad,
        )
        .unwrap_or(f64::NAN)
    };
    let lo = integrate(inner, s0 - reach, s0, &quad)?;
    let hi = integrate(inner, s0, s0 + reach, &quad)?;
    Ok(0.5 * (lo + hi))
}

pub fn run(cfg: &VerifyConfig, spec: &TransientSpec, seed: u64, out: &Path) -> Result<(), CliError> {
    let report = run_checks(cfg, spec, seed)?;
    let path = out.join("verify.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report).expect("report serializes") + "\n")?;
    for c in &report.checks {
        println!(
            "{:<28} {:>4}  observed {:<12.3e} tolerance {:.1e}",
            c.name,
            if c.pass { "ok" } else { "FAIL" },
            c.observed,
            c.tolerance
        );
    }
    log::info!("wrote {}", path.display());
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

