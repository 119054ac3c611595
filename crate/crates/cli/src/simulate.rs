use std::path::Path;

use curie_core::chain::{ModelParams, TwoCoordState};
use curie_core::mc::{designated_start, ou_moment_check, simulate_full_with_sites, simulate_two_coord, SimSpec};
use curie_core::Beta;

use crate::config::SimulateConfig;
use crate::error::CliError;
use crate::output::{csv_writer, real};

/// Nearest lattice value to `x` with the parity of `m`, clamped to `[-m, m]`.
fn parity_round(x: f64, m: u64) -> i64 {
    let m = m as i64;
    let y = x.clamp(-(m as f64), m as f64);
    let lo = y.floor() as i64;
    let cands = [lo - 1, lo, lo + 1, lo + 2];
    cands
        .into_iter()
        .filter(|c| (c - m).rem_euclid(2) == 0 && c.abs() <= m)
        .min_by(|a, b| (*a as f64 - y).abs().total_cmp(&(*b as f64 - y).abs()))
        .unwrap_or(m)
}

/// Valid two-coordinate state nearest to `z·√n`.
pub fn lattice_start(p: &ModelParams<f64>, z: [f64; 2]) -> TwoCoordState {
    let root = (p.n() as f64).sqrt();
    TwoCoordState {
        u: parity_round(z[0] * root, p.a_size()),
        v: parity_round(z[1] * root, p.complement_size()),
    }
}

pub fn run(cfg: &SimulateConfig, seed: u64, out: &Path) -> Result<(), CliError> {
    let p = ModelParams::with_fraction(cfg.n, Beta::new(cfg.beta)?, cfg.lambda)?;
    let spec = SimSpec::at_times(cfg.trajectories, seed, &cfg.times)?;

    let dists = simulate_two_coord(&p, p.start_state(), &spec)?;
    let path = out.join("marginals.csv");
    let mut w = csv_writer(&path)?;
    w.write_record([
        "t[time]",
        "u[spin sum on A]",
        "v[spin sum off A]",
        "count[trajectories]",
        "probability[-, empirical]",
    ])?;
    let mut order: Vec<usize> = (0..cfg.times.len()).collect();
    order.sort_by(|&a, &b| cfg.times[a].total_cmp(&cfg.times[b]));
    for &i in &order {
        let d = &dists[i];
        for (k, c) in d.counts() {
            let s = d.space().two_coord_state(k);
            w.write_record([
                real(cfg.times[i]),
                s.u.to_string(),
                s.v.to_string(),
                c.to_string(),
                real(c as f64 / d.total() as f64),
            ])?;
        }
    }
    w.flush()?;
    log::info!("wrote {}", path.display());

    let start = lattice_start(&p, cfg.ou_start);
    let ou_spec = SimSpec::at_times(cfg.trajectories, seed.wrapping_add(1), &cfg.times)?;
    let rows = ou_moment_check(&p, start, &ou_spec)?;
    let path = out.join("ou_moments.csv");
    let mut w = csv_writer(&path)?;
    w.write_record([
        "t[time]",
        "quantity[rescaled (U,V)/sqrt(n)]",
        "observed[-]",
        "ou_target[-]",
        "std_error[-]",
        "z[std errors]",
        "pass[|z| <= se_multiple]",
    ])?;
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.sort_by(|&a, &b| rows[a].t.total_cmp(&rows[b].t));
    for i in idx {
        let r = &rows[i];
        let named = [
            ("mean_u", r.mean[0]),
            ("mean_v", r.mean[1]),
            ("cov_uu", r.cov[0]),
            ("cov_uv", r.cov[1]),
            ("cov_vv", r.cov[2]),
        ];
        for (name, c) in named {
            w.write_record([
                real(r.t),
                name.to_string(),
                real(c.observed),
                real(c.target),
                real(c.std_error),
                real(c.z_score()),
                c.within(cfg.se_multiple).to_string(),
            ])?;
        }
    }
    w.flush()?;
    log::info!("wrote {}", path.display());

    if cfg.full {
        let full = simulate_full_with_sites(&p, &designated_start(&p), &spec)?;
        let path = out.join("spin_autocorrelation.csv");
        let mut w = csv_writer(&path)?;
        w.write_record([
            "t[time]",
            "site[index]",
            "agree_fraction[-, P(spin_i(t) = spin_i(0))]",
            "independent_reference[-, (1+exp(-t))/2]",
            "std_error[-]",
            "within_3se[beta = 0 only]",
        ])?;
        let total = cfg.trajectories as f64;
        for &i in &order {
            let t = cfg.times[i];
            let q = (1.0 + (-t).exp()) / 2.0;
            let se = (q * (1.0 - q) / total).sqrt();
            for (site, &c) in full.agreement[i].iter().enumerate() {
                let phat = c as f64 / total;
                let flag = if cfg.beta == 0.0 {
                    ((phat - q).abs() <= 3.0 * se).to_string()
                } else {
                    "na".to_string()
                };
                w.write_record([real(t), site.to_string(), real(phat), real(q), real(se), flag])?;
            }
        }
        w.flush()?;
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_rounding() {
        assert_eq!(parity_round(64.0, 2048), 64);
        assert_eq!(parity_round(64.4, 2047), 65);
        assert_eq!(parity_round(-31.9, 1024), -32);
        assert_eq!(parity_round(500.0, 3), 3);
        assert_eq!(parity_round(0.2, 0), 0);
    }
}
