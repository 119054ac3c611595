use std::path::Path;

use curie_core::chain::ModelParams;
use curie_core::exact::{distance_curve, TransientSpec};
use curie_core::limit::ProfileConstants;
use curie_core::{Beta, QuadratureSpec};
use rayon::prelude::*;

use crate::config::ConvergeConfig;
use crate::error::CliError;
use crate::output::{csv_writer, real, write_svg_logx, Series};

pub const HEADER: [&str; 11] = [
    "n[sites]",
    "beta[-]",
    "lambda[-, requested]",
    "lambda_n[-, |A|/n]",
    "a_size[sites]",
    "theta[window units]",
    "t[time]",
    "d_exact[tv, finite n]",
    "psi_lambda[tv, fixed-fraction limit]",
    "psi[tv, limit profile]",
    "abs_gap[tv, |d_exact - psi_lambda|]",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRecord {
    pub n: u64,
    pub beta: f64,
    pub lambda: f64,
    pub lambda_n: f64,
    pub a_size: u64,
    pub theta: f64,
    pub t: f64,
    pub d_exact: f64,
    pub psi_lambda: f64,
    pub psi: f64,
    pub abs_gap: f64,
}

/// Exact distances for every `(β, λ, n, θ)` of the config, sorted by
/// `(β, λ, θ, n)`.
pub fn records(cfg: &ConvergeConfig, spec: &TransientSpec) -> Result<Vec<CurveRecord>, CliError> {
    let quad = QuadratureSpec::default();
    let mut items = Vec::new();
    for &b in &cfg.betas {
        for &l in &cfg.lambdas {
            for &n in &cfg.ladder {
                items.push((b, l, n));
            }
        }
    }
    let chunks: Vec<Vec<CurveRecord>> = items
        .par_iter()
        .map(|&(b, l, n)| -> Result<Vec<CurveRecord>, CliError> {
            let beta = Beta::new(b)?;
            let p = ModelParams::with_fraction(n, beta, l)?;
            let curve = distance_curve(&p, &cfg.thetas, spec)
                .map_err(|e| CliError::from(e).context(|| format!("n = {n}, beta = {b}, lambda = {l}")))?;
            // The limit uses the realized fraction |A|/n.
            let lim = ProfileConstants::new(p.lambda(), beta, &quad)?;
            let full = ProfileConstants::new(1.0, beta, &quad)?;
            Ok(curve
                .into_iter()
                .map(|(theta, r)| {
                    let psi_lambda = lim.psi(theta);
                    CurveRecord {
                        n,
                        beta: b,
                        lambda: l,
                        lambda_n: p.lambda(),
                        a_size: p.a_size(),
                        theta,
                        t: r.t,
                        d_exact: r.tv,
                        psi_lambda,
                        psi: full.psi(theta),
                        abs_gap: (r.tv - psi_lambda).abs(),
                    }
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;
    let mut all: Vec<CurveRecord> = chunks.into_iter().flatten().collect();
    all.sort_by(|x, y| {
        x.beta
            .total_cmp(&y.beta)
            .then(x.lambda.total_cmp(&y.lambda))
            .then(x.theta.total_cmp(&y.theta))
            .then(x.n.cmp(&y.n))
    });
    Ok(all)
}

pub fn run(cfg: &ConvergeConfig, spec: &TransientSpec, out: &Path, svg: bool) -> Result<(), CliError> {
    let recs = records(cfg, spec)?;
    let path = out.join("converge.csv");
    let mut w = csv_writer(&path)?;
    w.write_record(HEADER)?;
    for r in &recs {
        w.write_record([
            r.n.to_string(),
            real(r.beta),
            real(r.lambda),
            real(r.lambda_n),
            r.a_size.to_string(),
            real(r.theta),
            real(r.t),
            real(r.d_exact),
            real(r.psi_lambda),
            real(r.psi),
            real(r.abs_gap),
        ])?;
    }
    w.flush()?;
    log::info!("wrote {}", path.display());
    if svg {
        let mut series: Vec<Series> = Vec::new();
        for r in &recs {
            let label = format!("b={} l={} th={}", r.beta, r.lambda, r.theta);
            match series.last_mut() {
                Some(s) if s.label == label => s.points.push((r.n as f64, r.abs_gap)),
                _ => series.push(Series {
                    label,
                    points: vec![(r.n as f64, r.abs_gap)],
                }),
            }
        }
        let svg_path = out.join("converge.svg");
        write_svg_logx(&svg_path, "distance to the limit profile", "n", "|d_n - psi_lambda|", &series)?;
        log::info!("wrote {}", svg_path.display());
    }
    Ok(())
}
