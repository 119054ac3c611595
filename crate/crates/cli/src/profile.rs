use std::path::Path;

use curie_core::limit::ProfileConstants;
use curie_core::{Beta, QuadratureSpec};

use crate::config::ProfileConfig;
use crate::error::CliError;
use crate::output::{csv_writer, real};

pub const HEADER: [&str; 5] = [
    "beta[-]",
    "lambda[-]",
    "theta[window units]",
    "psi_lambda[tv, fixed-fraction limit]",
    "psi[tv, limit profile]",
];

/// Writes `profile.csv`: for each β and λ, `Ψ(λ, θ)` and `Ψ(θ)` on the θ grid.
pub fn run(cfg: &ProfileConfig, out: &Path) -> Result<(), CliError> {
    let path = out.join("profile.csv");
    let mut w = csv_writer(&path)?;
    w.write_record(HEADER)?;
    let thetas = cfg.thetas();
    let quad = QuadratureSpec::default();
    for &b in &cfg.betas {
        let beta = Beta::new(b)?;
        let full = ProfileConstants::new(1.0, beta, &quad)?;
        for &l in &cfg.lambdas {
            let part = ProfileConstants::new(l, beta, &quad)?;
            for &th in &thetas {
                w.write_record([real(b), real(l), real(th), real(part.psi(th)), real(full.psi(th))])?;
            }
        }
    }
    w.flush()?;
    log::info!("wrote {}", path.display());
    Ok(())
}
