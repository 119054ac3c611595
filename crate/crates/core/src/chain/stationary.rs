use super::space::{ProbVector, StateSpace};
use super::ModelParams;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::scalar::Beta;

/// `log C(m, j)` for `j = 0..=m`, by the ratio recurrence
/// `C(m, j+1) / C(m, j) = (m - j)/(j + 1)`.
fn log_binomial_row<T: Real>(m: u64) -> Vec<T> {
    let mut out = Vec::with_capacity(m as usize + 1);
    let mut acc = T::zero();
    out.push(acc);
    for j in 0..m {
        acc = acc + (T::of((m - j) as i64) / T::of(j as i64 + 1)).ln();
        out.push(acc);
    }
    out
}

fn energy<T: Real>(k: i64, n: u64, beta: Beta<T>) -> T {
    beta.value() * T::of(k * k) / T::of(2 * n as i64)
}

fn normalize_log<T: Real>(space: StateSpace, log_w: &[T]) -> Result<ProbVector<T>> {
    let top = log_w
        .iter()
        .fold(T::neg_infinity(), |acc, &x| acc.max(x));
    if !top.is_finite() {
        return Err(Error::domain("log-weights have no finite maximum"));
    }
    let w: Vec<T> = log_w.iter().map(|&x| (x - top).exp()).collect();
    ProbVector::normalized(space, w)
}

/// Unnormalized `log π_Y(k) = log C(n, (n+k)/2) + βk²/(2n)`, ascending `k`.
pub fn mag_log_weights<T: Real>(p: &ModelParams<T>) -> Vec<T> {
    let n = p.n();
    log_binomial_row::<T>(n)
        .into_iter()
        .enumerate()
        .map(|(j, lb)| lb + energy(2 * j as i64 - n as i64, n, p.beta()))
        .collect()
}

/// Stationary law of the magnetization chain.
pub fn mag_stationary<T: Real>(p: &ModelParams<T>) -> ProbVector<T> {
    normalize_log(StateSpace::Magnetization { n: p.n() }, &mag_log_weights(p))
        .expect("magnetization weights are finite")
}

/// Unnormalized `log π_{U,V}(u,v) = log C(|A|,(|A|+u)/2) + log C(n-|A|,(n-|A|+v)/2)
/// + β(u+v)²/(2n)`, u-major.
pub fn two_coord_log_weights<T: Real>(p: &ModelParams<T>) -> Vec<T> {
    let (a, b) = (p.a_size(), p.complement_size());
    let la = log_binomial_row::<T>(a);
    let lb = log_binomial_row::<T>(b);
    let mut out = Vec::with_capacity(la.len() * lb.len());
    for (iu, &wu) in la.iter().enumerate() {
        let u = 2 * iu as i64 - a as i64;
        for (iv, &wv) in lb.iter().enumerate() {
            let v = 2 * iv as i64 - b as i64;
            out.push(wu + wv + energy(u + v, p.n(), p.beta()));
        }
    }
    out
}

/// Stationary law of the two-coordinate chain.
pub fn two_coord_stationary<T: Real>(p: &ModelParams<T>) -> ProbVector<T> {
    let space = StateSpace::TwoCoord {
        a: p.a_size(),
        b: p.complement_size(),
    };
    normalize_log(space, &two_coord_log_weights(p)).expect("two-coordinate weights are finite")
}

/// Curie–Weiss measure `∝ exp(β m(σ)² / (2n))` on all `2ⁿ` configurations.
pub fn full_stationary<T: Real>(p: &ModelParams<T>) -> Result<ProbVector<T>> {
    let n = p.n();
    if n > super::MAX_FULL_SITES {
        return Err(Error::Capacity {
            what: "full configuration space sites".into(),
            requested: n,
            limit: super::MAX_FULL_SITES,
            hint: String::new(),
        });
    }
    let space = StateSpace::Full { n: n as u32 };
    let log_w: Vec<T> = (0..space.len())
        .map(|s| energy(space.magnetization(s), n, p.beta()))
        .collect();
    normalize_log(space, &log_w)
}
