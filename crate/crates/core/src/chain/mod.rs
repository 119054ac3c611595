//! Exact generators and stationary laws of the Curie–Weiss Glauber dynamics
//! and its two lumpings: the magnetization chain and the two-coordinate
//! chain `(U, V)` of spin sums inside/outside the initial plus-set.

mod generator;
mod space;
mod stationary;

pub use generator::{
    full_glauber_generator, mag_down_rate, mag_generator, mag_up_rate, two_coord_generator,
    two_coord_rates, SparseGenerator, MAX_FULL_SITES,
};
pub use space::{MagState, ProbVector, StateSpace, TwoCoordState};
pub use stationary::{
    full_stationary, mag_log_weights, mag_stationary, two_coord_log_weights, two_coord_stationary,
};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::scalar::Beta;

/// Size `n`, inverse temperature `β`, and `|A|`, the number of plus spins
/// in the starting configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    n: u64,
    beta: Beta<T>,
    a_size: u64,
}

impl<T: Real> ModelParams<T> {
    pub fn new(n: u64, beta: Beta<T>, a_size: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        if a_size > n {
            return Err(Error::domain(format!(
                "|A| = {a_size} exceeds n = {n}"
            )));
        }
        Ok(Self { n, beta, a_size })
    }

    /// Start with `|A| = ⌈λ n⌉`.
    pub fn with_fraction(n: u64, beta: Beta<T>, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!("fraction {lambda} outside [0, 1]")));
        }
        let a = (lambda * n as f64 - 1e-9).ceil().max(0.0) as u64;
        Self::new(n, beta, a.min(n))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn beta(&self) -> Beta<T> {
        self.beta
    }

    pub fn a_size(&self) -> u64 {
        self.a_size
    }

    /// `n - |A|`.
    pub fn complement_size(&self) -> u64 {
        self.n - self.a_size
    }

    /// Realised plus-fraction `|A|/n`.
    pub fn lambda(&self) -> f64 {
        self.a_size as f64 / self.n as f64
    }

    /// `(U₀, V₀) = (|A|, -(n - |A|))`.
    pub fn start_state(&self) -> TwoCoordState {
        TwoCoordState {
            u: self.a_size as i64,
            v: -(self.complement_size() as i64),
        }
    }

    /// Initial magnetization `2|A| - n`.
    pub fn start_magnetization(&self) -> i64 {
        2 * self.a_size as i64 - self.n as i64
    }
}

/// `h_n(u, v) = (u/|A| - v/(n-|A|))²`.
pub fn h_n_statistic<T: Real>(s: TwoCoordState, p: &ModelParams<T>) -> Result<T> {
    let (a, b) = (p.a_size(), p.complement_size());
    if a == 0 || b == 0 {
        return Err(Error::domain(
            "h_n needs both the plus-set and its complement to be non-empty",
        ));
    }
    let d = T::of(s.u) / T::of(a as i64) - T::of(s.v) / T::of(b as i64);
    Ok(d * d)
}

/// Smallest value of `[q(k,k+2) + q(ℓ,ℓ-2)] - [q(k,k-2) + q(ℓ,ℓ+2)]` over
/// all pairs `ℓ ≥ k`.
///
/// With `D(k) = q(k,k+2) - q(k,k-2)` the bracket is `D(k) - D(ℓ)`, so a
/// running minimum of `D` over `k ≤ ℓ` covers every pair in one sweep.
pub fn drift_inequality_margin<T: Real>(p: &ModelParams<T>) -> T {
    let n = p.n() as i64;
    let beta = p.beta();
    let mut best = T::infinity();
    let mut min_d = T::infinity();
    let mut k = -n;
    while k <= n {
        let d = mag_up_rate(k, p.n(), beta) - mag_down_rate(k, p.n(), beta);
        min_d = min_d.min(d);
        best = best.min(min_d - d);
        k += 2;
    }
    best
}

/// True iff `q(k,k+2) + q(ℓ,ℓ-2) ≥ q(k,k-2) + q(ℓ,ℓ+2) - 1e-12` for every
/// pair `ℓ ≥ k` of magnetization states.
pub fn drift_inequality_check<T: Real>(p: &ModelParams<T>) -> bool {
    drift_inequality_margin(p) >= -T::lit(1e-12)
}

/// `t_{n,θ} = log(n) / (2(1-β)) + θ`.
pub fn time_to_theta<T: Real>(n: T, beta: Beta<T>, theta: T) -> T {
    n.ln() / (T::lit(2.0) * beta.gap()) + theta
}

/// Largest `|πQ|_j` over states.
pub fn stationarity_residual<T: Real>(gen: &SparseGenerator<T>, pi: &ProbVector<T>) -> T {
    gen.apply_left(pi.values())
        .into_iter()
        .fold(T::zero(), |acc, x| acc.max(x.abs()))
}

/// Largest relative per-edge detailed-balance defect
/// `|π(i)q(i,j) / (π(j)q(j,i)) - 1|`, evaluated from unnormalized
/// log-weights so that far-tail states cannot underflow. A one-way edge
/// counts as an infinite defect.
pub fn detailed_balance_residual<T: Real>(gen: &SparseGenerator<T>, log_weights: &[T]) -> T {
    let mut worst = T::zero();
    for i in 0..gen.len() {
        for (j, r) in gen.row(i) {
            let back = gen.rate(j, i);
            if back <= T::zero() {
                return T::infinity();
            }
            let d = (log_weights[i] + r.ln()) - (log_weights[j] + back.ln());
            worst = worst.max(d.exp_m1().abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64, b: f64, a: u64) -> ModelParams<f64> {
        ModelParams::new(n, Beta::new(b).unwrap(), a).unwrap()
    }

    #[test]
    fn params_validation() {
        let b = Beta::new(0.2).unwrap();
        assert!(ModelParams::new(0, b, 0).is_err());
        assert!(ModelParams::new(4, b, 5).is_err());
        let p = ModelParams::with_fraction(1024, b, 0.75).unwrap();
        assert_eq!(p.a_size(), 768);
        let p = ModelParams::with_fraction(10, b, 0.75).unwrap();
        assert_eq!(p.a_size(), 8);
        assert_eq!(p.start_state(), TwoCoordState { u: 8, v: -2 });
        assert_eq!(p.start_magnetization(), 6);
    }

    #[test]
    fn h_n_values() {
        let p = params(8, 0.3, 4);
        assert_eq!(h_n_statistic(TwoCoordState { u: 2, v: -2 }, &p).unwrap(), 1.0);
        assert_eq!(h_n_statistic(p.start_state(), &p).unwrap(), 4.0);
        assert_eq!(h_n_statistic(TwoCoordState { u: 2, v: 2 }, &p).unwrap(), 0.0);
        let q = params(12, 0.3, 3);
        assert_eq!(h_n_statistic(q.start_state(), &q).unwrap(), 4.0);
        assert_eq!(h_n_statistic(TwoCoordState { u: 1, v: 3 }, &q).unwrap(), 0.0);
        assert!(h_n_statistic(TwoCoordState { u: 0, v: 0 }, &params(8, 0.3, 0)).is_err());
        assert!(h_n_statistic(TwoCoordState { u: 0, v: 0 }, &params(8, 0.3, 8)).is_err());
    }

    fn brute_force_drift(p: &ModelParams<f64>) -> bool {
        let n = p.n() as i64;
        let states: Vec<i64> = (0..=n).map(|i| -n + 2 * i).collect();
        let up = |k| mag_up_rate(k, p.n(), p.beta());
        let down = |k| mag_down_rate(k, p.n(), p.beta());
        states.iter().all(|&k| {
            states
                .iter()
                .filter(|&&l| l >= k)
                .all(|&l| up(k) + down(l) >= down(k) + up(l) - 1e-12)
        })
    }

    #[test]
    fn drift_sweep_matches_brute_force() {
        for &n in &[1u64, 2, 7, 64, 301] {
            for &b in &[0.0, 0.5, 0.9, 0.99] {
                let p = params(n, b, n);
                assert_eq!(drift_inequality_check(&p), brute_force_drift(&p), "n={n} b={b}");
                assert!(drift_inequality_check(&p));
            }
        }
    }

    #[test]
    fn drift_sweep_detects_violation() {
        // Same sweep on a sequence with one upward bump must fail.
        let d = [3.0, 2.0, 2.5, 1.0];
        let mut min_d = f64::INFINITY;
        let mut best = f64::INFINITY;
        for x in d {
            min_d = min_d.min(x);
            best = best.min(min_d - x);
        }
        assert!(best < 0.0);
    }

    #[test]
    fn time_to_theta_values() {
        let b0 = Beta::new(0.0).unwrap();
        assert!((time_to_theta(std::f64::consts::E.powi(2), b0, 0.0) - 1.0).abs() < 1e-15);
        let b = Beta::new(0.5f64).unwrap();
        assert!((time_to_theta(100.0, b, 1.0) - 5.605_170_185_988_091).abs() < 1e-12);
        let shift = time_to_theta(77.0, b, 2.5) - time_to_theta(77.0, b, 0.0);
        assert!((shift - 2.5).abs() < 1e-14);
    }
}
