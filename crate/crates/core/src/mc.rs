//! Gillespie simulation of the two-coordinate chain and the full spin
//! system, empirical laws, and Monte Carlo moment checks.
//!
//! Every trajectory draws from its own ChaCha8 stream `(seed, index)`, so
//! results do not depend on how trajectories are spread over threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain::{
    mag_generator, mag_stationary, time_to_theta, ModelParams, ProbVector, StateSpace,
    TwoCoordState,
};
use crate::error::{Error, Result};
use crate::exact::{transient, TransientSpec};
use crate::limit::{Mat2, OULimit, ProfileConstants};
use crate::quadrature::QuadratureSpec;

/// Largest system [`simulate_full`] accepts.
pub const MAX_SIM_SITES: u64 = 4096;

const BLOCK: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub trajectories: u64,
    pub seed: u64,
    pub horizon: f64,
    pub record_times: Vec<f64>,
}

impl SimSpec {
    /// Records at each of `times`, horizon set to the last one.
    pub fn at_times(trajectories: u64, seed: u64, times: &[f64]) -> Result<Self> {
        let horizon = times.iter().cloned().fold(0.0, f64::max);
        let spec = Self {
            trajectories,
            seed,
            horizon,
            record_times: times.to_vec(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trajectories == 0 {
            return Err(Error::domain("at least one trajectory is required"));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(Error::domain(format!("horizon must be finite and >= 0, got {}", self.horizon)));
        }
        if self.record_times.is_empty() {
            return Err(Error::domain("no record times"));
        }
        for &t in &self.record_times {
            if !(t >= 0.0 && t <= self.horizon) {
                return Err(Error::domain(format!(
                    "record time {t} outside [0, {}]",
                    self.horizon
                )));
            }
        }
        Ok(())
    }

    /// Record times sorted, with the position each came from.
    fn schedule(&self) -> Vec<(usize, f64)> {
        let mut s: Vec<(usize, f64)> = self.record_times.iter().cloned().enumerate().collect();
        s.sort_by(|a, b| a.1.total_cmp(&b.1));
        s
    }
}

/// Visit counts over the states of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDist {
    space: StateSpace,
    counts: BTreeMap<usize, u64>,
    total: u64,
}

impl EmpiricalDist {
    pub fn new(space: StateSpace) -> Self {
        Self {
            space,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn record(&mut self, idx: usize) {
        debug_assert!(idx < self.space.len());
        *self.counts.entry(idx).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &EmpiricalDist) -> Result<()> {
        if self.space != other.space {
            return Err(Error::domain("cannot merge empirical laws on different spaces"));
        }
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
        Ok(())
    }

    pub fn space(&self) -> StateSpace {
        self.space
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, idx: usize) -> u64 {
        self.counts.get(&idx).copied().unwrap_or(0)
    }

    /// Nonzero counts in increasing state order.
    pub fn counts(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn to_prob_vector(&self) -> Result<ProbVector<f64>> {
        if self.total == 0 {
            return Err(Error::domain("empty empirical law"));
        }
        let mut v = vec![0.0; self.space.len()];
        for (k, c) in self.counts() {
            v[k] = c as f64 / self.total as f64;
        }
        ProbVector::normalized(self.space, v)
    }

    /// Total variation against an exact law on the same space.
    pub fn tv_to(&self, exact: &ProbVector<f64>) -> Result<f64> {
        if exact.space() != self.space {
            return Err(Error::domain("total variation between different state spaces"));
        }
        if self.total == 0 {
            return Err(Error::domain("empty empirical law"));
        }
        let n = self.total as f64;
        let mut diff = 0.0;
        let mut covered = 0.0;
        for (k, c) in self.counts() {
            let p = exact.values()[k];
            diff += (c as f64 / n - p).abs();
            covered += p;
        }
        Ok((0.5 * (diff + (1.0 - covered).max(0.0))).min(1.0))
    }

    /// Total variation between two empirical laws.
    pub fn tv_between(&self, other: &EmpiricalDist) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::domain("total variation between different state spaces"));
        }
        let (na, nb) = (self.total as f64, other.total as f64);
        let mut s = 0.0;
        let mut keys: Vec<usize> = self.counts.keys().chain(other.counts.keys()).cloned().collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            s += (self.count(k) as f64 / na - other.count(k) as f64 / nb).abs();
        }
        Ok(0.5 * s)
    }

    /// Mean of a per-state statistic.
    pub fn mean(&self, f: impl Fn(usize) -> f64) -> f64 {
        let n = self.total as f64;
        self.counts().map(|(k, c)| c as f64 * f(k)).sum::<f64>() / n
    }

    /// Sample of `size` draws from this law (used for resampling tests).
    pub fn resample(&self, size: u64, rng: &mut impl Rng) -> EmpiricalDist {
        let cum: Vec<(usize, u64)> = self
            .counts()
            .scan(0u64, |acc, (k, c)| {
                *acc += c;
                Some((k, *acc))
            })
            .collect();
        let mut out = EmpiricalDist::new(self.space);
        for _ in 0..size {
            let r = rng.gen_range(0..self.total);
            let pos = cum.partition_point(|&(_, c)| c <= r);
            out.record(cum[pos].0);
        }
        out
    }
}

/// Per-magnetization jump data for the two-coordinate chain: the exit rate
/// and the up-jump probability depend on `(u, v)` only through `m = u + v`.
struct RateTable {
    n: i64,
    exit: Vec<f64>,
    p_up: Vec<f64>,
}

impl RateTable {
    fn new(p: &ModelParams<f64>) -> Self {
        let n = p.n() as i64;
        let beta = p.beta().value();
        let nf = n as f64;
        let mut exit = Vec::with_capacity(n as usize + 1);
        let mut p_up = Vec::with_capacity(n as usize + 1);
        for i in 0..=n {
            let m = 2 * i - n;
            let up = (n - m) as f64 / 4.0 * 2.0 / (1.0 + (-2.0 * beta * (m + 1) as f64 / nf).exp());
            let down = (n + m) as f64 / 4.0 * 2.0 / (1.0 + (2.0 * beta * (m - 1) as f64 / nf).exp());
            exit.push(up + down);
            p_up.push(if up + down > 0.0 { up / (up + down) } else { 0.0 });
        }
        Self { n, exit, p_up }
    }

    #[inline]
    fn slot(&self, m: i64) -> usize {
        ((m + self.n) / 2) as usize
    }
}

/// One Gillespie trajectory of the two-coordinate chain.
pub(crate) struct TwoCoordWalker<'a> {
    table: &'a RateTable,
    a: i64,
    state: TwoCoordState,
    time: f64,
}

impl<'a> TwoCoordWalker<'a> {
    fn new(table: &'a RateTable, p: &ModelParams<f64>, start: TwoCoordState) -> Result<Self> {
        StateSpace::TwoCoord {
            a: p.a_size(),
            b: p.complement_size(),
        }
        .two_coord_index(start)?;
        Ok(Self {
            table,
            a: p.a_size() as i64,
            state: start,
            time: 0.0,
        })
    }

    #[cfg(test)]
    fn state(&self) -> TwoCoordState {
        self.state
    }

    pub fn exit_rate(&self) -> f64 {
        self.table.exit[self.table.slot(self.state.u + self.state.v)]
    }

    /// Draws a holding time and jumps; returns the holding time.
    pub fn step(&mut self, rng: &mut impl Rng) -> f64 {
        let slot = self.table.slot(self.state.u + self.state.v);
        let rate = self.table.exit[slot];
        if rate == 0.0 {
            self.time = f64::INFINITY;
            return f64::INFINITY;
        }
        let hold = -(1.0 - rng.gen::<f64>()).ln() / rate;
        self.time += hold;
        self.jump(slot, rng);
        hold
    }

    /// Runs until `t` and returns the state held at `t`.
    pub fn state_at(&mut self, t: f64, rng: &mut impl Rng) -> TwoCoordState {
        loop {
            let before = self.state;
            let slot = self.table.slot(before.u + before.v);
            let rate = self.table.exit[slot];
            if rate == 0.0 {
                return before;
            }
            // Peek the next jump time without committing past `t`.
            let hold = -(1.0 - rng.gen::<f64>()).ln() / rate;
            if self.time + hold > t {
                // Memorylessness: the residual holding time restarts at `t`.
                self.time = t;
                return before;
            }
            self.time += hold;
            self.jump(slot, rng);
        }
    }

    fn jump(&mut self, slot: usize, rng: &mut impl Rng) {
        // Up-rates are proportional to the minus counts in each block.
        let s = &mut self.state;
        let m = s.u + s.v;
        if rng.gen::<f64>() < self.table.p_up[slot] {
            if rng.gen_range(0..self.table.n - m) < self.a - s.u {
                s.u += 2;
            } else {
                s.v += 2;
            }
        } else if rng.gen_range(0..self.table.n + m) < self.a + s.u {
            s.u -= 2;
        } else {
            s.v -= 2;
        }
    }
}

fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn block_ranges(total: u64) -> Vec<(u64, u64)> {
    (0..total.div_ceil(BLOCK))
        .map(|b| (b * BLOCK, ((b + 1) * BLOCK).min(total)))
        .collect()
}

fn merge_all(parts: Vec<Vec<EmpiricalDist>>, space: StateSpace, k: usize) -> Vec<EmpiricalDist> {
    let mut out = vec![EmpiricalDist::new(space); k];
    for part in parts {
        for (o, d) in out.iter_mut().zip(&part) {
            o.merge(d).expect("same space");
        }
    }
    out
}

/// Empirical `(U_t, V_t)` laws at each record time, one per entry of
/// `spec.record_times` in the given order.
pub fn simulate_two_coord(
    p: &ModelParams<f64>,
    start: TwoCoordState,
    spec: &SimSpec,
) -> Result<Vec<EmpiricalDist>> {
    spec.validate()?;
    let space = StateSpace::TwoCoord {
        a: p.a_size(),
        b: p.complement_size(),
    };
    space.two_coord_index(start)?;
    let table = RateTable::new(p);
    let schedule = spec.schedule();
    let k = schedule.len();
    let parts: Vec<Vec<EmpiricalDist>> = block_ranges(spec.trajectories)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut local = vec![EmpiricalDist::new(space); k];
            for i in lo..hi {
                let mut rng = trajectory_rng(spec.seed, i);
                let mut w = TwoCoordWalker::new(&table, p, start).expect("validated start");
                for &(slot, t) in &schedule {
                    let s = w.state_at(t, &mut rng);
                    local[slot].record(space.two_coord_index(s).expect("state in space"));
                }
            }
            local
        })
        .collect();
    Ok(merge_all(parts, space, k))
}

/// Output of [`simulate_full_with_sites`].
#[derive(Debug, Clone, PartialEq)]
pub struct FullSimOutput {
    /// Projected `(U, V)` law per record time.
    pub projected: Vec<EmpiricalDist>,
    /// `agreement[r][i]`: trajectories with `σ_i(t_r) = σ_i(0)`.
    pub agreement: Vec<Vec<u64>>,
}

/// Spin configuration with O(1) access to a uniform plus or minus site.
struct SpinSystem {
    spin: Vec<bool>,
    pos: Vec<usize>,
    plus: Vec<usize>,
    minus: Vec<usize>,
    a: usize,
    u: i64,
    v: i64,
}

impl SpinSystem {
    fn new(sigma0: &[bool], a: usize) -> Self {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut pos = vec![0; sigma0.len()];
        let (mut u, mut v) = (0i64, 0i64);
        for (i, &s) in sigma0.iter().enumerate() {
            let d = if s { 1 } else { -1 };
            if i < a {
                u += d;
            } else {
                v += d;
            }
            let list = if s { &mut plus } else { &mut minus };
            pos[i] = list.len();
            list.push(i);
        }
        Self {
            spin: sigma0.to_vec(),
            pos,
            plus,
            minus,
            a,
            u,
            v,
        }
    }

    fn flip(&mut self, site: usize) {
        let (from, to) = if self.spin[site] {
            (&mut self.plus, &mut self.minus)
        } else {
            (&mut self.minus, &mut self.plus)
        };
        let at = self.pos[site];
        let last = from.pop().expect("site listed");
        if last != site {
            from[at] = last;
            self.pos[last] = at;
        }
        self.pos[site] = to.len();
        to.push(site);
        let d = if self.spin[site] { -2 } else { 2 };
        if site < self.a {
            self.u += d;
        } else {
            self.v += d;
        }
        self.spin[site] = !self.spin[site];
    }
}

/// Full-system Gillespie run from `sigma0` (`true` = `+1`, sites
/// `0..|A|` forming `A`), projected to `(U, V)`.
pub fn simulate_full(
    p: &ModelParams<f64>,
    sigma0: &[bool],
    spec: &SimSpec,
) -> Result<Vec<EmpiricalDist>> {
    Ok(simulate_full_with_sites(p, sigma0, spec)?.projected)
}

/// [`simulate_full`] that also counts, per site, how often the spin at each
/// record time equals its initial value.
pub fn simulate_full_with_sites(
    p: &ModelParams<f64>,
    sigma0: &[bool],
    spec: &SimSpec,
) -> Result<FullSimOutput> {
    spec.validate()?;
    let n = p.n();
    if n > MAX_SIM_SITES {
        return Err(Error::Capacity {
            what: "simulated spins".into(),
            requested: n,
            limit: MAX_SIM_SITES,
            hint: String::new(),
        });
    }
    if sigma0.len() as u64 != n {
        return Err(Error::domain(format!(
            "initial configuration has {} sites, expected {n}",
            sigma0.len()
        )));
    }
    let space = StateSpace::TwoCoord {
        a: p.a_size(),
        b: p.complement_size(),
    };
    let nf = n as f64;
    let beta = p.beta().value();
    let ni = n as i64;
    // Per-site heat-bath rates as a function of the magnetization.
    let site_up: Vec<f64> = (0..=ni)
        .map(|i| {
            let m = 2 * i - ni;
            1.0 / (1.0 + (-2.0 * beta * (m + 1) as f64 / nf).exp())
        })
        .collect();
    let site_down: Vec<f64> = (0..=ni)
        .map(|i| {
            let m = 2 * i - ni;
            1.0 / (1.0 + (2.0 * beta * (m - 1) as f64 / nf).exp())
        })
        .collect();
    let schedule = spec.schedule();
    let k = schedule.len();
    let a = p.a_size() as usize;
    let parts: Vec<(Vec<EmpiricalDist>, Vec<Vec<u64>>)> = block_ranges(spec.trajectories)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut local = vec![EmpiricalDist::new(space); k];
            let mut agree = vec![vec![0u64; n as usize]; k];
            for i in lo..hi {
                let mut rng = trajectory_rng(spec.seed, i);
                let mut sys = SpinSystem::new(sigma0, a);
                let mut time = 0.0;
                for &(slot, t) in &schedule {
                    loop {
                        let m = sys.u + sys.v;
                        let idx = ((m + ni) / 2) as usize;
                        let up = sys.minus.len() as f64 * site_up[idx];
                        let down = sys.plus.len() as f64 * site_down[idx];
                        let rate = up + down;
                        let hold = -(1.0 - rng.gen::<f64>()).ln() / rate;
                        if time + hold > t {
                            time = t;
                            break;
                        }
                        time += hold;
                        let site = if rng.gen::<f64>() * rate < up {
                            sys.minus[rng.gen_range(0..sys.minus.len())]
                        } else {
                            sys.plus[rng.gen_range(0..sys.plus.len())]
                        };
                        sys.flip(site);
                    }
                    let s = TwoCoordState { u: sys.u, v: sys.v };
                    local[slot].record(space.two_coord_index(s).expect("state in space"));
                    for (c, (&now, &init)) in agree[slot].iter_mut().zip(sys.spin.iter().zip(sigma0)) {
                        if now == init {
                            *c += 1;
                        }
                    }
                }
            }
            (local, agree)
        })
        .collect();
    let mut agreement = vec![vec![0u64; n as usize]; k];
    let mut dists = Vec::with_capacity(parts.len());
    for (d, ag) in parts {
        for (tot, part) in agreement.iter_mut().zip(&ag) {
            for (x, y) in tot.iter_mut().zip(part) {
                *x += y;
            }
        }
        dists.push(d);
    }
    Ok(FullSimOutput {
        projected: merge_all(dists, space, k),
        agreement,
    })
}

/// Initial configuration `+1` on `A = {0..|A|}`, `-1` elsewhere.
pub fn designated_start(p: &ModelParams<f64>) -> Vec<bool> {
    (0..p.n()).map(|i| i < p.a_size()).collect()
}

/// Empirical mean holding time at a pinned state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoldingTimeReport {
    pub samples: u64,
    pub mean: f64,
    pub expected: f64,
    pub std_error: f64,
}

impl HoldingTimeReport {
    pub fn z_score(&self) -> f64 {
        (self.mean - self.expected) / self.std_error
    }
}

/// Draws `samples` first holding times of the two-coordinate walker at
/// `state` and compares their mean with `1 / exit_rate`.
pub fn holding_time_check(
    p: &ModelParams<f64>,
    state: TwoCoordState,
    samples: u64,
    seed: u64,
) -> Result<HoldingTimeReport> {
    if samples < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let table = RateTable::new(p);
    let mut rng = trajectory_rng(seed, 0);
    let mut sum = 0.0;
    let mut sq = 0.0;
    let mut expected = 0.0;
    for _ in 0..samples {
        let mut w = TwoCoordWalker::new(&table, p, state)?;
        expected = 1.0 / w.exit_rate();
        let h = w.step(&mut rng);
        sum += h;
        sq += h * h;
    }
    let nf = samples as f64;
    let mean = sum / nf;
    let var = (sq / nf - mean * mean) * nf / (nf - 1.0);
    Ok(HoldingTimeReport {
        samples,
        mean,
        expected,
        std_error: (var / nf).sqrt(),
    })
}

/// One entry (`uu`, `uv` or `vv`) or mean component of an OU comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentComparison {
    pub observed: f64,
    pub target: f64,
    pub std_error: f64,
}

impl MomentComparison {
    /// `|observed - target| / SE`; zero when both agree exactly.
    pub fn z_score(&self) -> f64 {
        let d = (self.observed - self.target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }

    pub fn within(&self, k: f64) -> bool {
        self.z_score() <= k
    }
}

/// Rescaled moments `(U_t, V_t)/√n` against the OU mean and covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct OuMomentRow {
    pub t: f64,
    pub mean: [MomentComparison; 2],
    /// Covariance entries `uu`, `uv`, `vv`.
    pub cov: [MomentComparison; 3],
}

impl OuMomentRow {
    pub fn all_within(&self, k: f64) -> bool {
        self.mean.iter().chain(&self.cov).all(|c| c.within(k))
    }

    pub fn max_z(&self) -> f64 {
        self.mean
            .iter()
            .chain(&self.cov)
            .map(MomentComparison::z_score)
            .fold(0.0, f64::max)
    }
}

/// Compares the rescaled chain started at `start` with the OU process
/// started at `start/√n`, using `λ_n = |A|/n` in the drift, at each record
/// time of `spec`.
pub fn ou_moment_check(
    p: &ModelParams<f64>,
    start: TwoCoordState,
    spec: &SimSpec,
) -> Result<Vec<OuMomentRow>> {
    let ou = OULimit::new(p.lambda(), p.beta())?;
    let dists = simulate_two_coord(p, start, spec)?;
    let root = (p.n() as f64).sqrt();
    let x0 = [start.u as f64 / root, start.v as f64 / root];
    let space = dists[0].space();
    let mut rows = Vec::with_capacity(dists.len());
    for (d, &t) in dists.iter().zip(&spec.record_times) {
        let mean_target = ou.matexp(t)?.apply(x0);
        let cov_target = ou.sigma_t(t)?;
        rows.push(moment_row(d, space, root, t, mean_target, &cov_target));
    }
    Ok(rows)
}

fn moment_row(
    d: &EmpiricalDist,
    space: StateSpace,
    root: f64,
    t: f64,
    mean_target: [f64; 2],
    cov_target: &Mat2<f64>,
) -> OuMomentRow {
    let n = d.total() as f64;
    let coords = |k: usize| {
        let s = space.two_coord_state(k);
        [s.u as f64 / root, s.v as f64 / root]
    };
    let m = [d.mean(|k| coords(k)[0]), d.mean(|k| coords(k)[1])];
    let central = |i: usize, j: usize| d.mean(|k| {
        let x = coords(k);
        (x[i] - m[i]) * (x[j] - m[j])
    });
    let fourth = |i: usize, j: usize| d.mean(|k| {
        let x = coords(k);
        let y = (x[i] - m[i]) * (x[j] - m[j]);
        y * y
    });
    let c = [[central(0, 0), central(0, 1)], [central(0, 1), central(1, 1)]];
    let mean = [0, 1].map(|i| MomentComparison {
        observed: m[i],
        target: mean_target[i],
        std_error: (c[i][i] / n).sqrt(),
    });
    let cov = [(0, 0), (0, 1), (1, 1)].map(|(i, j)| MomentComparison {
        observed: c[i][j],
        target: cov_target.m[i][j],
        std_error: ((fourth(i, j) - c[i][j] * c[i][j]).max(0.0) / n).sqrt(),
    });
    OuMomentRow { t, mean, cov }
}

/// Half-space gap at `t_{n,θ}` and the quantities it is compared with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaGap {
    pub t: f64,
    pub kappa: f64,
    /// `P_π[(U+V)/√n ≤ κ] - P_t[(U+V)/√n ≤ κ]`.
    pub gap: f64,
    /// Total variation of the magnetization laws at the same time.
    pub magnetization_tv: f64,
}

/// Exact half-space gap, computed on the magnetization chain started from
/// `2|A| - n` (`U + V` is the magnetization).
pub fn kappa_statistic_gap(
    p: &ModelParams<f64>,
    theta: f64,
    spec: &TransientSpec,
) -> Result<KappaGap> {
    let (n, a) = (p.n(), p.a_size());
    if !(2 * a > n && a < n) {
        return Err(Error::domain("the half-space gap needs 1/2 < |A|/n < 1"));
    }
    let consts = ProfileConstants::new(p.lambda(), p.beta(), &QuadratureSpec::default())?;
    let kappa = consts.kappa(theta);
    let t = time_to_theta(n as f64, p.beta(), theta);
    if t < 0.0 {
        return Err(Error::domain(format!("theta {theta} maps to negative time {t}")));
    }
    let gen = mag_generator(p);
    let sp = gen.space();
    let start = ProbVector::point_mass(sp, sp.mag_index(p.start_magnetization())?)?;
    let law = transient(&gen, &start, t, spec)?;
    let pi = mag_stationary(p);
    let root = (n as f64).sqrt();
    let below = |d: &ProbVector<f64>| -> f64 {
        d.values()
            .iter()
            .enumerate()
            .filter(|&(i, _)| sp.mag_state(i) as f64 / root <= kappa)
            .map(|(_, &x)| x)
            .sum()
    };
    Ok(KappaGap {
        t,
        kappa,
        gap: below(&pi) - below(&law),
        magnetization_tv: crate::exact::tv_distance(&law, &pi)?,
    })
}

/// Simulated estimate of the same half-space gap: the time-`t` probability
/// comes from [`simulate_two_coord`], the stationary one is exact.
pub fn kappa_statistic_gap_mc(p: &ModelParams<f64>, theta: f64, trajectories: u64, seed: u64) -> Result<f64> {
    let consts = ProfileConstants::new(p.lambda(), p.beta(), &QuadratureSpec::default())?;
    let kappa = consts.kappa(theta);
    let t = time_to_theta(p.n() as f64, p.beta(), theta);
    let spec = SimSpec::at_times(trajectories, seed, &[t])?;
    let d = &simulate_two_coord(p, p.start_state(), &spec)?[0];
    let root = (p.n() as f64).sqrt();
    let sp = d.space();
    let p_t = d.mean(|k| {
        let s = sp.two_coord_state(k);
        f64::from(((s.u + s.v) as f64 / root <= kappa) as u8)
    });
    let pi = mag_stationary(p);
    let msp = pi.space();
    let p_pi: f64 = pi
        .values()
        .iter()
        .enumerate()
        .filter(|&(i, _)| msp.mag_state(i) as f64 / root <= kappa)
        .map(|(_, &x)| x)
        .sum();
    Ok(p_pi - p_t)
}
