//! Exact transient laws `start · e^{tQ}` by uniformization (with an
//! adaptive Runge–Kutta fallback), total-variation distances, and the
//! finite-n distance curves and moment checks built on them.

use rayon::prelude::*;

use crate::chain::{
    full_glauber_generator, full_stationary, h_n_statistic, mag_generator, mag_stationary,
    time_to_theta, two_coord_generator, two_coord_stationary, ModelParams, ProbVector,
    SparseGenerator, StateSpace, MAX_FULL_SITES,
};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::scalar::{f_n_table, Beta};

/// Integration method for the forward equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransientMethod {
    Uniformization,
    RkOde,
}

/// Accuracy and cost controls for [`transient`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransientSpec {
    /// Poisson mass discarded, split evenly between both tails.
    pub truncation_tol: f64,
    pub method: TransientMethod,
    /// Local L1 error allowed per accepted Runge–Kutta step.
    pub ode_step_tol: f64,
    /// Cap on uniformization terms or ODE steps.
    pub max_terms: u64,
}

impl Default for TransientSpec {
    fn default() -> Self {
        Self {
            truncation_tol: 1e-12,
            method: TransientMethod::Uniformization,
            ode_step_tol: 1e-10,
            max_terms: 20_000_000,
        }
    }
}

impl TransientSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation_tol > 0.0 && self.truncation_tol <= 1e-6) {
            return Err(Error::domain(format!(
                "truncation_tol must lie in (0, 1e-6], got {}",
                self.truncation_tol
            )));
        }
        if !(self.ode_step_tol > 0.0) {
            return Err(Error::domain("ode_step_tol must be positive"));
        }
        Ok(())
    }

    pub fn with_method(self, method: TransientMethod) -> Self {
        Self { method, ..self }
    }
}

/// Distance to stationarity at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TVResult {
    pub t: f64,
    pub tv: f64,
}

const PAR_THRESHOLD: usize = 1 << 15;

/// Generator in gather form: `(pQ)_j = -p_j e_j + Σ_i p_i q(i,j)`.
struct Kernel {
    exit: Vec<f64>,
    in_ptr: Vec<usize>,
    in_src: Vec<usize>,
    in_rate: Vec<f64>,
}

impl Kernel {
    fn new(gen: &SparseGenerator<f64>) -> Self {
        let (in_ptr, in_src, in_rate) = gen.incoming();
        Self {
            exit: gen.exit_rates().to_vec(),
            in_ptr,
            in_src,
            in_rate,
        }
    }

    /// `out = diag ⊙ v + scale · Σ_in v_i q(i,·)`.
    fn gather(&self, v: &[f64], out: &mut [f64], diag: &[f64], scale: f64) {
        let cell = |j: usize| {
            let mut acc = diag[j] * v[j];
            for e in self.in_ptr[j]..self.in_ptr[j + 1] {
                acc += scale * self.in_rate[e] * v[self.in_src[e]];
            }
            acc
        };
        if out.len() >= PAR_THRESHOLD {
            out.par_chunks_mut(4096).enumerate().for_each(|(c, chunk)| {
                let base = c * 4096;
                for (o, x) in chunk.iter_mut().enumerate() {
                    *x = cell(base + o);
                }
            });
        } else {
            for (j, x) in out.iter_mut().enumerate() {
                *x = cell(j);
            }
        }
    }
}

/// Normalized Poisson(x) weights on `[first, first + w.len())` with at most
/// `tol/2` mass dropped from each tail.
fn poisson_window(x: f64, tol: f64) -> (u64, Vec<f64>) {
    let mode = x.floor() as u64;
    let half = tol / 2.0;
    let mut left = vec![1.0f64];
    let mut sum = 1.0;
    // Walk down from the mode; remaining lower tail ≤ w·r/(1-r), r = k/x.
    let mut k = mode;
    let mut w = 1.0;
    while k > 0 {
        let r = k as f64 / x;
        if r < 1.0 && w * r / (1.0 - r) <= half * sum {
            break;
        }
        w *= r;
        k -= 1;
        left.push(w);
        sum += w;
    }
    let first = k;
    let mut right = Vec::new();
    let mut k = mode;
    let mut w = 1.0;
    loop {
        let r = x / (k + 1) as f64;
        if r < 1.0 && w * r / (1.0 - r) <= half * sum {
            break;
        }
        w *= r;
        k += 1;
        right.push(w);
        sum += w;
    }
    left.reverse();
    left.extend(right);
    for v in left.iter_mut() {
        *v /= sum;
    }
    (first, left)
}

fn finish(space: StateSpace, mut v: Vec<f64>) -> Result<ProbVector<f64>> {
    let mut total = 0.0;
    for x in v.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
        total += *x;
    }
    let drift = (total - 1.0).abs();
    if drift > 1e-12 {
        log::warn!("transient renormalization drift {drift:.3e}");
    }
    ProbVector::normalized(space, v)
}

fn uniformization(
    gen: &SparseGenerator<f64>,
    start: &ProbVector<f64>,
    t: f64,
    spec: &TransientSpec,
) -> Result<ProbVector<f64>> {
    let lambda = gen.max_exit_rate();
    if lambda == 0.0 {
        return Ok(start.clone());
    }
    let x = lambda * t;
    let estimate = x + 12.0 * x.sqrt() + 20.0;
    if estimate > spec.max_terms as f64 {
        return Err(Error::Capacity {
            what: "uniformization terms".into(),
            requested: estimate as u64,
            limit: spec.max_terms,
            hint: "; consider the rk-ode method".into(),
        });
    }
    let (first, weights) = poisson_window(x, spec.truncation_tol);
    let kernel = Kernel::new(gen);
    let diag: Vec<f64> = kernel.exit.iter().map(|e| 1.0 - e / lambda).collect();
    let scale = 1.0 / lambda;
    let mut v = start.values().to_vec();
    let mut next = vec![0.0; v.len()];
    let mut acc = vec![0.0; v.len()];
    let last = first + weights.len() as u64 - 1;
    for k in 0..=last {
        if k >= first {
            let w = weights[(k - first) as usize];
            for (a, &p) in acc.iter_mut().zip(&v) {
                *a += w * p;
            }
        }
        if k < last {
            kernel.gather(&v, &mut next, &diag, scale);
            std::mem::swap(&mut v, &mut next);
        }
    }
    finish(gen.space(), acc)
}

// Dormand–Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus embedded fourth-order weights.
const DP_E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

fn rk_ode(
    gen: &SparseGenerator<f64>,
    start: &ProbVector<f64>,
    t: f64,
    spec: &TransientSpec,
) -> Result<ProbVector<f64>> {
    let kernel = Kernel::new(gen);
    let diag: Vec<f64> = kernel.exit.iter().map(|e| -e).collect();
    let rhs = |p: &[f64], out: &mut [f64]| kernel.gather(p, out, &diag, 1.0);
    let dim = start.values().len();
    let lambda = gen.max_exit_rate().max(1e-300);
    let mut y = start.values().to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    rhs(&y, &mut k[0]);
    let mut time = 0.0;
    let mut h = (1.0 / lambda).min(t);
    let mut steps = 0u64;
    while time < t {
        if steps >= spec.max_terms {
            return Err(Error::Capacity {
                what: "Runge-Kutta steps".into(),
                requested: steps,
                limit: spec.max_terms,
                hint: String::new(),
            });
        }
        steps += 1;
        if time + h > t {
            h = t - time;
        }
        for s in 1..7 {
            for j in 0..dim {
                let mut acc = y[j];
                for (r, a) in DP_A[s][..s].iter().enumerate() {
                    if *a != 0.0 {
                        acc += h * a * k[r][j];
                    }
                }
                stage[j] = acc;
            }
            if s == 6 {
                y_new.copy_from_slice(&stage);
            }
            let (done, rest) = k.split_at_mut(s);
            let _ = done;
            rhs(&stage, &mut rest[0]);
        }
        let mut err = 0.0;
        for j in 0..dim {
            let mut e = 0.0;
            for s in 0..7 {
                e += DP_E[s] * k[s][j];
            }
            err += (h * e).abs();
        }
        let _ = DP_C;
        if err <= spec.ode_step_tol || h <= 1e-14 * t.max(1.0) {
            time += h;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * (spec.ode_step_tol / err).powf(0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    finish(gen.space(), y)
}

/// `start · e^{tQ}`.
pub fn transient(
    gen: &SparseGenerator<f64>,
    start: &ProbVector<f64>,
    t: f64,
    spec: &TransientSpec,
) -> Result<ProbVector<f64>> {
    spec.validate()?;
    if start.space() != gen.space() {
        return Err(Error::domain("start vector and generator live on different spaces"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(start.clone());
    }
    match spec.method {
        TransientMethod::Uniformization => uniformization(gen, start, t, spec),
        TransientMethod::RkOde => rk_ode(gen, start, t, spec),
    }
}

/// `½ Σ |a(x) - b(x)|`.
pub fn tv_distance(a: &ProbVector<f64>, b: &ProbVector<f64>) -> Result<f64> {
    if a.space() != b.space() {
        return Err(Error::domain("total variation between different state spaces"));
    }
    let s: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok((0.5 * s).min(1.0))
}

/// `Σ_x p(x) · statistic(x)` with the statistic given per state index.
pub fn expectation(dist: &ProbVector<f64>, statistic: impl Fn(usize) -> f64) -> f64 {
    dist.values()
        .iter()
        .enumerate()
        .map(|(i, &p)| if p == 0.0 { 0.0 } else { p * statistic(i) })
        .sum()
}

/// Chain, start vector and stationary law that realise `d_n` from the
/// designated start; all-plus / all-minus starts use the magnetization chain.
fn reduced_setup(
    p: &ModelParams<f64>,
) -> Result<(SparseGenerator<f64>, ProbVector<f64>, ProbVector<f64>)> {
    if p.a_size() == p.n() || p.a_size() == 0 {
        let gen = mag_generator(p);
        let idx = gen.space().mag_index(p.start_magnetization())?;
        let start = ProbVector::point_mass(gen.space(), idx)?;
        Ok((gen, start, mag_stationary(p)))
    } else {
        let gen = two_coord_generator(p);
        let idx = gen.space().two_coord_index(p.start_state())?;
        let start = ProbVector::point_mass(gen.space(), idx)?;
        Ok((gen, start, two_coord_stationary(p)))
    }
}

/// `d_n(t_{n,θ})` from the start `(|A|, -(n-|A|))` for each θ, returned in
/// input order. Times are visited in increasing order and each law is
/// advanced from the previous one.
pub fn distance_curve(
    p: &ModelParams<f64>,
    thetas: &[f64],
    spec: &TransientSpec,
) -> Result<Vec<(f64, TVResult)>> {
    let (gen, start, pi) = reduced_setup(p)?;
    let times: Vec<f64> = thetas
        .iter()
        .map(|&th| time_to_theta(p.n() as f64, p.beta(), th))
        .collect();
    let mut order: Vec<usize> = (0..thetas.len()).collect();
    order.sort_by(|&i, &j| times[i].total_cmp(&times[j]));
    let mut out = vec![None; thetas.len()];
    let mut law = start;
    let mut now = 0.0;
    for i in order {
        let t = times[i];
        if t < 0.0 {
            return Err(Error::domain(format!(
                "theta {} maps to negative time {t}",
                thetas[i]
            )));
        }
        law = transient(&gen, &law, t - now, spec)?;
        now = t;
        out[i] = Some((thetas[i], TVResult {
            t,
            tv: tv_distance(&law, &pi)?,
        }));
    }
    Ok(out.into_iter().map(|x| x.expect("every theta visited")).collect())
}

/// `|TV_full - TV_two-coord|` at time `t` for the start with plus-set
/// `A = {0, ..., |A|-1}`; the lumping makes this zero.
pub fn reduction_equality_check(
    p: &ModelParams<f64>,
    t: f64,
    spec: &TransientSpec,
) -> Result<f64> {
    const LIMIT: u64 = 10;
    if p.n() > LIMIT {
        return Err(Error::Capacity {
            what: "reduction check sites".into(),
            requested: p.n(),
            limit: LIMIT.min(MAX_FULL_SITES),
            hint: String::new(),
        });
    }
    let full = full_glauber_generator(p)?;
    let sigma0 = (1usize << p.a_size()) - 1;
    let start = ProbVector::point_mass(full.space(), sigma0)?;
    let tv_full = tv_distance(&transient(&full, &start, t, spec)?, &full_stationary(p)?)?;

    let two = two_coord_generator(p);
    let idx = two.space().two_coord_index(p.start_state())?;
    let start2 = ProbVector::point_mass(two.space(), idx)?;
    let tv_two = tv_distance(&transient(&two, &start2, t, spec)?, &two_coord_stationary(p))?;
    Ok((tv_full - tv_two).abs())
}

/// Moment checks at `t_{n,-C}` for one system size.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentDecayRow {
    pub n: u64,
    pub a_size: u64,
    pub t: f64,
    /// `E f_n(Y_t)`.
    pub first_moment: f64,
    /// `e^{μC}/√n · f_n(2|A|-n)`.
    pub first_main: f64,
    /// `E f_n(Y_t)²`.
    pub second_moment: f64,
    /// `e^{2μC}/n · f_n(2|A|-n)²`.
    pub second_main: f64,
    /// `E h_n(U_t, V_t)`.
    pub h_mean: f64,
}

impl MomentDecayRow {
    pub fn scaled_first_deviation(&self) -> f64 {
        self.n as f64 * (self.first_moment - self.first_main).abs()
    }

    pub fn scaled_second_deviation(&self) -> f64 {
        self.n as f64 * (self.second_moment - self.second_main).abs()
    }

    pub fn scaled_h(&self) -> f64 {
        self.n as f64 * self.h_mean
    }

    /// `E f² / (E f)² - 1`.
    pub fn variance_ratio(&self) -> f64 {
        self.second_moment / (self.first_moment * self.first_moment) - 1.0
    }
}

/// Moment rows for a ladder of sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentDecayReport {
    pub beta: f64,
    pub lambda: f64,
    pub offset_c: f64,
    pub rows: Vec<MomentDecayRow>,
}

impl MomentDecayReport {
    fn spread(&self, f: impl Fn(&MomentDecayRow) -> f64) -> f64 {
        let vals: Vec<f64> = self.rows.iter().map(f).collect();
        let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }

    /// max/min of `n·|E f - main|` across the ladder.
    pub fn first_spread(&self) -> f64 {
        self.spread(MomentDecayRow::scaled_first_deviation)
    }

    pub fn second_spread(&self) -> f64 {
        self.spread(MomentDecayRow::scaled_second_deviation)
    }

    pub fn h_spread(&self) -> f64 {
        self.spread(MomentDecayRow::scaled_h)
    }
}

/// First/second `f_n` moments on the magnetization chain and the `h_n` mean
/// on the two-coordinate chain, all at `t_{n,-C}` from the designated start.
pub fn moment_decay_point(
    p: &ModelParams<f64>,
    offset_c: f64,
    spec: &TransientSpec,
) -> Result<MomentDecayRow> {
    let (n, a) = (p.n(), p.a_size());
    if a == 0 || a == n {
        return Err(Error::domain("moment checks need 0 < |A| < n"));
    }
    let beta = p.beta();
    let mu = beta.gap();
    let t = time_to_theta(n as f64, beta, -offset_c);
    if t < 0.0 {
        return Err(Error::domain(format!("t_(n,-C) = {t} is negative")));
    }
    let f = f_n_table(n, beta, &QuadratureSpec::default())?;
    let mag = mag_generator(p);
    let k0 = p.start_magnetization();
    let i0 = mag.space().mag_index(k0)?;
    let law = transient(&mag, &ProbVector::point_mass(mag.space(), i0)?, t, spec)?;
    let first_moment = expectation(&law, |i| f[i]);
    let second_moment = expectation(&law, |i| f[i] * f[i]);
    let f0 = f[i0];
    let first_main = (mu * offset_c).exp() / (n as f64).sqrt() * f0;
    let second_main = (2.0 * mu * offset_c).exp() / n as f64 * f0 * f0;

    let two = two_coord_generator(p);
    let sp = two.space();
    let j0 = sp.two_coord_index(p.start_state())?;
    let law2 = transient(&two, &ProbVector::point_mass(sp, j0)?, t, spec)?;
    let h: Vec<f64> = (0..sp.len())
        .map(|i| h_n_statistic(sp.two_coord_state(i), p))
        .collect::<Result<_>>()?;
    let h_mean = expectation(&law2, |i| h[i]);
    Ok(MomentDecayRow {
        n,
        a_size: a,
        t,
        first_moment,
        first_main,
        second_moment,
        second_main,
        h_mean,
    })
}

/// [`moment_decay_point`] over a ladder of sizes with `|A| = ⌈λn⌉`.
pub fn moment_decay_suite(
    beta: Beta<f64>,
    lambda: f64,
    ladder: &[u64],
    offset_c: f64,
    spec: &TransientSpec,
) -> Result<MomentDecayReport> {
    let rows = ladder
        .par_iter()
        .map(|&n| moment_decay_point(&ModelParams::with_fraction(n, beta, lambda)?, offset_c, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentDecayReport {
        beta: beta.value(),
        lambda,
        offset_c,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64, b: f64, a: u64) -> ModelParams<f64> {
        ModelParams::new(n, Beta::new(b).unwrap(), a).unwrap()
    }

    #[test]
    fn poisson_window_mass_and_tails() {
        for &x in &[0.3, 1.0, 7.5, 240.0, 5.0e4] {
            let (first, w) = poisson_window(x, 1e-12);
            let total: f64 = w.iter().sum();
            assert!((total - 1.0).abs() < 1e-14);
            // Compare a central weight with the exact log-pmf.
            let k = x.floor() as u64;
            let idx = (k - first) as usize;
            let ln_pmf = -x + k as f64 * x.ln() - ln_factorial(k);
            assert!((w[idx].ln() - ln_pmf).abs() < 1e-9, "x={x}");
        }
    }

    // Stirling series; direct sums lose ~1e-8 at k = 5e4.
    fn ln_factorial(k: u64) -> f64 {
        if k < 20 {
            return (1..=k).map(|i| (i as f64).ln()).sum();
        }
        let x = k as f64;
        let r = 1.0 / x;
        x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
            + r / 12.0 - r.powi(3) / 360.0 + r.powi(5) / 1260.0
    }

    #[test]
    fn zero_time_is_identity() {
        let p = params(10, 0.4, 10);
        let g = mag_generator(&p);
        let s = ProbVector::point_mass(g.space(), 3).unwrap();
        assert_eq!(transient(&g, &s, 0.0, &TransientSpec::default()).unwrap(), s);
        assert!(transient(&g, &s, -1.0, &TransientSpec::default()).is_err());
    }

    #[test]
    fn two_state_chain_closed_form() {
        // n = 1: states ±1, flip rate 1/2 each way at β = 0.
        let p = params(1, 0.0, 1);
        let g = mag_generator(&p);
        let s = ProbVector::point_mass(g.space(), 1).unwrap();
        for method in [TransientMethod::Uniformization, TransientMethod::RkOde] {
            let spec = TransientSpec::default().with_method(method);
            let out = transient(&g, &s, 0.8, &spec).unwrap();
            let stay = 0.5 * (1.0 + (-0.8f64).exp());
            assert!((out.values()[1] - stay).abs() < 1e-11, "{method:?}");
        }
    }

    #[test]
    fn long_time_reaches_stationarity() {
        let p = params(30, 0.6, 30);
        let g = mag_generator(&p);
        let s = ProbVector::point_mass(g.space(), 30).unwrap();
        let out = transient(&g, &s, 10.0 * 10.0 / 0.4, &TransientSpec::default()).unwrap();
        assert!(tv_distance(&out, &mag_stationary(&p)).unwrap() < 1e-8);
    }

    #[test]
    fn tv_basics() {
        let sp = StateSpace::Magnetization { n: 1 };
        let a = ProbVector::point_mass(sp, 0).unwrap();
        let b = ProbVector::point_mass(sp, 1).unwrap();
        let half = ProbVector::new(sp, vec![0.5, 0.5]).unwrap();
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(tv_distance(&a, &b).unwrap(), 1.0);
        assert_eq!(tv_distance(&half, &a).unwrap(), 0.5);
        let other = ProbVector::point_mass(StateSpace::Magnetization { n: 2 }, 0).unwrap();
        assert!(tv_distance(&a, &other).is_err());
    }

    #[test]
    fn expectation_basics() {
        let p = params(10, 0.0, 10);
        let pi = mag_stationary(&p);
        assert!((expectation(&pi, |_| 1.0) - 1.0).abs() < 1e-15);
        let f = f_n_table(10, p.beta(), &QuadratureSpec::default()).unwrap();
        assert!(expectation(&pi, |i| f[i]).abs() < 1e-16);
    }

    #[test]
    fn distance_curve_at_time_zero() {
        let p = params(64, 0.3, 64);
        let theta0 = -time_to_theta(64.0, p.beta(), 0.0);
        let curve = distance_curve(&p, &[theta0, 0.0], &TransientSpec::default()).unwrap();
        let pi = mag_stationary(&p);
        assert!((curve[0].1.t).abs() < 1e-12);
        assert!((curve[0].1.tv - (1.0 - pi.values()[64])).abs() < 1e-12);
        assert!(curve[1].1.tv < curve[0].1.tv);
        assert!(distance_curve(&p, &[theta0 - 1.0], &TransientSpec::default()).is_err());
    }

    #[test]
    fn reduction_check_capacity() {
        let p = params(11, 0.3, 4);
        assert!(matches!(
            reduction_equality_check(&p, 1.0, &TransientSpec::default()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn capacity_error_suggests_ode() {
        let p = params(50, 0.3, 50);
        let g = mag_generator(&p);
        let s = ProbVector::point_mass(g.space(), 0).unwrap();
        let spec = TransientSpec {
            max_terms: 100,
            ..TransientSpec::default()
        };
        let err = transient(&g, &s, 100.0, &spec).unwrap_err();
        assert!(err.to_string().contains("rk-ode"));
    }

    #[test]
    fn spec_validation() {
        let bad = TransientSpec {
            truncation_tol: 1e-3,
            ..TransientSpec::default()
        };
        assert!(bad.validate().is_err());
    }
}
