//! Special functions of the mean-field profile: the shift constant `c(β)`,
//! the odd scaling function `g` with its lattice version `f_n`, and the
//! standard normal CDF.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::real::Real;

/// Inverse temperature in the high-temperature range `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta<T>(T);

impl<T: Real> Beta<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value < T::one() {
            Ok(Beta(value))
        } else {
            Err(Error::domain(format!(
                "inverse temperature must lie in [0, 1), got {value}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// Spectral gap `1 - β` of the linearised drift.
    #[inline]
    pub fn gap(self) -> T {
        T::one() - self.0
    }
}

/// `x - tanh(x)` without cancellation for small `x`.
fn x_minus_tanh<T: Real>(x: T) -> T {
    if x.abs() < T::lit(0.05) {
        let x2 = x * x;
        // Taylor coefficients of x - tanh x, highest order first.
        let coeffs = [
            -21844.0 / 6_081_075.0,
            1382.0 / 155_925.0,
            -62.0 / 2835.0,
            17.0 / 315.0,
            -2.0 / 15.0,
            1.0 / 3.0,
        ];
        let poly = coeffs
            .iter()
            .fold(T::zero(), |acc, &c| acc * x2 + T::lit(c));
        poly * x2 * x
    } else {
        x - x.tanh()
    }
}

/// Bounded integrand `((βt - tanh βt)/t²) / (1 - tanh(βt)/t)` on `[0, 1]`.
///
/// Equals `1/t - μ/(t - tanh βt)`; it vanishes at `t = 0` like
/// `β³t / (3(1-β))`.
pub fn log_derivative_excess<T: Real>(t: T, beta: Beta<T>) -> T {
    let b = beta.value();
    if b == T::zero() {
        return T::zero();
    }
    if t.abs() < T::lit(1e-8) {
        return b * b * b * t / T::lit(3.0) / beta.gap();
    }
    let num = x_minus_tanh(b * t) / (t * t);
    let den = T::one() - (b * t).tanh() / t;
    num / den
}

/// `c(β) = -∫₀¹ B(t) dt` with `B` the bounded integrand above.
pub fn c_beta<T: Real>(beta: Beta<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    if beta.value() == T::zero() {
        return Ok(T::zero());
    }
    integrate(|t| log_derivative_excess(t, beta), T::zero(), T::one(), spec).map(|v| -v)
}

/// The odd scaling function: `g(x) = x · exp(∫_x^1 B(t) dt)` for `x > 0`,
/// which is `exp(-∫_x^1 μ/(t - tanh βt) dt)` rewritten without the `1/t`
/// singularity.
pub fn g<T: Real>(x: T, beta: Beta<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(x.abs() <= T::one()) {
        return Err(Error::domain(format!("g is defined on [-1, 1], got {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let ax = x.abs();
    let excess = integrate(|t| log_derivative_excess(t, beta), ax, T::one(), spec)?;
    let magnitude = ax * excess.exp();
    Ok(if x < T::zero() { -magnitude } else { magnitude })
}

fn check_magnetization(k: i64, n: u64) -> Result<()> {
    let n_i = n as i64;
    if n == 0 || k.abs() > n_i || (k + n_i).rem_euclid(2) != 0 {
        return Err(Error::domain(format!(
            "magnetization {k} is not a state of the n = {n} chain"
        )));
    }
    Ok(())
}

/// `f_n(k) = g(k/n)` on the magnetization lattice `{-n, -n+2, ..., n}`.
pub fn f_n<T: Real>(k: i64, n: u64, beta: Beta<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    check_magnetization(k, n)?;
    g(T::of(k) / T::of(n as i64), beta, spec)
}

/// `f_n` over every magnetization state in ascending order.
///
/// Integrates panel-by-panel from 1 downward and accumulates, so the whole
/// table costs about as much as a single `g` evaluation.
pub fn f_n_table<T: Real>(n: u64, beta: Beta<T>, spec: &QuadratureSpec<T>) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let n_i = n as i64;
    let nf = T::of(n_i);
    // Positive magnetizations, descending from n.
    let mut positive = Vec::new();
    let mut acc = T::zero();
    let mut upper = T::one();
    let mut k = n_i;
    while k > 0 {
        let x = T::of(k) / nf;
        if x < upper {
            acc = acc + integrate(|t| log_derivative_excess(t, beta), x, upper, spec)?;
            upper = x;
        }
        positive.push(x * acc.exp());
        k -= 2;
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    for v in &positive {
        out.push(-*v);
    }
    if n_i % 2 == 0 {
        out.push(T::zero());
    }
    for v in positive.iter().rev() {
        out.push(*v);
    }
    Ok(out)
}

fn erf_series<T: Real>(y: T) -> T {
    // erf(y) = 2/√π · e^{-y²} · Σ 2ⁿ y^{2n+1} / (1·3···(2n+1)); all terms positive.
    let y2 = y * y;
    let mut term = y;
    let mut sum = y;
    let mut k = 0i64;
    loop {
        term = term * T::lit(2.0) * y2 / T::of(2 * k + 3);
        sum = sum + term;
        k += 1;
        if term.abs() <= T::epsilon() * sum.abs() || k > 500 {
            break;
        }
    }
    T::lit(2.0) / T::PI().sqrt() * (-y2).exp() * sum
}

fn erfc_continued_fraction<T: Real>(y: T) -> T {
    // Modified Lentz on erfc(y) = e^{-y²}/√π · 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...)))).
    let tiny = T::min_positive_value().sqrt();
    let mut f = y;
    let mut c = y;
    let mut d = T::zero();
    for k in 1..2000 {
        let a = T::of(k) * T::lit(0.5);
        d = y + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = d.recip();
        c = y + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    (-y * y).exp() / (T::PI().sqrt() * f)
}

/// Complementary error function.
pub fn erfc<T: Real>(y: T) -> T {
    let split = T::lit(2.5);
    if y >= split {
        erfc_continued_fraction(y)
    } else if y <= -split {
        T::lit(2.0) - erfc_continued_fraction(-y)
    } else {
        T::one() - erf_series(y)
    }
}

/// Standard normal CDF `Φ(x) = erfc(-x/√2) / 2`.
pub fn std_normal_cdf<T: Real>(x: T) -> T {
    if x == T::zero() {
        return T::lit(0.5);
    }
    erfc(-x / T::SQRT_2()) * T::lit(0.5)
}
