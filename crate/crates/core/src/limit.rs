//! Two-dimensional Ornstein–Uhlenbeck limit of the rescaled two-coordinate
//! chain, Gaussian divergences, and the limit profiles `Ψ(λ, θ)`, `Ψ(θ)`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::real::Real;
use crate::scalar::{c_beta, g, std_normal_cdf, Beta};

/// Dense 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

impl<T: Real> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn identity() -> Self {
        Self::diag(T::one(), T::one())
    }

    pub fn diag(a: T, d: T) -> Self {
        Self::new(a, T::zero(), T::zero(), d)
    }

    /// Outer product `x yᵀ`.
    pub fn outer(x: [T; 2], y: [T; 2]) -> Self {
        Self::new(x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::new(
            f(self.m[0][0]),
            f(self.m[0][1]),
            f(self.m[1][0]),
            f(self.m[1][1]),
        )
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Inverse, refusing determinants below `1e-300` in magnitude.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !(det.abs() >= T::lit(1e-300)) || det.abs() < T::min_positive_value() {
            return Err(Error::domain(format!("singular 2x2 matrix (det = {det})")));
        }
        Ok(Self::new(self.m[1][1], -self.m[0][1], -self.m[1][0], self.m[0][0]).scale(det.recip()))
    }

    pub fn apply(&self, x: [T; 2]) -> [T; 2] {
        [
            self.m[0][0] * x[0] + self.m[0][1] * x[1],
            self.m[1][0] * x[0] + self.m[1][1] * x[1],
        ]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.m
            .iter()
            .flatten()
            .fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    /// Spectral norm (largest singular value).
    pub fn op_norm(&self) -> T {
        let s = self.transpose() * *self;
        let tr = s.trace();
        let disc = (tr * tr - T::lit(4.0) * s.det()).max(T::zero());
        ((tr + disc.sqrt()) * T::lit(0.5)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|x| x.is_finite())
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

fn quad_form<T: Real>(m: &Mat2<T>, x: [T; 2]) -> T {
    let y = m.apply(x);
    x[0] * y[0] + x[1] * y[1]
}

/// Drift and noise matrices of the limiting diffusion `dD = A D dt + B dW`
/// for a start with plus-fraction `λ ∈ [1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OULimit<T> {
    lambda: T,
    beta: Beta<T>,
    drift: Mat2<T>,
    noise: Mat2<T>,
}

impl<T: Real> OULimit<T> {
    pub fn new(lambda: T, beta: Beta<T>) -> Result<Self> {
        if !(lambda >= T::lit(0.5) && lambda <= T::one()) {
            return Err(Error::domain(format!(
                "plus-fraction must lie in [1/2, 1], got {lambda}; reflect the start by the global spin flip first"
            )));
        }
        let b = beta.value();
        let mu = T::one() - lambda;
        let drift = Mat2::new(
            -T::one() + lambda * b,
            lambda * b,
            mu * b,
            -T::one() + mu * b,
        );
        let two = T::lit(2.0);
        let noise = Mat2::diag((two * lambda).sqrt(), (two * mu).sqrt());
        Ok(Self {
            lambda,
            beta,
            drift,
            noise,
        })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn beta(&self) -> Beta<T> {
        self.beta
    }

    /// `A`.
    pub fn drift(&self) -> Mat2<T> {
        self.drift
    }

    /// `B`.
    pub fn noise(&self) -> Mat2<T> {
        self.noise
    }

    /// `B Bᵀ = diag(2λ, 2(1-λ))`.
    pub fn noise_covariance(&self) -> Mat2<T> {
        self.noise * self.noise.transpose()
    }

    /// Slow eigenvector `(λ, 1-λ)` of `A`, eigenvalue `-(1-β)`.
    pub fn slow_direction(&self) -> [T; 2] {
        [self.lambda, T::one() - self.lambda]
    }

    /// Rank-one spectral projector onto the slow direction along `(1,1)ᵀ`'s
    /// annihilator; `A = -I + β L` and `L² = L`.
    fn slow_projector(&self) -> Mat2<T> {
        Mat2::outer(self.slow_direction(), [T::one(), T::one()])
    }

    /// `e^{tA} = e^{-t} (I + (e^{βt} - 1) L)`: eigenvalue `-1` on `ker L`,
    /// `-(1-β)` on the slow direction. Reduces to `e^{-t} I` at β = 0.
    pub fn matexp(&self, t: T) -> Result<Mat2<T>> {
        if !(t >= T::zero()) {
            return Err(Error::domain(format!("time must be non-negative, got {t}")));
        }
        let b = self.beta.value();
        let decay = (-t).exp();
        if b == T::zero() {
            return Ok(Mat2::identity().scale(decay));
        }
        Ok((Mat2::identity() + self.slow_projector().scale((b * t).exp_m1())).scale(decay))
    }

    /// `Σ_t = ∫₀ᵗ e^{sA} B Bᵀ e^{sAᵀ} ds` in closed form:
    /// `Σ_t = I₀(t)·BBᵀ + [(1 - e^{-2(1-β)t})/(1-β) - 2 I₀(t)]·v vᵀ`
    /// with `I₀(t) = (1 - e^{-2t})/2` and `v = (λ, 1-λ)`.
    pub fn sigma_t(&self, t: T) -> Result<Mat2<T>> {
        if !(t >= T::zero()) {
            return Err(Error::domain(format!("time must be non-negative, got {t}")));
        }
        let two = T::lit(2.0);
        let gap = self.beta.gap();
        let i0 = -(-two * t).exp_m1() / two;
        let slow = -(-two * gap * t).exp_m1() / gap;
        let v = self.slow_direction();
        Ok(self.noise_covariance().scale(i0) + Mat2::outer(v, v).scale(slow - two * i0))
    }

    /// Stationary covariance `Σ = lim Σ_t`.
    pub fn sigma_infinity(&self) -> Mat2<T> {
        let l = self.lambda;
        let b = self.beta.value();
        let one = T::one();
        let gap = self.beta.gap();
        let off = l * b * (one - l) / gap;
        Mat2::new(
            l * (one - (one - l) * b) / gap,
            off,
            off,
            (one - l) * (one - l * b) / gap,
        )
    }

    /// `Σ⁻¹ = [[1/λ - β, -β], [-β, 1/(1-λ) - β]]`; `Σ` is singular at λ = 1.
    pub fn sigma_infinity_inverse(&self) -> Result<Mat2<T>> {
        let l = self.lambda;
        if l >= T::one() {
            return Err(Error::domain(
                "stationary covariance is singular when the start is all-plus",
            ));
        }
        let b = self.beta.value();
        Ok(Mat2::new(l.recip() - b, -b, -b, (T::one() - l).recip() - b))
    }

    /// Max-norm of `AΣ + ΣAᵀ + BBᵀ`.
    pub fn lyapunov_residual(&self) -> T {
        lyapunov_residual_of(self, &self.sigma_infinity())
    }

    /// `μ_λ(θ) = g(2λ-1) e^{-(1-β)θ + c(β)} (λ, 1-λ)` from precomputed
    /// `c(β)` and `g(2λ-1)`.
    pub fn mean_mu(&self, theta: T, c_beta_val: T, g_val: T) -> [T; 2] {
        let amp = g_val * (-self.beta.gap() * theta + c_beta_val).exp();
        let v = self.slow_direction();
        [amp * v[0], amp * v[1]]
    }

    /// The same mean obtained by propagating the concentrated position
    /// `α(λ,C)·(λ, 1-λ)`, `α = e^{(1-β)C + c(β)} g(2λ-1)`, for time `C + θ`.
    pub fn mean_by_propagation(&self, theta: T, offset_c: T, c_beta_val: T, g_val: T) -> Result<[T; 2]> {
        let alpha = (self.beta.gap() * offset_c + c_beta_val).exp() * g_val;
        let v = self.slow_direction();
        Ok(self.matexp(offset_c + theta)?.apply([alpha * v[0], alpha * v[1]]))
    }
}

/// Max-norm of `AΣ + ΣAᵀ + BBᵀ` for an arbitrary candidate `Σ`.
pub fn lyapunov_residual_of<T: Real>(ou: &OULimit<T>, sigma: &Mat2<T>) -> T {
    let a = ou.drift();
    (a * *sigma + *sigma * a.transpose() + ou.noise_covariance()).max_abs()
}

/// Bivariate normal law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian2<T> {
    pub mean: [T; 2],
    pub cov: Mat2<T>,
}

impl<T: Real> Gaussian2<T> {
    pub fn new(mean: [T; 2], cov: Mat2<T>) -> Result<Self> {
        let scale = cov.max_abs().max(T::min_positive_value());
        let asym = (cov.m[0][1] - cov.m[1][0]).abs();
        if asym > T::lit(1e3) * T::epsilon() * scale {
            return Err(Error::domain("covariance must be symmetric"));
        }
        let tol = T::lit(1e3) * T::epsilon() * scale;
        if cov.m[0][0] < -tol || cov.m[1][1] < -tol || cov.det() < -tol * scale {
            return Err(Error::domain("covariance must be positive semidefinite"));
        }
        Ok(Self { mean, cov })
    }
}

/// `D_KL(p ‖ q) = ½(tr(Σ_q⁻¹Σ_p) - 2 + δᵀΣ_q⁻¹δ - log(det Σ_p / det Σ_q))`.
pub fn gaussian_kl<T: Real>(p: &Gaussian2<T>, q: &Gaussian2<T>) -> Result<T> {
    let q_inv = q.cov.inverse()?;
    let det_p = p.cov.det();
    if !(det_p > T::zero()) {
        return Err(Error::domain("KL needs a non-degenerate first covariance"));
    }
    let delta = [q.mean[0] - p.mean[0], q.mean[1] - p.mean[1]];
    let two = T::lit(2.0);
    let kl = ((q_inv * p.cov).trace() - two + quad_form(&q_inv, delta) - (det_p / q.cov.det()).ln())
        / two;
    Ok(kl.max(T::zero()))
}

/// Upper bound `√(KL/2)` on total variation.
pub fn pinsker_bound<T: Real>(kl: T) -> T {
    (kl / T::lit(2.0)).sqrt()
}

/// `‖N(μ, Σ) - N(0, Σ)‖_TV = 2Φ(√(μᵀΣ⁻¹μ)/2) - 1`.
pub fn gaussian_tv_same_cov<T: Real>(mu: [T; 2], cov: &Mat2<T>) -> Result<T> {
    let inv = cov.inverse()?;
    Ok(tv_from_mahalanobis(quad_form(&inv, mu).max(T::zero())))
}

fn tv_from_mahalanobis<T: Real>(m2: T) -> T {
    T::lit(2.0) * std_normal_cdf(m2.sqrt() / T::lit(2.0)) - T::one()
}

/// Precomputed `c(β)` and `g(2λ-1)` for evaluating profiles along a θ grid.
#[derive(Debug, Clone, Copy)]
pub struct ProfileConstants<T> {
    pub lambda: T,
    pub beta: Beta<T>,
    pub c_beta: T,
    pub g_start: T,
}

impl<T: Real> ProfileConstants<T> {
    pub fn new(lambda: T, beta: Beta<T>, spec: &QuadratureSpec<T>) -> Result<Self> {
        if !(lambda >= T::lit(0.5) && lambda <= T::one()) {
            return Err(Error::domain(format!(
                "plus-fraction must lie in [1/2, 1], got {lambda}"
            )));
        }
        Ok(Self {
            lambda,
            beta,
            c_beta: c_beta(beta, spec)?,
            g_start: g(T::lit(2.0) * lambda - T::one(), beta, spec)?,
        })
    }

    /// Mean `g(2λ-1) e^{-(1-β)θ + c(β)}` of the one-dimensional reduction.
    pub fn shift(&self, theta: T) -> T {
        self.g_start * (-self.beta.gap() * theta + self.c_beta).exp()
    }

    /// `Ψ(λ, θ) = 2Φ(g(2λ-1) e^{-(1-β)θ + c(β)} √(1-β) / 2) - 1`.
    pub fn psi(&self, theta: T) -> T {
        let arg = self.shift(theta) * self.beta.gap().sqrt() / T::lit(2.0);
        T::lit(2.0) * std_normal_cdf(arg) - T::one()
    }

    /// Threshold `κ_θ`, half the shifted mean, of the distinguishing half-space.
    pub fn kappa(&self, theta: T) -> T {
        self.shift(theta) / T::lit(2.0)
    }
}

/// `Ψ(λ, θ)` with default quadrature tolerances.
pub fn psi_lambda<T: Real>(lambda: T, beta: Beta<T>, theta: T) -> Result<T> {
    Ok(ProfileConstants::new(lambda, beta, &QuadratureSpec::default())?.psi(theta))
}

/// The limit profile `Ψ(θ) = Ψ(1, θ)`.
pub fn psi_profile<T: Real>(beta: Beta<T>, theta: T) -> Result<T> {
    psi_lambda(T::one(), beta, theta)
}
