use super::space::{StateSpace, TwoCoordState};
use super::ModelParams;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::scalar::Beta;

/// Largest system for which the full `2ⁿ`-state generator is built.
pub const MAX_FULL_SITES: u64 = 14;

/// Continuous-time generator stored as outgoing-rate rows (CSR).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseGenerator<T> {
    space: StateSpace,
    row_ptr: Vec<usize>,
    targets: Vec<usize>,
    rates: Vec<T>,
    exit_rate: Vec<T>,
}

impl<T: Real> SparseGenerator<T> {
    fn build(space: StateSpace, mut row: impl FnMut(usize, &mut Vec<(usize, T)>)) -> Self {
        let len = space.len();
        let mut row_ptr = Vec::with_capacity(len + 1);
        let mut targets = Vec::new();
        let mut rates = Vec::new();
        let mut exit_rate = Vec::with_capacity(len);
        let mut buf = Vec::new();
        row_ptr.push(0);
        for i in 0..len {
            buf.clear();
            row(i, &mut buf);
            let mut exit = T::zero();
            for &(j, r) in &buf {
                debug_assert!(r >= T::zero());
                if r > T::zero() {
                    targets.push(j);
                    rates.push(r);
                    exit = exit + r;
                }
            }
            exit_rate.push(exit);
            row_ptr.push(targets.len());
        }
        Self {
            space,
            row_ptr,
            targets,
            rates,
            exit_rate,
        }
    }

    pub fn space(&self) -> StateSpace {
        self.space
    }

    pub fn len(&self) -> usize {
        self.exit_rate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exit_rate.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// Outgoing `(target, rate)` pairs of state `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.targets[span.clone()]
            .iter()
            .copied()
            .zip(self.rates[span].iter().copied())
    }

    /// Rate of the jump `from → to` (zero when absent).
    pub fn rate(&self, from: usize, to: usize) -> T {
        self.row(from)
            .find(|&(j, _)| j == to)
            .map_or(T::zero(), |(_, r)| r)
    }

    pub fn exit_rate(&self, i: usize) -> T {
        self.exit_rate[i]
    }

    pub fn exit_rates(&self) -> &[T] {
        &self.exit_rate
    }

    pub fn max_exit_rate(&self) -> T {
        self.exit_rate
            .iter()
            .fold(T::zero(), |acc, &r| acc.max(r))
    }

    /// Row vector times generator, `(pQ)_j`.
    pub fn apply_left(&self, p: &[T]) -> Vec<T> {
        let mut out: Vec<T> = p
            .iter()
            .zip(&self.exit_rate)
            .map(|(&x, &e)| -x * e)
            .collect();
        for i in 0..self.len() {
            let pi = p[i];
            if pi == T::zero() {
                continue;
            }
            for (j, r) in self.row(i) {
                out[j] = out[j] + pi * r;
            }
        }
        out
    }

    /// Incoming `(source, rate)` lists, i.e. the transposed rows.
    pub fn incoming(&self) -> (Vec<usize>, Vec<usize>, Vec<T>) {
        let len = self.len();
        let mut counts = vec![0usize; len + 1];
        for &j in &self.targets {
            counts[j + 1] += 1;
        }
        for i in 0..len {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut sources = vec![0usize; self.targets.len()];
        let mut rates = vec![T::zero(); self.targets.len()];
        for i in 0..len {
            for (j, r) in self.row(i) {
                sources[fill[j]] = i;
                rates[fill[j]] = r;
                fill[j] += 1;
            }
        }
        (counts, sources, rates)
    }

    /// Checks non-negative rates, no self-loops, and exit rates equal to the
    /// row sums.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.len() {
            let mut sum = T::zero();
            for (j, r) in self.row(i) {
                if j == i || !(r >= T::zero()) || j >= self.len() {
                    return Err(Error::domain(format!("invalid edge {i} -> {j} with rate {r}")));
                }
                sum = sum + r;
            }
            let e = self.exit_rate[i];
            if (sum - e).abs() > T::lit(1e3) * T::epsilon() * e.max(T::one()) {
                return Err(Error::domain(format!(
                    "exit rate {e} of state {i} differs from row sum {sum}"
                )));
            }
        }
        Ok(())
    }

    /// Copy with the rate `from → to` multiplied by `factor`; used to inject
    /// faults when exercising the verification suite.
    pub fn with_scaled_rate(&self, from: usize, to: usize, factor: T) -> Result<Self> {
        let mut out = self.clone();
        let span = out.row_ptr[from]..out.row_ptr[from + 1];
        let pos = span
            .clone()
            .find(|&e| out.targets[e] == to)
            .ok_or_else(|| Error::domain(format!("no edge {from} -> {to}")))?;
        let old = out.rates[pos];
        out.rates[pos] = old * factor;
        out.exit_rate[from] = out.exit_rate[from] - old + out.rates[pos];
        Ok(out)
    }
}

// 1 ± tanh(x) written as 2/(1 + e^{∓2x}).
fn one_plus_tanh<T: Real>(x: T) -> T {
    T::lit(2.0) / (T::one() + (-T::lit(2.0) * x).exp())
}

fn one_minus_tanh<T: Real>(x: T) -> T {
    T::lit(2.0) / (T::one() + (T::lit(2.0) * x).exp())
}

/// `q_n(k, k+2) = ((n-k)/4)(1 + tanh(β(k+1)/n))`.
pub fn mag_up_rate<T: Real>(k: i64, n: u64, beta: Beta<T>) -> T {
    let nf = T::of(n as i64);
    T::of(n as i64 - k) / T::lit(4.0) * one_plus_tanh(beta.value() * T::of(k + 1) / nf)
}

/// `q_n(k, k-2) = ((n+k)/4)(1 - tanh(β(k-1)/n))`.
pub fn mag_down_rate<T: Real>(k: i64, n: u64, beta: Beta<T>) -> T {
    let nf = T::of(n as i64);
    T::of(n as i64 + k) / T::lit(4.0) * one_minus_tanh(beta.value() * T::of(k - 1) / nf)
}

/// Rates of `(u,v)` to `(u+2,v)`, `(u-2,v)`, `(u,v+2)`, `(u,v-2)`.
pub fn two_coord_rates<T: Real>(s: TwoCoordState, p: &ModelParams<T>) -> [T; 4] {
    let a = p.a_size() as i64;
    let b = p.complement_size() as i64;
    let nf = T::of(p.n() as i64);
    let beta = p.beta().value();
    let k = s.u + s.v;
    let up = one_plus_tanh(beta * T::of(k + 1) / nf) / T::lit(4.0);
    let down = one_minus_tanh(beta * T::of(k - 1) / nf) / T::lit(4.0);
    [
        T::of(a - s.u) * up,
        T::of(a + s.u) * down,
        T::of(b - s.v) * up,
        T::of(b + s.v) * down,
    ]
}

/// Birth–death generator of the magnetization chain on `n + 1` states.
pub fn mag_generator<T: Real>(p: &ModelParams<T>) -> SparseGenerator<T> {
    let n = p.n();
    let space = StateSpace::Magnetization { n };
    let beta = p.beta();
    SparseGenerator::build(space, |i, row| {
        let k = space.mag_state(i);
        if k < n as i64 {
            row.push((i + 1, mag_up_rate(k, n, beta)));
        }
        if k > -(n as i64) {
            row.push((i - 1, mag_down_rate(k, n, beta)));
        }
    })
}

/// Generator of `(U, V)` on the `(|A|+1)(n-|A|+1)` two-coordinate states.
pub fn two_coord_generator<T: Real>(p: &ModelParams<T>) -> SparseGenerator<T> {
    let (a, b) = (p.a_size(), p.complement_size());
    let space = StateSpace::TwoCoord { a, b };
    let w = b as usize + 1;
    SparseGenerator::build(space, |i, row| {
        let s = space.two_coord_state(i);
        let [uu, ud, vu, vd] = two_coord_rates(s, p);
        if s.u < a as i64 {
            row.push((i + w, uu));
        }
        if s.u > -(a as i64) {
            row.push((i - w, ud));
        }
        if s.v < b as i64 {
            row.push((i + 1, vu));
        }
        if s.v > -(b as i64) {
            row.push((i - 1, vd));
        }
    })
}

/// Single-site heat-bath generator on all `2ⁿ` configurations:
/// flipping site `i` of `σ` happens at rate
/// `1 / (1 + exp(β (m(σ)² - m(σⁱ)²) / (2n)))`.
pub fn full_glauber_generator<T: Real>(p: &ModelParams<T>) -> Result<SparseGenerator<T>> {
    let n = p.n();
    if n > MAX_FULL_SITES {
        return Err(Error::Capacity {
            what: "full configuration space sites".into(),
            requested: n,
            limit: MAX_FULL_SITES,
            hint: String::new(),
        });
    }
    let space = StateSpace::Full { n: n as u32 };
    let beta = p.beta().value();
    let two_n = T::of(2 * n as i64);
    Ok(SparseGenerator::build(space, |s, row| {
        let m = space.magnetization(s);
        for i in 0..n {
            let t = s ^ (1usize << i);
            let m2 = space.magnetization(t);
            let expo = beta * T::of(m * m - m2 * m2) / two_n;
            row.push((t, (T::one() + expo.exp()).recip()));
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64, b: f64, a: u64) -> ModelParams<f64> {
        ModelParams::new(n, Beta::new(b).unwrap(), a).unwrap()
    }

    #[test]
    fn mag_rates_small_cases() {
        let g = mag_generator(&params(2, 0.0, 2));
        // states -2, 0, 2
        assert_eq!(g.rate(0, 1), 1.0);
        assert_eq!(g.rate(1, 2), 0.5);
        assert_eq!(g.rate(1, 0), 0.5);
        assert_eq!(g.rate(2, 1), 1.0);
        let g = mag_generator(&params(4, 0.5, 4));
        let expected = 1.0 + 0.125f64.tanh();
        assert!((g.rate(2, 3) - expected).abs() < 1e-15);
        g.validate().unwrap();
    }

    #[test]
    fn boundary_rates_vanish_only_at_ends() {
        let n = 9;
        for &b in &[0.0, 0.7] {
            let beta = Beta::new(b).unwrap();
            let mut k = -(n as i64);
            while k <= n as i64 {
                assert_eq!(mag_up_rate(k, n, beta) == 0.0, k == n as i64);
                assert_eq!(mag_down_rate(k, n, beta) == 0.0, k == -(n as i64));
                k += 2;
            }
        }
    }

    #[test]
    fn two_coord_rate_example() {
        let p = params(4, 0.5, 2);
        let g = two_coord_generator(&p);
        let sp = g.space();
        let from = sp.two_coord_index(TwoCoordState { u: 0, v: 0 }).unwrap();
        let to = sp.two_coord_index(TwoCoordState { u: 2, v: 0 }).unwrap();
        assert!((g.rate(from, to) - 0.5 * (1.0 + 0.125f64.tanh())).abs() < 1e-15);
        g.validate().unwrap();
    }

    #[test]
    fn two_coord_marginal_matches_mag_rates() {
        for &(n, a) in &[(7u64, 3u64), (10, 6), (6, 0)] {
            let p = params(n, 0.8, a);
            let g = two_coord_generator(&p);
            let sp = g.space();
            for i in 0..g.len() {
                let s = sp.two_coord_state(i);
                let k = s.u + s.v;
                let r = two_coord_rates(s, &p);
                let up = mag_up_rate(k, n, p.beta());
                let down = mag_down_rate(k, n, p.beta());
                assert!((r[0] + r[2] - up).abs() < 1e-13 * up.max(1.0));
                assert!((r[1] + r[3] - down).abs() < 1e-13 * down.max(1.0));
            }
        }
    }

    #[test]
    fn frozen_complement_equals_mag_generator() {
        let p = params(9, 0.6, 9);
        let g2 = two_coord_generator(&p);
        let g1 = mag_generator(&p);
        assert_eq!(g2.len(), g1.len());
        for i in 0..g1.len() {
            let r1: Vec<_> = g1.row(i).collect();
            let mut r2: Vec<_> = g2.row(i).collect();
            r2.sort_by_key(|x| std::cmp::Reverse(x.0));
            let mut r1s = r1.clone();
            r1s.sort_by_key(|x| std::cmp::Reverse(x.0));
            assert_eq!(r1s, r2);
        }
    }

    #[test]
    fn full_generator_rates() {
        let g = full_glauber_generator(&params(5, 0.0, 2)).unwrap();
        assert_eq!(g.len(), 32);
        for i in 0..g.len() {
            assert!(g.row(i).all(|(_, r)| r == 0.5));
        }
        let g = full_glauber_generator(&params(2, 0.5, 2)).unwrap();
        // (+,+) is 0b11; flipping site 1 gives 0b01 = (+,-).
        assert!((g.rate(0b11, 0b01) - 1.0 / (1.0 + 1.0f64.exp().powf(0.5))).abs() < 1e-15);
        assert!(full_glauber_generator(&params(15, 0.5, 2)).is_err());
    }

    #[test]
    fn scaled_rate_hook() {
        let g = mag_generator(&params(6, 0.3, 6));
        let h = g.with_scaled_rate(2, 3, 1.5).unwrap();
        assert!((h.rate(2, 3) - 1.5 * g.rate(2, 3)).abs() < 1e-15);
        h.validate().unwrap();
        assert!(g.with_scaled_rate(2, 5, 2.0).is_err());
    }

    #[test]
    fn incoming_is_transpose() {
        let g = two_coord_generator(&params(6, 0.4, 4));
        let (ptr, src, rates) = g.incoming();
        for j in 0..g.len() {
            for e in ptr[j]..ptr[j + 1] {
                assert_eq!(g.rate(src[e], j), rates[e]);
            }
        }
        assert_eq!(src.len(), g.edge_count());
    }
}
