use crate::error::{Error, Result};
use crate::real::Real;

/// Magnetization `k ∈ {-n, -n+2, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MagState {
    pub k: i64,
}

/// Spin sums `u` over the plus-set `A` and `v` over its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoCoordState {
    pub u: i64,
    pub v: i64,
}

/// Indexed enumeration of a chain's states.
///
/// Magnetizations ascend; two-coordinate states are u-major
/// (`index = iu·(n-|A|+1) + iv`); full configurations are bit masks with
/// bit `i` set when spin `i` is `+1`, sites `0..|A|` forming `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateSpace {
    Magnetization { n: u64 },
    TwoCoord { a: u64, b: u64 },
    Full { n: u32 },
}

impl StateSpace {
    pub fn len(&self) -> usize {
        match *self {
            StateSpace::Magnetization { n } => n as usize + 1,
            StateSpace::TwoCoord { a, b } => (a as usize + 1) * (b as usize + 1),
            StateSpace::Full { n } => 1usize << n,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mag_index(&self, k: i64) -> Result<usize> {
        match *self {
            StateSpace::Magnetization { n } => lattice_index(k, n)
                .ok_or_else(|| Error::domain(format!("{k} is not a magnetization of n = {n}"))),
            _ => Err(Error::domain("not a magnetization space")),
        }
    }

    pub fn mag_state(&self, idx: usize) -> i64 {
        match *self {
            StateSpace::Magnetization { n } => -(n as i64) + 2 * idx as i64,
            _ => panic!("not a magnetization space"),
        }
    }

    pub fn two_coord_index(&self, s: TwoCoordState) -> Result<usize> {
        match *self {
            StateSpace::TwoCoord { a, b } => match (lattice_index(s.u, a), lattice_index(s.v, b)) {
                (Some(iu), Some(iv)) => Ok(iu * (b as usize + 1) + iv),
                _ => Err(Error::domain(format!(
                    "({}, {}) is not a two-coordinate state for |A| = {a}, n-|A| = {b}",
                    s.u, s.v
                ))),
            },
            _ => Err(Error::domain("not a two-coordinate space")),
        }
    }

    pub fn two_coord_state(&self, idx: usize) -> TwoCoordState {
        match *self {
            StateSpace::TwoCoord { a, b } => {
                let w = b as usize + 1;
                TwoCoordState {
                    u: -(a as i64) + 2 * (idx / w) as i64,
                    v: -(b as i64) + 2 * (idx % w) as i64,
                }
            }
            _ => panic!("not a two-coordinate space"),
        }
    }

    /// Magnetization of the state at `idx`, for any of the three spaces.
    pub fn magnetization(&self, idx: usize) -> i64 {
        match *self {
            StateSpace::Magnetization { .. } => self.mag_state(idx),
            StateSpace::TwoCoord { .. } => {
                let s = self.two_coord_state(idx);
                s.u + s.v
            }
            StateSpace::Full { n } => 2 * (idx as u64).count_ones() as i64 - n as i64,
        }
    }
}

/// Index of `x` in `{-m, -m+2, ..., m}`.
pub(crate) fn lattice_index(x: i64, m: u64) -> Option<usize> {
    let m = m as i64;
    if x.abs() > m || (x + m).rem_euclid(2) != 0 {
        None
    } else {
        Some(((x + m) / 2) as usize)
    }
}

/// Probability vector over an indexed state space.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector<T> {
    space: StateSpace,
    values: Vec<T>,
}

impl<T: Real> ProbVector<T> {
    /// Validates non-negativity and unit mass (within `1e-12`).
    pub fn new(space: StateSpace, values: Vec<T>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::domain(format!(
                "vector length {} does not match state space size {}",
                values.len(),
                space.len()
            )));
        }
        let mut total = T::zero();
        for &v in &values {
            if !(v >= T::zero()) {
                return Err(Error::domain(format!("negative or NaN probability {v}")));
            }
            total = total + v;
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::of(values.len() as i64));
        if (total - T::one()).abs() > tol {
            return Err(Error::domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { space, values })
    }

    /// Builds from non-negative weights, rescaling to unit mass.
    pub fn normalized(space: StateSpace, mut values: Vec<T>) -> Result<Self> {
        let total = values.iter().fold(T::zero(), |acc, &v| acc + v);
        if !(total > T::zero()) || !total.is_finite() {
            return Err(Error::domain("weights have no positive finite mass"));
        }
        for v in values.iter_mut() {
            *v = *v / total;
        }
        Self::new(space, values)
    }

    pub fn point_mass(space: StateSpace, idx: usize) -> Result<Self> {
        if idx >= space.len() {
            return Err(Error::domain(format!("state index {idx} out of range")));
        }
        let mut values = vec![T::zero(); space.len()];
        values[idx] = T::one();
        Ok(Self { space, values })
    }

    pub fn space(&self) -> StateSpace {
        self.space
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Law of the magnetization under this distribution.
    pub fn magnetization_marginal(&self) -> ProbVector<T> {
        let n = match self.space {
            StateSpace::Magnetization { .. } => return self.clone(),
            StateSpace::TwoCoord { a, b } => a + b,
            StateSpace::Full { n } => n as u64,
        };
        let mut out = vec![T::zero(); n as usize + 1];
        for (i, &p) in self.values.iter().enumerate() {
            let k = self.space.magnetization(i);
            let j = ((k + n as i64) / 2) as usize;
            out[j] = out[j] + p;
        }
        ProbVector {
            space: StateSpace::Magnetization { n },
            values: out,
        }
    }
}
