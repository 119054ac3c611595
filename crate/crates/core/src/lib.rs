//! Glauber dynamics of the Curie–Weiss model started from a partially
//! magnetized configuration: the limit profile of its total-variation
//! distance, exact finite-n distances, and Monte Carlo checks.
//!
//! The special functions, the Ornstein–Uhlenbeck limit and the chain
//! builders are generic over [`Real`]; transient solvers and simulation run
//! in `f64`.

pub mod chain;
pub mod error;
pub mod exact;
pub mod limit;
pub mod mc;
pub mod quadrature;
pub mod real;
pub mod scalar;

pub use chain::{
    ModelParams, ProbVector, SparseGenerator, StateSpace, TwoCoordState, MagState,
};
pub use error::{Error, Result};
pub use exact::{TVResult, TransientMethod, TransientSpec};
pub use limit::{Gaussian2, Mat2, OULimit, ProfileConstants};
pub use mc::{EmpiricalDist, SimSpec};
pub use quadrature::QuadratureSpec;
pub use real::Real;
pub use scalar::Beta;

pub type Beta64 = Beta<f64>;
pub type Params64 = ModelParams<f64>;
pub type ProbVec = ProbVector<f64>;
pub type Generator64 = SparseGenerator<f64>;
pub type Mat2f = Mat2<f64>;
pub type OULimit64 = OULimit<f64>;
pub type Gaussian2f = Gaussian2<f64>;
pub type Quadrature64 = QuadratureSpec<f64>;
