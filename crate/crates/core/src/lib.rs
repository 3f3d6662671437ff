//! Linear ODE systems of order `r` with generic inhomogeneous boundary
//! conditions:
//!
//! ```text
//! y^{(r)}(t) + Σ_{j<r} A_j(t) y^{(j)}(t) = f(t),  t ∈ [a, b],
//! By = Σ_{k<n+r} α_k y^{(k)}(a) + ∫_a^b Φ(t) y^{(n+r)}(t) dt = c.
//! ```
//!
//! The central object is the `l × mr` characteristic matrix
//! `M = [BY_0 | … | BY_{r-1}]` built from the fundamental solutions
//! `Y_k^{(j)}(a) = δ_{kj} I_m`. Its kernel and cokernel dimensions are the
//! Fredholm numbers of the problem, and solvability reduces to the linear
//! system `M ξ = c - B y_p`.
//!
//! Everything is generic over the real scalar (`f32` or `f64`); the aliases
//! below fix `f64`.
//!
//! ```
//! use bvp_core::{io, charmat, odeint::Grid};
//!
//! let problem: bvp_core::BvProblem64 = io::parse_problem(r#"{
//!     "interval": [0, 1],
//!     "dims": {"m": 1, "r": 1, "n": 0, "l": 1, "p": 2},
//!     "coefficients": [{"order": 0, "kind": "constant", "data": 1}],
//!     "rhs": {"kind": "constant", "data": [0]},
//!     "boundary": {"alphas": [1], "phi": null},
//!     "c": [1]
//! }"#).unwrap();
//! let grid = Grid::new(problem.interval, 100).unwrap();
//! let m = charmat::characteristic_matrix(&problem, &grid, None).unwrap();
//! assert!(m.is_invertible());
//! ```

// `!(a < b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::large_enum_variant)]

pub mod charmat;
pub mod continuity;
pub mod csv;
pub mod error;
pub mod io;
pub mod linalg;
pub mod odeint;
pub mod oracles;
pub mod problem;
pub mod scalar;
pub mod selftest;
pub mod solver;

pub use charmat::{CharacteristicMatrix, FredholmNumbers};
pub use continuity::{ContinuityReport, FamilyLaw, Perturbations, ProblemFamily, Schedule};
pub use error::{Error, Result};
pub use odeint::{Grid, Trajectory};
pub use problem::{BoundaryOperator, BvProblem, Exponent, Interval, MatrixFunction, ProblemDims};
pub use scalar::Real;
pub use solver::{SolveOptions, SolveReport, SolveStatus};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type BvProblem64 = BvProblem<f64>;
pub type BvProblem32 = BvProblem<f32>;
pub type Grid64 = Grid<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type CharacteristicMatrix64 = CharacteristicMatrix<f64>;
pub type SolveReport64 = SolveReport<f64>;
pub type ProblemFamily64 = ProblemFamily<f64>;
pub type ContinuityReport64 = ContinuityReport<f64>;
