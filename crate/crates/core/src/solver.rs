//! Solution of the boundary-value problem by the fundamental-system
//! reduction.
//!
//! Every solution is `y = y_p + Σ_k Y_k ξ_k`, where `y_p` solves the
//! inhomogeneous equation with zero initial jet. The boundary condition then
//! reads `M ξ = c - B y_p` with `M` the characteristic matrix, so the
//! problem is solvable iff the right-hand side lies in the range of `M`.

use num_complex::Complex;

use crate::charmat::{assemble, CharacteristicMatrix, FredholmNumbers};
use crate::error::{Error, Result};
use crate::linalg::min_norm_solve;
use crate::odeint::{extend_derivatives, integrate, Grid, Trajectory};
use crate::problem::{sobolev_norm, BvProblem};
use crate::scalar::{CMatrix, CVector, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Unique,
    SolvableNonUnique,
    NoSolution,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Unique => "unique",
            SolveStatus::SolvableNonUnique => "solvable_non_unique",
            SolveStatus::NoSolution => "no_solution",
        }
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T: Real> {
    /// Overrides the default SVD rank threshold of `M`.
    pub rank_tolerance: Option<T>,
    /// Reported solutions are flagged if a residual exceeds this.
    pub tol_solve: T,
    /// `c - B y_p` counts as in the range of `M` when the least-squares
    /// residual is at most `consistency_tol · (1 + ‖c‖)`.
    pub consistency_tol: T,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            rank_tolerance: None,
            tol_solve: T::lit(1e-6),
            consistency_tol: T::lit(1e-8),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport<T: Real> {
    pub status: SolveStatus,
    /// The solution, or for non-unique problems the one whose
    /// fundamental-system coefficients have minimum norm. `None` when there
    /// is no solution.
    pub solution: Option<Trajectory<T>>,
    /// Coefficients `ξ = (ξ_0, …, ξ_{r-1})` of the reported solution.
    pub coefficients: CVector<T>,
    /// Homogeneous solutions with `Bz = 0`, one per kernel dimension.
    pub kernel_basis: Vec<Trajectory<T>>,
    /// `‖Ly - f‖_{n,p}` of the reported solution.
    pub ode_residual: Option<T>,
    /// `‖By - c‖` of the reported solution.
    pub boundary_residual: Option<T>,
    /// `‖M ξ - (c - B y_p)‖` of the least-squares coefficient solve.
    pub consistency_residual: T,
    pub fredholm: FredholmNumbers,
    pub characteristic: CharacteristicMatrix<T>,
    pub options: SolveOptions<T>,
}

impl<T: Real> SolveReport<T> {
    /// Both residuals of the reported solution are within `tol_solve`.
    pub fn within_tolerance(&self) -> bool {
        match (self.ode_residual, self.boundary_residual) {
            (Some(o), Some(b)) => o <= self.options.tol_solve && b <= self.options.tol_solve,
            _ => false,
        }
    }
}

/// Particular solution: forcing `f`, zero initial jet, derivatives to
/// `n + r`.
pub fn particular_solution<T: Real>(problem: &BvProblem<T>, grid: &Grid<T>) -> Result<Trajectory<T>> {
    let d = problem.dims;
    let zero = vec![CMatrix::<T>::zeros(d.m, 1); d.r];
    let y = integrate(&problem.coefficients, Some(&problem.rhs), &zero, grid)?;
    extend_derivatives(&y, &problem.coefficients, Some(&problem.rhs), d.jet_len())
}

pub fn solve<T: Real>(problem: &BvProblem<T>, grid: &Grid<T>) -> Result<SolveReport<T>> {
    solve_with(problem, grid, &SolveOptions::default())
}

pub fn solve_with<T: Real>(
    problem: &BvProblem<T>,
    grid: &Grid<T>,
    options: &SolveOptions<T>,
) -> Result<SolveReport<T>> {
    let (cm, ys) = assemble(problem, grid, options.rank_tolerance)?;
    let d = problem.dims;
    let yp = particular_solution(problem, grid)?;
    let byp = problem.boundary.apply(&yp)?;
    let rhs: CVector<T> = &problem.c - byp.column(0);

    let (xi, residual) = min_norm_solve(cm.svd(), cm.data(), &rhs, cm.rank_tolerance());
    let consistent = residual <= options.consistency_tol * (T::one() + problem.c.norm());
    let fredholm = cm.fredholm_numbers();

    let kernel = cm.kernel_basis();
    let kernel_basis = kernel
        .column_iter()
        .map(|nu| combine(&ys, &nu.into_owned()))
        .collect::<Result<Vec<_>>>()?;

    let (status, solution) = if consistent {
        let homogeneous = combine(&ys, &xi)?;
        let y = yp.plus_scaled(Complex::new(T::one(), T::zero()), &homogeneous)?;
        let status = if fredholm.dim_ker == 0 {
            SolveStatus::Unique
        } else {
            SolveStatus::SolvableNonUnique
        };
        (status, Some(y))
    } else {
        (SolveStatus::NoSolution, None)
    };

    let (ode_residual, boundary_residual) = match &solution {
        Some(y) => {
            let (o, b) = residual_check(problem, y)?;
            (Some(o), Some(b))
        }
        None => (None, None),
    };
    debug_assert_eq!(kernel_basis.len(), fredholm.dim_ker);
    debug_assert!(d.mr() == cm.cols());

    Ok(SolveReport {
        status,
        solution,
        coefficients: xi,
        kernel_basis,
        ode_residual,
        boundary_residual,
        consistency_residual: residual,
        fredholm,
        characteristic: cm,
        options: *options,
    })
}

/// `Σ_k Y_k ξ_k` for `ξ` split into `r` blocks of length `m`.
fn combine<T: Real>(ys: &[Trajectory<T>], xi: &CVector<T>) -> Result<Trajectory<T>> {
    let m = ys[0].rows();
    if xi.len() != m * ys.len() {
        return Err(Error::Dimension("coefficient vector length is not mr".into()));
    }
    let mut acc = ys[0].mul_right(&as_column(xi.rows(0, m).into_owned()));
    for (k, y) in ys.iter().enumerate().skip(1) {
        let part = y.mul_right(&as_column(xi.rows(k * m, m).into_owned()));
        acc = acc.plus_scaled(Complex::new(T::one(), T::zero()), &part)?;
    }
    Ok(acc)
}

fn as_column<T: Real>(v: CVector<T>) -> CMatrix<T> {
    let n = v.len();
    v.reshape_generic(nalgebra::Dyn(n), nalgebra::Dyn(1))
}

/// `(‖Ly - f‖_{n,p}, ‖By - c‖_2)` for a vector trajectory.
pub fn residual_check<T: Real>(problem: &BvProblem<T>, y: &Trajectory<T>) -> Result<(T, T)> {
    let d = problem.dims;
    y.require_order(d.jet_len())?;
    if y.cols() != 1 {
        return Err(Error::Dimension("residual check expects a vector trajectory".into()));
    }
    let ode = problem.ode_residual(y)?;
    let ode_norm = sobolev_norm(&ode, d.n, d.p)?;
    let by = problem.boundary.apply(y)?;
    let boundary = (by.column(0) - &problem.c).norm();
    Ok((ode_norm, boundary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{BoundaryOperator, Exponent, Interval, MatrixFunction, PointCondition, ProblemDims};
    use approx::assert_relative_eq;

    type C = Complex<f64>;

    fn scalar_first_order(a0: f64, c: f64) -> BvProblem<f64> {
        BvProblem {
            dims: ProblemDims::new(1, 1, 0, 1, Exponent::Two),
            interval: Interval::new(0.0, 1.0).unwrap(),
            coefficients: vec![MatrixFunction::from_real(1, 1, &[a0])],
            rhs: MatrixFunction::zeros(1, 1),
            boundary: BoundaryOperator::from_jets(vec![CMatrix::identity(1, 1)]),
            c: CVector::from_element(1, C::new(c, 0.0)),
        }
    }

    fn grid(n: usize) -> Grid<f64> {
        Grid::new(Interval::new(0.0, 1.0).unwrap(), n).unwrap()
    }

    #[test]
    fn constant_solution() {
        let p = scalar_first_order(0.0, 1.0);
        let rep = solve(&p, &grid(20)).unwrap();
        assert_eq!(rep.status, SolveStatus::Unique);
        let y = rep.solution.unwrap();
        assert!(y.order(0).iter().all(|v| (v[0] - C::new(1.0, 0.0)).norm() < 1e-15));
        assert!(rep.kernel_basis.is_empty());
    }

    #[test]
    fn exponential_solution() {
        let p = scalar_first_order(-1.0, 1.0);
        let rep = solve(&p, &grid(1000)).unwrap();
        assert_eq!(rep.status, SolveStatus::Unique);
        let y = rep.solution.as_ref().unwrap();
        assert_relative_eq!(y.at(0, 1000)[0].re, std::f64::consts::E, epsilon = 1e-8);
        assert!(rep.ode_residual.unwrap() <= 1e-8);
        assert!(rep.boundary_residual.unwrap() <= 1e-12);
        assert!(rep.within_tolerance());
    }

    #[test]
    fn constants_cannot_jump() {
        let mut p = scalar_first_order(0.0, 0.0);
        p.dims.l = 2;
        p.boundary = BoundaryOperator::from_point_conditions(
            p.interval,
            1,
            2,
            1,
            &[
                PointCondition { point: 0.0, order: 0, weight: CMatrix::from_column_slice(2, 1, &[C::new(1.0, 0.0), C::new(0.0, 0.0)]) },
                PointCondition { point: 1.0, order: 0, weight: CMatrix::from_column_slice(2, 1, &[C::new(0.0, 0.0), C::new(1.0, 0.0)]) },
            ],
        )
        .unwrap();
        p.c = CVector::from_vec(vec![C::new(0.0, 0.0), C::new(1.0, 0.0)]);
        let rep = solve(&p, &grid(20)).unwrap();
        assert_eq!(rep.status, SolveStatus::NoSolution);
        assert!(rep.solution.is_none());
        assert_eq!(rep.fredholm, FredholmNumbers { dim_ker: 0, dim_coker: 1, index: -1 });

        // consistent data on the same operator: y ≡ 1
        p.c = CVector::from_vec(vec![C::new(1.0, 0.0), C::new(1.0, 0.0)]);
        let rep = solve(&p, &grid(20)).unwrap();
        assert_eq!(rep.status, SolveStatus::Unique);
    }

    #[test]
    fn underdetermined_has_kernel() {
        // y'' = 0 with the single condition y(0) = 1
        let p = BvProblem {
            dims: ProblemDims::new(1, 2, 0, 1, Exponent::Two),
            interval: Interval::new(0.0, 1.0).unwrap(),
            coefficients: vec![MatrixFunction::zeros(1, 1), MatrixFunction::zeros(1, 1)],
            rhs: MatrixFunction::zeros(1, 1),
            boundary: BoundaryOperator::from_jets(vec![CMatrix::identity(1, 1), CMatrix::zeros(1, 1)]),
            c: CVector::from_element(1, C::new(1.0, 0.0)),
        };
        let rep = solve(&p, &grid(20)).unwrap();
        assert_eq!(rep.status, SolveStatus::SolvableNonUnique);
        assert_eq!(rep.kernel_basis.len(), 1);
        let z = &rep.kernel_basis[0];
        // kernel element is a multiple of t
        assert!(z.at(0, 0).norm() < 1e-15);
        assert_relative_eq!(z.at(1, 0)[0].norm(), 1.0, epsilon = 1e-14);
        // minimum-norm coefficients: ξ = (1, 0)
        assert_relative_eq!(rep.coefficients[0].re, 1.0, epsilon = 1e-14);
        assert!(rep.coefficients[1].norm() < 1e-14);
    }

    #[test]
    fn residual_of_perturbed_candidate() {
        let p = scalar_first_order(0.0, 1.0);
        let eps = 0.25;
        let y = Trajectory::from_fn(grid(10), 1, |k, _| {
            CMatrix::from_element(1, 1, C::new(if k == 0 { 1.0 + eps } else { 0.0 }, 0.0))
        })
        .unwrap();
        let (ode, bnd) = residual_check(&p, &y).unwrap();
        assert_eq!(ode, 0.0);
        assert_relative_eq!(bnd, eps);
    }
}
