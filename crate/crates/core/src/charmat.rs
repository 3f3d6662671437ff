//! Characteristic matrix `M(L, B)` and the Fredholm numbers it carries.
//!
//! Block `k` of `M` is `[BY_k]`, the boundary operator applied columnwise to
//! the `k`-th fundamental matrix solution. The kernel and cokernel
//! dimensions of the boundary-value problem equal those of `M`, and the
//! index is always `mr - l`.

use crate::error::{Error, Result};
use crate::linalg::{default_rank_tolerance, full_svd, numerical_rank, FullSvd};
use crate::odeint::{fundamental_solutions, Grid, Trajectory};
use crate::problem::{BvProblem, ProblemDims};
use crate::scalar::{frobenius, CMatrix, Real};

/// `dim ker`, `dim coker` and `index = dim ker - dim coker`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FredholmNumbers {
    pub dim_ker: usize,
    pub dim_coker: usize,
    pub index: i64,
}

/// The `l × mr` characteristic matrix with its singular-value analysis.
#[derive(Debug, Clone)]
pub struct CharacteristicMatrix<T: Real> {
    data: CMatrix<T>,
    m: usize,
    r: usize,
    svd: FullSvd<T>,
    rank_tolerance: T,
    rank: usize,
}

impl<T: Real> CharacteristicMatrix<T> {
    /// Wraps an assembled `l × mr` matrix. `rank_tolerance = None` selects
    /// `max(l, mr) · σ_max · ε`.
    pub fn from_matrix(
        data: CMatrix<T>,
        m: usize,
        r: usize,
        rank_tolerance: Option<T>,
    ) -> Result<Self> {
        if m == 0 || r == 0 || data.ncols() != m * r || data.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "characteristic matrix is {}x{}, expected l x {}",
                data.nrows(),
                data.ncols(),
                m * r
            )));
        }
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Numerical("characteristic matrix has non-finite entries".into()));
        }
        let svd = full_svd(&data)?;
        let tol = match rank_tolerance {
            Some(t) => t,
            None => default_rank_tolerance(data.nrows(), data.ncols(), &svd.singular_values),
        };
        let rank = numerical_rank(&svd.singular_values, tol);
        Ok(Self {
            data,
            m,
            r,
            svd,
            rank_tolerance: tol,
            rank,
        })
    }

    /// Concatenates the block columns `[BY_0] … [BY_{r-1}]`.
    pub fn from_blocks(blocks: &[CMatrix<T>], rank_tolerance: Option<T>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidArgument("no blocks".into()))?;
        let (l, m) = first.shape();
        if blocks.iter().any(|b| b.shape() != (l, m)) {
            return Err(Error::Dimension("blocks differ in shape".into()));
        }
        let mut data = CMatrix::<T>::zeros(l, m * blocks.len());
        for (k, b) in blocks.iter().enumerate() {
            data.columns_mut(k * m, m).copy_from(b);
        }
        Self::from_matrix(data, m, blocks.len(), rank_tolerance)
    }

    pub fn data(&self) -> &CMatrix<T> {
        &self.data
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    /// Block column `[BY_k]`, `l × m`.
    pub fn block(&self, k: usize) -> CMatrix<T> {
        self.data.columns(k * self.m, self.m).into_owned()
    }

    pub fn singular_values(&self) -> &[T] {
        &self.svd.singular_values
    }

    pub fn rank_tolerance(&self) -> T {
        self.rank_tolerance
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Orthonormal basis of `ker M` (`mr × dim_ker`).
    pub fn kernel_basis(&self) -> CMatrix<T> {
        let k = self.cols() - self.rank;
        self.svd.v.columns(self.rank, k).into_owned()
    }

    /// Orthonormal basis of `ker M^H` (`l × dim_coker`).
    pub fn cokernel_basis(&self) -> CMatrix<T> {
        let k = self.rows() - self.rank;
        self.svd.u.columns(self.rank, k).into_owned()
    }

    pub(crate) fn svd(&self) -> &FullSvd<T> {
        &self.svd
    }

    pub fn fredholm_numbers(&self) -> FredholmNumbers {
        FredholmNumbers {
            dim_ker: self.cols() - self.rank,
            dim_coker: self.rows() - self.rank,
            index: self.cols() as i64 - self.rows() as i64,
        }
    }

    /// `l = mr` and `M` nondegenerate.
    pub fn is_invertible(&self) -> bool {
        self.rows() == self.cols() && self.rank == self.cols()
    }

    /// `‖M - other‖_F`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if self.data.shape() != other.data.shape() {
            return Err(Error::Dimension("characteristic matrices differ in shape".into()));
        }
        Ok(frobenius(&(&self.data - &other.data)))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }
}

/// Assembles `M(L, B)` on the given grid.
pub fn characteristic_matrix<T: Real>(
    problem: &BvProblem<T>,
    grid: &Grid<T>,
    rank_tolerance: Option<T>,
) -> Result<CharacteristicMatrix<T>> {
    Ok(assemble(problem, grid, rank_tolerance)?.0)
}

/// Assembles `M(L, B)` and also returns the fundamental solutions used.
pub fn assemble<T: Real>(
    problem: &BvProblem<T>,
    grid: &Grid<T>,
    rank_tolerance: Option<T>,
) -> Result<(CharacteristicMatrix<T>, Vec<Trajectory<T>>)> {
    problem.ensure_valid()?;
    check_grid(problem, grid)?;
    let ys = fundamental_solutions(&problem.coefficients, grid, problem.dims.jet_len())?;
    let blocks = ys
        .iter()
        .map(|y| problem.boundary.apply(y))
        .collect::<Result<Vec<_>>>()?;
    let cm = CharacteristicMatrix::from_blocks(&blocks, rank_tolerance)?;
    Ok((cm, ys))
}

pub(crate) fn check_grid<T: Real>(problem: &BvProblem<T>, grid: &Grid<T>) -> Result<()> {
    if grid.interval() != problem.interval {
        return Err(Error::InvalidArgument(
            "grid interval differs from the problem interval".into(),
        ));
    }
    Ok(())
}

/// Fredholm numbers of `M` checked against the problem dimensions.
pub fn fredholm_numbers<T: Real>(
    matrix: &CharacteristicMatrix<T>,
    dims: &ProblemDims,
) -> Result<FredholmNumbers> {
    if matrix.rows() != dims.l || matrix.cols() != dims.mr() {
        return Err(Error::Dimension(format!(
            "characteristic matrix is {}x{}, dims say {}x{}",
            matrix.rows(),
            matrix.cols(),
            dims.l,
            dims.mr()
        )));
    }
    Ok(matrix.fredholm_numbers())
}

/// The problem is uniquely solvable for every right-hand side.
pub fn is_invertible<T: Real>(matrix: &CharacteristicMatrix<T>, dims: &ProblemDims) -> bool {
    dims.l == dims.mr() && matrix.rows() == dims.l && matrix.is_invertible()
}
