use num_complex::Complex;

use crate::error::{Error, Result};
use crate::odeint::Grid;
use crate::problem::MatrixFunction;
use crate::scalar::{CMatrix, Real};

/// Grid samples of a `rows × cols` matrix-valued function and of its
/// derivatives `0..=max_order`.
///
/// Vector solutions use `cols = 1`; fundamental matrix solutions use
/// `cols = m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real> {
    grid: Grid<T>,
    rows: usize,
    cols: usize,
    // jets[order][node]
    jets: Vec<Vec<CMatrix<T>>>,
}

impl<T: Real> Trajectory<T> {
    pub fn from_jets(grid: Grid<T>, jets: Vec<Vec<CMatrix<T>>>) -> Result<Self> {
        let first = jets
            .first()
            .and_then(|o| o.first())
            .ok_or_else(|| Error::InvalidArgument("trajectory without samples".into()))?;
        let (rows, cols) = first.shape();
        for (k, order) in jets.iter().enumerate() {
            if order.len() != grid.len() {
                return Err(Error::Dimension(format!(
                    "derivative {k} has {} samples, grid has {} nodes",
                    order.len(),
                    grid.len()
                )));
            }
            if order.iter().any(|s| s.shape() != (rows, cols)) {
                return Err(Error::Dimension(format!(
                    "derivative {k} has inconsistent sample shapes"
                )));
            }
        }
        Ok(Self {
            grid,
            rows,
            cols,
            jets,
        })
    }

    /// Samples `f(order, t)` for `order = 0..=max_order` on every node.
    pub fn from_fn(
        grid: Grid<T>,
        max_order: usize,
        mut f: impl FnMut(usize, T) -> CMatrix<T>,
    ) -> Result<Self> {
        let jets = (0..=max_order)
            .map(|k| grid.nodes().map(|t| f(k, t)).collect())
            .collect();
        Self::from_jets(grid, jets)
    }

    /// Samples a matrix function and its derivatives.
    pub fn from_function(
        grid: Grid<T>,
        func: &MatrixFunction<T>,
        max_order: usize,
    ) -> Result<Self> {
        if !func.supports_order(max_order) {
            return Err(Error::InsufficientSmoothness {
                what: "sampled function".into(),
                required: max_order,
                available: func.max_derivative_order().unwrap_or(0),
            });
        }
        Self::from_fn(grid, max_order, |k, t| {
            func.derivative(k, t).expect("order checked above")
        })
    }

    pub fn zeros(grid: Grid<T>, rows: usize, cols: usize, max_order: usize) -> Self {
        let z = CMatrix::<T>::zeros(rows, cols);
        Self {
            grid,
            rows,
            cols,
            jets: vec![vec![z; grid.len()]; max_order + 1],
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn max_order(&self) -> usize {
        self.jets.len() - 1
    }

    pub fn require_order(&self, required: usize) -> Result<()> {
        if required > self.max_order() {
            Err(Error::InsufficientJet {
                required,
                available: self.max_order(),
            })
        } else {
            Ok(())
        }
    }

    /// Sample of derivative `order` at node `i`.
    pub fn at(&self, order: usize, i: usize) -> &CMatrix<T> {
        &self.jets[order][i]
    }

    pub fn order(&self, order: usize) -> &[CMatrix<T>] {
        &self.jets[order]
    }

    pub(crate) fn push_order(&mut self, samples: Vec<CMatrix<T>>) {
        debug_assert_eq!(samples.len(), self.grid.len());
        self.jets.push(samples);
    }

    /// Keeps derivatives `0..=max_order` only.
    pub fn truncated(&self, max_order: usize) -> Result<Self> {
        self.require_order(max_order)?;
        Ok(Self {
            grid: self.grid,
            rows: self.rows,
            cols: self.cols,
            jets: self.jets[..=max_order].to_vec(),
        })
    }

    /// Column `j` as a vector trajectory.
    pub fn column(&self, j: usize) -> Self {
        self.map(|s| s.columns(j, 1).into_owned())
    }

    /// `Y(t) · x` for a constant `cols × k` matrix `x`.
    pub fn mul_right(&self, x: &CMatrix<T>) -> Self {
        self.map(|s| s * x)
    }

    pub fn scaled(&self, w: Complex<T>) -> Self {
        self.map(|s| s * w)
    }

    fn map(&self, f: impl Fn(&CMatrix<T>) -> CMatrix<T>) -> Self {
        let jets: Vec<Vec<CMatrix<T>>> = self
            .jets
            .iter()
            .map(|o| o.iter().map(&f).collect())
            .collect();
        let (rows, cols) = jets[0][0].shape();
        Self {
            grid: self.grid,
            rows,
            cols,
            jets,
        }
    }

    /// `self + w · other` on the common derivative orders.
    pub fn plus_scaled(&self, w: Complex<T>, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(
                "trajectories live on different grids or shapes".into(),
            ));
        }
        let top = self.max_order().min(other.max_order());
        let jets = (0..=top)
            .map(|k| {
                self.jets[k]
                    .iter()
                    .zip(&other.jets[k])
                    .map(|(x, y)| x + y * w)
                    .collect()
            })
            .collect();
        Ok(Self {
            grid: self.grid,
            rows: self.rows,
            cols: self.cols,
            jets,
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus_scaled(Complex::new(-T::one(), T::zero()), other)
    }

    /// Cubic Lagrange interpolation of derivative `order` at an arbitrary
    /// `t` in the grid interval.
    pub fn interpolate(&self, order: usize, t: T) -> Result<CMatrix<T>> {
        self.require_order(order)?;
        let n = self.grid.steps();
        let a = self.grid.interval().a;
        let h = self.grid.step();
        let pos = (t - a) / h;
        let cell = pos.floor().to_usize().unwrap_or(0).min(n - 1);
        let start = cell.saturating_sub(1).min(n - 3);
        let idx = [start, start + 1, start + 2, start + 3];
        let mut acc = CMatrix::<T>::zeros(self.rows, self.cols);
        for &i in &idx {
            let mut w = T::one();
            for &j in &idx {
                if j != i {
                    let (ti, tj) = (T::lit(i as f64), T::lit(j as f64));
                    w *= (pos - tj) / (ti - tj);
                }
            }
            acc += &self.jets[order][i] * Complex::new(w, T::zero());
        }
        Ok(acc)
    }

    /// Largest pointwise Frobenius norm over all nodes and stored orders.
    pub fn sup_norm(&self) -> T {
        self.jets
            .iter()
            .flatten()
            .map(crate::scalar::frobenius)
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }
}
