//! Generic boundary operators in their analytic (jet + kernel) form.

use std::cell::RefCell;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::odeint::Trajectory;
use crate::problem::function::{MatrixFunction, MatrixPolynomial};
use crate::problem::quadrature::integrate_segment;
use crate::problem::Interval;
use crate::scalar::{factorial, to_c, CMatrix, Real};

/// `By = Σ_{k<J} α_k y^{(k)}(a) + ∫_a^b Φ(t) y^{(J)}(t) dt` with `J = n + r`.
///
/// Every `α_k` and `Φ(t)` is `l × m`. Shapes are checked by
/// [`BvProblem::validate`](crate::problem::BvProblem::validate), not here, so
/// malformed operators can still be reported as data.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryOperator<T: Real> {
    pub alphas: Vec<CMatrix<T>>,
    /// `None` is the zero kernel.
    pub phi: Option<MatrixFunction<T>>,
}

/// `weight · y^{(order)}(point)`, a single term of a multipoint condition.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCondition<T: Real> {
    pub point: T,
    pub order: usize,
    pub weight: CMatrix<T>,
}

impl<T: Real> BoundaryOperator<T> {
    pub fn new(alphas: Vec<CMatrix<T>>, phi: Option<MatrixFunction<T>>) -> Self {
        Self { alphas, phi }
    }

    /// Operator that only reads the jet at `a`.
    pub fn from_jets(alphas: Vec<CMatrix<T>>) -> Self {
        Self { alphas, phi: None }
    }

    /// Number of jet matrices, `n + r`.
    pub fn jet_len(&self) -> usize {
        self.alphas.len()
    }

    /// `l`, taken from the first jet matrix.
    pub fn conditions(&self) -> usize {
        self.alphas.first().map_or(0, |a| a.nrows())
    }

    /// `m`, taken from the first jet matrix.
    pub fn components(&self) -> usize {
        self.alphas.first().map_or(0, |a| a.ncols())
    }

    /// Rewrites `Σ_i W_i y^{(β_i)}(τ_i)` in jet + kernel form by Taylor's
    /// formula with integral remainder around `a`:
    ///
    /// `y^{(β)}(τ) = Σ_{j=β}^{J-1} y^{(j)}(a) (τ-a)^{j-β}/(j-β)!
    ///              + ∫_a^τ (τ-s)^{J-1-β}/(J-1-β)! y^{(J)}(s) ds`.
    ///
    /// Orders must be below `J`; `y^{(J)}` at a point is not a bounded
    /// functional.
    pub fn from_point_conditions(
        interval: Interval<T>,
        jet_len: usize,
        rows: usize,
        cols: usize,
        conditions: &[PointCondition<T>],
    ) -> Result<Self> {
        if jet_len == 0 {
            return Err(Error::InvalidArgument("jet length must be positive".into()));
        }
        let mut alphas = vec![CMatrix::<T>::zeros(rows, cols); jet_len];
        let mut kernels: Vec<(Complex<T>, MatrixFunction<T>)> = Vec::new();
        for cond in conditions {
            if cond.order >= jet_len {
                return Err(Error::InvalidArgument(format!(
                    "point condition of order {} needs order < n + r = {jet_len}",
                    cond.order
                )));
            }
            if cond.weight.shape() != (rows, cols) {
                return Err(Error::Dimension(format!(
                    "point condition weight is {}x{}, expected {rows}x{cols}",
                    cond.weight.nrows(),
                    cond.weight.ncols()
                )));
            }
            if !interval.contains(cond.point) {
                return Err(Error::InvalidArgument(
                    "point condition outside the interval".into(),
                ));
            }
            let dt = cond.point - interval.a;
            for (j, alpha) in alphas.iter_mut().enumerate().skip(cond.order) {
                let q = j - cond.order;
                *alpha += &cond.weight * to_c(dt.powi(q as i32) / factorial::<T>(q));
            }
            if dt > T::zero() {
                let q = jet_len - 1 - cond.order;
                let mut coeffs = vec![CMatrix::<T>::zeros(rows, cols); q + 1];
                // (τ - s)^q / q! = (-1)^q (s - τ)^q / q!
                let sign = if q.is_multiple_of(2) { T::one() } else { -T::one() };
                coeffs[q] = &cond.weight * to_c(sign / factorial::<T>(q));
                let poly = MatrixPolynomial::new(rows, cols, cond.point, coeffs)?;
                let kernel = if cond.point < interval.b {
                    let zero = MatrixPolynomial::new(rows, cols, T::zero(), Vec::new())?;
                    MatrixFunction::piecewise(
                        vec![interval.a, cond.point, interval.b],
                        vec![poly, zero],
                    )?
                } else {
                    MatrixFunction::Polynomial(poly)
                };
                kernels.push((to_c(T::one()), kernel));
            }
        }
        let phi = match kernels.len() {
            0 => None,
            1 => Some(kernels.pop().expect("one kernel").1),
            _ => Some(MatrixFunction::combination(rows, cols, kernels)?),
        };
        Ok(Self { alphas, phi })
    }

    /// Sums two operators with the same `(l, m, J)`.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.plus_scaled(to_c(T::one()), other)
    }

    /// `self + w · other`.
    pub fn plus_scaled(&self, w: Complex<T>, other: &Self) -> Result<Self> {
        if self.jet_len() != other.jet_len()
            || self.alphas.iter().zip(&other.alphas).any(|(x, y)| x.shape() != y.shape())
        {
            return Err(Error::Dimension(
                "boundary operators differ in jet length or shape".into(),
            ));
        }
        let alphas = self
            .alphas
            .iter()
            .zip(&other.alphas)
            .map(|(x, y)| x + y * w)
            .collect();
        let phi = match (&self.phi, &other.phi) {
            (None, None) => None,
            (Some(p), None) => Some(p.clone()),
            (None, Some(q)) => Some(MatrixFunction::combination(
                q.rows(),
                q.cols(),
                vec![(w, q.clone())],
            )?),
            (Some(p), Some(q)) => Some(p.plus_scaled(w, q)?),
        };
        Ok(Self { alphas, phi })
    }

    /// `(U α_k, U Φ)`: the same conditions mixed by a constant `l' × l`
    /// matrix.
    pub fn left_multiplied(&self, u: &CMatrix<T>) -> Result<Self> {
        let alphas = self.alphas.iter().map(|a| u * a).collect();
        let phi = match &self.phi {
            None => None,
            Some(p) => Some(left_multiply_function(u, p)?),
        };
        Ok(Self { alphas, phi })
    }

    /// Applies `B` columnwise to a trajectory with `m` rows; returns the
    /// `l × cols` matrix `[BY]`.
    pub fn apply(&self, y: &Trajectory<T>) -> Result<CMatrix<T>> {
        let jet = self.jet_len();
        if jet == 0 {
            return Err(Error::InvalidArgument("boundary operator without jets".into()));
        }
        let needed = if self.phi.is_some() { jet } else { jet - 1 };
        y.require_order(needed)?;
        if y.rows() != self.components() {
            return Err(Error::Dimension(format!(
                "boundary operator acts on {} components, trajectory has {}",
                self.components(),
                y.rows()
            )));
        }
        let mut out = CMatrix::<T>::zeros(self.conditions(), y.cols());
        for (k, alpha) in self.alphas.iter().enumerate() {
            out += alpha * y.at(k, 0);
        }
        if let Some(phi) = &self.phi {
            out += self.kernel_term(phi, y)?;
        }
        Ok(out)
    }

    fn kernel_term(&self, phi: &MatrixFunction<T>, y: &Trajectory<T>) -> Result<CMatrix<T>> {
        let grid = *y.grid();
        let Interval { a, b } = grid.interval();
        let jet = self.jet_len();
        let mut cuts = vec![a];
        cuts.extend(phi.breakpoints().into_iter().filter(|&t| t > a && t < b));
        cuts.push(b);

        let mut total = CMatrix::<T>::zeros(self.conditions(), y.cols());
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let failure = RefCell::new(None);
            let part = integrate_segment(
                &grid,
                lo,
                hi,
                |i| match phi.derivative_within(0, grid.node(i), lo, hi) {
                    Ok(k) => k * y.at(jet, i),
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        CMatrix::zeros(self.conditions(), y.cols())
                    }
                },
                |t| {
                    let k = phi.derivative_within(0, t, lo, hi);
                    let v = y.interpolate(jet, t);
                    match (k, v) {
                        (Ok(k), Ok(v)) => k * v,
                        (Err(e), _) | (_, Err(e)) => {
                            failure.borrow_mut().get_or_insert(e);
                            CMatrix::zeros(self.conditions(), y.cols())
                        }
                    }
                },
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            if let Some(p) = part {
                total += p;
            }
        }
        Ok(total)
    }
}

fn left_multiply_function<T: Real>(
    u: &CMatrix<T>,
    f: &MatrixFunction<T>,
) -> Result<MatrixFunction<T>> {
    let poly = |p: &MatrixPolynomial<T>| {
        MatrixPolynomial::new(
            u.nrows(),
            p.coeffs().first().map_or(0, |c| c.ncols()),
            p.center(),
            p.coeffs().iter().map(|c| u * c).collect(),
        )
    };
    Ok(match f {
        MatrixFunction::Constant(c) => MatrixFunction::Constant(u * c),
        MatrixFunction::Polynomial(p) => {
            if p.coeffs().is_empty() {
                MatrixFunction::zeros(u.nrows(), f.cols())
            } else {
                MatrixFunction::Polynomial(poly(p)?)
            }
        }
        MatrixFunction::Sampled(s) => MatrixFunction::sampled(
            s.knots().to_vec(),
            s.values().iter().map(|v| u * v).collect(),
        )?,
        MatrixFunction::Piecewise { breaks, pieces } => {
            let cols = f.cols();
            let pieces = pieces
                .iter()
                .map(|p| {
                    MatrixPolynomial::new(
                        u.nrows(),
                        cols,
                        p.center(),
                        p.coeffs().iter().map(|c| u * c).collect(),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            MatrixFunction::piecewise(breaks.clone(), pieces)?
        }
        MatrixFunction::Combination { cols, terms, .. } => MatrixFunction::combination(
            u.nrows(),
            *cols,
            terms
                .iter()
                .map(|(w, g)| Ok((*w, left_multiply_function(u, g)?)))
                .collect::<Result<Vec<_>>>()?,
        )?,
    })
}
