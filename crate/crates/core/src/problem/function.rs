//! Matrix-valued functions of the independent variable.
//!
//! Coefficients `A_j`, right-hand sides `f` and boundary kernels `Φ` are all
//! described by a [`MatrixFunction`]. Constant and polynomial descriptors
//! differentiate exactly; sampled descriptors go through a not-a-knot cubic
//! spline and therefore only have two reliable derivatives.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{factorial, to_c, CMatrix, Real};

/// `Σ_i C_i (t - center)^i` with `rows × cols` complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial<T: Real> {
    rows: usize,
    cols: usize,
    center: T,
    coeffs: Vec<CMatrix<T>>,
}

impl<T: Real> MatrixPolynomial<T> {
    /// Builds the polynomial; fails if coefficient shapes disagree.
    pub fn new(rows: usize, cols: usize, center: T, coeffs: Vec<CMatrix<T>>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().position(|c| c.shape() != (rows, cols)) {
            return Err(Error::Dimension(format!(
                "polynomial coefficient {bad} is {}x{}, expected {rows}x{cols}",
                coeffs[bad].nrows(),
                coeffs[bad].ncols()
            )));
        }
        Ok(Self {
            rows,
            cols,
            center,
            coeffs,
        })
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn coeffs(&self) -> &[CMatrix<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn derivative(&self, order: usize, t: T) -> CMatrix<T> {
        let s = to_c(t - self.center);
        let mut acc = CMatrix::<T>::zeros(self.rows, self.cols);
        for i in (order..self.coeffs.len()).rev() {
            // falling factorial i (i-1) ... (i-order+1)
            let fall = factorial::<T>(i) / factorial::<T>(i - order);
            acc = acc * s + &self.coeffs[i] * to_c(fall);
        }
        acc
    }
}

/// Not-a-knot cubic spline through matrix-valued samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline<T: Real> {
    knots: Vec<T>,
    values: Vec<CMatrix<T>>,
    second: Vec<CMatrix<T>>,
}

impl<T: Real> CubicSpline<T> {
    /// Reliable derivative order of a cubic spline.
    pub const SMOOTHNESS: usize = 2;

    pub fn not_a_knot(knots: Vec<T>, values: Vec<CMatrix<T>>) -> Result<Self> {
        let n = knots.len();
        if n < 4 {
            return Err(Error::InvalidArgument(format!(
                "not-a-knot spline needs at least 4 knots, got {n}"
            )));
        }
        if values.len() != n {
            return Err(Error::Dimension(format!(
                "{n} knots but {} sample values",
                values.len()
            )));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "spline knots must be strictly increasing".into(),
            ));
        }
        let shape = values[0].shape();
        if values.iter().any(|v| v.shape() != shape) {
            return Err(Error::Dimension("spline samples differ in shape".into()));
        }

        let h: Vec<T> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let two = T::lit(2.0);
        let six = to_c(T::lit(6.0));

        // Tridiagonal system for the interior second derivatives M_1..M_{n-2}
        // with the end values eliminated through the not-a-knot conditions.
        let k = n - 2;
        let mut sub = vec![T::zero(); k];
        let mut diag = vec![T::zero(); k];
        let mut sup = vec![T::zero(); k];
        let mut rhs: Vec<CMatrix<T>> = Vec::with_capacity(k);
        for i in 1..n - 1 {
            let row = i - 1;
            sub[row] = h[i - 1];
            diag[row] = two * (h[i - 1] + h[i]);
            sup[row] = h[i];
            let d = (&values[i + 1] - &values[i]) / to_c(h[i])
                - (&values[i] - &values[i - 1]) / to_c(h[i - 1]);
            rhs.push(d * six);
        }
        let (h0, h1) = (h[0], h[1]);
        diag[0] += h0 + h0 * h0 / h1;
        sup[0] -= h0 * h0 / h1;
        sub[0] = T::zero();
        let (hp, hl) = (h[n - 3], h[n - 2]);
        diag[k - 1] += hl + hl * hl / hp;
        sub[k - 1] -= hl * hl / hp;
        sup[k - 1] = T::zero();

        // Thomas sweep.
        for i in 1..k {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            let prev = rhs[i - 1].clone();
            rhs[i] -= prev * to_c(w);
        }
        let mut interior = vec![CMatrix::<T>::zeros(shape.0, shape.1); k];
        interior[k - 1] = &rhs[k - 1] / to_c(diag[k - 1]);
        for i in (0..k - 1).rev() {
            interior[i] = (&rhs[i] - &interior[i + 1] * to_c(sup[i])) / to_c(diag[i]);
        }

        let mut second = Vec::with_capacity(n);
        second.push(
            &interior[0] * to_c(T::one() + h0 / h1) - &interior[1.min(k - 1)] * to_c(h0 / h1),
        );
        second.extend(interior.iter().cloned());
        let last = &interior[k - 1] * to_c(T::one() + hl / hp)
            - &interior[k.saturating_sub(2)] * to_c(hl / hp);
        second.push(last);

        Ok(Self {
            knots,
            values,
            second,
        })
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn values(&self) -> &[CMatrix<T>] {
        &self.values
    }

    fn interval_of(&self, t: T) -> usize {
        let n = self.knots.len();
        // partition_point gives the first knot > t
        let idx = self.knots.partition_point(|&x| x <= t);
        idx.saturating_sub(1).min(n - 2)
    }

    pub fn derivative(&self, order: usize, t: T) -> CMatrix<T> {
        let i = self.interval_of(t);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let u = x1 - t;
        let v = t - x0;
        let (m0, m1) = (&self.second[i], &self.second[i + 1]);
        let (y0, y1) = (&self.values[i], &self.values[i + 1]);
        let six = T::lit(6.0);
        let c0 = y0 / to_c(h) - m0 * to_c(h / six);
        let c1 = y1 / to_c(h) - m1 * to_c(h / six);
        match order {
            0 => {
                m0 * to_c(u * u * u / (six * h))
                    + m1 * to_c(v * v * v / (six * h))
                    + c0 * to_c(u)
                    + c1 * to_c(v)
            }
            1 => {
                let two = T::lit(2.0);
                m1 * to_c(v * v / (two * h)) - m0 * to_c(u * u / (two * h)) - c0 + c1
            }
            2 => m0 * to_c(u / h) + m1 * to_c(v / h),
            3 => (m1 - m0) / to_c(h),
            _ => CMatrix::<T>::zeros(y0.nrows(), y0.ncols()),
        }
    }
}

/// A `rows × cols` complex matrix-valued function on the problem interval.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFunction<T: Real> {
    Constant(CMatrix<T>),
    Polynomial(MatrixPolynomial<T>),
    Sampled(CubicSpline<T>),
    /// Polynomial pieces on `[breaks[i], breaks[i+1])`; the last piece is
    /// closed on the right. Evaluation outside the breaks extends the end
    /// pieces.
    Piecewise {
        breaks: Vec<T>,
        pieces: Vec<MatrixPolynomial<T>>,
    },
    /// `Σ w_i F_i`, used to express perturbed families without re-fitting.
    Combination {
        rows: usize,
        cols: usize,
        terms: Vec<(Complex<T>, MatrixFunction<T>)>,
    },
}

impl<T: Real> MatrixFunction<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixFunction::Constant(CMatrix::zeros(rows, cols))
    }

    pub fn constant(value: CMatrix<T>) -> Self {
        MatrixFunction::Constant(value)
    }

    /// Real constant from a row-major slice.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        MatrixFunction::Constant(DMatrix::from_row_iterator(
            rows,
            cols,
            data.iter().map(|&x| to_c(T::lit(x))),
        ))
    }

    /// `Σ_i coeffs[i] t^i`.
    pub fn polynomial(coeffs: Vec<CMatrix<T>>) -> Result<Self> {
        let (rows, cols) = coeffs
            .first()
            .map(|c| c.shape())
            .ok_or_else(|| Error::InvalidArgument("polynomial needs a coefficient".into()))?;
        Ok(MatrixFunction::Polynomial(MatrixPolynomial::new(
            rows,
            cols,
            T::zero(),
            coeffs,
        )?))
    }

    pub fn sampled(knots: Vec<T>, values: Vec<CMatrix<T>>) -> Result<Self> {
        Ok(MatrixFunction::Sampled(CubicSpline::not_a_knot(knots, values)?))
    }

    pub fn piecewise(breaks: Vec<T>, pieces: Vec<MatrixPolynomial<T>>) -> Result<Self> {
        if pieces.is_empty() || breaks.len() != pieces.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "piecewise function needs pieces+1 breaks, got {} breaks for {} pieces",
                breaks.len(),
                pieces.len()
            )));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "piecewise breaks must be strictly increasing".into(),
            ));
        }
        let shape = (pieces[0].rows, pieces[0].cols);
        if pieces.iter().any(|p| (p.rows, p.cols) != shape) {
            return Err(Error::Dimension("piecewise pieces differ in shape".into()));
        }
        Ok(MatrixFunction::Piecewise { breaks, pieces })
    }

    /// `Σ w_i F_i`; nested combinations are flattened.
    pub fn combination(
        rows: usize,
        cols: usize,
        terms: Vec<(Complex<T>, MatrixFunction<T>)>,
    ) -> Result<Self> {
        let mut flat = Vec::with_capacity(terms.len());
        for (w, f) in terms {
            if f.shape() != (rows, cols) {
                return Err(Error::Dimension(format!(
                    "combination term is {}x{}, expected {rows}x{cols}",
                    f.rows(),
                    f.cols()
                )));
            }
            match f {
                MatrixFunction::Combination { terms: inner, .. } => {
                    flat.extend(inner.into_iter().map(|(v, g)| (w * v, g)))
                }
                other => flat.push((w, other)),
            }
        }
        Ok(MatrixFunction::Combination {
            rows,
            cols,
            terms: flat,
        })
    }

    /// `self + weight · other`.
    pub fn plus_scaled(&self, weight: Complex<T>, other: &MatrixFunction<T>) -> Result<Self> {
        match (self, other) {
            (MatrixFunction::Constant(x), MatrixFunction::Constant(y)) if x.shape() == y.shape() => {
                Ok(MatrixFunction::Constant(x + y * weight))
            }
            _ => MatrixFunction::combination(
                self.rows(),
                self.cols(),
                vec![(Complex::new(T::one(), T::zero()), self.clone()), (weight, other.clone())],
            ),
        }
    }

    pub fn rows(&self) -> usize {
        self.shape().0
    }

    pub fn cols(&self) -> usize {
        self.shape().1
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            MatrixFunction::Constant(c) => c.shape(),
            MatrixFunction::Polynomial(p) => (p.rows, p.cols),
            MatrixFunction::Sampled(s) => s.values[0].shape(),
            MatrixFunction::Piecewise { pieces, .. } => (pieces[0].rows, pieces[0].cols),
            MatrixFunction::Combination { rows, cols, .. } => (*rows, *cols),
        }
    }

    /// Highest derivative the descriptor evaluates reliably; `None` means
    /// unbounded.
    pub fn max_derivative_order(&self) -> Option<usize> {
        match self {
            MatrixFunction::Constant(_) | MatrixFunction::Polynomial(_) => None,
            MatrixFunction::Sampled(_) => Some(CubicSpline::<T>::SMOOTHNESS),
            // jumps at the breaks: only values are meaningful
            MatrixFunction::Piecewise { .. } => Some(0),
            MatrixFunction::Combination { terms, .. } => terms
                .iter()
                .filter_map(|(_, f)| f.max_derivative_order())
                .min(),
        }
    }

    pub fn supports_order(&self, order: usize) -> bool {
        self.max_derivative_order().is_none_or(|cap| order <= cap)
    }

    /// True when the function is identically zero by construction.
    pub fn is_zero(&self) -> bool {
        match self {
            MatrixFunction::Constant(c) => c.iter().all(|z| z.re == T::zero() && z.im == T::zero()),
            MatrixFunction::Polynomial(p) => p
                .coeffs
                .iter()
                .all(|c| c.iter().all(|z| z.re == T::zero() && z.im == T::zero())),
            MatrixFunction::Combination { terms, .. } => terms
                .iter()
                .all(|(w, f)| (w.re == T::zero() && w.im == T::zero()) || f.is_zero()),
            _ => false,
        }
    }

    /// Interior discontinuity points, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut out = match self {
            MatrixFunction::Piecewise { breaks, .. } => breaks.clone(),
            MatrixFunction::Combination { terms, .. } => {
                terms.iter().flat_map(|(_, f)| f.breakpoints()).collect()
            }
            _ => Vec::new(),
        };
        out.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        out.dedup();
        out
    }

    pub fn eval(&self, t: T) -> CMatrix<T> {
        self.eval_unchecked(0, t, None)
    }

    /// Derivative of the given order at `t`.
    pub fn derivative(&self, order: usize, t: T) -> Result<CMatrix<T>> {
        self.check_order(order)?;
        Ok(self.eval_unchecked(order, t, None))
    }

    /// Like [`derivative`](Self::derivative), but piecewise descriptors use
    /// the piece that contains the segment `[lo, hi]`. Needed when `t` sits
    /// on a break.
    pub fn derivative_within(&self, order: usize, t: T, lo: T, hi: T) -> Result<CMatrix<T>> {
        self.check_order(order)?;
        let mid = (lo + hi) / T::lit(2.0);
        Ok(self.eval_unchecked(order, t, Some(mid)))
    }

    fn check_order(&self, order: usize) -> Result<()> {
        match self.max_derivative_order() {
            Some(cap) if order > cap => Err(Error::InsufficientSmoothness {
                what: "matrix function".into(),
                required: order,
                available: cap,
            }),
            _ => Ok(()),
        }
    }

    fn eval_unchecked(&self, order: usize, t: T, locator: Option<T>) -> CMatrix<T> {
        match self {
            MatrixFunction::Constant(c) => {
                if order == 0 {
                    c.clone()
                } else {
                    CMatrix::zeros(c.nrows(), c.ncols())
                }
            }
            MatrixFunction::Polynomial(p) => p.derivative(order, t),
            MatrixFunction::Sampled(s) => s.derivative(order, t),
            MatrixFunction::Piecewise { breaks, pieces } => {
                let key = locator.unwrap_or(t);
                let idx = breaks
                    .partition_point(|&x| x <= key)
                    .saturating_sub(1)
                    .min(pieces.len() - 1);
                pieces[idx].derivative(order, t)
            }
            MatrixFunction::Combination { rows, cols, terms } => {
                let mut acc = CMatrix::zeros(*rows, *cols);
                for (w, f) in terms {
                    acc += f.eval_unchecked(order, t, locator) * *w;
                }
                acc
            }
        }
    }
}
