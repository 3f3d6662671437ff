//! Closed-form test problems with independently known characteristic
//! matrices, plus random generators for them.
//!
//! * `y' + Ay = f`, `By = Σ_k α_k y^{(k)}(a)`: `M = Σ_k α_k (-A)^k`.
//! * `y' = f` with multipoint conditions `Σ_k Σ_j α_{kj} y^{(β_kj)}(t_k)`,
//!   `β_{k0} = 0`: `M = Σ_k α_{k0}`.
//! * `y'' + Ay' = f` with two-point conditions
//!   `Σ_k α_k y^{(k)}(a) + β_k y^{(k)}(b)`: `Y_1 ≡ I`,
//!   `Y_2(t) = φ(A, t - a) = ∫_0^{t-a} e^{-As} ds`, so
//!   `M = (α_0 + β_0 ; β_0 φ(A, b - a) + Σ_{k≥1} (α_k + β_k E)(-A)^{k-1})`
//!   with `E = e^{-A(b-a)}`.
//!
//! Applying `B` to `e^{-A(t-a)} = Y_1 - Y_2 A` instead of `Y_2` gives the
//! exponential form `(α_0 + β_0 ; Σ_k (α_k + β_k E)(-A)^k) = M T` with
//! `T = [[I, I], [0, -A]]`.

use num_complex::Complex;
use rand::Rng;

use crate::error::Result;
use crate::odeint::matrix_exponential;
use crate::problem::{
    BoundaryOperator, BvProblem, Exponent, Interval, MatrixFunction, PointCondition, ProblemDims,
};
use crate::scalar::{to_c, CMatrix, CVector, Real};

/// Uniform sample from the closed unit disc.
pub fn unit_disc<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let radius = rng.gen::<f64>().sqrt();
    let angle = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex::new(T::lit(radius * angle.cos()), T::lit(radius * angle.sin()))
}

pub fn random_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| unit_disc(rng))
}

/// `rows × cols` with rank exactly `rank` (generically).
pub fn random_matrix_of_rank<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    rank: usize,
) -> CMatrix<T> {
    random_matrix::<T, R>(rng, rows, rank) * random_matrix::<T, R>(rng, rank, cols)
}

/// `Σ_k α_k X^k`.
pub fn matrix_polynomial<T: Real>(alphas: &[CMatrix<T>], x: &CMatrix<T>) -> CMatrix<T> {
    let (rows, m) = alphas[0].shape();
    let mut power = CMatrix::<T>::identity(m, m);
    let mut out = CMatrix::<T>::zeros(rows, m);
    for alpha in alphas {
        out += alpha * &power;
        power = &power * x;
    }
    out
}

fn horizontal<T: Real>(left: &CMatrix<T>, right: &CMatrix<T>) -> CMatrix<T> {
    let mut out = CMatrix::<T>::zeros(left.nrows(), left.ncols() + right.ncols());
    out.columns_mut(0, left.ncols()).copy_from(left);
    out.columns_mut(left.ncols(), right.ncols()).copy_from(right);
    out
}

/// `y' + Ay = 0` on `interval`, `By = Σ_{k<n+1} α_k y^{(k)}(a)`.
pub fn first_order_problem<T: Real>(
    a: &CMatrix<T>,
    alphas: Vec<CMatrix<T>>,
    interval: Interval<T>,
) -> BvProblem<T> {
    let m = a.nrows();
    let l = alphas[0].nrows();
    let n = alphas.len() - 1;
    BvProblem {
        dims: ProblemDims::new(m, 1, n, l, Exponent::Two),
        interval,
        coefficients: vec![MatrixFunction::Constant(a.clone())],
        rhs: MatrixFunction::zeros(m, 1),
        boundary: BoundaryOperator::from_jets(alphas),
        c: CVector::zeros(l),
    }
}

/// `Σ_k α_k (-A)^k`.
pub fn first_order_closed_form<T: Real>(a: &CMatrix<T>, alphas: &[CMatrix<T>]) -> CMatrix<T> {
    matrix_polynomial(alphas, &(-a))
}

/// One multipoint condition term `weight · y^{(order)}(point)`.
pub type PointTerm<T> = PointCondition<T>;

/// `y' = 0` with conditions given as point terms; `n` fixes the jet length
/// `n + 1`, so every order must be at most `n`.
pub fn multipoint_problem<T: Real>(
    m: usize,
    l: usize,
    n: usize,
    interval: Interval<T>,
    terms: &[PointTerm<T>],
) -> Result<BvProblem<T>> {
    Ok(BvProblem {
        dims: ProblemDims::new(m, 1, n, l, Exponent::Two),
        interval,
        coefficients: vec![MatrixFunction::zeros(m, m)],
        rhs: MatrixFunction::zeros(m, 1),
        boundary: BoundaryOperator::from_point_conditions(interval, n + 1, l, m, terms)?,
        c: CVector::zeros(l),
    })
}

/// Sum of the order-zero weights.
pub fn multipoint_closed_form<T: Real>(m: usize, l: usize, terms: &[PointTerm<T>]) -> CMatrix<T> {
    terms
        .iter()
        .filter(|t| t.order == 0)
        .fold(CMatrix::zeros(l, m), |acc, t| acc + &t.weight)
}

/// `y'' + Ay' = 0`, `By = Σ_{k<n+2} α_k y^{(k)}(a) + β_k y^{(k)}(b)`.
pub fn second_order_problem<T: Real>(
    a: &CMatrix<T>,
    alphas: Vec<CMatrix<T>>,
    betas: &[CMatrix<T>],
    interval: Interval<T>,
) -> Result<BvProblem<T>> {
    let m = a.nrows();
    let l = alphas[0].nrows();
    let jets = alphas.len();
    let at_b: Vec<PointCondition<T>> = betas
        .iter()
        .enumerate()
        .map(|(k, w)| PointCondition {
            point: interval.b,
            order: k,
            weight: w.clone(),
        })
        .collect();
    let boundary = BoundaryOperator::from_jets(alphas)
        .plus(&BoundaryOperator::from_point_conditions(interval, jets, l, m, &at_b)?)?;
    Ok(BvProblem {
        dims: ProblemDims::new(m, 2, jets - 2, l, Exponent::Two),
        interval,
        coefficients: vec![MatrixFunction::zeros(m, m), MatrixFunction::Constant(a.clone())],
        rhs: MatrixFunction::zeros(m, 1),
        boundary,
        c: CVector::zeros(l),
    })
}

/// `φ(A, h) = ∫_0^h e^{-As} ds`, read off the top-right block of
/// `exp([[-A, I], [0, 0]] h)` so that singular `A` needs no special case.
pub fn integrated_exponential<T: Real>(a: &CMatrix<T>, h: T) -> CMatrix<T> {
    let m = a.nrows();
    let mut big = CMatrix::<T>::zeros(2 * m, 2 * m);
    big.view_mut((0, 0), (m, m)).copy_from(&(-a * to_c(h)));
    big.view_mut((0, m), (m, m)).fill_with_identity();
    big.view_mut((0, m), (m, m)).scale_mut(h);
    matrix_exponential(&big).view((0, m), (m, m)).into_owned()
}

/// `M = [BY_1, BY_2]` for the two-point second-order problem.
pub fn second_order_closed_form<T: Real>(
    a: &CMatrix<T>,
    alphas: &[CMatrix<T>],
    betas: &[CMatrix<T>],
    length: T,
) -> CMatrix<T> {
    let m = a.nrows();
    let l = alphas[0].nrows();
    let e = matrix_exponential(&(-a * to_c(length)));
    let zero = CMatrix::<T>::zeros(l, m);
    let beta = |k: usize| betas.get(k).unwrap_or(&zero);
    let first = &alphas[0] + beta(0);
    let shifted: Vec<CMatrix<T>> = (1..alphas.len())
        .map(|k| &alphas[k] + beta(k) * &e)
        .collect();
    let mut second = beta(0) * integrated_exponential(a, length);
    if !shifted.is_empty() {
        second += matrix_polynomial(&shifted, &(-a));
    }
    horizontal(&first, &second)
}

/// `(α_0 + β_0 ; Σ_k (α_k + β_k E)(-A)^k)`, i.e. `B` applied to `I` and
/// `e^{-A(t-a)}`.
pub fn second_order_exponential_form<T: Real>(
    a: &CMatrix<T>,
    alphas: &[CMatrix<T>],
    betas: &[CMatrix<T>],
    length: T,
) -> CMatrix<T> {
    let (l, m) = alphas[0].shape();
    let e = matrix_exponential(&(-a * to_c(length)));
    let zero = CMatrix::<T>::zeros(l, m);
    let beta = |k: usize| betas.get(k).unwrap_or(&zero);
    let terms: Vec<CMatrix<T>> = (0..alphas.len()).map(|k| &alphas[k] + beta(k) * &e).collect();
    horizontal(&(&alphas[0] + beta(0)), &matrix_polynomial(&terms, &(-a)))
}

/// `T = [[I, I], [0, -A]]`, mapping `[BY_1, BY_2]` to the exponential form.
pub fn exponential_basis_change<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let m = a.nrows();
    let mut t = CMatrix::<T>::zeros(2 * m, 2 * m);
    t.view_mut((0, 0), (m, m)).fill_with_identity();
    t.view_mut((0, m), (m, m)).fill_with_identity();
    t.view_mut((m, m), (m, m)).copy_from(&(-a));
    t
}

/// Random first-order instance with `l = m` and `n + 1` jet matrices.
pub fn random_first_order<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
) -> (CMatrix<T>, Vec<CMatrix<T>>) {
    let a = random_matrix(rng, m, m);
    let alphas = (0..=n).map(|_| random_matrix(rng, m, m)).collect();
    (a, alphas)
}

/// Random two-point second-order instance with `l = 2m` and `n + 2` jet
/// matrices at each end.
pub fn random_second_order<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
) -> (CMatrix<T>, Vec<CMatrix<T>>, Vec<CMatrix<T>>) {
    let a = random_matrix(rng, m, m);
    let alphas = (0..n + 2).map(|_| random_matrix(rng, 2 * m, m)).collect();
    let betas = (0..n + 2).map(|_| random_matrix(rng, 2 * m, m)).collect();
    (a, alphas, betas)
}

/// Random multipoint instance on `[0, 1]` with three points (the first at
/// `a`), whose order-zero weights sum to a matrix of the given rank. Each
/// point also carries terms of orders `1..=n`.
pub fn random_multipoint<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    l: usize,
    n: usize,
    rank: usize,
) -> Vec<PointTerm<T>> {
    let target: CMatrix<T> = random_matrix_of_rank(rng, l, m, rank);
    let first = random_matrix::<T, R>(rng, l, m);
    let second = random_matrix::<T, R>(rng, l, m);
    let third = &target - &first - &second;
    let points = [
        T::zero(),
        T::lit(0.2 + 0.3 * rng.gen::<f64>()),
        T::lit(0.6 + 0.4 * rng.gen::<f64>()),
    ];
    let mut terms = Vec::new();
    for (point, weight) in points.into_iter().zip([first, second, third]) {
        terms.push(PointCondition { point, order: 0, weight });
        for order in 1..=n {
            terms.push(PointCondition {
                point,
                order,
                weight: random_matrix(rng, l, m),
            });
        }
    }
    terms
}

/// Random problem on `[0, 1]` with polynomial coefficients of degree at most
/// 2, a random jet part and, on a coin flip, a linear kernel `Φ`.
pub fn random_problem<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    r: usize,
    n: usize,
    l: usize,
) -> BvProblem<T> {
    let interval = Interval::new(T::zero(), T::one()).expect("unit interval");
    let coefficients = (0..r)
        .map(|_| {
            let degree = rng.gen_range(0..=2);
            let coeffs = (0..=degree).map(|_| random_matrix(rng, m, m)).collect();
            MatrixFunction::polynomial(coeffs).expect("coefficient shapes agree")
        })
        .collect();
    let alphas = (0..n + r).map(|_| random_matrix(rng, l, m)).collect();
    let phi = if rng.gen_bool(0.5) {
        Some(
            MatrixFunction::polynomial(vec![random_matrix(rng, l, m), random_matrix(rng, l, m)])
                .expect("kernel shapes agree"),
        )
    } else {
        None
    };
    BvProblem {
        dims: ProblemDims::new(m, r, n, l, Exponent::Two),
        interval,
        coefficients,
        rhs: MatrixFunction::Constant(random_matrix(rng, m, 1)),
        boundary: BoundaryOperator::new(alphas, phi),
        c: CVector::from_fn(l, |_, _| unit_disc(rng)),
    }
}

/// A problem built around a known polynomial solution.
#[derive(Debug, Clone)]
pub struct Manufactured<T: Real> {
    pub problem: BvProblem<T>,
    /// `y(t) = Σ_q C_q (t - a)^q`, each `C_q` an `m × 1` column.
    pub solution: crate::problem::MatrixPolynomial<T>,
}

impl<T: Real> Manufactured<T> {
    /// The exact solution sampled with derivatives up to `max_order`.
    pub fn trajectory(&self, grid: crate::odeint::Grid<T>, max_order: usize) -> Result<crate::odeint::Trajectory<T>> {
        crate::odeint::Trajectory::from_fn(grid, max_order, |k, t| self.solution.derivative(k, t))
    }
}

/// Constant-coefficient problem on `[0, 1]` with `l = mr`, a constant kernel
/// scaled by one half, and a random polynomial solution of degree `n + r + 1`.
/// `f = Ly` and `c = By` are computed exactly.
pub fn manufactured_problem<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    r: usize,
    n: usize,
) -> Manufactured<T> {
    let interval = Interval::new(T::zero(), T::one()).expect("unit interval");
    let jets = n + r;
    let l = m * r;
    let a_mats: Vec<CMatrix<T>> = (0..r).map(|_| random_matrix(rng, m, m)).collect();
    let ys: Vec<CMatrix<T>> = (0..=jets + 1).map(|_| random_matrix(rng, m, 1)).collect();
    let y = crate::problem::MatrixPolynomial::new(m, 1, interval.a, ys).expect("column shapes");

    // coefficients of y^{(j)} in powers of (t - a)
    let derived = |j: usize| -> Vec<CMatrix<T>> {
        let c = y.coeffs();
        (0..c.len())
            .map(|q| {
                if q + j < c.len() {
                    let fall = crate::scalar::factorial::<T>(q + j) / crate::scalar::factorial::<T>(q);
                    &c[q + j] * to_c(fall)
                } else {
                    CMatrix::zeros(m, 1)
                }
            })
            .collect()
    };
    let mut f = derived(r);
    for (j, a) in a_mats.iter().enumerate() {
        for (fq, dq) in f.iter_mut().zip(derived(j)) {
            *fq += a * dq;
        }
    }
    let rhs = MatrixFunction::Polynomial(
        crate::problem::MatrixPolynomial::new(m, 1, interval.a, f).expect("column shapes"),
    );

    let alphas: Vec<CMatrix<T>> = (0..jets).map(|_| random_matrix(rng, l, m)).collect();
    let phi: CMatrix<T> = random_matrix::<T, R>(rng, l, m) * to_c(T::lit(0.5));
    let mut c = CMatrix::<T>::zeros(l, 1);
    for (k, alpha) in alphas.iter().enumerate() {
        c += alpha * y.derivative(k, interval.a);
    }
    c += &phi * (y.derivative(jets - 1, interval.b) - y.derivative(jets - 1, interval.a));

    Manufactured {
        problem: BvProblem {
            dims: ProblemDims::new(m, r, n, l, Exponent::Two),
            interval,
            coefficients: a_mats.into_iter().map(MatrixFunction::Constant).collect(),
            rhs,
            boundary: BoundaryOperator::new(alphas, Some(MatrixFunction::Constant(phi))),
            c: CVector::from_column_slice(c.as_slice()),
        },
        solution: y,
    }
}

/// `‖X - Y‖_F / ‖Y‖_F`, or the absolute distance when `Y = 0`.
pub fn relative_error<T: Real>(x: &CMatrix<T>, y: &CMatrix<T>) -> T {
    let d = (x - y).norm();
    let s = y.norm();
    if s > T::zero() {
        d / s
    } else {
        d
    }
}
