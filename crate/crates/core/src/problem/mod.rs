//! Boundary-value problem data model.
//!
//! A problem is the order-`r` system
//! `y^{(r)} + Σ_{j<r} A_j(t) y^{(j)} = f(t)` on `[a, b]` together with `l`
//! scalar conditions `By = c`, where `B` reads the jet of `y` at `a` up to
//! order `n + r - 1` plus an integral of `y^{(n+r)}` against a kernel.

mod boundary;
mod function;
mod norms;
pub mod quadrature;

use std::fmt;

pub use boundary::{BoundaryOperator, PointCondition};
pub use function::{CubicSpline, MatrixFunction, MatrixPolynomial};
pub use norms::{lebesgue_norm, sobolev_norm};

use crate::error::{Error, Result};
use crate::odeint::Trajectory;
use crate::scalar::{binomial, CMatrix, CVector, Real};

/// Lebesgue exponent used in every reported norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    One,
    Two,
    Infinity,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exponent::One => "1",
            Exponent::Two => "2",
            Exponent::Infinity => "inf",
        })
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Exponent::One),
            "2" => Ok(Exponent::Two),
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => Err(Error::InvalidArgument(format!(
                "exponent must be 1, 2 or inf, got `{other}`"
            ))),
        }
    }
}

/// `m` components, order `r`, smoothness `n`, `l` conditions, exponent `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemDims {
    pub m: usize,
    pub r: usize,
    pub n: usize,
    pub l: usize,
    pub p: Exponent,
}

impl ProblemDims {
    pub fn new(m: usize, r: usize, n: usize, l: usize, p: Exponent) -> Self {
        Self { m, r, n, l, p }
    }

    /// Number of scalar equations of the companion system, `m r`.
    pub fn mr(&self) -> usize {
        self.m * self.r
    }

    /// Length of the boundary jet, `n + r`.
    pub fn jet_len(&self) -> usize {
        self.n + self.r
    }

    /// Fredholm index `mr - l`.
    pub fn index(&self) -> i64 {
        self.mr() as i64 - self.l as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T: Real> {
    pub a: T,
    pub b: T,
}

impl<T: Real> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        let iv = Self { a, b };
        match iv.problem() {
            None => Ok(iv),
            Some(msg) => Err(Error::InvalidArgument(msg)),
        }
    }

    fn problem(&self) -> Option<String> {
        if !(self.a.is_finite() && self.b.is_finite()) {
            Some("interval endpoints must be finite".into())
        } else if !(self.a < self.b) {
            Some(format!(
                "interval requires a < b, got [{}, {}]",
                self.a.as_f64(),
                self.b.as_f64()
            ))
        } else {
            None
        }
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }

    pub fn contains(&self, t: T) -> bool {
        self.a <= t && t <= self.b
    }
}

/// Category of a validation finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Dimensions,
    Interval,
    CoefficientCount,
    CoefficientShape,
    CoefficientSmoothness,
    RhsShape,
    RhsSmoothness,
    BoundaryJetCount,
    BoundaryShape,
    KernelShape,
    TargetLength,
}

impl ViolationKind {
    pub fn label(&self) -> &'static str {
        match self {
            ViolationKind::Dimensions => "dimensions",
            ViolationKind::Interval => "interval",
            ViolationKind::CoefficientCount => "coefficient count",
            ViolationKind::CoefficientShape => "coefficient shape",
            ViolationKind::CoefficientSmoothness => "coefficient smoothness",
            ViolationKind::RhsShape => "rhs shape",
            ViolationKind::RhsSmoothness => "rhs smoothness",
            ViolationKind::BoundaryJetCount => "boundary operator jet count",
            ViolationKind::BoundaryShape => "boundary operator shape",
            ViolationKind::KernelShape => "boundary kernel shape",
            ViolationKind::TargetLength => "target vector length",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.label(), self.message)
    }
}

/// Outcome of [`BvProblem::validate`]; empty iff the problem is well-formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            message: message.into(),
        });
    }
}

/// `y^{(r)} + Σ_j A_j y^{(j)} = f` on `[a, b]`, `By = c`.
#[derive(Debug, Clone, PartialEq)]
pub struct BvProblem<T: Real> {
    pub dims: ProblemDims,
    pub interval: Interval<T>,
    /// `A_0 … A_{r-1}`; `A_j` multiplies `y^{(j)}`.
    pub coefficients: Vec<MatrixFunction<T>>,
    pub rhs: MatrixFunction<T>,
    pub boundary: BoundaryOperator<T>,
    pub c: CVector<T>,
}

impl<T: Real> BvProblem<T> {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let d = self.dims;
        if d.m == 0 || d.r == 0 || d.l == 0 {
            report.push(
                ViolationKind::Dimensions,
                format!("m, r, l must be positive (m={}, r={}, l={})", d.m, d.r, d.l),
            );
        }
        if let Some(msg) = self.interval.problem() {
            report.push(ViolationKind::Interval, msg);
        }

        if self.coefficients.len() != d.r {
            report.push(
                ViolationKind::CoefficientCount,
                format!("expected r = {} coefficients, got {}", d.r, self.coefficients.len()),
            );
        }
        for (j, a) in self.coefficients.iter().enumerate() {
            if a.shape() != (d.m, d.m) {
                report.push(
                    ViolationKind::CoefficientShape,
                    format!("A_{j} is {}x{}, expected {}x{}", a.rows(), a.cols(), d.m, d.m),
                );
            }
            if !a.supports_order(d.n) {
                report.push(
                    ViolationKind::CoefficientSmoothness,
                    format!(
                        "A_{j} provides {} derivatives, n = {} required",
                        a.max_derivative_order().unwrap_or(0),
                        d.n
                    ),
                );
            }
        }

        if self.rhs.shape() != (d.m, 1) {
            report.push(
                ViolationKind::RhsShape,
                format!("f is {}x{}, expected {}x1", self.rhs.rows(), self.rhs.cols(), d.m),
            );
        }
        if !self.rhs.supports_order(d.n) {
            report.push(
                ViolationKind::RhsSmoothness,
                format!(
                    "f provides {} derivatives, n = {} required",
                    self.rhs.max_derivative_order().unwrap_or(0),
                    d.n
                ),
            );
        }

        if self.boundary.alphas.len() != d.jet_len() {
            report.push(
                ViolationKind::BoundaryJetCount,
                format!(
                    "expected n + r = {} jet matrices, got {}",
                    d.jet_len(),
                    self.boundary.alphas.len()
                ),
            );
        }
        for (k, alpha) in self.boundary.alphas.iter().enumerate() {
            if alpha.shape() != (d.l, d.m) {
                report.push(
                    ViolationKind::BoundaryShape,
                    format!(
                        "alpha_{k} is {}x{}, expected {}x{}",
                        alpha.nrows(),
                        alpha.ncols(),
                        d.l,
                        d.m
                    ),
                );
            }
        }
        if let Some(phi) = &self.boundary.phi {
            if phi.shape() != (d.l, d.m) {
                report.push(
                    ViolationKind::KernelShape,
                    format!("phi is {}x{}, expected {}x{}", phi.rows(), phi.cols(), d.l, d.m),
                );
            }
        }
        if self.c.len() != d.l {
            report.push(
                ViolationKind::TargetLength,
                format!("c has length {}, expected l = {}", self.c.len(), d.l),
            );
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidProblem(report.violations))
        }
    }

    /// `Ly - f` with derivatives `0..=n`, using the stored jet of `y` and the
    /// exact derivatives of the coefficient descriptors.
    pub fn ode_residual(&self, y: &Trajectory<T>) -> Result<Trajectory<T>> {
        let d = self.dims;
        y.require_order(d.n + d.r)?;
        if y.rows() != d.m {
            return Err(Error::Dimension(format!(
                "trajectory has {} rows, problem has m = {}",
                y.rows(),
                d.m
            )));
        }
        let forcing = if y.cols() == 1 { Some(&self.rhs) } else { None };
        apply_differential_operator(&self.coefficients, forcing, y, d.n)
    }
}

/// `(Ly - f)^{(i)}` for `i = 0..=top` via Leibniz's rule:
/// `y^{(r+i)} + Σ_j Σ_ν C(i,ν) A_j^{(ν)} y^{(j+i-ν)} - f^{(i)}`.
pub(crate) fn apply_differential_operator<T: Real>(
    coefficients: &[MatrixFunction<T>],
    forcing: Option<&MatrixFunction<T>>,
    y: &Trajectory<T>,
    top: usize,
) -> Result<Trajectory<T>> {
    let r = coefficients.len();
    y.require_order(r + top)?;
    let grid = *y.grid();
    let mut jets = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let mut samples = Vec::with_capacity(grid.len());
        for (node, t) in grid.nodes().enumerate() {
            let mut acc: CMatrix<T> = y.at(r + i, node).clone();
            for (j, a) in coefficients.iter().enumerate() {
                for nu in 0..=i {
                    let da = a.derivative(nu, t)?;
                    acc += da * y.at(j + i - nu, node) * crate::scalar::to_c(binomial::<T>(i, nu));
                }
            }
            if let Some(f) = forcing {
                acc -= f.derivative(i, t)?;
            }
            samples.push(acc);
        }
        jets.push(samples);
    }
    Trajectory::from_jets(grid, jets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn scalar_problem() -> BvProblem<f64> {
        BvProblem {
            dims: ProblemDims::new(1, 1, 0, 1, Exponent::Two),
            interval: Interval::new(0.0, 1.0).unwrap(),
            coefficients: vec![MatrixFunction::from_real(1, 1, &[0.0])],
            rhs: MatrixFunction::zeros(1, 1),
            boundary: BoundaryOperator::from_jets(vec![CMatrix::identity(1, 1)]),
            c: CVector::from_element(1, Complex::new(1.0, 0.0)),
        }
    }

    #[test]
    fn well_formed_problem() {
        assert!(scalar_problem().validate().is_ok());
    }

    #[test]
    fn jet_count_violation() {
        let mut p = scalar_problem();
        p.dims.n = 1;
        p.coefficients[0] = MatrixFunction::from_real(1, 1, &[0.0]);
        let report = p.validate();
        assert!(report.has(ViolationKind::BoundaryJetCount));
        assert!(report.violations[0].to_string().starts_with("boundary operator jet count"));
    }

    #[test]
    fn coefficient_shape_violation() {
        let mut p = scalar_problem();
        p.dims.m = 2;
        p.coefficients[0] = MatrixFunction::zeros(2, 3);
        assert!(p.validate().has(ViolationKind::CoefficientShape));
    }

    #[test]
    fn sampled_coefficient_smoothness() {
        let mut p = scalar_problem();
        p.dims.n = 3;
        p.boundary = BoundaryOperator::from_jets(vec![CMatrix::identity(1, 1); 4]);
        let knots: Vec<f64> = (0..5).map(|i| i as f64 / 4.0).collect();
        p.coefficients[0] = MatrixFunction::sampled(knots, vec![CMatrix::identity(1, 1); 5]).unwrap();
        let report = p.validate();
        assert!(report.has(ViolationKind::CoefficientSmoothness));
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn bad_interval_and_target() {
        let mut p = scalar_problem();
        p.interval = Interval { a: 1.0, b: 1.0 };
        p.c = CVector::zeros(3);
        let report = p.validate();
        assert!(report.has(ViolationKind::Interval));
        assert!(report.has(ViolationKind::TargetLength));
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert!("3".parse::<Exponent>().is_err());
    }
}
