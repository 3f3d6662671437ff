//! Parameter-dependent problem families and the continuity checks that go
//! with them.
//!
//! A family `P(ε)` is evaluated on a decreasing schedule `ε_1 > ε_2 > … > 0`.
//! For every scheduled value the lab records how far `M(ε)` is from `M(0)`,
//! the Fredholm numbers and solvability of `P(ε)`, the error
//! `‖y(·;0) - y(·;ε)‖_{n+r,p}` and the discrepancy of `y(·;0)` in `P(ε)`.
//!
//! "Small ε" always means the last half of the schedule.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::charmat::{assemble, CharacteristicMatrix, FredholmNumbers};
use crate::error::{Error, Result};
use crate::odeint::{Grid, Trajectory};
use crate::problem::{sobolev_norm, BvProblem, MatrixFunction};
use crate::scalar::{to_c, CMatrix, CVector, Real};
use crate::solver::{residual_check, solve_with, SolveOptions, SolveStatus};

/// Values below this are treated as integrator noise.
pub const NOISE_FLOOR: f64 = 1e-8;

/// Bound on the relative change of the tail ratio spread when the last
/// schedule entry is added.
pub const SPREAD_TOLERANCE: f64 = 0.10;

/// Directions `ΔX` of a linear family `X(ε) = X(0) + ε ΔX`. Missing entries
/// are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbations<T: Real> {
    /// `ΔA_j`, indexed like the base coefficients.
    pub coefficients: Vec<Option<MatrixFunction<T>>>,
    /// `Δα_k`, indexed like the base jet matrices.
    pub alphas: Vec<Option<CMatrix<T>>>,
    pub phi: Option<MatrixFunction<T>>,
    pub rhs: Option<MatrixFunction<T>>,
    pub c: Option<CVector<T>>,
}

impl<T: Real> Default for Perturbations<T> {
    fn default() -> Self {
        Self {
            coefficients: Vec::new(),
            alphas: Vec::new(),
            phi: None,
            rhs: None,
            c: None,
        }
    }
}

pub type ProblemGenerator<T> = Arc<dyn Fn(T) -> Result<BvProblem<T>> + Send + Sync>;

/// How the problem depends on `ε`.
#[derive(Clone)]
pub enum FamilyLaw<T: Real> {
    Linear(Perturbations<T>),
    /// Arbitrary dependence; must return the base problem at `ε = 0`.
    Generator(ProblemGenerator<T>),
}

impl<T: Real> fmt::Debug for FamilyLaw<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyLaw::Linear(p) => f.debug_tuple("Linear").field(p).finish(),
            FamilyLaw::Generator(_) => f.write_str("Generator(..)"),
        }
    }
}

/// Strictly decreasing positive parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<T: Real>(Vec<T>);

impl<T: Real> Schedule<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty schedule".into()));
        }
        if values.iter().any(|&e| !(e > T::zero()) || !e.is_finite()) {
            return Err(Error::InvalidArgument("schedule values must be positive".into()));
        }
        if values.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidArgument("schedule must be strictly decreasing".into()));
        }
        Ok(Self(values))
    }

    /// `start · factor^i`, `i = 0..count`.
    pub fn geometric(start: T, factor: T, count: usize) -> Result<Self> {
        if !(factor > T::zero() && factor < T::one()) {
            return Err(Error::InvalidArgument("geometric factor must lie in (0, 1)".into()));
        }
        Self::new((0..count).map(|i| start * factor.powi(i as i32)).collect())
    }

    /// `1/k` for `k = first, first + 1, …`, for sequences indexed by `k → ∞`.
    pub fn harmonic(first: usize, count: usize) -> Result<Self> {
        Self::new(
            (first.max(1)..first.max(1) + count)
                .map(|k| T::one() / T::lit(k as f64))
                .collect(),
        )
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the first entry of the last half.
    pub fn tail_start(&self) -> usize {
        self.0.len() / 2
    }
}

#[derive(Debug, Clone)]
pub struct ProblemFamily<T: Real> {
    pub base: BvProblem<T>,
    pub law: FamilyLaw<T>,
    pub schedule: Schedule<T>,
}

impl<T: Real> ProblemFamily<T> {
    pub fn linear(base: BvProblem<T>, perturbations: Perturbations<T>, schedule: Schedule<T>) -> Self {
        Self {
            base,
            law: FamilyLaw::Linear(perturbations),
            schedule,
        }
    }

    /// Checks `l = mr` and the shapes of every perturbation.
    pub fn validate(&self) -> Result<()> {
        self.base.ensure_valid()?;
        let d = self.base.dims;
        if d.l != d.mr() {
            return Err(Error::InvalidArgument(format!(
                "continuity studies need l = mr, got l = {} and mr = {}",
                d.l,
                d.mr()
            )));
        }
        if let FamilyLaw::Linear(p) = &self.law {
            if p.coefficients.len() > d.r {
                return Err(Error::Dimension("more coefficient perturbations than r".into()));
            }
            for (j, a) in p.coefficients.iter().enumerate() {
                if let Some(a) = a {
                    if a.shape() != (d.m, d.m) {
                        return Err(Error::Dimension(format!("ΔA_{j} is not {0}x{0}", d.m)));
                    }
                }
            }
            if p.alphas.len() > d.jet_len() {
                return Err(Error::Dimension("more Δα than n + r".into()));
            }
            for (k, a) in p.alphas.iter().enumerate() {
                if let Some(a) = a {
                    if a.shape() != (d.l, d.m) {
                        return Err(Error::Dimension(format!("Δα_{k} is not {}x{}", d.l, d.m)));
                    }
                }
            }
            if let Some(phi) = &p.phi {
                if phi.shape() != (d.l, d.m) {
                    return Err(Error::Dimension("ΔΦ shape".into()));
                }
            }
            if let Some(f) = &p.rhs {
                if f.shape() != (d.m, 1) {
                    return Err(Error::Dimension("Δf shape".into()));
                }
            }
            if let Some(c) = &p.c {
                if c.len() != d.l {
                    return Err(Error::Dimension("Δc length".into()));
                }
            }
        }
        Ok(())
    }

    /// The member `P(ε)`.
    pub fn at(&self, eps: T) -> Result<BvProblem<T>> {
        match &self.law {
            FamilyLaw::Generator(g) => g(eps),
            FamilyLaw::Linear(p) => {
                let w = to_c(eps);
                let mut out = self.base.clone();
                for (a, da) in out.coefficients.iter_mut().zip(&p.coefficients) {
                    if let Some(da) = da {
                        *a = a.plus_scaled(w, da)?;
                    }
                }
                for (a, da) in out.boundary.alphas.iter_mut().zip(&p.alphas) {
                    if let Some(da) = da {
                        *a += da * w;
                    }
                }
                if let Some(dphi) = &p.phi {
                    out.boundary.phi = Some(match &out.boundary.phi {
                        Some(phi) => phi.plus_scaled(w, dphi)?,
                        None => MatrixFunction::combination(
                            dphi.rows(),
                            dphi.cols(),
                            vec![(w, dphi.clone())],
                        )?,
                    });
                }
                if let Some(df) = &p.rhs {
                    out.rhs = out.rhs.plus_scaled(w, df)?;
                }
                if let Some(dc) = &p.c {
                    out.c += dc * w;
                }
                Ok(out)
            }
        }
    }
}

/// Verdicts on the hypotheses under which solutions depend continuously on ε.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdicts<T: Real> {
    /// The ε = 0 problem has only the trivial homogeneous solution.
    pub trivial_kernel: bool,
    /// `Σ_j ‖A_j(ε) - A_j(0)‖_{n,p}` per scheduled ε.
    pub coefficient_distances: Vec<T>,
    pub coefficients_converge: bool,
    /// `max_probe ‖B(ε)y - B(0)y‖` per scheduled ε.
    pub boundary_distances: Vec<T>,
    pub boundary_converges: bool,
}

impl<T: Real> ConditionVerdicts<T> {
    pub fn all_hold(&self) -> bool {
        self.trivial_kernel && self.coefficients_converge && self.boundary_converges
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityEntry<T: Real> {
    pub eps: T,
    pub matrix_distance: T,
    pub fredholm: FredholmNumbers,
    pub status: SolveStatus,
    pub error: Option<T>,
    pub discrepancy: Option<T>,
    pub ratio: Option<T>,
}

#[derive(Debug, Clone)]
pub struct ContinuityReport<T: Real> {
    pub entries: Vec<ContinuityEntry<T>>,
    pub base_fredholm: FredholmNumbers,
    pub base_status: SolveStatus,
    pub base_singular_values: Vec<T>,
    pub conditions: ConditionVerdicts<T>,
    /// Empirical `γ̂₁ = min ratio`.
    pub gamma_lower: Option<T>,
    /// Empirical `γ̂₂ = max ratio`.
    pub gamma_upper: Option<T>,
    pub grid_steps: usize,
    pub options: SolveOptions<T>,
}

impl<T: Real> ContinuityReport<T> {
    pub fn eps(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.eps).collect()
    }

    pub fn tail(&self) -> &[ContinuityEntry<T>] {
        &self.entries[self.entries.len() / 2..]
    }
}

/// Monomial probes `(t - a)^q e_i`, `q = 0..=n+r`, with exact jets.
fn probes<T: Real>(problem: &BvProblem<T>, grid: &Grid<T>) -> Result<Vec<Trajectory<T>>> {
    let d = problem.dims;
    let top = d.jet_len();
    let a = problem.interval.a;
    let mut out = Vec::with_capacity(d.m * (top + 1));
    for i in 0..d.m {
        for q in 0..=top {
            out.push(Trajectory::from_fn(*grid, top, |k, t| {
                let mut v = CMatrix::<T>::zeros(d.m, 1);
                if k <= q {
                    let falling = (q - k + 1..=q).fold(T::one(), |acc, x| acc * T::lit(x as f64));
                    v[i] = to_c(falling * (t - a).powi((q - k) as i32));
                }
                v
            })?);
        }
    }
    Ok(out)
}

fn coefficient_distance<T: Real>(
    base: &BvProblem<T>,
    other: &BvProblem<T>,
    grid: &Grid<T>,
) -> Result<T> {
    let d = base.dims;
    let minus = Complex::new(-T::one(), T::zero());
    let mut total = T::zero();
    for (a0, ae) in base.coefficients.iter().zip(&other.coefficients) {
        let diff = ae.plus_scaled(minus, a0)?;
        let traj = Trajectory::from_function(*grid, &diff, d.n)?;
        total += sobolev_norm(&traj, d.n, d.p)?;
    }
    Ok(total)
}

fn boundary_distance<T: Real>(
    base: &BvProblem<T>,
    other: &BvProblem<T>,
    probes: &[Trajectory<T>],
) -> Result<T> {
    let mut worst = T::zero();
    for y in probes {
        let diff = (other.boundary.apply(y)? - base.boundary.apply(y)?).norm();
        if diff > worst {
            worst = diff;
        }
    }
    Ok(worst)
}

/// True when a distance sequence along a decreasing schedule tends to zero:
/// it is below the noise floor at the end, or it is nonincreasing and its
/// log-log slope against ε is at least 0.2.
pub fn trends_to_zero<T: Real>(eps: &[T], distances: &[T]) -> bool {
    let floor = T::lit(NOISE_FLOOR);
    match distances.last() {
        None => true,
        Some(&last) if last <= floor => true,
        Some(_) => {
            let slack = T::lit(1e-6);
            let monotone = distances
                .windows(2)
                .all(|w| w[1] <= w[0] * (T::one() + slack) + floor);
            let pairs: (Vec<T>, Vec<T>) = eps
                .iter()
                .zip(distances)
                .filter(|(_, &d)| d > floor)
                .map(|(&e, &d)| (e, d))
                .unzip();
            monotone
                && loglog_slope(&pairs.0, &pairs.1).is_some_and(|s| s >= T::lit(0.2))
        }
    }
}

/// Least-squares slope of `log y` against `log x`; `None` with fewer than
/// two usable points.
pub fn loglog_slope<T: Real>(x: &[T], y: &[T]) -> Option<T> {
    let pts: Vec<(T, T)> = x
        .iter()
        .zip(y)
        .filter(|(&a, &b)| a > T::zero() && b > T::zero())
        .map(|(&a, &b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = T::lit(pts.len() as f64);
    let mx = pts.iter().fold(T::zero(), |s, p| s + p.0) / n;
    let my = pts.iter().fold(T::zero(), |s, p| s + p.1) / n;
    let sxx = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.0 - mx));
    let sxy = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.1 - my));
    if sxx > T::zero() {
        Some(sxy / sxx)
    } else {
        None
    }
}

/// Evaluates the trivial-kernel, coefficient and boundary-convergence
/// conditions along the schedule.
pub fn check_conditions<T: Real>(
    family: &ProblemFamily<T>,
    grid: &Grid<T>,
) -> Result<ConditionVerdicts<T>> {
    check_conditions_with(family, grid, &SolveOptions::default())
}

pub fn check_conditions_with<T: Real>(
    family: &ProblemFamily<T>,
    grid: &Grid<T>,
    options: &SolveOptions<T>,
) -> Result<ConditionVerdicts<T>> {
    family.validate()?;
    let (m0, _) = assemble(&family.base, grid, options.rank_tolerance)?;
    let members = family
        .schedule
        .values()
        .iter()
        .map(|&e| family.at(e))
        .collect::<Result<Vec<_>>>()?;
    conditions_for(family, grid, &m0, &members)
}

fn conditions_for<T: Real>(
    family: &ProblemFamily<T>,
    grid: &Grid<T>,
    m0: &CharacteristicMatrix<T>,
    members: &[BvProblem<T>],
) -> Result<ConditionVerdicts<T>> {
    let probes = probes(&family.base, grid)?;
    let mut coefficient_distances = Vec::with_capacity(members.len());
    let mut boundary_distances = Vec::with_capacity(members.len());
    for p in members {
        coefficient_distances.push(coefficient_distance(&family.base, p, grid)?);
        boundary_distances.push(boundary_distance(&family.base, p, &probes)?);
    }
    let eps = family.schedule.values();
    Ok(ConditionVerdicts {
        trivial_kernel: m0.is_invertible(),
        coefficients_converge: trends_to_zero(eps, &coefficient_distances),
        coefficient_distances,
        boundary_converges: trends_to_zero(eps, &boundary_distances),
        boundary_distances,
    })
}

/// `d̃(ε) = ‖L(ε)y₀ - f(·;ε)‖_{n,p} + ‖B(ε)y₀ - c(ε)‖`.
pub fn discrepancy<T: Real>(problem_eps: &BvProblem<T>, y0: &Trajectory<T>) -> Result<T> {
    let (ode, boundary) = residual_check(problem_eps, y0)?;
    Ok(ode + boundary)
}

pub fn run_family<T: Real>(family: &ProblemFamily<T>, grid: &Grid<T>) -> Result<ContinuityReport<T>> {
    run_family_with(family, grid, &SolveOptions::default())
}

pub fn run_family_with<T: Real>(
    family: &ProblemFamily<T>,
    grid: &Grid<T>,
    options: &SolveOptions<T>,
) -> Result<ContinuityReport<T>> {
    family.validate()?;
    let d = family.base.dims;
    let base = solve_with(&family.base, grid, options)?;
    let y0 = base.solution.clone();
    let floor = T::lit(NOISE_FLOOR);

    let members = family
        .schedule
        .values()
        .iter()
        .map(|&e| family.at(e))
        .collect::<Result<Vec<_>>>()?;

    let mut entries = Vec::with_capacity(members.len());
    for (&eps, p) in family.schedule.values().iter().zip(&members) {
        let rep = solve_with(p, grid, options)?;
        let matrix_distance = rep.characteristic.distance(&base.characteristic)?;
        let disc = match &y0 {
            Some(y0) => Some(discrepancy(p, y0)?),
            None => None,
        };
        // a non-unique base solution is an arbitrary representative
        let error = match (&y0, &rep.solution) {
            (Some(y0), Some(ye)) if base.status == SolveStatus::Unique => {
                Some(sobolev_norm(&y0.minus(ye)?, d.jet_len(), d.p)?)
            }
            _ => None,
        };
        let ratio = match (error, disc) {
            (Some(e), Some(dd)) if e > floor && dd > floor => Some(e / dd),
            _ => None,
        };
        entries.push(ContinuityEntry {
            eps,
            matrix_distance,
            fredholm: rep.fredholm,
            status: rep.status,
            error,
            discrepancy: disc,
            ratio,
        });
    }

    let conditions = conditions_for(family, grid, &base.characteristic, &members)?;
    let ratios: Vec<T> = entries.iter().filter_map(|e| e.ratio).collect();
    let gamma_lower = ratios.iter().copied().reduce(|a, b| if b < a { b } else { a });
    let gamma_upper = ratios.iter().copied().reduce(|a, b| if b > a { b } else { a });

    Ok(ContinuityReport {
        entries,
        base_fredholm: base.fredholm,
        base_status: base.status,
        base_singular_values: base.characteristic.singular_values().to_vec(),
        conditions,
        gamma_lower,
        gamma_upper,
        grid_steps: grid.steps(),
        options: *options,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateCheck<T: Real> {
    pub gamma_lower: T,
    pub gamma_upper: T,
    /// `γ̂₂/γ̂₁` over the last half of the schedule.
    pub tail_spread: T,
    /// Relative change of the tail spread caused by the last entry.
    pub spread_change: T,
    pub pass: bool,
}

/// Empirical two-sided bound `γ̂₁ d̃ ≤ error ≤ γ̂₂ d̃` over the schedule.
///
/// Passes when `γ̂₁ > 0`, `γ̂₂` is finite and the tail spread changes by less
/// than [`SPREAD_TOLERANCE`] when the final schedule entry is added.
pub fn two_sided_estimate_check<T: Real>(report: &ContinuityReport<T>) -> Result<EstimateCheck<T>> {
    let floor = T::lit(NOISE_FLOOR);
    if report
        .entries
        .iter()
        .all(|e| e.discrepancy.is_none_or(|d| !(d > floor)))
    {
        return Err(Error::DegenerateFamily);
    }
    let ratios: Vec<T> = report.entries.iter().filter_map(|e| e.ratio).collect();
    if ratios.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "two-sided estimate needs at least 3 ratios, got {}",
            ratios.len()
        )));
    }
    let lo = |s: &[T]| s.iter().copied().fold(s[0], |a, b| if b < a { b } else { a });
    let hi = |s: &[T]| s.iter().copied().fold(s[0], |a, b| if b > a { b } else { a });
    let tail_spread = |s: &[T]| {
        let tail = &s[s.len() / 2..];
        hi(tail) / lo(tail)
    };
    let full = tail_spread(&ratios);
    let previous = tail_spread(&ratios[..ratios.len() - 1]);
    let change = crate::scalar::rabs(full / previous - T::one());
    let (g1, g2) = (lo(&ratios), hi(&ratios));
    Ok(EstimateCheck {
        gamma_lower: g1,
        gamma_upper: g2,
        tail_spread: full,
        spread_change: change,
        pass: g1 > T::zero() && g2.is_finite() && full.is_finite() && change < T::lit(SPREAD_TOLERANCE),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemicontinuityVerdict<T: Real> {
    pub eps: T,
    pub fredholm: FredholmNumbers,
    pub pass: bool,
}

/// `dim ker(ε) ≤ dim ker(0)` and `dim coker(ε) ≤ dim coker(0)` on the last
/// half of the schedule.
pub fn semicontinuity_check<T: Real>(
    report: &ContinuityReport<T>,
    base: &FredholmNumbers,
) -> Vec<SemicontinuityVerdict<T>> {
    report
        .tail()
        .iter()
        .map(|e| SemicontinuityVerdict {
            eps: e.eps,
            fredholm: e.fredholm,
            pass: e.fredholm.dim_ker <= base.dim_ker && e.fredholm.dim_coker <= base.dim_coker,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{BoundaryOperator, Exponent, Interval, ProblemDims};
    use approx::assert_relative_eq;

    type C = Complex<f64>;

    fn scalar(a0: f64) -> BvProblem<f64> {
        BvProblem {
            dims: ProblemDims::new(1, 1, 0, 1, Exponent::Two),
            interval: Interval::new(0.0, 1.0).unwrap(),
            coefficients: vec![MatrixFunction::from_real(1, 1, &[a0])],
            rhs: MatrixFunction::zeros(1, 1),
            boundary: BoundaryOperator::from_jets(vec![CMatrix::identity(1, 1)]),
            c: CVector::from_element(1, C::new(1.0, 0.0)),
        }
    }

    fn grid(n: usize) -> Grid<f64> {
        Grid::new(Interval::new(0.0, 1.0).unwrap(), n).unwrap()
    }

    fn schedule() -> Schedule<f64> {
        Schedule::geometric(0.1, 0.1, 4).unwrap()
    }

    #[test]
    fn schedules() {
        assert!(Schedule::new(vec![0.1, 0.1]).is_err());
        assert!(Schedule::new(vec![0.1, -0.1]).is_err());
        let h = Schedule::<f64>::harmonic(2, 3).unwrap();
        assert_eq!(h.values(), &[0.5, 1.0 / 3.0, 0.25]);
        assert_eq!(schedule().len(), 4);
        assert_eq!(schedule().tail_start(), 2);
    }

    #[test]
    fn zero_perturbation() {
        let fam = ProblemFamily::linear(scalar(-1.0), Perturbations::default(), schedule());
        let v = check_conditions(&fam, &grid(100)).unwrap();
        assert!(v.all_hold());
        assert!(v.coefficient_distances.iter().all(|&d| d == 0.0));
        assert!(v.boundary_distances.iter().all(|&d| d == 0.0));
        let rep = run_family(&fam, &grid(100)).unwrap();
        assert!(rep.entries.iter().all(|e| e.matrix_distance == 0.0 && e.error == Some(0.0)));
        assert!(matches!(two_sided_estimate_check(&rep), Err(Error::DegenerateFamily)));
        let semi = semicontinuity_check(&rep, &rep.base_fredholm);
        assert!(semi.iter().all(|s| s.pass && s.fredholm == rep.base_fredholm));
    }

    #[test]
    fn linear_coefficient_distances_scale_with_eps() {
        let pert = Perturbations {
            coefficients: vec![Some(MatrixFunction::from_real(1, 1, &[0.5]))],
            ..Default::default()
        };
        let fam = ProblemFamily::linear(scalar(-1.0), pert, schedule());
        let v = check_conditions(&fam, &grid(100)).unwrap();
        assert!(v.trivial_kernel && v.coefficients_converge && v.boundary_converges);
        for (d, e) in v.coefficient_distances.iter().zip(schedule().values()) {
            assert_relative_eq!(*d, 0.5 * e, max_relative = 1e-10);
        }
    }

    #[test]
    fn singular_base_fails_condition_zero() {
        let mut base = scalar(0.0);
        base.boundary = BoundaryOperator::from_jets(vec![CMatrix::zeros(1, 1)]);
        let fam = ProblemFamily::linear(base, Perturbations::default(), schedule());
        assert!(!check_conditions(&fam, &grid(20)).unwrap().trivial_kernel);
    }

    #[test]
    fn non_converging_family_is_flagged() {
        // A(ε) = A + ΔA for every ε > 0: distances stay constant
        let base = scalar(-1.0);
        let shifted = {
            let mut p = base.clone();
            p.coefficients[0] = MatrixFunction::from_real(1, 1, &[-0.5]);
            p
        };
        let fam = ProblemFamily {
            base,
            law: FamilyLaw::Generator(Arc::new(move |_| Ok(shifted.clone()))),
            schedule: schedule(),
        };
        let v = check_conditions(&fam, &grid(20)).unwrap();
        assert!(!v.coefficients_converge);
        assert!(v.boundary_converges);
    }

    #[test]
    fn discrepancy_of_c_and_f_perturbations() {
        let base = scalar(-1.0);
        let g = grid(1000);
        let y0 = crate::solver::solve(&base, &g).unwrap().solution.unwrap();
        assert!(discrepancy(&base, &y0).unwrap() < 1e-10);

        let eps = 1e-3;
        let mut pc = base.clone();
        pc.c[0] += C::new(eps, 0.0);
        assert_relative_eq!(discrepancy(&pc, &y0).unwrap(), eps, max_relative = 1e-9);

        let mut pf = base.clone();
        pf.rhs = MatrixFunction::from_real(1, 1, &[2.0 * eps]);
        // ‖ε Δf‖_{0,2} on [0,1] with Δf = 2
        assert_relative_eq!(discrepancy(&pf, &y0).unwrap(), 2.0 * eps, max_relative = 1e-7);
    }

    #[test]
    fn pure_c_perturbation_has_unit_ratio() {
        let base = scalar(0.0);
        let pert = Perturbations {
            c: Some(CVector::from_element(1, C::new(1.0, 0.0))),
            ..Default::default()
        };
        let fam = ProblemFamily::linear(base, pert, schedule());
        let rep = run_family(&fam, &grid(100)).unwrap();
        for e in &rep.entries {
            assert_relative_eq!(e.ratio.unwrap(), 1.0, epsilon = 1e-12);
        }
        let est = two_sided_estimate_check(&rep).unwrap();
        assert!(est.pass);
        assert_relative_eq!(est.gamma_lower, 1.0, epsilon = 1e-12);
        assert_relative_eq!(est.gamma_upper, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rhs_perturbation_leaves_matrix_unchanged() {
        let pert = Perturbations {
            rhs: Some(MatrixFunction::from_real(1, 1, &[1.0])),
            ..Default::default()
        };
        let fam = ProblemFamily::linear(scalar(-1.0), pert, schedule());
        let rep = run_family(&fam, &grid(200)).unwrap();
        assert!(rep.entries.iter().all(|e| e.matrix_distance == 0.0));
        let errs: Vec<f64> = rep.entries.iter().map(|e| e.error.unwrap()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
        assert!(*errs.last().unwrap() < 1e-3);
    }

    #[test]
    fn continuity_requires_determined_problems() {
        let mut base = scalar(0.0);
        base.dims.l = 2;
        base.boundary = BoundaryOperator::from_jets(vec![CMatrix::identity(2, 1)]);
        base.c = CVector::zeros(2);
        let fam = ProblemFamily::linear(base, Perturbations::default(), schedule());
        assert!(matches!(fam.validate(), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1e-1, 1e-2, 1e-3];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.5)).collect();
        assert_relative_eq!(loglog_slope(&x, &y).unwrap(), 1.5, epsilon = 1e-12);
        assert!(loglog_slope(&[1.0], &[1.0]).is_none());
    }
}
