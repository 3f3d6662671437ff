//! Fixed-step integration of the order-`r` system and of its matrix Cauchy
//! problems.
//!
//! The system is rewritten as the companion first-order system of dimension
//! `m r` and integrated with classical RK4 on the report grid. Derivatives
//! `r + 1 … n + r` are then produced by differentiating the equation
//! (Leibniz recurrence), never by differencing the computed samples.

mod expm;
mod grid;
mod trajectory;

pub use expm::matrix_exponential;
pub use grid::Grid;
pub use trajectory::Trajectory;

use crate::error::{Error, Result};
use crate::problem::MatrixFunction;
use crate::scalar::{binomial, to_c, CMatrix, Real};

/// Integrates `y^{(r)} + Σ_j A_j y^{(j)} = forcing` from the initial jet
/// `(y(a), y'(a), …, y^{(r-1)}(a))` and returns derivatives `0..=r`.
pub fn integrate<T: Real>(
    coefficients: &[MatrixFunction<T>],
    forcing: Option<&MatrixFunction<T>>,
    initial_jet: &[CMatrix<T>],
    grid: &Grid<T>,
) -> Result<Trajectory<T>> {
    let r = coefficients.len();
    if r == 0 {
        return Err(Error::InvalidArgument("at least one coefficient is required".into()));
    }
    if initial_jet.len() != r {
        return Err(Error::Dimension(format!(
            "initial jet has {} entries, order r = {r}",
            initial_jet.len()
        )));
    }
    let m = coefficients[0].rows();
    let cols = initial_jet[0].ncols();
    if let Some(bad) = coefficients.iter().position(|a| a.shape() != (m, m)) {
        return Err(Error::Dimension(format!("A_{bad} is not {m}x{m}")));
    }
    if initial_jet.iter().any(|j| j.shape() != (m, cols)) {
        return Err(Error::Dimension(format!("initial jet entries must be {m}x{cols}")));
    }
    if let Some(f) = forcing {
        if f.shape() != (m, cols) {
            return Err(Error::Dimension(format!(
                "forcing is {}x{}, expected {m}x{cols}",
                f.rows(),
                f.cols()
            )));
        }
    }

    let n = grid.steps();
    let h = grid.step();
    let half = h / T::lit(2.0);
    // coefficient and forcing values on the half-step lattice
    let lattice: Vec<T> = (0..=2 * n)
        .map(|k| {
            if k % 2 == 0 {
                grid.node(k / 2)
            } else {
                grid.node(k / 2) + half
            }
        })
        .collect();
    let coeff_vals: Vec<Vec<CMatrix<T>>> = lattice
        .iter()
        .map(|&t| coefficients.iter().map(|a| a.eval(t)).collect())
        .collect();
    let forcing_vals: Option<Vec<CMatrix<T>>> =
        forcing.map(|f| lattice.iter().map(|&t| f.eval(t)).collect());

    let field = |k: usize, z: &CMatrix<T>| -> CMatrix<T> {
        let mut out = CMatrix::<T>::zeros(m * r, cols);
        for j in 0..r - 1 {
            out.rows_mut(j * m, m).copy_from(&z.rows((j + 1) * m, m));
        }
        let mut top = match &forcing_vals {
            Some(fv) => fv[k].clone(),
            None => CMatrix::zeros(m, cols),
        };
        for (j, a) in coeff_vals[k].iter().enumerate() {
            top -= a * z.rows(j * m, m);
        }
        out.rows_mut((r - 1) * m, m).copy_from(&top);
        out
    };

    let mut state = CMatrix::<T>::zeros(m * r, cols);
    for (j, v) in initial_jet.iter().enumerate() {
        state.rows_mut(j * m, m).copy_from(v);
    }
    let mut states = Vec::with_capacity(n + 1);
    states.push(state.clone());
    let (hc, halfc, sixth) = (to_c(h), to_c(half), to_c(h / T::lit(6.0)));
    let two = to_c(T::lit(2.0));
    for i in 0..n {
        let k1 = field(2 * i, &state);
        let k2 = field(2 * i + 1, &(&state + &k1 * halfc));
        let k3 = field(2 * i + 1, &(&state + &k2 * halfc));
        let k4 = field(2 * i + 2, &(&state + &k3 * hc));
        state += (k1 + (k2 + k3) * two + k4) * sixth;
        if state.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Numerical(format!(
                "integration produced non-finite values at node {}",
                i + 1
            )));
        }
        states.push(state.clone());
    }
    // node i sits at lattice index 2i, so the initial jet is stored verbatim
    let mut jets: Vec<Vec<CMatrix<T>>> = (0..r)
        .map(|j| states.iter().map(|s| s.rows(j * m, m).into_owned()).collect())
        .collect();
    let top: Vec<CMatrix<T>> = states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut v = match &forcing_vals {
                Some(fv) => fv[2 * i].clone(),
                None => CMatrix::zeros(m, cols),
            };
            for (j, a) in coeff_vals[2 * i].iter().enumerate() {
                v -= a * s.rows(j * m, m);
            }
            v
        })
        .collect();
    jets.push(top);
    for (j, v) in initial_jet.iter().enumerate() {
        jets[j][0] = v.clone();
    }
    Trajectory::from_jets(*grid, jets)
}

/// Extends a trajectory carrying derivatives `0..=r` to `0..=target_order`
/// through `y^{(r+i)} = f^{(i)} - Σ_j Σ_ν C(i,ν) A_j^{(ν)} y^{(j+i-ν)}`.
pub fn extend_derivatives<T: Real>(
    traj: &Trajectory<T>,
    coefficients: &[MatrixFunction<T>],
    forcing: Option<&MatrixFunction<T>>,
    target_order: usize,
) -> Result<Trajectory<T>> {
    let r = coefficients.len();
    traj.require_order(r)?;
    if traj.max_order() >= target_order {
        return traj.truncated(target_order.max(r));
    }
    let needed = target_order - r;
    for (j, a) in coefficients.iter().enumerate() {
        if !a.supports_order(needed) {
            return Err(Error::InsufficientSmoothness {
                what: format!("coefficient A_{j}"),
                required: needed,
                available: a.max_derivative_order().unwrap_or(0),
            });
        }
    }
    if let Some(f) = forcing {
        if !f.supports_order(needed) {
            return Err(Error::InsufficientSmoothness {
                what: "right-hand side".into(),
                required: needed,
                available: f.max_derivative_order().unwrap_or(0),
            });
        }
    }

    let grid = *traj.grid();
    let mut out = traj.clone();
    for order in traj.max_order() + 1..=target_order {
        let i = order - r;
        let mut samples = Vec::with_capacity(grid.len());
        for (node, t) in grid.nodes().enumerate() {
            let mut v = match forcing {
                Some(f) => f.derivative(i, t)?,
                None => CMatrix::zeros(traj.rows(), traj.cols()),
            };
            for (j, a) in coefficients.iter().enumerate() {
                for nu in 0..=i {
                    let da = a.derivative(nu, t)?;
                    v -= da * out.at(j + i - nu, node) * to_c(binomial::<T>(i, nu));
                }
            }
            samples.push(v);
        }
        out.push_order(samples);
    }
    Ok(out)
}

/// Matrix Cauchy solutions `Y_0 … Y_{r-1}` with `Y_k^{(j)}(a) = δ_{kj} I_m`,
/// each extended to derivatives `0..=target_order`.
pub fn fundamental_solutions<T: Real>(
    coefficients: &[MatrixFunction<T>],
    grid: &Grid<T>,
    target_order: usize,
) -> Result<Vec<Trajectory<T>>> {
    let r = coefficients.len();
    let m = coefficients
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one coefficient is required".into()))?
        .rows();
    (0..r)
        .map(|k| {
            let jet: Vec<CMatrix<T>> = (0..r)
                .map(|j| {
                    if j == k {
                        CMatrix::identity(m, m)
                    } else {
                        CMatrix::zeros(m, m)
                    }
                })
                .collect();
            let y = integrate(coefficients, None, &jet, grid)?;
            extend_derivatives(&y, coefficients, None, target_order)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Interval;
    use approx::assert_relative_eq;
    use num_complex::Complex;

    fn grid(n: usize) -> Grid<f64> {
        Grid::new(Interval::new(0.0, 1.0).unwrap(), n).unwrap()
    }

    fn s(x: f64) -> CMatrix<f64> {
        CMatrix::from_element(1, 1, Complex::new(x, 0.0))
    }

    #[test]
    fn zero_coefficient_keeps_constant() {
        let a = vec![MatrixFunction::from_real(1, 1, &[0.0])];
        let y = integrate(&a, None, &[s(1.0)], &grid(20)).unwrap();
        assert!(y.order(0).iter().all(|v| v[0] == Complex::new(1.0, 0.0)));
        assert!(y.order(1).iter().all(|v| v[0] == Complex::new(0.0, 0.0)));
    }

    #[test]
    fn exponential_growth() {
        // y' - y = 0
        let a = vec![MatrixFunction::from_real(1, 1, &[-1.0])];
        let y = integrate(&a, None, &[s(1.0)], &grid(1000)).unwrap();
        assert_relative_eq!(y.at(0, 1000)[0].re, std::f64::consts::E, epsilon = 1e-8);
        assert_relative_eq!(y.at(1, 1000)[0].re, std::f64::consts::E, epsilon = 1e-8);
    }

    #[test]
    fn double_integration_of_zero() {
        let a = vec![MatrixFunction::zeros(1, 1), MatrixFunction::zeros(1, 1)];
        let y = integrate(&a, None, &[s(0.0), s(1.0)], &grid(10)).unwrap();
        for (i, t) in grid(10).nodes().enumerate() {
            assert_relative_eq!(y.at(0, i)[0].re, t, epsilon = 1e-14);
        }
        assert_relative_eq!(y.at(0, 10)[0].re, 1.0, epsilon = 1e-14);
        let e = extend_derivatives(&y, &a, None, 5).unwrap();
        for k in 2..=5 {
            assert!(e.order(k).iter().all(|v| v[0].norm() == 0.0));
        }
    }

    #[test]
    fn rk4_order() {
        let a = vec![MatrixFunction::from_real(1, 1, &[-1.0])];
        let err = |n: usize| {
            let y = integrate(&a, None, &[s(1.0)], &grid(n)).unwrap();
            (y.at(0, n)[0].re - std::f64::consts::E).abs()
        };
        let ratio = err(20) / err(40);
        assert!((ratio - 16.0).abs() <= 0.2 * 16.0, "ratio {ratio}");
    }

    #[test]
    fn extension_for_constant_scalar() {
        // y' + α y = 0 ⇒ y'' = α² y
        let alpha = 0.7;
        let a = vec![MatrixFunction::from_real(1, 1, &[alpha])];
        let y = integrate(&a, None, &[s(2.0)], &grid(50)).unwrap();
        let e = extend_derivatives(&y, &a, None, 3).unwrap();
        for i in 0..=50 {
            let y0 = e.at(0, i)[0].re;
            assert_relative_eq!(e.at(2, i)[0].re / y0, alpha * alpha, epsilon = 1e-12);
            assert_relative_eq!(e.at(3, i)[0].re / y0, -alpha.powi(3), epsilon = 1e-12);
        }
        // n = 0: no-op
        assert_eq!(extend_derivatives(&y, &a, None, 1).unwrap(), y);
    }

    #[test]
    fn extension_requires_smooth_coefficients() {
        let knots: Vec<f64> = (0..6).map(|i| i as f64 / 5.0).collect();
        let a = vec![MatrixFunction::sampled(knots, vec![s(1.0); 6]).unwrap()];
        let y = integrate(&a, None, &[s(1.0)], &grid(10)).unwrap();
        assert!(extend_derivatives(&y, &a, None, 3).is_ok());
        assert!(matches!(
            extend_derivatives(&y, &a, None, 4),
            Err(Error::InsufficientSmoothness { required: 3, .. })
        ));
    }

    #[test]
    fn fundamental_initial_conditions_are_exact() {
        let a = vec![
            MatrixFunction::from_real(2, 2, &[0.3, -1.0, 2.0, 0.1]),
            MatrixFunction::from_real(2, 2, &[1.0, 0.5, -0.5, 0.0]),
        ];
        let ys = fundamental_solutions(&a, &grid(10), 4).unwrap();
        for (k, y) in ys.iter().enumerate() {
            assert_eq!(y.max_order(), 4);
            for j in 0..2 {
                let expected = if j == k {
                    CMatrix::<f64>::identity(2, 2)
                } else {
                    CMatrix::zeros(2, 2)
                };
                assert_eq!(y.at(j, 0), &expected);
            }
        }
    }

    #[test]
    fn scalar_fundamental_is_exponential() {
        let a = vec![MatrixFunction::from_real(1, 1, &[-1.0])];
        let ys = fundamental_solutions(&a, &grid(1000), 1).unwrap();
        for (i, t) in grid(1000).nodes().enumerate() {
            assert_relative_eq!(ys[0].at(0, i)[0].re, t.exp(), max_relative = 1e-10);
        }
    }
}
