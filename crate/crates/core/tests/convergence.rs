use bvp_core::charmat::characteristic_matrix;
use bvp_core::oracles::{relative_error, second_order_closed_form, second_order_problem};
use bvp_core::solver::solve;
use bvp_core::{Grid, Interval, MatrixFunction, Trajectory};
use nalgebra::DMatrix;
use num_complex::Complex64;

type C = Complex64;

fn unit() -> Interval<f64> {
    Interval::new(0.0, 1.0).unwrap()
}

fn observed_ratio(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

#[test]
fn two_point_matrix_converges_at_fourth_order() {
    // stiff enough that RK4 error dominates roundoff on coarse grids
    let a = DMatrix::from_row_slice(
        2,
        2,
        &[C::new(3.0, 0.0), C::new(1.0, 0.5), C::new(0.0, 0.0), C::new(2.0, -1.0)],
    );
    let alphas: Vec<DMatrix<C>> = (0..3)
        .map(|k| DMatrix::from_fn(4, 2, |i, j| C::new((i + 2 * j + k) as f64 * 0.1, 0.0)))
        .collect();
    let betas: Vec<DMatrix<C>> = (0..3)
        .map(|k| DMatrix::from_fn(4, 2, |i, j| C::new(0.0, 1.0 / (1 + i + j + k) as f64)))
        .collect();
    let closed = second_order_closed_form(&a, &alphas, &betas, 1.0);
    let p = second_order_problem(&a, alphas, &betas, unit()).unwrap();
    let errors: Vec<f64> = [10, 20, 40, 80]
        .iter()
        .map(|&n| {
            let m = characteristic_matrix(&p, &Grid::new(unit(), n).unwrap(), None).unwrap();
            relative_error(m.data(), &closed)
        })
        .collect();
    for r in observed_ratio(&errors) {
        assert!((12.0..=20.0).contains(&r), "errors {errors:?}");
    }
}

#[test]
fn variable_coefficient_solution_converges_at_fourth_order() {
    // y'' + 4t y = 1 + t, y(0) = y(1) = 1, against a fine-grid reference
    let problem_text = r#"{
        "interval": [0, 1],
        "dims": {"m": 1, "r": 2, "n": 0, "l": 2, "p": 2},
        "coefficients": [
            {"order": 0, "kind": "polynomial", "data": [0, 4]},
            {"order": 1, "kind": "constant", "data": 0}
        ],
        "rhs": {"kind": "polynomial", "data": [1, 1]},
        "boundary": {"alphas": [[1, 0], [0, 0]], "points": [{"t": 1, "order": 0, "weight": [0, 1]}]},
        "c": [1, 1]
    }"#;
    let p: bvp_core::BvProblem64 = bvp_core::io::parse_problem(problem_text).unwrap();
    // y'(0) is the unknown the boundary conditions determine
    let initial_slope = |n: usize| -> C {
        let y = solve(&p, &Grid::new(unit(), n).unwrap()).unwrap().solution.unwrap();
        y.at(1, 0)[0]
    };
    let reference = initial_slope(5120);
    let errors: Vec<f64> = [10, 20, 40, 80]
        .iter()
        .map(|&n| (initial_slope(n) - reference).norm())
        .collect();
    for r in observed_ratio(&errors) {
        assert!((12.0..=20.0).contains(&r), "errors {errors:?}");
    }
}

#[test]
fn exact_jets_do_not_depend_on_the_grid() {
    // the fundamental solution stores its initial jet verbatim
    let coeffs = vec![MatrixFunction::from_real(1, 1, &[2.0])];
    for n in [4, 40, 400] {
        let g = Grid::new(unit(), n).unwrap();
        let ys = bvp_core::odeint::fundamental_solutions(&coeffs, &g, 3).unwrap();
        let y: &Trajectory<f64> = &ys[0];
        let jets: Vec<f64> = (0..=3).map(|k| y.at(k, 0)[0].re).collect();
        assert_eq!(jets, vec![1.0, -2.0, 4.0, -8.0]);
    }
}
