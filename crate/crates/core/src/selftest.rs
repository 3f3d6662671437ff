//! Built-in oracle suite: the three closed-form problem classes from
//! [`oracles`](crate::oracles), checked against numerically assembled
//! characteristic matrices.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::charmat::{characteristic_matrix, CharacteristicMatrix, FredholmNumbers};
use crate::error::Result;
use crate::odeint::Grid;
use crate::oracles::*;
use crate::problem::Interval;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_STEPS: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// Largest observed error.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    /// The outcome without its verdict.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} cases, worst {:.3e} (tol {:.0e})",
            self.name, self.cases, self.worst, self.tolerance
        );
        if !self.detail.is_empty() {
            s.push_str("; ");
            s.push_str(&self.detail);
        }
        s
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}", self.summary())
    }
}

fn unit() -> Interval<f64> {
    Interval::new(0.0, 1.0).expect("unit interval")
}

/// `y' + Ay = 0`, `By = Σ_{k≤3} α_k y^{(k)}(0)` on `[0, 1]`, 20 random cases
/// with `m ∈ {1, 2, 3}` and `l = m`.
pub fn first_order_suite(seed: u64, steps: usize) -> Result<CheckOutcome> {
    const TOL: f64 = 1e-6;
    let mut rng = StdRng::seed_from_u64(seed);
    let grid = Grid::new(unit(), steps)?;
    let mut worst: f64 = 0.0;
    let cases = 20;
    for _ in 0..cases {
        let m = rng.gen_range(1..=3);
        let (a, alphas) = random_first_order::<f64, _>(&mut rng, m, 3);
        let closed = first_order_closed_form(&a, &alphas);
        let p = first_order_problem(&a, alphas, unit());
        let numeric = characteristic_matrix(&p, &grid, None)?;
        worst = worst.max(relative_error(numeric.data(), &closed));
    }
    Ok(CheckOutcome {
        name: "first-order one-point",
        cases,
        worst,
        tolerance: TOL,
        passed: worst <= TOL,
        detail: String::new(),
    })
}

/// `y'' + Ay' = 0` with two-point conditions up to order 2 on `[0, 1]`,
/// `m ∈ {1, 2}`. Checks `M` against the closed form and the exponential form
/// against `M T`, including equal Fredholm numbers when `A` is invertible.
pub fn second_order_suite(seed: u64, steps: usize) -> Result<CheckOutcome> {
    const TOL: f64 = 1e-6;
    let mut rng = StdRng::seed_from_u64(seed.wrapping_add(1));
    let grid = Grid::new(unit(), steps)?;
    let mut worst: f64 = 0.0;
    let mut worst_form: f64 = 0.0;
    let mut fredholm_mismatch = 0;
    let cases = 10;
    for case in 0..cases {
        let m = 1 + case % 2;
        let (a, alphas, betas) = random_second_order::<f64, _>(&mut rng, m, 1);
        let closed = second_order_closed_form(&a, &alphas, &betas, 1.0);
        let expo = second_order_exponential_form(&a, &alphas, &betas, 1.0);
        let p = second_order_problem(&a, alphas, &betas, unit())?;
        let numeric = characteristic_matrix(&p, &grid, None)?;
        worst = worst.max(relative_error(numeric.data(), &closed));
        let mapped = numeric.data() * exponential_basis_change(&a);
        worst_form = worst_form.max(relative_error(&mapped, &expo));
        let expo_cm = CharacteristicMatrix::from_matrix(expo, m, 2, None)?;
        let a_invertible = a.clone().svd(false, false).singular_values.min() > 1e-8;
        if a_invertible && expo_cm.fredholm_numbers() != numeric.fredholm_numbers() {
            fredholm_mismatch += 1;
        }
    }
    Ok(CheckOutcome {
        name: "second-order two-point",
        cases,
        worst: worst.max(worst_form),
        tolerance: TOL,
        passed: worst <= TOL && worst_form <= TOL && fredholm_mismatch == 0,
        detail: format!(
            "closed form {worst:.3e}, exponential form {worst_form:.3e}, \
             Fredholm mismatches {fredholm_mismatch}"
        ),
    })
}

/// `y' = 0` with three-point conditions of orders `0..=2`. `M` must equal the
/// sum of the order-zero weights within `1e-10` and the Fredholm numbers must
/// be `m - ρ`, `l - ρ` for the constructed rank `ρ`.
pub fn multipoint_suite(seed: u64, steps: usize) -> Result<CheckOutcome> {
    const TOL: f64 = 1e-10;
    let mut rng = StdRng::seed_from_u64(seed.wrapping_add(2));
    let grid = Grid::new(unit(), steps)?;
    let mut worst: f64 = 0.0;
    let mut mismatches = 0;
    let mut cases = 0;
    for m in 1..=3 {
        for l in 1..=m + 2 {
            for rank in 0..=m.min(l) {
                let terms = random_multipoint::<f64, _>(&mut rng, m, l, 2, rank);
                let closed = multipoint_closed_form(m, l, &terms);
                let p = multipoint_problem(m, l, 2, unit(), &terms)?;
                let numeric = characteristic_matrix(&p, &grid, None)?;
                worst = worst.max((numeric.data() - &closed).norm());
                let expected = FredholmNumbers {
                    dim_ker: m - rank,
                    dim_coker: l - rank,
                    index: m as i64 - l as i64,
                };
                if numeric.fredholm_numbers() != expected {
                    mismatches += 1;
                }
                cases += 1;
            }
        }
    }
    Ok(CheckOutcome {
        name: "multipoint",
        cases,
        worst,
        tolerance: TOL,
        passed: worst <= TOL && mismatches == 0,
        detail: format!("Fredholm mismatches {mismatches}"),
    })
}

pub fn run_selftest(seed: u64, steps: usize) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        first_order_suite(seed, steps)?,
        second_order_suite(seed, steps)?,
        multipoint_suite(seed, steps)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_a_coarse_grid() {
        for outcome in run_selftest(DEFAULT_SEED, 400).unwrap() {
            assert!(outcome.passed, "{outcome}");
        }
    }
}
