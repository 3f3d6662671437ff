//! Composite quadrature on the uniform report grid.

use num_complex::Complex;

use crate::odeint::Grid;
use crate::scalar::{to_c, CMatrix, Real};

/// Composite Simpson over a full grid (`N` even) for real samples.
pub fn simpson<T: Real>(grid: &Grid<T>, samples: &[T]) -> T {
    debug_assert_eq!(samples.len(), grid.len());
    let n = grid.steps();
    let (two, four) = (T::lit(2.0), T::lit(4.0));
    let mut acc = samples[0] + samples[n];
    for (i, &s) in samples.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { four * s } else { two * s };
    }
    acc * grid.step() / T::lit(3.0)
}

const GAUSS3_NODE: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
const GAUSS3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

fn gauss3<T: Real>(
    lo: T,
    hi: T,
    at_point: &mut impl FnMut(T) -> CMatrix<T>,
) -> CMatrix<T> {
    let half = (hi - lo) / T::lit(2.0);
    let mid = (hi + lo) / T::lit(2.0);
    let offsets = [-GAUSS3_NODE, 0.0, GAUSS3_NODE];
    let mut acc: Option<CMatrix<T>> = None;
    for (off, w) in offsets.iter().zip(GAUSS3_WEIGHTS) {
        let v = at_point(mid + half * T::lit(*off)) * to_c(half * T::lit(w));
        acc = Some(match acc {
            Some(a) => a + v,
            None => v,
        });
    }
    acc.expect("three nodes")
}

/// Integrates a matrix integrand over `[lo, hi] ⊆ [a, b]`.
///
/// Whole grid cells inside the segment use composite Simpson on node values
/// (`at_node`); partial cells at either end, and a leftover odd cell, use
/// 3-point Gauss–Legendre on point values (`at_point`).
pub fn integrate_segment<T: Real>(
    grid: &Grid<T>,
    lo: T,
    hi: T,
    mut at_node: impl FnMut(usize) -> CMatrix<T>,
    mut at_point: impl FnMut(T) -> CMatrix<T>,
) -> Option<CMatrix<T>> {
    if !(lo < hi) {
        return None;
    }
    let a = grid.interval().a;
    let h = grid.step();
    let n = grid.steps();
    let snap = T::lit(1e-9);
    let i0 = ((lo - a) / h - snap).ceil().to_usize().unwrap_or(0).min(n);
    let i1 = ((hi - a) / h + snap).floor().to_usize().unwrap_or(0).min(n);

    if i0 > i1 {
        return Some(gauss3(lo, hi, &mut at_point));
    }
    let mut acc: Option<CMatrix<T>> = None;
    let add = |acc: &mut Option<CMatrix<T>>, v: CMatrix<T>| {
        *acc = Some(match acc.take() {
            Some(x) => x + v,
            None => v,
        })
    };
    let tol = h * snap;
    let (t0, t1) = (grid.node(i0), grid.node(i1));
    if t0 - lo > tol {
        add(&mut acc, gauss3(lo, t0, &mut at_point));
    }
    if hi - t1 > tol {
        add(&mut acc, gauss3(t1, hi, &mut at_point));
    }
    let cells = i1 - i0;
    let even = cells - cells % 2;
    if even > 0 {
        let third = to_c(h / T::lit(3.0));
        let mut s = at_node(i0) + at_node(i0 + even);
        for i in 1..even {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += at_node(i0 + i) * Complex::new(T::lit(w), T::zero());
        }
        add(&mut acc, s * third);
    }
    if cells % 2 == 1 {
        add(
            &mut acc,
            gauss3(grid.node(i1 - 1), grid.node(i1), &mut at_point),
        );
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Interval;
    use approx::assert_relative_eq;

    fn scalar(x: f64) -> CMatrix<f64> {
        CMatrix::from_element(1, 1, Complex::new(x, 0.0))
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let g = Grid::new(Interval::new(0.0, 2.0).unwrap(), 4).unwrap();
        let s: Vec<f64> = g.nodes().map(|t| t * t * t - t).collect();
        assert_relative_eq!(simpson(&g, &s), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn segment_with_partial_cells() {
        let g = Grid::new(Interval::new(0.0, 1.0).unwrap(), 10).unwrap();
        let f = |t: f64| (2.0 * t).exp();
        let exact = |lo: f64, hi: f64| ((2.0 * hi).exp() - (2.0 * lo).exp()) / 2.0;
        for &(lo, hi) in &[(0.0, 1.0), (0.0, 0.35), (0.13, 0.87), (0.0, 0.3), (0.41, 0.44)] {
            let v = integrate_segment(&g, lo, hi, |i| scalar(f(g.node(i))), |t| scalar(f(t)))
                .unwrap();
            assert_relative_eq!(v[0].re, exact(lo, hi), max_relative = 1e-4);
        }
    }

    #[test]
    fn empty_segment() {
        let g = Grid::new(Interval::new(0.0, 1.0).unwrap(), 10).unwrap();
        assert!(integrate_segment(&g, 0.5, 0.5, |_| scalar(1.0), |_| scalar(1.0)).is_none());
    }
}
