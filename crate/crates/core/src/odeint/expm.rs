//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 7, 9 or 13.

use crate::scalar::{cabs, to_c, CMatrix, Real};

// Backward-error thresholds on ‖A‖₁ for the [m/m] approximants in double
// precision.
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];

const PADE_9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn one_norm<T: Real>(a: &CMatrix<T>) -> T {
    a.column_iter()
        .map(|c| c.iter().fold(T::zero(), |s, z| s + cabs(z)))
        .fold(T::zero(), |m, x| if x > m { x } else { m })
}

/// `exp(A)` for a square complex matrix.
pub fn matrix_exponential<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    assert!(a.is_square(), "matrix exponential needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return CMatrix::from_element(n, n, to_c(T::lit(f64::NAN)));
    }
    if norm <= T::lit(THETA_7) {
        return pade_odd(a, &PADE_7);
    }
    if norm <= T::lit(THETA_9) {
        return pade_odd(a, &PADE_9);
    }
    let mut s = 0i32;
    let theta = T::lit(THETA_13);
    let mut scaled_norm = norm;
    while scaled_norm > theta {
        scaled_norm /= T::lit(2.0);
        s += 1;
    }
    let scaled = a * to_c(T::lit(2.0).powi(-s));
    let mut r = pade_13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn solve_pade<T: Real>(u: CMatrix<T>, v: CMatrix<T>) -> CMatrix<T> {
    let n = u.nrows();
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .unwrap_or_else(|| CMatrix::from_element(n, n, to_c(T::lit(f64::NAN))))
}

fn pade_odd<T: Real>(a: &CMatrix<T>, b: &[f64]) -> CMatrix<T> {
    let n = a.nrows();
    let a2 = a * a;
    let mut even_pow = CMatrix::<T>::identity(n, n);
    let mut u = CMatrix::<T>::zeros(n, n);
    let mut v = CMatrix::<T>::zeros(n, n);
    for k in 0..b.len() / 2 {
        v += &even_pow * to_c(T::lit(b[2 * k]));
        u += &even_pow * to_c(T::lit(b[2 * k + 1]));
        even_pow = &even_pow * &a2;
    }
    solve_pade(a * u, v)
}

fn pade_13<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let n = a.nrows();
    let b = |i: usize| to_c(T::lit(PADE_13[i]));
    let id = CMatrix::<T>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9));
    let u = a * (inner_u + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1));
    let inner_v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8));
    let v = inner_v + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + id * b(0);
    solve_pade(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex;

    type C = Complex<f64>;

    /// Taylor series summed until terms vanish; scaled by 2^-s first for
    /// large norms.
    fn taylor_oracle(a: &CMatrix<f64>) -> CMatrix<f64> {
        let n = a.nrows();
        let norm = one_norm(a);
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
        let scaled = a * C::new(2f64.powi(-s), 0.0);
        let mut term = CMatrix::<f64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..60 {
            term = &term * &scaled / C::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMatrix::<f64>::zeros(3, 3);
        assert_eq!(matrix_exponential(&z), CMatrix::identity(3, 3));
    }

    #[test]
    fn scalar_e() {
        let a = CMatrix::from_element(1, 1, C::new(1.0, 0.0));
        assert_relative_eq!(matrix_exponential(&a)[0].re, std::f64::consts::E, epsilon = 1e-12);
    }

    #[test]
    fn nilpotent_block() {
        let a = CMatrix::from_row_slice(2, 2, &[C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]);
        let e = matrix_exponential(&a);
        let expected = CMatrix::from_row_slice(2, 2, &[C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)]);
        assert!((e - expected).norm() < 1e-15);
    }

    #[test]
    fn agrees_with_taylor_across_norm_regimes() {
        for scale in [0.1, 1.5, 4.0, 30.0] {
            let a = CMatrix::from_row_slice(
                3,
                3,
                &[
                    C::new(0.2, 0.1), C::new(-0.4, 0.0), C::new(0.3, -0.2),
                    C::new(0.5, 0.3), C::new(-0.1, 0.0), C::new(0.0, 0.4),
                    C::new(-0.3, 0.2), C::new(0.1, -0.1), C::new(0.25, 0.0),
                ],
            ) * C::new(scale, 0.0);
            let e = matrix_exponential(&a);
            let o = taylor_oracle(&a);
            assert!((&e - &o).norm() / o.norm() < 1e-12, "scale {scale}");
        }
    }

    #[test]
    fn single_precision() {
        let a = CMatrix::from_element(1, 1, Complex::new(2.0f32, 0.0));
        assert!((matrix_exponential(&a)[0].re - 2f32.exp()).abs() < 1e-5);
    }
}
