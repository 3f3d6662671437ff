//! SVD-based rank, null spaces and minimum-norm least squares.

use nalgebra::SVD;

use crate::error::{Error, Result};
use crate::scalar::{CMatrix, CVector, Real};

/// Singular values (nonincreasing) with the full left and right factors of
/// a `rows × cols` matrix.
#[derive(Debug, Clone)]
pub struct FullSvd<T: Real> {
    pub singular_values: Vec<T>,
    /// `rows × rows`
    pub u: CMatrix<T>,
    /// `cols × cols`
    pub v: CMatrix<T>,
}

fn sorted_svd<T: Real>(m: CMatrix<T>) -> Result<(Vec<T>, CMatrix<T>, CMatrix<T>)> {
    let svd = SVD::try_new(m, true, true, T::default_epsilon(), 0)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v requested").adjoint();
    Ok((svd.singular_values.iter().copied().collect(), u, v))
}

/// Full SVD: the thin factorization completed with orthonormal bases of the
/// complements of the thin singular subspaces.
pub fn full_svd<T: Real>(m: &CMatrix<T>) -> Result<FullSvd<T>> {
    let (rows, cols) = m.shape();
    let (sv, u, v) = sorted_svd(m.clone())?;
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numerical("non-finite singular value".into()));
    }
    Ok(FullSvd {
        singular_values: sv,
        u: complete_basis(u, rows)?,
        v: complete_basis(v, cols)?,
    })
}

/// Extends the orthonormal columns of `q` (`n × k`) to a unitary `n × n`.
fn complete_basis<T: Real>(q: CMatrix<T>, n: usize) -> Result<CMatrix<T>> {
    let k = q.ncols();
    if k >= n {
        return Ok(q);
    }
    // ker(q^H): the right singular vectors of the zero-padded q^H for the
    // singular value 0 (the others are exactly 1)
    let mut padded = CMatrix::<T>::zeros(n, n);
    padded.view_mut((0, 0), (k, n)).copy_from(&q.adjoint());
    let (_, _, v) = sorted_svd(padded)?;
    let mut out = CMatrix::<T>::zeros(n, n);
    out.columns_mut(0, k).copy_from(&q);
    out.columns_mut(k, n - k).copy_from(&v.columns(k, n - k));
    Ok(out)
}

/// `max(rows, cols) · σ_max · ε_machine`.
pub fn default_rank_tolerance<T: Real>(rows: usize, cols: usize, singular_values: &[T]) -> T {
    let smax = singular_values.first().copied().unwrap_or_else(T::zero);
    T::lit(rows.max(cols) as f64) * smax * T::default_epsilon()
}

pub fn numerical_rank<T: Real>(singular_values: &[T], tolerance: T) -> usize {
    singular_values.iter().filter(|&&s| s > tolerance).count()
}

/// Minimum-norm least-squares solution of `M x = rhs` treating singular
/// values at or below `tolerance` as zero. Returns `x` and `‖Mx - rhs‖`.
pub fn min_norm_solve<T: Real>(
    svd: &FullSvd<T>,
    matrix: &CMatrix<T>,
    rhs: &CVector<T>,
    tolerance: T,
) -> (CVector<T>, T) {
    let mut x = CVector::<T>::zeros(matrix.ncols());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > tolerance {
            let ui = svd.u.column(i);
            let coef = ui.dotc(rhs) / num_complex::Complex::new(s, T::zero());
            x += svd.v.column(i) * coef;
        }
    }
    let residual = (matrix * &x - rhs).norm();
    (x, residual)
}
