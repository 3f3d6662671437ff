use crate::error::{Error, Result};
use crate::odeint::Trajectory;
use crate::problem::{quadrature::simpson, Exponent};
use crate::scalar::{frobenius, Real};

/// `‖y‖_{k,p} = Σ_{j=0}^{k} ‖y^{(j)}‖_p`.
///
/// Pointwise magnitudes are Euclidean (Frobenius for matrix samples). `p = 1`
/// and `p = 2` integrate with composite Simpson, `p = ∞` takes the grid
/// maximum.
pub fn sobolev_norm<T: Real>(y: &Trajectory<T>, k: usize, p: Exponent) -> Result<T> {
    y.require_order(k)?;
    let mut total = T::zero();
    for j in 0..=k {
        total += lebesgue_norm(y, j, p)?;
    }
    Ok(total)
}

/// `‖y^{(order)}‖_p` on the grid.
pub fn lebesgue_norm<T: Real>(y: &Trajectory<T>, order: usize, p: Exponent) -> Result<T> {
    y.require_order(order)?;
    let mags: Vec<T> = y.order(order).iter().map(frobenius).collect();
    let value = match p {
        Exponent::One => simpson(y.grid(), &mags),
        Exponent::Two => {
            let sq: Vec<T> = mags.iter().map(|&x| x * x).collect();
            let s = simpson(y.grid(), &sq);
            // Simpson weights are positive, so s >= 0 up to roundoff
            if s < T::zero() {
                T::zero()
            } else {
                s.sqrt()
            }
        }
        Exponent::Infinity => mags
            .into_iter()
            .fold(T::zero(), |m, x| if x > m { x } else { m }),
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numerical("non-finite Lebesgue norm".into()))
    }
}
