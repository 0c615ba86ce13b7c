//! Closed forms of the polynomial-derivator derivative and antiderivative of
//! `c·x^m`. Generic over the coefficient field so that `BigRational` gives
//! exact results and `f64` fast ones.

use std::fmt;

use num_traits::{FromPrimitive, Num};

use super::GcalcError;

/// `coeff · x^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial<T> {
    pub coeff: T,
    pub exponent: T,
}

impl<T: fmt::Display> fmt::Display for Monomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x^{}", self.coeff, self.exponent)
    }
}

fn int<T: FromPrimitive>(v: u32) -> T {
    T::from_u32(v).expect("small integers are representable")
}

/// Top coefficient of the order-`n` polynomial derivator applied to `c·x^m`:
/// `c·∏_{i<n}(m−i)/n! · x^{m−n}`.
pub fn monomial_derivative<T>(c: T, m: T, n: u32) -> Result<Monomial<T>, GcalcError>
where
    T: Num + Clone + FromPrimitive,
{
    if n == 0 {
        return Err(GcalcError::InvalidOrder);
    }
    let mut coeff = c;
    for i in 0..n {
        coeff = coeff * (m.clone() - int(i)) / int(i + 1);
    }
    Ok(Monomial {
        coeff,
        exponent: m - int(n),
    })
}

/// Inverse of [`monomial_derivative`] within the family:
/// `c/(m+1) · x^{m+1}` for `n = 1`, and
/// `c / ((m+n)·∏_{i=1}^{n−1}(m+i)/(i+1)) · x^{m+n}` for `n ≥ 2`.
pub fn monomial_antiderivative<T>(c: T, m: T, n: u32) -> Result<Monomial<T>, GcalcError>
where
    T: Num + Clone + FromPrimitive,
{
    if n == 0 {
        return Err(GcalcError::InvalidOrder);
    }
    if n == 1 {
        let m1 = m.clone() + T::one();
        if m1.is_zero() {
            return Err(GcalcError::NotIntegrable("m ≠ −1 required for n = 1".into()));
        }
        return Ok(Monomial {
            coeff: c / m1.clone(),
            exponent: m1,
        });
    }
    let mn = m.clone() + int(n);
    if mn.is_zero() {
        return Err(GcalcError::NotIntegrable(format!("m + n ≠ 0 required (n = {n})")));
    }
    let mut denom = mn.clone();
    for i in 1..n {
        let mi = m.clone() + int(i);
        if mi.is_zero() {
            return Err(GcalcError::NotIntegrable(format!("m + {i} ≠ 0 required (n = {n})")));
        }
        denom = denom * mi / int(i + 1);
    }
    Ok(Monomial {
        coeff: c / denom,
        exponent: mn,
    })
}
