use std::ops::{Add, Mul, Neg, Sub};

use super::{Complex64, Ring, Scalar};
use crate::error::{Error, Result};

/// Forward-mode dual number with a vector tangent.
///
/// An empty tangent stands for the zero vector, so constants carry no
/// allocation and tangents of different lengths combine by zero padding.
#[derive(Clone, Debug)]
pub struct Dual<S> {
    pub re: S,
    pub eps: Vec<S>,
}

impl<S: Scalar> Dual<S> {
    pub fn constant(re: S) -> Self {
        Dual {
            re,
            eps: Vec::new(),
        }
    }

    /// The `index`-th coordinate of a `dim`-dimensional seed.
    pub fn variable(re: S, index: usize, dim: usize) -> Self {
        let mut eps = vec![S::zero(); dim];
        eps[index] = S::one();
        Dual { re, eps }
    }

    pub fn with_tangent(re: S, eps: Vec<S>) -> Self {
        Dual { re, eps }
    }

    /// Tangent component `i` (zero beyond the stored length).
    pub fn d(&self, i: usize) -> S {
        self.eps.get(i).cloned().unwrap_or_else(S::zero)
    }

    fn zip_eps(a: Vec<S>, b: Vec<S>, f: impl Fn(S, S) -> S) -> Vec<S> {
        let len = a.len().max(b.len());
        let mut a = a.into_iter();
        let mut b = b.into_iter();
        (0..len)
            .map(|_| {
                f(
                    a.next().unwrap_or_else(S::zero),
                    b.next().unwrap_or_else(S::zero),
                )
            })
            .collect()
    }
}

impl<S: Scalar> PartialEq for Dual<S> {
    fn eq(&self, other: &Self) -> bool {
        let len = self.eps.len().max(other.eps.len());
        self.re == other.re && (0..len).all(|i| self.d(i) == other.d(i))
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            re: self.re + rhs.re,
            eps: Self::zip_eps(self.eps, rhs.eps, |a, b| a + b),
        }
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            re: self.re - rhs.re,
            eps: Self::zip_eps(self.eps, rhs.eps, |a, b| a - b),
        }
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        // d(fg) = f dg + g df
        let (a, b) = (self.re, rhs.re);
        let eps = match (self.eps.is_empty(), rhs.eps.is_empty()) {
            (true, true) => Vec::new(),
            (true, false) => rhs.eps.into_iter().map(|e| a.clone() * e).collect(),
            (false, true) => self.eps.into_iter().map(|e| b.clone() * e).collect(),
            (false, false) => {
                Self::zip_eps(self.eps, rhs.eps, |da, db| a.clone() * db + b.clone() * da)
            }
        };
        Dual { re: a * b, eps }
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            re: -self.re,
            eps: self.eps.into_iter().map(|e| -e).collect(),
        }
    }
}

impl<S: Scalar> Ring for Dual<S> {
    fn zero() -> Self {
        Dual::constant(S::zero())
    }
    fn one() -> Self {
        Dual::constant(S::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.iter().all(Ring::is_zero)
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    const EXACT: bool = S::EXACT;

    fn from_i64(v: i64) -> Self {
        Dual::constant(S::from_i64(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Dual::constant(S::from_ratio(num, den))
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.re.vanishes() {
            return Err(Error::PoleEncountered);
        }
        let q = self.re.checked_div(&rhs.re)?;
        let inv = rhs.re.recip()?;
        // d(f/g) = (df - q dg) / g
        let eps = if self.eps.is_empty() && rhs.eps.is_empty() {
            Vec::new()
        } else {
            Self::zip_eps(self.eps.clone(), rhs.eps.clone(), |da, db| {
                (da - q.clone() * db) * inv.clone()
            })
        };
        Ok(Dual { re: q, eps })
    }
    fn vanishes(&self) -> bool {
        self.re.vanishes()
    }
    fn magnitude(&self) -> f64 {
        self.re.magnitude()
    }
    fn to_complex(&self) -> Complex64 {
        self.re.to_complex()
    }
    fn bit_len(&self) -> u64 {
        self.re.bit_len()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.iter().all(Scalar::is_finite)
    }
}

/// Jacobian of `f` at `at`: entry `[row][col]` is `d f_row / d v_col`.
///
/// All seeds are evaluated in a single dual pass. Exact when `S` is exact.
pub fn jacobian<S, F>(f: F, at: &[S]) -> Result<Vec<Vec<S>>>
where
    S: Scalar,
    F: FnOnce(&[Dual<S>]) -> Result<Vec<Dual<S>>>,
{
    let dim = at.len();
    let seeds: Vec<Dual<S>> = at
        .iter()
        .enumerate()
        .map(|(i, v)| Dual::variable(v.clone(), i, dim))
        .collect();
    let out = f(&seeds)?;
    Ok(out
        .into_iter()
        .map(|o| (0..dim).map(|c| o.d(c)).collect())
        .collect())
}

/// Value and gradient of a scalar function.
pub fn gradient<S, F>(f: F, at: &[S]) -> Result<(S, Vec<S>)>
where
    S: Scalar,
    F: FnOnce(&[Dual<S>]) -> Result<Dual<S>>,
{
    let dim = at.len();
    let seeds: Vec<Dual<S>> = at
        .iter()
        .enumerate()
        .map(|(i, v)| Dual::variable(v.clone(), i, dim))
        .collect();
    let out = f(&seeds)?;
    let grad = (0..dim).map(|c| out.d(c)).collect();
    Ok((out.re, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    #[test]
    fn square_at_two() {
        let x = Dual::variable(q(2, 1), 0, 1);
        let sq = x.clone() * x;
        assert_eq!(sq.re, q(4, 1));
        assert_eq!(sq.d(0), q(4, 1));
    }

    #[test]
    fn identity_jacobian() {
        let at = vec![q(1, 2), q(3, 1), q(-2, 7)];
        let j = jacobian(|v| Ok(v.to_vec()), &at).unwrap();
        for (r, row) in j.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                assert_eq!(*e, if r == c { q(1, 1) } else { q(0, 1) });
            }
        }
    }

    #[test]
    fn product_gradient() {
        let (v, g) = gradient(|v| Ok(v[0].clone() * v[1].clone()), &[q(2, 1), q(3, 1)]).unwrap();
        assert_eq!(v, q(6, 1));
        assert_eq!(g, vec![q(3, 1), q(2, 1)]);
    }

    #[test]
    fn pole_is_reported() {
        let x = Dual::variable(q(0, 1), 0, 1);
        assert_eq!(Dual::one().checked_div(&x), Err(Error::PoleEncountered));
    }

    #[test]
    fn float_jacobian_matches_central_differences() {
        let f = |v: &[f64]| -> Vec<f64> { vec![v[0] * v[1] / (1.0 + v[2] * v[2]), v[2] / v[0]] };
        let at = [1.3, -0.7, 0.4];
        let j = jacobian(
            |v: &[Dual<f64>]| {
                let one = Dual::one();
                let den = one + v[2].clone() * v[2].clone();
                Ok(vec![
                    (v[0].clone() * v[1].clone()).checked_div(&den)?,
                    v[2].checked_div(&v[0])?,
                ])
            },
            &at,
        )
        .unwrap();
        let h = 1e-6;
        for c in 0..3 {
            let mut plus = at;
            let mut minus = at;
            plus[c] += h;
            minus[c] -= h;
            let (fp, fm) = (f(&plus), f(&minus));
            for r in 0..2 {
                let fd = (fp[r] - fm[r]) / (2.0 * h);
                assert!((fd - j[r][c]).abs() <= 1e-6 * fd.abs().max(1.0));
            }
        }
    }

    // f(x) = (x^3 - 2x + 1) / (x^2 + 3); f' computed symbolically:
    // ((3x^2 - 2)(x^2 + 3) - (x^3 - 2x + 1) 2x) / (x^2 + 3)^2
    fn f_dual(x: Dual<Rational>) -> Dual<Rational> {
        let c = |v: i64| Dual::from_i64(v);
        let num = x.clone() * x.clone() * x.clone() - c(2) * x.clone() + c(1);
        let den = x.clone() * x + c(3);
        num.checked_div(&den).unwrap()
    }

    fn f_prime(x: &Rational) -> Rational {
        let c = |v: i64| Rational::from_i64(v);
        let x2 = x.clone() * x.clone();
        let num = (c(3) * x2.clone() - c(2)) * (x2.clone() + c(3))
            - (x2.clone() * x.clone() - c(2) * x.clone() + c(1)) * c(2) * x.clone();
        let den = (x2.clone() + c(3)) * (x2 + c(3));
        num.checked_div(&den).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn derivative_of_rational_function(p in -40i64..40, d in 1i64..20) {
            let x = q(p, d);
            let out = f_dual(Dual::variable(x.clone(), 0, 1));
            prop_assert_eq!(out.d(0), f_prime(&x));
        }
    }
}
