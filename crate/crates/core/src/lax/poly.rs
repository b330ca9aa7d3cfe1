//! Dense univariate polynomials and square matrices over a [`Ring`].
//!
//! Polynomials nest, so `Poly<Poly<S>>` is the bivariate ring used for
//! characteristic polynomials (outer variable `z`, inner variable `lambda`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Ring;

/// Polynomial with coefficients `c[0] + c[1] t + ...`, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn from_coeffs(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c t^deg`.
    pub fn monomial(c: R, deg: usize) -> Self {
        let mut v = vec![R::zero(); deg + 1];
        v[deg] = c;
        Self::from_coeffs(v)
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Self::monomial(R::one(), 1)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn eval(&self, t: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|v| v.clone() * c.clone()).collect())
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&R) -> T) -> Poly<T> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] =
                        std::mem::replace(&mut out[i + j], R::zero()) + a.clone() * b.clone();
                }
            }
        }
        Self::from_coeffs(out)
    }

    fn zip(self, rhs: Self, f: impl Fn(R, R) -> R) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut a = self.coeffs.into_iter();
        let mut b = rhs.coeffs.into_iter();
        Self::from_coeffs(
            (0..len)
                .map(|_| {
                    f(
                        a.next().unwrap_or_else(R::zero),
                        b.next().unwrap_or_else(R::zero),
                    )
                })
                .collect(),
        )
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})t")?,
                _ => write!(f, "({c:?})t^{i}")?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(rhs, |a, b| a + b)
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(rhs, |a, b| a - b)
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Self::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Polynomial in `z` whose coefficients are polynomials in `lambda`.
pub type BivarPoly<R> = Poly<Poly<R>>;

impl<R: Ring> Poly<Poly<R>> {
    /// Coefficient of `z^i lambda^j`.
    pub fn coeff2(&self, i: usize, j: usize) -> R {
        self.coeff(i).coeff(j)
    }

    /// `(max z-degree, max lambda-degree)`, `(0, 0)` for zero.
    pub fn degrees(&self) -> (usize, usize) {
        let dz = self.degree().unwrap_or(0);
        let dl = self
            .coeffs
            .iter()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0);
        (dz, dl)
    }
}

/// Square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    dim: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![R::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Matrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<R>> {
        self.data.chunks(self.dim).map(<[R]>::to_vec).collect()
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&R) -> T) -> Matrix<T> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for l in 0..d {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = rhs.get(l, j);
                    if !b.is_zero() {
                        let cur = std::mem::replace(&mut out.data[i * d + j], R::zero());
                        out.data[i * d + j] = cur + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    /// Determinant by Laplace expansion along rows, memoized over column
    /// subsets: `2^dim` minors, each built from the previous row's minors.
    pub fn det(&self) -> R {
        let d = self.dim;
        if d == 0 {
            return R::one();
        }
        let mut minors: Vec<Option<R>> = vec![None; 1 << d];
        minors[0] = Some(R::one());
        for mask in 1usize..(1 << d) {
            let row = mask.count_ones() as usize - 1;
            let mut acc = R::zero();
            let mut any = false;
            for c in 0..d {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let a = self.get(row, c);
                if a.is_zero() {
                    continue;
                }
                let Some(sub) = &minors[mask & !(1 << c)] else {
                    continue;
                };
                if sub.is_zero() {
                    continue;
                }
                // sign from the number of chosen columns to the right of c
                let greater = (mask >> (c + 1)).count_ones();
                let term = a.clone() * sub.clone();
                acc = if greater % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                };
                any = true;
            }
            minors[mask] = Some(if any { acc } else { R::zero() });
        }
        minors[(1 << d) - 1].take().expect("full minor computed")
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.data.chunks(self.dim.max(1)))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Scalar};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(c.iter().map(|&v| Rational::from_i64(v)).collect())
    }

    #[test]
    fn poly_arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.clone() * b.clone(), p(&[-1, 0, 1]));
        assert_eq!(a.clone() - a.clone(), Poly::zero());
        assert_eq!((a + b).degree(), Some(1));
        assert_eq!(p(&[2, 0, 0]).degree(), Some(0));
        assert_eq!(
            p(&[1, 2, 3]).eval(&Rational::from_i64(2)),
            Rational::from_i64(17)
        );
    }

    #[test]
    fn determinant_matches_hand_values() {
        let m = Matrix::from_rows(vec![
            vec![2, 0, 1].into_iter().map(Rational::from_i64).collect(),
            vec![1, 3, 2].into_iter().map(Rational::from_i64).collect(),
            vec![1, 1, 1].into_iter().map(Rational::from_i64).collect(),
        ]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(m.det(), Rational::from_i64(0));
        let m = Matrix::from_rows(vec![
            vec![Rational::from_i64(0), Rational::from_i64(1)],
            vec![Rational::from_i64(1), Rational::from_i64(0)],
        ]);
        assert_eq!(m.det(), Rational::from_i64(-1));
    }

    #[test]
    fn determinant_is_multiplicative() {
        let v = |s: &[i64]| {
            s.iter()
                .map(|&e| Rational::from_ratio(e, 3))
                .collect::<Vec<_>>()
        };
        let a = Matrix::from_rows(vec![
            v(&[1, 2, 0, 4]),
            v(&[3, -1, 2, 2]),
            v(&[0, 5, 1, 1]),
            v(&[2, 2, 2, -3]),
        ]);
        let b = Matrix::from_rows(vec![
            v(&[4, 0, 1, 1]),
            v(&[1, 1, -2, 0]),
            v(&[7, 2, 1, 3]),
            v(&[0, 1, 1, 1]),
        ]);
        assert_eq!(a.mul(&b).det(), a.det() * b.det());
    }

    #[test]
    fn bivariate_coefficients() {
        let lam = Poly::<Rational>::var();
        let z = Poly::<Poly<Rational>>::var();
        let f = z.clone() * Poly::constant(lam.clone()) + Poly::constant(Poly::one());
        assert_eq!(f.coeff2(1, 1), Rational::one());
        assert_eq!(f.coeff2(0, 0), Rational::one());
        assert_eq!(f.coeff2(1, 0), Rational::zero());
        assert_eq!(f.degrees(), (1, 1));
    }
}
