//! Field backends shared by every other module.
//!
//! Three concrete fields are provided: exact [`Rational`] numbers, `f64`
//! reals and [`Complex64`] complex numbers. [`Dual`] lifts any of them to
//! forward-mode dual numbers so that Jacobians and gradients of the maps can
//! be evaluated with the same generic code that iterates them.
//!
//! Division is never an operator: it always goes through
//! [`Scalar::checked_div`] so that genericity failures surface as errors.

mod dual;
mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use num_complex::Complex64;
use serde_json::Value;

pub use dual::{gradient, jacobian, Dual};
pub use rational::{Rational, DEFAULT_MAX_BITS};

use crate::error::{Error, Result};

/// Relative tolerance below which a floating value is treated as zero by
/// the geometric rank tests.
pub const FLOAT_ZERO_TOL: f64 = 1e-9;

/// A commutative ring with unit. Polynomials and matrices are built over
/// this, so polynomial rings nest (`Poly<Poly<S>>`).
pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
}

/// A field element usable as coordinate value of a state.
pub trait Scalar: Ring + 'static {
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn checked_div(&self, rhs: &Self) -> Result<Self>;

    fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// True when the value cannot serve as a divisor. Differs from
    /// [`Ring::is_zero`] for dual numbers, where only the primal part counts.
    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    /// Absolute value of the (primal) value, for tolerance tests.
    fn magnitude(&self) -> f64;

    /// Lossy conversion of the (primal) value.
    fn to_complex(&self) -> Complex64;

    /// Combined bit length of numerator and denominator for exact values.
    fn bit_len(&self) -> u64 {
        0
    }

    fn is_finite(&self) -> bool {
        true
    }

    /// Integer power, negative exponents allowed.
    fn powi(&self, e: i32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * self.clone();
        }
        if e < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }
}

/// Equality for exact backends, relative closeness for floating ones.
pub fn approx_eq<S: Scalar>(a: &S, b: &S, rel_tol: f64) -> bool {
    if S::EXACT {
        return a == b;
    }
    let diff = (a.clone() - b.clone()).magnitude();
    diff <= rel_tol * a.magnitude().max(b.magnitude()).max(1.0)
}

/// Zero test used by rank decisions: exact for exact backends, relative to
/// `scale` for floating ones.
pub fn negligible<S: Scalar>(x: &S, scale: f64) -> bool {
    if S::EXACT {
        x.vanishes()
    } else {
        x.magnitude() <= FLOAT_ZERO_TOL * scale.max(f64::MIN_POSITIVE)
    }
}

/// Product of a sequence, `1` when empty.
pub fn product<S: Scalar, I: IntoIterator<Item = S>>(items: I) -> S {
    items.into_iter().fold(S::one(), |acc, v| acc * v)
}

/// Text and JSON encodings of scalars.
///
/// Rationals are `"p/q"` (or `"p"` when `q = 1`), reals decimal literals,
/// complex numbers `{"re": .., "im": ..}`.
pub trait ScalarIo: Scalar {
    const BACKEND: &'static str;
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Result<Self>;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let q = self / rhs;
        if *rhs == 0.0 || !q.is_finite() {
            return Err(Error::DivisionByZero);
        }
        Ok(q)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl ScalarIo for f64 {
    const BACKEND: &'static str = "float";

    fn to_text(&self) -> String {
        format!("{self:?}")
    }
    fn parse_text(s: &str) -> Result<Self> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not a real number: {s:?}")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite real: {s:?}")));
        }
        Ok(v)
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_text())
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse_text(s),
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            other => Err(Error::Parse(format!("expected real, got {other}"))),
        }
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if Ring::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        let q = self / rhs;
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::DivisionByZero);
        }
        Ok(q)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl ScalarIo for Complex64 {
    const BACKEND: &'static str = "complex";

    fn to_text(&self) -> String {
        format!("{:?}{:+?}i", self.re, self.im)
    }
    fn parse_text(s: &str) -> Result<Self> {
        // Plain reals are accepted as complex numbers with zero imaginary part.
        if let Ok(re) = f64::parse_text(s) {
            return Ok(Complex64::new(re, 0.0));
        }
        let v: Value =
            serde_json::from_str(s).map_err(|_| Error::Parse(format!("bad complex {s:?}")))?;
        Self::from_json(&v)
    }
    fn to_json(&self) -> Value {
        serde_json::json!({ "re": self.re, "im": self.im })
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(map) => {
                let part = |key: &str| -> Result<f64> {
                    match map.get(key) {
                        Some(x) => f64::from_json(x),
                        None => Ok(0.0),
                    }
                };
                Ok(Complex64::new(part("re")?, part("im")?))
            }
            other => f64::from_json(other).map(|re| Complex64::new(re, 0.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_division_by_zero() {
        assert_eq!(1.0f64.checked_div(&0.0), Err(Error::DivisionByZero));
        assert_eq!(2.0f64.checked_div(&4.0), Ok(0.5));
    }

    #[test]
    fn complex_json_round_trip() {
        let z = Complex64::new(0.25, -3.0);
        assert_eq!(Complex64::from_json(&z.to_json()).unwrap(), z);
        assert_eq!(
            Complex64::from_json(&serde_json::json!({"re": 1.5})).unwrap(),
            Complex64::new(1.5, 0.0)
        );
    }

    #[test]
    fn approx_eq_is_exact_for_rationals() {
        let a = Rational::from_ratio(1, 3);
        let b = Rational::from_ratio(2, 6);
        assert!(approx_eq(&a, &b, 0.0));
        assert!(!approx_eq(&a, &Rational::from_ratio(1, 2), 1.0));
        assert!(approx_eq(&1.0, &(1.0 + 1e-13), 1e-12));
    }

    #[test]
    fn powi_negative() {
        let half = Rational::from_ratio(1, 2);
        assert_eq!(half.powi(-3).unwrap(), Rational::from_i64(8));
        assert_eq!(Rational::zero().powi(-1), Err(Error::DivisionByZero));
    }
}
