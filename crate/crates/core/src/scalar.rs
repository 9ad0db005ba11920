//! Scalar abstraction shared by the linear-algebra routines.
//!
//! Everything determinant-based (eigenvector construction, cofactors,
//! null-space oracle) is written once against [`Scalar`] and instantiated for
//! `f32`, `f64` and arbitrary-precision rationals. Exact instantiations treat
//! every tolerance as zero.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and zero tests need no tolerance.
    const EXACT: bool;

    /// Converts a graph weight. Exact types take the binary value of the
    /// double verbatim.
    fn lift(x: f64) -> Self;

    fn approx(&self) -> f64;

    /// Relative pivot tolerance used by rank decisions; zero for exact types.
    fn default_tolerance() -> Self;

    /// JSON rendering: numbers for floats, `"p/q"` strings for rationals.
    fn to_json(&self) -> serde_json::Value;

    fn from_count(n: usize) -> Self {
        Self::lift(n as f64)
    }

    /// Whether `self` is zero relative to `scale` under `tol`.
    fn is_negligible(&self, scale: &Self, tol: &Self) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs() <= tol.clone() * scale.clone()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn lift(x: f64) -> Self {
        x
    }

    fn approx(&self) -> f64 {
        *self
    }

    fn default_tolerance() -> Self {
        1e-12
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(*self)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn lift(x: f64) -> Self {
        x as f32
    }

    fn approx(&self) -> f64 {
        f64::from(*self)
    }

    fn default_tolerance() -> Self {
        1e-5
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(f64::from(*self))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn lift(x: f64) -> Self {
        BigRational::from_float(x).expect("graph weights are finite")
    }

    fn approx(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn default_tolerance() -> Self {
        BigRational::zero()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from_usize(n).expect("usize fits in BigInt"))
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Ok(r) = text.parse::<BigRational>() {
        return Some(r);
    }
    let x: f64 = text.parse().ok()?;
    if x.is_finite() {
        BigRational::from_float(x)
    } else {
        None
    }
}

/// `‖v‖∞`
pub fn max_abs<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| {
        let a = x.abs();
        if a > acc {
            a
        } else {
            acc
        }
    })
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_conversion_is_exact_for_binary_fractions() {
        let r = BigRational::lift(-1.5);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.approx(), -1.5);
    }

    #[test]
    fn negligible_uses_tolerance_only_for_floats() {
        assert!(1e-14_f64.is_negligible(&1.0, &1e-12));
        assert!(!1e-10_f64.is_negligible(&1.0, &1e-12));
        let tiny = BigRational::new(1.into(), BigInt::from(10).pow(30));
        assert!(!tiny.is_negligible(&BigRational::lift(1.0), &BigRational::lift(1.0)));
    }

    #[test]
    fn parse_rational_accepts_fractions_and_decimals() {
        assert_eq!(parse_rational("-7/22").unwrap().to_string(), "-7/22");
        assert_eq!(parse_rational("0.25").unwrap().to_string(), "1/4");
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn json_rendering() {
        assert_eq!(0.5f64.to_json(), serde_json::json!(0.5));
        assert_eq!(BigRational::lift(0.25).to_json(), serde_json::json!("1/4"));
    }
}
