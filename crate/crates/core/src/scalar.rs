//! Exact coefficient types for algebra elements.
//!
//! Every Hall-algebra structure constant is a rational number built from
//! counts and powers of `q`, so the coefficient ring only needs field
//! operations plus a way to import counts. Any `num_rational::Ratio<T>` over
//! a signed integer type qualifies; [`crate::Rat`] (big rationals) is the
//! default and never overflows.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// Coefficient field of the Hall algebras.
pub trait Scalar: Num + Clone + Debug + Display + PartialOrd + Send + Sync + 'static {
    /// The ratio `num / den` of two nonnegative counts. Panics if the
    /// backing integer type cannot represent the operands or `den == 0`.
    fn from_counts(num: u128, den: u128) -> Self;

    /// `q^exp` for a possibly negative exponent.
    fn q_pow(q: u32, exp: i64) -> Self {
        let base = Self::from_counts(q as u128, 1);
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc * base.clone();
        }
        if exp < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    /// Renders as `"num/den"`, always with an explicit denominator.
    fn to_fraction(&self) -> String;

    /// Parses `"num/den"` or a bare integer.
    fn parse_fraction(s: &str) -> Option<Self>;

    /// Exact integer value when the denominator is one.
    fn to_i128(&self) -> Option<i128>;
}

impl<T> Scalar for Ratio<T>
where
    T: Integer + Signed + Clone + FromPrimitive + FromStr + Display + Debug + Send + Sync + 'static,
{
    fn from_counts(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let n = T::from_u128(num).expect("coefficient overflow in scalar type");
        let d = T::from_u128(den).expect("coefficient overflow in scalar type");
        Ratio::new(n, d)
    }

    fn to_fraction(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_fraction(s: &str) -> Option<Self> {
        let s = s.trim();
        let value = match s.split_once('/') {
            Some((n, d)) => {
                let n = T::from_str(n.trim()).ok()?;
                let d = T::from_str(d.trim()).ok()?;
                if d.is_zero() {
                    return None;
                }
                Ratio::new(n, d)
            }
            None => Ratio::from_integer(T::from_str(s).ok()?),
        };
        Some(value)
    }

    fn to_i128(&self) -> Option<i128> {
        if !self.denom().is_one() {
            return None;
        }
        self.numer().to_string().parse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_rational::Rational64;
    use num_traits::One;

    #[test]
    fn q_powers() {
        assert_eq!(Rat::q_pow(2, 3), Rat::from_counts(8, 1));
        assert_eq!(Rat::q_pow(3, -2), Rat::from_counts(1, 9));
        assert_eq!(Rat::q_pow(5, 0), Rat::one());
        assert_eq!(Rational64::q_pow(2, -1), Rational64::new(1, 2));
    }

    #[test]
    fn fraction_strings() {
        let x = Rat::from_counts(6, 4);
        assert_eq!(x.to_fraction(), "3/2");
        assert_eq!(Rat::parse_fraction("3/2"), Some(x));
        assert_eq!(Rat::parse_fraction("-7"), Some(Rat::from_integer((-7).into())));
        assert_eq!(Rat::parse_fraction("1/0"), None);
        assert_eq!(Rat::parse_fraction("x"), None);
        assert_eq!(Rat::one().to_fraction(), "1/1");
    }
}
