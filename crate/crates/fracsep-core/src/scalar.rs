//! Two-mode arithmetic: exact rationals or binary64 floats.
//!
//! Every computation runs entirely in one mode, fixed when the IFS is
//! constructed. Exact mode is what makes equality decisions (class merging,
//! zero-gap detection) trustworthy; float mode trades that away for speed.
//! Mixing modes in a single operation is a programming error and panics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Arithmetic mode, fixed per computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

/// A number carried in either exact or float mode.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Scalar {
        Scalar::from_int(0, mode)
    }

    pub fn one(mode: Mode) -> Scalar {
        Scalar::from_int(1, mode)
    }

    pub fn from_int(n: i64, mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(n))),
            Mode::Float => Scalar::Float(n as f64),
        }
    }

    /// Exact rational p/q. Panics if q == 0.
    pub fn ratio(p: i64, q: i64) -> Scalar {
        Scalar::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar::Exact(r)
    }

    pub fn from_f64(x: f64) -> Scalar {
        assert!(x.is_finite(), "scalar must be finite");
        Scalar::Float(x)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or_else(|| {
                let n = r.numer().to_f64().unwrap_or(f64::MAX);
                let d = r.denom().to_f64().unwrap_or(f64::MAX);
                n / d
            }),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn recip(&self) -> Scalar {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Float(x) => Scalar::Float(1.0 / x),
        }
    }

    /// Integer power, exact in exact mode. Negative exponents invert.
    pub fn powi(&self, k: i32) -> Scalar {
        if k < 0 {
            return self.recip().powi(-k);
        }
        let mut acc = Scalar::one(self.mode());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn midpoint(a: &Scalar, b: &Scalar) -> Scalar {
        &(a + b) / &Scalar::from_int(2, a.mode())
    }

    /// Parses a scalar in the given mode. Exact mode accepts "p/q", plain
    /// integers and finite decimals ("0.2" becomes 1/5 exactly).
    pub fn parse(input: &str, mode: Mode) -> Result<Scalar> {
        let s = input.trim();
        match mode {
            Mode::Float => {
                let x: f64 = s.parse().map_err(|_| Error::Parse {
                    input: input.to_string(),
                    expected: "a float",
                })?;
                if !x.is_finite() {
                    return Err(Error::Parse {
                        input: input.to_string(),
                        expected: "a finite float",
                    });
                }
                Ok(Scalar::Float(x))
            }
            Mode::Exact => parse_rational(s).map(Scalar::Exact).ok_or(Error::Parse {
                input: input.to_string(),
                expected: "a rational (p/q, integer or decimal)",
            }),
        }
    }
}

/// "p/q", "p" or a finite decimal like "-0.25".
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).ok()?;
        let d = BigInt::from_str(den.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).ok()?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigInt::from_str(frac_part).ok()?;
        let numer = int_part * &scale + if negative { -frac } else { frac };
        return Some(BigRational::new(numer, scale));
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

fn check_modes(a: &Scalar, b: &Scalar) {
    debug_assert!(
        a.mode() == b.mode(),
        "exact and float scalars must not be mixed in one computation"
    );
    if a.mode() != b.mode() {
        panic!("exact and float scalars must not be mixed in one computation");
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                check_modes(self, rhs);
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    _ => unreachable!(),
                }
            }
        }

        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        check_modes(self, other);
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.total_cmp(b),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // num prints reduced "p/q", or just "p" when the denominator is 1.
            Scalar::Exact(r) => write!(f, "{}", r),
            Scalar::Float(x) => {
                // 17 significant digits round-trip any binary64 value.
                write!(f, "{:.16e}", x)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(
            parse_rational("1/3").unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        assert_eq!(
            parse_rational("-2/6").unwrap(),
            BigRational::new((-1).into(), 3.into())
        );
        assert_eq!(
            parse_rational("7").unwrap(),
            BigRational::from_integer(7.into())
        );
        assert_eq!(
            parse_rational("0.2").unwrap(),
            BigRational::new(1.into(), 5.into())
        );
        assert_eq!(
            parse_rational("-0.25").unwrap(),
            BigRational::new((-1).into(), 4.into())
        );
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn exact_arithmetic_is_exact() {
        let third = Scalar::ratio(1, 3);
        let sum = &(&third + &third) + &third;
        assert_eq!(sum, Scalar::one(Mode::Exact));
        assert_eq!(third.powi(2), Scalar::ratio(1, 9));
        assert_eq!(third.powi(-2), Scalar::from_int(9, Mode::Exact));
    }

    #[test]
    fn float_mode_orders_totally() {
        let a = Scalar::from_f64(0.1);
        let b = Scalar::from_f64(0.2);
        assert!(a < b);
        assert_eq!(Scalar::from_f64(0.5), Scalar::from_f64(0.5));
    }

    #[test]
    #[should_panic]
    fn mixing_modes_panics() {
        let _ = &Scalar::ratio(1, 2) + &Scalar::from_f64(0.5);
    }

    #[test]
    fn display_round_trips() {
        let x = Scalar::ratio(-3, 7);
        assert_eq!(x.to_string(), "-3/7");
        let y = Scalar::from_f64(0.1);
        let printed = y.to_string();
        let back: f64 = printed.parse().unwrap();
        assert_eq!(back, 0.1);
    }
}
