//! Scalars that are either exact rationals or doubles, and the [`Engine`]
//! that fixes which of the two a computation starts in.
//!
//! Arithmetic between two exact values stays exact. Any operation that
//! touches a float produces a float, so a computation that started exact
//! and needed an irrational square root continues in floating point and
//! reports that through [`Scalar::is_exact`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default absolute tolerance for float-mode comparisons.
pub const DEFAULT_EPSILON: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as an exact rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn float(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    /// True only for an exact zero or a float that is literally `0.0`.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Square root. Exact when numerator and denominator are both perfect
    /// squares, otherwise falls back to a float.
    pub fn sqrt(&self) -> Scalar {
        match self {
            Scalar::Exact(r) if !r.is_negative() => {
                let (n, d) = (r.numer(), r.denom());
                let (sn, sd) = (n.sqrt(), d.sqrt());
                if &(&sn * &sn) == n && &(&sd * &sd) == d {
                    Scalar::Exact(BigRational::new(sn, sd))
                } else {
                    Scalar::Float(self.to_f64().sqrt())
                }
            }
            _ => Scalar::Float(self.to_f64().sqrt()),
        }
    }

    fn binary(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => Scalar::Float(float(self.to_f64(), rhs.to_f64())),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $exact:expr, $float:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.binary(rhs, $exact, $float)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

// Zero shortcuts matter: tables and Gram matrices are mostly zeros.
forward_binop!(
    Add,
    add,
    |a, b| if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a + b
    },
    |a, b| a + b
);
forward_binop!(Sub, sub, |a, b| if b.is_zero() { a.clone() } else { a - b }, |a, b| a - b);
forward_binop!(
    Mul,
    mul,
    |a, b| if a.is_zero() || b.is_zero() { BigRational::zero() } else { a * b },
    |a, b| a * b
);
// Exact division by zero panics inside num-rational; callers check first.
forward_binop!(Div, div, |a, b| a / b, |a, b| a / b);

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

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => f.write_str(&format_significant(*x)),
        }
    }
}

/// Formats a double with 17 significant digits, like C's `%.17g`.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..17).contains(&exp) {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parses "p/q", an integer, or a decimal with optional exponent into an
/// exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all_digits).ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Some(if negative { -value } else { value })
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses exactly when possible; strings such as "nan" become floats.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(r) = parse_rational(s) {
            return Ok(Scalar::Exact(r));
        }
        s.trim()
            .parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Arithmetic mode plus the float tolerance used for every zero test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Engine {
    mode: Mode,
    epsilon: f64,
}

impl Engine {
    pub fn new(mode: Mode) -> Self {
        Engine { mode, epsilon: DEFAULT_EPSILON }
    }

    pub fn exact() -> Self {
        Engine::new(Mode::Exact)
    }

    pub fn float() -> Self {
        Engine::new(Mode::Float)
    }

    /// Panics unless `epsilon` is positive and finite.
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        assert!(epsilon > 0.0 && epsilon.is_finite(), "epsilon must be positive");
        self.epsilon = epsilon;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Brings a value into this engine's mode. Floats cannot become exact,
    /// so in exact mode they pass through unchanged.
    pub fn cast(&self, s: &Scalar) -> Scalar {
        match self.mode {
            Mode::Exact => s.clone(),
            Mode::Float => s.to_float(),
        }
    }

    pub fn int(&self, n: i64) -> Scalar {
        self.cast(&Scalar::int(n))
    }

    pub fn ratio(&self, num: i64, den: i64) -> Scalar {
        self.cast(&Scalar::ratio(num, den))
    }

    pub fn parse(&self, text: &str) -> Result<Scalar> {
        match self.mode {
            Mode::Exact => text.parse(),
            Mode::Float => match text.trim().parse::<f64>() {
                Ok(x) => Ok(Scalar::Float(x)),
                Err(_) => text.parse::<Scalar>().map(|s| s.to_float()),
            },
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => x.abs() <= self.epsilon,
        }
    }

    pub fn approx_eq(&self, a: &Scalar, b: &Scalar) -> bool {
        self.is_zero(&(a - b))
    }

    /// Strictly positive beyond the tolerance.
    pub fn is_positive(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > self.epsilon,
        }
    }

    pub fn is_negative(&self, s: &Scalar) -> bool {
        self.is_positive(&-s)
    }
}

impl Default for Engine {
    fn default() -> Self {
        Engine::exact()
    }
}
