//! Numeric scalars.
//!
//! [`Rational`] is an exact rational that stays on a fixed-width `i64`
//! fraction while the values fit and promotes itself to a big rational
//! otherwise. Every value has exactly one representation (the small one
//! whenever it fits), so equality and hashing are structural.
//!
//! [`Scalar`] abstracts over the two numeric modes the solver and the lifting
//! maps run in: exact (`Rational`) and binary floating point (`f64`).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone)]
enum Repr {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

/// Exact rational number in canonical form (reduced, positive denominator).
#[derive(Clone)]
pub struct Rational(Repr);

fn fits(v: &BigInt) -> Option<i64> {
    // i64::MIN is excluded so that negation never overflows on the small path.
    v.to_i64().filter(|&x| x != i64::MIN)
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(Ratio::from_integer(0)))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(Ratio::from_integer(1)))
    }

    pub fn from_integer(v: i64) -> Self {
        if v == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(v)));
        }
        Rational(Repr::Small(Ratio::from_integer(v)))
    }

    /// `numer / denom`. Panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_big(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Number {
                text: format!("{numer}/{denom}"),
                reason: "zero denominator".into(),
            });
        }
        Ok(Self::from_big(BigRational::new(numer, denom)))
    }

    pub fn from_big(r: BigRational) -> Self {
        match (fits(r.numer()), fits(r.denom())) {
            (Some(p), Some(q)) => Rational(Repr::Small(Ratio::new_raw(p, q))),
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    /// Exact value of a finite float.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Self::from_big)
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.numer() == 0,
            Repr::Big(_) => false,
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.denom() == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.numer() < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.numer() > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Integer value, if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(r) if *r.denom() == 1 => Some(*r.numer()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(b) => b.to_f64().unwrap_or_else(|| {
                let p = b.numer().to_f64().unwrap_or(f64::NAN);
                let q = b.denom().to_f64().unwrap_or(f64::NAN);
                p / q
            }),
        }
    }

    /// Largest integer not above this value.
    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(r.numer().div_floor(r.denom())),
            Repr::Big(b) => b.numer().div_floor(b.denom()),
        }
    }

    /// Smallest integer not below this value.
    pub fn ceil(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(r.numer().div_ceil(r.denom())),
            Repr::Big(b) => b.numer().div_ceil(b.denom()),
        }
    }

    /// Parses a decimal literal (`-50`, `0.25`, `1e-6`, `2.5E3`) or a
    /// rational literal (`p/q`) into its exact value.
    pub fn parse_decimal(text: &str) -> Result<Self> {
        let s = text.trim();
        if s.contains('/') {
            return s.parse();
        }
        let bad = |reason: &str| Error::Number {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(pos) => {
                let e: i64 = s[pos + 1..].parse().map_err(|_| bad("bad exponent"))?;
                (&s[..pos], e)
            }
            None => (s, 0),
        };
        let (sign, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((a, b)) => (a, b),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad("no digits"));
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad("expected decimal digits"));
        }
        let all = format!("{int_part}{frac_part}");
        let mut numer: BigInt = all.parse().map_err(|_| bad("no digits"))?;
        numer *= sign;
        let scale = exponent - frac_part.len() as i64;
        if scale.unsigned_abs() > 4096 {
            return Err(bad("exponent out of range"));
        }
        let ten = BigInt::from(10);
        let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
        if scale >= 0 {
            Ok(Self::from_big(BigRational::from_integer(numer * pow)))
        } else {
            Ok(Self::from_big(BigRational::new(numer, pow)))
        }
    }

    fn small_pair<'a>(&'a self, other: &'a Self) -> Option<(&'a Ratio<i64>, &'a Ratio<i64>)> {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => Some((a, b)),
            _ => None,
        }
    }

    fn add_impl(&self, rhs: &Self) -> Self {
        if let Some((a, b)) = self.small_pair(rhs) {
            if *a.denom() == 1 && *b.denom() == 1 {
                if let Some(s) = i64::checked_add(*a.numer(), *b.numer()) {
                    return Self::from_integer(s);
                }
            } else if let Some(s) = a.checked_add(b) {
                return Self::from_small(s);
            }
        }
        Self::from_big(self.to_big() + rhs.to_big())
    }

    fn sub_impl(&self, rhs: &Self) -> Self {
        if let Some((a, b)) = self.small_pair(rhs) {
            if *a.denom() == 1 && *b.denom() == 1 {
                if let Some(s) = i64::checked_sub(*a.numer(), *b.numer()) {
                    return Self::from_integer(s);
                }
            } else if let Some(s) = a.checked_sub(b) {
                return Self::from_small(s);
            }
        }
        Self::from_big(self.to_big() - rhs.to_big())
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if let Some((a, b)) = self.small_pair(rhs) {
            if *a.denom() == 1 && *b.denom() == 1 {
                if let Some(s) = i64::checked_mul(*a.numer(), *b.numer()) {
                    return Self::from_integer(s);
                }
            } else if let Some(s) = a.checked_mul(b) {
                return Self::from_small(s);
            }
        }
        Self::from_big(self.to_big() * rhs.to_big())
    }

    fn div_impl(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        if let Some((a, b)) = self.small_pair(rhs) {
            if let Some(s) = a.checked_div(b) {
                return Self::from_small(s);
            }
        }
        Self::from_big(self.to_big() / rhs.to_big())
    }

    fn from_small(r: Ratio<i64>) -> Self {
        if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
            return Self::from_big(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())));
        }
        Rational(Repr::Small(r))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Self::from_integer(v as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(v))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.numer() == b.numer() && a.denom() == b.denom(),
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(r) => {
                0u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn is_decimal_integer(s: &str, allow_sign: bool) -> bool {
    let digits = if allow_sign {
        s.strip_prefix('-').unwrap_or(s)
    } else {
        s
    };
    !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit())
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p"` or `"p/q"` with decimal integers; `q` must be positive.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Number {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, Some(q)),
            None => (s, None),
        };
        if !is_decimal_integer(p, true) {
            return Err(bad("numerator is not a decimal integer"));
        }
        let numer: BigInt = p.parse().map_err(|_| bad("numerator is not a decimal integer"))?;
        let denom: BigInt = match q {
            None => BigInt::one(),
            Some(q) => {
                if !is_decimal_integer(q, false) {
                    return Err(bad("denominator is not a positive decimal integer"));
                }
                q.parse().map_err(|_| bad("denominator is not a decimal integer"))?
            }
        };
        if denom.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(Self::from_big(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational string \"p\" or \"p/q\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational::from(BigInt::from(v)))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$imp(rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$imp(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$imp(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(r) => Rational(Repr::Small(Ratio::new_raw(-*r.numer(), *r.denom()))),
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = self.add_impl(rhs);
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = self.add_impl(&rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = self.sub_impl(rhs);
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = self.sub_impl(&rhs);
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = self.mul_impl(rhs);
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Numeric mode of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Exact,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NumericMode::Exact => "exact",
            NumericMode::Float => "float",
        })
    }
}

/// Field operations shared by the exact and floating-point modes.
///
/// Comparisons take a tolerance; the exact implementation ignores it.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + PartialOrd + Send + Sync + 'static {
    const MODE: NumericMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact rational image of the value (floats convert exactly).
    fn to_rational(&self) -> Rational;

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn abs_ref(&self) -> Self;

    /// `self -= a * b`
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.sub_ref(&a.mul_ref(b));
    }

    fn is_zero_tol(&self, tol: f64) -> bool;
    fn is_pos_tol(&self, tol: f64) -> bool;
    fn is_neg_tol(&self, tol: f64) -> bool;

    /// Flushes values within `tol` of zero to exact zero (floats only).
    fn snap(&mut self, _tol: f64) {}

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v))
    }

    fn half() -> Self {
        Self::from_rational(&Rational::new(1, 2))
    }

    /// JSON form: exact values as rational strings, floats as numbers.
    fn to_json(&self) -> serde_json::Value;
}

impl Scalar for Rational {
    const MODE: NumericMode = NumericMode::Exact;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add_impl(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub_impl(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self.div_impl(rhs)
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn abs_ref(&self) -> Self {
        self.abs()
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let prod = a.mul_impl(b);
        *self = self.sub_impl(&prod);
    }
    fn is_zero_tol(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn is_pos_tol(&self, _tol: f64) -> bool {
        self.is_positive()
    }
    fn is_neg_tol(&self, _tol: f64) -> bool {
        self.is_negative()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Rational {
        Rational::from_f64(*self).unwrap_or_else(Rational::zero)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn abs_ref(&self) -> Self {
        self.abs()
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn is_zero_tol(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn is_pos_tol(&self, tol: f64) -> bool {
        *self > tol
    }
    fn is_neg_tol(&self, tol: f64) -> bool {
        *self < -tol
    }
    fn snap(&mut self, tol: f64) {
        if self.abs() <= tol {
            *self = 0.0;
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

/// `Σ a_i b_i`
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_canonical_form() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-6/3").to_string(), "-2");
        assert_eq!(q("0/5"), Rational::zero());
        assert_eq!(q("-0"), Rational::zero());
        assert!("3/0".parse::<Rational>().is_err());
        assert!("3/-4".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("+-1".parse::<Rational>().is_err());
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(Rational::parse_decimal("1e-6").unwrap(), Rational::new(1, 1_000_000));
        assert_eq!(Rational::parse_decimal("-50").unwrap(), Rational::from_integer(-50));
        assert_eq!(Rational::parse_decimal("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(Rational::parse_decimal("2.5E2").unwrap(), Rational::from_integer(250));
        assert_eq!(Rational::parse_decimal("3/9").unwrap(), Rational::new(1, 3));
        assert!(Rational::parse_decimal("abc").is_err());
        assert!(Rational::parse_decimal(".").is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sum = &big + &big;
        assert_eq!(sum.numer(), BigInt::from(i64::MAX) * 2);
        let back = &sum - &big;
        assert_eq!(back, big);
        // the demoted value must compare equal to a freshly built small one
        assert_eq!(&(&sum / &Rational::from_integer(2)) - &Rational::one(), Rational::from_integer(i64::MAX - 1));
    }

    #[test]
    fn mixed_ordering() {
        let huge = Rational::from(BigInt::from(10).pow(30));
        assert!(huge > Rational::from_integer(5));
        assert!(-&huge < Rational::from_integer(-5));
        assert_eq!(huge.cmp(&huge.clone()), Ordering::Equal);
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(q("-7/2").floor(), BigInt::from(-4));
        assert_eq!(q("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(q("7/2").floor(), BigInt::from(3));
    }

    #[test]
    fn serde_uses_strings() {
        let v: Vec<Rational> = serde_json::from_str(r#"["1/2", "-3", 4]"#).unwrap();
        assert_eq!(v, vec![q("1/2"), q("-3"), q("4")]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","-3","4"]"#);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small() -> impl Strategy<Value = Rational> {
            (-1_000_000i64..1_000_000, 1i64..1_000_000).prop_map(|(p, q)| Rational::new(p, q))
        }

        fn wide() -> impl Strategy<Value = Rational> {
            (any::<i64>(), 1i64..i64::MAX).prop_map(|(p, q)| Rational::new(p, q))
        }

        fn big(r: &Rational) -> BigRational {
            r.to_big()
        }

        proptest! {
            #[test]
            fn matches_big_rational(a in wide(), b in wide()) {
                prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
                prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
                prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
                if !b.is_zero() {
                    prop_assert_eq!(big(&(&a / &b)), big(&a) / big(&b));
                }
                prop_assert_eq!(a.cmp(&b), big(&a).cmp(&big(&b)));
            }

            #[test]
            fn field_identities(a in small(), b in small(), c in small()) {
                prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
                prop_assert_eq!(&(&a - &b) + &b, a.clone());
                let mut d = a.clone();
                Scalar::sub_mul_assign(&mut d, &b, &c);
                prop_assert_eq!(d, &a - &(&b * &c));
            }

            #[test]
            fn display_roundtrip(a in wide()) {
                prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
            }
        }
    }
}
