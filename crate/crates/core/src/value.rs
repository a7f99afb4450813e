//! Scalar distance values: IEEE doubles and exact rationals behind one trait.
//!
//! The clustering recursions branch on exact equality of distances (merge
//! grids are the distinct values actually present in a matrix), so both
//! implementations compare exactly: `f64` bit for bit, [`BigRational`] as a
//! true rational. Inputs are validated finite up front, which keeps `f64`
//! comparisons total.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Scalar type for distances, linkage values and dendrogram heights.
pub trait Dist:
    Clone + PartialEq + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(k: u32) -> Self;

    /// Whether the value is usable as a distance component (finite for floats).
    fn is_valid(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn abs_diff(&self, rhs: &Self) -> Self;
    fn div_count(&self, k: usize) -> Self;

    /// Total order. Callers only construct validated (finite) values.
    fn cmp_total(&self, rhs: &Self) -> Ordering;

    /// Parse a plain decimal literal ("2.1", "3", and for rationals "21/10").
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Round to `places` decimal digits (ties away from zero).
    fn round_to_decimals(&self, places: u32) -> Self;

    fn to_f64_approx(&self) -> f64;

    /// Canonical JSON representation: numbers for doubles, strings for rationals.
    fn json_value(&self) -> serde_json::Value;

    /// Read back what `json_value` produces; doubles also accept decimal strings.
    fn from_json(value: &serde_json::Value) -> Option<Self>;

    /// Decimal rendering for tree formats (may approximate rationals).
    fn decimal_display(&self) -> String;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn halve(&self) -> Self {
        self.div_count(2)
    }

    fn max_of(&self, rhs: &Self) -> Self {
        if self.cmp_total(rhs) == Ordering::Less {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(&self, rhs: &Self) -> Self {
        if self.cmp_total(rhs) == Ordering::Greater {
            rhs.clone()
        } else {
            self.clone()
        }
    }
}

impl Dist for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(k: u32) -> Self {
        f64::from(k)
    }

    fn is_valid(&self) -> bool {
        self.is_finite()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn abs_diff(&self, rhs: &Self) -> Self {
        (self - rhs).abs()
    }

    fn div_count(&self, k: usize) -> Self {
        self / k as f64
    }

    fn cmp_total(&self, rhs: &Self) -> Ordering {
        self.total_cmp(rhs)
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        text.trim().parse::<f64>().ok().filter(|x| x.is_finite())
    }

    fn round_to_decimals(&self, places: u32) -> Self {
        let scale = 10f64.powi(places as i32);
        (self * scale).round() / scale
    }

    fn to_f64_approx(&self) -> f64 {
        *self
    }

    fn json_value(&self) -> serde_json::Value {
        serde_json::json!(self)
    }

    fn from_json(value: &serde_json::Value) -> Option<Self> {
        match value {
            serde_json::Value::Number(n) => n.as_f64().filter(|x| x.is_finite()),
            serde_json::Value::String(s) => Self::parse_decimal(s),
            _ => None,
        }
    }

    fn decimal_display(&self) -> String {
        format!("{self}")
    }
}

impl Dist for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }

    fn from_int(k: u32) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }

    fn is_valid(&self) -> bool {
        true
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn abs_diff(&self, rhs: &Self) -> Self {
        (self - rhs).abs()
    }

    fn div_count(&self, k: usize) -> Self {
        assert!(k > 0, "division by zero count");
        self / BigRational::from_integer(BigInt::from(k))
    }

    fn cmp_total(&self, rhs: &Self) -> Ordering {
        self.cmp(rhs)
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        parse_rational(text)
    }

    fn round_to_decimals(&self, places: u32) -> Self {
        let scale = BigRational::from_integer(BigInt::from(10u32).pow(places));
        let shifted = self * &scale;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let rounded = if shifted.is_negative() {
            -(-&shifted + &half).floor()
        } else {
            (&shifted + &half).floor()
        };
        rounded / scale
    }

    fn to_f64_approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn json_value(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn from_json(value: &serde_json::Value) -> Option<Self> {
        match value {
            // JSON numbers arrive as doubles; every finite double is an exact rational.
            serde_json::Value::Number(n) => {
                n.as_f64().filter(|x| x.is_finite()).and_then(BigRational::from_float)
            }
            serde_json::Value::String(s) => parse_rational(s),
            _ => None,
        }
    }

    fn decimal_display(&self) -> String {
        format!("{}", self.to_f64_approx())
    }
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(num * BigInt::from(sign), den))
}
