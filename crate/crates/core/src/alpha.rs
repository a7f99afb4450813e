//! The unchaining parameter α, compared exactly.
//!
//! α multiplies integer simplex dimensions and block sizes, and those products
//! are compared against integers; doing the comparison in rational arithmetic
//! keeps fractional α (every finite double is a dyadic rational) exact. Any
//! real α ≥ 1 is accepted; integral α is what the reference examples use.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AlphaError {
    #[error("alpha must be a finite number >= 1, got {0}")]
    OutOfRange(f64),
}

#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Alpha {
    value: BigRational,
}

impl Alpha {
    pub fn new(value: f64) -> Result<Self, AlphaError> {
        if !value.is_finite() || value < 1.0 {
            return Err(AlphaError::OutOfRange(value));
        }
        let value = BigRational::from_float(value).expect("finite float converts exactly");
        Ok(Alpha { value })
    }

    /// Integral α; panics on 0 (the parameter domain is α ≥ 1).
    pub fn integer(k: u32) -> Self {
        assert!(k >= 1, "alpha must be >= 1");
        Alpha { value: BigRational::from_integer(BigInt::from(k)) }
    }

    /// The merge gate: α · crossing_dim ≥ min_dim.
    pub fn admits(&self, crossing_dim: usize, min_dim: usize) -> bool {
        let lhs = &self.value * BigRational::from_integer(BigInt::from(crossing_dim));
        lhs >= BigRational::from_integer(BigInt::from(min_dim))
    }

    /// Smallest integer dimension passing the gate: ceil(min_dim / α).
    pub fn required_crossing_dim(&self, min_dim: usize) -> usize {
        let needed = (BigRational::from_integer(BigInt::from(min_dim)) / &self.value).ceil();
        needed
            .to_integer()
            .to_usize()
            .expect("dimension bound fits in usize")
    }

    /// The big-block rule: α · block_size ≥ max_size_in_component.
    pub fn classifies_big(&self, block_size: usize, max_size: usize) -> bool {
        let lhs = &self.value * BigRational::from_integer(BigInt::from(block_size));
        lhs >= BigRational::from_integer(BigInt::from(max_size))
    }

    pub fn as_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_is_checked() {
        assert!(Alpha::new(1.0).is_ok());
        assert!(Alpha::new(2.5).is_ok());
        assert_eq!(Alpha::new(0.5), Err(AlphaError::OutOfRange(0.5)));
        assert!(Alpha::new(f64::NAN).is_err());
        assert!(Alpha::new(f64::INFINITY).is_err());
    }

    #[test]
    fn gate_is_exact() {
        let a3 = Alpha::integer(3);
        assert!(a3.admits(1, 3));
        assert!(!Alpha::integer(1).admits(1, 3));
        assert!(Alpha::integer(1).admits(3, 3));
        // fractional alpha: 1.5 * 2 = 3 >= 3 holds exactly
        let a15 = Alpha::new(1.5).unwrap();
        assert!(a15.admits(2, 3));
        assert!(!a15.admits(1, 2));
    }

    #[test]
    fn required_dim_is_ceiling() {
        assert_eq!(Alpha::integer(1).required_crossing_dim(3), 3);
        assert_eq!(Alpha::integer(2).required_crossing_dim(3), 2);
        assert_eq!(Alpha::integer(3).required_crossing_dim(3), 1);
        assert_eq!(Alpha::new(1.5).unwrap().required_crossing_dim(3), 2);
        assert_eq!(Alpha::integer(2).required_crossing_dim(0), 0);
    }

    #[test]
    fn big_block_rule() {
        let a2 = Alpha::integer(2);
        assert!(a2.classifies_big(3, 6));
        assert!(!a2.classifies_big(2, 5));
        assert!(Alpha::integer(1).classifies_big(4, 4));
    }
}
