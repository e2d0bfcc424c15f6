//! Half-integer spin labels.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// A half-integer j ∈ {1/2, 1, 3/2, …}, stored as 2j to keep arithmetic exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    /// Build from 2j. Requires 2j ≥ 1.
    pub fn from_twice(twice: i64) -> Result<Self> {
        if twice < 1 {
            return Err(Error::InvalidParameter(format!(
                "spin label must be positive, got 2j = {twice}"
            )));
        }
        Ok(HalfInt { twice })
    }

    /// Build from a float that must be a half-integer to within 1e−9.
    pub fn try_from_f64(x: f64) -> Result<Self> {
        let twice = (2.0 * x).round();
        if !x.is_finite() || (2.0 * x - twice).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "{x} is not a half-integer"
            )));
        }
        Self::from_twice(twice as i64)
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Dimension of the spin-j irrep, 2j + 1.
    pub fn dim(self) -> usize {
        (self.twice + 1) as usize
    }

    /// j(j+1), the Casimir eigenvalue.
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts "3/2", "1.5" or "2".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("cannot parse spin label `{s}`"))
            })?;
            let den: i64 = den.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("cannot parse spin label `{s}`"))
            })?;
            if den == 2 {
                return Self::from_twice(num);
            }
            if den == 1 {
                return Self::from_twice(2 * num);
            }
            return Err(Error::InvalidParameter(format!(
                "spin label denominator must be 1 or 2, got `{s}`"
            )));
        }
        let x: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse spin label `{s}`")))?;
        Self::try_from_f64(x)
    }
}
