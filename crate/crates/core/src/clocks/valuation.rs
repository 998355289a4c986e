use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{ClockError, ClockId, ClockSet};

/// Exact non-negative time value.
pub type Time = BigRational;

/// `num / den` as a [`Time`].
pub fn time(num: i64, den: i64) -> Time {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Assignment of a non-negative time to every user clock; slot `i` holds clock `ClockId(i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    values: Vec<Time>,
}

impl Valuation {
    /// The all-zeros valuation.
    pub fn zero(clocks: usize) -> Self {
        Valuation {
            values: vec![Time::zero(); clocks],
        }
    }

    pub fn new(values: Vec<Time>) -> Result<Self, ClockError> {
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(ClockError::NegativeDelay(v.to_string()));
        }
        Ok(Valuation { values })
    }

    /// Exact conversion from binary floats. Panics on negative or non-finite input.
    pub fn from_f64s(values: &[f64]) -> Self {
        Valuation::new(
            values
                .iter()
                .map(|&f| BigRational::from_f64(f).expect("finite value"))
                .collect(),
        )
        .expect("non-negative values")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Time] {
        &self.values
    }

    /// Value of `clock`; the reference clock reads as zero.
    pub fn get(&self, clock: ClockId) -> Result<Time, ClockError> {
        if clock == ClockId::REFERENCE {
            return Ok(Time::zero());
        }
        self.values
            .get(clock.index() - 1)
            .cloned()
            .ok_or(ClockError::ClockOutOfRange(clock.index()))
    }

    pub fn delay(&self, d: &Time) -> Result<Valuation, ClockError> {
        if d.is_negative() {
            return Err(ClockError::NegativeDelay(d.to_string()));
        }
        Ok(Valuation {
            values: self.values.iter().map(|v| v + d).collect(),
        })
    }

    pub fn reset(&self, clocks: &[ClockId]) -> Result<Valuation, ClockError> {
        let mut out = self.clone();
        for &c in clocks {
            if c.index() == 0 || c.index() > out.values.len() {
                return Err(ClockError::ClockOutOfRange(c.index()));
            }
            out.values[c.index() - 1] = Time::zero();
        }
        Ok(out)
    }

    /// Renders as `{x=5/2, y=0}`.
    pub fn display<'a>(&'a self, clocks: &'a ClockSet) -> impl fmt::Display + 'a {
        DisplayValuation { v: self, clocks }
    }
}

struct DisplayValuation<'a> {
    v: &'a Valuation,
    clocks: &'a ClockSet,
}

impl fmt::Display for DisplayValuation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, val) in self.v.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let name = self
                .clocks
                .names()
                .get(i)
                .map(String::as_str)
                .unwrap_or("?");
            write!(f, "{name}={val}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.values.iter().map(|v| v.to_string()))
    }
}
