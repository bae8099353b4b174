use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A real number or one of the two infinities.
///
/// Variant order matters: the derived `PartialOrd` sorts `NegInfinity` below
/// every finite value and `Infinity` above.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtendedReal::Infinity
        } else if x == f64::NEG_INFINITY {
            ExtendedReal::NegInfinity
        } else {
            ExtendedReal::Finite(x)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInfinity => f64::NEG_INFINITY,
            ExtendedReal::Finite(x) => x,
            ExtendedReal::Infinity => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        self == ExtendedReal::Infinity
    }

    /// `max(self, 0)`.
    pub fn clamp_nonneg(self) -> Self {
        match self {
            ExtendedReal::NegInfinity => ExtendedReal::Finite(0.0),
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x.max(0.0)),
            ExtendedReal::Infinity => ExtendedReal::Infinity,
        }
    }

    /// `self - other`, failing on `inf - inf` of equal sign.
    pub fn checked_sub(self, other: Self) -> Result<Self> {
        use ExtendedReal::*;
        match (self, other) {
            (Infinity, Infinity) | (NegInfinity, NegInfinity) => Err(Error::Indeterminate),
            (Infinity, _) | (_, NegInfinity) => Ok(Infinity),
            (NegInfinity, _) | (_, Infinity) => Ok(NegInfinity),
            (Finite(a), Finite(b)) => Ok(Finite(a - b)),
        }
    }

    /// Division by a strictly positive finite scalar.
    pub fn div_pos(self, d: f64) -> Self {
        debug_assert!(d > 0.0 && d.is_finite());
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x / d),
            other => other,
        }
    }

    pub fn scale_pos(self, s: f64) -> Self {
        debug_assert!(s > 0.0 && s.is_finite());
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x * s),
            other => other,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        ExtendedReal::from_f64(x)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInfinity => f.write_str("-inf"),
            ExtendedReal::Finite(x) => fmt::Display::fmt(x, f),
            ExtendedReal::Infinity => f.write_str("inf"),
        }
    }
}

/// Finite values serialize as JSON numbers, infinities as the strings
/// `"inf"` and `"-inf"`.
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::NegInfinity => s.serialize_str("-inf"),
            ExtendedReal::Finite(x) => s.serialize_f64(*x),
            ExtendedReal::Infinity => s.serialize_str("inf"),
        }
    }
}
