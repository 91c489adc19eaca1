use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// An exact distance of the form `2^-j`, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic(Option<u32>);

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic(None);

    /// `2^-j`.
    pub fn pow2_neg(j: u32) -> Self {
        Dyadic(Some(j))
    }

    pub fn is_zero(self) -> bool {
        self.0.is_none()
    }

    /// The exponent `j` of `2^-j`; `None` for zero.
    pub fn exponent(self) -> Option<u32> {
        self.0
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            // larger exponent, smaller value
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "0"),
            Some(j) => write!(f, "2^-{j}"),
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
