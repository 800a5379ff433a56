//! Half-integer quantum numbers stored as twice their value.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A half-integer `twice / 2` (spins, projections, lattice labels).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    #[inline]
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    #[inline]
    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    #[inline]
    pub const fn twice(self) -> i64 {
        self.0
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The value as an integer, if it is one.
    #[inline]
    pub const fn as_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }

    #[inline]
    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// `2j + 1`, the dimension of the spin-j representation.
    #[inline]
    pub const fn multiplicity(self) -> i64 {
        self.0 + 1
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `j(j+1)` as a float.
    #[inline]
    pub fn casimir(self) -> f64 {
        let j = self.to_f64();
        j * (j + 1.0)
    }

    /// True when both have the same twice-parity (both integer or both half-odd).
    #[inline]
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    /// Steps of one unit from `self` up to `hi` inclusive.
    pub fn range_to(self, hi: HalfInt) -> impl Iterator<Item = HalfInt> + Clone {
        (self.0..=hi.0).step_by(2).map(HalfInt)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `3`, `-1`, `3/2`, `1.5`, `-0.5`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let fail = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if t.is_empty() {
            return Err(fail("empty token"));
        }
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| fail("bad numerator"))?;
            match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(fail("denominator must be 1 or 2")),
            }
        } else if let Some((whole, frac)) = t.split_once('.') {
            let neg = whole.trim_start().starts_with('-');
            let w: i64 = if whole == "-" || whole.is_empty() {
                0
            } else {
                whole.parse().map_err(|_| fail("bad integer part"))?
            };
            let frac = frac.trim_end_matches('0');
            let half = match frac {
                "" => 0,
                "5" => 1,
                _ => return Err(fail("only .0 and .5 fractions are half-integers")),
            };
            let mag = 2 * w.abs() + half;
            Ok(HalfInt(if neg { -mag } else { mag }))
        } else {
            let n: i64 = t.parse().map_err(|_| fail("not a number"))?;
            Ok(HalfInt(2 * n))
        }
    }
}
