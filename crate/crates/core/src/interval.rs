use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive integer interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Window of `len` indices centred on 0: `[-len/2, len - len/2 - 1]`.
    pub fn centered(len: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter("window length must be positive".into()));
        }
        let len = len as i64;
        Interval::new(-(len / 2), len - len / 2 - 1)
    }

    /// `[0, len - 1]`.
    pub fn right_half(len: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter("window length must be positive".into()));
        }
        Interval::new(0, len as i64 - 1)
    }

    /// `[-len, -1]`.
    pub fn left_half(len: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter("window length must be positive".into()));
        }
        Interval::new(-(len as i64), -1)
    }

    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn translate(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo + k,
            hi: self.hi + k,
        }
    }

    /// Window of twice the length. One-sided windows grow away from 0;
    /// windows straddling 0 grow on both sides.
    pub fn doubled(&self) -> Interval {
        let len = (self.hi - self.lo) + 1;
        if self.lo >= 0 {
            Interval {
                lo: self.lo,
                hi: self.hi + len,
            }
        } else if self.hi < 0 {
            Interval {
                lo: self.lo - len,
                hi: self.hi,
            }
        } else {
            let left = len / 2;
            Interval {
                lo: self.lo - left,
                hi: self.hi + (len - left),
            }
        }
    }

    /// True when the interval lies entirely in one half-line.
    pub fn is_one_sided(&self) -> bool {
        self.lo >= 0 || self.hi < 0
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}
