use std::fmt;

use serde::{Deserialize, Serialize};

/// Closed interval of possible dimensions; `hi = None` is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimInterval {
    pub lo: u64,
    pub hi: Option<u64>,
}

impl Default for DimInterval {
    fn default() -> Self {
        Self::UNKNOWN
    }
}

impl DimInterval {
    pub const UNKNOWN: Self = Self { lo: 0, hi: None };
    pub const ZERO: Self = Self::exact(0);

    pub const fn exact(v: u64) -> Self {
        Self { lo: v, hi: Some(v) }
    }

    pub fn new(lo: u64, hi: Option<u64>) -> Self {
        Self { lo, hi }
    }

    pub fn at_most(v: u64) -> Self {
        Self { lo: 0, hi: Some(v) }
    }

    pub fn pinned(&self) -> Option<u64> {
        match self.hi {
            Some(h) if h == self.lo => Some(h),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.hi == Some(0)
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.lo && self.hi.is_none_or(|h| v <= h)
    }

    pub fn is_empty(&self) -> bool {
        self.hi.is_some_and(|h| h < self.lo)
    }

    /// Intersection; may be empty.
    pub fn meet(&self, other: &Self) -> Self {
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Self { lo: self.lo.max(other.lo), hi }
    }

    /// True when `other` is a strict refinement of `self`.
    pub fn narrowed_by(&self, other: &Self) -> bool {
        let m = self.meet(other);
        m != *self
    }
}

impl fmt::Display for DimInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.pinned(), self.hi) {
            (Some(v), _) => write!(f, "{v}"),
            (None, Some(h)) => write!(f, "[{}, {}]", self.lo, h),
            (None, None) => write!(f, "[{}, ∞)", self.lo),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meet_and_pin() {
        let a = DimInterval::new(2, None);
        let b = DimInterval::at_most(5);
        assert_eq!(a.meet(&b), DimInterval::new(2, Some(5)));
        assert!(DimInterval::new(3, Some(2)).is_empty());
        assert_eq!(DimInterval::exact(4).pinned(), Some(4));
        assert!(DimInterval::UNKNOWN.contains(1_000_000));
        assert!(a.narrowed_by(&b));
        assert!(!b.narrowed_by(&DimInterval::UNKNOWN));
    }
}
