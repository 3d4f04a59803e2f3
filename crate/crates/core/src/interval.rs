//! Closed integer intervals over storage durations, measured in whole days.
//!
//! The upper bound uses [`Interval::INF`] as an open-end sentinel, rendered
//! as `*` in the concrete syntax. An interval with `lo > hi` is representable
//! and denotes the empty set; the normalizer uses that to flag
//! unsatisfiability.

use core::fmt;

/// Maximum representable duration, used as the "+infinity" sentinel.
pub const INF_DAYS: u64 = u64::MAX;

/// A closed interval `[lo, hi]` of days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: u64,
    pub hi: u64,
}

impl Interval {
    /// The open upper bound sentinel.
    pub const INF: u64 = INF_DAYS;

    /// The full duration range `[0, *]`, the identity of intersection.
    pub const UNBOUNDED: Interval = Interval {
        lo: 0,
        hi: INF_DAYS,
    };

    pub const fn new(lo: u64, hi: u64) -> Self {
        Interval { lo, hi }
    }

    /// True when the interval denotes the empty set.
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains_value(&self, v: u64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Closed containment: every point of `self` lies in `other`.
    ///
    /// An empty interval is contained in everything.
    pub fn is_contained_in(&self, other: &Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    /// Pointwise intersection; an empty result has `lo > hi`.
    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi == INF_DAYS {
            write!(f, "[{}d, *]", self.lo)
        } else {
            write!(f, "[{}d, {}d]", self.lo, self.hi)
        }
    }
}

/// Intersection of two duration constraints on the same functional slot.
pub fn intersect_intervals(a: Interval, b: Interval) -> Interval {
    a.intersect(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersects_overlapping() {
        let a = Interval::new(365, 1825);
        let b = Interval::new(400, 500);
        assert_eq!(intersect_intervals(a, b), Interval::new(400, 500));
    }

    #[test]
    fn disjoint_intersection_is_empty() {
        let a = Interval::new(0, 100);
        let b = Interval::new(200, 300);
        let r = intersect_intervals(a, b);
        assert!(r.is_empty());
        assert_eq!(r, Interval::new(200, 100));
    }

    #[test]
    fn unbounded_is_identity() {
        let a = Interval::new(7, 30);
        assert_eq!(intersect_intervals(a, Interval::UNBOUNDED), a);
        assert_eq!(intersect_intervals(Interval::UNBOUNDED, a), a);
    }

    #[test]
    fn containment_endpoints() {
        assert!(Interval::new(400, 500).is_contained_in(&Interval::new(365, 1825)));
        assert!(!Interval::new(300, 500).is_contained_in(&Interval::new(365, 1825)));
        assert!(Interval::new(0, 10).is_contained_in(&Interval::UNBOUNDED));
    }

    #[test]
    fn empty_contained_in_anything() {
        assert!(Interval::new(5, 1).is_contained_in(&Interval::new(100, 200)));
    }

    #[test]
    fn display_open_bound() {
        assert_eq!(
            alloc::format!("{}", Interval::new(365, INF_DAYS)),
            "[365d, *]"
        );
        assert_eq!(alloc::format!("{}", Interval::new(0, 30)), "[0d, 30d]");
    }
}
