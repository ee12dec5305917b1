//! Finite unions of closed intervals and the Hausdorff distance between them.
//!
//! An [`IntervalSet`] is kept normalized: intervals sorted, disjoint and not
//! touching, so set equality is representation equality. Degenerate points
//! (lo == hi) are allowed.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A closed interval [lo, hi] with lo <= hi.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    lo: Scalar,
    hi: Scalar,
}

impl Interval {
    pub fn new(lo: Scalar, hi: Scalar) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    /// Builds the interval from two endpoints in either order.
    pub fn ordered(a: Scalar, b: Scalar) -> Interval {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: Scalar) -> Interval {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn length(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Normalized finite union of closed intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet {
            intervals: Vec::new(),
        }
    }

    /// Normalizes an arbitrary list of intervals: sorts by left endpoint and
    /// merges overlapping or touching neighbours. Idempotent.
    pub fn new(mut raw: Vec<Interval>) -> IntervalSet {
        raw.sort();
        let mut merged: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        IntervalSet { intervals: merged }
    }

    pub fn singleton(iv: Interval) -> IntervalSet {
        IntervalSet {
            intervals: vec![iv],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn min(&self) -> &Scalar {
        &self.intervals.first().expect("empty interval set").lo
    }

    pub fn max(&self) -> &Scalar {
        &self.intervals.last().expect("empty interval set").hi
    }

    pub fn union(a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        let mut raw = a.intervals.clone();
        raw.extend(b.intervals.iter().cloned());
        IntervalSet::new(raw)
    }

    /// Image under x -> slope*x + offset. A negative slope flips endpoints.
    pub fn affine(&self, slope: &Scalar, offset: &Scalar) -> IntervalSet {
        let raw = self
            .intervals
            .iter()
            .map(|iv| Interval::ordered(&(slope * &iv.lo) + offset, &(slope * &iv.hi) + offset))
            .collect();
        IntervalSet::new(raw)
    }

    /// Intersection with the closed interval [lo, hi].
    pub fn clip(&self, lo: &Scalar, hi: &Scalar) -> IntervalSet {
        let mut out = Vec::new();
        for iv in &self.intervals {
            if &iv.hi < lo {
                continue;
            }
            if &iv.lo > hi {
                break;
            }
            let a = if &iv.lo < lo {
                lo.clone()
            } else {
                iv.lo.clone()
            };
            let b = if &iv.hi > hi {
                hi.clone()
            } else {
                iv.hi.clone()
            };
            out.push(Interval::new(a, b));
        }
        IntervalSet { intervals: out }
    }

    pub fn contains_point(&self, x: &Scalar) -> bool {
        self.interval_index_containing(x).is_some()
    }

    fn interval_index_containing(&self, x: &Scalar) -> Option<usize> {
        // Last interval starting at or before x.
        let idx = self.intervals.partition_point(|iv| &iv.lo <= x);
        if idx == 0 {
            return None;
        }
        let iv = &self.intervals[idx - 1];
        if x <= &iv.hi {
            Some(idx - 1)
        } else {
            None
        }
    }

    /// Distance from a point to the set (0 if the point lies in it).
    pub fn distance_to_point(&self, x: &Scalar) -> Scalar {
        assert!(!self.is_empty(), "distance to empty set");
        let idx = self.intervals.partition_point(|iv| &iv.lo <= x);
        let mut best: Option<Scalar> = None;
        if idx > 0 {
            let iv = &self.intervals[idx - 1];
            if x <= &iv.hi {
                return Scalar::zero(x.mode());
            }
            best = Some(x - &iv.hi);
        }
        if idx < self.intervals.len() {
            let d = &self.intervals[idx].lo - x;
            best = Some(match best {
                Some(b) => b.min(d),
                None => d,
            });
        }
        best.expect("nonempty set yields a distance")
    }

    /// Largest point of the set that is <= t, if any.
    pub fn last_point_at_or_before(&self, t: &Scalar) -> Option<Scalar> {
        let idx = self.intervals.partition_point(|iv| &iv.lo <= t);
        if idx == 0 {
            return None;
        }
        let iv = &self.intervals[idx - 1];
        Some(if t < &iv.hi { t.clone() } else { iv.hi.clone() })
    }

    /// Smallest position u such that the part of the set strictly right of t
    /// has points arbitrarily close to u. Returns an attained gap start, or
    /// t itself when t lies in the interior of an interval.
    pub fn next_uncovered_after(&self, t: &Scalar) -> Option<Scalar> {
        // Disjoint sorted intervals have increasing hi as well.
        let idx = self.intervals.partition_point(|iv| &iv.hi <= t);
        self.intervals
            .get(idx)
            .map(|iv| if &iv.lo > t { iv.lo.clone() } else { t.clone() })
    }

    /// CSV rows "lo,hi", one interval per line, in sorted order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lo,hi\n");
        for iv in &self.intervals {
            out.push_str(&format!("{},{}\n", iv.lo, iv.hi));
        }
        out
    }
}

/// Pointwise cplus*A - cminus*B + dq for interval unions, i.e. the set
/// { cplus*a - cminus*b + dq : a in A, b in B }.
pub fn scaled_difference(
    a: &IntervalSet,
    b: &IntervalSet,
    c_plus: &Scalar,
    c_minus: &Scalar,
    dq: &Scalar,
) -> IntervalSet {
    assert!(!c_plus.is_negative() && !c_minus.is_negative());
    let mut raw = Vec::with_capacity(a.len() * b.len());
    for u in a.intervals() {
        for v in b.intervals() {
            let lo = &(&(c_plus * u.lo()) - &(c_minus * v.hi())) + dq;
            let hi = &(&(c_plus * u.hi()) - &(c_minus * v.lo())) + dq;
            raw.push(Interval::new(lo, hi));
        }
    }
    IntervalSet::new(raw)
}

/// Exact Hausdorff distance between two nonempty interval unions.
///
/// The farthest point of A from B is either an endpoint of an interval of A
/// or the midpoint of a gap of B (when that midpoint lies in A): the distance
/// function to B is piecewise linear with peaks exactly there. Scanning those
/// candidates is exact in exact mode.
pub fn hausdorff(a: &IntervalSet, b: &IntervalSet) -> Result<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("hausdorff distance requires nonempty sets"));
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

fn directed_hausdorff(a: &IntervalSet, b: &IntervalSet) -> Scalar {
    let mut best = Scalar::zero(a.min().mode());
    for iv in a.intervals() {
        for x in [iv.lo(), iv.hi()] {
            let d = b.distance_to_point(x);
            if d > best {
                best = d;
            }
        }
    }
    for w in b.intervals().windows(2) {
        let mid = Scalar::midpoint(w[0].hi(), w[1].lo());
        if a.contains_point(&mid) {
            let d = b.distance_to_point(&mid);
            if d > best {
                best = d;
            }
        }
    }
    best
}
