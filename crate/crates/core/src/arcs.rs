//! Finite unions of arcs on the unit circle.
//!
//! Arcs are stored as half-open angular intervals `[start, end)` with
//! `0 <= start < 2π` and `start < end <= start + 2π`. Only the last arc may
//! run past `2π`. Arcs are sorted, pairwise disjoint, and arcs closer than
//! [`MERGE_GAP`] are merged.

use alloc::vec::Vec;

use crate::math::{cis, wrap_angle};
use crate::{Error, Point, Result, TAU};

/// Gaps narrower than this are closed during normalization.
pub const MERGE_GAP: f64 = 1e-14;

/// One arc `[start, end)`, angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.start + self.end)
    }

    /// Whether `theta` (any real) lies in the arc, with the given endpoint
    /// convention.
    pub fn contains(&self, theta: f64, open: bool) -> bool {
        let off = wrap_angle(theta - self.start);
        if self.len() >= TAU {
            return true;
        }
        if open {
            off > 0.0 && off < self.len()
        } else {
            off < self.len()
        }
    }

    pub fn start_point(&self) -> Point {
        cis(self.start)
    }

    pub fn end_point(&self) -> Point {
        cis(self.end)
    }
}

/// A finite union of arcs of the unit circle `∂E`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitCircleSet {
    arcs: Vec<Arc>,
    measure: f64,
    open: bool,
}

impl UnitCircleSet {
    pub fn empty() -> Self {
        UnitCircleSet {
            arcs: Vec::new(),
            measure: 0.0,
            open: false,
        }
    }

    pub fn full() -> Self {
        UnitCircleSet {
            arcs: alloc::vec![Arc {
                start: 0.0,
                end: TAU
            }],
            measure: TAU,
            open: false,
        }
    }

    /// Normalizes a list of `(start, end)` angle pairs, each read as the arc
    /// running counterclockwise from `start` to `end`. Pairs with
    /// `end - start >= 2π` cover the circle; `end < start` wraps.
    pub fn from_intervals(intervals: &[(f64, f64)]) -> Result<Self> {
        let mut raw = Vec::with_capacity(intervals.len());
        for &(s, e) in intervals {
            if !s.is_finite() || !e.is_finite() {
                return Err(Error::input("arc endpoints must be finite"));
            }
            if e - s >= TAU {
                return Ok(Self::full());
            }
            let len = wrap_angle(e - s);
            if len <= 0.0 {
                continue;
            }
            let start = wrap_angle(s);
            raw.push(Arc {
                start,
                end: start + len,
            });
        }
        Ok(Self::normalize(raw))
    }

    /// A single arc from `start` to `end` (counterclockwise).
    pub fn arc(start: f64, end: f64) -> Result<Self> {
        Self::from_intervals(&[(start, end)])
    }

    fn normalize(mut raw: Vec<Arc>) -> Self {
        if raw.is_empty() {
            return Self::empty();
        }
        raw.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut merged: Vec<Arc> = Vec::with_capacity(raw.len());
        for arc in raw {
            match merged.last_mut() {
                Some(last) if arc.start <= last.end + MERGE_GAP => {
                    if arc.end > last.end {
                        last.end = arc.end;
                    }
                }
                _ => merged.push(arc),
            }
        }
        // The last arc may wrap past 2π onto the first ones.
        while merged.len() > 1 {
            let first = merged[0];
            let last = *merged.last().unwrap();
            if last.end - TAU >= first.start - MERGE_GAP {
                let new_end = (first.end + TAU).max(last.end);
                merged.remove(0);
                merged.last_mut().unwrap().end = new_end;
            } else {
                break;
            }
        }
        if merged.len() == 1 && merged[0].len() >= TAU - MERGE_GAP {
            return Self::full();
        }
        let measure = merged.iter().map(Arc::len).sum();
        UnitCircleSet {
            arcs: merged,
            measure,
            open: false,
        }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Arc pairs as `(start, end)`, suitable for [`Self::from_intervals`].
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        self.arcs.iter().map(|a| (a.start, a.end)).collect()
    }

    /// Lebesgue measure in radians.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].len() >= TAU
    }

    /// True when arc endpoints are excluded (the set of density points).
    pub fn is_open(&self) -> bool {
        self.open
    }

    pub fn complement(&self) -> Self {
        if self.is_empty() {
            return Self::full();
        }
        if self.is_full() {
            return Self::empty();
        }
        let n = self.arcs.len();
        let gaps = (0..n)
            .map(|i| {
                let cur = self.arcs[i];
                let next = self.arcs[(i + 1) % n];
                let next_start = if i + 1 == n {
                    next.start + TAU
                } else {
                    next.start
                };
                (cur.end, next_start)
            })
            .filter(|(s, e)| e > s)
            .map(|(s, e)| {
                let start = wrap_angle(s);
                Arc {
                    start,
                    end: start + (e - s),
                }
            })
            .collect();
        let mut out = Self::normalize(gaps);
        out.open = self.open;
        out
    }

    /// Membership of `theta mod 2π`.
    pub fn contains(&self, theta: f64) -> bool {
        if self.is_full() {
            return true;
        }
        self.arcs.iter().any(|a| a.contains(theta, self.open))
    }

    /// Membership of a point of the circle, by its argument.
    pub fn contains_point(&self, p: Point) -> bool {
        self.contains(p.arg())
    }

    /// The density points of the set: for a finite union of arcs these are
    /// the open arcs. Measure is unchanged.
    pub fn density_points(&self) -> Self {
        UnitCircleSet {
            arcs: self.arcs.clone(),
            measure: self.measure,
            open: true,
        }
    }

    /// The set rotated counterclockwise by `phi`.
    pub fn rotate(&self, phi: f64) -> Self {
        if self.is_full() || self.is_empty() {
            return self.clone();
        }
        let raw = self
            .arcs
            .iter()
            .map(|a| {
                let start = wrap_angle(a.start + phi);
                Arc {
                    start,
                    end: start + a.len(),
                }
            })
            .collect();
        let mut out = Self::normalize(raw);
        out.open = self.open;
        out
    }

    /// Whether `self ⊂ other` up to endpoints.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.arcs.iter().all(|a| {
            other.arcs.iter().any(|b| {
                if b.len() >= TAU {
                    return true;
                }
                let off = wrap_angle(a.start - b.start);
                let off = if off > b.len() && TAU - off < MERGE_GAP {
                    0.0
                } else {
                    off
                };
                off + a.len() <= b.len() + 1e-12
            })
        })
    }

    /// All arc endpoints, as angles in `[0, 2π)`. Empty for the full circle.
    pub fn endpoints(&self) -> Vec<f64> {
        if self.is_full() {
            return Vec::new();
        }
        self.arcs
            .iter()
            .flat_map(|a| [a.start, wrap_angle(a.end)])
            .collect()
    }

    /// Distance (in angle) from `theta` to the nearest arc endpoint.
    pub fn distance_to_endpoints(&self, theta: f64) -> f64 {
        self.endpoints()
            .into_iter()
            .map(|e| crate::math::abs(crate::math::wrap_signed(theta - e)))
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    #[test]
    fn single_interval() {
        let s = UnitCircleSet::from_intervals(&[(0.0, PI)]).unwrap();
        assert_eq!(s.arcs().len(), 1);
        assert_eq!(s.measure(), PI);
    }

    #[test]
    fn overlapping_intervals_merge() {
        let s = UnitCircleSet::from_intervals(&[(0.0, PI), (PI / 2.0, 3.0 * PI / 2.0)]).unwrap();
        assert_eq!(s.arcs(), &[Arc { start: 0.0, end: 1.5 * PI }]);
        assert!((s.measure() - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn empty_list() {
        let s = UnitCircleSet::from_intervals(&[]).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.measure(), 0.0);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(UnitCircleSet::from_intervals(&[(0.0, f64::NAN)]).is_err());
        assert!(UnitCircleSet::from_intervals(&[(f64::INFINITY, 1.0)]).is_err());
    }

    #[test]
    fn wrapping_interval_merges_with_first_arc() {
        let s = UnitCircleSet::from_intervals(&[(0.1, 0.5), (5.0, 0.2)]).unwrap();
        assert_eq!(s.arcs().len(), 1);
        let a = s.arcs()[0];
        assert!((a.start - 5.0).abs() < 1e-15);
        assert!((a.end - (0.5 + TAU)).abs() < 1e-12);
        assert!(s.contains(0.3));
        assert!(s.contains(6.0));
        assert!(!s.contains(1.0));
    }

    #[test]
    fn complement_cases() {
        assert!(UnitCircleSet::full().complement().is_empty());
        assert!(UnitCircleSet::empty().complement().is_full());
        let half = UnitCircleSet::arc(0.0, PI).unwrap();
        let c = half.complement();
        assert_eq!(c.arcs(), &[Arc { start: PI, end: TAU }]);
        assert!((c.measure() - PI).abs() < 1e-15);
    }

    #[test]
    fn membership_is_half_open_and_wraps() {
        let s = UnitCircleSet::arc(0.0, PI).unwrap();
        assert!(s.contains(PI / 2.0));
        assert!(!s.contains(PI));
        assert!(s.contains(TAU + 0.1));
        assert!(s.contains(0.0));
    }

    #[test]
    fn density_points_are_open_arcs() {
        let s = UnitCircleSet::arc(0.0, PI).unwrap().density_points();
        assert!(!s.contains(0.0));
        assert!(s.contains(1e-9));
        assert_eq!(s.measure(), PI);
        assert!(UnitCircleSet::empty().density_points().is_empty());
        let two = UnitCircleSet::from_intervals(&[(0.0, 1.0), (2.0, 3.0)])
            .unwrap()
            .density_points();
        assert_eq!(two.arcs().len(), 2);
        assert!(!two.contains(2.0) && two.contains(2.5) && !two.contains(1.0));
    }

    #[test]
    fn tiny_gaps_are_closed() {
        let s = UnitCircleSet::from_intervals(&[(0.0, 1.0), (1.0 + 1e-15, 2.0)]).unwrap();
        assert_eq!(s.arcs().len(), 1);
    }

    fn arb_set() -> impl Strategy<Value = UnitCircleSet> {
        proptest::collection::vec((0.0..TAU, 0.0..3.0f64), 0..6).prop_map(|v| {
            let iv: Vec<(f64, f64)> = v.into_iter().map(|(s, l)| (s, s + l)).collect();
            UnitCircleSet::from_intervals(&iv).unwrap()
        })
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(s in arb_set()) {
            let again = UnitCircleSet::from_intervals(&s.intervals()).unwrap();
            prop_assert_eq!(again.arcs().len(), s.arcs().len());
            for (a, b) in again.arcs().iter().zip(s.arcs()) {
                prop_assert!((a.start - b.start).abs() < 1e-12);
                prop_assert!((a.end - b.end).abs() < 1e-12);
            }
        }

        #[test]
        fn measure_plus_complement_is_full(s in arb_set()) {
            prop_assert!((s.measure() + s.complement().measure() - TAU).abs() < 1e-12);
        }

        #[test]
        fn double_complement_is_identity(s in arb_set()) {
            let cc = s.complement().complement();
            prop_assert!((cc.measure() - s.measure()).abs() < 1e-12);
            for k in 0..97 {
                let t = TAU * (k as f64 + 0.37) / 97.0;
                if s.distance_to_endpoints(t) > 1e-9 {
                    prop_assert_eq!(cc.contains(t), s.contains(t));
                    prop_assert_eq!(s.complement().contains(t), !s.contains(t));
                }
            }
        }

        #[test]
        fn measure_is_rotation_invariant(s in arb_set(), phi in -10.0..10.0f64) {
            prop_assert!((s.rotate(phi).measure() - s.measure()).abs() < 1e-12);
        }

        #[test]
        fn arcs_sorted_and_disjoint(s in arb_set()) {
            let a = s.arcs();
            for w in a.windows(2) {
                prop_assert!(w[0].end + MERGE_GAP < w[1].start);
            }
            for arc in a {
                prop_assert!(arc.start >= 0.0 && arc.start < TAU);
                prop_assert!(arc.len() > 0.0 && arc.len() <= TAU);
            }
            if a.len() > 1 {
                prop_assert!(a[a.len() - 1].end - TAU + MERGE_GAP < a[0].start);
            }
        }
    }
}
