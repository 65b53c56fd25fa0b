//! Finite unions of closed rational subintervals of `[0, 1]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A closed interval `[lo, hi]` with `0 <= lo <= hi <= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi || !lo.in_unit() || !hi.in_unit() {
            return Err(Error::InvalidInterval {
                lo: Box::new(lo),
                hi: Box::new(hi),
            });
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn point(c: Rational) -> Result<Self> {
        Self::new(c.clone(), c)
    }

    pub fn diam(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `w · self ∩ [0, 1]`, or `None` when the scaled interval misses `[0, 1]`.
    pub fn scale_clipped(&self, w: &Rational) -> Option<Interval> {
        let lo = &self.lo * w;
        if lo > Rational::one() {
            return None;
        }
        let hi = (&self.hi * w).min(Rational::one());
        Some(Interval { lo, hi })
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sorted, pairwise disjoint, non-touching closed intervals inside `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "UnionRepr")]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

#[derive(Deserialize)]
struct UnionRepr {
    intervals: Vec<Interval>,
}

impl TryFrom<UnionRepr> for IntervalUnion {
    type Error = Error;
    fn try_from(r: UnionRepr) -> Result<Self> {
        let checked = r
            .intervals
            .into_iter()
            .map(|i| Interval::new(i.lo, i.hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalUnion::from_intervals(checked))
    }
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn unit() -> Self {
        IntervalUnion {
            intervals: vec![Interval::unit()],
        }
    }

    pub fn single(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(IntervalUnion {
            intervals: vec![Interval::new(lo, hi)?],
        })
    }

    /// Normalize an arbitrary list: sort, then merge overlapping or touching parts.
    pub fn from_intervals(mut parts: Vec<Interval>) -> Self {
        parts.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match out.last_mut() {
                Some(last) if p.lo <= last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => out.push(p),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let idx = self.intervals.partition_point(|i| &i.hi < x);
        self.intervals.get(idx).is_some_and(|i| i.contains(x))
    }

    /// True when the closed interval lies inside one component.
    pub fn contains_interval(&self, iv: &Interval) -> bool {
        let idx = self.intervals.partition_point(|i| i.hi < iv.lo);
        self.intervals
            .get(idx)
            .is_some_and(|i| i.contains_interval(iv))
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.intervals.iter().all(|i| other.contains_interval(i))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = self.intervals.clone();
        parts.extend(other.intervals.iter().cloned());
        IntervalUnion::from_intervals(parts)
    }

    pub fn intersect_interval(&self, iv: &Interval) -> IntervalUnion {
        IntervalUnion {
            intervals: self
                .intervals
                .iter()
                .filter_map(|i| i.intersect(iv))
                .collect(),
        }
    }

    /// Drop every point below `floor`.
    pub fn clip_below(&self, floor: &Rational) -> IntervalUnion {
        let keep = Interval {
            lo: floor.clone().max(Rational::zero()).min(Rational::one()),
            hi: Rational::one(),
        };
        if floor > &Rational::one() {
            return IntervalUnion::empty();
        }
        self.intersect_interval(&keep)
    }

    pub fn min(&self) -> Option<&Rational> {
        self.intervals.first().map(|i| &i.lo)
    }

    pub fn max(&self) -> Option<&Rational> {
        self.intervals.last().map(|i| &i.hi)
    }

    /// Total length of the union.
    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .map(Interval::diam)
            .fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.intervals.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(q(a.0, a.1), q(b.0, b.1)).unwrap()
    }

    #[test]
    fn merges_touching_and_overlapping() {
        let u = IntervalUnion::from_intervals(vec![
            iv((1, 2), (3, 4)),
            iv((0, 1), (1, 4)),
            iv((1, 4), (1, 3)),
            iv((2, 3), (7, 8)),
        ]);
        assert_eq!(u.intervals(), &[iv((0, 1), (1, 3)), iv((1, 2), (7, 8))]);
    }

    #[test]
    fn rejects_out_of_unit() {
        assert!(Interval::new(q(1, 2), q(3, 2)).is_err());
        assert!(Interval::new(q(3, 4), q(1, 2)).is_err());
        assert!(Interval::new(q(-1, 2), q(1, 2)).is_err());
    }

    #[test]
    fn membership() {
        let u = IntervalUnion::from_intervals(vec![iv((0, 1), (1, 4)), iv((1, 2), (1, 1))]);
        assert!(u.contains(&q(1, 4)));
        assert!(!u.contains(&q(1, 3)));
        assert!(u.contains_interval(&iv((1, 2), (3, 4))));
        assert!(!u.contains_interval(&iv((1, 5), (3, 4))));
    }

    #[test]
    fn json_shape() {
        let u = IntervalUnion::single(q(5, 6), q(1, 1)).unwrap();
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(
            s,
            r#"{"intervals":[{"lo":{"num":"5","den":"6"},"hi":{"num":"1","den":"1"}}]}"#
        );
        assert_eq!(serde_json::from_str::<IntervalUnion>(&s).unwrap(), u);
        let bad = r#"{"intervals":[{"lo":{"num":"1","den":"2"},"hi":{"num":"2","den":"1"}}]}"#;
        assert!(serde_json::from_str::<IntervalUnion>(bad).is_err());
    }
}
