use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::shift::point::{Sides, Tail, TruncatedPoint};
use crate::slopes::SlopeSet;

/// Terms examined per side before falling back to a coarse tail bound.
const TERM_CAP: i64 = 1 << 14;

/// Certified enclosure `lower <= D(x, y) <= upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricBound {
    pub lower: Rational,
    pub upper: Rational,
}

impl MetricBound {
    pub fn exact(v: Rational) -> Self {
        MetricBound {
            lower: v.clone(),
            upper: v,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    fn join(self, other: MetricBound) -> MetricBound {
        MetricBound {
            lower: self.lower.max(other.lower),
            upper: self.upper.max(other.upper),
        }
    }
}

/// How a point continues past a given index on one side, in a form where
/// equal descriptions mean equal continuations.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Future {
    Unknown,
    Const(Rational),
    Decay(Rational),
    Cycle(Vec<Rational>),
}

fn future_after(omega: &SlopeSet, p: &TruncatedPoint, i: i64, rightward: bool) -> Future {
    let current = p.value_at(omega, i);
    match (&p.tail, current) {
        (Tail::Unknown, _) | (_, None) => Future::Unknown,
        (Tail::Const(c), _) => Future::Const(c.clone()),
        (Tail::Zero, Some(v)) if v.is_zero() => Future::Const(v),
        (Tail::Zero, Some(v)) => Future::Decay(v),
        (Tail::Periodic(period), Some(_)) => {
            let step = if rightward { 1 } else { -1 };
            let block: Vec<Rational> = (1..=*period as i64)
                .map(|k| p.value_at(omega, i + step * k).expect("periodic"))
                .collect();
            if block.iter().all(|b| b == &block[0]) {
                Future::Const(block[0].clone())
            } else {
                Future::Cycle(block)
            }
        }
    }
}

fn cycle_len(f: &Future) -> Option<u64> {
    match f {
        Future::Const(_) => Some(1),
        Future::Cycle(b) => Some(b.len() as u64),
        _ => None,
    }
}

fn beyond(p: &TruncatedPoint, i: i64, rightward: bool) -> bool {
    if rightward {
        i >= p.end()
    } else {
        i <= p.start
    }
}

/// Sup of weighted differences over indices `first, first ± 1, …` on one side.
fn side_bound(
    omega: &SlopeSet,
    x: &TruncatedPoint,
    y: &TruncatedPoint,
    first: i64,
    rightward: bool,
) -> MetricBound {
    let mut lower = Rational::zero();
    let mut upper = Rational::zero();
    let mut cycle_steps = 0u64;
    let step = if rightward { 1 } else { -1 };
    let mut i = first;
    loop {
        let weight = Rational::pow2(-i.abs());
        if weight <= lower {
            break;
        }
        if (i - first).abs() > TERM_CAP {
            upper = upper.max(weight);
            break;
        }
        let xv = x.value_at(omega, i);
        let yv = y.value_at(omega, i);
        match (&xv, &yv) {
            (Some(a), Some(b)) => {
                let d = (a - b).abs() * &weight;
                lower = lower.max(d.clone());
                upper = upper.max(d);
            }
            (Some(v), None) | (None, Some(v)) => {
                let far = v.clone().max(Rational::one() - v);
                upper = upper.max(far * &weight);
            }
            (None, None) => upper = upper.max(weight.clone()),
        }
        if beyond(x, i, rightward) && beyond(y, i, rightward) {
            let fx = future_after(omega, x, i, rightward);
            let fy = future_after(omega, y, i, rightward);
            if fx == Future::Unknown || fy == Future::Unknown {
                upper = upper.max(Rational::pow2(-(i.abs() + 1)));
                break;
            }
            if fx == fy {
                break;
            }
            if let (Some(a), Some(b)) = (cycle_len(&fx), cycle_len(&fy)) {
                // The weighted differences repeat with shrinking weights, so
                // one full common cycle already attains the supremum.
                cycle_steps += 1;
                if cycle_steps > a.lcm(&b) {
                    break;
                }
            }
        }
        i += step;
    }
    MetricBound { lower, upper }
}

/// The metric `D(x, y) = sup_i |x_i − y_i| / 2^i` (one-sided, `i >= 1`) or
/// `sup_i |x_i − y_i| / 2^|i|` (two-sided), as a certified enclosure.
///
/// Known tails are followed until the supremum is settled; unknown tails
/// contribute only to the upper bound.
pub fn metric_d(omega: &SlopeSet, x: &TruncatedPoint, y: &TruncatedPoint) -> Result<MetricBound> {
    if x.sides != y.sides {
        return Err(Error::SidednessMismatch);
    }
    Ok(match x.sides {
        Sides::One => side_bound(omega, x, y, 1, true),
        Sides::Two => {
            let right = side_bound(omega, x, y, 0, true);
            let left = side_bound(omega, x, y, -1, false);
            MetricBound::zero().join(right).join(left)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn three() -> SlopeSet {
        SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 1)])
    }

    #[test]
    fn constants_differ_by_half_their_gap() {
        for n0 in 1..6 {
            let a = TruncatedPoint::constant(q(1, 2));
            let b = TruncatedPoint::constant(q(1, 2) + q(1, 2 * n0));
            let m = metric_d(&three(), &a, &b).unwrap();
            assert_eq!(m, MetricBound::exact(q(1, 4 * n0)));
        }
    }

    #[test]
    fn identical_points_are_at_distance_zero() {
        let s = three();
        let x = TruncatedPoint::one_sided(&s, vec![q(1, 3), q(1, 1), q(1, 2)], Tail::Zero).unwrap();
        assert_eq!(metric_d(&s, &x, &x).unwrap(), MetricBound::exact(q(0, 1)));
        let u = TruncatedPoint {
            tail: Tail::Unknown,
            ..x.clone()
        };
        let m = metric_d(&s, &u, &u).unwrap();
        assert_eq!(m.lower, q(0, 1));
        assert_eq!(m.upper, q(1, 16));
    }

    #[test]
    fn decaying_tails_resolve_exactly() {
        let s = SlopeSet::from_fracs(&[(1, 2), (3, 1)]);
        let x = TruncatedPoint::one_sided(&s, vec![q(1, 1), q(1, 2)], Tail::Zero).unwrap();
        let y = TruncatedPoint::one_sided(&s, vec![q(0, 1), q(0, 1)], Tail::Zero).unwrap();
        assert_eq!(metric_d(&s, &x, &y).unwrap(), MetricBound::exact(q(1, 2)));
    }

    #[test]
    fn late_difference_in_periodic_tails_is_found() {
        let s = SlopeSet::from_fracs(&[(1, 2), (2, 1)]);
        let x = TruncatedPoint::one_sided(&s, vec![q(1, 2), q(1, 1)], Tail::Periodic(2)).unwrap();
        let y = TruncatedPoint::one_sided(&s, vec![q(1, 2), q(1, 4)], Tail::Unknown).unwrap();
        let m = metric_d(&s, &x, &y).unwrap();
        assert_eq!(m.lower, q(3, 16));
        assert_eq!(m.upper, q(3, 16));
    }

    #[test]
    fn sidedness_must_match() {
        let s = three();
        let a = TruncatedPoint::constant(q(1, 2));
        let b = TruncatedPoint {
            sides: Sides::Two,
            ..a.clone()
        };
        assert_eq!(metric_d(&s, &a, &b), Err(Error::SidednessMismatch));
    }
}
