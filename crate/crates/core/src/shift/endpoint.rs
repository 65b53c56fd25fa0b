use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::shift::arcs::arc_range;
use crate::shift::metric::{metric_d, MetricBound};
use crate::shift::point::{link_index, Sides, Tail, TruncatedPoint};
use crate::slopes::{validate_slope_set, Profile, SlopeSet};

/// Exponent search limit for the contracting/expanding slope combination.
const SEARCH_LIMIT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointApprox {
    pub point: TruncatedPoint,
    pub bound: MetricBound,
    /// Number of leading coordinates that were matched closely.
    pub depth: usize,
    /// Index at which the endpoint reaches 1.
    pub top_index: i64,
}

/// Smallest `n >= 1` with `2^{-(n+1)} < ε`: coordinates past `n` cannot
/// contribute `ε` to the one-sided metric.
pub fn depth_for(eps: &Rational) -> usize {
    let mut n = 1usize;
    while Rational::pow2(-(n as i64 + 1)) >= *eps {
        n += 1;
    }
    n
}

/// True when `e` is arc-maximal: its first coordinate is the largest value
/// allowed by its word, and its tail cannot climb above 1.
pub fn is_endpoint(omega: &SlopeSet, e: &TruncatedPoint) -> bool {
    if e.sides != Sides::One || e.word.len() + 1 != e.coords.len() {
        return false;
    }
    let tail_ok = match &e.tail {
        Tail::Zero => true,
        Tail::Const(c) => c.is_zero() || c.is_one(),
        _ => false,
    };
    tail_ok
        && arc_range(omega, &e.word)
            .map(|m| &m[0] == e.first())
            .unwrap_or(false)
}

/// An endpoint of the fan within `ε` of `p` in the metric `D`.
///
/// The first `n` coordinates of `p` (with `2^{-(n+1)} < ε`) are scaled down
/// by a factor in `[1 − ε, 1]` and continued by contracting and then
/// expanding slopes of a never-connecting pair so that the sequence lands
/// exactly on 1. Density of `{ω_+^a ω_-^b}` makes such a factor exist.
pub fn endpoint_approx(
    omega: &SlopeSet,
    p: &TruncatedPoint,
    eps: &Rational,
) -> Result<EndpointApprox> {
    if !eps.is_positive() {
        return Err(Error::Parameter("ε must be positive".into()));
    }
    if p.sides != Sides::One || p.start != 1 {
        return Err(Error::Parameter(
            "endpoint approximation needs a one-sided point starting at 1".into(),
        ));
    }
    p.ensure_valid(omega)?;
    let report = validate_slope_set(omega, Profile::LfInducing);
    let (ci, gi) = report.witness_pair.ok_or_else(|| {
        Error::InvalidSlopeSet(
            "endpoint approximation needs a never-connecting pair straddling 1".into(),
        )
    })?;
    let (contract, expand) = (omega.slope(ci).clone(), omega.slope(gi).clone());

    let n = depth_for(eps);
    let prefix: Vec<Rational> = (1..=n as i64)
        .map(|i| p.value_at(omega, i))
        .collect::<Option<_>>()
        .ok_or_else(|| {
            Error::Parameter(format!(
                "point window must cover indices 1..{n} or have a known tail"
            ))
        })?;
    let mut word: Vec<usize> = prefix
        .windows(2)
        .enumerate()
        .map(|(k, w)| match p.word.get(k) {
            Some(&j) => j,
            None => link_index(omega, &w[0], &w[1]).expect("validated point"),
        })
        .collect();

    let (start_value, tail_word) = if let Some(top) = prefix.iter().position(Rational::is_one) {
        word.truncate(top);
        (prefix[0].clone(), Vec::new())
    } else if prefix[n - 1].is_zero() {
        // Climb from below so that every prefix coordinate stays under 2ε.
        let mut a = 0i32;
        while expand.pow(-a) >= eps * Rational::from(2i64) {
            a += 1;
        }
        let x1 = expand.pow(-(a + n as i32 - 1));
        word = vec![gi; n - 1];
        (x1, vec![gi; a as usize])
    } else {
        let slack = eps.clone().min(Rational::frac(1, 2));
        let lo = prefix[n - 1].recip();
        let hi = &lo / (Rational::one() - &slack);
        let (a, b) = find_exponents(&expand, &contract, &lo, &hi)?;
        let m = expand.pow(a as i32) * contract.pow(b as i32);
        let scale = (&prefix[n - 1] * &m).recip();
        let mut tail = vec![ci; b as usize];
        tail.extend(std::iter::repeat_n(gi, a as usize));
        (&prefix[0] * &scale, tail)
    };
    word.extend(tail_word);
    let point = TruncatedPoint::from_word(omega, Sides::One, 1, start_value, word, Tail::Zero)?;
    let top_index = point
        .coords
        .iter()
        .position(Rational::is_one)
        .map(|k| k as i64 + 1)
        .expect("construction reaches 1");
    let bound = metric_d(omega, p, &point)?;
    if bound.upper >= *eps {
        return Err(Error::Parameter(format!(
            "endpoint certificate failed: upper bound {} is not below {}",
            bound.upper, eps
        )));
    }
    Ok(EndpointApprox {
        point,
        bound,
        depth: n,
        top_index,
    })
}

/// Smallest `a + b` (then smallest `a`) with `lo <= g^a c^b <= hi`.
fn find_exponents(g: &Rational, c: &Rational, lo: &Rational, hi: &Rational) -> Result<(u32, u32)> {
    for t in 0..=SEARCH_LIMIT {
        for a in 0..=t {
            let v = g.pow(a as i32) * c.pow((t - a) as i32);
            if lo <= &v && &v <= hi {
                return Ok((a, t - a));
            }
        }
    }
    Err(Error::Parameter(format!(
        "no slope product in [{lo}, {hi}] within exponent sum {SEARCH_LIMIT}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn two_line() -> SlopeSet {
        SlopeSet::from_fracs(&[(1, 2), (3, 1)])
    }

    #[test]
    fn depth_is_minimal() {
        assert_eq!(depth_for(&q(1, 2)), 1);
        assert_eq!(depth_for(&q(1, 4)), 2);
        assert_eq!(depth_for(&q(1, 8)), 3);
        assert_eq!(depth_for(&q(3, 16)), 2);
    }

    #[test]
    fn origin_is_approximated_from_below() {
        let s = two_line();
        let o = TruncatedPoint::one_sided(&s, vec![q(0, 1)], Tail::Zero).unwrap();
        for eps in [q(1, 2), q(1, 8), q(1, 100)] {
            let e = endpoint_approx(&s, &o, &eps).unwrap();
            assert!(is_endpoint(&s, &e.point));
            for (k, c) in e.point.coords.iter().enumerate() {
                assert!(
                    c < &(&eps * Rational::pow2(k as i64 + 1)) || k as i64 + 1 > e.depth as i64
                );
            }
            assert!(e.bound.upper < eps);
        }
    }

    #[test]
    fn word_three_point() {
        let s = two_line();
        let p = TruncatedPoint::one_sided(&s, vec![q(1, 5), q(3, 5)], Tail::Unknown).unwrap();
        let e = endpoint_approx(&s, &p, &q(1, 4)).unwrap();
        assert!(is_endpoint(&s, &e.point));
        assert_eq!(e.point.word[0], 1);
        assert!(e.bound.upper < q(1, 4));
    }

    #[test]
    fn point_through_top_keeps_its_prefix() {
        let s = two_line();
        let p = TruncatedPoint::one_sided(&s, vec![q(1, 3), q(1, 1), q(1, 2)], Tail::Zero).unwrap();
        let e = endpoint_approx(&s, &p, &q(1, 8)).unwrap();
        assert_eq!(e.point.coords[..2], [q(1, 3), q(1, 1)]);
        assert_eq!(e.bound, MetricBound::exact(q(0, 1)));
    }

    #[test]
    fn short_window_with_unknown_tail_is_rejected() {
        let s = two_line();
        let p = TruncatedPoint::one_sided(&s, vec![q(1, 5)], Tail::Unknown).unwrap();
        assert!(endpoint_approx(&s, &p, &q(1, 8)).is_err());
    }

    #[test]
    fn needs_never_connecting_pair() {
        let s = SlopeSet::from_fracs(&[(1, 2), (2, 1)]);
        let p = TruncatedPoint::one_sided(&s, vec![q(1, 5), q(1, 10)], Tail::Zero).unwrap();
        assert!(matches!(
            endpoint_approx(&s, &p, &q(1, 4)),
            Err(Error::InvalidSlopeSet(_))
        ));
    }
}
