use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::shift::metric::{metric_d, MetricBound};
use crate::shift::point::{Sides, Tail, TruncatedPoint};
use crate::slopes::SlopeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicApprox {
    pub point: TruncatedPoint,
    /// Smallest verified `P` with `σ^P(z) = z`.
    pub period: usize,
    /// Half-width `n` of the copied window `[-n, n]`.
    pub half_width: usize,
    pub bound: MetricBound,
}

/// Smallest `n >= 1` with `2^{-(n+1)} < ε`.
pub fn half_width_for(eps: &Rational) -> usize {
    crate::shift::endpoint::depth_for(eps)
}

/// Smallest `P >= 1` with `z_{i+P} = z_i` for all `i`, checked coordinate by
/// coordinate over one declared period. `None` unless the tail is periodic.
pub fn verified_period(omega: &SlopeSet, z: &TruncatedPoint) -> Option<usize> {
    let Tail::Periodic(p) = z.tail else {
        return None;
    };
    (1..=p).find(|&cand| {
        (0..p as i64).all(|k| {
            let i = z.start + k;
            z.value_at(omega, i + cand as i64) == z.value_at(omega, i)
        })
    })
}

/// A periodic two-sided point within `ε` of `p`.
///
/// With `n` minimal such that `2^{-(n+1)} < ε`, the window
/// `x_{-n}, …, x_n` is followed by its reversal `x_{n-1}, …, x_{-n+1}` and
/// the resulting block of length `4n` is repeated. Reversed pairs stay in the
/// relation because the slope set is closed under reciprocals.
pub fn periodic_approximant(
    omega: &SlopeSet,
    p: &TruncatedPoint,
    eps: &Rational,
) -> Result<PeriodicApprox> {
    if !omega.is_reciprocal_closed() {
        return Err(Error::NotReciprocalClosed);
    }
    if !eps.is_positive() {
        return Err(Error::Parameter("ε must be positive".into()));
    }
    if p.sides != Sides::Two {
        return Err(Error::Parameter(
            "periodic approximation needs a two-sided point".into(),
        ));
    }
    p.ensure_valid(omega)?;
    let n = half_width_for(eps) as i64;
    let window: Vec<Rational> = (-n..=n)
        .map(|i| p.value_at(omega, i))
        .collect::<Option<_>>()
        .ok_or_else(|| {
            Error::Parameter(format!(
                "point window must cover indices -{n}..{n} or have a known tail"
            ))
        })?;
    let mut block = window.clone();
    block.extend(window[1..window.len() - 1].iter().rev().cloned());
    let len = block.len();
    let period = (1..=len)
        .filter(|d| len.is_multiple_of(*d))
        .find(|&d| (0..len).all(|k| block[k] == block[(k + d) % len]))
        .expect("full length is always a period");
    let point = TruncatedPoint::from_coords(omega, Sides::Two, -n, block, Tail::Periodic(period))?;
    let verified = verified_period(omega, &point).expect("periodic tail");
    let bound = metric_d(omega, p, &point)?;
    if bound.upper >= *eps {
        return Err(Error::Parameter(format!(
            "periodic certificate failed: upper bound {} is not below {}",
            bound.upper, eps
        )));
    }
    Ok(PeriodicApprox {
        point,
        period: verified,
        half_width: n as usize,
        bound,
    })
}
