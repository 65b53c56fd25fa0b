//! Descending interval trajectories: nested intervals `[a_i, b_i]` with
//! `[a_{i+1}, b_{i+1}] ⊆ G([a_i, b_i])`, each inside the `ε`-ball around a
//! given trajectory and ending with diameter at least `ε²/9`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::rational::Rational;
use crate::relation::{interval_image, Direction};
use crate::shift::link_index;
use crate::slopes::SlopeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescendingTrajectory {
    pub intervals: Vec<Interval>,
}

fn iv(lo: Rational, hi: Rational) -> Interval {
    Interval { lo, hi }
}

/// Lower ends start at `a0` and follow `a_{i+1} = max(ω_i a_i, y_{i+1} − ε)`;
/// upper ends are the trajectory itself.
fn follow_trajectory(ys: &[Rational], a0: Rational, eps: &Rational) -> Vec<Interval> {
    let mut out = Vec::with_capacity(ys.len());
    let mut a = a0;
    out.push(iv(a.clone(), ys[0].clone()));
    for w in ys.windows(2) {
        let ratio = &w[1] / &w[0];
        a = (&ratio * &a).max(&w[1] - eps);
        out.push(iv(a.clone(), w[1].clone()));
    }
    out
}

/// Like [`follow_trajectory`], but once the trajectory drops below `ε/3`
/// for good, the interval stops moving.
fn follow_then_hold(ys: &[Rational], a0: Rational, eps: &Rational) -> Vec<Interval> {
    let third = eps / Rational::from(3i64);
    let k = ys.iter().rposition(|y| y >= &third).unwrap_or(0);
    let mut out = follow_trajectory(&ys[..=k], a0, eps);
    let hold = out[k].clone();
    out.extend(std::iter::repeat_n(hold, ys.len() - k - 1));
    out
}

fn all_below(ys: &[Rational], eps: &Rational) -> bool {
    ys.iter().all(|y| y < eps)
}

/// From `y_0 > 2ε/9`, starting at `a0`.
fn from_high_start(ys: &[Rational], a0: Rational, eps: &Rational) -> Vec<Interval> {
    let third = eps / Rational::from(3i64);
    if ys.last().unwrap() >= &third {
        follow_trajectory(ys, a0, eps)
    } else if all_below(ys, eps) {
        vec![iv(eps / Rational::from(9i64), eps.clone()); ys.len()]
    } else {
        follow_then_hold(ys, a0, eps)
    }
}

/// Build a descending interval trajectory for `ys` at tolerance `ε ∈ (0, 1]`.
///
/// * `y_0 < ε`: hold `[ε/9, y_{k-1}]` until the first `y_k >= ε`, then continue
///   from index `k − 1` (or use `[ε/9, ε]` throughout when the trajectory stays below `ε`).
/// * otherwise start from `[y_0 − 2ε/9, y_0]` and follow the trajectory,
///   holding still once it has dropped below `ε/3` for good. If that ends
///   shorter than `ε²/9`, start no higher than `y_0(1 − ε/3)` instead.
pub fn descending_trajectory(
    omega: &SlopeSet,
    ys: &[Rational],
    eps: &Rational,
) -> Result<DescendingTrajectory> {
    if !eps.is_positive() || eps > &Rational::one() {
        return Err(Error::Parameter("ε must lie in (0, 1]".into()));
    }
    check_trajectory(omega, ys)?;
    let ninth = eps / Rational::from(9i64);
    let intervals = if &ys[0] < eps {
        match ys.iter().position(|y| y >= eps) {
            None => vec![iv(ninth, eps.clone()); ys.len()],
            Some(k) => {
                let mut out = vec![iv(ninth.clone(), ys[k - 1].clone()); k - 1];
                out.extend(from_high_start(&ys[k - 1..], ninth, eps));
                out
            }
        }
    } else {
        let a0 = &ys[0] - eps * Rational::frac(2, 9);
        let out = from_high_start(ys, a0.clone(), eps);
        if out.last().unwrap().diam() >= eps * eps / Rational::from(9i64) {
            out
        } else {
            // a/y <= 1 − ε/3 throughout, which is enough for ε²/9 at the end.
            let lower = a0.min(&ys[0] * (Rational::one() - eps / Rational::from(3i64)));
            from_high_start(ys, lower, eps)
        }
    };
    Ok(DescendingTrajectory { intervals })
}

/// Fails unless `ys` is non-empty, in `[0, 1]`, and consecutive values are linked by a slope.
pub fn check_trajectory(omega: &SlopeSet, ys: &[Rational]) -> Result<()> {
    if ys.is_empty() {
        return Err(Error::InvalidSpecification("empty trajectory".into()));
    }
    if let Some(y) = ys.iter().find(|y| !y.in_unit()) {
        return Err(Error::OutOfUnit(y.clone()));
    }
    for (k, w) in ys.windows(2).enumerate() {
        if link_index(omega, &w[0], &w[1]).is_none() {
            return Err(Error::InvalidSpecification(format!(
                "trajectory value {} at position {} does not follow {}",
                w[1],
                k + 1,
                w[0]
            )));
        }
    }
    Ok(())
}

/// Check every conclusion exactly: the first interval lies in `[ε/9, 1]`,
/// each interval lies in the `ε`-ball of its trajectory value, the last has
/// diameter at least `ε²/9`, consecutive intervals nest under the relation,
/// and all lower ends are positive. Returns a description of the first failure.
pub fn verify_descending(
    omega: &SlopeSet,
    ys: &[Rational],
    eps: &Rational,
    traj: &DescendingTrajectory,
) -> std::result::Result<(), String> {
    let ivs = &traj.intervals;
    if ivs.len() != ys.len() {
        return Err(format!("{} intervals for {} values", ivs.len(), ys.len()));
    }
    let ninth = eps / Rational::from(9i64);
    if ivs[0].lo < ninth || ivs[0].hi > Rational::one() {
        return Err(format!("first interval {} not inside [ε/9, 1]", ivs[0]));
    }
    for (i, (iv, y)) in ivs.iter().zip(ys).enumerate() {
        if !iv.lo.is_positive() || iv.lo > iv.hi || iv.hi > Rational::one() {
            return Err(format!(
                "interval {i} = {iv} is not a positive subinterval of (0, 1]"
            ));
        }
        if iv.lo < y - eps || iv.hi > y + eps {
            return Err(format!("interval {i} = {iv} leaves the ε-ball around {y}"));
        }
    }
    let last = ivs.last().unwrap();
    if last.diam() < eps * eps / Rational::from(9i64) {
        return Err(format!("last interval {last} is shorter than ε²/9"));
    }
    for (i, w) in ivs.windows(2).enumerate() {
        let image = interval_image(
            omega,
            &IntervalUnion::from_intervals(vec![w[0].clone()]),
            Direction::Forward,
        );
        if !image.contains_interval(&w[1]) {
            return Err(format!(
                "interval {} = {} is not inside the image of {}",
                i + 1,
                w[1],
                w[0]
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn fam() -> SlopeSet {
        SlopeSet::from_fracs(&[(3, 1), (1, 1), (1, 2)])
    }

    fn run(ys: &[Rational], eps: Rational) -> DescendingTrajectory {
        let t = descending_trajectory(&fam(), ys, &eps).unwrap();
        verify_descending(&fam(), ys, &eps, &t).unwrap();
        t
    }

    #[test]
    fn low_trajectory_uses_fixed_band() {
        let ys = [q(1, 8), q(1, 16), q(3, 16)];
        let t = run(&ys, q(1, 2));
        assert!(t.intervals.iter().all(|i| i == &iv(q(1, 18), q(1, 2))));
    }

    #[test]
    fn constant_top_trajectory() {
        let ys = vec![q(1, 1); 5];
        let t = run(&ys, q(1, 2));
        assert_eq!(t.intervals[0], iv(q(8, 9), q(1, 1)));
        assert!(t.intervals.last().unwrap().diam() >= q(1, 36));
    }

    #[test]
    fn single_point() {
        let t = run(&[q(3, 4)], q(1, 2));
        assert_eq!(t.intervals, vec![iv(q(3, 4) - q(1, 9), q(3, 4))]);
    }

    #[test]
    fn climbing_from_below() {
        let ys = [q(1, 27), q(1, 9), q(1, 3), q(1, 1), q(1, 2), q(1, 4)];
        run(&ys, q(1, 4));
        run(&ys, q(1, 8));
    }

    #[test]
    fn long_fall_keeps_width() {
        let ys: Vec<Rational> = [
            (23, 24),
            (23, 48),
            (23, 48),
            (23, 96),
            (23, 32),
            (23, 32),
            (23, 64),
            (23, 128),
            (23, 256),
            (23, 512),
            (69, 512),
        ]
        .iter()
        .map(|&(n, d)| q(n, d))
        .collect();
        let t = run(&ys, q(1, 3));
        assert!(t.intervals.last().unwrap().diam() >= q(1, 81));
    }

    #[test]
    fn falling_below_a_third() {
        let ys = [q(1, 1), q(1, 2), q(1, 4), q(1, 8), q(1, 16), q(1, 32)];
        let t = run(&ys, q(1, 2));
        assert_eq!(t.intervals[4], t.intervals[5]);
    }

    #[test]
    fn invalid_trajectory_is_rejected() {
        assert!(descending_trajectory(&fam(), &[q(1, 2), q(1, 3)], &q(1, 2)).is_err());
        assert!(descending_trajectory(&fam(), &[q(1, 2)], &q(3, 2)).is_err());
    }
}
