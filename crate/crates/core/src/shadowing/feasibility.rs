use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::shadowing::pseudo_orbit::PseudoOrbit;
use crate::shift::{Sides, Tail, TruncatedPoint};
use crate::slopes::SlopeSet;

pub const DEFAULT_BRANCH_CAP: usize = 1 << 20;

/// Interval of admissible first coordinates, each end open or closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeasibleInterval {
    pub lo: Rational,
    pub lo_open: bool,
    pub hi: Rational,
    pub hi_open: bool,
}

impl FeasibleInterval {
    fn closed(lo: Rational, hi: Rational) -> Self {
        FeasibleInterval {
            lo,
            lo_open: false,
            hi,
            hi_open: false,
        }
    }

    fn open(lo: Rational, hi: Rational) -> Self {
        FeasibleInterval {
            lo,
            lo_open: true,
            hi,
            hi_open: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_open {
            x > &self.lo
        } else {
            x >= &self.lo
        };
        let below = if self.hi_open {
            x < &self.hi
        } else {
            x <= &self.hi
        };
        above && below
    }

    fn intersect(&self, other: &FeasibleInterval) -> FeasibleInterval {
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_open),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_open),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_open),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_open),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        FeasibleInterval {
            lo,
            lo_open,
            hi,
            hi_open,
        }
    }

    /// Divide both ends by a positive factor.
    fn scaled_down(&self, p: &Rational) -> FeasibleInterval {
        FeasibleInterval {
            lo: &self.lo / p,
            hi: &self.hi / p,
            ..self.clone()
        }
    }

    fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from(2i64)
    }
}

/// A word prefix whose constraints became inconsistent at coordinate
/// `index`, the last one coming from pseudo-orbit point `k`.
/// `k` is `None` when the range constraint `[0, 1]` closed the interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeadEnd {
    pub word: Vec<usize>,
    pub index: usize,
    pub k: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoShadowCertificate {
    pub eps: Rational,
    pub horizon: usize,
    pub depth: usize,
    pub window: usize,
    pub branches: usize,
    pub constraint_log: Vec<DeadEnd>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowWitness {
    pub word: Vec<usize>,
    pub interval: FeasibleInterval,
    pub point: TruncatedPoint,
    pub branches: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShadowOutcome {
    Shadowed(ShadowWitness),
    NotShadowed(NoShadowCertificate),
}

impl ShadowOutcome {
    pub fn is_shadowed(&self) -> bool {
        matches!(self, ShadowOutcome::Shadowed(_))
    }
}

/// Largest `J` with `ε·2^J <= 1`. Differences at offsets past `J` are below
/// `ε·2^j` automatically, so only offsets `1..=J` constrain anything.
pub fn constraint_window(eps: &Rational) -> usize {
    let one = Rational::one();
    let mut j = 0;
    let mut v = eps.clone();
    while &v * Rational::from(2i64) <= one {
        v = &v * Rational::from(2i64);
        j += 1;
    }
    j
}

/// Open targets for `y_i`, one per pseudo-orbit point `k` with `k + j = i`.
type Targets = Vec<Vec<(usize, FeasibleInterval)>>;

fn coordinate_targets(
    omega: &SlopeSet,
    po: &PseudoOrbit,
    eps: &Rational,
    horizon: usize,
    depth: usize,
) -> Result<Targets> {
    let window = constraint_window(eps);
    let mut targets: Targets = vec![Vec::new(); depth + 1];
    for (k, x) in po.points.iter().enumerate().take(horizon + 1) {
        if x.sides != Sides::One {
            return Err(Error::SidednessMismatch);
        }
        for j in 1..=window {
            let v = x.value_at(omega, x.start + j as i64 - 1).ok_or_else(|| {
                Error::InvalidPoint(format!("point {k} has no coordinate at offset {j}"))
            })?;
            let r = eps * Rational::pow2(j as i64);
            targets[k + j].push((k, FeasibleInterval::open(&v - &r, &v + &r)));
        }
    }
    Ok(targets)
}

struct Search<'a> {
    omega: &'a SlopeSet,
    targets: Targets,
    depth: usize,
    cap: usize,
    branches: usize,
    log: Vec<DeadEnd>,
    seen: HashSet<(usize, Rational, FeasibleInterval)>,
}

impl Search<'_> {
    /// Narrow `iv` by the constraints on coordinate `i = P·y_1`.
    fn narrow(
        &self,
        i: usize,
        p: &Rational,
        iv: &FeasibleInterval,
    ) -> std::result::Result<FeasibleInterval, Option<usize>> {
        let mut cur = iv
            .intersect(&FeasibleInterval::closed(Rational::zero(), Rational::one()).scaled_down(p));
        if cur.is_empty() {
            return Err(None);
        }
        for (k, t) in &self.targets[i] {
            cur = cur.intersect(&t.scaled_down(p));
            if cur.is_empty() {
                return Err(Some(*k));
            }
        }
        Ok(cur)
    }

    /// Depth-first over words in index order; the first leaf reached is the
    /// lexicographically least feasible word.
    fn explore(
        &mut self,
        word: &mut Vec<usize>,
        p: Rational,
        iv: FeasibleInterval,
    ) -> Result<Option<(Vec<usize>, FeasibleInterval)>> {
        self.branches += 1;
        if self.branches > self.cap {
            return Err(Error::BranchCap { cap: self.cap });
        }
        let i = word.len() + 1;
        let cur = match self.narrow(i, &p, &iv) {
            Ok(c) => c,
            Err(k) => {
                self.log.push(DeadEnd {
                    word: word.clone(),
                    index: i,
                    k,
                });
                return Ok(None);
            }
        };
        if i == self.depth {
            return Ok(Some((word.clone(), cur)));
        }
        // Same product and interval at the same coordinate: identical subtree.
        if !self.seen.insert((i, p.clone(), cur.clone())) {
            return Ok(None);
        }
        for s in 0..self.omega.len() {
            word.push(s);
            let found = self.explore(word, &p * self.omega.slope(s), cur.clone())?;
            word.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Decide whether some one-sided `y` has `D(σ^k y, x_k) < ε` for every
/// `k <= horizon`, searching all slope words for `y_1, …, y_depth`.
///
/// Coordinate `i` of `y` is `P_i·y_1` for the word's prefix product `P_i`,
/// so each constraint is an interval on `y_1`. A shadowing orbit of any
/// length would satisfy these constraints, so an unsatisfiable answer rules
/// out shadowing entirely.
pub fn shadow_feasible(
    omega: &SlopeSet,
    po: &PseudoOrbit,
    eps: &Rational,
    horizon: usize,
    depth: usize,
    branch_cap: usize,
) -> Result<ShadowOutcome> {
    if !eps.is_positive() {
        return Err(Error::Parameter("ε must be positive".into()));
    }
    if horizon >= po.points.len() {
        return Err(Error::Parameter(format!(
            "horizon {horizon} exceeds the last pseudo-orbit index {}",
            po.points.len() as i64 - 1
        )));
    }
    let window = constraint_window(eps);
    if depth < horizon + window.max(1) {
        return Err(Error::Parameter(format!(
            "depth {depth} is below horizon {horizon} plus window {window}"
        )));
    }
    let targets = coordinate_targets(omega, po, eps, horizon, depth)?;
    let mut search = Search {
        omega,
        targets,
        depth,
        cap: branch_cap,
        branches: 0,
        log: Vec::new(),
        seen: HashSet::new(),
    };
    let start = FeasibleInterval::closed(Rational::zero(), Rational::one());
    let found = search.explore(&mut Vec::new(), Rational::one(), start)?;
    let branches = search.branches;
    match found {
        None => Ok(ShadowOutcome::NotShadowed(NoShadowCertificate {
            eps: eps.clone(),
            horizon,
            depth,
            window,
            branches,
            constraint_log: search.log,
        })),
        Some((word, interval)) => {
            let y1 = if interval.lo == interval.hi {
                interval.lo.clone()
            } else {
                interval.midpoint()
            };
            let point =
                TruncatedPoint::from_word(omega, Sides::One, 1, y1, word.clone(), Tail::Unknown)?;
            if !witness_holds(omega, po, eps, horizon, &point)? {
                return Err(Error::InvalidPoint("witness fails re-verification".into()));
            }
            Ok(ShadowOutcome::Shadowed(ShadowWitness {
                word,
                interval,
                point,
                branches,
            }))
        }
    }
}

/// Check `|y_{k+j} − x_k(j)| < ε·2^j` coordinate by coordinate for every
/// `k <= horizon` and every offset the window of `y` reaches.
pub fn witness_holds(
    omega: &SlopeSet,
    po: &PseudoOrbit,
    eps: &Rational,
    horizon: usize,
    y: &TruncatedPoint,
) -> Result<bool> {
    let window = constraint_window(eps);
    for (k, x) in po.points.iter().enumerate().take(horizon + 1) {
        for j in 1..=window {
            let xv = x
                .value_at(omega, x.start + j as i64 - 1)
                .ok_or(Error::IndexOutOfRange { index: j as i64 })?;
            let yv = y
                .value_at(omega, (k + j) as i64)
                .ok_or(Error::IndexOutOfRange {
                    index: (k + j) as i64,
                })?;
            if (xv - yv).abs() >= eps * Rational::pow2(j as i64) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::shadowing::pseudo_orbit::staircase_pseudo_orbit;
    use crate::shift::shift;

    fn three() -> SlopeSet {
        SlopeSet::from_fracs(&[(1, 2), (3, 1), (1, 1)])
    }

    #[test]
    fn window_sizes() {
        assert_eq!(constraint_window(&q(1, 16)), 4);
        assert_eq!(constraint_window(&q(1, 100)), 6);
        assert_eq!(constraint_window(&q(1, 1)), 0);
        assert_eq!(constraint_window(&q(1, 2)), 1);
    }

    #[test]
    fn staircase_is_not_shadowed() {
        let s = three();
        let po = staircase_pseudo_orbit(4).unwrap();
        let out = shadow_feasible(&s, &po, &q(1, 16), 4, 8, DEFAULT_BRANCH_CAP).unwrap();
        match out {
            ShadowOutcome::NotShadowed(c) => {
                assert!(c.branches > 0 && !c.constraint_log.is_empty())
            }
            other => panic!("expected no shadow, got {other:?}"),
        }
    }

    #[test]
    fn loose_tolerance_is_shadowed() {
        let s = three();
        let po = staircase_pseudo_orbit(4).unwrap();
        assert!(shadow_feasible(&s, &po, &q(1, 1), 4, 8, DEFAULT_BRANCH_CAP)
            .unwrap()
            .is_shadowed());
    }

    #[test]
    fn true_orbit_shadows_itself() {
        let s = three();
        let x = TruncatedPoint::one_sided(
            &s,
            vec![q(1, 3), q(1, 1), q(1, 2), q(1, 4), q(3, 4)],
            Tail::Const(q(3, 4)),
        )
        .unwrap();
        let mut points = vec![x];
        for _ in 0..3 {
            let next = shift(&s, points.last().unwrap()).unwrap();
            points.push(next);
        }
        let po = PseudoOrbit {
            points,
            delta: q(1, 100),
        };
        let out = shadow_feasible(&s, &po, &q(1, 100), 3, 9, DEFAULT_BRANCH_CAP).unwrap();
        let ShadowOutcome::Shadowed(w) = out else {
            panic!("expected shadow")
        };
        assert!(w.interval.contains(&q(1, 3)));
        assert!(witness_holds(&s, &po, &q(1, 100), 3, &w.point).unwrap());
    }

    #[test]
    fn parameters_checked() {
        let s = three();
        let po = staircase_pseudo_orbit(4).unwrap();
        assert!(matches!(
            shadow_feasible(&s, &po, &q(1, 16), 4, 7, 100),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            shadow_feasible(&s, &po, &q(1, 16), 5, 9, 100),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            shadow_feasible(&s, &po, &q(1, 16), 4, 8, 3),
            Err(Error::BranchCap { cap: 3 })
        ));
    }
}
