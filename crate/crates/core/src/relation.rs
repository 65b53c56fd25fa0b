//! Images of points and interval unions under the union of lines `y = ω x`,
//! slope-product sets, and Hausdorff distance to the unit interval.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::rational::Rational;
use crate::slopes::SlopeSet;

/// Default bound on the number of components an iterated image may have.
pub const DEFAULT_INTERVAL_CAP: usize = 4096;

/// Steps before the end at which `verify_reach` starts discarding parts too low to recover.
const CLIP_LOOKAHEAD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    /// Image under the inverse relation (reciprocal slopes).
    Inverse,
}

/// `{ω x : ω ∈ Ω, ω x <= 1}` in ascending order.
pub fn point_image(omega: &SlopeSet, x: &Rational) -> Result<Vec<Rational>> {
    if !x.in_unit() {
        return Err(Error::OutOfUnit(x.clone()));
    }
    let set: BTreeSet<Rational> = omega
        .slopes()
        .iter()
        .map(|w| w * x)
        .filter(|y| y <= &Rational::one())
        .collect();
    Ok(set.into_iter().collect())
}

pub fn interval_image(omega: &SlopeSet, a: &IntervalUnion, direction: Direction) -> IntervalUnion {
    let scale = |w: &Rational| match direction {
        Direction::Forward => w.clone(),
        Direction::Inverse => w.recip(),
    };
    let mut parts = Vec::with_capacity(a.len() * omega.len());
    for w in omega.slopes() {
        let w = scale(w);
        parts.extend(a.intervals().iter().filter_map(|i| i.scale_clipped(&w)));
    }
    IntervalUnion::from_intervals(parts)
}

/// `n`-fold forward image, with the default interval cap.
pub fn iterate_image(omega: &SlopeSet, a: &IntervalUnion, n: usize) -> Result<IntervalUnion> {
    iterate_image_capped(omega, a, n, DEFAULT_INTERVAL_CAP)
}

pub fn iterate_image_capped(
    omega: &SlopeSet,
    a: &IntervalUnion,
    n: usize,
    cap: usize,
) -> Result<IntervalUnion> {
    let mut cur = a.clone();
    for step in 1..=n {
        cur = interval_image(omega, &cur, Direction::Forward);
        if cur.len() > cap {
            return Err(Error::IntervalCap {
                cap,
                count: cur.len(),
                step,
            });
        }
    }
    Ok(cur)
}

/// The images `F^0(A), …, F^n(A)`.
pub fn image_orbit(
    omega: &SlopeSet,
    a: &IntervalUnion,
    n: usize,
    cap: usize,
) -> Result<Vec<IntervalUnion>> {
    let mut out = vec![a.clone()];
    for step in 1..=n {
        let next = interval_image(omega, &out[step - 1], Direction::Forward);
        if next.len() > cap {
            return Err(Error::IntervalCap {
                cap,
                count: next.len(),
                step,
            });
        }
        out.push(next);
    }
    Ok(out)
}

/// True iff `[γ, 1] ⊆ F^n([a, b])`.
///
/// Parts that cannot climb back to `γ` in the remaining steps are discarded
/// along the way; this never changes the answer. With slope 1 present the
/// images only grow, so the check stops as soon as `[γ, 1]` is covered.
pub fn verify_reach(
    omega: &SlopeSet,
    interval: &Interval,
    gamma: &Rational,
    n: usize,
) -> Result<bool> {
    let target = Interval::new(
        gamma.clone().max(Rational::zero()).min(Rational::one()),
        Rational::one(),
    )?;
    let w_max = omega.max_slope().clone();
    let nested = omega.has_identity();
    let mut cur = IntervalUnion::from_intervals(vec![interval.clone()]);
    for step in 1..=n {
        if nested && cur.contains_interval(&target) {
            return Ok(true);
        }
        cur = interval_image(omega, &cur, Direction::Forward);
        let remaining = n - step;
        if w_max > Rational::one() {
            // Far from the end the floor is negligible and costly to compare against.
            if remaining <= CLIP_LOOKAHEAD {
                cur = cur.clip_below(&(gamma / w_max.pow(remaining as i32)));
            }
        } else {
            cur = cur.clip_below(gamma);
        }
        if cur.len() > DEFAULT_INTERVAL_CAP {
            return Err(Error::IntervalCap {
                cap: DEFAULT_INTERVAL_CAP,
                count: cur.len(),
                step,
            });
        }
        if cur.is_empty() {
            return Ok(false);
        }
    }
    Ok(cur.contains_interval(&target))
}

/// The sets `𝒜(1), …, 𝒜(m)` of `k`-fold slope products.
pub fn slope_product_levels(omega: &SlopeSet, m: usize) -> Vec<BTreeSet<Rational>> {
    let mut levels: Vec<BTreeSet<Rational>> = Vec::with_capacity(m);
    let mut cur: BTreeSet<Rational> = std::iter::once(Rational::one()).collect();
    for _ in 0..m {
        cur = cur
            .iter()
            .flat_map(|a| omega.slopes().iter().map(move |w| a * w))
            .collect();
        levels.push(cur.clone());
    }
    levels
}

/// `𝒜(m)`: all products of `m` slopes, repetition allowed, as a set.
pub fn slope_products(omega: &SlopeSet, m: usize) -> BTreeSet<Rational> {
    assert!(m >= 1, "product length must be positive");
    slope_product_levels(omega, m).pop().unwrap_or_default()
}

/// Largest element of `𝒜(m)` strictly below 1.
pub fn alpha_max(omega: &SlopeSet, m: usize) -> Option<Rational> {
    slope_products(omega, m)
        .range(..Rational::one())
        .next_back()
        .cloned()
}

/// True iff `1 ∈ 𝒜(n)`, i.e. the diagonal lies in the `n`-th power of the relation.
pub fn diagonal_in_power(omega: &SlopeSet, n: usize) -> bool {
    slope_products(omega, n).contains(&Rational::one())
}

/// Smallest `K` such that the diagonal lies in every power `n >= K`,
/// certified from the powers up to `horizon`; `None` if not certifiable.
///
/// Powers containing the diagonal are closed under addition, so the hit set
/// below `horizon` generates a numerical semigroup. When its gcd is 1 the
/// answer is one more than its Frobenius number, provided that fits in the horizon.
pub fn eventual_diagonal_threshold(omega: &SlopeSet, horizon: usize) -> Option<usize> {
    let hits: Vec<usize> = slope_product_levels(omega, horizon)
        .iter()
        .enumerate()
        .filter(|(_, level)| level.contains(&Rational::one()))
        .map(|(i, _)| i + 1)
        .collect();
    let g = hits.iter().fold(0usize, |g, &h| g.gcd(&h));
    if g != 1 {
        return None;
    }
    let frob = frobenius(&minimal_generators(&hits));
    let k = (frob + 1).max(1) as usize;
    (k <= horizon).then_some(k)
}

/// Elements of `hits` not expressible as sums of smaller elements.
pub fn minimal_generators(hits: &[usize]) -> Vec<usize> {
    let mut sorted = hits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let max = sorted.last().copied().unwrap_or(0);
    let mut representable = vec![false; max + 1];
    representable[0] = true;
    let mut gens = Vec::new();
    for &h in &sorted {
        if !representable[h] {
            gens.push(h);
            for n in h..=max {
                if representable[n - h] {
                    representable[n] = true;
                }
            }
        }
    }
    gens
}

/// Frobenius number of the semigroup generated by `gens` (gcd must be 1).
/// Returns -1 when every non-negative integer is representable.
pub fn frobenius(gens: &[usize]) -> i64 {
    let min = *gens.iter().min().expect("non-empty generator set");
    let mut representable = vec![true];
    let mut run = 1usize;
    let mut last_gap: i64 = -1;
    let mut n = 0usize;
    while run < min {
        n += 1;
        let r = gens.iter().any(|&g| g <= n && representable[n - g]);
        representable.push(r);
        if r {
            run += 1;
        } else {
            run = 0;
            last_gap = n as i64;
        }
    }
    last_gap
}

/// Exact Hausdorff distance between a non-empty `A ⊆ [0,1]` and `[0,1]`.
///
/// This is the largest distance from a point of `[0,1]` to `A`: the full
/// length of a boundary gap or half of an interior gap.
pub fn hausdorff_to_unit(a: &IntervalUnion) -> Result<Rational> {
    let parts = a.intervals();
    let (first, last) = match (parts.first(), parts.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::EmptySet),
    };
    let half = Rational::frac(1, 2);
    let mut best = first.lo.clone().max(Rational::one() - &last.hi);
    for pair in parts.windows(2) {
        let gap = (&pair[1].lo - &pair[0].hi) * &half;
        best = best.max(gap);
    }
    Ok(best)
}
