//! Horizons after which every interval of a given length covers `[γ, 1]`
//! under the three-line relation with slopes 3, 1 and 1/2.

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::Rational;

/// Search limit for the exponent of 3 in `3^m / 2^n`.
const EXPONENT_LIMIT: u32 = 1 << 24;

/// Float screening margin in log2 space; closer calls are decided exactly.
const MARGIN: f64 = 1e-6;

/// A factor `3^m / 2^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFactor {
    pub threes: u32,
    pub halves: u32,
    pub value: Rational,
}

impl PowerFactor {
    pub fn steps(&self) -> usize {
        (self.threes + self.halves) as usize
    }

    fn new(threes: u32, halves: u32) -> Self {
        let value = Rational::from_integer(BigInt::from(3u32).pow(threes))
            * Rational::pow2(-(halves as i64));
        PowerFactor {
            threes,
            halves,
            value,
        }
    }
}

/// Witness data for one block `[i/k, (i+1)/k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockWitness {
    pub block: usize,
    /// Factor carrying the block across 1.
    pub lift: PowerFactor,
    /// Left end of `[a, 1]` reached after the lift.
    pub reached: Rational,
    /// Factors pushing the left end below `γ`.
    pub chain: Vec<PowerFactor>,
    pub steps: usize,
    /// Least `n` with `[γ, 1] ⊆ F^n(block)`.
    pub reach_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachHorizon {
    pub delta: Rational,
    pub gamma: Rational,
    /// Number of blocks `k` with `1/k < δ/2`.
    pub blocks: usize,
    /// Horizon assembled from the lift and chain factors.
    pub n: usize,
    /// Largest `reach_steps` over all blocks; also a valid horizon and never above `n`.
    pub certified: usize,
    pub witnesses: Vec<BlockWitness>,
}

/// `3^m / 2^n` with `lo < value < hi`, minimizing `m + n` and then `m`.
pub fn power_factor_between(lo: &Rational, hi: &Rational) -> Result<PowerFactor> {
    if !(lo < hi) || !hi.is_positive() {
        return Err(Error::Parameter(format!(
            "empty target interval ({lo}, {hi})"
        )));
    }
    least_factor(lo, hi, false, u32::MAX).ok_or_else(|| {
        Error::Parameter(format!(
            "no factor 3^m/2^n in ({lo}, {hi}) within search limit"
        ))
    })
}

/// `3^m / 2^n` with `lo <= value <= hi` and `m + n <= max_steps`, minimizing `m + n`.
pub fn power_factor_within(lo: &Rational, hi: &Rational, max_steps: usize) -> Option<PowerFactor> {
    if lo > hi || !hi.is_positive() {
        return None;
    }
    least_factor(lo, hi, true, u32::try_from(max_steps).unwrap_or(u32::MAX))
}

/// For fixed `m` the best `n` is the least one putting the value below `hi`,
/// and `m + n` then grows strictly with `m`, so the first `m` that works wins.
/// Candidates are screened in floating point; close calls and the accepted
/// factor are checked exactly.
fn least_factor(lo: &Rational, hi: &Rational, closed: bool, max_steps: u32) -> Option<PowerFactor> {
    let below_hi = |v: &Rational| if closed { v <= hi } else { v < hi };
    let above_lo = |v: &Rational| if closed { v >= lo } else { v > lo };
    let log3 = 3f64.log2();
    let lhi = hi.to_f64().log2();
    let llo = if lo.is_positive() {
        lo.to_f64().log2()
    } else {
        f64::NEG_INFINITY
    };
    for m in 0..=EXPONENT_LIMIT {
        let t = m as f64 * log3 - lhi;
        let mut n = if t < 0.0 { 0 } else { t.floor() as i64 + 1 };
        if (t - t.round()).abs() < MARGIN {
            let lo_n = (t.round() as i64 - 1).max(0);
            n = (lo_n..=lo_n + 2)
                .find(|&c| below_hi(&PowerFactor::new(m, c as u32).value))
                .expect("one of three neighbours lies below hi");
        }
        if m as i64 + n > max_steps as i64 {
            return None;
        }
        let v = m as f64 * log3 - n as f64;
        if v < llo - MARGIN {
            continue;
        }
        let f = PowerFactor::new(m, n as u32);
        if above_lo(&f.value) && below_hi(&f.value) {
            return Some(f);
        }
    }
    None
}

/// Exact test of `[γ, 1] ⊆ F^s([u, v])` for the three-line relation.
///
/// A point `x` reaches `x·3^m/2^j <= 1` in `m + j` steps by halving first,
/// so `F^s([u, v])` is the union of `3^m/2^j·[u, v] ∩ [0, 1]` over `m + j <= s`.
/// Everything is scaled by a common denominator and `2^s` to stay in integers.
fn covers_exact(u: &Rational, v: &Rational, gamma: &Rational, s: usize) -> bool {
    let log3 = 3f64.log2();
    let (lu, lv, lg) = (u.to_f64().log2(), v.to_f64().log2(), gamma.to_f64().log2());
    let d = u.denom().lcm(v.denom()).lcm(gamma.denom());
    let scale = |r: &Rational| (r.numer() * (&d / r.denom())) << s;
    let (uu, vv, gg) = (scale(u), scale(v), scale(gamma));
    let top: BigInt = d.clone() << s;
    let mut parts: Vec<(BigInt, BigInt)> = Vec::new();
    for m in 0..=s {
        let base = m as f64 * log3;
        let j_lo = ((base + lu).ceil() as i64 - 1).max(0);
        let j_hi = ((base + lv - lg).floor() as i64 + 1).min((s - m) as i64);
        if j_lo > j_hi {
            continue;
        }
        let three = BigInt::from(3u32).pow(m as u32);
        let (u3, v3) = (&uu * &three, &vv * &three);
        for j in j_lo..=j_hi {
            let lo = &u3 >> j as usize;
            let hi = (&v3 >> j as usize).min(top.clone());
            // exact: the shifts only drop bits when 2^j exceeds 2^s, which j <= s rules out
            if lo <= top && hi >= gg {
                parts.push((lo, hi));
            }
        }
    }
    parts.sort();
    let mut reach = gg;
    for (lo, hi) in parts {
        if lo > reach {
            return false;
        }
        if hi > reach {
            reach = hi;
        }
    }
    reach >= top
}

/// Floating-point version of [`covers_exact`], used to locate the answer.
fn covers_approx(u: f64, v: f64, gamma: f64, s: usize) -> bool {
    let log3 = 3f64.log2();
    let (lu, lv, lg) = (u.log2(), v.log2(), gamma.log2());
    let mut parts = Vec::new();
    for m in 0..=s {
        let base = m as f64 * log3;
        let j_lo = ((base + lu).ceil() as i64).max(0);
        let j_hi = ((base + lv - lg).floor() as i64).min((s - m) as i64);
        for j in j_lo..=j_hi {
            let l = base - j as f64;
            parts.push((l + lu, (l + lv).min(0.0)));
        }
    }
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = lg;
    for (lo, hi) in parts {
        if lo > reach + 1e-12 {
            return false;
        }
        reach = reach.max(hi);
    }
    reach >= -1e-12
}

/// Least `s` with `[γ, 1] ⊆ F^s(iv)` for the three-line relation, given that
/// `limit` steps are known to suffice.
pub fn cover_steps(iv: &Interval, gamma: &Rational, limit: usize) -> Result<usize> {
    let (u, v) = (&iv.lo, &iv.hi);
    if !u.is_positive() {
        return Err(Error::Parameter("interval must lie in (0, 1]".into()));
    }
    let (uf, vf, gf) = (u.to_f64(), v.to_f64(), gamma.to_f64());
    let mut hi = 1usize;
    while hi < limit && !covers_approx(uf, vf, gf, hi) {
        hi = (hi * 2).min(limit);
    }
    let mut lo = 0usize;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if covers_approx(uf, vf, gf, mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let mut s = hi;
    while !covers_exact(u, v, gamma, s) {
        if s >= limit {
            return Err(Error::Parameter(format!(
                "{iv} does not cover [{gamma}, 1] within {limit} steps"
            )));
        }
        s += 1;
    }
    while s > 0 && covers_exact(u, v, gamma, s - 1) {
        s -= 1;
    }
    Ok(s)
}

/// Horizon `N` such that `[γ, 1] ⊆ F^n([a, b])` for every `[a, b] ⊆ (0, 1]`
/// with `b − a > δ` and every `n >= N`, with `F` the relation with slopes 3, 1, 1/2.
///
/// Any such interval contains a block `[i/k, (i+1)/k]` with `1/k < δ/2` and
/// `i >= 1`. A factor `3^p/2^q` lifts the block across 1, reaching `[a_δ, 1]`;
/// then factors `c_j` with `c_0 … c_j a_δ < c_{j+1} < c_0 … c_{j-1} a_δ`
/// push the left end down until it passes `γ`. The horizon is the largest
/// total over all blocks.
///
/// Since the relation contains the identity, `F^n(A) ⊆ F^{n+1}(A)`, and
/// images are monotone in `A`, so the largest per-block covering time is a
/// horizon as well; it is reported as `certified`.
pub fn reach_horizon(delta: &Rational, gamma: &Rational) -> Result<ReachHorizon> {
    let unit_open = |r: &Rational| r.is_positive() && r < &Rational::one();
    if !unit_open(delta) || !unit_open(gamma) {
        return Err(Error::Parameter("δ and γ must lie in (0, 1)".into()));
    }
    let two = Rational::from(2i64);
    let k_big: BigInt = (&two / delta).floor_int() + 1;
    let k: usize = k_big
        .try_into()
        .map_err(|_| Error::Parameter("δ too small".into()))?;
    let k_r = Rational::from(k);
    let mut witnesses = Vec::with_capacity(k.saturating_sub(1));
    for block in 1..k {
        let b = Rational::from(block);
        let lift = power_factor_between(&(&k_r / (&b + Rational::one())), &(&k_r / &b))?;
        let reached = &lift.value * &b / &k_r;
        let mut chain = Vec::new();
        let mut left = reached.clone();
        let mut prev_left = reached.clone();
        while &left >= gamma {
            let hi = if chain.is_empty() {
                (&reached + Rational::one()) / &two
            } else {
                prev_left.clone()
            };
            let c = power_factor_between(&left, &hi)?;
            prev_left = left.clone();
            left = &left * &c.value;
            chain.push(c);
        }
        let steps = lift.steps() + chain.iter().map(PowerFactor::steps).sum::<usize>();
        let iv = Interval::new(&b / &k_r, (&b + Rational::one()) / &k_r)?;
        let reach_steps = cover_steps(&iv, gamma, steps)?;
        witnesses.push(BlockWitness {
            block,
            lift,
            reached,
            chain,
            steps,
            reach_steps,
        });
    }
    let n = witnesses.iter().map(|w| w.steps).max().unwrap_or(0);
    let certified = witnesses.iter().map(|w| w.reach_steps).max().unwrap_or(0);
    Ok(ReachHorizon {
        delta: delta.clone(),
        gamma: gamma.clone(),
        blocks: k,
        n,
        certified,
        witnesses,
    })
}
