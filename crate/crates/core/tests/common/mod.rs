//! Independent reference computations for the integration tests. Nothing
//! here calls the library's own decision procedures.

#![allow(dead_code)]

use std::collections::BTreeSet;

use mahavier_core::shadowing::PseudoOrbit;
use mahavier_core::shift::TruncatedPoint;
use mahavier_core::{q, Interval, Rational, SlopeSet};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `p/den` in `[0, 1]`.
pub fn unit_rational(rng: &mut impl Rng, den: i64) -> Rational {
    q(rng.gen_range(0..=den), den)
}

/// A random orbit of the relation: each step picks uniformly among slopes
/// that keep the value in `[0, 1]`.
pub fn random_orbit(
    rng: &mut impl Rng,
    omega: &SlopeSet,
    start: Rational,
    len: usize,
) -> Vec<Rational> {
    let mut out = vec![start];
    while out.len() < len {
        let x = out.last().unwrap();
        let options: Vec<Rational> = omega
            .slopes()
            .iter()
            .map(|w| w * x)
            .filter(|v| v <= &q(1, 1))
            .collect();
        let next = options[rng.gen_range(0..options.len())].clone();
        out.push(next);
    }
    out
}

/// True iff consecutive values are linked by some slope and all lie in `[0, 1]`.
pub fn is_orbit(omega: &SlopeSet, xs: &[Rational]) -> bool {
    xs.iter().all(|x| !x.is_negative() && x <= &q(1, 1))
        && xs
            .windows(2)
            .all(|w| omega.slopes().iter().any(|s| s * &w[0] == w[1]))
}

/// `y ∈ F(A)` straight from the definition: some slope `ω` has `y/ω ∈ A`.
pub fn image_member(omega: &SlopeSet, parts: &[Interval], y: &Rational) -> bool {
    if y.is_negative() || y > &q(1, 1) {
        return false;
    }
    omega
        .slopes()
        .iter()
        .any(|w| parts.iter().any(|iv| iv.lo <= y / w && y / w <= iv.hi))
}

/// Search `r^k = ρ^l` over `|k|, |l| <= bound`, `(k, l) ≠ (0, 0)`.
pub fn brute_never_connect(r: &Rational, rho: &Rational, bound: i32) -> bool {
    for k in -bound..=bound {
        for l in -bound..=bound {
            if (k, l) != (0, 0) && r.pow(k) == rho.pow(l) {
                return false;
            }
        }
    }
    true
}

/// All `n`-fold slope products, enumerated by letter counts instead of words.
pub fn products_by_counts(omega: &SlopeSet, n: usize) -> BTreeSet<Rational> {
    fn rec(slopes: &[Rational], left: usize, acc: Rational, out: &mut BTreeSet<Rational>) {
        match slopes {
            [] => {
                if left == 0 {
                    out.insert(acc);
                }
            }
            [last] => {
                out.insert(acc * last.pow(left as i32));
            }
            [first, rest @ ..] => {
                for c in 0..=left {
                    rec(rest, left - c, &acc * &first.pow(c as i32), out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(omega.slopes(), n, q(1, 1), &mut out);
    out
}

/// Largest `3^j / 2^{M−j} <= 1`.
pub fn two_line_alpha(m: usize) -> Rational {
    (0..=m)
        .map(|j| q(3, 1).pow(j as i32) * q(1, 2).pow((m - j) as i32))
        .filter(|v| v <= &q(1, 1))
        .max()
        .unwrap()
}

/// `F^M([lo, hi])` for slopes `{1/2, 3}` and `lo > 0`: the union of
/// `α[lo, hi] ∩ [0, 1]` over `M`-fold products `α`. Applying halvings before
/// triplings keeps every intermediate value inside the range, so nothing
/// else is reachable. Returned as sorted, merged `(lo, hi)` pairs.
pub fn two_line_image(m: usize, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
    let mut parts: Vec<(Rational, Rational)> = (0..=m)
        .map(|j| q(3, 1).pow(j as i32) * q(1, 2).pow((m - j) as i32))
        .filter_map(|a| {
            let l = &a * lo;
            let h = (&a * hi).min(q(1, 1));
            (l <= h).then_some((l, h))
        })
        .collect();
    parts.sort();
    merge(parts)
}

pub fn merge(parts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (l, h) in parts {
        match out.last_mut() {
            Some(last) if l <= last.1 => {
                if h > last.1 {
                    last.1 = h;
                }
            }
            _ => out.push((l, h)),
        }
    }
    out
}

/// `[lo, hi] ⊆ G([a, b])` where `G` is the relation; the clipped slope
/// images are merged by hand.
pub fn interval_in_image(omega: &SlopeSet, a: &Interval, target: &Interval) -> bool {
    let parts: Vec<(Rational, Rational)> = {
        let mut v: Vec<_> = omega
            .slopes()
            .iter()
            .filter_map(|w| {
                let l = w * &a.lo;
                let h = (w * &a.hi).min(q(1, 1));
                (l <= h).then_some((l, h))
            })
            .collect();
        v.sort();
        v
    };
    merge(parts)
        .iter()
        .any(|(l, h)| l <= &target.lo && &target.hi <= h)
}

/// Sup of `|x_i − y_i|/2^{|i|}` over `|i| <= reach` (or `1..=reach` for
/// one-sided points), plus the weight beyond as an upper bound.
pub fn metric_by_terms(
    omega: &SlopeSet,
    x: &TruncatedPoint,
    y: &TruncatedPoint,
    reach: i64,
    two_sided: bool,
) -> (Rational, Rational) {
    let from = if two_sided { -reach } else { 1 };
    let mut best = q(0, 1);
    for i in from..=reach {
        let xv = x.value_at(omega, i).expect("known coordinate");
        let yv = y.value_at(omega, i).expect("known coordinate");
        best = best.max((xv - yv).abs() * Rational::pow2(-i.abs()));
    }
    let upper = best.clone().max(Rational::pow2(-(reach + 1)));
    (best, upper)
}

struct Bound {
    lo: Rational,
    lo_open: bool,
    hi: Rational,
    hi_open: bool,
}

impl Bound {
    fn meet_lo(&mut self, v: Rational, open: bool) {
        if v > self.lo || (v == self.lo && open) {
            self.lo = v;
            self.lo_open = open;
        }
    }

    fn meet_hi(&mut self, v: Rational, open: bool) {
        if v < self.hi || (v == self.hi && open) {
            self.hi = v;
            self.hi_open = open;
        }
    }

    fn empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open))
    }
}

pub fn brute_force_shadow(
    omega: &SlopeSet,
    po: &PseudoOrbit,
    eps: &Rational,
    horizon: usize,
    depth: usize,
) -> bool {
    brute_force_first_word(omega, po, eps, horizon, depth).is_some()
}

/// First word of length `depth − 1`, in lexicographic order, that admits a
/// first coordinate meeting `|y_{k+j} − x_k(j)| < ε·2^j` for all
/// `k <= horizon` and `1 <= j`, `ε·2^j <= 1`. Enumerates every word outright.
pub fn brute_force_first_word(
    omega: &SlopeSet,
    po: &PseudoOrbit,
    eps: &Rational,
    horizon: usize,
    depth: usize,
) -> Option<Vec<usize>> {
    let mut window = 0usize;
    while eps * Rational::pow2(window as i64 + 1) <= q(1, 1) {
        window += 1;
    }
    let m = omega.len();
    let total = m.pow(depth as u32 - 1);
    for code in 0..total {
        let mut word = Vec::with_capacity(depth - 1);
        let mut c = code;
        for _ in 0..depth - 1 {
            word.push(c % m);
            c /= m;
        }
        word.reverse();
        let mut products = vec![q(1, 1)];
        for &s in &word {
            let next = products.last().unwrap() * omega.slope(s);
            products.push(next);
        }
        let mut b = Bound {
            lo: q(0, 1),
            lo_open: false,
            hi: q(1, 1),
            hi_open: false,
        };
        for (idx, p) in products.iter().enumerate() {
            let i = idx + 1;
            b.meet_hi(q(1, 1) / p, false);
            for k in 0..=horizon.min(i - 1) {
                let j = i - k;
                if j == 0 || j > window {
                    continue;
                }
                let x = &po.points[k];
                let v = x
                    .value_at(omega, x.start + j as i64 - 1)
                    .expect("pseudo-orbit coordinate");
                let r = eps * Rational::pow2(j as i64);
                b.meet_lo((&v - &r) / p, true);
                b.meet_hi((&v + &r) / p, true);
            }
        }
        if !b.empty() {
            return Some(word);
        }
    }
    None
}
