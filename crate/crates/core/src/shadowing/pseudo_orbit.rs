use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::relation::slope_products;
use crate::shift::{metric_d, shift, Tail, TruncatedPoint};
use crate::slopes::SlopeSet;

/// Points `x_0, …, x_L` of the one-sided space; past `x_L` the sequence
/// continues as the true orbit of `x_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoOrbit {
    pub points: Vec<TruncatedPoint>,
    pub delta: Rational,
}

impl PseudoOrbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Constant points `1/2 + k/(2n₀)` for `k = 0..=n₀`, ending at `1̄`.
///
/// Consecutive distances are `1/(4n₀)`; the advertised `δ` is `1/(4n₀ − 1)`.
pub fn staircase_pseudo_orbit(n0: usize) -> Result<PseudoOrbit> {
    if n0 == 0 {
        return Err(Error::Parameter("n₀ must be positive".into()));
    }
    let n = n0 as i64;
    let points = (0..=n)
        .map(|k| TruncatedPoint::constant(Rational::frac(1, 2) + Rational::frac(k, 2 * n)))
        .collect();
    Ok(PseudoOrbit {
        points,
        delta: Rational::frac(1, 4 * n - 1),
    })
}

/// Number of steps `k` in the ladder `a = z_0 < … < z_k = 1`: the least one
/// whose step `(1 − a)/k` gives a one-sided jump `(1 − a)/(2k)` below `δ`.
fn ladder_steps(a: &Rational, delta: &Rational) -> usize {
    let gap = Rational::one() - a;
    let k = (&gap / (delta * Rational::from(2i64))).floor_int() + 1;
    usize::try_from(k).expect("ladder length fits in usize")
}

/// Loops around the cycle `z, ω₁z, ω₁ω₂z, …` climbing from `a` to 1.
///
/// `word` lists slope indices with non-decreasing slopes and product 1, so
/// every partial product is at most 1 and each loop is a periodic point of
/// period `M = word.len()`. The orbit runs once around the loop at `z_t`, then
/// jumps to the loop at `z_{t+1}`; the last loop sits at 1.
pub fn diagonal_pseudo_orbit(
    omega: &SlopeSet,
    word: &[usize],
    a: &Rational,
    delta: &Rational,
) -> Result<PseudoOrbit> {
    omega.check_word(word)?;
    if word.is_empty() {
        return Err(Error::Parameter("word must be non-empty".into()));
    }
    let product = omega.word_product(word);
    if !product.is_one() {
        return Err(Error::Parameter(format!(
            "word product is {product}, not 1"
        )));
    }
    if word
        .windows(2)
        .any(|w| omega.slope(w[0]) > omega.slope(w[1]))
    {
        return Err(Error::Parameter(
            "word slopes must be non-decreasing".into(),
        ));
    }
    if !a.is_positive() || a >= &Rational::one() {
        return Err(Error::Parameter("a must lie in (0, 1)".into()));
    }
    if !delta.is_positive() {
        return Err(Error::Parameter("δ must be positive".into()));
    }
    let m = word.len();
    let k = ladder_steps(a, delta);
    let step = (Rational::one() - a) / Rational::from(k);
    let mut points = Vec::with_capacity(k * m + 1);
    for t in 0..=k {
        let z = a + &step * Rational::from(t);
        let mut coords = Vec::with_capacity(m);
        let mut v = z.clone();
        for &j in &word[..m - 1] {
            coords.push(v.clone());
            v = &v * omega.slope(j);
        }
        coords.push(v);
        let tail = if m == 1 {
            Tail::Const(z)
        } else {
            Tail::Periodic(m)
        };
        let mut p = TruncatedPoint::one_sided(omega, coords, tail)?;
        if m > 1 {
            p.word = word[..m - 1].to_vec();
        }
        points.push(p);
        if t < k {
            for _ in 1..m {
                let next = shift(omega, points.last().unwrap())?;
                points.push(next);
            }
        }
    }
    Ok(PseudoOrbit {
        points,
        delta: delta.clone(),
    })
}

/// Largest `ρ` such that `y = αx` with `α` an `M`-fold slope product and
/// `|x − a|, |y − a| < ρ` forces `α = 1`: the minimum of `|α − 1|·a/(α + 1)`
/// over products `α ≠ 1`.
pub fn separation_radius(omega: &SlopeSet, m: usize, a: &Rational) -> Result<Rational> {
    let one = Rational::one();
    slope_products(omega, m)
        .into_iter()
        .filter(|alpha| alpha != &one)
        .map(|alpha| (&alpha - &one).abs() * a / (&alpha + &one))
        .min()
        .ok_or_else(|| Error::Parameter("every product equals 1".into()))
}

/// Tolerances strictly below this bound admit no shadowing orbit for the
/// one-sided diagonal pseudo-orbit: `min(ρ/2^{M+1}, (1 − a)/4)`.
pub fn diagonal_threshold(omega: &SlopeSet, m: usize, a: &Rational) -> Result<Rational> {
    let rho = separation_radius(omega, m, a)?;
    let by_rho = rho * Rational::pow2(-(m as i64 + 1));
    Ok(by_rho.min((Rational::one() - a) / Rational::from(4i64)))
}

/// True iff `D(σ(x_k), x_{k+1}) < δ` for every consecutive pair.
///
/// Fails with [`Error::Undecidable`] when a metric enclosure straddles `δ`.
pub fn verify_pseudo_orbit(omega: &SlopeSet, po: &PseudoOrbit) -> Result<bool> {
    for p in &po.points {
        p.ensure_valid(omega)?;
    }
    for w in po.points.windows(2) {
        let image = shift(omega, &w[0])?;
        let d = metric_d(omega, &image, &w[1])?;
        if d.upper < po.delta {
            continue;
        }
        if d.lower >= po.delta {
            return Ok(false);
        }
        return Err(Error::Undecidable {
            lower: Box::new(d.lower),
            upper: Box::new(d.upper),
            threshold: Box::new(po.delta.clone()),
        });
    }
    Ok(true)
}
