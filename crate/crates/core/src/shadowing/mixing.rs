use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalUnion;
use crate::rational::Rational;
use crate::relation::{hausdorff_to_unit, image_orbit};
use crate::slopes::SlopeSet;

/// Consecutive values without a new minimum needed to call a positive floor persistent.
pub const PLATEAU_RUN: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixingVerdict {
    ConsistentWithMixing,
    MixingObstructed,
    Inconclusive,
}

impl std::fmt::Display for MixingVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MixingVerdict::ConsistentWithMixing => "consistent-with-mixing",
            MixingVerdict::MixingObstructed => "mixing-obstructed",
            MixingVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HausdorffSeries {
    /// `(n, d_H(F^n(A), [0, 1]))` for `n = 1..=n_max`.
    pub values: Vec<(usize, Rational)>,
    pub verdict: MixingVerdict,
}

/// Verdict on a finite series.
///
/// Obstructed: the minimum is positive and the last [`PLATEAU_RUN`] values
/// did not improve on it. Consistent: the series never increases and ends
/// below where it started, or it reaches 0.
pub fn classify(values: &[Rational]) -> MixingVerdict {
    let Some(min) = values.iter().min() else {
        return MixingVerdict::Inconclusive;
    };
    if min.is_zero() {
        return MixingVerdict::ConsistentWithMixing;
    }
    let first_min = values.iter().position(|v| v == min).unwrap();
    if values.len() - 1 - first_min >= PLATEAU_RUN {
        return MixingVerdict::MixingObstructed;
    }
    let non_increasing = values.windows(2).all(|w| w[1] <= w[0]);
    if non_increasing && values.last() < values.first() {
        return MixingVerdict::ConsistentWithMixing;
    }
    MixingVerdict::Inconclusive
}

/// Exact Hausdorff distances from `F^n(A)` to `[0, 1]` with a verdict.
pub fn growing_images_series(
    omega: &SlopeSet,
    a: &IntervalUnion,
    n_max: usize,
    cap: usize,
) -> Result<HausdorffSeries> {
    if !a.intervals().iter().any(|iv| iv.lo < iv.hi) {
        return Err(Error::Parameter("A must have non-empty interior".into()));
    }
    let orbit = image_orbit(omega, a, n_max, cap)?;
    let values = orbit
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, img)| Ok((n, hausdorff_to_unit(img)?)))
        .collect::<Result<Vec<_>>>()?;
    let plain: Vec<Rational> = values.iter().map(|(_, v)| v.clone()).collect();
    Ok(HausdorffSeries {
        verdict: classify(&plain),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::relation::DEFAULT_INTERVAL_CAP;

    #[test]
    fn verdicts() {
        assert_eq!(
            classify(&[q(1, 2), q(1, 4), q(0, 1)]),
            MixingVerdict::ConsistentWithMixing
        );
        assert_eq!(
            classify(&[q(1, 2), q(1, 3), q(1, 4)]),
            MixingVerdict::ConsistentWithMixing
        );
        assert_eq!(
            classify(&vec![q(1, 4); 11]),
            MixingVerdict::MixingObstructed
        );
        assert_eq!(classify(&vec![q(1, 4); 10]), MixingVerdict::Inconclusive);
        assert_eq!(classify(&[]), MixingVerdict::Inconclusive);
    }

    #[test]
    fn unit_interval_stays_unit() {
        let s = SlopeSet::from_fracs(&[(1, 2), (3, 1)]);
        let series =
            growing_images_series(&s, &IntervalUnion::unit(), 5, DEFAULT_INTERVAL_CAP).unwrap();
        assert!(series.values.iter().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn two_lines_stay_away() {
        let s = SlopeSet::from_fracs(&[(1, 2), (3, 1)]);
        let a = IntervalUnion::single(q(5, 6), q(1, 1)).unwrap();
        let series = growing_images_series(&s, &a, 20, DEFAULT_INTERVAL_CAP).unwrap();
        assert!(series.values.iter().all(|(_, v)| v >= &q(1, 9)));
        assert_eq!(series.verdict, MixingVerdict::MixingObstructed);
    }
}
