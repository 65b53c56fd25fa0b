//! Moving specifications between the relation and its shift space.
//!
//! A shift segment asks for `σ^i(y)` to stay close to `σ^i(x)` for
//! `k <= i <= l`; a relation segment asks for `y(i)` to stay close to `x(i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tracer::spec::{OrbitSegment, Specification};

/// Shift times `k..=l` of a point whose coordinates from index `first` on are `coords`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftSegment {
    pub k: i64,
    pub l: i64,
    pub first: i64,
    pub coords: Vec<Rational>,
}

impl ShiftSegment {
    fn coord(&self, i: i64) -> Option<&Rational> {
        usize::try_from(i - self.first)
            .ok()
            .and_then(|p| self.coords.get(p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftSpecification {
    pub segments: Vec<ShiftSegment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Translated<S> {
    pub spec: S,
    /// Tolerance to trace the translated specification at.
    pub eps: Rational,
    /// Added to the spacing requirement.
    pub extra_spacing: usize,
}

/// Smallest `N >= 1` with `2^{-N} < ε`.
pub fn extension_for(eps: &Rational) -> Result<usize> {
    if !eps.is_positive() {
        return Err(Error::Parameter("ε must be positive".into()));
    }
    Ok((1..).find(|&n| &Rational::pow2(-(n as i64)) < eps).unwrap())
}

/// Each shift segment `[k, l]` becomes the coordinate segment `[max(k, 1), l + N]`.
pub fn shift_to_cr(spec: &ShiftSpecification, eps: &Rational) -> Result<Translated<Specification>> {
    let n = extension_for(eps)?;
    let mut segments = Vec::with_capacity(spec.segments.len());
    for (j, s) in spec.segments.iter().enumerate() {
        if s.l < s.k || s.k < 0 {
            return Err(Error::InvalidSpecification(format!(
                "shift segment {j} has range [{}, {}]",
                s.k, s.l
            )));
        }
        let k = s.k.max(1);
        let l = s.l + n as i64;
        let values = (k..=l)
            .map(|i| s.coord(i).cloned())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::InvalidSpecification(format!("shift segment {j} lacks coordinates {k}..{l}"))
            })?;
        segments.push(OrbitSegment { k, l, values });
    }
    Ok(Translated {
        spec: Specification::new(segments)?,
        eps: eps.clone(),
        extra_spacing: n,
    })
}

/// Each coordinate segment `[k, l]` becomes the shift segment `[k − 1, l − 1]`.
/// Tracing the result at `ε/2` traces the original at `ε`.
pub fn cr_to_shift(spec: &Specification, eps: &Rational) -> Result<Translated<ShiftSpecification>> {
    if !eps.is_positive() {
        return Err(Error::Parameter("ε must be positive".into()));
    }
    spec.check_shape()?;
    let segments = spec
        .segments
        .iter()
        .map(|s| ShiftSegment {
            k: s.k - 1,
            l: s.l - 1,
            first: s.k,
            coords: s.values.clone(),
        })
        .collect();
    Ok(Translated {
        spec: ShiftSpecification { segments },
        eps: eps / Rational::from(2i64),
        extra_spacing: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn extension_lengths() {
        assert_eq!(extension_for(&q(1, 2)).unwrap(), 2);
        assert_eq!(extension_for(&q(1, 1)).unwrap(), 1);
        assert_eq!(extension_for(&q(1, 8)).unwrap(), 4);
    }

    #[test]
    fn reindexing() {
        let spec = Specification::new(vec![OrbitSegment::new(3, vec![q(1, 2), q(1, 2), q(1, 4)])])
            .unwrap();
        let t = cr_to_shift(&spec, &q(1, 2)).unwrap();
        let s = &t.spec.segments[0];
        assert_eq!((s.k, s.l, s.first), (2, 4, 3));
        assert_eq!(t.eps, q(1, 4));
    }

    #[test]
    fn missing_coordinates_are_reported() {
        let spec = ShiftSpecification {
            segments: vec![ShiftSegment {
                k: 1,
                l: 2,
                first: 1,
                coords: vec![q(1, 2); 3],
            }],
        };
        assert!(shift_to_cr(&spec, &q(1, 2)).is_err());
        let mut ok = spec.clone();
        ok.segments[0].coords = vec![q(1, 2); 4];
        let t = shift_to_cr(&ok, &q(1, 2)).unwrap();
        assert_eq!((t.spec.segments[0].k, t.spec.segments[0].l), (1, 4));
        assert_eq!(t.extra_spacing, 2);
    }
}
