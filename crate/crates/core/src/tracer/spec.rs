use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::shift::{Sides, TruncatedPoint};
use crate::slopes::SlopeSet;
use crate::tracer::descending::check_trajectory;

/// Coordinates `x(k), …, x(l)` of some point, at their own indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSegment {
    pub k: i64,
    pub l: i64,
    pub values: Vec<Rational>,
}

impl OrbitSegment {
    pub fn new(k: i64, values: Vec<Rational>) -> Self {
        let l = k + values.len() as i64 - 1;
        OrbitSegment { k, l, values }
    }

    pub fn value(&self, i: i64) -> &Rational {
        &self.values[(i - self.k) as usize]
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.k..=self.l
    }
}

/// Orbit segments on strictly increasing, disjoint index ranges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specification {
    pub segments: Vec<OrbitSegment>,
}

impl Specification {
    /// Check index ranges and value counts; relation membership is checked separately.
    pub fn new(segments: Vec<OrbitSegment>) -> Result<Self> {
        let s = Specification { segments };
        s.check_shape()?;
        Ok(s)
    }

    pub fn check_shape(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::InvalidSpecification("no segments".into()));
        }
        for (j, seg) in self.segments.iter().enumerate() {
            if seg.k < 1 {
                return Err(Error::InvalidSpecification(format!(
                    "segment {j} starts before index 1"
                )));
            }
            if seg.l < seg.k || seg.values.len() as i64 != seg.l - seg.k + 1 {
                return Err(Error::InvalidSpecification(format!(
                    "segment {j} has range [{}, {}] but {} values",
                    seg.k,
                    seg.l,
                    seg.values.len()
                )));
            }
            if let Some(prev) = j.checked_sub(1).map(|p| &self.segments[p]) {
                if seg.k <= prev.l {
                    return Err(Error::InvalidSpecification(format!(
                        "segment {j} starts at {} but segment {} ends at {}",
                        seg.k,
                        j - 1,
                        prev.l
                    )));
                }
            }
        }
        Ok(())
    }

    /// Shape check plus: each segment is a trajectory of the relation.
    pub fn validate(&self, omega: &SlopeSet) -> Result<()> {
        self.check_shape()?;
        self.segments
            .iter()
            .try_for_each(|s| check_trajectory(omega, &s.values))
    }

    /// Smallest gap `k_{j+1} − l_j`, or `None` for a single segment.
    pub fn spacing(&self) -> Option<i64> {
        self.segments.windows(2).map(|w| w[1].k - w[0].l).min()
    }

    pub fn last_index(&self) -> i64 {
        self.segments.last().map_or(0, |s| s.l)
    }
}

/// One compared coordinate in a trace certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub segment: usize,
    pub index: i64,
    pub target: Rational,
    pub value: Rational,
    pub distance: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceCertificate {
    pub eps: Rational,
    /// Spacing the construction relied on.
    pub horizon: usize,
    pub point: TruncatedPoint,
    pub entries: Vec<TraceEntry>,
}

impl TraceCertificate {
    pub fn max_distance(&self) -> Rational {
        self.entries
            .iter()
            .map(|e| e.distance.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// True when every recorded distance is at most `ε` and matches the point.
    pub fn is_consistent(&self, omega: &SlopeSet) -> bool {
        self.entries.iter().all(|e| {
            self.point.value_at(omega, e.index).as_ref() == Some(&e.value)
                && (&e.value - &e.target).abs() == e.distance
                && e.distance <= self.eps
        })
    }
}

impl fmt::Display for TraceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ε = {}   horizon = {}", self.eps, self.horizon)?;
        writeln!(
            f,
            "{:>7} {:>7} {:>24} {:>24} {:>24}",
            "segment", "index", "target", "traced", "distance"
        )?;
        for e in &self.entries {
            writeln!(
                f,
                "{:>7} {:>7} {:>24} {:>24} {:>24}",
                e.segment,
                e.index,
                e.target.to_string(),
                e.value.to_string(),
                e.distance.to_string()
            )?;
        }
        write!(f, "max distance = {}", self.max_distance())
    }
}

/// Per-coordinate comparison of `y` against every segment of `spec`.
pub fn trace_entries(
    omega: &SlopeSet,
    spec: &Specification,
    y: &TruncatedPoint,
) -> Result<Vec<TraceEntry>> {
    let mut out = Vec::new();
    for (j, seg) in spec.segments.iter().enumerate() {
        for i in seg.indices() {
            let value = y
                .value_at(omega, i)
                .ok_or(Error::IndexOutOfRange { index: i })?;
            let target = seg.value(i).clone();
            out.push(TraceEntry {
                segment: j,
                index: i,
                distance: (&value - &target).abs(),
                target,
                value,
            });
        }
    }
    Ok(out)
}

/// True iff `|x_j(i) − y(i)| <= ε` for every segment `j` and index `i` in it.
pub fn verify_trace(
    omega: &SlopeSet,
    spec: &Specification,
    y: &TruncatedPoint,
    eps: &Rational,
) -> Result<bool> {
    if y.sides != Sides::One {
        return Err(Error::SidednessMismatch);
    }
    Ok(trace_entries(omega, spec, y)?
        .iter()
        .all(|e| &e.distance <= eps))
}
