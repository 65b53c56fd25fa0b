//! Slope sets: the finitely many lines `y = ω x` whose union on the unit
//! square is the relation under study.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::never_connect;
use crate::rational::{q, Rational};

/// An ordered list of distinct positive slopes, optionally with a designated
/// pair `(i, j)` (0-based) that should satisfy `ω_i < 1 < ω_j` and never-connect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SlopeSetRepr", into = "SlopeSetRepr")]
pub struct SlopeSet {
    slopes: Vec<Rational>,
    nc_pair: Option<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct SlopeSetRepr {
    slopes: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nc_pair: Option<(usize, usize)>,
}

impl TryFrom<SlopeSetRepr> for SlopeSet {
    type Error = Error;
    fn try_from(r: SlopeSetRepr) -> Result<Self> {
        let s = SlopeSet::new(r.slopes)?;
        match r.nc_pair {
            Some((i, j)) => s.with_nc_pair(i, j),
            None => Ok(s),
        }
    }
}

impl From<SlopeSet> for SlopeSetRepr {
    fn from(s: SlopeSet) -> Self {
        SlopeSetRepr {
            slopes: s.slopes,
            nc_pair: s.nc_pair,
        }
    }
}

impl SlopeSet {
    pub fn new(slopes: Vec<Rational>) -> Result<Self> {
        if slopes.is_empty() {
            return Err(Error::InvalidSlopeSet("empty slope list".into()));
        }
        for (i, s) in slopes.iter().enumerate() {
            if !s.is_positive() {
                return Err(Error::InvalidSlopeSet(format!("slope {s} is not positive")));
            }
            if slopes[..i].contains(s) {
                return Err(Error::InvalidSlopeSet(format!("duplicate slope {s}")));
            }
        }
        Ok(SlopeSet {
            slopes,
            nc_pair: None,
        })
    }

    pub fn with_nc_pair(mut self, i: usize, j: usize) -> Result<Self> {
        if i >= self.len() || j >= self.len() || i == j {
            return Err(Error::InvalidSlopeSet(format!(
                "designated pair ({i}, {j}) does not name two slopes"
            )));
        }
        self.nc_pair = Some((i, j));
        Ok(self)
    }

    /// Build from `(num, den)` pairs; panics on invalid input. Meant for literals.
    pub fn from_fracs(fracs: &[(i64, i64)]) -> Self {
        Self::new(fracs.iter().map(|&(n, d)| q(n, d)).collect()).expect("valid slope literal")
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn slope(&self, i: usize) -> &Rational {
        &self.slopes[i]
    }

    pub fn nc_pair(&self) -> Option<(usize, usize)> {
        self.nc_pair
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn index_of(&self, w: &Rational) -> Option<usize> {
        self.slopes.iter().position(|s| s == w)
    }

    pub fn contains(&self, w: &Rational) -> bool {
        self.index_of(w).is_some()
    }

    pub fn has_identity(&self) -> bool {
        self.slopes.iter().any(Rational::is_one)
    }

    pub fn max_slope(&self) -> &Rational {
        self.slopes.iter().max().expect("non-empty")
    }

    pub fn min_slope(&self) -> &Rational {
        self.slopes.iter().min().expect("non-empty")
    }

    /// True when `1/ω` is a slope for every slope `ω`.
    pub fn is_reciprocal_closed(&self) -> bool {
        self.slopes.iter().all(|s| self.contains(&s.recip()))
    }

    /// The slope set of the inverse relation.
    pub fn reciprocals(&self) -> SlopeSet {
        SlopeSet {
            slopes: self.slopes.iter().map(Rational::recip).collect(),
            nc_pair: None,
        }
    }

    /// Product of the slopes named by `word`.
    pub fn word_product(&self, word: &[usize]) -> Rational {
        word.iter().map(|&i| &self.slopes[i]).product()
    }

    pub fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&i| i >= self.len()) {
            Some(i) => Err(Error::InvalidPoint(format!(
                "slope index {i} out of range for {} slopes",
                self.len()
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for SlopeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.slopes.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl FromStr for SlopeSet {
    type Err = Error;

    /// Comma-separated rationals, e.g. `1/2,3,1`.
    fn from_str(s: &str) -> Result<Self> {
        let slopes = s
            .split(',')
            .map(|t| {
                t.parse::<Rational>()
                    .map_err(|e| Error::InvalidSlopeSet(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        SlopeSet::new(slopes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// A never-connecting pair straddling 1 exists.
    LfInducing,
    /// Contains 3, 1 and 1/2, and every slope lies in `[1/3, 3]`.
    TraceFamily,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum Failure {
    TooFewSlopes { count: usize },
    NoStraddlingPair,
    DesignatedPairOrder { i: usize, j: usize },
    NeverConnect { i: usize, j: usize },
    MissingSlope { slope: Rational },
    SlopeOutOfRange { slope: Rational },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::TooFewSlopes { count } => write!(f, "needs at least 2 slopes, got {count}"),
            Failure::NoStraddlingPair => write!(f, "no pair with one slope below 1 and one above"),
            Failure::DesignatedPairOrder { i, j } => {
                write!(f, "designated pair ({i}, {j}) is not ordered below/above 1")
            }
            Failure::NeverConnect { i, j } => write!(f, "never-connect fails for pair ({i}, {j})"),
            Failure::MissingSlope { slope } => write!(f, "required slope {slope} missing"),
            Failure::SlopeOutOfRange { slope } => write!(f, "slope {slope} outside [1/3, 3]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub profile: Profile,
    pub passed: bool,
    /// Pair that satisfied the lf-inducing clauses, when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_pair: Option<(usize, usize)>,
    pub failures: Vec<Failure>,
}

pub fn validate_slope_set(omega: &SlopeSet, profile: Profile) -> ValidationReport {
    let mut failures = Vec::new();
    let mut witness_pair = None;
    match profile {
        Profile::LfInducing => {
            let one = Rational::one();
            let straddles = |i: usize, j: usize| omega.slope(i) < &one && &one < omega.slope(j);
            if omega.len() < 2 {
                failures.push(Failure::TooFewSlopes { count: omega.len() });
            } else if let Some((i, j)) = omega.nc_pair() {
                if !straddles(i, j) {
                    failures.push(Failure::DesignatedPairOrder { i, j });
                }
                if !never_connect(omega.slope(i), omega.slope(j)) {
                    failures.push(Failure::NeverConnect { i, j });
                }
                if failures.is_empty() {
                    witness_pair = Some((i, j));
                }
            } else {
                let pairs: Vec<(usize, usize)> = (0..omega.len())
                    .flat_map(|i| (0..omega.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| straddles(i, j))
                    .collect();
                if pairs.is_empty() {
                    failures.push(Failure::NoStraddlingPair);
                } else {
                    witness_pair = pairs
                        .iter()
                        .copied()
                        .find(|&(i, j)| never_connect(omega.slope(i), omega.slope(j)));
                    if witness_pair.is_none() {
                        failures.extend(pairs.iter().map(|&(i, j)| Failure::NeverConnect { i, j }));
                    }
                }
            }
        }
        Profile::TraceFamily => {
            for slope in [q(3, 1), q(1, 1), q(1, 2)] {
                if !omega.contains(&slope) {
                    failures.push(Failure::MissingSlope { slope });
                }
            }
            let (lo, hi) = (q(1, 3), q(3, 1));
            for s in omega.slopes() {
                if s < &lo || s > &hi {
                    failures.push(Failure::SlopeOutOfRange { slope: s.clone() });
                }
            }
        }
    }
    ValidationReport {
        profile,
        passed: failures.is_empty(),
        witness_pair,
        failures,
    }
}
