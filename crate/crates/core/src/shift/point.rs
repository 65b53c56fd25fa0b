use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::slopes::SlopeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sides {
    /// Sequences indexed from 1.
    One,
    /// Sequences indexed by all integers.
    Two,
}

/// What the point does outside its explicit window.
///
/// For two-sided points the same rule applies on both ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Any valid continuation; metric answers become intervals.
    Unknown,
    /// Constant `c` beyond the window. Needs slope 1 unless `c = 0`.
    Const(Rational),
    /// Decays toward 0: rightward along the smallest slope, leftward by
    /// dividing by the largest slope.
    Zero,
    /// `x_{start+k} = coords[k mod p]` for every index.
    Periodic(usize),
}

impl Serialize for Tail {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        enum Tagged<'a> {
            #[serde(rename = "const")]
            Const(&'a Rational),
            #[serde(rename = "period")]
            Period(usize),
        }
        match self {
            Tail::Unknown => s.serialize_str("unknown"),
            Tail::Zero => s.serialize_str("zero"),
            Tail::Const(c) => Tagged::Const(c).serialize(s),
            Tail::Periodic(p) => Tagged::Period(*p).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Tail {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Word(String),
            Tagged(Tagged),
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        enum Tagged {
            #[serde(rename = "const")]
            Const(Rational),
            #[serde(rename = "period")]
            Period(usize),
        }
        match Repr::deserialize(d)? {
            Repr::Word(w) if w == "unknown" => Ok(Tail::Unknown),
            Repr::Word(w) if w == "zero" => Ok(Tail::Zero),
            Repr::Word(w) => Err(serde::de::Error::custom(format!("unknown tail `{w}`"))),
            Repr::Tagged(Tagged::Const(c)) => Ok(Tail::Const(c)),
            Repr::Tagged(Tagged::Period(p)) => Ok(Tail::Periodic(p)),
        }
    }
}

/// A finite window of a point in a one- or two-sided sequence space,
/// with the slope indices linking consecutive coordinates.
///
/// `word[k]` is the 0-based slope index with `coords[k+1] = ω · coords[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncatedPoint {
    pub start: i64,
    #[serde(default = "default_sides")]
    pub sides: Sides,
    pub coords: Vec<Rational>,
    pub tail: Tail,
    #[serde(default)]
    pub word: Vec<usize>,
}

fn default_sides() -> Sides {
    Sides::One
}

/// Result of [`validate_point`]: `first_failure` is the 0-based position in
/// `coords` of the first coordinate that breaks validity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCheck {
    pub valid: bool,
    pub first_failure: Option<usize>,
    pub reason: Option<String>,
}

impl PointCheck {
    fn ok() -> Self {
        PointCheck {
            valid: true,
            first_failure: None,
            reason: None,
        }
    }

    fn fail(at: usize, reason: impl Into<String>) -> Self {
        PointCheck {
            valid: false,
            first_failure: Some(at),
            reason: Some(reason.into()),
        }
    }
}

/// Smallest slope index linking `x` to `y`, if any.
pub fn link_index(omega: &SlopeSet, x: &Rational, y: &Rational) -> Option<usize> {
    omega.slopes().iter().position(|w| &(w * x) == y)
}

impl TruncatedPoint {
    /// Build a point from coordinates, inferring the word. Fails if invalid.
    pub fn from_coords(
        omega: &SlopeSet,
        sides: Sides,
        start: i64,
        coords: Vec<Rational>,
        tail: Tail,
    ) -> Result<Self> {
        let word = infer_word(omega, &coords)?;
        let p = TruncatedPoint {
            start,
            sides,
            coords,
            tail,
            word,
        };
        p.ensure_valid(omega)?;
        Ok(p)
    }

    /// One-sided point starting at index 1.
    pub fn one_sided(omega: &SlopeSet, coords: Vec<Rational>, tail: Tail) -> Result<Self> {
        Self::from_coords(omega, Sides::One, 1, coords, tail)
    }

    /// Point generated from `x` by following `word`.
    pub fn from_word(
        omega: &SlopeSet,
        sides: Sides,
        start: i64,
        x: Rational,
        word: Vec<usize>,
        tail: Tail,
    ) -> Result<Self> {
        omega.check_word(&word)?;
        let mut coords = Vec::with_capacity(word.len() + 1);
        coords.push(x);
        for &j in &word {
            let next = coords.last().unwrap() * omega.slope(j);
            coords.push(next);
        }
        let p = TruncatedPoint {
            start,
            sides,
            coords,
            tail,
            word,
        };
        p.ensure_valid(omega)?;
        Ok(p)
    }

    /// The constant sequence `c̄` (one-sided, window of length 1).
    pub fn constant(c: Rational) -> Self {
        TruncatedPoint {
            start: 1,
            sides: Sides::One,
            coords: vec![c.clone()],
            tail: Tail::Const(c),
            word: Vec::new(),
        }
    }

    pub fn end(&self) -> i64 {
        self.start + self.coords.len() as i64 - 1
    }

    pub fn covers(&self, i: i64) -> bool {
        self.start <= i && i <= self.end()
    }

    pub fn first(&self) -> &Rational {
        &self.coords[0]
    }

    pub fn last(&self) -> &Rational {
        self.coords.last().expect("non-empty point")
    }

    /// Coordinate at index `i`, following the tail outside the window.
    /// `None` when the tail is unknown there, or for one-sided indices below the start.
    pub fn value_at(&self, omega: &SlopeSet, i: i64) -> Option<Rational> {
        if self.covers(i) {
            return Some(self.coords[(i - self.start) as usize].clone());
        }
        if i < self.start && self.sides == Sides::One {
            return None;
        }
        match &self.tail {
            Tail::Unknown => None,
            Tail::Const(c) => Some(c.clone()),
            Tail::Periodic(p) => {
                let k = (i - self.start).rem_euclid(*p as i64) as usize;
                Some(self.coords[k].clone())
            }
            Tail::Zero => {
                if i > self.end() {
                    let k = (i - self.end()) as i32;
                    Some(self.last() * omega.min_slope().pow(k))
                } else {
                    let k = (self.start - i) as i32;
                    Some(self.first() / omega.max_slope().pow(k))
                }
            }
        }
    }

    pub fn ensure_valid(&self, omega: &SlopeSet) -> Result<()> {
        let check = validate_point(omega, self);
        if check.valid {
            Ok(())
        } else {
            Err(Error::InvalidPoint(format!(
                "coordinate position {}: {}",
                check.first_failure.unwrap_or(0),
                check.reason.unwrap_or_default()
            )))
        }
    }
}

fn infer_word(omega: &SlopeSet, coords: &[Rational]) -> Result<Vec<usize>> {
    coords
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            link_index(omega, &w[0], &w[1]).ok_or_else(|| {
                Error::InvalidPoint(format!(
                    "coordinate position {}: {} does not follow {} under any slope",
                    k + 1,
                    w[1],
                    w[0]
                ))
            })
        })
        .collect()
}

/// Check that every coordinate is in `[0,1]`, consecutive coordinates lie on
/// a slope line (the one named by the word, when a word is present), and the
/// tail rule is admissible.
pub fn validate_point(omega: &SlopeSet, p: &TruncatedPoint) -> PointCheck {
    if p.coords.is_empty() {
        return PointCheck::fail(0, "no coordinates");
    }
    if p.sides == Sides::One && p.start < 1 {
        return PointCheck::fail(0, "one-sided points start at index 1 or later");
    }
    if !p.word.is_empty() && p.word.len() != p.coords.len() - 1 {
        return PointCheck::fail(0, "word length does not match coordinate count");
    }
    for (k, x) in p.coords.iter().enumerate() {
        if !x.in_unit() {
            return PointCheck::fail(k, format!("{x} outside [0, 1]"));
        }
        if k == 0 {
            continue;
        }
        let prev = &p.coords[k - 1];
        let ok = match p.word.get(k - 1) {
            Some(&j) => j < omega.len() && &(omega.slope(j) * prev) == x,
            None => link_index(omega, prev, x).is_some(),
        };
        if !ok {
            return PointCheck::fail(k, format!("{x} does not follow {prev}"));
        }
    }
    let last = p.coords.len() - 1;
    match &p.tail {
        Tail::Unknown => {}
        Tail::Const(c) => {
            if p.last() != c || (p.sides == Sides::Two && p.first() != c) {
                return PointCheck::fail(last, format!("constant tail {c} does not match window"));
            }
            if !c.is_zero() && !omega.has_identity() {
                return PointCheck::fail(last, "constant tail needs slope 1");
            }
        }
        Tail::Zero => {
            if !p.last().is_zero() && omega.min_slope() >= &Rational::one() {
                return PointCheck::fail(last, "decaying tail needs a slope below 1");
            }
            if p.sides == Sides::Two
                && !p.first().is_zero()
                && omega.max_slope() <= &Rational::one()
            {
                return PointCheck::fail(0, "decaying left tail needs a slope above 1");
            }
        }
        Tail::Periodic(period) => {
            let period = *period;
            if period == 0 || period > p.coords.len() {
                return PointCheck::fail(last, "period must be between 1 and the window length");
            }
            for k in period..p.coords.len() {
                if p.coords[k] != p.coords[k - period] {
                    return PointCheck::fail(k, "window is not periodic");
                }
            }
            if link_index(omega, &p.coords[period - 1], &p.coords[0]).is_none() {
                return PointCheck::fail(
                    period - 1,
                    "periodic wrap-around link is not in the relation",
                );
            }
        }
    }
    PointCheck::ok()
}

/// Apply the shift map once.
///
/// One-sided: drop the first coordinate (extending the window from the tail
/// first if needed). Two-sided, or a one-sided window starting after index 1:
/// move the window one index to the left.
pub fn shift(omega: &SlopeSet, p: &TruncatedPoint) -> Result<TruncatedPoint> {
    if p.sides == Sides::Two || p.start > 1 {
        return Ok(TruncatedPoint {
            start: p.start - 1,
            ..p.clone()
        });
    }
    let mut q = p.clone();
    if q.word.len() + 1 != q.coords.len() {
        q.word = infer_word(omega, &q.coords)?;
    }
    let need = match q.tail {
        Tail::Periodic(period) => period + 1,
        _ => 2,
    };
    while q.coords.len() < need {
        let next = q.value_at(omega, q.end() + 1).ok_or_else(|| {
            Error::InvalidPoint("cannot shift a length-1 point with unknown tail".into())
        })?;
        let j = link_index(omega, q.last(), &next).ok_or_else(|| {
            Error::InvalidPoint("tail continuation is not in the relation".into())
        })?;
        q.coords.push(next);
        q.word.push(j);
    }
    q.coords.remove(0);
    q.word.remove(0);
    Ok(q)
}

/// Apply the shift map `k` times.
pub fn shift_n(omega: &SlopeSet, p: &TruncatedPoint, k: usize) -> Result<TruncatedPoint> {
    let mut q = p.clone();
    for _ in 0..k {
        q = shift(omega, &q)?;
    }
    Ok(q)
}

impl fmt::Display for TruncatedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        let tail = match &self.tail {
            Tail::Unknown => "…?".to_string(),
            Tail::Const(c) => format!("{c}̄"),
            Tail::Zero => "→0".to_string(),
            Tail::Periodic(p) => format!("period {p}"),
        };
        write!(
            f,
            "[{}] ({}) from {} {}",
            parts.join(", "),
            tail,
            self.start,
            match self.sides {
                Sides::One => "one-sided",
                Sides::Two => "two-sided",
            }
        )
    }
}
