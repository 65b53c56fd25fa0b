use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mahavier_core::shift::{Sides, Tail, TruncatedPoint};
use mahavier_core::{Interval, IntervalUnion, Rational, SlopeSet};
use serde::de::DeserializeOwned;

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| e.to_string())
}

/// A comma-separated list taken as one argument value.
#[derive(Clone, Debug)]
pub struct RationalList(pub Vec<Rational>);

pub fn parse_rationals(s: &str) -> std::result::Result<Vec<Rational>, String> {
    s.split(',').map(parse_rational).collect()
}

pub fn parse_list(s: &str) -> std::result::Result<RationalList, String> {
    parse_rationals(s).map(RationalList)
}

/// `a,b` or several parts joined by `;`, e.g. `0,1/4;1/2,1`.
pub fn parse_union(s: &str) -> std::result::Result<IntervalUnion, String> {
    let parts = s
        .split(';')
        .map(|part| {
            let ends = parse_rationals(part)?;
            let [lo, hi] =
                <[Rational; 2]>::try_from(ends).map_err(|_| format!("`{part}` is not `lo,hi`"))?;
            Interval::new(lo, hi).map_err(|e| e.to_string())
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    Ok(IntervalUnion::from_intervals(parts))
}

/// `unknown`, `zero`, `const:c` or `period:p`.
pub fn parse_tail(s: &str) -> std::result::Result<Tail, String> {
    match s.split_once(':') {
        None if s == "unknown" => Ok(Tail::Unknown),
        None if s == "zero" => Ok(Tail::Zero),
        Some(("const", c)) => Ok(Tail::Const(parse_rational(c)?)),
        Some(("period", p)) => p.parse().map(Tail::Periodic).map_err(|e| format!("{e}")),
        _ => Err(format!("unknown tail `{s}`")),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    mahavier_core::export::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn slope_set(inline: Option<&str>, file: Option<&PathBuf>) -> Result<SlopeSet> {
    match (inline, file) {
        (Some(s), None) => Ok(s.parse::<SlopeSet>()?),
        (None, Some(p)) => read_json(p),
        _ => bail!("give exactly one of --slopes or --slopes-file"),
    }
}

pub struct PointArgs<'a> {
    pub file: Option<&'a PathBuf>,
    pub coords: Option<&'a [Rational]>,
    pub tail: &'a Tail,
    pub two_sided: bool,
    pub start: i64,
}

pub fn point(omega: &SlopeSet, a: PointArgs<'_>) -> Result<TruncatedPoint> {
    match (a.file, a.coords) {
        (Some(p), None) => {
            let pt: TruncatedPoint = read_json(p)?;
            pt.ensure_valid(omega)?;
            Ok(pt)
        }
        (None, Some(c)) => {
            let sides = if a.two_sided { Sides::Two } else { Sides::One };
            Ok(TruncatedPoint::from_coords(
                omega,
                sides,
                a.start,
                c.to_vec(),
                a.tail.clone(),
            )?)
        }
        _ => bail!("give exactly one of --point or --coords"),
    }
}

/// Write to `path`, or to stdout when absent.
pub fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
