use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::Rational;
use crate::shift::{Tail, TruncatedPoint};
use crate::slopes::{validate_slope_set, Profile, SlopeSet};
use crate::tracer::descending::{descending_trajectory, DescendingTrajectory};
use crate::tracer::reach::{power_factor_within, reach_horizon};
use crate::tracer::spec::{trace_entries, Specification, TraceCertificate};

/// `(δ, γ) = (ε²/9, ε/18)` for a tolerance already clamped to `(0, 1]`.
pub fn trace_parameters(eps: &Rational) -> (Rational, Rational) {
    (
        eps * eps / Rational::from(9i64),
        eps / Rational::from(18i64),
    )
}

/// Spacing a specification needs before it can be traced at tolerance `ε`.
pub fn required_spacing(eps: &Rational) -> Result<usize> {
    static CACHE: OnceLock<Mutex<HashMap<Rational, usize>>> = OnceLock::new();
    let eps = clamp_eps(eps)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&n) = cache.lock().unwrap().get(&eps) {
        return Ok(n);
    }
    let (delta, gamma) = trace_parameters(&eps);
    let n = reach_horizon(&delta, &gamma)?.certified;
    cache.lock().unwrap().insert(eps, n);
    Ok(n)
}

fn clamp_eps(eps: &Rational) -> Result<Rational> {
    if !eps.is_positive() {
        return Err(Error::Parameter("ε must be positive".into()));
    }
    Ok(eps.clone().min(Rational::one()))
}

/// A path `v_0, …, v_n` with `v_0 ∈ start`, `v_n = target`, each step by 3, 1 or 1/2.
///
/// Picks the cheapest `3^m/2^j` carrying a point of `start` to `target`, then
/// holds, halves `j` times and triples `m` times; halving first keeps every
/// value at most `target`.
fn connector_path(start: &Interval, target: &Rational, n: usize) -> Result<Vec<Rational>> {
    let f =
        power_factor_within(&(target / &start.hi), &(target / &start.lo), n).ok_or_else(|| {
            Error::ConnectorExhausted(format!("{target} not reachable from {start} in {n} steps"))
        })?;
    let (m, j) = (f.threes as usize, f.halves as usize);
    let mut v = target / &f.value;
    let mut path = vec![v.clone(); n - m - j + 1];
    let half = Rational::frac(1, 2);
    let three = Rational::from(3i64);
    for _ in 0..j {
        v = &v * &half;
        path.push(v.clone());
    }
    for _ in 0..m {
        v = &v * &three;
        path.push(v.clone());
    }
    debug_assert_eq!(&v, target);
    Ok(path)
}

/// A value in `within` mapped to `y` by some slope, trying slopes in set order.
fn predecessor(omega: &SlopeSet, y: &Rational, within: &Interval) -> Option<Rational> {
    omega
        .slopes()
        .iter()
        .map(|w| y / w)
        .find(|u| within.contains(u))
}

/// Build `y` with `|x_j(i) − y(i)| <= ε` on every segment.
///
/// Each segment gets a descending interval trajectory. Working backwards
/// from the right end of the last interval, `y` is pulled back inside each
/// trajectory, and consecutive segments are joined by holding the value
/// constant and then following an exact path through the three-line
/// relation. Indices before the first segment repeat its first value, and
/// the tail after the last segment is constant.
pub fn trace_specification(
    omega: &SlopeSet,
    spec: &Specification,
    eps: &Rational,
) -> Result<(TruncatedPoint, TraceCertificate)> {
    let report = validate_slope_set(omega, Profile::TraceFamily);
    if !report.passed {
        let why: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidSlopeSet(why.join("; ")));
    }
    spec.validate(omega)?;
    let eps_c = clamp_eps(eps)?;
    let horizon = required_spacing(&eps_c)?;
    for (j, w) in spec.segments.windows(2).enumerate() {
        let gap = w[1].k - w[0].l;
        if gap < horizon as i64 {
            return Err(Error::Spacing {
                segment: j,
                next: j + 1,
                gap,
                required: horizon,
            });
        }
    }

    let trajectories: Vec<DescendingTrajectory> = spec
        .segments
        .iter()
        .map(|s| descending_trajectory(omega, &s.values, &eps_c))
        .collect::<Result<_>>()?;

    let first = spec.segments[0].k;
    let last = spec.last_index();
    let mut coords: Vec<Option<Rational>> = vec![None; (last - first + 1) as usize];
    let slot = |i: i64| (i - first) as usize;

    let mut y = trajectories
        .last()
        .unwrap()
        .intervals
        .last()
        .unwrap()
        .hi
        .clone();
    for j in (0..spec.segments.len()).rev() {
        let seg = &spec.segments[j];
        let ivs = &trajectories[j].intervals;
        if j + 1 < spec.segments.len() {
            let end = ivs.last().unwrap();
            let next_k = spec.segments[j + 1].k;
            let gap = (next_k - seg.l) as usize;
            let path = connector_path(end, &y, horizon)?;
            let hold = gap - horizon;
            for t in 0..hold {
                coords[slot(seg.l + t as i64)] = Some(path[0].clone());
            }
            for (t, v) in path.iter().enumerate() {
                coords[slot(seg.l + (hold + t) as i64)] = Some(v.clone());
            }
            y = path[0].clone();
        } else {
            coords[slot(seg.l)] = Some(y.clone());
        }
        for i in (seg.k..seg.l).rev() {
            let within = &ivs[(i - seg.k) as usize];
            y = predecessor(omega, &y, within).ok_or_else(|| {
                Error::ConnectorExhausted(format!("no predecessor of {y} in {within} at index {i}"))
            })?;
            coords[slot(i)] = Some(y.clone());
        }
    }

    let mut full: Vec<Rational> = vec![y.clone(); (first - 1) as usize];
    full.extend(
        coords
            .into_iter()
            .map(|c| c.expect("every index is filled")),
    );
    let tail = Tail::Const(full.last().unwrap().clone());
    let point = TruncatedPoint::one_sided(omega, full, tail)?;
    let entries = trace_entries(omega, spec, &point)?;
    let cert = TraceCertificate {
        eps: eps.clone(),
        horizon,
        point: point.clone(),
        entries,
    };
    if !cert.is_consistent(omega) {
        return Err(Error::ConnectorExhausted(format!(
            "traced point misses a segment by {}",
            cert.max_distance()
        )));
    }
    Ok((point, cert))
}
