mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mahavier_core::exponent::never_connect;
use mahavier_core::export::{render_fan_svg, series_csv, to_json};
use mahavier_core::relation::{
    diagonal_in_power, interval_image, iterate_image_capped, Direction, DEFAULT_INTERVAL_CAP,
};
use mahavier_core::shadowing::{
    constraint_window, diagonal_pseudo_orbit, growing_images_series, shadow_feasible,
    staircase_pseudo_orbit, verify_pseudo_orbit, PseudoOrbit, ShadowOutcome, DEFAULT_BRANCH_CAP,
};
use mahavier_core::shift::{endpoint_approx, periodic_approximant, Tail, DEFAULT_ARC_CAP};
use mahavier_core::slopes::{validate_slope_set, Profile};
use mahavier_core::tracer::{trace_specification, verify_trace, Specification, TraceCertificate};
use mahavier_core::{IntervalUnion, Rational, SlopeSet};

use input::{
    emit, parse_list, parse_rational, parse_tail, parse_union, read_json, PointArgs, RationalList,
};

#[derive(Parser)]
#[command(
    name = "mahavier",
    version,
    about = "Exact dynamics of line relations on [0,1]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SlopeArgs {
    /// Comma-separated slopes, e.g. `1/2,3,1`.
    #[arg(long)]
    slopes: Option<String>,
    /// JSON slope set `{"slopes": [...], "nc_pair": [i, j]}`.
    #[arg(long)]
    slopes_file: Option<PathBuf>,
}

impl SlopeArgs {
    fn load(&self) -> Result<SlopeSet> {
        if self.slopes.is_some() == self.slopes_file.is_some() {
            return Err(usage(anyhow!(
                "give exactly one of --slopes or --slopes-file"
            )));
        }
        input::slope_set(self.slopes.as_deref(), self.slopes_file.as_ref())
    }
}

#[derive(Args)]
struct PointInput {
    /// JSON point file.
    #[arg(long)]
    point: Option<PathBuf>,
    /// Inline coordinates, e.g. `1/2,1,1/3`.
    #[arg(long, value_parser = parse_list)]
    coords: Option<RationalList>,
    /// Tail for inline coordinates: unknown, zero, const:c or period:p.
    #[arg(long, value_parser = parse_tail, default_value = "unknown")]
    tail: Tail,
    #[arg(long)]
    two_sided: bool,
    /// Index of the first inline coordinate.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    start: i64,
}

#[derive(Args)]
struct PseudoOrbitSource {
    /// Staircase of constant points climbing from 1/2 to 1 in this many steps.
    #[arg(long)]
    staircase: Option<usize>,
    /// Slopes of a product-one word for the diagonal construction, e.g. `1/2,2`.
    #[arg(long, value_parser = parse_list)]
    word: Option<RationalList>,
    /// Lowest loop value for the diagonal construction.
    #[arg(long, value_parser = parse_rational, default_value = "1/2")]
    a: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1/8")]
    delta: Rational,
    /// JSON pseudo-orbit file.
    #[arg(long)]
    pseudo_orbit: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    LfInducing,
    TraceFamily,
}

#[derive(Subcommand)]
enum Command {
    /// Check a slope set against a profile; exits 2 when it fails.
    Validate {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[arg(long, value_enum, default_value = "lf-inducing")]
        profile: ProfileArg,
    },
    /// One-step forward (or inverse) image of a union of intervals.
    Image {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[arg(long, value_parser = parse_union)]
        interval: IntervalUnion,
        #[arg(long)]
        inverse: bool,
    },
    /// `n`-fold forward image.
    Iterate {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[arg(long, value_parser = parse_union)]
        interval: IntervalUnion,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "MAHAVIER_INTERVAL_CAP", default_value_t = DEFAULT_INTERVAL_CAP)]
        interval_cap: usize,
    },
    /// CSV of Hausdorff distances from `F^n(A)` to `[0,1]`; verdict on stderr.
    HausdorffSeries {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[arg(long, value_parser = parse_union)]
        interval: IntervalUnion,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "MAHAVIER_INTERVAL_CAP", default_value_t = DEFAULT_INTERVAL_CAP)]
        interval_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether no nonzero powers of the two values coincide.
    NcCheck {
        #[arg(value_parser = parse_rational)]
        r: Rational,
        #[arg(value_parser = parse_rational)]
        rho: Rational,
    },
    /// For `m = 1..=n`, whether some `m`-fold slope product equals 1.
    DiagPower {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[arg(long)]
        n: usize,
    },
    /// Trace a specification; prints the certificate as JSON.
    Trace {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a trace certificate against its specification.
    VerifyTrace {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Build and check a pseudo-orbit; prints it as JSON.
    PseudoOrbit {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[command(flatten)]
        source: PseudoOrbitSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a pseudo-orbit can be shadowed; prints the witness or certificate.
    NoShadow {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[command(flatten)]
        source: PseudoOrbitSource,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        /// Last pseudo-orbit index constrained; defaults to the last point.
        #[arg(long)]
        horizon: Option<usize>,
        /// Coordinates searched; defaults to horizon plus the tolerance window.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, env = "MAHAVIER_BRANCH_CAP", default_value_t = DEFAULT_BRANCH_CAP)]
        branch_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG drawing of the fan's arcs at a given depth.
    FanSvg {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_ARC_CAP)]
        arc_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Periodic point within `ε` of a two-sided point.
    Periodic {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[command(flatten)]
        point: PointInput,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
    },
    /// Endpoint of the fan within `ε` of a one-sided point.
    Endpoint {
        #[command(flatten)]
        slopes: SlopeArgs,
        #[command(flatten)]
        point: PointInput,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
    },
}

/// Bad invocation that clap could not catch.
#[derive(Debug)]
struct Usage(anyhow::Error);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: anyhow::Error) -> anyhow::Error {
    anyhow!(Usage(e))
}

/// A command that ran but whose answer is a failed check.
#[derive(Debug)]
struct Rejected(String);

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Rejected {}

fn load_point(omega: &SlopeSet, p: &PointInput) -> Result<mahavier_core::shift::TruncatedPoint> {
    if p.point.is_some() == p.coords.is_some() {
        return Err(usage(anyhow!("give exactly one of --point or --coords")));
    }
    input::point(
        omega,
        PointArgs {
            file: p.point.as_ref(),
            coords: p.coords.as_ref().map(|c| c.0.as_slice()),
            tail: &p.tail,
            two_sided: p.two_sided,
            start: p.start,
        },
    )
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(to_json(v)?)
}

fn pseudo_orbit(omega: &SlopeSet, s: &PseudoOrbitSource) -> Result<PseudoOrbit> {
    match (&s.staircase, &s.word, &s.pseudo_orbit) {
        (Some(n0), None, None) => Ok(staircase_pseudo_orbit(*n0)?),
        (None, Some(word), None) => {
            let idx = word
                .0
                .iter()
                .map(|w| {
                    omega
                        .index_of(w)
                        .ok_or_else(|| usage(anyhow!("slope {w} is not in the set")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(diagonal_pseudo_orbit(omega, &idx, &s.a, &s.delta)?)
        }
        (None, None, Some(p)) => read_json(p),
        _ => Err(usage(anyhow!(
            "give exactly one of --staircase, --word or --pseudo-orbit"
        ))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { slopes, profile } => {
            let omega = slopes.load()?;
            let profile = match profile {
                ProfileArg::LfInducing => Profile::LfInducing,
                ProfileArg::TraceFamily => Profile::TraceFamily,
            };
            let report = validate_slope_set(&omega, profile);
            print!("{}", json(&report)?);
            if !report.passed {
                return Err(Rejected("slope set fails the profile".into()).into());
            }
        }
        Command::Image {
            slopes,
            interval,
            inverse,
        } => {
            let omega = slopes.load()?;
            let dir = if inverse {
                Direction::Inverse
            } else {
                Direction::Forward
            };
            println!("{}", interval_image(&omega, &interval, dir));
        }
        Command::Iterate {
            slopes,
            interval,
            n,
            interval_cap,
        } => {
            let omega = slopes.load()?;
            println!(
                "{}",
                iterate_image_capped(&omega, &interval, n, interval_cap)?
            );
        }
        Command::HausdorffSeries {
            slopes,
            interval,
            n,
            interval_cap,
            out,
        } => {
            let omega = slopes.load()?;
            let series = growing_images_series(&omega, &interval, n, interval_cap)?;
            emit(out.as_ref(), &series_csv(&series.values))?;
            eprintln!("verdict: {}", series.verdict);
        }
        Command::NcCheck { r, rho } => {
            println!("never-connect: {}", never_connect(&r, &rho));
        }
        Command::DiagPower { slopes, n } => {
            let omega = slopes.load()?;
            println!("n,diagonal");
            for m in 1..=n {
                println!("{m},{}", diagonal_in_power(&omega, m));
            }
        }
        Command::Trace {
            slopes,
            spec,
            eps,
            out,
        } => {
            let omega = slopes.load()?;
            let spec: Specification = read_json(&spec)?;
            spec.check_shape()?;
            let (_, cert) = trace_specification(&omega, &spec, &eps)?;
            emit(out.as_ref(), &json(&cert)?)?;
        }
        Command::VerifyTrace { slopes, spec, cert } => {
            let omega = slopes.load()?;
            let spec: Specification = read_json(&spec)?;
            spec.check_shape()?;
            let cert: TraceCertificate = read_json(&cert)?;
            let ok =
                cert.is_consistent(&omega) && verify_trace(&omega, &spec, &cert.point, &cert.eps)?;
            println!("trace verified: {ok}");
            if !ok {
                return Err(Rejected("certificate does not trace the specification".into()).into());
            }
        }
        Command::PseudoOrbit {
            slopes,
            source,
            out,
        } => {
            let omega = slopes.load()?;
            let po = pseudo_orbit(&omega, &source)?;
            let ok = verify_pseudo_orbit(&omega, &po)?;
            emit(out.as_ref(), &json(&po)?)?;
            eprintln!("verified: {ok}");
            if !ok {
                return Err(Rejected(format!("not a {}-pseudo-orbit", po.delta)).into());
            }
        }
        Command::NoShadow {
            slopes,
            source,
            eps,
            horizon,
            depth,
            branch_cap,
            out,
        } => {
            let omega = slopes.load()?;
            let po = pseudo_orbit(&omega, &source)?;
            let horizon = horizon.unwrap_or(po.len().saturating_sub(1));
            let depth = depth.unwrap_or(horizon + constraint_window(&eps).max(1));
            let outcome = shadow_feasible(&omega, &po, &eps, horizon, depth, branch_cap)?;
            match &outcome {
                ShadowOutcome::Shadowed(w) => {
                    emit(out.as_ref(), &json(w)?)?;
                    eprintln!("shadowed: true");
                }
                ShadowOutcome::NotShadowed(c) => {
                    emit(out.as_ref(), &json(c)?)?;
                    eprintln!("shadowed: false ({} branches)", c.branches);
                }
            }
        }
        Command::FanSvg {
            slopes,
            depth,
            arc_cap,
            out,
        } => {
            let omega = slopes.load()?;
            emit(out.as_ref(), &render_fan_svg(&omega, depth, arc_cap)?)?;
        }
        Command::Periodic { slopes, point, eps } => {
            let omega = slopes.load()?;
            let p = load_point(&omega, &point)?;
            print!("{}", json(&periodic_approximant(&omega, &p, &eps)?)?);
        }
        Command::Endpoint { slopes, point, eps } => {
            let omega = slopes.load()?;
            let p = load_point(&omega, &point)?;
            print!("{}", json(&endpoint_approx(&omega, &p, &eps)?)?);
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 1;
    }
    match e.downcast_ref::<mahavier_core::Error>() {
        Some(err) if err.is_inconclusive() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
