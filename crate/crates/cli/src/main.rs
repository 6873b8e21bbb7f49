use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use torharm::coeffs::build_table;
use torharm::expansions::{expand_harmonic, truncation_estimate_capped, DEFAULT_TERM_CAP};
use torharm::greens::{compare, GreenLimits, PointPair};
use torharm::gridfile::write_grid;
use torharm::torus::{GridSpec, MapKind, TorusGeometry, TorusSolution};
use torharm::{to_toroidal, CartesianPoint, Error, EvalResult, Family, HarmonicSpec, Kind, Parity};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERIC: u8 = 2;

/// Green's-function results deviating more than this from `1/d` exit with 2.
const GREEN_AGREEMENT: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "torharm", version, about = "Toroidal and spherical harmonics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one solid toroidal harmonic at a point.
    Eval(EvalArgs),
    /// Write the coefficient table for one azimuthal order as JSON.
    Coeffs(CoeffArgs),
    /// Compare the three Green's function expansions with 1/|p1 - p2|.
    Green(GreenArgs),
    /// Potential or error map of a charged conducting torus.
    TorusMap(TorusArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Standard,
    #[value(alias = "alternate")]
    Alt,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ring,
    Axial,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Cos,
    Sin,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpandArg {
    Spherical,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhatArg {
    Error,
    PotentialToroidal,
    PotentialSpherical,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum, default_value = "standard")]
    family: FamilyArg,
    #[arg(long, value_enum, default_value = "ring")]
    kind: KindArg,
    #[arg(long, value_enum, default_value = "cos")]
    parity: ParityArg,
    /// Toroidal order.
    #[arg(short = 'n', long = "n", default_value_t = 0)]
    n: u32,
    /// Azimuthal order.
    #[arg(short = 'm', long = "m", default_value_t = 0)]
    m: u32,
    /// Cartesian point `x,y,z`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    point: [f64; 3],
    /// Focal ring radius.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Sum the harmonic as a spherical-harmonic series instead.
    #[arg(long, value_enum)]
    expand: Option<ExpandArg>,
    /// Spherical degree cutoff for `--expand`; estimated when omitted.
    #[arg(long)]
    kmax: Option<u32>,
}

#[derive(Args)]
struct CoeffArgs {
    #[arg(short = 'm', long = "m")]
    m: u32,
    #[arg(long)]
    n_max: u32,
    #[arg(long)]
    k_max: u32,
    /// Write `c, s` instead of `C, S`.
    #[arg(long)]
    normalized: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GreenArgs {
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    p1: [f64; 3],
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    p2: [f64; 3],
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = GreenLimits::default().n_max)]
    nmax: u32,
    #[arg(long, default_value_t = GreenLimits::default().m_max)]
    mmax: u32,
}

#[derive(Args)]
struct TorusArgs {
    /// Major radius.
    #[arg(long = "R0", default_value_t = 1.0)]
    major: f64,
    /// Minor radius.
    #[arg(long = "r0", default_value_t = 0.5)]
    minor: f64,
    /// Conductor potential.
    #[arg(long = "V0", default_value_t = 1.0)]
    v0: f64,
    /// Sample counts `n_rho,n_z`.
    #[arg(long, value_parser = parse_pair_usize, default_value = "200,200")]
    grid: (usize, usize),
    /// Half-plane extent `rho_max,z_max`; `z` spans `[-z_max, z_max]`.
    #[arg(long, value_parser = parse_pair_f64, default_value = "2,2")]
    extent: (f64, f64),
    #[arg(long, default_value_t = 120)]
    nmax: u32,
    #[arg(long, default_value_t = 170)]
    kmax: u32,
    #[arg(long, value_enum, default_value = "error")]
    what: WhatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_floats(s: &str, count: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != count {
        return Err(format!("expected {count} comma-separated numbers, got {s:?}"));
    }
    parts
        .iter()
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| format!("not a number: {p:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("not finite: {p:?}"))
            }
        })
        .collect()
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v = parse_floats(s, 3)?;
    Ok([v[0], v[1], v[2]])
}

fn parse_pair_f64(s: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_pair_usize(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.trim().parse().map_err(|_| format!("not a count: {a:?}"))?;
            let b = b.trim().parse().map_err(|_| format!("not a count: {b:?}"))?;
            Ok((a, b))
        }
        _ => Err(format!("expected n_rho,n_z, got {s:?}")),
    }
}

/// A failed command: message for standard error plus exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConverged(_) | Error::QuadratureFailure { .. } | Error::BranchBoundary => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Term cap for estimated truncations, overridable through the environment.
fn term_cap() -> Result<u32, Failure> {
    match std::env::var("TORHARM_MAX_TERMS") {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| usage(format!("TORHARM_MAX_TERMS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_TERM_CAP),
    }
}

fn flag(r: &EvalResult) -> &'static str {
    if r.converged {
        "OK"
    } else {
        "SLOW"
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn eval(args: &EvalArgs) -> Result<u8, Failure> {
    if !(args.a > 0.0 && args.a.is_finite()) {
        return Err(usage("--a must be positive"));
    }
    let spec = HarmonicSpec::new(
        match args.family {
            FamilyArg::Standard => Family::Standard,
            FamilyArg::Alt => Family::Alternate,
        },
        match args.kind {
            KindArg::Ring => Kind::Ring,
            KindArg::Axial => Kind::Axial,
        },
        match args.parity {
            ParityArg::Cos => Parity::Cos,
            ParityArg::Sin => Parity::Sin,
        },
        args.n,
        args.m,
    );
    let [x, y, z] = args.point;
    let p = CartesianPoint::new(x, y, z);
    let result = match args.expand {
        Some(ExpandArg::Spherical) => {
            if spec.kind == Kind::Axial {
                return Err(usage(Error::NoSphericalExpansion.to_string()));
            }
            let k_max = match args.kmax {
                Some(k) => k,
                None => {
                    let xi = (p.r() / args.a).ln().abs();
                    truncation_estimate_capped(xi, spec.n, spec.m, args.tol, term_cap()?).k_max
                }
            };
            expand_harmonic(&spec, &p, args.a, k_max, args.tol)?
        }
        None => {
            let t = to_toroidal(&p, args.a)?;
            torharm::special::harmonic_eval(&spec, &t, args.a, args.tol)?
        }
    };
    println!(
        "{:.16e} {:.3e} {} {}",
        result.value,
        result.est_error,
        result.terms_used,
        flag(&result)
    );
    Ok(if result.converged { 0 } else { EXIT_NUMERIC })
}

fn coeffs(args: &CoeffArgs) -> Result<u8, Failure> {
    let table = build_table(args.m, args.n_max, args.k_max)?;
    let json = if args.normalized {
        table.to_json_normalized()
    } else {
        table.to_json()
    }
    .map_err(|e| Failure {
        code: EXIT_NUMERIC,
        message: e.to_string(),
    })?;
    emit(args.out.as_ref(), &format!("{json}\n"))?;
    Ok(0)
}

fn green(args: &GreenArgs) -> Result<u8, Failure> {
    if !(args.a > 0.0 && args.a.is_finite()) {
        return Err(usage("--a must be positive"));
    }
    let point = |v: [f64; 3]| CartesianPoint::new(v[0], v[1], v[2]);
    let pp = PointPair::new(point(args.p1), point(args.p2), args.a);
    let limits = GreenLimits {
        n_max: args.nmax,
        m_max: args.mmax,
        ..GreenLimits::default()
    };
    let c = compare(&pp, &limits)?;
    let mut text = format!("direct {:.16e}\n", c.direct);
    // expansions that do not apply to the geometry are reported but left
    // out of the deviation
    let mut dev: Option<f64> = None;
    for (name, r) in [
        ("spherical", &c.spherical),
        ("toroidal", &c.toroidal),
        ("cylindrical", &c.cylindrical),
    ] {
        match r {
            Ok(v) => {
                text.push_str(&format!(
                    "{name} {:.16e} {:.3e} {} {}\n",
                    v.value,
                    v.est_error,
                    v.terms_used,
                    flag(v)
                ));
                let d = ((v.value - c.direct) / c.direct).abs();
                dev = Some(dev.map_or(d, |x| x.max(d)));
            }
            Err(e) => text.push_str(&format!("{name} NaN inf 0 SING # {e}\n")),
        }
    }
    let dev = dev.unwrap_or(f64::INFINITY);
    text.push_str(&format!("max_dev {dev:.3e}\n"));
    emit(None, &text)?;
    Ok(if dev > GREEN_AGREEMENT { EXIT_NUMERIC } else { 0 })
}

fn torus_map(args: &TorusArgs) -> Result<u8, Failure> {
    let geometry = TorusGeometry::new(args.major, args.minor)?;
    let solution = TorusSolution::new(geometry, args.v0, args.nmax, args.kmax)?;
    let spec = GridSpec::half_plane(args.extent.0, args.extent.1, args.grid.0, args.grid.1);
    let what = match args.what {
        WhatArg::Error => MapKind::Error,
        WhatArg::PotentialToroidal => MapKind::PotentialToroidal,
        WhatArg::PotentialSpherical => MapKind::PotentialSpherical,
    };
    let grid = solution.map(&spec, what, Default::default())?;
    emit(args.out.as_ref(), &write_grid(&grid))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Coeffs(a) => coeffs(a),
        Command::Green(a) => green(a),
        Command::TorusMap(a) => torus_map(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("torharm: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
