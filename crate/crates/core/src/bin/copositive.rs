//! Command-line front end.
//!
//! Exit codes: 0 when the property holds, 1 when it fails, 2 on usage or
//! parse errors, 3 on domain errors (negative parameters, non-copositive
//! input to `invert`, ...).

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use copositive::plot::{c2_region, c2_region_csv, sample_polynomial, samples_csv};
use copositive::{
    default_precision, invert_full, is_base_boundary, is_copositive, phi_big, sample_copositive,
    sample_one, sample_params, Backend, Distribution, Error, ParameterVector, Polynomial, Rational,
    SampleSpec, Scalar,
};

#[derive(Parser)]
#[command(
    name = "copositive",
    version,
    about = "Parametrize, certify and invert monic copositive polynomials"
)]
struct Cli {
    /// Indent JSON output and align tables.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the parametrization at a parameter vector.
    Generate {
        /// Comma-separated list ("1,2/3,0.5") or JSON ({"params": [...]} or [...]).
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        #[arg(long, default_value = "rational")]
        backend: Backend,
    },
    /// Certify copositivity; exit 0 if copositive, 1 if not.
    Check(PolyInput),
    /// Test base-boundary membership; exit 0 iff the polynomial is in it.
    Boundary(PolyInput),
    /// Recover a parameter vector.
    Invert {
        #[command(flatten)]
        input: PolyInput,
        /// Width bound for isolating intervals of irrational roots.
        #[arg(long)]
        precision: Option<String>,
    },
    /// Sample, evaluate and invert; exit 0 iff every round trip succeeds.
    Roundtrip {
        /// Inclusive degree range such as "2..12", or a single degree.
        #[arg(long, default_value = "2..12")]
        degrees: String,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Parameter distribution; see `sample --distribution`.
        #[arg(long, default_value = "lattice:1:10:4")]
        distribution: String,
        #[arg(long, default_value = "rational")]
        backend: Backend,
    },
    /// Emit a seeded corpus as JSON lines.
    Sample(SampleArgs),
    /// Emit CSV for plotting.
    PlotData(PlotArgs),
}

#[derive(Args)]
struct PolyInput {
    /// Polynomial JSON; read from --file or standard input when omitted.
    #[arg(allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, conflicts_with = "poly")]
    file: Option<PathBuf>,
    /// Backend for inputs without a "backend" field.
    #[arg(long)]
    backend: Option<Backend>,
}

#[derive(Args)]
struct SampleArgs {
    /// Full spec as JSON; overrides the other spec flags.
    #[arg(long)]
    spec: Option<String>,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// uniform:LO:HI, exponential:RATE or lattice:LO:HI:DENOMINATOR.
    #[arg(long, default_value = "lattice:0:10:1")]
    distribution: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value = "rational")]
    backend: Backend,
    /// Emit parameter vectors instead of polynomials.
    #[arg(long)]
    params: bool,
}

#[derive(Args)]
struct PlotArgs {
    /// Named set; only "c2-region" is available.
    #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
    set: Option<String>,
    /// Largest t0 on the c2-region grid.
    #[arg(long, default_value = "2")]
    t_max: String,
    /// Grid intervals on each boundary piece.
    #[arg(long, default_value_t = 2)]
    steps: usize,
    /// Polynomial JSON or a bare coefficient array.
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, default_value = "0:1", allow_hyphen_values = true)]
    range: String,
    #[arg(long, default_value_t = 11)]
    samples: usize,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Json(_) | Error::InvalidSpec(_) => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult = Result<u8, Failure>;

enum AnyPolynomial {
    Rational(Polynomial<Rational>),
    Real(Polynomial<f64>),
}

impl AnyPolynomial {
    fn parse(text: &str, fallback: Backend) -> Result<Self, Failure> {
        let value: Value = serde_json::from_str(text.trim()).map_err(Error::from)?;
        let backend = match value.get("backend") {
            Some(b) => serde_json::from_value(b.clone()).map_err(Error::from)?,
            None => fallback,
        };
        Ok(match backend {
            Backend::Rational => AnyPolynomial::Rational(Polynomial::from_json(&value)?),
            Backend::Real => AnyPolynomial::Real(Polynomial::from_json(&value)?),
        })
    }
}

fn read_polynomial(input: &PolyInput) -> Result<AnyPolynomial, Failure> {
    let text = match (&input.poly, &input.file) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    AnyPolynomial::parse(&text, input.backend.unwrap_or(Backend::Rational))
}

struct Output {
    pretty: bool,
    out: io::StdoutLock<'static>,
}

impl Output {
    fn json(&mut self, value: &Value) {
        let text = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        }
        .expect("json serializes");
        self.line(&text);
    }

    fn line(&mut self, text: &str) {
        // A closed pipe is not worth a panic.
        let _ = writeln!(self.out, "{text}");
    }

    fn raw(&mut self, text: &str) {
        let _ = self.out.write_all(text.as_bytes());
    }
}

fn parse_params<S: Scalar>(text: &str) -> Result<ParameterVector<S>, Failure> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let value: Value = serde_json::from_str(trimmed).map_err(Error::from)?;
        Ok(ParameterVector::from_json(&value)?)
    } else {
        Ok(ParameterVector::parse_inline(trimmed)?)
    }
}

fn generate(out: &mut Output, params: &str, backend: Backend) -> CliResult {
    let json = match backend {
        Backend::Rational => phi_big(&parse_params::<Rational>(params)?).to_json(),
        Backend::Real => phi_big(&parse_params::<f64>(params)?).to_json(),
    };
    out.json(&json);
    Ok(0)
}

fn check_with<S: Scalar>(out: &mut Output, f: &Polynomial<S>) -> CliResult {
    let cert = is_copositive(f)?;
    out.json(&cert.to_json(f));
    Ok(if cert.verdict { 0 } else { 1 })
}

fn boundary_with<S: Scalar>(out: &mut Output, f: &Polynomial<S>) -> CliResult {
    let report = is_base_boundary(f)?;
    out.json(&report.to_json(f));
    Ok(if report.in_base_boundary { 0 } else { 1 })
}

fn invert_with<S: Scalar>(
    out: &mut Output,
    f: &Polynomial<S>,
    precision: Option<&str>,
) -> CliResult {
    let precision = match precision {
        Some(text) => {
            let p = S::parse(text).map_err(Error::from)?;
            if !p.is_positive() {
                return Err(usage(format!("precision must be positive, got {text}")));
            }
            p
        }
        None => default_precision(f),
    };
    let report = invert_full(f, &precision)?;
    out.json(&report.to_json());
    Ok(0)
}

fn parse_degrees(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("cannot parse degree range {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let d = num(text)?;
            (d, d)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn parse_distribution(text: &str) -> Result<Distribution, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || usage(format!("cannot parse distribution {text:?}"));
    let float = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let int = |s: &str| s.parse::<i64>().map_err(|_| bad());
    match parts.as_slice() {
        ["uniform", lo, hi] => Ok(Distribution::Uniform {
            lo: float(lo)?,
            hi: float(hi)?,
        }),
        ["exponential", rate] => Ok(Distribution::Exponential { rate: float(rate)? }),
        ["lattice" | "integer_lattice", lo, hi, den] => Ok(Distribution::IntegerLattice {
            lo: int(lo)?,
            hi: int(hi)?,
            denominator: int(den)?,
        }),
        _ => Err(bad()),
    }
}

/// Outcome of one sample in `roundtrip`.
struct Trip {
    recovered: bool,
    reproduced: bool,
    unique: bool,
    error: Option<String>,
}

/// Parameters agree exactly (rational) or to relative `1e-8` (real).
fn close<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            if S::is_exact() {
                x == y
            } else {
                let (x, y) = (x.to_f64(), y.to_f64());
                (x - y).abs() <= 1e-8 * x.abs().max(y.abs()).max(1.0)
            }
        })
}

fn trip<S: Scalar>(spec: &SampleSpec, index: u64) -> Trip {
    let t = sample_one::<S>(spec, index);
    let f = phi_big(&t);
    match invert_full(&f, &default_precision(&f)) {
        Ok(report) => Trip {
            recovered: close(report.params.entries(), t.entries()),
            reproduced: close(phi_big(&report.params).coeffs(), f.coeffs()),
            unique: report.unique,
            error: None,
        },
        Err(e) => Trip {
            recovered: false,
            reproduced: false,
            unique: false,
            error: Some(format!("sample {index} {t}: {e}")),
        },
    }
}

fn roundtrip(
    out: &mut Output,
    degrees: &str,
    count: usize,
    seed: u64,
    distribution: &str,
    backend: Backend,
) -> CliResult {
    let (lo, hi) = parse_degrees(degrees)?;
    let distribution = parse_distribution(distribution)?;
    let mut all_pass = true;
    let mut rows = Vec::new();
    for degree in lo..=hi {
        let spec = SampleSpec {
            degree,
            distribution: distribution.clone(),
            seed,
            count,
        };
        spec.validate()?;
        let trips: Vec<Trip> = (0..count as u64)
            .into_par_iter()
            .map(|i| match backend {
                Backend::Rational => trip::<Rational>(&spec, i),
                Backend::Real => trip::<f64>(&spec, i),
            })
            .collect();
        let recovered = trips.iter().filter(|t| t.recovered).count();
        let reproduced = trips.iter().filter(|t| t.reproduced).count();
        let unique = trips.iter().filter(|t| t.unique).count();
        let errors: Vec<&str> = trips.iter().filter_map(|t| t.error.as_deref()).collect();
        let pass = recovered == count && reproduced == count;
        all_pass &= pass;
        let row = json!({
            "degree": degree,
            "count": count,
            "recovered": recovered,
            "reproduced": reproduced,
            "unique": unique,
            "errors": errors,
            "pass": pass,
        });
        if !out.pretty {
            out.json(&row);
        }
        rows.push(row);
    }
    if out.pretty {
        out.line("degree  count  recovered  reproduced  unique  pass");
        for r in &rows {
            out.line(&format!(
                "{:>6}  {:>5}  {:>9}  {:>10}  {:>6}  {}",
                r["degree"], r["count"], r["recovered"], r["reproduced"], r["unique"], r["pass"]
            ));
            for e in r["errors"].as_array().into_iter().flatten() {
                out.line(&format!("        {}", e.as_str().unwrap_or_default()));
            }
        }
    } else {
        out.json(&json!({ "seed": seed, "backend": backend, "pass": all_pass }));
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn sample(out: &mut Output, args: &SampleArgs) -> CliResult {
    let spec = match &args.spec {
        Some(text) => SampleSpec::from_json(text)?,
        None => SampleSpec {
            degree: args.degree,
            distribution: parse_distribution(&args.distribution)?,
            seed: args.seed,
            count: args.count,
        },
    };
    let lines: Vec<Value> = match (args.backend, args.params) {
        (Backend::Rational, true) => sample_params::<Rational>(&spec)?
            .iter()
            .map(|t| t.to_json())
            .collect(),
        (Backend::Real, true) => sample_params::<f64>(&spec)?
            .iter()
            .map(|t| t.to_json())
            .collect(),
        (Backend::Rational, false) => sample_copositive::<Rational>(&spec)?
            .iter()
            .map(|f| f.to_json())
            .collect(),
        (Backend::Real, false) => sample_copositive::<f64>(&spec)?
            .iter()
            .map(|f| f.to_json())
            .collect(),
    };
    for line in &lines {
        // JSON lines stay one record per line even with --pretty.
        out.line(&serde_json::to_string(line).expect("json serializes"));
    }
    Ok(0)
}

fn plot_poly<S: Scalar>(
    out: &mut Output,
    f: &Polynomial<S>,
    range: &str,
    samples: usize,
) -> CliResult {
    let (lo, hi) = range
        .split_once(':')
        .ok_or_else(|| usage(format!("range must be LO:HI, got {range:?}")))?;
    let lo = S::parse(lo.trim()).map_err(Error::from)?;
    let hi = S::parse(hi.trim()).map_err(Error::from)?;
    if hi < lo {
        return Err(usage(format!("empty range {range:?}")));
    }
    out.raw(&samples_csv(&sample_polynomial(f, &lo, &hi, samples)));
    Ok(0)
}

fn plot_data(out: &mut Output, args: &PlotArgs) -> CliResult {
    if let Some(text) = &args.poly {
        return match AnyPolynomial::parse(text, Backend::Rational)? {
            AnyPolynomial::Rational(f) => plot_poly(out, &f, &args.range, args.samples),
            AnyPolynomial::Real(f) => plot_poly(out, &f, &args.range, args.samples),
        };
    }
    match args.set.as_deref() {
        Some("c2-region") => {
            let t_max = Rational::parse(&args.t_max).map_err(Error::from)?;
            if t_max < Rational::from_i64(0) {
                return Err(usage("--t-max must be nonnegative"));
            }
            out.raw(&c2_region_csv(&c2_region(&t_max, args.steps)));
            Ok(0)
        }
        Some(other) => Err(usage(format!("unknown set {other:?}; expected c2-region"))),
        None => Err(usage("one of --set or --poly is required")),
    }
}

fn run(cli: Cli) -> CliResult {
    let mut out = Output {
        pretty: cli.pretty,
        out: io::stdout().lock(),
    };
    match cli.command {
        Command::Generate { params, backend } => generate(&mut out, &params, backend),
        Command::Check(input) => match read_polynomial(&input)? {
            AnyPolynomial::Rational(f) => check_with(&mut out, &f),
            AnyPolynomial::Real(f) => check_with(&mut out, &f),
        },
        Command::Boundary(input) => match read_polynomial(&input)? {
            AnyPolynomial::Rational(f) => boundary_with(&mut out, &f),
            AnyPolynomial::Real(f) => boundary_with(&mut out, &f),
        },
        Command::Invert { input, precision } => match read_polynomial(&input)? {
            AnyPolynomial::Rational(f) => invert_with(&mut out, &f, precision.as_deref()),
            AnyPolynomial::Real(f) => invert_with(&mut out, &f, precision.as_deref()),
        },
        Command::Roundtrip {
            degrees,
            count,
            seed,
            distribution,
            backend,
        } => roundtrip(&mut out, &degrees, count, seed, &distribution, backend),
        Command::Sample(args) => sample(&mut out, &args),
        Command::PlotData(args) => plot_data(&mut out, &args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
