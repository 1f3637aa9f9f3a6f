//! Command-line front end.
//!
//! Each subcommand reads one JSON document (a path or stdin), calls into the
//! library and writes one JSON document. Exit codes: 0 on success, 2 on a
//! domain error (with `{"error": {"kind", "detail"}}` on stdout), 1 on
//! malformed input or I/O failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::cochar::{coinvariants, sp, verify_surjectivity, LatticeAction};
use crate::disc::{disc, disc_divided};
use crate::error::{Error, Result};
use crate::json::{
    self, check_version, coeffs_value, coinv_value, error_value, factorization_value,
    newton_polygon_value, rational_value, scalar_value, series_value, similitude_value, sp_value,
    ActionDoc, FactorDoc, FormDoc, LiftDoc, RingJson, SeriesDoc, SimilarDoc,
};
use crate::reduction::{are_similar, lift_similitude, reduce_to_standard};
use crate::ring::RingSpec;
use crate::selftest;

#[derive(Debug, Parser)]
#[command(
    name = "hermloc",
    version,
    about = "Hermitian forms over ramified quadratic extensions, Teichmuller series and cocharacter coinvariants"
)]
pub struct Cli {
    /// Print a one-line human-readable summary to stderr.
    #[arg(long, global = true)]
    pub summary: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Io {
    /// Input JSON file; stdin when omitted or `-`.
    pub input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RingOpts {
    /// `q2i`, `q2sqrt2` or `qp-sqrt-p:<p>`, for documents without a `ring`.
    #[arg(long)]
    pub ring_preset: Option<String>,
    /// Overrides the ring precision `N`.
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a form document against the structural constraints.
    Validate {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        ring: RingOpts,
    },
    /// Discriminant, divided discriminant (odd rank) and non-degeneracy.
    Disc {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        ring: RingOpts,
    },
    /// Similitude from the standard form onto the given form.
    Reduce {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        ring: RingOpts,
    },
    /// Lift a low-precision similitude to the form's precision.
    Lift {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        ring: RingOpts,
    },
    /// Decide whether two forms are similar, with a witness.
    Similar {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        ring: RingOpts,
    },
    /// Detectors and Weierstrass preparation for a Teichmuller series.
    Series {
        #[command(flatten)]
        io: Io,
        /// Skip Weierstrass preparation (non-primitive input is then fine).
        #[arg(long)]
        detect_only: bool,
    },
    /// Newton polygon and linear factors of a monic pi-polynomial.
    Factor {
        #[command(flatten)]
        io: Io,
    },
    /// Coinvariants of a lattice action and the specialization of `mu`.
    CocharSp {
        #[command(flatten)]
        io: Io,
        /// Also run the surjectivity check with this many random samples.
        #[arg(long)]
        verify: Option<usize>,
    },
    /// Run the acceptance suite and print one line per criterion.
    Selftest {
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace the divided discriminant by the undivided one; criterion 1
        /// must then fail.
        #[arg(long)]
        negative_control: bool,
    },
}

enum Failure {
    Domain(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Domain(e)
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_input(io: &Io) -> std::result::Result<String, Failure> {
    match &io.input {
        Some(p) if p.as_os_str() != "-" => Ok(fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn resolve_ring(doc: Option<&RingJson>, opts: &RingOpts) -> Result<RingSpec> {
    match (doc, &opts.ring_preset) {
        (Some(_), Some(_)) => Err(Error::Input(
            "ring given both in the document and by --ring-preset".into(),
        )),
        (Some(r), None) => {
            let mut r = r.clone();
            if opts.precision.is_some() {
                r.n = opts.precision;
            }
            r.to_ring()
        }
        (None, Some(name)) => RingSpec::preset(name, opts.precision),
        (None, None) => Err(Error::Input(
            "no ring: add `ring` or pass --ring-preset".into(),
        )),
    }
}

fn form_input(text: &str, opts: &RingOpts) -> Result<crate::form::HermForm> {
    let doc: FormDoc = json::parse(text)?;
    check_version(doc.v)?;
    let ring = resolve_ring(doc.ring.as_ref(), opts)?;
    json::FormBody { a: doc.a, b: doc.b }.to_form(&ring)
}

/// A JSON result and a one-line summary.
type Output = (Value, String);

fn validate(text: &str, opts: &RingOpts) -> Result<Output> {
    let f = form_input(text, opts)?;
    let v = json!({
        "v": json::SCHEMA_VERSION,
        "valid": true,
        "rank": f.rank(),
        "ring": RingJson::from_ring(f.ring()),
    });
    Ok((v, format!("valid form of rank {}", f.rank())))
}

fn disc_cmd(text: &str, opts: &RingOpts) -> Result<Output> {
    let f = form_input(text, opts)?;
    let d = disc(&f);
    let mut v = json!({
        "v": json::SCHEMA_VERSION,
        "rank": f.rank(),
        "disc": scalar_value(&d.value),
        "precision": d.precision,
    });
    let nondegenerate = if f.rank() % 2 == 1 {
        let dd = disc_divided(&f)?;
        v["disc_divided"] = scalar_value(&dd.value);
        v["divided_precision"] = json!(dd.precision);
        dd.is_unit()
    } else {
        d.is_unit()
    };
    v["nondegenerate"] = json!(nondegenerate);
    Ok((
        v,
        format!("disc = {}, nondegenerate = {nondegenerate}", d.value),
    ))
}

fn reduce(text: &str, opts: &RingOpts) -> Result<Output> {
    let f = form_input(text, opts)?;
    let s = reduce_to_standard(&f)?;
    let v = json!({
        "v": json::SCHEMA_VERSION,
        "rank": f.rank(),
        "similitude": similitude_value(&s),
    });
    Ok((
        v,
        format!(
            "rank {} form is similar to the standard form, gamma2 = {}",
            f.rank(),
            s.gamma2
        ),
    ))
}

fn lift(text: &str, opts: &RingOpts) -> Result<Output> {
    let doc: LiftDoc = json::parse(text)?;
    check_version(doc.v)?;
    let ring = resolve_ring(doc.ring.as_ref(), opts)?;
    let f = json::FormBody { a: doc.a, b: doc.b }.to_form(&ring)?;
    let low_n = doc.similitude.precision.unwrap_or(ring.precision());
    if low_n == 0 || low_n > ring.precision() {
        return Err(Error::Input(format!(
            "similitude precision {low_n} must lie in 1..={}",
            ring.precision()
        )));
    }
    let low = ring.change_precision(low_n)?;
    let s_low = doc.similitude.to_similitude(&low)?;
    let s = lift_similitude(&f, &s_low)?;
    let v = json!({
        "v": json::SCHEMA_VERSION,
        "similitude": similitude_value(&s),
    });
    Ok((
        v,
        format!("lifted from precision {low_n} to {}", ring.precision()),
    ))
}

fn similar(text: &str, opts: &RingOpts) -> Result<Output> {
    let doc: SimilarDoc = json::parse(text)?;
    check_version(doc.v)?;
    let ring = resolve_ring(doc.ring.as_ref(), opts)?;
    let f1 = doc.f1.to_form(&ring)?;
    let f2 = doc.f2.to_form(&ring)?;
    let s = are_similar(&f1, &f2)?;
    let v = json!({
        "v": json::SCHEMA_VERSION,
        "similar": s.is_some(),
        "similitude": s.as_ref().map(similitude_value),
    });
    Ok((v, format!("similar = {}", s.is_some())))
}

fn series(text: &str, detect_only: bool) -> Result<Output> {
    let doc: SeriesDoc = json::parse(text)?;
    let (ring, a) = doc.to_series()?;
    let degree = ring.is_primitive(&a);
    let mut v = json!({
        "v": json::SCHEMA_VERSION,
        "series": series_value(&ring, &a),
        "primitive_degree": degree,
        "distinguished_deg1": ring.is_distinguished_deg1(&a),
        "crystalline": ring.in_crystalline_ideal(&a),
        "valuations": a.coeffs.iter()
            .map(|c| ring.oc.valuation(c).map(|r| rational_value(&r)))
            .collect::<Vec<_>>(),
    });
    if !detect_only {
        let w = ring.weierstrass_prep(&a)?;
        v["weierstrass"] = json!({
            "unit": coeffs_value(&ring.oc, &w.unit.coeffs),
            "poly": coeffs_value(&ring.oc, &w.poly.coeffs),
            "iterations": w.iterations,
        });
    }
    let summary = match degree {
        Some(d) => format!("primitive of degree {d}"),
        None => "not primitive".to_string(),
    };
    Ok((v, summary))
}

fn factor(text: &str) -> Result<Output> {
    let doc: FactorDoc = json::parse(text)?;
    let (ring, p) = doc.to_poly()?;
    let np = ring.newton_polygon(&p)?;
    let f = ring.factor_linear(&p)?;
    let v = json!({
        "v": json::SCHEMA_VERSION,
        "newton_polygon": newton_polygon_value(&np),
        "factorization": factorization_value(&ring, &f),
    });
    let summary = format!(
        "{} linear factor(s), complete = {}",
        f.roots.iter().map(|(_, m)| m).sum::<usize>() + f.pi_power,
        f.complete
    );
    Ok((v, summary))
}

fn cochar_sp(text: &str, verify: Option<usize>) -> Result<Output> {
    let doc: ActionDoc = json::parse(text)?;
    check_version(doc.v)?;
    let act = LatticeAction::new(doc.rank, doc.generators()?)?;
    let c = coinvariants(&act);
    let mut v = json!({
        "v": json::SCHEMA_VERSION,
        "coinvariants": coinv_value(&c),
    });
    if let Some(mu) = doc.mu()? {
        v["sp"] = sp_value(&sp(&act, &mu)?);
    }
    if let Some(samples) = verify {
        let r = verify_surjectivity(&act, samples);
        v["surjectivity"] = json!({
            "ok": r.ok(),
            "torsion_classes": json::bigint_value(&r.torsion_classes),
            "torsion_classes_hit": r.torsion_classes_hit,
            "free_basis_hit": r.free_basis_hit,
            "radius": r.radius,
            "samples": r.samples,
            "coinvariance_failures": r.coinvariance_failures,
        });
    }
    let torsion: Vec<String> = c.torsion.iter().map(|d| format!("Z/{d}")).collect();
    Ok((
        v,
        format!("coinvariants Z^{} + [{}]", c.free_rank, torsion.join(", ")),
    ))
}

fn dispatch(cmd: &Command) -> std::result::Result<(Value, String, &Option<PathBuf>), Failure> {
    let (out, io) = match cmd {
        Command::Validate { io, ring } => (validate(&read_input(io)?, ring)?, io),
        Command::Disc { io, ring } => (disc_cmd(&read_input(io)?, ring)?, io),
        Command::Reduce { io, ring } => (reduce(&read_input(io)?, ring)?, io),
        Command::Lift { io, ring } => (lift(&read_input(io)?, ring)?, io),
        Command::Similar { io, ring } => (similar(&read_input(io)?, ring)?, io),
        Command::Series { io, detect_only } => (series(&read_input(io)?, *detect_only)?, io),
        Command::Factor { io } => (factor(&read_input(io)?)?, io),
        Command::CocharSp { io, verify } => (cochar_sp(&read_input(io)?, *verify)?, io),
        Command::Selftest { .. } => unreachable!("handled by run"),
    };
    Ok((out.0, out.1, &io.output))
}

fn emit_error(kind: &str, detail: &str) {
    let doc = json!({"error": {"kind": kind, "detail": detail}});
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("serializable")
    );
}

/// Runs one command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    if let Command::Selftest {
        output,
        seed,
        negative_control,
    } = &cli.command
    {
        let cfg = selftest::Config {
            seed: *seed,
            theta_division: !negative_control,
        };
        let report = selftest::run(&cfg);
        if let Err(e) = write_output(output, &report.render()) {
            eprintln!("hermloc: {e}");
            return 1;
        }
        return if report.passed() { 0 } else { 1 };
    }
    match dispatch(&cli.command) {
        Ok((value, summary, output)) => {
            let text = serde_json::to_string_pretty(&value).expect("serializable") + "\n";
            if let Err(e) = write_output(output, &text) {
                eprintln!("hermloc: {e}");
                return 1;
            }
            if cli.summary {
                eprintln!("{summary}");
            }
            0
        }
        Err(Failure::Domain(e)) => {
            let doc = error_value(&e);
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
            2
        }
        Err(Failure::Input(msg)) => {
            emit_error("Input", &msg);
            eprintln!("hermloc: {msg}");
            1
        }
    }
}

/// Parses `std::env::args` and runs.
pub fn main_exit_code() -> i32 {
    run(&Cli::parse())
}
