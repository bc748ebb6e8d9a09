//! Command-line front end: load operators, run spectral computations and
//! validation suites, emit machine-readable reports.
//!
//! Exit codes: 0 success, 1 suite failure, 2 parse/input error, 3 operator
//! not normal.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qspectral::error::QError;
use qspectral::io::{operator_from_json, to_json_deterministic};
use qspectral::qspace::{random_normal, SpectrumProfile};
use qspectral::quaternion::{complete_frame, Quaternion, SliceFrame};
use qspectral::spectral::{
    self, q_residual, reconstruct, spectral_measure, spherical_spectrum, tjb_decompose,
};
use qspectral::verify;
use qspectral::QOperator;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "qspectral", version, about = "Spectral decomposition of normal quaternionic operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Operator input file (JSON: { "n": int, "entries": [[a,b,c,d], ...] })
    #[arg(long, global = true)]
    input: Option<String>,

    /// Tolerance override (relative)
    #[arg(long, global = true, default_value_t = spectral::TAU_MEAS)]
    tol: f64,

    /// Slice frame: "standard" or an imaginary 3-vector "b,c,d"
    #[arg(long, global = true, default_value = "standard")]
    frame: String,

    /// RNG seed for generated inputs and suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Trials per verification suite
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,

    /// Dimension for generated inputs
    #[arg(long, global = true, default_value_t = 8)]
    n: usize,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Spherical spectrum with Q_q oracle residuals per sphere
    Spectrum,
    /// Quaternionic spectral measure (atoms and their invariant residuals)
    Measure,
    /// T = A + JB decomposition
    Decompose,
    /// Reconstruction residual from measure and J
    Reconstruct,
    /// Run all theorem validation suites
    Verify,
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    NotNormal(String),
    Other(String),
}

impl From<QError> for CliError {
    fn from(e: QError) -> Self {
        CliError::Other(e.to_string())
    }
}

fn parse_frame(spec: &str) -> Result<SliceFrame, CliError> {
    if spec == "standard" {
        return Ok(SliceFrame::standard());
    }
    let parts: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Parse(format!("frame '{spec}': {e}")))?;
    if parts.len() != 3 {
        return Err(CliError::Parse(format!("frame '{spec}': need 3 components")));
    }
    let v = Quaternion::new(0.0, parts[0], parts[1], parts[2]);
    let m = v.modulus();
    if m == 0.0 {
        return Err(CliError::Parse("frame vector must be nonzero".into()));
    }
    complete_frame(v.scale(1.0 / m)).map_err(|e| CliError::Parse(e.to_string()))
}

fn load_operator(cli: &Cli) -> Result<QOperator, CliError> {
    let t = match &cli.input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
            operator_from_json(&text).map_err(|e| CliError::Parse(e.to_string()))?
        }
        None => random_normal(cli.n, cli.seed, SpectrumProfile::Generic)
            .map_err(|e| CliError::Other(e.to_string()))?,
    };
    if !t.is_normal(cli.tol.max(1e-10)) {
        let adj = t.adjoint();
        let comm = adj
            .compose(&t)
            .unwrap()
            .sub(&t.compose(&adj).unwrap())
            .unwrap()
            .norm_fro();
        return Err(CliError::NotNormal(format!(
            "operator is not normal: ||T*T - TT*||_F = {comm:.6e}"
        )));
    }
    Ok(t)
}

#[derive(Serialize)]
struct SphereRow {
    re: f64,
    rad: f64,
    multiplicity: usize,
    oracle_residual: f64,
}

#[derive(Serialize)]
struct SpectrumReport {
    schema: u32,
    command: &'static str,
    n: usize,
    spheres: Vec<SphereRow>,
}

#[derive(Serialize)]
struct AtomRow {
    re: f64,
    rad: f64,
    projection: QOperator,
}

#[derive(Serialize)]
struct MeasureResiduals {
    normality: f64,
    measure_axioms: f64,
    reconstruction: f64,
}

#[derive(Serialize)]
struct MeasureReport {
    schema: u32,
    command: &'static str,
    n: usize,
    atoms: Vec<AtomRow>,
    residuals: MeasureResiduals,
}

#[derive(Serialize)]
struct DecomposeReport {
    schema: u32,
    command: &'static str,
    n: usize,
    a: QOperator,
    b: QOperator,
    j: QOperator,
    reconstruction_residual: f64,
}

#[derive(Serialize)]
struct ReconstructReport {
    schema: u32,
    command: &'static str,
    n: usize,
    residual: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    command: &'static str,
    n: usize,
    seed: u64,
    trials: usize,
    suites: Vec<verify::SuiteReport>,
    all_passed: bool,
}

fn normality_residual(t: &QOperator) -> f64 {
    let adj = t.adjoint();
    let comm = adj
        .compose(t)
        .unwrap()
        .sub(&t.compose(&adj).unwrap())
        .unwrap()
        .norm_fro();
    comm / t.norm_fro().powi(2).max(1.0)
}

fn measure_axiom_residual(e: &qspectral::spectral::QSpectralMeasure, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    let mut sum = QOperator::zero(n);
    for (k, (_, p)) in e.atoms.iter().enumerate() {
        worst = worst.max(p.compose(p).unwrap().sub(p).unwrap().norm_fro());
        worst = worst.max(p.sub(&p.adjoint()).unwrap().norm_fro());
        for (l, (_, q)) in e.atoms.iter().enumerate() {
            if k != l {
                worst = worst.max(p.compose(q).unwrap().norm_fro());
            }
        }
        sum = sum.add(p).unwrap();
    }
    worst.max(sum.sub(&QOperator::identity(n)).unwrap().norm_fro())
}

fn emit<T: Serialize>(cli: &Cli, report: &T, text: String) -> Result<(), CliError> {
    match cli.format {
        Format::Json => {
            let json = to_json_deterministic(report).map_err(|e| CliError::Other(e.to_string()))?;
            println!("{json}");
        }
        Format::Text => println!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Spectrum => {
            let t = load_operator(cli)?;
            let frame = parse_frame(&cli.frame)?;
            let spec = spherical_spectrum(&t, &frame, cli.tol)?;
            let mut rows = Vec::new();
            for (sphere, mult) in &spec.spheres {
                let rep = sphere.representative(frame.i);
                rows.push(SphereRow {
                    re: sphere.re,
                    rad: sphere.rad,
                    multiplicity: *mult,
                    oracle_residual: q_residual(&t, rep, &frame)?,
                });
            }
            let mut text = format!("spherical spectrum of T (n = {}):\n", t.n);
            for r in &rows {
                text.push_str(&format!(
                    "  sphere (re = {:+.6e}, rad = {:.6e})  mult {}  Q_q residual {:.3e}\n",
                    r.re, r.rad, r.multiplicity, r.oracle_residual
                ));
            }
            let report =
                SpectrumReport { schema: SCHEMA, command: "spectrum", n: t.n, spheres: rows };
            emit(cli, &report, text)?;
            Ok(true)
        }
        Command::Measure => {
            let t = load_operator(cli)?;
            let frame = parse_frame(&cli.frame)?;
            let e = spectral_measure(&t, &frame, cli.tol)?;
            let d = tjb_decompose(&t, &frame, cli.tol)?;
            let rec = reconstruct(&e, &d.j)?;
            let rec_resid = rec.sub(&t)?.norm_fro() / t.norm_fro().max(1.0);
            let atoms: Vec<AtomRow> = e
                .atoms
                .iter()
                .map(|(s, p)| AtomRow { re: s.re, rad: s.rad, projection: p.clone() })
                .collect();
            let residuals = MeasureResiduals {
                normality: normality_residual(&t),
                measure_axioms: measure_axiom_residual(&e, t.n),
                reconstruction: rec_resid,
            };
            let text = format!(
                "spectral measure: {} atoms; axiom residual {:.3e}; reconstruction {:.3e}",
                atoms.len(),
                residuals.measure_axioms,
                residuals.reconstruction
            );
            let report =
                MeasureReport { schema: SCHEMA, command: "measure", n: t.n, atoms, residuals };
            emit(cli, &report, text)?;
            Ok(true)
        }
        Command::Decompose => {
            let t = load_operator(cli)?;
            let frame = parse_frame(&cli.frame)?;
            let d = tjb_decompose(&t, &frame, cli.tol)?;
            let e = spectral_measure(&t, &frame, cli.tol)?;
            let rec = reconstruct(&e, &d.j)?;
            let resid = rec.sub(&t)?.norm_fro() / t.norm_fro().max(1.0);
            let text = format!(
                "T = A + JB: ||A||_F = {:.6e}, ||B||_F = {:.6e}, ||J||_F = {:.6e}, reconstruction {:.3e}",
                d.a.norm_fro(),
                d.b.norm_fro(),
                d.j.norm_fro(),
                resid
            );
            let report = DecomposeReport {
                schema: SCHEMA,
                command: "decompose",
                n: t.n,
                a: d.a,
                b: d.b,
                j: d.j,
                reconstruction_residual: resid,
            };
            emit(cli, &report, text)?;
            Ok(true)
        }
        Command::Reconstruct => {
            let t = load_operator(cli)?;
            let frame = parse_frame(&cli.frame)?;
            let e = spectral_measure(&t, &frame, cli.tol)?;
            let d = tjb_decompose(&t, &frame, cli.tol)?;
            let rec = reconstruct(&e, &d.j)?;
            let residual = rec.sub(&t)?.norm_fro() / t.norm_fro().max(1.0);
            let tolerance = cli.tol.max(spectral::TAU_REC);
            let passed = residual <= tolerance;
            let report = ReconstructReport {
                schema: SCHEMA,
                command: "reconstruct",
                n: t.n,
                residual,
                tolerance,
                passed,
            };
            let text = format!(
                "reconstruction residual {residual:.6e} (tolerance {tolerance:.1e}): {}",
                if passed { "pass" } else { "FAIL" }
            );
            emit(cli, &report, text)?;
            Ok(passed)
        }
        Command::Verify => {
            let suites = verify::run_all(cli.n, cli.seed, cli.trials, cli.tol);
            let all_passed = suites.iter().all(|s| s.passed);
            let mut text = String::new();
            for s in &suites {
                text.push_str(&format!(
                    "{:<20} trials {:>4}  worst {:.3e}  tol {:.1e}  {}\n",
                    s.suite,
                    s.trials,
                    s.worst_residual,
                    s.tolerance,
                    if s.passed { "pass" } else { "FAIL" }
                ));
                if !s.failed_seeds.is_empty() {
                    text.push_str(&format!("  failed seeds: {:?}\n", s.failed_seeds));
                }
            }
            let report = VerifyReport {
                schema: SCHEMA,
                command: "verify",
                n: cli.n,
                seed: cli.seed,
                trials: cli.trials,
                suites,
                all_passed,
            };
            emit(cli, &report, text)?;
            Ok(all_passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.tol <= 0.0 {
        eprintln!("error: tolerance must be positive");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::NotNormal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
