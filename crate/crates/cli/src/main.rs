use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use modfol::eisenstein::{eisenstein_derivative_eval, eisenstein_eval, theta_eval, PathWitness};
use modfol::flows::{conservation_monitor, integrate_field, FieldHandle, FlowOptions, Quantity};
use modfol::gauss_manin::{foliation_from_form, FormSpec};
use modfol::periods::{leaf_classify, normalize, raw_period_matrix, PeriodMatrix, Point3};
use modfol::suite::{emit_report, run_suite, Status, SuiteKind};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "modfol", version, about = "Modular foliations laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Symbolic,
    Numeric,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Ra,
    Dh,
    Restricted,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Monitor {
    BXdxy,
    BMixedAbs,
    Delta0,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and print a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Integrate a vector field along a complex ray.
    Flow {
        #[arg(long, value_enum, default_value = "ra")]
        field: Field,
        #[arg(long, allow_hyphen_values = true)]
        p1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p2: Option<String>,
        /// Value of the formal parameter `s` in custom forms.
        #[arg(long, default_value = "0")]
        param: Complex64,
        /// Start point "a,b,c" with complex entries.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        /// Direction of the ray in degrees.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phase: f64,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum)]
        monitor: Vec<Monitor>,
        /// Write samples here; otherwise they go to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Period matrix of dx/y, x dx/y at a parameter point.
    Periods {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Skip the normalization by sqrt(-2 pi i).
        #[arg(long)]
        raw: bool,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
    },
    /// Eisenstein triple at a point of the upper half-plane.
    Eisenstein {
        #[arg(long, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
        /// Also report d/dz of the triple.
        #[arg(long)]
        derivative: bool,
        /// Also report the theta triple.
        #[arg(long)]
        theta: bool,
    },
    /// Vector field of the foliation attached to p1 dx/y + p2 x dx/y.
    Foliation {
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
    },
    /// Leaf invariants and classification at a parameter point.
    Leaf {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    fn numeric<E: std::fmt::Display>(e: E) -> Self {
        CliError::Numeric(e.to_string())
    }
}

fn cj(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn cvec(v: &[Complex64]) -> Value {
    Value::Array(v.iter().copied().map(cj).collect())
}

fn matrix_json(p: &PeriodMatrix) -> Value {
    json!([[cj(p.x[0]), cj(p.x[1])], [cj(p.x[2]), cj(p.x[3])]])
}

fn parse_point(s: &str) -> Result<Point3, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("expected three comma-separated values, got {s:?}")));
    }
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p
            .parse()
            .map_err(|_| CliError::Usage(format!("bad complex number {p:?}")))?;
    }
    Ok(out)
}

fn print_json(v: &Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(CliError::numeric)?;
    writeln!(out).map_err(CliError::numeric)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Verify { suite, tol, seed, json } => {
            let which = match suite {
                Suite::Symbolic => SuiteKind::Symbolic,
                Suite::Numeric => SuiteKind::Numeric,
                Suite::All => SuiteKind::All,
            };
            let start = Instant::now();
            let report = run_suite(which, tol, seed);
            eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
            match json {
                Some(path) => {
                    let f = File::create(&path).map_err(CliError::numeric)?;
                    emit_report(&report, BufWriter::new(f)).map_err(CliError::numeric)?;
                }
                None => emit_report(&report, io::stdout().lock()).map_err(CliError::numeric)?,
            }
            Ok(match report.status {
                Status::Pass => 0,
                Status::Fail => EXIT_FAIL,
                Status::Error => EXIT_NUMERIC,
            })
        }
        Command::Flow {
            field,
            p1,
            p2,
            param,
            start,
            phase,
            length,
            tol,
            monitor,
            csv,
        } => {
            let handle = match field {
                Field::Ra => FieldHandle::Ra,
                Field::Dh => FieldHandle::Dh,
                Field::Restricted => FieldHandle::RestrictedDelta0,
                Field::Custom => {
                    let (Some(p1), Some(p2)) = (p1, p2) else {
                        return Err(CliError::Usage("--field custom needs --p1 and --p2".into()));
                    };
                    let form = FormSpec::parse(&p1, &p2).map_err(|e| CliError::Usage(e.to_string()))?;
                    let f = foliation_from_form(&form).map_err(|e| CliError::Usage(e.to_string()))?;
                    FieldHandle::Custom {
                        field: f.into_field(),
                        param,
                    }
                }
            };
            let start = parse_point(&start)?;
            let phase = Complex64::from_polar(1.0, phase.to_radians());
            let mut traj = integrate_field(&handle, &start, phase, length, &FlowOptions::new(tol))
                .map_err(CliError::numeric)?;
            let mut drifts = serde_json::Map::new();
            for m in monitor {
                let q = match m {
                    Monitor::BXdxy => Quantity::BXdxy,
                    Monitor::BMixedAbs => Quantity::BMixedAbs,
                    Monitor::Delta0 => Quantity::Delta0FirstIntegral,
                };
                let d = conservation_monitor(&mut traj, q, 1e-13).map_err(CliError::numeric)?;
                drifts.insert(q.name().to_string(), json!(d));
            }
            match csv {
                Some(path) => {
                    let f = File::create(&path).map_err(CliError::numeric)?;
                    traj.write_csv(BufWriter::new(f)).map_err(CliError::numeric)?;
                    print_json(&json!({
                        "field": handle.name(),
                        "samples": traj.samples.len(),
                        "end": cvec(traj.end()),
                        "accepted": traj.stats.accepted,
                        "rejected": traj.stats.rejected,
                        "drift": drifts,
                    }))?;
                }
                None => traj.write_csv(io::stdout().lock()).map_err(CliError::numeric)?,
            }
            Ok(0)
        }
        Command::Periods { t, raw, tol } => {
            let t = parse_point(&t)?;
            let (p, cycles) = raw_period_matrix(&t, tol).map_err(CliError::numeric)?;
            let p = if raw { p } else { normalize(&p) };
            print_json(&json!({
                "t": cvec(&t),
                "normalized": !raw,
                "matrix": matrix_json(&p),
                "det": cj(p.det()),
                "tau": cj(p.tau()),
                "cycles": cycles.iter().map(|c| json!([c.a, c.b, c.sign])).collect::<Vec<_>>(),
            }))?;
            Ok(0)
        }
        Command::Eisenstein { z, tol, derivative, theta } => {
            let e = eisenstein_eval(z, tol).map_err(CliError::numeric)?;
            let mut out = json!({
                "z": cj(z),
                "g": cvec(&e.g),
                "error_bound": e.error_bound,
            });
            if derivative {
                let d = eisenstein_derivative_eval(z, tol).map_err(CliError::numeric)?;
                out["derivative"] = cvec(&d.g);
                out["derivative_error_bound"] = json!(d.error_bound);
            }
            if theta {
                let th = theta_eval(z, tol, &PathWitness::from_i(z)).map_err(CliError::numeric)?;
                out["theta"] = cvec(&th.theta);
                out["min_separation"] = json!(th.min_separation);
            }
            print_json(&out)?;
            Ok(0)
        }
        Command::Foliation { p1, p2 } => {
            let form = FormSpec::parse(&p1, &p2).map_err(|e| CliError::Usage(e.to_string()))?;
            let f = foliation_from_form(&form).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut out = io::stdout().lock();
            for c in f.components() {
                writeln!(out, "{c}").map_err(CliError::numeric)?;
            }
            Ok(0)
        }
        Command::Leaf { t, tol } => {
            let t = parse_point(&t)?;
            let info = leaf_classify(&t, tol).map_err(CliError::numeric)?;
            print_json(&json!({
                "t": cvec(&t),
                "B_dxy": info.b_dxy,
                "B_xdxy": info.b_xdxy,
                "B_mixed": cj(info.b_mixed),
                "c2": cj(info.c2),
                "c4": cj(info.c4),
                "tau": cj(info.tau),
                "classification": info.classification.as_str(),
            }))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
