//! Command-line surface: orbit invariants, canonicalization, the
//! verification suites, blob-dynamics simulation, and momentum tables.
//!
//! Exit codes: 0 success/pass, 1 check failure or simulation halt,
//! 2 usage or validation error.

use clap::{Args, Parser, Subcommand};
use pvloop::dynamics::{self, BlobParams, SimState};
use pvloop::error::Error;
use pvloop::hamiltonian::{bump_dictionary, DictionaryConfig, Scheme};
use pvloop::json::{self, ObjectFile};
use pvloop::objects::{
    canonicalize, is_prequantizable, orbit_invariants, zm_canonical_rep,
};
use pvloop::symplectic::{momentum_equal, MomentumFunctional};
use pvloop::verify;
use serde_json::json;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pvl", version, about = "Pointed vortex loop toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArgs {
    /// RNG seed (falls back to the PVL_SEED environment variable).
    #[arg(long)]
    seed: Option<u64>,
}

impl SeedArgs {
    fn resolve(&self) -> u64 {
        self.seed
            .or_else(|| std::env::var("PVL_SEED").ok().and_then(|s| s.parse().ok()))
            .unwrap_or(0)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the orbit invariants of a pointed vortex loop file.
    Invariants {
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Canonicalize a pointed vortex loop to its constant-density
    /// embedding (optionally the Z_m quotient representative).
    Canonicalize {
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<String>,
        /// Reduce to the lexicographic Z_m representative.
        #[arg(long)]
        quotient: bool,
    },
    /// Run a verification suite and emit one JSON report per check.
    Verify {
        /// geometry | phi | pairing | momentum | polarization |
        /// transitivity | dynamics | all
        suite: String,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        output: Option<String>,
    },
    /// Advect a point configuration or pointed loop and emit a CSV
    /// diagnostics time series.
    Simulate {
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        /// Blob desingularization length; default 0.5x mean node
        /// spacing for loops, 0 for pure point configurations.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value = "rk4")]
        scheme: String,
        /// Diagnostics output stride in steps.
        #[arg(long, default_value_t = 10)]
        stride: usize,
    },
    /// Momentum pairings against the seeded bump dictionary; with
    /// --compare, test momentum equality of two files.
    Momentum {
        #[arg(long)]
        input: String,
        #[arg(long)]
        compare: Option<String>,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 64)]
        dict_size: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        output: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_object(path: &str) -> Result<ObjectFile, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
    json::parse_object(&text)
}

fn emit(output: &Option<String>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {path}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn config_hash(parts: &[String]) -> u64 {
    // FNV-1a over the textual configuration, for reproducibility tags
    let mut h: u64 = 0xcbf29ce484222325;
    for p in parts {
        for b in p.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

fn scheme_from_str(s: &str) -> Result<Scheme, Error> {
    match s {
        "rk4" => Ok(Scheme::Rk4),
        "midpoint" => Ok(Scheme::ImplicitMidpoint),
        other => Err(Error::InvalidArgument(format!(
            "unknown scheme {other}; expected rk4 or midpoint"
        ))),
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Invariants { input, output } => {
            let pvl = match read_object(&input)? {
                ObjectFile::Pvl(p) => p,
                _ => {
                    return Err(Error::InvalidArgument(
                        "invariants requires a pvl/1 file".into(),
                    ))
                }
            };
            let inv = orbit_invariants(&pvl);
            let omega = pvl.total_vorticity();
            let doc = json!({
                "schema": "invariants/1",
                "a": inv.area,
                "omega_total": omega,
                "partials": inv.partials,
                "circulations": inv.circulations,
                "l": inv.symmetry.0,
                "m": inv.symmetry.1,
                "prequantizable": is_prequantizable(inv.area, omega, 1e-9),
            });
            emit(&output, &serde_json::to_string_pretty(&doc).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Canonicalize { input, output, quotient } => {
            let pvl = match read_object(&input)? {
                ObjectFile::Pvl(p) => p,
                _ => {
                    return Err(Error::InvalidArgument(
                        "canonicalize requires a pvl/1 file".into(),
                    ))
                }
            };
            let mut curve = canonicalize(&pvl)?;
            if quotient {
                let inv = orbit_invariants(&pvl);
                curve = zm_canonical_rep(&curve, inv.symmetry.1)?;
            }
            let doc = json::curve_to_file(&curve);
            emit(&output, &serde_json::to_string_pretty(&doc).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed, output } => {
            let seed = seed.resolve();
            let reports = verify::run_suite(&suite, seed)?;
            let all_pass = reports.iter().all(|r| r.pass);
            emit(&output, &serde_json::to_string_pretty(&reports).unwrap())?;
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Simulate { input, output, t, dt, delta, scheme, stride } => {
            let scheme = scheme_from_str(&scheme)?;
            if dt <= 0.0 || t < 0.0 {
                return Err(Error::InvalidArgument("need dt > 0 and T >= 0".into()));
            }
            let state = match read_object(&input)? {
                ObjectFile::Pvc(cfg) => SimState::new(Some(cfg), None, 0.0)?,
                ObjectFile::Pvl(pvl) => SimState::new(None, Some(pvl), 0.0)?,
                ObjectFile::Curve(_) => {
                    return Err(Error::InvalidArgument(
                        "simulate requires a pvc/1 or pvl/1 file".into(),
                    ))
                }
            };
            let blob = match (delta, state.pointed()) {
                (Some(d), _) => BlobParams::new(d, 1)?,
                (None, Some(pvl)) => BlobParams::default_for_loop(pvl.curve())?,
                (None, None) => BlobParams::new(0.0, 1)?,
            };
            let k = state.pointed().map_or(0, |p| p.k());
            let hash = config_hash(&[
                input.clone(),
                format!("T={t} dt={dt} delta={} stride={stride}", blob.delta),
            ]);
            let mut csv = String::new();
            let omega_cols: String =
                (1..=k).map(|i| format!(",omega_{i}")).collect();
            csv.push_str(&format!("# config_hash={hash:016x}\n"));
            csv.push_str(&format!("t,area,omega_total{omega_cols},H_pv,Px,Py,L\n"));
            let fmt_row = |d: &dynamics::Diagnostics| {
                let mut row = format!(
                    "{},{},{}",
                    d.time,
                    d.area.map_or(String::new(), |v| v.to_string()),
                    d.total_vorticity.map_or(String::new(), |v| v.to_string()),
                );
                for w in &d.partials {
                    row.push_str(&format!(",{w}"));
                }
                row.push_str(&format!(
                    ",{},{},{},{}\n",
                    d.hamiltonian.map_or(String::new(), |v| v.to_string()),
                    d.linear_impulse.x,
                    d.linear_impulse.y,
                    d.angular_impulse
                ));
                row
            };
            let result = dynamics::run(&state, t, dt, &blob, scheme, stride);
            match result {
                Ok(rows) => {
                    for r in &rows {
                        csv.push_str(&fmt_row(r));
                    }
                    emit(&output, csv.trim_end())?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::SimulationHalt { time, reason }) => {
                    // flush what we have by re-running to just before the halt
                    let n_ok = ((time / dt).round() as usize).saturating_sub(1);
                    if n_ok > 0 {
                        if let Ok(rows) =
                            dynamics::run(&state, n_ok as f64 * dt, dt, &blob, scheme, stride)
                        {
                            for r in &rows {
                                csv.push_str(&fmt_row(r));
                            }
                        }
                    } else {
                        csv.push_str(&fmt_row(&dynamics::diagnostics(&state)?));
                    }
                    emit(&output, csv.trim_end())?;
                    let mut err = std::io::stderr();
                    let _ = writeln!(err, "simulation halted at t = {time}: {reason}");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e),
            }
        }
        Command::Momentum { input, compare, seed, dict_size, tol, output } => {
            let seed = seed.resolve();
            if tol <= 0.0 {
                return Err(Error::InvalidArgument("tolerance must be positive".into()));
            }
            let to_functional = |obj: ObjectFile| -> Result<MomentumFunctional, Error> {
                match obj {
                    ObjectFile::Pvc(c) => Ok(MomentumFunctional::Point(c)),
                    ObjectFile::Pvl(p) => Ok(MomentumFunctional::Pointed(p)),
                    ObjectFile::Curve(_) => Err(Error::InvalidArgument(
                        "momentum requires a pvc/1 or pvl/1 file".into(),
                    )),
                }
            };
            let m1 = to_functional(read_object(&input)?)?;
            let dict = bump_dictionary(&DictionaryConfig {
                seed,
                size: dict_size,
                ..Default::default()
            });
            match compare {
                None => {
                    let pairings: Vec<f64> = dict.iter().map(|h| m1.pair(h)).collect();
                    let doc = json!({
                        "schema": "momentum/1",
                        "seed": seed,
                        "dict_size": dict_size,
                        "pairings": pairings,
                    });
                    emit(&output, &serde_json::to_string_pretty(&doc).unwrap())?;
                    Ok(ExitCode::SUCCESS)
                }
                Some(path) => {
                    let m2 = to_functional(read_object(&path)?)?;
                    let equal = momentum_equal(&m1, &m2, &dict, tol);
                    let doc = json!({
                        "schema": "momentum-compare/1",
                        "seed": seed,
                        "dict_size": dict_size,
                        "tolerance": tol,
                        "equal": equal,
                    });
                    emit(&output, &serde_json::to_string_pretty(&doc).unwrap())?;
                    Ok(if equal {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    })
                }
            }
        }
    }
}
