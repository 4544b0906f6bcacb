//! Batch command surface over the library: exact series verification, the
//! residue functionals, intersection numbers, Green values by both routes,
//! the conjecture comparison, and the torsion constants.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use higher_green::cycles::{load_endomorphism, CurveParams, Endomorphism};
use higher_green::green::CMPoint;
use higher_green::record::RunRecord;
use higher_green::verify::{
    cmd_conjecture, cmd_green, cmd_intersect, cmd_psi, cmd_series_verify, cmd_torsion,
    GreenMethod, PointSpec,
};

#[derive(Parser)]
#[command(name = "hgreen", version, about = "exact and high-precision toolkit for higher Green function values at CM points")]
struct Cli {
    /// Emit one structured JSON record instead of the human table
    #[arg(long, global = true)]
    json: bool,
    /// Working precision in bits (HGREEN_PREC overrides this default)
    #[arg(long, global = true)]
    prec: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the reference Laurent coefficients of every basic expansion
    SeriesVerify {
        /// truncation order of the window
        #[arg(long, default_value_t = 30)]
        order: i64,
        /// corrupt one expected value (negative-path fixture)
        #[arg(long, hide = true)]
        corrupt_fixture: bool,
    },
    /// Residue functionals on the standard hyperforms and the canonical
    /// operator evaluation
    Psi {
        #[arg(long, default_value_t = 30)]
        order: i64,
    },
    /// Exact intersection numbers of the higher cycle with Z1, Z2, the
    /// diagonal and an endomorphism graph
    Intersect {
        /// curve coefficients a,b (defaults to the built-in curve)
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
        /// endomorphism data file
        #[arg(long)]
        endo: Option<PathBuf>,
        /// use built-in data (tau7)
        #[arg(long)]
        builtin: Option<String>,
    },
    /// Green function value by Poincare summation or Eichler integration
    Green {
        /// first point: A,B,C integers (CM) or x,y decimals
        #[arg(long, allow_hyphen_values = true)]
        z1: String,
        /// second point, same format
        #[arg(long, allow_hyphen_values = true)]
        z2: String,
        #[arg(long, default_value = "poincare")]
        method: String,
        /// matrix entry bound for the Poincare sum
        #[arg(long, default_value_t = 40)]
        bound: u32,
    },
    /// Compare the lifted Green value against the exact intersection number
    Conjecture {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        endo: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
        #[arg(long, default_value_t = 60)]
        bound: u32,
    },
    /// Torsion constants of the integral group cohomology
    Torsion,
}

fn parse_curve(s: &str) -> Result<CurveParams, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("curve must be a,b".into());
    }
    let a = parts[0]
        .trim()
        .parse::<rug::Rational>()
        .map_err(|e| format!("bad a: {}", e))?;
    let b = parts[1]
        .trim()
        .parse::<rug::Rational>()
        .map_err(|e| format!("bad b: {}", e))?;
    CurveParams::new(a, b).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<PointSpec, String> {
    let parts: Vec<&str> = s.split(',').map(|t| t.trim()).collect();
    match parts.len() {
        3 => {
            let a = parts[0].parse::<i64>().map_err(|e| e.to_string())?;
            let b = parts[1].parse::<i64>().map_err(|e| e.to_string())?;
            let c = parts[2].parse::<i64>().map_err(|e| e.to_string())?;
            CMPoint::new(a, b, c)
                .map(PointSpec::Cm)
                .ok_or_else(|| "not a reduced CM form: need A > 0, D < 0, gcd 1".into())
        }
        2 => {
            let x = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
            let y = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
            if y <= 0.0 {
                return Err("point must be in the upper half plane".into());
            }
            Ok(PointSpec::Complex(x, y))
        }
        _ => Err("point must be A,B,C (integers) or x,y (decimals)".into()),
    }
}

fn effective_prec(cli_prec: Option<u32>) -> u32 {
    // flag wins; the environment overrides only the default
    if let Some(p) = cli_prec {
        return p;
    }
    if let Ok(v) = std::env::var("HGREEN_PREC") {
        if let Ok(p) = v.parse::<u32>() {
            return p;
        }
    }
    256
}

fn emit(rec: &RunRecord, json: bool) -> ExitCode {
    if json {
        println!("{}", rec.to_json());
    } else {
        print!("{}", rec.render_table());
    }
    if rec.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn input_error(msg: &str) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prec = effective_prec(cli.prec);
    match cli.command {
        Command::SeriesVerify {
            order,
            corrupt_fixture,
        } => {
            if order < 4 {
                return input_error("order must be at least 4");
            }
            emit(&cmd_series_verify(order, corrupt_fixture), cli.json)
        }
        Command::Psi { order } => {
            if order < 16 {
                return input_error("order must be at least 16");
            }
            emit(&cmd_psi(order), cli.json)
        }
        Command::Intersect {
            curve,
            endo,
            builtin,
        } => {
            let curve = match curve {
                Some(s) => match parse_curve(&s) {
                    Ok(c) => c,
                    Err(e) => return input_error(&e),
                },
                None => CurveParams::tau7(),
            };
            let endo_data: Endomorphism = match (endo, builtin.as_deref()) {
                (Some(path), None) => match load_endomorphism(&path, &curve) {
                    Ok(e) => e,
                    Err(e) => return input_error(&e.to_string()),
                },
                (None, Some("tau7")) | (None, None) => {
                    if curve != CurveParams::tau7() {
                        return input_error(
                            "built-in endomorphism data is for the curve -35,-98",
                        );
                    }
                    Endomorphism::tau7_builtin()
                }
                (None, Some(other)) => {
                    return input_error(&format!("unknown builtin {}", other))
                }
                (Some(_), Some(_)) => {
                    return input_error("give either --endo or --builtin, not both")
                }
            };
            emit(&cmd_intersect(&curve, &endo_data), cli.json)
        }
        Command::Green {
            z1,
            z2,
            method,
            bound,
        } => {
            let p1 = match parse_point(&z1) {
                Ok(p) => p,
                Err(e) => return input_error(&e),
            };
            let p2 = match parse_point(&z2) {
                Ok(p) => p,
                Err(e) => return input_error(&e),
            };
            let m = match method.as_str() {
                "poincare" => GreenMethod::Poincare,
                "eichler" => GreenMethod::Eichler,
                other => return input_error(&format!("unknown method {}", other)),
            };
            match cmd_green(&p1, &p2, m, prec, bound) {
                Ok(rec) => emit(&rec, cli.json),
                Err(e) => input_error(&e.to_string()),
            }
        }
        Command::Conjecture {
            disc,
            endo,
            curve,
            bound,
        } => {
            let supplied = match (endo, curve) {
                (Some(path), Some(cs)) => {
                    let curve = match parse_curve(&cs) {
                        Ok(c) => c,
                        Err(e) => return input_error(&e),
                    };
                    match load_endomorphism(&path, &curve) {
                        Ok(e) => Some((e, curve)),
                        Err(e) => return input_error(&e.to_string()),
                    }
                }
                (None, None) => None,
                _ => return input_error("--endo and --curve must be given together"),
            };
            match cmd_conjecture(disc, prec, bound, supplied) {
                Ok(rec) => emit(&rec, cli.json),
                Err(e) => input_error(&e),
            }
        }
        Command::Torsion => emit(&cmd_torsion(), cli.json),
    }
}
