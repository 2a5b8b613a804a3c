//! Command-line front end. Every command prints one JSON report on stdout
//! and exits 0 when its checks pass, 1 when a check fails and 2 on invalid
//! input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::clifford::{clifford_count_check, CliffordError};
use crate::dual::{cocycle_triviality, DualError, DualSpace, Tolerances, SNAP_TOL};
use crate::group::{Extension, FiniteGroup};
use crate::gw::{duality_check, gw_point, hom_count_oracle, GwError, GwValue, DEFAULT_BUDGET};
use crate::io::{extension_to_json, load_extension, load_group, load_samples, InputError};
use crate::library::{find, try_bundled_library};
use crate::rcoeff::{fit_poly, RcoeffError};
use crate::repr::{compute_irreps, IrrepSet, ReprError, RESIDUAL_TOL};

pub const MAX_GENUS: u32 = 6;
pub const MAX_BUDGET: u64 = 1_000_000_000;

const EXIT_PASS: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_INVALID: i32 = 2;

/// Residual bound for the representation checks reported by `irreps`.
const REPORT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "gerbe-dual",
    version,
    about = "Gerbe duality checks for finite group extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Source {
    /// JSON input file.
    #[arg(short = 'i', long = "input", conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    /// Name of a bundled extension (see `library`).
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
pub struct Numerics {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Residual tolerance for matrix identities.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Tolerance for snapping scalars to roots of unity.
    #[arg(long)]
    pub snap_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Part {
    G,
    H,
    Q,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irreducible representations and character table of a group.
    Irreps {
        #[command(flatten)]
        source: Source,
        /// Which group of a bundled extension to use.
        #[arg(long, value_enum, default_value_t = Part::H)]
        part: Part,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Orbits, stabilizers and cocycles of the dual of an extension.
    Dual {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Compares irrep dimensions of H with those predicted by the dual.
    CliffordCheck {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Compares point invariants of H with those of the twisted dual.
    DualityCheck {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        numerics: Numerics,
        /// Genus or inclusive range such as `0..3`.
        #[arg(long, default_value = "0..3")]
        genus: String,
    },
    /// Counts surface group homomorphisms by enumeration.
    Oracle {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Part::H)]
        part: Part,
        #[command(flatten)]
        numerics: Numerics,
        #[arg(long, default_value = "1..2")]
        genus: String,
        /// Largest number of tuples to enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Fits a polynomial in r to exact samples and reports its constant term.
    Rcoeff {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long = "deg")]
        degree: usize,
    },
    /// Lists the bundled extensions.
    Library {
        /// Write each extension as JSON into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

/// What a command produced: its payload and whether its checks passed.
struct Outcome {
    payload: Value,
    pass: bool,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Check(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<ReprError> for Failure {
    fn from(e: ReprError) -> Self {
        match e {
            ReprError::OrderBoundExceeded { .. } => Failure::Invalid(e.to_string()),
            e => Failure::Check(e.to_string()),
        }
    }
}

impl From<DualError> for Failure {
    fn from(e: DualError) -> Self {
        match e {
            DualError::Repr(r) => r.into(),
            e => Failure::Check(e.to_string()),
        }
    }
}

impl From<CliffordError> for Failure {
    fn from(e: CliffordError) -> Self {
        match e {
            CliffordError::Dual(d) => d.into(),
            CliffordError::Repr(r) => r.into(),
            e => Failure::Check(e.to_string()),
        }
    }
}

/// Parses `g` or `a..b` (inclusive).
pub fn parse_genus_range(s: &str) -> Result<(u32, u32), String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("invalid genus \"{t}\""))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let g = parse(s)?;
            (g, g)
        }
    };
    if lo > hi || hi > MAX_GENUS {
        return Err(format!(
            "genus range must satisfy 0 <= min <= max <= {MAX_GENUS}, got {s}"
        ));
    }
    Ok((lo, hi))
}

fn tolerances(n: &Numerics) -> Result<Tolerances, Failure> {
    let t = Tolerances {
        residual: n.tol.unwrap_or(RESIDUAL_TOL),
        snap: n.snap_tol.unwrap_or(SNAP_TOL),
    };
    if !(t.residual > 0.0 && t.snap > 0.0) {
        return Err(Failure::Invalid("tolerances must be positive".into()));
    }
    Ok(t)
}

fn describe(source: &Source) -> String {
    match (&source.input, &source.builtin) {
        (Some(p), _) => p.display().to_string(),
        (None, Some(b)) => format!("builtin:{b}"),
        (None, None) => String::new(),
    }
}

fn builtin(name: &str) -> Result<Extension, Failure> {
    find(name)
        .map(|e| e.extension)
        .ok_or_else(|| Failure::Invalid(format!("no bundled extension named \"{name}\"")))
}

fn load_ext(source: &Source) -> Result<Extension, Failure> {
    match (&source.input, &source.builtin) {
        (Some(p), _) => Ok(load_extension(p)?),
        (None, Some(b)) => builtin(b),
        (None, None) => Err(Failure::Invalid(
            "give an input file with -i or a --builtin name".into(),
        )),
    }
}

fn load_grp(source: &Source, part: Part) -> Result<FiniteGroup, Failure> {
    match (&source.input, &source.builtin) {
        (Some(p), _) => Ok(load_group(p)?),
        (None, Some(b)) => {
            let ext = builtin(b)?;
            Ok(match part {
                Part::G => ext.g(),
                Part::H => ext.h(),
                Part::Q => ext.q(),
            }
            .clone())
        }
        (None, None) => Err(Failure::Invalid(
            "give an input file with -i or a --builtin name".into(),
        )),
    }
}

/// Residuals are printed with three significant digits so that reports do
/// not depend on the last bits of floating point.
fn sci(x: f64) -> String {
    format!("{x:.2e}")
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9 + 0.0
}

fn complex(z: Complex64) -> Value {
    json!([round9(z.re), round9(z.im)])
}

fn group_summary(g: &FiniteGroup) -> Value {
    json!({ "name": g.name(), "order": g.order() })
}

fn extension_summary(ext: &Extension) -> Value {
    json!({
        "G": group_summary(ext.g()),
        "H": group_summary(ext.h()),
        "Q": group_summary(ext.q()),
        "banded": ext.is_banded(),
    })
}

fn irreps_payload(g: &FiniteGroup, irreps: &IrrepSet) -> Outcome {
    let table = irreps.character_table();
    let residuals = [
        irreps.max_homomorphism_residual(),
        irreps.max_unitarity_residual(),
        irreps.orthogonality_residual(),
        irreps.class_constancy_residual(),
    ];
    let dims = irreps.dims();
    let sum: usize = dims.iter().map(|d| d * d).sum();
    let pass = residuals.iter().all(|&r| r < REPORT_RESIDUAL_TOL)
        && sum == g.order()
        && irreps.len() == table.classes.len();
    let characters: Vec<Vec<Value>> = table
        .characters
        .iter()
        .map(|row| row.iter().map(|&z| complex(z)).collect())
        .collect();
    Outcome {
        payload: json!({
            "group": group_summary(g),
            "dims": dims,
            "character_table": { "classes": table.classes, "characters": characters },
            "residuals": {
                "homomorphism": sci(residuals[0]),
                "unitarity": sci(residuals[1]),
                "orthogonality": sci(residuals[2]),
                "class_constancy": sci(residuals[3]),
            },
        }),
        pass,
    }
}

fn dual_payload(ext: &Extension, dual: &DualSpace, tol: &Tolerances) -> Outcome {
    let mut pass = true;
    let orbits: Vec<Value> = dual
        .orbits()
        .iter()
        .map(|o| {
            let d = &o.diagnostics;
            pass &= d.max_scalar_residual < tol.residual
                && d.max_snap_distance < tol.snap
                && o.cocycle.identity_violation().is_none();
            json!({
                "representative": o.rep_index,
                "dim": o.dim,
                "orbit": o.orbit,
                "stabilizer": o.stabilizer,
                "modulus": o.cocycle.modulus(),
                "cocycle": o.cocycle.rows(),
                "triviality": cocycle_triviality(&o.cocycle),
                "diagnostics": {
                    "intertwiner_residual": sci(d.max_intertwiner_residual),
                    "scalar_residual": sci(d.max_scalar_residual),
                    "snap_distance": sci(d.max_snap_distance),
                },
            })
        })
        .collect();
    Outcome {
        payload: json!({
            "extension": extension_summary(ext),
            "ghat_dims": dual.ghat().dims(),
            "action": dual.action(),
            "orbits": orbits,
        }),
        pass,
    }
}

fn execute(command: &Command) -> Result<(Value, Outcome), Failure> {
    match command {
        Command::Irreps {
            source,
            part,
            numerics,
        } => {
            let g = load_grp(source, *part)?;
            let irreps = compute_irreps(&g, numerics.seed)?;
            Ok((
                header("irreps", source, numerics.seed),
                irreps_payload(&g, &irreps),
            ))
        }
        Command::Dual { source, numerics } => {
            let tol = tolerances(numerics)?;
            let ext = load_ext(source)?;
            let dual = DualSpace::from_extension(&ext, numerics.seed, &tol)?;
            Ok((
                header("dual", source, numerics.seed),
                dual_payload(&ext, &dual, &tol),
            ))
        }
        Command::CliffordCheck { source, numerics } => {
            let tol = tolerances(numerics)?;
            let ext = load_ext(source)?;
            let report = clifford_count_check(&ext, numerics.seed, &tol)?;
            let pass = report.passed;
            let mut payload = serde_json::to_value(&report).expect("report serializes");
            payload["extension"] = extension_summary(&ext);
            Ok((
                header("clifford-check", source, numerics.seed),
                Outcome { payload, pass },
            ))
        }
        Command::DualityCheck {
            source,
            numerics,
            genus,
        } => {
            let (lo, hi) = parse_genus_range(genus).map_err(Failure::Invalid)?;
            let tol = tolerances(numerics)?;
            let ext = load_ext(source)?;
            let dual = DualSpace::from_extension(&ext, numerics.seed, &tol)?;
            let orbits = crate::clifford::orbit_checks(&dual, numerics.seed)?;
            let h = compute_irreps(ext.h(), numerics.seed)?;
            let entries: Vec<_> = (lo..=hi)
                .map(|g| duality_check(&h, ext.g().order(), &orbits, g))
                .collect();
            let pass = entries.iter().all(|e| e.pass);
            Ok((
                header("duality-check", source, numerics.seed),
                Outcome {
                    payload: json!({
                        "extension": extension_summary(&ext),
                        "genus": [lo, hi],
                        "entries": entries,
                    }),
                    pass,
                },
            ))
        }
        Command::Oracle {
            source,
            part,
            numerics,
            genus,
            budget,
        } => {
            let (lo, hi) = parse_genus_range(genus).map_err(Failure::Invalid)?;
            if *budget > MAX_BUDGET {
                return Err(Failure::Invalid(format!(
                    "budget may not exceed {MAX_BUDGET}"
                )));
            }
            let g = load_grp(source, *part)?;
            let irreps = compute_irreps(&g, numerics.seed)?;
            let order = GwValue::from_integer(g.order() as i64);
            let mut pass = true;
            let mut entries = Vec::new();
            for genus in lo..=hi {
                let count = hom_count_oracle(&g, genus, *budget)
                    .map_err(|e: GwError| Failure::Invalid(e.to_string()))?;
                let gw = gw_point(&irreps, genus);
                let predicted = &order * &gw;
                let ok = predicted == GwValue::from_integer(count as i64);
                pass &= ok;
                entries.push(json!({
                    "genus": genus,
                    "hom_count": count,
                    "gw_point": gw,
                    "order_times_gw_point": predicted,
                    "pass": ok,
                }));
            }
            Ok((
                header("oracle", source, numerics.seed),
                Outcome {
                    payload: json!({ "group": group_summary(&g), "entries": entries }),
                    pass,
                },
            ))
        }
        Command::Rcoeff { input, degree } => {
            let samples = load_samples(input)?;
            let head = json!({
                "format": 1,
                "tool": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "command": "rcoeff",
                "input": input.display().to_string(),
            });
            let payload = match fit_poly(&samples, *degree) {
                Ok(fit) => {
                    let coefficients: Vec<String> =
                        fit.coefficients.iter().map(ToString::to_string).collect();
                    Outcome {
                        payload: json!({
                            "degree": degree,
                            "samples": samples.len(),
                            "coefficients": coefficients,
                            "r0": fit.constant().to_string(),
                        }),
                        pass: true,
                    }
                }
                Err(e @ RcoeffError::Inconsistent { .. }) => Outcome {
                    payload: json!({
                        "degree": degree,
                        "samples": samples.len(),
                        "error": e.to_string(),
                    }),
                    pass: false,
                },
                Err(e) => return Err(Failure::Invalid(e.to_string())),
            };
            Ok((head, payload))
        }
        Command::Library { export } => {
            let lib = try_bundled_library()
                .map_err(|(name, e)| Failure::Check(format!("bundled extension {name}: {e}")))?;
            if let Some(dir) = export {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Invalid(format!("{}: {e}", dir.display())))?;
                for entry in &lib {
                    let path = dir.join(format!("{}.json", entry.name));
                    let text = serde_json::to_string_pretty(&extension_to_json(&entry.extension))
                        .expect("extension serializes");
                    fs::write(&path, text + "\n")
                        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
                }
            }
            let entries: Vec<Value> = lib
                .iter()
                .map(|e| {
                    let mut v = extension_summary(&e.extension);
                    v["name"] = json!(e.name);
                    v["description"] = json!(e.description);
                    v
                })
                .collect();
            let head = json!({
                "format": 1,
                "tool": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "command": "library",
            });
            Ok((
                head,
                Outcome {
                    payload: json!({ "extensions": entries }),
                    pass: true,
                },
            ))
        }
    }
}

fn header(command: &str, source: &Source, seed: u64) -> Value {
    json!({
        "format": 1,
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "input": describe(source),
        "seed": seed,
        "conventions": {
            "normalization_factor": "|G|^(2g-2)",
            "orbit_weight": "dim(rho)^(2-2g)",
            "central_character_sign": "+",
            "stabilizer_multiplier": "inverse of the intertwiner cocycle",
            "section": "least element of each coset",
        },
    })
}

/// Runs one command, writing the report to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Err((name, e)) = try_bundled_library() {
        let _ = writeln!(
            err,
            "error: self-test failed for bundled extension {name}: {e}"
        );
        return EXIT_FAIL;
    }
    match execute(&cli.command) {
        Ok((mut report, outcome)) => {
            let map = report.as_object_mut().expect("header is an object");
            if let Value::Object(payload) = outcome.payload {
                map.extend(payload);
            }
            map.insert("pass".into(), json!(outcome.pass));
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if writeln!(out, "{text}").is_err() {
                return EXIT_INVALID;
            }
            if outcome.pass {
                EXIT_PASS
            } else {
                let _ = writeln!(err, "check failed");
                EXIT_FAIL
            }
        }
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            EXIT_FAIL
        }
    }
}
