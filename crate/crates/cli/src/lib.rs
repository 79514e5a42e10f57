//! Command-line front end for the `condspec` library.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use condspec::contour::{contours_to_svg, extract_contours};
use condspec::distances::{distance_to_instability, distance_to_singularity, SearchOptions};
use condspec::io::{
    contours_to_json, emit_field_csv, field_to_json, grid_to_json, matrix_to_json,
    parse_matrix_file,
};
use condspec::linalg::operator_norm;
use condspec::perturbation::{perturb_joint, perturb_operator, perturb_rhs};
use condspec::report::JsonReport;
use condspec::reproduce::{dump_fixtures, reproduce_all, reproduce_table, Mode, TableReport};
use condspec::spectra::{
    check_inclusions, condspec_radius_bound, grid_eval, sample, GridSpec, Quantity,
};
use condspec::{CMatrix, CVector, Complex64, Error, NormKind, Result};

use config::{parse_point, parse_window, OutputFormat, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "condspec",
    version,
    about = "Pseudospectra, condition pseudospectra and perturbation bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample 1/||(A - zI)^-1|| on a grid and trace the eps-pseudospectrum boundaries.
    Pseudospectrum(GridArgs),
    /// Sample kappa(z, A) on a grid and trace the eps-condition pseudospectrum boundaries.
    Condspectrum(GridArgs),
    /// Resolvent quantities at a single point.
    Kappa {
        matrix: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value = "spectral")]
        norm: NormKind,
        /// Print the full sample as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Right-hand-side perturbation of (A - zI)x = y.
    PerturbRhs {
        matrix: PathBuf,
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        dy: PathBuf,
    },
    /// Operator perturbation of (A - zI)x = y.
    PerturbOp {
        matrix: PathBuf,
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        da: PathBuf,
    },
    /// Simultaneous operator and right-hand-side perturbation.
    PerturbJoint {
        matrix: PathBuf,
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        da: PathBuf,
        #[arg(long)]
        dy: PathBuf,
    },
    /// Distance of a stable matrix to the set of unstable matrices.
    DistInstability {
        matrix: PathBuf,
        #[arg(long, default_value = "spectral")]
        norm: NormKind,
        #[arg(long, default_value_t = SearchOptions::default().scan_points)]
        scan_points: usize,
        #[arg(long, default_value_t = SearchOptions::default().tol)]
        tol: f64,
    },
    /// Distance to the nearest singular matrix.
    DistSingularity {
        matrix: PathBuf,
        #[arg(long, default_value = "spectral")]
        norm: NormKind,
    },
    /// Falsification search for the inclusion relations on a grid.
    CheckLemmas {
        /// Matrix to check; omit together with --random.
        matrix: Option<PathBuf>,
        /// Check this many random matrices instead.
        #[arg(long, conflicts_with = "matrix")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.3")]
        eps: Vec<f64>,
        #[arg(long, default_value = "spectral")]
        norm: NormKind,
        #[arg(long, default_value_t = 101)]
        nx: usize,
        #[arg(long, default_value_t = 101)]
        ny: usize,
    },
    /// Recompute the published example tables and compare cell by cell.
    ReproducePaper {
        /// Table id (2.1, 2.2, 2.3, 3.1, 3.2, 3.3) or `all`.
        #[arg(long, default_value = "all")]
        table: String,
        /// Compare at the reference tolerances only, so misprinted cells fail.
        #[arg(long)]
        strict: bool,
        /// Also write every fixture as matrix JSON under this directory.
        #[arg(long)]
        dump_fixtures: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct GridArgs {
    matrix: PathBuf,
    /// Comma-separated levels.
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    eps: Vec<f64>,
    /// RE_MIN,RE_MAX,IM_MIN,IM_MAX; chosen from the matrix when omitted.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    grid: Option<[f64; 4]>,
    #[arg(long, default_value_t = 201)]
    nx: usize,
    #[arg(long, default_value_t = 201)]
    ny: usize,
    #[arg(long, default_value = "spectral")]
    norm: NormKind,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SystemArgs {
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    z: Complex64,
    /// Right-hand side, as a matrix file with one row or one column.
    #[arg(long)]
    y: PathBuf,
    #[arg(long, default_value = "spectral")]
    norm: NormKind,
}

enum Outcome {
    Ok,
    Violated,
}

/// Runs the command line `argv` (including the program name) and returns the
/// process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Violated) => EXIT_VALIDATION,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Pseudospectrum(g) => grid_command(g, Quantity::Kappa1),
        Command::Condspectrum(g) => grid_command(g, Quantity::Kappa),
        Command::Kappa {
            matrix,
            z,
            norm,
            json,
        } => {
            let a = parse_matrix_file(&matrix)?;
            let s = sample(&a, z, norm)?;
            if json {
                print_json(&s.to_json())?;
            } else {
                let mut out = io::stdout().lock();
                writeln!(out, "κ={:.8}", s.kappa)?;
                writeln!(out, "κ₁={:.8}", s.kappa1)?;
                writeln!(out, "cond={:.8}", s.cond)?;
                writeln!(out, "norm_shifted={:.8}", s.shifted_norm)?;
                writeln!(out, "norm_resolvent={:.8}", s.resolvent_norm)?;
            }
            Ok(Outcome::Ok)
        }
        Command::PerturbRhs { matrix, sys, dy } => {
            let (a, y) = load_system(&matrix, &sys)?;
            let r = perturb_rhs(&a, sys.z, &y, &load_vector(&dy)?, sys.norm)?;
            print_json(&r.to_json())?;
            Ok(verdict(r.holds))
        }
        Command::PerturbOp { matrix, sys, da } => {
            let (a, y) = load_system(&matrix, &sys)?;
            let r = perturb_operator(&a, sys.z, &y, &parse_matrix_file(&da)?, sys.norm)?;
            print_json(&r.to_json())?;
            Ok(verdict(r.holds))
        }
        Command::PerturbJoint {
            matrix,
            sys,
            da,
            dy,
        } => {
            let (a, y) = load_system(&matrix, &sys)?;
            let r = perturb_joint(
                &a,
                sys.z,
                &y,
                &parse_matrix_file(&da)?,
                &load_vector(&dy)?,
                sys.norm,
            )?;
            print_json(&r.to_json())?;
            Ok(verdict(r.holds))
        }
        Command::DistInstability {
            matrix,
            norm,
            scan_points,
            tol,
        } => {
            let a = parse_matrix_file(&matrix)?;
            let r = distance_to_instability(&a, norm, SearchOptions { scan_points, tol })?;
            print_json(&r.to_json())?;
            Ok(Outcome::Ok)
        }
        Command::DistSingularity { matrix, norm } => {
            let a = parse_matrix_file(&matrix)?;
            print_json(&distance_to_singularity(&a, norm)?.to_json())?;
            Ok(Outcome::Ok)
        }
        Command::CheckLemmas {
            matrix,
            random,
            seed,
            eps,
            norm,
            nx,
            ny,
        } => check_lemmas(matrix, random, seed, eps, norm, nx, ny),
        Command::ReproducePaper {
            table,
            strict,
            dump_fixtures: dump,
        } => {
            if let Some(dir) = dump {
                for p in dump_fixtures(&dir)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            let mode = if strict { Mode::Strict } else { Mode::Lenient };
            let reports: Vec<TableReport> = if table.eq_ignore_ascii_case("all") {
                reproduce_all(mode)?
            } else {
                vec![reproduce_table(table.parse()?, mode)?]
            };
            let mut out = io::stdout().lock();
            for r in &reports {
                out.write_all(r.render().as_bytes())?;
                writeln!(out)?;
            }
            Ok(verdict(reports.iter().all(TableReport::passed)))
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Ok
    } else {
        Outcome::Violated
    }
}

fn print_json(v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(io::stdout().lock(), "{text}")?;
    Ok(())
}

fn load_vector(path: &Path) -> Result<CVector> {
    condspec::io::matrix_to_vector(&parse_matrix_file(path)?)
}

fn load_system(matrix: &Path, sys: &SystemArgs) -> Result<(CMatrix, CVector)> {
    Ok((parse_matrix_file(matrix)?, load_vector(&sys.y)?))
}

fn default_window(a: &CMatrix, quantity: Quantity, eps_max: f64, norm: NormKind) -> Result<f64> {
    Ok(1.1
        * match quantity {
            Quantity::Kappa => condspec_radius_bound(a, eps_max, norm)?,
            _ => operator_norm(a, norm) + eps_max,
        })
}

fn grid_command(args: GridArgs, quantity: Quantity) -> Result<Outcome> {
    let a = parse_matrix_file(&args.matrix)?;
    a.ensure_square()?;
    let eps_max = args.eps.iter().copied().fold(f64::NAN, f64::max);
    if quantity == Quantity::Kappa {
        if let Some(&bad) = args.eps.iter().find(|&&e| e > 1.0) {
            return Err(Error::InvalidEpsilon(bad));
        }
    }
    let grid = match args.grid {
        Some([a0, a1, b0, b1]) => GridSpec::new(a0, a1, b0, b1, args.nx, args.ny)?,
        None => {
            let r = if eps_max.is_finite() && eps_max > 0.0 {
                default_window(&a, quantity, eps_max, args.norm)?
            } else {
                1.0
            };
            GridSpec::centered(
                Complex64::new(0.0, 0.0),
                r.max(f64::MIN_POSITIVE),
                args.nx,
                args.ny,
            )?
        }
    };
    let cfg = RunConfig::new(args.norm, grid, args.eps, args.format, 0, 1e-12)?;

    let field = grid_eval(&a, &cfg.grid, quantity, cfg.norm)?;
    let contours = extract_contours(&field, &cfg.levels);

    let mut buf: Vec<u8> = Vec::new();
    match cfg.output_format {
        OutputFormat::Csv => emit_field_csv(&field, &mut buf)?,
        OutputFormat::Json => {
            let v = json!({
                "quantity": quantity.as_str(),
                "norm": cfg.norm.as_str(),
                "matrix": matrix_to_json(&a),
                "grid": grid_to_json(&cfg.grid),
                "field": field_to_json(&field),
                "contours": contours_to_json(&contours),
            });
            let text = serde_json::to_string(&v).map_err(|e| Error::Io(e.to_string()))?;
            buf.extend_from_slice(text.as_bytes());
            buf.push(b'\n');
        }
        OutputFormat::Svg => {
            buf.extend_from_slice(contours_to_svg(&contours, &cfg.grid).as_bytes())
        }
    }
    match args.output {
        Some(p) => fs::write(p, buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(Outcome::Ok)
}

fn random_matrix(rng: &mut ChaCha8Rng) -> CMatrix {
    let n = rng.random_range(1..=6);
    let real = rng.random_bool(0.3);
    CMatrix::from_fn(n, n, |_, _| {
        let re = rng.random_range(-1.0..1.0);
        let im = if real {
            0.0
        } else {
            rng.random_range(-1.0..1.0)
        };
        Complex64::new(re, im)
    })
}

fn check_lemmas(
    matrix: Option<PathBuf>,
    random: Option<usize>,
    seed: u64,
    eps: Vec<f64>,
    norm: NormKind,
    nx: usize,
    ny: usize,
) -> Result<Outcome> {
    let matrices: Vec<CMatrix> = match (matrix, random) {
        (Some(p), _) => vec![parse_matrix_file(&p)?],
        (None, Some(count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_matrix(&mut rng)).collect()
        }
        (None, None) => {
            return Err(Error::InvalidArgument(
                "give a matrix file or --random N".into(),
            ))
        }
    };
    let placeholder = GridSpec::new(-1.0, 1.0, -1.0, 1.0, nx, ny)?;
    let cfg = RunConfig::new(norm, placeholder, eps, OutputFormat::Json, seed, 1e-10)?;

    let mut all_passed = true;
    let mut entries = Vec::with_capacity(matrices.len());
    for (k, a) in matrices.iter().enumerate() {
        let radius = 1.1 * (operator_norm(a, norm) + cfg.max_level());
        let grid = GridSpec::centered(Complex64::new(0.0, 0.0), radius, nx, ny)?;
        let certs = check_inclusions(a, &cfg.levels, &grid, cfg.norm)?;
        all_passed &= certs.iter().all(|c| c.passed());
        entries.push(json!({
            "index": k,
            "matrix": matrix_to_json(a),
            "grid": grid_to_json(&grid),
            "certificates": certs.iter().map(JsonReport::to_json).collect::<Vec<_>>(),
        }));
    }
    print_json(&json!({
        "seed": cfg.seed,
        "norm": cfg.norm.as_str(),
        "levels": cfg.levels,
        "passed": all_passed,
        "matrices": entries,
    }))?;
    Ok(verdict(all_passed))
}
