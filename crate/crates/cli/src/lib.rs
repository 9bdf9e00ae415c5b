//! Command-line front end for `grasspack`.
//!
//! Every summary is printed as `key=value` lines with 17 significant digits.
//! Exit codes: 0 on success, 1 when an input fails to parse or verify, 2 on
//! usage errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use grasspack::binocular::{parse_pairs, write_pairs, BinocularCode};
use grasspack::bounds::{
    certify, max_orthoplex_n, max_simplex_n, orthoplex_bound, simplex_bound, BoundKind, DEFAULT_TOL,
};
use grasspack::catalog::{dump_tsv, lookup, verify_against_record, TABLE_TOL};
use grasspack::clifford::{clifford_orbit, theorem3_packing};
use grasspack::embedding::{
    embedding_dimension, embedding_space_dim, projection, sphere_radius_squared,
};
use grasspack::gpack::{parse_gpack, write_gpack};
use grasspack::numfmt::g17;
use grasspack::optimizer::{detect_rattlers, optimize, OptimizerConfig, RATTLER_TOL};
use grasspack::packing::{min_distance, Metric, Packing};
use grasspack::subspace::ORTHONORMAL_TOL;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Number of bins in `verify --hist`.
pub const HIST_BINS: usize = 50;

#[derive(Debug, Parser)]
#[command(
    name = "grasspack",
    version,
    about = "Packings of subspaces in Grassmannian spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a packing by multi-start optimization.
    Optimize {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        count: usize,
        #[arg(long, default_value = "chordal")]
        metric: Metric,
        #[arg(long, default_value_t = 100)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop once the minimum distance reaches this value.
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the minimum distance of a .gpack file and check its generators.
    Verify {
        file: PathBuf,
        /// Also print a pairwise-distance histogram.
        #[arg(long)]
        hist: bool,
    },
    /// Print the simplex and orthoplex bounds.
    Bound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        count: usize,
    },
    /// Compare a packing with the bound that governs its size.
    Certify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Build the Clifford-group packing in G(2^i, 2^k).
    Clifford {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert between planes in R^4 and pairs of points on two 2-spheres.
    Binocular {
        #[command(subcommand)]
        direction: Direction,
    },
    /// Print the embedding dimension and sphere-radius residual of a packing.
    Embed { file: PathBuf },
    /// Stored record packings.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum Direction {
    /// .gpack of planes in R^4 to a pairs file.
    ToPairs { file: PathBuf },
    /// Pairs file to a .gpack of planes.
    ToPlanes { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// Every record as tab-separated values.
    Dump,
    /// A single record.
    Lookup {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        count: usize,
        #[arg(long, default_value = "chordal")]
        metric: Metric,
    },
}

/// Failure of a command after argument parsing.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<grasspack::error::Error> for Failure {
    fn from(e: grasspack::error::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line `argv` (including the program name).
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Optimize {
            m,
            n,
            count,
            metric,
            starts,
            seed,
            target,
            out: path,
        } => cmd_optimize(out, (m, n, count), metric, starts, seed, target, &path),
        Command::Verify { file, hist } => cmd_verify(out, &file, hist),
        Command::Bound { m, n, count } => cmd_bound(out, m, n, count),
        Command::Certify { file, tol } => cmd_certify(out, &file, tol),
        Command::Clifford { i, k, out: path } => cmd_clifford(out, i, k, &path),
        Command::Binocular { direction } => match direction {
            Direction::ToPairs { file } => {
                let code = BinocularCode::from_packing(&read_packing(&file)?)?;
                out.write_all(write_pairs(&code.pairs).as_bytes())?;
                Ok(EXIT_OK)
            }
            Direction::ToPlanes { file } => {
                let pairs = parse_pairs(&read_text(&file)?)?;
                let packing = BinocularCode { pairs }.to_packing(Metric::Chordal)?;
                out.write_all(write_gpack(&packing, &[]).as_bytes())?;
                Ok(EXIT_OK)
            }
        },
        Command::Embed { file } => cmd_embed(out, &file),
        Command::Catalog { action } => match action {
            CatalogAction::Dump => {
                out.write_all(dump_tsv().as_bytes())?;
                Ok(EXIT_OK)
            }
            CatalogAction::Lookup {
                m,
                n,
                count,
                metric,
            } => cmd_lookup(out, m, n, count, metric),
        },
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))
}

fn read_packing(path: &Path) -> Result<Packing, Failure> {
    let data = parse_gpack(&read_text(path)?)
        .map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
    Ok(data.into_packing()?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))
}

fn kv(out: &mut dyn Write, key: &str, value: impl std::fmt::Display) -> std::io::Result<()> {
    writeln!(out, "{key}={value}")
}

fn cmd_optimize(
    out: &mut dyn Write,
    (m, n, count): (usize, usize, usize),
    metric: Metric,
    starts: usize,
    seed: u64,
    target: Option<f64>,
    path: &Path,
) -> Outcome {
    let config = OptimizerConfig {
        starts,
        seed,
        metric,
        target,
        ..OptimizerConfig::default()
    };
    let result = optimize(m, n, count, &config).map_err(|e| Failure::Usage(e.to_string()))?;
    let comments = [
        format!("optimize seed {seed} starts {starts}"),
        format!("best start {}", result.start_index),
    ];
    write_file(path, &write_gpack(&result.packing, &comments))?;
    let angle = min_distance(&result.packing, Metric::MaxAngle)?
        .value
        .to_degrees();
    writeln!(
        out,
        "min_d2={} angle_deg={} converged={}",
        g17(result.min_dist * result.min_dist),
        g17(angle),
        result.converged
    )?;
    Ok(EXIT_OK)
}

/// Upper end of the distance range under `metric` for `n`-spaces.
fn distance_ceiling(n: usize, metric: Metric) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    match metric {
        Metric::Chordal => (n as f64).sqrt(),
        Metric::Geodesic => (n as f64).sqrt() * half_pi,
        Metric::MaxAngle => half_pi,
    }
}

/// Counts of `values` in `bins` equal bins over `[0, hi]`, as (center, count).
pub fn histogram(values: &[f64], hi: f64, bins: usize) -> Vec<(f64, usize)> {
    let width = hi / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = ((v / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| ((k as f64 + 0.5) * width, c))
        .collect()
}

fn cmd_verify(out: &mut dyn Write, path: &Path, hist: bool) -> Outcome {
    let data = parse_gpack(&read_text(path)?)
        .map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
    let defect = data
        .orthonormality_defects()
        .into_iter()
        .fold(0.0, f64::max);
    kv(out, "m", data.m)?;
    kv(out, "n", data.n)?;
    kv(out, "N", data.generators.len())?;
    kv(out, "metric", data.metric)?;
    kv(out, "max_orthonormality_defect", g17(defect))?;
    if defect > ORTHONORMAL_TOL {
        kv(out, "valid", false)?;
        return Err(Failure::Failed(format!(
            "generators are not orthonormal (defect {} > {})",
            g17(defect),
            g17(ORTHONORMAL_TOL)
        )));
    }
    let packing = data.into_packing()?;
    let metric = packing.metric();
    let min = min_distance(&packing, metric)?;
    kv(out, "valid", true)?;
    kv(out, "min_distance", g17(min.value))?;
    kv(out, "min_d2", g17(min.value * min.value))?;
    kv(out, "min_pair", format!("{},{}", min.pair.0, min.pair.1))?;
    let rattlers = detect_rattlers(&packing, metric, RATTLER_TOL);
    kv(out, "rattlers", rattlers.len())?;
    if let Ok(cmp) = verify_against_record(&packing, TABLE_TOL) {
        kv(out, "record", g17(cmp.record.value))?;
        kv(out, "record_status", cmp.status)?;
    }
    if hist {
        let values: Vec<f64> = packing
            .pairwise(metric)
            .into_iter()
            .map(|(_, _, d)| d)
            .collect();
        for (center, count) in histogram(&values, distance_ceiling(packing.n(), metric), HIST_BINS)
        {
            writeln!(out, "{}\t{count}", g17(center))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bound(out: &mut dyn Write, m: usize, n: usize, count: usize) -> Outcome {
    let simplex = simplex_bound(m, n, count).map_err(|e| Failure::Usage(e.to_string()))?;
    let orthoplex = orthoplex_bound(m, n).map_err(|e| Failure::Usage(e.to_string()))?;
    let governing = BoundKind::governing(m, count);
    kv(out, "simplex_bound", g17(simplex))?;
    kv(out, "orthoplex_bound", g17(orthoplex))?;
    kv(out, "governing", governing)?;
    kv(
        out,
        "bound",
        g17(match governing {
            BoundKind::Simplex => simplex,
            BoundKind::Orthoplex => orthoplex,
        }),
    )?;
    kv(out, "max_simplex_N", max_simplex_n(m))?;
    kv(out, "max_orthoplex_N", max_orthoplex_n(m))?;
    kv(
        out,
        "orthoplex_attainable",
        governing == BoundKind::Orthoplex && count <= max_orthoplex_n(m),
    )?;
    Ok(EXIT_OK)
}

fn cmd_certify(out: &mut dyn Write, path: &Path, tol: f64) -> Outcome {
    if !(tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let report = certify(&read_packing(path)?, tol)?;
    kv(out, "m", report.m)?;
    kv(out, "n", report.n)?;
    kv(out, "N", report.count)?;
    kv(out, "simplex_bound", g17(report.simplex_bound))?;
    kv(out, "orthoplex_bound", g17(report.orthoplex_bound))?;
    kv(out, "applicable", report.applicable)?;
    kv(out, "min_d2", g17(report.min_d2))?;
    kv(out, "spread", g17(report.spread))?;
    if report.attained.is_attained() {
        kv(out, "attained", report.applicable)?;
    } else {
        kv(out, "attained", "no")?;
    }
    kv(out, "attainment", report.attained)?;
    kv(out, "tolerance", g17(report.tolerance_used))?;
    Ok(EXIT_OK)
}

fn cmd_clifford(out: &mut dyn Write, i: u32, k: u32, path: &Path) -> Outcome {
    let usage = |e: grasspack::error::Error| Failure::Usage(e.to_string());
    let exact = clifford_orbit(i, k).map_err(usage)?;
    let packing = theorem3_packing(i, k).map_err(usage)?;
    let comments = [format!("clifford i {i} k {k}")];
    write_file(path, &write_gpack(&packing, &comments))?;
    let exact_min = exact
        .min_chordal_squared()
        .expect("orbit has two or more members");
    kv(out, "m", packing.m())?;
    kv(out, "n", packing.n())?;
    kv(out, "N", packing.len())?;
    kv(out, "min_d2_exact", exact_min)?;
    kv(
        out,
        "min_d2",
        g17(min_distance(&packing, Metric::Chordal)?.value.powi(2)),
    )?;
    Ok(EXIT_OK)
}

fn cmd_embed(out: &mut dyn Write, path: &Path) -> Outcome {
    let packing = read_packing(path)?;
    let (m, n) = (packing.m(), packing.n());
    let r2 = sphere_radius_squared(m, n);
    let residual = packing
        .subspaces()
        .iter()
        .map(|s| (projection(s).embed_vec.norm_squared() - r2).abs())
        .fold(0.0, f64::max);
    kv(out, "embedding_dimension", embedding_dimension(&packing)?)?;
    kv(out, "ambient_dimension", embedding_space_dim(m))?;
    kv(out, "radius_squared", g17(r2))?;
    kv(out, "max_radius_residual", g17(residual))?;
    Ok(EXIT_OK)
}

fn cmd_lookup(out: &mut dyn Write, m: usize, n: usize, count: usize, metric: Metric) -> Outcome {
    let Some(r) = lookup(m, n, count, metric) else {
        return Err(Failure::Failed(format!(
            "no record for G({m},{n}), N = {count}, metric {metric}"
        )));
    };
    kv(out, "m", r.m)?;
    kv(out, "n", r.n)?;
    kv(out, "N", r.count)?;
    kv(out, "metric", r.metric)?;
    kv(out, "value", r.value)?;
    kv(
        out,
        "unit",
        if r.is_line_record() {
            "degrees"
        } else {
            "squared-distance"
        },
    )?;
    kv(out, "source", r.source)?;
    kv(out, "optimality", r.optimality)?;
    Ok(EXIT_OK)
}
