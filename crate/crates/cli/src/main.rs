//! Command-line surface for constellation generation, bound evaluation,
//! density queries, and Monte Carlo error-rate estimation.
//!
//! Every subcommand is a thin adapter over the library: numeric output is
//! produced by the same calls a user of the crate would make. Data goes
//! to stdout or the file named by `--csv`; diagnostics go to stderr; the
//! exit code is zero exactly when the requested computation completed.

mod config;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hypersig::codes::{
    bhattacharyya_bound, geometrically_uniform_bound, make_mhpsk, make_mpsk,
    union_bound_euclidean, union_bound_hyperbolic, voronoi_neighbors,
};
use hypersig::gaussnd::{normalization_constant, normalization_constant_h2};
use hypersig::specfun::{ball_volume, integrate};
use hypersig::{
    BoundReport, Constellation, HyperGaussian1D, HyperGaussianND, Model, ModelPoint,
    QuadratureSpec, SimConfig, Space, SweepTable, UnionMode,
};

use config::{parse_coords, parse_grid, Defaults};

/// Environment variable supplying the default worker count.
const WORKERS_ENV: &str = "HYPERSIG_WORKERS";

#[derive(Parser)]
#[command(
    name = "hypersig",
    version,
    about = "Gaussian densities on hyperbolic space and error bounds for signal constellations"
)]
struct Cli {
    /// KEY=VALUE defaults file; explicit flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Equally spaced signals on a Euclidean circle.
    Mpsk,
    /// Equally spaced signals on a hyperbolic circle (half-plane model).
    Mhpsk,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundMode {
    /// Union bound over Voronoi neighbors.
    Neighbors,
    /// Union bound over all signal pairs.
    Allpairs,
    /// Euclidean exponential all-pairs bound.
    Bhattacharyya,
    /// Single-row bound for geometrically uniform constellations.
    Gu,
}

#[derive(Clone, Copy, ValueEnum)]
enum PdfSpace {
    /// The hyperbolic line (dimension 1).
    Line,
    /// Half-space model, dimension from the coordinates.
    HyperbolicHalf,
    /// Ball model, dimension from the coordinates.
    HyperbolicBall,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a constellation file.
    Gen {
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Number of signals.
        #[arg(long)]
        m: Option<u32>,
        /// Circle radius (Euclidean or hyperbolic, per kind).
        #[arg(long)]
        radius: Option<f64>,
        /// Output path for the constellation JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate an error-probability bound for a constellation file.
    Bound {
        #[arg(long)]
        constellation: PathBuf,
        #[arg(long)]
        sigma2: Option<f64>,
        #[arg(long, value_enum)]
        mode: Option<BoundMode>,
        /// Emit CSV instead of the text report.
        #[arg(long)]
        csv: bool,
    },
    /// Evaluate a hyperbolic Gaussian density at a point.
    PdfEval {
        #[arg(long, value_enum)]
        space: PdfSpace,
        /// Mean: one coordinate for `line`, a comma-separated list otherwise.
        #[arg(long)]
        mean: String,
        #[arg(long)]
        sigma2: Option<f64>,
        /// Query point, same format as the mean.
        #[arg(long)]
        point: String,
        /// For `line`: report the density against the Euclidean length
        /// element (the lognormal form) instead of the hyperbolic one.
        #[arg(long)]
        euclidean_form: bool,
    },
    /// Print the normalization constant of the hyperbolic Gaussian.
    Normalize {
        /// Dimension (>= 2).
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma2: Option<f64>,
        /// Also print the closed form (dimension 2) and the full-space
        /// mass of the resulting density as a self-check.
        #[arg(long)]
        verify: bool,
    },
    /// Monte Carlo error-rate estimate at one variance.
    Simulate {
        #[arg(long)]
        constellation: PathBuf,
        #[arg(long)]
        sigma2: Option<f64>,
        /// Trials per signal.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: HYPERSIG_WORKERS or all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Write the sweep-format CSV here instead of printing a summary.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte Carlo sweep over a variance grid, with bounds alongside.
    Sweep {
        #[arg(long)]
        constellation: PathBuf,
        /// Inclusive variance grid lo:hi:step.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Join two constellations' bounds (and optional simulations) on a
    /// shared variance grid.
    Compare {
        #[arg(long)]
        constellation_a: PathBuf,
        #[arg(long)]
        constellation_b: PathBuf,
        #[arg(long)]
        grid: Option<String>,
        /// Trials per signal; when present, empirical columns are added.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let defaults = Defaults::load(cli.config.as_deref())?;
    match cli.command {
        Command::Gen { kind, m, radius, out } => cmd_gen(&defaults, kind, m, radius, &out),
        Command::Bound { constellation, sigma2, mode, csv } => {
            cmd_bound(&defaults, &constellation, sigma2, mode, csv)
        }
        Command::PdfEval { space, mean, sigma2, point, euclidean_form } => {
            cmd_pdf_eval(&defaults, space, &mean, sigma2, &point, euclidean_form)
        }
        Command::Normalize { n, sigma2, verify } => cmd_normalize(&defaults, n, sigma2, verify),
        Command::Simulate { constellation, sigma2, trials, seed, workers, csv } => {
            cmd_simulate(&defaults, &constellation, sigma2, trials, seed, workers, csv)
        }
        Command::Sweep { constellation, grid, trials, seed, workers, csv } => {
            cmd_sweep(&defaults, &constellation, grid, trials, seed, workers, csv)
        }
        Command::Compare {
            constellation_a,
            constellation_b,
            grid,
            trials,
            seed,
            workers,
            csv,
        } => cmd_compare(
            &defaults,
            &constellation_a,
            &constellation_b,
            grid,
            trials,
            seed,
            workers,
            csv,
        ),
    }
}

fn resolve_workers(defaults: &Defaults, flag: Option<usize>) -> Result<usize> {
    if let Some(w) = flag {
        return Ok(w);
    }
    if let Some(w) = defaults.get::<usize>("workers")? {
        return Ok(w);
    }
    if let Ok(raw) = std::env::var(WORKERS_ENV) {
        return raw
            .parse::<usize>()
            .with_context(|| format!("{WORKERS_ENV}={raw:?}"));
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn resolve_grid(defaults: &Defaults, flag: Option<String>) -> Result<Vec<f64>> {
    let text: String = defaults.require(flag, "grid")?;
    parse_grid(&text)
}

fn sim_config(
    defaults: &Defaults,
    sigma2: f64,
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<SimConfig> {
    let trials = defaults.resolve(trials, "trials", 10_000)?;
    let seed = defaults.resolve(seed, "seed", 0)?;
    let workers = resolve_workers(defaults, workers)?;
    Ok(SimConfig::new(trials, sigma2, seed, workers)?)
}

/// Write a file atomically: stage to `<path>.tmp`, then rename. A failed
/// computation therefore never leaves a partial file behind.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let run = (|| -> Result<()> {
        std::fs::write(&tmp, contents)
            .with_context(|| format!("writing {}", tmp.display()))?;
        std::fs::rename(&tmp, path)
            .with_context(|| format!("renaming into {}", path.display()))?;
        Ok(())
    })();
    if run.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    run
}

fn emit_csv(csv: Option<&Path>, contents: &str) -> Result<()> {
    match csv {
        Some(path) => {
            write_atomic(path, contents)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

/// Attach exact neighbor lists when a file lacks them and the geometry
/// allows computing them.
fn ensure_neighbors(c: Constellation) -> Result<Constellation> {
    if c.neighbors().is_some() {
        return Ok(c);
    }
    if c.dimension() != 2 {
        bail!(
            "constellation has no neighbor lists and dimension {} > 2; \
             regenerate the file with neighbors or use --mode allpairs",
            c.dimension()
        );
    }
    eprintln!("note: computing Voronoi neighbors (file carried none)");
    let nb = voronoi_neighbors(&c)?;
    Ok(c.with_neighbors(nb)?)
}

fn cmd_gen(
    defaults: &Defaults,
    kind: Option<Kind>,
    m: Option<u32>,
    radius: Option<f64>,
    out: &Path,
) -> Result<()> {
    let kind = match kind {
        Some(k) => k,
        None => match defaults.get::<String>("kind")?.as_deref() {
            Some("mpsk") => Kind::Mpsk,
            Some("mhpsk") => Kind::Mhpsk,
            Some(other) => bail!("config kind={other:?} is not mpsk|mhpsk"),
            None => bail!("missing --kind (no flag and no config default)"),
        },
    };
    let m = defaults.require(m, "m")?;
    let radius = defaults.require(radius, "radius")?;
    let c = match kind {
        Kind::Mpsk => make_mpsk(m, radius)?,
        Kind::Mhpsk => make_mhpsk(m, radius)?,
    };
    write_atomic(out, &c.to_json())?;
    eprintln!("wrote {} ({} signals)", out.display(), c.len());
    Ok(())
}

fn bound_report_text(r: &BoundReport) -> String {
    let kind = match r.kind {
        hypersig::BoundKind::UnionNeighbors => "union-neighbors",
        hypersig::BoundKind::UnionAllPairs => "union-allpairs",
        hypersig::BoundKind::Bhattacharyya => "bhattacharyya",
        hypersig::BoundKind::GeometricallyUniform => "geometrically-uniform",
    };
    let mut out = format!("kind: {kind}\nsigma2: {}\nmean_bound: {}\n", r.sigma2, r.mean_bound);
    for (k, v) in r.per_signal.iter().enumerate() {
        out.push_str(&format!("signal {k}: {v}\n"));
    }
    out.push_str("terms (signal, neighbor, distance, value):\n");
    for t in &r.terms {
        out.push_str(&format!("  {} {} {} {}\n", t.from, t.to, t.distance, t.value));
    }
    out
}

fn bound_report_csv(r: &BoundReport) -> String {
    let mut out = String::from("level,signal,neighbor,distance,value\n");
    for t in &r.terms {
        out.push_str(&format!("term,{},{},{},{}\n", t.from, t.to, t.distance, t.value));
    }
    for (k, v) in r.per_signal.iter().enumerate() {
        out.push_str(&format!("signal,{k},,,{v}\n"));
    }
    out.push_str(&format!("mean,,,,{}\n", r.mean_bound));
    out
}

fn cmd_bound(
    defaults: &Defaults,
    path: &Path,
    sigma2: Option<f64>,
    mode: Option<BoundMode>,
    csv: bool,
) -> Result<()> {
    let sigma2: f64 = defaults.require(sigma2, "sigma2")?;
    let mode = match mode {
        Some(m) => m,
        None => match defaults.get::<String>("mode")?.as_deref() {
            Some("neighbors") => BoundMode::Neighbors,
            Some("allpairs") => BoundMode::Allpairs,
            Some("bhattacharyya") => BoundMode::Bhattacharyya,
            Some("gu") => BoundMode::Gu,
            Some(other) => bail!("config mode={other:?} unknown"),
            None => bail!("missing --mode (no flag and no config default)"),
        },
    };
    let c = Constellation::load(path)?;
    let report = match (mode, c.space()) {
        (BoundMode::Neighbors, Space::Euclidean) => {
            union_bound_euclidean(&ensure_neighbors(c)?, sigma2, UnionMode::Neighbors)?
        }
        (BoundMode::Neighbors, Space::Hyperbolic(_)) => {
            union_bound_hyperbolic(&ensure_neighbors(c)?, sigma2, UnionMode::Neighbors)?
        }
        (BoundMode::Allpairs, Space::Euclidean) => {
            union_bound_euclidean(&c, sigma2, UnionMode::AllPairs)?
        }
        (BoundMode::Allpairs, Space::Hyperbolic(_)) => {
            union_bound_hyperbolic(&c, sigma2, UnionMode::AllPairs)?
        }
        (BoundMode::Bhattacharyya, _) => bhattacharyya_bound(&c, sigma2)?,
        (BoundMode::Gu, _) => geometrically_uniform_bound(&ensure_neighbors(c)?, sigma2)?,
    };
    if csv {
        print!("{}", bound_report_csv(&report));
    } else {
        print!("{}", bound_report_text(&report));
    }
    Ok(())
}

fn cmd_pdf_eval(
    defaults: &Defaults,
    space: PdfSpace,
    mean: &str,
    sigma2: Option<f64>,
    point: &str,
    euclidean_form: bool,
) -> Result<()> {
    let sigma2: f64 = defaults.require(sigma2, "sigma2")?;
    let mean = parse_coords(mean)?;
    let point = parse_coords(point)?;
    let value = match space {
        PdfSpace::Line => {
            if mean.len() != 1 || point.len() != 1 {
                bail!("line densities take a single coordinate");
            }
            let g = HyperGaussian1D::new(mean[0], sigma2)?;
            if euclidean_form {
                g.pdf_euclidean(point[0])?
            } else {
                g.pdf(point[0])?
            }
        }
        PdfSpace::HyperbolicHalf | PdfSpace::HyperbolicBall => {
            if euclidean_form {
                bail!("--euclidean-form applies to the line density only");
            }
            let model = match space {
                PdfSpace::HyperbolicHalf => Model::HalfSpace,
                _ => Model::Ball,
            };
            let g = HyperGaussianND::new(ModelPoint::new(model, mean)?, sigma2)?;
            g.pdf(&ModelPoint::new(model, point)?)?
        }
    };
    println!("{value}");
    Ok(())
}

fn cmd_normalize(defaults: &Defaults, n: usize, sigma2: Option<f64>, verify: bool) -> Result<()> {
    let sigma2: f64 = defaults.require(sigma2, "sigma2")?;
    let quad = QuadratureSpec::default();
    let k = normalization_constant(n, sigma2, &quad)?;
    println!("k = {k}");
    if verify {
        if n == 2 {
            println!("closed_form = {}", normalization_constant_h2(sigma2)?);
        }
        // full-space mass in ball coordinates; must come back as 1
        let nf = n as f64;
        let shell = nf * ball_volume(n, 1.0)?;
        let mass = integrate(
            |rho: f64| {
                if rho <= 0.0 || rho >= 1.0 {
                    return 0.0;
                }
                let u = 2.0 * rho.atanh();
                (-u * u / (2.0 * sigma2)
                    + nf * (2.0 / (1.0 - rho * rho)).ln()
                    + (nf - 1.0) * rho.ln())
                .exp()
            },
            0.0,
            1.0,
            &quad,
        )?;
        println!("normalization_check = {}", k * shell * mass.value);
    }
    Ok(())
}

fn simulate_table(
    defaults: &Defaults,
    path: &Path,
    grid: &[f64],
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<SweepTable> {
    let c = Constellation::load(path)?;
    let cfg = sim_config(defaults, grid[0], trials, seed, workers)?;
    Ok(hypersig::mcsim::sweep(&c, grid, &cfg)?)
}

fn cmd_simulate(
    defaults: &Defaults,
    path: &Path,
    sigma2: Option<f64>,
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    csv: Option<PathBuf>,
) -> Result<()> {
    let sigma2: f64 = defaults.require(sigma2, "sigma2")?;
    let table = simulate_table(defaults, path, &[sigma2], trials, seed, workers)?;
    if csv.is_some() {
        return emit_csv(csv.as_deref(), &table.to_csv());
    }
    let row = &table.rows[0];
    println!("sigma2: {}", row.sigma2);
    for (k, est) in row.result.per_signal.iter().enumerate() {
        println!(
            "signal {k}: errors {}/{}  p_hat {}  std_err {}",
            est.errors, est.trials, est.p_hat, est.std_err
        );
    }
    let o = &row.result.overall;
    println!("mean: errors {}/{}  p_hat {}  std_err {}", o.errors, o.trials, o.p_hat, o.std_err);
    let fmt = |b: &Option<BoundReport>| {
        b.as_ref().map_or("-".to_string(), |r| r.mean_bound.to_string())
    };
    println!(
        "bounds: neighbors {}  allpairs {}  bhattacharyya {}",
        fmt(&row.neighbors_bound),
        fmt(&row.all_pairs_bound),
        fmt(&row.bhattacharyya)
    );
    Ok(())
}

fn cmd_sweep(
    defaults: &Defaults,
    path: &Path,
    grid: Option<String>,
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    csv: Option<PathBuf>,
) -> Result<()> {
    let grid = resolve_grid(defaults, grid)?;
    let table = simulate_table(defaults, path, &grid, trials, seed, workers)?;
    emit_csv(csv.as_deref(), &table.to_csv())
}

struct CompareSide {
    p_hat: Option<f64>,
    std_err: Option<f64>,
    neighbors: Option<f64>,
    all_pairs: Option<f64>,
    bhattacharyya: Option<f64>,
}

fn compare_side(
    defaults: &Defaults,
    path: &Path,
    grid: &[f64],
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<Vec<CompareSide>> {
    if trials.is_some() {
        let table = simulate_table(defaults, path, grid, trials, seed, workers)?;
        return Ok(table
            .rows
            .into_iter()
            .map(|row| CompareSide {
                p_hat: Some(row.result.overall.p_hat),
                std_err: Some(row.result.overall.std_err),
                neighbors: row.neighbors_bound.map(|b| b.mean_bound),
                all_pairs: row.all_pairs_bound.map(|b| b.mean_bound),
                bhattacharyya: row.bhattacharyya.map(|b| b.mean_bound),
            })
            .collect());
    }
    let c = ensure_neighbors(Constellation::load(path)?)?;
    grid.iter()
        .map(|&s2| {
            let (neighbors, all_pairs, bhattacharyya) = match c.space() {
                Space::Euclidean => (
                    union_bound_euclidean(&c, s2, UnionMode::Neighbors)?.mean_bound,
                    union_bound_euclidean(&c, s2, UnionMode::AllPairs)?.mean_bound,
                    Some(bhattacharyya_bound(&c, s2)?.mean_bound),
                ),
                Space::Hyperbolic(_) => (
                    union_bound_hyperbolic(&c, s2, UnionMode::Neighbors)?.mean_bound,
                    union_bound_hyperbolic(&c, s2, UnionMode::AllPairs)?.mean_bound,
                    None,
                ),
            };
            Ok(CompareSide {
                p_hat: None,
                std_err: None,
                neighbors: Some(neighbors),
                all_pairs: Some(all_pairs),
                bhattacharyya,
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    defaults: &Defaults,
    path_a: &Path,
    path_b: &Path,
    grid: Option<String>,
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    csv: Option<PathBuf>,
) -> Result<()> {
    let grid = resolve_grid(defaults, grid)?;
    let a = compare_side(defaults, path_a, &grid, trials, seed, workers)?;
    let b = compare_side(defaults, path_b, &grid, trials, seed, workers)?;
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = String::from(
        "sigma2,a_p_hat,a_std_err,a_bound_neighbors,a_bound_allpairs,a_bound_bhattacharyya,\
         b_p_hat,b_std_err,b_bound_neighbors,b_bound_allpairs,b_bound_bhattacharyya\n",
    );
    for ((s2, ra), rb) in grid.iter().zip(a).zip(b) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            s2,
            fmt(ra.p_hat),
            fmt(ra.std_err),
            fmt(ra.neighbors),
            fmt(ra.all_pairs),
            fmt(ra.bhattacharyya),
            fmt(rb.p_hat),
            fmt(rb.std_err),
            fmt(rb.neighbors),
            fmt(rb.all_pairs),
            fmt(rb.bhattacharyya),
        ));
    }
    emit_csv(csv.as_deref(), &out)
}
