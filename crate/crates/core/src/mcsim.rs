//! Monte Carlo transmission simulation: draw noise around each signal,
//! decode by nearest signal in the native metric, and estimate the error
//! probability for comparison against the union bounds.
//!
//! Reproducibility contract: trials are partitioned into fixed-size
//! blocks, and the generator for block `b` of signal `k` is a ChaCha
//! stream derived from the master seed and the pair `(k, b)` alone. Block
//! results are integer error counts merged by addition, so the outcome is
//! identical for any worker count — a fixed `(seed, version)` pins every
//! estimate bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::codes::{
    bhattacharyya_bound, distance_in, union_bound_euclidean, union_bound_hyperbolic,
    voronoi_neighbors, BoundReport, Constellation, Space, UnionMode,
};
use crate::error::{Error, Result};
use crate::gaussnd::HyperGaussianND;
use crate::hypgeo::ModelPoint;

/// Trials per generator block; fixed so that results never depend on how
/// blocks are scheduled across workers.
const BLOCK_TRIALS: u64 = 8192;

/// Simulation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Number of noisy transmissions per signal.
    pub trials_per_signal: u64,
    /// Noise variance σ².
    pub sigma2: f64,
    /// Master seed for the substream tree.
    pub seed: u64,
    /// Worker threads; affects speed only, never results.
    pub workers: usize,
}

impl SimConfig {
    /// Convenience constructor running [`Self::validate`].
    pub fn new(trials_per_signal: u64, sigma2: f64, seed: u64, workers: usize) -> Result<Self> {
        let cfg = Self { trials_per_signal, sigma2, seed, workers };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Check invariants: at least one trial, positive variance, a worker.
    pub fn validate(&self) -> Result<()> {
        if self.trials_per_signal == 0 {
            return Err(Error::InvalidInput("trials_per_signal must be >= 1".into()));
        }
        if !self.sigma2.is_finite() || self.sigma2 <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "noise variance must be finite and > 0, got {}",
                self.sigma2
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidInput("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// An error-rate estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalEstimate {
    /// Trials behind the estimate.
    pub trials: u64,
    /// Decoding errors observed.
    pub errors: u64,
    /// Error-rate estimate `errors / trials`.
    pub p_hat: f64,
    /// `sqrt(p_hat (1 - p_hat) / trials)`.
    pub std_err: f64,
}

impl SignalEstimate {
    fn from_counts(errors: u64, trials: u64) -> Self {
        let p_hat = errors as f64 / trials as f64;
        let std_err = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
        Self { trials, errors, p_hat, std_err }
    }
}

/// Result of simulating every signal of a constellation at one variance.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// The variance simulated.
    pub sigma2: f64,
    /// One estimate per signal, in constellation order.
    pub per_signal: Vec<SignalEstimate>,
    /// Pooled estimate over all signals — the estimate of the mean error
    /// probability under equally likely transmission.
    pub overall: SignalEstimate,
}

/// Nearest-signal decoding in the constellation's native metric; ties go
/// to the lowest index. `received` must be valid coordinates for the
/// constellation's space.
pub fn decode(c: &Constellation, received: &[f64]) -> Result<usize> {
    if received.len() != c.dimension() {
        return Err(Error::DimensionMismatch {
            expected: c.dimension(),
            found: received.len(),
        });
    }
    if let Space::Hyperbolic(model) = c.space() {
        // validates interior-ness
        ModelPoint::new(model, received.to_vec())?;
    } else if received.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("received point has a non-finite coordinate".into()));
    }
    Ok(decode_unchecked(c, received))
}

/// [`decode`] for an already-validated model point; the model must match
/// the constellation's space.
pub fn decode_point(c: &Constellation, received: &ModelPoint) -> Result<usize> {
    match c.space() {
        Space::Hyperbolic(model) if model == received.model() => {
            decode(c, received.coords())
        }
        Space::Hyperbolic(model) => Err(Error::ModelMismatch {
            expected: model,
            found: received.model(),
        }),
        Space::Euclidean => Err(Error::UnsupportedMode(
            "decode_point: Euclidean constellations take raw coordinates".into(),
        )),
    }
}

fn decode_unchecked(c: &Constellation, received: &[f64]) -> usize {
    let space = c.space();
    let mut best = 0usize;
    let mut best_d = distance_in(space, received, c.signal(0));
    for k in 1..c.len() {
        let d = distance_in(space, received, c.signal(k));
        if d < best_d {
            best = k;
            best_d = d;
        }
    }
    best
}

fn expand_seed(seed: u64) -> [u8; 32] {
    // SplitMix64 expansion of the master seed into a ChaCha key
    let mut out = [0u8; 32];
    let mut state = seed;
    for chunk in out.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    out
}

fn substream(seed: u64, signal: usize, block: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::from_seed(expand_seed(seed));
    rng.set_stream(((signal as u64) << 40) | block);
    rng
}

/// Simulate every signal of `c` under noise of variance `cfg.sigma2`:
/// Euclidean constellations get i.i.d. axis-wise Gaussian noise, hyperbolic
/// ones get the radially symmetric hyperbolic Gaussian centred at the
/// transmitted signal. Deterministic in `(seed, version)` regardless of
/// `cfg.workers`.
pub fn simulate(c: &Constellation, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let m = c.len();
    if m >= (1 << 24) {
        return Err(Error::InvalidInput("too many signals for the substream layout".into()));
    }
    let blocks_per_signal = cfg.trials_per_signal.div_ceil(BLOCK_TRIALS);
    if blocks_per_signal >= (1 << 40) {
        return Err(Error::InvalidInput("too many trials for the substream layout".into()));
    }

    let noise: Option<Vec<HyperGaussianND>> = match c.space() {
        Space::Hyperbolic(_) => Some(
            (0..m)
                .map(|k| HyperGaussianND::new(c.signal_point(k)?, cfg.sigma2))
                .collect::<Result<Vec<_>>>()?,
        ),
        Space::Euclidean => None,
    };

    let mut blocks = Vec::with_capacity(m * blocks_per_signal as usize);
    for k in 0..m {
        let mut remaining = cfg.trials_per_signal;
        let mut b = 0u64;
        while remaining > 0 {
            let take = remaining.min(BLOCK_TRIALS);
            blocks.push((k, b, take));
            remaining -= take;
            b += 1;
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Concurrency(e.to_string()))?;

    let sigma = cfg.sigma2.sqrt();
    let counts: Vec<(usize, u64)> = pool.install(|| {
        blocks
            .par_iter()
            .map(|&(k, b, trials)| -> Result<(usize, u64)> {
                let mut rng = substream(cfg.seed, k, b);
                let mut errors = 0u64;
                match &noise {
                    Some(dists) => {
                        let g = &dists[k];
                        for _ in 0..trials {
                            let p = g.sample(&mut rng)?;
                            if decode_unchecked(c, p.coords()) != k {
                                errors += 1;
                            }
                        }
                    }
                    None => {
                        let normal = Normal::new(0.0, sigma).expect("sigma > 0");
                        let mut received = vec![0.0f64; c.dimension()];
                        for _ in 0..trials {
                            for (r, s) in received.iter_mut().zip(c.signal(k)) {
                                *r = s + normal.sample(&mut rng);
                            }
                            if decode_unchecked(c, &received) != k {
                                errors += 1;
                            }
                        }
                    }
                }
                Ok((k, errors))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut per_signal_errors = vec![0u64; m];
    for (k, e) in counts {
        per_signal_errors[k] += e;
    }
    let per_signal: Vec<SignalEstimate> = per_signal_errors
        .iter()
        .map(|&e| SignalEstimate::from_counts(e, cfg.trials_per_signal))
        .collect();
    let total_errors: u64 = per_signal_errors.iter().sum();
    let overall =
        SignalEstimate::from_counts(total_errors, cfg.trials_per_signal * m as u64);
    Ok(SimResult { sigma2: cfg.sigma2, per_signal, overall })
}

/// One variance step of a sweep: the simulation plus whichever bounds
/// apply to the constellation's space.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// The variance of this row.
    pub sigma2: f64,
    /// Monte Carlo estimates at this variance.
    pub result: SimResult,
    /// Union bound over Voronoi neighbors, when neighbor lists exist or
    /// are computable exactly (planar constellations).
    pub neighbors_bound: Option<BoundReport>,
    /// Union bound over all pairs (always available).
    pub all_pairs_bound: Option<BoundReport>,
    /// Bhattacharyya bound (Euclidean constellations only).
    pub bhattacharyya: Option<BoundReport>,
}

/// A sweep over a variance grid, exportable as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// One row per grid variance, in grid order.
    pub rows: Vec<SweepRow>,
}

/// Run [`simulate`] at every variance of `grid`, evaluating the bounds
/// alongside. `cfg.sigma2` is ignored in favor of the grid values.
pub fn sweep(c: &Constellation, grid: &[f64], cfg: &SimConfig) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("sweep: empty variance grid".into()));
    }
    // attach neighbor lists once if they are missing but computable
    let augmented: Option<Constellation> = if c.neighbors().is_none() && c.dimension() == 2 {
        voronoi_neighbors(c)
            .ok()
            .map(|nb| c.clone().with_neighbors(nb))
            .transpose()?
    } else {
        None
    };
    let with_neighbors: Option<&Constellation> = if c.neighbors().is_some() {
        Some(c)
    } else {
        augmented.as_ref()
    };

    let mut rows = Vec::with_capacity(grid.len());
    for &sigma2 in grid {
        let row_cfg = SimConfig { sigma2, ..cfg.clone() };
        let result = simulate(c, &row_cfg)?;
        let (neighbors_bound, all_pairs_bound, bhattacharyya) = match c.space() {
            Space::Euclidean => (
                with_neighbors
                    .map(|cn| union_bound_euclidean(cn, sigma2, UnionMode::Neighbors))
                    .transpose()?,
                Some(union_bound_euclidean(c, sigma2, UnionMode::AllPairs)?),
                Some(bhattacharyya_bound(c, sigma2)?),
            ),
            Space::Hyperbolic(_) => (
                with_neighbors
                    .map(|cn| union_bound_hyperbolic(cn, sigma2, UnionMode::Neighbors))
                    .transpose()?,
                Some(union_bound_hyperbolic(c, sigma2, UnionMode::AllPairs)?),
                None,
            ),
        };
        rows.push(SweepRow { sigma2, result, neighbors_bound, all_pairs_bound, bhattacharyya });
    }
    Ok(SweepTable { rows })
}

impl SweepTable {
    /// CSV header shared by [`Self::to_csv`] and the command-line tools.
    pub const CSV_HEADER: &'static str = "sigma2,signal_index,trials,errors,p_hat,std_err,\
                                          bound_neighbors,bound_allpairs,bound_bhattacharyya";

    /// Render the table: per-signal rows followed by a `mean` row for each
    /// variance. Floats use shortest round-trip formatting; inapplicable
    /// bound columns are left blank.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        let fmt_opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &self.rows {
            for (k, est) in row.result.per_signal.iter().enumerate() {
                let line = format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    row.sigma2,
                    k,
                    est.trials,
                    est.errors,
                    est.p_hat,
                    est.std_err,
                    fmt_opt(row.neighbors_bound.as_ref().map(|b| b.per_signal[k])),
                    fmt_opt(row.all_pairs_bound.as_ref().map(|b| b.per_signal[k])),
                    fmt_opt(row.bhattacharyya.as_ref().map(|b| b.per_signal[k])),
                );
                out.push_str(&line);
            }
            let est = &row.result.overall;
            let line = format!(
                "{},mean,{},{},{},{},{},{},{}\n",
                row.sigma2,
                est.trials,
                est.errors,
                est.p_hat,
                est.std_err,
                fmt_opt(row.neighbors_bound.as_ref().map(|b| b.mean_bound)),
                fmt_opt(row.all_pairs_bound.as_ref().map(|b| b.mean_bound)),
                fmt_opt(row.bhattacharyya.as_ref().map(|b| b.mean_bound)),
            );
            out.push_str(&line);
        }
        out
    }
}
