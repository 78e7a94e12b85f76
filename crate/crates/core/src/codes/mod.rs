//! Signal constellations and error-probability upper bounds.
//!
//! A constellation is an ordered set of distinct signals in either the
//! Euclidean plane/space or a Poincaré model of hyperbolic space, with
//! optional per-signal neighbor lists (the signals whose bisectors carry
//! faces of the Voronoi cell) and a geometric-uniformity flag.
//!
//! For equally likely signals under Gaussian noise of variance σ², the
//! mean error probability satisfies the union bound
//!
//! ```text
//! P_e ≤ (1/m) Σ_k Σ_j ½ erfc(d(s_k, s_kⱼ) / (2√(2σ²)))
//! ```
//!
//! with `d` the native metric and `j` ranging over the Voronoi neighbors
//! of `s_k` (or over all other signals when the neighbors are unknown).
//! The Euclidean all-pairs variant with `exp(−d²/8σ²)` terms is the
//! Bhattacharyya bound; for a geometrically uniform constellation the
//! whole bound collapses to the first signal's row.

mod voronoi;

pub use voronoi::voronoi_neighbors;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypgeo::{
    ball_distance_coords, half_space_distance_coords, Model, ModelPoint,
};

/// The ambient space of a constellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// Euclidean n-space with the usual metric.
    Euclidean,
    /// Hyperbolic n-space in the given Poincaré model.
    Hyperbolic(Model),
}

/// An ordered set of m ≥ 2 distinct signals in one space.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    space: Space,
    dimension: usize,
    signals: Vec<Vec<f64>>,
    neighbors: Option<Vec<Vec<usize>>>,
    geometrically_uniform: bool,
}

impl Constellation {
    /// Build and validate: at least two signals, every signal of the given
    /// dimension, finite, inside its model, and pairwise distinct.
    pub fn new(space: Space, dimension: usize, signals: Vec<Vec<f64>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConstellation("dimension must be >= 1".into()));
        }
        if signals.len() < 2 {
            return Err(Error::InvalidConstellation(format!(
                "need at least 2 signals, got {}",
                signals.len()
            )));
        }
        for (k, s) in signals.iter().enumerate() {
            if s.len() != dimension {
                return Err(Error::InvalidConstellation(format!(
                    "signal {k} has dimension {}, expected {dimension}",
                    s.len()
                )));
            }
            if s.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidConstellation(format!(
                    "signal {k} has a non-finite coordinate"
                )));
            }
            if let Space::Hyperbolic(model) = space {
                ModelPoint::new(model, s.clone()).map_err(|e| {
                    Error::InvalidConstellation(format!("signal {k}: {e}"))
                })?;
            }
        }
        for k in 0..signals.len() {
            for j in (k + 1)..signals.len() {
                if signals[k] == signals[j] {
                    return Err(Error::InvalidConstellation(format!(
                        "signals {k} and {j} coincide"
                    )));
                }
            }
        }
        Ok(Self { space, dimension, signals, neighbors: None, geometrically_uniform: false })
    }

    /// Attach per-signal neighbor lists. Lists must exclude the signal
    /// itself, stay in range, and be symmetric: `j ∈ N(k) ⇔ k ∈ N(j)`.
    /// Stored sorted and deduplicated.
    pub fn with_neighbors(mut self, neighbors: Vec<Vec<usize>>) -> Result<Self> {
        let m = self.signals.len();
        if neighbors.len() != m {
            return Err(Error::InvalidConstellation(format!(
                "{} neighbor lists for {m} signals",
                neighbors.len()
            )));
        }
        let mut clean: Vec<Vec<usize>> = Vec::with_capacity(m);
        for (k, list) in neighbors.into_iter().enumerate() {
            let mut list = list;
            list.sort_unstable();
            list.dedup();
            for &j in &list {
                if j >= m {
                    return Err(Error::InvalidConstellation(format!(
                        "neighbor index {j} out of range for signal {k}"
                    )));
                }
                if j == k {
                    return Err(Error::InvalidConstellation(format!(
                        "signal {k} lists itself as a neighbor"
                    )));
                }
            }
            clean.push(list);
        }
        for k in 0..m {
            for &j in &clean[k] {
                if !clean[j].contains(&k) {
                    return Err(Error::InvalidConstellation(format!(
                        "neighbor lists not symmetric: {j} in N({k}) but {k} not in N({j})"
                    )));
                }
            }
        }
        self.neighbors = Some(clean);
        Ok(self)
    }

    /// Set the geometric-uniformity flag (an isometry group acts
    /// transitively on the signals).
    pub fn with_geometric_uniformity(mut self, flag: bool) -> Self {
        self.geometrically_uniform = flag;
        self
    }

    /// Number of signals m.
    pub fn len(&self) -> usize {
        self.signals.len()
    }

    /// Always false: a constellation has m ≥ 2 signals.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ambient space.
    pub fn space(&self) -> Space {
        self.space
    }

    /// Dimension n.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Signal coordinates, in order.
    pub fn signals(&self) -> &[Vec<f64>] {
        &self.signals
    }

    /// Coordinates of signal `k`.
    pub fn signal(&self, k: usize) -> &[f64] {
        &self.signals[k]
    }

    /// Signal `k` as a model point (hyperbolic spaces only).
    pub fn signal_point(&self, k: usize) -> Result<ModelPoint> {
        match self.space {
            Space::Hyperbolic(model) => ModelPoint::new(model, self.signals[k].clone()),
            Space::Euclidean => Err(Error::UnsupportedMode(
                "signal_point: Euclidean constellations have no model points".into(),
            )),
        }
    }

    /// Neighbor lists, when attached.
    pub fn neighbors(&self) -> Option<&Vec<Vec<usize>>> {
        self.neighbors.as_ref()
    }

    /// Whether the constellation is flagged geometrically uniform.
    pub fn is_geometrically_uniform(&self) -> bool {
        self.geometrically_uniform
    }

    /// Distance between signals `k` and `j` in the native metric.
    pub fn distance(&self, k: usize, j: usize) -> f64 {
        distance_in(self.space, &self.signals[k], &self.signals[j])
    }

    /// Serialize to the constellation JSON format.
    pub fn to_json(&self) -> String {
        let file = ConstellationFile {
            space: match self.space {
                Space::Euclidean => "euclidean",
                Space::Hyperbolic(Model::HalfSpace) => "hyperbolic-half",
                Space::Hyperbolic(Model::Ball) => "hyperbolic-ball",
            }
            .to_string(),
            dimension: self.dimension,
            signals: self.signals.clone(),
            neighbors: self.neighbors.clone(),
            geometrically_uniform: self.geometrically_uniform,
        };
        let mut s = serde_json::to_string_pretty(&file).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Parse and re-validate a constellation from its JSON format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConstellationFile = serde_json::from_str(text)
            .map_err(|e| Error::ConstellationIo(format!("parse error: {e}")))?;
        let space = match file.space.as_str() {
            "euclidean" => Space::Euclidean,
            "hyperbolic-half" => Space::Hyperbolic(Model::HalfSpace),
            "hyperbolic-ball" => Space::Hyperbolic(Model::Ball),
            other => {
                return Err(Error::ConstellationIo(format!(
                    "unknown space tag {other:?}"
                )))
            }
        };
        let mut c = Constellation::new(space, file.dimension, file.signals)?;
        if let Some(nb) = file.neighbors {
            c = c.with_neighbors(nb)?;
        }
        Ok(c.with_geometric_uniformity(file.geometrically_uniform))
    }

    /// Write the JSON format to a file.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| Error::ConstellationIo(format!("write {}: {e}", path.display())))
    }

    /// Load and re-validate from a file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConstellationIo(format!("read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

pub(crate) fn distance_in(space: Space, a: &[f64], b: &[f64]) -> f64 {
    match space {
        Space::Euclidean => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        Space::Hyperbolic(Model::HalfSpace) => half_space_distance_coords(a, b),
        Space::Hyperbolic(Model::Ball) => ball_distance_coords(a, b),
    }
}

#[derive(Serialize, Deserialize)]
struct ConstellationFile {
    space: String,
    dimension: usize,
    signals: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    neighbors: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    geometrically_uniform: bool,
}

/// M signals spaced uniformly on a Euclidean circle of the given radius,
/// enumerated clockwise from `(radius, 0)`.
pub fn make_mpsk(m: u32, radius: f64) -> Result<Constellation> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("make_mpsk: need m >= 2, got {m}")));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "make_mpsk: radius must be > 0, got {radius}"
        )));
    }
    let signals = (0..m)
        .map(|k| {
            let angle = -2.0 * std::f64::consts::PI * k as f64 / m as f64;
            vec![radius * angle.cos(), radius * angle.sin()]
        })
        .collect();
    let c = Constellation::new(Space::Euclidean, 2, signals)?;
    let nb = voronoi_neighbors(&c)?;
    Ok(c.with_neighbors(nb)?.with_geometric_uniformity(true))
}

/// M signals spaced uniformly on the hyperbolic circle of the given
/// hyperbolic radius about (0, 1) in the half-plane, generated by the
/// rotations [`ModelPoint::rotate_about_i`] acting on `(0, e^(−radius))`.
pub fn make_mhpsk(m: u32, hyper_radius: f64) -> Result<Constellation> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("make_mhpsk: need m >= 2, got {m}")));
    }
    if !hyper_radius.is_finite() || hyper_radius <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "make_mhpsk: radius must be > 0, got {hyper_radius}"
        )));
    }
    let seed = ModelPoint::half_space(vec![0.0, (-hyper_radius).exp()])?;
    let signals = (0..m)
        .map(|k| {
            seed.rotate_about_i(k as i64, m)
                .map(|p| p.coords().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let c = Constellation::new(Space::Hyperbolic(Model::HalfSpace), 2, signals)?;
    let nb = voronoi_neighbors(&c)?;
    Ok(c.with_neighbors(nb)?.with_geometric_uniformity(true))
}

/// Which pairs feed a union bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnionMode {
    /// Only Voronoi neighbors (requires neighbor lists).
    Neighbors,
    /// Every ordered pair; valid without neighbor knowledge, never smaller.
    AllPairs,
}

/// Which bound a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Union bound over Voronoi neighbors.
    UnionNeighbors,
    /// Union bound over all pairs.
    UnionAllPairs,
    /// Euclidean all-pairs exponential bound.
    Bhattacharyya,
    /// Single-row bound for geometrically uniform constellations.
    GeometricallyUniform,
}

/// One pairwise contribution to a bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    /// Transmitted signal index.
    pub from: usize,
    /// Competing signal index.
    pub to: usize,
    /// Native-metric distance between the two signals.
    pub distance: f64,
    /// The term's value.
    pub value: f64,
}

/// A computed error-probability upper bound with its per-signal rows and
/// every pairwise term, for audit and CSV export.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Which bound was computed.
    pub kind: BoundKind,
    /// Noise variance the bound was evaluated at.
    pub sigma2: f64,
    /// Per-signal bounds (one entry per contributing signal).
    pub per_signal: Vec<f64>,
    /// Mean bound over the contributing signals — the bound on P_e.
    pub mean_bound: f64,
    /// All pairwise terms, in row order.
    pub terms: Vec<PairTerm>,
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if !sigma2.is_finite() || sigma2 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "noise variance must be finite and > 0, got {sigma2}"
        )));
    }
    Ok(())
}

fn erfc_term(d: f64, sigma2: f64) -> f64 {
    0.5 * libm::erfc(d / (2.0 * (2.0 * sigma2).sqrt()))
}

fn union_bound(c: &Constellation, sigma2: f64, mode: UnionMode) -> Result<BoundReport> {
    check_sigma2(sigma2)?;
    let m = c.len();
    let mut per_signal = Vec::with_capacity(m);
    let mut terms = Vec::new();
    for k in 0..m {
        let mut row = 0.0;
        let js: Vec<usize> = match mode {
            UnionMode::Neighbors => {
                c.neighbors().ok_or(Error::MissingNeighbors)?[k].clone()
            }
            UnionMode::AllPairs => (0..m).filter(|&j| j != k).collect(),
        };
        for j in js {
            let d = c.distance(k, j);
            let value = erfc_term(d, sigma2);
            terms.push(PairTerm { from: k, to: j, distance: d, value });
            row += value;
        }
        per_signal.push(row);
    }
    let mean_bound = per_signal.iter().sum::<f64>() / m as f64;
    Ok(BoundReport {
        kind: match mode {
            UnionMode::Neighbors => BoundKind::UnionNeighbors,
            UnionMode::AllPairs => BoundKind::UnionAllPairs,
        },
        sigma2,
        per_signal,
        mean_bound,
        terms,
    })
}

/// Union bound for a Euclidean constellation under axis-wise Gaussian
/// noise: per-signal rows `Σ_j ½ erfc(|s_k − s_j| / (2√(2σ²)))`.
pub fn union_bound_euclidean(
    c: &Constellation,
    sigma2: f64,
    mode: UnionMode,
) -> Result<BoundReport> {
    if c.space() != Space::Euclidean {
        return Err(Error::UnsupportedMode(
            "union_bound_euclidean needs a Euclidean constellation".into(),
        ));
    }
    union_bound(c, sigma2, mode)
}

/// Union bound for a hyperbolic constellation under hyperbolic Gaussian
/// noise: the same rows with the hyperbolic distance in place of the
/// Euclidean one.
pub fn union_bound_hyperbolic(
    c: &Constellation,
    sigma2: f64,
    mode: UnionMode,
) -> Result<BoundReport> {
    if !matches!(c.space(), Space::Hyperbolic(_)) {
        return Err(Error::UnsupportedMode(
            "union_bound_hyperbolic needs a hyperbolic constellation".into(),
        ));
    }
    union_bound(c, sigma2, mode)
}

/// The Bhattacharyya bound for Euclidean constellations:
/// `P_e < (1/m) Σ_k Σ_{j≠k} exp(−|s_k − s_j|² / 8σ²)`.
///
/// Dominates the all-pairs union bound term by term, since
/// `½ erfc(x) < e^(−x²)`. No hyperbolic analogue is defined.
pub fn bhattacharyya_bound(c: &Constellation, sigma2: f64) -> Result<BoundReport> {
    if c.space() != Space::Euclidean {
        return Err(Error::UnsupportedMode(
            "the Bhattacharyya bound is only defined for Euclidean constellations".into(),
        ));
    }
    check_sigma2(sigma2)?;
    let m = c.len();
    let mut per_signal = Vec::with_capacity(m);
    let mut terms = Vec::new();
    for k in 0..m {
        let mut row = 0.0;
        for j in (0..m).filter(|&j| j != k) {
            let d = c.distance(k, j);
            let value = (-d * d / (8.0 * sigma2)).exp();
            terms.push(PairTerm { from: k, to: j, distance: d, value });
            row += value;
        }
        per_signal.push(row);
    }
    let mean_bound = per_signal.iter().sum::<f64>() / m as f64;
    Ok(BoundReport {
        kind: BoundKind::Bhattacharyya,
        sigma2,
        per_signal,
        mean_bound,
        terms,
    })
}

/// Bound for geometrically uniform constellations: the first signal's
/// neighbor row stands for every signal, in the native metric.
///
/// Requires the geometric-uniformity flag and a neighbor list for the
/// first signal.
pub fn geometrically_uniform_bound(c: &Constellation, sigma2: f64) -> Result<BoundReport> {
    if !c.is_geometrically_uniform() {
        return Err(Error::InvalidConstellation(
            "constellation is not flagged geometrically uniform".into(),
        ));
    }
    check_sigma2(sigma2)?;
    let neighbors = c.neighbors().ok_or(Error::MissingNeighbors)?;
    let mut row = 0.0;
    let mut terms = Vec::new();
    for &j in &neighbors[0] {
        let d = c.distance(0, j);
        let value = erfc_term(d, sigma2);
        terms.push(PairTerm { from: 0, to: j, distance: d, value });
        row += value;
    }
    Ok(BoundReport {
        kind: BoundKind::GeometricallyUniform,
        sigma2,
        per_signal: vec![row],
        mean_bound: row,
        terms,
    })
}
