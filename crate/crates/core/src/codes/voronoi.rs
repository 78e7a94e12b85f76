//! Exact Voronoi-neighbor determination for planar constellations.
//!
//! A signal `s_j` is a neighbor of `s_k` when the bisector of the pair
//! carries a face (a positive-length piece) of the Voronoi cell of `s_k`.
//!
//! For hyperbolic constellations the test runs in the hyperboloid
//! embedding: lifting signals onto the unit hyperboloid of Minkowski
//! 3-space turns every bisector into the plane `⟨x, S_k − S_j⟩ = 0` and
//! every cell into an intersection of linear half-spaces. Dividing by the
//! timelike coordinate projects the picture onto the Klein disk, where the
//! bisector is a chord and the cell constraints are half-planes, so
//! face-ness reduces to a 1-D interval intersection along the chord. The
//! Euclidean case uses the same interval test with the familiar affine
//! bisectors and no disk constraint.

use crate::codes::{Constellation, Space};
use crate::error::{Error, Result};
use crate::hypgeo::Model;

/// A bisector constraint row: points of the owner's cell satisfy
/// `⟨m, normal⟩ ≥ offset` in the reduced planar coordinates.
#[derive(Debug, Clone, Copy)]
struct Bisector {
    other: usize,
    normal: [f64; 2],
    offset: f64,
}

/// The linear description of one signal's Voronoi cell in the reduced
/// coordinates (Klein disk or Euclidean plane).
#[derive(Debug, Clone)]
struct VoronoiCell {
    rows: Vec<Bisector>,
    clipped_to_disk: bool,
}

/// A bisector segment shorter than this (in reduced coordinates) does not
/// count as a face; vertex contacts are classified as non-neighbors.
const FACE_TOL: f64 = 1e-9;

/// Feasibility slack for constraints parallel to the tested bisector.
const PARALLEL_SLACK: f64 = 1e-9;

impl VoronoiCell {
    /// Does the bisector toward `other` carry a face of this cell?
    fn has_face_toward(&self, other: usize) -> bool {
        let Some(line) = self.rows.iter().find(|r| r.other == other) else {
            return false;
        };
        let a = line.normal;
        let a_norm_sq = a[0] * a[0] + a[1] * a[1];
        if a_norm_sq == 0.0 {
            return false;
        }
        // foot of the perpendicular from the origin, and the line direction
        let scale = line.offset / a_norm_sq;
        let base = [a[0] * scale, a[1] * scale];
        let inv_len = a_norm_sq.sqrt().recip();
        let dir = [-a[1] * inv_len, a[0] * inv_len];

        let (mut lo, mut hi) = if self.clipped_to_disk {
            // chord of the unit disk: |base + t dir|^2 = 1
            let b_dot_d = base[0] * dir[0] + base[1] * dir[1];
            let disc = b_dot_d * b_dot_d + 1.0 - (base[0] * base[0] + base[1] * base[1]);
            if disc <= 0.0 {
                return false;
            }
            (-b_dot_d - disc.sqrt(), -b_dot_d + disc.sqrt())
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        };

        for row in &self.rows {
            if row.other == other {
                continue;
            }
            let g = row.normal[0] * dir[0] + row.normal[1] * dir[1];
            let h = row.offset - (row.normal[0] * base[0] + row.normal[1] * base[1]);
            let row_scale = (row.normal[0].powi(2) + row.normal[1].powi(2)).sqrt();
            if g.abs() <= 1e-14 * row_scale {
                if h > PARALLEL_SLACK {
                    return false;
                }
                continue;
            }
            let t = h / g;
            if g > 0.0 {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
            if hi - lo <= FACE_TOL {
                return false;
            }
        }
        hi - lo > FACE_TOL
    }
}

/// Lift every signal to the linear form used by the cell description:
/// `[m_x, m_y, offset-part]`, where a cell constraint between signals k
/// and i is `⟨m, lift_k.xy − lift_i.xy⟩ ≥ lift_k.z − lift_i.z`.
fn lift_signals(c: &Constellation) -> Result<Vec<[f64; 3]>> {
    let lifted = match c.space() {
        Space::Euclidean => c
            .signals()
            .iter()
            .map(|s| [s[0], s[1], 0.5 * (s[0] * s[0] + s[1] * s[1])])
            .collect(),
        Space::Hyperbolic(model) => {
            let mut out = Vec::with_capacity(c.len());
            for k in 0..c.len() {
                let u = match model {
                    Model::Ball => c.signal_point(k)?,
                    Model::HalfSpace => c.signal_point(k)?.to_ball()?,
                };
                let (x, y) = (u.coords()[0], u.coords()[1]);
                let denom = 1.0 - (x * x + y * y);
                out.push([2.0 * x / denom, 2.0 * y / denom, (1.0 + x * x + y * y) / denom]);
            }
            out
        }
    };
    Ok(lifted)
}

/// Exact per-signal Voronoi neighbor lists for a planar constellation.
///
/// The output lists are sorted, symmetric, and self-free. Dimensions
/// other than 2 are refused; callers there must supply neighbor lists or
/// fall back to the all-pairs bound.
pub fn voronoi_neighbors(c: &Constellation) -> Result<Vec<Vec<usize>>> {
    if c.dimension() != 2 {
        return Err(Error::UnsupportedExactNeighbors { dimension: c.dimension() });
    }
    let m = c.len();
    let lifts = lift_signals(c)?;
    let clipped_to_disk = matches!(c.space(), Space::Hyperbolic(_));

    let mut out = vec![Vec::new(); m];
    for k in 0..m {
        let cell = VoronoiCell {
            rows: (0..m)
                .filter(|&i| i != k)
                .map(|i| Bisector {
                    other: i,
                    normal: [lifts[k][0] - lifts[i][0], lifts[k][1] - lifts[i][1]],
                    offset: lifts[k][2] - lifts[i][2],
                })
                .collect(),
            clipped_to_disk,
        };
        // the feasible segment on bisector(k, j) is described by identical
        // constraints from either side, so one test serves both signals
        for j in (k + 1)..m {
            if cell.has_face_toward(j) {
                out[k].push(j);
                out[j].push(k);
            }
        }
    }
    for list in &mut out {
        list.sort_unstable();
    }
    Ok(out)
}
