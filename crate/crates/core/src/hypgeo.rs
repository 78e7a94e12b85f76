//! Poincaré half-space and ball models of hyperbolic n-space: validated
//! points, distances, the standard isometry between the models, rotations
//! about the half-plane point (0, 1), geodesic midpoints and exponential
//! steps along geodesics.
//!
//! Curvature is fixed at −1. Both models share Euclidean coordinates:
//! the half-space model is `{x : x_n > 0}` with metric `|dx| / x_n`, the
//! ball model is `{x : |x| < 1}` with metric `2|dx| / (1 − |x|²)`.

use crate::error::{Error, Result};

/// Which Poincaré model a point lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Upper half-space: last coordinate strictly positive.
    HalfSpace,
    /// Open unit ball.
    Ball,
}

/// A validated point of hyperbolic n-space in one of the two models.
///
/// Coordinates are checked at construction; operations on points assume
/// validity and only re-check cheaply (model and dimension agreement,
/// debug assertions on interior-ness).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    model: Model,
    coords: Vec<f64>,
}

impl ModelPoint {
    /// Build a point, validating the model's defining inequality.
    pub fn new(model: Model, coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a point needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate in {coords:?}"
            )));
        }
        match model {
            Model::HalfSpace => {
                let last = *coords.last().expect("non-empty");
                if last <= 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "half-space point needs a positive last coordinate, got {last}"
                    )));
                }
            }
            Model::Ball => {
                let norm_sq = norm_sq(&coords);
                if norm_sq >= 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "ball point needs |x| < 1, got |x|^2 = {norm_sq}"
                    )));
                }
            }
        }
        Ok(Self { model, coords })
    }

    /// Half-space point.
    pub fn half_space(coords: Vec<f64>) -> Result<Self> {
        Self::new(Model::HalfSpace, coords)
    }

    /// Ball point.
    pub fn ball(coords: Vec<f64>) -> Result<Self> {
        Self::new(Model::Ball, coords)
    }

    /// The center of the ball model in dimension `n`.
    pub fn ball_origin(n: usize) -> Self {
        Self { model: Model::Ball, coords: vec![0.0; n] }
    }

    /// The model this point lives in.
    pub fn model(&self) -> Model {
        self.model
    }

    /// Dimension n of the ambient hyperbolic space.
    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// Model coordinates.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Hyperbolic distance to another point of the same model and dimension.
    pub fn distance_to(&self, other: &Self) -> Result<f64> {
        distance(self, other)
    }

    /// Transfer to the ball model (identity if already there).
    pub fn to_ball(&self) -> Result<Self> {
        match self.model {
            Model::Ball => Ok(self.clone()),
            Model::HalfSpace => {
                let img = half_space_to_ball_coords(&self.coords);
                Self::new(Model::Ball, img).map_err(|_| {
                    Error::BoundaryDegeneracy(format!(
                        "image of {:?} landed on the unit sphere",
                        self.coords
                    ))
                })
            }
        }
    }

    /// Transfer to the half-space model (identity if already there).
    pub fn to_half_space(&self) -> Result<Self> {
        match self.model {
            Model::HalfSpace => Ok(self.clone()),
            Model::Ball => {
                let img = ball_to_half_space_coords(&self.coords);
                Self::new(Model::HalfSpace, img).map_err(|_| {
                    Error::BoundaryDegeneracy(format!(
                        "image of {:?} landed on the half-space boundary",
                        self.coords
                    ))
                })
            }
        }
    }

    /// Rotation of the hyperbolic plane about (0, 1): the Möbius map
    /// `z ↦ (z cos θ + sin θ) / (−z sin θ + cos θ)` with `θ = kπ/m`,
    /// acting on the half-plane read as complex numbers.
    ///
    /// Fixes (0, 1), preserves distances, and `k = 0` (or any multiple
    /// of `m`) is the identity. Only defined for n = 2 half-space points.
    pub fn rotate_about_i(&self, k: i64, m: u32) -> Result<Self> {
        if self.model != Model::HalfSpace {
            return Err(Error::ModelMismatch {
                expected: Model::HalfSpace,
                found: self.model,
            });
        }
        if self.dimension() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.dimension() });
        }
        if m == 0 {
            return Err(Error::InvalidInput("rotation order must be >= 1".into()));
        }
        let theta = k as f64 * std::f64::consts::PI / m as f64;
        let (s, c) = theta.sin_cos();
        let (x, y) = (self.coords[0], self.coords[1]);
        // (z c + s)(conj(-z s + c)) / |-z s + c|^2 with z = x + iy,
        // where -z s + c = (c - x s) - i y s
        let re_num = (x * c + s) * (c - x * s) - (y * c) * (y * s);
        let im_num = (x * c + s) * (y * s) + (y * c) * (c - x * s);
        let den = (c - x * s) * (c - x * s) + (y * s) * (y * s);
        Self::new(Model::HalfSpace, vec![re_num / den, im_num / den]).map_err(|_| {
            Error::BoundaryDegeneracy("rotation image left the half-plane".into())
        })
    }
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum()
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn same_shape(x: &ModelPoint, y: &ModelPoint, model: Model) -> Result<()> {
    if x.model != model {
        return Err(Error::ModelMismatch { expected: model, found: x.model });
    }
    if y.model != model {
        return Err(Error::ModelMismatch { expected: model, found: y.model });
    }
    if x.dimension() != y.dimension() {
        return Err(Error::DimensionMismatch {
            expected: x.dimension(),
            found: y.dimension(),
        });
    }
    Ok(())
}

/// Hyperbolic distance between two points of the same model and dimension.
pub fn distance(x: &ModelPoint, y: &ModelPoint) -> Result<f64> {
    if x.model != y.model {
        return Err(Error::ModelMismatch { expected: x.model, found: y.model });
    }
    match x.model {
        Model::HalfSpace => half_space_distance(x, y),
        Model::Ball => ball_distance(x, y),
    }
}

/// Distance in the half-space model,
/// `ln((|x − ȳ| + |x − y|) / (|x − ȳ| − |x − y|))` with `ȳ` the reflection
/// of `y` in the boundary (last coordinate negated).
///
/// Evaluated as `2 artanh(|x − y| / |x − ȳ|)`, which is exact in the same
/// cases and does not cancel when the points are close together or close
/// to the boundary.
pub fn half_space_distance(x: &ModelPoint, y: &ModelPoint) -> Result<f64> {
    same_shape(x, y, Model::HalfSpace)?;
    Ok(half_space_distance_coords(&x.coords, &y.coords))
}

pub(crate) fn half_space_distance_coords(x: &[f64], y: &[f64]) -> f64 {
    debug_assert!(*x.last().unwrap() > 0.0 && *y.last().unwrap() > 0.0);
    let n = x.len();
    let mut reflected = dist_sq(&x[..n - 1], &y[..n - 1]);
    let sum_last = x[n - 1] + y[n - 1];
    reflected += sum_last * sum_last;
    let direct = dist_sq(x, y);
    2.0 * (direct / reflected).sqrt().atanh()
}

/// Distance in the ball model,
/// `ln((s + |x − y|) / (s − |x − y|))` with
/// `s = √((1 − |x|²)(1 − |y|²) + |x − y|²)`, evaluated as
/// `2 artanh(|x − y| / s)`.
pub fn ball_distance(x: &ModelPoint, y: &ModelPoint) -> Result<f64> {
    same_shape(x, y, Model::Ball)?;
    Ok(ball_distance_coords(&x.coords, &y.coords))
}

pub(crate) fn ball_distance_coords(x: &[f64], y: &[f64]) -> f64 {
    debug_assert!(norm_sq(x) < 1.0 && norm_sq(y) < 1.0);
    let diff_sq = dist_sq(x, y);
    let s_sq = (1.0 - norm_sq(x)) * (1.0 - norm_sq(y)) + diff_sq;
    2.0 * (diff_sq / s_sq).sqrt().atanh()
}

/// Isometry from the half-space model onto the ball model:
/// `x ↦ 2 (x + p)* / |x + p|² + p` with `p = (0, …, 0, 1)`, where `*`
/// negates the last coordinate (reflection in the boundary, the real-
/// coordinate reading of complex conjugation).
pub(crate) fn half_space_to_ball_coords(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w: Vec<f64> = x.to_vec();
    w[n - 1] += 1.0; // x + p
    let scale = 2.0 / norm_sq(&w);
    w[n - 1] = -w[n - 1]; // conjugate
    let mut img: Vec<f64> = w.iter().map(|c| c * scale).collect();
    img[n - 1] += 1.0; // + p
    img
}

/// Inverse isometry, ball onto half-space:
/// `x ↦ 2 (x − p)* / |x − p|² − p`.
pub(crate) fn ball_to_half_space_coords(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w: Vec<f64> = x.to_vec();
    w[n - 1] -= 1.0; // x - p
    let scale = 2.0 / norm_sq(&w);
    w[n - 1] = -w[n - 1];
    let mut img: Vec<f64> = w.iter().map(|c| c * scale).collect();
    img[n - 1] -= 1.0; // - p
    img
}

/// Möbius addition `a ⊕ x` on the open unit ball:
///
/// ```text
/// a ⊕ x = ((1 + 2⟨a,x⟩ + |x|²) a + (1 − |a|²) x) / (1 + 2⟨a,x⟩ + |a|²|x|²)
/// ```
///
/// As a function of `x` this is the hyperbolic translation carrying the
/// ball center to `a`; `(−a) ⊕ ·` is its inverse.
pub fn ball_translate(a: &ModelPoint, x: &ModelPoint) -> Result<ModelPoint> {
    same_shape(a, x, Model::Ball)?;
    ModelPoint::new(Model::Ball, mobius_add(&a.coords, &x.coords))
        .map_err(|_| Error::BoundaryDegeneracy("translation image left the ball".into()))
}

pub(crate) fn mobius_add(a: &[f64], x: &[f64]) -> Vec<f64> {
    let ax: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
    let na = norm_sq(a);
    let nx = norm_sq(x);
    let ca = 1.0 + 2.0 * ax + nx;
    let cx = 1.0 - na;
    let den = 1.0 + 2.0 * ax + na * nx;
    a.iter().zip(x).map(|(p, q)| (ca * p + cx * q) / den).collect()
}

/// Hyperbolic midpoint of the geodesic segment from `x` to `y`:
/// `d(m, x) = d(m, y) = d(x, y) / 2`.
///
/// Computed by translating `x` to the ball center, where the geodesic to
/// the image of `y` is a Euclidean ray and the midpoint sits at radius
/// `tanh(d/4)`, then translating back.
pub fn geodesic_midpoint(x: &ModelPoint, y: &ModelPoint) -> Result<ModelPoint> {
    if x.model != y.model {
        return Err(Error::ModelMismatch { expected: x.model, found: y.model });
    }
    if x.dimension() != y.dimension() {
        return Err(Error::DimensionMismatch {
            expected: x.dimension(),
            found: y.dimension(),
        });
    }
    if x.coords == y.coords {
        return Ok(x.clone());
    }
    let xb = x.to_ball()?;
    let yb = y.to_ball()?;
    let neg_a: Vec<f64> = xb.coords.iter().map(|c| -c).collect();
    let shifted = mobius_add(&neg_a, &yb.coords);
    let rho = norm_sq(&shifted).sqrt();
    // |shifted| = tanh(d/2); the midpoint sits at tanh(d/4) = rho/(1+sqrt(1-rho^2))
    let rho_mid = rho / (1.0 + (1.0 - rho * rho).max(0.0).sqrt());
    let scale = rho_mid / rho;
    let mid_shifted: Vec<f64> = shifted.iter().map(|c| c * scale).collect();
    let mid = ModelPoint::new(Model::Ball, mobius_add(&xb.coords, &mid_shifted))
        .map_err(|_| Error::BoundaryDegeneracy("midpoint left the ball".into()))?;
    match x.model {
        Model::Ball => Ok(mid),
        Model::HalfSpace => mid.to_half_space(),
    }
}

/// The point at hyperbolic distance `r ≥ 0` from `origin` along `direction`.
///
/// `direction` must be a Euclidean unit vector (within 1e-12); it is read
/// in the frame obtained by translating `origin` to the ball center, where
/// the step lands at Euclidean radius `tanh(r/2)`. The result is returned
/// in the model of `origin`, and `distance(origin, result) = r`.
pub fn point_at_distance(origin: &ModelPoint, direction: &[f64], r: f64) -> Result<ModelPoint> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidInput(format!(
            "step length must be finite and >= 0, got {r}"
        )));
    }
    if direction.len() != origin.dimension() {
        return Err(Error::DimensionMismatch {
            expected: origin.dimension(),
            found: direction.len(),
        });
    }
    let len = norm_sq(direction).sqrt();
    if (len - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "direction must be a unit vector, got |v| = {len}"
        )));
    }
    let ob = origin.to_ball()?;
    let rho = (r / 2.0).tanh();
    let step: Vec<f64> = direction.iter().map(|c| c * rho).collect();
    let out = ModelPoint::new(Model::Ball, mobius_add(&ob.coords, &step))
        .map_err(|_| Error::BoundaryDegeneracy("step left the ball".into()))?;
    match origin.model() {
        Model::Ball => Ok(out),
        Model::HalfSpace => out.to_half_space(),
    }
}
