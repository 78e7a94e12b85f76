//! Gaussian probability densities on Poincaré models of hyperbolic space,
//! and erfc union bounds on the transmission error probability of signal
//! constellations, with Monte Carlo validation.
//!
//! The crate is organized around six modules:
//!
//! * [`hypgeo`] — half-space and ball models: points, distances, isometries.
//! * [`specfun`] — erf/erfc, ball volumes, a closed-form tail integral, and
//!   adaptive Gauss–Kronrod quadrature.
//! * [`gauss1d`] — the Gaussian density on the hyperbolic line (the lognormal
//!   density seen through the hyperbolic metric).
//! * [`gaussnd`] — the radially symmetric Gaussian density on n-dimensional
//!   hyperbolic space, its normalization constant, and an exact sampler.
//! * [`codes`] — signal constellations, Voronoi neighbor determination, and
//!   union/Bhattacharyya error-probability bounds.
//! * [`mcsim`] — a reproducible, parallel Monte Carlo transmission simulator.

pub mod codes;
pub mod error;
pub mod gauss1d;
pub mod gaussnd;
pub mod hypgeo;
pub mod mcsim;
pub mod specfun;

pub use codes::{BoundKind, BoundReport, Constellation, PairTerm, Space, UnionMode};
pub use error::{Error, Result};
pub use gauss1d::HyperGaussian1D;
pub use gaussnd::HyperGaussianND;
pub use hypgeo::{Model, ModelPoint};
pub use mcsim::{SimConfig, SimResult, SweepRow, SweepTable};
pub use specfun::{Quadrature, QuadratureSpec};
