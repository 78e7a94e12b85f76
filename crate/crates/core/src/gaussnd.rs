//! The radially symmetric Gaussian density on hyperbolic n-space, n ≥ 2:
//!
//! ```text
//! g(x) = k · exp(−d²(x, μ) / 2σ²)
//! ```
//!
//! with respect to the hyperbolic volume element, where the normalization
//! constant
//!
//! ```text
//! k = 1 / (n · V(Bⁿ₁) · ∫₀^∞ exp(−u²/2σ²) (sinh u)^(n−1) du)
//! ```
//!
//! depends only on the dimension and the variance — not on the mean and
//! not on the model. Unlike the Euclidean case, the density does not
//! factor into lower-dimensional Gaussians, so `k ≠ (2πσ²)^(−n/2)`.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::hypgeo::{distance, mobius_add, Model, ModelPoint};
use crate::specfun::{ball_volume, integrate, ln_sinh, QuadratureSpec};

/// Iteration budget for one radial rejection draw.
const MAX_REJECTION_ATTEMPTS: u64 = 1_000_000;

/// Normalization constant of the hyperbolic Gaussian in dimension `n ≥ 2`
/// with variance `sigma2`, by adaptive quadrature of the radial integral.
pub fn normalization_constant(n: usize, sigma2: f64, quad: &QuadratureSpec) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "normalization_constant: dimension must be >= 2, got {n}"
        )));
    }
    if !sigma2.is_finite() || sigma2 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "normalization_constant: variance must be > 0, got {sigma2}"
        )));
    }
    let radial = integrate(
        |u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                (-u * u / (2.0 * sigma2) + (n as f64 - 1.0) * ln_sinh(u)).exp()
            }
        },
        0.0,
        f64::INFINITY,
        quad,
    )?;
    Ok(1.0 / (n as f64 * ball_volume(n, 1.0)? * radial.value))
}

/// Closed form of the normalization constant in the hyperbolic plane:
/// `1 / (√(2σ²π³) · exp(σ²/2) · erf(√(σ²/2)))`.
pub fn normalization_constant_h2(sigma2: f64) -> Result<f64> {
    if !sigma2.is_finite() || sigma2 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "normalization_constant_h2: variance must be > 0, got {sigma2}"
        )));
    }
    let pi = std::f64::consts::PI;
    Ok(1.0
        / ((2.0 * sigma2 * pi.powi(3)).sqrt()
            * (sigma2 / 2.0).exp()
            * libm::erf((sigma2 / 2.0).sqrt())))
}

/// Hyperbolic Gaussian on n-space (n ≥ 2): mean point, variance, and the
/// cached normalization constant.
///
/// Immutable after construction; the sampler takes the generator by
/// mutable reference, so one distribution can serve many threads each
/// driving its own stream.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperGaussianND {
    mean: ModelPoint,
    mean_ball: Vec<f64>,
    variance: f64,
    norm_const: f64,
    quad: QuadratureSpec,
}

impl HyperGaussianND {
    /// Build with the default quadrature spec.
    pub fn new(mean: ModelPoint, variance: f64) -> Result<Self> {
        Self::with_quadrature(mean, variance, QuadratureSpec::default())
    }

    /// Build with an explicit quadrature spec for the normalization
    /// integral. The constant is computed once and cached.
    pub fn with_quadrature(
        mean: ModelPoint,
        variance: f64,
        quad: QuadratureSpec,
    ) -> Result<Self> {
        let n = mean.dimension();
        let norm_const = normalization_constant(n, variance, &quad)?;
        let mean_ball = mean.to_ball()?.coords().to_vec();
        Ok(Self { mean, mean_ball, variance, norm_const, quad })
    }

    /// The mean point μ.
    pub fn mean(&self) -> &ModelPoint {
        &self.mean
    }

    /// The variance σ².
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// The cached normalization constant, which is also the maximum
    /// density value, attained at the mean.
    pub fn normalization(&self) -> f64 {
        self.norm_const
    }

    /// Dimension n of the ambient space.
    pub fn dimension(&self) -> usize {
        self.mean.dimension()
    }

    /// The quadrature spec used for the normalization integral.
    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    /// Density at `x`, which must live in the same model and dimension as
    /// the mean. Depends on `x` only through `d(x, μ)`, so level sets are
    /// hyperbolic spheres centred at the mean.
    pub fn pdf(&self, x: &ModelPoint) -> Result<f64> {
        if x.model() != self.mean.model() {
            return Err(Error::ModelMismatch {
                expected: self.mean.model(),
                found: x.model(),
            });
        }
        if x.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.dimension(),
            });
        }
        let d = distance(x, &self.mean)?;
        Ok(self.norm_const * (-d * d / (2.0 * self.variance)).exp())
    }

    /// Draw the radial part: density proportional to
    /// `exp(−r²/2σ²) (sinh r)^(n−1)` on r > 0.
    ///
    /// Rejection sampling against the envelope
    /// `exp(−r²/2σ² + (n−1)r) / 2^(n−1)` — a Gaussian with mean
    /// `(n−1)σ²` truncated to r > 0 — accepting with probability
    /// `(sinh r · 2/e^r)^(n−1) = (1 − e^(−2r))^(n−1) ∈ (0, 1]`.
    pub fn sample_radius<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let n = self.dimension() as f64;
        let proposal = Normal::new((n - 1.0) * self.variance, self.variance.sqrt())
            .expect("variance > 0");
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            let r = proposal.sample(rng);
            if r <= 0.0 {
                continue;
            }
            let accept = (1.0 - (-2.0 * r).exp()).powi(self.dimension() as i32 - 1);
            if rng.gen::<f64>() < accept {
                return Ok(r);
            }
        }
        Err(Error::SamplingFailure { attempts: MAX_REJECTION_ATTEMPTS })
    }

    /// Draw one point: uniform direction on the unit sphere about the
    /// mean, radius from [`Self::sample_radius`], placed by stepping from
    /// the ball center and translating the center to the mean. Returned
    /// in the model of the mean.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ModelPoint> {
        let r = self.sample_radius(rng)?;
        let dir = unit_vector(self.dimension(), rng);
        let rho = (r / 2.0).tanh();
        let step: Vec<f64> = dir.iter().map(|c| c * rho).collect();
        let ball = ModelPoint::new(Model::Ball, mobius_add(&self.mean_ball, &step))
            .map_err(|_| Error::BoundaryDegeneracy("sample left the ball".into()))?;
        match self.mean.model() {
            Model::Ball => Ok(ball),
            Model::HalfSpace => ball.to_half_space(),
        }
    }
}

/// Uniform direction on the unit (n−1)-sphere: normalized Gaussian vector.
fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn plane_constant_matches_closed_form() {
        for &s2 in &[0.1, 0.25, 0.5, 1.0, 2.0] {
            let quad = normalization_constant(2, s2, &spec()).unwrap();
            let closed = normalization_constant_h2(s2).unwrap();
            assert!(
                ((quad - closed) / closed).abs() < 1e-8,
                "sigma2 {s2}: {quad} vs {closed}"
            );
        }
    }

    #[test]
    fn plane_constant_frozen_values() {
        let k1 = normalization_constant_h2(1.0).unwrap();
        assert!((k1 - 0.112_820_945_200_708_8).abs() < 1e-14);
        let k025 = normalization_constant_h2(0.25).unwrap();
        assert!((k025 - 0.585_315_123_110_316_8).abs() < 1e-13);
    }

    #[test]
    fn three_space_constant_frozen_value() {
        let k = normalization_constant(3, 0.5, &spec()).unwrap();
        assert!((k - 0.104_515_521_930_544).abs() < 1e-9, "got {k}");
    }

    #[test]
    fn constant_rejects_bad_domain() {
        assert!(normalization_constant(1, 1.0, &spec()).is_err());
        assert!(normalization_constant(2, 0.0, &spec()).is_err());
        assert!(normalization_constant(2, -1.0, &spec()).is_err());
        assert!(normalization_constant_h2(f64::NAN).is_err());
    }

    /// Full-space mass computed in ball coordinates (the pre-substitution
    /// radial integral), an independent route to the same number.
    fn ball_form_mass(n: usize, sigma2: f64, k: f64) -> f64 {
        let nf = n as f64;
        let shell = nf * ball_volume(n, 1.0).unwrap();
        let q = integrate(
            |rho: f64| {
                if rho <= 0.0 || rho >= 1.0 {
                    return 0.0;
                }
                let u = 2.0 * rho.atanh();
                let log_metric = nf * (2.0 / (1.0 - rho * rho)).ln();
                let log_shell = (nf - 1.0) * rho.ln();
                (-u * u / (2.0 * sigma2) + log_metric + log_shell).exp()
            },
            0.0,
            1.0,
            &spec(),
        )
        .unwrap();
        k * shell * q.value
    }

    #[test]
    fn density_integrates_to_one() {
        for &n in &[2usize, 3, 4] {
            for &s2 in &[0.25, 1.0] {
                let k = normalization_constant(n, s2, &spec()).unwrap();
                let mass = ball_form_mass(n, s2, k);
                assert!(
                    (mass - 1.0).abs() < 1e-8,
                    "n={n} sigma2={s2}: mass {mass}"
                );
            }
        }
    }

    #[test]
    fn density_integrates_to_one_n3_tight() {
        let k = normalization_constant(3, 0.5, &spec()).unwrap();
        let mass = ball_form_mass(3, 0.5, k);
        assert!((mass - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pdf_examples() {
        let mean = ModelPoint::half_space(vec![0.0, 1.0]).unwrap();
        let g = HyperGaussianND::new(mean.clone(), 1.0).unwrap();
        let k = g.normalization();
        assert_eq!(g.pdf(&mean).unwrap(), k);
        // point at distance 1 from the mean along the vertical geodesic
        let x = ModelPoint::half_space(vec![0.0, (-1.0f64).exp()]).unwrap();
        let v = g.pdf(&x).unwrap();
        assert!((v - k * (-0.5f64).exp()).abs() < 1e-12 * k);
    }

    #[test]
    fn pdf_is_radially_symmetric() {
        let mean = ModelPoint::half_space(vec![0.0, 1.0]).unwrap();
        let g = HyperGaussianND::new(mean, 0.7).unwrap();
        // both at distance 1 from (0,1): above and below on the geodesic
        let up = ModelPoint::half_space(vec![0.0, 1.0f64.exp()]).unwrap();
        let down = ModelPoint::half_space(vec![0.0, (-1.0f64).exp()]).unwrap();
        let a = g.pdf(&up).unwrap();
        let b = g.pdf(&down).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn pdf_rejects_mismatches() {
        let mean = ModelPoint::half_space(vec![0.0, 1.0]).unwrap();
        let g = HyperGaussianND::new(mean, 1.0).unwrap();
        let ball = ModelPoint::ball(vec![0.0, 0.0]).unwrap();
        assert!(matches!(g.pdf(&ball), Err(Error::ModelMismatch { .. })));
        let three = ModelPoint::half_space(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(g.pdf(&three), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pdf_agrees_across_models() {
        let mean_h = ModelPoint::half_space(vec![0.3, 0.9]).unwrap();
        let g_h = HyperGaussianND::new(mean_h.clone(), 0.5).unwrap();
        let g_b = HyperGaussianND::new(mean_h.to_ball().unwrap(), 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = ModelPoint::half_space(vec![
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.05..4.0),
            ])
            .unwrap();
            let a = g_h.pdf(&x).unwrap();
            let b = g_b.pdf(&x.to_ball().unwrap()).unwrap();
            assert!((a - b).abs() < 1e-10 * a.max(1e-300));
        }
    }

    #[test]
    fn pdf_is_invariant_under_rotation_of_both_arguments() {
        let mean = ModelPoint::half_space(vec![0.2, 0.8]).unwrap();
        let g = HyperGaussianND::new(mean.clone(), 1.3).unwrap();
        let x = ModelPoint::half_space(vec![-0.4, 1.7]).unwrap();
        let v0 = g.pdf(&x).unwrap();
        for k in 1..8 {
            let g_rot =
                HyperGaussianND::new(mean.rotate_about_i(k, 8).unwrap(), 1.3).unwrap();
            let v = g_rot.pdf(&x.rotate_about_i(k, 8).unwrap()).unwrap();
            assert!((v - v0).abs() < 1e-10 * v0);
        }
    }

    #[test]
    fn pdf_decays_monotonically_in_distance() {
        let g = HyperGaussianND::new(ModelPoint::ball_origin(2), 0.8).unwrap();
        let mut prev = g.normalization();
        for i in 1..40 {
            let rho = 0.024 * i as f64;
            let v = g.pdf(&ModelPoint::ball(vec![rho, 0.0]).unwrap()).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn no_product_structure_in_the_plane() {
        // Euclidean Gaussians factor coordinate-wise and the constant obeys
        // k_n = k_1^n; neither happens here.
        let s2 = 1.0;
        let k2 = normalization_constant_h2(s2).unwrap();
        let k1_squared = 1.0 / (2.0 * std::f64::consts::PI * s2);
        assert!((k2 - k1_squared).abs() > 0.04);

        // pointwise: density at a plane point vs the product of the 1-D
        // hyperbolic density in the vertical coordinate and a Euclidean
        // Gaussian in the horizontal one
        let mean = ModelPoint::half_space(vec![0.0, 1.0]).unwrap();
        let g = HyperGaussianND::new(mean, s2).unwrap();
        let x = ModelPoint::half_space(vec![0.5, 1.3]).unwrap();
        let joint = g.pdf(&x).unwrap();
        let line = crate::gauss1d::HyperGaussian1D::new(1.0, s2).unwrap();
        let vertical = line.pdf(1.3).unwrap();
        let horizontal = (-0.25 / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2).sqrt();
        let product = vertical * horizontal;
        assert!((joint - product).abs() > 1e-3 * joint);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let g = HyperGaussianND::new(ModelPoint::ball_origin(2), 1.0).unwrap();
        let draw = |seed: u64| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (0..16)
                .map(|_| g.sample(&mut rng).unwrap().coords().to_vec())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }

    #[test]
    fn sampler_radius_matches_quadrature_moments() {
        let g = HyperGaussianND::new(ModelPoint::ball_origin(2), 1.0).unwrap();
        // quadrature oracle for E[r] and Var[r] of the radial density
        let w = |r: f64| {
            if r <= 0.0 {
                0.0
            } else {
                (-r * r / 2.0 + ln_sinh(r)).exp()
            }
        };
        let z = integrate(&w, 0.0, f64::INFINITY, &spec()).unwrap().value;
        let m1 = integrate(|r| r * w(r), 0.0, f64::INFINITY, &spec()).unwrap().value / z;
        let m2 =
            integrate(|r| r * r * w(r), 0.0, f64::INFINITY, &spec()).unwrap().value / z;
        assert!((m1 - 1.464_794_773_491_544).abs() < 1e-10);
        let var = m2 - m1 * m1;

        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let n = 200_000usize;
        let mut sum = 0.0;
        for _ in 0..n {
            sum += g.sample_radius(&mut rng).unwrap();
        }
        let mean_r = sum / n as f64;
        let se = (var / n as f64).sqrt();
        assert!(
            (mean_r - m1).abs() < 3.0 * se,
            "mean radius {mean_r} vs {m1} (se {se})"
        );
    }

    #[test]
    fn sampler_ball_mass_matches_quadrature() {
        let g = HyperGaussianND::new(ModelPoint::ball_origin(2), 1.0).unwrap();
        let w = |r: f64| {
            if r <= 0.0 {
                0.0
            } else {
                (-r * r / 2.0 + ln_sinh(r)).exp()
            }
        };
        let z = integrate(&w, 0.0, f64::INFINITY, &spec()).unwrap().value;
        let mut rng = ChaCha12Rng::seed_from_u64(123);
        let n = 200_000usize;
        let radii: Vec<f64> = (0..n).map(|_| g.sample_radius(&mut rng).unwrap()).collect();
        for &r_cut in &[1.0, 2.0] {
            let expect = integrate(&w, 0.0, r_cut, &spec()).unwrap().value / z;
            let got = radii.iter().filter(|&&r| r < r_cut).count() as f64 / n as f64;
            let se = (expect * (1.0 - expect) / n as f64).sqrt();
            assert!(
                (got - expect).abs() < 3.0 * se,
                "mass inside {r_cut}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn sample_distance_distribution_about_offcenter_mean() {
        // translating the mean must not distort radial distances
        let mean = ModelPoint::half_space(vec![0.7, 0.4]).unwrap();
        let g = HyperGaussianND::new(mean.clone(), 0.25).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(4242);
        let n = 50_000usize;
        let mut sum = 0.0;
        for _ in 0..n {
            let p = g.sample(&mut rng).unwrap();
            sum += distance(&p, &mean).unwrap();
        }
        let w = |r: f64| {
            if r <= 0.0 {
                0.0
            } else {
                (-r * r / 0.5 + ln_sinh(r)).exp()
            }
        };
        let z = integrate(&w, 0.0, f64::INFINITY, &spec()).unwrap().value;
        let m1 = integrate(|r| r * w(r), 0.0, f64::INFINITY, &spec()).unwrap().value / z;
        let m2 =
            integrate(|r| r * r * w(r), 0.0, f64::INFINITY, &spec()).unwrap().value / z;
        let se = ((m2 - m1 * m1) / n as f64).sqrt();
        assert!((sum / n as f64 - m1).abs() < 4.0 * se);
    }

    #[test]
    fn pathological_variance_reports_sampling_failure() {
        let g = HyperGaussianND::new(
            ModelPoint::ball_origin(40),
            1e-8,
        )
        .unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        assert!(matches!(
            g.sample_radius(&mut rng),
            Err(Error::SamplingFailure { .. })
        ));
    }
}
