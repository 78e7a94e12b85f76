//! Special functions and adaptive quadrature shared by the whole crate:
//! erf/erfc, the closed-form tail integral of `y^(b - c·ln y)`, Euclidean
//! ball volumes, and a Gauss–Kronrod adaptive integrator.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// The error function `erf(x) = (2/√π) ∫₀ˣ e^(−t²) dt`, extended to
/// negative arguments by oddness.
///
/// Backed by the FDLIBM implementation (via `libm`), accurate to within
/// a unit in the last place across the double range. Infinite arguments
/// return ±1; NaN is rejected.
pub fn erf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::InvalidInput("erf: NaN argument".into()));
    }
    Ok(libm::erf(x))
}

/// The complementary error function `erfc(x) = 1 − erf(x)`.
///
/// Computed directly (not as `1 − erf`) so that values stay relatively
/// accurate out to the underflow threshold near x ≈ 27.
pub fn erfc(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::InvalidInput("erfc: NaN argument".into()));
    }
    Ok(libm::erfc(x))
}

/// Closed form of the tail integral `∫_a^∞ y^(b − c·ln y) dy` for
/// `a ≥ 0`, real `b` and `c > 0`:
///
/// ```text
/// √(π/4c) · exp((b+1)²/4c) · erfc((2c·ln a − b − 1) / √(4c))
/// ```
///
/// At `a = 0` the `ln a → −∞` limit applies and the erfc factor is 2.
/// The integral diverges for `c ≤ 0`, which is rejected.
pub fn power_log_integral(a: f64, b: f64, c: f64) -> Result<f64> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::InvalidInput(format!(
            "power_log_integral: lower limit must be finite and >= 0, got {a}"
        )));
    }
    if !b.is_finite() {
        return Err(Error::InvalidInput(
            "power_log_integral: exponent offset must be finite".into(),
        ));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "power_log_integral: log coefficient must be > 0, got {c} (the integral diverges)"
        )));
    }
    let prefactor = (std::f64::consts::PI / (4.0 * c)).sqrt();
    let peak = ((b + 1.0) * (b + 1.0) / (4.0 * c)).exp();
    let tail = if a == 0.0 {
        2.0
    } else {
        libm::erfc((2.0 * c * a.ln() - b - 1.0) / (2.0 * c.sqrt()))
    };
    Ok(prefactor * peak * tail)
}

/// Volume of the Euclidean ball of dimension `n` and radius `r`:
/// `rⁿ π^(n/2) / (n/2)!` for even `n`, and
/// `rⁿ π^((n−1)/2) 2ⁿ ((n−1)/2)! / n!` for odd `n`.
pub fn ball_volume(n: usize, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("ball_volume: dimension must be >= 1".into()));
    }
    if n > 170 {
        // factorials overflow f64 beyond 170!
        return Err(Error::InvalidInput(format!(
            "ball_volume: dimension {n} too large for double precision"
        )));
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "ball_volume: radius must be finite and > 0, got {r}"
        )));
    }
    let pi = std::f64::consts::PI;
    let unit = if n % 2 == 0 {
        pi.powi((n / 2) as i32) / factorial(n / 2)
    } else {
        pi.powi(((n - 1) / 2) as i32) * 2f64.powi(n as i32) * factorial((n - 1) / 2)
            / factorial(n)
    };
    Ok(unit * r.powi(n as i32))
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the total integral.
    pub abs_tol: f64,
    /// Relative tolerance on the total integral.
    pub rel_tol: f64,
    /// Maximum number of interval bisections before giving up.
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    /// Build a spec, rejecting non-positive tolerances and a zero budget.
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "quadrature tolerances must be > 0, got abs {abs_tol}, rel {rel_tol}"
            )));
        }
        if max_subdivisions == 0 {
            return Err(Error::InvalidInput(
                "quadrature subdivision budget must be >= 1".into(),
            ));
        }
        Ok(Self { abs_tol, rel_tol, max_subdivisions })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

/// Result of an adaptive quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// The integral estimate.
    pub value: f64,
    /// A conservative bound on the error of `value`.
    pub error_estimate: f64,
    /// Number of bisections performed.
    pub subdivisions: usize,
}

// 15-point Kronrod nodes on [-1, 1] (positive half; symmetric) and the
// matching weights, together with the embedded 7-point Gauss weights.
// Standard QUADPACK dqk15 constants.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One evaluated subinterval: Kronrod value plus |K15 − G7| as its error.
#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fa, fb) = if x == 0.0 {
            let v = f(center);
            (v, 0.0)
        } else {
            (f(center - half * x), f(center + half * x))
        };
        if !fa.is_finite() || !fb.is_finite() {
            return Err(Error::InvalidInput(format!(
                "integrand returned a non-finite value near {}",
                center - half * x
            )));
        }
        let pair = if x == 0.0 { fa } else { fa + fb };
        kronrod += wk * pair;
        // odd Kronrod indices (and the center) are the embedded Gauss nodes
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    Ok(Segment { lo, hi, value: kronrod, error: (kronrod - gauss).abs() })
}

/// Adaptive Gauss–Kronrod integration of `f` over `[lo, hi]`.
///
/// `hi` may be `f64::INFINITY`, in which case the integral is mapped onto
/// `(0, 1]` by `u = lo − ln t`; the integrand must then decay at least as
/// fast as a Gaussian tail (true of every integrand in this crate) and must
/// return 0.0 rather than NaN when it underflows.
///
/// Worst-error intervals are bisected first. If the budget in `spec` runs
/// out, [`Error::ConvergenceFailure`] carries the best estimate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if lo.is_nan() || hi.is_nan() || lo.is_infinite() {
        return Err(Error::InvalidInput(format!(
            "integrate: bad interval [{lo}, {hi}]"
        )));
    }
    if hi.is_infinite() {
        let g = move |t: f64| {
            let u = lo - t.ln();
            f(u) / t
        };
        return integrate_finite(&g, 0.0, 1.0, spec);
    }
    integrate_finite(&f, lo, hi, spec)
}

fn integrate_finite<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if lo == hi {
        return Ok(Quadrature { value: 0.0, error_estimate: 0.0, subdivisions: 0 });
    }
    let (lo, hi, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };

    let mut heap = BinaryHeap::new();
    heap.push(gauss_kronrod(f, lo, hi)?);
    let mut subdivisions = 0usize;

    loop {
        let total: f64 = heap.iter().map(|s| s.value).sum();
        let err: f64 = heap.iter().map(|s| s.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if err <= target {
            return Ok(Quadrature {
                value: sign * total,
                error_estimate: err,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::ConvergenceFailure {
                estimate: sign * total,
                error_estimate: err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval no longer splittable in f64; accept its estimate
            let mut exhausted = worst;
            exhausted.error = 0.0;
            heap.push(exhausted);
            continue;
        }
        heap.push(gauss_kronrod(f, worst.lo, mid)?);
        heap.push(gauss_kronrod(f, mid, worst.hi)?);
        subdivisions += 1;
    }
}

/// `ln(sinh u)` without overflow for large `u`.
pub(crate) fn ln_sinh(u: f64) -> f64 {
    if u > 20.0 {
        // sinh u = e^u (1 - e^{-2u}) / 2
        u + (-(-2.0 * u).exp()).ln_1p() - std::f64::consts::LN_2
    } else {
        u.sinh().ln()
    }
}
