//! Inhomogeneous vorticity profiles and the non-Gaussian PDFs they induce.
//!
//! A Gaussian blob ω(x, 0) = e^{-α(x²+y²)/4} sheared by the equal-rate
//! hyperbolic flow stretches along z₁ = x + y = 0 and decays anisotropically:
//!
//!   ω(x, t) = (1 / 2α√(CD)) exp(-e^{2Ωt} z₁²/(16C) - e^{-2Ωt} z₂²/(16D))
//!
//! with C = ν(e^{2Ωt}-1)/4Ω + 1/2α and D = ν(1-e^{-2Ωt})/4Ω + 1/2α. When the
//! profile scale α is a uniformly distributed random variable, the pointwise
//! vorticity PDF follows from the change of variables
//! p(ω) = |dα/dω| p(α); the weak- and strong-inhomogeneity regimes admit
//! the closed densities below, and a seeded stratified Monte Carlo histogram
//! serves as their oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::infogeo::GriddedPdf;
use crate::numerics::{quad2d, RealGrid1d};
use crate::par;

/// Initial Gaussian vorticity profile of scale ℓ ~ α^{-1/2} under equal-rate
/// hyperbolic shear Ω with viscosity ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InhomogeneousField {
    pub alpha: f64,
    pub omega: f64,
    pub nu: f64,
}

/// Shear-aligned coordinates z₁ = x + y (stretching), z₂ = y - x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedCoords {
    pub z1: f64,
    pub z2: f64,
}

impl RotatedCoords {
    pub fn from_xy(x: f64, y: f64) -> Self {
        Self { z1: x + y, z2: y - x }
    }

    pub fn to_xy(self) -> (f64, f64) {
        ((self.z1 - self.z2) / 2.0, (self.z1 + self.z2) / 2.0)
    }
}

impl InhomogeneousField {
    pub fn new(alpha: f64, omega: f64, nu: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument("alpha must be positive".into()));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidArgument("omega must be positive".into()));
        }
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::InvalidArgument("nu must be nonnegative".into()));
        }
        Ok(Self { alpha, omega, nu })
    }

    /// Width parameters C and D; both reduce to 1/2α at t = 0.
    pub fn c_d(&self, t: f64) -> (f64, f64) {
        let f = self.nu / (4.0 * self.omega);
        let c = f * ((2.0 * self.omega * t).exp() - 1.0) + 1.0 / (2.0 * self.alpha);
        let d = f * (1.0 - (-2.0 * self.omega * t).exp()) + 1.0 / (2.0 * self.alpha);
        (c, d)
    }

    /// Closed-form vorticity at (x, y) and time t ≥ 0.
    pub fn vorticity(&self, t: f64, x: f64, y: f64) -> f64 {
        let (c, d) = self.c_d(t);
        let z = RotatedCoords::from_xy(x, y);
        let e2 = (2.0 * self.omega * t).exp();
        let pref = 1.0 / (2.0 * self.alpha * (c * d).sqrt());
        pref * (-e2 * z.z1 * z.z1 / (16.0 * c) - z.z2 * z.z2 / (e2 * 16.0 * d)).exp()
    }
}

/// Inverse-transform oracle for [`InhomogeneousField::vorticity`]: direct 2D
/// quadrature of Re ∫ e^{i k(t)·x} ω̃(k(t), t) in the sum/difference
/// variables (p, q), Jacobian 1/2.
pub fn vorticity_field_oracle(
    field: &InhomogeneousField,
    t: f64,
    x: f64,
    y: f64,
    k_half_width: f64,
    cells: usize,
) -> Result<f64> {
    let z = RotatedCoords::from_xy(x, y);
    let ep = (field.omega * t).exp();
    let em = (-field.omega * t).exp();
    let f = field.nu / (4.0 * field.omega);
    let wp = f * (ep * ep - 1.0) + 1.0 / (2.0 * field.alpha);
    let wq = f * (1.0 - em * em) + 1.0 / (2.0 * field.alpha);
    let pref = 0.5 / (field.alpha * std::f64::consts::PI);
    let v = quad2d(
        |p, q| {
            let phase = 0.5 * (p * ep * z.z1 + q * em * z.z2);
            phase.cos() * (-wp * p * p - wq * q * q).exp()
        },
        k_half_width,
        cells,
    )?;
    Ok(pref * v)
}

/// Uniform distribution of the profile scale α on [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEnsemble {
    pub lo: f64,
    pub hi: f64,
}

impl AlphaEnsemble {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidArgument("ensemble needs 0 <= lo < hi".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn density(&self) -> f64 {
        1.0 / (self.hi - self.lo)
    }

    pub fn contains(&self, alpha: f64) -> bool {
        alpha >= self.lo && alpha <= self.hi
    }
}

/// Ensemble for the weak-inhomogeneity regime: α ∈ [0, (2Ω/ν) e^{-2Ωt}].
pub fn weak_regime_ensemble(omega: f64, nu: f64, t: f64) -> Result<AlphaEnsemble> {
    AlphaEnsemble::new(0.0, 2.0 * omega / nu * (-2.0 * omega * t).exp())
}

/// Ensemble for the strong-inhomogeneity regime: α ∈ [2Ω/ν, α_c].
pub fn strong_regime_ensemble(omega: f64, nu: f64, alpha_c: f64) -> Result<AlphaEnsemble> {
    let lo = 2.0 * omega / nu;
    if alpha_c <= lo {
        return Err(Error::InvalidArgument(format!(
            "alpha_c must exceed 2*omega/nu = {lo}"
        )));
    }
    AlphaEnsemble::new(lo, alpha_c)
}

/// G₁ = e^{2Ωt} z₁² + e^{-2Ωt} z₂².
fn g1(omega: f64, t: f64, x: f64, y: f64) -> f64 {
    let z = RotatedCoords::from_xy(x, y);
    (2.0 * omega * t).exp() * z.z1 * z.z1 + (-2.0 * omega * t).exp() * z.z2 * z.z2
}

/// G₂ = (Ω/2ν)(z₁² + e^{-2Ωt} z₂²).
fn g2(omega: f64, nu: f64, t: f64, x: f64, y: f64) -> f64 {
    let z = RotatedCoords::from_xy(x, y);
    omega / (2.0 * nu) * (z.z1 * z.z1 + (-2.0 * omega * t).exp() * z.z2 * z.z2)
}

/// Weak-regime map α → ω: ω = e^{-α G₁ / 4}.
pub fn weak_regime_map(alpha: f64, omega: f64, t: f64, x: f64, y: f64) -> f64 {
    (-alpha * g1(omega, t, x, y) / 4.0).exp()
}

/// Strong-regime map α → ω: ω = (2Ω/αν) e^{-Ωt - G₂}.
pub fn strong_regime_map(alpha: f64, omega: f64, nu: f64, t: f64, x: f64, y: f64) -> f64 {
    2.0 * omega / (alpha * nu) * (-omega * t - g2(omega, nu, t, x, y)).exp()
}

/// Initial-time density p(ω, x, 0) = (4/ω r²) p(α) for ω in the image of the
/// ensemble; zero outside.
pub fn pdf_initial(omega: f64, r_sq: f64, ensemble: &AlphaEnsemble) -> Result<f64> {
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::InvalidArgument("omega must lie in (0, 1)".into()));
    }
    if !(r_sq > 0.0) {
        return Err(Error::InvalidArgument("r² must be positive".into()));
    }
    let alpha = -4.0 * omega.ln() / r_sq;
    if !ensemble.contains(alpha) {
        return Ok(0.0);
    }
    Ok(4.0 / (omega * r_sq) * ensemble.density())
}

/// Weak-inhomogeneity density 2ν / (ω Ω (z₁² + e^{-4Ωt} z₂²)) on its
/// support ω ∈ (e^{-(Ω/2ν)(z₁² + e^{-4Ωt} z₂²)}, 1]; zero outside.
pub fn pdf_weak_inhomogeneity(
    omega_v: f64,
    x: f64,
    y: f64,
    t: f64,
    omega: f64,
    nu: f64,
) -> f64 {
    let z = RotatedCoords::from_xy(x, y);
    let s = z.z1 * z.z1 + (-4.0 * omega * t).exp() * z.z2 * z.z2;
    let lower = (-(omega / (2.0 * nu)) * s).exp();
    if omega_v <= lower || omega_v > 1.0 {
        return 0.0;
    }
    2.0 * nu / (omega_v * omega * s)
}

/// Strong-inhomogeneity density (2Ω/ν) e^{-Ωt - G₂} / (ω² (α_c - 2Ω/ν)) on
/// ω ∈ [(2Ω/να_c) e^{-Ωt-G₂}, e^{-Ωt-G₂}]; zero outside.
pub fn pdf_strong_inhomogeneity(
    omega_v: f64,
    x: f64,
    y: f64,
    t: f64,
    omega: f64,
    nu: f64,
    alpha_c: f64,
) -> Result<f64> {
    let ensemble = strong_regime_ensemble(omega, nu, alpha_c)?;
    let edge = (-omega * t - g2(omega, nu, t, x, y)).exp();
    let lower = 2.0 * omega / (nu * alpha_c) * edge;
    if omega_v < lower || omega_v > edge {
        return Ok(0.0);
    }
    Ok(2.0 * omega / nu * edge / (omega_v * omega_v) * ensemble.density())
}

const MC_CHUNK: usize = 1 << 16;

/// Seeded stratified Monte Carlo histogram of p(ω) for a strictly monotone
/// map α → ω over a uniform ensemble.
///
/// One sample is drawn per stratum of the α-range, so the estimate is
/// deterministic for a given (seed, samples, bins) and independent of the
/// thread count (per-chunk RNG streams).
pub fn pdf_mc_oracle<F>(
    ensemble: &AlphaEnsemble,
    map: F,
    samples: usize,
    seed: u64,
    bins: usize,
) -> Result<GriddedPdf>
where
    F: Fn(f64) -> f64 + Sync,
{
    pdf_mc_impl(ensemble, map, samples, seed, bins, false)
}

/// Sequential twin of [`pdf_mc_oracle`]; used by the benchmark suite.
#[doc(hidden)]
pub fn pdf_mc_oracle_seq<F>(
    ensemble: &AlphaEnsemble,
    map: F,
    samples: usize,
    seed: u64,
    bins: usize,
) -> Result<GriddedPdf>
where
    F: Fn(f64) -> f64 + Sync,
{
    pdf_mc_impl(ensemble, map, samples, seed, bins, true)
}

fn pdf_mc_impl<F>(
    ensemble: &AlphaEnsemble,
    map: F,
    samples: usize,
    seed: u64,
    bins: usize,
    force_seq: bool,
) -> Result<GriddedPdf>
where
    F: Fn(f64) -> f64 + Sync,
{
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if bins < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: bins });
    }

    // Monotonicity probe on a fixed lattice.
    let probes = 1024;
    let span = ensemble.hi - ensemble.lo;
    let mut prev = map(ensemble.lo);
    let mut direction = 0.0f64;
    for i in 1..=probes {
        let a = ensemble.lo + span * i as f64 / probes as f64;
        let v = map(a);
        let d = v - prev;
        if d == 0.0 || !v.is_finite() {
            return Err(Error::NonMonotoneMap);
        }
        if direction == 0.0 {
            direction = d.signum();
        } else if d.signum() != direction {
            return Err(Error::NonMonotoneMap);
        }
        prev = v;
    }

    let (wa, wb) = (map(ensemble.lo), map(ensemble.hi));
    let (w_lo, w_hi) = (wa.min(wb), wa.max(wb));
    let width = (w_hi - w_lo) / bins as f64;

    let chunks = samples.div_ceil(MC_CHUNK);
    let worker = |c: usize| -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c as u64).wrapping_mul(0x9E3779B97F4A7C15));
        let mut counts = vec![0u64; bins];
        let start = c * MC_CHUNK;
        let end = ((c + 1) * MC_CHUNK).min(samples);
        for s in start..end {
            // One uniform draw inside stratum s.
            let u: f64 = rng.gen();
            let a = ensemble.lo + (s as f64 + u) * span / samples as f64;
            let w = map(a);
            let mut idx = ((w - w_lo) / width) as usize;
            if idx >= bins {
                idx = bins - 1;
            }
            counts[idx] += 1;
        }
        counts
    };
    let partials = if force_seq {
        par::map_indexed_seq(chunks, worker)
    } else {
        par::map_indexed(chunks, worker)
    };

    let mut counts = vec![0u64; bins];
    for part in partials {
        for (i, c) in part.into_iter().enumerate() {
            counts[i] += c;
        }
    }
    let density: Vec<f64> =
        counts.iter().map(|&c| c as f64 / (samples as f64 * width)).collect();
    let grid = RealGrid1d::new(w_lo + 0.5 * width, w_hi - 0.5 * width, bins)?;
    GriddedPdf::new(grid, density)
}
