//! Information-geometry diagnostics of time-dependent PDFs.
//!
//! The information rate ℰ(t) = ∫ (∂_t p)²/p dω measures how fast a PDF
//! moves through statistically distinguishable states; τ(t) = ℰ^{-1/2} is
//! the associated dynamical time and ℒ(t) = ∫₀ᵗ √ℰ dt₁ the information
//! length. For a Gaussian with inverse temperature β and mean μ,
//! ℰ = (β̇/β)²/2 + 2βμ̇². ℰ also equals the coincidence limit of the second
//! time derivative of the relative entropy, which `kl_limit_check` verifies
//! by finite differences.

use crate::error::{Error, Result};
use crate::gauss_pdf;
use crate::kinematics::ShearFlow;
use crate::numerics::{cumtrapz, RealGrid1d};
use crate::spectra::{mean_square_vorticity, msv_log_derivative, SpectrumModel};

/// Densities below this are treated as empty bins in log/ratio kernels.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// A PDF sampled on a uniform ω-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedPdf {
    grid: RealGrid1d,
    density: Vec<f64>,
}

impl GriddedPdf {
    /// Wraps a sampled density; values must be finite and nonnegative and
    /// match the grid length. Mass is the caller's concern (analytic
    /// constructors enforce unit mass, histogram estimates only approach it).
    pub fn new(grid: RealGrid1d, density: Vec<f64>) -> Result<Self> {
        if density.len() != grid.count() {
            return Err(Error::LengthMismatch { left: grid.count(), right: density.len() });
        }
        if density.iter().any(|&d| !(d.is_finite() && d >= 0.0)) {
            return Err(Error::InvalidArgument("density must be finite and nonnegative".into()));
        }
        Ok(Self { grid, density })
    }

    pub fn grid(&self) -> &RealGrid1d {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Trapezoidal mass on the grid.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.grid, |i| self.density[i])
    }

    /// Location and value of the maximum density.
    pub fn peak(&self) -> (f64, f64) {
        let (mut arg, mut best) = (self.grid.value(0), self.density[0]);
        for i in 1..self.density.len() {
            if self.density[i] > best {
                best = self.density[i];
                arg = self.grid.value(i);
            }
        }
        (arg, best)
    }
}

fn trapezoid<F: Fn(usize) -> f64>(grid: &RealGrid1d, f: F) -> f64 {
    let h = grid.spacing();
    let n = grid.count();
    let mut acc = 0.5 * (f(0) + f(n - 1));
    for i in 1..n - 1 {
        acc += f(i);
    }
    acc * h
}

fn same_grid(a: &RealGrid1d, b: &RealGrid1d) -> bool {
    a.start() == b.start() && a.stop() == b.stop() && a.count() == b.count()
}

/// Time series of the information diagnostics; τ = ℰ^{-1/2} pointwise and
/// ℒ is the cumulative trapezoid of √ℰ.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSeries {
    pub ts: Vec<f64>,
    pub e: Vec<f64>,
    pub tau: Vec<f64>,
    pub l: Vec<f64>,
}

impl InfoSeries {
    /// Builds the series from sampled rates; rejects negative ℰ.
    pub fn from_rates(ts: &[f64], e: &[f64]) -> Result<Self> {
        if ts.len() != e.len() {
            return Err(Error::LengthMismatch { left: ts.len(), right: e.len() });
        }
        for (index, &v) in e.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::NegativeInfoRate { index });
            }
        }
        let tau = e.iter().map(|&v| 1.0 / v.sqrt()).collect();
        let sqrt_e: Vec<f64> = e.iter().map(|&v| v.sqrt()).collect();
        let l = cumtrapz(ts, &sqrt_e)?;
        Ok(Self { ts: ts.to_vec(), e: e.to_vec(), tau, l })
    }
}

/// Information rate of a Gaussian: (β̇/β)²/2 + 2β μ̇².
pub fn info_rate_gaussian(beta: f64, dbeta_dt: f64, mean_rate: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument("beta must be positive".into()));
    }
    let w = dbeta_dt / beta;
    Ok(0.5 * w * w + 2.0 * beta * mean_rate * mean_rate)
}

/// Information rate estimated from two PDF snapshots `dt` apart: centred
/// difference for ∂_t p, midpoint average for p, floored bins excluded.
pub fn info_rate_grid(
    p_prev: &GriddedPdf,
    p_next: &GriddedPdf,
    dt: f64,
    floor: f64,
) -> Result<f64> {
    if !same_grid(&p_prev.grid, &p_next.grid) {
        return Err(Error::GridMismatch);
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    let g = &p_prev.grid;
    Ok(trapezoid(g, |i| {
        let p = 0.5 * (p_prev.density[i] + p_next.density[i]);
        if p <= floor {
            return 0.0;
        }
        let dp = (p_next.density[i] - p_prev.density[i]) / dt;
        dp * dp / p
    }))
}

/// ℒ(t) over the sampled series: cumulative trapezoid of √ℰ.
pub fn information_length(ts: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    Ok(InfoSeries::from_rates(ts, e)?.l)
}

/// Relative entropy D(p1, p2) = ∫ p2 ln(p2/p1) dω with floored densities.
pub fn kl_divergence(p1: &GriddedPdf, p2: &GriddedPdf, floor: f64) -> Result<f64> {
    if !same_grid(&p1.grid, &p2.grid) {
        return Err(Error::GridMismatch);
    }
    Ok(trapezoid(&p1.grid, |i| {
        let (a, b) = (p1.density[i], p2.density[i]);
        if a <= floor || b <= floor {
            0.0
        } else {
            b * (b / a).ln()
        }
    }))
}

/// Checks the coincidence identity ∂²_{t1} D(p(t1), p(t)) |_{t1=t} = ℰ(t) by
/// symmetric finite differences in the first argument; returns the relative
/// residual, which shrinks as O(dt²).
pub fn kl_limit_check<F>(pdf_trajectory: F, t: f64, dt: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<GriddedPdf>,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    let p0 = pdf_trajectory(t)?;
    let pp = pdf_trajectory(t + dt)?;
    let pm = pdf_trajectory(t - dt)?;
    let fd = (kl_divergence(&pp, &p0, DENSITY_FLOOR)? + kl_divergence(&pm, &p0, DENSITY_FLOOR)?)
        / (dt * dt);
    let e = info_rate_grid(&pm, &pp, 2.0 * dt, DENSITY_FLOOR)?;
    if e == 0.0 {
        return Err(Error::ZeroInfoRate);
    }
    Ok((fd - e).abs() / e)
}

/// Parametric information series for a (spectrum, flow) pair: analytic β̇/β
/// where the closed form exists, plus the mean-vorticity drift term (only
/// the decaying zonal flow has one).
pub fn info_series(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    ts: &[f64],
) -> Result<InfoSeries> {
    let e: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let rate = msv_log_derivative(model, flow, nu, t)?;
            let beta = 1.0 / (2.0 * mean_square_vorticity(model, flow, nu, t)?);
            info_rate_gaussian(beta, rate * beta, flow.mean_vorticity_rate(t))
        })
        .collect::<Result<Vec<_>>>()?;
    InfoSeries::from_rates(ts, &e)
}

/// Grid-based information series: ℰ estimated from PDF snapshots at t ± dt
/// on per-time default grids widened to cover both snapshots.
pub fn info_series_grid(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    ts: &[f64],
    dt: f64,
) -> Result<InfoSeries> {
    let e: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let beta_lo = gauss_pdf::gaussian_pdf_at(model, flow, nu, t - dt)?.beta;
            let grid = gauss_pdf::default_omega_grid(beta_lo, 0.0)?;
            let sample = |tt: f64| -> Result<GriddedPdf> {
                let b = gauss_pdf::gaussian_pdf_at(model, flow, nu, tt)?.beta;
                let p = gauss_pdf::GaussianPdf::new(0.0, b)?;
                GriddedPdf::new(grid, grid.values().iter().map(|&w| p.density(w)).collect())
            };
            info_rate_grid(&sample(t - dt)?, &sample(t + dt)?, 2.0 * dt, DENSITY_FLOOR)
        })
        .collect::<Result<Vec<_>>>()?;
    InfoSeries::from_rates(ts, &e)
}

/// Width-driven information rate for a constant spectrum under frozen zonal
/// shear: (β̇/β)²/2 with β ∝ t sqrt(4 + Ω²t²/3).
pub fn constant_zonal_width_rate(omega_z: f64, t: f64) -> f64 {
    let o2t2 = omega_z * omega_z * t * t;
    let num = 4.0 + 2.0 / 3.0 * o2t2;
    let den = t * (4.0 + o2t2 / 3.0);
    0.5 * (num / den) * (num / den)
}

/// Information series for the decaying zonal flow with a constant initial
/// spectrum, split into the width-driven and mean-driven contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayingZonalInfo {
    pub series: InfoSeries,
    pub width_term: Vec<f64>,
    pub mean_term: Vec<f64>,
}

/// ℰ(t) for a slowly decaying zonal flow: the usual width term plus
/// 2β(∂_tΩ_z)² from the drifting mean vorticity. β comes from the exact
/// constant-spectrum closed form for the decaying flow, so the frozen-shear
/// limit τ0 → ∞ is recovered continuously.
pub fn info_series_decaying_zonal(
    omega_z0: f64,
    tau0: f64,
    nu: f64,
    phi: f64,
    ts: &[f64],
) -> Result<DecayingZonalInfo> {
    let flow = ShearFlow::decaying_zonal(omega_z0, tau0)?;
    let model = SpectrumModel::constant(phi)?;
    let mut width = Vec::with_capacity(ts.len());
    let mut mean = Vec::with_capacity(ts.len());
    let mut e = Vec::with_capacity(ts.len());
    for &t in ts {
        let rate = msv_log_derivative(&model, &flow, nu, t)?;
        let beta = 1.0 / (2.0 * mean_square_vorticity(&model, &flow, nu, t)?);
        let w = 0.5 * rate * rate;
        let mrate = flow.mean_vorticity_rate(t);
        let m = 2.0 * beta * mrate * mrate;
        width.push(w);
        mean.push(m);
        e.push(w + m);
    }
    Ok(DecayingZonalInfo {
        series: InfoSeries::from_rates(ts, &e)?,
        width_term: width,
        mean_term: mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const NU: f64 = 0.1;

    fn gaussian_on_grid(beta: f64, grid: &RealGrid1d) -> GriddedPdf {
        let p = gauss_pdf::GaussianPdf::new(0.0, beta).unwrap();
        GriddedPdf::new(*grid, grid.values().iter().map(|&w| p.density(w)).collect()).unwrap()
    }

    #[test]
    fn gaussian_rate_mean_term() {
        assert_relative_eq!(
            info_rate_gaussian(0.5, 0.0, 1.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        // Static PDF: no information flow.
        assert_eq!(info_rate_gaussian(2.0, 0.0, 0.0).unwrap(), 0.0);
        assert!(info_rate_gaussian(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn delta_zonal_rate_value() {
        let m = SpectrumModel::delta(0.0, 1.0, 1.0).unwrap();
        let f = ShearFlow::zonal(2.0).unwrap();
        let s = info_series(&m, &f, NU, &[3.0]).unwrap();
        let k2 = 37.0; // |k(3)|² for k0 = (0,1)
        assert_relative_eq!(s.e[0], 0.5 * (2.0 * NU * k2).powi(2), max_relative = 1e-12);
        assert_abs_diff_eq!(s.tau[0], 0.19109, epsilon = 2e-5);
    }

    #[test]
    fn grid_rate_matches_parametric() {
        let m = SpectrumModel::delta(0.0, 1.0, 1.0).unwrap();
        let f = ShearFlow::zonal(2.0).unwrap();
        let para = info_series(&m, &f, NU, &[1.0]).unwrap().e[0];
        let grid = info_series_grid(&m, &f, NU, &[1.0], 1e-3).unwrap().e[0];
        assert_relative_eq!(para, grid, max_relative = 1e-4);
    }

    #[test]
    fn identical_pdfs_have_zero_rate() {
        let grid = RealGrid1d::new(-9.0, 9.0, 513).unwrap();
        let p = gaussian_on_grid(0.5, &grid);
        assert_eq!(info_rate_grid(&p, &p, 1e-3, DENSITY_FLOOR).unwrap(), 0.0);
    }

    #[test]
    fn constant_hyperbolic_tau_plateau() {
        let m = SpectrumModel::constant(1.0).unwrap();
        let f = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let ts: Vec<f64> = (0..40).map(|i| 1.5 + 0.05 * i as f64).collect();
        let s = info_series(&m, &f, NU, &ts).unwrap();
        let expect = 2f64.sqrt() / 2.0;
        for tau in &s.tau {
            assert_relative_eq!(*tau, expect, max_relative = 0.01);
        }
    }

    #[test]
    fn information_length_constant_rate_is_linear() {
        let ts: Vec<f64> = (0..=10).map(|i| 0.3 * i as f64).collect();
        let e = vec![4.0; ts.len()]; // tau = 0.5
        let l = information_length(&ts, &e).unwrap();
        for (i, &t) in ts.iter().enumerate() {
            assert_relative_eq!(l[i], t / 0.5, max_relative = 1e-14);
        }
        let zero = information_length(&ts, &vec![0.0; ts.len()]).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
        assert!(information_length(&ts, &vec![-1.0; ts.len()]).is_err());
    }

    #[test]
    fn geodesic_without_shear() {
        let m = SpectrumModel::delta(0.0, 1.0, 1.0).unwrap();
        let f = ShearFlow::zonal(0.0).unwrap();
        let ts: Vec<f64> = (0..=20).map(|i| 0.25 * i as f64).collect();
        let s = info_series(&m, &f, NU, &ts).unwrap();
        let slope = 2f64.sqrt() * NU; // sqrt(E) for |k0|² = 1
        for (i, &t) in ts.iter().enumerate() {
            assert_relative_eq!(s.tau[i], s.tau[0], max_relative = 1e-12);
            assert_relative_eq!(s.l[i], slope * t, max_relative = 1e-12, epsilon = 1e-14);
        }
    }

    #[test]
    fn kl_gaussian_half_width() {
        let grid = RealGrid1d::new(-13.0, 13.0, 1025).unwrap();
        let p1 = gaussian_on_grid(1.0, &grid);
        let p2 = gaussian_on_grid(0.5, &grid);
        let d = kl_divergence(&p1, &p2, DENSITY_FLOOR).unwrap();
        assert_abs_diff_eq!(d, 0.5 * (1.0 - 2f64.ln()), epsilon = 1e-5);
        // Asymmetric and zero on the diagonal.
        let d21 = kl_divergence(&p2, &p1, DENSITY_FLOOR).unwrap();
        assert!((d - d21).abs() > 1e-3);
        assert_eq!(kl_divergence(&p1, &p1, DENSITY_FLOOR).unwrap(), 0.0);
        assert!(d21 >= -1e-9);
    }

    #[test]
    fn kl_grid_mismatch_rejected() {
        let g1 = RealGrid1d::new(-9.0, 9.0, 513).unwrap();
        let g2 = RealGrid1d::new(-9.0, 9.0, 257).unwrap();
        let p1 = gaussian_on_grid(0.5, &g1);
        let p2 = gaussian_on_grid(0.5, &g2);
        assert!(matches!(
            kl_divergence(&p1, &p2, DENSITY_FLOOR),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn kl_limit_identity_second_order() {
        let m = SpectrumModel::delta(0.0, 1.0, 1.0).unwrap();
        let f = ShearFlow::zonal(2.0).unwrap();
        // Wide enough for the broadest snapshot (t - dt); a short grid
        // floors the residual with truncation error instead.
        let beta_min = gauss_pdf::gaussian_pdf_at(&m, &f, NU, 1.0 - 1e-3).unwrap().beta;
        let half = 6.5 / beta_min.sqrt();
        let grid = RealGrid1d::new(-half, half, 2049).unwrap();
        let traj = |t: f64| -> Result<GriddedPdf> {
            let b = gauss_pdf::gaussian_pdf_at(&m, &f, NU, t)?.beta;
            Ok(gaussian_on_grid(b, &grid))
        };
        let r1 = kl_limit_check(traj, 1.0, 1e-3).unwrap();
        assert!(r1 <= 1e-3, "residual {r1}");
        let r2 = kl_limit_check(traj, 1.0, 5e-4).unwrap();
        assert!(r1 / r2 >= 3.5, "convergence order: {r1} vs {r2}");
    }

    #[test]
    fn kl_limit_static_trajectory_errors() {
        let grid = RealGrid1d::new(-9.0, 9.0, 513).unwrap();
        let traj = |_t: f64| Ok(gaussian_on_grid(0.5, &grid));
        assert!(matches!(kl_limit_check(traj, 1.0, 1e-3), Err(Error::ZeroInfoRate)));
    }

    #[test]
    fn tau_times_sqrt_e_is_one() {
        let m = SpectrumModel::constant(1.0).unwrap();
        let f = ShearFlow::zonal(2.0).unwrap();
        let ts: Vec<f64> = (1..=30).map(|i| 0.2 * i as f64).collect();
        let s = info_series(&m, &f, NU, &ts).unwrap();
        for i in 0..ts.len() {
            assert_relative_eq!(s.tau[i] * s.e[i].sqrt(), 1.0, max_relative = 1e-14);
        }
        assert_eq!(s.l[0], 0.0);
        for i in 1..ts.len() {
            assert!(s.l[i] >= s.l[i - 1]);
        }
    }

    #[test]
    fn length_stable_under_grid_refinement() {
        let m = SpectrumModel::constant(1.0).unwrap();
        let f = ShearFlow::zonal(2.0).unwrap();
        let coarse: Vec<f64> = (0..=60).map(|i| 0.5 + 0.05 * i as f64).collect();
        let fine: Vec<f64> = (0..=120).map(|i| 0.5 + 0.025 * i as f64).collect();
        let lc = info_series(&m, &f, NU, &coarse).unwrap().l.pop().unwrap();
        let lf = info_series(&m, &f, NU, &fine).unwrap().l.pop().unwrap();
        assert!((lc - lf).abs() / lf < 1e-3);
    }

    #[test]
    fn decaying_zonal_terms() {
        let ts: Vec<f64> = (1..=20).map(|i| 0.5 * i as f64).collect();
        let info = info_series_decaying_zonal(2.0, 10.0, NU, 1.0, &ts).unwrap();
        for i in 0..ts.len() {
            assert!(info.width_term[i] > 0.0);
            assert!(info.mean_term[i] > 0.0);
            assert!(info.series.e[i] >= info.width_term[i]);
        }
        // While the flow is still alive (t well below tau0) the narrowing
        // PDF amplifies the mean drift; once the flow has died the drift
        // rate e^{-2t/tau0} wins and the term turns over.
        for i in 1..ts.len() {
            if ts[i] <= 4.0 {
                assert!(info.mean_term[i] > info.mean_term[i - 1]);
            }
        }

        // Frozen-shear limit: tau0 -> infinity kills the mean term and
        // reproduces the constant-spectrum zonal rate.
        let frozen = info_series_decaying_zonal(2.0, 1e9, NU, 1.0, &ts).unwrap();
        let reference = constant_zonal_width_rate(2.0, ts[4]);
        assert_relative_eq!(frozen.width_term[4], reference, max_relative = 1e-6);
        assert!(frozen.mean_term.iter().all(|&m| m < 1e-12));
    }
}
