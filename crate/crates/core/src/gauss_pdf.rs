//! Time-dependent Gaussian vorticity PDFs.
//!
//! For Gaussian initial statistics the one-point vorticity PDF stays
//! Gaussian with inverse temperature β(t) = 1/(2⟨ω²⟩(t)); shear enters only
//! through the decay of ⟨ω²⟩. The fluctuation PDF is centred at zero, the
//! total-vorticity PDF is the same curve shifted by the mean vorticity of
//! the large-scale flow.

use crate::error::{Error, Result};
use crate::infogeo::GriddedPdf;
use crate::kinematics::ShearFlow;
use crate::numerics::RealGrid1d;
use crate::spectra::{mean_square_vorticity, SpectrumModel};

/// Parametric Gaussian PDF sqrt(β/π) exp(-β (ω - mean)²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPdf {
    pub mean: f64,
    pub beta: f64,
}

impl GaussianPdf {
    pub fn new(mean: f64, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite() && mean.is_finite()) {
            return Err(Error::InvalidArgument("beta must be positive and finite".into()));
        }
        Ok(Self { mean, beta })
    }

    /// Density at `omega`; maximal at the mean.
    pub fn density(&self, omega: f64) -> f64 {
        (self.beta / std::f64::consts::PI).sqrt()
            * (-self.beta * (omega - self.mean) * (omega - self.mean)).exp()
    }

    /// Samples the density on a grid. Fails if the truncated mass exceeds
    /// 1e-9 (grid too narrow or too coarse for this β).
    pub fn sample(&self, grid: &RealGrid1d) -> Result<GriddedPdf> {
        let density: Vec<f64> = grid.values().iter().map(|&w| self.density(w)).collect();
        let pdf = GriddedPdf::new(*grid, density)?;
        let mass = pdf.mass();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::MassDeficit { mass });
        }
        Ok(pdf)
    }
}

/// Gaussian PDF of the total vorticity at time `t`: mean from the flow's
/// mean vorticity, width from ⟨ω²⟩(t).
pub fn gaussian_pdf_at(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    t: f64,
) -> Result<GaussianPdf> {
    let msv = mean_square_vorticity(model, flow, nu, t)?;
    GaussianPdf::new(flow.mean_vorticity(t), 1.0 / (2.0 * msv))
}

/// Default grid for a Gaussian of inverse temperature `beta`:
/// mean ± 6/sqrt(beta), 513 nodes (truncated mass below 1e-15).
pub fn default_omega_grid(beta: f64, mean: f64) -> Result<RealGrid1d> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument("beta must be positive".into()));
    }
    let half = 6.0 / beta.sqrt();
    RealGrid1d::new(mean - half, mean + half, 513)
}

/// Fluctuation-PDF series sampled on one shared ω-grid.
///
/// Every emitted PDF must carry unit mass on the grid to 1e-9; as the PDFs
/// narrow this eventually fails on a fixed grid, which is reported as a
/// mass-deficit error. Use [`pdf_series_auto`] to let each time pick its own
/// grid.
pub fn pdf_series(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    t_values: &[f64],
    omega_grid: &RealGrid1d,
) -> Result<Vec<GriddedPdf>> {
    t_values
        .iter()
        .map(|&t| {
            let p = gaussian_pdf_at(model, flow, nu, t)?;
            GaussianPdf::new(0.0, p.beta)?.sample(omega_grid)
        })
        .collect()
}

/// Fluctuation-PDF series where each time uses its default grid.
pub fn pdf_series_auto(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    t_values: &[f64],
) -> Result<Vec<(f64, GriddedPdf)>> {
    t_values
        .iter()
        .map(|&t| {
            let p = gaussian_pdf_at(model, flow, nu, t)?;
            let fluct = GaussianPdf::new(0.0, p.beta)?;
            let grid = default_omega_grid(fluct.beta, fluct.mean)?;
            Ok((t, fluct.sample(&grid)?))
        })
        .collect()
}
