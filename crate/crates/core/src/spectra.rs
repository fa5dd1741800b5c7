//! Evolved power spectra and mean-square vorticity.
//!
//! Homogeneous initial statistics fix ⟨ω̃(k)ω̃(k')⟩ = δ(k+k') ψ(k), and every
//! mode decays through the viscous envelope, so the spectrum evolves as
//! ψ(k(t)) = e^{-2νQ(t)} ψ(k(0)) and
//!
//!   ⟨ω²⟩(t) = ∫ d²k ψ(k(t)) = ∫ d²k₀ e^{-2νQ(t;k₀)} ψ(k₀)
//!
//! (the trajectory map is volume preserving). Q is a quadratic form in k₀,
//! so constant and Gaussian spectra integrate in closed form; the shipped
//! prefactors are normalized against [`mean_square_vorticity_oracle`], which
//! evaluates the integral by quadrature. See CONSTANTS.md for how these
//! normalizations compare with forms commonly quoted in the literature.

use crate::error::{Error, Result};
use crate::kinematics::{
    self, initial_from_current, phase_form_rate, phase_integral, phase_quadratic_form, PhaseForm,
    ShearFlow, WaveVector2,
};
use crate::numerics::{self, central_diff, default_diff_step, quad2d};

/// Initial power spectrum ψ(k(0)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumModel {
    /// ψ = φ δ(kx0 - a) δ(ky0 - b): a single mode.
    Delta { a: f64, b: f64, phi: f64 },
    /// ψ = φ on the whole plane.
    Constant { phi: f64 },
    /// ψ = φ/(απ) e^{-|k0|²/α}; total power ∫ψ d²k = φ.
    GaussianIso { alpha: f64, phi: f64 },
    /// ψ = φ δ(kx0), constant in ky: one shear-normal line of modes.
    AnisoConstant { phi: f64 },
}

impl SpectrumModel {
    pub fn delta(a: f64, b: f64, phi: f64) -> Result<Self> {
        check_phi(phi)?;
        Ok(Self::Delta { a, b, phi })
    }

    pub fn constant(phi: f64) -> Result<Self> {
        check_phi(phi)?;
        Ok(Self::Constant { phi })
    }

    pub fn gaussian_iso(alpha: f64, phi: f64) -> Result<Self> {
        check_phi(phi)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument("alpha must be positive".into()));
        }
        Ok(Self::GaussianIso { alpha, phi })
    }

    pub fn aniso_constant(phi: f64) -> Result<Self> {
        check_phi(phi)?;
        Ok(Self::AnisoConstant { phi })
    }

    pub fn phi(&self) -> f64 {
        match *self {
            Self::Delta { phi, .. }
            | Self::Constant { phi }
            | Self::GaussianIso { phi, .. }
            | Self::AnisoConstant { phi } => phi,
        }
    }
}

fn check_phi(phi: f64) -> Result<()> {
    if !(phi > 0.0 && phi.is_finite()) {
        return Err(Error::InvalidArgument("phi must be positive".into()));
    }
    Ok(())
}

/// Value of an evolved spectrum at one point of k-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralDensity {
    /// Pointwise density for spectra without singular factors.
    Density(f64),
    /// δ-spectra stay singular; the envelope weight and the peak location
    /// carry all the information.
    DeltaPeak { weight: f64, peak: WaveVector2 },
}

/// Mean-square vorticity samples over a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MsvCurve {
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
    pub flow: ShearFlow,
    pub model: SpectrumModel,
    pub nu: f64,
}

/// Default subdivision count for the quadrature oracle.
pub const DEFAULT_ORACLE_CELLS: usize = 512;

fn check_nu(nu: f64) -> Result<()> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::InvalidArgument("nu must be nonnegative".into()));
    }
    Ok(())
}

fn unbounded_needs_positive_time(model: &SpectrumModel, nu: f64, t: f64) -> Result<()> {
    match model {
        SpectrumModel::Constant { .. } | SpectrumModel::AnisoConstant { .. } => {
            if t <= 0.0 {
                return Err(Error::DivergentAtZero { what: "mean-square vorticity" });
            }
            if nu <= 0.0 {
                return Err(Error::InvalidArgument(
                    "unbounded spectra need nu > 0 for a finite mean square".into(),
                ));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn is_unequal_hyperbolic(flow: &ShearFlow) -> bool {
    matches!(*flow, ShearFlow::Hyperbolic { omega_z, omega_s }
        if (omega_z - omega_s).abs() > 1e-12 * omega_z.abs().max(omega_s.abs()))
}

fn equal_hyperbolic_rate(flow: &ShearFlow) -> Option<f64> {
    match *flow {
        ShearFlow::Hyperbolic { omega_z, omega_s } if !is_unequal_hyperbolic(flow) => {
            Some((omega_z * omega_s).sqrt())
        }
        _ => None,
    }
}

/// Width factors of the sum/difference Gaussian integrals for the
/// equal-rate hyperbolic flow: (ν/2Ω)(e^{2Ωt} - 1) + 1/2α and
/// (ν/2Ω)(1 - e^{-2Ωt}) + 1/2α. Evaluating these directly avoids the
/// catastrophic cancellation the generic determinant suffers at large Ωt.
fn hyperbolic_gauss_widths(om: f64, nu: f64, alpha_inv_half: f64, t: f64) -> (f64, f64) {
    let f = nu / (2.0 * om);
    let a = f * ((2.0 * om * t).exp() - 1.0) + alpha_inv_half;
    let b = f * (-(-2.0 * om * t).exp_m1()) + alpha_inv_half;
    (a, b)
}

/// Whether `mean_square_vorticity` has a closed form for this pair.
/// Unsupported pairs silently evaluate through the quadrature oracle.
pub fn is_closed_form_supported(model: &SpectrumModel, flow: &ShearFlow) -> bool {
    match model {
        SpectrumModel::Delta { .. } => true,
        SpectrumModel::AnisoConstant { .. } => matches!(flow, ShearFlow::ZonalOnly { .. }),
        _ => !is_unequal_hyperbolic(flow),
    }
}

/// Evolved spectrum at the current-time wavevector `kt`:
/// e^{-2νQ(t)} ψ(k₀(kt)).
pub fn evolved_spectrum(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    kt: WaveVector2,
    t: f64,
) -> Result<SpectralDensity> {
    check_nu(nu)?;
    let k0 = initial_from_current(flow, kt, t)?;
    let envelope = (-2.0 * nu * phase_integral(flow, k0, t)?).exp();
    Ok(match *model {
        SpectrumModel::Delta { a, b, phi } => {
            let peak_env =
                (-2.0 * nu * phase_integral(flow, WaveVector2::new(a, b), t)?).exp();
            SpectralDensity::DeltaPeak {
                weight: phi * peak_env,
                peak: kinematics::wavevector_at(flow, WaveVector2::new(a, b), t)?,
            }
        }
        SpectrumModel::Constant { phi } => SpectralDensity::Density(phi * envelope),
        SpectrumModel::GaussianIso { alpha, phi } => {
            let psi0 = phi / (alpha * std::f64::consts::PI) * (-k0.norm_sq() / alpha).exp();
            SpectralDensity::Density(psi0 * envelope)
        }
        SpectrumModel::AnisoConstant { .. } => {
            return Err(Error::InvalidArgument(
                "anisotropic constant spectrum has a singular pointwise density".into(),
            ))
        }
    })
}

/// Closed-form ⟨ω²⟩(t), falling back to the quadrature oracle for pairs
/// without a closed form (unequal-rate hyperbolic flows, anisotropic spectra
/// away from zonal shear).
pub fn mean_square_vorticity(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    t: f64,
) -> Result<f64> {
    check_nu(nu)?;
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    unbounded_needs_positive_time(model, nu, t)?;
    if !is_closed_form_supported(model, flow) {
        return mean_square_vorticity_oracle(model, flow, nu, t, DEFAULT_ORACLE_CELLS);
    }

    Ok(match *model {
        SpectrumModel::Delta { a, b, phi } => {
            phi * (-2.0 * nu * phase_integral(flow, WaveVector2::new(a, b), t)?).exp()
        }
        SpectrumModel::Constant { phi } => {
            if let Some(om) = equal_hyperbolic_rate(flow) {
                std::f64::consts::PI * phi * om / (2.0 * nu * (om * t).sinh())
            } else {
                let q = phase_quadratic_form(flow, t)?;
                std::f64::consts::PI * phi / (nu * q.det4().sqrt())
            }
        }
        SpectrumModel::GaussianIso { alpha, phi } => {
            if t == 0.0 {
                return Ok(phi);
            }
            if let Some(om) = equal_hyperbolic_rate(flow) {
                let (wa, wb) = hyperbolic_gauss_widths(om, nu, 0.5 / alpha, t);
                phi / (2.0 * alpha * (wa * wb).sqrt())
            } else {
                let q = phase_quadratic_form(flow, t)?;
                let det = gaussian_weighted_det4(&q, nu, alpha);
                2.0 * phi / (alpha * det.sqrt())
            }
        }
        SpectrumModel::AnisoConstant { phi } => {
            let q = phase_quadratic_form(flow, t)?;
            phi * (std::f64::consts::PI / (2.0 * nu * q.qyy)).sqrt()
        }
    })
}

/// det(4 A C - B²) for the Gaussian-spectrum quadratic form
/// 2νQ + |k₀|²/α.
fn gaussian_weighted_det4(q: &PhaseForm, nu: f64, alpha: f64) -> f64 {
    let ia = 1.0 / alpha;
    let a = 2.0 * nu * q.qxx + ia;
    let b = 2.0 * nu * q.qxy;
    let c = 2.0 * nu * q.qyy + ia;
    4.0 * a * c - b * b
}

/// Ground truth for ⟨ω²⟩(t): quadrature of e^{-2νQ(t;k₀)} ψ(k₀) over
/// initial wavevectors.
///
/// The integration runs in coordinates whitened by the quadratic form of the
/// exponent, which only changes variables (the Jacobian is exact), so the
/// value does not depend on the whitening being well conditioned. δ-spectra
/// evaluate their envelope directly.
pub fn mean_square_vorticity_oracle(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    t: f64,
    cells: usize,
) -> Result<f64> {
    check_nu(nu)?;
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    unbounded_needs_positive_time(model, nu, t)?;

    match *model {
        SpectrumModel::Delta { a, b, phi } => {
            Ok(phi * (-2.0 * nu * phase_integral(flow, WaveVector2::new(a, b), t)?).exp())
        }
        SpectrumModel::AnisoConstant { phi } => {
            // 1D integral over ky; whiten by the exact Gaussian scale.
            let q = phase_quadratic_form(flow, t)?;
            let scale = (2.0 * nu * q.qyy).sqrt();
            let integral = numerics::simpson1d(
                |u| {
                    let ky = u / scale;
                    (-2.0 * nu
                        * phase_integral(flow, WaveVector2::new(0.0, ky), t).unwrap_or(f64::NAN))
                    .exp()
                },
                -10.0,
                10.0,
                cells,
            )?;
            Ok(phi * integral / scale)
        }
        SpectrumModel::Constant { phi } => {
            let q = phase_quadratic_form(flow, t)?;
            whitened_plane_integral(flow, t, nu, &q, 0.0, cells).map(|v| v * phi)
        }
        SpectrumModel::GaussianIso { alpha, phi } => {
            if t == 0.0 {
                // Spectrum normalization: ∫ψ(0) d²k = φ.
                return Ok(phi);
            }
            let q = phase_quadratic_form(flow, t)?;
            let pref = phi / (alpha * std::f64::consts::PI);
            whitened_plane_integral(flow, t, nu, &q, 1.0 / alpha, cells).map(|v| v * pref)
        }
    }
}

/// ∫ d²k₀ exp(-2νQ(t;k₀) - w|k₀|²) by Simpson quadrature in whitened
/// coordinates. `form` supplies the whitening transform; the integrand is
/// evaluated through `phase_integral` at every node.
fn whitened_plane_integral(
    flow: &ShearFlow,
    t: f64,
    nu: f64,
    form: &PhaseForm,
    extra_iso: f64,
    cells: usize,
) -> Result<f64> {
    let (e1, e2, jac) = whitening_axes(form, nu, extra_iso)?;
    let value = quad2d(
        |u, v| {
            let kx = e1.0 * u + e2.0 * v;
            let ky = e1.1 * u + e2.1 * v;
            let k0 = WaveVector2::new(kx, ky);
            match phase_integral(flow, k0, t) {
                Ok(q) => (-2.0 * nu * q - extra_iso * k0.norm_sq()).exp(),
                Err(_) => f64::NAN,
            }
        },
        10.0,
        cells,
    )?;
    Ok(value * jac)
}

/// Eigen-decomposition of the 2x2 exponent form; returns the two scaled axis
/// vectors and the Jacobian of the substitution k₀ = u·e1 + v·e2.
fn whitening_axes(
    form: &PhaseForm,
    nu: f64,
    extra_iso: f64,
) -> Result<((f64, f64), (f64, f64), f64)> {
    // Exponent quadratic form: a kx² + b kx ky + c ky².
    let a = 2.0 * nu * form.qxx + extra_iso;
    let b = 2.0 * nu * form.qxy;
    let c = 2.0 * nu * form.qyy + extra_iso;
    let tr = a + c;
    let disc = ((a - c) * (a - c) + b * b).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    if !(l1 > 0.0 && l2 > 0.0) {
        return Err(Error::InvalidArgument(
            "exponent form is not positive definite; integral diverges".into(),
        ));
    }
    // Unit eigenvector for l1 of the matrix [[a, b/2], [b/2, c]].
    let half = 0.5 * b;
    let (vx, vy) = if half.abs() > 1e-300 {
        let len = (half * half + (l1 - a) * (l1 - a)).sqrt();
        (half / len, (l1 - a) / len)
    } else if a >= c {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let s1 = 1.0 / l1.sqrt();
    let s2 = 1.0 / l2.sqrt();
    let e1 = (vx * s1, vy * s1);
    let e2 = (-vy * s2, vx * s2);
    Ok((e1, e2, s1 * s2))
}

/// Enstrophy-weighted spectral integral ∫ |k(t)|² ψ(k(t)) d²k.
pub(crate) fn enstrophy_flux(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    t: f64,
    cells: usize,
) -> Result<f64> {
    unbounded_needs_positive_time(model, nu, t)?;
    match *model {
        SpectrumModel::Delta { a, b, phi } => {
            let k0 = WaveVector2::new(a, b);
            let kt = kinematics::wavevector_at(flow, k0, t)?;
            Ok(kt.norm_sq() * phi * (-2.0 * nu * phase_integral(flow, k0, t)?).exp())
        }
        SpectrumModel::AnisoConstant { phi } => {
            let q = phase_quadratic_form(flow, t)?;
            let scale = (2.0 * nu * q.qyy).sqrt();
            let integral = numerics::simpson1d(
                |u| {
                    let ky = u / scale;
                    let k0 = WaveVector2::new(0.0, ky);
                    let kt = kinematics::wavevector_at(flow, k0, t).unwrap();
                    kt.norm_sq()
                        * (-2.0 * nu * phase_integral(flow, k0, t).unwrap_or(f64::NAN)).exp()
                },
                -10.0,
                10.0,
                cells,
            )?;
            Ok(phi * integral / scale)
        }
        SpectrumModel::Constant { phi } => {
            let q = phase_quadratic_form(flow, t)?;
            let (e1, e2, jac) = whitening_axes(&q, nu, 0.0)?;
            let v = quad2d(
                |u, v| {
                    let k0 = WaveVector2::new(e1.0 * u + e2.0 * v, e1.1 * u + e2.1 * v);
                    let kt = kinematics::wavevector_at(flow, k0, t).unwrap();
                    match phase_integral(flow, k0, t) {
                        Ok(qv) => kt.norm_sq() * (-2.0 * nu * qv).exp(),
                        Err(_) => f64::NAN,
                    }
                },
                12.0,
                cells,
            )?;
            Ok(phi * v * jac)
        }
        SpectrumModel::GaussianIso { alpha, phi } => {
            let q = phase_quadratic_form(flow, t)?;
            let extra = 1.0 / alpha;
            let (e1, e2, jac) = whitening_axes(&q, nu, extra)?;
            let pref = phi / (alpha * std::f64::consts::PI);
            let v = quad2d(
                |u, v| {
                    let k0 = WaveVector2::new(e1.0 * u + e2.0 * v, e1.1 * u + e2.1 * v);
                    let kt = kinematics::wavevector_at(flow, k0, t).unwrap();
                    match phase_integral(flow, k0, t) {
                        Ok(qv) => {
                            kt.norm_sq() * (-2.0 * nu * qv - extra * k0.norm_sq()).exp()
                        }
                        Err(_) => f64::NAN,
                    }
                },
                12.0,
                cells,
            )?;
            Ok(pref * v * jac)
        }
    }
}

/// -∂_t ln ⟨ω²⟩ = (∂_t β)/β, analytic where the closed form exists.
pub fn msv_log_derivative(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    t: f64,
) -> Result<f64> {
    check_nu(nu)?;
    if !is_closed_form_supported(model, flow) {
        let h = default_diff_step(t);
        return central_diff(
            |tt| mean_square_vorticity(model, flow, nu, tt).map_or(f64::NAN, f64::ln),
            t,
            h,
        )
        .map(|d| -d);
    }
    match *model {
        SpectrumModel::Delta { a, b, .. } => {
            let kt = kinematics::wavevector_at(flow, WaveVector2::new(a, b), t)?;
            Ok(2.0 * nu * kt.norm_sq())
        }
        SpectrumModel::Constant { .. } => {
            unbounded_needs_positive_time(model, nu, t)?;
            if let Some(om) = equal_hyperbolic_rate(flow) {
                return Ok(om / (om * t).tanh());
            }
            let q = phase_quadratic_form(flow, t)?;
            let r = phase_form_rate(flow, t)?;
            let det = q.det4();
            let det_rate = 4.0 * (r.qxx * q.qyy + q.qxx * r.qyy) - 2.0 * q.qxy * r.qxy;
            Ok(det_rate / (2.0 * det))
        }
        SpectrumModel::GaussianIso { alpha, .. } => {
            if let Some(om) = equal_hyperbolic_rate(flow) {
                let (wa, wb) = hyperbolic_gauss_widths(om, nu, 0.5 / alpha, t);
                let da = nu * (2.0 * om * t).exp();
                let db = nu * (-2.0 * om * t).exp();
                return Ok(0.5 * (da / wa + db / wb));
            }
            let q = phase_quadratic_form(flow, t)?;
            let r = phase_form_rate(flow, t)?;
            let ia = 1.0 / alpha;
            let (a, b, c) = (2.0 * nu * q.qxx + ia, 2.0 * nu * q.qxy, 2.0 * nu * q.qyy + ia);
            let (da, db, dc) = (2.0 * nu * r.qxx, 2.0 * nu * r.qxy, 2.0 * nu * r.qyy);
            let det = 4.0 * a * c - b * b;
            let det_rate = 4.0 * (da * c + a * dc) - 2.0 * b * db;
            Ok(det_rate / (2.0 * det))
        }
        SpectrumModel::AnisoConstant { .. } => {
            unbounded_needs_positive_time(model, nu, t)?;
            let q = phase_quadratic_form(flow, t)?;
            let r = phase_form_rate(flow, t)?;
            Ok(r.qyy / (2.0 * q.qyy))
        }
    }
}

/// Relative residual of the enstrophy balance
/// ∂_t⟨ω²⟩ = -2ν ∫ |k(t)|² ψ(k(t)) d²k.
pub fn dissipation_balance_residual(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    t: f64,
    h: f64,
) -> Result<f64> {
    check_nu(nu)?;
    if nu == 0.0 {
        // Both sides vanish identically.
        return Ok(0.0);
    }
    if t <= 0.0 {
        return Err(Error::NegativeTime { t });
    }
    let lhs = central_diff(
        |tt| mean_square_vorticity(model, flow, nu, tt).unwrap_or(f64::NAN),
        t,
        h,
    )?;
    if lhs == 0.0 {
        return Err(Error::DegeneratePoint { t });
    }
    let flux = enstrophy_flux(model, flow, nu, t, DEFAULT_ORACLE_CELLS)?;
    Ok((lhs + 2.0 * nu * flux).abs() / lhs.abs())
}

/// ⟨ω²⟩ sampled over a time grid.
pub fn msv_curve(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    ts: &[f64],
) -> Result<MsvCurve> {
    let values = ts
        .iter()
        .map(|&t| mean_square_vorticity(model, flow, nu, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(MsvCurve { ts: ts.to_vec(), values, flow: *flow, model: *model, nu: nu })
}
