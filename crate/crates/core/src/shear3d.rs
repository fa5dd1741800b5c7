//! Sheared velocity modes in three dimensions.
//!
//! For U = -x Ω ŷ the Fourier phase rides on k_x(t) = k_x(0) + Ω k_y t while
//! k_y, k_z stay frozen. Eliminating the pressure with the time-dependent
//! incompressibility constraint k(t)·v̂ = 0 leaves a real linear system for
//! the undamped amplitudes v̂,
//!
//!   dv̂x/dt = -2Ω kx ky v̂x / |k|²
//!   dv̂y/dt =  Ω v̂x (1 - 2 ky² / |k|²)
//!   dv̂z/dt = -2Ω ky kz v̂x / |k|²
//!
//! and the physical amplitudes are ṽ = v̂ e^{-νQ(t,0)}. The first equation
//! integrates exactly to v̂x(t) = v̂x(0) |k(0)|² / |k(t)|², which is the
//! algebraic t^{-2} quenching of the streamwise component; v̂y and v̂z tend
//! to constants. Pressure does no work on incompressible modes, but the
//! shear-production term Ω v̂x v̂y can transiently beat a weak viscous drain,
//! so |ṽ|² decays monotonically only once ν is large enough against Ω.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{fit_loglog_slope, rk4_integrate, FitResult};

/// Initial 3D wavevector; only k_x is sheared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector3 {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

impl WaveVector3 {
    pub fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Self { kx, ky, kz }
    }

    pub fn kx_at(&self, omega: f64, t: f64) -> f64 {
        self.kx + omega * self.ky * t
    }

    pub fn norm_sq_at(&self, omega: f64, t: f64) -> f64 {
        let kx = self.kx_at(omega, t);
        kx * kx + self.kh_sq()
    }

    /// k_H² = k_y² + k_z².
    pub fn kh_sq(&self) -> f64 {
        self.ky * self.ky + self.kz * self.kz
    }
}

/// Complex velocity amplitudes with the diagnostic pressure amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityModes {
    pub vx: Complex64,
    pub vy: Complex64,
    pub vz: Complex64,
    pub pressure: Complex64,
}

impl VelocityModes {
    pub fn new(vx: Complex64, vy: Complex64, vz: Complex64) -> Self {
        Self { vx, vy, vz, pressure: Complex64::new(0.0, 0.0) }
    }

    pub fn from_real(vx: f64, vy: f64, vz: f64) -> Self {
        Self::new(vx.into(), vy.into(), vz.into())
    }

    pub fn norm_sq(&self) -> f64 {
        self.vx.norm_sqr() + self.vy.norm_sqr() + self.vz.norm_sqr()
    }
}

/// |k(t)·v| / (|k(t)| |v|); zero for an exactly incompressible mode.
pub fn incompressibility_residual(k0: &WaveVector3, omega: f64, t: f64, v: &VelocityModes) -> f64 {
    let kx = k0.kx_at(omega, t);
    let div = v.vx * kx + v.vy * k0.ky + v.vz * k0.kz;
    let kn = (kx * kx + k0.kh_sq()).sqrt();
    let vn = v.norm_sq().sqrt();
    if kn == 0.0 || vn == 0.0 {
        return 0.0;
    }
    div.norm() / (kn * vn)
}

/// Phase-mixing integral Q(t, t₁) = ∫_{t₁}^{t} |k(t')|² dt' in closed form:
/// (k_x(t)³ - k_x(t₁)³)/(3 k_y Ω) + k_H² (t - t₁), with the plain viscous
/// form |k|² (t - t₁) when Ω k_y = 0.
pub fn q3_integral(k0: &WaveVector3, omega: f64, t: f64, t1: f64) -> f64 {
    debug_assert!(t1 <= t);
    let shear = omega * k0.ky;
    if shear.abs() < 1e-300 {
        return k0.norm_sq_at(omega, 0.0) * (t - t1);
    }
    let kxt = k0.kx_at(omega, t);
    let kx1 = k0.kx_at(omega, t1);
    (kxt.powi(3) - kx1.powi(3)) / (3.0 * shear) + k0.kh_sq() * (t - t1)
}

fn vhat_rhs(k0: &WaveVector3, omega: f64, t: f64, v: &[f64], dv: &mut [f64]) {
    let kx = k0.kx_at(omega, t);
    let k2 = kx * kx + k0.kh_sq();
    let (ky, kz) = (k0.ky, k0.kz);
    // Real and imaginary parts evolve under the same real coefficients.
    for part in 0..2 {
        let o = 3 * part;
        let vx = v[o];
        dv[o] = -2.0 * omega * kx * ky * vx / k2;
        dv[o + 1] = omega * vx * (1.0 - 2.0 * ky * ky / k2);
        dv[o + 2] = -2.0 * omega * ky * kz * vx / k2;
    }
}

/// Evolves an incompressible mode to time `t` with `steps` RK4 steps and
/// applies the viscous envelope e^{-νQ(t,0)}. The pressure amplitude
/// p̂ = -2iΩ k_y ṽx / |k(t)|² is reported as a diagnostic.
pub fn evolve_velocity_3d(
    k0: &WaveVector3,
    v0: &VelocityModes,
    omega: f64,
    nu: f64,
    t: f64,
    steps: usize,
) -> Result<VelocityModes> {
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    if k0.kh_sq() == 0.0 {
        return Err(Error::InvalidArgument("mode needs k_y² + k_z² > 0".into()));
    }
    let res = incompressibility_residual(k0, omega, 0.0, v0);
    if res > 1e-8 {
        return Err(Error::Compressible { residual: res });
    }

    let y0 = [v0.vx.re, v0.vy.re, v0.vz.re, v0.vx.im, v0.vy.im, v0.vz.im];
    let y = if omega == 0.0 || t == 0.0 {
        y0.to_vec()
    } else {
        rk4_integrate(|tt, y, dy| vhat_rhs(k0, omega, tt, y, dy), &y0, 0.0, t, steps.max(1))?
    };

    let envelope = (-nu * q3_integral(k0, omega, t, 0.0)).exp();
    let vx = Complex64::new(y[0], y[3]) * envelope;
    let vy = Complex64::new(y[1], y[4]) * envelope;
    let vz = Complex64::new(y[2], y[5]) * envelope;
    let k2 = k0.norm_sq_at(omega, t);
    let pressure = Complex64::new(0.0, -2.0 * omega * k0.ky / k2) * vx;
    Ok(VelocityModes { vx, vy, vz, pressure })
}

/// Log-log slopes of |ṽx|, |ṽy|, |ṽz| against t over `window`, sampled at
/// 24 log-spaced times.
pub fn decay_exponents(
    k0: &WaveVector3,
    v0: &VelocityModes,
    omega: f64,
    nu: f64,
    window: (f64, f64),
) -> Result<[FitResult; 3]> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::EmptyWindow);
    }
    let n = 24;
    let mut pts: [Vec<(f64, f64)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for i in 0..n {
        let t = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
        let steps = (200.0 * (1.0 + omega.abs() * t)).ceil() as usize;
        let v = evolve_velocity_3d(k0, v0, omega, nu, t, steps)?;
        pts[0].push((t, v.vx.norm()));
        pts[1].push((t, v.vy.norm()));
        pts[2].push((t, v.vz.norm()));
    }
    Ok([
        fit_loglog_slope(&pts[0])?,
        fit_loglog_slope(&pts[1])?,
        fit_loglog_slope(&pts[2])?,
    ])
}

/// Log-log decay exponent of the streamwise amplitude |ṽx| over `window`;
/// run with ν = 0 to isolate the algebraic quenching from the viscous
/// envelope.
pub fn vx_decay_exponent(
    k0: &WaveVector3,
    v0: &VelocityModes,
    omega: f64,
    nu: f64,
    window: (f64, f64),
) -> Result<FitResult> {
    Ok(decay_exponents(k0, v0, omega, nu, window)?[0])
}
