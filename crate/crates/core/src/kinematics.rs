//! Wavevector trajectories k(t) and phase-mixing integrals Q(t) for linear
//! shear flows.
//!
//! The large-scale flow is U = (-y Ω_s, -x Ω_z) (hyperbolic orientation) or
//! U = (y Ω_s, -x Ω_z) (elliptic orientation). A Fourier mode advected by U
//! keeps the form exp(i k(t)·x) with
//!
//!   dk_x/dt = Ω_z k_y,    dk_y/dt = ± Ω_s k_x
//!
//! (+ for hyperbolic, − for elliptic). Same-sign shears stretch the
//! wavevector exponentially at the rate Ω = sqrt(Ω_z Ω_s); opposite-sign
//! shears rotate it on a bounded ellipse. The phase-mixing integral
//! Q(t) = ∫₀ᵗ |k(t₁)|² dt₁ is the exponent of the viscous envelope
//! exp(-ν Q).

use crate::error::{Error, Result};
use crate::numerics;

/// Large-scale shear flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShearFlow {
    /// U = (0, -x Ω_z): grows k_x linearly, k_y frozen.
    ZonalOnly { omega_z: f64 },
    /// U = (-y Ω_s, -x Ω_z) with Ω_z, Ω_s > 0: exponential stretching.
    Hyperbolic { omega_z: f64, omega_s: f64 },
    /// U = (y Ω_s, -x Ω_z) with Ω_z, Ω_s > 0: rotating wavevector.
    Elliptic { omega_z: f64, omega_s: f64 },
    /// Zonal shear with Ω_z(t) = Ω_z0 e^{-t/τ0}.
    DecayingZonal { omega_z0: f64, tau0: f64 },
}

impl ShearFlow {
    pub fn zonal(omega_z: f64) -> Result<Self> {
        if !omega_z.is_finite() {
            return Err(Error::InvalidArgument("omega_z must be finite".into()));
        }
        Ok(Self::ZonalOnly { omega_z })
    }

    pub fn hyperbolic(omega_z: f64, omega_s: f64) -> Result<Self> {
        if !(omega_z > 0.0 && omega_s > 0.0 && omega_z.is_finite() && omega_s.is_finite()) {
            return Err(Error::InvalidArgument(
                "hyperbolic flow needs omega_z > 0 and omega_s > 0".into(),
            ));
        }
        Ok(Self::Hyperbolic { omega_z, omega_s })
    }

    pub fn elliptic(omega_z: f64, omega_s: f64) -> Result<Self> {
        if !(omega_z > 0.0 && omega_s > 0.0 && omega_z.is_finite() && omega_s.is_finite()) {
            return Err(Error::InvalidArgument(
                "elliptic flow needs omega_z > 0 and omega_s > 0".into(),
            ));
        }
        Ok(Self::Elliptic { omega_z, omega_s })
    }

    pub fn decaying_zonal(omega_z0: f64, tau0: f64) -> Result<Self> {
        if !(omega_z0.is_finite() && tau0.is_finite() && tau0 > 0.0) {
            return Err(Error::InvalidArgument("decaying zonal flow needs tau0 > 0".into()));
        }
        Ok(Self::DecayingZonal { omega_z0, tau0 })
    }

    /// Combined shearing rate sqrt(Ω_z Ω_s) for the two-shear flows, the
    /// zonal rate otherwise.
    pub fn effective_omega(&self) -> f64 {
        match *self {
            Self::ZonalOnly { omega_z } => omega_z,
            Self::Hyperbolic { omega_z, omega_s } | Self::Elliptic { omega_z, omega_s } => {
                (omega_z * omega_s).sqrt()
            }
            Self::DecayingZonal { omega_z0, .. } => omega_z0,
        }
    }

    /// Mean vorticity of U at time `t` (z-component of curl U).
    pub fn mean_vorticity(&self, t: f64) -> f64 {
        match *self {
            Self::ZonalOnly { omega_z } => -omega_z,
            Self::Hyperbolic { omega_z, omega_s } => -omega_z + omega_s,
            Self::Elliptic { omega_z, omega_s } => -(omega_z + omega_s),
            Self::DecayingZonal { omega_z0, tau0 } => -omega_z0 * (-t / tau0).exp(),
        }
    }

    /// Time derivative of the mean vorticity; nonzero only for the decaying
    /// zonal flow.
    pub fn mean_vorticity_rate(&self, t: f64) -> f64 {
        match *self {
            Self::DecayingZonal { omega_z0, tau0 } => omega_z0 / tau0 * (-t / tau0).exp(),
            _ => 0.0,
        }
    }
}

/// A two-dimensional wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector2 {
    pub kx: f64,
    pub ky: f64,
}

impl WaveVector2 {
    pub fn new(kx: f64, ky: f64) -> Self {
        Self { kx, ky }
    }

    pub fn norm_sq(&self) -> f64 {
        self.kx * self.kx + self.ky * self.ky
    }
}

/// Sum/difference coordinates p = kx + ky, q = ky - kx.
///
/// Under equal-rate hyperbolic shear, p grows as e^{Ωt} and q decays as
/// e^{-Ωt}, so these are the principal coordinates of the stretching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedSumDiff {
    pub p: f64,
    pub q: f64,
}

impl RotatedSumDiff {
    pub fn from_wavevector(k: WaveVector2) -> Self {
        Self { p: k.kx + k.ky, q: k.ky - k.kx }
    }

    pub fn to_wavevector(self) -> WaveVector2 {
        WaveVector2::new((self.p - self.q) / 2.0, (self.p + self.q) / 2.0)
    }
}

/// Coefficients of Q(t) as a quadratic form in the initial wavevector:
/// Q = qxx kx0² + qxy kx0 ky0 + qyy ky0².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseForm {
    pub qxx: f64,
    pub qxy: f64,
    pub qyy: f64,
}

impl PhaseForm {
    pub fn eval(&self, k0: WaveVector2) -> f64 {
        self.qxx * k0.kx * k0.kx + self.qxy * k0.kx * k0.ky + self.qyy * k0.ky * k0.ky
    }

    /// Determinant 4 qxx qyy - qxy² of the doubled form; positive whenever
    /// the form is positive definite.
    pub fn det4(&self) -> f64 {
        4.0 * self.qxx * self.qyy - self.qxy * self.qxy
    }
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime { t });
    }
    Ok(())
}

fn rates_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// 1 - e^{-x} without cancellation.
fn one_minus_exp(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// h(x) = x - 1 + e^{-x} = ∫₀ˣ (1 - e^{-u}) du; series below the crossover
/// where the direct form loses significant digits to cancellation.
fn drift_i1(x: f64) -> f64 {
    if x < 1e-3 {
        x * x / 2.0 * (1.0 - x / 3.0 + x * x / 12.0 - x * x * x / 60.0)
    } else {
        x + (-x).exp_m1()
    }
}

/// g(x) = ∫₀ˣ (1 - e^{-u})² du = x - 2(1 - e^{-x}) + (1 - e^{-2x})/2,
/// with the same small-x series treatment.
fn drift_i2(x: f64) -> f64 {
    if x < 0.012 {
        let x2 = x * x;
        x2 * x * (1.0 / 3.0 - x / 4.0 + 7.0 * x2 / 60.0 - x2 * x / 24.0
            + 31.0 * x2 * x2 / 2520.0)
    } else {
        x - 2.0 * one_minus_exp(x) + 0.5 * one_minus_exp(2.0 * x)
    }
}

/// Right-hand side of the wavevector equation for `flow` at time `t`.
pub fn wavevector_rhs(flow: &ShearFlow, k: WaveVector2, t: f64) -> WaveVector2 {
    match *flow {
        ShearFlow::ZonalOnly { omega_z } => WaveVector2::new(omega_z * k.ky, 0.0),
        ShearFlow::Hyperbolic { omega_z, omega_s } => {
            WaveVector2::new(omega_z * k.ky, omega_s * k.kx)
        }
        ShearFlow::Elliptic { omega_z, omega_s } => {
            WaveVector2::new(omega_z * k.ky, -omega_s * k.kx)
        }
        ShearFlow::DecayingZonal { omega_z0, tau0 } => {
            WaveVector2::new(omega_z0 * (-t / tau0).exp() * k.ky, 0.0)
        }
    }
}

/// Closed-form trajectory k(t) starting from `k0` at t = 0.
pub fn wavevector_at(flow: &ShearFlow, k0: WaveVector2, t: f64) -> Result<WaveVector2> {
    check_time(t)?;
    Ok(match *flow {
        ShearFlow::ZonalOnly { omega_z } => {
            WaveVector2::new(k0.kx + k0.ky * omega_z * t, k0.ky)
        }
        ShearFlow::Hyperbolic { omega_z, omega_s } => {
            let om = (omega_z * omega_s).sqrt();
            let (c, s) = ((om * t).cosh(), (om * t).sinh());
            WaveVector2::new(
                c * k0.kx + omega_z / om * s * k0.ky,
                omega_s / om * s * k0.kx + c * k0.ky,
            )
        }
        ShearFlow::Elliptic { omega_z, omega_s } => {
            let om = (omega_z * omega_s).sqrt();
            let (s, c) = (om * t).sin_cos();
            WaveVector2::new(
                c * k0.kx + omega_z / om * s * k0.ky,
                -omega_s / om * s * k0.kx + c * k0.ky,
            )
        }
        ShearFlow::DecayingZonal { omega_z0, tau0 } => {
            let drift = omega_z0 * tau0 * one_minus_exp(t / tau0);
            WaveVector2::new(k0.kx + k0.ky * drift, k0.ky)
        }
    })
}

/// Exact inverse of [`wavevector_at`]: the initial wavevector that reaches
/// `kt` at time `t`.
pub fn initial_from_current(flow: &ShearFlow, kt: WaveVector2, t: f64) -> Result<WaveVector2> {
    check_time(t)?;
    Ok(match *flow {
        ShearFlow::ZonalOnly { omega_z } => {
            WaveVector2::new(kt.kx - kt.ky * omega_z * t, kt.ky)
        }
        ShearFlow::Hyperbolic { omega_z, omega_s } => {
            let om = (omega_z * omega_s).sqrt();
            let (c, s) = ((om * t).cosh(), (om * t).sinh());
            // Inverse of the cosh/sinh matrix; its determinant is 1.
            WaveVector2::new(
                c * kt.kx - omega_z / om * s * kt.ky,
                -omega_s / om * s * kt.kx + c * kt.ky,
            )
        }
        ShearFlow::Elliptic { omega_z, omega_s } => {
            let om = (omega_z * omega_s).sqrt();
            let (s, c) = (om * t).sin_cos();
            WaveVector2::new(
                c * kt.kx - omega_z / om * s * kt.ky,
                omega_s / om * s * kt.kx + c * kt.ky,
            )
        }
        ShearFlow::DecayingZonal { omega_z0, tau0 } => {
            let drift = omega_z0 * tau0 * one_minus_exp(t / tau0);
            WaveVector2::new(kt.kx - kt.ky * drift, kt.ky)
        }
    })
}

/// Phase-mixing integral Q(t) = ∫₀ᵗ |k(t₁)|² dt₁.
///
/// Closed forms for the zonal, equal-rate hyperbolic, elliptic and decaying
/// zonal flows; unequal-rate hyperbolic flows integrate numerically (RK4 on
/// the trajectory augmented with |k|²).
pub fn phase_integral(flow: &ShearFlow, k0: WaveVector2, t: f64) -> Result<f64> {
    check_time(t)?;
    if let ShearFlow::Hyperbolic { omega_z, omega_s } = *flow {
        if !rates_equal(omega_z, omega_s) {
            return phase_integral_numeric(flow, k0, t);
        }
    }
    Ok(phase_quadratic_form(flow, t)?.eval(k0))
}

/// Q(t) as a quadratic form in the initial wavevector.
///
/// The trajectory is linear in k0, so Q is exactly quadratic; for the
/// unequal-rate hyperbolic flow the three coefficients come from numerically
/// integrated basis trajectories.
pub fn phase_quadratic_form(flow: &ShearFlow, t: f64) -> Result<PhaseForm> {
    check_time(t)?;
    Ok(match *flow {
        ShearFlow::ZonalOnly { omega_z } => PhaseForm {
            qxx: t,
            qxy: omega_z * t * t,
            qyy: t + omega_z * omega_z * t * t * t / 3.0,
        },
        ShearFlow::Hyperbolic { omega_z, omega_s } => {
            if rates_equal(omega_z, omega_s) {
                let om = (omega_z * omega_s).sqrt();
                if om == 0.0 {
                    PhaseForm { qxx: t, qxy: 0.0, qyy: t }
                } else {
                    PhaseForm {
                        qxx: (2.0 * om * t).sinh() / (2.0 * om),
                        qxy: ((2.0 * om * t).cosh() - 1.0) / om,
                        qyy: (2.0 * om * t).sinh() / (2.0 * om),
                    }
                }
            } else {
                let e1 = WaveVector2::new(1.0, 0.0);
                let e2 = WaveVector2::new(0.0, 1.0);
                let e12 = WaveVector2::new(1.0, 1.0);
                let qxx = phase_integral_numeric(flow, e1, t)?;
                let qyy = phase_integral_numeric(flow, e2, t)?;
                let qxy = phase_integral_numeric(flow, e12, t)? - qxx - qyy;
                PhaseForm { qxx, qxy, qyy }
            }
        }
        ShearFlow::Elliptic { omega_z, omega_s } => {
            let om = (omega_z * omega_s).sqrt();
            let half = 0.5 * t;
            let s4 = (2.0 * om * t).sin() / (4.0 * om);
            let c2 = (1.0 - (2.0 * om * t).cos()) / (2.0 * om);
            PhaseForm {
                qxx: (half + s4) + (half - s4) * (omega_s / omega_z),
                qxy: (omega_z - omega_s) / om * c2,
                qyy: (half + s4) + (half - s4) * (omega_z / omega_s),
            }
        }
        ShearFlow::DecayingZonal { omega_z0, tau0 } => {
            // I1 = ∫(1-e^{-t/τ0}) dt = τ0 h(t/τ0), I2 = ∫(1-e^{-t/τ0})² dt
            // = τ0 g(t/τ0); both stay accurate in the frozen-shear limit
            // t ≪ τ0 where the naive differences cancel completely.
            let x = t / tau0;
            let i1 = tau0 * drift_i1(x);
            let i2 = tau0 * drift_i2(x);
            PhaseForm {
                qxx: t,
                qxy: 2.0 * omega_z0 * tau0 * i1,
                qyy: t + omega_z0 * omega_z0 * tau0 * tau0 * i2,
            }
        }
    })
}

/// Quadratic form of |k(t)|² in the initial wavevector, i.e. dQ/dt.
pub fn phase_form_rate(flow: &ShearFlow, t: f64) -> Result<PhaseForm> {
    check_time(t)?;
    // |k(t)|² = |M(t) k0|² with M the trajectory matrix.
    let (m11, m12, m21, m22) = match *flow {
        ShearFlow::ZonalOnly { omega_z } => (1.0, omega_z * t, 0.0, 1.0),
        ShearFlow::Hyperbolic { omega_z, omega_s } => {
            let om = (omega_z * omega_s).sqrt();
            let (c, s) = ((om * t).cosh(), (om * t).sinh());
            (c, omega_z / om * s, omega_s / om * s, c)
        }
        ShearFlow::Elliptic { omega_z, omega_s } => {
            let om = (omega_z * omega_s).sqrt();
            let (s, c) = (om * t).sin_cos();
            (c, omega_z / om * s, -omega_s / om * s, c)
        }
        ShearFlow::DecayingZonal { omega_z0, tau0 } => {
            (1.0, omega_z0 * tau0 * one_minus_exp(t / tau0), 0.0, 1.0)
        }
    };
    Ok(PhaseForm {
        qxx: m11 * m11 + m21 * m21,
        qxy: 2.0 * (m11 * m12 + m21 * m22),
        qyy: m12 * m12 + m22 * m22,
    })
}

/// RK4 fallback for Q(t): integrates (kx, ky, q) with dq/dt = |k|².
pub(crate) fn phase_integral_numeric(flow: &ShearFlow, k0: WaveVector2, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let om = flow.effective_omega().abs();
    let steps = (400.0 * (1.0 + om * t)).ceil() as usize;
    let y = numerics::rk4_integrate(
        |tt, y, dy| {
            let rhs = wavevector_rhs(flow, WaveVector2::new(y[0], y[1]), tt);
            dy[0] = rhs.kx;
            dy[1] = rhs.ky;
            dy[2] = y[0] * y[0] + y[1] * y[1];
        },
        &[k0.kx, k0.ky, 0.0],
        0.0,
        t,
        steps,
    )?;
    Ok(y[2])
}

/// Dissipation exponent Q₂ expressed in current-time coordinates for the
/// equal-rate hyperbolic flow:
/// (1/4Ω) [ (kx+ky)² (1 - e^{-2Ωt}) + (kx-ky)² (e^{2Ωt} - 1) ].
///
/// Over a circle |k(t)| = const this is minimal on the principal direction
/// kx = ky.
pub fn q2_in_current_coords(kt: WaveVector2, t: f64, omega: f64) -> f64 {
    let p = kt.kx + kt.ky;
    let d = kt.kx - kt.ky;
    (p * p * (1.0 - (-2.0 * omega * t).exp()) + d * d * ((2.0 * omega * t).exp() - 1.0))
        / (4.0 * omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn k(kx: f64, ky: f64) -> WaveVector2 {
        WaveVector2::new(kx, ky)
    }

    #[test]
    fn rhs_per_variant() {
        let z = ShearFlow::zonal(2.0).unwrap();
        let r = wavevector_rhs(&z, k(0.0, 1.0), 0.0);
        assert_eq!((r.kx, r.ky), (2.0, 0.0));

        let h = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let r = wavevector_rhs(&h, k(1.0, 1.0), 0.0);
        assert_eq!((r.kx, r.ky), (2.0, 2.0));

        let e = ShearFlow::elliptic(2.0, 2.0).unwrap();
        let r = wavevector_rhs(&e, k(1.0, 0.0), 0.0);
        assert_eq!((r.kx, r.ky), (0.0, -2.0));
    }

    #[test]
    fn zonal_trajectory() {
        let z = ShearFlow::zonal(2.0).unwrap();
        let kt = wavevector_at(&z, k(0.0, 1.0), 3.0).unwrap();
        assert_eq!((kt.kx, kt.ky), (6.0, 1.0));
    }

    #[test]
    fn hyperbolic_trajectory_grows_along_diagonal() {
        let h = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let kt = wavevector_at(&h, k(1.0, 1.0), 1.0).unwrap();
        let e2 = (2.0f64).exp();
        assert_relative_eq!(kt.kx, e2, max_relative = 1e-14);
        assert_relative_eq!(kt.ky, e2, max_relative = 1e-14);
    }

    #[test]
    fn elliptic_quarter_rotation() {
        let e = ShearFlow::elliptic(2.0, 2.0).unwrap();
        let kt = wavevector_at(&e, k(1.0, 0.0), std::f64::consts::FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(kt.kx, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(kt.ky, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn decaying_zonal_trajectory() {
        let d = ShearFlow::decaying_zonal(2.0, 10.0).unwrap();
        let kt = wavevector_at(&d, k(0.0, 1.0), 1.0).unwrap();
        assert_relative_eq!(kt.kx, 2.0 * 10.0 * (1.0 - (-0.1f64).exp()), max_relative = 1e-14);
        assert_eq!(kt.ky, 1.0);
    }

    #[test]
    fn inverse_recovers_initial() {
        let h = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let e2 = (2.0f64).exp();
        let k0 = initial_from_current(&h, k(e2, e2), 1.0).unwrap();
        assert_relative_eq!(k0.kx, 1.0, max_relative = 1e-12);
        assert_relative_eq!(k0.ky, 1.0, max_relative = 1e-12);

        let z = ShearFlow::zonal(2.0).unwrap();
        let k0 = initial_from_current(&z, k(6.0, 1.0), 3.0).unwrap();
        assert_eq!((k0.kx, k0.ky), (0.0, 1.0));

        // t = 0 is the identity for every flow.
        for flow in [
            z,
            h,
            ShearFlow::elliptic(1.0, 3.0).unwrap(),
            ShearFlow::decaying_zonal(2.0, 5.0).unwrap(),
        ] {
            let kt = initial_from_current(&flow, k(0.3, -0.7), 0.0).unwrap();
            assert_eq!((kt.kx, kt.ky), (0.3, -0.7));
        }
    }

    #[test]
    fn negative_time_rejected() {
        let z = ShearFlow::zonal(1.0).unwrap();
        assert!(matches!(wavevector_at(&z, k(1.0, 1.0), -0.5), Err(Error::NegativeTime { .. })));
        assert!(initial_from_current(&z, k(1.0, 1.0), -0.5).is_err());
        assert!(phase_integral(&z, k(1.0, 1.0), -0.5).is_err());
    }

    #[test]
    fn zonal_phase_integral_exact() {
        let z = ShearFlow::zonal(2.0).unwrap();
        let q = phase_integral(&z, k(0.0, 1.0), 3.0).unwrap();
        assert_relative_eq!(q, 39.0, max_relative = 1e-14);
    }

    #[test]
    fn hyperbolic_phase_integral_matches_printed_form() {
        let h = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let q = phase_integral(&h, k(0.0, 1.0), 1.0).unwrap();
        let expect = ((4.0f64).exp() - 1.0 + 1.0 - (-4.0f64).exp()) / 8.0;
        assert_relative_eq!(q, expect, max_relative = 1e-13);
    }

    #[test]
    fn no_shear_phase_integral_is_viscous() {
        let z = ShearFlow::zonal(0.0).unwrap();
        let q = phase_integral(&z, k(1.0, 2.0), 2.5).unwrap();
        assert_relative_eq!(q, 5.0 * 2.5, max_relative = 1e-14);
    }

    #[test]
    fn decaying_zonal_phase_integral_matches_rk4() {
        let d = ShearFlow::decaying_zonal(2.0, 10.0).unwrap();
        for &t in &[0.3, 1.0, 2.7] {
            let closed = phase_integral(&d, k(0.5, 1.0), t).unwrap();
            let numeric = phase_integral_numeric(&d, k(0.5, 1.0), t).unwrap();
            assert_relative_eq!(closed, numeric, max_relative = 1e-9);
        }
    }

    #[test]
    fn elliptic_phase_integral_matches_rk4() {
        let e = ShearFlow::elliptic(2.0, 0.5).unwrap();
        for &t in &[0.4, 1.3, 3.0] {
            let closed = phase_integral(&e, k(1.0, -0.5), t).unwrap();
            let numeric = phase_integral_numeric(&e, k(1.0, -0.5), t).unwrap();
            assert_relative_eq!(closed, numeric, max_relative = 1e-9);
        }
    }

    #[test]
    fn unequal_hyperbolic_uses_numeric_path() {
        let h = ShearFlow::hyperbolic(3.0, 1.0).unwrap();
        let q = phase_integral(&h, k(1.0, 1.0), 1.0).unwrap();
        let form = phase_quadratic_form(&h, 1.0).unwrap();
        assert_relative_eq!(q, form.eval(k(1.0, 1.0)), max_relative = 1e-8);
        assert!(q > 0.0);
    }

    #[test]
    fn elliptic_norm_conserved_for_equal_rates() {
        let e = ShearFlow::elliptic(2.0, 2.0).unwrap();
        for i in 0..30 {
            let t = 0.1 * i as f64;
            let kt = wavevector_at(&e, k(1.3, -0.4), t).unwrap();
            assert_abs_diff_eq!(kt.norm_sq(), 1.3f64.mul_add(1.3, 0.16), epsilon = 1e-12);
        }
    }

    #[test]
    fn elliptic_norm_bounds_for_unequal_rates() {
        let (oz, os) = (2.0, 0.5);
        let e = ShearFlow::elliptic(oz, os).unwrap();
        let k0 = k(1.0, 1.0);
        // kbar² = kx0² + (Ω_z/Ω_s) ky0²; |k|² oscillates between kbar²·min(1, Ω_s/Ω_z)
        // and kbar²·max(1, Ω_s/Ω_z) with period π/Ω.
        let kbar2 = k0.kx * k0.kx + oz / os * k0.ky * k0.ky;
        let (lo, hi) = (kbar2 * (os / oz).min(1.0), kbar2 * (os / oz).max(1.0));
        let om = (oz * os).sqrt();
        for i in 0..=200 {
            let t = i as f64 * 0.05;
            let n2 = wavevector_at(&e, k0, t).unwrap().norm_sq();
            assert!(n2 >= lo - 1e-10 && n2 <= hi + 1e-10);
        }
        let period = std::f64::consts::PI / om;
        let a = wavevector_at(&e, k0, 0.7).unwrap();
        let b = wavevector_at(&e, k0, 0.7 + period).unwrap();
        assert_abs_diff_eq!(a.norm_sq(), b.norm_sq(), epsilon = 1e-10);
    }

    #[test]
    fn hyperbolic_pq_product_invariant() {
        let h = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let k0 = k(0.7, -1.1);
        let pq0 = RotatedSumDiff::from_wavevector(k0);
        for i in 1..=10 {
            let t = 0.2 * i as f64;
            let pq = RotatedSumDiff::from_wavevector(wavevector_at(&h, k0, t).unwrap());
            assert_relative_eq!(pq.p * pq.q, pq0.p * pq0.q, max_relative = 1e-12);
        }
    }

    #[test]
    fn q2_current_coords_values() {
        let v = q2_in_current_coords(k(1.0, 1.0), 1.0, 2.0);
        assert_relative_eq!(v, 0.5 * (1.0 - (-4.0f64).exp()), max_relative = 1e-14);
        let v = q2_in_current_coords(k(1.0, -1.0), 1.0, 2.0);
        assert_relative_eq!(v, 0.5 * ((4.0f64).exp() - 1.0), max_relative = 1e-14);
        assert_eq!(q2_in_current_coords(k(0.4, 1.7), 0.0, 2.0), 0.0);
    }

    #[test]
    fn q2_minimal_on_principal_direction() {
        // Over a circle of fixed |k(t)|, Q₂ is smallest where kx = ky.
        let (t, om, r) = (1.0, 2.0, 1.7);
        let principal = q2_in_current_coords(
            k(r / 2f64.sqrt(), r / 2f64.sqrt()),
            t,
            om,
        );
        for i in 0..64 {
            let th = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
            let v = q2_in_current_coords(k(r * th.cos(), r * th.sin()), t, om);
            assert!(v + 1e-12 >= principal);
        }
    }

    #[test]
    fn q2_consistent_with_initial_coordinates() {
        let h = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let kt = k(1.4, -0.3);
        let t = 0.8;
        let k0 = initial_from_current(&h, kt, t).unwrap();
        let q = phase_integral(&h, k0, t).unwrap();
        assert_relative_eq!(q, q2_in_current_coords(kt, t, 2.0), max_relative = 1e-10);
    }

    #[test]
    fn closed_forms_match_rk4_grid() {
        // Coarse version of the acceptance sweep.
        let flows = vec![
            ShearFlow::zonal(2.0).unwrap(),
            ShearFlow::hyperbolic(1.0, 1.0).unwrap(),
            ShearFlow::elliptic(2.0, 0.5).unwrap(),
            ShearFlow::decaying_zonal(4.0, 3.0).unwrap(),
        ];
        for flow in &flows {
            for &(x, y) in &[(0.0, 1.0), (1.0, 1.0), (-1.0, 2.0)] {
                let k0 = k(x, y);
                for &t in &[0.5, 1.5, 3.0] {
                    let closed = wavevector_at(flow, k0, t).unwrap();
                    let num = numerics::rk4_integrate(
                        |tt, y, dy| {
                            let r = wavevector_rhs(flow, WaveVector2::new(y[0], y[1]), tt);
                            dy[0] = r.kx;
                            dy[1] = r.ky;
                        },
                        &[k0.kx, k0.ky],
                        0.0,
                        t,
                        2000,
                    )
                    .unwrap();
                    let scale = closed.norm_sq().sqrt().max(1.0);
                    assert!(
                        (closed.kx - num[0]).hypot(closed.ky - num[1]) <= 1e-8 * scale,
                        "flow {flow:?} k0 ({x},{y}) t {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn phase_integral_monotone_and_zero_at_origin() {
        let h = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let mut prev = phase_integral(&h, k(0.3, 0.9), 0.0).unwrap();
        assert_eq!(prev, 0.0);
        for i in 1..=12 {
            let q = phase_integral(&h, k(0.3, 0.9), 0.25 * i as f64).unwrap();
            assert!(q > prev);
            prev = q;
        }
    }

    #[test]
    fn sum_diff_round_trip() {
        let k0 = k(0.123456789, -9.87654321);
        let rt = RotatedSumDiff::from_wavevector(k0).to_wavevector();
        // Exact up to one rounding of the larger coordinate.
        assert_abs_diff_eq!(rt.kx, k0.kx, epsilon = 1e-14);
        assert_abs_diff_eq!(rt.ky, k0.ky, epsilon = 1e-14);
    }
}
