//! Effective dissipation times and their scaling in the shearing rate.
//!
//! τ_e is defined operationally as the threshold crossing
//! ⟨ω²⟩(τ_e) = threshold · R, where R is the initial value for bounded
//! spectra and the spectrum amplitude φ for spectra that diverge at t = 0.
//! Scanning τ_e over a log-spaced range of shearing rates and fitting
//! ln τ_e against ln Ω recovers the scaling exponents; for a δ-spectrum
//! under hyperbolic shear the product Ω τ_e grows linearly in ln Ω instead.

use crate::error::{Error, Result};
use crate::infogeo::InfoSeries;
use crate::kinematics::ShearFlow;
use crate::numerics::{fit_linear, fit_loglog_slope, FitResult};
use crate::par;
use crate::spectra::{mean_square_vorticity, SpectrumModel};

/// Flow family scanned over the shearing rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowFamily {
    /// Zonal shear with rate Ω.
    Zonal,
    /// Equal-rate hyperbolic shear Ω_z = Ω_s = Ω.
    HyperbolicEqual,
}

impl FlowFamily {
    pub fn flow(&self, omega: f64) -> Result<ShearFlow> {
        match self {
            Self::Zonal => ShearFlow::zonal(omega),
            Self::HyperbolicEqual => ShearFlow::hyperbolic(omega, omega),
        }
    }
}

/// τ_e scan over shearing rates with the fitted scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct TauEScan {
    pub omegas: Vec<f64>,
    pub tau_e: Vec<f64>,
    /// Log-log fit of τ_e against Ω.
    pub fit: FitResult,
    /// Linear fit of Ω·τ_e against ln Ω (δ-spectrum × hyperbolic only).
    pub omega_taue_log_fit: Option<FitResult>,
    pub model: SpectrumModel,
    pub family: FlowFamily,
}

const T_MAX: f64 = 1e6;

/// Reference level for the threshold crossing.
fn reference_level(model: &SpectrumModel, flow: &ShearFlow, nu: f64) -> Result<f64> {
    match model {
        SpectrumModel::Delta { .. } | SpectrumModel::GaussianIso { .. } => {
            mean_square_vorticity(model, flow, nu, 0.0)
        }
        SpectrumModel::Constant { phi } | SpectrumModel::AnisoConstant { phi } => Ok(*phi),
    }
}

/// First time at which ⟨ω²⟩ falls to `threshold` times the reference level.
///
/// ⟨ω²⟩ decays strictly, so the crossing is unique; the bracket grows
/// geometrically and bisection runs to 1e-10 relative accuracy in τ_e.
pub fn effective_dissipation_time(
    model: &SpectrumModel,
    flow: &ShearFlow,
    nu: f64,
    threshold: f64,
) -> Result<f64> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidArgument("threshold must lie in (0, 1)".into()));
    }
    let target = threshold * reference_level(model, flow, nu)?;
    let value = |t: f64| mean_square_vorticity(model, flow, nu, t);

    let mut lo = 1e-12;
    let mut hi = 1.0;
    while value(hi)? > target {
        hi *= 2.0;
        if hi > T_MAX {
            return Err(Error::NoCrossing { t_max: T_MAX });
        }
    }
    // The divergent spectra exceed the target at any small positive time.
    if value(lo)? < target {
        return Err(Error::NoCrossing { t_max: lo });
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if value(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans τ_e over a shearing-rate list and fits the scaling exponent.
/// Points are evaluated independently (in parallel when enabled) and the
/// output stays ordered by Ω.
pub fn scan_tau_e(
    model: &SpectrumModel,
    family: FlowFamily,
    nu: f64,
    omegas: &[f64],
    threshold: f64,
) -> Result<TauEScan> {
    if omegas.len() < 6 {
        return Err(Error::TooFewPoints { needed: 6, got: omegas.len() });
    }
    for w in omegas.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::NotIncreasing { index: 1 });
        }
    }
    let tau_e = par::map_indexed(omegas.len(), |i| {
        family
            .flow(omegas[i])
            .and_then(|flow| effective_dissipation_time(model, &flow, nu, threshold))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let pts: Vec<(f64, f64)> = omegas.iter().copied().zip(tau_e.iter().copied()).collect();
    let fit = fit_loglog_slope(&pts)?;
    let omega_taue_log_fit = match (model, family) {
        (SpectrumModel::Delta { .. }, FlowFamily::HyperbolicEqual) => {
            let lin: Vec<(f64, f64)> =
                pts.iter().map(|&(om, tau)| (om.ln(), om * tau)).collect();
            Some(fit_linear(&lin)?)
        }
        _ => None,
    };
    Ok(TauEScan { omegas: omegas.to_vec(), tau_e, fit, omega_taue_log_fit, model: *model, family })
}

/// Log-spaced shearing rates for scans.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument("need 0 < lo < hi".into()));
    }
    if count < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: count });
    }
    let step = (hi / lo).ln() / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { hi } else { lo * (i as f64 * step).exp() })
        .collect())
}

/// Late-time behaviour to extract from a τ(t) series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoteKind {
    PowerLaw,
    Exponential,
    Plateau,
}

/// Fitted asymptote of τ(t) on a window.
#[derive(Debug, Clone, PartialEq)]
pub enum AsymptoteFit {
    /// Log-log slope of τ against t.
    PowerLaw(FitResult),
    /// Slope of ln τ against t.
    Exponential(FitResult),
    Plateau { mean: f64, max_rel_deviation: f64 },
}

/// Fits the τ(t) asymptote on `window` ⊆ the series range.
pub fn fit_tau_t_asymptote(
    series: &InfoSeries,
    window: (f64, f64),
    kind: AsymptoteKind,
) -> Result<AsymptoteFit> {
    let pts: Vec<(f64, f64)> = series
        .ts
        .iter()
        .zip(series.tau.iter())
        .filter(|(&t, _)| t >= window.0 && t <= window.1)
        .map(|(&t, &tau)| (t, tau))
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptyWindow);
    }
    match kind {
        AsymptoteKind::PowerLaw => Ok(AsymptoteFit::PowerLaw(fit_loglog_slope(&pts)?)),
        AsymptoteKind::Exponential => {
            let logs: Vec<(f64, f64)> = pts
                .iter()
                .map(|&(t, tau)| {
                    if tau > 0.0 {
                        Ok((t, tau.ln()))
                    } else {
                        Err(Error::NonPositivePoint { index: 0, x: t, y: tau })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AsymptoteFit::Exponential(fit_linear(&logs)?))
        }
        AsymptoteKind::Plateau => {
            let mean = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
            let max_rel_deviation = pts
                .iter()
                .map(|p| (p.1 - mean).abs() / mean)
                .fold(0.0, f64::max);
            Ok(AsymptoteFit::Plateau { mean, max_rel_deviation })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infogeo::info_series;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const NU: f64 = 0.1;
    const THR: f64 = 0.36787944117144233; // 1/e

    fn delta01() -> SpectrumModel {
        SpectrumModel::delta(0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn delta_zonal_crossing() {
        // Root of 0.26667 t³ + 0.2 t = 1.
        let f = ShearFlow::zonal(2.0).unwrap();
        let tau = effective_dissipation_time(&delta01(), &f, NU, THR).unwrap();
        assert_abs_diff_eq!(tau, 1.3926, epsilon = 1e-3);
        // 2 nu Q(tau) = 1 at the crossing.
        let q = 2.0 * NU * (4.0 / 3.0 * tau.powi(3) + tau);
        assert_abs_diff_eq!(q, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn shear_free_crossing_exact() {
        let f = ShearFlow::zonal(0.0).unwrap();
        let tau = effective_dissipation_time(&delta01(), &f, NU, THR).unwrap();
        assert_relative_eq!(tau, 5.0, max_relative = 1e-9);
    }

    #[test]
    fn delta_hyperbolic_near_log_estimate() {
        let f = ShearFlow::hyperbolic(2.0, 2.0).unwrap();
        let tau = effective_dissipation_time(&delta01(), &f, NU, THR).unwrap();
        let estimate = (2.0f64 * 2.0 / NU).ln() / (2.0 * 2.0);
        assert!((tau - estimate).abs() / estimate < 0.2, "tau {tau} vs {estimate}");
        // The crossing solves sinh(2 Omega tau) = Omega / nu exactly.
        let exact = (2.0f64 / NU * 2.0 / 2.0).asinh() / 4.0;
        assert_relative_eq!(tau, exact, max_relative = 1e-8);
    }

    #[test]
    fn scan_slopes_match_expected_exponents() {
        let omegas = log_spaced(4.0, 64.0, 7).unwrap();
        let scan =
            scan_tau_e(&delta01(), FlowFamily::Zonal, NU, &omegas, THR).unwrap();
        assert_abs_diff_eq!(scan.fit.slope, -2.0 / 3.0, epsilon = 0.05);

        let constant = SpectrumModel::constant(1.0).unwrap();
        let scan = scan_tau_e(&constant, FlowFamily::Zonal, NU, &omegas, THR).unwrap();
        assert_abs_diff_eq!(scan.fit.slope, -0.5, epsilon = 0.05);

        let scan =
            scan_tau_e(&delta01(), FlowFamily::HyperbolicEqual, NU, &omegas, THR).unwrap();
        let lin = scan.omega_taue_log_fit.unwrap();
        assert!(lin.r_squared >= 0.99);
        // Omega tau_e = asinh(Omega/nu)/2 grows with slope 1/2 in ln(Omega).
        assert_abs_diff_eq!(lin.slope, 0.5, epsilon = 0.01);
    }

    #[test]
    fn tau_e_monotone_in_omega() {
        let omegas = log_spaced(4.0, 64.0, 7).unwrap();
        for (model, family) in [
            (delta01(), FlowFamily::Zonal),
            (SpectrumModel::constant(1.0).unwrap(), FlowFamily::Zonal),
            (delta01(), FlowFamily::HyperbolicEqual),
            (SpectrumModel::constant(1.0).unwrap(), FlowFamily::HyperbolicEqual),
        ] {
            let scan = scan_tau_e(&model, family, NU, &omegas, THR).unwrap();
            for w in scan.tau_e.windows(2) {
                assert!(w[1] < w[0]);
            }
        }
    }

    #[test]
    fn threshold_robustness_of_exponents() {
        let omegas = log_spaced(4.0, 64.0, 7).unwrap();
        for model in [delta01(), SpectrumModel::constant(1.0).unwrap()] {
            let s1 = scan_tau_e(&model, FlowFamily::Zonal, NU, &omegas, THR).unwrap();
            let s2 =
                scan_tau_e(&model, FlowFamily::Zonal, NU, &omegas, THR * THR).unwrap();
            assert!((s1.fit.slope - s2.fit.slope).abs() < 0.03);
        }
    }

    #[test]
    fn gaussian_exponent_moves_toward_constant_scaling() {
        let omegas = log_spaced(40.0, 640.0, 7).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for alpha in [1.0, 10.0, 100.0] {
            let m = SpectrumModel::gaussian_iso(alpha, 1.0).unwrap();
            let scan = scan_tau_e(&m, FlowFamily::Zonal, NU, &omegas, THR).unwrap();
            assert!(scan.fit.slope > prev, "monotone in alpha");
            assert!(scan.fit.slope > -2.0 / 3.0 && scan.fit.slope < -0.5);
            prev = scan.fit.slope;
        }
    }

    #[test]
    fn asymptote_fits() {
        // Power law and exponential fits on synthetic series.
        let ts: Vec<f64> = (1..=60).map(|i| 0.5 * i as f64).collect();
        let e: Vec<f64> = ts.iter().map(|&t| (3.0 / (t * t)).powi(2)).collect(); // tau = t²/3
        let s = InfoSeries::from_rates(&ts, &e).unwrap();
        match fit_tau_t_asymptote(&s, (5.0, 25.0), AsymptoteKind::PowerLaw).unwrap() {
            AsymptoteFit::PowerLaw(f) => assert_abs_diff_eq!(f.slope, 2.0, epsilon = 1e-10),
            _ => panic!(),
        }
        let e: Vec<f64> = ts.iter().map(|&t| (4.0 * t).exp()).collect(); // tau = e^{-2t}
        let s = InfoSeries::from_rates(&ts, &e).unwrap();
        match fit_tau_t_asymptote(&s, (5.0, 25.0), AsymptoteKind::Exponential).unwrap() {
            AsymptoteFit::Exponential(f) => assert_abs_diff_eq!(f.slope, -2.0, epsilon = 1e-10),
            _ => panic!(),
        }
        match fit_tau_t_asymptote(&s, (100.0, 200.0), AsymptoteKind::Plateau) {
            Err(Error::EmptyWindow) => {}
            other => panic!("expected empty window, got {other:?}"),
        }
    }

    #[test]
    fn constant_hyperbolic_tau_plateau_scaling() {
        // Plateau value scales as 1/Omega across rates.
        let constant = SpectrumModel::constant(1.0).unwrap();
        let mut products = Vec::new();
        for om in [1.0, 2.0, 4.0] {
            let flow = ShearFlow::hyperbolic(om, om).unwrap();
            let ts: Vec<f64> = (0..=60)
                .map(|i| 3.0 / om + (3.0 / om) * i as f64 / 60.0)
                .collect();
            let s = info_series(&constant, &flow, NU, &ts).unwrap();
            match fit_tau_t_asymptote(&s, (3.0 / om, 6.0 / om), AsymptoteKind::Plateau).unwrap()
            {
                AsymptoteFit::Plateau { mean, max_rel_deviation } => {
                    assert!(max_rel_deviation <= 0.01);
                    products.push(om * mean);
                }
                _ => panic!(),
            }
        }
        let avg = products.iter().sum::<f64>() / products.len() as f64;
        for p in products {
            assert!((p - avg).abs() / avg <= 0.02);
        }
    }
}
