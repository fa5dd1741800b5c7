//! Self-contained numerical building blocks: a fixed-step RK4 integrator,
//! composite-Simpson quadrature on a square, central differences, cumulative
//! trapezoids and least-squares line fits.
//!
//! These routines are deliberately simple and deterministic; the rest of the
//! crate uses them as independent oracles for its closed forms.

use crate::error::{Error, Result};
use crate::par;

/// Uniform one-dimensional grid with `count` nodes on `[start, stop]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealGrid1d {
    start: f64,
    stop: f64,
    count: usize,
}

impl RealGrid1d {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if count < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: count });
        }
        if stop <= start {
            return Err(Error::InvalidArgument(format!(
                "grid needs stop > start, got [{start}, {stop}]"
            )));
        }
        Ok(Self { start, stop, count })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    /// Node value; the last node is exactly `stop`.
    pub fn value(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + i as f64 * self.spacing()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// Result of a least-squares line fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination in `[0, 1]`.
    pub r_squared: f64,
    /// Standard error of the slope estimate.
    pub stderr_slope: f64,
}

/// Classical fixed-step RK4 over `[t0, t1]`.
///
/// `rhs(t, y, dy)` writes the derivative of `y` into `dy`. Fails with the
/// offending step index if the state stops being finite.
pub fn rk4_integrate<F>(rhs: F, y0: &[f64], t0: f64, t1: f64, steps: usize) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    let d = y0.len();
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; d];
    let mut k2 = vec![0.0; d];
    let mut k3 = vec![0.0; d];
    let mut k4 = vec![0.0; d];
    let mut tmp = vec![0.0; d];

    for step in 0..steps {
        let t = t0 + step as f64 * h;
        rhs(t, &y, &mut k1);
        for i in 0..d {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        rhs(t + 0.5 * h, &tmp, &mut k2);
        for i in 0..d {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        rhs(t + 0.5 * h, &tmp, &mut k3);
        for i in 0..d {
            tmp[i] = y[i] + h * k3[i];
        }
        rhs(t + h, &tmp, &mut k4);
        for i in 0..d {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { step });
        }
    }
    Ok(y)
}

fn simpson_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Composite Simpson rule on `[-half_width, half_width]^2` with
/// `cells_per_axis` subintervals per axis (must be even).
///
/// Rows are evaluated in parallel when the `parallel` feature is enabled;
/// the summation order is fixed, so the result is identical either way.
pub fn quad2d<F>(f: F, half_width: f64, cells_per_axis: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    quad2d_impl(f, half_width, cells_per_axis, false)
}

/// Sequential twin of [`quad2d`]; used by the benchmark suite.
#[doc(hidden)]
pub fn quad2d_seq<F>(f: F, half_width: f64, cells_per_axis: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    quad2d_impl(f, half_width, cells_per_axis, true)
}

fn quad2d_impl<F>(f: F, half_width: f64, n: usize, force_seq: bool) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "cells_per_axis must be even and >= 2, got {n}"
        )));
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::InvalidArgument("half_width must be positive".into()));
    }
    let h = 2.0 * half_width / n as f64;
    let node = |i: usize| {
        if i == n {
            half_width
        } else {
            -half_width + i as f64 * h
        }
    };

    let row = |j: usize| -> Result<f64> {
        let y = node(j);
        let mut acc = 0.0;
        for i in 0..=n {
            let x = node(i);
            let v = f(x, y);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { x, y });
            }
            acc += simpson_weight(i, n) * v;
        }
        Ok(acc)
    };

    let rows = if force_seq {
        par::map_indexed_seq(n + 1, row)
    } else {
        par::map_indexed(n + 1, row)
    };

    let mut total = 0.0;
    for (j, r) in rows.into_iter().enumerate() {
        total += simpson_weight(j, n) * r?;
    }
    Ok((h / 3.0) * (h / 3.0) * total)
}

/// Composite Simpson rule on `[a, b]` with `n` (even) subintervals.
pub(crate) fn simpson1d<F>(f: F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "subintervals must be even and >= 2, got {n}"
        )));
    }
    let h = (b - a) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let x = if i == n { b } else { a + i as f64 * h };
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteEval { at: x });
        }
        acc += simpson_weight(i, n) * v;
    }
    Ok(h / 3.0 * acc)
}

/// Second-order central difference `(f(t+h) - f(t-h)) / (2h)`.
pub fn central_diff<F>(f: F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    let fp = f(t + h);
    if !fp.is_finite() {
        return Err(Error::NonFiniteEval { at: t + h });
    }
    let fm = f(t - h);
    if !fm.is_finite() {
        return Err(Error::NonFiniteEval { at: t - h });
    }
    Ok((fp - fm) / (2.0 * h))
}

/// Default differentiation step used by callers of [`central_diff`].
pub fn default_diff_step(t: f64) -> f64 {
    1e-5 * t.abs().max(1.0)
}

/// Cumulative trapezoidal integral of `ys` over `ts`; first element is 0.
pub fn cumtrapz(ts: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    if ts.len() != ys.len() {
        return Err(Error::LengthMismatch { left: ts.len(), right: ys.len() });
    }
    let mut out = Vec::with_capacity(ts.len());
    if ts.is_empty() {
        return Ok(out);
    }
    out.push(0.0);
    for i in 1..ts.len() {
        if ts[i] <= ts[i - 1] {
            return Err(Error::NotIncreasing { index: i });
        }
        let inc = 0.5 * (ys[i] + ys[i - 1]) * (ts[i] - ts[i - 1]);
        out.push(out[i - 1] + inc);
    }
    Ok(out)
}

/// Least-squares line through `(x, y)` points.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<FitResult> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all abscissae are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    // ss_tot == 0 means a constant target; the fit is exact.
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    let stderr_slope = if n > 2 { (ss_res / (n as f64 - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(FitResult { slope, intercept, r_squared, stderr_slope })
}

/// Least-squares line on `(ln x, ln y)`; all coordinates must be positive.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: points.len() });
    }
    let mut logs = Vec::with_capacity(points.len());
    for (index, &(x, y)) in points.iter().enumerate() {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::NonPositivePoint { index, x, y });
        }
        logs.push((x.ln(), y.ln()));
    }
    fit_linear(&logs)
}
