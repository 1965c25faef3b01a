//! One-dimensional quadrature: adaptive Gauss–Legendre panels, tanh-sinh for endpoint
//! singularities, semi-infinite and log-time integrals, and the radial Fourier reduction.

pub mod adaptive;
pub mod gauss_legendre;
pub mod tanh_sinh;

pub use adaptive::{integrate_breaks, integrate_interval, Estimate, QuadratureConfig};
pub use gauss_legendre::GaussLegendre;
pub use tanh_sinh::tanh_sinh;

use crate::error::{invalid, Result};
use crate::specfun::{bessel_j, gamma};
use std::f64::consts::PI;

fn geometric_breaks(origin: f64, scale: f64, length: f64) -> Vec<f64> {
    let mut b = vec![origin];
    let mut w = scale;
    while w < length {
        b.push(origin + w);
        w *= 2.0;
    }
    b.push(origin + length);
    b
}

/// ∫₀^∞ f(r) dr for f decaying at least like e^{−r/decay_scale}.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    decay_scale: f64,
    cfg: &QuadratureConfig,
) -> Estimate {
    let l = cfg.truncation_factor * decay_scale;
    let head = tanh_sinh(|x, _, _| f(x), 0.0, decay_scale, cfg);
    let mut breaks = geometric_breaks(decay_scale, decay_scale, l - decay_scale);
    breaks.dedup();
    let body = integrate_breaks(&mut f, &breaks, cfg);
    let tail = (f(l) * decay_scale).abs();
    let mut e = head.add(body);
    e.error += tail;
    e
}

/// ∫_{−∞}^{∞} f(u) du for f decaying exponentially away from `center`.
pub fn integrate_line<F: FnMut(f64) -> f64>(
    mut f: F,
    center: f64,
    lower_scale: f64,
    upper_scale: f64,
    lower_limit: Option<f64>,
    cfg: &QuadratureConfig,
) -> Estimate {
    let tf = cfg.truncation_factor;
    let mut lo = center - tf * lower_scale;
    let mut lower_tail = true;
    if let Some(ll) = lower_limit {
        if ll > lo {
            lo = ll;
            lower_tail = false;
        }
    }
    let hi = center + tf * upper_scale;
    let mut breaks: Vec<f64> = Vec::new();
    if lo < center {
        let down = geometric_breaks(0.0, 0.5 * lower_scale.min(1.0), center - lo);
        breaks.extend(down.iter().rev().map(|d| center - d));
    } else {
        breaks.push(lo);
    }
    let up = geometric_breaks(0.0, 0.5 * upper_scale.min(1.0), hi - breaks.last().copied().unwrap_or(center).max(center));
    let base = breaks.last().copied().unwrap().max(center);
    for d in up.iter().skip(1) {
        breaks.push(base + d);
    }
    breaks.dedup();
    let mut e = integrate_breaks(&mut f, &breaks, cfg);
    e.error += (f(hi) * upper_scale).abs();
    if lower_tail {
        e.error += (f(lo) * lower_scale).abs();
    }
    e
}

/// Trapezoidal sum over the line for integrands analytic in the strip |Im u| < `strip`
/// and decaying exponentially at both ends. The step is chosen from the strip width and
/// `rel_tol`. The discretization error decays like e^{−2π·strip/h}, so the error at step
/// h is estimated as the square of the relative change from step 2h.
pub fn trapezoid_line<F: FnMut(f64) -> f64>(
    mut f: F,
    center: f64,
    lower_scale: f64,
    upper_scale: f64,
    strip: f64,
    cfg: &QuadratureConfig,
) -> Estimate {
    let tf = cfg.truncation_factor;
    let h = 2.0 * PI * strip / (1.0 / cfg.rel_tol.max(1e-15)).ln();
    let lo = -((tf * lower_scale / h).ceil() as i64);
    let hi = (tf * upper_scale / h).ceil() as i64;
    let (mut fine, mut coarse, mut l1) = (0.0, 0.0, 0.0);
    let mut evaluations = 0;
    for j in lo..=hi {
        let v = f(center + j as f64 * h);
        evaluations += 1;
        fine += v;
        l1 += v.abs();
        if j.rem_euclid(2) == 0 {
            coarse += v;
        }
    }
    let value = h * fine;
    let edge = (f(center + lo as f64 * h) * lower_scale).abs() + (f(center + hi as f64 * h) * upper_scale).abs();
    let diff = (value - 2.0 * h * coarse).abs();
    let discretization = if diff < value.abs() { diff * diff / value.abs() } else { diff };
    let error = discretization + edge + 64.0 * f64::EPSILON * h * l1;
    Estimate { value, error, converged: error <= (cfg.rel_tol * value.abs()).max(cfg.abs_tol), evaluations: evaluations + 2 }
}

/// Where the mass of a time integrand ∫₀^∞ t^{s−1} f(t) dt sits: `center` is a typical
/// time, the rates are the exponential decay rates in u = ln t on either side, and
/// `t_min` is a cutoff below which f is negligible (0 = none).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub center: f64,
    pub lower_rate: f64,
    pub upper_rate: f64,
    pub t_min: f64,
}

impl TimeWindow {
    pub fn new(center: f64, lower_rate: f64, upper_rate: f64) -> Self {
        TimeWindow { center, lower_rate, upper_rate, t_min: 0.0 }
    }

    pub fn with_t_min(mut self, t_min: f64) -> Self {
        self.t_min = t_min;
        self
    }
}

/// ∫₀^∞ t^{s−1} f(t) dt through u = ln t.
pub fn integrate_time_power<F: FnMut(f64) -> f64>(
    s: f64,
    mut f: F,
    window: TimeWindow,
    cfg: &QuadratureConfig,
) -> Estimate {
    let lower_limit = if window.t_min > 0.0 { Some(window.t_min.ln()) } else { None };
    integrate_line(
        |u| {
            let t = u.exp();
            let v = f(t);
            if v == 0.0 {
                0.0
            } else {
                (s * u).exp() * v
            }
        },
        window.center.ln(),
        1.0 / window.lower_rate,
        1.0 / window.upper_rate,
        lower_limit,
        cfg,
    )
}

/// ∫_{ℝ^k} e^{−i⟨w,λ⟩} f(|λ|) dλ at |w| = rho, reduced to one radial integral.
pub fn radial_fourier<F: FnMut(f64) -> f64>(
    k: usize,
    rho: f64,
    mut f: F,
    decay_scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if k == 0 {
        return Err(invalid("radial_fourier needs k >= 1"));
    }
    if !(rho >= 0.0) {
        return Err(invalid("radial_fourier needs rho >= 0"));
    }
    let kf = k as f64;
    let l = cfg.truncation_factor * decay_scale;
    let breaks = if rho * l > PI {
        let width = PI / rho;
        let n = ((l / width).ceil() as usize).clamp(1, (cfg.max_panels / 8).max(1));
        (0..=n).map(|i| l * i as f64 / n as f64).collect::<Vec<_>>()
    } else {
        let mut b = vec![0.0];
        b.extend(geometric_breaks(0.0, decay_scale, l).into_iter().skip(1));
        b
    };
    if rho == 0.0 || rho * l < 1e-300 {
        let c = 2.0 * PI.powf(0.5 * kf) / gamma(0.5 * kf)?;
        let mut g = |r: f64| r.powi(k as i32 - 1) * f(r);
        let mut e = integrate_breaks(&mut g, &breaks, cfg);
        e.error += (g(l) * decay_scale).abs();
        return Ok(e.scale(c));
    }
    let e = match k {
        1 => {
            let mut g = |r: f64| (rho * r).cos() * f(r);
            let mut e = integrate_breaks(&mut g, &breaks, cfg);
            e.error += (f(l) * decay_scale).abs();
            e.scale(2.0)
        }
        3 => {
            let mut g = |r: f64| r * (rho * r).sin() * f(r);
            let mut e = integrate_breaks(&mut g, &breaks, cfg);
            e.error += (l * f(l) * decay_scale).abs();
            e.scale(4.0 * PI / rho)
        }
        _ => {
            let nu = 0.5 * kf - 1.0;
            let mut g = |r: f64| r.powf(0.5 * kf) * f(r) * bessel_j(nu, rho * r).unwrap_or(f64::NAN);
            let mut e = integrate_breaks(&mut g, &breaks, cfg);
            e.error += (l.powf(0.5 * kf) * f(l) * decay_scale).abs();
            e.scale((2.0 * PI).powf(0.5 * kf) * rho.powf(1.0 - 0.5 * kf))
        }
    };
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gegenbauer_closed_form;

    #[test]
    fn exponential_and_hyperbolic() {
        let cfg = QuadratureConfig::default();
        let e = integrate_semi_infinite(|r: f64| (-r).exp(), 1.0, &cfg);
        assert!((e.value - 1.0).abs() < 1e-13, "{e:?}");
        let e = integrate_semi_infinite(|r: f64| if r == 0.0 { 1.0 } else { r / r.sinh() }, 1.0, &cfg);
        // 2 Σ (2j+1)^{−2} = π²/4
        let series: f64 = 2.0 * (0..2_000_000).map(|j| 1.0 / ((2 * j + 1) as f64).powi(2)).sum::<f64>();
        assert!((e.value - PI * PI / 4.0).abs() < 1e-12);
        assert!((series - PI * PI / 4.0).abs() < 1e-6);
    }

    #[test]
    fn gegenbauer_example() {
        let cfg = QuadratureConfig::default();
        let e = integrate_semi_infinite(|t: f64| t.sqrt() * (-t).exp() * bessel_j(0.5, t).unwrap(), 1.0, &cfg);
        let want = gegenbauer_closed_form(0.5, 1.5, 1.0, 1.0).unwrap();
        assert!((e.value - want).abs() < 1e-10 * want.abs());
    }

    #[test]
    fn time_power_gamma_integrals() {
        let cfg = QuadratureConfig::default();
        let e = integrate_time_power(0.3, |t: f64| (-t).exp(), TimeWindow::new(1.0, 0.3, 1.0), &cfg);
        let g = gamma(0.3).unwrap();
        assert!((e.value - g).abs() < 1e-10 * g, "{e:?}");
        // ∫ t^{−(1+s)} e^{−c/t} dt = Γ(s) c^{−s}
        let (s, c) = (0.6, 2.5);
        let e = integrate_time_power(-s, |t: f64| (-c / t).exp(), TimeWindow::new(c, 1.0, s), &cfg);
        let want = gamma(s).unwrap() * c.powf(-s);
        assert!((e.value - want).abs() < 1e-10 * want, "{e:?}");
    }

    #[test]
    fn radial_fourier_closed_forms() {
        let cfg = QuadratureConfig::default();
        let e = radial_fourier(3, 1.0, |r: f64| (-r * r).exp(), 0.25, &cfg).unwrap();
        let want = PI.powf(1.5) * (-0.25f64).exp();
        assert!((e.value - want).abs() < 1e-10 * want);
        let e = radial_fourier(2, 0.0, |r: f64| (-r).exp(), 1.0, &cfg).unwrap();
        assert!((e.value - 2.0 * PI).abs() < 1e-10);
        // k = 1: 2∫cos(ρr)e^{−r²}dr = √π e^{−ρ²/4}
        let e = radial_fourier(1, 2.0, |r: f64| (-r * r).exp(), 0.25, &cfg).unwrap();
        assert!((e.value - PI.sqrt() * (-1.0f64).exp()).abs() < 1e-12);
        // generic Bessel branch k = 4: ∫ e^{−i⟨w,λ⟩} e^{−|λ|²} = π² e^{−ρ²/4}
        let e = radial_fourier(4, 1.5, |r: f64| (-r * r).exp(), 0.25, &cfg).unwrap();
        let want = PI * PI * (-1.5f64 * 1.5 / 4.0).exp();
        assert!((e.value - want).abs() < 1e-10 * want, "{} vs {want}", e.value);
    }
}
