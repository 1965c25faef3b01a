//! Integrals over the group of functions radial in z and in σ:
//! ∫_G f(|z|, |σ|) dg = |S^{m−1}||S^{k−1}| ∫₀^∞∫₀^∞ r^{m−1} ρ^{k−1} f(r, ρ) dρ dr.

use crate::error::{HtkError, Result};
use crate::quadrature::{integrate_breaks, integrate_line, trapezoid_line, Estimate, QuadratureConfig};
use crate::specfun::sphere_area;
use std::cell::RefCell;

fn dyadic_breaks(max: f64, levels: usize) -> Vec<f64> {
    let mut b = vec![0.0];
    for j in (0..levels).rev() {
        b.push(max * 0.5f64.powi(j as i32));
    }
    b
}

fn remember(slot: &RefCell<Option<HtkError>>, r: Result<f64>) -> f64 {
    match r {
        Ok(v) => v,
        Err(e) => {
            slot.borrow_mut().get_or_insert(e);
            0.0
        }
    }
}

/// Integral over the box |z| ≤ r_max, |σ| ≤ s_max, for kernels with Gaussian-type decay.
pub fn group_integral_box<F: Fn(f64, f64) -> Result<f64>>(
    m: usize,
    k: usize,
    f: F,
    r_max: f64,
    s_max: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let failure = RefCell::new(None);
    let inner_cfg = cfg.inner();
    let rb = dyadic_breaks(r_max, 6);
    let sb = dyadic_breaks(s_max, 6);
    let e = integrate_breaks(
        |r| {
            let inner = integrate_breaks(
                |rho| rho.powi(k as i32 - 1) * remember(&failure, f(r, rho)),
                &sb,
                &inner_cfg,
            );
            r.powi(m as i32 - 1) * inner.value
        },
        &rb,
        cfg,
    );
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    Ok(e.scale(sphere_area(m) * sphere_area(k)))
}

/// Integral over all of G in logarithmic variables, for kernels with power-law tails.
/// `r_center` is a typical |z|, `s_center(r)` a typical |σ| at that |z|; the rates are
/// the decay rates of r^m·(inner integral) and ρ^k·f in ln r and ln ρ.
#[allow(clippy::too_many_arguments)]
pub fn group_integral_log<F: Fn(f64, f64) -> Result<f64>, S: Fn(f64) -> f64>(
    m: usize,
    k: usize,
    f: F,
    r_center: f64,
    s_center: S,
    r_upper_rate: f64,
    s_upper_rate: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let failure = RefCell::new(None);
    let inner_cfg = cfg.inner();
    let e = integrate_line(
        |u| {
            let r = u.exp();
            let weight = (m as f64 * u).exp();
            // absolute tolerance of the inner integral as seen after the r^m weight
            let cfg_u = QuadratureConfig { abs_tol: inner_cfg.abs_tol / weight, ..inner_cfg };
            let inner = integrate_line(
                |v| {
                    let rho = v.exp();
                    (k as f64 * v).exp() * remember(&failure, f(r, rho))
                },
                s_center(r).ln(),
                1.0 / k as f64,
                1.0 / s_upper_rate,
                None,
                &cfg_u,
            );
            weight * inner.value
        },
        r_center.ln(),
        1.0 / m as f64,
        1.0 / r_upper_rate,
        None,
        cfg,
    );
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    Ok(e.scale(sphere_area(m) * sphere_area(k)))
}

/// Same integral as [`group_integral_log`] by trapezoidal sums in ln r and ln ρ, for
/// integrands analytic in a strip of half-width `strip` around the real axis in both
/// logarithmic variables. Much cheaper than the adaptive rule at moderate accuracy.
#[allow(clippy::too_many_arguments)]
pub fn group_integral_trapezoid<F: Fn(f64, f64) -> Result<f64>, S: Fn(f64) -> f64>(
    m: usize,
    k: usize,
    f: F,
    r_center: f64,
    s_center: S,
    r_upper_rate: f64,
    s_upper_rate: f64,
    strip: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let failure = RefCell::new(None);
    let worst = RefCell::new(0.0f64);
    let e = trapezoid_line(
        |u| {
            let weight = (m as f64 * u).exp();
            let inner = trapezoid_line(
                |v| (k as f64 * v).exp() * remember(&failure, f(u.exp(), v.exp())),
                s_center(u.exp()).ln(),
                1.0 / k as f64,
                1.0 / s_upper_rate,
                strip,
                cfg,
            );
            let mut w = worst.borrow_mut();
            *w = w.max(weight * inner.error);
            weight * inner.value
        },
        r_center.ln(),
        1.0 / m as f64,
        1.0 / r_upper_rate,
        strip,
        cfg,
    );
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    let mut e = e;
    e.error += worst.into_inner() * cfg.truncation_factor * (1.0 / m as f64 + 1.0 / r_upper_rate);
    Ok(e.scale(sphere_area(m) * sphere_area(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_masses() {
        let cfg = QuadratureConfig::default().with_rel_tol(1e-9);
        // ∫_{ℝ²×ℝ} e^{−|z|²−σ²} = π·√π
        let e = group_integral_box(2, 1, |r, s| Ok((-r * r - s * s).exp()), 8.0, 8.0, &cfg).unwrap();
        assert!((e.value - PI * PI.sqrt()).abs() < 1e-9, "{e:?}");
        // box and logarithmic routes agree on ℝ⁴×ℝ³
        let f = |r: f64, s: f64| Ok((-(r * r) - s).exp());
        let a = group_integral_box(4, 3, f, 9.0, 60.0, &cfg).unwrap().value;
        let b = group_integral_log(4, 3, f, 1.0, |_| 1.0, 4.0, 4.0, &cfg).unwrap().value;
        assert!((a - b).abs() < 1e-8 * a, "{a} {b}");
    }
}
