//! Time integrals of kernels with the t-integral done in closed form:
//! ∫₀^∞ t^{β−1} 2^k(4πt)^{−P} ∫ e^{−(i/t)⟨σ,λ⟩}(|λ|/sinh|λ|)^a e^{−(y² + |z|²|λ|coth|λ|)/(4t)} dλ dt
//! = 2^k (4π)^{−P} Γ(α) ∫ (|λ|/sinh|λ|)^a (B(|λ|) + i⟨σ,λ⟩)^{−α} dλ,
//! with α = P − β and B(r) = (y² + |z|² r coth r)/4.

use super::fiber::{cutoff, ln_xcsch, xcoth_m1};
use crate::error::{HtkError, Result};
use crate::quadrature::{integrate_semi_infinite, tanh_sinh, Estimate, QuadratureConfig};
use crate::specfun::{gamma, sphere_area};
use std::f64::consts::PI;

/// Principal power (x + iy)^p.
fn cpow(x: f64, y: f64, p: f64) -> (f64, f64) {
    let r = x.hypot(y).powf(p);
    let th = p * y.atan2(x);
    (r * th.cos(), r * th.sin())
}

/// ∫_{S^{k−1}} Re (b + i c ω₁)^{−α} dω.
fn angular(k: usize, alpha: f64, b: f64, c: f64, cfg: &QuadratureConfig) -> f64 {
    match k {
        1 => 2.0 * cpow(b, c, -alpha).0,
        3 => {
            let u = c / b;
            if u < 1e-3 {
                let u2 = u * u;
                let a1 = alpha * (alpha + 1.0);
                let a2 = a1 * (alpha + 2.0) * (alpha + 3.0);
                2.0 * PI * b.powf(-alpha) * (2.0 - a1 * u2 / 3.0 + a2 * u2 * u2 / 60.0)
            } else {
                4.0 * PI * cpow(b, c, 1.0 - alpha).1 / (c * (1.0 - alpha))
            }
        }
        _ => {
            let e = 0.5 * (k as f64 - 3.0);
            let inner = tanh_sinh(
                |x, xa, xb| cpow(b, c * x, -alpha).0 * (xa * xb).powf(e),
                -1.0,
                1.0,
                cfg,
            );
            sphere_area(k - 1) * inner.value
        }
    }
}

/// See the module documentation; `plain_sq` = y², `coth_sq` = |z|².
#[allow(clippy::too_many_arguments)]
pub fn subordinated_time_integral(
    k: usize,
    a: f64,
    power: f64,
    beta: f64,
    plain_sq: f64,
    coth_sq: f64,
    sigma_norm: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let alpha = power - beta;
    if !(alpha > 0.0) {
        return Err(HtkError::InvalidArgument(format!("time integral diverges (α = {alpha})")));
    }
    let b0 = 0.25 * (plain_sq + coth_sq);
    if !(b0 > 0.0) {
        return Err(HtkError::MethodDomain(
            "subordinated form needs |z|² + y² > 0".into(),
        ));
    }
    if k == 3 && (alpha - 1.0).abs() < 1e-12 {
        return Err(HtkError::MethodDomain("subordinated form with k = 3 needs α ≠ 1".into()));
    }
    let b = move |r: f64| 0.25 * (plain_sq + coth_sq * (1.0 + xcoth_m1(r)));
    let neg_log = move |r: f64| -a * ln_xcsch(r) + alpha * (b(r) / b0).ln();
    let l = cutoff(neg_log, k, cfg.truncation_factor + 5.0);
    let inner = cfg.inner();
    let e = integrate_semi_infinite(
        |r| {
            let w = (a * ln_xcsch(r)).exp();
            r.powi(k as i32 - 1) * w * angular(k, alpha, b(r), sigma_norm * r, &inner)
        },
        l / cfg.truncation_factor,
        cfg,
    );
    let pref = 2f64.powi(k as i32) * (4.0 * PI).powf(-power) * gamma(alpha)?;
    Ok(e.scale(pref))
}

#[cfg(test)]
mod tests {
    use super::super::time::kernel_time_integral;
    use super::super::{heat_radial, thick_radial};
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-12)
    }

    #[test]
    fn angular_branches_agree_with_quadrature() {
        let c = cfg();
        for &(b, cc, alpha) in &[(0.7, 0.3, 2.5), (1.2, 1e-4, 3.2), (0.4, 2.0, 4.75)] {
            let e = 0.0;
            let inner = tanh_sinh(|x, xa, xb| cpow(b, cc * x, -alpha).0 * (xa * xb).powf(e), -1.0, 1.0, &c);
            let generic = 2.0 * PI * inner.value;
            let closed = angular(3, alpha, b, cc, &c);
            assert!((generic - closed).abs() < 1e-11 * closed.abs(), "{generic} {closed}");
        }
    }

    #[test]
    fn matches_time_quadrature() {
        let c = cfg();
        // E^{(s)} with s = 0.5 on heisenberg(1) and the quaternionic group
        for &(m, k, zn, sn) in &[(2.0f64, 1usize, 1.0f64, 0.25f64), (4.0, 3, 0.9, 0.4), (2.0, 2, 0.8, 0.3)] {
            let s = 0.5;
            let power = 0.5 * m + k as f64;
            let n2 = (zn.powi(4) + 16.0 * sn * sn as f64).sqrt();
            let direct =
                kernel_time_integral(s, |t| Ok(heat_radial(m, k, zn, sn, t).evaluate(&c.inner())?.value), power, n2, &c)
                    .unwrap()
                    .value;
            let sub = subordinated_time_integral(k, 0.5 * m, power, s, 0.0, zn * zn, sn, &c).unwrap().value;
            assert!((direct - sub).abs() < 1e-8 * sub.abs(), "k={k}: {direct} {sub}");
        }
        // thick kernel with y > 0 and negative order
        let (m, k, s, zn, sn, y) = (2.0, 1usize, -0.3, 0.6, 0.2, 0.5);
        let power = 0.5 * m + k as f64 + 1.0 - s;
        let n2 = ((zn * zn + y * y as f64).powi(2) + 16.0 * sn * sn).sqrt();
        let direct =
            kernel_time_integral(1.0, |t| Ok(thick_radial(m, k, s, zn, sn, t, y).evaluate(&c.inner())?.value), power, n2, &c)
                .unwrap()
                .value;
        let sub = subordinated_time_integral(k, 0.5 * m + 1.0 - s, power, 1.0, 0.0, zn * zn + y * y, sn, &c)
            .unwrap()
            .value;
        assert!((direct - sub).abs() < 1e-8 * sub.abs(), "{direct} {sub}");
    }
}
