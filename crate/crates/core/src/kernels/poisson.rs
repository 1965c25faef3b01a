//! Poisson kernels of the parabolic and elliptic extension problems.

use super::subordinate::subordinated_time_integral;
use super::time::kernel_time_integral;
use super::{heat_radial, thick_radial};
use crate::error::{invalid, HtkError, Result};
use crate::fundsol::conformal_constant_value;
use crate::group::{GroupPoint, HTypeGroup};
use crate::quadrature::{Estimate, QuadratureConfig};
use crate::specfun::gamma;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoissonVariant {
    Nonconformal,
    Conformal,
}

/// Normalization of the Poisson kernels: `Derived` is 4π^{1+s}/Γ(s), which gives unit
/// mass; `Alternative` is 4π^{1+s}/Γ(1−s).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoissonConstant {
    #[default]
    Derived,
    Alternative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticMethod {
    /// quadrature in t of the parabolic kernel
    TimeQuadrature,
    /// the t-integral done in closed form, leaving one fiber integral
    Subordinated,
    /// conformal variant only
    ClosedForm,
}

pub fn kappa(s: f64, constant: PoissonConstant) -> Result<f64> {
    let num = 4.0 * PI.powf(1.0 + s);
    Ok(match constant {
        PoissonConstant::Derived => num / gamma(s)?,
        PoissonConstant::Alternative => num / gamma(1.0 - s)?,
    })
}

fn check_order(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("order s = {s} outside (0, 1)")));
    }
    Ok(())
}

/// g^{(−s)}(y, t) = (4πt)^{−(1+s)} e^{−y²/4t}.
pub fn bessel_heat(s: f64, y: f64, t: f64) -> f64 {
    (4.0 * PI * t).powf(-(1.0 + s)) * (-y * y / (4.0 * t)).exp()
}

#[allow(clippy::too_many_arguments)]
pub fn poisson_parabolic_radial(
    m: f64,
    k: usize,
    s: f64,
    zn: f64,
    sn: f64,
    t: f64,
    y: f64,
    variant: PoissonVariant,
    constant: PoissonConstant,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    check_order(s)?;
    if !(t > 0.0) {
        return Err(invalid("t must be positive"));
    }
    if !(y > 0.0) {
        return Err(invalid("y must be positive"));
    }
    let pre = kappa(s, constant)? * y.powf(2.0 * s);
    let e = match variant {
        PoissonVariant::Nonconformal => {
            heat_radial(m, k, zn, sn, t).evaluate(cfg)?.scale(bessel_heat(s, y, t))
        }
        PoissonVariant::Conformal => thick_radial(m, k, -s, zn, sn, t, y).evaluate(cfg)?,
    };
    Ok(e.scale(pre))
}

/// 𝒫^{(s)}(g, t, y) (nonconformal) or 𝒫_{(s)}(g, t, y) (conformal), normalized by κ(s) = 4π^{1+s}/Γ(s).
#[allow(clippy::too_many_arguments)]
pub fn poisson_kernel_parabolic(
    g: &HTypeGroup,
    s: f64,
    p: &GroupPoint,
    t: f64,
    y: f64,
    variant: PoissonVariant,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    g.check_point(p)?;
    poisson_parabolic_radial(
        g.m() as f64,
        g.k(),
        s,
        p.z_norm(),
        p.sigma_norm(),
        t,
        y,
        variant,
        PoissonConstant::Derived,
        cfg,
    )
}

/// Closed form of 𝒬_{(s)}.
pub fn conformal_elliptic_closed(m: usize, k: usize, s: f64, zn: f64, sn: f64, y: f64) -> Result<f64> {
    let q = (m + 2 * k) as f64;
    let c = 2f64.powf(-2.0 * s) * gamma(-s)?.abs() * conformal_constant_value(m, k, -s)? / gamma(s)?;
    let r2 = zn * zn + y * y;
    Ok(c * y.powf(2.0 * s) * (r2 * r2 + 16.0 * sn * sn).powf(-(q + 2.0 * s) / 4.0))
}

#[allow(clippy::too_many_arguments)]
pub fn poisson_elliptic_radial(
    m: usize,
    k: usize,
    s: f64,
    zn: f64,
    sn: f64,
    y: f64,
    variant: PoissonVariant,
    method: EllipticMethod,
    constant: PoissonConstant,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    check_order(s)?;
    if !(y > 0.0) {
        return Err(invalid("y must be positive"));
    }
    let mf = m as f64;
    let kf = k as f64;
    let pre = kappa(s, constant)? * y.powf(2.0 * s);
    let inner = cfg.inner();
    let e = match (variant, method) {
        (PoissonVariant::Nonconformal, EllipticMethod::TimeQuadrature) => {
            let gauge_sq = (zn.powi(4) + 16.0 * sn * sn).sqrt() + y * y;
            kernel_time_integral(
                -s,
                |t| Ok(heat_radial(mf, k, zn, sn, t).evaluate(&inner)?.value * (-y * y / (4.0 * t)).exp()),
                0.5 * mf + kf,
                gauge_sq,
                cfg,
            )?
            .scale((4.0 * PI).powf(-(1.0 + s)))
        }
        (PoissonVariant::Nonconformal, EllipticMethod::Subordinated) => {
            subordinated_time_integral(k, 0.5 * mf, 0.5 * mf + kf + 1.0 + s, 1.0, y * y, zn * zn, sn, cfg)?
        }
        (PoissonVariant::Conformal, EllipticMethod::TimeQuadrature) => {
            let r2 = zn * zn + y * y;
            let gauge_sq = (r2 * r2 + 16.0 * sn * sn).sqrt();
            kernel_time_integral(
                1.0,
                |t| Ok(thick_radial(mf, k, -s, zn, sn, t, y).evaluate(&inner)?.value),
                0.5 * mf + kf + 1.0 + s,
                gauge_sq,
                cfg,
            )?
        }
        (PoissonVariant::Conformal, EllipticMethod::Subordinated) => subordinated_time_integral(
            k,
            0.5 * mf + 1.0 + s,
            0.5 * mf + kf + 1.0 + s,
            1.0,
            0.0,
            zn * zn + y * y,
            sn,
            cfg,
        )?,
        (PoissonVariant::Conformal, EllipticMethod::ClosedForm) => {
            let v = conformal_elliptic_closed(m, k, s, zn, sn, y)?;
            let scale = match constant {
                PoissonConstant::Derived => 1.0,
                PoissonConstant::Alternative => gamma(s)? / gamma(1.0 - s)?,
            };
            return Ok(Estimate::exact(v * scale));
        }
        (PoissonVariant::Nonconformal, EllipticMethod::ClosedForm) => {
            return Err(HtkError::MethodDomain("no closed form for the nonconformal elliptic kernel".into()))
        }
    };
    Ok(e.scale(pre))
}

/// 𝒬^{(s)}(g, y) by time quadrature (nonconformal) or 𝒬_{(s)}(g, y) in closed form (conformal).
pub fn poisson_kernel_elliptic(
    g: &HTypeGroup,
    s: f64,
    p: &GroupPoint,
    y: f64,
    variant: PoissonVariant,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let method = match variant {
        PoissonVariant::Nonconformal => EllipticMethod::TimeQuadrature,
        PoissonVariant::Conformal => EllipticMethod::ClosedForm,
    };
    poisson_kernel_elliptic_with(g, s, p, y, variant, method, cfg)
}

pub fn poisson_kernel_elliptic_with(
    g: &HTypeGroup,
    s: f64,
    p: &GroupPoint,
    y: f64,
    variant: PoissonVariant,
    method: EllipticMethod,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    g.check_point(p)?;
    poisson_elliptic_radial(
        g.m(),
        g.k(),
        s,
        p.z_norm(),
        p.sigma_norm(),
        y,
        variant,
        method,
        PoissonConstant::Derived,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-11)
    }

    #[test]
    fn elliptic_methods_agree() {
        for &(m, k) in &[(2usize, 1usize), (4, 3)] {
            for &(zn, sn, y) in &[(0.7, 0.2, 0.5), (1.3, 0.9, 1.1)] {
                let s = 0.4;
                let run = |v, me| {
                    poisson_elliptic_radial(m, k, s, zn, sn, y, v, me, PoissonConstant::Derived, &cfg()).unwrap().value
                };
                let a = run(PoissonVariant::Nonconformal, EllipticMethod::TimeQuadrature);
                let b = run(PoissonVariant::Nonconformal, EllipticMethod::Subordinated);
                assert!((a - b).abs() < 1e-8 * b, "{a} {b}");
                let c = run(PoissonVariant::Conformal, EllipticMethod::ClosedForm);
                let d = run(PoissonVariant::Conformal, EllipticMethod::TimeQuadrature);
                let e = run(PoissonVariant::Conformal, EllipticMethod::Subordinated);
                assert!((c - d).abs() < 1e-8 * c, "{c} {d}");
                assert!((c - e).abs() < 1e-8 * c, "{c} {e}");
            }
        }
    }

    #[test]
    fn parabolic_kernels_are_positive() {
        let g = HTypeGroup::heisenberg(1);
        for v in [PoissonVariant::Nonconformal, PoissonVariant::Conformal] {
            let x = poisson_kernel_parabolic(&g, 0.5, &g.point(0.4, -0.3), 0.7, 0.9, v, &cfg()).unwrap().value;
            assert!(x > 0.0);
        }
    }
}
