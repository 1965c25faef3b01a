//! The composite kernel 𝒦_{(−s,s)} and fiber-level convolution of centered kernels.

use super::fiber::{cutoff, fiber_transform_weighted, ln_xcsch, xcoth_m1, xcsch, FiberShape, PhaseConvention};
use super::SignedOrder;
use crate::error::{invalid, HtkError, Result};
use crate::group::{GroupPoint, HTypeGroup};
use crate::quadrature::{radial_fourier, Estimate, QuadratureConfig};
use std::f64::consts::PI;

const MIN_TIME: f64 = 1e-6;

/// 𝒦_{(−s,s)}(g, τ, t) from its λ-integral in the 2π-phase form.
pub fn composite_kernel(
    g: &HTypeGroup,
    s: SignedOrder,
    p: &GroupPoint,
    tau: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    g.check_point(p)?;
    composite_kernel_radial(g.m() as f64, g.k(), s.value(), p.z_norm(), p.sigma_norm(), tau, t, cfg)
}

#[allow(clippy::too_many_arguments)]
pub fn composite_kernel_radial(
    m: f64,
    k: usize,
    s: f64,
    zn: f64,
    sn: f64,
    tau: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(t > 0.0) || !(tau > 0.0) {
        return Err(invalid("t must be positive"));
    }
    if t < MIN_TIME || tau < MIN_TIME {
        return Err(HtkError::MethodDomain(format!(
            "composite kernel is not evaluated for times below {MIN_TIME:e}; use the limiting kernel"
        )));
    }
    let big_t = t + tau;
    let c = zn * zn / (4.0 * big_t);
    let neg_log = move |l: f64| {
        -(1.0 - s) * ln_xcsch(2.0 * PI * t * l) - (1.0 + s) * ln_xcsch(2.0 * PI * tau * l)
            - 0.5 * m * ln_xcsch(2.0 * PI * big_t * l)
            + c * xcoth_m1(2.0 * PI * big_t * l)
    };
    let l = cutoff(neg_log, k, cfg.truncation_factor + 5.0);
    let outer = (4.0 * PI * big_t).powf(-0.5 * m) * (-c).exp();
    if outer == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let e = radial_fourier(k, 2.0 * PI * sn, |l| (-neg_log(l)).exp(), l / cfg.truncation_factor, cfg)?;
    Ok(e.scale(outer))
}

/// ∂_τ 𝒦_{(−s,s)}(g, τ, t), differentiating the λ-integrand; also defined at τ = 0.
#[allow(clippy::too_many_arguments)]
pub fn composite_tau_derivative_radial(
    m: f64,
    k: usize,
    s: f64,
    zn: f64,
    sn: f64,
    tau: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(t > 0.0) || !(tau >= 0.0) {
        return Err(invalid("t must be positive"));
    }
    if t < MIN_TIME {
        return Err(HtkError::MethodDomain(format!(
            "composite kernel is not evaluated for times below {MIN_TIME:e}; use the limiting kernel"
        )));
    }
    let big_t = t + tau;
    let c = zn * zn / (4.0 * big_t);
    let neg_log = move |l: f64| {
        -(1.0 - s) * ln_xcsch(2.0 * PI * t * l) - (1.0 + s) * ln_xcsch(2.0 * PI * tau * l)
            - 0.5 * m * ln_xcsch(2.0 * PI * big_t * l)
            + c * xcoth_m1(2.0 * PI * big_t * l)
    };
    let l = cutoff(neg_log, k, cfg.truncation_factor + 5.0);
    let outer = (4.0 * PI * big_t).powf(-0.5 * m) * (-c).exp();
    if outer == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let dlog = move |l: f64| {
        let w = 2.0 * PI * l;
        let xt = w * tau;
        let xb = w * big_t;
        // 1/x − coth x
        let inv_m_coth = if xt < 1e-8 { -xt / 3.0 } else { -xcoth_m1(xt) / xt };
        // 2πλ coth(2πTλ) and λ·2πλ csch²(2πTλ), both finite at λ = 0
        let w_coth = (xcoth_m1(xb) + 1.0) / big_t;
        let w_csch2 = xcsch(xb).powi(2) / (2.0 * PI * big_t * big_t);
        (1.0 + s) * w * inv_m_coth - 0.5 * m * w_coth + 0.5 * PI * zn * zn * w_csch2
    };
    let e = radial_fourier(k, 2.0 * PI * sn, |l| (-neg_log(l)).exp() * dlog(l), l / cfg.truncation_factor, cfg)?;
    Ok(e.scale(outer))
}

/// A centered kernel 2^k (4πt)^{−(m/2+k)} ∫ e^{−(i/t)⟨σ,λ⟩}(|λ|/sinh|λ|)^a e^{−(|z|²/4t)|λ|coth|λ|} dλ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberKernel {
    pub a: f64,
    pub t: f64,
    pub convention: PhaseConvention,
}

impl FiberKernel {
    pub fn new(a: f64, t: f64) -> Self {
        FiberKernel { a, t, convention: PhaseConvention::Canonical }
    }

    /// 𝒦_{(s)}(·, t) on a group with first layer of dimension m.
    pub fn modified(m: usize, s: SignedOrder, t: f64) -> Self {
        FiberKernel::new(0.5 * m as f64 + 1.0 - s.value(), t)
    }

    pub fn heat(m: usize, t: f64) -> Self {
        FiberKernel::new(0.5 * m as f64, t)
    }
}

/// (f1 ⋆ f2)(g) = ∫_G f1((g')^{−1}∘g) f2(g') dg' at |z| = zn, |σ| = sn, computed on the
/// fiber: the z'-integral is Gaussian for every λ and the hyperbolic addition formulas
/// leave a single λ-integral at time t1 + t2.
#[allow(clippy::too_many_arguments)]
pub fn fiber_convolve(
    m: usize,
    k: usize,
    f1: &FiberKernel,
    f2: &FiberKernel,
    zn: f64,
    sn: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if f1.convention != f2.convention {
        return Err(invalid("fiber kernels use different λ-phase conventions"));
    }
    if !(f1.t > 0.0) || !(f2.t > 0.0) {
        return Err(invalid("t must be positive"));
    }
    let mh = 0.5 * m as f64;
    let (e1, e2) = (f1.a - mh, f2.a - mh);
    if e1 < 0.0 || e2 < 0.0 {
        return Err(invalid("fiber exponents must be at least m/2"));
    }
    let big_t = f1.t + f2.t;
    let (r1, r2) = (f1.t / big_t, f2.t / big_t);
    let c = zn * zn / (4.0 * big_t);
    let shape = FiberShape::new(mh, c);
    let weight = move |mu: f64| (e1 * ln_xcsch(r1 * mu) + e2 * ln_xcsch(r2 * mu)).exp();
    let outer = 2f64.powi(k as i32) * (4.0 * PI * big_t).powf(-(mh + k as f64)) * (-c).exp();
    if outer == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    Ok(fiber_transform_weighted(k, shape, sn / big_t, weight, cfg)?.scale(outer))
}
