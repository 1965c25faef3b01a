use super::{f64_param, kernel_cfg, list_param, outcome, record, rel_err, rng, Outcome, Params};
use crate::error::Result;
use crate::group::HTypeGroup;
use crate::kernels::mass::group_integral_trapezoid;
use crate::kernels::poisson::{bessel_heat, kappa, poisson_elliptic_radial, EllipticMethod, PoissonConstant, PoissonVariant};
use crate::kernels::{composite_kernel_radial, fiber_convolve, heat_radial, modified_radial, thick_radial, FiberKernel, SignedOrder};
use crate::quadrature::{integrate_time_power, QuadratureConfig, TimeWindow};
use crate::specfun::gamma;
use rand::Rng;
use std::f64::consts::{FRAC_PI_4, PI};

/// Strip half-width for kernels with Gaussian factors in ln r and ln ρ.
const GAUSSIAN_STRIP: f64 = 0.35;

fn mass_cfg(cfg: &QuadratureConfig, rel_tol: f64) -> QuadratureConfig {
    QuadratureConfig { rel_tol, truncation_factor: 20.0, ..*cfg }
}

/// ∫_G of a kernel with Gaussian decay at scale √t in |z| and t in |σ|, centred at (r0, s0).
fn gaussian_mass<F: Fn(f64, f64) -> Result<f64>>(g: &HTypeGroup, f: F, r0: f64, s0: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(group_integral_trapezoid(g.m(), g.k(), f, r0, |_| s0, 5.0, 5.0, GAUSSIAN_STRIP, cfg)?.value)
}

pub fn mass_one(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let t = f64_param(params, "t", 1.0)?;
    let qc = mass_cfg(cfg, f64_param(params, "mass_rel_tol", 1e-9)?);
    let kc = kernel_cfg(cfg);
    let mf = g.m() as f64;
    let heat = gaussian_mass(g, |r, rho| Ok(heat_radial(mf, g.k(), r, rho, t).evaluate(&kc)?.value), t.sqrt(), t, &qc)?;
    let plus = gaussian_mass(g, |r, rho| Ok(modified_radial(mf, g.k(), s, r, rho, t).evaluate(&kc)?.value), t.sqrt(), t, &qc)?;
    let minus = gaussian_mass(g, |r, rho| Ok(modified_radial(mf, g.k(), -s, r, rho, t).evaluate(&kc)?.value), t.sqrt(), t, &qc)?;
    let worst = [heat, plus, minus].iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let notes = format!("∫p = {heat:.10}, ∫K_(s) = {plus:.10}, ∫K_(-s) = {minus:.10}");
    let mut p = params.clone();
    record(&mut p, "s", s);
    record(&mut p, "t", t);
    Ok(outcome(worst, 1e-6, notes, p))
}

pub fn semigroup(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut r = rng(params)?;
    let n = f64_param(params, "points", 20.0)? as usize;
    let kc = kernel_cfg(cfg);
    let (m, k) = (g.m(), g.k());
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (zn, sn) = (r.gen_range(0.1..2.5), r.gen_range(0.0..2.0));
        let (t, tau) = (r.gen_range(0.2..2.0), r.gen_range(0.2..2.0));
        let conv = fiber_convolve(m, k, &FiberKernel::heat(m, t), &FiberKernel::heat(m, tau), zn, sn, &kc)?.value;
        let direct = heat_radial(m as f64, k, zn, sn, t + tau).evaluate(&kc)?.value;
        worst = worst.max(rel_err(conv, direct));
    }
    Ok(outcome(worst, 1e-8, "fiber convolution p(t) ⋆ p(τ) against p(t+τ) at seeded points", params.clone()))
}

pub fn convolution_lemma(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let order = SignedOrder::new(s)?;
    let mut r = rng(params)?;
    let n = f64_param(params, "points", 10.0)? as usize;
    let kc = kernel_cfg(cfg);
    let (m, k) = (g.m(), g.k());
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (zn, sn) = (r.gen_range(0.1..2.5), r.gen_range(0.0..2.0));
        let (tau, t) = (r.gen_range(0.3..1.5), r.gen_range(0.3..1.5));
        let conv = fiber_convolve(m, k, &FiberKernel::modified(m, order.neg()?, tau), &FiberKernel::modified(m, order, t), zn, sn, &kc)?;
        let composite = composite_kernel_radial(m as f64, k, s, zn, sn, tau, t, &kc)?;
        worst = worst.max(rel_err(conv.value, composite.value));
    }
    let mut p = params.clone();
    record(&mut p, "s", s);
    Ok(outcome(worst, 1e-8, "K_(-s)(τ) ⋆ K_(s)(t) on the fiber against the composite kernel", p))
}

/// P_(σ),t u(g) for u = p(·, t0): the fiber convolution of K_(σ)(·, t) with p(·, t0).
fn smoothed(g: &HTypeGroup, order: SignedOrder, t: f64, t0: f64, zn: f64, sn: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let m = g.m();
    Ok(fiber_convolve(m, g.k(), &FiberKernel::modified(m, order, t), &FiberKernel::heat(m, t0), zn, sn, cfg)?.value)
}

pub fn approx_identity(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let t0 = f64_param(params, "t0", 1.0)?;
    let (zn, sn) = (f64_param(params, "z", 0.6)?, f64_param(params, "sigma", 0.3)?);
    let kc = kernel_cfg(cfg);
    let u = heat_radial(g.m() as f64, g.k(), zn, sn, t0).evaluate(&kc)?.value;
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for order in [SignedOrder::new(s)?, SignedOrder::new(-s)?] {
        let dev: Vec<f64> = (0..=6)
            .map(|j| Ok((smoothed(g, order, 0.5f64.powi(j), t0, zn, sn, &kc)? - u).abs()))
            .collect::<Result<_>>()?;
        let monotone = dev.windows(2).all(|w| w[1] < w[0]);
        let near = (smoothed(g, order, 1e-5, t0, zn, sn, &kc)? - u).abs() / u.abs();
        notes.push(format!("order {}: |P_t u - u| at t = 2^-j: {:?}; relative gap at t = 1e-5: {near:.2e}", order.value(), dev.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>()));
        worst = worst.max(if monotone { near } else { f64::INFINITY });
    }
    let mut p = params.clone();
    record(&mut p, "s", s);
    record(&mut p, "t0", t0);
    record(&mut p, "point", (zn, sn));
    notes.push("data u = p(·, t0)".into());
    Ok(outcome(worst, 1e-4, notes.join("; "), p))
}

pub fn decay_at_infinity(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let t0 = f64_param(params, "t0", 1.0)?;
    let (zn, sn) = (f64_param(params, "z", 0.6)?, f64_param(params, "sigma", 0.3)?);
    let kc = kernel_cfg(cfg);
    let mut worst = 0.0f64;
    for order in [SignedOrder::new(s)?, SignedOrder::new(-s)?] {
        let far = smoothed(g, order, 1e3, t0, zn, sn, &kc)?;
        let one = smoothed(g, order, 1.0, t0, zn, sn, &kc)?;
        worst = worst.max((far / one).abs());
    }
    let mut p = params.clone();
    record(&mut p, "s", s);
    Ok(outcome(worst, 1e-4, "|P_t u(g)| at t = 1e3 relative to t = 1, u = p(·, t0)", p))
}

pub fn restriction_relation(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut r = rng(params)?;
    let kc = kernel_cfg(cfg);
    let mf = g.m() as f64;
    let mut worst = 0.0f64;
    for s in list_param(params, "s", &[0.5, -0.5])? {
        for _ in 0..20 {
            let (zn, sn, t) = (r.gen_range(0.0..2.5), r.gen_range(0.0..2.0), r.gen_range(0.1..3.0));
            let q = thick_radial(mf, g.k(), s, zn, sn, t, 0.0).evaluate(&kc)?.value;
            let kk = modified_radial(mf, g.k(), s, zn, sn, t).evaluate(&kc)?.value;
            worst = worst.max(rel_err((4.0 * PI * t).powf(1.0 - s) * q, kk));
        }
    }
    Ok(outcome(worst, 1e-12, "(4πt)^(1-s) q_(s)(g,t,0) against K_(s)(g,t) at seeded (g,t)", params.clone()))
}

pub fn mass_conservation(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let t0 = f64_param(params, "t0", 1.0)?;
    let qc = mass_cfg(cfg, f64_param(params, "mass_rel_tol", 1e-10)?);
    let kc = kernel_cfg(cfg);
    let mf = g.m() as f64;
    // one grid, centred for t0, used at every time
    let mass = |t: f64| gaussian_mass(g, |r, rho| Ok(heat_radial(mf, g.k(), r, rho, t).evaluate(&kc)?.value), t0.sqrt(), t0, &qc);
    let base = mass(t0)?;
    let mut worst = 0.0f64;
    let mut notes = vec![format!("∫p(t0) = {base:.12}")];
    for dt in [0.5, 2.0] {
        let v = mass(t0 + dt)?;
        notes.push(format!("∫(p(t0+{dt}) - p(t0)) = {:.2e}", v - base));
        worst = worst.max((v - base).abs());
    }
    let mut p = params.clone();
    record(&mut p, "t0", t0);
    Ok(outcome(worst, 1e-8, notes.join("; "), p))
}

pub fn poisson_norm_parabolic(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let y = f64_param(params, "y", 1.0)?;
    let qc = mass_cfg(cfg, f64_param(params, "mass_rel_tol", 1e-9)?);
    let kc = kernel_cfg(cfg);
    let mf = g.m() as f64;
    // ∫_G p(g, t) dg does not depend on t (dilations), so one spatial mass serves every t
    let spatial = gaussian_mass(g, |r, rho| Ok(heat_radial(mf, g.k(), r, rho, 1.0).evaluate(&kc)?.value), 1.0, 1.0, &qc)?;
    let mut worst = 0.0f64;
    let mut notes = vec![format!("∫_G p(·,1) = {spatial:.10}")];
    for s in list_param(params, "s", &[0.3, 0.5])? {
        let time = integrate_time_power(1.0, |t| bessel_heat(s, y, t), TimeWindow::new(y * y, 1.0, s), cfg).value;
        let derived = kappa(s, PoissonConstant::Derived)? * y.powf(2.0 * s) * time * spatial;
        let alternative = kappa(s, PoissonConstant::Alternative)? * y.powf(2.0 * s) * time * spatial;
        worst = worst.max((derived - 1.0).abs());
        notes.push(format!(
            "s = {s}: mass with 4π^(1+s)/Γ(s) = {derived:.10}, with 4π^(1+s)/Γ(1-s) = {alternative:.10} (ratio Γ(s)/Γ(1-s) = {:.10}); Γ(s) normalization adopted",
            gamma(s)? / gamma(1.0 - s)?
        ));
    }
    let mut p = params.clone();
    record(&mut p, "y", y);
    Ok(outcome(worst, 1e-6, notes.join("; "), p))
}

fn elliptic_mass(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig, variant: PoissonVariant, method: EllipticMethod) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let y = f64_param(params, "y", 1.0)?;
    let qc = mass_cfg(cfg, f64_param(params, "mass_rel_tol", 1e-7)?);
    let kc = kernel_cfg(cfg).with_rel_tol(1e-9);
    let (m, k) = (g.m(), g.k());
    let f = |r: f64, rho: f64| Ok(poisson_elliptic_radial(m, k, s, r, rho, y, variant, method, PoissonConstant::Derived, &kc)?.value);
    // power-law tails: r^(-2s) after the σ-integration, ρ^(-(m/2+s)) at fixed r
    let e = group_integral_trapezoid(m, k, f, y, |r| 0.25 * (r * r + y * y), 2.0 * s, 0.5 * m as f64 + s, FRAC_PI_4, &qc)?;
    let mut p = params.clone();
    record(&mut p, "s", s);
    record(&mut p, "y", y);
    Ok(outcome((e.value - 1.0).abs(), 1e-6, format!("∫_G Q dg = {:.10} (estimated error {:.1e})", e.value, e.error), p))
}

pub fn poisson_norm_elliptic(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    elliptic_mass(g, params, cfg, PoissonVariant::Nonconformal, EllipticMethod::Subordinated)
}

pub fn poisson_norm_conformal(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    elliptic_mass(g, params, cfg, PoissonVariant::Conformal, EllipticMethod::ClosedForm)
}
