use super::{f64_param, list_param, outcome, record, rel_err, rng, Outcome, Params};
use crate::error::Result;
use crate::fracops::{beta_integral, change_of_variables_pair, monster_antiderivative, monster_integral, monster_integrand};
use crate::group::HTypeGroup;
use crate::quadrature::{integrate_semi_infinite, tanh_sinh, QuadratureConfig};
use crate::specfun::{bateman_closed_form, bessel_j, gamma, gegenbauer_closed_form, hyp2f1, hyp2f1_pfaff};
use rand::Rng;
use std::f64::consts::PI;

const GEGENBAUER_SETS: [[f64; 4]; 3] = [[0.5, 1.5, 1.0, 1.0], [1.0, 2.0, 2.0, 0.5], [2.5, 1.2, 1.0, 2.0]];
const BATEMAN_SETS: [[f64; 5]; 3] = [[0.7, 2.1, 0.5, 1.3, -0.8], [1.5, 3.0, 1.2, 0.4, -2.5], [0.3, 1.1, 2.0, 0.75, -0.3]];

pub fn gegenbauer(_: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for &[nu, mu, alpha, beta] in &GEGENBAUER_SETS {
        let mut failure = None;
        let q = integrate_semi_infinite(
            |t| {
                let j = bessel_j(nu, beta * t).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    0.0
                });
                t.powf(mu - 1.0) * (-alpha * t).exp() * j
            },
            1.0 / alpha,
            cfg,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        worst = worst.max(rel_err(q.value, gegenbauer_closed_form(nu, mu, alpha, beta)?));
    }
    let mut p = params.clone();
    record(&mut p, "sets", GEGENBAUER_SETS);
    Ok(outcome(worst, 1e-8, "quadrature of ∫t^(μ-1)e^(-αt)J_ν(βt)dt against the 2F1 closed form", p))
}

pub fn bateman(_: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for &[c, g, alpha, beta, a] in &BATEMAN_SETS {
        let mut failure = None;
        let q = tanh_sinh(
            |y, ya, yb| {
                let f = hyp2f1(alpha, beta, c, a * y).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    0.0
                });
                ya.powf(c - 1.0) * yb.powf(g - c - 1.0) * f
            },
            0.0,
            1.0,
            cfg,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        worst = worst.max(rel_err(q.value, bateman_closed_form(c, g, alpha, beta, a)?));
    }
    let mut p = params.clone();
    record(&mut p, "sets", BATEMAN_SETS);
    Ok(outcome(worst, 1e-8, "quadrature of ∫y^(c-1)(1-y)^(γ-c-1)F(α,β;c;ay)dy against Γ(c)Γ(γ-c)/Γ(γ)·F(α,β;γ;a)", p))
}

pub fn duplication(_: &HTypeGroup, params: &Params, _: &QuadratureConfig) -> Result<Outcome> {
    let mut r = rng(params)?;
    let n = f64_param(params, "samples", 50.0)? as usize;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let x: f64 = r.gen_range(0.1..20.0);
        let lhs = 2f64.powf(2.0 * x - 1.0) * gamma(x)? * gamma(x + 0.5)?;
        worst = worst.max(rel_err(lhs, PI.sqrt() * gamma(2.0 * x)?));
    }
    Ok(outcome(worst, 1e-12, "2^(2x-1)Γ(x)Γ(x+1/2) = √π Γ(2x) for x in (0.1, 20)", params.clone()))
}

pub fn hyp1f0(_: &HTypeGroup, params: &Params, _: &QuadratureConfig) -> Result<Outcome> {
    let v = hyp2f1(2.3, 1.1, 1.1, -0.5)?;
    let err = rel_err(v, 1.5f64.powf(-2.3));
    let mut worst = err;
    for &(a, b, x) in &[(0.7, 2.5, -3.0), (1.9, 0.4, 0.6), (3.1, 1.7, -40.0)] {
        worst = worst.max(rel_err(hyp2f1(a, b, b, x)?, (1.0 - x).powf(-a)));
    }
    Ok(outcome(worst, 1e-8, format!("F(2.3,1.1;1.1;-0.5) vs 1.5^-2.3: {err:.2e}"), params.clone()))
}

pub fn pfaff(_: &HTypeGroup, params: &Params, _: &QuadratureConfig) -> Result<Outcome> {
    let (a, b, c, u) = (0.8, 1.4, 2.2, -3.0);
    let lhs = hyp2f1(a, b, c, u)?;
    let rhs = (1.0 - u).powf(-a) * hyp2f1(a, c - b, c, u / (u - 1.0))?;
    let mut worst = rel_err(lhs, rhs);
    // the series and the transformed evaluation on their overlap
    for x in [-0.9, -0.5, -0.1] {
        worst = worst.max(rel_err(hyp2f1_pfaff(a, b, c, x)?, crate::specfun::hyp2f1_series(a, b, c, x).unwrap_or(f64::NAN)));
    }
    Ok(outcome(worst, 1e-11, "F(α,β;γ;u) = (1-u)^-α F(α,γ-β;γ;u/(u-1)) at (0.8,1.4,2.2,-3)", params.clone()))
}

pub fn monster(_: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s_values = list_param(params, "s", &[-0.75, -0.25, 0.3, 0.6, 0.9])?;
    let mu_values = list_param(params, "mu", &[0.1, 1.0, 10.0])?;
    let mut worst = 0.0f64;
    for &s in &s_values {
        for &mu in &mu_values {
            worst = worst.max(monster_integral(s, mu, cfg)?.value.abs());
        }
    }
    // h' against the integrand by central differences at seeded ρ
    let mut r = rng(params)?;
    let mut fd = 0.0f64;
    for _ in 0..20 {
        let s = s_values[r.gen_range(0..s_values.len())];
        let mu = mu_values[r.gen_range(0..mu_values.len())];
        let rho = 10f64.powf(r.gen_range(-1.5..1.5));
        let h = 1e-3 * rho;
        let d = |h: f64| (monster_antiderivative(s, mu, rho + h) - monster_antiderivative(s, mu, rho - h)) / (2.0 * h);
        let deriv = (4.0 * d(0.5 * h) - d(h)) / 3.0;
        let f = monster_integrand(s, mu, rho);
        fd = fd.max((deriv - f).abs() / f.abs().max(1e-3));
    }
    let notes = format!("max |A(s,μ)| = {worst:.2e}; antiderivative derivative mismatch {fd:.2e} (tolerance 1e-8, folded in scaled by 1e-2)");
    Ok(outcome(worst.max(1e-2 * fd), 1e-10, notes, params.clone()))
}

pub fn beta_identity(_: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for s in list_param(params, "s", &[0.2, 0.5, 0.8])? {
        worst = worst.max(rel_err(beta_integral(s, cfg)?.value, gamma(s)? * gamma(1.0 - s)?));
    }
    Ok(outcome(worst, 1e-10, "", params.clone()))
}

pub fn change_of_variables(_: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let f = |t: f64, tau: f64| (-t - 2.0 * tau).exp() * (1.0 + t * tau).recip() * (1.0 + t);
    let (direct, changed) = change_of_variables_pair(f, cfg);
    let err = rel_err(changed.value, direct.value);
    Ok(outcome(err, 1e-10, format!("direct {:.12}, after substitution {:.12}", direct.value, changed.value), params.clone()))
}
