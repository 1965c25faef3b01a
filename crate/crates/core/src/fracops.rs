//! Fractional operators applied to heat-kernel data: Balakrishnan's formula, the conformal
//! fractional operator through the composite kernel, the cancellation integral A(s, μ) and
//! the Dirichlet-to-Neumann limit of the nonconformal extension.

use crate::error::{invalid, HtkError, Result};
use crate::group::{GroupPoint, HTypeGroup};
use crate::kernels::composite::composite_tau_derivative_radial;
use crate::kernels::fiber::{xcoth_m1, xcsch};
use crate::kernels::poisson::{kappa, PoissonConstant};
use crate::kernels::{composite_kernel_radial, heat_radial, modified_radial};
use crate::quadrature::{integrate_line, integrate_time_power, tanh_sinh, Estimate, QuadratureConfig, TimeWindow};
use crate::specfun::gamma;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Initial datum u = p(·, t0) (or 𝒦_{(s)}(·, t0) for the conformal operator).
#[derive(Debug, Clone, PartialEq)]
pub struct HeatData {
    pub group: HTypeGroup,
    pub t0: f64,
}

impl HeatData {
    pub fn new(group: HTypeGroup, t0: f64) -> Result<Self> {
        if !(t0 > 0.0) {
            return Err(invalid("t0 must be positive"));
        }
        Ok(HeatData { group, t0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalakrishnanMethod {
    /// −s/Γ(1−s) ∫ t^{−1−s}(P_t u − u) dt
    Bala,
    /// −1/Γ(1−s) ∫ τ^{−s} ∂_τ P_τ u dτ
    DerivativeForm,
}

fn check_order(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("order s = {s} outside (0, 1)")));
    }
    Ok(())
}

/// ∫₀^∞ τ^{−1−s}(K(τ) − K(0)) dτ for K smooth at 0 with K(τ) → 0 as τ → ∞.
/// On (0, δ) the difference quotient is replaced by the exact rewrite
/// ∫₀^δ K'(τ)(τ^{−s} − δ^{−s})/s dτ; the constant K(0) is integrated in closed form on (δ, ∞).
fn fractional_difference<K, D>(s: f64, k0: f64, mut kernel: K, mut deriv: D, delta: f64, upper_rate: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    K: FnMut(f64) -> Result<f64>,
    D: FnMut(f64) -> Result<f64>,
{
    let mut failure = None;
    let ds = delta.powf(-s);
    let near = tanh_sinh(
        |tau, ta, _| match deriv(tau) {
            Ok(v) => v * (ta.powf(-s) - ds) / s,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        delta,
        cfg,
    );
    let far = integrate_line(
        |u| {
            let tau = u.exp();
            match kernel(tau) {
                Ok(v) => (-s * u).exp() * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        (1e3 * delta).ln(),
        1.0,
        1.0 / upper_rate,
        Some(delta.ln()),
        cfg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(near.add(far).add(Estimate::exact(-k0 * ds / s)))
}

/// (ℒ^s u)(g) for u = p(·, t0).
pub fn balakrishnan_nonconformal(
    data: &HeatData,
    s: f64,
    p: &GroupPoint,
    method: BalakrishnanMethod,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    check_order(s)?;
    data.group.check_point(p)?;
    let (m, k) = (data.group.m() as f64, data.group.k());
    let (zn, sn, t0) = (p.z_norm(), p.sigma_norm(), data.t0);
    let inner = cfg.inner();
    let heat = |t: f64| heat_radial(m, k, zn, sn, t);
    let q_half = 0.5 * m + k as f64;
    match method {
        BalakrishnanMethod::Bala => {
            let u0 = heat(t0).evaluate(&inner)?.value;
            let e = fractional_difference(
                s,
                u0,
                |t| Ok(heat(t + t0).evaluate(&inner)?.value),
                |t| Ok(heat(t + t0).time_derivative(&inner)?.value),
                1e-3 * t0,
                q_half + s,
                cfg,
            )?;
            Ok(e.scale(-s / gamma(1.0 - s)?))
        }
        BalakrishnanMethod::DerivativeForm => {
            let mut failure = None;
            let e = integrate_time_power(
                1.0 - s,
                |tau| match heat(tau + t0).time_derivative(&inner) {
                    Ok(v) => v.value,
                    Err(err) => {
                        failure.get_or_insert(err);
                        0.0
                    }
                },
                TimeWindow::new(t0, 1.0 - s, q_half + s),
                cfg,
            );
            if let Some(err) = failure {
                return Err(err);
            }
            Ok(e.scale(-1.0 / gamma(1.0 - s)?))
        }
    }
}

/// −𝓛u(g) = −∂_t p(g, t0), the s → 1 limit of ℒ^s u.
pub fn heat_generator_value(data: &HeatData, p: &GroupPoint, cfg: &QuadratureConfig) -> Result<f64> {
    data.group.check_point(p)?;
    let kr = heat_radial(data.group.m() as f64, data.group.k(), p.z_norm(), p.sigma_norm(), data.t0);
    Ok(-kr.time_derivative(cfg)?.value)
}

/// (ℒ_s u)(g) for u = 𝒦_{(s)}(·, t0), using P_{(−s),τ}u = 𝒦_{(−s,s)}(·, τ, t0).
pub fn conformal_fractional_apply(data: &HeatData, s: f64, p: &GroupPoint, cfg: &QuadratureConfig) -> Result<Estimate> {
    check_order(s)?;
    data.group.check_point(p)?;
    let (m, k) = (data.group.m() as f64, data.group.k());
    let (zn, sn, t0) = (p.z_norm(), p.sigma_norm(), data.t0);
    let inner = cfg.inner();
    let u0 = modified_radial(m, k, s, zn, sn, t0).evaluate(&inner)?.value;
    let e = fractional_difference(
        s,
        u0,
        |tau| Ok(composite_kernel_radial(m, k, s, zn, sn, tau, t0, &inner)?.value),
        |tau| Ok(composite_tau_derivative_radial(m, k, s, zn, sn, tau, t0, &inner)?.value),
        1e-3 * t0,
        0.5 * m + k as f64 + s,
        cfg,
    )?;
    Ok(e.scale(-s / gamma(1.0 - s)?))
}

/// ρ·(integrand of A(s, μ)) at ρ = e^u, written in u to stay finite for |u| in the hundreds.
fn monster_log_integrand(s: f64, mu: f64, u: f64) -> f64 {
    // ρ/(1+ρ) and 1/(1+ρ) as logistic functions of u
    let w1 = 1.0 / (1.0 + (-u).exp());
    let w2 = 1.0 / (1.0 + u.exp());
    let (x1, x2) = (mu * w1, mu * w2);
    let bracket = (1.0 + s) * w1 * xcoth_m1(x2) - (1.0 - s) * w2 * xcoth_m1(x1);
    (s * u).exp() * bracket * xcsch(x1).powf(1.0 - s) * xcsch(x2).powf(1.0 + s)
}

/// Integrand of A(s, μ) at ρ.
pub fn monster_integrand(s: f64, mu: f64, rho: f64) -> f64 {
    monster_log_integrand(s, mu, rho.ln()) / rho
}

/// h_{s,μ}(ρ), whose derivative is the integrand of A(s, μ).
pub fn monster_antiderivative(s: f64, mu: f64, rho: f64) -> f64 {
    let x1 = rho * mu / (1.0 + rho);
    let x2 = mu / (1.0 + rho);
    // sinh x1 / sinh x2 = e^{x1−x2} (1 − e^{−2x1})/(1 − e^{−2x2})
    let ratio = (x1 - x2).exp() * (-2.0 * x1).exp_m1() / (-2.0 * x2).exp_m1();
    let ws = xcsch(mu);
    let wc = xcoth_m1(mu) + 1.0;
    let inner = rho / (1.0 + rho).powi(2) * (ws * ratio + 2.0 * wc + ws / ratio) - 1.0;
    ws * ratio.powf(s) * inner
}

/// A(s, μ) by quadrature in ln ρ.
pub fn monster_integral(s: f64, mu: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(s > -1.0 && s < 1.0) || s == 0.0 {
        return Err(invalid(format!("s = {s} outside (−1, 1) \\ {{0}}")));
    }
    if !(mu > 0.0) {
        return Err(invalid("μ must be positive"));
    }
    Ok(integrate_line(|u| monster_log_integrand(s, mu, u), 0.0, 1.0 / (1.0 + s), 1.0 / (1.0 - s), None, cfg))
}

/// ∫₀^∞ ρ^{s−1}/(1+ρ) dρ by quadrature.
pub fn beta_integral(s: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    check_order(s)?;
    Ok(integrate_line(|u| (s * u).exp() / (1.0 + u.exp()), 0.0, 1.0 / s, 1.0 / (1.0 - s), None, cfg))
}

/// ∫₀^∞∫₀^∞ F(t, τ) dt dτ computed directly and after (v, ρ) = (t+τ, t/τ).
pub fn change_of_variables_pair<F: Fn(f64, f64) -> f64>(f: F, cfg: &QuadratureConfig) -> (Estimate, Estimate) {
    let inner = cfg.inner();
    let direct = integrate_line(
        |a| {
            let t = a.exp();
            let e = integrate_line(|b| {
                let tau = b.exp();
                t * tau * f(t, tau)
            }, 0.0, 1.0, 0.25, None, &inner);
            e.value
        },
        0.0,
        1.0,
        0.25,
        None,
        cfg,
    );
    let changed = integrate_line(
        |a| {
            let v = a.exp();
            let e = integrate_line(|b| {
                let rho = b.exp();
                let jac = v / (1.0 + rho).powi(2);
                v * rho * jac * f(v * rho / (1.0 + rho), v / (1.0 + rho))
            }, 0.0, 1.0, 1.0, None, &inner);
            e.value
        },
        0.0,
        1.0,
        0.25,
        None,
        cfg,
    );
    (direct, changed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnResult {
    /// −(2^{2s−1}Γ(s)/Γ(1−s)) lim y^{1−2s}∂_yF
    pub limit: f64,
    /// the same limit with the alternative prefactor −2^{2s−1}Γ(1−s)/Γ(1+s)
    pub limit_alternative_constant: f64,
    /// lim y^{1−2s}∂_yF itself
    pub raw_limit: f64,
    pub y: Vec<f64>,
    /// y^{1−2s}∂_yF along the sequence
    pub values: Vec<f64>,
    pub extrapolation_error: f64,
}

fn dn_parts(data: &HeatData, s: f64, p: &GroupPoint, y: f64, cfg: &QuadratureConfig) -> Result<(f64, f64, f64)> {
    let (m, k) = (data.group.m() as f64, data.group.k());
    let (zn, sn, t0) = (p.z_norm(), p.sigma_norm(), data.t0);
    let inner = cfg.inner();
    let heat = |t: f64| heat_radial(m, k, zn, sn, t);
    let u0 = heat(t0).evaluate(&inner)?.value;
    let mut failure = None;
    let mut diff = |t: f64| match heat(t + t0).evaluate(&inner) {
        Ok(v) => v.value - u0,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let y2 = y * y;
    let j = integrate_time_power(-s, |t| (-y2 / (4.0 * t)).exp() * diff(t), TimeWindow::new(y2, 1.0, s), cfg);
    let jd = integrate_time_power(-1.0 - s, |t| (-y2 / (4.0 * t)).exp() * diff(t), TimeWindow::new(y2, 1.0, 1.0 + s), cfg);
    if let Some(e) = failure {
        return Err(e);
    }
    let kp = kappa(s, PoissonConstant::Derived)? * (4.0 * PI).powf(-(1.0 + s));
    Ok((u0, kp * j.value, kp * jd.value))
}

/// F^{(s)}(g, y) = κ(s) y^{2s} ∫₀^∞ g^{(−s)}(y, t) p(g, t + t0) dt.
pub fn dn_extension_value(data: &HeatData, s: f64, p: &GroupPoint, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_order(s)?;
    data.group.check_point(p)?;
    let (u0, j, _) = dn_parts(data, s, p, y, cfg)?;
    // κ y^{2s} ∫ g^{(−s)} dt = 1, so F = u0 + κ y^{2s} ∫ g^{(−s)}(p(t+t0) − u0) dt
    Ok(u0 + y.powf(2.0 * s) * j)
}

/// y^{1−2s} ∂_y F^{(s)}(g, y), differentiating under the t-integral.
pub fn dn_weighted_derivative(data: &HeatData, s: f64, p: &GroupPoint, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_order(s)?;
    data.group.check_point(p)?;
    let (_, j, jd) = dn_parts(data, s, p, y, cfg)?;
    Ok(2.0 * s * j - 0.5 * y * y * jd)
}

/// y_j = y0·2^{−j}, j = 0..n.
pub fn geometric_sequence(y0: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| y0 * 0.5f64.powi(j as i32)).collect()
}

/// Richardson extrapolation to y → 0 for a halving sequence with error exponents `orders`.
pub fn richardson(values: &[f64], orders: &[f64]) -> (f64, f64) {
    let mut row = values.to_vec();
    let mut prev_best = *row.last().unwrap();
    let mut best = prev_best;
    for &p in orders {
        if row.len() < 2 {
            break;
        }
        let f = 2f64.powf(p);
        row = row.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        prev_best = best;
        best = *row.last().unwrap();
    }
    (best, (best - prev_best).abs())
}

/// Error exponents of y^{1−2s}∂_yF in powers of y: 2j − 2s and 2j for j ≥ 1.
pub fn dn_error_orders(s: f64, count: usize) -> Vec<f64> {
    let mut o: Vec<f64> = (1..=count).flat_map(|j| [2.0 * j as f64 - 2.0 * s, 2.0 * j as f64]).collect();
    o.sort_by(|a, b| a.partial_cmp(b).unwrap());
    o.truncate(count);
    o
}

/// Extrapolated Dirichlet-to-Neumann value for u = p(·, t0).
pub fn dn_limit_nonconformal(
    data: &HeatData,
    s: f64,
    p: &GroupPoint,
    y_sequence: &[f64],
    cfg: &QuadratureConfig,
) -> Result<DnResult> {
    check_order(s)?;
    if y_sequence.len() < 3 {
        return Err(invalid("DN extrapolation needs at least three y values"));
    }
    for w in y_sequence.windows(2) {
        if !((w[1] / w[0] - 0.5).abs() < 1e-12) {
            return Err(invalid("y_sequence must halve at each step"));
        }
    }
    let values = y_sequence
        .iter()
        .map(|&y| dn_weighted_derivative(data, s, p, y, cfg))
        .collect::<Result<Vec<_>>>()?;
    let orders = dn_error_orders(s, 4.min(y_sequence.len() - 1));
    let (raw, err) = richardson(&values, &orders);
    if !raw.is_finite() || err > 1e-3 * raw.abs() {
        return Err(HtkError::Extrapolation(format!("limit {raw:e} with spread {err:e}")));
    }
    let derived = -(2f64.powf(2.0 * s - 1.0) * gamma(s)? / gamma(1.0 - s)?);
    let alternative = -(2f64.powf(2.0 * s - 1.0) * gamma(1.0 - s)? / gamma(1.0 + s)?);
    Ok(DnResult {
        limit: derived * raw,
        limit_alternative_constant: alternative * raw,
        raw_limit: raw,
        y: y_sequence.to_vec(),
        values,
        extrapolation_error: err * derived.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-11)
    }

    #[test]
    fn monster_vanishes_and_h_is_antiderivative() {
        for &(s, mu) in &[(0.5, 1.0), (-0.3, 5.0), (0.9, 0.1), (-0.75, 10.0)] {
            let a = monster_integral(s, mu, &cfg()).unwrap();
            assert!(a.value.abs() < 1e-10, "A({s},{mu}) = {a:?}");
            for &rho in &[0.01, 0.3, 1.0, 4.0, 70.0] {
                let h = 1e-3 * rho;
                let d = |h: f64| (monster_antiderivative(s, mu, rho + h) - monster_antiderivative(s, mu, rho - h)) / (2.0 * h);
                let fd = (4.0 * d(0.5 * h) - d(h)) / 3.0;
                let an = monster_integrand(s, mu, rho);
                assert!((fd - an).abs() < 1e-8 * an.abs().max(1e-3), "{s} {mu} {rho}: {fd} {an}");
            }
            // h = O(ρ^{s+1}) at 0 and O(ρ^{s−1}) at ∞
            let c0 = monster_antiderivative(s, mu, 1e-3).abs() / 1e-3f64.powf(s + 1.0);
            let c1 = monster_antiderivative(s, mu, 1e3).abs() / 1e3f64.powf(s - 1.0);
            for &r in &[1e-5, 1e-7] {
                assert!(monster_antiderivative(s, mu, r).abs() < 2.0 * c0 * r.powf(s + 1.0), "{s} {mu} {r}");
                assert!(monster_antiderivative(s, mu, 1.0 / r).abs() < 2.0 * c1 * r.powf(1.0 - s), "{s} {mu} {r}");
            }
        }
    }

    #[test]
    fn beta_and_change_of_variables() {
        let b = beta_integral(0.3, &cfg()).unwrap().value;
        assert!((b - PI / (0.3 * PI).sin()).abs() < 1e-10, "{b}");
        let (d, c) = change_of_variables_pair(|t, tau| t.powf(0.5) * tau.powf(1.3) * (-t - tau).exp(), &cfg());
        let want = gamma(1.5).unwrap() * gamma(2.3).unwrap();
        assert!((d.value - want).abs() < 1e-10 * want, "{d:?} {want}");
        assert!((c.value - want).abs() < 1e-10 * want, "{c:?} {want}");
    }

    #[test]
    fn richardson_removes_listed_orders() {
        let ys = geometric_sequence(0.5, 8);
        let v: Vec<f64> = ys.iter().map(|y| 2.0 + 3.0 * y.powf(1.4) - y * y + 0.5 * y.powf(3.4)).collect();
        let (l, _) = richardson(&v, &dn_error_orders(0.3, 4));
        assert!((l - 2.0).abs() < 1e-9, "{l}");
    }

    #[test]
    fn balakrishnan_methods_agree() {
        let data = HeatData::new(HTypeGroup::heisenberg(1), 1.0).unwrap();
        let p = data.group.point(0.7, 0.2);
        let a = balakrishnan_nonconformal(&data, 0.5, &p, BalakrishnanMethod::Bala, &cfg()).unwrap().value;
        let b = balakrishnan_nonconformal(&data, 0.5, &p, BalakrishnanMethod::DerivativeForm, &cfg()).unwrap().value;
        assert!((a - b).abs() < 1e-8 * b.abs(), "{a} {b}");
    }
}
