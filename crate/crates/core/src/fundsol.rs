//! Fundamental solutions: conformal E_{(s)}, nonconformal E^{(s)}, thick-space 𝔢_{(±s)},
//! the s = 1 Folland–Kaplan solution and the negative-order Riesz kernel.

use crate::error::{invalid, HtkError, Result};
use crate::group::{gauge_from_norms, GroupPoint, HTypeGroup};
use crate::kernels::subordinate::subordinated_time_integral;
use crate::kernels::time::kernel_time_integral;
use crate::kernels::{heat_radial, modified_radial, thick_radial};
use crate::quadrature::{tanh_sinh, Estimate, QuadratureConfig};
use crate::specfun::{gamma, hyp2f1};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalConstant {
    pub s: f64,
    pub m: usize,
    pub k: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConformalMethod {
    ClosedForm,
    DirectIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonconformalMethod {
    DirectIntegral,
    Hypergeometric,
    /// t-integral in closed form, one fiber integral left
    Subordinated,
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// C_{(s)}(m, k); for s < 0 the Γ(s) in the denominator is taken in absolute value.
pub fn conformal_constant_value(m: usize, k: usize, s: f64) -> Result<f64> {
    let mh = 0.5 * m as f64;
    let (x1, x2) = (0.5 * (mh + 1.0 - s), 0.5 * (mh + k as f64 - s));
    if is_nonpositive_integer(x1) || is_nonpositive_integer(x2) {
        return Err(HtkError::ParameterPole(format!("C_(s)(m={m}, k={k}) has a pole at s = {s}")));
    }
    if s == 0.0 {
        return Err(HtkError::ParameterPole("s = 0".into()));
    }
    let num = 2f64.powf(mh + 2.0 * k as f64 - 3.0 * s - 1.0) * gamma(x1)? * gamma(x2)?;
    Ok(num / (PI.powf(0.5 * (m + k + 1) as f64) * gamma(s)?.abs()))
}

pub fn conformal_constant(g: &HTypeGroup, s: f64) -> Result<ConformalConstant> {
    Ok(ConformalConstant { s, m: g.m(), k: g.k(), value: conformal_constant_value(g.m(), g.k(), s)? })
}

/// The alternative candidate for the constant in front of N^{2−Q} in ∫₀^∞ p dt.
pub fn folland_alternative_constant(m: usize, k: usize) -> Result<f64> {
    let mh = 0.5 * m as f64;
    Ok(2f64.powf(mh + 2.0 * k as f64 - 2.0) * gamma(0.25 * m as f64)? * gamma(0.5 * (mh + k as f64 - 1.0))?
        / PI.powf(0.5 * (m + k + 1) as f64))
}

fn off_pole(zn: f64, sn: f64) -> Result<f64> {
    let n = gauge_from_norms(zn, sn);
    if n == 0.0 {
        return Err(HtkError::PoleAtIdentity);
    }
    Ok(n)
}

fn conformal_order(m: usize, s: f64) -> Result<()> {
    if !(s > 0.0 && s < 0.5 * m as f64 + 1.0) {
        return Err(invalid(format!("order s = {s} outside (0, m/2 + 1)")));
    }
    Ok(())
}

pub fn fundamental_conformal_radial(
    m: usize,
    k: usize,
    s: f64,
    zn: f64,
    sn: f64,
    method: ConformalMethod,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    conformal_order(m, s)?;
    let n = off_pole(zn, sn)?;
    let q = (m + 2 * k) as f64;
    match method {
        ConformalMethod::ClosedForm => {
            Ok(Estimate::exact(conformal_constant_value(m, k, s)? * n.powf(2.0 * s - q)))
        }
        ConformalMethod::DirectIntegral => {
            let inner = cfg.inner();
            let power = 0.5 * m as f64 + k as f64;
            let e = kernel_time_integral(
                s,
                |t| Ok(modified_radial(m as f64, k, s, zn, sn, t).evaluate(&inner)?.value),
                power,
                n * n,
                cfg,
            )?;
            Ok(e.scale(1.0 / gamma(s)?))
        }
    }
}

/// E_{(s)}(g) = C_{(s)}(m,k) N(g)^{2s−Q}, or (1/Γ(s)) ∫₀^∞ t^{s−1} 𝒦_{(s)}(g, t) dt.
pub fn fundamental_conformal(
    g: &HTypeGroup,
    s: f64,
    p: &GroupPoint,
    method: ConformalMethod,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    g.check_point(p)?;
    fundamental_conformal_radial(g.m(), g.k(), s, p.z_norm(), p.sigma_norm(), method, cfg)
}

/// ∫₀¹ (tanh^{−1}√y)^{e−1} (1−y)^{m/4−1} y^{(k−e−1)/2} F(A, A+½; k/2; −X y) dy with
/// A = ½(m/2+k−e), X = 16|σ|²/|z|⁴.
fn gauge_integral(m: usize, k: usize, e: f64, x: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    let a = 0.5 * (0.5 * m as f64 + k as f64 - e);
    let c = 0.5 * k as f64;
    let mut failure = None;
    let est = tanh_sinh(
        |y, ya, yb| {
            let sq = y.sqrt();
            let at = if y < 0.5 { sq.atanh() } else { sq.ln_1p() - 0.5 * yb.ln() };
            let f = match hyp2f1(a, a + 0.5, c, -x * y) {
                Ok(v) => v,
                Err(err) => {
                    failure.get_or_insert(err);
                    0.0
                }
            };
            at.powf(e - 1.0) * yb.powf(0.25 * m as f64 - 1.0) * ya.powf(0.5 * (k as f64 - e - 1.0)) * f
        },
        0.0,
        1.0,
        cfg,
    );
    match failure {
        Some(err) => Err(err),
        None => Ok(est),
    }
}

fn hypergeometric_domain(zn: f64, sn: f64) -> Result<()> {
    if zn.powi(4) < 1e-6 * 16.0 * sn * sn {
        return Err(HtkError::MethodDomain(
            "hypergeometric representation needs |z|⁴ ≥ 1e−6·16|σ|²; use the direct integral".into(),
        ));
    }
    Ok(())
}

/// The single-integral representation with order e (e = s for E^{(s)}, e = −s for the Riesz
/// kernel) and 1/Γ(e) taken with its sign.
fn hypergeometric_representation(m: usize, k: usize, e: f64, zn: f64, sn: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    hypergeometric_domain(zn, sn)?;
    let (mh, kf) = (0.5 * m as f64, k as f64);
    let x = 16.0 * sn * sn / zn.powi(4);
    let pre = 2f64.powf(kf - 2.0 * e) * gamma(mh + kf - e)?
        / (PI.powf(0.5 * (m + k) as f64) * gamma(e)? * gamma(0.5 * kf)? * zn.powf(2.0 * (mh + kf - e)));
    Ok(gauge_integral(m, k, e, x, cfg)?.scale(pre))
}

pub fn fundamental_nonconformal_radial(
    m: usize,
    k: usize,
    s: f64,
    zn: f64,
    sn: f64,
    method: NonconformalMethod,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(invalid(format!("order s = {s} outside (0, 1]")));
    }
    let n = off_pole(zn, sn)?;
    let (mf, kf) = (m as f64, k as f64);
    match method {
        NonconformalMethod::DirectIntegral => {
            let inner = cfg.inner();
            let e = kernel_time_integral(
                s,
                |t| Ok(heat_radial(mf, k, zn, sn, t).evaluate(&inner)?.value),
                0.5 * mf + kf,
                n * n,
                cfg,
            )?;
            Ok(e.scale(1.0 / gamma(s)?))
        }
        NonconformalMethod::Hypergeometric => hypergeometric_representation(m, k, s, zn, sn, cfg),
        NonconformalMethod::Subordinated => {
            let e = subordinated_time_integral(k, 0.5 * mf, 0.5 * mf + kf, s, 0.0, zn * zn, sn, cfg)?;
            Ok(e.scale(1.0 / gamma(s)?))
        }
    }
}

/// E^{(s)}(g) = (1/Γ(s)) ∫₀^∞ t^{s−1} p(g, t) dt.
pub fn fundamental_nonconformal(
    g: &HTypeGroup,
    s: f64,
    p: &GroupPoint,
    method: NonconformalMethod,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    g.check_point(p)?;
    fundamental_nonconformal_radial(g.m(), g.k(), s, p.z_norm(), p.sigma_norm(), method, cfg)
}

#[allow(clippy::too_many_arguments)]
pub fn thick_fundamental_radial(
    m: usize,
    k: usize,
    s: f64,
    zn: f64,
    sn: f64,
    y: f64,
    method: ConformalMethod,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(s.abs() <= 1.0) || s == 0.0 || s == -1.0 {
        return Err(invalid(format!("order s = {s} outside (−1, 0) ∪ (0, 1]")));
    }
    if !(y >= 0.0) {
        return Err(invalid("y must be non-negative"));
    }
    let r2 = zn * zn + y * y;
    let gauge_sq = (r2 * r2 + 16.0 * sn * sn).sqrt();
    if gauge_sq == 0.0 {
        return Err(HtkError::PoleAtIdentity);
    }
    let (mh, kf) = (0.5 * m as f64, k as f64);
    match method {
        ConformalMethod::ClosedForm => {
            let c = gamma(s)?.abs() / (4.0 * PI).powf(1.0 - s) * conformal_constant_value(m, k, s)?;
            Ok(Estimate::exact(c * gauge_sq.powf(-(mh + kf - s))))
        }
        ConformalMethod::DirectIntegral => {
            let inner = cfg.inner();
            kernel_time_integral(
                1.0,
                |t| Ok(thick_radial(m as f64, k, s, zn, sn, t, y).evaluate(&inner)?.value),
                mh + kf + 1.0 - s,
                gauge_sq,
                cfg,
            )
        }
    }
}

/// 𝔢_{(s)}(g, y) = ∫₀^∞ q_{(s)}(g, t, y) dt; closed form (|Γ(s)|/(4π)^{1−s}) C_{(s)} ((|z|²+y²)² + 16|σ|²)^{−(m/2+k−s)/2}.
pub fn thick_fundamental(
    g: &HTypeGroup,
    s: f64,
    p: &GroupPoint,
    y: f64,
    method: ConformalMethod,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    g.check_point(p)?;
    thick_fundamental_radial(g.m(), g.k(), s, p.z_norm(), p.sigma_norm(), y, method, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FollandWinner {
    /// C_{(1)}(m, k) from the conformal constant
    ConformalConstant,
    /// the alternative candidate
    AlternativeConstant,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FollandResolution {
    pub m: usize,
    pub k: usize,
    /// ∫₀^∞ p(((1,0,…),0), t) dt
    pub quadrature: f64,
    pub conformal_constant: f64,
    pub alternative_constant: f64,
    pub winner: FollandWinner,
}

impl FollandResolution {
    pub fn constant(&self) -> Option<f64> {
        match self.winner {
            FollandWinner::ConformalConstant => Some(self.conformal_constant),
            FollandWinner::AlternativeConstant => Some(self.alternative_constant),
            FollandWinner::Neither => None,
        }
    }
}

/// Decides between the two candidate constants by quadrature at a point with N = 1.
pub fn resolve_folland_constant(m: usize, k: usize, cfg: &QuadratureConfig) -> Result<FollandResolution> {
    let quad = fundamental_nonconformal_radial(m, k, 1.0, 1.0, 0.0, NonconformalMethod::DirectIntegral, cfg)?.value;
    let conformal = conformal_constant_value(m, k, 1.0)?;
    let alternative = folland_alternative_constant(m, k)?;
    let rel = |c: f64| ((quad - c) / c).abs();
    let winner = match (rel(conformal) < 1e-6, rel(alternative) < 1e-6) {
        (true, false) => FollandWinner::ConformalConstant,
        (false, true) => FollandWinner::AlternativeConstant,
        _ => FollandWinner::Neither,
    };
    Ok(FollandResolution { m, k, quadrature: quad, conformal_constant: conformal, alternative_constant: alternative, winner })
}

fn cached_resolution(m: usize, k: usize) -> Result<FollandResolution> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), FollandResolution>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&(m, k)) {
        return Ok(*r);
    }
    let r = resolve_folland_constant(m, k, &QuadratureConfig::default().with_rel_tol(1e-11))?;
    cache.lock().unwrap().insert((m, k), r);
    Ok(r)
}

/// Fundamental solution of −𝓛 with the quadrature-validated constant: c·N(g)^{2−Q}.
pub fn folland_kaplan(g: &HTypeGroup, p: &GroupPoint) -> Result<f64> {
    g.check_point(p)?;
    let n = off_pole(p.z_norm(), p.sigma_norm())?;
    let res = cached_resolution(g.m(), g.k())?;
    let c = res.constant().ok_or_else(|| {
        HtkError::MethodDomain(format!(
            "neither candidate constant matches the quadrature value {}",
            res.quadrature
        ))
    })?;
    Ok(c * n.powf(2.0 - g.q() as f64))
}

pub fn riesz_negative_radial(m: usize, k: usize, s: f64, zn: f64, sn: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("order s = {s} outside (0, 1)")));
    }
    let n = off_pole(zn, sn)?;
    let inner = cfg.inner();
    let e = kernel_time_integral(
        -s,
        |t| Ok(heat_radial(m as f64, k, zn, sn, t).evaluate(&inner)?.value),
        0.5 * m as f64 + k as f64,
        n * n,
        cfg,
    )?;
    Ok(e.scale(-s / gamma(1.0 - s)?))
}

/// E^{(−s)}(g) = −s/Γ(1−s) ∫₀^∞ t^{−1−s} p(g, t) dt (a negative function).
pub fn riesz_kernel_negative(g: &HTypeGroup, s: f64, p: &GroupPoint, cfg: &QuadratureConfig) -> Result<Estimate> {
    g.check_point(p)?;
    riesz_negative_radial(g.m(), g.k(), s, p.z_norm(), p.sigma_norm(), cfg)
}

/// The hypergeometric representation with s → −s and 1/Γ(−s) kept with its sign; equals
/// `riesz_kernel_negative`. Replacing Γ(−s) by |Γ(−s)| flips the sign.
pub fn riesz_negative_hypergeometric(
    m: usize,
    k: usize,
    s: f64,
    zn: f64,
    sn: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("order s = {s} outside (0, 1)")));
    }
    off_pole(zn, sn)?;
    hypergeometric_representation(m, k, -s, zn, sn, cfg)
}

/// One sample of E^{(s)} and E_{(s)} on the gauge sphere N = `radius`, at the point with
/// |z|⁴ = N⁴cos²θ and 16|σ|² = N⁴sin²θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub theta: f64,
    pub z_norm: f64,
    pub sigma_norm: f64,
    pub nonconformal: f64,
    pub conformal: f64,
}

/// Both fundamental solutions at `samples` equally spaced θ ∈ [0, π/2], by their direct
/// time integrals.
pub fn gauge_profile(m: usize, k: usize, s: f64, radius: f64, samples: usize, cfg: &QuadratureConfig) -> Result<Vec<ProfileRow>> {
    if samples < 2 {
        return Err(invalid("a profile needs at least two samples"));
    }
    if !(radius > 0.0) {
        return Err(invalid("gauge radius must be positive"));
    }
    (0..samples)
        .map(|i| {
            let theta = 0.5 * PI * i as f64 / (samples - 1) as f64;
            let n2 = radius * radius;
            let z_norm = (n2 * theta.cos()).sqrt();
            let sigma_norm = 0.25 * n2 * theta.sin();
            let nonconformal =
                fundamental_nonconformal_radial(m, k, s, z_norm, sigma_norm, NonconformalMethod::DirectIntegral, cfg)?.value;
            let conformal = fundamental_conformal_radial(m, k, s, z_norm, sigma_norm, ConformalMethod::DirectIntegral, cfg)?.value;
            Ok(ProfileRow { theta, z_norm, sigma_norm, nonconformal, conformal })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-11)
    }

    #[test]
    fn constant_examples() {
        let c = conformal_constant_value(2, 1, 0.5).unwrap();
        let want = 2f64.sqrt() * gamma(0.75).unwrap().powi(2) / PI.powf(2.5);
        assert!((c - want).abs() < 1e-14 * want);
        let c1 = conformal_constant_value(2, 1, 1.0).unwrap();
        assert!((c1 - 0.5 / PI).abs() < 1e-15);
        assert!((folland_alternative_constant(2, 1).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!(matches!(conformal_constant_value(2, 1, 2.0), Err(HtkError::ParameterPole(_))));
        assert!(matches!(conformal_constant_value(4, 3, 5.0), Err(HtkError::ParameterPole(_))));
        assert!(conformal_constant_value(2, 1, 3.0).unwrap().is_finite());
    }

    #[test]
    fn conformal_methods_agree_on_heisenberg() {
        let e = fundamental_conformal_radial(2, 1, 0.5, 1.0, 0.0, ConformalMethod::DirectIntegral, &cfg()).unwrap();
        let c = conformal_constant_value(2, 1, 0.5).unwrap();
        assert!((e.value - c).abs() < 1e-8 * c, "{} {c}", e.value);
    }

    #[test]
    fn nonconformal_representations_agree() {
        for &(s, want) in &[(0.25, 0.0452991722748), (0.5, 0.0763340348296)] {
            let h = fundamental_nonconformal_radial(2, 1, s, 1.0, 0.25, NonconformalMethod::Hypergeometric, &cfg())
                .unwrap()
                .value;
            let d = fundamental_nonconformal_radial(2, 1, s, 1.0, 0.25, NonconformalMethod::DirectIntegral, &cfg())
                .unwrap()
                .value;
            assert!((h - want).abs() < 1e-10, "{h}");
            assert!((d - want).abs() < 1e-9, "{d}");
        }
        assert!(matches!(
            fundamental_nonconformal_radial(2, 1, 0.5, 1e-3, 1.0, NonconformalMethod::Hypergeometric, &cfg()),
            Err(HtkError::MethodDomain(_))
        ));
    }

    #[test]
    fn folland_resolution_picks_conformal_constant() {
        let r = resolve_folland_constant(2, 1, &cfg()).unwrap();
        assert_eq!(r.winner, FollandWinner::ConformalConstant);
        assert!((r.quadrature - 0.5 / PI).abs() < 1e-9);
    }

    #[test]
    fn riesz_kernel_sign_and_value() {
        let d = riesz_negative_radial(2, 1, 0.5, 1.0, 0.0, &cfg()).unwrap().value;
        let h = riesz_negative_hypergeometric(2, 1, 0.5, 1.0, 0.0, &cfg()).unwrap().value;
        assert!(d < 0.0);
        assert!((d + 0.31687765).abs() < 1e-7, "{d}");
        assert!((d - h).abs() < 1e-8 * d.abs(), "{d} {h}");
    }
}
