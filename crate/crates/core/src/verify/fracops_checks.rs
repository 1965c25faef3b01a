use super::{f64_param, list_param, outcome, record, rel_err, Outcome, Params, POINTS};
use crate::error::Result;
use crate::fracops::{
    balakrishnan_nonconformal, dn_extension_value, dn_limit_nonconformal, geometric_sequence, BalakrishnanMethod, HeatData,
};
use crate::group::HTypeGroup;
use crate::kernels::heat_radial;
use crate::quadrature::QuadratureConfig;

const DN_POINTS: [(f64, f64); 3] = [(0.7, 0.2), (1.0, 0.0), (0.4, 0.5)];

pub fn dn_vs_balakrishnan(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let t0 = f64_param(params, "t0", 1.0)?;
    let s_values = list_param(params, "s", &[0.3, 0.7])?;
    let levels = f64_param(params, "levels", 9.0)? as usize;
    let data = HeatData::new(g.clone(), t0)?;
    let ys = geometric_sequence(0.5, levels);
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for &s in &s_values {
        for &(zn, sn) in &DN_POINTS {
            let p = g.point(zn, sn);
            let dn = dn_limit_nonconformal(&data, s, &p, &ys, cfg)?;
            let bala = balakrishnan_nonconformal(&data, s, &p, BalakrishnanMethod::Bala, cfg)?.value;
            let e = rel_err(dn.limit, bala);
            worst = worst.max(e);
            notes.push(format!(
                "s = {s}, (|z|,|σ|) = ({zn},{sn}): DN {:.8e}, L^s {bala:.8e}, gap {e:.1e}, alternative-constant DN / L^s = {:.6}",
                dn.limit,
                dn.limit_alternative_constant / bala
            ));
        }
        // boundary value F(g, y) → p(g, t0)
        let (zn, sn) = DN_POINTS[0];
        let p = g.point(zn, sn);
        let u = heat_radial(g.m() as f64, g.k(), zn, sn, t0).evaluate(cfg)?.value;
        let f = dn_extension_value(&data, s, &p, 1e-3, cfg)?;
        notes.push(format!("s = {s}: F(g, 1e-3) - u(g) = {:.2e}", f - u));
    }
    let mut p = params.clone();
    record(&mut p, "s", &s_values);
    record(&mut p, "t0", t0);
    record(&mut p, "y", &ys);
    record(&mut p, "points", DN_POINTS);
    Ok(outcome(worst, 1e-3, notes.join("; "), p))
}

pub fn balakrishnan_methods(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let t0 = f64_param(params, "t0", 1.0)?;
    let s = f64_param(params, "s", 0.5)?;
    let data = HeatData::new(g.clone(), t0)?;
    let mut worst = 0.0f64;
    for &(zn, sn) in &POINTS {
        let p = g.point(zn, sn);
        let a = balakrishnan_nonconformal(&data, s, &p, BalakrishnanMethod::Bala, cfg)?.value;
        let b = balakrishnan_nonconformal(&data, s, &p, BalakrishnanMethod::DerivativeForm, cfg)?.value;
        worst = worst.max(rel_err(b, a));
    }
    let mut p = params.clone();
    record(&mut p, "s", s);
    record(&mut p, "t0", t0);
    Ok(outcome(worst, 1e-6, "difference quotient against τ^(-s) ∂_τ form for u = p(·, t0)", p))
}
