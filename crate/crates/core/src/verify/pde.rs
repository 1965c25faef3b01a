//! Finite-difference residuals of the extension and Baouendi–Grushin operators. Central
//! differences at steps h and h/2 are combined by Richardson extrapolation; a residual is
//! reported relative to the largest single term of the operator.

use super::{f64_param, outcome, record, Outcome, Params};
use crate::error::Result;
use crate::fundsol::{thick_fundamental_radial, ConformalMethod};
use crate::group::{gauge_from_norms, HTypeGroup};
use crate::kernels::poisson::{conformal_elliptic_closed, poisson_parabolic_radial, PoissonConstant, PoissonVariant};
use crate::kernels::{bg_kernel, bg_radial, thick_radial};
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub residual: f64,
    /// largest absolute term of the operator
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale
    }

    fn from_terms(terms: &[f64]) -> Self {
        Residual { residual: terms.iter().sum(), scale: terms.iter().fold(0.0f64, |a, t| a.max(t.abs())) }
    }
}

/// First and second derivatives along coordinate i, Richardson-combined from h and h/2.
fn derivatives<F: Fn(&[f64]) -> Result<f64>>(f: &F, x: &[f64], center: f64, i: usize, h: f64) -> Result<(f64, f64)> {
    let at = |d: f64| {
        let mut y = x.to_vec();
        y[i] += d;
        f(&y)
    };
    let stencil = |h: f64| -> Result<(f64, f64)> {
        let (p, m) = (at(h)?, at(-h)?);
        Ok(((p - m) / (2.0 * h), (p - 2.0 * center + m) / (h * h)))
    };
    let (d1, d2) = stencil(h)?;
    let (e1, e2) = stencil(0.5 * h)?;
    Ok(((4.0 * e1 - d1) / 3.0, (4.0 * e2 - d2) / 3.0))
}

fn step(n: f64) -> f64 {
    1e-3 * n.max(1.0)
}

/// U_yy + (1−2s)/y U_y + ((y²+r²)/4)Δ_σU + Δ_zU − U_t for U = U(r, ρ, t, y) radial in z and σ.
pub fn parabolic_residual<F: Fn(f64, f64, f64, f64) -> Result<f64>>(m: f64, k: usize, s: f64, u: F, x: [f64; 4]) -> Result<Residual> {
    let f = |v: &[f64]| u(v[0], v[1], v[2], v[3]);
    let [r, rho, t, y] = x;
    let h = step(gauge_from_norms((r * r + y * y).sqrt(), rho));
    let c = f(&x)?;
    let (ur, urr) = derivatives(&f, &x, c, 0, h)?;
    let (us, uss) = derivatives(&f, &x, c, 1, h)?;
    let (ut, _) = derivatives(&f, &x, c, 2, 1e-3 * t)?;
    let (uy, uyy) = derivatives(&f, &x, c, 3, h)?;
    let sigma_lap = uss + (k as f64 - 1.0) / rho * us;
    Ok(Residual::from_terms(&[
        uyy,
        (1.0 - 2.0 * s) / y * uy,
        0.25 * (y * y + r * r) * sigma_lap,
        urr + (m - 1.0) / r * ur,
        -ut,
    ]))
}

/// The same operator without −U_t, for U = U(r, ρ, y).
pub fn elliptic_residual<F: Fn(f64, f64, f64) -> Result<f64>>(m: f64, k: usize, s: f64, u: F, x: [f64; 3]) -> Result<Residual> {
    let f = |v: &[f64]| u(v[0], v[1], v[2]);
    let [r, rho, y] = x;
    let h = step(gauge_from_norms((r * r + y * y).sqrt(), rho));
    let c = f(&x)?;
    let (ur, urr) = derivatives(&f, &x, c, 0, h)?;
    let (us, uss) = derivatives(&f, &x, c, 1, h)?;
    let (uy, uyy) = derivatives(&f, &x, c, 2, h)?;
    let sigma_lap = uss + (k as f64 - 1.0) / rho * us;
    Ok(Residual::from_terms(&[uyy, (1.0 - 2.0 * s) / y * uy, 0.25 * (y * y + r * r) * sigma_lap, urr + (m - 1.0) / r * ur]))
}

/// ∂_tU − Δ_wU − (|w|²/4)Δ_σU in Cartesian coordinates x = (w, σ, t), w ∈ ℝ^n.
pub fn bg_residual<F: Fn(&[f64]) -> Result<f64>>(n: usize, u: F, x: &[f64]) -> Result<Residual> {
    let t = *x.last().unwrap();
    let w2: f64 = x[..n].iter().map(|v| v * v).sum();
    let h = step(gauge_from_norms(w2.sqrt(), x[n..x.len() - 1].iter().map(|v| v * v).sum::<f64>().sqrt()));
    let c = u(x)?;
    let mut lap_w = 0.0;
    let mut lap_s = 0.0;
    for i in 0..x.len() - 1 {
        let (_, d2) = derivatives(&u, x, c, i, h)?;
        if i < n {
            lap_w += d2;
        } else {
            lap_s += d2;
        }
    }
    let (ut, _) = derivatives(&u, x, c, x.len() - 1, 1e-3 * t)?;
    Ok(Residual::from_terms(&[ut, -lap_w, -0.25 * w2 * lap_s]))
}

fn fd_cfg(cfg: &QuadratureConfig) -> QuadratureConfig {
    cfg.with_rel_tol(1e-13).with_abs_tol(1e-300)
}

const PARABOLIC_POINTS: [[f64; 4]; 3] = [[0.8, 0.3, 1.0, 0.6], [1.2, 0.7, 0.5, 0.4], [0.5, 0.2, 2.0, 1.1]];
const ELLIPTIC_POINTS: [[f64; 3]; 3] = [[0.8, 0.3, 0.6], [1.2, 0.7, 0.4], [0.5, 0.2, 1.1]];

pub fn pde_residual_parabolic(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let (mf, k) = (g.m() as f64, g.k());
    let qc = fd_cfg(cfg);
    let q = |order: f64| move |r: f64, rho: f64, t: f64, y: f64| Ok(thick_radial(mf, k, order, r, rho, t, y).evaluate(&qc)?.value);
    let poisson = |r: f64, rho: f64, t: f64, y: f64| {
        Ok(poisson_parabolic_radial(mf, k, s, r, rho, t, y, PoissonVariant::Conformal, PoissonConstant::Derived, &qc)?.value)
    };
    let (mut a, mut b, mut c) = (0.0f64, 0.0f64, 0.0f64);
    for x in PARABOLIC_POINTS {
        a = a.max(parabolic_residual(mf, k, s, q(s), x)?.relative());
        b = b.max(parabolic_residual(mf, k, -s, q(-s), x)?.relative());
        c = c.max(parabolic_residual(mf, k, s, poisson, x)?.relative());
    }
    let notes = format!("P_(s) q_(s): {a:.1e}; P_(-s) q_(-s): {b:.1e}; P_(s) of the conformal Poisson kernel: {c:.1e}");
    let mut p = params.clone();
    record(&mut p, "s", s);
    record(&mut p, "points_r_rho_t_y", PARABOLIC_POINTS);
    Ok(outcome(a.max(b).max(c), 1e-4, notes, p))
}

pub fn pde_residual_elliptic(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let (m, k) = (g.m(), g.k());
    let mf = m as f64;
    let e = |order: f64| {
        move |r: f64, rho: f64, y: f64| Ok(thick_fundamental_radial(m, k, order, r, rho, y, ConformalMethod::ClosedForm, cfg)?.value)
    };
    let poisson = |r: f64, rho: f64, y: f64| conformal_elliptic_closed(m, k, s, r, rho, y);
    let (mut a, mut b, mut c) = (0.0f64, 0.0f64, 0.0f64);
    for x in ELLIPTIC_POINTS {
        a = a.max(elliptic_residual(mf, k, s, e(s), x)?.relative());
        b = b.max(elliptic_residual(mf, k, -s, e(-s), x)?.relative());
        c = c.max(elliptic_residual(mf, k, s, poisson, x)?.relative());
    }
    let notes = format!("L_(s) e_(s): {a:.1e}; L_(-s) e_(-s): {b:.1e}; L_(s) Q_(s): {c:.1e}");
    let mut p = params.clone();
    record(&mut p, "s", s);
    record(&mut p, "points_r_rho_y", ELLIPTIC_POINTS);
    Ok(outcome(a.max(b).max(c), 1e-4, notes, p))
}

pub fn pde_residual_bg(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let k = g.k();
    let qc = fd_cfg(cfg);
    // integer n = 2, Cartesian, with the pole away from the origin
    let (w2, s2) = ([0.3, -0.2], [0.1, 0.05, -0.15]);
    let cart = |x: &[f64]| Ok(bg_kernel(2.0, k, &x[..2], &x[2..2 + k], &w2, &s2[..k], x[2 + k], &qc)?.value);
    let cart_points: [([f64; 2], [f64; 3], f64); 3] =
        [([0.6, -0.4], [0.3, 0.1, -0.2], 0.8), ([1.1, 0.3], [-0.4, 0.2, 0.1], 1.5), ([-0.5, 0.7], [0.2, -0.3, 0.25], 0.5)];
    let mut a = 0.0f64;
    for (w, sig, t) in cart_points {
        let mut x = w.to_vec();
        x.extend_from_slice(&sig[..k]);
        x.push(t);
        a = a.max(bg_residual(2, cart, &x)?.relative());
    }
    // fractional n = m + 2(1 − s), pole at the origin, radial coordinates (r, ρ, t)
    let n = g.m() as f64 + 2.0 * (1.0 - s);
    let radial = |v: &[f64]| Ok(bg_radial(n, k, v[0], 0.0, 0.0, v[1], v[2]).evaluate(&qc)?.value);
    let mut b = 0.0f64;
    for x in [[0.8, 0.3, 1.0], [1.2, 0.6, 0.5], [0.4, 0.2, 2.0]] {
        let [r, rho, t] = x;
        let h = step(gauge_from_norms(r, rho));
        let c = radial(&x)?;
        let (ur, urr) = derivatives(&radial, &x, c, 0, h)?;
        let (us, uss) = derivatives(&radial, &x, c, 1, h)?;
        let (ut, _) = derivatives(&radial, &x, c, 2, 1e-3 * t)?;
        let res = Residual::from_terms(&[ut, -(urr + (n - 1.0) / r * ur), -0.25 * r * r * (uss + (k as f64 - 1.0) / rho * us)]);
        b = b.max(res.relative());
    }
    let notes = format!("n = 2 with pole ((0.3,-0.2), σ2): {a:.1e}; n = {n} radial: {b:.1e}");
    let mut p = params.clone();
    record(&mut p, "s", s);
    Ok(outcome(a.max(b), 1e-4, notes, p))
}

pub fn intertwining(_: &HTypeGroup, params: &Params, _: &QuadratureConfig) -> Result<Outcome> {
    let w = |y: f64| (-y).exp() * y.cos() + y * y;
    let mut worst = 0.0f64;
    for s in [0.3, 0.7] {
        let v = move |x: &[f64]| Ok(x[0].powf(2.0 * s) * w(x[0]));
        let wf = move |x: &[f64]| Ok(w(x[0]));
        for y in [0.5, 1.0, 2.0] {
            let x = [y];
            let (v1, v2) = derivatives(&v, &x, v(&x)?, 0, 1e-3)?;
            let (w1, w2) = derivatives(&wf, &x, w(y), 0, 1e-3)?;
            let lhs = [v2, (1.0 - 2.0 * s) / y * v1];
            let ys = y.powf(2.0 * s);
            let rhs = [ys * w2, ys * (1.0 + 2.0 * s) / y * w1];
            let scale = lhs.iter().chain(&rhs).fold(0.0f64, |a, t| a.max(t.abs()));
            worst = worst.max((lhs.iter().sum::<f64>() - rhs.iter().sum::<f64>()).abs() / scale);
        }
    }
    Ok(outcome(worst, 1e-6, "(y^2s w)'' + (1-2s)/y (y^2s w)' = y^2s (w'' + (1+2s)/y w') for w = e^-y cos y + y^2", params.clone()))
}
