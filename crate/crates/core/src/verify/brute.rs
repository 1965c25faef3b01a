//! Brute-force group convolution on heisenberg(1): both kernels are tabulated on a
//! (|z|, |σ|) grid and the 3-D integral over g' is a trapezoidal sum.

use super::{f64_param, outcome, record, rel_err, Outcome, Params};
use crate::error::{invalid, Result};
use crate::group::HTypeGroup;
use crate::kernels::{composite_kernel_radial, modified_radial};
use crate::quadrature::QuadratureConfig;

/// A function of (r, ρ), even in both, tabulated on a uniform grid and interpolated by
/// 4-point Lagrange in each variable. Zero beyond the grid.
#[derive(Debug, Clone)]
pub struct KernelTable {
    h_r: f64,
    h_s: f64,
    n_r: usize,
    n_s: usize,
    values: Vec<f64>,
}

fn lagrange4(f: f64) -> [f64; 4] {
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ]
}

impl KernelTable {
    pub fn build<F: FnMut(f64, f64) -> Result<f64>>(mut f: F, r_max: f64, s_max: f64, h: f64) -> Result<Self> {
        let n_r = (r_max / h).ceil() as usize + 1;
        let n_s = (s_max / h).ceil() as usize + 1;
        let mut values = Vec::with_capacity(n_r * n_s);
        for i in 0..n_r {
            for j in 0..n_s {
                values.push(f(i as f64 * h, j as f64 * h)?);
            }
        }
        Ok(KernelTable { h_r: h, h_s: h, n_r, n_s, values })
    }

    pub fn eval(&self, r: f64, rho: f64) -> f64 {
        let (x, y) = (r.abs() / self.h_r, rho.abs() / self.h_s);
        let (i, j) = (x.floor() as usize, y.floor() as usize);
        if i + 2 >= self.n_r || j + 2 >= self.n_s {
            return 0.0;
        }
        let (wx, wy) = (lagrange4(x - i as f64), lagrange4(y - j as f64));
        let mut acc = 0.0;
        for (a, wa) in wx.iter().enumerate() {
            // index i − 1 + a, reflected at 0
            let ii = (i as isize - 1 + a as isize).unsigned_abs();
            let row = &self.values[ii * self.n_s..(ii + 1) * self.n_s];
            let mut inner = 0.0;
            for (b, wb) in wy.iter().enumerate() {
                inner += wb * row[(j as isize - 1 + b as isize).unsigned_abs()];
            }
            acc += wa * inner;
        }
        acc
    }
}

/// ∫_G k1((g')^{−1}∘g) k2(g') dg' on heisenberg(1) at g = ((zn, 0), sn), with both kernels
/// given by tables and the g'-integral a trapezoidal sum with step h over a box that holds
/// the support of `k2`.
pub fn brute_force_convolution(g: &HTypeGroup, k1: &KernelTable, k2: &KernelTable, zn: f64, sn: f64, h: f64) -> Result<f64> {
    if g.m() != 2 || g.k() != 1 {
        return Err(invalid("brute-force convolution is implemented for heisenberg(1) only"));
    }
    let j = &g.j()[0];
    // ⟨J z', z_g⟩ = c · z'
    let c = [j[0][0] * zn, j[0][1] * zn];
    let r_max = (k2.n_r - 1) as f64 * k2.h_r;
    let s_max = (k2.n_s - 1) as f64 * k2.h_s;
    let nr = (r_max / h).ceil() as i64;
    let ns = (s_max / h).ceil() as i64;
    let mut total = 0.0;
    for a in -nr..=nr {
        let x1 = a as f64 * h;
        for b in -nr..=nr {
            let x2 = b as f64 * h;
            let r2 = (x1 * x1 + x2 * x2).sqrt();
            if r2 > r_max {
                continue;
            }
            let r1 = ((zn - x1).powi(2) + x2 * x2).sqrt();
            let shift = sn - 0.5 * (c[0] * x1 + c[1] * x2);
            let mut line = 0.0;
            for l in -ns..=ns {
                let sp = l as f64 * h;
                let v2 = k2.eval(r2, sp);
                if v2 != 0.0 {
                    line += k1.eval(r1, shift - sp) * v2;
                }
            }
            total += line;
        }
    }
    Ok(total * h * h * h)
}

pub fn convolution_lemma_brute_force(g: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<Outcome> {
    let s = f64_param(params, "s", 0.5)?;
    let tau = f64_param(params, "tau", 0.6)?;
    let t = f64_param(params, "t", 1.1)?;
    let table_step = f64_param(params, "table_step", 0.05)?;
    let step = f64_param(params, "step", 0.1)?;
    let kc = cfg.with_rel_tol(1e-9).with_abs_tol(1e-300);
    let m = g.m() as f64;
    let extent = |t: f64| (10.0 * t.sqrt().max(1.0), 7.5 * t.max(1.0));
    let (r1, s1) = extent(tau);
    let (r2, s2) = extent(t);
    let k_minus = KernelTable::build(|r, rho| Ok(modified_radial(m, 1, -s, r, rho, tau).evaluate(&kc)?.value), r1, s1, table_step)?;
    let k_plus = KernelTable::build(|r, rho| Ok(modified_radial(m, 1, s, r, rho, t).evaluate(&kc)?.value), r2, s2, table_step)?;
    let points = [(0.7, 0.3), (1.2, 0.0)];
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for (zn, sn) in points {
        let brute = brute_force_convolution(g, &k_minus, &k_plus, zn, sn, step)?;
        let composite = composite_kernel_radial(m, 1, s, zn, sn, tau, t, &kc)?.value;
        let e = rel_err(brute, composite);
        notes.push(format!("({zn},{sn}): brute force {brute:.8e}, composite {composite:.8e}"));
        worst = worst.max(e);
    }
    let mut p = params.clone();
    record(&mut p, "s", s);
    record(&mut p, "tau", tau);
    record(&mut p, "t", t);
    record(&mut p, "points", points);
    Ok(outcome(worst, 1e-3, notes.join("; "), p))
}
