//! Heat kernel, modified kernels 𝒦_{(±s)}, thick-space kernels q_{(±s)}, the general
//! Baouendi–Grushin kernel, the composite kernel and the Poisson kernels.
//!
//! Every kernel is radial in z and in σ. Internally they are all
//! 2^k (4πt)^{−P} ∫_{ℝ^k} e^{−(i/t)⟨σ,λ⟩} (|λ|/sinh|λ|)^a e^{−c|λ|coth|λ| + d|λ|/sinh|λ|} dλ.

pub mod composite;
pub mod fiber;
pub mod mass;
pub mod poisson;
pub mod subordinate;
pub mod time;

pub use composite::{composite_kernel, composite_kernel_radial, fiber_convolve, FiberKernel};
pub use fiber::{fiber_transform, xcoth_m1, xcsch, FiberShape, PhaseConvention, VerticalFiber};
pub use poisson::{
    kappa, poisson_kernel_elliptic, poisson_kernel_parabolic, EllipticMethod, PoissonConstant, PoissonVariant,
};

use crate::error::{invalid, HtkError, Result};
use crate::group::{norm, GroupPoint, HTypeGroup};
use crate::quadrature::{Estimate, QuadratureConfig};
use fiber::fiber_transform_weighted;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Order s ∈ (−1, 0) ∪ (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SignedOrder(f64);

impl SignedOrder {
    pub fn new(s: f64) -> Result<Self> {
        if !(s.abs() <= 1.0) || s == 0.0 || s == -1.0 {
            return Err(invalid(format!("order s = {s} outside (−1, 0) ∪ (0, 1]")));
        }
        Ok(SignedOrder(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn neg(self) -> Result<Self> {
        SignedOrder::new(-self.0)
    }
}

/// Point-evaluated canonical kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalKernel {
    pub k: usize,
    /// exponent of r/sinh r
    pub a: f64,
    /// exponent P in (4πt)^{−P}
    pub power: f64,
    /// Gaussian scale multiplying r coth r
    pub c: f64,
    /// coefficient of r/sinh r in the exponent
    pub d: f64,
    pub sigma_norm: f64,
    pub t: f64,
}

impl CanonicalKernel {
    pub fn prefactor(&self) -> f64 {
        2f64.powi(self.k as i32) * (4.0 * PI * self.t).powf(-self.power)
    }

    fn shape(&self) -> FiberShape {
        FiberShape { a: self.a, c: self.c, d: self.d }
    }

    fn check(&self) -> Result<()> {
        if !(self.t > 0.0) {
            return Err(invalid("t must be positive"));
        }
        Ok(())
    }

    pub fn evaluate(&self, cfg: &QuadratureConfig) -> Result<Estimate> {
        self.check()?;
        let outer = self.prefactor() * (self.d - self.c).exp();
        if outer == 0.0 {
            return Ok(Estimate::exact(0.0));
        }
        let e = fiber_transform(self.k, self.shape(), self.sigma_norm / self.t, cfg)?;
        Ok(e.scale(outer))
    }

    /// ∂_t at fixed (z, σ), by differentiating under the fiber integral.
    pub fn time_derivative(&self, cfg: &QuadratureConfig) -> Result<Estimate> {
        self.check()?;
        if self.d != 0.0 {
            return Err(HtkError::MethodDomain("time derivative needs a centered kernel (d = 0)".into()));
        }
        let outer = self.prefactor() * (-self.c).exp() / self.t;
        if outer == 0.0 {
            return Ok(Estimate::exact(0.0));
        }
        let (a, c, shift) = (self.a, self.c, self.a - (self.power - self.k as f64));
        let w = move |r: f64| {
            let cs = xcsch(r);
            shift - a * (xcoth_m1(r) + 1.0) + c * cs * cs
        };
        let e = fiber_transform_weighted(self.k, self.shape(), self.sigma_norm / self.t, w, cfg)?;
        Ok(e.scale(outer))
    }
}

pub fn heat_radial(m: f64, k: usize, zn: f64, sn: f64, t: f64) -> CanonicalKernel {
    CanonicalKernel { k, a: 0.5 * m, power: 0.5 * m + k as f64, c: zn * zn / (4.0 * t), d: 0.0, sigma_norm: sn, t }
}

pub fn modified_radial(m: f64, k: usize, s: f64, zn: f64, sn: f64, t: f64) -> CanonicalKernel {
    CanonicalKernel { a: 0.5 * m + 1.0 - s, ..heat_radial(m, k, zn, sn, t) }
}

pub fn thick_radial(m: f64, k: usize, s: f64, zn: f64, sn: f64, t: f64, y: f64) -> CanonicalKernel {
    CanonicalKernel {
        k,
        a: 0.5 * m + 1.0 - s,
        power: 0.5 * m + k as f64 + 1.0 - s,
        c: (zn * zn + y * y) / (4.0 * t),
        d: 0.0,
        sigma_norm: sn,
        t,
    }
}

fn positive_time(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(invalid("t must be positive"));
    }
    Ok(())
}

/// Heat kernel p(g, t) of the horizontal Laplacian.
pub fn heat_kernel(g: &HTypeGroup, p: &GroupPoint, t: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    g.check_point(p)?;
    positive_time(t)?;
    heat_radial(g.m() as f64, g.k(), p.z_norm(), p.sigma_norm(), t).evaluate(cfg)
}

/// Modified kernel 𝒦_{(s)}(g, t); s = 1 gives the heat kernel.
pub fn modified_kernel(
    g: &HTypeGroup,
    s: SignedOrder,
    p: &GroupPoint,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    g.check_point(p)?;
    positive_time(t)?;
    modified_radial(g.m() as f64, g.k(), s.value(), p.z_norm(), p.sigma_norm(), t).evaluate(cfg)
}

/// Thick-space kernel q_{(s)}(g, t, y).
pub fn thick_kernel(
    g: &HTypeGroup,
    s: SignedOrder,
    p: &GroupPoint,
    t: f64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    g.check_point(p)?;
    positive_time(t)?;
    if !(y >= 0.0) {
        return Err(invalid("y must be non-negative"));
    }
    thick_radial(g.m() as f64, g.k(), s.value(), p.z_norm(), p.sigma_norm(), t, y).evaluate(cfg)
}

/// Baouendi–Grushin heat kernel in ℝ^n_w × ℝ^k_σ with pole (w2, σ2); n may be fractional,
/// only |w|, |w2|, ⟨w, w2⟩ and |σ − σ2| enter.
#[allow(clippy::too_many_arguments)]
pub fn bg_kernel(
    n: f64,
    k: usize,
    w: &[f64],
    sigma: &[f64],
    w2: &[f64],
    sigma2: &[f64],
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    positive_time(t)?;
    if !(n > 0.0) {
        return Err(invalid("n must be positive"));
    }
    if w.len() != w2.len() || sigma.len() != k || sigma2.len() != k {
        return Err(HtkError::DimensionMismatch("bg_kernel arguments have inconsistent lengths".into()));
    }
    let ww: f64 = w.iter().zip(w2).map(|(a, b)| a * b).sum();
    let ds: Vec<f64> = sigma.iter().zip(sigma2).map(|(a, b)| a - b).collect();
    bg_radial(n, k, norm(w), norm(w2), ww, norm(&ds), t).evaluate(cfg)
}

pub fn bg_radial(n: f64, k: usize, wn: f64, w2n: f64, inner: f64, sn: f64, t: f64) -> CanonicalKernel {
    CanonicalKernel {
        k,
        a: 0.5 * n,
        power: 0.5 * n + k as f64,
        c: (wn * wn + w2n * w2n) / (4.0 * t),
        d: inner / (2.0 * t),
        sigma_norm: sn,
        t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_semi_infinite;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(1e-13)
    }

    #[test]
    fn heat_kernel_at_identity() {
        let g = HTypeGroup::heisenberg(1);
        let v = heat_kernel(&g, &g.identity(), 1.0, &cfg()).unwrap().value;
        assert!((v - 1.0 / 16.0).abs() < 1e-13, "{v}");
        let v = heat_kernel(&g, &g.identity(), 2.0, &cfg()).unwrap().value;
        assert!((v - 1.0 / 64.0).abs() < 1e-14);
        assert!(heat_kernel(&g, &g.identity(), -1.0, &cfg()).is_err());
    }

    #[test]
    fn modified_kernel_at_identity_half() {
        let g = HTypeGroup::heisenberg(1);
        let s = SignedOrder::new(0.5).unwrap();
        let v = modified_kernel(&g, s, &g.identity(), 1.0, &cfg()).unwrap().value;
        let i = integrate_semi_infinite(|r: f64| xcsch(r).powf(1.5), 1.0, &cfg()).value;
        let want = 2.0 / (4.0 * PI).powi(2) * 2.0 * i;
        assert!((v - want).abs() < 1e-12 * want, "{v} vs {want}");
    }

    #[test]
    fn order_one_is_heat_and_restriction_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let one = SignedOrder::new(1.0).unwrap();
        for g in [HTypeGroup::heisenberg(1), HTypeGroup::quaternionic()] {
            for _ in 0..10 {
                let p = g.random_point(&mut rng, 1.5);
                let t = rng.gen_range(0.2..3.0);
                let h = heat_kernel(&g, &p, t, &cfg()).unwrap().value;
                let k1 = modified_kernel(&g, one, &p, t, &cfg()).unwrap().value;
                assert!((h - k1).abs() <= 1e-12 * h.abs(), "{h} {k1}");
                let s = SignedOrder::new(rng.gen_range(-0.9..0.9)).unwrap();
                let q = thick_kernel(&g, s, &p, t, 0.0, &cfg()).unwrap().value;
                let kk = modified_kernel(&g, s, &p, t, &cfg()).unwrap().value;
                let lhs = (4.0 * PI * t).powf(1.0 - s.value()) * q;
                assert!((lhs - kk).abs() < 1e-12 * kk.abs().max(1e-300), "{lhs} {kk}");
            }
        }
    }

    #[test]
    fn bg_reduces_to_thick_kernel() {
        let g = HTypeGroup::heisenberg(1);
        let s = SignedOrder::new(0.4).unwrap();
        let n = 2.0 + 2.0 * (1.0 - 0.4);
        let (zn, y, sig, t) = (0.7, 0.4, 0.3, 0.9);
        let q = thick_kernel(&g, s, &g.point(zn, sig), t, y, &cfg()).unwrap().value;
        let w = [zn, 0.0, y];
        let b = bg_kernel(n, 1, &w, &[sig], &[0.0; 3], &[0.0], t, &cfg()).unwrap().value;
        assert!((q - b).abs() < 1e-12 * q, "{q} {b}");
    }

    #[test]
    fn time_derivative_matches_differences() {
        let kr = |t: f64| heat_radial(4.0, 3, 0.8, 0.3, t);
        let t = 0.7;
        let h = 1e-4;
        let fd = (kr(t + h).evaluate(&cfg()).unwrap().value - kr(t - h).evaluate(&cfg()).unwrap().value) / (2.0 * h);
        let an = kr(t).time_derivative(&cfg()).unwrap().value;
        assert!((fd - an).abs() < 1e-6 * an.abs(), "{fd} {an}");
    }
}
