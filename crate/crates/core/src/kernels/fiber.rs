//! The vertical fiber integral shared by every kernel:
//! ∫_{ℝ^k} e^{−i⟨w,λ⟩} (|λ|/sinh|λ|)^a e^{−c(|λ|coth|λ| − 1) + d(|λ|/sinh|λ| − 1)} W(|λ|) dλ.

use crate::error::{HtkError, Result};
use crate::quadrature::{radial_fourier, Estimate, QuadratureConfig};

/// x coth x − 1 without cancellation near 0.
pub fn xcoth_m1(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 0.1 {
        let x2 = x * x;
        x2 * (1.0 / 3.0 - x2 * (1.0 / 45.0 - x2 * (2.0 / 945.0 - x2 / 4725.0)))
    } else if ax > 20.0 {
        ax * (1.0 + 2.0 * (-2.0 * ax).exp()) - 1.0
    } else {
        x / x.tanh() - 1.0
    }
}

/// x / sinh x.
pub fn xcsch(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        1.0 - ax * ax / 6.0
    } else if ax > 700.0 {
        2.0 * ax * (-ax).exp()
    } else {
        ax / ax.sinh()
    }
}

/// ln(x / sinh x).
pub fn ln_xcsch(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-3 {
        let x2 = ax * ax;
        -x2 / 6.0 + x2 * x2 / 180.0
    } else if ax > 20.0 {
        (2.0 * ax).ln() - ax - (-(-2.0 * ax).exp()).ln_1p()
    } else {
        (ax / ax.sinh()).ln()
    }
}

/// Parameters of the fiber integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberShape {
    pub a: f64,
    pub c: f64,
    pub d: f64,
}

impl FiberShape {
    pub fn new(a: f64, c: f64) -> Self {
        FiberShape { a, c, d: 0.0 }
    }

    /// −ln of the integrand (without the weight).
    #[inline]
    pub fn neg_log(&self, r: f64) -> f64 {
        let mut e = -self.a * ln_xcsch(r) + self.c * xcoth_m1(r);
        if self.d != 0.0 {
            e -= self.d * (xcsch(r) - 1.0);
        }
        e
    }

    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        (-self.neg_log(r)).exp()
    }
}

/// Smallest L with `neg_log(L) − neg_log(0) ≥ target + (k−1)·ln(1+L)` for an eventually
/// increasing `neg_log`.
pub fn cutoff<F: Fn(f64) -> f64>(neg_log: F, k: usize, target: f64) -> f64 {
    let base = neg_log(0.0);
    let excess = |r: f64| neg_log(r) - base - target - (k as f64 - 1.0) * (1.0 + r).ln();
    let mut hi = 1.0;
    let mut guard = 0;
    while excess(hi) < 0.0 && guard < 200 {
        hi *= 2.0;
        guard += 1;
    }
    let mut lo = 0.0;
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Radial Fourier transform of a fiber integrand with an extra weight W(r).
pub fn fiber_transform_weighted<W: Fn(f64) -> f64>(
    k: usize,
    shape: FiberShape,
    rho: f64,
    weight: W,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(shape.a > 0.0) && !(shape.c > 0.0) {
        return Err(HtkError::InvalidArgument(format!(
            "fiber integrand does not decay (a = {}, c = {})",
            shape.a, shape.c
        )));
    }
    let tf = cfg.truncation_factor;
    let l = cutoff(|r| shape.neg_log(r), k, tf + 5.0);
    let scale = l / tf;
    radial_fourier(k, rho, |r| shape.value(r) * weight(r), scale, cfg)
}

pub fn fiber_transform(k: usize, shape: FiberShape, rho: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    fiber_transform_weighted(k, shape, rho, |_| 1.0, cfg)
}

/// λ-phase convention of a kernel representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseConvention {
    /// e^{−(i/t)⟨σ,λ⟩} with the hyperbolic factors in |λ|
    Canonical,
    /// e^{2πi⟨σ,λ⟩} with the hyperbolic factors in 2πt|λ|
    TwoPi,
}

/// prefactor · ∫ e^{−(i/t)⟨σ,λ⟩}(|λ|/sinh|λ|)^a e^{−c|λ|/tanh|λ|} dλ evaluated at |σ|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalFiber {
    pub a: f64,
    pub c: f64,
    pub prefactor: f64,
    pub t_scale: f64,
}

impl VerticalFiber {
    pub fn evaluate(&self, k: usize, sigma_norm: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
        let e = fiber_transform(k, FiberShape::new(self.a, self.c), sigma_norm / self.t_scale, cfg)?;
        Ok(e.scale(self.prefactor * (-self.c).exp()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn stable_helpers_match_naive() {
        for &x in &[0.05f64, 0.099, 0.1, 0.5, 3.0, 19.9, 20.1, 60.0] {
            assert!((xcoth_m1(x) - (x / x.tanh() - 1.0)).abs() < 1e-13 * (1.0 + xcoth_m1(x)), "x={x}");
            assert!((ln_xcsch(x) - (x / x.sinh()).ln()).abs() < 1e-13 * (1.0 + ln_xcsch(x).abs()), "x={x}");
            assert!((xcsch(x) - x / x.sinh()).abs() < 1e-14, "x={x}");
        }
        assert!((xcoth_m1(1e-8) - 1e-16 / 3.0).abs() < 1e-30);
    }

    #[test]
    fn pure_fiber_at_zero_frequency() {
        // ∫_ℝ (r/sinh r) dr = π²/2
        let cfg = QuadratureConfig::default();
        let e = fiber_transform(1, FiberShape::new(1.0, 0.0), 0.0, &cfg).unwrap();
        assert!((e.value - PI * PI / 2.0).abs() < 1e-11, "{e:?}");
    }

    #[test]
    fn cosine_transform_of_squared_profile() {
        // ∫_ℝ cos(ρr)(r/sinh r)² dr = π²(h coth h − 1)/sinh²h with h = πρ/2
        let cfg = QuadratureConfig::default();
        let rho = 1.3;
        let e = fiber_transform(1, FiberShape::new(2.0, 0.0), rho, &cfg).unwrap();
        let h = PI * rho / 2.0;
        let want = PI * PI * (h / h.tanh() - 1.0) / h.sinh().powi(2);
        assert!((e.value - want).abs() < 1e-10 * want.abs(), "{} vs {want}", e.value);
    }
}
