//! Time integrals ∫₀^∞ t^{β−1} K(g, t) dt of kernels off the pole.

use crate::error::{HtkError, Result};
use crate::quadrature::{integrate_time_power, Estimate, QuadratureConfig, TimeWindow};

/// Solves E = target + power·ln(4E).
fn small_time_exponent(target: f64, power: f64) -> f64 {
    let mut e = target.max(1.0);
    for _ in 0..50 {
        e = target + power * (4.0 * e).ln().max(0.0);
    }
    e
}

/// Window for t^{β−1}K(t) when K(t) ≲ t^{−P} e^{−N²/(4t)} for small t and K(t) ~ t^{−P} for
/// large t; `gauge_sq` is N².
pub fn kernel_window(beta: f64, power: f64, gauge_sq: f64, cfg: &QuadratureConfig) -> TimeWindow {
    let upper = power - beta;
    let center = gauge_sq / (4.0 * upper.max(1.0));
    let e = small_time_exponent(cfg.truncation_factor + 10.0, power + 2.0);
    TimeWindow::new(center, 1.0, upper).with_t_min(gauge_sq / (4.0 * e))
}

/// ∫₀^∞ t^{β−1} K(t) dt; errors raised by K abort the integral.
pub fn kernel_time_integral<F: FnMut(f64) -> Result<f64>>(
    beta: f64,
    mut kernel: F,
    power: f64,
    gauge_sq: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(power - beta > 0.0) {
        return Err(HtkError::InvalidArgument(format!(
            "time integral diverges at infinity (P = {power}, β = {beta})"
        )));
    }
    if !(gauge_sq > 0.0) {
        return Err(HtkError::PoleAtIdentity);
    }
    let window = kernel_window(beta, power, gauge_sq, cfg);
    let mut failure = None;
    let e = integrate_time_power(
        beta,
        |t| match kernel(t) {
            Ok(v) => v,
            Err(err) => {
                failure.get_or_insert(err);
                0.0
            }
        },
        window,
        cfg,
    );
    match failure {
        Some(err) => Err(err),
        None => Ok(e),
    }
}
