//! Special functions: Γ, J_ν and ₂F₁, plus the classical closed forms used as oracles.

pub mod bessel;
pub mod gamma;
pub mod hyp2f1;

pub use bessel::bessel_j;
pub use gamma::{gamma, gamma_fn, ln_gamma, recip_gamma, sin_pi, sphere_area};
pub use hyp2f1::{hyp2f1, hyp2f1_pfaff, hyp2f1_series};

use crate::error::Result;

/// Closed form of ∫₀^∞ t^{μ−1} e^{−αt} J_ν(βt) dt.
pub fn gegenbauer_closed_form(nu: f64, mu: f64, alpha: f64, beta: f64) -> Result<f64> {
    let r2 = alpha * alpha + beta * beta;
    let pre = 2f64.powf(-nu) * beta.powf(nu) * gamma(nu + mu)? * recip_gamma(nu + 1.0)
        / r2.powf(0.5 * (nu + mu));
    Ok(pre * hyp2f1(0.5 * (nu + mu), 0.5 * (1.0 - mu + nu), nu + 1.0, beta * beta / r2)?)
}

/// Right-hand side of the Bateman integral, Γ(c)Γ(γ−c)/Γ(γ) · F(α,β;γ;a).
pub fn bateman_closed_form(c: f64, g: f64, alpha: f64, beta: f64, a: f64) -> Result<f64> {
    Ok(gamma(c)? * gamma(g - c)? * recip_gamma(g) * hyp2f1(alpha, beta, g, a)?)
}
