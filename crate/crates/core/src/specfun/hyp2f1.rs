//! Gauss hypergeometric F(α, β; γ; x) for real parameters and x < 1.

use super::gamma::{gamma, recip_gamma};
use crate::error::{HtkError, Result};

const SERIES_CAP: usize = 10_000;

fn check_gamma_param(c: f64) -> Result<()> {
    if c <= 0.0 && c == c.floor() {
        return Err(HtkError::ParameterPole(format!(
            "third parameter {c} is a non-positive integer"
        )));
    }
    Ok(())
}

/// Plain Maclaurin series; `None` when it fails to settle within the cap.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64) -> Option<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term == 0.0 || term.abs() < 1e-16 * sum.abs() {
            return Some(sum);
        }
    }
    None
}

fn near_integer(v: f64) -> bool {
    (v - v.round()).abs() < 1e-9
}

/// Connection formula around x = 1, valid when γ − α − β is not an integer.
fn one_minus_x(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let w = 1.0 - x;
    let d = c - a - b;
    let g_c = gamma(c)?;
    let f1 = hyp2f1_series(a, b, 1.0 - d, w).ok_or(HtkError::NonConvergence {
        value: f64::NAN,
        error: f64::NAN,
    })?;
    let f2 = hyp2f1_series(c - a, c - b, 1.0 + d, w).ok_or(HtkError::NonConvergence {
        value: f64::NAN,
        error: f64::NAN,
    })?;
    let t1 = g_c * gamma(d)? * recip_gamma(c - a) * recip_gamma(c - b) * f1;
    let t2 = g_c * gamma(-d)? * recip_gamma(a) * recip_gamma(b) * w.powf(d) * f2;
    Ok(t1 + t2)
}

fn on_unit_interval(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if x <= 0.6 || near_integer(c - a - b) {
        hyp2f1_series(a, b, c, x).ok_or(HtkError::NonConvergence {
            value: f64::NAN,
            error: f64::NAN,
        })
    } else {
        one_minus_x(a, b, c, x)
    }
}

/// Pfaff transformation: F(α,β;γ;x) = (1−x)^{−α} F(α, γ−β; γ; x/(x−1)).
pub fn hyp2f1_pfaff(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    check_gamma_param(c)?;
    let w = x / (x - 1.0);
    Ok((1.0 - x).powf(-a) * on_unit_interval(a, c - b, c, w)?)
}

pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    check_gamma_param(c)?;
    if !(x < 1.0) {
        return Err(crate::error::invalid(format!("hyp2f1 needs x < 1, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < 0.0 {
        hyp2f1_pfaff(a, b, c, x)
    } else {
        on_unit_interval(a, b, c, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        assert_eq!(hyp2f1(1.3, 2.2, 0.7, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn one_f_zero_reduction() {
        let v = hyp2f1(2.3, 1.1, 1.1, -0.5).unwrap();
        let w = 1.5f64.powf(-2.3);
        assert!((v - w).abs() / w < 1e-13);
        let v = hyp2f1(0.7, 2.0, 2.0, -40.0).unwrap();
        let w = 41f64.powf(-0.7);
        assert!((v - w).abs() / w < 1e-12);
    }

    #[test]
    fn pfaff_relation_at_minus_three() {
        let (a, b, c, u) = (0.8, 1.4, 2.2, -3.0);
        let lhs = hyp2f1(a, b, c, u).unwrap();
        let rhs = (1.0f64 - u).powf(-a) * hyp2f1(a, c - b, c, u / (u - 1.0)).unwrap();
        assert!((lhs - rhs).abs() / rhs.abs() < 1e-11);
    }

    #[test]
    fn elementary_closed_forms() {
        // F(1,1;2;x) = −ln(1−x)/x
        for &x in &[-20.0, -0.7, 0.3, 0.75, 0.95] {
            let v = hyp2f1(1.0, 1.0, 2.0, x).unwrap();
            let w = -(1.0f64 - x).ln() / x;
            assert!((v - w).abs() / w < 1e-11, "x={x}");
        }
        // F(1/2,1;3/2;−x²) = atan(x)/x
        for &x in &[0.5f64, 2.0, 30.0] {
            let v = hyp2f1(0.5, 1.0, 1.5, -x * x).unwrap();
            let w = x.atan() / x;
            assert!((v - w).abs() / w < 1e-11, "x={x}");
        }
    }

    #[test]
    fn parameter_pole() {
        assert!(matches!(hyp2f1(1.0, 1.0, -2.0, 0.1), Err(HtkError::ParameterPole(_))));
    }

    #[test]
    fn series_and_pfaff_agree_on_overlap() {
        for i in 1..20 {
            let x = -(i as f64) / 20.0;
            let s = hyp2f1_series(0.9, 1.7, 2.4, x).unwrap();
            let p = hyp2f1_pfaff(0.9, 1.7, 2.4, x).unwrap();
            assert!((s - p).abs() / s.abs() < 1e-11, "x={x}");
        }
    }
}
