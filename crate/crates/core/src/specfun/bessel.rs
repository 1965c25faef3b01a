//! Bessel function of the first kind J_ν(x) for real ν ≥ 0, x ≥ 0.

use super::gamma::{ln_gamma, recip_gamma};
use crate::error::{invalid, Result};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Evaluation branch picked by [`bessel_j`]; exposed for overlap tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselBranch {
    Series,
    Miller,
    Hankel,
}

pub fn branch_for(nu: f64, x: f64) -> BesselBranch {
    if x < 12.0 || 0.25 * x * x < nu + 1.0 {
        BesselBranch::Series
    } else if x >= 25.0 + 0.5 * nu * nu {
        BesselBranch::Hankel
    } else {
        BesselBranch::Miller
    }
}

pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !(x >= 0.0) || !x.is_finite() {
        return Err(invalid(format!("bessel_j needs nu >= 0, x >= 0 (nu={nu}, x={x})")));
    }
    Ok(match branch_for(nu, x) {
        BesselBranch::Series => j_series(nu, x),
        BesselBranch::Miller => j_miller(nu, x),
        BesselBranch::Hankel => j_hankel(nu, x),
    })
}

/// Ascending series Σ (−x²/4)^j / (j! Γ(ν+j+1)) · (x/2)^ν.
pub fn j_series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let lead = if nu + 1.0 > 150.0 {
        (nu * half.ln() - ln_gamma(nu + 1.0).unwrap_or(f64::INFINITY)).exp()
    } else {
        half.powf(nu) * recip_gamma(nu + 1.0)
    };
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..500 {
        let jf = j as f64;
        term *= q / (jf * (nu + jf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Hankel asymptotic expansion for x ≫ ν².
pub fn j_hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() > last {
            break;
        }
        last = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let phase = nu * FRAC_PI_2 + FRAC_PI_4;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cw = cx * cp + sx * sp;
    let sw = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p * cw - q * sw)
}

/// Miller backward recurrence, normalised with the Neumann sum
/// (x/2)^ν / Γ(ν+1) = Σ_k c_k J_{ν+2k}(x).
pub fn j_miller(nu: f64, x: f64) -> f64 {
    let start = (nu + x + 40.0 + 2.0 * (40.0 * x).sqrt()).ceil() as usize;
    // orders nu + n for n = start..0
    let mut jp1 = 0.0;
    let mut j = 1e-300;
    let mut sum = 0.0;
    let j_at_nu;
    let coeff = |n: usize| -> f64 {
        // c_k for order nu + 2k, k = n/2
        let k = n / 2;
        if k == 0 {
            return 1.0;
        }
        let mut c = (nu + 2.0 * k as f64) / k as f64;
        for i in 1..k {
            c *= (nu + i as f64) / i as f64;
        }
        c
    };
    let mut n = start;
    loop {
        if n % 2 == 0 {
            sum += coeff(n) * j;
        }
        if n == 0 {
            j_at_nu = j;
            break;
        }
        let order = nu + n as f64;
        let jm1 = 2.0 * order / x * j - jp1;
        jp1 = j;
        j = jm1;
        n -= 1;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            sum *= 1e-250;
        }
    }
    let target = if nu + 1.0 > 150.0 {
        (nu * (0.5 * x).ln() - ln_gamma(nu + 1.0).unwrap_or(f64::INFINITY)).exp()
    } else {
        (0.5 * x).powf(nu) * recip_gamma(nu + 1.0)
    };
    j_at_nu * target / sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(2.0, 0.0).unwrap(), 0.0);
        let v = bessel_j(0.5, FRAC_PI_2).unwrap();
        assert!(rel(v, 2.0 / PI) < 1e-14);
    }

    #[test]
    fn half_integer_closed_form_all_branches() {
        for &x in &[0.3, 5.0, 13.0, 40.0, 120.0, 199.0] {
            let want = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x).unwrap();
            assert!((got - want).abs() < 1e-12 * (2.0 / (PI * x)).sqrt(), "x={x}");
            let want15 = (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos());
            let got15 = bessel_j(1.5, x).unwrap();
            assert!((got15 - want15).abs() < 1e-12 * (2.0 / (PI * x)).sqrt(), "x={x}");
        }
    }

    #[test]
    fn frozen_reference_values() {
        // mpmath besselj at 30 digits
        let cases = [
            (0.0, 1.0, 0.765_197_686_557_966_55),
            (1.3, 2.0, 0.536_739_419_989_952_96),
            (0.0, 50.0, 0.055_812_327_669_251_815),
            (2.5, 7.3, -0.300_849_431_587_499_81),
            (10.0, 30.0, -0.129_876_893_998_588_77),
            (30.0, 45.0, 0.045_799_309_554_040_956),
            (30.0, 200.0, -0.052_122_279_029_882_832),
            (7.7, 120.0, 0.062_105_518_067_179_873),
            (0.5, 150.0, -0.046_572_055_895_600_108),
            (20.0, 21.0, 0.214_525_963_271_686_65),
            (15.2, 80.0, 0.087_522_139_224_292_471),
            (0.0, 199.9, -0.020_783_067_565_633_879),
            (1.0, 12.5, -0.165_483_804_614_759_72),
            (25.0, 140.0, -0.005_440_007_044_578_814_1),
        ];
        for (nu, x, want) in cases {
            let got = bessel_j(nu, x).unwrap();
            assert!(rel(got, want) < 1e-10, "nu={nu} x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn branches_agree_near_switchovers() {
        for &nu in &[0.0, 0.5, 1.3, 4.0, 9.5] {
            for &x in &[12.0, 14.0, 25.0 + 0.5 * nu * nu, 30.0 + 0.5 * nu * nu] {
                let m = j_miller(nu, x);
                let scale = (2.0 / (PI * x)).sqrt();
                if x < 15.0 {
                    assert!((j_series(nu, x) - m).abs() < 1e-11 * scale, "series/miller nu={nu} x={x}");
                } else {
                    assert!((j_hankel(nu, x) - m).abs() < 1e-11 * scale, "hankel/miller nu={nu} x={x}");
                }
            }
        }
    }
}
