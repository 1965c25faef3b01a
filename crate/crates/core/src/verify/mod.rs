//! Named verification checks. Each check computes one identity two independent ways (or
//! against a closed form) and reports the measured error against its tolerance.

mod brute;
mod fracops_checks;
mod fundsol_checks;
mod kernel_checks;
mod pde;
mod special;

pub use brute::{brute_force_convolution, KernelTable};
pub use pde::{bg_residual, elliptic_residual, parabolic_residual, Residual};

use crate::error::{HtkError, Result};
use crate::group::{GroupDescriptor, HTypeGroup};
use crate::quadrature::QuadratureConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::time::Instant;

pub type Params = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub group: GroupDescriptor,
    pub parameters: Params,
    pub measured_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub wall_time: f64,
    pub notes: String,
}

impl CheckReport {
    pub fn to_json_line(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        // JSON has no infinity; failed evaluations carry a null error
        if !self.measured_error.is_finite() {
            v["measured_error"] = Value::Null;
        }
        v.to_string()
    }
}

/// Which groups a check runs on inside a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// once per requested group
    PerGroup,
    /// group-independent; runs once, against the first requested group
    GroupFree,
    /// always on heisenberg(1)
    Heisenberg1,
}

/// What a check hands back before timing and tolerance scaling.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub measured_error: f64,
    pub tolerance: f64,
    pub notes: String,
    pub parameters: Params,
}

type CheckFn = fn(&HTypeGroup, &Params, &QuadratureConfig) -> Result<Outcome>;

pub struct CheckSpec {
    pub name: &'static str,
    pub scope: Scope,
    pub summary: &'static str,
    run: CheckFn,
}

macro_rules! check {
    ($name:literal, $scope:ident, $summary:literal, $f:path) => {
        CheckSpec { name: $name, scope: Scope::$scope, summary: $summary, run: $f }
    };
}

static REGISTRY: &[CheckSpec] = &[
    check!("approx_identity", PerGroup, "P_(±s),t u → u as t → 0, monotonically along t = 2^-j", kernel_checks::approx_identity),
    check!("balakrishnan_methods", PerGroup, "difference-quotient and derivative forms of L^s agree", fracops_checks::balakrishnan_methods),
    check!("bateman", GroupFree, "Bateman integral against its closed form", special::bateman),
    check!("beta_identity", GroupFree, "∫ρ^(s-1)/(1+ρ) dρ = Γ(s)Γ(1-s)", special::beta_identity),
    check!("change_of_variables", GroupFree, "(t,τ) → (t+τ, t/τ) on a test integrand", special::change_of_variables),
    check!("conformal_closed_form", PerGroup, "t-integral of K_(s) against C_(s) N^(2s-Q)", fundsol_checks::conformal_closed_form),
    check!("convolution_lemma", PerGroup, "fiber convolution K_(-s) ⋆ K_(s) = K_(-s,s)", kernel_checks::convolution_lemma),
    check!("convolution_lemma_brute_force", Heisenberg1, "3-D quadrature of K_(-s) ⋆ K_(s) against K_(-s,s)", brute::convolution_lemma_brute_force),
    check!("decay_at_infinity", PerGroup, "P_(±s),t u at t = 1e3 against t = 1", kernel_checks::decay_at_infinity),
    check!("dn_vs_balakrishnan", PerGroup, "extrapolated Dirichlet-to-Neumann limit against L^s", fracops_checks::dn_vs_balakrishnan),
    check!("duplication", GroupFree, "Legendre duplication formula on seeded samples", special::duplication),
    check!("folland_constant_resolution", PerGroup, "∫p dt at N = 1 against the two candidate constants", fundsol_checks::folland_constant_resolution),
    check!("gauge_symmetry_breaking", PerGroup, "E^(s) varies and E_(s) is constant on the unit gauge sphere", fundsol_checks::gauge_symmetry_breaking),
    check!("gegenbauer", GroupFree, "Gegenbauer integral against its closed form", special::gegenbauer),
    check!("homogeneity", PerGroup, "dilation behaviour of p, E_(s), E^(s) and E^(-s)", fundsol_checks::homogeneity),
    check!("hyp1f0", GroupFree, "2F1(a, b; b; x) = (1-x)^-a", special::hyp1f0),
    check!("intertwining", GroupFree, "y^2s intertwines the Bessel operators of orders s and -s", pde::intertwining),
    check!("mass_conservation", PerGroup, "∫(p(t+t0) - p(t0)) dg = 0 on a fixed grid", kernel_checks::mass_conservation),
    check!("mass_one", PerGroup, "unit mass of p, K_(s), K_(-s)", kernel_checks::mass_one),
    check!("monster", GroupFree, "the cancellation integral A(s, μ) vanishes", special::monster),
    check!("nonconformal_two_method", PerGroup, "direct t-integral of p against the hypergeometric representation", fundsol_checks::nonconformal_two_method),
    check!("pde_residual_bg", PerGroup, "Baouendi–Grushin heat operator on its kernel", pde::pde_residual_bg),
    check!("pde_residual_elliptic", PerGroup, "conformal extension operator on e_(±s) and Q_(s)", pde::pde_residual_elliptic),
    check!("pde_residual_parabolic", PerGroup, "parabolic extension operators on q_(±s) and P_(s)", pde::pde_residual_parabolic),
    check!("pfaff", GroupFree, "Pfaff transformation of 2F1", special::pfaff),
    check!("poisson_norm_conformal", PerGroup, "unit mass of the conformal elliptic Poisson kernel", kernel_checks::poisson_norm_conformal),
    check!("poisson_norm_elliptic", PerGroup, "unit mass of the subordinated Poisson kernel", kernel_checks::poisson_norm_elliptic),
    check!("poisson_norm_parabolic", PerGroup, "unit space-time mass of P^(s) and the constant discrepancy", kernel_checks::poisson_norm_parabolic),
    check!("restriction_relation", PerGroup, "(4πt)^(1-s) q_(s)(g,t,0) = K_(s)(g,t)", kernel_checks::restriction_relation),
    check!("semigroup", PerGroup, "p(t) ⋆ p(τ) = p(t+τ) by fiber convolution", kernel_checks::semigroup),
    check!("thick_closed_form", PerGroup, "t-integral of q_(±s) against the closed form", fundsol_checks::thick_closed_form),
];

/// All registered checks, sorted by name.
pub fn registry() -> &'static [CheckSpec] {
    REGISTRY
}

pub fn find_check(name: &str) -> Result<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.name == name).ok_or_else(|| HtkError::UnknownCheck(name.to_string()))
}

pub fn check_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}

/// Runs one check. Evaluation failures become failed reports; only an unknown name is an
/// error. `params` may carry "tolerance" (absolute override) or "tolerance_scale".
pub fn run_check(name: &str, group: &HTypeGroup, params: &Params, cfg: &QuadratureConfig) -> Result<CheckReport> {
    let spec = find_check(name)?;
    let start = Instant::now();
    let result = (spec.run)(group, params, cfg);
    let wall_time = start.elapsed().as_secs_f64();
    let scale = params.get("tolerance_scale").and_then(Value::as_f64).unwrap_or(1.0);
    let (measured_error, base_tol, notes, mut parameters) = match result {
        Ok(o) => (o.measured_error, o.tolerance, o.notes, o.parameters),
        Err(e) => (f64::INFINITY, f64::NAN, format!("evaluation failed: {e}"), Params::new()),
    };
    let tolerance = params.get("tolerance").and_then(Value::as_f64).unwrap_or(base_tol * scale);
    for (k, v) in params {
        parameters.entry(k.clone()).or_insert_with(|| v.clone());
    }
    Ok(CheckReport {
        name: name.to_string(),
        group: group.descriptor(),
        parameters,
        measured_error,
        tolerance,
        passed: measured_error <= tolerance,
        wall_time,
        notes,
    })
}

/// Which checks a suite runs.
#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    All,
    Names(Vec<String>),
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub reports: Vec<CheckReport>,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// multiplies every check's tolerance
    pub tolerance_scale: f64,
    /// seed for the sampled checks; each check has its own default otherwise
    pub seed: Option<u64>,
    /// spread checks over the rayon pool; the output order does not change
    pub parallel: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { tolerance_scale: 1.0, seed: None, parallel: false }
    }
}

/// Runs the selected checks on the given groups. Reports are ordered by check name, then
/// by the order of `groups`.
pub fn run_suite(selection: &Selection, groups: &[HTypeGroup], cfg: &QuadratureConfig, options: &SuiteOptions) -> Result<SuiteResult> {
    let tolerance_scale = options.tolerance_scale;
    if groups.is_empty() {
        return Err(crate::error::invalid("a suite needs at least one group"));
    }
    if !(tolerance_scale > 0.0) {
        return Err(crate::error::invalid("tolerance scale must be positive"));
    }
    let mut specs: Vec<&CheckSpec> = match selection {
        Selection::All => REGISTRY.iter().collect(),
        Selection::Names(names) => names.iter().map(|n| find_check(n)).collect::<Result<_>>()?,
    };
    specs.sort_by_key(|c| c.name);
    specs.dedup_by_key(|c| c.name);
    let h1 = HTypeGroup::heisenberg(1);
    let mut jobs: Vec<(&CheckSpec, HTypeGroup)> = Vec::new();
    for spec in specs {
        match spec.scope {
            Scope::PerGroup => jobs.extend(groups.iter().map(|g| (spec, g.clone()))),
            Scope::GroupFree => jobs.push((spec, groups[0].clone())),
            Scope::Heisenberg1 => jobs.push((spec, h1.clone())),
        }
    }
    let mut params = Params::new();
    if tolerance_scale != 1.0 {
        params.insert("tolerance_scale".into(), Value::from(tolerance_scale));
    }
    if let Some(seed) = options.seed {
        params.insert("seed".into(), Value::from(seed));
    }
    let run = |(spec, g): &(&CheckSpec, HTypeGroup)| run_check(spec.name, g, &params, cfg);
    let reports: Vec<CheckReport> = if options.parallel {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect::<Result<_>>()?
    } else {
        jobs.iter().map(run).collect::<Result<_>>()?
    };
    let all_passed = reports.iter().all(|r| r.passed);
    Ok(SuiteResult { reports, all_passed })
}

// parameter helpers shared by the checks

fn f64_param(params: &Params, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v.as_f64().ok_or_else(|| crate::error::invalid(format!("parameter `{key}` must be a number"))),
    }
}

fn list_param(params: &Params, key: &str, default: &[f64]) -> Result<Vec<f64>> {
    match params.get(key) {
        None => Ok(default.to_vec()),
        Some(Value::Array(a)) => a
            .iter()
            .map(|v| v.as_f64().ok_or_else(|| crate::error::invalid(format!("parameter `{key}` must hold numbers"))))
            .collect(),
        Some(v) => v.as_f64().map(|x| vec![x]).ok_or_else(|| crate::error::invalid(format!("parameter `{key}` must be a list"))),
    }
}

fn rng(params: &Params) -> Result<ChaCha8Rng> {
    let seed = match params.get("seed") {
        None => 7,
        Some(v) => v.as_u64().ok_or_else(|| crate::error::invalid("parameter `seed` must be a non-negative integer"))?,
    };
    Ok(ChaCha8Rng::seed_from_u64(seed))
}

fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

/// Off-pole test points (|z|, |σ|), none with z = 0.
const POINTS: [(f64, f64); 5] = [(1.0, 0.0), (0.5, 0.3), (1.2, 0.8), (0.3, 1.0), (2.0, 0.1)];

/// Kernel evaluations with a purely relative target; tiny kernel values in tails would
/// otherwise be resolved only to the absolute floor.
fn kernel_cfg(cfg: &QuadratureConfig) -> QuadratureConfig {
    cfg.with_abs_tol(1e-300)
}

fn outcome(measured_error: f64, tolerance: f64, notes: impl Into<String>, parameters: Params) -> Outcome {
    Outcome { measured_error, tolerance, notes: notes.into(), parameters }
}

fn record(p: &mut Params, key: &str, value: impl Serialize) {
    p.insert(key.to_string(), serde_json::to_value(value).expect("parameter serializes"));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_sorted_and_complete() {
        let names = check_names();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for required in [
            "mass_one", "semigroup", "monster", "beta_identity", "convolution_lemma", "convolution_lemma_brute_force",
            "conformal_closed_form", "nonconformal_two_method", "folland_constant_resolution", "poisson_norm_parabolic",
            "poisson_norm_elliptic", "poisson_norm_conformal", "thick_closed_form", "pde_residual_parabolic",
            "pde_residual_elliptic", "pde_residual_bg", "homogeneity", "approx_identity", "decay_at_infinity",
            "dn_vs_balakrishnan", "gegenbauer", "bateman", "duplication", "restriction_relation",
        ] {
            assert!(names.contains(&required), "{required}");
        }
    }

    #[test]
    fn unknown_name() {
        let g = HTypeGroup::heisenberg(1);
        let e = run_check("nonexistent", &g, &Params::new(), &QuadratureConfig::default());
        assert_eq!(e.unwrap_err(), HtkError::UnknownCheck("nonexistent".into()));
    }

    #[test]
    fn monster_report_and_suite_cardinality() {
        let g = HTypeGroup::heisenberg(1);
        let cfg = QuadratureConfig::default();
        let r = run_check("monster", &g, &Params::new(), &cfg).unwrap();
        assert!(r.passed && r.measured_error < 1e-10, "{r:?}");
        let sel = Selection::Names(vec!["monster".into(), "beta_identity".into()]);
        let suite = run_suite(&sel, &[g.clone(), HTypeGroup::quaternionic()], &cfg, &SuiteOptions::default()).unwrap();
        assert_eq!(suite.reports.len(), 2);
        assert_eq!(suite.reports[0].name, "beta_identity");
        assert!(suite.all_passed);
        let strict = run_suite(&sel, &[g], &cfg, &SuiteOptions { tolerance_scale: 1e-12, ..Default::default() }).unwrap();
        assert!(!strict.all_passed);
    }

    #[test]
    fn errors_become_failed_reports() {
        let g = HTypeGroup::heisenberg(1);
        let mut p = Params::new();
        p.insert("s".into(), Value::from(1.5));
        let r = run_check("dn_vs_balakrishnan", &g, &p, &QuadratureConfig::default()).unwrap();
        assert!(!r.passed && r.measured_error.is_infinite());
        assert!(r.notes.contains("outside"), "{}", r.notes);
        let line = r.to_json_line();
        let back: Value = serde_json::from_str(&line).unwrap();
        assert!(back["measured_error"].is_null());
    }
}
