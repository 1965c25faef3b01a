use super::gauss_legendre::GaussLegendre;
use crate::error::{invalid, HtkError, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub panel_degree: usize,
    pub truncation_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_panels: 4096,
            panel_degree: 15,
            truncation_factor: 40.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        if self.max_panels < 16 {
            return Err(invalid("max_panels must be at least 16"));
        }
        if self.panel_degree < 2 {
            return Err(invalid("panel_degree must be at least 2"));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Tighter copy for integrands nested inside an outer quadrature.
    pub fn inner(&self) -> Self {
        QuadratureConfig {
            rel_tol: (self.rel_tol * 1e-2).max(1e-14),
            abs_tol: self.abs_tol * 1e-2,
            ..*self
        }
    }
}

/// Integral value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0, converged: true, evaluations: 0 }
    }

    pub fn scale(self, c: f64) -> Self {
        Estimate { value: self.value * c, error: self.error * c.abs(), ..self }
    }

    pub fn add(self, o: Estimate) -> Self {
        Estimate {
            value: self.value + o.value,
            error: self.error + o.error,
            converged: self.converged && o.converged,
            evaluations: self.evaluations + o.evaluations,
        }
    }

    pub fn map_value(self, f: impl FnOnce(f64) -> f64) -> Self {
        Estimate { value: f(self.value), ..self }
    }

    /// Turns a non-converged estimate into an error.
    pub fn strict(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(HtkError::NonConvergence { value: self.value, error: self.error })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    l1: f64,
    err: f64,
    left: f64,
    right: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.partial_cmp(&o.err).unwrap_or(Ordering::Equal)
    }
}

fn make_panel<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    f: &mut F,
    a: f64,
    b: f64,
    whole: Option<f64>,
    evals: &mut usize,
) -> Panel {
    let n = rule.nodes.len();
    let whole = match whole {
        Some(w) => w,
        None => {
            *evals += n;
            rule.apply(f, a, b).0
        }
    };
    let m = 0.5 * (a + b);
    let (left, l1a) = rule.apply(f, a, m);
    let (right, l1b) = rule.apply(f, m, b);
    *evals += 2 * n;
    let value = left + right;
    let err = (whole - value).abs();
    let err = if err.is_finite() { err } else { f64::INFINITY };
    Panel { a, b, value, l1: l1a + l1b, err, left, right }
}

/// Globally adaptive Gauss–Legendre quadrature over the panels delimited by `breaks`
/// (sorted, at least two entries).
pub fn integrate_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Estimate {
    assert!(breaks.len() >= 2);
    let rule = GaussLegendre::cached(cfg.panel_degree);
    let mut evals = 0usize;
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(make_panel(rule, &mut f, w[0], w[1], None, &mut evals));
        }
    }
    if heap.is_empty() {
        return Estimate::exact(0.0);
    }
    let sums = |h: &BinaryHeap<Panel>| {
        h.iter().fold((0.0, 0.0, 0.0), |(t, e, l), p| (t + p.value, e + p.err, l + p.l1))
    };
    let (mut total, mut err, mut l1) = sums(&heap);
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps % 64 == 0 {
            (total, err, l1) = sums(&heap);
        }
        let tol = (cfg.rel_tol * total.abs()).max(cfg.abs_tol).max(64.0 * f64::EPSILON * l1);
        let converged = err <= tol;
        if converged || heap.len() >= cfg.max_panels {
            let (total, err, _) = sums(&heap);
            return Estimate { value: total, error: err, converged, evaluations: evals };
        }
        let worst = heap.pop().unwrap();
        let m = 0.5 * (worst.a + worst.b);
        if !(worst.err.is_finite()) && (worst.b - worst.a) < 1e-12 * worst.a.abs().max(worst.b.abs()).max(1e-300) {
            heap.push(worst);
            let (total, err, _) = sums(&heap);
            return Estimate { value: total, error: err, converged: false, evaluations: evals };
        }
        if m <= worst.a || m >= worst.b || (worst.b - worst.a) < 1e-15 * worst.a.abs().max(worst.b.abs()) {
            // panel cannot be refined further; freeze it and stop
            heap.push(worst);
            let (total, err, _) = sums(&heap);
            return Estimate { value: total, error: err, converged: err <= tol, evaluations: evals };
        }
        total -= worst.value;
        err -= worst.err;
        l1 -= worst.l1;
        let pa = make_panel(rule, &mut f, worst.a, m, Some(worst.left), &mut evals);
        let pb = make_panel(rule, &mut f, m, worst.b, Some(worst.right), &mut evals);
        total += pa.value + pb.value;
        err += pa.err + pb.err;
        l1 += pa.l1 + pb.l1;
        if !err.is_finite() {
            heap.push(pa);
            heap.push(pb);
            (total, err, l1) = sums(&heap);
            continue;
        }
        heap.push(pa);
        heap.push(pb);
    }
}

/// Adaptive quadrature on [a, b] starting from `panels` equal pieces.
pub fn integrate_interval<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    cfg: &QuadratureConfig,
) -> Estimate {
    let n = panels.max(1);
    let breaks: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    integrate_breaks(f, &breaks, cfg)
}
