//! Composite Gauss–Legendre line integration.
//!
//! This is plumbing for the rule module: midline and edge integrals are
//! one-dimensional, and the rule's certificate only stays honest if their
//! numerical error is far below it. [`integrate_1d`] therefore runs the
//! composite rule twice, at `panels` and `2 × panels`, and refuses to return
//! a value when the two disagree beyond the allowed tolerance.

use std::sync::OnceLock;

use crate::domain::QuadConfig;
use crate::error::{Error, Result};

/// Largest supported node count per panel.
pub const MAX_ORDER: usize = 64;

/// Absolute floor of the refinement self-check tolerance.
pub const REFINEMENT_FLOOR: f64 = 1e-12;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Nodes in strictly increasing order, symmetric about 0.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights matching [`Self::nodes`]; all positive, summing to 2.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

static RULES: [OnceLock<GaussRule>; MAX_ORDER + 1] = [const { OnceLock::new() }; MAX_ORDER + 1];

/// Returns the Gauss–Legendre rule of the given order (1 ..= 64).
///
/// Rules are computed once by Newton root-finding on the Legendre
/// polynomials (residual driven below 1e-15) and cached for the process
/// lifetime.
pub fn gauss_rule(order: usize) -> Result<&'static GaussRule> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            order,
            max: MAX_ORDER,
        });
    }
    Ok(RULES[order].get_or_init(|| compute_rule(order)))
}

/// Legendre polynomial `P_n` and its derivative at `x`, via the three-term
/// recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // derivative identity; the denominator only vanishes at x = ±1, which is
    // never a root of P_n
    let dp = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn compute_rule(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 1..=n / 2 {
        // Chebyshev-style initial guess for the i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // one polishing step; Newton is quadratic so this lands on the
        // correctly rounded root
        let (p, d) = legendre(n, x);
        x -= p / d;
        let dp = legendre(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - i] = x;
        nodes[i - 1] = -x;
        weights[n - i] = w;
        weights[i - 1] = w;
    }
    if n % 2 == 1 {
        let mid = n / 2;
        let (_, dp) = legendre(n, 0.0);
        nodes[mid] = 0.0;
        weights[mid] = 2.0 / (dp * dp);
    }
    GaussRule {
        order: n,
        nodes,
        weights,
    }
}

/// Single composite pass: `panels` equal panels, `rule.order()` nodes each.
/// Panels and nodes are accumulated left to right so results are
/// reproducible bit for bit.
fn composite_pass<G>(g: &G, a: f64, b: f64, rule: &GaussRule, panels: usize) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let mut total = 0.0;
    let pf = panels as f64;
    for p in 0..panels {
        let x0 = if p == 0 {
            a
        } else {
            a + (b - a) * (p as f64) / pf
        };
        let x1 = if p + 1 == panels {
            b
        } else {
            a + (b - a) * ((p + 1) as f64) / pf
        };
        let half = 0.5 * (x1 - x0);
        let mid = 0.5 * (x0 + x1);
        let mut acc = 0.0;
        for (node, w) in rule.nodes().iter().zip(rule.weights()) {
            acc += w * g(mid + half * node)?;
        }
        total += acc * half;
    }
    Ok(total)
}

/// Integrates `g` over `[a, b]` with the configured composite rule and a
/// refinement self-check at the absolute floor tolerance.
pub fn integrate_1d<G>(g: G, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    integrate_1d_with_tol(g, a, b, cfg, 0.0)
}

/// Like [`integrate_1d`] but the self-check tolerance is coupled to the
/// caller's certified bound: the two passes must agree within
/// `max(1e-12, 1e-3 × context_bound)`, so line-integral error is provably
/// subordinate to the certificate it feeds.
pub fn integrate_1d_with_tol<G>(
    g: G,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
    context_bound: f64,
) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::InvalidInput(format!(
            "integration interval requires finite a < b, got [{a}, {b}]"
        )));
    }
    if cfg.panels == 0 {
        return Err(Error::InvalidConfig {
            reason: "panels must be >= 1",
        });
    }
    let rule = gauss_rule(cfg.gauss_order)?;
    let coarse = composite_pass(&g, a, b, rule, cfg.panels)?;
    let fine = composite_pass(&g, a, b, rule, 2 * cfg.panels)?;
    let tol = REFINEMENT_FLOOR.max(1e-3 * context_bound);
    let delta = (coarse - fine).abs();
    if delta > tol {
        return Err(Error::QuadratureFailure { delta, tol });
    }
    Ok(coarse)
}
