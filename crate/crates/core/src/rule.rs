//! The single-cell cubature rule, its boundary terms, an executable identity
//! self-check, and two classical comparison rules.
//!
//! For admissible parameters `θ = (α1, β1, α2, β2)` the rule approximates
//! `∬ f` over `[a,b] × [c,d]` by
//!
//! ```text
//! value = (β2−α2)·∫ f(t, mid_s) dt + (β1−α1)·∫ f(mid_t, s) ds
//!       + ∫ [(α2−c)·f(t,c) + (d−β2)·f(t,d)] dt
//!       + ∫ [(α1−a)·f(a,s) + (b−β1)·f(b,s)] ds
//!       − (β1−α1)(β2−α2)·f(mid_t, mid_s) − H − G
//! ```
//!
//! where `H` weights the four corner values and `G` the four midline edge
//! values. The defect `∬f − value` is exactly the integral of the kernel
//! product against `∂²f/∂t∂s`, which is what [`identity_residual`] verifies
//! numerically and what gives the closed-form certificate in [`crate::bounds`].

use crate::domain::{validate_params, BivariateFn, ParamSet, QuadConfig, Rectangle};
use crate::error::{Error, Result};
use crate::oracle;
use crate::quad1d::integrate_1d_with_tol;

/// The assembled rule value together with its individual terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleTerms {
    /// `(β1−α1)(β2−α2)·f(mid_t, mid_s)`.
    pub midpoint_term: f64,
    /// Corner-value term `H`.
    pub h_term: f64,
    /// Midline edge-value term `G`.
    pub g_term: f64,
    /// Raw midline integrals `(∫ f(t, mid_s) dt, ∫ f(mid_t, s) ds)`.
    pub midline_integrals: (f64, f64),
    /// Weighted edge integrals
    /// `(∫ (α2−c)f(t,c)+(d−β2)f(t,d) dt, ∫ (α1−a)f(a,s)+(b−β1)f(b,s) ds)`.
    pub edge_integrals: (f64, f64),
    /// The assembled cubature value.
    pub value: f64,
}

/// Corner-value term
/// `H = (α1−a)[(α2−c)f(a,c) + (d−β2)f(a,d)] + (b−β1)[(α2−c)f(b,c) + (d−β2)f(b,d)]`.
pub fn corner_term(f: &BivariateFn, rect: &Rectangle, theta: &ParamSet) -> Result<f64> {
    let th = validate_params(rect, *theta)?;
    let (a, b, c, d) = (rect.a(), rect.b(), rect.c(), rect.d());
    let left = (th.alpha2 - c) * f.eval(a, c)? + (d - th.beta2) * f.eval(a, d)?;
    let right = (th.alpha2 - c) * f.eval(b, c)? + (d - th.beta2) * f.eval(b, d)?;
    Ok((th.alpha1 - a) * left + (b - th.beta1) * right)
}

/// Midline edge-value term
/// `G = (β1−α1)[(α2−c)f(mid_t,c) + (d−β2)f(mid_t,d)]
///    + (β2−α2)[(α1−a)f(a,mid_s) + (b−β1)f(b,mid_s)]`.
pub fn midline_term(f: &BivariateFn, rect: &Rectangle, theta: &ParamSet) -> Result<f64> {
    let th = validate_params(rect, *theta)?;
    let (a, b, c, d) = (rect.a(), rect.b(), rect.c(), rect.d());
    let (mt, ms) = (rect.mid_t(), rect.mid_s());
    let horiz = (th.alpha2 - c) * f.eval(mt, c)? + (d - th.beta2) * f.eval(mt, d)?;
    let vert = (th.alpha1 - a) * f.eval(a, ms)? + (b - th.beta1) * f.eval(b, ms)?;
    Ok((th.beta1 - th.alpha1) * horiz + (th.beta2 - th.alpha2) * vert)
}

/// Applies the single-cell rule with the default line-integral tolerance
/// floor (1e-12 refinement agreement).
pub fn cubature_value(
    f: &BivariateFn,
    rect: &Rectangle,
    theta: &ParamSet,
    cfg: &QuadConfig,
) -> Result<RuleTerms> {
    cubature_value_with_bound(f, rect, theta, cfg, 0.0)
}

/// Like [`cubature_value`], with the line-integral refinement check coupled
/// to the certified bound this value will be reported against: the line
/// integrals must converge within `max(1e-12, 1e-3 × certified_bound)`.
pub fn cubature_value_with_bound(
    f: &BivariateFn,
    rect: &Rectangle,
    theta: &ParamSet,
    cfg: &QuadConfig,
    certified_bound: f64,
) -> Result<RuleTerms> {
    let th = validate_params(rect, *theta)?;
    let (a, b, c, d) = (rect.a(), rect.b(), rect.c(), rect.d());
    let (mt, ms) = (rect.mid_t(), rect.mid_s());

    let midline_t = integrate_1d_with_tol(|t| f.eval(t, ms), a, b, cfg, certified_bound)?;
    let midline_s = integrate_1d_with_tol(|s| f.eval(mt, s), c, d, cfg, certified_bound)?;
    let edge_t = integrate_1d_with_tol(
        |t| Ok((th.alpha2 - c) * f.eval(t, c)? + (d - th.beta2) * f.eval(t, d)?),
        a,
        b,
        cfg,
        certified_bound,
    )?;
    let edge_s = integrate_1d_with_tol(
        |s| Ok((th.alpha1 - a) * f.eval(a, s)? + (b - th.beta1) * f.eval(b, s)?),
        c,
        d,
        cfg,
        certified_bound,
    )?;

    let midpoint_term = (th.beta1 - th.alpha1) * (th.beta2 - th.alpha2) * f.eval(mt, ms)?;
    let h_term = corner_term(f, rect, &th)?;
    let g_term = midline_term(f, rect, &th)?;

    let value =
        (th.beta2 - th.alpha2) * midline_t + (th.beta1 - th.alpha1) * midline_s + edge_t + edge_s
            - midpoint_term
            - h_term
            - g_term;

    Ok(RuleTerms {
        midpoint_term,
        h_term,
        g_term,
        midline_integrals: (midline_t, midline_s),
        edge_integrals: (edge_t, edge_s),
        value,
    })
}

/// Tolerance handed to the reference integrator inside
/// [`identity_residual`].
const IDENTITY_ORACLE_TOL: f64 = 1e-12;

/// Numerically verifies the error representation behind the rule:
/// returns `|∬ p·q·∂²f/∂t∂s − (∬f − value)|`, both double integrals taken
/// by the independent reference integrator. Near zero for every admissible
/// `θ` and every function with a bounded mixed partial.
pub fn identity_residual(
    f: &BivariateFn,
    rect: &Rectangle,
    theta: &ParamSet,
    cfg: &QuadConfig,
) -> Result<f64> {
    let kernel_side = oracle::reference_kernel_integral(f, rect, theta, IDENTITY_ORACLE_TOL)?;
    let integral = oracle::reference_integral(f, rect, IDENTITY_ORACLE_TOL)?;
    let terms = cubature_value(f, rect, theta, cfg)?;
    Ok((kernel_side.value - (integral.value - terms.value)).abs())
}

/// The classical point-anchored comparison rule for double integrals
/// (Barnett–Dragomir): approximates `∬ f` by
/// `(b−a)·∫ f(x,t) dt + (d−c)·∫ f(s,y) ds − (b−a)(d−c)·f(x,y)`.
///
/// This is the sign arrangement that is exact for constants; see
/// [`crate::bounds::barnett_dragomir_bound`] for its certificate.
pub fn barnett_dragomir_value(
    f: &BivariateFn,
    rect: &Rectangle,
    x: f64,
    y: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    if !rect.contains(x, y) {
        return Err(point_out_of_domain(rect, x, y));
    }
    let vertical = integrate_1d_with_tol(|t| f.eval(x, t), rect.c(), rect.d(), cfg, 0.0)?;
    let horizontal = integrate_1d_with_tol(|s| f.eval(s, y), rect.a(), rect.b(), cfg, 0.0)?;
    Ok(rect.width() * vertical + rect.height() * horizontal - rect.area() * f.eval(x, y)?)
}

fn point_out_of_domain(rect: &Rectangle, x: f64, y: f64) -> Error {
    if !(rect.a() <= x && x <= rect.b()) {
        Error::OutOfDomain {
            name: "x",
            value: x,
            lo: rect.a(),
            hi: rect.b(),
        }
    } else {
        Error::OutOfDomain {
            name: "y",
            value: y,
            lo: rect.c(),
            hi: rect.d(),
        }
    }
}

/// Length-scaled one-dimensional Ostrowski pair: approximates `∫ g` over
/// `[a, b]` by `(b−a)·g(x)` and returns that value together with the
/// certified ceiling
///
/// ```text
/// [1/4 + (x − (a+b)/2)² / (b−a)²] · (b−a)² · sup|g'|
/// ```
///
/// so `|∫g − value| ≤ bound`. The bound is minimal at the midpoint, where it
/// equals `(b−a)²·sup|g'|/4`.
pub fn ostrowski_1d<G>(g: G, a: f64, b: f64, x: f64, sup_deriv: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::InvalidInput(format!(
            "interval requires finite a < b, got [{a}, {b}]"
        )));
    }
    if !(a <= x && x <= b) {
        return Err(Error::OutOfDomain {
            name: "x",
            value: x,
            lo: a,
            hi: b,
        });
    }
    if !sup_deriv.is_finite() || sup_deriv < 0.0 {
        return Err(Error::InvalidInput(format!(
            "derivative sup bound must be a finite nonnegative real, got {sup_deriv}"
        )));
    }
    let len = b - a;
    let offset = x - 0.5 * (a + b);
    let value = len * g(x)?;
    let bound = (0.25 + offset * offset / (len * len)) * len * len * sup_deriv;
    Ok((value, bound))
}
