//! Brute-force tensor-product reference integrator.
//!
//! This module exists to check the cubature rule and its certificates, so it
//! deliberately shares nothing with the rule's own assembly path: double
//! integrals are computed by a tensor-product composite Gauss rule with
//! panel doubling until two successive refinements agree.
//!
//! [`reference_kernel_integral`] integrates the kernel-product error
//! representation `∬ p·q·∂²f/∂t∂s`. The kernels switch branches at the two
//! midlines, so the domain is split there into four subrectangles; on each
//! piece the integrand is smooth and Gauss convergence is undamaged.

use crate::domain::{BivariateFn, ParamSet, Rectangle};
use crate::error::{Error, Result};
use crate::quad1d::{gauss_rule, GaussRule};

/// Hard cap on panel-doubling levels (panels per axis go 1, 2, 4, ..., 128).
pub const MAX_LEVELS: usize = 8;

/// Gauss order used on every tensor panel.
const ORACLE_ORDER: usize = 16;

/// Smallest honest tolerance for double-precision refinement differences.
const MIN_TOL: f64 = 1e-14;

/// A reference value with its observed refinement behaviour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    /// Absolute difference of the last two refinement levels.
    pub est_error: f64,
    pub levels_used: usize,
}

/// Tensor-product composite Gauss pass over `rect` with `panels × panels`
/// equal cells. Loop order is fixed so results are bit-reproducible.
fn tensor_pass<G>(g: &G, rect: &Rectangle, rule: &GaussRule, panels: usize) -> Result<f64>
where
    G: Fn(f64, f64) -> Result<f64>,
{
    let pf = panels as f64;
    let (a, b, c, d) = (rect.a(), rect.b(), rect.c(), rect.d());
    let mut total = 0.0;
    for pi in 0..panels {
        let x0 = if pi == 0 {
            a
        } else {
            a + (b - a) * (pi as f64) / pf
        };
        let x1 = if pi + 1 == panels {
            b
        } else {
            a + (b - a) * ((pi + 1) as f64) / pf
        };
        let hx = 0.5 * (x1 - x0);
        let mx = 0.5 * (x0 + x1);
        for pj in 0..panels {
            let y0 = if pj == 0 {
                c
            } else {
                c + (d - c) * (pj as f64) / pf
            };
            let y1 = if pj + 1 == panels {
                d
            } else {
                c + (d - c) * ((pj + 1) as f64) / pf
            };
            let hy = 0.5 * (y1 - y0);
            let my = 0.5 * (y0 + y1);
            let mut acc = 0.0;
            for (ni, wi) in rule.nodes().iter().zip(rule.weights()) {
                let x = mx + hx * ni;
                let mut row = 0.0;
                for (nj, wj) in rule.nodes().iter().zip(rule.weights()) {
                    row += wj * g(x, my + hy * nj)?;
                }
                acc += wi * row;
            }
            total += acc * hx * hy;
        }
    }
    Ok(total)
}

/// Reference double integral of a raw closure over `rect`.
///
/// Panels double per level until two successive values differ by less than
/// `tol`; failing that after [`MAX_LEVELS`] levels is an error that still
/// carries the last value and delta.
pub fn reference_integral_fn<G>(g: G, rect: &Rectangle, tol: f64) -> Result<OracleResult>
where
    G: Fn(f64, f64) -> Result<f64>,
{
    if tol.is_nan() || tol < MIN_TOL {
        return Err(Error::ToleranceTooTight {
            given: tol,
            min: MIN_TOL,
        });
    }
    let rule = gauss_rule(ORACLE_ORDER)?;
    let mut prev: Option<f64> = None;
    let mut last_delta = f64::INFINITY;
    let mut value = 0.0;
    for level in 0..MAX_LEVELS {
        value = tensor_pass(&g, rect, rule, 1 << level)?;
        if let Some(p) = prev {
            last_delta = (value - p).abs();
            if last_delta < tol {
                return Ok(OracleResult {
                    value,
                    est_error: last_delta,
                    levels_used: level + 1,
                });
            }
        }
        prev = Some(value);
    }
    Err(Error::OracleNonConvergent {
        value,
        est_error: last_delta,
        tol,
        levels: MAX_LEVELS,
    })
}

/// Reference double integral of `f` over `rect`.
pub fn reference_integral(f: &BivariateFn, rect: &Rectangle, tol: f64) -> Result<OracleResult> {
    reference_integral_fn(|t, s| f.eval(t, s), rect, tol)
}

/// Reference value of the kernel-product integral `∬ p·q·∂²f/∂t∂s`.
///
/// The domain is split at both midlines into four subrectangles so each
/// piece sees a smooth integrand (`(t−α1)(s−α2)·∂²f`, and so on); each piece
/// runs its own refinement ladder and the four values are summed in fixed
/// order.
pub fn reference_kernel_integral(
    f: &BivariateFn,
    rect: &Rectangle,
    theta: &ParamSet,
    tol: f64,
) -> Result<OracleResult> {
    if !f.has_mixed_partial() {
        return Err(Error::MissingMixedPartial);
    }
    let theta = crate::domain::validate_params(rect, *theta)?;
    let (mt, ms) = (rect.mid_t(), rect.mid_s());
    // (t-range, t-offset, s-range, s-offset) per piece, in the fixed order
    // lower-left, upper-left, lower-right, upper-right
    let pieces = [
        (rect.a(), mt, theta.alpha1, rect.c(), ms, theta.alpha2),
        (rect.a(), mt, theta.alpha1, ms, rect.d(), theta.beta2),
        (mt, rect.b(), theta.beta1, rect.c(), ms, theta.alpha2),
        (mt, rect.b(), theta.beta1, ms, rect.d(), theta.beta2),
    ];
    let mut value = 0.0;
    let mut est_error = 0.0;
    let mut levels_used = 1;
    for (t0, t1, t_off, s0, s1, s_off) in pieces {
        let piece = Rectangle::new(t0, t1, s0, s1)?;
        let res = reference_integral_fn(
            |t, s| Ok((t - t_off) * (s - s_off) * f.mixed_partial(t, s)?),
            &piece,
            tol,
        )?;
        value += res.value;
        est_error += res.est_error;
        levels_used = levels_used.max(res.levels_used);
    }
    Ok(OracleResult {
        value,
        est_error,
        levels_used,
    })
}
