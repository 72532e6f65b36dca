//! Heuristic estimation of the mixed-partial sup-norm
//! `‖∂²f/∂t∂s‖∞` when the caller supplies neither a certified bound nor an
//! analytic mixed partial.
//!
//! Estimates are upper-bound guesses, not certificates: they are produced by
//! sampling, carry the `Estimated` provenance everywhere they flow, and are
//! never silently upgraded.

use crate::domain::{BivariateFn, Rectangle, SupnormProvenance};
use crate::error::{Error, Result};

/// Default sampling grid.
pub const DEFAULT_GRID: (usize, usize) = (101, 101);

/// Default stencil half-width as a fraction of the shorter side.
pub const DEFAULT_STEP_FRACTION: f64 = 1e-3;

/// Default headroom multiplier applied to the grid maximum.
pub const DEFAULT_INFLATION: f64 = 1.1;

/// A finite-difference sup-norm estimate and how it was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNormEstimate {
    /// Grid maximum of the |cross difference| times `inflation`.
    pub value: f64,
    pub grid: (usize, usize),
    /// Stencil half-width actually used.
    pub step: f64,
    pub inflation: f64,
}

/// Estimates `‖∂²f/∂t∂s‖∞` on `rect` by the centred cross difference
///
/// ```text
/// [f(x+h, y+h) − f(x+h, y−h) − f(x−h, y+h) + f(x−h, y−h)] / (4h²)
/// ```
///
/// evaluated on a `grid.0 × grid.1` lattice of stencil centres. Centres near
/// the boundary are clipped inwards so the whole stencil stays inside the
/// rectangle.
pub fn estimate_mixed_sup(
    f: &BivariateFn,
    rect: &Rectangle,
    grid: (usize, usize),
    h: f64,
    inflation: f64,
) -> Result<SupNormEstimate> {
    if grid.0 < 3 || grid.1 < 3 {
        return Err(Error::InvalidInput(format!(
            "sampling grid must be at least 3 x 3, got {} x {}",
            grid.0, grid.1
        )));
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "stencil half-width must be positive, got {h}"
        )));
    }
    if !inflation.is_finite() || inflation < 1.0 {
        return Err(Error::InvalidInput(format!(
            "inflation must be >= 1, got {inflation}"
        )));
    }
    // clipped centre range; fails when the stencil cannot fit at all
    let (x_lo, x_hi) = (rect.a() + h, rect.b() - h);
    let (y_lo, y_hi) = (rect.c() + h, rect.d() - h);
    if x_lo > x_hi || y_lo > y_hi {
        return Err(Error::StencilOutOfDomain {
            h,
            width: rect.width(),
            height: rect.height(),
        });
    }
    let mut max_abs = 0.0f64;
    for i in 0..grid.0 {
        let x = lattice(x_lo, x_hi, i, grid.0);
        for j in 0..grid.1 {
            let y = lattice(y_lo, y_hi, j, grid.1);
            let cross = f.eval(x + h, y + h)? - f.eval(x + h, y - h)? - f.eval(x - h, y + h)?
                + f.eval(x - h, y - h)?;
            max_abs = max_abs.max((cross / (4.0 * h * h)).abs());
        }
    }
    Ok(SupNormEstimate {
        value: max_abs * inflation,
        grid,
        step: h,
        inflation,
    })
}

/// [`estimate_mixed_sup`] with the default grid, step and inflation.
pub fn estimate_mixed_sup_default(f: &BivariateFn, rect: &Rectangle) -> Result<SupNormEstimate> {
    let h = DEFAULT_STEP_FRACTION * rect.width().min(rect.height());
    estimate_mixed_sup(f, rect, DEFAULT_GRID, h, DEFAULT_INFLATION)
}

/// Grid maximum of `|∂²f/∂t∂s|` using the function's analytic mixed partial
/// (endpoints included). Still only a sample, hence still an estimate.
pub fn grid_max_mixed_partial(
    f: &BivariateFn,
    rect: &Rectangle,
    grid: (usize, usize),
) -> Result<f64> {
    if grid.0 < 2 || grid.1 < 2 {
        return Err(Error::InvalidInput(format!(
            "sampling grid must be at least 2 x 2, got {} x {}",
            grid.0, grid.1
        )));
    }
    let mut max_abs = 0.0f64;
    for i in 0..grid.0 {
        let x = lattice(rect.a(), rect.b(), i, grid.0);
        for j in 0..grid.1 {
            let y = lattice(rect.c(), rect.d(), j, grid.1);
            max_abs = max_abs.max(f.mixed_partial(x, y)?.abs());
        }
    }
    Ok(max_abs)
}

/// Resolves the sup-norm to use for a whole-rectangle certificate:
///
/// 1. a sup-norm attached to the function wins (with its own provenance);
/// 2. otherwise, with an analytic mixed partial available, its grid maximum
///    (estimated);
/// 3. otherwise the finite-difference estimate with default settings
///    (estimated).
pub fn resolve_supnorm(f: &BivariateFn, rect: &Rectangle) -> Result<(f64, SupnormProvenance)> {
    if let Some((value, provenance)) = f.supnorm() {
        return Ok((value, provenance));
    }
    if f.has_mixed_partial() {
        let value = grid_max_mixed_partial(f, rect, DEFAULT_GRID)?;
        return Ok((value, SupnormProvenance::Estimated));
    }
    let est = estimate_mixed_sup_default(f, rect)?;
    Ok((est.value, SupnormProvenance::Estimated))
}

fn lattice(lo: f64, hi: f64, k: usize, count: usize) -> f64 {
    if count == 1 {
        return 0.5 * (lo + hi);
    }
    if k == 0 {
        lo
    } else if k == count - 1 {
        hi
    } else {
        lo + (hi - lo) * (k as f64) / ((count - 1) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_mixed_partial() {
        let f = BivariateFn::new("t*s", |t, s| t * s);
        let est = estimate_mixed_sup(&f, &Rectangle::unit(), (101, 101), 1e-3, 1.0).unwrap();
        assert!((est.value - 1.0).abs() < 1e-6, "estimate {}", est.value);
    }

    #[test]
    fn additive_functions_estimate_to_zero() {
        let f = BivariateFn::new("g+h", |t, s| (3.0 * t).sin() + s.exp());
        let est = estimate_mixed_sup(&f, &Rectangle::unit(), (101, 101), 1e-3, 1.0).unwrap();
        assert!(est.value.abs() < 1e-6, "estimate {}", est.value);
    }

    #[test]
    fn squares_estimate_tracks_clipped_peak() {
        // for t^2 s^2 the cross difference is exactly 4xy, so the grid
        // maximum sits at the clipped corner (1-h, 1-h)
        let f = BivariateFn::new("t^2*s^2", |t, s| t * t * s * s);
        let h = 1e-3;
        let est = estimate_mixed_sup(&f, &Rectangle::unit(), (101, 101), h, 1.0).unwrap();
        let clipped_peak = 4.0 * (1.0 - h) * (1.0 - h);
        assert!(
            (est.value - clipped_peak).abs() < 1e-9,
            "estimate {} vs clipped peak {clipped_peak}",
            est.value
        );
        // within 2% of the true sup-norm 4, the guarantee the defaults make
        assert!((est.value - 4.0).abs() / 4.0 < 0.02);
    }

    #[test]
    fn estimate_within_two_percent_of_true_sup() {
        let cases: Vec<(BivariateFn, f64)> = vec![
            (BivariateFn::new("t*s", |t, s| t * s), 1.0),
            (BivariateFn::new("t^2*s^2", |t, s| t * t * s * s), 4.0),
            (
                BivariateFn::new("sin sin", |t, s| {
                    (std::f64::consts::PI * t).sin() * (std::f64::consts::PI * s).sin()
                }),
                std::f64::consts::PI * std::f64::consts::PI,
            ),
            (
                BivariateFn::new("e^{t+s}", |t, s| (t + s).exp()),
                std::f64::consts::E.powi(2),
            ),
            (
                BivariateFn::new("e^{ts}", |t, s| (t * s).exp()),
                2.0 * std::f64::consts::E,
            ),
            (
                BivariateFn::new("t^3 s^3", |t, s| t.powi(3) * s.powi(3)),
                9.0,
            ),
        ];
        for (f, true_sup) in cases {
            let est = estimate_mixed_sup_default(&f, &Rectangle::unit()).unwrap();
            let pre_inflation = est.value / est.inflation;
            assert!(
                (pre_inflation - true_sup).abs() / true_sup < 0.02,
                "{}: estimate {pre_inflation} vs true {true_sup}",
                f.name()
            );
        }
    }

    #[test]
    fn refinement_is_monotone_up_to_truncation() {
        let f = BivariateFn::new("f", |t, s| (2.0 * t * s).sin() + t * t * s);
        let rect = Rectangle::unit();
        let h = 1e-3;
        let coarse = estimate_mixed_sup(&f, &rect, (51, 51), h, 1.0).unwrap();
        let fine = estimate_mixed_sup(&f, &rect, (101, 101), h, 1.0).unwrap();
        assert!(fine.value >= coarse.value - 10.0 * h * h);
    }

    #[test]
    fn stencil_must_fit() {
        let rect = Rectangle::new(0.0, 0.1, 0.0, 10.0).unwrap();
        let f = BivariateFn::new("f", |t, s| t * s);
        assert!(matches!(
            estimate_mixed_sup(&f, &rect, (11, 11), 0.06, 1.0),
            Err(Error::StencilOutOfDomain { .. })
        ));
    }

    #[test]
    fn resolve_prefers_attached_supnorm() {
        let rect = Rectangle::unit();
        let f = BivariateFn::new("t*s", |t, s| t * s)
            .with_mixed_partial(|_, _| 1.0)
            .with_certified_supnorm(7.0)
            .unwrap();
        let (v, p) = resolve_supnorm(&f, &rect).unwrap();
        assert_eq!(v, 7.0);
        assert!(p.is_certified());

        let g = BivariateFn::new("t*s", |t, s| t * s).with_mixed_partial(|_, _| 1.0);
        let (v, p) = resolve_supnorm(&g, &rect).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(p, SupnormProvenance::Estimated);

        let h = BivariateFn::new("t*s", |t, s| t * s);
        let (v, p) = resolve_supnorm(&h, &rect).unwrap();
        assert!((v - 1.1).abs() < 1e-6); // grid max 1.0 times inflation 1.1
        assert_eq!(p, SupnormProvenance::Estimated);
    }
}
