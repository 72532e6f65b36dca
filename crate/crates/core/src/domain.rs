//! Shared domain types: rectangles, rule parameters, integrand handles,
//! quadrature configuration and certified results.
//!
//! Everything here is immutable after construction and cheap to copy or
//! clone, so values can be shared freely between threads.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Axis-aligned integration domain `[a, b] × [c, d]`.
///
/// Construction rejects `a >= b`, `c >= d` and non-finite corners, so every
/// per-cell bound formula downstream stays division-safe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Rectangle {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidRectangle {
                a,
                b,
                c,
                d,
                reason: "all four limits must be finite",
            });
        }
        if a >= b {
            return Err(Error::InvalidRectangle {
                a,
                b,
                c,
                d,
                reason: "requires a < b (strict)",
            });
        }
        if c >= d {
            return Err(Error::InvalidRectangle {
                a,
                b,
                c,
                d,
                reason: "requires c < d (strict)",
            });
        }
        Ok(Self { a, b, c, d })
    }

    /// Unit square `[0,1] × [0,1]`.
    pub fn unit() -> Self {
        Self {
            a: 0.0,
            b: 1.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Midpoint of the `t` range, `(a + b) / 2`.
    pub fn mid_t(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// Midpoint of the `s` range, `(c + d) / 2`.
    pub fn mid_s(&self) -> f64 {
        0.5 * (self.c + self.d)
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn height(&self) -> f64 {
        self.d - self.c
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Closed-rectangle membership test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.a <= x && x <= self.b && self.c <= y && y <= self.d
    }

    /// Cell `(i, j)` of the uniform `m × n` partition, with `i` along the
    /// `t` axis. Outer boundaries are taken verbatim from the parent so the
    /// cells tile the rectangle exactly.
    pub fn cell(&self, i: u32, j: u32, m: u32, n: u32) -> Result<Rectangle> {
        if m == 0 || n == 0 || i >= m || j >= n {
            return Err(Error::InvalidInput(format!(
                "cell index ({i}, {j}) invalid for a {m} x {n} grid"
            )));
        }
        let x0 = split_point(self.a, self.b, i, m);
        let x1 = split_point(self.a, self.b, i + 1, m);
        let y0 = split_point(self.c, self.d, j, n);
        let y1 = split_point(self.c, self.d, j + 1, n);
        Rectangle::new(x0, x1, y0, y1)
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.a, self.b, self.c, self.d)
    }
}

fn split_point(lo: f64, hi: f64, k: u32, parts: u32) -> f64 {
    if k == 0 {
        lo
    } else if k == parts {
        hi
    } else {
        lo + (hi - lo) * (k as f64) / (parts as f64)
    }
}

/// The four free parameters `(α1, β1, α2, β2)` of the cubature rule.
///
/// A `ParamSet` is a plain value; admissibility depends on the rectangle it
/// is used with and is checked by [`validate_params`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

impl ParamSet {
    pub fn new(alpha1: f64, beta1: f64, alpha2: f64, beta2: f64) -> Self {
        Self {
            alpha1,
            beta1,
            alpha2,
            beta2,
        }
    }

    /// Parameter choice of the midpoint-type rule: `(a, b, c, d)`.
    pub fn for_midpoint_rule(rect: &Rectangle) -> Self {
        Self::new(rect.a(), rect.b(), rect.c(), rect.d())
    }

    /// Parameter choice of the trapezoid-type rule: both axis pairs collapse
    /// onto the midlines.
    pub fn for_trapezoid_rule(rect: &Rectangle) -> Self {
        Self::new(rect.mid_t(), rect.mid_t(), rect.mid_s(), rect.mid_s())
    }

    /// Uniform sample from the admissible region
    /// `[a, mid] × [mid, b] × [c, mid] × [mid, d]`.
    pub fn sample_valid<R: Rng + ?Sized>(rect: &Rectangle, rng: &mut R) -> Self {
        Self::new(
            rng.gen_range(rect.a()..=rect.mid_t()),
            rng.gen_range(rect.mid_t()..=rect.b()),
            rng.gen_range(rect.c()..=rect.mid_s()),
            rng.gen_range(rect.mid_s()..=rect.d()),
        )
    }
}

/// Checks the half-interval admissibility constraints
///
/// ```text
/// a ≤ α1 ≤ (a+b)/2 ≤ β1 ≤ b      c ≤ α2 ≤ (c+d)/2 ≤ β2 ≤ d
/// ```
///
/// and returns `theta` unchanged when they all hold. Equality at any face is
/// allowed (the trapezoid-type rule needs `α = β = midpoint`); the closed-form
/// kernel L1 norms are only valid inside this region, which is why it is
/// stricter than the bare `α1 < β1` one might expect.
pub fn validate_params(rect: &Rectangle, theta: ParamSet) -> Result<ParamSet> {
    let checks = [
        ("alpha1", theta.alpha1, rect.a(), rect.mid_t()),
        ("beta1", theta.beta1, rect.mid_t(), rect.b()),
        ("alpha2", theta.alpha2, rect.c(), rect.mid_s()),
        ("beta2", theta.beta2, rect.mid_s(), rect.d()),
    ];
    for (name, value, lo, hi) in checks {
        if !(lo <= value && value <= hi) {
            return Err(Error::ParamOutOfRange {
                name,
                value,
                lo,
                hi,
            });
        }
    }
    Ok(theta)
}

/// Rule parameters expressed as fractions of a cell, so one choice can be
/// replayed on every cell of a composite grid.
///
/// `u_alpha1` and `u_alpha2` live in `[0, 1/2]`, `u_beta1` and `u_beta2` in
/// `[1/2, 1]`; a fraction `u` on an interval `[lo, hi]` means the absolute
/// parameter `lo + u · (hi − lo)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeTheta {
    u_alpha1: f64,
    u_beta1: f64,
    u_alpha2: f64,
    u_beta2: f64,
}

impl RelativeTheta {
    pub fn new(u_alpha1: f64, u_beta1: f64, u_alpha2: f64, u_beta2: f64) -> Result<Self> {
        let checks = [
            ("u_alpha1", u_alpha1, 0.0, 0.5),
            ("u_beta1", u_beta1, 0.5, 1.0),
            ("u_alpha2", u_alpha2, 0.0, 0.5),
            ("u_beta2", u_beta2, 0.5, 1.0),
        ];
        for (name, value, lo, hi) in checks {
            if !(lo <= value && value <= hi) {
                return Err(Error::ParamOutOfRange {
                    name,
                    value,
                    lo,
                    hi,
                });
            }
        }
        Ok(Self {
            u_alpha1,
            u_beta1,
            u_alpha2,
            u_beta2,
        })
    }

    /// Converts an absolute parameter set on `rect` into fractions.
    ///
    /// The division can land an ulp outside the fraction boxes even for
    /// admissible input (a midpoint parameter on an interval whose width
    /// rounds), so after validation the fractions are clamped back in.
    pub fn from_absolute(rect: &Rectangle, theta: ParamSet) -> Result<Self> {
        let theta = validate_params(rect, theta)?;
        Self::new(
            ((theta.alpha1 - rect.a()) / rect.width()).clamp(0.0, 0.5),
            ((theta.beta1 - rect.a()) / rect.width()).clamp(0.5, 1.0),
            ((theta.alpha2 - rect.c()) / rect.height()).clamp(0.0, 0.5),
            ((theta.beta2 - rect.c()) / rect.height()).clamp(0.5, 1.0),
        )
    }

    /// Absolute parameters this choice induces on `cell`. Rounding can push
    /// `lo + u · width` an ulp past an admissible face, so each parameter is
    /// clamped into its half-interval.
    pub fn theta_for(&self, cell: &Rectangle) -> ParamSet {
        let (mt, ms) = (cell.mid_t(), cell.mid_s());
        ParamSet::new(
            (cell.a() + self.u_alpha1 * cell.width()).clamp(cell.a(), mt),
            (cell.a() + self.u_beta1 * cell.width()).clamp(mt, cell.b()),
            (cell.c() + self.u_alpha2 * cell.height()).clamp(cell.c(), ms),
            (cell.c() + self.u_beta2 * cell.height()).clamp(ms, cell.d()),
        )
    }
}

/// How the per-cell rule parameters are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamMode {
    /// Centre value plus midline integrals (`θ = (a, b, c, d)` per cell).
    Midpoint,
    /// Corner average plus edge integrals (`θ` collapsed onto the midlines).
    Trapezoid,
    /// Bound-minimising quarter-point placement.
    Optimal,
    /// Caller-supplied placement, replayed per cell as fractions.
    Custom(RelativeTheta),
}

impl ParamMode {
    pub fn label(&self) -> &'static str {
        match self {
            ParamMode::Midpoint => "midpoint",
            ParamMode::Trapezoid => "trapezoid",
            ParamMode::Optimal => "optimal",
            ParamMode::Custom(_) => "custom",
        }
    }
}

impl fmt::Display for ParamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Whether a sup-norm (and hence a bound built from it) is a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupnormProvenance {
    /// The caller asserts `|∂²f/∂t∂s| ≤ supnorm` on the whole rectangle.
    UserCertified,
    /// Sampled or finite-differenced; bounds built from it are heuristic.
    Estimated,
}

impl SupnormProvenance {
    pub fn is_certified(&self) -> bool {
        matches!(self, SupnormProvenance::UserCertified)
    }
}

impl fmt::Display for SupnormProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupnormProvenance::UserCertified => f.write_str("user-certified"),
            SupnormProvenance::Estimated => f.write_str("estimated"),
        }
    }
}

type EvalClosure = Arc<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>;

/// An evaluatable function of two variables, optionally with its mixed
/// partial `∂²f/∂t∂s` and/or a sup-norm for that partial.
///
/// Evaluators must be deterministic: identical inputs must give identical
/// outputs, otherwise composite results lose their bit-reproducibility.
/// Non-finite evaluations are surfaced as errors, never masked.
#[derive(Clone)]
pub struct BivariateFn {
    name: String,
    eval: EvalClosure,
    mixed_partial: Option<EvalClosure>,
    supnorm: Option<(f64, SupnormProvenance)>,
}

impl BivariateFn {
    /// Wraps an infallible closure.
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(move |t, s| Ok(f(t, s))),
            mixed_partial: None,
            supnorm: None,
        }
    }

    /// Wraps a closure that can fail (parsed expressions, for instance).
    pub fn new_fallible<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(f),
            mixed_partial: None,
            supnorm: None,
        }
    }

    pub fn with_mixed_partial<F>(mut self, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.mixed_partial = Some(Arc::new(move |t, s| Ok(f(t, s))));
        self
    }

    pub fn with_fallible_mixed_partial<F>(mut self, f: F) -> Self
    where
        F: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
    {
        self.mixed_partial = Some(Arc::new(f));
        self
    }

    /// Attaches a caller-certified bound on `|∂²f/∂t∂s|` over the rectangle
    /// the function will be integrated on.
    pub fn with_certified_supnorm(mut self, m: f64) -> Result<Self> {
        check_supnorm(m)?;
        self.supnorm = Some((m, SupnormProvenance::UserCertified));
        Ok(self)
    }

    /// Attaches a non-certified sup-norm; bounds stay labelled as estimates.
    pub fn with_estimated_supnorm(mut self, m: f64) -> Result<Self> {
        check_supnorm(m)?;
        self.supnorm = Some((m, SupnormProvenance::Estimated));
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        let v = (self.eval)(t, s)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation { t, s });
        }
        Ok(v)
    }

    pub fn has_mixed_partial(&self) -> bool {
        self.mixed_partial.is_some()
    }

    /// Evaluates `∂²f/∂t∂s` or fails with [`Error::MissingMixedPartial`].
    pub fn mixed_partial(&self, t: f64, s: f64) -> Result<f64> {
        let g = self
            .mixed_partial
            .as_ref()
            .ok_or(Error::MissingMixedPartial)?;
        let v = g(t, s)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation { t, s });
        }
        Ok(v)
    }

    pub fn supnorm(&self) -> Option<(f64, SupnormProvenance)> {
        self.supnorm
    }
}

impl fmt::Debug for BivariateFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BivariateFn")
            .field("name", &self.name)
            .field("has_mixed_partial", &self.mixed_partial.is_some())
            .field("supnorm", &self.supnorm)
            .finish()
    }
}

fn check_supnorm(m: f64) -> Result<()> {
    if !m.is_finite() || m < 0.0 {
        return Err(Error::InvalidInput(format!(
            "sup-norm must be a finite nonnegative real, got {m}"
        )));
    }
    Ok(())
}

/// Configuration of the composite Gauss–Legendre line integrals.
///
/// The defaults (order 16, 4 panels) are deliberately far beyond what smooth
/// integrands need, so line-integral error never pollutes a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadConfig {
    pub gauss_order: usize,
    pub panels: usize,
}

impl QuadConfig {
    pub fn new(gauss_order: usize, panels: usize) -> Result<Self> {
        if gauss_order == 0 {
            return Err(Error::InvalidConfig {
                reason: "gauss_order must be >= 1",
            });
        }
        if panels == 0 {
            return Err(Error::InvalidConfig {
                reason: "panels must be >= 1",
            });
        }
        Ok(Self {
            gauss_order,
            panels,
        })
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            gauss_order: 16,
            panels: 4,
        }
    }
}

/// A cubature result paired with its error ceiling.
///
/// The bound is a true certificate exactly when `supnorm_provenance` is
/// [`SupnormProvenance::UserCertified`]; otherwise it is a heuristic and
/// must be reported as an estimate.
#[derive(Debug, Clone)]
pub struct CertifiedValue {
    pub value: f64,
    pub bound: f64,
    pub supnorm_used: f64,
    pub supnorm_provenance: SupnormProvenance,
    pub cells: (u32, u32),
    pub param_mode: ParamMode,
}

impl CertifiedValue {
    pub fn is_certificate(&self) -> bool {
        self.supnorm_provenance.is_certified()
    }
}
