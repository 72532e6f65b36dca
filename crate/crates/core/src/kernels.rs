//! Two-branch Peano-type kernels and their closed-form L1 norms.
//!
//! On an interval `[lo, hi]` with admissible parameters
//! `lo ≤ α ≤ mid ≤ β ≤ hi` the kernel is
//!
//! ```text
//! k(t) = t − α   for t ∈ [lo, mid]
//! k(t) = t − β   for t ∈ (mid, hi]
//! ```
//!
//! The cubature error over a rectangle is exactly the integral of the
//! product of the two per-axis kernels against the mixed partial, so
//! `∫ |k|` on each axis is the quantity every certificate is built from.
//! Inside the admissible region it has the closed form
//!
//! ```text
//! ∫ |k| = [(α − lo)² + (hi − β)²] / 2 + [(lo + hi − 2α)² + (lo + hi − 2β)²] / 8
//! ```
//!
//! which is what [`KernelSpec::l1_norm`] evaluates.

use crate::error::{Error, Result};

/// One per-axis kernel: interval plus the two branch offsets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    lo: f64,
    hi: f64,
    alpha: f64,
    beta: f64,
}

impl KernelSpec {
    /// Builds a kernel spec, enforcing `lo ≤ α ≤ mid ≤ β ≤ hi`.
    pub fn new(lo: f64, hi: f64, alpha: f64, beta: f64) -> Result<Self> {
        if ![lo, hi, alpha, beta].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "kernel spec ({lo}, {hi}, {alpha}, {beta}) must be finite"
            )));
        }
        if lo >= hi {
            return Err(Error::InvalidInput(format!(
                "kernel interval requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        let mid = 0.5 * (lo + hi);
        if !(lo <= alpha && alpha <= mid) {
            return Err(Error::ParamOutOfRange {
                name: "alpha",
                value: alpha,
                lo,
                hi: mid,
            });
        }
        if !(mid <= beta && beta <= hi) {
            return Err(Error::ParamOutOfRange {
                name: "beta",
                value: beta,
                lo: mid,
                hi,
            });
        }
        Ok(Self {
            lo,
            hi,
            alpha,
            beta,
        })
    }

    /// Kernel along the `t` axis of `rect` for a validated parameter set.
    pub fn t_axis(
        rect: &crate::domain::Rectangle,
        theta: &crate::domain::ParamSet,
    ) -> Result<Self> {
        Self::new(rect.a(), rect.b(), theta.alpha1, theta.beta1)
    }

    /// Kernel along the `s` axis of `rect` for a validated parameter set.
    pub fn s_axis(
        rect: &crate::domain::Rectangle,
        theta: &crate::domain::ParamSet,
    ) -> Result<Self> {
        Self::new(rect.c(), rect.d(), theta.alpha2, theta.beta2)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Kernel value at `t`. The midpoint belongs to the first branch; a
    /// single point cannot change any integral, the assignment just keeps
    /// evaluation deterministic.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(self.lo <= t && t <= self.hi) {
            return Err(Error::OutOfDomain {
                name: "t",
                value: t,
                lo: self.lo,
                hi: self.hi,
            });
        }
        if t <= self.mid() {
            Ok(t - self.alpha)
        } else {
            Ok(t - self.beta)
        }
    }

    /// Closed-form `∫ |k|` over `[lo, hi]`.
    pub fn l1_norm(&self) -> f64 {
        let (lo, hi, a, b) = (self.lo, self.hi, self.alpha, self.beta);
        ((a - lo).powi(2) + (hi - b).powi(2)) / 2.0
            + ((lo + hi - 2.0 * a).powi(2) + (lo + hi - 2.0 * b).powi(2)) / 8.0
    }
}

/// Smallest achievable `∫ |k|` on `[lo, hi]`, namely `(hi − lo)² / 8`,
/// attained at the quarter points `α = (3·lo + hi)/4`, `β = (lo + 3·hi)/4`.
pub fn l1_lower_bound(lo: f64, hi: f64) -> f64 {
    (hi - lo).powi(2) / 8.0
}
