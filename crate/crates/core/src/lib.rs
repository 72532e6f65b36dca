//! Certified two-dimensional cubature over axis-aligned rectangles.
//!
//! The central object is a four-parameter cubature rule for
//! `∬ f(t,s) ds dt` over `[a,b] × [c,d]` built from the centre value, the two
//! midline integrals, the four edge integrals and the four corner values of
//! `f`. Its error admits a closed-form a priori bound
//!
//! ```text
//! |∬ f − rule(f)| ≤ B1(α1, β1) · B2(α2, β2) · ‖∂²f/∂t∂s‖∞
//! ```
//!
//! where `B1`, `B2` are explicit L1 norms of two-branch Peano-type kernels
//! (see [`kernels`]) and the four parameters `(α1, β1, α2, β2)` may be chosen
//! freely inside the admissible half-interval region (see
//! [`domain::validate_params`]). The classical midpoint-type and
//! trapezoid-type rectangle rules are the two extreme parameter choices;
//! [`bounds::optimal_params`] places the parameters at the quarter points,
//! which tightens the certificate by a factor of four.
//!
//! Crate layout:
//!
//! * [`domain`] — shared value types ([`Rectangle`], [`ParamSet`],
//!   [`BivariateFn`], [`CertifiedValue`], [`QuadConfig`]).
//! * [`kernels`] — the two-branch kernels and their closed-form L1 norms.
//! * [`rule`] — the single-cell rule, its boundary terms, the identity
//!   self-check, and two classical comparison rules.
//! * [`bounds`] — certificate evaluation and parameter optimisation.
//! * [`composite`] — uniform `m × n` composite grids with summed bounds.
//! * [`quad1d`] — composite Gauss–Legendre line integrals.
//! * [`supnorm`] — finite-difference estimation of the mixed-partial sup
//!   norm when no certified bound is supplied.
//! * [`expr`] — parser, evaluator and symbolic differentiator for
//!   user-supplied expressions in `x` and `y`.
//! * [`oracle`] — brute-force tensor-product reference integrator used to
//!   validate rules and bounds.

pub mod bounds;
pub mod composite;
pub mod domain;
pub mod error;
pub mod expr;
pub mod kernels;
pub mod oracle;
pub mod quad1d;
pub mod rule;
pub mod supnorm;

pub use bounds::{barnett_dragomir_bound, error_bound, optimal_params, BoundBreakdown};
pub use composite::{
    convergence_table, integrate_composite, integrate_composite_parallel, CompositeReport,
    ConvergenceRow,
};
pub use domain::{
    validate_params, BivariateFn, CertifiedValue, ParamMode, ParamSet, QuadConfig, Rectangle,
    RelativeTheta, SupnormProvenance,
};
pub use error::{Error, Result};
pub use expr::{parse, ExprNode};
pub use kernels::KernelSpec;
pub use oracle::{
    reference_integral, reference_integral_fn, reference_kernel_integral, OracleResult,
};
pub use quad1d::{gauss_rule, integrate_1d, GaussRule};
pub use rule::{
    barnett_dragomir_value, corner_term, cubature_value, identity_residual, midline_term,
    ostrowski_1d, RuleTerms,
};
pub use supnorm::{estimate_mixed_sup, resolve_supnorm, SupNormEstimate};
