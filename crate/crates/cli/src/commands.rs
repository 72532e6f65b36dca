//! Implementations of the five subcommands.
//!
//! Every command produces one `OutputRecord`-style tree with the fixed key
//! order `command`, `inputs`, `result`, `warnings`, plus a human-readable
//! table rendering (and CSV for convergence studies). Any bound that is not
//! backed by a user-certified sup-norm is labelled an estimate in every
//! rendering.

use ostrocube::supnorm::resolve_supnorm;
use ostrocube::{
    convergence_table, cubature_value, error_bound, identity_residual, integrate_composite,
    integrate_composite_parallel, optimal_params, reference_integral, BivariateFn, Error,
    ParamMode, ParamSet, QuadConfig, Rectangle, RelativeTheta, Result, SupnormProvenance,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::json::{fmt_f64, Json};

/// Residual threshold the verify command holds the identity to.
pub const VERIFY_RESIDUAL_THRESHOLD: f64 = 1e-8;

/// One rendered command result.
pub struct CommandOutput {
    pub json: Json,
    pub table: String,
    pub csv: Option<String>,
    pub warnings: Vec<String>,
    /// 0 on success, 3 when a verification run failed.
    pub exit: u8,
}

fn record(command: &str, inputs: Json, result: Json, warnings: &[String]) -> Json {
    Json::Object(vec![
        ("command", Json::Str(command.into())),
        ("inputs", inputs),
        ("result", result),
        (
            "warnings",
            Json::Array(warnings.iter().map(|w| Json::Str(w.clone())).collect()),
        ),
    ])
}

fn provenance_str(p: SupnormProvenance) -> &'static str {
    match p {
        SupnormProvenance::UserCertified => "user-certified",
        SupnormProvenance::Estimated => "estimated",
    }
}

fn bound_kind(p: SupnormProvenance) -> &'static str {
    if p.is_certified() {
        "certified"
    } else {
        "estimate"
    }
}

fn estimate_warning(supnorm: f64) -> String {
    format!(
        "sup-norm {supnorm} is a sampled estimate; reported bounds are heuristic, \
         not certificates (supply --supnorm to certify)"
    )
}

fn rect_from(vals: &[f64]) -> Result<Rectangle> {
    Rectangle::new(vals[0], vals[1], vals[2], vals[3])
}

fn theta_from(vals: &[f64]) -> ParamSet {
    ParamSet::new(vals[0], vals[1], vals[2], vals[3])
}

fn mode_from(
    rect: &Rectangle,
    mode: &str,
    theta: Option<&[f64]>,
) -> Result<(ParamMode, Option<ParamSet>)> {
    match mode {
        "custom" => {
            let vals = theta.ok_or_else(|| {
                Error::InvalidInput("--mode custom requires --theta A1 B1 A2 B2".into())
            })?;
            let theta = theta_from(vals);
            let rel = RelativeTheta::from_absolute(rect, theta)?;
            Ok((ParamMode::Custom(rel), Some(theta)))
        }
        _ => {
            if theta.is_some() {
                return Err(Error::InvalidInput(
                    "--theta is only meaningful with --mode custom".into(),
                ));
            }
            let m = match mode {
                "midpoint" => ParamMode::Midpoint,
                "trapezoid" => ParamMode::Trapezoid,
                "optimal" => ParamMode::Optimal,
                other => {
                    return Err(Error::InvalidInput(format!("unknown mode '{other}'")));
                }
            };
            Ok((m, None))
        }
    }
}

fn function_from_expr(expr: &str, supnorm: Option<f64>) -> Result<BivariateFn> {
    let node = ostrocube::parse(expr)?;
    let f = node.to_bivariate(expr);
    match supnorm {
        Some(m) => f.with_certified_supnorm(m),
        None => Ok(f),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_integrate(
    expr: &str,
    rect_vals: &[f64],
    mode: &str,
    theta_vals: Option<&[f64]>,
    grid: (u32, u32),
    supnorm: Option<f64>,
    cfg: QuadConfig,
    parallel: bool,
) -> Result<CommandOutput> {
    let rect = rect_from(rect_vals)?;
    let (param_mode, theta_echo) = mode_from(&rect, mode, theta_vals)?;
    let f = function_from_expr(expr, supnorm)?;
    let cv = if parallel {
        integrate_composite_parallel(&f, &rect, grid.0, grid.1, &param_mode, &cfg)?
    } else {
        integrate_composite(&f, &rect, grid.0, grid.1, &param_mode, &cfg)?
    };

    let mut warnings = Vec::new();
    if !cv.is_certificate() {
        warnings.push(estimate_warning(cv.supnorm_used));
    }

    let inputs = Json::Object(vec![
        ("expr", Json::Str(expr.into())),
        ("rect", Json::floats(rect_vals)),
        ("mode", Json::Str(mode.into())),
        (
            "theta",
            match theta_echo {
                Some(t) => Json::floats(&[t.alpha1, t.beta1, t.alpha2, t.beta2]),
                None => Json::Null,
            },
        ),
        (
            "grid",
            Json::Array(vec![Json::Int(grid.0 as i64), Json::Int(grid.1 as i64)]),
        ),
        ("supnorm", supnorm.map(Json::Float).unwrap_or(Json::Null)),
        ("gauss_order", Json::Int(cfg.gauss_order as i64)),
        ("panels", Json::Int(cfg.panels as i64)),
        ("parallel", Json::Bool(parallel)),
    ]);
    let result = Json::Object(vec![
        ("value", Json::Float(cv.value)),
        ("bound", Json::Float(cv.bound)),
        (
            "bound_kind",
            Json::Str(bound_kind(cv.supnorm_provenance).into()),
        ),
        ("supnorm_used", Json::Float(cv.supnorm_used)),
        (
            "supnorm_provenance",
            Json::Str(provenance_str(cv.supnorm_provenance).into()),
        ),
        (
            "cells",
            Json::Array(vec![
                Json::Int(cv.cells.0 as i64),
                Json::Int(cv.cells.1 as i64),
            ]),
        ),
        ("param_mode", Json::Str(cv.param_mode.label().into())),
    ]);

    let mut table = String::new();
    table.push_str("command     integrate\n");
    table.push_str(&format!("expression  {expr}\n"));
    table.push_str(&format!("rectangle   {rect}\n"));
    table.push_str(&format!("mode        {}\n", cv.param_mode.label()));
    table.push_str(&format!("grid        {} x {}\n", grid.0, grid.1));
    table.push_str(&format!(
        "sup-norm    {} ({})\n",
        cv.supnorm_used,
        provenance_str(cv.supnorm_provenance)
    ));
    table.push_str(&format!("value       {}\n", fmt_f64(cv.value)));
    table.push_str(&format!(
        "bound       {} ({})\n",
        fmt_f64(cv.bound),
        bound_kind(cv.supnorm_provenance)
    ));

    Ok(CommandOutput {
        json: record("integrate", inputs, result, &warnings),
        table,
        csv: None,
        warnings,
        exit: 0,
    })
}

pub fn cmd_bound(rect_vals: &[f64], theta_vals: &[f64], supnorm: f64) -> Result<CommandOutput> {
    let rect = rect_from(rect_vals)?;
    let theta = theta_from(theta_vals);
    let bb = error_bound(&rect, &theta, supnorm)?;

    let warnings = Vec::new();
    let inputs = Json::Object(vec![
        ("rect", Json::floats(rect_vals)),
        ("theta", Json::floats(theta_vals)),
        ("supnorm", Json::Float(supnorm)),
    ]);
    let result = Json::Object(vec![
        ("b1", Json::Float(bb.b1)),
        ("b2", Json::Float(bb.b2)),
        ("supnorm", Json::Float(bb.supnorm)),
        ("total", Json::Float(bb.total)),
        ("bound_kind", Json::Str("certified".into())),
        ("supnorm_provenance", Json::Str("user-certified".into())),
    ]);

    let mut table = String::new();
    table.push_str("command     bound\n");
    table.push_str(&format!("rectangle   {rect}\n"));
    table.push_str(&format!(
        "theta       ({}, {}, {}, {})\n",
        theta.alpha1, theta.beta1, theta.alpha2, theta.beta2
    ));
    table.push_str(&format!("sup-norm    {} (user-certified)\n", supnorm));
    table.push_str(&format!("b1          {}\n", fmt_f64(bb.b1)));
    table.push_str(&format!("b2          {}\n", fmt_f64(bb.b2)));
    table.push_str(&format!("total       {} (certified)\n", fmt_f64(bb.total)));

    Ok(CommandOutput {
        json: record("bound", inputs, result, &warnings),
        table,
        csv: None,
        warnings,
        exit: 0,
    })
}

pub fn cmd_optimize(rect_vals: &[f64]) -> Result<CommandOutput> {
    let rect = rect_from(rect_vals)?;
    let theta = optimal_params(&rect);
    let best = error_bound(&rect, &theta, 1.0)?;
    // the classical corner/midline choices share the same per-axis factor
    let classical = error_bound(&rect, &ParamSet::for_midpoint_rule(&rect), 1.0)?;
    let axis_ratio_t = classical.b1 / best.b1;
    let axis_ratio_s = classical.b2 / best.b2;

    let warnings = Vec::new();
    let inputs = Json::Object(vec![("rect", Json::floats(rect_vals))]);
    let result = Json::Object(vec![
        (
            "theta",
            Json::floats(&[theta.alpha1, theta.beta1, theta.alpha2, theta.beta2]),
        ),
        ("b1", Json::Float(best.b1)),
        ("b2", Json::Float(best.b2)),
        ("total_unit_supnorm", Json::Float(best.total)),
        ("classical_b1", Json::Float(classical.b1)),
        ("classical_b2", Json::Float(classical.b2)),
        (
            "axis_improvement",
            Json::floats(&[axis_ratio_t, axis_ratio_s]),
        ),
        (
            "total_improvement",
            Json::Float(classical.total / best.total),
        ),
    ]);

    let mut table = String::new();
    table.push_str("command     optimize\n");
    table.push_str(&format!("rectangle   {rect}\n"));
    table.push_str(&format!(
        "theta       ({}, {}, {}, {})\n",
        theta.alpha1, theta.beta1, theta.alpha2, theta.beta2
    ));
    table.push_str(&format!(
        "factors     b1 = {}, b2 = {}\n",
        fmt_f64(best.b1),
        fmt_f64(best.b2)
    ));
    table.push_str(&format!(
        "bound       {} x sup-norm (certified)\n",
        fmt_f64(best.total)
    ));
    table.push_str(&format!(
        "improvement {}x per axis, {}x total vs classical parameter choices\n",
        axis_ratio_t,
        classical.total / best.total
    ));

    Ok(CommandOutput {
        json: record("optimize", inputs, result, &warnings),
        table,
        csv: None,
        warnings,
        exit: 0,
    })
}

pub fn cmd_verify(
    expr: &str,
    rect_vals: &[f64],
    trials: u32,
    seed: u64,
    threshold: f64,
    cfg: QuadConfig,
) -> Result<CommandOutput> {
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "--threshold must be a positive real, got {threshold}"
        )));
    }
    let rect = rect_from(rect_vals)?;
    let node = ostrocube::parse(expr)?;
    // surface non-differentiable expressions before doing any work
    node.mixed_partial()?;
    let f = node.to_bivariate(expr);
    let (supnorm, provenance) = resolve_supnorm(&f, &rect)?;
    let exact = reference_integral(&f, &rect, 1e-12)?.value;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    let mut bound_violations = 0u32;
    for _ in 0..trials {
        let theta = ParamSet::sample_valid(&rect, &mut rng);
        let residual = identity_residual(&f, &rect, &theta, &cfg)?;
        max_residual = max_residual.max(residual);
        let value = cubature_value(&f, &rect, &theta, &cfg)?.value;
        let bound = error_bound(&rect, &theta, supnorm)?.total;
        if (value - exact).abs() > bound * (1.0 + 1e-10) + 1e-12 {
            bound_violations += 1;
        }
    }
    let pass = max_residual < threshold && bound_violations == 0;
    let status = if pass { "PASS" } else { "FAIL" };

    let mut warnings = Vec::new();
    if !provenance.is_certified() {
        warnings.push(format!(
            "bound checks use sup-norm {supnorm} ({}); they are heuristic",
            provenance_str(provenance)
        ));
    }

    let inputs = Json::Object(vec![
        ("expr", Json::Str(expr.into())),
        ("rect", Json::floats(rect_vals)),
        ("trials", Json::Int(trials as i64)),
        ("seed", Json::Int(seed as i64)),
        ("threshold", Json::Float(threshold)),
        ("gauss_order", Json::Int(cfg.gauss_order as i64)),
        ("panels", Json::Int(cfg.panels as i64)),
    ]);
    let result = Json::Object(vec![
        ("max_residual", Json::Float(max_residual)),
        ("residual_threshold", Json::Float(threshold)),
        ("bound_violations", Json::Int(bound_violations as i64)),
        ("supnorm_used", Json::Float(supnorm)),
        (
            "supnorm_provenance",
            Json::Str(provenance_str(provenance).into()),
        ),
        ("reference_integral", Json::Float(exact)),
        ("status", Json::Str(status.into())),
    ]);

    let mut table = String::new();
    table.push_str("command     verify\n");
    table.push_str(&format!("expression  {expr}\n"));
    table.push_str(&format!("rectangle   {rect}\n"));
    table.push_str(&format!("trials      {trials} (seed {seed})\n"));
    table.push_str(&format!(
        "residual    max {} (threshold {})\n",
        fmt_f64(max_residual),
        fmt_f64(threshold)
    ));
    table.push_str(&format!(
        "bounds      {} violations with sup-norm {} ({})\n",
        bound_violations,
        supnorm,
        provenance_str(provenance)
    ));
    table.push_str(&format!("status      {status}\n"));

    Ok(CommandOutput {
        json: record("verify", inputs, result, &warnings),
        table,
        csv: None,
        warnings,
        exit: if pass { 0 } else { 3 },
    })
}

pub fn cmd_convergence(
    expr: &str,
    rect_vals: &[f64],
    max_level: u32,
    mode: &str,
    theta_vals: Option<&[f64]>,
    supnorm: Option<f64>,
    cfg: QuadConfig,
) -> Result<CommandOutput> {
    if max_level == 0 || max_level > 8 {
        return Err(Error::InvalidInput(format!(
            "--max-level must be between 1 and 8, got {max_level}"
        )));
    }
    let rect = rect_from(rect_vals)?;
    let (param_mode, theta_echo) = mode_from(&rect, mode, theta_vals)?;
    let f = function_from_expr(expr, supnorm)?;
    let (supnorm_used, provenance) = resolve_supnorm(&f, &rect)?;
    let exact = reference_integral(&f, &rect, 1e-12)?.value;

    let levels: Vec<(u32, u32)> = (0..max_level).map(|k| (1 << k, 1 << k)).collect();
    let report = convergence_table(&f, &rect, &levels, &param_mode, &cfg, Some(exact))?;

    let mut warnings = Vec::new();
    if !provenance.is_certified() {
        warnings.push(estimate_warning(supnorm_used));
    }

    let mut rows_json = Vec::new();
    let mut csv = String::from("m,n,value,certified_bound,true_error,ratio\n");
    let mut table_rows = String::new();
    table_rows.push_str(&format!(
        "{:>5} {:>5} {:>24} {:>24} {:>24} {:>10}\n",
        "m", "n", "value", "bound", "true_error", "ratio"
    ));
    let mut prev_bound: Option<f64> = None;
    for row in &report.rows {
        let ratio = prev_bound.map(|p| p / row.certified_bound);
        prev_bound = Some(row.certified_bound);
        let true_error = row.true_error.expect("oracle value was supplied");
        rows_json.push(Json::Object(vec![
            ("m", Json::Int(row.m as i64)),
            ("n", Json::Int(row.n as i64)),
            ("value", Json::Float(row.value)),
            ("certified_bound", Json::Float(row.certified_bound)),
            ("true_error", Json::Float(true_error)),
            ("ratio", ratio.map(Json::Float).unwrap_or(Json::Null)),
        ]));
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.m,
            row.n,
            fmt_f64(row.value),
            fmt_f64(row.certified_bound),
            fmt_f64(true_error),
            ratio.map(fmt_f64).unwrap_or_default()
        ));
        table_rows.push_str(&format!(
            "{:>5} {:>5} {:>24} {:>24} {:>24} {:>10}\n",
            row.m,
            row.n,
            fmt_f64(row.value),
            fmt_f64(row.certified_bound),
            fmt_f64(true_error),
            ratio
                .map(|r| format!("{r:.3}"))
                .unwrap_or_else(|| "-".into())
        ));
    }

    let inputs = Json::Object(vec![
        ("expr", Json::Str(expr.into())),
        ("rect", Json::floats(rect_vals)),
        ("max_level", Json::Int(max_level as i64)),
        ("mode", Json::Str(mode.into())),
        (
            "theta",
            match theta_echo {
                Some(t) => Json::floats(&[t.alpha1, t.beta1, t.alpha2, t.beta2]),
                None => Json::Null,
            },
        ),
        ("supnorm", supnorm.map(Json::Float).unwrap_or(Json::Null)),
        ("gauss_order", Json::Int(cfg.gauss_order as i64)),
        ("panels", Json::Int(cfg.panels as i64)),
    ]);
    let result = Json::Object(vec![
        ("function_id", Json::Str(report.function_id.clone())),
        ("reference_integral", Json::Float(exact)),
        ("bound_kind", Json::Str(bound_kind(provenance).into())),
        ("supnorm_used", Json::Float(supnorm_used)),
        (
            "supnorm_provenance",
            Json::Str(provenance_str(provenance).into()),
        ),
        ("rows", Json::Array(rows_json)),
    ]);

    let mut table = String::new();
    table.push_str("command     convergence\n");
    table.push_str(&format!("expression  {expr}\n"));
    table.push_str(&format!("rectangle   {rect}\n"));
    table.push_str(&format!("mode        {}\n", param_mode.label()));
    table.push_str(&format!(
        "sup-norm    {} ({}); bounds are {}\n",
        supnorm_used,
        provenance_str(provenance),
        if provenance.is_certified() {
            "certificates"
        } else {
            "estimates"
        }
    ));
    table.push_str(&format!("reference   {}\n", fmt_f64(exact)));
    table.push_str(&table_rows);

    Ok(CommandOutput {
        json: record("convergence", inputs, result, &warnings),
        table,
        csv: Some(csv),
        warnings,
        exit: 0,
    })
}
