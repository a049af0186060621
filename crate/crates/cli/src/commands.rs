use std::fmt::Write as _;
use std::path::Path;

use neocalc_core::derivatives::{
    classify, global_profile, membership_mu, ApproachMode, FunctionOracle, GalleryFunction,
    ProfilePoint, ScaleLadder,
};
use neocalc_core::reference_oracles::{default_k_grid, is_r_fundamental_direct, is_r_limit_direct};
use neocalc_core::sequence_limits::{analyze, SequenceWindow, TailBounds, TailConfig};
use serde_json::{json, Map, Value};

use crate::args::{
    Command, FnAnalyze, FnProfile, FunctionSource, LadderArgs, SeqAnalyze, SeqMember, TailArgs,
};
use crate::document::{ReportDocument, Warning};
use crate::error::CliError;
use crate::input::{eval_budget_override, parse_grid, read_samples, read_sequence};

/// Executes one command. `budget` is the raw `NEOCALC_EVAL_BUDGET` value.
pub fn run(command: &Command, budget: Option<String>) -> Result<ReportDocument, CliError> {
    match command {
        Command::SeqAnalyze(a) => seq_analyze(command, a),
        Command::SeqMember(a) => seq_member(command, a),
        Command::FnAnalyze(a) => fn_analyze(command, a, eval_budget_override(budget)?),
        Command::FnProfile(a) => fn_profile(command, a, eval_budget_override(budget)?),
        Command::GalleryList(_) => Ok(gallery_list(command)),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("analysis results serialize")
}

fn load_sequence(tail: &TailArgs) -> Result<(SequenceWindow, TailConfig), CliError> {
    let values = read_sequence(&tail.input)?;
    let seq = SequenceWindow::with_start(values, tail.start_index)?;
    let cfg = TailConfig::default()
        .with_tail_fraction(tail.tail_fraction)
        .with_tolerance(tail.tolerance);
    if !(tail.tolerance >= 0.0 && tail.tolerance.is_finite()) {
        return Err(CliError::Validation(format!(
            "tolerance must be a finite nonnegative number, got {}",
            tail.tolerance
        )));
    }
    Ok((seq, cfg))
}

fn check_radii(radii: &[f64]) -> Result<(), CliError> {
    match radii.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
        Some(r) => Err(CliError::Validation(format!(
            "r must be a finite nonnegative number, got {r}"
        ))),
        None => Ok(()),
    }
}

fn sequence_diagnostics(seq: &SequenceWindow, b: &TailBounds) -> Value {
    json!({
        "length": seq.len(),
        "start_index": seq.start_index(),
        "window_size": b.window_size,
        "stable": b.stable,
        "bounded": b.bounded,
        "sup_extrapolated": b.sup_extrapolated,
        "inf_extrapolated": b.inf_extrapolated,
    })
}

/// Tail extremes of `{1 + (-1)^i}`.
fn looks_alternating_h(b: &TailBounds) -> bool {
    b.bounded && (b.sup_estimate - 2.0).abs() <= 1e-6 && b.inf_estimate.abs() <= 1e-6
}

const H_NOTE: &str = "for the alternating sequence 1 + (-1)^i the published example lists 0 as a \
     1-limit and -1 as a 2-limit; the definition gives defects 2 and 3 at those points, so both \
     claims are rejected here";

fn h_claims_requested(pairs: impl IntoIterator<Item = (f64, f64)>) -> bool {
    pairs
        .into_iter()
        .any(|(a, r)| (a == 0.0 && r == 1.0) || (a == -1.0 && r == 2.0))
}

fn seq_analyze(command: &Command, args: &SeqAnalyze) -> Result<ReportDocument, CliError> {
    check_radii(&args.radii)?;
    let (seq, cfg) = load_sequence(&args.tail)?;
    let report = analyze(&seq, &cfg, &args.radii)?;
    let mut results = to_value(&report);
    if args.tail.oracle {
        let grid = default_k_grid();
        let checks: Vec<Value> = report
            .requested_sets
            .iter()
            .map(|rs| {
                let direct = is_r_fundamental_direct(&seq, rs.r, &grid);
                json!({
                    "r": rs.r,
                    "is_r_fundamental": report.bounds.is_r_fundamental(rs.r),
                    "direct": direct,
                })
            })
            .collect();
        results["oracle"] = Value::Array(checks);
    }
    let mut warnings = Vec::new();
    let radii = &args.radii;
    if looks_alternating_h(&report.bounds)
        && h_claims_requested(radii.iter().flat_map(|&r| [(0.0, r), (-1.0, r)]))
    {
        warnings.push(Warning::paper_note(H_NOTE));
    }
    Ok(ReportDocument::new(
        command,
        results,
        sequence_diagnostics(&seq, &report.bounds),
        warnings,
    ))
}

fn seq_member(command: &Command, args: &SeqMember) -> Result<ReportDocument, CliError> {
    check_radii(&args.radii)?;
    if let Some(a) = args.points.iter().find(|a| !a.is_finite()) {
        return Err(CliError::Validation(format!("a must be finite, got {a}")));
    }
    let (seq, cfg) = load_sequence(&args.tail)?;
    let report = analyze(&seq, &cfg, &[])?;
    let b = &report.bounds;
    let grid = default_k_grid();
    let mut checks = Vec::new();
    for &a in &args.points {
        for &r in &args.radii {
            let mut entry = json!({
                "a": a,
                "r": r,
                "is_r_limit": b.is_r_limit(a, r),
                "limit_defect": finite_or_null(b.limit_defect(a)),
                "membership": b.membership_lim(a),
            });
            if args.tail.oracle {
                entry["direct"] = to_value(&is_r_limit_direct(&seq, a, r, &grid));
            }
            checks.push(entry);
        }
    }
    let results = json!({
        "bounds": to_value(b),
        "measure_of_convergence": finite_or_null(report.measure_of_convergence),
        "best_point": report.best_point,
        "checks": checks,
    });
    let mut warnings = Vec::new();
    let pairs = args
        .points
        .iter()
        .flat_map(|&a| args.radii.iter().map(move |&r| (a, r)));
    if looks_alternating_h(b) && h_claims_requested(pairs) {
        warnings.push(Warning::paper_note(H_NOTE));
    }
    Ok(ReportDocument::new(
        command,
        results,
        sequence_diagnostics(&seq, b),
        warnings,
    ))
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn build_ladder(args: &LadderArgs) -> Result<ScaleLadder, CliError> {
    let d = ScaleLadder::default();
    let ladder = ScaleLadder {
        base: args.ladder_base.or(d.base),
        base_factor: d.base_factor,
        levels: args.ladder_levels.unwrap_or(d.levels),
        floor_factor: args.ladder_floor.unwrap_or(d.floor_factor),
        band_size: args.band_size.unwrap_or(d.band_size),
        fine_bands: args.fine_bands.unwrap_or(d.fine_bands),
    };
    ladder.validate()?;
    Ok(ladder)
}

/// The oracle, plus the gallery entry when it is built in.
fn build_oracle(
    source: &FunctionSource,
    budget: Option<usize>,
) -> Result<(FunctionOracle, Option<GalleryFunction>), CliError> {
    let (oracle, builtin) = match (&source.builtin, &source.input) {
        (Some(spec), _) => {
            let g: GalleryFunction = spec.parse()?;
            g.validate()?;
            (g.oracle(), Some(g))
        }
        (None, Some(path)) => {
            let points = read_samples(path)?;
            (
                FunctionOracle::from_samples(sample_label(path), &points)?,
                None,
            )
        }
        (None, None) => {
            return Err(CliError::Validation(
                "one of --builtin or --in is required".into(),
            ))
        }
    };
    Ok(match budget {
        Some(n) => (oracle.with_budget(n), builtin),
        None => (oracle, builtin),
    })
}

fn sample_label(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

const VDW_NOTE: &str = "the published remark states that 0 is a strong centered and two-sided \
     5-derivative of this function everywhere; only a finite truncation is evaluated here and \
     that claim is not certified";

fn parse_modes(raw: &[String]) -> Result<Vec<ApproachMode>, CliError> {
    if raw.is_empty() {
        return Ok(ApproachMode::ALL.to_vec());
    }
    let mut modes = raw
        .iter()
        .map(|m| m.parse::<ApproachMode>().map_err(CliError::Validation))
        .collect::<Result<Vec<_>, _>>()?;
    modes.sort();
    modes.dedup();
    Ok(modes)
}

fn fn_analyze(
    command: &Command,
    args: &FnAnalyze,
    budget: Option<usize>,
) -> Result<ReportDocument, CliError> {
    check_radii(&args.radii)?;
    if let Some(z) = args.z.iter().find(|z| !z.is_finite()) {
        return Err(CliError::Validation(format!("z must be finite, got {z}")));
    }
    let modes = parse_modes(&args.modes)?;
    let ladder = build_ladder(&args.ladder)?;
    let (oracle, builtin) = build_oracle(&args.source, budget)?;
    if !oracle.domain().contains(args.x) {
        return Err(CliError::Validation(format!(
            "x = {} lies outside the domain {}",
            args.x,
            oracle.domain()
        )));
    }
    let mut report = classify(&oracle, args.x, &ladder, &args.radii)?;

    let memberships: Vec<Value> = modes
        .iter()
        .filter(|m| report.per_mode.contains_key(m))
        .flat_map(|&mode| {
            let report = &report;
            args.z
                .iter()
                .map(move |&z| json!({"mode": mode, "z": z, "mu": membership_mu(report, mode, z)}))
        })
        .collect();
    report.per_mode.retain(|m, _| modes.contains(m));
    report.unavailable_modes.retain(|m| modes.contains(m));

    let mut per_mode = Map::new();
    for (mode, analysis) in &report.per_mode {
        let b = &analysis.bounds;
        per_mode.insert(
            mode.as_str().to_string(),
            json!({
                "bounded": b.bounded,
                "stable": b.stable,
                "extrapolated": b.extrapolated,
                "cluster_is_hull": b.cluster_is_hull,
                "degraded_to": b.degraded_to,
                "mesh_limited": b.mesh_limited,
                "domain_clipped": b.domain_clipped,
                "budget_exhausted": b.budget_exhausted,
                "smallest_scale": finite_or_null(b.smallest_scale),
                "noise_floor": finite_or_null(b.noise_floor),
            }),
        );
    }
    let diagnostics = json!({
        "evaluations": report.evaluations,
        "eval_budget": oracle.eval_budget(),
        "budget_exhausted": report.budget_exhausted,
        "unavailable_modes": report.unavailable_modes,
        "ladder": ladder,
        "per_mode": per_mode,
    });

    let mut results = to_value(&report);
    results["memberships"] = Value::Array(memberships);
    let mut warnings = Vec::new();
    if matches!(builtin, Some(GalleryFunction::VanDerWaerden { .. })) {
        warnings.push(Warning::paper_note(VDW_NOTE));
    }
    Ok(ReportDocument::new(command, results, diagnostics, warnings))
}

fn fn_profile(
    command: &Command,
    args: &FnProfile,
    budget: Option<usize>,
) -> Result<ReportDocument, CliError> {
    check_radii(&[args.r])?;
    let grid = parse_grid(&args.grid)?;
    let ladder = build_ladder(&args.ladder)?;
    let (oracle, builtin) = build_oracle(&args.source, budget)?;
    let domain = oracle.domain();
    if let Some(x) = grid.iter().find(|x| !domain.contains(**x)) {
        return Err(CliError::Validation(format!(
            "grid point {x} lies outside the domain {domain}"
        )));
    }
    let points = global_profile(&oracle, &grid, args.r, &ladder)?;
    if let Some(path) = &args.plot_data {
        std::fs::write(path, plot_rows(&points)).map_err(|e| CliError::io(path, e))?;
    }
    let diagnostics = json!({
        "points": points.len(),
        "empty_points": points.iter().filter(|p| p.strong_set.is_empty()).count(),
        "mesh_limited_points": points.iter().filter(|p| p.mesh_limited).count(),
        "failed_points": points.iter().filter(|p| p.error.is_some()).count(),
        "eval_budget": oracle.eval_budget(),
        "ladder": ladder,
    });
    let results = json!({"r": args.r, "points": points});
    let mut warnings = Vec::new();
    if matches!(builtin, Some(GalleryFunction::VanDerWaerden { .. })) {
        warnings.push(Warning::paper_note(VDW_NOTE));
    }
    Ok(ReportDocument::new(command, results, diagnostics, warnings))
}

fn plot_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        v.to_string()
    }
}

/// Tab-separated `x lo hi defect`; empty sets give `nan` bounds.
pub fn plot_rows(points: &[ProfilePoint]) -> String {
    let mut out = String::from("x\tlo\thi\tdefect\n");
    for p in points {
        let (lo, hi) = p.strong_set.bounds().unwrap_or((f64::NAN, f64::NAN));
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            plot_number(p.x),
            plot_number(lo),
            plot_number(hi),
            plot_number(p.defect)
        );
    }
    out
}

fn gallery_list(command: &Command) -> ReportDocument {
    let functions: Vec<Value> = GalleryFunction::catalogue()
        .into_iter()
        .map(|(spec, description, domain)| {
            let (lo, hi) = domain.bounds().unwrap_or((f64::NAN, f64::NAN));
            json!({
                "spec": spec,
                "description": description,
                "domain": [finite_or_null(lo), finite_or_null(hi)],
            })
        })
        .collect();
    ReportDocument::new(
        command,
        json!({ "functions": functions }),
        json!({}),
        Vec::new(),
    )
}
