use std::fs;

use d4lab_core::analysis::{curve_directions, oracle_regions, ScanOptions};
use d4lab_core::{
    classify_configuration, edge_curvatures, parabolic_directions, singular_directions, validate_normal_form, Branch,
    ClassificationInput, D4Error, DirectionKind, SingularDirections, UnfoldingSpec,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::input::{load_normal_spec, load_spec};
use crate::mesh::{fmt17, mesh_sheet};

/// `|κ_n|` and `|κ_s|` limits below which the edge predicates report "vanishes".
const KAPPA_N_TOL: f64 = 1e-6;
const KAPPA_S_TOL: f64 = 1e-5;

pub struct Outcome {
    pub report: Value,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, exit_code: 0 }
    }
}

pub fn validate(config: &RunConfig) -> Result<Outcome, CliError> {
    let spec = load_spec(&config.spec)?;
    let report = validate_normal_form(&spec);
    let exit_code = if report.is_normal { 0 } else { 1 };
    Ok(Outcome { report: serde_json::to_value(report).expect("report serializes"), exit_code })
}

pub fn mesh(config: &RunConfig) -> Result<Outcome, CliError> {
    let spec = load_normal_spec(&config.spec)?;
    let dir = config.output_dir.as_ref().expect("mesh requires an output directory");
    fs::create_dir_all(dir)?;
    let sheets = Branch::sheets(spec.epsilon1())
        .into_iter()
        .map(|b| mesh_sheet(&spec, b, config, dir))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome::ok(json!({
        "epsilon1": i64::from(spec.epsilon1()),
        "theta_steps": config.theta_steps,
        "z_steps": config.z_steps,
        "z_max": config.z_max,
        "quotient": config.quotient,
        "sheets": sheets,
    })))
}

fn in_body(status: &str, e: &D4Error) -> Value {
    let reason = match e {
        D4Error::DegenerateInput { reason } => reason.clone(),
        D4Error::BoundaryCase { quantity } => quantity.clone(),
        D4Error::InfeasibleRegion { case } => case.clone(),
        other => other.to_string(),
    };
    json!({ "status": status, "reason": reason })
}

pub fn classify(config: &RunConfig) -> Result<Outcome, CliError> {
    let spec = load_normal_spec(&config.spec)?;
    let input = ClassificationInput::from_spec(&spec);
    if let Err(e) = input.check_nondegenerate() {
        return Ok(Outcome::ok(in_body("degenerate", &e)));
    }
    let label = match classify_configuration(&input) {
        Ok(l) => l,
        Err(e @ D4Error::BoundaryCase { .. }) => return Ok(Outcome::ok(in_body("boundary", &e))),
        Err(e @ D4Error::InfeasibleRegion { .. }) => return Ok(Outcome::ok(in_body("infeasible", &e))),
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    let oracle = oracle_regions(&input);
    let mut directions = Vec::new();
    for branch in Branch::sheets(spec.epsilon1()) {
        match parabolic_directions(&spec, branch) {
            Ok(set) => directions.extend(set.directions.iter().map(|d| {
                json!({ "epsilon2": i64::from(branch.epsilon2), "theta": d.theta, "region": d.region })
            })),
            Err(e) => directions.push(json!({ "epsilon2": i64::from(branch.epsilon2), "error": e.to_string() })),
        }
    }
    Ok(Outcome::ok(json!({
        "status": "ok",
        "epsilon1": i64::from(spec.epsilon1()),
        "xi": input.xi,
        "eta": input.eta,
        "zeta": input.zeta,
        "case_name": label.case_name,
        "discriminant": label.discriminant,
        "regions": label.regions.to_string(),
        "oracle_regions": oracle.as_ref().ok().map(|r| r.to_string()),
        "oracle_error": oracle.as_ref().err().map(|e| e.to_string()),
        "oracle_agrees": oracle.as_ref().is_ok_and(|r| *r == label.regions),
        "parabolic_directions": directions,
    })))
}

#[derive(Serialize)]
struct KindSummary {
    kind: &'static str,
    total: usize,
    bound: usize,
    bound_ok: bool,
}

#[derive(Serialize)]
struct EdgeRow {
    epsilon2: i64,
    theta0: f64,
    kappa_n_limit: Option<f64>,
    kappa_n_predicate: Option<f64>,
    kappa_n: &'static str,
    kappa_s_limit: Option<f64>,
    kappa_s_predicate: Option<f64>,
    kappa_s: &'static str,
    error: Option<String>,
}

fn status(value: f64, tol: f64) -> &'static str {
    if value.abs() <= tol {
        "vanishes"
    } else {
        "nonzero"
    }
}

fn edge_rows(spec: &UnfoldingSpec, branch: Branch) -> Vec<EdgeRow> {
    let SingularDirections::Angles(angles) = singular_directions(branch) else { return Vec::new() };
    angles
        .into_iter()
        .map(|theta0| match edge_curvatures(spec, branch, theta0) {
            Ok(e) => EdgeRow {
                epsilon2: branch.epsilon2.into(),
                theta0,
                kappa_n_limit: Some(e.kappa_n_limit),
                kappa_n_predicate: Some(e.kappa_n_predicate),
                kappa_n: status(e.kappa_n_limit, KAPPA_N_TOL),
                kappa_s_limit: Some(e.kappa_s_limit),
                kappa_s_predicate: Some(e.kappa_s_predicate),
                kappa_s: status(e.kappa_s_limit, KAPPA_S_TOL),
                error: None,
            },
            Err(e) => EdgeRow {
                epsilon2: branch.epsilon2.into(),
                theta0,
                kappa_n_limit: None,
                kappa_n_predicate: None,
                kappa_n: "error",
                kappa_s_limit: None,
                kappa_s_predicate: None,
                kappa_s: "error",
                error: Some(e.to_string()),
            },
        })
        .collect()
}

pub fn curves(config: &RunConfig) -> Result<Outcome, CliError> {
    let spec = load_normal_spec(&config.spec)?;
    let mut csv = String::from("epsilon2,kind,theta,residual,derivative,transverse\n");
    let mut sheets = Vec::new();
    let mut totals = [0usize; 4];
    let mut edges = Vec::new();
    for branch in Branch::sheets(spec.epsilon1()) {
        let e2 = i64::from(branch.epsilon2);
        match curve_directions(&spec, branch, &DirectionKind::CURVES, &ScanOptions::default()) {
            Ok(sets) => {
                let mut kinds = serde_json::Map::new();
                for (k, set) in sets.iter().enumerate() {
                    totals[k] += set.directions.len();
                    for d in &set.directions {
                        csv.push_str(&format!(
                            "{e2},{},{},{},{},{}\n",
                            set.kind.name(),
                            fmt17(d.theta),
                            fmt17(d.residual),
                            fmt17(d.derivative),
                            d.transversality_ok
                        ));
                    }
                    let thetas: Vec<f64> = set.directions.iter().map(|d| d.theta).collect();
                    kinds.insert(set.kind.name().to_string(), json!(thetas));
                }
                sheets.push(json!({ "epsilon2": e2, "directions": kinds }));
            }
            Err(e) => {
                csv.push_str(&format!("{e2},error,,,,\"{e}\"\n"));
                sheets.push(json!({ "epsilon2": e2, "error": e.to_string() }));
            }
        }
        edges.extend(edge_rows(&spec, branch));
    }
    let summary: Vec<KindSummary> = DirectionKind::CURVES
        .iter()
        .zip(totals)
        .map(|(kind, total)| KindSummary { kind: kind.name(), total, bound: kind.bound(), bound_ok: total <= kind.bound() })
        .collect();
    let all_ok = summary.iter().all(|s| s.bound_ok);
    if let Some(dir) = &config.output_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("curves.csv"), csv)?;
    }
    Ok(Outcome {
        report: json!({
            "epsilon1": i64::from(spec.epsilon1()),
            "sheets": sheets,
            "counts": summary,
            "bounds_ok": all_ok,
            "edge_predicates": edges,
        }),
        exit_code: if all_ok { 0 } else { 1 },
    })
}
