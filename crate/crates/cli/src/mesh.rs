use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use d4lab_core::{Branch, ChartPoint, Sheet, SolverOptions, SurfaceSample, UnfoldingSpec};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub const CSV_HEADER: &str = "theta,z,x,y,zpos,E,F,G,L,M,N,K,H,kappa1,kappa2,lambda";

/// θ range on `ε₁ = +1` sheets.
const HYPERBOLIC_THETA: f64 = 1.0;

/// Decimal with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
pub struct VertexFailure {
    pub theta: f64,
    pub z: f64,
    pub error: String,
}

#[derive(Serialize)]
pub struct SheetReport {
    pub epsilon2: i64,
    pub obj: String,
    pub csv: String,
    pub vertices: usize,
    pub faces: usize,
    pub failures: Vec<VertexFailure>,
}

pub struct Grid {
    pub thetas: Vec<f64>,
    pub zs: Vec<f64>,
    /// Whether the last θ column joins the first.
    pub periodic: bool,
}

impl Grid {
    pub fn new(config: &RunConfig, branch: Branch) -> Grid {
        let n = config.theta_steps;
        let (thetas, periodic) = if branch.elliptic() {
            let span = if config.quotient { PI } else { 2.0 * PI };
            ((0..n).map(|i| span * i as f64 / n as f64).collect(), true)
        } else {
            let t = HYPERBOLIC_THETA;
            ((0..n).map(|i| -t + 2.0 * t * i as f64 / (n - 1) as f64).collect(), false)
        };
        let m = config.z_steps;
        let zs = (0..m).map(|j| -config.z_max + 2.0 * config.z_max * j as f64 / (m - 1) as f64).collect();
        Grid { thetas, zs, periodic }
    }
}

fn sheet_name(branch: Branch) -> &'static str {
    match branch.epsilon2.value() > 0.0 {
        true => "eps2_plus",
        false => "eps2_minus",
    }
}

fn csv_row(out: &mut String, s: &SurfaceSample) {
    let f = &s.forms;
    let mut fields: Vec<String> = [s.point.theta, s.point.z, s.position[0], s.position[1], s.position[2]]
        .into_iter()
        .chain([f.e, f.f, f.g, f.l, f.m, f.n])
        .map(fmt17)
        .collect();
    match &s.curvatures {
        Some(c) => fields.extend([c.k, c.h, c.kappa1, c.kappa2].map(fmt17)),
        None => fields.extend(std::iter::repeat("singular".to_string()).take(4)),
    }
    fields.push(fmt17(s.lambda_value));
    out.push_str(&fields.join(","));
    out.push('\n');
}

pub fn mesh_sheet(spec: &UnfoldingSpec, branch: Branch, config: &RunConfig, dir: &Path) -> Result<SheetReport, CliError> {
    let options = SolverOptions { z_max: config.z_max, ..SolverOptions::default() };
    let sheet = Sheet::with_options(spec, branch, options).map_err(|e| CliError::Invalid(e.to_string()))?;
    let grid = Grid::new(config, branch);
    let name = sheet_name(branch);

    let mut obj = format!("# d4lab sheet epsilon1={} epsilon2={}\no {name}\n", branch.epsilon1, branch.epsilon2);
    let mut csv = format!("{CSV_HEADER}\n");
    let mut index = vec![vec![None; grid.zs.len()]; grid.thetas.len()];
    let mut failures = Vec::new();
    let mut next = 1usize;
    for (i, &theta) in grid.thetas.iter().enumerate() {
        for (j, &z) in grid.zs.iter().enumerate() {
            match sheet.sample(ChartPoint::new(theta, z), None) {
                Ok(s) => {
                    let p = s.position;
                    let _ = writeln!(obj, "v {} {} {}", fmt17(p[0]), fmt17(p[1]), fmt17(p[2]));
                    csv_row(&mut csv, &s);
                    index[i][j] = Some(next);
                    next += 1;
                }
                Err(e) => {
                    let _ = writeln!(obj, "# hole at theta={} z={}: {e}", fmt17(theta), fmt17(z));
                    failures.push(VertexFailure { theta, z, error: e.to_string() });
                }
            }
        }
    }
    let columns = if grid.periodic { grid.thetas.len() } else { grid.thetas.len() - 1 };
    let mut faces = 0;
    for i in 0..columns {
        let i2 = (i + 1) % grid.thetas.len();
        for j in 0..grid.zs.len() - 1 {
            if let (Some(a), Some(b), Some(c), Some(d)) = (index[i][j], index[i2][j], index[i2][j + 1], index[i][j + 1]) {
                let _ = writeln!(obj, "f {a} {b} {c} {d}");
                faces += 1;
            }
        }
    }

    let obj_path = dir.join(format!("sheet_{name}.obj"));
    let csv_path = dir.join(format!("samples_{name}.csv"));
    fs::write(&obj_path, obj)?;
    fs::write(&csv_path, csv)?;
    Ok(SheetReport {
        epsilon2: branch.epsilon2.into(),
        obj: obj_path.display().to_string(),
        csv: csv_path.display().to_string(),
        vertices: next - 1,
        faces,
        failures,
    })
}
