//! Directions at the singular point from which parabolic, ridge and
//! subparabolic curves emanate.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analysis::cubic::{parabolic_cubic, ClassificationInput};
use crate::error::{D4Error, Result};
use crate::geometry::{CoefficientProfile, WithDerivative};
use crate::solver::{Branch, Sheet};
use crate::unfolding::{Sign, UnfoldingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionKind {
    Parabolic,
    RidgeUnbounded,
    RidgeBounded,
    SubparabolicUnbounded,
    SubparabolicBounded,
}

impl DirectionKind {
    pub const CURVES: [DirectionKind; 4] = [
        DirectionKind::RidgeUnbounded,
        DirectionKind::RidgeBounded,
        DirectionKind::SubparabolicUnbounded,
        DirectionKind::SubparabolicBounded,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DirectionKind::Parabolic => "parabolic",
            DirectionKind::RidgeUnbounded => "ridge_unbounded",
            DirectionKind::RidgeBounded => "ridge_bounded",
            DirectionKind::SubparabolicUnbounded => "subparabolic_unbounded",
            DirectionKind::SubparabolicBounded => "subparabolic_bounded",
        }
    }

    /// Upper bound on the number of directions summed over both sheets.
    pub fn bound(&self) -> usize {
        match self {
            DirectionKind::Parabolic => 6,
            DirectionKind::RidgeUnbounded | DirectionKind::RidgeBounded => 18,
            DirectionKind::SubparabolicUnbounded => 0,
            DirectionKind::SubparabolicBounded => 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Direction {
    pub branch: Branch,
    pub theta: f64,
    /// Region label for parabolic directions.
    pub region: Option<u8>,
    /// Value of the defining function at `theta`.
    pub residual: f64,
    /// θ-derivative of the defining function at `theta`.
    pub derivative: f64,
    pub transversality_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionSet {
    pub kind: DirectionKind,
    pub directions: Vec<Direction>,
}

/// θ-grid used to bracket roots of `C₁, C₂, C₃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    /// Intervals over `[0, π]` for `ε₁ = −1`; twice as many over
    /// `[−theta_max, theta_max]` for `ε₁ = +1`.
    pub grid: usize,
    pub theta_max: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { grid: 720, theta_max: 6.0 }
    }
}

/// Roots of `N0` on one sheet, located through the parabolic cubic.
pub fn parabolic_directions(spec: &UnfoldingSpec, branch: Branch) -> Result<DirectionSet> {
    let input = ClassificationInput::from_spec(spec);
    let sheet = Sheet::new(spec, branch)?;
    let roots = parabolic_cubic(&input, branch.epsilon2)?.real_roots();
    let mut directions = Vec::new();
    for t in roots {
        let theta = match (branch.epsilon1, branch.epsilon2) {
            // t = cot θ
            (Sign::Minus, Sign::Plus) => 1f64.atan2(t),
            // t = tan θ
            (Sign::Minus, Sign::Minus) => t.atan().rem_euclid(PI),
            (Sign::Plus, Sign::Plus) if t.abs() > 1.0 => (1.0 / t).atanh(),
            (Sign::Plus, Sign::Minus) if t.abs() < 1.0 => t.atanh(),
            _ => continue,
        };
        let n0 = WithDerivative::of(&sheet.coefficient_profile(theta)?.n0);
        if n0.derivative.abs() < 1e-10 {
            return Err(D4Error::NonTransverse { theta, derivative: n0.derivative });
        }
        directions.push(Direction {
            branch,
            theta,
            region: Some(input.region(t)),
            residual: n0.value,
            derivative: n0.derivative,
            transversality_ok: true,
        });
    }
    directions.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(DirectionSet { kind: DirectionKind::Parabolic, directions })
}

fn defining(profile: &CoefficientProfile, kind: DirectionKind) -> WithDerivative {
    match kind {
        DirectionKind::RidgeUnbounded => profile.c1(),
        DirectionKind::RidgeBounded => profile.c2(),
        DirectionKind::SubparabolicBounded => profile.c3(),
        DirectionKind::Parabolic => WithDerivative::of(&profile.n0),
        DirectionKind::SubparabolicUnbounded => unreachable!("no defining function"),
    }
}

pub fn ridge_subparabolic_directions(spec: &UnfoldingSpec, branch: Branch, kind: DirectionKind) -> Result<DirectionSet> {
    let mut sets = curve_directions(spec, branch, &[kind], &ScanOptions::default())?;
    Ok(sets.remove(0))
}

/// Direction sets for several kinds on one sheet, sharing one θ-scan.
pub fn curve_directions(
    spec: &UnfoldingSpec,
    branch: Branch,
    kinds: &[DirectionKind],
    options: &ScanOptions,
) -> Result<Vec<DirectionSet>> {
    if kinds.contains(&DirectionKind::Parabolic) {
        return Err(D4Error::InvalidArgument("parabolic directions come from the cubic".into()));
    }
    let sheet = Sheet::new(spec, branch)?;
    let scanned: Vec<DirectionKind> =
        kinds.iter().copied().filter(|k| *k != DirectionKind::SubparabolicUnbounded).collect();
    let (periodic, grid) = match branch.epsilon1 {
        Sign::Minus => (true, linspace(0.0, PI, options.grid)),
        Sign::Plus => (false, linspace(-options.theta_max, options.theta_max, 2 * options.grid)),
    };
    let samples: Vec<Vec<f64>> = grid
        .iter()
        .map(|&th| {
            let p = sheet.coefficient_profile_order(th, 1)?;
            Ok(scanned.iter().map(|k| defining(&p, *k).value).collect())
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for kind in kinds {
        let Some(col) = scanned.iter().position(|k| k == kind) else {
            out.push(DirectionSet { kind: *kind, directions: Vec::new() });
            continue;
        };
        let values: Vec<f64> = samples.iter().map(|row| row[col]).collect();
        let mut directions = Vec::new();
        let last = if periodic { grid.len() - 1 } else { grid.len() };
        for k in 0..last {
            let root = if values[k] == 0.0 {
                Some((grid[k], grid[k], 0.0))
            } else if k + 1 < grid.len() && values[k + 1] != 0.0 && (values[k] > 0.0) != (values[k + 1] > 0.0) {
                Some((grid[k], grid[k + 1], values[k].abs().max(values[k + 1].abs())))
            } else {
                None
            };
            let Some((a, b, scale)) = root else { continue };
            let theta = refine(&sheet, *kind, a, b, values[k], values[(k + 1).min(grid.len() - 1)])?;
            let f = defining(&sheet.coefficient_profile(theta)?, *kind);
            let h = grid[1] - grid[0];
            let transversality_ok = f.derivative.abs() * h > 1e-8 * scale;
            if !transversality_ok {
                return Err(D4Error::NonTransverse { theta, derivative: f.derivative });
            }
            directions.push(Direction {
                branch,
                theta,
                region: None,
                residual: f.value,
                derivative: f.derivative,
                transversality_ok,
            });
        }
        out.push(DirectionSet { kind: *kind, directions });
    }
    Ok(out)
}

fn linspace(a: f64, b: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals).map(|k| a + (b - a) * k as f64 / intervals as f64).collect()
}

/// Newton iteration safeguarded by the bracket `[a, b]`.
fn refine(sheet: &Sheet, kind: DirectionKind, mut a: f64, mut b: f64, fa: f64, fb: f64) -> Result<f64> {
    if a == b {
        return Ok(a);
    }
    let positive_at_a = fa > 0.0;
    let mut x = a - fa * (b - a) / (fb - fa);
    for _ in 0..100 {
        let f = defining(&sheet.coefficient_profile(x)?, kind);
        if f.value == 0.0 {
            return Ok(x);
        }
        if (f.value > 0.0) == positive_at_a {
            a = x;
        } else {
            b = x;
        }
        let newton = x - f.value / f.derivative;
        let next = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) || b - a <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
