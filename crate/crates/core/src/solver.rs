//! Blow-up parametrization `b(θ, z) = (x(θ, z), y(θ, z), z)` of the bifurcation set.
//!
//! On the sheet `(ε₁, ε₂)` the points of the set satisfy
//!
//! ```text
//! X = P(x, y, z) + R(x, y, z)² α(θ) = 0,   Y = Q(x, y, z) + R(x, y, z)² β(θ) = 0
//! ```
//!
//! and the branch through `x = y = 0` at `z = 0` is followed by Newton continuation in `z`.
//! Exact derivatives in `(θ, z)` come from solving the same system over truncated series.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use serde::Serialize;

use crate::error::{D4Error, Result};
use crate::poly::{Monomials, Poly3};
use crate::series::{Scalar, Series};
use crate::unfolding::{Sign, UnfoldingSpec};

/// Sheet selector `(ε₁, ε₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Branch {
    pub epsilon1: Sign,
    pub epsilon2: Sign,
}

impl Branch {
    pub fn new(epsilon1: Sign, epsilon2: Sign) -> Self {
        Self { epsilon1, epsilon2 }
    }

    /// Both sheets for a given `ε₁`, `ε₂ = +1` first.
    pub fn sheets(epsilon1: Sign) -> [Branch; 2] {
        [Branch::new(epsilon1, Sign::Plus), Branch::new(epsilon1, Sign::Minus)]
    }

    pub fn elliptic(&self) -> bool {
        self.epsilon1 == Sign::Minus
    }

    /// `σ` in `(α′, β′) = 4σλV`; it is `−1` only on the sheet `(−1, −1)`, where
    /// `α(θ) = α₊(θ + π/2)` turns `sin 3θ (−cos θ, sin θ)` into `−cos 3θ (sin θ, cos θ)`.
    pub fn orientation(&self) -> f64 {
        if self.epsilon1 == Sign::Minus && self.epsilon2 == Sign::Minus {
            -1.0
        } else {
            1.0
        }
    }

    /// The identifier `λ(θ)`: `sin 3θ`, `cos 3θ`, `sinh 3θ` or `cosh 3θ`.
    pub fn lambda(&self, theta: f64) -> f64 {
        match (self.epsilon1, self.epsilon2) {
            (Sign::Minus, Sign::Plus) => (3.0 * theta).sin(),
            (Sign::Minus, Sign::Minus) => (3.0 * theta).cos(),
            (Sign::Plus, Sign::Plus) => (3.0 * theta).sinh(),
            (Sign::Plus, Sign::Minus) => (3.0 * theta).cosh(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChartPoint {
    pub theta: f64,
    pub z: f64,
}

impl ChartPoint {
    pub fn new(theta: f64, z: f64) -> Self {
        Self { theta, z }
    }
}

/// Solver tolerances and the radius of the chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub z_max: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub continuation_step: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { z_max: 0.2, tolerance: 1e-12, max_iterations: 50, continuation_step: 0.02 }
    }
}

/// The θ-dependent functions of a branch, over any scalar type.
pub(crate) struct BranchFns<T> {
    pub alpha: T,
    pub beta: T,
    pub lambda: T,
    pub v: [T; 2],
    /// `ν̃ = nu_weights[0] dX + nu_weights[1] dY`.
    pub nu_weights: [T; 2],
}

impl BranchFns<Series> {
    pub fn new(branch: Branch, th: &Series) -> Self {
        let e2 = branch.epsilon2.value();
        if branch.elliptic() {
            let (c, s) = (th.cos(), th.sin());
            let (c2, s2) = (th.scale(2.0).cos(), th.scale(2.0).sin());
            let alpha = (&c2 * &c2 - &s2 * &s2).scale(0.5) + c2.scale(e2);
            let beta = -(&c2 * &s2) + s2.scale(e2);
            match branch.epsilon2 {
                Sign::Plus => BranchFns {
                    alpha,
                    beta,
                    lambda: th.scale(3.0).sin(),
                    v: [-&c, s.clone()],
                    nu_weights: [s, c],
                },
                Sign::Minus => BranchFns {
                    alpha,
                    beta,
                    lambda: th.scale(3.0).cos(),
                    v: [s.clone(), c.clone()],
                    nu_weights: [c, -s],
                },
            }
        } else {
            let (ch, sh) = (th.cosh(), th.sinh());
            let (c2, s2) = (th.scale(2.0).cosh(), th.scale(2.0).sinh());
            let alpha = (&c2 * &c2 + &s2 * &s2).scale(0.5) + c2.scale(e2);
            let beta = &c2 * &s2 - s2.scale(e2);
            match branch.epsilon2 {
                Sign::Plus => BranchFns {
                    alpha,
                    beta,
                    lambda: th.scale(3.0).sinh(),
                    v: [ch.clone(), sh.clone()],
                    nu_weights: [sh, -ch],
                },
                Sign::Minus => BranchFns {
                    alpha,
                    beta,
                    lambda: th.scale(3.0).cosh(),
                    v: [sh.clone(), ch.clone()],
                    nu_weights: [ch, -sh],
                },
            }
        }
    }
}

pub fn alpha_beta(branch: Branch, theta: f64) -> (f64, f64) {
    let e2 = branch.epsilon2.value();
    if branch.elliptic() {
        let (c2, s2) = ((2.0 * theta).cos(), (2.0 * theta).sin());
        ((c2 * c2 - s2 * s2) / 2.0 + e2 * c2, -c2 * s2 + e2 * s2)
    } else {
        let (c2, s2) = ((2.0 * theta).cosh(), (2.0 * theta).sinh());
        ((c2 * c2 + s2 * s2) / 2.0 + e2 * c2, c2 * s2 - e2 * s2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub x: f64,
    pub y: f64,
    /// ∞-norm of `(X, Y)` at the returned point.
    pub residual: f64,
}

/// First and second partials of one coordinate function in `(θ, z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Derivs2 {
    pub value: f64,
    pub d_theta: f64,
    pub d_z: f64,
    pub d_theta_theta: f64,
    pub d_theta_z: f64,
    pub d_z_z: f64,
}

impl Derivs2 {
    fn from_series(s: &Series) -> Self {
        Self {
            value: s.value(),
            d_theta: s.partial(1, 0),
            d_z: s.partial(0, 1),
            d_theta_theta: s.partial(2, 0),
            d_theta_z: s.partial(1, 1),
            d_z_z: s.partial(0, 2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImplicitJet {
    pub x: Derivs2,
    pub y: Derivs2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameData {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub v: [f64; 2],
    pub a_tilde: [[f64; 2]; 2],
    pub a: f64,
    pub r_tilde: f64,
}

/// Singular directions of a sheet.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SingularDirections {
    /// Angles on the double cover `[0, 2π)` (or on the real line for `ε₁ = +1`).
    Angles(Vec<f64>),
    /// The singular set is `{z = 0}` only.
    ZeroOnly,
}

pub fn singular_directions(branch: Branch) -> SingularDirections {
    match (branch.epsilon1, branch.epsilon2) {
        (Sign::Minus, Sign::Plus) => SingularDirections::Angles((0..6).map(|n| n as f64 * FRAC_PI_3).collect()),
        (Sign::Minus, Sign::Minus) => {
            SingularDirections::Angles((0..6).map(|n| PI / 6.0 + n as f64 * FRAC_PI_3).collect())
        }
        (Sign::Plus, Sign::Plus) => SingularDirections::Angles(vec![0.0]),
        (Sign::Plus, Sign::Minus) => SingularDirections::ZeroOnly,
    }
}

/// Index `n ∈ {0, 1, 2}` of `θ0` among the singular directions, identified with the
/// `ε₂ = +1` directions `nπ/3 (mod π)`; `None` when `θ0` is not singular.
pub(crate) fn singular_index(branch: Branch, theta0: f64, tol: f64) -> Option<usize> {
    if branch.elliptic() {
        let shifted = if branch.epsilon2 == Sign::Plus { theta0 } else { theta0 + FRAC_PI_2 };
        let phi = shifted.rem_euclid(PI);
        let k = (phi / FRAC_PI_3).round();
        if (phi - k * FRAC_PI_3).abs() <= tol {
            Some(k as usize % 3)
        } else {
            None
        }
    } else if branch.epsilon2 == Sign::Plus && theta0.abs() <= tol {
        Some(0)
    } else {
        None
    }
}

/// A sheet with its compiled polynomials.
#[derive(Clone, Debug)]
pub struct Sheet {
    branch: Branch,
    polys: [Poly3; 3],
    grads: [[Poly3; 3]; 3],
    degree: u32,
    options: SolverOptions,
}

/// Truncated series of the sheet around one chart point.
pub(crate) struct LocalExpansion {
    pub x: Series,
    pub y: Series,
    pub z: Series,
    pub r: Series,
    /// Gradients of `X` and `Y` in `(x, y, z)`.
    pub dx: [Series; 3],
    pub dy: [Series; 3],
    pub nu_tilde: [Series; 3],
    pub fns: BranchFns<Series>,
}

impl Sheet {
    pub fn new(spec: &UnfoldingSpec, branch: Branch) -> Result<Self> {
        Self::with_options(spec, branch, SolverOptions::default())
    }

    pub fn with_options(spec: &UnfoldingSpec, branch: Branch, options: SolverOptions) -> Result<Self> {
        if spec.epsilon1() != branch.epsilon1 {
            return Err(D4Error::InvalidArgument(format!(
                "branch epsilon1 {} does not match spec epsilon1 {}",
                branch.epsilon1,
                spec.epsilon1()
            )));
        }
        let polys = spec.polynomials();
        let grads = std::array::from_fn(|n| std::array::from_fn(|v| polys[n].derivative(v)));
        let degree = polys.iter().map(|p| p.degree()).max().unwrap_or(0).max(1);
        Ok(Self { branch, polys, grads, degree, options })
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn options(&self) -> &SolverOptions {
        &self.options
    }

    /// `(X, Y)` and their Jacobian in `(x, y)`.
    fn system(&self, ab: (f64, f64), w: [f64; 2], z: f64) -> ([f64; 2], [[f64; 2]; 2]) {
        let m = Monomials::new(&[w[0], w[1], z], self.degree);
        let r = self.polys[2].eval_with(&m);
        let (rx, ry) = (self.grads[2][0].eval_with(&m), self.grads[2][1].eval_with(&m));
        let f = [self.polys[0].eval_with(&m) + r * r * ab.0, self.polys[1].eval_with(&m) + r * r * ab.1];
        let j = [
            [
                self.grads[0][0].eval_with(&m) + 2.0 * r * rx * ab.0,
                self.grads[0][1].eval_with(&m) + 2.0 * r * ry * ab.0,
            ],
            [
                self.grads[1][0].eval_with(&m) + 2.0 * r * rx * ab.1,
                self.grads[1][1].eval_with(&m) + 2.0 * r * ry * ab.1,
            ],
        ];
        (f, j)
    }

    fn newton(&self, ab: (f64, f64), z: f64, guess: [f64; 2]) -> Result<Solution> {
        let tol = self.options.tolerance;
        let mut w = guess;
        let (mut f, mut j) = self.system(ab, w, z);
        let mut res = f[0].abs().max(f[1].abs());
        for _ in 0..self.options.max_iterations {
            if res <= tol {
                return Ok(Solution { x: w[0], y: w[1], residual: res });
            }
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if !(det.abs() >= 1e-14) {
                return Err(D4Error::SingularJacobian { det });
            }
            let step = [
                -(j[1][1] * f[0] - j[0][1] * f[1]) / det,
                -(-j[1][0] * f[0] + j[0][0] * f[1]) / det,
            ];
            let mut t = 1.0;
            loop {
                let trial = [w[0] + t * step[0], w[1] + t * step[1]];
                let (f2, j2) = self.system(ab, trial, z);
                let res2 = f2[0].abs().max(f2[1].abs());
                if res2 < res || t < 1e-3 {
                    w = trial;
                    f = f2;
                    j = j2;
                    res = res2;
                    break;
                }
                t *= 0.5;
            }
            if !res.is_finite() {
                break;
            }
        }
        if res <= tol {
            return Ok(Solution { x: w[0], y: w[1], residual: res });
        }
        Err(D4Error::NoConvergence { iterations: self.options.max_iterations, residual: res })
    }

    /// Solves `X = Y = 0` at `p`, trying `guess` first and falling back to continuation from `z = 0`.
    pub fn solve(&self, p: ChartPoint, guess: Option<[f64; 2]>) -> Result<Solution> {
        if !(p.z.abs() <= self.options.z_max) || !p.theta.is_finite() {
            return Err(D4Error::InvalidArgument(format!(
                "chart point (theta = {}, z = {}) outside |z| <= {}",
                p.theta, p.z, self.options.z_max
            )));
        }
        let ab = alpha_beta(self.branch, p.theta);
        if let Some(g) = guess {
            if let Ok(s) = self.newton(ab, p.z, g) {
                return Ok(s);
            }
        }
        let base = (p.z.abs() / self.options.continuation_step).ceil().max(1.0) as usize;
        let mut last_err = None;
        for refine in [1, 4, 16] {
            match self.continue_to(ab, p.z, base * refine) {
                Ok(s) => return Ok(s),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.expect("at least one attempt"))
    }

    fn continue_to(&self, ab: (f64, f64), z: f64, steps: usize) -> Result<Solution> {
        let mut prev = [0.0, 0.0];
        let mut cur = [0.0, 0.0];
        let mut sol = Solution { x: 0.0, y: 0.0, residual: 0.0 };
        for k in 1..=steps {
            let zk = z * k as f64 / steps as f64;
            let pred = [2.0 * cur[0] - prev[0], 2.0 * cur[1] - prev[1]];
            sol = self.newton(ab, zk, pred)?;
            prev = cur;
            cur = [sol.x, sol.y];
        }
        Ok(sol)
    }

    /// Series expansion of order `(nt, nz)` around `p`.
    pub(crate) fn expand(&self, p: ChartPoint, nt: usize, nz: usize, sol: Option<Solution>) -> Result<LocalExpansion> {
        let sol = match sol {
            Some(s) => s,
            None => self.solve(p, None)?,
        };
        let ab = alpha_beta(self.branch, p.theta);
        let (_, j) = self.system(ab, [sol.x, sol.y], p.z);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if !(det.abs() >= 1e-14) {
            return Err(D4Error::SingularJacobian { det });
        }
        let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];

        let th = Series::theta(nt, nz, p.theta);
        let zs = Series::z(nt, nz, p.z);
        let fns = BranchFns::new(self.branch, &th);
        let mut xs = Series::constant(nt, nz, sol.x);
        let mut ys = Series::constant(nt, nz, sol.y);
        for _ in 0..nt + nz + 2 {
            let m = Monomials::new(&[xs.clone(), ys.clone(), zs.clone()], self.degree);
            let r = self.polys[2].eval_with(&m);
            let r2 = &r * &r;
            let fx = self.polys[0].eval_with(&m) + &r2 * &fns.alpha;
            let fy = self.polys[1].eval_with(&m) + &r2 * &fns.beta;
            xs = &xs - &(fx.scale(inv[0][0]) + fy.scale(inv[0][1]));
            ys = &ys - &(fx.scale(inv[1][0]) + fy.scale(inv[1][1]));
        }
        let m = Monomials::new(&[xs.clone(), ys.clone(), zs.clone()], self.degree);
        let r = self.polys[2].eval_with(&m);
        let two_r = r.scale(2.0);
        let dr: [Series; 3] = std::array::from_fn(|v| self.grads[2][v].eval_with(&m));
        let dx: [Series; 3] =
            std::array::from_fn(|v| self.grads[0][v].eval_with(&m) + &(&two_r * &dr[v]) * &fns.alpha);
        let dy: [Series; 3] =
            std::array::from_fn(|v| self.grads[1][v].eval_with(&m) + &(&two_r * &dr[v]) * &fns.beta);
        let nu_tilde: [Series; 3] =
            std::array::from_fn(|v| &fns.nu_weights[0] * &dx[v] + &fns.nu_weights[1] * &dy[v]);
        Ok(LocalExpansion { x: xs, y: ys, z: zs, r, dx, dy, nu_tilde, fns })
    }

    pub fn parametrize(&self, p: ChartPoint) -> Result<[f64; 3]> {
        let s = self.solve(p, None)?;
        Ok([s.x, s.y, p.z])
    }

    pub fn implicit_jet(&self, p: ChartPoint) -> Result<ImplicitJet> {
        let e = self.expand(p, 2, 2, None)?;
        Ok(ImplicitJet { x: Derivs2::from_series(&e.x), y: Derivs2::from_series(&e.y) })
    }

    pub fn frame(&self, p: ChartPoint) -> Result<FrameData> {
        let e = self.expand(p, 1, 1, None)?;
        Ok(e.frame(p.z))
    }
}

impl LocalExpansion {
    pub fn frame(&self, z: f64) -> FrameData {
        let (xx, xy) = (self.dx[0].value(), self.dx[1].value());
        let (yx, yy) = (self.dy[0].value(), self.dy[1].value());
        let a_tilde = [[yy, -xy], [-yx, xx]];
        let det = xx * yy - xy * yx;
        let r_tilde = if z == 0.0 {
            // Chain rule: d/dz R(x(θ, z), y(θ, z), z) at z = 0.
            self.r.partial(0, 1)
        } else {
            self.r.value() / z
        };
        FrameData {
            alpha: self.fns.alpha.value(),
            beta: self.fns.beta.value(),
            lambda: self.fns.lambda.value(),
            v: [self.fns.v[0].value(), self.fns.v[1].value()],
            a_tilde,
            a: 4.0 * r_tilde * r_tilde / det,
            r_tilde,
        }
    }

    /// `σ Ã V` as series, so that `w_θ = −z² λ a σ Ã V` on every sheet.
    pub fn a_tilde_v(&self, branch: Branch) -> [Series; 2] {
        let v = &self.fns.v;
        let s = branch.orientation();
        [
            (&self.dy[1] * &v[0] - &self.dx[1] * &v[1]).scale(s),
            (&self.dx[0] * &v[1] - &self.dy[0] * &v[0]).scale(s),
        ]
    }
}

pub fn solve_point(
    spec: &UnfoldingSpec,
    branch: Branch,
    p: ChartPoint,
    guess: Option<[f64; 2]>,
) -> Result<Solution> {
    Sheet::new(spec, branch)?.solve(p, guess)
}

pub fn parametrize(spec: &UnfoldingSpec, branch: Branch, p: ChartPoint) -> Result<[f64; 3]> {
    Sheet::new(spec, branch)?.parametrize(p)
}

pub fn implicit_jet(spec: &UnfoldingSpec, branch: Branch, p: ChartPoint) -> Result<ImplicitJet> {
    Sheet::new(spec, branch)?.implicit_jet(p)
}

pub fn frame(spec: &UnfoldingSpec, branch: Branch, p: ChartPoint) -> Result<FrameData> {
    Sheet::new(spec, branch)?.frame(p)
}
