//! Normals, fundamental forms, curvatures and their asymptotics near `z = 0`.
//!
//! With `w = (x, y)`, the θ-derivative factors as `w_θ = −z² λ a σ Ã V` (`σ` is
//! [`Branch::orientation`]), which gives
//!
//! ```text
//! E = z⁴λ²a² Ê    F = z³λa F̂    G = |b_z|²
//! L = z²λa |ν̃|⁻¹ L̂    M = z²λa |ν̃|⁻¹ M̂    N = |ν̃|⁻¹ N̂
//! Ê = |ÃV|²   F̂ = −σÃV·w_z / z   L̂ = σÃV·ν̃_θ   M̂ = σÃV·ν̃_z   N̂ = −b_z·ν̃_z
//! ```
//!
//! The coefficients `E0, E1, …` are the `z`-Taylor coefficients of the hatted
//! quantities at `z = 0`.

use serde::Serialize;

use crate::error::{D4Error, Result};
use crate::series::{Scalar, Series};
use crate::solver::{singular_index, Branch, ChartPoint, LocalExpansion, Sheet, Solution};
use crate::unfolding::UnfoldingSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Curvatures {
    pub k: f64,
    pub h: f64,
    /// The principal curvature that diverges like `1/(z²λ)`.
    pub kappa1: f64,
    /// The principal curvature that stays bounded.
    pub kappa2: f64,
    /// Principal directions in the `(∂θ, ∂z)` basis, scaled so that they tend
    /// to `(L0, 0)` and `(−M0, L0)` as `z → 0`.
    pub v1: [f64; 2],
    pub v2: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceSample {
    pub point: ChartPoint,
    pub position: [f64; 3],
    pub b_theta: [f64; 3],
    pub b_z: [f64; 3],
    pub nu_tilde: [f64; 3],
    pub nu: [f64; 3],
    pub forms: FundamentalForms,
    /// `None` on the singular set `z²λ = 0`.
    pub curvatures: Option<Curvatures>,
    pub lambda_value: f64,
    pub a: f64,
    pub residual: f64,
}

fn values(v: &[Series; 3]) -> [f64; 3] {
    [v[0].value(), v[1].value(), v[2].value()]
}

fn is_singular(p: ChartPoint, lambda: f64) -> bool {
    p.z == 0.0 || lambda.abs() <= 1e-12
}

impl Sheet {
    /// Evaluates the surface at `p`; `guess` seeds the Newton solve (continuation along a grid).
    pub fn sample(&self, p: ChartPoint, guess: Option<[f64; 2]>) -> Result<SurfaceSample> {
        let sol = self.solve(p, guess)?;
        self.sample_at(p, sol)
    }

    pub(crate) fn sample_at(&self, p: ChartPoint, sol: Solution) -> Result<SurfaceSample> {
        let ex = self.expand(p, 2, 2, Some(sol))?;
        let b = [ex.x.clone(), ex.y.clone(), ex.z.clone()];
        let bt: [Series; 3] = std::array::from_fn(|i| b[i].d_theta());
        let bz: [Series; 3] = std::array::from_fn(|i| b[i].d_z());
        let len2 = Series::dot3(&ex.nu_tilde, &ex.nu_tilde);
        let norm = len2.value().sqrt();
        if !(norm >= 1e-12) {
            return Err(D4Error::DegenerateNormal { norm });
        }
        let inv = len2.sqrt().recip();
        let nu: [Series; 3] = std::array::from_fn(|i| &ex.nu_tilde[i] * &inv);
        let nut: [Series; 3] = std::array::from_fn(|i| nu[i].d_theta());
        let nuz: [Series; 3] = std::array::from_fn(|i| nu[i].d_z());
        let dot = |a: &[Series; 3], c: &[Series; 3]| Series::dot3(a, c).value();
        let forms = FundamentalForms {
            e: dot(&bt, &bt),
            f: dot(&bt, &bz),
            g: dot(&bz, &bz),
            l: -dot(&bt, &nut),
            m: -dot(&bt, &nuz),
            n: -dot(&bz, &nuz),
        };
        let fr = ex.frame(p.z);
        let curvatures = if is_singular(p, fr.lambda) {
            None
        } else {
            Some(principal(&forms, p.z * p.z * fr.lambda * fr.a, norm))
        };
        Ok(SurfaceSample {
            point: p,
            position: [sol.x, sol.y, p.z],
            b_theta: values(&bt),
            b_z: values(&bz),
            nu_tilde: values(&ex.nu_tilde),
            nu: values(&nu),
            forms,
            curvatures,
            lambda_value: fr.lambda,
            a: fr.a,
            residual: sol.residual,
        })
    }
}

/// Principal curvatures and directions; `s = z²λa`, `norm = |ν̃|`.
fn principal(ff: &FundamentalForms, s: f64, norm: f64) -> Curvatures {
    let FundamentalForms { e, f, g, l, m, n } = *ff;
    let det1 = e * g - f * f;
    let k = (l * n - m * m) / det1;
    let h = (e * n - 2.0 * f * m + g * l) / (2.0 * det1);
    let disc = (h * h - k).max(0.0).sqrt();
    let kappa1 = if h >= 0.0 { h + disc } else { h - disc };
    let kappa2 = if kappa1 == 0.0 { 0.0 } else { k / kappa1 };
    let i_tilde = det1 / (s * s);
    let c1 = s * norm * i_tilde;
    let c2 = norm / s;
    Curvatures {
        k,
        h,
        kappa1,
        kappa2,
        v1: [c1 * (-n + kappa1 * g), c1 * (m - kappa1 * f)],
        v2: [c2 * (-m + kappa2 * f), c2 * (l - kappa2 * e)],
    }
}

pub fn sample(spec: &UnfoldingSpec, branch: Branch, p: ChartPoint) -> Result<SurfaceSample> {
    Sheet::new(spec, branch)?.sample(p, None)
}

pub fn normal_vector(spec: &UnfoldingSpec, branch: Branch, p: ChartPoint) -> Result<([f64; 3], [f64; 3])> {
    let s = sample(spec, branch, p)?;
    Ok((s.nu_tilde, s.nu))
}

pub fn fundamental_forms(spec: &UnfoldingSpec, branch: Branch, p: ChartPoint) -> Result<FundamentalForms> {
    Ok(sample(spec, branch, p)?.forms)
}

pub fn curvatures(spec: &UnfoldingSpec, branch: Branch, p: ChartPoint) -> Result<Curvatures> {
    sample(spec, branch, p)?.curvatures.ok_or(D4Error::SingularPoint { theta: p.theta, z: p.z })
}

/// The `z`-expansion coefficients at one angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpansionCoefficients {
    pub theta: f64,
    pub e0: f64,
    pub e1: f64,
    pub f0: f64,
    pub g0: f64,
    pub g1: f64,
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub m0: f64,
    pub n0: f64,
    pub n1: f64,
    pub i_tilde0: f64,
    /// `a(θ, 0)`.
    pub a0: f64,
    /// `|ν̃(θ, 0)|`.
    pub nu_norm0: f64,
}

/// Univariate θ-series of the coefficients, used for the ridge and subparabolic conditions.
pub(crate) struct CoefficientProfile {
    pub e0: Series,
    pub e1: Series,
    pub l0: Series,
    pub m0: Series,
    pub n0: Series,
    pub n1: Series,
    pub a0: Series,
    pub lambda: Series,
}

/// Value and θ-derivative of a function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct WithDerivative {
    pub value: f64,
    pub derivative: f64,
}

impl WithDerivative {
    pub(crate) fn of(s: &Series) -> Self {
        Self { value: s.value(), derivative: s.partial(1, 0) }
    }
}

impl CoefficientProfile {
    /// `C₁ = a(2λ′E0 + 3λE0′) + 2λE0 a′`.
    pub fn c1(&self) -> WithDerivative {
        let t = &(&self.lambda.d_theta() * &self.e0).scale(2.0) + &(&self.lambda * &self.e0.d_theta()).scale(3.0);
        let c = &self.a0 * &t + (&(&self.lambda * &self.e0) * &self.a0.d_theta()).scale(2.0);
        WithDerivative::of(&c)
    }

    /// `C₂ = −E1 L0 N0 + E0′ M0 N0 + 2E0(L0 N1 − M0 N0′)`.
    pub fn c2(&self) -> WithDerivative {
        let a = -(&(&self.e1 * &self.l0) * &self.n0);
        let b = &(&self.e0.d_theta() * &self.m0) * &self.n0;
        let c = (&self.e0 * &(&self.l0 * &self.n1 - &self.m0 * &self.n0.d_theta())).scale(2.0);
        WithDerivative::of(&(&(&a + &b) + &c))
    }

    /// `C₃ = 2E0 N0′ − E0′ N0`.
    pub fn c3(&self) -> WithDerivative {
        let c = (&self.e0 * &self.n0.d_theta()).scale(2.0) - &self.e0.d_theta() * &self.n0;
        WithDerivative::of(&c)
    }
}

struct HatSeries {
    e_hat: Series,
    f_hat: Series,
    g: Series,
    l_hat: Series,
    m_hat: Series,
    n_hat: Series,
    a: Series,
    nu_norm: Series,
}

fn hat_series(ex: &LocalExpansion, branch: Branch) -> HatSeries {
    let av = ex.a_tilde_v(branch);
    let e_hat = &av[0] * &av[0] + &av[1] * &av[1];
    let (xz, yz) = (ex.x.d_z(), ex.y.d_z());
    let f_hat = -(&av[0] * &xz + &av[1] * &yz).div_dz();
    let bz = [xz, yz, ex.z.d_z()];
    let g = Series::dot3(&bz, &bz);
    let nut: [Series; 3] = std::array::from_fn(|i| ex.nu_tilde[i].d_theta());
    let nuz: [Series; 3] = std::array::from_fn(|i| ex.nu_tilde[i].d_z());
    let l_hat = &av[0] * &nut[0] + &av[1] * &nut[1];
    let m_hat = &av[0] * &nuz[0] + &av[1] * &nuz[1];
    let n_hat = -Series::dot3(&bz, &nuz);
    let det = &ex.dx[0] * &ex.dy[1] - &ex.dx[1] * &ex.dy[0];
    let r_tilde = ex.r.div_dz();
    let a = (&(&r_tilde * &r_tilde) * &det.recip()).scale(4.0);
    let nu_norm = Series::dot3(&ex.nu_tilde, &ex.nu_tilde).sqrt();
    HatSeries { e_hat, f_hat, g, l_hat, m_hat, n_hat, a, nu_norm }
}

impl Sheet {
    pub fn expansion_coefficients(&self, theta: f64) -> Result<ExpansionCoefficients> {
        let p = ChartPoint::new(theta, 0.0);
        let ex = self.expand(p, 1, 4, Some(Solution { x: 0.0, y: 0.0, residual: 0.0 }))?;
        let h = hat_series(&ex, self.branch());
        let e0 = h.e_hat.coeff(0, 0);
        Ok(ExpansionCoefficients {
            theta,
            e0,
            e1: h.e_hat.coeff(0, 1),
            f0: h.f_hat.coeff(0, 0),
            g0: h.g.coeff(0, 2),
            g1: h.g.coeff(0, 3),
            l0: h.l_hat.coeff(0, 0),
            l1: h.l_hat.coeff(0, 1),
            l2: h.l_hat.coeff(0, 2),
            l3: h.l_hat.coeff(0, 3),
            m0: h.m_hat.coeff(0, 0),
            n0: h.n_hat.coeff(0, 0),
            n1: h.n_hat.coeff(0, 1),
            i_tilde0: e0,
            a0: h.a.coeff(0, 0),
            nu_norm0: h.nu_norm.coeff(0, 0),
        })
    }

    pub(crate) fn coefficient_profile(&self, theta: f64) -> Result<CoefficientProfile> {
        self.coefficient_profile_order(theta, 2)
    }

    /// With `nt = 1` only the values of `C₁, C₂, C₃` are meaningful.
    pub(crate) fn coefficient_profile_order(&self, theta: f64, nt: usize) -> Result<CoefficientProfile> {
        let p = ChartPoint::new(theta, 0.0);
        let ex = self.expand(p, nt, 3, Some(Solution { x: 0.0, y: 0.0, residual: 0.0 }))?;
        let h = hat_series(&ex, self.branch());
        Ok(CoefficientProfile {
            e0: h.e_hat.z_slice(0),
            e1: h.e_hat.z_slice(1),
            l0: h.l_hat.z_slice(0),
            m0: h.m_hat.z_slice(0),
            n0: h.n_hat.z_slice(0),
            n1: h.n_hat.z_slice(1),
            a0: h.a.z_slice(0),
            lambda: ex.fns.lambda.z_slice(0),
        })
    }
}

pub fn expansion_coefficients(spec: &UnfoldingSpec, branch: Branch, theta: f64) -> Result<ExpansionCoefficients> {
    Sheet::new(spec, branch)?.expansion_coefficients(theta)
}

/// Limits at `z = 0` of the singular and limiting normal curvatures of the
/// cuspidal edge `z ↦ b(θ0, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeCurvatures {
    pub theta0: f64,
    /// `|κ_s|`; the sign depends on an orientation convention that is not fixed here.
    pub kappa_s_limit: f64,
    pub kappa_n_limit: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    /// The coefficient combination whose vanishing is equivalent to `κ_n = 0` at `θ0`.
    pub kappa_n_predicate: f64,
    /// The `K` combination whose vanishing is equivalent to `κ_s = 0` at `θ0`.
    pub kappa_s_predicate: f64,
}

/// The `K1, K2, K3` polynomials in the normal-form coefficients.
pub fn edge_k_polynomials(spec: &UnfoldingSpec) -> (f64, f64, f64) {
    let g1 = spec.g(1, 1, 0, 0);
    let g21 = spec.g(2, 1, 0, 0);
    let g22 = spec.g(2, 0, 1, 0);
    let (xi, eta, zeta) = (spec.xi(), spec.eta(), spec.zeta());
    let z2 = zeta * zeta;
    let sq = g22 * g22 + g21 * g21;
    let k1 = g1 * xi * g21 - sq * (eta + 3.0 * z2);
    let k2 = (-2.0 * eta + 3.0 * z2) * sq + g1 * (2.0 * xi * g21 + 9.0 * g1 * z2);
    let k3 = g1 * (g1 * xi - eta * g21 + 3.0 * g21 * z2);
    (k1, k2, k3)
}

impl Sheet {
    pub fn edge_curvatures(&self, spec: &UnfoldingSpec, theta0: f64) -> Result<EdgeCurvatures> {
        let idx = singular_index(self.branch(), theta0, 1e-9).ok_or(D4Error::NotSingularDirection { theta: theta0 })?;
        let p = ChartPoint::new(theta0, 0.0);
        let ex = self.expand(p, 0, 3, Some(Solution { x: 0.0, y: 0.0, residual: 0.0 }))?;
        let bz = [ex.x.partial(0, 1), ex.y.partial(0, 1), 1.0];
        let bzz = [ex.x.partial(0, 2), ex.y.partial(0, 2), 0.0];
        let nt = values(&ex.nu_tilde);
        let norm = (nt[0] * nt[0] + nt[1] * nt[1] + nt[2] * nt[2]).sqrt();
        if !(norm >= 1e-12) {
            return Err(D4Error::DegenerateNormal { norm });
        }
        let nu = [nt[0] / norm, nt[1] / norm, nt[2] / norm];
        let bz2 = bz[0] * bz[0] + bz[1] * bz[1] + bz[2] * bz[2];
        let kappa_n = (bzz[0] * nu[0] + bzz[1] * nu[1] + bzz[2] * nu[2]) / bz2;
        let cross = [
            bz[1] * bzz[2] - bz[2] * bzz[1],
            bz[2] * bzz[0] - bz[0] * bzz[2],
            bz[0] * bzz[1] - bz[1] * bzz[0],
        ];
        let det = cross[0] * nu[0] + cross[1] * nu[1] + cross[2] * nu[2];
        let kappa_s = det.abs() / bz2.powf(1.5);
        let (k1, k2, k3) = edge_k_polynomials(spec);
        let (xi, eta) = (spec.xi(), spec.eta());
        let s3 = 3f64.sqrt();
        let (kappa_n_predicate, kappa_s_predicate) = match idx {
            0 => (xi, k1),
            1 => (-s3 * eta - xi, k2 + 2.0 * s3 * k3),
            _ => (-s3 * eta + xi, -k2 + 2.0 * s3 * k3),
        };
        Ok(EdgeCurvatures {
            theta0,
            kappa_s_limit: kappa_s,
            kappa_n_limit: kappa_n,
            k1,
            k2,
            k3,
            kappa_n_predicate,
            kappa_s_predicate,
        })
    }
}

pub fn edge_curvatures(spec: &UnfoldingSpec, branch: Branch, theta0: f64) -> Result<EdgeCurvatures> {
    Sheet::new(spec, branch)?.edge_curvatures(spec, theta0)
}
