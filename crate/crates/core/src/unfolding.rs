//! The versal unfolding `F(u, v, x)` of a D4 germ and its parameter functions `P, Q, R`.
//!
//! ```text
//! F = u³/6 + ε₁ u v²/2 + P u + Q v + R (u² − ε₁ v²)/2
//! G_n(x) = Σ g_{n,ijk} / (i! j! k!) x^i y^j z^k,   (G_1, G_2, G_3) = (P, Q, R)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{Matrix3, SMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{D4Error, Result};
use crate::poly::Poly3;
use crate::series::factorial;

/// A sign `±1`, serialized as the integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = String;
    fn try_from(v: i64) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got {v}")),
        }
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Index `(n, i, j, k)` of the coefficient `g_{n,ijk}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffKey {
    pub n: u8,
    pub i: u8,
    pub j: u8,
    pub k: u8,
}

impl CoeffKey {
    pub fn new(n: u8, i: u8, j: u8, k: u8) -> Self {
        Self { n, i, j, k }
    }

    pub fn degree(&self) -> u32 {
        (self.i + self.j + self.k) as u32
    }
}

impl fmt::Display for CoeffKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g_{{{},{}{}{}}}", self.n, self.i, self.j, self.k)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffEntry {
    n: u8,
    i: u8,
    j: u8,
    k: u8,
    value: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    epsilon1: Sign,
    #[serde(default = "default_degree")]
    max_degree: u32,
    coeffs: Vec<CoeffEntry>,
}

fn default_degree() -> u32 {
    3
}

/// Truncated coefficients of `P, Q, R` together with `ε₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecFile", into = "SpecFile")]
pub struct UnfoldingSpec {
    epsilon1: Sign,
    max_degree: u32,
    coeffs: BTreeMap<CoeffKey, f64>,
}

impl TryFrom<SpecFile> for UnfoldingSpec {
    type Error = D4Error;
    fn try_from(f: SpecFile) -> Result<Self> {
        let mut spec = UnfoldingSpec::new(f.epsilon1, f.max_degree)?;
        for e in f.coeffs {
            let key = CoeffKey::new(e.n, e.i, e.j, e.k);
            if spec.coeffs.contains_key(&key) {
                return Err(D4Error::InvalidSpec(format!("duplicate coefficient {key}")));
            }
            spec.set(key, e.value)?;
        }
        Ok(spec)
    }
}

impl From<UnfoldingSpec> for SpecFile {
    fn from(s: UnfoldingSpec) -> SpecFile {
        SpecFile {
            epsilon1: s.epsilon1,
            max_degree: s.max_degree,
            coeffs: s
                .coeffs
                .iter()
                .map(|(key, v)| CoeffEntry { n: key.n, i: key.i, j: key.j, k: key.k, value: *v })
                .collect(),
        }
    }
}

impl UnfoldingSpec {
    pub fn new(epsilon1: Sign, max_degree: u32) -> Result<Self> {
        if max_degree < 1 {
            return Err(D4Error::InvalidSpec("max_degree must be at least 1".into()));
        }
        Ok(Self { epsilon1, max_degree, coeffs: BTreeMap::new() })
    }

    /// `P = x, Q = y, R = z`.
    pub fn canonical(epsilon1: Sign) -> Self {
        let mut s = Self::new(epsilon1, 3).expect("degree 3 is valid");
        s.coeffs.insert(CoeffKey::new(1, 1, 0, 0), 1.0);
        s.coeffs.insert(CoeffKey::new(2, 0, 1, 0), 1.0);
        s.coeffs.insert(CoeffKey::new(3, 0, 0, 1), 1.0);
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn epsilon1(&self) -> Sign {
        self.epsilon1
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn coeffs(&self) -> &BTreeMap<CoeffKey, f64> {
        &self.coeffs
    }

    pub fn g(&self, n: u8, i: u8, j: u8, k: u8) -> f64 {
        self.coeffs.get(&CoeffKey::new(n, i, j, k)).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, key: CoeffKey, value: f64) -> Result<()> {
        if !(1..=3).contains(&key.n) {
            return Err(D4Error::InvalidSpec(format!("{key}: n must be 1, 2 or 3")));
        }
        let d = key.degree();
        if d < 1 || d > self.max_degree {
            return Err(D4Error::InvalidSpec(format!(
                "{key}: total degree {d} outside 1..={}",
                self.max_degree
            )));
        }
        if !value.is_finite() {
            return Err(D4Error::InvalidSpec(format!("{key}: value is not finite")));
        }
        if value == 0.0 {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
        Ok(())
    }

    /// Builder form of [`set`](Self::set); panics on an out-of-range key.
    pub fn with(mut self, n: u8, i: u8, j: u8, k: u8, value: f64) -> Self {
        self.set(CoeffKey::new(n, i, j, k), value).expect("valid coefficient key");
        self
    }

    /// `ξ = g_{2,002}`.
    pub fn xi(&self) -> f64 {
        self.g(2, 0, 0, 2)
    }

    /// `η = g_{1,002}`.
    pub fn eta(&self) -> f64 {
        self.g(1, 0, 0, 2)
    }

    /// `ζ = g_{3,001}`.
    pub fn zeta(&self) -> f64 {
        self.g(3, 0, 0, 1)
    }

    /// Linear part as the matrix with rows `(g_{n,100}, g_{n,010}, g_{n,001})`.
    pub fn linear_part(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|r, c| {
            let n = r as u8 + 1;
            match c {
                0 => self.g(n, 1, 0, 0),
                1 => self.g(n, 0, 1, 0),
                _ => self.g(n, 0, 0, 1),
            }
        })
    }

    /// `P, Q, R` as monomial polynomials.
    pub fn polynomials(&self) -> [Poly3; 3] {
        let mut out = [Poly3::new(), Poly3::new(), Poly3::new()];
        for (key, v) in &self.coeffs {
            let denom = factorial(key.i as usize) * factorial(key.j as usize) * factorial(key.k as usize);
            out[key.n as usize - 1].add_term([key.i as u32, key.j as u32, key.k as u32], v / denom);
        }
        out
    }

    /// Rebuilds `g` coefficients from monomial polynomials.
    fn from_polynomials(epsilon1: Sign, max_degree: u32, polys: &[Poly3; 3]) -> Result<Self> {
        let mut spec = Self::new(epsilon1, max_degree)?;
        for (n, p) in polys.iter().enumerate() {
            for (e, c) in p.terms() {
                let scale = factorial(e[0] as usize) * factorial(e[1] as usize) * factorial(e[2] as usize);
                spec.set(CoeffKey::new(n as u8 + 1, e[0] as u8, e[1] as u8, e[2] as u8), c * scale)?;
            }
        }
        Ok(spec)
    }
}

/// Value, gradient and Hessian of one parameter function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ScalarJet {
    pub value: f64,
    pub gradient: [f64; 3],
    pub hessian: [[f64; 3]; 3],
}

/// Jets of `(P, Q, R)`; entries beyond the requested order are zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PqrJet {
    pub order: u8,
    pub p: ScalarJet,
    pub q: ScalarJet,
    pub r: ScalarJet,
}

pub fn evaluate_jet(spec: &UnfoldingSpec, x: [f64; 3], order: u8) -> Result<PqrJet> {
    if order > 2 {
        return Err(D4Error::InvalidArgument(format!("jet order {order} exceeds 2")));
    }
    let polys = spec.polynomials();
    let mut jets = [ScalarJet::default(); 3];
    for (jet, poly) in jets.iter_mut().zip(&polys) {
        jet.value = poly.eval(&x);
        if order >= 1 {
            for a in 0..3 {
                let da = poly.derivative(a);
                jet.gradient[a] = da.eval(&x);
                if order >= 2 {
                    for b in 0..3 {
                        jet.hessian[a][b] = da.derivative(b).eval(&x);
                    }
                }
            }
        }
    }
    Ok(PqrJet { order, p: jets[0], q: jets[1], r: jets[2] })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormReport {
    pub is_normal: bool,
    pub violated_conditions: Vec<String>,
    pub morse_rank: usize,
}

pub fn validate_normal_form(spec: &UnfoldingSpec) -> NormalFormReport {
    let mut violated = Vec::new();
    for (n, i, j, k) in [(1, 0, 1, 0), (1, 0, 0, 1), (2, 0, 0, 1)] {
        if spec.g(n, i, j, k) != 0.0 {
            violated.push(format!("{}=0", CoeffKey::new(n, i, j, k)));
        }
    }
    for (n, i, j, k) in [(1, 1, 0, 0), (2, 0, 1, 0), (3, 0, 0, 1)] {
        if spec.g(n, i, j, k) <= 0.0 {
            violated.push(format!("{}>0", CoeffKey::new(n, i, j, k)));
        }
    }
    let rank = morse_rank(spec);
    if rank != 2 {
        violated.push("morse_rank=2".to_string());
    }
    NormalFormReport { is_normal: violated.is_empty(), violated_conditions: violated, morse_rank: rank }
}

/// Numeric rank of the second-derivative matrix of `F` at the origin.
///
/// Rows are `∂u` and `∂v`; columns are `(u, v, x, y, z)`.
pub fn morse_rank(spec: &UnfoldingSpec) -> usize {
    // At the origin F_uu = u + R, F_uv = ε₁ v, F_vv = ε₁(u − R) all vanish.
    let lin = spec.linear_part();
    let m = SMatrix::<f64, 2, 5>::from_fn(|r, c| if c < 2 { 0.0 } else { lin[(r, c - 2)] });
    let sv = m.svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > 1e-10 * smax).count()
}

/// `det` of the `(u, v)` Hessian of `F`: `ε₁(u² − R²) − v²`.
pub fn hessian_det(spec: &UnfoldingSpec, u: f64, v: f64, x: [f64; 3]) -> f64 {
    let r = spec.polynomials()[2].eval(&x);
    spec.epsilon1().value() * (u * u - r * r) - v * v
}

/// Reduces an unfolding with arbitrary nonsingular linear part to normal form.
///
/// Returns the orthogonal substitution `M` (old coordinates `x = M x'`, columns are the
/// signed Gram-Schmidt vectors) and the spec of `x' ↦ G(M x')`, whose linear part is
/// lower triangular with positive diagonal.
pub fn reduce_to_normal_form(
    epsilon1: Sign,
    linear: &Matrix3<f64>,
    higher: &BTreeMap<CoeffKey, f64>,
    max_degree: u32,
) -> Result<(Matrix3<f64>, UnfoldingSpec)> {
    let det = linear.determinant();
    let scale = linear.row_iter().map(|r| r.norm()).product::<f64>();
    if !det.is_finite() || scale == 0.0 || det.abs() <= 1e-14 * scale {
        return Err(D4Error::SingularLinearPart { det });
    }
    let mut spec = UnfoldingSpec::new(epsilon1, max_degree)?;
    for (key, v) in higher {
        if key.degree() >= 2 {
            spec.set(*key, *v)?;
        }
    }
    for r in 0..3 {
        for (c, (i, j, k)) in [(1, 0, 0), (0, 1, 0), (0, 0, 1)].into_iter().enumerate() {
            spec.set(CoeffKey::new(r as u8 + 1, i, j, k), linear[(r, c)])?;
        }
    }
    reduce_spec(&spec)
}

/// [`reduce_to_normal_form`] applied to the linear and higher terms of `spec`.
pub fn reduce_spec(spec: &UnfoldingSpec) -> Result<(Matrix3<f64>, UnfoldingSpec)> {
    let lin = spec.linear_part();
    let det = lin.determinant();
    let scale = lin.row_iter().map(|r| r.norm()).product::<f64>();
    if !det.is_finite() || scale == 0.0 || det.abs() <= 1e-14 * scale {
        return Err(D4Error::SingularLinearPart { det });
    }
    let mut basis: Vec<nalgebra::Vector3<f64>> = Vec::with_capacity(3);
    for r in 0..3 {
        let mut v = lin.row(r).transpose();
        for b in &basis {
            v -= *b * b.dot(&v);
        }
        // Second pass for numerical orthogonality.
        for b in &basis {
            v -= *b * b.dot(&v);
        }
        basis.push(v.normalize());
    }
    let mut m = Matrix3::from_columns(&basis);
    // Sign fix: the diagonal of the new linear part L M must be positive.
    let new_lin = lin * m;
    for c in 0..3 {
        if new_lin[(c, c)] < 0.0 {
            m.column_mut(c).neg_mut();
        }
    }
    let a: [[f64; 3]; 3] = std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]));
    let polys = spec.polynomials().map(|p| p.compose_linear(&a));
    let mut out = UnfoldingSpec::from_polynomials(spec.epsilon1(), spec.max_degree(), &polys)?;
    for (n, i, j, k) in [(1, 0, 1, 0), (1, 0, 0, 1), (2, 0, 0, 1)] {
        out.set(CoeffKey::new(n, i, j, k), 0.0)?;
    }
    Ok((m, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_of_canonical_spec() {
        let s = UnfoldingSpec::canonical(Sign::Minus);
        let j = evaluate_jet(&s, [0.2, -0.1, 0.3], 2).unwrap();
        assert_eq!((j.p.value, j.q.value, j.r.value), (0.2, -0.1, 0.3));
        assert_eq!(j.p.gradient, [1.0, 0.0, 0.0]);
        let s = s.with(2, 0, 0, 2, 1.0);
        let j = evaluate_jet(&s, [0.0, 0.0, 0.4], 2).unwrap();
        assert!((j.q.value - 0.08).abs() < 1e-15);
        assert_eq!(j.q.hessian[2][2], 1.0);
        assert!(evaluate_jet(&s, [0.0; 3], 3).is_err());
    }

    #[test]
    fn validation_flags_each_condition() {
        let c = UnfoldingSpec::canonical(Sign::Minus);
        assert!(validate_normal_form(&c).is_normal);
        let r = validate_normal_form(&c.clone().with(1, 0, 1, 0, 0.5));
        assert_eq!(r.violated_conditions, vec!["g_{1,010}=0"]);
        let r = validate_normal_form(&c.with(3, 0, 0, 1, -1.0));
        assert_eq!(r.violated_conditions, vec!["g_{3,001}>0"]);
    }

    #[test]
    fn morse_rank_examples() {
        assert_eq!(morse_rank(&UnfoldingSpec::canonical(Sign::Plus)), 2);
        let zero = UnfoldingSpec::new(Sign::Minus, 3).unwrap().with(1, 2, 0, 0, 1.0);
        assert_eq!(morse_rank(&zero), 0);
        let one = UnfoldingSpec::new(Sign::Minus, 3).unwrap().with(1, 1, 0, 0, 1.0).with(3, 0, 0, 1, 1.0);
        assert_eq!(morse_rank(&one), 1);
    }

    #[test]
    fn hessian_determinant_examples() {
        let m = UnfoldingSpec::canonical(Sign::Minus);
        assert!(hessian_det(&m, 0.3, 0.4, [0.0, 0.0, 0.5]).abs() < 1e-15);
        let p = UnfoldingSpec::canonical(Sign::Plus);
        assert!(hessian_det(&p, 0.5, 0.3, [0.0, 0.0, 0.4]).abs() < 1e-15);
        assert_eq!(hessian_det(&p, 0.0, 0.0, [0.0; 3]), 0.0);
    }

    #[test]
    fn reduction_examples() {
        let (m, s) = reduce_to_normal_form(Sign::Minus, &Matrix3::identity(), &BTreeMap::new(), 3).unwrap();
        assert_eq!(m, Matrix3::identity());
        assert_eq!(s, UnfoldingSpec::canonical(Sign::Minus));

        let c = std::f64::consts::FRAC_1_SQRT_2;
        let rot = Matrix3::new(c, -c, 0.0, c, c, 0.0, 0.0, 0.0, 1.0);
        let (m, s) = reduce_to_normal_form(Sign::Minus, &rot, &BTreeMap::new(), 3).unwrap();
        assert!((m - rot.transpose()).abs().max() < 1e-15);
        for (key, v) in s.coeffs() {
            let expect = UnfoldingSpec::canonical(Sign::Minus).g(key.n, key.i, key.j, key.k);
            assert!((v - expect).abs() < 1e-15, "{key}");
        }

        let flip = Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, 1.0, 1.0));
        let (m, s) = reduce_to_normal_form(Sign::Plus, &flip, &BTreeMap::new(), 3).unwrap();
        assert_eq!(m, flip);
        assert_eq!(s.g(1, 1, 0, 0), 1.0);

        let singular = Matrix3::new(1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            reduce_to_normal_form(Sign::Minus, &singular, &BTreeMap::new(), 3),
            Err(D4Error::SingularLinearPart { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_strictness() {
        let s = UnfoldingSpec::canonical(Sign::Minus).with(2, 0, 0, 2, 1.0);
        assert_eq!(UnfoldingSpec::from_json(&s.to_json()).unwrap(), s);
        let bad = r#"{"epsilon1": -1, "coeffs": [], "extra": 1}"#;
        assert!(UnfoldingSpec::from_json(bad).is_err());
        let bad_sign = r#"{"epsilon1": 2, "coeffs": []}"#;
        assert!(UnfoldingSpec::from_json(bad_sign).is_err());
        let bad_key = r#"{"epsilon1": 1, "coeffs": [{"n":4,"i":1,"j":0,"k":0,"value":1.0}]}"#;
        assert!(UnfoldingSpec::from_json(bad_key).is_err());
    }
}
