//! Dense and sparse polynomial helpers.

use std::collections::BTreeMap;

use crate::series::Scalar;

/// Sparse polynomial in three variables with monomial coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly3 {
    terms: BTreeMap<[u32; 3], f64>,
}

impl Poly3 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, exps: [u32; 3], c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(exps).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &f64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: [u32; 3]) -> f64 {
        self.terms.get(&exps).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn derivative(&self, var: usize) -> Poly3 {
        let mut out = Poly3::new();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = *e;
                e2[var] -= 1;
                out.add_term(e2, c * e[var] as f64);
            }
        }
        out
    }

    pub fn eval<T: Scalar>(&self, x: &[T; 3]) -> T {
        self.eval_with(&Monomials::new(x, self.degree()))
    }

    /// Evaluates against a shared table of monomials of at least this degree.
    pub fn eval_with<T: Scalar>(&self, m: &Monomials<T>) -> T {
        let mut acc = m.get([0, 0, 0]).lift(0.0);
        for (e, c) in &self.terms {
            acc = acc + m.get(*e).scale(*c);
        }
        acc
    }

    /// Substitutes `x_m = Σ_l a[m][l] x'_l` and returns the polynomial in `x'`.
    pub fn compose_linear(&self, a: &[[f64; 3]; 3]) -> Poly3 {
        let linear: Vec<Poly3> = (0..3)
            .map(|m| {
                let mut p = Poly3::new();
                for l in 0..3 {
                    let mut e = [0; 3];
                    e[l] = 1;
                    p.add_term(e, a[m][l]);
                }
                p
            })
            .collect();
        let mut out = Poly3::new();
        for (e, c) in &self.terms {
            let mut m = Poly3::new();
            m.add_term([0, 0, 0], *c);
            for (var, &power) in e.iter().enumerate() {
                for _ in 0..power {
                    m = m.mul(&linear[var]);
                }
            }
            for (e2, c2) in m.terms {
                out.add_term(e2, c2);
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        out
    }
}

/// All monomials `x^i y^j z^k` with `i + j + k ≤ degree`, each built from a
/// lower one with a single product.
pub struct Monomials<T> {
    degree: u32,
    values: Vec<Option<T>>,
}

impl<T: Scalar> Monomials<T> {
    pub fn new(x: &[T; 3], degree: u32) -> Self {
        let d = degree as usize + 1;
        let mut values: Vec<Option<T>> = vec![None; d * d * d];
        let at = |e: [u32; 3]| (e[0] as usize * d + e[1] as usize) * d + e[2] as usize;
        values[0] = Some(x[0].lift(1.0));
        for total in 1..=degree {
            for i in 0..=total {
                for j in 0..=total - i {
                    let e = [i, j, total - i - j];
                    let v = (0..3).find(|&v| e[v] > 0).unwrap();
                    let mut lower = e;
                    lower[v] -= 1;
                    let prev = values[at(lower)].clone().unwrap();
                    values[at(e)] = Some(if total == 1 { x[v].clone() } else { prev * x[v].clone() });
                }
            }
        }
        Self { degree, values }
    }

    pub fn get(&self, e: [u32; 3]) -> &T {
        let d = self.degree as usize + 1;
        self.values[(e[0] as usize * d + e[1] as usize) * d + e[2] as usize].as_ref().expect("monomial within degree")
    }
}

/// Univariate polynomial with coefficients in ascending order of degree.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    pub coeffs: Vec<f64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// Builds from coefficients listed from the highest degree down.
    pub fn from_descending(c: &[f64]) -> Self {
        Self::new(c.iter().rev().copied().collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::new(vec![0.0]);
        }
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    /// Coefficients of `p(t + alpha)`.
    pub fn shift(&self, alpha: f64) -> UniPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                c[k] += alpha * c[k + 1];
            }
        }
        UniPoly::new(c)
    }

    /// Coefficients of `p(-t)`.
    pub fn reflect(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { *c })
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Real roots in increasing order, isolated through the critical points and refined by bisection.
    pub fn real_roots(&self) -> Vec<f64> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let lead = *self.coeffs.last().unwrap();
        let bound = 1.0 + self.coeffs[..self.degree()].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
        let mut breaks = vec![-bound];
        breaks.extend(self.derivative().real_roots().into_iter().filter(|r| r.abs() < bound));
        breaks.push(bound);
        let mut roots: Vec<f64> = Vec::new();
        for w in breaks.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if fa == 0.0 {
                if roots.last().map_or(true, |r| *r != a) {
                    roots.push(a);
                }
                continue;
            }
            if fa * fb > 0.0 {
                continue;
            }
            if fb == 0.0 {
                roots.push(b);
                continue;
            }
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = self.eval(m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if (fm > 0.0) == (fa > 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        roots.dedup();
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (t - 1)(t + 2)(t - 0.5)
        let p = UniPoly::from_descending(&[1.0, 0.5, -2.5, 1.0]);
        let r = p.real_roots();
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([-2.0, 0.5, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(UniPoly::from_descending(&[1.0, 0.0, 1.0]).real_roots().len(), 0);
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = UniPoly::from_descending(&[2.0, -1.0, 3.0, 0.5]);
        let q = p.shift(0.7);
        for t in [-1.0, 0.0, 0.3, 2.0] {
            assert!((q.eval(t) - p.eval(t + 0.7)).abs() < 1e-12);
            assert!((p.reflect().eval(t) - p.eval(-t)).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_composition() {
        let mut p = Poly3::new();
        p.add_term([2, 0, 1], 1.5);
        p.add_term([0, 1, 0], -2.0);
        let a = [[0.3, -1.0, 0.2], [0.5, 0.1, 0.0], [1.0, 0.0, 2.0]];
        let q = p.compose_linear(&a);
        let xp = [0.4, -0.7, 1.1];
        let x: Vec<f64> = (0..3).map(|m| (0..3).map(|l| a[m][l] * xp[l]).sum()).collect();
        assert!((q.eval(&xp) - p.eval(&[x[0], x[1], x[2]])).abs() < 1e-13);
        assert!((p.derivative(0).eval(&xp) - 3.0 * xp[0] * xp[2]).abs() < 1e-14);
    }
}
