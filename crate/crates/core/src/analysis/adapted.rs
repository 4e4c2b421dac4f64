//! Hyperbolic-trigonometric polynomials and the adapted-pair test.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{D4Error, Result};
use crate::poly::UniPoly;

/// `Σ c · cosh^i s · sinh^j s`, stored as `(i, j) → c`. The same data read with
/// `cos`/`sin` gives a trigonometric polynomial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HypTrigPoly {
    pub terms: BTreeMap<(u32, u32), f64>,
}

impl HypTrigPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: &[(u32, u32, f64)]) -> Self {
        let mut p = Self::new();
        for &(i, j, c) in terms {
            p.add(i, j, c);
        }
        p
    }

    pub fn add(&mut self, i: u32, j: u32, c: f64) {
        *self.terms.entry((i, j)).or_insert(0.0) += c;
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|(_, c)| **c != 0.0).map(|((i, j), _)| i + j).max().unwrap_or(0)
    }

    pub fn eval_hyperbolic(&self, s: f64) -> f64 {
        let (ch, sh) = (s.cosh(), s.sinh());
        self.terms.iter().map(|((i, j), c)| c * ch.powi(*i as i32) * sh.powi(*j as i32)).sum()
    }

    pub fn eval_trig(&self, s: f64) -> f64 {
        let (c0, s0) = (s.cos(), s.sin());
        self.terms.iter().map(|((i, j), c)| c * c0.powi(*i as i32) * s0.powi(*j as i32)).sum()
    }

    /// `Σ c · t^{power(i, j)} (sign·(1 − t²))^k` with `k = (n − i − j)/2`.
    fn substitute(&self, n: u32, power: impl Fn(u32, u32) -> u32, sign: f64) -> Result<UniPoly> {
        let mut coeffs = vec![0.0; n as usize + 1];
        for (&(i, j), &c) in &self.terms {
            if c == 0.0 {
                continue;
            }
            if i + j > n || (n - i - j) % 2 == 1 {
                return Err(D4Error::ParityViolation);
            }
            let k = (n - i - j) / 2;
            let base = power(i, j) as usize;
            // (sign(1 − t²))^k = Σ_m C(k, m) sign^k (−1)^m t^{2m}
            let mut binom = 1.0;
            for m in 0..=k as usize {
                let term = c * binom * sign.powi(k as i32) * if m % 2 == 0 { 1.0 } else { -1.0 };
                coeffs[base + 2 * m] += term;
                binom = binom * (k as f64 - m as f64) / (m as f64 + 1.0);
            }
        }
        Ok(UniPoly::new(coeffs))
    }
}

/// Whether `(1 − t²)^{n/2} g` and `(1 − t²)^{n/2} h / tⁿ` (with `t = tanh s`)
/// are the same polynomial, in `t` and `1/t` respectively.
pub fn adapted_pair_check(g: &HypTrigPoly, h: &HypTrigPoly, n: u32) -> Result<bool> {
    // g: cosh^i sinh^j ↦ t^j (1 − t²)^k; h: cosh^i sinh^j ↦ u^i (u² − 1)^k with u = 1/t.
    let pg = g.substitute(n, |_, j| j, 1.0)?;
    let ph = h.substitute(n, |i, _| i, -1.0)?;
    let scale = pg.coeffs.iter().chain(&ph.coeffs).fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    let len = pg.coeffs.len().max(ph.coeffs.len());
    let at = |p: &UniPoly, k: usize| p.coeffs.get(k).copied().unwrap_or(0.0);
    Ok((0..len).all(|k| (at(&pg, k) - at(&ph, k)).abs() <= 1e-12 * scale))
}
