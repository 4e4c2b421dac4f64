//! Budan–Descartes sign-change counts.

use serde::{Deserialize, Serialize};

use crate::poly::UniPoly;

/// Coefficients below this fraction of the largest one count as zero.
const SNAP: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfLine {
    /// Roots `t > α`, read from `p(t + α)`.
    Greater,
    /// Roots `t < α`, read from `p(−t + α)`.
    Less,
}

pub fn sign_changes(coeffs: &[f64]) -> usize {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut last = 0.0;
    let mut count = 0;
    for &c in coeffs {
        if c.abs() <= SNAP * scale {
            continue;
        }
        if last != 0.0 && (c > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = c;
    }
    count
}

/// Upper bound on the number of roots in the half-line, with the same parity.
pub fn budan_sign_changes(poly: &UniPoly, alpha: f64, direction: HalfLine) -> usize {
    let shifted = poly.shift(alpha);
    let p = match direction {
        HalfLine::Greater => shifted,
        HalfLine::Less => shifted.reflect(),
    };
    sign_changes(&p.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_cubic() {
        let p = UniPoly::from_descending(&[1.0, 0.0, -1.0, 0.0]);
        assert_eq!(budan_sign_changes(&p, 0.0, HalfLine::Greater), 1);
        assert_eq!(budan_sign_changes(&p, 0.0, HalfLine::Less), 1);
        assert_eq!(budan_sign_changes(&p, -2.0, HalfLine::Greater), 3);
    }
}
