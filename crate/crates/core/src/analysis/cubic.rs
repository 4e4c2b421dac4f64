//! Parabolic cubics, their discriminants and the configuration tables.
//!
//! Region labels follow the table convention: a root `v` (`cot θ`, `tan θ` or
//! the hyperbolic root `t`) is labelled `1` when `v > τ`, `2` when `|v| < τ`
//! and `3` when `v < −τ`, with `τ = 1/√3` for `ε₁ = −1` and `τ = 1` for `ε₁ = +1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{D4Error, Result};
use crate::analysis::sturm::{sturm_root_count, Endpoint};
use crate::poly::UniPoly;
use crate::unfolding::{Sign, UnfoldingSpec};

/// Absolute tolerance under which a sign quantity counts as zero.
pub const SIGN_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationInput {
    pub xi: f64,
    pub eta: f64,
    pub zeta: f64,
    pub epsilon1: Sign,
}

impl ClassificationInput {
    pub fn new(xi: f64, eta: f64, zeta: f64, epsilon1: Sign) -> Self {
        Self { xi, eta, zeta, epsilon1 }
    }

    pub fn from_spec(spec: &UnfoldingSpec) -> Self {
        Self::new(spec.xi(), spec.eta(), spec.zeta(), spec.epsilon1())
    }

    /// `ξ ≠ 0` and `ζ > 0`. `η = ζ²` is accepted: for `ε₁ = −1` it only puts a
    /// root at `t = 0`, and for `ε₁ = +1` it is the table boundary `c₄ = 0`.
    pub fn check_nondegenerate(&self) -> Result<()> {
        let reason = if !(self.zeta > 0.0) {
            "zeta<=0"
        } else if self.xi.abs() <= SIGN_TOLERANCE {
            "xi=0"
        } else {
            return Ok(());
        };
        Err(D4Error::DegenerateInput { reason: reason.into() })
    }

    /// Threshold `τ` separating the three regions.
    pub fn tau(&self) -> f64 {
        match self.epsilon1 {
            Sign::Minus => 1.0 / 3f64.sqrt(),
            Sign::Plus => 1.0,
        }
    }

    /// Region label of a root `v`.
    pub fn region(&self, v: f64) -> u8 {
        let tau = self.tau();
        if v > tau {
            1
        } else if v < -tau {
            3
        } else {
            2
        }
    }
}

/// `c3 t³ + c2 t² + c1 t + c0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CubicPoly {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CubicPoly {
    pub fn new(c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        Self { c3, c2, c1, c0 }
    }

    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::from_descending(&[self.c3, self.c2, self.c1, self.c0])
    }

    pub fn eval(&self, t: f64) -> f64 {
        ((self.c3 * t + self.c2) * t + self.c1) * t + self.c0
    }

    /// `18abcd − 4b³d + b²c² − 4ac³ − 27a²d²`.
    pub fn discriminant(&self) -> f64 {
        let (a, b, c, d) = (self.c3, self.c2, self.c1, self.c0);
        18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * a * c.powi(3) - 27.0 * a * a * d * d
    }

    pub fn real_roots(&self) -> Vec<f64> {
        self.to_unipoly().real_roots()
    }
}

/// `p` (or `p(−t)` for `ε₂ = −1`) when `ε₁ = −1`; `q` when `ε₁ = +1`.
pub fn parabolic_cubic(input: &ClassificationInput, epsilon2: Sign) -> Result<CubicPoly> {
    input.check_nondegenerate()?;
    let ClassificationInput { xi, eta, zeta, epsilon1 } = *input;
    let z2 = zeta * zeta;
    Ok(match (epsilon1, epsilon2) {
        (Sign::Minus, Sign::Plus) => CubicPoly::new(xi, eta + 3.0 * z2, xi, eta - z2),
        (Sign::Minus, Sign::Minus) => CubicPoly::new(-xi, eta + 3.0 * z2, -xi, eta - z2),
        (Sign::Plus, _) => CubicPoly::new(-xi, eta + 3.0 * z2, xi, -eta + z2),
    })
}

/// `D₋₁` or `D₁` from the closed forms in `(ξ, η, ζ)`.
pub fn discriminant(input: &ClassificationInput) -> f64 {
    let ClassificationInput { xi, eta, zeta, epsilon1 } = *input;
    let (x2, e2, z2) = (xi * xi, eta * eta, zeta * zeta);
    let quarter = match epsilon1 {
        Sign::Minus => {
            -x2 * x2 - 2.0 * x2 * e2 - e2 * e2 + 24.0 * x2 * eta * z2 - 8.0 * e2 * eta * z2 - 18.0 * x2 * z2 * z2
                - 18.0 * e2 * z2 * z2
                + 27.0 * z2.powi(4)
        }
        Sign::Plus => {
            x2 * x2 - 2.0 * x2 * e2 + e2 * e2 + 24.0 * x2 * eta * z2 + 8.0 * e2 * eta * z2 - 18.0 * x2 * z2 * z2
                + 18.0 * e2 * z2 * z2
                - 27.0 * z2.powi(4)
        }
    };
    4.0 * quarter
}

/// Multiset pair `(ijk|lmn)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Regions {
    pub first: Vec<u8>,
    pub second: Vec<u8>,
}

impl Regions {
    pub fn parse(s: &str) -> Regions {
        let (a, b) = s.split_once('|').expect("configuration has a bar");
        let digits = |x: &str| x.bytes().map(|c| c - b'0').collect::<Vec<u8>>();
        Regions { first: digits(a), second: digits(b) }
    }

    pub fn from_unsorted(mut first: Vec<u8>, mut second: Vec<u8>) -> Regions {
        first.sort_unstable();
        second.sort_unstable();
        Regions { first, second }
    }
}

impl fmt::Display for Regions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[u8]| v.iter().map(|d| d.to_string()).collect::<String>();
        write!(f, "({}|{})", s(&self.first), s(&self.second))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigurationLabel {
    pub case_name: String,
    pub regions: Regions,
    pub discriminant: f64,
    pub discriminant_sign: i8,
    /// Number of parabolic directions per sheet pair (3 or 1).
    pub count: usize,
}

/// One row of a configuration table as printed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub case: &'static str,
    /// Required signs of `(ξ, c₃)` (`ε₁ = +1` only).
    pub prefix: Option<[bool; 2]>,
    /// Required signs of the five table columns; `None` is "any".
    pub signs: [Option<bool>; 5],
    pub positive: Option<&'static str>,
    /// `None` is a "no" entry.
    pub negative: Option<&'static str>,
}

const P: Option<bool> = Some(true);
const M: Option<bool> = Some(false);
const ANY: Option<bool> = None;

const fn row(
    case: &'static str,
    signs: [Option<bool>; 5],
    positive: &'static str,
    negative: &'static str,
) -> TableRow {
    TableRow { case, prefix: None, signs, positive: Some(positive), negative: Some(negative) }
}

const fn hrow(
    case: &'static str,
    prefix: [bool; 2],
    signs: [Option<bool>; 5],
    positive: &'static str,
    negative: Option<&'static str>,
) -> TableRow {
    TableRow { case, prefix: Some(prefix), signs, positive: Some(positive), negative }
}

/// Columns `ξ, −ξ+√3η, ξ+√3η, c₁, c₂`.
const ELLIPTIC_TABLE: [TableRow; 10] = [
    row("I-1", [P, P, P, P, ANY], "223|122", "3|1"),
    row("I-2-1-1", [P, M, P, P, P], "222|222", "2|2"),
    row("I-2-1-2", [P, M, P, P, M], "233|112", "2|2"),
    row("I-2-2-1", [P, M, M, ANY, P], "122|223", "1|3"),
    row("I-2-2-2", [P, M, M, P, M], "133|113", "1|3"),
    row("II-1-1-1", [M, P, P, ANY, M], "122|223", "1|3"),
    row("II-1-2-1", [M, P, M, P, M], "112|233", "2|2"),
    row("II-1-2-2", [M, P, M, M, M], "222|222", "2|2"),
    row("II-2-2-1", [M, M, M, P, M], "113|133", "3|1"),
    row("II-2-2-2", [M, M, M, M, ANY], "223|122", "3|1"),
];

/// Prefix `(ξ, c₃)`; columns `3ξ+c₃, 3ξ−c₃, ξ+c₃, ξ−c₃, c₄`.
const HYPERBOLIC_TABLE: [TableRow; 13] = [
    hrow("I-1-1", [true, true], [P, P, P, ANY, P], "122|223", Some("1|3")),
    hrow("I-1-2", [true, true], [P, P, P, ANY, M], "122|223", None),
    hrow("I-2-1", [true, true], [P, M, P, M, P], "122|223", Some("1|3")),
    hrow("I-2-2", [true, true], [P, M, P, M, M], "122|223", None),
    hrow("II-1-1", [false, true], [P, M, P, M, P], "223|122", Some("3|1")),
    hrow("II-2-1", [false, true], [M, M, P, M, P], "223|122", Some("3|1")),
    hrow("II-3-1", [false, true], [M, M, M, M, P], "223|122", Some("3|1")),
    hrow("II-1-2", [false, true], [P, M, P, M, M], "223|122", None),
    hrow("II-2-2", [false, true], [M, M, ANY, M, M], "223|122", Some("3|1")),
    hrow("III-1-1", [false, false], [M, M, M, M, P], "223|122", Some("3|1")),
    hrow("III-2-1", [false, false], [M, ANY, M, P, P], "113|133", Some("3|1")),
    hrow("IV-1-1", [true, false], [ANY, P, M, P, P], "133|133", Some("1|3")),
    hrow("IV-2-1", [true, false], [P, P, P, P, P], "122|223", Some("1|3")),
];

/// Table entries that contradict the 1↔3 interchange rule and the root
/// localization; the classifier reports the consistent configuration.
const ERRATA: [(&str, bool, &str); 1] = [("IV-1-1", true, "133|113")];

/// The configuration tables exactly as printed.
pub fn printed_table(epsilon1: Sign) -> &'static [TableRow] {
    match epsilon1 {
        Sign::Minus => &ELLIPTIC_TABLE,
        Sign::Plus => &HYPERBOLIC_TABLE,
    }
}

/// Names and values of the sign quantities: the `(ξ, c₃)` prefix (empty for
/// `ε₁ = −1`) and the five table columns.
pub fn sign_quantities(input: &ClassificationInput) -> (Vec<(&'static str, f64)>, [(&'static str, f64); 5]) {
    let ClassificationInput { xi, eta, zeta, epsilon1 } = *input;
    let z2 = zeta * zeta;
    let s3 = 3f64.sqrt();
    match epsilon1 {
        Sign::Minus => (
            Vec::new(),
            [
                ("xi", xi),
                ("-xi+sqrt3*eta", -xi + s3 * eta),
                ("xi+sqrt3*eta", xi + s3 * eta),
                ("c1", s3 * xi + eta + 3.0 * z2),
                ("c2", s3 * xi - eta - 3.0 * z2),
            ],
        ),
        Sign::Plus => {
            let c3 = eta + 3.0 * z2;
            let c4 = -eta + z2;
            (
                vec![("xi", xi), ("c3", c3)],
                [
                    ("3xi+c3", 3.0 * xi + c3),
                    ("3xi-c3", 3.0 * xi - c3),
                    ("xi+c3", xi + c3),
                    ("xi-c3", xi - c3),
                    ("c4", c4),
                ],
            )
        }
    }
}

/// The printed row whose sign pattern matches `input`, ignoring the discriminant.
pub fn matching_row(input: &ClassificationInput) -> Result<&'static TableRow> {
    input.check_nondegenerate()?;
    let (prefix, cols) = sign_quantities(input);
    for (name, v) in prefix.iter().chain(cols.iter()) {
        if v.abs() <= SIGN_TOLERANCE {
            return Err(D4Error::BoundaryCase { quantity: (*name).to_string() });
        }
    }
    let pre: Vec<bool> = prefix.iter().map(|(_, v)| *v > 0.0).collect();
    let signs: Vec<bool> = cols.iter().map(|(_, v)| *v > 0.0).collect();
    printed_table(input.epsilon1)
        .iter()
        .find(|r| {
            r.prefix.map_or(true, |p| p[..] == pre[..])
                && r.signs.iter().zip(&signs).all(|(want, got)| want.map_or(true, |w| w == *got))
        })
        .ok_or_else(|| {
            let pattern: String = pre.iter().chain(&signs).map(|b| if *b { '+' } else { '-' }).collect();
            D4Error::InfeasibleRegion { case: format!("sign pattern {pattern}") }
        })
}

pub fn classify_configuration(input: &ClassificationInput) -> Result<ConfigurationLabel> {
    let row = matching_row(input)?;
    let d = discriminant(input);
    if d.abs() <= SIGN_TOLERANCE {
        return Err(D4Error::BoundaryCase { quantity: "D".into() });
    }
    let positive = d > 0.0;
    let printed = if positive { row.positive } else { row.negative };
    let config = ERRATA
        .iter()
        .find(|(case, pos, _)| *case == row.case && *pos == positive)
        .map(|(_, _, c)| *c)
        .or(printed)
        .ok_or_else(|| D4Error::InfeasibleRegion { case: row.case.to_string() })?;
    let regions = Regions::parse(config);
    Ok(ConfigurationLabel {
        case_name: row.case.to_string(),
        count: regions.first.len(),
        regions,
        discriminant: d,
        discriminant_sign: if positive { 1 } else { -1 },
    })
}

/// Region multiset obtained by exact Sturm counts of the parabolic cubic(s)
/// on the three intervals cut out by `±τ`; independent of the tables.
pub fn oracle_regions(input: &ClassificationInput) -> Result<Regions> {
    let bounds = match input.epsilon1 {
        Sign::Minus => (Endpoint::inv_sqrt3(false), Endpoint::inv_sqrt3(true)),
        Sign::Plus => (Endpoint::Finite(-1.0), Endpoint::Finite(1.0)),
    };
    let tags = |cubic: CubicPoly| -> Result<Vec<u8>> {
        let p = cubic.to_unipoly();
        let total = sturm_root_count(&p, Endpoint::NegInfinity, Endpoint::PosInfinity)?;
        let counts = [
            sturm_root_count(&p, bounds.1, Endpoint::PosInfinity)?,
            sturm_root_count(&p, bounds.0, bounds.1)?,
            sturm_root_count(&p, Endpoint::NegInfinity, bounds.0)?,
        ];
        if counts.iter().sum::<usize>() != total {
            return Err(D4Error::BoundaryCase { quantity: "root at region boundary".into() });
        }
        Ok((1..=3u8).zip(counts).flat_map(|(label, n)| std::iter::repeat(label).take(n)).collect())
    };
    let first = tags(parabolic_cubic(input, Sign::Plus)?)?;
    let second = match input.epsilon1 {
        Sign::Minus => tags(parabolic_cubic(input, Sign::Minus)?)?,
        Sign::Plus => first.iter().map(|r| 4 - r).collect(),
    };
    Ok(Regions::from_unsorted(first, second))
}
