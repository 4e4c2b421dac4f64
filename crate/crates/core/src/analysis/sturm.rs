//! Exact Sturm-sequence root counting.
//!
//! Coefficients are converted to rationals without rounding (every finite
//! `f64` is a dyadic rational), so the count is exact for the polynomial as
//! stored. Endpoints may be rational, `±1/√3`, or infinite; signs at
//! `a + b√3` are decided exactly.

use std::cmp::Ordering;

use num::{BigRational, Zero};

use crate::error::{D4Error, Result};
use crate::poly::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Endpoint {
    NegInfinity,
    PosInfinity,
    Finite(f64),
    /// `1/√3` when `true`, `−1/√3` when `false`.
    InvSqrt3(bool),
}

impl Endpoint {
    pub fn inv_sqrt3(positive: bool) -> Endpoint {
        Endpoint::InvSqrt3(positive)
    }

    fn approx(&self) -> f64 {
        match *self {
            Endpoint::NegInfinity => f64::NEG_INFINITY,
            Endpoint::PosInfinity => f64::INFINITY,
            Endpoint::Finite(x) => x,
            Endpoint::InvSqrt3(p) => (if p { 1.0 } else { -1.0 }) / 3f64.sqrt(),
        }
    }
}

type RatPoly = Vec<BigRational>;

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| D4Error::InvalidArgument(format!("non-finite coefficient {x}")))
}

fn trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &RatPoly) -> RatPoly {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(k.into())).collect())
}

fn remainder(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &lead;
        for (k, c) in b.iter().enumerate() {
            r[k + shift] -= &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Sign of `a + b√3`.
fn surd_sign(a: &BigRational, b: &BigRational) -> Ordering {
    let zero = BigRational::zero();
    let (sa, sb) = (a.cmp(&zero), b.cmp(&zero));
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let three = BigRational::from_integer(3.into());
    match (a * a).cmp(&(&three * b * b)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

fn sign_at(p: &RatPoly, x: &Endpoint) -> Result<Ordering> {
    let zero = BigRational::zero();
    Ok(match *x {
        Endpoint::PosInfinity => p.last().unwrap().cmp(&zero),
        Endpoint::NegInfinity => {
            let s = p.last().unwrap().cmp(&zero);
            if (p.len() - 1) % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }
        Endpoint::Finite(v) => {
            let v = rational(v)?;
            p.iter().rev().fold(BigRational::zero(), |acc, c| acc * &v + c).cmp(&zero)
        }
        Endpoint::InvSqrt3(positive) => {
            // x = c√3 with c = ±1/3; (a + b√3)·c√3 = 3bc + ac√3
            let c = BigRational::new((if positive { 1 } else { -1 }).into(), 3.into());
            let three = BigRational::from_integer(3.into());
            let (mut a, mut b) = (BigRational::zero(), BigRational::zero());
            for k in p.iter().rev() {
                let na = &three * &b * &c + k;
                let nb = &a * &c;
                a = na;
                b = nb;
            }
            surd_sign(&a, &b)
        }
    })
}

fn variations(seq: &[RatPoly], x: &Endpoint) -> Result<usize> {
    let mut count = 0;
    let mut last = Ordering::Equal;
    for p in seq {
        let s = sign_at(p, x)?;
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    Ok(count)
}

/// Number of distinct real roots of `poly` in the open interval `(lo, hi)`.
pub fn sturm_root_count(poly: &UniPoly, lo: Endpoint, hi: Endpoint) -> Result<usize> {
    if !(lo.approx() < hi.approx()) {
        return Err(D4Error::InvalidArgument("empty interval".into()));
    }
    let p0 = trim(poly.coeffs.iter().map(|c| rational(*c)).collect::<Result<_>>()?);
    if p0.is_empty() {
        return Err(D4Error::InvalidArgument("zero polynomial".into()));
    }
    let mut seq = vec![p0.clone()];
    let p1 = derivative(&p0);
    if !p1.is_empty() {
        seq.push(p1);
        loop {
            let n = seq.len();
            let r: RatPoly = remainder(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
            if r.is_empty() {
                break;
            }
            seq.push(r);
        }
    }
    if seq.last().unwrap().len() > 1 {
        return Err(D4Error::NonSquareFree);
    }
    let on_hi = sign_at(&p0, &hi)? == Ordering::Equal;
    let (vl, vh) = (variations(&seq, &lo)?, variations(&seq, &hi)?);
    Ok(vl - vh - usize::from(on_hi))
}
