//! Truncated bivariate Taylor series in the chart increments `(dθ, dz)`.
//!
//! A [`Series`] of order `(nt, nz)` stores the coefficients `c[i][j]` of
//! `dθ^i dz^j` for `i <= nt`, `j <= nz`. Binary operations truncate to the
//! smaller order of the two operands, so every stored coefficient is exact up
//! to floating-point rounding.

use std::ops::{Add, Mul, Neg, Sub};

use smallvec::{smallvec, SmallVec};

/// Ring operations shared by `f64` and [`Series`], used for generic polynomial evaluation.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// A constant with the same shape as `self`.
    fn lift(&self, v: f64) -> Self;
    fn scale(&self, k: f64) -> Self;
}

impl Scalar for f64 {
    fn lift(&self, v: f64) -> Self {
        v
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    nt: usize,
    nz: usize,
    c: SmallVec<[f64; 16]>,
}

impl Series {
    pub fn zeros(nt: usize, nz: usize) -> Self {
        Self { nt, nz, c: smallvec![0.0; (nt + 1) * (nz + 1)] }
    }

    pub fn constant(nt: usize, nz: usize, v: f64) -> Self {
        let mut s = Self::zeros(nt, nz);
        s.c[0] = v;
        s
    }

    /// The coordinate `θ0 + dθ`.
    pub fn theta(nt: usize, nz: usize, theta0: f64) -> Self {
        let mut s = Self::constant(nt, nz, theta0);
        if nt > 0 {
            s.set(1, 0, 1.0);
        }
        s
    }

    /// The coordinate `z0 + dz`.
    pub fn z(nt: usize, nz: usize, z0: f64) -> Self {
        let mut s = Self::constant(nt, nz, z0);
        if nz > 0 {
            s.set(0, 1, 1.0);
        }
        s
    }

    pub fn order(&self) -> (usize, usize) {
        (self.nt, self.nz)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.nz + 1) + j
    }

    /// Coefficient of `dθ^i dz^j`; zero outside the stored range.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i <= self.nt && j <= self.nz {
            self.c[self.idx(i, j)]
        } else {
            0.0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.c[k] = v;
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The partial derivative `∂θ^i ∂z^j` at the base point.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * factorial(i) * factorial(j)
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn truncate(&self, nt: usize, nz: usize) -> Self {
        let (nt, nz) = (nt.min(self.nt), nz.min(self.nz));
        let mut out = Self::zeros(nt, nz);
        for i in 0..=nt {
            for j in 0..=nz {
                out.set(i, j, self.coeff(i, j));
            }
        }
        out
    }

    pub fn d_theta(&self) -> Self {
        let nt = self.nt.saturating_sub(1);
        let mut out = Self::zeros(nt, self.nz);
        if self.nt == 0 {
            return out;
        }
        for i in 0..=nt {
            for j in 0..=self.nz {
                out.set(i, j, (i + 1) as f64 * self.coeff(i + 1, j));
            }
        }
        out
    }

    pub fn d_z(&self) -> Self {
        let nz = self.nz.saturating_sub(1);
        let mut out = Self::zeros(self.nt, nz);
        if self.nz == 0 {
            return out;
        }
        for i in 0..=self.nt {
            for j in 0..=nz {
                out.set(i, j, (j + 1) as f64 * self.coeff(i, j + 1));
            }
        }
        out
    }

    /// Division by `dz`, assuming the `dz^0` column vanishes (base point at `z = 0`).
    pub fn div_dz(&self) -> Self {
        let nz = self.nz.saturating_sub(1);
        let mut out = Self::zeros(self.nt, nz);
        for i in 0..=self.nt {
            for j in 0..=nz {
                out.set(i, j, self.coeff(i, j + 1));
            }
        }
        out
    }

    /// The univariate series in `dθ` formed by the `dz^j` coefficients.
    pub fn z_slice(&self, j: usize) -> Self {
        let mut out = Self::zeros(self.nt, 0);
        for i in 0..=self.nt {
            out.set(i, 0, self.coeff(i, j));
        }
        out
    }

    /// Composes a univariate function with this series, given its Taylor
    /// coefficients `f^(k)(v)/k!` at `v = self.value()`.
    pub fn compose(&self, taylor: &[f64]) -> Self {
        let mut h = self.clone();
        h.c[0] = 0.0;
        let kmax = (self.nt + self.nz).min(taylor.len().saturating_sub(1));
        let mut acc = Self::constant(self.nt, self.nz, taylor[kmax]);
        for k in (0..kmax).rev() {
            acc = &acc * &h;
            acc.c[0] += taylor[k];
        }
        acc
    }

    fn compose_with(&self, deriv: impl Fn(usize, f64) -> f64) -> Self {
        let v = self.value();
        let n = self.nt + self.nz;
        let taylor: Vec<f64> = (0..=n).map(|k| deriv(k, v) / factorial(k)).collect();
        self.compose(&taylor)
    }

    pub fn recip(&self) -> Self {
        self.compose_with(|k, v| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s * factorial(k) / v.powi(k as i32 + 1)
        })
    }

    pub fn sqrt(&self) -> Self {
        self.compose_with(|k, v| {
            // d^k/dv^k v^(1/2) = (1/2)(1/2 - 1)...(1/2 - k + 1) v^(1/2 - k)
            let mut c = 1.0;
            for m in 0..k {
                c *= 0.5 - m as f64;
            }
            c * v.powf(0.5 - k as f64)
        })
    }

    pub fn sin(&self) -> Self {
        self.compose_with(|k, v| match k % 4 {
            0 => v.sin(),
            1 => v.cos(),
            2 => -v.sin(),
            _ => -v.cos(),
        })
    }

    pub fn cos(&self) -> Self {
        self.compose_with(|k, v| match k % 4 {
            0 => v.cos(),
            1 => -v.sin(),
            2 => -v.cos(),
            _ => v.sin(),
        })
    }

    pub fn sinh(&self) -> Self {
        self.compose_with(|k, v| if k % 2 == 0 { v.sinh() } else { v.cosh() })
    }

    pub fn cosh(&self) -> Self {
        self.compose_with(|k, v| if k % 2 == 0 { v.cosh() } else { v.sinh() })
    }

    pub fn dot3(a: &[Series; 3], b: &[Series; 3]) -> Series {
        &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let (nt, nz) = (self.nt.min(other.nt), self.nz.min(other.nz));
        let mut out = Self::zeros(nt, nz);
        for i in 0..=nt {
            for j in 0..=nz {
                out.set(i, j, f(self.coeff(i, j), other.coeff(i, j)));
            }
        }
        out
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl Add<&Series> for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub<&Series> for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul<&Series> for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let (nt, nz) = (self.nt.min(rhs.nt), self.nz.min(rhs.nz));
        let mut out = Series::zeros(nt, nz);
        for i1 in 0..=nt {
            for j1 in 0..=nz {
                let a = self.c[self.idx(i1, j1)];
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..=nt - i1 {
                    let row = &rhs.c[rhs.idx(i2, 0)..=rhs.idx(i2, nz - j1)];
                    let base = out.idx(i1 + i2, j1);
                    for (o, b) in out.c[base..=base + nz - j1].iter_mut().zip(row) {
                        *o += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { nt: self.nt, nz: self.nz, c: self.c.iter().map(|v| -v).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Series> for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series {
                (&self).$m(rhs)
            }
        }
        impl $tr<Series> for &Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

impl Scalar for Series {
    fn lift(&self, v: f64) -> Self {
        Series::constant(self.nt, self.nz, v)
    }
    fn scale(&self, k: f64) -> Self {
        Series { nt: self.nt, nz: self.nz, c: self.c.iter().map(|v| v * k).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_of_theta_matches_taylor() {
        let th = Series::theta(4, 0, 0.7);
        let s = th.scale(3.0).sin();
        // d^k/dθ^k sin(3θ) = 3^k sin(3θ + kπ/2)
        for k in 0..=4 {
            let expect = 3f64.powi(k as i32) * (2.1 + k as f64 * std::f64::consts::FRAC_PI_2).sin();
            assert!((s.partial(k, 0) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn recip_and_sqrt_invert() {
        let mut a = Series::theta(2, 3, 0.4);
        a = &a * &Series::z(2, 3, 1.3) + a.lift(2.0);
        let one = &a * &a.recip();
        assert!((one.value() - 1.0).abs() < 1e-14);
        let sq = a.sqrt();
        let back = &sq * &sq;
        for i in 0..=2 {
            for j in 0..=3 {
                assert!((back.coeff(i, j) - a.coeff(i, j)).abs() < 1e-13);
                if i + j > 0 {
                    assert!(one.coeff(i, j).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn derivatives_shift_orders() {
        let th = Series::theta(2, 2, 0.0);
        let z = Series::z(2, 2, 0.0);
        let f = &(&th * &z) * &z;
        assert_eq!(f.d_theta().coeff(0, 2), 1.0);
        assert_eq!(f.d_z().coeff(1, 1), 2.0);
        assert_eq!(f.div_dz().coeff(1, 1), 1.0);
        assert_eq!(f.d_theta().order(), (1, 2));
    }
}
