//! Small dense linear algebra with an explicit tolerance policy.
//!
//! Two arithmetic routes share one matrix type: floating point (SVD based,
//! with a relative singular-value cutoff) and exact rationals (fraction-free
//! elimination over big integers). The exterior-algebra kernel used by the
//! projective statics and kinematics lives in [`exterior`].

pub mod exact;
pub mod exterior;
pub mod float;

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

pub use exterior::{contract, pairing, wedge, Bivector, DualBivector};

/// Field element usable by the generic matrix builders: `f64` or `BigRational`.
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> + ToPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self;

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Zero test for verdicts: exact for rationals, `|x| ≤ bound` for doubles.
    fn is_negligible(&self, bound: f64) -> bool;
}

/// Default relative threshold for floating zero tests.
pub const NEGLIGIBLE: f64 = 1e-9;

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn is_negligible(&self, bound: f64) -> bool {
        self.abs() <= bound
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_negligible(&self, _bound: f64) -> bool {
        self.is_zero()
    }
}

/// Exact conversion of a finite double into a rational.
pub fn rational_from_f64(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or(Error::NonFiniteEntry { row: 0, col: 0 })
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type Matrix = Dense<f64>;
pub type RationalMatrix = Dense<BigRational>;

impl<T: Scalar> Dense<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        Ok(Dense { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim(cols, r.len())?;
            data.extend(r.iter().cloned());
        }
        Ok(Dense {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Dense<U> {
        Dense {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let mut m = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s = (0..self.cols).fold(T::zero(), |acc, k| {
                    acc + self.get(r, k).clone() * other.get(k, c).clone()
                });
                m.set(r, c, s);
            }
        }
        Ok(m)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.rows == 0 {
            return Ok(other.clone());
        }
        if other.rows == 0 {
            return Ok(self.clone());
        }
        check_dim(self.cols, other.cols)?;
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Dense {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn to_f64(&self) -> Matrix {
        self.map(|x| x.as_f64())
    }
}

impl Matrix {
    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|x| !x.is_finite()) {
            Some(k) => Err(Error::NonFiniteEntry {
                row: k / self.cols.max(1),
                col: k % self.cols.max(1),
            }),
            None => Ok(()),
        }
    }

    /// Exact rational image of every entry (finite doubles are dyadic rationals).
    pub fn to_exact(&self) -> Result<RationalMatrix> {
        self.check_finite()?;
        Ok(self.map(|x| BigRational::from_float(*x).unwrap_or_else(BigRational::zero)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Floating,
    ExactRational,
}

/// How ranks are decided: by relative singular-value cutoff or exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub mode: Mode,
    /// Only consulted in floating mode.
    pub rel_epsilon: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy::floating()
    }
}

impl TolerancePolicy {
    pub const DEFAULT_REL_EPSILON: f64 = 1e-10;

    pub fn floating() -> Self {
        TolerancePolicy {
            mode: Mode::Floating,
            rel_epsilon: Self::DEFAULT_REL_EPSILON,
        }
    }

    pub fn exact() -> Self {
        TolerancePolicy {
            mode: Mode::ExactRational,
            rel_epsilon: Self::DEFAULT_REL_EPSILON,
        }
    }

    pub fn with_rel_epsilon(rel_epsilon: f64) -> Result<Self> {
        if !(rel_epsilon > 0.0 && rel_epsilon.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "rel_epsilon must be positive, got {rel_epsilon}"
            )));
        }
        Ok(TolerancePolicy {
            mode: Mode::Floating,
            rel_epsilon,
        })
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::ExactRational
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankNullspace {
    pub rank: usize,
    pub kernel: Vec<Vec<f64>>,
}

/// Rank and a kernel basis under the given policy.
///
/// Floating mode returns an orthonormal kernel basis; exact mode returns the
/// reduced-echelon free vectors of the (exactly converted) matrix.
pub fn rank_nullspace(m: &Matrix, tol: TolerancePolicy) -> Result<RankNullspace> {
    m.check_finite()?;
    match tol.mode {
        Mode::Floating => {
            let d = float::decompose(m, tol.rel_epsilon);
            Ok(RankNullspace {
                rank: d.rank,
                kernel: d.kernel,
            })
        }
        Mode::ExactRational => {
            let e = exact::rank_nullspace(&m.to_exact()?);
            Ok(RankNullspace {
                rank: e.rank,
                kernel: e
                    .kernel
                    .iter()
                    .map(|v| v.iter().map(Scalar::as_f64).collect())
                    .collect(),
            })
        }
    }
}

/// Minimum-norm least-squares solution and its residual norm.
pub fn least_squares(m: &Matrix, rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    m.check_finite()?;
    check_dim(m.rows(), rhs.len())?;
    if let Some(k) = rhs.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteEntry { row: k, col: 0 });
    }
    Ok(float::least_squares(
        m,
        rhs,
        TolerancePolicy::DEFAULT_REL_EPSILON,
    ))
}
