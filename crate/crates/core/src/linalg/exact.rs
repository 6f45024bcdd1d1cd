//! Exact rank, kernel and solves over the rationals.
//!
//! Rows are cleared of denominators and reduced with Bareiss' fraction-free
//! elimination, so every intermediate entry is an integer minor of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{dot, RationalMatrix, Scalar};

/// Integer row-echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ExactDecomposition {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub kernel: Vec<Vec<BigRational>>,
}

fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Fraction-free forward elimination.
pub fn echelon(m: &RationalMatrix) -> Echelon {
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|r| integer_row(m.row(r))).collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let num = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

pub fn rank(m: &RationalMatrix) -> usize {
    echelon(m).pivots.len()
}

/// Back-substitution for `U x = 0` with one free variable set to 1.
fn kernel_from_echelon(e: &Echelon, cols: usize) -> Vec<Vec<BigRational>> {
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (k, &p) in e.pivots.iter().enumerate().rev() {
                let row = &e.rows[k];
                let mut s = BigRational::zero();
                for j in p + 1..cols {
                    if !row[j].is_zero() && !x[j].is_zero() {
                        s += BigRational::from_integer(row[j].clone()) * &x[j];
                    }
                }
                x[p] = -s / BigRational::from_integer(row[p].clone());
            }
            x
        })
        .collect()
}

pub fn rank_nullspace(m: &RationalMatrix) -> ExactDecomposition {
    let e = echelon(m);
    let kernel = kernel_from_echelon(&e, m.cols());
    ExactDecomposition {
        rank: e.pivots.len(),
        pivots: e.pivots,
        kernel,
    }
}

/// A basis of the row space (the nonzero echelon rows).
pub fn row_space_basis(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    echelon(m)
        .rows
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

/// Solve a square nonsingular system by Gauss-Jordan; `None` if singular.
pub fn solve_square(a: &RationalMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Minimum-norm exact solution of `a x = b`, or `None` when inconsistent.
pub fn solve_min_norm(a: &RationalMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    if b.len() != a.rows() {
        return None;
    }
    let cols = a.cols();
    let mut aug = RationalMatrix::zeros(a.rows(), cols + 1);
    for r in 0..a.rows() {
        for c in 0..cols {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, cols, b[r].clone());
    }
    let e = echelon(&aug);
    if e.pivots.last() == Some(&cols) {
        return None;
    }
    // particular solution with free variables zero
    let mut x = vec![BigRational::zero(); cols];
    for (k, &p) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[k];
        let mut s = BigRational::from_integer(row[cols].clone());
        for j in p + 1..cols {
            if !row[j].is_zero() {
                s -= BigRational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[p] = s / BigRational::from_integer(row[p].clone());
    }
    // remove the kernel component
    let kernel = kernel_from_echelon(
        &Echelon {
            rows: e.rows.iter().map(|r| r[..cols].to_vec()).collect(),
            pivots: e.pivots.clone(),
        },
        cols,
    );
    if !kernel.is_empty() {
        let k = kernel.len();
        let mut gram = RationalMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                gram.set(i, j, dot(&kernel[i], &kernel[j]));
            }
        }
        let rhs: Vec<BigRational> = kernel.iter().map(|v| dot(v, &x)).collect();
        let c = solve_square(&gram, &rhs)?;
        for (ci, v) in c.iter().zip(&kernel) {
            for (xj, vj) in x.iter_mut().zip(v) {
                *xj -= ci * vj;
            }
        }
    }
    Some(x)
}

pub fn is_zero_vec(v: &[BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn max_abs(v: &[BigRational]) -> BigRational {
    v.iter()
        .map(Signed::abs)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
}

pub fn from_ints(rows: &[&[i64]]) -> RationalMatrix {
    let rows: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_int(x)).collect())
        .collect();
    RationalMatrix::from_rows(&rows).expect("rectangular input")
}
