//! Four-plane concurrency test on octahedra.

use std::collections::HashSet;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{Framework, Geometry};
use crate::linalg::{exact, float, Dense, Scalar, TolerancePolicy};

/// A 2-coloring of the eight triangular faces of an octahedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceColoring {
    pub black: Vec<[usize; 3]>,
    pub white: Vec<[usize; 3]>,
}

impl FaceColoring {
    pub fn swapped(&self) -> FaceColoring {
        FaceColoring {
            black: self.white.clone(),
            white: self.black.clone(),
        }
    }
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Octahedral combinatorics: 6 vertices, 12 edges, and every vertex missing
/// exactly one other.
fn check_octahedral(fw: &Framework) -> Result<HashSet<(usize, usize)>> {
    if fw.geometry() != Geometry::Euclidean || fw.dimension() != 3 {
        return Err(Error::NotOctahedral(
            "expected a framework in Euclidean 3-space".into(),
        ));
    }
    if fw.vertex_count() != 6 || fw.edges().len() != 12 {
        return Err(Error::NotOctahedral(format!(
            "expected 6 vertices and 12 edges, found {} and {}",
            fw.vertex_count(),
            fw.edges().len()
        )));
    }
    let edges: HashSet<_> = fw.edges().iter().map(|&(i, j)| key(i, j)).collect();
    for v in 0..6 {
        let degree = edges.iter().filter(|&&(i, j)| i == v || j == v).count();
        if degree != 4 {
            return Err(Error::NotOctahedral(format!(
                "vertex {v} has degree {degree}"
            )));
        }
    }
    Ok(edges)
}

fn check_coloring(edges: &HashSet<(usize, usize)>, c: &FaceColoring) -> Result<()> {
    if c.black.len() != 4 || c.white.len() != 4 {
        return Err(Error::ImproperColoring(
            "need four faces of each color".into(),
        ));
    }
    let mut seen = HashSet::new();
    for f in c.black.iter().chain(&c.white) {
        let mut s = *f;
        s.sort_unstable();
        let is_triangle = [(0, 1), (1, 2), (0, 2)]
            .iter()
            .all(|&(a, b)| s[a] != s[b] && edges.contains(&key(s[a], s[b])));
        if !is_triangle {
            return Err(Error::ImproperColoring(format!("{f:?} is not a face")));
        }
        if !seen.insert(s) {
            return Err(Error::ImproperColoring(format!("face {f:?} listed twice")));
        }
    }
    for class in [&c.black, &c.white] {
        for (a, f) in class.iter().enumerate() {
            for g in &class[a + 1..] {
                if f.iter().filter(|v| g.contains(v)).count() == 2 {
                    return Err(Error::ImproperColoring(format!(
                        "faces {f:?} and {g:?} share an edge but have the same color"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Homogeneous coefficients `(−n·a, n)` of the plane through `a, b, c`.
fn plane<T: Scalar>(a: &[T], b: &[T], c: &[T]) -> Vec<T> {
    let u: Vec<T> = (0..3).map(|k| b[k].clone() - a[k].clone()).collect();
    let v: Vec<T> = (0..3).map(|k| c[k].clone() - a[k].clone()).collect();
    let n = [
        u[1].clone() * v[2].clone() - u[2].clone() * v[1].clone(),
        u[2].clone() * v[0].clone() - u[0].clone() * v[2].clone(),
        u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone(),
    ];
    let d = -(0..3).fold(T::zero(), |acc, k| acc + n[k].clone() * a[k].clone());
    std::iter::once(d).chain(n).collect()
}

fn plane_matrix<T: Scalar>(vs: &[Vec<T>], faces: &[[usize; 3]]) -> Result<Dense<T>> {
    let rows: Vec<Vec<T>> = faces
        .iter()
        .map(|f| plane(&vs[f[0]], &vs[f[1]], &vs[f[2]]))
        .collect();
    Dense::from_rows(&rows)
}

/// Rank of the 4×4 matrix of the black face planes.
pub fn plane_rank(fw: &Framework, coloring: &FaceColoring, tol: TolerancePolicy) -> Result<usize> {
    let edges = check_octahedral(fw)?;
    check_coloring(&edges, coloring)?;
    if tol.is_exact() {
        let e: &[Vec<BigRational>] = fw.exact_or_err()?;
        Ok(exact::rank(&plane_matrix(e, &coloring.black)?))
    } else {
        Ok(float::rank(
            &plane_matrix(fw.vertices(), &coloring.black)?,
            tol.rel_epsilon,
        ))
    }
}

/// Whether the four black face planes share a point, possibly at infinity.
/// Uses exact arithmetic when the framework has rational coordinates.
pub fn blaschke_check(fw: &Framework, coloring: &FaceColoring) -> Result<bool> {
    let tol = if fw.is_exact() {
        TolerancePolicy::exact()
    } else {
        TolerancePolicy::floating()
    };
    Ok(plane_rank(fw, coloring, tol)? <= 3)
}
