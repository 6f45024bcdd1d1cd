//! Random integer instances for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::framework::{affine_span_dim, Framework};
use crate::linalg::{exact, RationalMatrix, TolerancePolicy};
use crate::projective::{h_infinity, ProjectiveMap};

/// Minimum `|h_L|` of a vertex under a generated projective map.
pub const MIN_DISTANCE_TO_INFINITY: f64 = 0.1;

const MAX_ATTEMPTS: usize = 10_000;

fn coordinate_bound(d: usize) -> i64 {
    if d <= 2 {
        5
    } else {
        3
    }
}

fn random_connected_graph<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|k| {
            let (a, b) = (order[k], order[rng.gen_range(0..k)]);
            (a.min(b), a.max(b))
        })
        .collect();
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|e| !edges.contains(e))
        .collect();
    rest.shuffle(rng);
    let extra = rng.gen_range(0..=rest.len());
    edges.extend_from_slice(&rest[..extra]);
    edges.sort_unstable();
    edges
}

/// A connected Euclidean framework with integer coordinates in `[−5, 5]²` or
/// `[−3, 3]³` whose vertices span the whole space.
pub fn random_framework<R: Rng>(rng: &mut R, d: usize) -> Framework {
    let bound = coordinate_bound(d);
    loop {
        let n = rng.gen_range(d + 1..=d + 5);
        let coords: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let edges = random_connected_graph(rng, n);
        let rows: Vec<&[i64]> = coords.iter().map(Vec::as_slice).collect();
        let Ok(fw) = Framework::from_integers(&rows, &edges) else {
            continue;
        };
        if affine_span_dim(&fw, TolerancePolicy::exact()).is_ok_and(|s| s == d) {
            return fw;
        }
    }
}

fn random_perturbation<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| (r == c) as i64 + rng.gen_range(-1..=1))
                .collect()
        })
        .collect()
}

fn is_invertible(rows: &[Vec<i64>]) -> bool {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    let m: RationalMatrix = exact::from_ints(&refs);
    exact::rank(&m) == rows.len()
}

/// Identity plus a small integer perturbation, non-affine, with every vertex
/// of `fw` at distance more than [`MIN_DISTANCE_TO_INFINITY`] from the
/// hyperplane sent to infinity.
pub fn random_projective_map<R: Rng>(rng: &mut R, fw: &Framework) -> Result<ProjectiveMap> {
    let n = fw.dimension() + 1;
    for _ in 0..MAX_ATTEMPTS {
        let rows = random_perturbation(rng, n);
        if rows[0][1..].iter().all(|&x| x == 0) || !is_invertible(&rows) {
            continue;
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let phi = ProjectiveMap::from_integers(&refs)?;
        let far = fw
            .vertices()
            .iter()
            .all(|p| h_infinity(&phi, p).is_ok_and(|h| h.abs() > MIN_DISTANCE_TO_INFINITY));
        if far {
            return Ok(phi);
        }
    }
    Err(Error::InvalidParameters(
        "no admissible projective map found for this framework".into(),
    ))
}

/// `x ↦ A x + b` with `A` the identity plus an integer perturbation and
/// `b ∈ [−5, 5]^d`.
pub fn random_affine_map<R: Rng>(rng: &mut R, d: usize) -> Result<ProjectiveMap> {
    loop {
        let a = random_perturbation(rng, d);
        if !is_invertible(&a) {
            continue;
        }
        let rows: Vec<Vec<i64>> = std::iter::once(std::iter::once(1).chain(vec![0; d]).collect())
            .chain(a.iter().map(|row| {
                std::iter::once(rng.gen_range(-5..=5))
                    .chain(row.iter().copied())
                    .collect()
            }))
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        return ProjectiveMap::from_integers(&refs);
    }
}

/// Integer vectors with entries in `[−3, 3]`, one per vertex.
pub fn random_field<R: Rng>(rng: &mut R, vertices: usize, components: usize) -> Vec<Vec<f64>> {
    (0..vertices)
        .map(|_| {
            (0..components)
                .map(|_| rng.gen_range(-3..=3) as f64)
                .collect()
        })
        .collect()
}
