//! Rigidity matrix, motion spaces and degree-of-freedom counts.
//!
//! Columns are ordered vertex-major: column `k·i + a` is coordinate `a` of
//! vertex `i`, where `k` is the number of stored coordinates per vertex.
//! Rows follow the edge order of the framework; hyperbolic and spherical
//! matrices append one tangency row per vertex.

mod statics;

use std::ops::Range;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::Result;
use crate::framework::{affine_span_dim, Framework, Geometry, VelocityField};
use crate::linalg::{self, exact, float, Dense, Matrix, RationalMatrix, Scalar, TolerancePolicy};

pub use statics::{
    analyze_statics, edge_load, equilibrium_matrix, is_equilibrium_load, pairing, resolve_load,
    total_bivector, Resolution, StaticReport, UNRESOLVABLE_RELATIVE_RESIDUAL,
};

fn build_matrix<T: Scalar>(
    geometry: Geometry,
    coords: &[Vec<T>],
    edges: &[(usize, usize)],
) -> (Dense<T>, Option<Range<usize>>) {
    let n = coords.len();
    let k = coords.first().map_or(0, Vec::len);
    let tangency = geometry != Geometry::Euclidean;
    let rows = edges.len() + if tangency { n } else { 0 };
    let mut m = Dense::zeros(rows, k * n);
    for (r, &(i, j)) in edges.iter().enumerate() {
        for a in 0..k {
            let diff = coords[i][a].clone() - coords[j][a].clone();
            let w = if geometry.metric_sign(a) < 0 {
                -diff
            } else {
                diff
            };
            m.set(r, k * i + a, w.clone());
            m.set(r, k * j + a, -w);
        }
    }
    if !tangency {
        return (m, None);
    }
    for (i, p) in coords.iter().enumerate() {
        for a in 0..k {
            let v = if geometry.metric_sign(a) < 0 {
                -p[a].clone()
            } else {
                p[a].clone()
            };
            m.set(edges.len() + i, k * i + a, v);
        }
    }
    (m, Some(edges.len()..rows))
}

/// The constraint matrix whose kernel is the space of infinitesimal motions.
#[derive(Clone, Debug)]
pub struct RigidityMatrix {
    geometry: Geometry,
    matrix: Matrix,
    exact: Option<RationalMatrix>,
    edges: Vec<(usize, usize)>,
    coordinates: usize,
    tangency_rows: Option<Range<usize>>,
}

impl RigidityMatrix {
    pub fn new(fw: &Framework) -> Self {
        let (matrix, tangency_rows) = build_matrix(fw.geometry(), fw.vertices(), fw.edges());
        let exact = fw
            .exact_vertices()
            .map(|e| build_matrix(fw.geometry(), e, fw.edges()).0);
        RigidityMatrix {
            geometry: fw.geometry(),
            matrix,
            exact,
            edges: fw.edges().to_vec(),
            coordinates: fw.coordinate_count(),
            tangency_rows,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn exact(&self) -> Option<&RationalMatrix> {
        self.exact.as_ref()
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// The edge constraining row `r`, or `None` for a tangency row.
    pub fn row_edge(&self, r: usize) -> Option<(usize, usize)> {
        self.edges.get(r).copied()
    }

    /// `(vertex, coordinate)` of column `c`.
    pub fn column(&self, c: usize) -> (usize, usize) {
        (c / self.coordinates, c % self.coordinates)
    }

    pub fn tangency_rows(&self) -> Option<Range<usize>> {
        self.tangency_rows.clone()
    }
}

pub fn rigidity_matrix(fw: &Framework) -> RigidityMatrix {
    RigidityMatrix::new(fw)
}

/// Restrictions of a spanning set of ambient infinitesimal isometries, as
/// flat vectors in the column layout of the rigidity matrix.
fn trivial_generators<T: Scalar>(geometry: Geometry, coords: &[Vec<T>]) -> Dense<T> {
    let n = coords.len();
    let k = coords.first().map_or(0, Vec::len);
    let mut gens: Vec<Vec<T>> = Vec::new();
    if geometry == Geometry::Euclidean {
        for a in 0..k {
            let mut g = vec![T::zero(); k * n];
            for i in 0..n {
                g[k * i + a] = T::one();
            }
            gens.push(g);
        }
    }
    // q = (e_a e_bᵀ − e_b e_aᵀ)·g·p, with g the ambient form (identity unless hyperbolic)
    for a in 0..k {
        for b in a + 1..k {
            let mut g = vec![T::zero(); k * n];
            for (i, p) in coords.iter().enumerate() {
                let gp = |c: usize| {
                    if geometry.metric_sign(c) < 0 {
                        -p[c].clone()
                    } else {
                        p[c].clone()
                    }
                };
                g[k * i + a] = gp(b);
                g[k * i + b] = -gp(a);
            }
            gens.push(g);
        }
    }
    let mut m = Dense::zeros(gens.len(), k * n);
    for (r, g) in gens.into_iter().enumerate() {
        for (c, v) in g.into_iter().enumerate() {
            m.set(r, c, v);
        }
    }
    m
}

fn orthonormal_span(vectors: &[Vec<f64>], cols: usize, rel_epsilon: f64) -> Vec<Vec<f64>> {
    if vectors.is_empty() {
        return vec![];
    }
    let mut m = Matrix::zeros(vectors.len(), cols);
    for (r, v) in vectors.iter().enumerate() {
        for (c, x) in v.iter().enumerate() {
            m.set(r, c, *x);
        }
    }
    float::decompose(&m, rel_epsilon).row_space
}

fn to_f64_vecs(vs: &[Vec<BigRational>]) -> Vec<Vec<f64>> {
    vs.iter()
        .map(|v| v.iter().map(Scalar::as_f64).collect())
        .collect()
}

fn fields(vs: Vec<Vec<f64>>, k: usize) -> Vec<VelocityField> {
    vs.iter().map(|v| VelocityField::from_flat(v, k)).collect()
}

/// A basis of the trivial motions (orthonormal). Uses exact arithmetic to
/// decide the rank when the framework carries rational coordinates.
pub fn trivial_motions(fw: &Framework) -> Vec<VelocityField> {
    let tol = if fw.is_exact() {
        TolerancePolicy::exact()
    } else {
        TolerancePolicy::floating()
    };
    trivial_basis(fw, tol).map(|(_, b)| b).unwrap_or_default()
}

fn trivial_basis(fw: &Framework, tol: TolerancePolicy) -> Result<(usize, Vec<VelocityField>)> {
    let k = fw.coordinate_count();
    let cols = k * fw.vertex_count();
    if tol.is_exact() {
        let g = trivial_generators(fw.geometry(), fw.exact_or_err()?);
        let basis = exact::row_space_basis(&g);
        let f = orthonormal_span(&to_f64_vecs(&basis), cols, tol.rel_epsilon);
        Ok((basis.len(), fields(f, k)))
    } else {
        let g = trivial_generators(fw.geometry(), fw.vertices());
        let d = float::decompose(&g, tol.rel_epsilon);
        Ok((d.rank, fields(d.row_space, k)))
    }
}

#[derive(Clone, Debug)]
pub struct KinematicReport {
    pub dim_motions: usize,
    pub dim_trivial: usize,
    pub dof: usize,
    pub rigid: bool,
    pub degenerate_span: bool,
    /// Orthonormal basis of the motion space.
    pub motion_basis: Vec<VelocityField>,
    /// Orthonormal basis of the trivial motions.
    pub trivial_basis: Vec<VelocityField>,
    /// Descending singular values of the floating rigidity matrix.
    pub singular_values: Vec<f64>,
}

impl KinematicReport {
    pub fn to_json(&self) -> Value {
        json!({
            "dim_motions": self.dim_motions,
            "dim_trivial": self.dim_trivial,
            "dof": self.dof,
            "rigid": self.rigid,
            "degenerate_span": self.degenerate_span,
            "singular_values": self.singular_values,
        })
    }
}

fn degenerate_span(fw: &Framework, tol: TolerancePolicy) -> Result<bool> {
    if fw.geometry() == Geometry::Euclidean {
        return Ok(affine_span_dim(fw, tol)? < fw.dimension());
    }
    // linear span of the ambient vectors, which is the projective span
    let rank = if tol.is_exact() {
        exact::rank(&RationalMatrix::from_rows(fw.exact_or_err()?)?)
    } else {
        float::rank(&Matrix::from_rows(fw.vertices())?, tol.rel_epsilon)
    };
    Ok(rank < fw.dimension() + 1)
}

pub fn analyze_kinematics(fw: &Framework, tol: TolerancePolicy) -> Result<KinematicReport> {
    let r = RigidityMatrix::new(fw);
    let k = fw.coordinate_count();
    let cols = r.matrix.cols();
    let fd = float::decompose(&r.matrix, tol.rel_epsilon);
    let (dim_motions, motion_basis) = if tol.is_exact() {
        let e = r
            .exact
            .as_ref()
            .ok_or_else(|| crate::Error::ExactModeUnavailable("this framework".into()))?;
        let d = exact::rank_nullspace(e);
        let basis = orthonormal_span(&to_f64_vecs(&d.kernel), cols, tol.rel_epsilon);
        (d.kernel.len(), basis)
    } else {
        (fd.kernel.len(), fd.kernel)
    };
    let (dim_trivial, trivial_basis) = trivial_basis(fw, tol)?;
    let dof = dim_motions.saturating_sub(dim_trivial);
    Ok(KinematicReport {
        dim_motions,
        dim_trivial,
        dof,
        rigid: dof == 0,
        degenerate_span: degenerate_span(fw, tol)?,
        motion_basis: fields(motion_basis, k),
        trivial_basis,
        singular_values: fd.singular_values,
    })
}

/// Largest constraint violation of `q`, each row scaled by the row norm and
/// by the largest vertex velocity. Zero for the zero field.
pub fn motion_residual(fw: &Framework, q: &VelocityField) -> Result<f64> {
    q.check_shape(fw, fw.coordinate_count())?;
    let r = RigidityMatrix::new(fw);
    let flat = q.to_flat();
    let scale = q
        .vectors
        .iter()
        .map(|v| linalg::norm(v))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let rq = r.matrix.mul_vec(&flat)?;
    Ok((0..r.matrix.rows())
        .map(|i| {
            let rn = linalg::norm(r.matrix.row(i));
            if rn == 0.0 {
                0.0
            } else {
                rq[i].abs() / (rn * scale)
            }
        })
        .fold(0.0, f64::max))
}

/// Per-edge relative residuals `|⟨p_i − p_j, q_i − q_j⟩_g| / (‖p_i − p_j‖·max‖q‖)`.
pub fn edge_residuals(fw: &Framework, q: &VelocityField) -> Result<Vec<f64>> {
    q.check_shape(fw, fw.coordinate_count())?;
    let scale = q
        .vectors
        .iter()
        .map(|v| linalg::norm(v))
        .fold(0.0, f64::max);
    let p = fw.vertices();
    Ok(fw
        .edges()
        .iter()
        .map(|&(i, j)| {
            if scale == 0.0 {
                return 0.0;
            }
            let dp: Vec<f64> = p[i].iter().zip(&p[j]).map(|(a, b)| a - b).collect();
            let dq: Vec<f64> = q.vectors[i]
                .iter()
                .zip(&q.vectors[j])
                .map(|(a, b)| a - b)
                .collect();
            fw.geometry().inner(&dp, &dq).abs() / (linalg::norm(&dp) * scale)
        })
        .collect())
}

/// Distance from `q` to the trivial-motion space, relative to `‖q‖`.
pub fn trivial_residual(fw: &Framework, q: &VelocityField) -> Result<f64> {
    q.check_shape(fw, fw.coordinate_count())?;
    let flat = q.to_flat();
    let n = linalg::norm(&flat);
    if n == 0.0 {
        return Ok(0.0);
    }
    let mut rest = flat.clone();
    for b in trivial_motions(fw) {
        let b = b.to_flat();
        let c = linalg::dot(&b, &flat);
        for (x, y) in rest.iter_mut().zip(&b) {
            *x -= c * y;
        }
    }
    Ok(linalg::norm(&rest) / n)
}

/// Exact bases of the four spaces linked by virtual work: motions, trivial
/// motions, equilibrium loads and resolvable loads (Euclidean only).
#[derive(Clone, Debug)]
pub struct ExactSubspaces {
    pub motions: Vec<Vec<BigRational>>,
    pub trivial: Vec<Vec<BigRational>>,
    pub equilibrium: Vec<Vec<BigRational>>,
    pub resolvable: Vec<Vec<BigRational>>,
}

pub fn exact_subspaces(fw: &Framework) -> Result<ExactSubspaces> {
    fw.geometry().expect(Geometry::Euclidean)?;
    let e = fw.exact_or_err()?;
    let r = build_matrix(Geometry::Euclidean, e, fw.edges()).0;
    Ok(ExactSubspaces {
        motions: exact::rank_nullspace(&r).kernel,
        trivial: exact::row_space_basis(&trivial_generators(Geometry::Euclidean, e)),
        equilibrium: exact::rank_nullspace(&statics::equilibrium_map(e)).kernel,
        resolvable: exact::row_space_basis(&r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::Geometry;

    fn tri() -> Framework {
        Framework::from_integers(&[&[0, 0], &[1, 0], &[0, 1]], &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn square() -> Framework {
        Framework::from_integers(
            &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        )
        .unwrap()
    }

    #[test]
    fn single_edge_matrix() {
        let fw = Framework::from_integers(&[&[0], &[1]], &[(0, 1)]).unwrap();
        let r = rigidity_matrix(&fw);
        assert_eq!(r.matrix().to_rows(), vec![vec![-1.0, 1.0]]);
        assert_eq!(exact::rank(r.exact().unwrap()), 1);
    }

    #[test]
    fn triangle_matrix_layout() {
        let r = rigidity_matrix(&tri());
        assert_eq!((r.matrix().rows(), r.matrix().cols()), (3, 6));
        assert_eq!(r.matrix().row(1), &[0.0, 0.0, 1.0, -1.0, -1.0, 1.0]);
        assert_eq!(r.column(3), (1, 1));
        assert_eq!(r.row_edge(2), Some((0, 2)));
        assert_eq!(exact::rank(r.exact().unwrap()), 3);
    }

    #[test]
    fn hyperbolic_edge_has_tangency_rows() {
        let fw = Framework::new(
            1,
            Geometry::Hyperbolic,
            vec![vec![1.25, 0.75], vec![1.0, 0.0]],
            vec![(0, 1)],
        )
        .unwrap();
        let r = rigidity_matrix(&fw);
        assert_eq!((r.matrix().rows(), r.matrix().cols()), (3, 4));
        assert_eq!(r.tangency_rows(), Some(1..3));
        assert_eq!(r.row_edge(1), None);
        // Minkowski-weighted difference (0.25, -0.75) and tangency g·p
        assert_eq!(r.matrix().row(0), &[0.25, -0.75, -0.25, 0.75]);
        assert_eq!(r.matrix().row(1), &[1.25, -0.75, 0.0, 0.0]);
    }

    #[test]
    fn trivial_basis_sizes() {
        assert_eq!(trivial_motions(&tri()).len(), 3);
        let tet = Framework::from_integers(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[])
            .unwrap();
        assert_eq!(trivial_motions(&tet).len(), 6);
        // three generic points on the 2-sphere (Pythagorean)
        let s = Framework::from_exact(
            2,
            Geometry::Spherical,
            [[3, 4, 0, 5], [0, 3, 4, 5], [2, 3, 6, 7]]
                .iter()
                .map(|v| {
                    (0..3)
                        .map(|a| BigRational::new(v[a].into(), v[3].into()))
                        .collect()
                })
                .collect(),
            vec![],
        )
        .unwrap();
        assert!(s.is_exact());
        assert_eq!(trivial_motions(&s).len(), 3);
    }

    #[test]
    fn kinematic_reports() {
        for tol in [TolerancePolicy::exact(), TolerancePolicy::floating()] {
            let t = analyze_kinematics(&tri(), tol).unwrap();
            assert_eq!(
                (t.dim_motions, t.dim_trivial, t.dof, t.rigid),
                (3, 3, 0, true)
            );
            let s = analyze_kinematics(&square(), tol).unwrap();
            assert_eq!(
                (s.dim_motions, s.dim_trivial, s.dof, s.rigid),
                (4, 3, 1, false)
            );
            assert!(!s.degenerate_span);
            for q in &s.motion_basis {
                assert!(motion_residual(&square(), q).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn collinear_span_is_flagged() {
        let fw = Framework::from_integers(&[&[0, 0], &[1, 0], &[2, 0]], &[(0, 1), (1, 2)]).unwrap();
        let r = analyze_kinematics(&fw, TolerancePolicy::exact()).unwrap();
        assert!(r.degenerate_span);
        // honest rank of the generators: 2 translations + 1 rotation
        assert_eq!(r.dim_trivial, 3);
    }

    #[test]
    fn exact_mode_needs_rational_data() {
        let fw = tri().without_exact();
        assert_eq!(
            analyze_kinematics(&fw, TolerancePolicy::exact())
                .unwrap_err()
                .kind(),
            "ExactModeUnavailable"
        );
    }

    #[test]
    fn report_json_keys() {
        let v = analyze_kinematics(&tri(), TolerancePolicy::exact())
            .unwrap()
            .to_json();
        assert_eq!(v["rigid"], json!(true));
        assert_eq!(v["dof"], json!(0));
        assert_eq!(v["singular_values"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn trivial_motions_have_zero_residual() {
        let fw = square();
        for q in trivial_motions(&fw) {
            assert!(motion_residual(&fw, &q).unwrap() < 1e-14);
            assert!(trivial_residual(&fw, &q).unwrap() < 1e-12);
        }
    }
}
