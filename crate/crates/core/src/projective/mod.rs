//! Projective maps acting on Euclidean frameworks, and the induced transports
//! of loads and velocities.
//!
//! A map is given by an invertible `(d+1)×(d+1)` matrix `M` acting on
//! `(1, p)`. Row 0 of `M` is the functional whose zero set `L` is sent to
//! infinity. The transports are normalized by rescaling `M` so that this
//! functional has unit spatial gradient; then it equals the signed distance
//! `h(p)` to `L`, and with `w = h(p)`, `u` the spatial part of `M·(1, p)`,
//! `S` the spatial block and `g` the unit gradient,
//!
//! * load transport: `f ↦ J f` with `J = w·S − u·gᵀ` (which is `h²·dΦ_p`),
//! * velocity transport: `q ↦ J⁻ᵀ q`.
//!
//! When row 0 has zero spatial part the map is affine, `x ↦ A x + b`, and the
//! transports become `f ↦ A f` and `q ↦ A⁻ᵀ q`.

mod forces;
mod velocity;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{check_dim, Error, Result};
use crate::framework::{
    lift_point, parse_rational_matrix, Framework, Geometry, Load, VelocityField,
};
use crate::linalg::{self, exact, float, Matrix, RationalMatrix, TolerancePolicy};

pub use forces::{reduce_force_system, ForceClass, ForceReduction, ForceSystem};
pub use velocity::{
    projective_motion_check, velocity_drop, velocity_lift, velocity_lift_in, DualBivectorClass,
};

/// Relative size of `|(M·(1,p))⁰|` below which a point counts as mapped to
/// infinity.
pub const INFINITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveMap {
    matrix: Matrix,
    exact: Option<RationalMatrix>,
    gradient_norm: f64,
}

impl ProjectiveMap {
    pub fn new(matrix: Matrix) -> Result<Self> {
        matrix.check_finite()?;
        check_dim(matrix.rows(), matrix.cols())?;
        if matrix.rows() < 2 {
            return Err(Error::InvalidParameters(
                "map must act on dimension ≥ 1".into(),
            ));
        }
        if float::rank(&matrix, TolerancePolicy::DEFAULT_REL_EPSILON) < matrix.rows() {
            return Err(Error::SingularMap);
        }
        let gradient_norm = linalg::norm(&matrix.row(0)[1..]);
        Ok(ProjectiveMap {
            matrix,
            exact: None,
            gradient_norm,
        })
    }

    pub fn from_exact(m: RationalMatrix) -> Result<Self> {
        check_dim(m.rows(), m.cols())?;
        if exact::rank(&m) < m.rows() {
            return Err(Error::SingularMap);
        }
        let mut map = ProjectiveMap::new(m.to_f64())?;
        map.exact = Some(m);
        Ok(map)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::from_exact(exact::from_ints(rows))
    }

    pub fn identity(d: usize) -> Self {
        Self::from_exact(RationalMatrix::identity(d + 1)).expect("identity is invertible")
    }

    /// The affine map `p ↦ A p + b`.
    pub fn affine(a: &Matrix, b: &[f64]) -> Result<Self> {
        let d = a.rows();
        check_dim(d, a.cols())?;
        check_dim(d, b.len())?;
        let mut m = Matrix::zeros(d + 1, d + 1);
        m.set(0, 0, 1.0);
        for r in 0..d {
            m.set(r + 1, 0, b[r]);
            for c in 0..d {
                m.set(r + 1, c + 1, *a.get(r, c));
            }
        }
        Self::new(m)
    }

    /// Parse `{"matrix": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))?;
        let rows = parse_rational_matrix(
            doc.get("matrix")
                .ok_or_else(|| Error::Schema("missing field \"matrix\"".into()))?,
        )?;
        Self::from_exact(RationalMatrix::from_rows(&rows)?)
    }

    pub fn to_json(&self) -> Value {
        match &self.exact {
            Some(e) => json!({"matrix": e.to_rows().iter()
                .map(|r| r.iter().map(crate::framework::rational_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>()}),
            None => json!({"matrix": self.matrix.to_rows()}),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn exact(&self) -> Option<&RationalMatrix> {
        self.exact.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows() - 1
    }

    /// Row 0 of `M`: `p ↦ (M·(1, p))⁰`.
    pub fn infinity_functional(&self) -> &[f64] {
        self.matrix.row(0)
    }

    pub fn gradient_norm(&self) -> f64 {
        self.gradient_norm
    }

    pub fn is_affine(&self) -> bool {
        self.gradient_norm == 0.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ProjectiveMap) -> Result<ProjectiveMap> {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Self::from_exact(a.mul(b)?),
            _ => Self::new(self.matrix.mul(&other.matrix)?),
        }
    }

    fn homogeneous(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dimension(), p.len())?;
        self.matrix.mul_vec(&lift_point(p))
    }

    fn at_infinity(&self, x0: f64, p: &[f64]) -> bool {
        x0.abs() <= INFINITY_TOLERANCE * self.matrix.frobenius_norm() * linalg::norm(&lift_point(p))
    }

    /// `Φ(p)`.
    pub fn apply_point(&self, p: &[f64]) -> Result<Vec<f64>> {
        let x = self.homogeneous(p)?;
        if self.at_infinity(x[0], p) {
            return Err(Error::PointAtInfinity);
        }
        Ok(x[1..].iter().map(|v| v / x[0]).collect())
    }

    /// The affine part `(A, b)`.
    fn affine_part(&self) -> Result<(Matrix, Vec<f64>)> {
        if !self.is_affine() {
            return Err(Error::InvalidParameters("map is not affine".into()));
        }
        let d = self.dimension();
        let m00 = *self.matrix.get(0, 0);
        let mut a = Matrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                a.set(r, c, self.matrix.get(r + 1, c + 1) / m00);
            }
        }
        let b = (0..d).map(|r| self.matrix.get(r + 1, 0) / m00).collect();
        Ok((a, b))
    }

    /// `J = h²·dΦ_p` under the unit-gradient normalization.
    fn static_jacobian(&self, p: &[f64]) -> Result<Matrix> {
        let d = self.dimension();
        if self.is_affine() {
            return Ok(self.affine_part()?.0);
        }
        let x = self.homogeneous(p)?;
        if self.at_infinity(x[0], p) {
            return Err(Error::PointAtInfinity);
        }
        let g = self.gradient_norm;
        let w = x[0] / g;
        let mut j = Matrix::zeros(d, d);
        for r in 0..d {
            let u = x[r + 1] / g;
            for c in 0..d {
                let s = self.matrix.get(r + 1, c + 1) / g;
                let grad = self.matrix.get(0, c + 1) / g;
                j.set(r, c, w * s - u * grad);
            }
        }
        Ok(j)
    }
}

fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| *m.get(r, c))
}

/// Signed distance from `p` to the hyperplane sent to infinity.
pub fn h_infinity(phi: &ProjectiveMap, p: &[f64]) -> Result<f64> {
    if phi.is_affine() {
        return Err(Error::AffineMap);
    }
    Ok(phi.homogeneous(p)?[0] / phi.gradient_norm)
}

pub fn apply_projective(phi: &ProjectiveMap, fw: &Framework) -> Result<Framework> {
    fw.geometry().expect(Geometry::Euclidean)?;
    check_dim(phi.dimension(), fw.dimension())?;
    if let (Some(m), Some(vs)) = (phi.exact(), fw.exact_vertices()) {
        let mut image = Vec::with_capacity(vs.len());
        for (i, p) in vs.iter().enumerate() {
            let x = m.mul_vec(&lift_point(p))?;
            if x[0].is_zero() {
                return Err(Error::VertexAtInfinity(i));
            }
            image.push(
                x[1..]
                    .iter()
                    .map(|v| v / &x[0])
                    .collect::<Vec<BigRational>>(),
            );
        }
        return fw.with_exact_vertices(Geometry::Euclidean, image);
    }
    let mut image = Vec::with_capacity(fw.vertex_count());
    for (i, p) in fw.vertices().iter().enumerate() {
        image.push(phi.apply_point(p).map_err(|e| match e {
            Error::PointAtInfinity => Error::VertexAtInfinity(i),
            other => other,
        })?);
    }
    fw.with_vertices(Geometry::Euclidean, image)
}

/// Image of the force `f` applied at `p`, as a force at `Φ(p)`.
pub fn phi_stat(phi: &ProjectiveMap, p: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    check_dim(phi.dimension(), f.len())?;
    phi.static_jacobian(p)?.mul_vec(f)
}

/// The chord form `h(p)·h(p+f)·(Φ(p+f) − Φ(p))` of the load transport, which
/// agrees with [`phi_stat`] whenever `p + f` is off the hyperplane at infinity.
/// Kept as an independent cross-check.
pub fn phi_stat_chord(phi: &ProjectiveMap, p: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    check_dim(phi.dimension(), f.len())?;
    let pf: Vec<f64> = p.iter().zip(f).map(|(a, b)| a + b).collect();
    let (h0, h1) = (h_infinity(phi, p)?, h_infinity(phi, &pf)?);
    let (a, b) = (phi.apply_point(p)?, phi.apply_point(&pf)?);
    Ok(a.iter().zip(&b).map(|(x, y)| h0 * h1 * (y - x)).collect())
}

/// Image of the velocity `q` at `p`, as a velocity at `Φ(p)`.
pub fn phi_kin(phi: &ProjectiveMap, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    check_dim(phi.dimension(), q.len())?;
    let j = phi.static_jacobian(p)?;
    let jt = to_na(&j).transpose();
    jt.lu()
        .solve(&DVector::from_column_slice(q))
        .map(|v| v.iter().copied().collect())
        .ok_or(Error::SingularMap)
}

pub fn transport_motion(
    phi: &ProjectiveMap,
    fw: &Framework,
    q: &VelocityField,
) -> Result<VelocityField> {
    fw.geometry().expect(Geometry::Euclidean)?;
    q.check_shape(fw, fw.dimension())?;
    let mut out = Vec::with_capacity(q.len());
    for (i, (p, v)) in fw.vertices().iter().zip(&q.vectors).enumerate() {
        out.push(phi_kin(phi, p, v).map_err(|e| at_vertex(e, i))?);
    }
    Ok(VelocityField::new(out))
}

pub fn transport_load(phi: &ProjectiveMap, fw: &Framework, load: &Load) -> Result<Load> {
    fw.geometry().expect(Geometry::Euclidean)?;
    load.check_shape(fw, fw.dimension())?;
    let mut out = Vec::with_capacity(load.len());
    for (i, (p, f)) in fw.vertices().iter().zip(&load.forces).enumerate() {
        out.push(phi_stat(phi, p, f).map_err(|e| at_vertex(e, i))?);
    }
    Ok(Load::new(out))
}

fn at_vertex(e: Error, i: usize) -> Error {
    match e {
        Error::PointAtInfinity => Error::VertexAtInfinity(i),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::{self, analyze_kinematics, edge_load, resolve_load};

    fn shear() -> ProjectiveMap {
        ProjectiveMap::from_integers(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn shear_examples() {
        let m = shear();
        assert_eq!(m.apply_point(&[1.0, 0.0]).unwrap(), vec![0.5, 0.0]);
        assert_eq!(h_infinity(&m, &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(h_infinity(&m, &[-1.0, 3.0]).unwrap(), 0.0);
        assert!(close(
            &phi_stat(&m, &[0.0, 0.0], &[1.0, 0.0]).unwrap(),
            &[1.0, 0.0]
        ));
        assert!(close(
            &phi_stat(&m, &[1.0, 0.0], &[0.0, 1.0]).unwrap(),
            &[0.0, 2.0]
        ));
        assert!(close(
            &phi_stat_chord(&m, &[1.0, 0.0], &[0.0, 1.0]).unwrap(),
            &[0.0, 2.0]
        ));
        assert!(close(
            &phi_kin(&m, &[1.0, 0.0], &[0.0, 1.0]).unwrap(),
            &[0.0, 0.5]
        ));
        assert!(close(
            &phi_kin(&m, &[1.0, 0.0], &[1.0, 0.0]).unwrap(),
            &[1.0, 0.0]
        ));
        assert_eq!(
            phi_stat(&m, &[0.3, 0.2], &[0.0, 0.0]).unwrap(),
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn vertex_at_infinity() {
        let fw = Framework::from_integers(&[&[-1, 5], &[0, 0]], &[(0, 1)]).unwrap();
        assert!(matches!(
            apply_projective(&shear(), &fw),
            Err(Error::VertexAtInfinity(0))
        ));
        assert!(matches!(
            apply_projective(&shear(), &fw.without_exact()),
            Err(Error::VertexAtInfinity(0))
        ));
    }

    #[test]
    fn identity_and_affine_paths() {
        let id = ProjectiveMap::identity(2);
        let fw = Framework::from_integers(&[&[0, 0], &[2, 1], &[1, 3]], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(apply_projective(&id, &fw).unwrap(), fw);
        assert!(matches!(
            h_infinity(&id, &[0.0, 0.0]),
            Err(Error::AffineMap)
        ));
        assert_eq!(
            phi_kin(&id, &[4.0, 1.0], &[2.0, -3.0]).unwrap(),
            vec![2.0, -3.0]
        );
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let aff = ProjectiveMap::affine(&a, &[1.0, -1.0]).unwrap();
        assert_eq!(
            phi_stat(&aff, &[0.0, 0.0], &[0.0, 1.0]).unwrap(),
            vec![1.0, 1.0]
        );
        // A⁻ᵀ(1,0) = (1/2, -1/2)
        assert!(close(
            &phi_kin(&aff, &[0.0, 0.0], &[1.0, 0.0]).unwrap(),
            &[0.5, -0.5]
        ));
    }

    #[test]
    fn singular_map_rejected() {
        assert!(matches!(
            ProjectiveMap::from_integers(&[&[1, 1], &[2, 2]]),
            Err(Error::SingularMap)
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = ProjectiveMap::from_json(r#"{"matrix": [[1, 0.5], ["1/3", 2]]}"#).unwrap();
        let again = ProjectiveMap::from_json(&m.to_json().to_string()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn square_flex_and_trivial_motions_transport() {
        let sq = Framework::from_integers(
            &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        )
        .unwrap();
        let m = shear();
        let image = apply_projective(&m, &sq).unwrap();
        let rep = analyze_kinematics(&sq, TolerancePolicy::floating()).unwrap();
        for q in &rep.motion_basis {
            let t = transport_motion(&m, &sq, q).unwrap();
            assert!(rigidity::motion_residual(&image, &t).unwrap() < 1e-9);
        }
        let tri = Framework::from_integers(&[&[0, 0], &[1, 0], &[0, 1]], &[(0, 1), (1, 2), (0, 2)])
            .unwrap();
        let tri_image = apply_projective(&m, &tri).unwrap();
        for q in rigidity::trivial_motions(&tri) {
            let t = transport_motion(&m, &tri, &q).unwrap();
            assert!(rigidity::trivial_residual(&tri_image, &t).unwrap() < 1e-9);
        }
        let zero = VelocityField::zeros(4, 2);
        assert_eq!(transport_motion(&m, &sq, &zero).unwrap(), zero);
    }

    #[test]
    fn edge_load_stays_resolvable() {
        let tri = Framework::from_integers(&[&[0, 0], &[1, 0], &[0, 1]], &[(0, 1), (1, 2), (0, 2)])
            .unwrap();
        let m = shear();
        let image = apply_projective(&m, &tri).unwrap();
        let f = transport_load(&m, &tri, &edge_load(&tri, 0, 2)).unwrap();
        assert!(rigidity::is_equilibrium_load(&image, &f).unwrap());
        assert!(resolve_load(&image, &f, TolerancePolicy::floating())
            .unwrap()
            .is_resolved());
    }
}
