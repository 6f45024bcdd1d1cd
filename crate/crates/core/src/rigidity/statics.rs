//! Euclidean statics: equilibrium loads, stresses and the virtual-work pairing.
//!
//! A load is an equilibrium load when the sum of the bivectors
//! `(1, p_i) ∧ (0, f_i)` vanishes. A stress `ω` resolves `F` when
//! `f_i = Σ_j ω_ij (p_i − p_j)` at every vertex, i.e. `Rᵀω = F`.

use num_rational::BigRational;
use serde_json::{json, Value};

use super::{build_matrix, RigidityMatrix};
use crate::error::{check_dim, Error, Result};
use crate::framework::{
    affine_span_dim, lift_point, Framework, Geometry, Load, Stress, VelocityField,
};
use crate::linalg::exterior::pairs;
use crate::linalg::{
    self, exact, float, rational_from_f64, wedge, Bivector, Dense, Matrix, Scalar, TolerancePolicy,
};

/// A load is unresolvable when the least-squares residual exceeds this
/// fraction of `‖F‖`.
pub const UNRESOLVABLE_RELATIVE_RESIDUAL: f64 = 1e-8;

/// The linear map from loads to total bivectors, one column per
/// `(vertex, coordinate)`.
pub(super) fn equilibrium_map<T: Scalar>(coords: &[Vec<T>]) -> Dense<T> {
    let n = coords.len();
    let d = coords.first().map_or(0, Vec::len);
    let rows: Vec<(usize, usize)> = pairs(d + 1).collect();
    let mut m = Dense::zeros(rows.len(), d * n);
    for (i, p) in coords.iter().enumerate() {
        let x = lift_point(p);
        for k in 0..d {
            let y = k + 1;
            for (r, &(a, b)) in rows.iter().enumerate() {
                // (x ∧ e_y)[a][b] = x_a δ_{b,y} − x_b δ_{a,y}
                if b == y {
                    m.set(r, d * i + k, x[a].clone());
                } else if a == y {
                    m.set(r, d * i + k, -x[b].clone());
                }
            }
        }
    }
    m
}

pub fn equilibrium_matrix(fw: &Framework) -> Result<Matrix> {
    fw.geometry().expect(Geometry::Euclidean)?;
    Ok(equilibrium_map(fw.vertices()))
}

/// `Σ_i (1, p_i) ∧ (0, f_i)`.
pub fn total_bivector(fw: &Framework, load: &Load) -> Result<Bivector> {
    fw.geometry().expect(Geometry::Euclidean)?;
    load.check_shape(fw, fw.dimension())?;
    let mut total = Bivector::zero(fw.dimension() + 1);
    for (p, f) in fw.vertices().iter().zip(&load.forces) {
        let f_hat: Vec<f64> = std::iter::once(0.0).chain(f.iter().copied()).collect();
        let w = wedge(&lift_point(p), &f_hat)?;
        total = &total + &w;
    }
    Ok(total)
}

pub fn is_equilibrium_load(fw: &Framework, load: &Load) -> Result<bool> {
    let total = total_bivector(fw, load)?;
    let scale: f64 = fw
        .vertices()
        .iter()
        .zip(&load.forces)
        .map(|(p, f)| linalg::norm(&lift_point(p)) * linalg::norm(f))
        .sum();
    Ok(total.norm() <= 1e-10 * scale)
}

/// The load `F^{ij}`: `f_i = p_i − p_j`, `f_j = p_j − p_i`, zero elsewhere.
pub fn edge_load(fw: &Framework, i: usize, j: usize) -> Load {
    let p = fw.vertices();
    let mut load = Load::zeros(fw.vertex_count(), fw.coordinate_count());
    for a in 0..fw.coordinate_count() {
        load.forces[i][a] = p[i][a] - p[j][a];
        load.forces[j][a] = p[j][a] - p[i][a];
    }
    load
}

#[derive(Clone, Debug, PartialEq)]
pub enum Resolution {
    Resolved(Stress),
    Unresolvable { residual: f64 },
}

impl Resolution {
    pub fn is_resolved(&self) -> bool {
        matches!(self, Resolution::Resolved(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Resolution::Resolved(s) => {
                let mut v = crate::framework::stress_to_value(s);
                v["resolvable"] = json!(true);
                v
            }
            Resolution::Unresolvable { residual } => {
                json!({"resolvable": false, "residual": residual})
            }
        }
    }
}

pub fn resolve_load(fw: &Framework, load: &Load, tol: TolerancePolicy) -> Result<Resolution> {
    fw.geometry().expect(Geometry::Euclidean)?;
    load.check_shape(fw, fw.dimension())?;
    let r = RigidityMatrix::new(fw);
    let rhs = load.to_flat();
    let edges = fw.edges().to_vec();
    if tol.is_exact() {
        let e = r
            .exact()
            .ok_or_else(|| Error::ExactModeUnavailable("this framework".into()))?;
        let b = rhs
            .iter()
            .map(|&x| rational_from_f64(x))
            .collect::<Result<Vec<BigRational>>>()?;
        if let Some(w) = exact::solve_min_norm(&e.transpose(), &b) {
            return Ok(Resolution::Resolved(Stress {
                edges,
                values: w.iter().map(Scalar::as_f64).collect(),
            }));
        }
        let (_, residual) = linalg::least_squares(&r.matrix().transpose(), &rhs)?;
        return Ok(Resolution::Unresolvable { residual });
    }
    let (w, residual) = float::least_squares(&r.matrix().transpose(), &rhs, tol.rel_epsilon);
    if residual <= linalg::norm(&rhs) * UNRESOLVABLE_RELATIVE_RESIDUAL {
        Ok(Resolution::Resolved(Stress { edges, values: w }))
    } else {
        Ok(Resolution::Unresolvable { residual })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticReport {
    pub dim_equilibrium: usize,
    pub dim_resolvable: usize,
    pub static_dof: usize,
}

impl StaticReport {
    pub fn to_json(&self) -> Value {
        json!({
            "dim_equilibrium": self.dim_equilibrium,
            "dim_resolvable": self.dim_resolvable,
            "static_dof": self.static_dof,
        })
    }
}

pub fn analyze_statics(fw: &Framework, tol: TolerancePolicy) -> Result<StaticReport> {
    fw.geometry().expect(Geometry::Euclidean)?;
    let span = affine_span_dim(fw, tol)?;
    if span < fw.dimension() {
        return Err(Error::DegenerateSpan {
            span,
            dimension: fw.dimension(),
        });
    }
    let cols = fw.dimension() * fw.vertex_count();
    let (eq_rank, res_rank) = if tol.is_exact() {
        let e = fw.exact_or_err()?;
        (
            exact::rank(&equilibrium_map(e)),
            exact::rank(&build_matrix(Geometry::Euclidean, e, fw.edges()).0),
        )
    } else {
        (
            float::rank(&equilibrium_map(fw.vertices()), tol.rel_epsilon),
            float::rank(RigidityMatrix::new(fw).matrix(), tol.rel_epsilon),
        )
    };
    let dim_equilibrium = cols - eq_rank;
    Ok(StaticReport {
        dim_equilibrium,
        dim_resolvable: res_rank,
        static_dof: dim_equilibrium.saturating_sub(res_rank),
    })
}

/// `Σ_i ⟨q_i, f_i⟩`.
pub fn pairing(q: &VelocityField, load: &Load) -> Result<f64> {
    check_dim(q.len(), load.len())?;
    let mut s = 0.0;
    for (a, b) in q.vectors.iter().zip(&load.forces) {
        check_dim(a.len(), b.len())?;
        s += linalg::dot(a, b);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::Framework;

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
    fn equilibrium_examples() {
        let fw = tri();
        assert!(is_equilibrium_load(&fw, &edge_load(&fw, 1, 2)).unwrap());
        let single = Load::new(vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert!(!is_equilibrium_load(&fw, &single).unwrap());
        // couple at p0=(0,0) and p1=(1,0) with f=(0,1)
        let couple = Load::new(vec![vec![0.0, 1.0], vec![0.0, -1.0], vec![0.0, 0.0]]);
        assert!(!is_equilibrium_load(&fw, &couple).unwrap());
        let t = total_bivector(&fw, &couple).unwrap();
        // wedge((0,p0−p1),(0,f)) = wedge((0,−1,0),(0,0,1)) = −e1∧e2
        assert_eq!(t.components(), &[0.0, 0.0, -1.0]);
    }

    #[test]
    fn edge_load_resolves_to_unit_stress() {
        let fw = tri();
        for tol in [TolerancePolicy::exact(), TolerancePolicy::floating()] {
            let Resolution::Resolved(s) = resolve_load(&fw, &edge_load(&fw, 1, 2), tol).unwrap()
            else {
                panic!("edge load must resolve");
            };
            for (k, v) in s.values.iter().enumerate() {
                let expect = if k == 1 { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-12, "{:?}", s.values);
            }
            let Resolution::Resolved(z) = resolve_load(&fw, &Load::zeros(3, 2), tol).unwrap()
            else {
                panic!("zero load must resolve");
            };
            assert!(z.values.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn square_flex_blocks_a_load() {
        let fw = square();
        let flex = crate::rigidity::analyze_kinematics(&fw, TolerancePolicy::exact()).unwrap();
        let q = &flex.motion_basis;
        // an equilibrium load pairing nonzero with some motion: diagonal pull
        let pull = Load::new(vec![
            vec![-1.0, -1.0],
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
        ]);
        assert!(is_equilibrium_load(&fw, &pull).unwrap());
        assert!(q.iter().any(|m| pairing(m, &pull).unwrap().abs() > 1e-6));
        for tol in [TolerancePolicy::exact(), TolerancePolicy::floating()] {
            assert!(!resolve_load(&fw, &pull, tol).unwrap().is_resolved());
        }
    }

    #[test]
    fn static_reports() {
        for tol in [TolerancePolicy::exact(), TolerancePolicy::floating()] {
            assert_eq!(
                analyze_statics(&tri(), tol).unwrap(),
                StaticReport {
                    dim_equilibrium: 3,
                    dim_resolvable: 3,
                    static_dof: 0
                }
            );
            assert_eq!(
                analyze_statics(&square(), tol).unwrap(),
                StaticReport {
                    dim_equilibrium: 5,
                    dim_resolvable: 4,
                    static_dof: 1
                }
            );
        }
        let line = Framework::from_integers(&[&[0, 0], &[1, 0]], &[(0, 1)]).unwrap();
        assert!(matches!(
            analyze_statics(&line, TolerancePolicy::exact()),
            Err(Error::DegenerateSpan {
                span: 1,
                dimension: 2
            })
        ));
    }

    #[test]
    fn pairing_example() {
        let q = VelocityField::new(vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        let f = Load::new(vec![vec![2.0, 3.0], vec![5.0, 7.0]]);
        assert_eq!(pairing(&q, &f).unwrap(), 2.0);
        assert!(pairing(&q, &Load::zeros(3, 2)).is_err());
    }
}
