//! Systems of line-bound forces as bivectors `Σ (1, p) ∧ (0, f)`.

use crate::error::{check_dim, Error, Result};
use crate::framework::lift_point;
use crate::linalg::{self, wedge, Bivector};

/// Zero test relative to `Σ ‖(1, p)‖·‖f‖`.
const ZERO_TOLERANCE: f64 = 1e-12;
/// Plücker relations relative to `‖total‖²`.
const PLUCKER_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ForceSystem {
    /// `(application point, force vector)` pairs.
    pub forces: Vec<(Vec<f64>, Vec<f64>)>,
}

impl ForceSystem {
    pub fn new(forces: Vec<(Vec<f64>, Vec<f64>)>) -> Self {
        ForceSystem { forces }
    }

    pub fn push(&mut self, point: Vec<f64>, force: Vec<f64>) {
        self.forces.push((point, force));
    }

    pub fn total(&self) -> Result<Bivector> {
        let d = self.forces.first().map_or(0, |(p, _)| p.len());
        let mut total = Bivector::zero(d + 1);
        for (p, f) in &self.forces {
            check_dim(d, p.len())?;
            check_dim(d, f.len())?;
            let mut f_hat = lift_point(f);
            f_hat[0] = 0.0;
            total = &total + &wedge(&lift_point(p), &f_hat)?;
        }
        Ok(total)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ForceClass {
    Zero,
    /// Equivalent to `force` acting at `point`; `point` is the foot of the
    /// line of action nearest the origin.
    SingleForce {
        point: Vec<f64>,
        force: Vec<f64>,
    },
    Couple,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForceReduction {
    pub total: Bivector,
    pub class: ForceClass,
}

pub fn reduce_force_system(fs: &ForceSystem) -> Result<ForceReduction> {
    let total = fs.total()?;
    let n = total.dim();
    let scale: f64 = fs
        .forces
        .iter()
        .map(|(p, f)| linalg::norm(&lift_point(p)) * linalg::norm(f))
        .sum();
    if total.norm() <= ZERO_TOLERANCE * scale {
        return Ok(ForceReduction {
            total,
            class: ForceClass::Zero,
        });
    }
    let bound = PLUCKER_TOLERANCE * total.norm().powi(2);
    if n >= 4 && !total.is_decomposable_by(|r: &f64| r.abs() <= bound) {
        return Err(Error::NonDecomposable {
            total: total.components().to_vec(),
        });
    }
    // components (0, k) carry the resultant force
    let force: Vec<f64> = (1..n).map(|k| total.get(0, k)).collect();
    let f2: f64 = force.iter().map(|x| x * x).sum();
    if f2.sqrt() <= ZERO_TOLERANCE * scale {
        return Ok(ForceReduction {
            total,
            class: ForceClass::Couple,
        });
    }
    // spatial components are the moment p_a f_b − p_b f_a
    let point = (1..n)
        .map(|a| (1..n).map(|b| total.get(a, b) * force[b - 1]).sum::<f64>() / f2)
        .collect();
    Ok(ForceReduction {
        total,
        class: ForceClass::SingleForce { point, force },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(v: &[(&[f64], &[f64])]) -> ForceSystem {
        ForceSystem::new(v.iter().map(|(p, f)| (p.to_vec(), f.to_vec())).collect())
    }

    #[test]
    fn cancellation() {
        let r = reduce_force_system(&sys(&[
            (&[1.0, 2.0], &[3.0, -1.0]),
            (&[1.0, 2.0], &[-3.0, 1.0]),
        ]))
        .unwrap();
        assert_eq!(r.class, ForceClass::Zero);
    }

    #[test]
    fn sliding_along_line_of_action() {
        let a = sys(&[(&[1.0, 2.0, 0.5], &[3.0, -1.0, 2.0])])
            .total()
            .unwrap();
        let b = sys(&[(
            &[1.0 + 0.5 * 3.0, 2.0 - 0.5, 0.5 + 0.5 * 2.0],
            &[3.0, -1.0, 2.0],
        )])
        .total()
        .unwrap();
        assert!((&a - &b).norm() < 1e-14);
    }

    #[test]
    fn couple_in_the_plane() {
        let r = reduce_force_system(&sys(&[
            (&[0.0, 0.0], &[0.0, 1.0]),
            (&[1.0, 0.0], &[0.0, -1.0]),
        ]))
        .unwrap();
        assert_eq!(r.class, ForceClass::Couple);
        let expect = wedge(&[0.0, -1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(r.total, expect);
    }

    #[test]
    fn two_forces_reduce_to_one() {
        // (0,0) with (1,0) and (0,1) with (1,0): resultant (2,0) along y = 1/2
        let r = reduce_force_system(&sys(&[
            (&[0.0, 0.0], &[1.0, 0.0]),
            (&[0.0, 1.0], &[1.0, 0.0]),
        ]))
        .unwrap();
        let ForceClass::SingleForce { point, force } = r.class else {
            panic!()
        };
        assert_eq!(force, vec![2.0, 0.0]);
        assert!((point[0]).abs() < 1e-15 && (point[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn wrench_in_space_does_not_reduce() {
        // force along z at the origin plus a couple in the xy-plane
        let r = reduce_force_system(&sys(&[
            (&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0]),
            (&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]),
            (&[0.0, 1.0, 0.0], &[-1.0, 0.0, 0.0]),
        ]));
        assert!(matches!(r, Err(Error::NonDecomposable { .. })));
    }
}
