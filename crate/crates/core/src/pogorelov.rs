//! Central projection of Euclidean frameworks onto the hyperboloid and the
//! sphere, and the matching transport of velocity fields.
//!
//! The Euclidean space is the slice `x⁰ = 1`, touching both model surfaces at
//! `c = (1, 0, …, 0)`. A vertex `p` goes to `(1, p)/s` on the hyperboloid with
//! `s = √(1 − ‖p‖²)` (so `‖p‖ < 1` is required) and to `(1, p)/s'` on the sphere
//! with `s' = √(1 + ‖p‖²)`.
//!
//! Velocities are carried through the projective velocity class at `[(1, p)]`:
//! lift in one geometry, drop in the other. [`closed_form`] evaluates the
//! same map directly and serves as an independent check.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{lift_point, Framework, Geometry, VelocityField};
use crate::linalg::{dot, norm, Scalar};
use crate::projective::{velocity_drop, velocity_lift, velocity_lift_in};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToHyperbolic,
    FromHyperbolic,
    ToSpherical,
    FromSpherical,
}

impl Direction {
    pub fn target(self) -> Geometry {
        match self {
            Direction::ToHyperbolic | Direction::FromHyperbolic => Geometry::Hyperbolic,
            Direction::ToSpherical | Direction::FromSpherical => Geometry::Spherical,
        }
    }

    pub fn is_forward(self) -> bool {
        matches!(self, Direction::ToHyperbolic | Direction::ToSpherical)
    }

    pub fn inverse(self) -> Direction {
        match self {
            Direction::ToHyperbolic => Direction::FromHyperbolic,
            Direction::FromHyperbolic => Direction::ToHyperbolic,
            Direction::ToSpherical => Direction::FromSpherical,
            Direction::FromSpherical => Direction::ToSpherical,
        }
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "to_hyperbolic" => Ok(Direction::ToHyperbolic),
            "from_hyperbolic" => Ok(Direction::FromHyperbolic),
            "to_spherical" => Ok(Direction::ToSpherical),
            "from_spherical" => Ok(Direction::FromSpherical),
            _ => Err(Error::InvalidParameters(format!("unknown direction {s:?}"))),
        }
    }
}

/// Drop the 0th coordinate.
pub fn coordinate_projection<T: Clone>(x: &[T]) -> Vec<T> {
    x[1..].to_vec()
}

fn check_target(target: Geometry) -> Result<()> {
    if target == Geometry::Euclidean {
        return Err(Error::InvalidParameters(
            "projection target must be hyperbolic or spherical".into(),
        ));
    }
    Ok(())
}

/// `√(1 ∓ ‖p‖²)` for the hyperbolic (−) or spherical (+) target.
fn scale_factor(target: Geometry, p: &[f64]) -> f64 {
    let r2 = dot(p, p);
    match target {
        Geometry::Hyperbolic => (1.0 - r2).sqrt(),
        _ => (1.0 + r2).sqrt(),
    }
}

fn exact_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(root(x.numer())?, root(x.denom())?))
}

/// Exact images when every scale factor is rational.
fn exact_projection(target: Geometry, vs: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    vs.iter()
        .map(|p| {
            let r2 = dot(p, p);
            let one = BigRational::from_int(1);
            let s = exact_sqrt(&if target == Geometry::Hyperbolic {
                one - r2
            } else {
                one + r2
            })?;
            Some(lift_point(p).iter().map(|x| x / &s).collect())
        })
        .collect()
}

pub fn central_project(fw: &Framework, target: Geometry) -> Result<Framework> {
    fw.geometry().expect(Geometry::Euclidean)?;
    check_target(target)?;
    if target == Geometry::Hyperbolic {
        if let Some(i) = fw.vertices().iter().position(|p| dot(p, p) >= 1.0) {
            return Err(Error::OutsideDisk(i));
        }
    }
    if let Some(image) = fw
        .exact_vertices()
        .and_then(|e| exact_projection(target, e))
    {
        return fw.with_exact_vertices(target, image);
    }
    let image = fw
        .vertices()
        .iter()
        .map(|p| {
            let s = scale_factor(target, p);
            lift_point(p).iter().map(|x| x / s).collect()
        })
        .collect();
    fw.with_vertices(target, image)
}

/// Translate the centroid to the origin and scale so that the farthest vertex
/// lies within `radius`. The scale factor is rounded down to a multiple of
/// 1e-6 so that rational coordinates stay rational.
pub fn fit_disk(fw: &Framework, radius: f64) -> Result<Framework> {
    fw.geometry().expect(Geometry::Euclidean)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let n = fw.vertex_count();
    if n == 0 {
        return Ok(fw.clone());
    }
    let centroid: Vec<f64> = (0..fw.dimension())
        .map(|a| fw.vertices().iter().map(|p| p[a]).sum::<f64>() / n as f64)
        .collect();
    let far = fw
        .vertices()
        .iter()
        .map(|p| {
            norm(
                &p.iter()
                    .zip(&centroid)
                    .map(|(x, c)| x - c)
                    .collect::<Vec<_>>(),
            )
        })
        .fold(0.0, f64::max);
    let factor = if far == 0.0 { 1.0 } else { radius / far };
    let grid = 1_000_000i64;
    let steps = (factor * grid as f64).floor().max(1.0) as i64;
    let s = BigRational::new(steps.into(), grid.into());
    if let Some(e) = fw.exact_vertices() {
        let nq = BigRational::from_int(n as i64);
        let c: Vec<BigRational> = (0..fw.dimension())
            .map(|a| e.iter().fold(BigRational::zero(), |acc, p| acc + &p[a]) / &nq)
            .collect();
        let image = e
            .iter()
            .map(|p| p.iter().zip(&c).map(|(x, ci)| (x - ci) * &s).collect())
            .collect();
        return fw.with_exact_vertices(Geometry::Euclidean, image);
    }
    let sf = s.as_f64();
    let image = fw
        .vertices()
        .iter()
        .map(|p| p.iter().zip(&centroid).map(|(x, c)| (x - c) * sf).collect())
        .collect();
    fw.with_vertices(Geometry::Euclidean, image)
}

/// Transport `field` between the Euclidean framework `fw` and its central
/// projection. Forward directions take a Euclidean field and return an
/// ambient field on the projected vertices; backward directions the reverse.
pub fn pogorelov_transport(
    fw: &Framework,
    field: &VelocityField,
    direction: Direction,
) -> Result<VelocityField> {
    let target = direction.target();
    let projected = central_project(fw, target)?;
    let mut out = Vec::with_capacity(fw.vertex_count());
    if direction.is_forward() {
        field.check_shape(fw, fw.dimension())?;
        for ((p, x), q) in fw
            .vertices()
            .iter()
            .zip(projected.vertices())
            .zip(&field.vectors)
        {
            let tau = velocity_lift(p, q)?;
            out.push(velocity_drop(x, &tau, target)?);
        }
    } else {
        field.check_shape(fw, fw.dimension() + 1)?;
        for (i, ((p, x), q)) in fw
            .vertices()
            .iter()
            .zip(projected.vertices())
            .zip(&field.vectors)
            .enumerate()
        {
            let tau = velocity_lift_in(target, x, q).map_err(|e| match e {
                Error::TangencyViolation { residual, .. } => {
                    Error::TangencyViolation { index: i, residual }
                }
                other => other,
            })?;
            out.push(velocity_drop(p, &tau, Geometry::Euclidean)?);
        }
    }
    Ok(VelocityField::new(out))
}

/// Direct formulas for the same transport at a single Euclidean point `p`:
/// forward `q ↦ (±p·q, q)/s` (plus sign for the hyperboloid, minus for the
/// sphere), backward `q ↦ pr(s·q)`.
pub fn closed_form(p: &[f64], q: &[f64], direction: Direction) -> Vec<f64> {
    let target = direction.target();
    let s = scale_factor(target, p);
    if direction.is_forward() {
        let pq = dot(p, q);
        let head = if target == Geometry::Hyperbolic {
            pq
        } else {
            -pq
        };
        std::iter::once(head / s)
            .chain(q.iter().map(|v| v / s))
            .collect()
    } else {
        coordinate_projection(q).iter().map(|v| v * s).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TolerancePolicy;
    use crate::rigidity::{analyze_kinematics, motion_residual};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn projection_examples() {
        let fw = Framework::from_exact(
            1,
            Geometry::Euclidean,
            vec![vec![q(3, 5)], vec![q(0, 1)]],
            vec![(0, 1)],
        )
        .unwrap();
        let h = central_project(&fw, Geometry::Hyperbolic).unwrap();
        assert_eq!(h.exact_vertices().unwrap()[0], vec![q(5, 4), q(3, 4)]);
        assert_eq!(h.exact_vertices().unwrap()[1], vec![q(1, 1), q(0, 1)]);
        let s = central_project(
            &Framework::from_integers(&[&[1]], &[]).unwrap(),
            Geometry::Spherical,
        )
        .unwrap();
        let r = 0.5f64.sqrt();
        assert!((s.vertices()[0][0] - r).abs() < 1e-15 && (s.vertices()[0][1] - r).abs() < 1e-15);
        let far = Framework::from_integers(&[&[0, 0], &[1, 0]], &[]).unwrap();
        assert!(matches!(
            central_project(&far, Geometry::Hyperbolic),
            Err(Error::OutsideDisk(1))
        ));
    }

    #[test]
    fn tangent_point_factor() {
        let fw = Framework::new(
            2,
            Geometry::Euclidean,
            vec![vec![0.0, 0.0], vec![0.5, 0.0]],
            vec![],
        )
        .unwrap();
        let field = VelocityField::new(vec![vec![1.0, 2.0], vec![0.0, 1.0]]);
        let h = pogorelov_transport(&fw, &field, Direction::ToHyperbolic).unwrap();
        // at c: q = pr(q^H)
        assert_eq!(coordinate_projection(&h.vectors[0]), vec![1.0, 2.0]);
        // at ‖p‖ = 1/2: q = pr(√0.75 · q^H)
        let back: Vec<f64> = coordinate_projection(&h.vectors[1])
            .iter()
            .map(|v| v * 0.75f64.sqrt())
            .collect();
        assert!((back[0]).abs() < 1e-15 && (back[1] - 1.0).abs() < 1e-15);
        let hp = central_project(&fw, Geometry::Hyperbolic).unwrap();
        for (x, v) in hp.vertices().iter().zip(&h.vectors) {
            assert!(Geometry::Hyperbolic.inner(x, v).abs() < 1e-15);
        }
    }

    #[test]
    fn pipeline_matches_closed_form_and_inverts() {
        let fw = Framework::new(
            2,
            Geometry::Euclidean,
            vec![vec![0.1, -0.3], vec![0.6, 0.2], vec![-0.4, 0.5]],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        let field = VelocityField::new(vec![vec![1.0, 0.5], vec![-2.0, 0.25], vec![0.3, -0.7]]);
        for dir in [Direction::ToHyperbolic, Direction::ToSpherical] {
            let fwd = pogorelov_transport(&fw, &field, dir).unwrap();
            for ((p, qq), out) in fw.vertices().iter().zip(&field.vectors).zip(&fwd.vectors) {
                let cf = closed_form(p, qq, dir);
                for (a, b) in cf.iter().zip(out) {
                    assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
                }
            }
            let back = pogorelov_transport(&fw, &fwd, dir.inverse()).unwrap();
            for (a, b) in back.to_flat().iter().zip(field.to_flat()) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn square_flex_goes_to_hyperbolic_motion() {
        let sq = Framework::from_exact(
            2,
            Geometry::Euclidean,
            [(-1, -1), (1, -1), (1, 1), (-1, 1)]
                .iter()
                .map(|&(a, b)| vec![q(a, 2), q(b, 2)])
                .collect(),
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        )
        .unwrap();
        let rep = analyze_kinematics(&sq, TolerancePolicy::exact()).unwrap();
        let hyp = central_project(&sq, Geometry::Hyperbolic).unwrap();
        for m in &rep.motion_basis {
            let t = pogorelov_transport(&sq, m, Direction::ToHyperbolic).unwrap();
            assert!(motion_residual(&hyp, &t).unwrap() < 1e-9);
        }
    }

    #[test]
    fn non_tangent_field_rejected() {
        let fw = Framework::new(1, Geometry::Euclidean, vec![vec![0.0]], vec![]).unwrap();
        let bad = VelocityField::new(vec![vec![1.0, 0.0]]);
        assert!(matches!(
            pogorelov_transport(&fw, &bad, Direction::FromSpherical),
            Err(Error::TangencyViolation { index: 0, .. })
        ));
    }

    #[test]
    fn fit_disk_keeps_rationals() {
        let fw = Framework::from_integers(&[&[0, 0], &[4, 0], &[0, 4]], &[(0, 1)]).unwrap();
        let f = fit_disk(&fw, 0.9).unwrap();
        assert!(f.is_exact());
        let far = f.vertices().iter().map(|p| norm(p)).fold(0.0, f64::max);
        assert!(far <= 0.9 && far > 0.9 - 1e-5);
        assert!(central_project(&f, Geometry::Hyperbolic).is_ok());
    }

    #[test]
    fn direction_names() {
        assert_eq!(
            "to-hyperbolic".parse::<Direction>().unwrap(),
            Direction::ToHyperbolic
        );
        assert_eq!(
            "from_spherical".parse::<Direction>().unwrap(),
            Direction::FromSpherical
        );
        assert!("sideways".parse::<Direction>().is_err());
    }
}
