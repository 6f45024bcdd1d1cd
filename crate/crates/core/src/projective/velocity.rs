//! Projective velocities: classes of dual bivectors at a point `[x]`, taken
//! modulo the functionals vanishing on `x ∧ ℝ^{d+1}`.
//!
//! Two representatives `t₁, t₂` at `x` are equivalent iff
//! `contract(x, t₁ − t₂) = 0`. The canonical representative is the orthogonal
//! projection (component inner product) onto the span of `{x ∧ y}`, which is
//! `x ∧ contract(x, t) / ‖x‖²`.
//!
//! Dictionary between velocity vectors and classes, with `α = contract(x, τ)`:
//!
//! | geometry   | point `x`  | velocity from `α`        |
//! |------------|------------|--------------------------|
//! | euclidean  | `(1, p)`   | `(α₁, …, α_d)`           |
//! | spherical  | `p`        | `α`                      |
//! | hyperbolic | `p`        | `(−α₀, α₁, …, α_d)`      |
//!
//! The hyperbolic row identifies covectors with vectors through the
//! positive-definite metric induced on the tangent spaces of the hyperboloid,
//! which is the negative of the Minkowski form there.

use crate::error::{check_dim, Error, Result};
use crate::framework::{lift_point, Geometry, ProjectiveFramework};
use crate::linalg::{contract, dot, norm, pairing, wedge, DualBivector, Scalar, NEGLIGIBLE};

/// Relative tolerance for tangency and base-point proportionality checks in
/// floating arithmetic.
const BASE_TOLERANCE: f64 = 1e-12;
const TANGENCY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DualBivectorClass<T: Scalar = f64> {
    base: Vec<T>,
    rep: DualBivector<T>,
}

fn f64_norm<T: Scalar>(v: &[T]) -> f64 {
    norm(&v.iter().map(Scalar::as_f64).collect::<Vec<_>>())
}

fn proportional<T: Scalar>(x: &[T], y: &[T]) -> Result<bool> {
    let w = wedge(x, y)?;
    let scale = f64_norm(x) * f64_norm(y);
    Ok(w.components()
        .iter()
        .all(|c| c.is_negligible(scale * BASE_TOLERANCE)))
}

impl<T: Scalar> DualBivectorClass<T> {
    /// The class of `t` at `[base]`, stored by its canonical representative.
    pub fn new(base: Vec<T>, t: &DualBivector<T>) -> Result<Self> {
        check_dim(base.len(), t.dim())?;
        if base.iter().all(|v| v.is_zero()) {
            return Err(Error::InvalidParameters("zero base point".into()));
        }
        let alpha = contract(&base, t)?;
        Ok(Self::from_covector(base, &alpha))
    }

    /// The class whose contraction with `base` is `alpha` (`alpha(base)` must be 0).
    fn from_covector(base: Vec<T>, alpha: &[T]) -> Self {
        let n2 = dot(&base, &base);
        let rep = wedge(&base, alpha)
            .expect("same length")
            .scale(&(T::one() / n2))
            .to_dual();
        DualBivectorClass { base, rep }
    }

    pub fn base(&self) -> &[T] {
        &self.base
    }

    pub fn representative(&self) -> &DualBivector<T> {
        &self.rep
    }

    /// `contract(base, τ)`.
    pub fn covector(&self) -> Vec<T> {
        contract(&self.base, &self.rep).expect("consistent dimensions")
    }

    pub fn is_zero(&self) -> bool {
        let scale = f64_norm(&self.base);
        self.covector()
            .iter()
            .all(|c| c.is_negligible(NEGLIGIBLE * scale))
    }

    /// Equality of classes at the same point.
    pub fn same_class(&self, other: &Self) -> Result<bool> {
        if !proportional(&self.base, &other.base)? {
            return Err(Error::BasePointMismatch);
        }
        let diff = &self.rep - &other.rep;
        let scale = f64_norm(&self.base) * (self.rep.norm() + other.rep.norm()).max(1.0);
        Ok(contract(&self.base, &diff)?
            .iter()
            .all(|c| c.is_negligible(NEGLIGIBLE * scale)))
    }
}

fn negate_time<T: Scalar>(v: &[T]) -> Vec<T> {
    v.iter()
        .enumerate()
        .map(|(k, x)| if k == 0 { -x.clone() } else { x.clone() })
        .collect()
}

/// Class of the Euclidean velocity `q` at `p`.
pub fn velocity_lift<T: Scalar>(p: &[T], q: &[T]) -> Result<DualBivectorClass<T>> {
    velocity_lift_in(Geometry::Euclidean, p, q)
}

/// Class of the velocity `q` at `p` for any geometry. Hyperbolic and
/// spherical points and velocities are ambient `(d+1)`-vectors, and `q` must
/// be tangent at `p`.
pub fn velocity_lift_in<T: Scalar>(
    geometry: Geometry,
    p: &[T],
    q: &[T],
) -> Result<DualBivectorClass<T>> {
    check_dim(p.len(), q.len())?;
    let (x, alpha) = match geometry {
        Geometry::Euclidean => {
            let x = lift_point(p);
            let mut alpha = lift_point(q);
            alpha[0] = -dot(p, q);
            (x, alpha)
        }
        Geometry::Spherical | Geometry::Hyperbolic => {
            let residual = geometry.inner(p, q);
            if !residual.is_negligible(TANGENCY_TOLERANCE * f64_norm(p) * f64_norm(q)) {
                return Err(Error::TangencyViolation {
                    index: 0,
                    residual: residual.as_f64(),
                });
            }
            let alpha = if geometry == Geometry::Hyperbolic {
                negate_time(q)
            } else {
                q.to_vec()
            };
            (p.to_vec(), alpha)
        }
    };
    Ok(DualBivectorClass::from_covector(x, &alpha))
}

/// Velocity vector of the class `tau` at the point `p` of the given geometry.
pub fn velocity_drop<T: Scalar>(
    p: &[T],
    tau: &DualBivectorClass<T>,
    geometry: Geometry,
) -> Result<Vec<T>> {
    let x = match geometry {
        Geometry::Euclidean => lift_point(p),
        _ => p.to_vec(),
    };
    check_dim(tau.base.len(), x.len())?;
    if !proportional(&x, &tau.base)? {
        return Err(Error::BasePointMismatch);
    }
    let alpha = contract(&x, &tau.rep)?;
    Ok(match geometry {
        Geometry::Euclidean => alpha[1..].to_vec(),
        Geometry::Spherical => alpha,
        Geometry::Hyperbolic => negate_time(&alpha),
    })
}

/// Whether the classes define an infinitesimal motion: for every edge,
/// `⟨x_i ∧ x_j, τ_i − τ_j⟩ = 0`.
pub fn projective_motion_check<T: Scalar>(
    reps: &[Vec<T>],
    edges: &[(usize, usize)],
    taus: &[DualBivectorClass<T>],
) -> Result<bool> {
    check_dim(reps.len(), taus.len())?;
    for (x, t) in reps.iter().zip(taus) {
        if !proportional(x, &t.base)? {
            return Err(Error::BasePointMismatch);
        }
    }
    let tau_scale = taus.iter().map(|t| t.rep.norm()).fold(0.0, f64::max);
    for &(i, j) in edges {
        let w = wedge(&reps[i], &reps[j])?;
        let v = pairing(&w, &(&taus[i].rep - &taus[j].rep))?;
        if !v.is_negligible(NEGLIGIBLE * w.norm() * tau_scale) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl ProjectiveFramework {
    /// [`projective_motion_check`] on the stored floating representatives.
    pub fn is_motion(&self, taus: &[DualBivectorClass]) -> Result<bool> {
        projective_motion_check(self.representatives(), self.edges(), taus)
    }
}
