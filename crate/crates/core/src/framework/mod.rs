//! Frameworks in Euclidean, hyperbolic and spherical space.
//!
//! Euclidean vertices carry `d` coordinates and are read as the slice
//! `x⁰ = 1` of ℝ^{d+1}. Hyperbolic and spherical vertices carry all `d + 1`
//! ambient coordinates (index 0 first) and must lie on `‖x‖²_{1,d} = 1,
//! x⁰ > 0`, respectively `‖x‖² = 1`.

mod io;

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, exact, float, wedge, RationalMatrix, Scalar, TolerancePolicy};

pub(crate) use io::{decimal_rational, parse_rational_matrix};
pub use io::{
    framework_to_json, framework_to_value, parse_framework, parse_load, parse_stress,
    parse_velocity_field, rational_to_json, stress_to_value,
};

/// Absolute tolerance on the surface-membership residual of input vertices.
pub const SURFACE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
    Spherical,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Hyperbolic => "hyperbolic",
            Geometry::Spherical => "spherical",
        }
    }

    /// Diagonal of the ambient bilinear form: Minkowski `(+,−,…,−)` for
    /// hyperbolic, Euclidean otherwise.
    pub fn metric_sign(self, k: usize) -> i64 {
        match (self, k) {
            (Geometry::Hyperbolic, 0) => 1,
            (Geometry::Hyperbolic, _) => -1,
            _ => 1,
        }
    }

    /// Ambient scalar product `⟨x, y⟩_g`.
    pub fn inner<T: Scalar>(self, x: &[T], y: &[T]) -> T {
        x.iter()
            .zip(y)
            .enumerate()
            .fold(T::zero(), |acc, (k, (a, b))| {
                let t = a.clone() * b.clone();
                if self.metric_sign(k) < 0 {
                    acc - t
                } else {
                    acc + t
                }
            })
    }

    /// Number of stored coordinates per vertex.
    pub fn coordinate_count(self, dimension: usize) -> usize {
        match self {
            Geometry::Euclidean => dimension,
            _ => dimension + 1,
        }
    }

    pub(crate) fn expect(self, expected: Geometry) -> Result<()> {
        if self == expected {
            Ok(())
        } else {
            Err(Error::WrongGeometry {
                expected: expected.name().into(),
                found: self.name().into(),
            })
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Geometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Geometry::Euclidean),
            "hyperbolic" => Ok(Geometry::Hyperbolic),
            "spherical" => Ok(Geometry::Spherical),
            other => Err(Error::Schema(format!("unknown geometry {other:?}"))),
        }
    }
}

/// A bar-joint framework. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Framework {
    dimension: usize,
    geometry: Geometry,
    vertices: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<BigRational>>>,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

fn validate_edges(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut seen = HashSet::new();
    for &(i, j) in edges {
        if i >= n || j >= n {
            return Err(Error::InvalidEdge(format!(
                "edge {i}-{j} references a vertex outside 0..{n}"
            )));
        }
        if i == j {
            return Err(Error::InvalidEdge(format!("self-loop at vertex {i}")));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::InvalidEdge(format!("duplicate edge {i}-{j}")));
        }
    }
    Ok(())
}

impl Framework {
    pub fn new(
        dimension: usize,
        geometry: Geometry,
        vertices: Vec<Vec<f64>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let fw = Framework {
            dimension,
            geometry,
            vertices,
            exact: None,
            edges,
            labels: None,
        };
        fw.validate()?;
        Ok(fw)
    }

    /// A framework with exact rational coordinates (the floating copy is derived).
    pub fn from_exact(
        dimension: usize,
        geometry: Geometry,
        vertices: Vec<Vec<BigRational>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let float = vertices
            .iter()
            .map(|v| v.iter().map(Scalar::as_f64).collect())
            .collect();
        let mut fw = Framework {
            dimension,
            geometry,
            vertices: float,
            exact: Some(vertices),
            edges,
            labels: None,
        };
        fw.validate()?;
        if geometry != Geometry::Euclidean && !fw.exact_on_surface() {
            // decimal approximations of surface points: keep floating data only
            fw.exact = None;
        }
        Ok(fw)
    }

    /// Euclidean framework with integer coordinates.
    pub fn from_integers(vertices: &[&[i64]], edges: &[(usize, usize)]) -> Result<Self> {
        let dimension = vertices.first().map_or(0, |v| v.len());
        let exact = vertices
            .iter()
            .map(|v| v.iter().map(|&x| BigRational::from_int(x)).collect())
            .collect();
        Self::from_exact(dimension, Geometry::Euclidean, exact, edges.to_vec())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        check_dim(self.vertices.len(), labels.len())?;
        self.labels = Some(labels);
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Schema("dimension must be at least 1".into()));
        }
        let k = self.geometry.coordinate_count(self.dimension);
        for v in &self.vertices {
            check_dim(k, v.len())?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Schema("non-finite coordinate".into()));
            }
        }
        validate_edges(self.vertices.len(), &self.edges)?;
        for &(i, j) in &self.edges {
            let same = match &self.exact {
                Some(e) => e[i] == e[j],
                None => self.vertices[i] == self.vertices[j],
            };
            if same {
                return Err(Error::CoincidentEdgeEndpoints(i, j));
            }
        }
        if self.geometry != Geometry::Euclidean {
            for (i, v) in self.vertices.iter().enumerate() {
                if self.geometry == Geometry::Hyperbolic && v[0] <= 0.0 {
                    return Err(Error::NonPositiveSheet(i));
                }
                let residual = self.geometry.inner(v, v) - 1.0;
                if residual.abs() > SURFACE_TOLERANCE {
                    return Err(Error::OffSurfaceVertex { index: i, residual });
                }
            }
        }
        Ok(())
    }

    fn exact_on_surface(&self) -> bool {
        self.exact.as_ref().is_some_and(|e| {
            e.iter()
                .all(|v| self.geometry.inner(v, v) == BigRational::one())
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn exact_vertices(&self) -> Option<&[Vec<BigRational>]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Coordinates per vertex (d for Euclidean, d+1 otherwise).
    pub fn coordinate_count(&self) -> usize {
        self.geometry.coordinate_count(self.dimension)
    }

    /// Same framework with the exact coordinates dropped.
    pub fn without_exact(&self) -> Framework {
        Framework {
            exact: None,
            ..self.clone()
        }
    }

    pub(crate) fn exact_or_err(&self) -> Result<&[Vec<BigRational>]> {
        self.exact
            .as_deref()
            .ok_or_else(|| Error::ExactModeUnavailable("this framework".into()))
    }

    /// Ambient representatives: `(1, p)` for Euclidean vertices, the stored
    /// coordinates otherwise.
    pub fn lifted(&self) -> Vec<Vec<f64>> {
        lift_all(self.geometry, &self.vertices)
    }

    pub fn lifted_exact(&self) -> Option<Vec<Vec<BigRational>>> {
        self.exact.as_ref().map(|e| lift_all(self.geometry, e))
    }

    /// Same graph on new coordinates (floating).
    pub fn with_vertices(&self, geometry: Geometry, vertices: Vec<Vec<f64>>) -> Result<Framework> {
        let mut fw = Framework::new(self.dimension, geometry, vertices, self.edges.clone())?;
        fw.labels = self.labels.clone();
        Ok(fw)
    }

    pub fn with_exact_vertices(
        &self,
        geometry: Geometry,
        vertices: Vec<Vec<BigRational>>,
    ) -> Result<Framework> {
        let mut fw = Framework::from_exact(self.dimension, geometry, vertices, self.edges.clone())?;
        fw.labels = self.labels.clone();
        Ok(fw)
    }
}

pub(crate) fn lift_point<T: Scalar>(p: &[T]) -> Vec<T> {
    std::iter::once(T::one()).chain(p.iter().cloned()).collect()
}

fn lift_all<T: Scalar>(geometry: Geometry, vs: &[Vec<T>]) -> Vec<Vec<T>> {
    match geometry {
        Geometry::Euclidean => vs.iter().map(|p| lift_point(p)).collect(),
        _ => vs.to_vec(),
    }
}

/// Dimension of the affine hull of the vertices of a Euclidean framework.
pub fn affine_span_dim(fw: &Framework, tol: TolerancePolicy) -> Result<usize> {
    fw.geometry.expect(Geometry::Euclidean)?;
    if fw.vertex_count() <= 1 {
        return Ok(0);
    }
    if tol.is_exact() {
        let e = fw.exact_or_err()?;
        let rows: Vec<Vec<BigRational>> = e[1..]
            .iter()
            .map(|p| p.iter().zip(&e[0]).map(|(a, b)| a - b).collect())
            .collect();
        Ok(exact::rank(&RationalMatrix::from_rows(&rows)?))
    } else {
        let v = &fw.vertices;
        let rows: Vec<Vec<f64>> = v[1..]
            .iter()
            .map(|p| p.iter().zip(&v[0]).map(|(a, b)| a - b).collect())
            .collect();
        Ok(float::rank(
            &linalg::Matrix::from_rows(&rows)?,
            tol.rel_epsilon,
        ))
    }
}

/// A framework in ℝP^d given by representatives in ℝ^{d+1} \ {0}.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveFramework {
    dimension: usize,
    representatives: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<BigRational>>>,
    edges: Vec<(usize, usize)>,
}

impl ProjectiveFramework {
    pub fn new(
        dimension: usize,
        representatives: Vec<Vec<f64>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let pf = ProjectiveFramework {
            dimension,
            representatives,
            exact: None,
            edges,
        };
        pf.validate()?;
        Ok(pf)
    }

    pub fn from_exact(
        dimension: usize,
        representatives: Vec<Vec<BigRational>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let pf = ProjectiveFramework {
            dimension,
            representatives: representatives
                .iter()
                .map(|v| v.iter().map(Scalar::as_f64).collect())
                .collect(),
            exact: Some(representatives),
            edges,
        };
        pf.validate()?;
        Ok(pf)
    }

    fn validate(&self) -> Result<()> {
        for v in &self.representatives {
            check_dim(self.dimension + 1, v.len())?;
            if v.iter().all(|x| *x == 0.0) {
                return Err(Error::Schema("zero representative".into()));
            }
        }
        validate_edges(self.representatives.len(), &self.edges)?;
        for &(i, j) in &self.edges {
            let proportional = match &self.exact {
                Some(e) => wedge(&e[i], &e[j])?.is_zero(),
                None => {
                    let (x, y) = (&self.representatives[i], &self.representatives[j]);
                    wedge(x, y)?.norm() <= 1e-12 * linalg::norm(x) * linalg::norm(y)
                }
            };
            if proportional {
                return Err(Error::ProportionalRepresentatives(i, j));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn representatives(&self) -> &[Vec<f64>] {
        &self.representatives
    }

    pub fn exact_representatives(&self) -> Option<&[Vec<BigRational>]> {
        self.exact.as_deref()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// `p ↦ (1, p)` for Euclidean vertices; hyperbolic and spherical vertices
/// pass through as their ambient coordinates.
pub fn lift_to_projective(fw: &Framework) -> ProjectiveFramework {
    let edges = fw.edges.clone();
    // the invariants of `fw` imply non-proportional lifted edge endpoints
    ProjectiveFramework {
        dimension: fw.dimension,
        representatives: fw.lifted(),
        exact: fw.lifted_exact(),
        edges,
    }
}

/// Per-vertex velocity vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocityField {
    #[serde(rename = "field")]
    pub vectors: Vec<Vec<f64>>,
}

/// Per-vertex force vectors (Euclidean statics).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Load {
    #[serde(rename = "field")]
    pub forces: Vec<Vec<f64>>,
}

macro_rules! per_vertex {
    ($t:ident, $f:ident) => {
        impl $t {
            pub fn new($f: Vec<Vec<f64>>) -> Self {
                $t { $f }
            }

            pub fn zeros(vertices: usize, components: usize) -> Self {
                $t {
                    $f: vec![vec![0.0; components]; vertices],
                }
            }

            pub fn from_flat(flat: &[f64], components: usize) -> Self {
                $t {
                    $f: flat.chunks(components).map(<[f64]>::to_vec).collect(),
                }
            }

            pub fn to_flat(&self) -> Vec<f64> {
                self.$f.iter().flatten().copied().collect()
            }

            pub fn len(&self) -> usize {
                self.$f.len()
            }

            pub fn is_empty(&self) -> bool {
                self.$f.is_empty()
            }

            pub(crate) fn check_shape(&self, fw: &Framework, components: usize) -> Result<()> {
                check_dim(fw.vertex_count(), self.$f.len())?;
                for v in &self.$f {
                    check_dim(components, v.len())?;
                }
                Ok(())
            }
        }
    };
}

per_vertex!(VelocityField, vectors);
per_vertex!(Load, forces);

/// Per-edge scalars in the framework's edge order.
#[derive(Clone, Debug, PartialEq)]
pub struct Stress {
    pub edges: Vec<(usize, usize)>,
    pub values: Vec<f64>,
}

impl Stress {
    /// `ω_ij`, zero for non-edges; symmetric in `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.edges
            .iter()
            .position(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
            .map_or(0.0, |k| self.values[k])
    }

    pub fn zero_for(fw: &Framework) -> Stress {
        Stress {
            edges: fw.edges().to_vec(),
            values: vec![0.0; fw.edges().len()],
        }
    }
}
