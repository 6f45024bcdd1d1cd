//! Parameterized example frameworks.
//!
//! Every generator is deterministic. Coordinates are exact rationals except
//! for the twisted octahedron, whose vertices involve `cos` and `sin` of the
//! base angles and are marked `approximate`.

mod blaschke;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use blaschke::{blaschke_check, plane_rank, FaceColoring};

use crate::error::{Error, Result};
use crate::framework::{decimal_rational, framework_to_value, Framework, Geometry, VelocityField};
use crate::linalg::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesarguesVariant {
    /// Inner triangle is a central similarity of the outer one.
    Concurrent,
    /// Matching lines are parallel.
    Parallel,
    /// One inner vertex pushed off its line.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum ExampleSpec {
    Simplex {
        dimension: usize,
    },
    /// Polygon with rational vertices on a circle.
    Cycle {
        vertices: usize,
        radius: f64,
    },
    /// Triangular antiprism; `twist_degrees = 0` is the regular octahedron.
    TwistedOctahedron {
        radius: f64,
        height: f64,
        twist_degrees: f64,
    },
    /// Octahedron whose black face planes pass through a common point;
    /// `t` slides one vertex along a line.
    LiebmannOctahedron {
        t: f64,
    },
    Desargues {
        variant: DesarguesVariant,
    },
    /// Complete bipartite graph on the ellipsoid `Σ (x_i / a_i)² = 1`.
    BipartiteQuadric {
        white: usize,
        black: usize,
        semi_axes: Vec<f64>,
    },
}

pub const EXAMPLE_IDS: [&str; 6] = [
    "simplex",
    "cycle",
    "twisted_octahedron",
    "liebmann_octahedron",
    "desargues",
    "bipartite_quadric",
];

impl ExampleSpec {
    pub fn default_for(id: &str) -> Result<ExampleSpec> {
        Ok(match id {
            "simplex" => ExampleSpec::Simplex { dimension: 2 },
            "cycle" => ExampleSpec::Cycle {
                vertices: 4,
                radius: 1.0,
            },
            "twisted_octahedron" => ExampleSpec::TwistedOctahedron {
                radius: 1.0,
                height: 1.0,
                twist_degrees: 90.0,
            },
            "liebmann_octahedron" => ExampleSpec::LiebmannOctahedron { t: -1.0 },
            "desargues" => ExampleSpec::Desargues {
                variant: DesarguesVariant::Concurrent,
            },
            "bipartite_quadric" => ExampleSpec::BipartiteQuadric {
                white: 3,
                black: 3,
                semi_axes: vec![1.0, 1.0],
            },
            other => {
                return Err(Error::InvalidParameters(format!(
                    "unknown example '{other}', expected one of {}",
                    EXAMPLE_IDS.join(", ")
                )))
            }
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            ExampleSpec::Simplex { .. } => "simplex",
            ExampleSpec::Cycle { .. } => "cycle",
            ExampleSpec::TwistedOctahedron { .. } => "twisted_octahedron",
            ExampleSpec::LiebmannOctahedron { .. } => "liebmann_octahedron",
            ExampleSpec::Desargues { .. } => "desargues",
            ExampleSpec::BipartiteQuadric { .. } => "bipartite_quadric",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: ExampleSpec,
    pub framework: Framework,
    pub coloring: Option<FaceColoring>,
    pub approximate: bool,
    /// A nontrivial motion known in closed form.
    pub known_flex: Option<VelocityField>,
}

impl CatalogEntry {
    /// Framework JSON with `provenance`, `approximate` and, for octahedra,
    /// `coloring` appended.
    pub fn to_json(&self) -> Value {
        let mut v = framework_to_value(&self.framework);
        v["provenance"] = json!({
            "generator": "catalog",
            "parameters": serde_json::to_value(&self.spec).expect("serializable"),
        });
        v["approximate"] = json!(self.approximate);
        if let Some(c) = &self.coloring {
            v["coloring"] = serde_json::to_value(c).expect("serializable");
        }
        v
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact_param(name: &str, x: f64) -> Result<BigRational> {
    decimal_rational(x).ok_or_else(|| invalid(format!("{name} must be finite")))
}

fn positive_param(name: &str, x: f64) -> Result<BigRational> {
    let r = exact_param(name, x)?;
    if !r.is_positive() {
        return Err(invalid(format!("{name} must be positive")));
    }
    Ok(r)
}

fn euclidean(vertices: Vec<Vec<BigRational>>, edges: Vec<(usize, usize)>) -> Result<Framework> {
    let d = vertices[0].len();
    Framework::from_exact(d, Geometry::Euclidean, vertices, edges)
        .map_err(|e| invalid(e.to_string()))
}

fn exact_entry(spec: &ExampleSpec, framework: Framework) -> CatalogEntry {
    CatalogEntry {
        spec: spec.clone(),
        framework,
        coloring: None,
        approximate: false,
        known_flex: None,
    }
}

pub fn make_example(spec: &ExampleSpec) -> Result<CatalogEntry> {
    match spec {
        ExampleSpec::Simplex { dimension } => simplex(*dimension).map(|f| exact_entry(spec, f)),
        ExampleSpec::Cycle { vertices, radius } => {
            cycle(*vertices, *radius).map(|f| exact_entry(spec, f))
        }
        ExampleSpec::TwistedOctahedron {
            radius,
            height,
            twist_degrees,
        } => twisted_octahedron(spec, *radius, *height, *twist_degrees),
        ExampleSpec::LiebmannOctahedron { t } => liebmann_octahedron(spec, *t),
        ExampleSpec::Desargues { variant } => desargues(*variant).map(|f| exact_entry(spec, f)),
        ExampleSpec::BipartiteQuadric {
            white,
            black,
            semi_axes,
        } => bipartite_quadric(spec, *white, *black, semi_axes),
    }
}

fn complete_graph(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn simplex(d: usize) -> Result<Framework> {
    if d == 0 {
        return Err(invalid("simplex dimension must be at least 1"));
    }
    let vertices = (0..=d)
        .map(|i| (0..d).map(|a| int((i == a + 1) as i64)).collect())
        .collect();
    euclidean(vertices, complete_graph(d + 1))
}

/// Rational point on the unit circle at parameter `t` (angle `2 atan t`).
fn circle_point(t: &BigRational) -> [BigRational; 2] {
    let t2 = t * t;
    let den = BigRational::one() + &t2;
    [(BigRational::one() - &t2) / &den, (t * int(2)) / den]
}

fn cycle(n: usize, radius: f64) -> Result<Framework> {
    if n < 3 {
        return Err(invalid("a cycle needs at least 3 vertices"));
    }
    let r = positive_param("radius", radius)?;
    let vertices = (0..n)
        .map(|k| {
            let half = std::f64::consts::PI * k as f64 / n as f64;
            let p = if 2 * k == n {
                [-BigRational::one(), BigRational::zero()]
            } else {
                // tangent of the half angle rounded to three decimals
                circle_point(&ratio((half.tan() * 1000.0).round() as i64, 1000))
            };
            p.iter().map(|x| x * &r).collect()
        })
        .collect();
    let edges = (0..n).map(|k| (k, (k + 1) % n)).collect();
    euclidean(vertices, edges)
}

fn octahedron_edges() -> Vec<(usize, usize)> {
    complete_graph(6)
        .into_iter()
        .filter(|&(i, j)| i % 3 != j % 3)
        .collect()
}

fn twisted_octahedron(spec: &ExampleSpec, r: f64, h: f64, twist: f64) -> Result<CatalogEntry> {
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid("radius must be positive"));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(invalid("height must be positive"));
    }
    if !twist.is_finite() {
        return Err(invalid("twist must be finite"));
    }
    let point = |deg: f64, z: f64| {
        let a = deg.to_radians();
        vec![r * a.cos(), r * a.sin(), z]
    };
    // top vertex k sits over the gap between bottom vertices k and k+1
    let vertices = (0..3)
        .map(|k| point(90.0 + 120.0 * k as f64, 0.0))
        .chain((0..3).map(|k| point(150.0 + 120.0 * k as f64 + twist, h)))
        .collect();
    let edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
        .into_iter()
        .chain((0..3).flat_map(|k| [(3 + k, k), (3 + k, (k + 1) % 3)]))
        .collect();
    let framework = Framework::new(3, Geometry::Euclidean, vertices, edges)
        .map_err(|e| invalid(e.to_string()))?;
    let coloring = FaceColoring {
        black: std::iter::once([0, 1, 2])
            .chain((0..3).map(|k| [3 + k, 3 + (k + 1) % 3, (k + 1) % 3]))
            .collect(),
        white: std::iter::once([3, 4, 5])
            .chain((0..3).map(|k| [3 + k, k, (k + 1) % 3]))
            .collect(),
    };
    Ok(CatalogEntry {
        spec: spec.clone(),
        framework,
        coloring: Some(coloring),
        approximate: true,
        known_flex: None,
    })
}

fn liebmann_octahedron(spec: &ExampleSpec, t: f64) -> Result<CatalogEntry> {
    let t = exact_param("t", t)?;
    // antipodal pairs are (0,3), (1,4), (2,5)
    let mut vertices: Vec<Vec<BigRational>> = [[0, 0, 1], [1, 1, 0], [-1, 1, 1], [0, 0, -1]]
        .iter()
        .map(|v| v.iter().map(|&x| int(x)).collect())
        .collect();
    vertices.push(vec![int(2) - &t, t.clone(), &t * int(2)]);
    vertices.push(vec![int(1), int(-1), int(-1)]);
    let framework = euclidean(vertices, octahedron_edges())?;
    let coloring = FaceColoring {
        black: vec![[0, 1, 2], [0, 4, 5], [3, 1, 5], [3, 4, 2]],
        white: vec![[3, 4, 5], [3, 1, 2], [0, 4, 2], [0, 1, 5]],
    };
    let rank = plane_rank(
        &framework,
        &coloring,
        crate::linalg::TolerancePolicy::exact(),
    )?;
    if rank < 3 {
        return Err(invalid("degenerate face planes for this t"));
    }
    Ok(CatalogEntry {
        spec: spec.clone(),
        framework,
        coloring: Some(coloring),
        approximate: false,
        known_flex: None,
    })
}

fn desargues(variant: DesarguesVariant) -> Result<Framework> {
    let outer = [[0, 0], [6, 0], [2, 5]];
    let outer: Vec<Vec<BigRational>> = outer
        .iter()
        .map(|p| p.iter().map(|&x| int(x)).collect())
        .collect();
    let inner: Vec<Vec<BigRational>> = match variant {
        DesarguesVariant::Concurrent | DesarguesVariant::Generic => {
            let centre = [int(2), int(2)];
            let lambda = ratio(1, 3);
            let mut inner: Vec<Vec<BigRational>> = outer
                .iter()
                .map(|a| {
                    (0..2)
                        .map(|k| &centre[k] + &lambda * (&a[k] - &centre[k]))
                        .collect()
                })
                .collect();
            if variant == DesarguesVariant::Generic {
                inner[2][0] += ratio(1, 5);
            }
            inner
        }
        DesarguesVariant::Parallel => {
            let dir = [int(1), int(3)];
            outer
                .iter()
                .zip(1..)
                .map(|(a, mu)| (0..2).map(|k| &a[k] + &dir[k] * int(mu)).collect())
                .collect()
        }
    };
    let edges = vec![
        (0, 1),
        (1, 2),
        (0, 2),
        (3, 4),
        (4, 5),
        (3, 5),
        (0, 3),
        (1, 4),
        (2, 5),
    ];
    euclidean(outer.into_iter().chain(inner).collect(), edges)
}

/// Integer vectors of length `k`, ordered by squared norm and then
/// lexicographically.
fn lattice_points(k: usize, count: usize) -> Vec<Vec<i64>> {
    let mut radius = 1i64;
    loop {
        let side = (2 * radius + 1) as usize;
        let mut pts: Vec<Vec<i64>> = (0..side.pow(k as u32))
            .map(|mut n| {
                (0..k)
                    .map(|_| {
                        let c = (n % side) as i64 - radius;
                        n /= side;
                        c
                    })
                    .collect()
            })
            .collect();
        pts.sort_by_key(|p| (p.iter().map(|x| x * x).sum::<i64>(), p.clone()));
        // points beyond this norm may be missing from the cube
        pts.retain(|p| p.iter().map(|x| x * x).sum::<i64>() <= radius * radius);
        if pts.len() >= count {
            pts.truncate(count);
            return pts;
        }
        radius += 1;
    }
}

/// Inverse stereographic projection of `u` onto the unit sphere in
/// `u.len() + 1` dimensions.
fn sphere_point(u: &[i64]) -> Vec<BigRational> {
    let s: i64 = u.iter().map(|x| x * x).sum();
    let den = int(s + 1);
    u.iter()
        .map(|&x| int(2 * x) / &den)
        .chain(std::iter::once(int(s - 1) / &den))
        .collect()
}

fn bipartite_quadric(spec: &ExampleSpec, m: usize, n: usize, axes: &[f64]) -> Result<CatalogEntry> {
    if m == 0 || n == 0 {
        return Err(invalid("both color classes must be nonempty"));
    }
    if axes.len() < 2 {
        return Err(invalid("the quadric needs at least two semi-axes"));
    }
    let axes: Vec<BigRational> = axes
        .iter()
        .map(|&a| positive_param("semi-axis", a))
        .collect::<Result<_>>()?;
    let d = axes.len();
    let params = lattice_points(d - 1, m + n);
    let place = |u: &Vec<i64>| -> Vec<BigRational> {
        sphere_point(u)
            .iter()
            .zip(&axes)
            .map(|(x, a)| x * a)
            .collect()
    };
    // alternate the two classes along the parameter order
    let (mut white, mut black) = (Vec::new(), Vec::new());
    for u in &params {
        if (white.len() <= black.len() && white.len() < m) || black.len() == n {
            white.push(place(u));
        } else {
            black.push(place(u));
        }
    }
    let edges = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, m + j)))
        .collect();
    let vertices: Vec<Vec<BigRational>> = white.into_iter().chain(black).collect();
    // gradient direction of the quadric: white inward, black outward
    let flex = vertices
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let sign = if i < m { -1.0 } else { 1.0 };
            p.iter()
                .zip(&axes)
                .map(|(x, a)| sign * (x / (a * a)).as_f64())
                .collect()
        })
        .collect();
    Ok(CatalogEntry {
        spec: spec.clone(),
        framework: euclidean(vertices, edges)?,
        coloring: None,
        approximate: false,
        known_flex: Some(VelocityField::new(flex)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TolerancePolicy;
    use crate::rigidity::{analyze_kinematics, motion_residual};

    fn dof(e: &CatalogEntry) -> usize {
        let tol = if e.framework.is_exact() {
            TolerancePolicy::exact()
        } else {
            TolerancePolicy::floating()
        };
        analyze_kinematics(&e.framework, tol).unwrap().dof
    }

    fn twisted(twist: f64) -> CatalogEntry {
        make_example(&ExampleSpec::TwistedOctahedron {
            radius: 1.0,
            height: 1.0,
            twist_degrees: twist,
        })
        .unwrap()
    }

    #[test]
    fn simplex_is_rigid() {
        for d in 1..=4 {
            let e = make_example(&ExampleSpec::Simplex { dimension: d }).unwrap();
            assert_eq!(e.framework.vertex_count(), d + 1);
            assert_eq!(dof(&e), 0);
        }
    }

    #[test]
    fn cycle_points_on_circle() {
        for n in 3..9 {
            let e = make_example(&ExampleSpec::Cycle {
                vertices: n,
                radius: 2.5,
            })
            .unwrap();
            let r2 = ratio(25, 4);
            for v in e.framework.exact_vertices().unwrap() {
                assert_eq!(&v[0] * &v[0] + &v[1] * &v[1], r2);
            }
            assert_eq!(dof(&e), n - 3);
        }
    }

    #[test]
    fn twist_sweep() {
        for twist in [0.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0] {
            let e = twisted(twist);
            let flexible = dof(&e) >= 1;
            assert_eq!(flexible, twist == 90.0, "twist {twist}");
            let c = e.coloring.as_ref().unwrap();
            assert_eq!(blaschke_check(&e.framework, c).unwrap(), flexible);
            assert_eq!(
                blaschke_check(&e.framework, &c.swapped()).unwrap(),
                flexible
            );
        }
        assert_eq!(dof(&twisted(90.0)), 1);
    }

    #[test]
    fn liebmann_flexes() {
        for t in [-1.0, 3.0, 0.5] {
            let e = make_example(&ExampleSpec::LiebmannOctahedron { t }).unwrap();
            assert_eq!(dof(&e), 1, "t = {t}");
            let c = e.coloring.as_ref().unwrap();
            assert!(blaschke_check(&e.framework, c).unwrap());
            assert!(blaschke_check(&e.framework, &c.swapped()).unwrap());
        }
    }

    #[test]
    fn desargues_variants() {
        let dof_of = |variant| dof(&make_example(&ExampleSpec::Desargues { variant }).unwrap());
        assert_eq!(dof_of(DesarguesVariant::Concurrent), 1);
        assert_eq!(dof_of(DesarguesVariant::Parallel), 1);
        assert_eq!(dof_of(DesarguesVariant::Generic), 0);
    }

    #[test]
    fn bipartite_on_quadrics() {
        for (m, n, axes) in [
            (3, 3, vec![1.0, 1.0]),
            (3, 3, vec![2.0, 0.5]),
            (4, 6, vec![1.0, 1.0, 1.0]),
        ] {
            let e = make_example(&ExampleSpec::BipartiteQuadric {
                white: m,
                black: n,
                semi_axes: axes.clone(),
            })
            .unwrap();
            for v in e.framework.exact_vertices().unwrap() {
                let s: BigRational = v
                    .iter()
                    .zip(&axes)
                    .map(|(x, &a)| {
                        let a = decimal_rational(a).unwrap();
                        (x / &a) * (x / &a)
                    })
                    .sum();
                assert!(s.is_one());
            }
            assert!(dof(&e) >= 1);
            let q = e.known_flex.as_ref().unwrap();
            assert!(motion_residual(&e.framework, q).unwrap() < 1e-12);
        }
    }

    #[test]
    fn lattice_order() {
        assert_eq!(
            lattice_points(1, 5),
            vec![vec![0], vec![-1], vec![1], vec![-2], vec![2]]
        );
        let pts = lattice_points(2, 9);
        assert_eq!(pts[0], vec![0, 0]);
        assert!(pts[1..5]
            .iter()
            .all(|p| p.iter().map(|x| x * x).sum::<i64>() == 1));
    }

    #[test]
    fn invalid_parameters() {
        for spec in [
            ExampleSpec::Simplex { dimension: 0 },
            ExampleSpec::Cycle {
                vertices: 2,
                radius: 1.0,
            },
            ExampleSpec::Cycle {
                vertices: 5,
                radius: -1.0,
            },
            ExampleSpec::TwistedOctahedron {
                radius: 1.0,
                height: 0.0,
                twist_degrees: 90.0,
            },
            ExampleSpec::BipartiteQuadric {
                white: 0,
                black: 3,
                semi_axes: vec![1.0, 1.0],
            },
            ExampleSpec::BipartiteQuadric {
                white: 3,
                black: 3,
                semi_axes: vec![1.0],
            },
        ] {
            assert_eq!(make_example(&spec).unwrap_err().kind(), "InvalidParameters");
        }
        assert!(ExampleSpec::default_for("tetrahedron").is_err());
    }

    #[test]
    fn json_carries_provenance() {
        let e = make_example(&ExampleSpec::default_for("twisted_octahedron").unwrap()).unwrap();
        let v = e.to_json();
        assert_eq!(v["provenance"]["parameters"]["id"], "twisted_octahedron");
        assert_eq!(v["approximate"], true);
        assert_eq!(v["coloring"]["black"].as_array().unwrap().len(), 4);
    }
}
