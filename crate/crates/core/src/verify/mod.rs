//! Seeded batch checks of the correspondence theorems on random instances.
//!
//! Trial `k` of a plan draws from its own ChaCha stream, so every trial can
//! be reproduced from `(seed, k)` alone and trials may run in any order.

pub mod generate;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::catalog::{blaschke_check, make_example, ExampleSpec};
use crate::error::{Error, Result};
use crate::framework::{Framework, VelocityField};
use crate::linalg::{self, TolerancePolicy};
use crate::pogorelov::{central_project, closed_form, fit_disk, pogorelov_transport, Direction};
use crate::projective::{
    apply_projective, h_infinity, phi_stat, phi_stat_chord, transport_motion, ProjectiveMap,
};
use crate::rigidity::{
    analyze_kinematics, analyze_statics, exact_subspaces, motion_residual, KinematicReport,
};

use generate::{
    random_affine_map, random_field, random_framework, random_projective_map,
    MIN_DISTANCE_TO_INFINITY,
};

/// Load transport probes per Darboux–Sauer trial.
pub const PROBES_PER_TRIAL: usize = 5;
/// Disk radius for hyperbolic projection.
pub const FIT_RADIUS: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    DarbouxSauer,
    Pogorelov,
    StaticKinematicDuality,
    VirtualWork,
    AffineInvariance,
    Blaschke,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::DarbouxSauer,
        Property::Pogorelov,
        Property::StaticKinematicDuality,
        Property::VirtualWork,
        Property::AffineInvariance,
        Property::Blaschke,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::DarbouxSauer => "darboux-sauer",
            Property::Pogorelov => "pogorelov",
            Property::StaticKinematicDuality => "static-kinematic-duality",
            Property::VirtualWork => "virtual-work",
            Property::AffineInvariance => "affine-invariance",
            Property::Blaschke => "blaschke",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown property '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyPlan {
    pub property: Property,
    pub trials: usize,
    pub seed: u64,
    /// Floating rank cutoff.
    pub rel_epsilon: f64,
    /// Relative residual allowed for transported motions and load probes.
    pub residual_tolerance: f64,
    /// Relative disagreement allowed between closed forms and pipelines,
    /// and for round trips.
    pub closed_form_tolerance: f64,
}

impl VerifyPlan {
    pub fn new(property: Property, trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameters("trials must be at least 1".into()));
        }
        Ok(VerifyPlan {
            property,
            trials,
            seed,
            rel_epsilon: TolerancePolicy::DEFAULT_REL_EPSILON,
            residual_tolerance: 1e-9,
            closed_form_tolerance: 1e-12,
        })
    }

    fn floating(&self) -> TolerancePolicy {
        TolerancePolicy::with_rel_epsilon(self.rel_epsilon)
            .unwrap_or_else(|_| TolerancePolicy::floating())
    }

    fn policy_for(&self, fw: &Framework) -> TolerancePolicy {
        if fw.is_exact() {
            TolerancePolicy::exact()
        } else {
            self.floating()
        }
    }
}

/// The generator for trial `index`: stream `index` of the seeded ChaCha.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub index: usize,
    pub passed: bool,
    pub metrics: Value,
    /// The input framework of the trial, for reproduction.
    pub instance: Option<Framework>,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub plan: VerifyPlan,
    /// Sorted by trial index.
    pub outcomes: Vec<TrialOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.outcomes.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    pub fn to_json(&self) -> Value {
        let p = &self.plan;
        json!({
            "property": p.property.name(),
            "seed": p.seed,
            "trials": p.trials,
            "passed": self.passed(),
            "failed": self.outcomes.len() - self.passed(),
            "verified": self.all_passed(),
            "tolerances": {
                "rel_epsilon": p.rel_epsilon,
                "residual": p.residual_tolerance,
                "closed_form": p.closed_form_tolerance,
            },
            "results": self.outcomes.iter().map(|o| {
                let mut v = json!({"index": o.index, "passed": o.passed});
                if let (Some(obj), Value::Object(m)) = (v.as_object_mut(), &o.metrics) {
                    obj.extend(m.clone());
                }
                v
            }).collect::<Vec<_>>(),
        })
    }
}

/// Runs every trial of `plan` on all available cores.
pub fn run(plan: &VerifyPlan) -> VerifyReport {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(plan.trials);
    let mut outcomes: Vec<TrialOutcome> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..plan.trials)
                        .step_by(workers)
                        .map(|k| run_trial(plan, k))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("trial thread panicked"))
            .collect()
    });
    outcomes.sort_by_key(|o| o.index);
    VerifyReport {
        plan: plan.clone(),
        outcomes,
    }
}

struct Checked {
    passed: bool,
    metrics: Value,
    instance: Framework,
}

pub fn run_trial(plan: &VerifyPlan, index: usize) -> TrialOutcome {
    let mut rng = trial_rng(plan.seed, index);
    let d = 2 + index % 2;
    let result = match plan.property {
        Property::DarbouxSauer => darboux_sauer(plan, &mut rng, d),
        Property::Pogorelov => pogorelov(plan, &mut rng, d),
        Property::StaticKinematicDuality => duality(&mut rng, d),
        Property::VirtualWork => virtual_work(&mut rng, d),
        Property::AffineInvariance => affine_invariance(plan, &mut rng, d),
        Property::Blaschke => blaschke(plan, &mut rng, index),
    };
    match result {
        Ok(c) => TrialOutcome {
            index,
            passed: c.passed,
            metrics: c.metrics,
            instance: Some(c.instance),
        },
        Err(e) => TrialOutcome {
            index,
            passed: false,
            metrics: json!({"error": e.kind(), "message": e.to_string()}),
            instance: None,
        },
    }
}

fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let scale = linalg::norm(a).max(linalg::norm(b));
    if scale == 0.0 {
        0.0
    } else {
        linalg::norm(&diff) / scale
    }
}

/// Largest motion residual over the images of `basis`.
fn transported_residual(
    basis: &[VelocityField],
    target: &Framework,
    transport: impl Fn(&VelocityField) -> Result<VelocityField>,
) -> Result<f64> {
    basis.iter().try_fold(0.0f64, |worst, q| {
        Ok(worst.max(motion_residual(target, &transport(q)?)?))
    })
}

fn darboux_sauer(plan: &VerifyPlan, rng: &mut ChaCha8Rng, d: usize) -> Result<Checked> {
    let fw = random_framework(rng, d);
    let phi = random_projective_map(rng, &fw)?;
    let image = apply_projective(&phi, &fw)?;
    let before = analyze_kinematics(&fw, TolerancePolicy::exact())?;
    let after = analyze_kinematics(&image, TolerancePolicy::exact())?;
    let residual = transported_residual(&before.motion_basis, &image, |q| {
        transport_motion(&phi, &fw, q)
    })?;
    let probe = probe_load_transport(rng, &phi, &fw)?;
    Ok(Checked {
        passed: before.dof == after.dof
            && residual < plan.residual_tolerance
            && probe < plan.residual_tolerance,
        metrics: json!({
            "dimension": d,
            "dof": before.dof,
            "image_dof": after.dof,
            "map": phi.to_json()["matrix"],
            "motion_residual": residual,
            "load_probe_gap": probe,
        }),
        instance: fw,
    })
}

/// Largest relative gap between the tangent and chord forms of the load
/// transport at random forces on random vertices.
fn probe_load_transport(rng: &mut ChaCha8Rng, phi: &ProjectiveMap, fw: &Framework) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < PROBES_PER_TRIAL {
        let p = fw.vertices().choose(rng).expect("nonempty framework");
        let f: Vec<f64> = (0..fw.dimension())
            .map(|_| rng.gen_range(-3..=3) as f64)
            .collect();
        let tip: Vec<f64> = p.iter().zip(&f).map(|(a, b)| a + b).collect();
        if f.iter().all(|&x| x == 0.0) || h_infinity(phi, &tip)?.abs() <= MIN_DISTANCE_TO_INFINITY {
            continue;
        }
        worst = worst.max(relative_gap(
            &phi_stat(phi, p, &f)?,
            &phi_stat_chord(phi, p, &f)?,
        ));
        done += 1;
    }
    Ok(worst)
}

fn pogorelov(plan: &VerifyPlan, rng: &mut ChaCha8Rng, d: usize) -> Result<Checked> {
    let fw = random_framework(rng, d);
    let field = VelocityField::new(random_field(rng, fw.vertex_count(), d));
    let dof = analyze_kinematics(&fw, TolerancePolicy::exact())?.dof;
    let fitted = fit_disk(&fw, FIT_RADIUS)?;
    let mut metrics = json!({"dimension": d, "dof": dof});
    let mut passed = true;
    for (base, direction, key) in [
        (&fw, Direction::ToSpherical, "spherical"),
        (&fitted, Direction::ToHyperbolic, "hyperbolic"),
    ] {
        let projected = central_project(base, direction.target())?;
        let report = analyze_kinematics(&projected, plan.policy_for(&projected))?;
        let forward = pogorelov_transport(base, &field, direction)?;
        let back = pogorelov_transport(base, &forward, direction.inverse())?;
        let mut closed_gap = 0.0f64;
        for ((p, q), (x, b)) in base
            .vertices()
            .iter()
            .zip(&field.vectors)
            .zip(forward.vectors.iter().zip(&back.vectors))
        {
            closed_gap = closed_gap.max(relative_gap(x, &closed_form(p, q, direction)));
            closed_gap = closed_gap.max(relative_gap(b, &closed_form(p, x, direction.inverse())));
        }
        let round_trip = relative_gap(&back.to_flat(), &field.to_flat());
        let motions = analyze_kinematics(base, TolerancePolicy::exact())?.motion_basis;
        let residual = transported_residual(&motions, &projected, |q| {
            pogorelov_transport(base, q, direction)
        })?;
        passed &= report.dof == dof
            && closed_gap < plan.closed_form_tolerance
            && round_trip < plan.closed_form_tolerance
            && residual < plan.residual_tolerance;
        metrics[key] = json!({
            "dof": report.dof,
            "closed_form_gap": closed_gap,
            "round_trip_gap": round_trip,
            "motion_residual": residual,
        });
    }
    Ok(Checked {
        passed,
        metrics,
        instance: fw,
    })
}

fn full_span_dof(d: usize, n: usize) -> usize {
    (d * n).saturating_sub(d * (d + 1) / 2)
}

fn duality(rng: &mut ChaCha8Rng, d: usize) -> Result<Checked> {
    let fw = random_framework(rng, d);
    let kin = analyze_kinematics(&fw, TolerancePolicy::exact())?;
    let st = analyze_statics(&fw, TolerancePolicy::exact())?;
    let expected = full_span_dof(d, fw.vertex_count());
    Ok(Checked {
        passed: kin.dof == st.static_dof && st.dim_equilibrium == expected,
        metrics: json!({
            "dimension": d,
            "kinematic_dof": kin.dof,
            "static_dof": st.static_dof,
            "dim_equilibrium": st.dim_equilibrium,
            "expected_dim_equilibrium": expected,
        }),
        instance: fw,
    })
}

fn all_orthogonal(
    a: &[Vec<num_rational::BigRational>],
    b: &[Vec<num_rational::BigRational>],
) -> bool {
    a.iter().all(|x| {
        b.iter()
            .all(|y| num_traits::Zero::is_zero(&linalg::dot(x, y)))
    })
}

fn virtual_work(rng: &mut ChaCha8Rng, d: usize) -> Result<Checked> {
    let fw = random_framework(rng, d);
    let s = exact_subspaces(&fw)?;
    let total = d * fw.vertex_count();
    // orthogonality plus complementary dimensions make each pair of spaces
    // exact annihilators of each other
    let motions_vs_resolvable =
        all_orthogonal(&s.motions, &s.resolvable) && s.motions.len() + s.resolvable.len() == total;
    let trivial_vs_equilibrium = all_orthogonal(&s.trivial, &s.equilibrium)
        && s.trivial.len() + s.equilibrium.len() == total;
    Ok(Checked {
        passed: motions_vs_resolvable && trivial_vs_equilibrium,
        metrics: json!({
            "dimension": d,
            "dim_motions": s.motions.len(),
            "dim_resolvable": s.resolvable.len(),
            "dim_trivial": s.trivial.len(),
            "dim_equilibrium": s.equilibrium.len(),
            "motions_annihilate_resolvable": motions_vs_resolvable,
            "trivial_annihilate_equilibrium": trivial_vs_equilibrium,
        }),
        instance: fw,
    })
}

fn affine_invariance(plan: &VerifyPlan, rng: &mut ChaCha8Rng, d: usize) -> Result<Checked> {
    let fw = random_framework(rng, d);
    let map = random_affine_map(rng, d)?;
    let image = apply_projective(&map, &fw)?;
    let before: KinematicReport = analyze_kinematics(&fw, TolerancePolicy::exact())?;
    let after = analyze_kinematics(&image, TolerancePolicy::exact())?;
    let residual = transported_residual(&before.motion_basis, &image, |q| {
        transport_motion(&map, &fw, q)
    })?;
    Ok(Checked {
        passed: before.dof == after.dof
            && before.rigid == after.rigid
            && residual < plan.residual_tolerance,
        metrics: json!({
            "dimension": d,
            "dof": before.dof,
            "image_dof": after.dof,
            "rigid": before.rigid,
            "image_rigid": after.rigid,
            "map": map.to_json()["matrix"],
            "motion_residual": residual,
        }),
        instance: fw,
    })
}

/// Octahedra with integer vertices in `[−3, 3]³` and no degenerate face.
fn random_octahedron(rng: &mut ChaCha8Rng) -> (Framework, crate::catalog::FaceColoring) {
    let base = make_example(&ExampleSpec::LiebmannOctahedron { t: -1.0 }).expect("valid default");
    let coloring = base.coloring.expect("octahedron coloring");
    loop {
        let coords: Vec<Vec<i64>> = (0..6)
            .map(|_| (0..3).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let rows: Vec<&[i64]> = coords.iter().map(Vec::as_slice).collect();
        let Ok(fw) = Framework::from_integers(&rows, base.framework.edges()) else {
            continue;
        };
        let flat_face = coloring.black.iter().chain(&coloring.white).any(|f| {
            let [a, b, c] = f.map(|i| &coords[i]);
            let u: Vec<i64> = (0..3).map(|k| b[k] - a[k]).collect();
            let v: Vec<i64> = (0..3).map(|k| c[k] - a[k]).collect();
            u[1] * v[2] == u[2] * v[1] && u[2] * v[0] == u[0] * v[2] && u[0] * v[1] == u[1] * v[0]
        });
        if !flat_face {
            return (fw, coloring);
        }
    }
}

fn blaschke(plan: &VerifyPlan, rng: &mut ChaCha8Rng, index: usize) -> Result<Checked> {
    let (fw, coloring, source) = match index % 3 {
        0 => {
            let twist = if rng.gen_bool(0.5) {
                *[90, 270].choose(rng).expect("nonempty")
            } else {
                rng.gen_range(0..360)
            };
            let spec = ExampleSpec::TwistedOctahedron {
                radius: rng.gen_range(1..=3) as f64,
                height: rng.gen_range(1..=2) as f64,
                twist_degrees: twist as f64,
            };
            let e = make_example(&spec)?;
            (
                e.framework,
                e.coloring.expect("octahedron coloring"),
                serde_json::to_value(&spec)?,
            )
        }
        1 => loop {
            let spec = ExampleSpec::LiebmannOctahedron {
                t: rng.gen_range(-5..=5) as f64,
            };
            if let Ok(e) = make_example(&spec) {
                break (
                    e.framework,
                    e.coloring.expect("octahedron coloring"),
                    serde_json::to_value(&spec)?,
                );
            }
        },
        _ => {
            let (fw, c) = random_octahedron(rng);
            (fw, c, json!({"id": "random_octahedron"}))
        }
    };
    let dof = analyze_kinematics(&fw, plan.policy_for(&fw))?.dof;
    let black = blaschke_check(&fw, &coloring)?;
    let white = blaschke_check(&fw, &coloring.swapped())?;
    Ok(Checked {
        passed: black == (dof >= 1) && white == black,
        metrics: json!({
            "source": source,
            "dof": dof,
            "black_planes_concurrent": black,
            "white_planes_concurrent": white,
        }),
        instance: fw,
    })
}
