//! Acceptance suite: one PASS/FAIL line per criterion.

use infrig::catalog::{blaschke_check, make_example, DesarguesVariant, ExampleSpec};
use infrig::framework::affine_span_dim;
use infrig::linalg::{exact, TolerancePolicy};
use infrig::rigidity::{analyze_kinematics, motion_residual, rigidity_matrix};
use infrig::verify::{run, Property, VerifyPlan, PROBES_PER_TRIAL};

const SEED: u64 = 20_240_601;
const RESIDUAL_TOLERANCE: f64 = 1e-9;
const CLOSED_FORM_TOLERANCE: f64 = 1e-12;
const RADIAL_FLEX_TOLERANCE: f64 = 1e-10;
const REL_EPSILON: f64 = 1e-10;

struct Suite {
    failures: usize,
}

impl Suite {
    fn report(&mut self, id: &str, pass: bool, detail: String) {
        println!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failures += 1;
        }
    }
}

fn binomial2(n: usize) -> usize {
    n * (n - 1) / 2
}

fn plan(property: Property, trials: usize) -> VerifyPlan {
    let mut p = VerifyPlan::new(property, trials, SEED).expect("valid plan");
    p.rel_epsilon = REL_EPSILON;
    p.residual_tolerance = RESIDUAL_TOLERANCE;
    p.closed_form_tolerance = CLOSED_FORM_TOLERANCE;
    p
}

fn batch(suite: &mut Suite, id: &str, property: Property, trials: usize, extra: &str) {
    let report = run(&plan(property, trials));
    let first_failure = report
        .failures()
        .next()
        .map(|o| format!("; first failure: trial {} {}", o.index, o.metrics))
        .unwrap_or_default();
    suite.report(
        id,
        report.all_passed() && report.outcomes.len() == trials,
        format!(
            "{}/{trials} trials pass (seed {SEED}){extra}{first_failure}",
            report.passed()
        ),
    );
}

fn dof(spec: &ExampleSpec) -> usize {
    let e = make_example(spec).expect("valid example");
    let tol = if e.framework.is_exact() {
        TolerancePolicy::exact()
    } else {
        TolerancePolicy::with_rel_epsilon(REL_EPSILON).unwrap()
    };
    analyze_kinematics(&e.framework, tol).unwrap().dof
}

fn twisted(twist: f64) -> ExampleSpec {
    ExampleSpec::TwistedOctahedron {
        radius: 1.0,
        height: 1.0,
        twist_degrees: twist,
    }
}

fn catalog_specs() -> Vec<ExampleSpec> {
    let mut specs: Vec<ExampleSpec> = (1..=4)
        .map(|d| ExampleSpec::Simplex { dimension: d })
        .collect();
    specs.extend((3..=8).map(|n| ExampleSpec::Cycle {
        vertices: n,
        radius: 1.0,
    }));
    specs.extend([0.0, 60.0, 90.0].map(twisted));
    specs.extend([-1.0, 3.0].map(|t| ExampleSpec::LiebmannOctahedron { t }));
    specs.extend(
        [
            DesarguesVariant::Concurrent,
            DesarguesVariant::Parallel,
            DesarguesVariant::Generic,
        ]
        .map(|variant| ExampleSpec::Desargues { variant }),
    );
    specs.extend([
        ExampleSpec::BipartiteQuadric {
            white: 3,
            black: 3,
            semi_axes: vec![1.0, 1.0],
        },
        ExampleSpec::BipartiteQuadric {
            white: 3,
            black: 3,
            semi_axes: vec![2.0, 0.5],
        },
        ExampleSpec::BipartiteQuadric {
            white: 4,
            black: 6,
            semi_axes: vec![1.0, 1.0, 1.0],
        },
    ]);
    specs
}

fn rank_law(suite: &mut Suite) {
    let mut ok = true;
    let mut ranks = Vec::new();
    for d in 1..=4 {
        let fw = make_example(&ExampleSpec::Simplex { dimension: d })
            .unwrap()
            .framework;
        let rank = exact::rank(rigidity_matrix(&fw).exact().unwrap());
        ranks.push(rank);
        ok &= rank == d * (d + 1) - binomial2(d + 1);
    }
    suite.report(
        "1 rank law",
        ok,
        format!("exact ranks of simplex d=1..4: {ranks:?}"),
    );
}

fn trivial_dimension(suite: &mut Suite) {
    let mut ok = true;
    let mut checked = 0;
    let mut floating = 0;
    for spec in catalog_specs() {
        let e = make_example(&spec).unwrap();
        let fw = &e.framework;
        let tol = if fw.is_exact() {
            TolerancePolicy::exact()
        } else {
            floating += 1;
            TolerancePolicy::with_rel_epsilon(REL_EPSILON).unwrap()
        };
        if affine_span_dim(fw, tol).unwrap() < fw.dimension() {
            continue;
        }
        let d = fw.dimension();
        let r = analyze_kinematics(fw, tol).unwrap();
        if r.dim_trivial != binomial2(d + 1) {
            ok = false;
            println!("    {} has {} trivial motions", spec.id(), r.dim_trivial);
        }
        checked += 1;
    }
    suite.report(
        "2 trivial-motion dimension",
        ok,
        format!(
            "{checked} full-span catalog frameworks ({floating} irrational ones in floating mode)"
        ),
    );
}

fn catalog_truths(suite: &mut Suite) {
    let (d90, d60, d0) = (dof(&twisted(90.0)), dof(&twisted(60.0)), dof(&twisted(0.0)));
    suite.report(
        "7a twisted octahedron",
        d90 == 1 && d60 == 0 && d0 == 0,
        format!("dof at twist 90 = {d90}, twist 60 = {d60}, regular (twist 0) = {d0}"),
    );

    let dv = |variant| dof(&ExampleSpec::Desargues { variant });
    let (c, p, g) = (
        dv(DesarguesVariant::Concurrent),
        dv(DesarguesVariant::Parallel),
        dv(DesarguesVariant::Generic),
    );
    suite.report(
        "7b desargues",
        c == 1 && p == 1 && g == 0,
        format!("dof concurrent = {c}, parallel = {p}, generic = {g}"),
    );

    let k33 = make_example(&ExampleSpec::BipartiteQuadric {
        white: 3,
        black: 3,
        semi_axes: vec![1.0, 1.0],
    })
    .unwrap();
    let report = analyze_kinematics(&k33.framework, TolerancePolicy::exact()).unwrap();
    let flex = k33.known_flex.as_ref().unwrap();
    let residual = motion_residual(&k33.framework, flex).unwrap();
    // distance of the radial field from the computed motion space
    let q = flex.to_flat();
    let mut rest = q.clone();
    for b in &report.motion_basis {
        let b = b.to_flat();
        let c: f64 = b.iter().zip(&q).map(|(x, y)| x * y).sum();
        rest.iter_mut().zip(&b).for_each(|(r, x)| *r -= c * x);
    }
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let outside = norm(&rest) / norm(&q);
    suite.report(
        "7c K3,3 on the unit circle",
        report.dof >= 1 && residual < RADIAL_FLEX_TOLERANCE && outside < RADIAL_FLEX_TOLERANCE,
        format!(
            "dof = {}, radial field residual = {residual:.1e}, distance from motion space = {outside:.1e}",
            report.dof
        ),
    );

    let mut ok = true;
    let mut rows = Vec::new();
    for twist in [50.0, 60.0, 70.0, 80.0, 90.0, 100.0] {
        let e = make_example(&twisted(twist)).unwrap();
        let c = e.coloring.as_ref().unwrap();
        let flexible = dof(&twisted(twist)) >= 1;
        let black = blaschke_check(&e.framework, c).unwrap();
        let white = blaschke_check(&e.framework, &c.swapped()).unwrap();
        ok &= black == flexible && white == flexible;
        rows.push(format!(
            "{twist}:{}",
            if black { "concurrent" } else { "-" }
        ));
    }
    suite.report(
        "7d four-plane sweep",
        ok,
        format!("agrees with dof at {}", rows.join(" ")),
    );
}

fn main() {
    let mut suite = Suite { failures: 0 };
    rank_law(&mut suite);
    trivial_dimension(&mut suite);
    batch(
        &mut suite,
        "3 static-kinematic duality",
        Property::StaticKinematicDuality,
        200,
        "",
    );
    batch(&mut suite, "4 virtual work", Property::VirtualWork, 100, "");
    batch(
        &mut suite,
        "5 darboux-sauer",
        Property::DarbouxSauer,
        200,
        &format!(
            ", motion residual < {RESIDUAL_TOLERANCE:e}, {} load probes within {RESIDUAL_TOLERANCE:e}",
            200 * PROBES_PER_TRIAL
        ),
    );
    batch(
        &mut suite,
        "6 pogorelov",
        Property::Pogorelov,
        200,
        &format!(", closed form and round trips within {CLOSED_FORM_TOLERANCE:e}"),
    );
    catalog_truths(&mut suite);
    batch(
        &mut suite,
        "8 affine invariance",
        Property::AffineInvariance,
        100,
        "",
    );
    if suite.failures > 0 {
        println!("{} criteria failed", suite.failures);
        std::process::exit(1);
    }
    println!("all criteria pass");
}
