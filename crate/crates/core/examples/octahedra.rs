//! Twisting one face of an octahedron: it flexes exactly when the planes of
//! the four black faces meet in a point.

use infrig::catalog::{blaschke_check, make_example, ExampleSpec};
use infrig::linalg::TolerancePolicy;
use infrig::rigidity::analyze_kinematics;

fn main() -> infrig::Result<()> {
    println!("twist  dof  black planes concurrent  white planes concurrent");
    for twist in (0..=180).step_by(15) {
        let e = make_example(&ExampleSpec::TwistedOctahedron {
            radius: 1.0,
            height: 1.0,
            twist_degrees: twist as f64,
        })?;
        let dof = analyze_kinematics(&e.framework, TolerancePolicy::floating())?.dof;
        let c = e.coloring.as_ref().expect("octahedra carry a coloring");
        println!(
            "{twist:>5}  {dof:>3}  {:>23}  {:>23}",
            blaschke_check(&e.framework, c)?,
            blaschke_check(&e.framework, &c.swapped())?
        );
    }

    let e = make_example(&ExampleSpec::LiebmannOctahedron { t: -1.0 })?;
    let dof = analyze_kinematics(&e.framework, TolerancePolicy::exact())?.dof;
    println!(
        "rational flexible octahedron: dof {dof}, planes concurrent: {}",
        blaschke_check(&e.framework, e.coloring.as_ref().unwrap())?
    );
    Ok(())
}
