//! Two planar flexes: a pair of triangles in perspective, and a complete
//! bipartite graph on a conic with its explicit radial flex.

use infrig::catalog::{make_example, DesarguesVariant, ExampleSpec};
use infrig::linalg::TolerancePolicy;
use infrig::rigidity::{analyze_kinematics, motion_residual};

fn main() -> infrig::Result<()> {
    for variant in [
        DesarguesVariant::Concurrent,
        DesarguesVariant::Parallel,
        DesarguesVariant::Generic,
    ] {
        let e = make_example(&ExampleSpec::Desargues { variant })?;
        let dof = analyze_kinematics(&e.framework, TolerancePolicy::exact())?.dof;
        println!("triangles in {variant:?} position: dof {dof}");
    }

    for axes in [vec![1.0, 1.0], vec![3.0, 1.5]] {
        let e = make_example(&ExampleSpec::BipartiteQuadric {
            white: 3,
            black: 3,
            semi_axes: axes.clone(),
        })?;
        let dof = analyze_kinematics(&e.framework, TolerancePolicy::exact())?.dof;
        let flex = e.known_flex.as_ref().expect("radial flex");
        println!(
            "K3,3 on conic with semi-axes {axes:?}: dof {dof}, radial flex residual {:.1e}",
            motion_residual(&e.framework, flex)?
        );
    }
    Ok(())
}
