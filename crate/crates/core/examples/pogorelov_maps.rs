//! Central projection of a flexible quadrilateral onto the sphere and, after
//! fitting into the unit disk, onto the hyperboloid. The flex is carried
//! along by the velocity transport and the degrees of freedom agree.

use infrig::framework::Framework;
use infrig::linalg::TolerancePolicy;
use infrig::pogorelov::{central_project, closed_form, fit_disk, pogorelov_transport, Direction};
use infrig::rigidity::{analyze_kinematics, motion_residual};

fn main() -> infrig::Result<()> {
    let fw = Framework::from_integers(
        &[&[0, 0], &[3, 0], &[3, 2], &[0, 2]],
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
    )?;
    let euclidean_dof = analyze_kinematics(&fw, TolerancePolicy::exact())?.dof;
    println!("euclidean dof {euclidean_dof}");

    for (base, direction) in [
        (fw.clone(), Direction::ToSpherical),
        (fit_disk(&fw, 0.9)?, Direction::ToHyperbolic),
    ] {
        let target = direction.target();
        let projected = central_project(&base, target)?;
        let policy = if projected.is_exact() {
            TolerancePolicy::exact()
        } else {
            TolerancePolicy::floating()
        };
        let report = analyze_kinematics(&projected, policy)?;
        println!("{target}: dof {}", report.dof);

        let flex = &analyze_kinematics(&base, TolerancePolicy::exact())?.motion_basis[0];
        let moved = pogorelov_transport(&base, flex, direction)?;
        println!(
            "  transported flex residual {:.1e}",
            motion_residual(&projected, &moved)?
        );
        let gap = base
            .vertices()
            .iter()
            .zip(&flex.vectors)
            .zip(&moved.vectors)
            .map(|((p, q), x)| {
                let c = closed_form(p, q, direction);
                c.iter()
                    .zip(x)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        println!("  closed form agrees to {gap:.1e}");
    }
    Ok(())
}
