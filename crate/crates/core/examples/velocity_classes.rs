//! The same flex seen as classes of dual bivectors: Euclidean velocities lift
//! to projective velocity classes, pass the projective motion test, and drop
//! back unchanged.

use infrig::framework::{lift_to_projective, Framework, Geometry};
use infrig::linalg::TolerancePolicy;
use infrig::projective::{velocity_drop, velocity_lift};
use infrig::rigidity::analyze_kinematics;

fn main() -> infrig::Result<()> {
    let fw = Framework::from_integers(
        &[&[0, 0], &[2, 0], &[2, 1], &[0, 1]],
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
    )?;
    let report = analyze_kinematics(&fw, TolerancePolicy::exact())?;
    let projective = lift_to_projective(&fw);

    for q in &report.motion_basis {
        let classes = fw
            .vertices()
            .iter()
            .zip(&q.vectors)
            .map(|(p, v)| velocity_lift(p, v))
            .collect::<infrig::Result<Vec<_>>>()?;
        println!(
            "motion is a projective motion: {}",
            projective.is_motion(&classes)?
        );
        let worst = classes
            .iter()
            .zip(fw.vertices())
            .zip(&q.vectors)
            .map(|((t, p), v)| {
                let back = velocity_drop(p, t, Geometry::Euclidean).unwrap();
                back.iter()
                    .zip(v)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        println!("  lift/drop round trip error {worst:.1e}");
    }

    // a field that stretches bar 0-1 is not a motion
    let stretch = fw
        .vertices()
        .iter()
        .map(|p| velocity_lift(p, &[p[0], 0.0]))
        .collect::<infrig::Result<Vec<_>>>()?;
    println!(
        "stretching field is a projective motion: {}",
        projective.is_motion(&stretch)?
    );
    Ok(())
}
