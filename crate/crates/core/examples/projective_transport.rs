//! A projective image of a flexible quadrilateral: the degrees of freedom are
//! unchanged and the flex and loads are carried across.

use infrig::framework::{Framework, Load};
use infrig::linalg::TolerancePolicy;
use infrig::projective::{
    apply_projective, h_infinity, transport_load, transport_motion, ProjectiveMap,
};
use infrig::rigidity::{analyze_kinematics, motion_residual, resolve_load};

fn main() -> infrig::Result<()> {
    let fw = Framework::from_integers(
        &[&[0, 0], &[3, 0], &[3, 2], &[0, 2]],
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
    )?;
    // homogeneous matrix acting on (1, x, y); the first row is the denominator
    let phi = ProjectiveMap::from_integers(&[&[4, 1, 0], &[0, 2, 1], &[1, 0, 1]])?;
    let image = apply_projective(&phi, &fw)?;
    println!("image vertices: {:.4?}", image.vertices());
    for p in fw.vertices() {
        println!(
            "  distance of {p:?} to the hyperplane sent to infinity: {:.4}",
            h_infinity(&phi, p)?
        );
    }

    let before = analyze_kinematics(&fw, TolerancePolicy::exact())?;
    let after = analyze_kinematics(&image, TolerancePolicy::exact())?;
    println!("dof before {}, after {}", before.dof, after.dof);

    for q in &before.motion_basis {
        let moved = transport_motion(&phi, &fw, q)?;
        println!(
            "transported motion residual: {:.1e}",
            motion_residual(&image, &moved)?
        );
    }

    // an edge-compressing load stays resolvable
    let load = Load::new(vec![
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.0, 0.0],
        vec![0.0, 0.0],
    ]);
    let moved = transport_load(&phi, &fw, &load)?;
    let r = resolve_load(&image, &moved, TolerancePolicy::floating())?;
    println!("transported load resolvable: {}", r.is_resolved());
    Ok(())
}
