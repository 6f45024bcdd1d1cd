//! Kinematic and static analysis of a square, before and after bracing.

use infrig::framework::Framework;
use infrig::linalg::TolerancePolicy;
use infrig::rigidity::{analyze_kinematics, analyze_statics};

fn main() -> infrig::Result<()> {
    let corners: [&[i64]; 4] = [&[0, 0], &[2, 0], &[2, 2], &[0, 2]];
    let square = Framework::from_integers(&corners, &[(0, 1), (1, 2), (2, 3), (3, 0)])?;
    let braced = Framework::from_integers(&corners, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])?;

    for (name, fw) in [("square", &square), ("braced square", &braced)] {
        let kin = analyze_kinematics(fw, TolerancePolicy::exact())?;
        let st = analyze_statics(fw, TolerancePolicy::exact())?;
        println!(
            "{name}: {} motions, {} trivial, dof {} (static dof {}), rigid: {}",
            kin.dim_motions, kin.dim_trivial, kin.dof, st.static_dof, kin.rigid
        );
        println!("  singular values: {:.4?}", kin.singular_values);
    }
    Ok(())
}
