//! Resolving loads by bar stresses; a load that only bends the square is
//! rejected until the square is braced.

use infrig::framework::{Framework, Load};
use infrig::linalg::TolerancePolicy;
use infrig::rigidity::{is_equilibrium_load, resolve_load, Resolution};

fn main() -> infrig::Result<()> {
    let corners: [&[i64]; 4] = [&[0, 0], &[1, 0], &[1, 1], &[0, 1]];
    let square = Framework::from_integers(&corners, &[(0, 1), (1, 2), (2, 3), (3, 0)])?;
    let braced = Framework::from_integers(&corners, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)])?;

    // squeeze along the diagonal 0–2
    let load = Load::new(vec![
        vec![1.0, 1.0],
        vec![0.0, 0.0],
        vec![-1.0, -1.0],
        vec![0.0, 0.0],
    ]);
    println!("equilibrium load: {}", is_equilibrium_load(&square, &load)?);

    for (name, fw) in [("square", &square), ("braced", &braced)] {
        match resolve_load(fw, &load, TolerancePolicy::exact())? {
            Resolution::Resolved(stress) => {
                println!("{name}: resolved");
                for (&(i, j), w) in stress.edges.iter().zip(&stress.values) {
                    println!("  bar {i}-{j}: {w:+.3}");
                }
            }
            Resolution::Unresolvable { residual } => {
                println!("{name}: unresolvable (residual {residual:.3})")
            }
        }
    }
    Ok(())
}
