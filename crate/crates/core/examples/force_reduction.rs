//! Systems of forces as bivectors: cancellation, couples, a single resultant,
//! and a spatial wrench that cannot be reduced to one force.

use infrig::projective::{reduce_force_system, ForceSystem};

fn main() {
    let cases = [
        (
            "resultant",
            ForceSystem::new(vec![
                (vec![0.0, 0.0], vec![1.0, 0.0]),
                (vec![0.0, 2.0], vec![1.0, 0.0]),
            ]),
        ),
        (
            "couple",
            ForceSystem::new(vec![
                (vec![0.0, 0.0], vec![0.0, 1.0]),
                (vec![1.0, 0.0], vec![0.0, -1.0]),
            ]),
        ),
        (
            "balanced",
            ForceSystem::new(vec![
                (vec![1.0, 1.0], vec![2.0, 3.0]),
                (vec![3.0, 4.0], vec![-2.0, -3.0]),
            ]),
        ),
        (
            "wrench",
            ForceSystem::new(vec![
                (vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]),
                (vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]),
                (vec![0.0, 1.0, 0.0], vec![-1.0, 0.0, 0.0]),
            ]),
        ),
    ];
    for (name, fs) in cases {
        match reduce_force_system(&fs) {
            Ok(r) => println!("{name}: {:?}", r.class),
            Err(e) => println!("{name}: {e}"),
        }
    }
}
