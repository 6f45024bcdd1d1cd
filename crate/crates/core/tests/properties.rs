use infrig::framework::{Framework, Load, VelocityField};
use infrig::linalg::TolerancePolicy;
use infrig::pogorelov::{closed_form, pogorelov_transport, Direction};
use infrig::projective::{apply_projective, transport_load, transport_motion, ProjectiveMap};
use infrig::rigidity::{
    analyze_kinematics, analyze_statics, is_equilibrium_load, motion_residual, resolve_load,
    rigidity_matrix, trivial_motions,
};
use infrig::verify::generate::{random_framework, random_projective_map};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Integer frameworks in the plane or space with an arbitrary edge subset.
fn integer_framework() -> impl Strategy<Value = Framework> {
    (2usize..=3)
        .prop_flat_map(|d| {
            let b: i64 = if d == 2 { 5 } else { 3 };
            (d + 1..=d + 4).prop_flat_map(move |n| {
                (
                    prop::collection::vec(prop::collection::vec(-b..=b, d), n),
                    prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
                )
            })
        })
        .prop_filter_map("coincident bar ends", |(coords, mask)| {
            let n = coords.len();
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let edges: Vec<(usize, usize)> = pairs
                .zip(&mask)
                .filter(|(_, &m)| m)
                .map(|(e, _)| e)
                .collect();
            let rows: Vec<&[i64]> = coords.iter().map(Vec::as_slice).collect();
            Framework::from_integers(&rows, &edges).ok()
        })
}

fn exact() -> TolerancePolicy {
    TolerancePolicy::exact()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(fw in integer_framework()) {
        let r = analyze_kinematics(&fw, exact()).unwrap();
        let rank = infrig::linalg::exact::rank(rigidity_matrix(&fw).exact().unwrap());
        prop_assert_eq!(rank + r.dim_motions, fw.dimension() * fw.vertex_count());
        prop_assert!(r.dim_trivial <= r.dim_motions);
    }

    #[test]
    fn trivial_motions_are_motions(fw in integer_framework()) {
        for q in trivial_motions(&fw) {
            prop_assert!(motion_residual(&fw, &q).unwrap() < 1e-12);
        }
    }

    #[test]
    fn kinematic_and_static_dof_agree(fw in integer_framework()) {
        let kin = analyze_kinematics(&fw, exact()).unwrap();
        match analyze_statics(&fw, exact()) {
            Ok(st) => prop_assert_eq!(kin.dof, st.static_dof),
            Err(e) => prop_assert_eq!(e.kind(), "DegenerateSpan"),
        }
    }

    #[test]
    fn stress_loads_resolve(fw in integer_framework(), w in prop::collection::vec(-4i64..=4, 0..64)) {
        // Rᵀ w is resolvable by construction and in equilibrium
        let r = rigidity_matrix(&fw);
        let m = r.matrix();
        let mut flat = vec![0.0; m.cols()];
        for row in 0..m.rows() {
            let c = *w.get(row).unwrap_or(&1) as f64;
            for (x, v) in flat.iter_mut().zip(m.row(row)) {
                *x += c * v;
            }
        }
        let load = Load::from_flat(&flat, fw.dimension());
        prop_assert!(is_equilibrium_load(&fw, &load).unwrap());
        prop_assert!(resolve_load(&fw, &load, exact()).unwrap().is_resolved());
        prop_assert!(resolve_load(&fw, &load, TolerancePolicy::floating()).unwrap().is_resolved());
    }

    #[test]
    fn projective_maps_preserve_dof_and_transport(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fw = random_framework(&mut rng, 2 + (seed % 2) as usize);
        let phi = random_projective_map(&mut rng, &fw).unwrap();
        let image = apply_projective(&phi, &fw).unwrap();
        let before = analyze_kinematics(&fw, exact()).unwrap();
        let after = analyze_kinematics(&image, exact()).unwrap();
        prop_assert_eq!(before.dof, after.dof);
        for q in &before.motion_basis {
            let t = transport_motion(&phi, &fw, q).unwrap();
            prop_assert!(motion_residual(&image, &t).unwrap() < 1e-9);
        }
        // resolvable loads stay resolvable
        let m = rigidity_matrix(&fw);
        let flat: Vec<f64> = (0..m.matrix().cols())
            .map(|c| (0..m.matrix().rows()).map(|r| *m.matrix().get(r, c)).sum())
            .collect();
        let load = Load::from_flat(&flat, fw.dimension());
        let moved = transport_load(&phi, &fw, &load).unwrap();
        prop_assert!(resolve_load(&image, &moved, TolerancePolicy::floating()).unwrap().is_resolved());
    }

    #[test]
    fn projective_maps_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fw = random_framework(&mut rng, 2);
        let a = random_projective_map(&mut rng, &fw).unwrap();
        let mid = apply_projective(&a, &fw).unwrap();
        let Ok(b) = random_projective_map(&mut rng, &mid) else { return Ok(()) };
        let two_steps = apply_projective(&b, &mid).unwrap();
        let once = apply_projective(&b.compose(&a).unwrap(), &fw);
        if let Ok(once) = once {
            prop_assert_eq!(once.exact_vertices(), two_steps.exact_vertices());
        }
    }

    #[test]
    fn pogorelov_closed_form_and_round_trip(
        p in prop::collection::vec(-0.6f64..0.6, 2),
        q in prop::collection::vec(-3.0f64..3.0, 2),
    ) {
        let other: Vec<f64> = p.iter().map(|x| x + 0.1).collect();
        let fw = Framework::new(2, infrig::framework::Geometry::Euclidean, vec![p.clone(), other], vec![(0, 1)]).unwrap();
        let field = VelocityField::new(vec![q.clone(), vec![0.0, 0.0]]);
        for dir in [Direction::ToHyperbolic, Direction::ToSpherical] {
            let there = pogorelov_transport(&fw, &field, dir).unwrap();
            let expect = closed_form(&p, &q, dir);
            for (a, b) in there.vectors[0].iter().zip(&expect) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
            let back = pogorelov_transport(&fw, &there, dir.inverse()).unwrap();
            for (a, b) in back.vectors[0].iter().zip(&q) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn affine_maps_preserve_verdicts(fw in integer_framework(), a in prop::collection::vec(-2i64..=2, 9)) {
        let d = fw.dimension();
        let mut rows = vec![vec![0i64; d + 1]; d + 1];
        rows[0][0] = 1;
        for r in 0..d {
            rows[r + 1][0] = a[r];
            for c in 0..d {
                rows[r + 1][c + 1] = (r == c) as i64 + a[(3 * r + c + 1) % 9];
            }
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let Ok(map) = ProjectiveMap::from_integers(&refs) else { return Ok(()) };
        let image = apply_projective(&map, &fw).unwrap();
        let before = analyze_kinematics(&fw, exact()).unwrap();
        let after = analyze_kinematics(&image, exact()).unwrap();
        prop_assert_eq!(before.dof, after.dof);
        prop_assert_eq!(before.rigid, after.rigid);
        for q in &before.motion_basis {
            let t = transport_motion(&map, &fw, q).unwrap();
            prop_assert!(motion_residual(&image, &t).unwrap() < 1e-9);
        }
    }
}
