mod common;

use proptest::prelude::*;
use rpr_core::{
    fk_root_multiplicity, inverse_kinematics, oracle_fk, parallel_singularity_measure, solve_fk, JointVector, Pose,
    RobotGeometry,
};

/// Pose far enough from both singularity kinds for tight round-trip tolerances.
fn well_conditioned(g: &RobotGeometry, p: &Pose) -> bool {
    let l = g.characteristic_scale();
    let rho = inverse_kinematics(g, p, None).rho;
    rho.iter().all(|r| r.abs() > 1e-2 * l)
        && parallel_singularity_measure(g, p).map(|m| m.normalized.abs() > 1e-3).unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_on_random_designs(g in common::design(), p in common::pose()) {
        prop_assume!(well_conditioned(&g, &p));
        let l = g.characteristic_scale();
        let set = solve_fk(&g, &inverse_kinematics(&g, &p, None)).unwrap();
        prop_assert!(set.contains(&p, l, 1e-8 * l), "{p:?} not in {:?}", set.poses());
        prop_assert!(set.len() <= 6);
    }

    #[test]
    fn every_sign_pattern_gives_the_same_set(p in common::pose()) {
        let g = common::reference();
        let rho = inverse_kinematics(&g, &p, None).rho;
        prop_assume!(rho.iter().all(|r| r.abs() > 1e-3));
        let base = solve_fk(&g, &JointVector::new(rho)).unwrap();
        for mask in 1..8u32 {
            let signed = std::array::from_fn(|i| if mask & (1 << i) != 0 { -rho[i] } else { rho[i] });
            prop_assert_eq!(&solve_fk(&g, &JointVector::new(signed)).unwrap(), &base);
        }
    }

    #[test]
    fn ik_magnitudes_are_leg_lengths(g in common::design(), p in common::pose(), signs in prop::array::uniform3(prop::bool::ANY)) {
        let hint = signs.map(|s| if s { 1.0 } else { -1.0 });
        let j = inverse_kinematics(&g, &p, Some(hint));
        let b = g.platform_points(&p);
        for i in 0..3 {
            let len = (b[i] - g.base()[i]).norm();
            prop_assert!((j.rho[i].abs() - len).abs() <= 1e-12 * g.characteristic_scale());
            prop_assert!(j.rho[i] == 0.0 || j.rho[i].signum() == hint[i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solver_agrees_with_sweep_oracle(g in common::design(), p in common::pose()) {
        prop_assume!(well_conditioned(&g, &p));
        let l = g.characteristic_scale();
        let j = inverse_kinematics(&g, &p, None);
        let fk = solve_fk(&g, &j).unwrap();
        let or = oracle_fk(&g, &j, 4096).unwrap();
        // the oracle misses roots that are nearly double at its grid resolution; compare only clean cases
        prop_assume!(fk.solutions.iter().all(|s| parallel_singularity_measure(&g, &s.pose).map(|m| m.normalized.abs() > 1e-2).unwrap_or(false)));
        prop_assert_eq!(fk.len(), or.len());
        prop_assert!(fk.hausdorff(&or, l) <= 1e-6 * l);
    }
}

#[test]
fn zero_leg_vectors_have_at_most_two_solutions() {
    let g = common::reference();
    for k in 0..64 {
        let phi = -3.0 + 6.0 * k as f64 / 64.0;
        for leg in 0..3 {
            let c = g.serial_point(leg, phi);
            let mut rho = inverse_kinematics(&g, &Pose::new(c.x, c.y, phi), None).rho;
            rho[leg] = 0.0;
            let set = solve_fk(&g, &JointVector::new(rho)).unwrap();
            assert!(!set.is_empty() && set.len() <= 2, "leg {leg} phi {phi}: {} solutions", set.len());
            assert!(set.contains(&Pose::new(c.x, c.y, phi), 10.0, 1e-8));
        }
    }
}

/// Bisects a joint segment across a change in solution count; the merging
/// pair sits on a parallel singularity.
#[test]
fn solutions_merge_on_the_parallel_singularity() {
    let g = common::reference();
    let l = g.characteristic_scale();
    let count = |j: &JointVector| solve_fk(&g, j).unwrap().len();
    let j0 = inverse_kinematics(&g, &Pose::new(0.0, 0.0, 0.0), None);
    let mut found = 0;
    for k in 0..24 {
        let phi = -3.0 + 0.25 * k as f64;
        let j1 = inverse_kinematics(&g, &Pose::new(5.0, 3.0, phi), None);
        let at = |u: f64| JointVector::new(std::array::from_fn(|i| j0.rho[i] + u * (j1.rho[i] - j0.rho[i])));
        let (n0, n1) = (count(&at(0.0)), count(&at(1.0)));
        if n0 == n1 {
            continue;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if count(&at(mid)) == n0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // on the side with more solutions two of them are about to merge
        let richer = if count(&at(lo)) > count(&at(hi)) { at(lo) } else { at(hi) };
        let sols = fk_root_multiplicity(&g, &richer).unwrap();
        let near = sols
            .iter()
            .map(|(p, _)| parallel_singularity_measure(&g, p).unwrap().normalized.abs())
            .fold(f64::INFINITY, f64::min);
        assert!(near <= 1e-4, "phi {phi}: nearest measure {near}");
        let closest = sols
            .iter()
            .enumerate()
            .flat_map(|(i, a)| sols[i + 1..].iter().map(move |b| a.0.distance(&b.0, l)))
            .fold(f64::INFINITY, f64::min);
        assert!(closest <= 1e-3 * l || sols.iter().any(|s| s.1 >= 2), "phi {phi}: closest pair {closest}");
        found += 1;
    }
    assert!(found > 0, "no count change along the sampled segments");
}
