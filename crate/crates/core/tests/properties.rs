use column_climber::actuation::{patch_polar_moment, required_drive_torque, turret_torque};
use column_climber::design::{design_for_diameter, sweep, sweep_with, MotorPair, SweepOptions};
use column_climber::geometry::{
    com_distance_d1, end_com_distance, latch_clearance, link_angle, links_for_diameter,
};
use column_climber::oracle::{closed_form_patch_integral, link_count_drops, staircase_violations};
use column_climber::statics::{friction_capacity_at, self_lock_threshold};
use column_climber::{ColumnSpec, RobotParams};
use proptest::prelude::*;

fn base() -> RobotParams {
    RobotParams::baseline()
}

proptest! {
    #[test]
    fn link_angle_strictly_decreasing(d in 0.01f64..2.0, dd in 1e-4f64..0.5) {
        let p = base();
        let a1 = link_angle(&p, &ColumnSpec::new(d)).unwrap();
        let a2 = link_angle(&p, &ColumnSpec::new(d + dd)).unwrap();
        prop_assert!(a2 < a1);
        prop_assert!(a1 > 0.0 && a1 < std::f64::consts::PI);
    }

    #[test]
    fn latch_clearance_grows_with_links(d in 0.03f64..0.6) {
        let p = base();
        let col = ColumnSpec::new(d);
        let alpha = link_angle(&p, &col).unwrap();
        let mut n = p.min_links;
        // Every added sine term stays positive while kα < π.
        while f64::from(n + 1) * alpha <= std::f64::consts::PI {
            let a = latch_clearance(&p, &col, n).unwrap();
            let b = latch_clearance(&p, &col, n + 1).unwrap();
            prop_assert!(b > a, "n={} d={}", n, d);
            n += 1;
        }
    }

    #[test]
    fn end_minus_latch_identity(d in 0.02f64..1.0, n in 2u32..20, wb in 0.0f64..0.05) {
        let mut p = base();
        p.contact_standoff = wb;
        let col = ColumnSpec::new(d);
        let lhs = end_com_distance(&p, &col, n).unwrap() - latch_clearance(&p, &col, n).unwrap();
        prop_assert!((lhs - (wb + d - p.wheel_radius)).abs() < 1e-12);
    }

    #[test]
    fn d1_invariant_under_mass_scaling(d in 0.05f64..0.5, n in 2u32..12, k in 0u32..9, lambda in 0.01f64..100.0) {
        let p = base();
        let col = ColumnSpec::new(d);
        let a = com_distance_d1(&p, &col, n, k).unwrap();
        let b = com_distance_d1(&p.with_mass_scale(lambda), &col, n, k).unwrap();
        prop_assert!((a.com_offset - b.com_offset).abs() <= 1e-12 * a.com_offset.abs().max(1e-3));
        prop_assert!((b.total_mass / a.total_mass - lambda).abs() <= 1e-12 * lambda);
    }

    #[test]
    fn threshold_ignores_masses(d in 0.05f64..0.5, n in 2u32..12, lambda in 0.01f64..100.0, extra in 0.0f64..5.0) {
        let p = base();
        let col = ColumnSpec::new(d);
        let mut q = p.with_mass_scale(lambda);
        q.tail_mass += extra;
        if let Ok(a) = self_lock_threshold(&p, &col, n) {
            let b = self_lock_threshold(&q, &col, n).unwrap();
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn capacity_linear_in_d1_and_mass(d in 0.05f64..0.5, n in 2u32..10, d1 in 0.01f64..0.4, m in 1.0f64..20.0, s in 0.1f64..10.0) {
        let p = base();
        let col = ColumnSpec::new(d);
        let Ok(base_load) = friction_capacity_at(&p, &col, n, d1, m) else { return Ok(()); };
        let by_d1 = friction_capacity_at(&p, &col, n, s * d1, m).unwrap();
        let by_m = friction_capacity_at(&p, &col, n, d1, s * m).unwrap();
        let f = base_load.friction_capacity;
        prop_assert!((by_d1.friction_capacity / f - s).abs() <= 1e-12 * s);
        prop_assert!((by_m.friction_capacity / f - s).abs() <= 1e-12 * s);
    }

    #[test]
    fn drive_torque_linear(m in 0.5f64..30.0, s in 0.1f64..10.0, a in 0.1f64..5.0) {
        let mut p = base();
        p.desired_accel = a;
        let t = required_drive_torque(&p, m).unwrap().torque;
        prop_assert!((required_drive_torque(&p, s * m).unwrap().torque / t - s).abs() <= 1e-12 * s);
        // Scale (a_d + g) by s through both terms.
        let mut q = p;
        q.desired_accel *= s;
        q.gravity *= s;
        prop_assert!((required_drive_torque(&q, m).unwrap().torque / t - s).abs() <= 1e-12 * s);
    }

    #[test]
    fn turret_torque_monotone(n1 in 0.0f64..800.0, dn in 0.0f64..200.0) {
        let p = base();
        let a = turret_torque(&p, n1).unwrap();
        let b = turret_torque(&p, n1 + dn).unwrap();
        prop_assert!(b >= a * (1.0 - 1e-9));
    }

    #[test]
    fn patch_integral_homogeneous(w in 1e-3f64..0.1, h in 1e-4f64..0.05, lambda in 0.2f64..5.0) {
        let a = patch_polar_moment(w, h).unwrap();
        let b = patch_polar_moment(lambda * w, lambda * h).unwrap();
        prop_assert!((b / a - lambda.powi(3)).abs() <= 1e-8 * lambda.powi(3));
        prop_assert!(((a - closed_form_patch_integral(w, h)) / a).abs() <= 1e-8);
    }
}

#[test]
fn link_count_non_decreasing_on_millimetre_grid() {
    let grid: Vec<f64> = (60..=400).map(|mm| f64::from(mm) * 1e-3).collect();
    assert!(link_count_drops(&base(), &grid).unwrap().is_empty());
}

#[test]
fn ballast_increments_push_d1_out() {
    let p = base();
    let col = ColumnSpec::from_mm(90.0);
    let n = links_for_diameter(&p, &col).unwrap().links;
    let d: Vec<f64> = (0..=8)
        .map(|k| com_distance_d1(&p, &col, n, k).unwrap())
        .inspect(|m| assert!(m.signed_com_offset < 0.0))
        .map(|m| m.com_offset)
        .collect();
    // Forward differences all positive.
    assert!(d.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn design_is_deterministic() {
    let p = base();
    let m = MotorPair::default();
    for mm in [60.0, 90.0, 170.0, 230.0, 260.0, 320.0] {
        let col = ColumnSpec::from_mm(mm);
        let a = design_for_diameter(&p, &col, &m.drive, &m.turret).unwrap();
        let b = design_for_diameter(&p, &col, &m.drive, &m.turret).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}

#[test]
fn sweep_staircase_at_fine_resolution() {
    let p = base();
    let curve = sweep(&p, 0.060, 0.400, 0.001, &MotorPair::default()).unwrap();
    assert_eq!(curve.points.len(), 341);
    let v = staircase_violations(&curve);
    assert!(v.is_empty(), "{v:?}");
    assert!(curve
        .points
        .iter()
        .all(|p| !p.feasible || (p.self_lock_ok && p.no_slip_ok && p.torque_ok)));
    assert!(curve.points.iter().all(|p| p.drive_torque > 0.0));
}

#[test]
fn coarse_sweep_max_matches_fine_sweep() {
    let p = base();
    let coarse = sweep(&p, 0.060, 0.400, 0.005, &MotorPair::default()).unwrap();
    let fine = sweep(&p, 0.060, 0.400, 0.001, &MotorPair::default()).unwrap();
    let c = coarse.max_climbable_diameter.unwrap();
    let f = fine.max_climbable_diameter.unwrap();
    assert!(f >= c - 1e-12 && f < c + 0.005);
}

#[test]
fn ballast_never_hurts_reach() {
    let p = base();
    for step in [0.001, 0.005, 0.01] {
        let with = sweep(&p, 0.060, 0.400, step, &MotorPair::default()).unwrap();
        let without = sweep_with(
            &p,
            0.060,
            0.400,
            step,
            &MotorPair::default(),
            SweepOptions {
                remediate_ballast: false,
            },
        )
        .unwrap();
        assert!(
            without.max_climbable_diameter.unwrap_or(0.0)
                <= with.max_climbable_diameter.unwrap_or(0.0)
        );
        assert!(without.points.iter().all(|p| p.tail_weights == 0));
    }
}
