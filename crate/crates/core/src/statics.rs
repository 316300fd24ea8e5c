//! Self-locking condition and the no-slip friction bound.
//!
//! The robot hangs on the column by friction at the drive wheel and at the
//! two end rollers. `cos(π − nα)` couples the roller normal forces to the
//! wheel normal force; it appears throughout as `wrap_cosine`.

use std::f64::consts::PI;

use crate::error::{ModelError, Result};
use crate::geometry::{com_distance_d1, ArmGeometry};
use crate::params::{validate_pair, ColumnSpec, RobotParams};

const SINGULAR_EPS: f64 = 1e-9;

/// Force balance of the self-lock / no-slip analysis. Forces are magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticsReport {
    pub links: u32,
    pub tail_weights: u32,
    pub total_mass: f64,
    /// F_G = m·g [N].
    pub gravity_force: f64,
    /// N_W [N].
    pub wheel_normal: f64,
    /// Per-roller normal force N_R [N].
    pub roller_normal: f64,
    /// F_W = μ_W·N_W [N].
    pub wheel_friction: f64,
    /// Per-roller friction F_R = μ_R·N_R [N].
    pub roller_friction: f64,
    /// Aggregate ball-transfer friction F_B [N].
    pub ball_transfer_friction: f64,
    /// d₁ [m].
    pub com_offset: f64,
    /// d₂ = d_c [m].
    pub contact_distance: f64,
    /// Lower bound on d₁ for self-locking [m].
    pub lock_threshold: f64,
    pub self_lock_ok: bool,
    /// F_W + 2(F_R + F_B) − F_G [N]. Non-negative when the hanging balance holds.
    pub lock_slack: f64,
    /// Sign of d₂·(tan γ·cos(π − nα) − μ_R) before magnitudes are taken.
    pub denominator_sign: i8,
}

/// Wheel load at a given COM offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WheelLoad {
    /// |F_W| [N].
    pub friction_capacity: f64,
    /// N_W = |F_W| / μ_W [N].
    pub normal_force: f64,
    pub denominator_sign: i8,
}

pub(crate) fn wrap_cosine(params: &RobotParams, column: &ColumnSpec, links: u32) -> f64 {
    let alpha = ArmGeometry::from(params).link_angle(column.diameter);
    (PI - f64::from(links) * alpha).cos()
}

fn check_links(params: &RobotParams, links: u32) -> Result<()> {
    if links < params.min_links {
        return Err(ModelError::invalid(
            "n",
            format!("link count {links} is below n_min = {}", params.min_links),
        ));
    }
    Ok(())
}

fn sign(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

/// Minimum d₁ for self-locking:
/// |d₂·(tan γ·cos(π−nα) − μ_R) / (μ_W·cos(π−nα) + μ_R)|, with d₂ = d_c.
pub fn self_lock_threshold(params: &RobotParams, column: &ColumnSpec, links: u32) -> Result<f64> {
    validate_pair(params, column)?;
    check_links(params, links)?;
    let c = wrap_cosine(params, column, links);
    let mu_w = column.wheel_friction(params);
    let mu_r = column.roller_friction(params);
    let denominator = mu_w * c + mu_r;
    if denominator.abs() < SINGULAR_EPS {
        return Err(ModelError::SingularConfiguration {
            what: "self-lock threshold",
            value: denominator,
        });
    }
    let d2 = column.diameter;
    Ok((d2 * (params.tilt.tan() * c - mu_r) / denominator).abs())
}

/// Wheel friction capacity for an explicit COM offset and total mass.
pub fn friction_capacity_at(
    params: &RobotParams,
    column: &ColumnSpec,
    links: u32,
    com_offset: f64,
    total_mass: f64,
) -> Result<WheelLoad> {
    validate_pair(params, column)?;
    check_links(params, links)?;
    let c = wrap_cosine(params, column, links);
    let mu_w = column.wheel_friction(params);
    let mu_r = column.roller_friction(params);
    let d2 = column.diameter;
    let denominator = d2 * (params.tilt.tan() * c - mu_r);
    if denominator.abs() < SINGULAR_EPS * d2 {
        return Err(ModelError::SingularConfiguration {
            what: "wheel friction capacity",
            value: denominator,
        });
    }
    let raw_normal = total_mass * params.gravity * com_offset * c / denominator;
    let normal_force = raw_normal.abs();
    Ok(WheelLoad {
        friction_capacity: mu_w * normal_force,
        normal_force,
        denominator_sign: sign(denominator),
    })
}

/// |F_W| for the configuration with `tail_weights` tail weights.
pub fn wheel_friction_capacity(
    params: &RobotParams,
    column: &ColumnSpec,
    links: u32,
    tail_weights: u32,
) -> Result<WheelLoad> {
    let mass = com_distance_d1(params, column, links, tail_weights)?;
    friction_capacity_at(params, column, links, mass.com_offset, mass.total_mass)
}

/// Full self-lock analysis of one configuration.
pub fn self_lock_check(
    params: &RobotParams,
    column: &ColumnSpec,
    links: u32,
    tail_weights: u32,
) -> Result<StaticsReport> {
    validate_pair(params, column)?;
    if params.tilt == 0.0 {
        return Err(ModelError::invalid(
            "gamma",
            "a tilt of exactly zero cannot occur on a real arm; it must be strictly positive",
        ));
    }
    let mass = com_distance_d1(params, column, links, tail_weights)?;
    let lock_threshold = self_lock_threshold(params, column, links)?;
    let load = friction_capacity_at(params, column, links, mass.com_offset, mass.total_mass)?;

    let c = wrap_cosine(params, column, links);
    let mu_r = column.roller_friction(params);
    let d2 = column.diameter;
    let gravity_force = mass.total_mass * params.gravity;
    // Torque balance about the wheel contact solved for one roller.
    let roller_normal =
        gravity_force * mass.com_offset / (2.0 * d2 * (params.tilt.tan() * c - mu_r).abs());
    let roller_friction = mu_r * roller_normal;
    let ball = params.ball_transfer_friction;

    Ok(StaticsReport {
        links,
        tail_weights,
        total_mass: mass.total_mass,
        gravity_force,
        wheel_normal: load.normal_force,
        roller_normal,
        wheel_friction: load.friction_capacity,
        roller_friction,
        ball_transfer_friction: ball,
        com_offset: mass.com_offset,
        contact_distance: d2,
        lock_threshold,
        self_lock_ok: mass.com_offset >= lock_threshold,
        lock_slack: load.friction_capacity + 2.0 * (roller_friction + ball) - gravity_force,
        denominator_sign: load.denominator_sign,
    })
}

/// Drive force must not exceed the wheel's friction capacity (inclusive).
pub fn no_slip_check(drive_force: f64, capacity: f64) -> bool {
    drive_force <= capacity
}
