//! Per-diameter design synthesis and diameter sweeps.
//!
//! For each column diameter: pick the link count from the latch clearance,
//! add tail weights until the robot both self-locks and does not slip, then
//! size the motors. A sweep walks an increasing diameter grid; tail weights
//! carried by one grid point stay mounted for the next.

use crate::actuation::{actuation_report, motor_margin, MotorSpec};
use crate::error::{ModelError, Result};
use crate::geometry::{arm_configuration, links_for_diameter};
use crate::params::{ColumnSpec, RobotParams};
use crate::statics::{no_slip_check, self_lock_check};

#[derive(Debug, Clone, PartialEq)]
pub struct MotorPair {
    pub drive: MotorSpec,
    pub turret: MotorSpec,
}

impl Default for MotorPair {
    fn default() -> Self {
        Self {
            drive: MotorSpec::reference_drive(),
            turret: MotorSpec::reference_turret(),
        }
    }
}

/// Which check forced tail weights to be added at a design point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallastCause {
    SelfLock,
    NoSlip,
    Both,
}

impl BallastCause {
    fn merge(a: Option<Self>, b: Self) -> Self {
        match a {
            None => b,
            Some(a) if a == b => a,
            Some(_) => BallastCause::Both,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BallastCause::SelfLock => "self_lock",
            BallastCause::NoSlip => "no_slip",
            BallastCause::Both => "both",
        }
    }
}

/// Signed slack of every check; negative means violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins {
    /// d₁ − threshold [m].
    pub self_lock: f64,
    /// |F_W| − F_dr [N].
    pub no_slip: f64,
    /// Rated − required drive torque [N·m].
    pub drive_torque: f64,
    /// Rated − required turret torque [N·m].
    pub turret_torque: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignPoint {
    /// Column diameter [m].
    pub diameter: f64,
    pub links: u32,
    pub tail_weights: u32,
    /// d₁ [m].
    pub com_offset: f64,
    pub lock_threshold: f64,
    pub total_mass: f64,
    /// Required drive motor torque [N·m].
    pub drive_torque: f64,
    pub drive_force: f64,
    /// Wheel friction capacity |F_W| [N].
    pub wheel_capacity: f64,
    pub wheel_normal: f64,
    /// Required turret motor torque [N·m].
    pub turret_torque: f64,
    pub wrap_valid: bool,
    pub self_lock_ok: bool,
    pub no_slip_ok: bool,
    /// Both motors cover their required torque.
    pub torque_ok: bool,
    pub feasible: bool,
    pub margins: Margins,
    /// Set when tail weights were added at this point.
    pub ballast_cause: Option<BallastCause>,
}

fn evaluate(
    params: &RobotParams,
    column: &ColumnSpec,
    links: u32,
    tail_weights: u32,
    motors: &MotorPair,
) -> Result<DesignPoint> {
    let arm = arm_configuration(params, column, links)?;
    let statics = self_lock_check(params, column, links, tail_weights)?;
    let act = actuation_report(
        params,
        column.wheel_friction(params),
        statics.total_mass,
        statics.wheel_normal,
    )?;
    let no_slip_ok = no_slip_check(act.drive_force, statics.wheel_friction);
    let drive = motor_margin(act.drive_torque, &motors.drive);
    let turret = motor_margin(act.turret_torque, &motors.turret);
    let torque_ok = drive.pass && turret.pass;
    Ok(DesignPoint {
        diameter: column.diameter,
        links,
        tail_weights,
        com_offset: statics.com_offset,
        lock_threshold: statics.lock_threshold,
        total_mass: statics.total_mass,
        drive_torque: act.drive_torque,
        drive_force: act.drive_force,
        wheel_capacity: statics.wheel_friction,
        wheel_normal: statics.wheel_normal,
        turret_torque: act.turret_torque,
        wrap_valid: arm.wrap_valid(),
        self_lock_ok: statics.self_lock_ok,
        no_slip_ok,
        torque_ok,
        feasible: statics.self_lock_ok && no_slip_ok && torque_ok,
        margins: Margins {
            self_lock: statics.com_offset - statics.lock_threshold,
            no_slip: statics.wheel_friction - act.drive_force,
            drive_torque: drive.margin,
            turret_torque: turret.margin,
        },
        ballast_cause: None,
    })
}

/// Evaluates a fixed link count and tail-weight count without any search.
pub fn evaluate_configuration(
    params: &RobotParams,
    column: &ColumnSpec,
    links: u32,
    tail_weights: u32,
    motors: &MotorPair,
) -> Result<DesignPoint> {
    evaluate(params, column, links, tail_weights, motors)
}

/// Design at one diameter, starting the ballast search at `first_weight`.
/// With `remediate` off the tail weight count is never changed.
pub fn design_with_ballast(
    params: &RobotParams,
    column: &ColumnSpec,
    motors: &MotorPair,
    first_weight: u32,
    remediate: bool,
) -> Result<DesignPoint> {
    let arm = links_for_diameter(params, column)?;
    let mut k = first_weight.min(params.max_tail_weights);
    let mut cause = None;
    loop {
        let mut point = evaluate(params, column, arm.links, k, motors)?;
        let settled = point.self_lock_ok && point.no_slip_ok;
        if settled || !remediate || k >= params.max_tail_weights {
            point.ballast_cause = cause;
            return Ok(point);
        }
        let why = match (point.self_lock_ok, point.no_slip_ok) {
            (false, false) => BallastCause::Both,
            (false, true) => BallastCause::SelfLock,
            _ => BallastCause::NoSlip,
        };
        cause = Some(BallastCause::merge(cause, why));
        k += 1;
    }
}

/// Synthesizes the design for one column diameter from an empty tail.
pub fn design_for_diameter(
    params: &RobotParams,
    column: &ColumnSpec,
    drive: &MotorSpec,
    turret: &MotorSpec,
) -> Result<DesignPoint> {
    let motors = MotorPair {
        drive: drive.clone(),
        turret: turret.clone(),
    };
    design_with_ballast(params, column, &motors, 0, true)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightAddition {
    pub diameter: f64,
    pub from: u32,
    pub to: u32,
    pub cause: Option<BallastCause>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignCurve {
    pub points: Vec<DesignPoint>,
    /// Largest grid diameter reached with every grid point up to it feasible.
    pub max_climbable_diameter: Option<f64>,
    pub link_addition_diameters: Vec<f64>,
    pub weight_addition_diameters: Vec<f64>,
    pub weight_additions: Vec<WeightAddition>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Add tail weights when self-lock or no-slip fail.
    pub remediate_ballast: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            remediate_ballast: true,
        }
    }
}

/// Diameters `d_min + i·step` not exceeding `d_max`.
pub fn diameter_grid(d_min: f64, d_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(d_min.is_finite() && d_max.is_finite() && step.is_finite()) {
        return Err(ModelError::InvalidRange(
            "bounds and step must be finite".into(),
        ));
    }
    if !(d_min > 0.0 && d_min < d_max) {
        return Err(ModelError::InvalidRange(format!(
            "need 0 < d_min < d_max, got [{d_min}, {d_max}]"
        )));
    }
    if step <= 0.0 {
        return Err(ModelError::InvalidRange(format!(
            "step must be positive, got {step}"
        )));
    }
    let count = ((d_max - d_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| d_min + i as f64 * step).collect())
}

pub fn sweep(
    params: &RobotParams,
    d_min: f64,
    d_max: f64,
    step: f64,
    motors: &MotorPair,
) -> Result<DesignCurve> {
    sweep_with(params, d_min, d_max, step, motors, SweepOptions::default())
}

pub fn sweep_with(
    params: &RobotParams,
    d_min: f64,
    d_max: f64,
    step: f64,
    motors: &MotorPair,
    options: SweepOptions,
) -> Result<DesignCurve> {
    params.validate()?;
    let grid = diameter_grid(d_min, d_max, step)?;
    let mut points: Vec<DesignPoint> = Vec::with_capacity(grid.len());
    let mut link_additions = Vec::new();
    let mut weight_additions = Vec::new();
    let mut carried = 0;
    for d in grid {
        let point = design_with_ballast(
            params,
            &ColumnSpec::new(d),
            motors,
            carried,
            options.remediate_ballast,
        )?;
        if let Some(prev) = points.last() {
            if point.links > prev.links {
                link_additions.push(d);
            }
            if point.tail_weights > prev.tail_weights {
                weight_additions.push(WeightAddition {
                    diameter: d,
                    from: prev.tail_weights,
                    to: point.tail_weights,
                    cause: point.ballast_cause,
                });
            }
        }
        carried = point.tail_weights;
        points.push(point);
    }
    let max_climbable_diameter = points
        .iter()
        .take_while(|p| p.feasible)
        .last()
        .map(|p| p.diameter);
    Ok(DesignCurve {
        max_climbable_diameter,
        link_addition_diameters: link_additions,
        weight_addition_diameters: weight_additions.iter().map(|w| w.diameter).collect(),
        weight_additions,
        points,
    })
}
