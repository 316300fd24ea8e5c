//! Drive and turret actuator sizing.

use std::io::Read;

use serde::Deserialize;
use thiserror::Error;

use crate::error::{ModelError, Result};
use crate::params::RobotParams;
use crate::quadrature::{self, Rect};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveRequirement {
    /// Motor-side torque τ_m [N·m].
    pub torque: f64,
    /// Tangential force at the wheel F_dr [N].
    pub force: f64,
}

/// Torque needed to climb with the desired acceleration:
/// τ_m = r_w·(m·a_d + m·g) / G_dr.
pub fn required_drive_torque(params: &RobotParams, total_mass: f64) -> Result<DriveRequirement> {
    if !(total_mass.is_finite() && total_mass > 0.0) {
        return Err(ModelError::invalid(
            "m",
            format!("total mass must be strictly positive, got {total_mass}"),
        ));
    }
    let force = total_mass * params.desired_accel + total_mass * params.gravity;
    let torque = params.wheel_radius * force / params.drive_ratio;
    Ok(DriveRequirement { torque, force })
}

/// Flattened rubber contact between the wheel and the column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPatch {
    /// Normal pressure σ_W [Pa].
    pub pressure: f64,
    /// Compressed height h_w [m].
    pub height: f64,
    /// Width l_w [m].
    pub width: f64,
    /// Set when the wheel carries no load.
    pub degenerate: bool,
}

pub fn contact_patch(params: &RobotParams, normal_force: f64) -> Result<ContactPatch> {
    if !(normal_force.is_finite() && normal_force >= 0.0) {
        return Err(ModelError::invalid(
            "N_W",
            format!("wheel normal force must be non-negative, got {normal_force}"),
        ));
    }
    let width = params.wheel_width;
    if normal_force == 0.0 {
        return Ok(ContactPatch {
            pressure: 0.0,
            height: 0.0,
            width,
            degenerate: true,
        });
    }
    let height = normal_force / (params.rubber_modulus * width);
    Ok(ContactPatch {
        pressure: normal_force / (width * height),
        height,
        width,
        degenerate: false,
    })
}

/// ∬ √(y² + z²) over a `width` × `height` rectangle centered on the turret axis.
pub fn patch_polar_moment(width: f64, height: f64) -> Result<f64> {
    if width == 0.0 || height == 0.0 {
        return Ok(0.0);
    }
    let est = quadrature::integrate(
        |y, z| y.hypot(z),
        Rect::centered(width, height),
        quadrature::Options::default(),
    );
    if !est.converged {
        return Err(ModelError::invalid(
            "contact patch",
            format!("cubature did not converge (error {:e})", est.error),
        ));
    }
    Ok(est.value)
}

pub(crate) fn turret_torque_with_friction(
    params: &RobotParams,
    wheel_friction: f64,
    normal_force: f64,
) -> Result<f64> {
    let patch = contact_patch(params, normal_force)?;
    if patch.degenerate {
        return Ok(0.0);
    }
    let moment = patch_polar_moment(patch.width, patch.height)?;
    Ok(wheel_friction * patch.pressure / params.turret_ratio * moment)
}

/// Torque the turret motor needs to twist the loaded wheel against the column.
pub fn turret_torque(params: &RobotParams, normal_force: f64) -> Result<f64> {
    turret_torque_with_friction(params, params.wheel_friction, normal_force)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuationReport {
    pub drive_torque: f64,
    pub drive_force: f64,
    pub contact_pressure: f64,
    pub patch_height: f64,
    pub turret_torque: f64,
    pub degenerate_contact: bool,
}

pub(crate) fn actuation_report(
    params: &RobotParams,
    wheel_friction: f64,
    total_mass: f64,
    normal_force: f64,
) -> Result<ActuationReport> {
    let drive = required_drive_torque(params, total_mass)?;
    let patch = contact_patch(params, normal_force)?;
    Ok(ActuationReport {
        drive_torque: drive.torque,
        drive_force: drive.force,
        contact_pressure: patch.pressure,
        patch_height: patch.height,
        turret_torque: turret_torque_with_friction(params, wheel_friction, normal_force)?,
        degenerate_contact: patch.degenerate,
    })
}

/// A motor/gearbox pair as listed in a catalog.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct MotorSpec {
    pub name: String,
    #[serde(rename = "rated_torque_nm")]
    pub rated_torque: f64,
    #[serde(rename = "rated_speed_rpm")]
    pub rated_speed: f64,
}

impl MotorSpec {
    pub fn new(name: impl Into<String>, rated_torque: f64, rated_speed: f64) -> Self {
        Self {
            name: name.into(),
            rated_torque,
            rated_speed,
        }
    }

    /// Selected drive motor.
    pub fn reference_drive() -> Self {
        Self::new("drive", 6.865, 41.0)
    }

    /// Selected turret motor.
    pub fn reference_turret() -> Self {
        Self::new("turret", 1.863, 7.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rated_torque.is_finite() && self.rated_torque > 0.0) {
            return Err(ModelError::invalid(
                "rated_torque",
                format!("{} must be > 0", self.name),
            ));
        }
        if !(self.rated_speed.is_finite() && self.rated_speed > 0.0) {
            return Err(ModelError::invalid(
                "rated_speed",
                format!("{} must be > 0", self.name),
            ));
        }
        Ok(())
    }

    /// Climb speed at rated speed for a wheel of `wheel_radius` [m/s].
    pub fn climb_speed(&self, wheel_radius: f64) -> f64 {
        self.rated_speed * 2.0 * std::f64::consts::PI * wheel_radius / 60.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorCheck {
    /// rated − required [N·m]; negative when undersized.
    pub margin: f64,
    pub pass: bool,
}

pub fn motor_margin(required: f64, motor: &MotorSpec) -> MotorCheck {
    let margin = motor.rated_torque - required;
    MotorCheck {
        margin,
        pass: margin >= 0.0,
    }
}

pub const CATALOG_HEADER: [&str; 3] = ["name", "rated_torque_nm", "rated_speed_rpm"];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog header must be `name,rated_torque_nm,rated_speed_rpm`, got `{0}`")]
    Header(String),
    #[error("catalog row {row}: {source}")]
    Row { row: usize, source: csv::Error },
    #[error("catalog row {row}: {source}")]
    Invalid { row: usize, source: ModelError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Reads a `name,rated_torque_nm,rated_speed_rpm` catalog.
pub fn read_motor_catalog<R: Read>(reader: R) -> Result<Vec<MotorSpec>, CatalogError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CATALOG_HEADER.iter().copied()) {
        return Err(CatalogError::Header(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }
    let mut motors = Vec::new();
    for (i, row) in rdr.deserialize::<MotorSpec>().enumerate() {
        let row_no = i + 2;
        let motor = row.map_err(|source| CatalogError::Row {
            row: row_no,
            source,
        })?;
        motor.validate().map_err(|source| CatalogError::Invalid {
            row: row_no,
            source,
        })?;
        motors.push(motor);
    }
    Ok(motors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drive_torque_baseline_mass() {
        let p = RobotParams::baseline();
        let d = required_drive_torque(&p, 6.822).unwrap();
        assert!((d.torque - 0.036 * 6.822 * 10.81 / 0.75).abs() < 1e-12);
        assert!((d.torque - 3.540).abs() < 0.005);
        assert!((d.force - 73.75).abs() < 0.01);
        assert!((d.force - p.drive_ratio * d.torque / p.wheel_radius).abs() < 1e-12);
    }

    #[test]
    fn free_fall_needs_no_torque() {
        let mut p = RobotParams::baseline();
        p.desired_accel = -p.gravity;
        assert_eq!(required_drive_torque(&p, 6.822).unwrap().torque, 0.0);
    }

    #[test]
    fn rejects_non_positive_mass() {
        assert!(required_drive_torque(&RobotParams::baseline(), 0.0).is_err());
    }

    #[test]
    fn patch_dimensions() {
        let p = RobotParams::baseline();
        let patch = contact_patch(&p, 249.6).unwrap();
        assert!((patch.height - 249.6 / (0.7e6 * 0.032)).abs() < 1e-15);
        assert!((patch.height - 11.14e-3).abs() < 0.01e-3);
        assert!((patch.pressure / 0.7e6 - 1.0).abs() < 1e-12);
        let empty = contact_patch(&p, 0.0).unwrap();
        assert!(empty.degenerate);
        assert_eq!(empty.height, 0.0);
    }

    #[test]
    fn unloaded_turret_is_free() {
        assert_eq!(turret_torque(&RobotParams::baseline(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn margins() {
        let drive = motor_margin(4.057, &MotorSpec::reference_drive());
        assert!((drive.margin - 2.808).abs() < 1e-12);
        assert!(drive.pass);
        let turret = motor_margin(0.829, &MotorSpec::reference_turret());
        assert!((turret.margin - 1.034).abs() < 1e-12);
        assert!(turret.pass);
        let exact = motor_margin(1.5, &MotorSpec::new("m", 1.5, 10.0));
        assert_eq!(exact.margin, 0.0);
        assert!(exact.pass);
    }

    #[test]
    fn catalog_parses() {
        let text = "name,rated_torque_nm,rated_speed_rpm\ndrive,6.865,41\nturret, 1.863 ,7\n";
        let motors = read_motor_catalog(text.as_bytes()).unwrap();
        assert_eq!(
            motors,
            vec![MotorSpec::reference_drive(), MotorSpec::reference_turret()]
        );
    }

    #[test]
    fn catalog_rejects_bad_header_and_rows() {
        let bad = read_motor_catalog("name,torque,rpm\na,1,1\n".as_bytes());
        assert!(matches!(bad, Err(CatalogError::Header(_))));
        let neg = read_motor_catalog("name,rated_torque_nm,rated_speed_rpm\na,-1,1\n".as_bytes());
        assert!(matches!(neg, Err(CatalogError::Invalid { row: 2, .. })));
        let junk = read_motor_catalog("name,rated_torque_nm,rated_speed_rpm\na,x,1\n".as_bytes());
        assert!(matches!(junk, Err(CatalogError::Row { row: 2, .. })));
    }

    #[test]
    fn climb_speed_at_rated_rpm() {
        let v = MotorSpec::reference_drive().climb_speed(0.036);
        assert!((v - 41.0 * 2.0 * std::f64::consts::PI * 0.036 / 60.0).abs() < 1e-15);
    }
}
