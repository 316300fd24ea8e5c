//! Fixed robot parameters and the climbing target.
//!
//! Everything here is strict SI: metres, kilograms, newtons, radians,
//! pascals. Conversion from the millimetre-based config file happens in
//! [`crate::config`].

use std::f64::consts::FRAC_PI_2;

use crate::error::{ModelError, Result};

/// Default link-center-to-column standoff [m].
pub const DEFAULT_CONTACT_STANDOFF: f64 = 0.020;
/// Default minimum latch clearance [m].
pub const DEFAULT_MIN_LATCH_CLEARANCE: f64 = 0.010;
pub const DEFAULT_MIN_LINKS: u32 = 2;
pub const DEFAULT_MAX_TAIL_WEIGHTS: u32 = 8;
/// Hard cap on the link search.
pub const DEFAULT_MAX_LINKS: u32 = 64;

/// All physical parameters of the robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotParams {
    /// Body mass [kg].
    pub body_mass: f64,
    /// Base tail mass without modular weights [kg].
    pub tail_mass: f64,
    /// Mass of one standard link [kg].
    pub link_mass: f64,
    /// Combined end-link mass term [kg].
    pub end_mass: f64,
    /// Mass of one modular tail weight [kg].
    pub tail_weight_mass: f64,
    /// Body COM distance from the wheel contact [m].
    pub body_com_offset: f64,
    /// Tail COM distance from the wheel contact [m].
    pub tail_com_offset: f64,
    /// Link length [m].
    pub link_length: f64,
    /// End-link center to latch joint [m].
    pub latch_offset: f64,
    /// Link center to column contact [m].
    pub contact_standoff: f64,
    pub wheel_radius: f64,
    pub wheel_width: f64,
    /// Elastic modulus of the wheel rubber [Pa].
    pub rubber_modulus: f64,
    /// Wheel/column friction coefficient.
    pub wheel_friction: f64,
    /// End roller/column friction coefficient.
    pub roller_friction: f64,
    /// Tilt of the robot from the horizontal plane [rad].
    pub tilt: f64,
    /// Desired climbing acceleration [m/s²].
    pub desired_accel: f64,
    pub gravity: f64,
    pub drive_ratio: f64,
    pub turret_ratio: f64,
    /// Aggregate ball-transfer friction [N].
    pub ball_transfer_friction: f64,
    /// Minimum acceptable latch clearance [m]. May be negative.
    pub min_latch_clearance: f64,
    pub min_links: u32,
    pub max_tail_weights: u32,
    pub max_links: u32,
}

impl RobotParams {
    /// The reference robot: the published parameter set plus the documented
    /// defaults for standoff, clearance and search limits.
    pub fn baseline() -> Self {
        Self {
            body_mass: 1.873,
            tail_mass: 3.311,
            link_mass: 0.221,
            end_mass: 0.754,
            tail_weight_mass: 0.261,
            body_com_offset: 0.1546,
            tail_com_offset: 0.3293,
            link_length: 0.065,
            latch_offset: 0.011,
            contact_standoff: DEFAULT_CONTACT_STANDOFF,
            wheel_radius: 0.036,
            wheel_width: 0.032,
            rubber_modulus: 0.7e6,
            wheel_friction: 0.7,
            roller_friction: 0.5,
            tilt: 0.175,
            desired_accel: 1.0,
            gravity: 9.81,
            drive_ratio: 0.75,
            turret_ratio: 8.0 / 3.0,
            ball_transfer_friction: 0.0,
            min_latch_clearance: DEFAULT_MIN_LATCH_CLEARANCE,
            min_links: DEFAULT_MIN_LINKS,
            max_tail_weights: DEFAULT_MAX_TAIL_WEIGHTS,
            max_links: DEFAULT_MAX_LINKS,
        }
    }

    /// Checks every parameter invariant, naming the first violation.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m_b", self.body_mass),
            ("m_t", self.tail_mass),
            ("m_link", self.link_mass),
            ("m_end", self.end_mass),
            ("m_tw", self.tail_weight_mass),
            ("d_b", self.body_com_offset),
            ("d_t", self.tail_com_offset),
            ("l", self.link_length),
            ("w_latch", self.latch_offset),
            ("r_w", self.wheel_radius),
            ("l_w", self.wheel_width),
            ("E_rubber", self.rubber_modulus),
            ("a_d", self.desired_accel),
            ("g", self.gravity),
            ("G_dr", self.drive_ratio),
            ("G_turret", self.turret_ratio),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::invalid(
                    name,
                    format!("must be finite and strictly positive, got {value}"),
                ));
            }
        }
        if !(self.contact_standoff.is_finite() && self.contact_standoff >= 0.0) {
            return Err(ModelError::invalid(
                "w_b",
                format!(
                    "must be finite and non-negative, got {}",
                    self.contact_standoff
                ),
            ));
        }
        check_friction("mu_W", self.wheel_friction)?;
        check_friction("mu_R", self.roller_friction)?;
        if !(self.tilt.is_finite() && (0.0..FRAC_PI_2).contains(&self.tilt)) {
            return Err(ModelError::invalid(
                "gamma",
                format!("tilt angle must lie in [0, pi/2), got {}", self.tilt),
            ));
        }
        if !(self.ball_transfer_friction.is_finite() && self.ball_transfer_friction >= 0.0) {
            return Err(ModelError::invalid(
                "F_B_aggregate",
                format!("must be non-negative, got {}", self.ball_transfer_friction),
            ));
        }
        if !self.min_latch_clearance.is_finite() {
            return Err(ModelError::invalid("c_latch_min", "must be finite"));
        }
        if self.min_links < 2 {
            return Err(ModelError::invalid(
                "n_min",
                format!("an arm needs at least 2 links, got {}", self.min_links),
            ));
        }
        if self.max_links < self.min_links {
            return Err(ModelError::invalid(
                "n_max",
                format!(
                    "must be at least n_min = {}, got {}",
                    self.min_links, self.max_links
                ),
            ));
        }
        Ok(())
    }

    /// Tail mass including `tail_weights` modular weights.
    pub fn effective_tail_mass(&self, tail_weights: u32) -> f64 {
        self.tail_mass + f64::from(tail_weights) * self.tail_weight_mass
    }

    /// Returns a copy with every mass multiplied by `factor`.
    pub fn with_mass_scale(&self, factor: f64) -> Self {
        Self {
            body_mass: self.body_mass * factor,
            tail_mass: self.tail_mass * factor,
            link_mass: self.link_mass * factor,
            end_mass: self.end_mass * factor,
            tail_weight_mass: self.tail_weight_mass * factor,
            ..*self
        }
    }
}

impl Default for RobotParams {
    fn default() -> Self {
        Self::baseline()
    }
}

pub(crate) fn check_friction(name: &'static str, mu: f64) -> Result<()> {
    if mu.is_finite() && mu > 0.0 && mu <= 2.0 {
        Ok(())
    } else {
        Err(ModelError::invalid(
            name,
            format!("friction coefficient must lie in (0, 2], got {mu}"),
        ))
    }
}

/// The column being climbed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnSpec {
    /// Column diameter [m].
    pub diameter: f64,
    pub wheel_friction_override: Option<f64>,
    pub roller_friction_override: Option<f64>,
}

impl ColumnSpec {
    pub fn new(diameter: f64) -> Self {
        Self {
            diameter,
            wheel_friction_override: None,
            roller_friction_override: None,
        }
    }

    pub fn from_mm(diameter_mm: f64) -> Self {
        Self::new(diameter_mm * 1e-3)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.diameter.is_finite() && self.diameter > 0.0) {
            return Err(ModelError::invalid(
                "d_c",
                format!(
                    "column diameter must be strictly positive, got {}",
                    self.diameter
                ),
            ));
        }
        if let Some(mu) = self.wheel_friction_override {
            check_friction("mu_W_override", mu)?;
        }
        if let Some(mu) = self.roller_friction_override {
            check_friction("mu_R_override", mu)?;
        }
        Ok(())
    }

    pub fn wheel_friction(&self, params: &RobotParams) -> f64 {
        self.wheel_friction_override
            .unwrap_or(params.wheel_friction)
    }

    pub fn roller_friction(&self, params: &RobotParams) -> f64 {
        self.roller_friction_override
            .unwrap_or(params.roller_friction)
    }
}

pub(crate) fn validate_pair(params: &RobotParams, column: &ColumnSpec) -> Result<()> {
    params.validate()?;
    column.validate()
}
