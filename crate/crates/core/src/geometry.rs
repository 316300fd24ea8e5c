//! Arm closure geometry and the mass distribution of the robot.
//!
//! Each arm is a chain of `n` links wrapped around the column; consecutive
//! links meet at the inter-link angle α. Distances are measured from the
//! wheel/column contact point.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ModelError, Result};
use crate::params::{validate_pair, ColumnSpec, RobotParams};

/// The geometric subset of [`RobotParams`], free of validation so it can be
/// evaluated at degenerate points (zero diameter, single link).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmGeometry {
    pub link_length: f64,
    pub latch_offset: f64,
    pub contact_standoff: f64,
    pub wheel_radius: f64,
}

impl From<&RobotParams> for ArmGeometry {
    fn from(p: &RobotParams) -> Self {
        Self {
            link_length: p.link_length,
            latch_offset: p.latch_offset,
            contact_standoff: p.contact_standoff,
            wheel_radius: p.wheel_radius,
        }
    }
}

impl ArmGeometry {
    /// α = 2·atan(l / (2·w_b + d_c)).
    pub fn link_angle(&self, diameter: f64) -> f64 {
        2.0 * (self.link_length / (2.0 * self.contact_standoff + diameter)).atan()
    }

    /// Σ_{k=1}^{n-1} sin(kα).
    fn sine_sum(alpha: f64, links: u32) -> f64 {
        (1..links).map(|k| (f64::from(k) * alpha).sin()).sum()
    }

    /// Reach of the arm tip (latch joint) measured along the closure
    /// direction, before subtracting any reference offset.
    fn tip_reach(&self, diameter: f64, links: u32) -> f64 {
        let alpha = self.link_angle(diameter);
        let wrap = f64::from(links) * alpha;
        self.link_length * Self::sine_sum(alpha, links)
            + 0.5 * self.link_length * wrap.sin()
            + self.latch_offset * (wrap - FRAC_PI_2).sin()
    }

    pub fn latch_clearance(&self, diameter: f64, links: u32) -> f64 {
        self.tip_reach(diameter, links) - self.contact_standoff - diameter
    }

    /// COM distance of a standard link, (l/2)·Σ sin(kα) − r_w.
    pub fn link_com_distance(&self, diameter: f64, links: u32) -> f64 {
        let alpha = self.link_angle(diameter);
        0.5 * self.link_length * Self::sine_sum(alpha, links) - self.wheel_radius
    }

    /// COM distance of the end link.
    pub fn end_com_distance(&self, diameter: f64, links: u32) -> f64 {
        self.tip_reach(diameter, links) - self.wheel_radius
    }
}

/// Per-diameter arm layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmConfiguration {
    /// Links per arm.
    pub links: u32,
    /// Inter-link angle [rad].
    pub alpha: f64,
    /// Latch-to-column clearance [m].
    pub latch_clearance: f64,
    /// n·α [rad].
    pub wrap_angle: f64,
}

impl ArmConfiguration {
    /// False when the arm would wrap past the far side of the column.
    pub fn wrap_valid(&self) -> bool {
        self.wrap_angle <= PI
    }
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

pub fn link_angle(params: &RobotParams, column: &ColumnSpec) -> Result<f64> {
    validate_pair(params, column)?;
    Ok(ArmGeometry::from(params).link_angle(column.diameter))
}

/// Latch clearance for `links` links per arm. Negative values mean the arm
/// is too short to close around the column.
pub fn latch_clearance(params: &RobotParams, column: &ColumnSpec, links: u32) -> Result<f64> {
    validate_pair(params, column)?;
    check_links(params, links)?;
    Ok(ArmGeometry::from(params).latch_clearance(column.diameter, links))
}

/// Layout at a fixed link count.
pub fn arm_configuration(
    params: &RobotParams,
    column: &ColumnSpec,
    links: u32,
) -> Result<ArmConfiguration> {
    validate_pair(params, column)?;
    check_links(params, links)?;
    let geom = ArmGeometry::from(params);
    let alpha = geom.link_angle(column.diameter);
    Ok(ArmConfiguration {
        links,
        alpha,
        latch_clearance: geom.latch_clearance(column.diameter, links),
        wrap_angle: f64::from(links) * alpha,
    })
}

/// Smallest link count whose latch clearance reaches `min_latch_clearance`.
pub fn links_for_diameter(params: &RobotParams, column: &ColumnSpec) -> Result<ArmConfiguration> {
    validate_pair(params, column)?;
    let geom = ArmGeometry::from(params);
    let alpha = geom.link_angle(column.diameter);
    (params.min_links..=params.max_links)
        .find_map(|links| {
            let clearance = geom.latch_clearance(column.diameter, links);
            (clearance >= params.min_latch_clearance).then(|| ArmConfiguration {
                links,
                alpha,
                latch_clearance: clearance,
                wrap_angle: f64::from(links) * alpha,
            })
        })
        .ok_or(ModelError::NoSolution {
            diameter: column.diameter,
            cap: params.max_links,
        })
}

pub fn link_com_distance(params: &RobotParams, column: &ColumnSpec, links: u32) -> Result<f64> {
    validate_pair(params, column)?;
    check_links(params, links)?;
    Ok(ArmGeometry::from(params).link_com_distance(column.diameter, links))
}

pub fn end_com_distance(params: &RobotParams, column: &ColumnSpec, links: u32) -> Result<f64> {
    validate_pair(params, column)?;
    check_links(params, links)?;
    Ok(ArmGeometry::from(params).end_com_distance(column.diameter, links))
}

/// Output of the COM model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassDistribution {
    /// |d₁|, the counterweight moment arm [m].
    pub com_offset: f64,
    /// Signed d₁. Negative when the COM sits on the tail side of the wheel.
    pub signed_com_offset: f64,
    /// Total robot mass [kg].
    pub total_mass: f64,
}

/// COM offset d₁ with `tail_weights` modular weights mounted on the tail.
pub fn com_distance_d1(
    params: &RobotParams,
    column: &ColumnSpec,
    links: u32,
    tail_weights: u32,
) -> Result<MassDistribution> {
    validate_pair(params, column)?;
    check_links(params, links)?;
    let geom = ArmGeometry::from(params);
    let d_link = geom.link_com_distance(column.diameter, links);
    let d_end = geom.end_com_distance(column.diameter, links);
    let tail = params.effective_tail_mass(tail_weights);
    let arm_links = 2.0 * f64::from(links - 1) * params.link_mass;

    let moment = arm_links * d_link + params.end_mass * d_end
        - params.body_mass * params.body_com_offset
        - tail * params.tail_com_offset;
    let total_mass = params.body_mass + tail + arm_links + params.end_mass;
    let signed = moment / total_mass;
    Ok(MassDistribution {
        com_offset: signed.abs(),
        signed_com_offset: signed,
        total_mass,
    })
}
