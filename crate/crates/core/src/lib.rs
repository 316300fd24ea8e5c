//! Design evaluation for modular wheeled-grasping column-climbing robots.
//!
//! The robot grips a column with two tendon-driven arms built from
//! identical modular links and climbs on a single driven wheel mounted on
//! a turret. A cantilevered tail with optional modular weights shifts the
//! center of mass away from the column so the robot can hang by friction
//! alone. This crate evaluates a design against a column diameter:
//!
//! - [`geometry`]: link angle, latch clearance, link count, COM offset.
//! - [`statics`]: self-locking threshold and wheel friction capacity.
//! - [`actuation`]: drive and turret torque, motor margins.
//! - [`design`]: per-diameter synthesis and diameter sweeps.
//! - [`oracle`]: independent cross-checks used by tests and `verify`.
//! - [`config`] and [`cli`]: file formats and the command-line tool.
//!
//! All quantities are SI internally.

pub mod actuation;
pub mod cli;
pub mod config;
pub mod design;
pub mod error;
pub mod geometry;
pub mod numfmt;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod statics;

pub use actuation::{ActuationReport, MotorSpec};
pub use design::{DesignCurve, DesignPoint, MotorPair};
pub use error::ModelError;
pub use geometry::ArmConfiguration;
pub use params::{ColumnSpec, RobotParams};
pub use statics::StaticsReport;
