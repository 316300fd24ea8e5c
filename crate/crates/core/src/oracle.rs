//! Independent cross-checks for the closed-form models.
//!
//! Nothing here calls back into the routes it checks: patch integrals use a
//! midpoint grid and an analytic antiderivative instead of the adaptive
//! cubature, and the hanging equilibrium is solved as a linear system
//! instead of through the closed-form threshold and capacity expressions.

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::actuation::patch_polar_moment;
use crate::design::DesignCurve;
use crate::error::ModelError;
use crate::geometry::{com_distance_d1, links_for_diameter};
use crate::params::{ColumnSpec, RobotParams};
use crate::statics::{friction_capacity_at, self_lock_threshold, wrap_cosine};

pub const REFERENCE_GRID_CELLS: usize = 1000;

/// Midpoint-rule value of ∬ √(y² + z²) over a centered `width` × `height`
/// rectangle on a `cells` × `cells` grid.
pub fn midpoint_patch_integral(width: f64, height: f64, cells: usize) -> f64 {
    if width == 0.0 || height == 0.0 || cells == 0 {
        return 0.0;
    }
    let dy = width / cells as f64;
    let dz = height / cells as f64;
    let mut total = 0.0;
    for j in 0..cells {
        let z = -0.5 * height + (j as f64 + 0.5) * dz;
        let row: f64 = (0..cells)
            .map(|i| (-0.5 * width + (i as f64 + 0.5) * dy).hypot(z))
            .sum();
        total += row;
    }
    total * dy * dz
}

/// Midpoint reference on the standard 1000 × 1000 grid.
pub fn reference_patch_integral(width: f64, height: f64) -> f64 {
    midpoint_patch_integral(width, height, REFERENCE_GRID_CELLS)
}

/// Exact value of the same integral.
pub fn closed_form_patch_integral(width: f64, height: f64) -> f64 {
    let (a, b) = (0.5 * width, 0.5 * height);
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let r = a.hypot(b);
    // One quadrant: (1/3)·[a·b·r + (a³/2)·ln((b+r)/a) + (b³/2)·ln((a+r)/b)]
    let quadrant =
        (a * b * r + 0.5 * a.powi(3) * ((b + r) / a).ln() + 0.5 * b.powi(3) * ((a + r) / b).ln())
            / 3.0;
    4.0 * quadrant
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("equilibrium system has no unique solution (frictionless or degenerate contact)")]
    Unsolvable,
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Raw scalars for the hanging-equilibrium solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumInputs {
    pub gravity_force: f64,
    pub tilt: f64,
    /// cos(π − nα).
    pub wrap_cosine: f64,
    pub wheel_friction: f64,
    pub roller_friction: f64,
    /// d₂ [m].
    pub contact_distance: f64,
}

/// Limiting equilibrium: the COM offset at which friction exactly carries
/// the weight, with the forces that go with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    /// Signed d₁; negative on the tail side.
    pub com_offset: f64,
    pub roller_normal: f64,
    pub wheel_normal: f64,
    pub wheel_friction: f64,
}

impl Equilibrium {
    /// F_W + 2·F_R − F_G; zero when the balance is exactly met.
    pub fn slack(&self, inputs: &EquilibriumInputs) -> f64 {
        self.wheel_friction + 2.0 * inputs.roller_friction * self.roller_normal
            - inputs.gravity_force
    }
}

/// Solves, for (d₁, N_R, N_W, F_W):
///
/// ```text
/// F_G·cos γ·d₁ + 2·d₂·(μ_R·cos γ − sin γ·c)·N_R = 0     torque about the wheel contact
/// F_W + 2·μ_R·N_R                             = F_G   vertical balance, F_B = 0
/// N_W − 2·c·N_R                               = 0     roller/wheel normal coupling
/// F_W − μ_W·N_W                               = 0     Coulomb at the wheel
/// ```
pub fn solve_limiting_equilibrium(inputs: &EquilibriumInputs) -> Result<Equilibrium, OracleError> {
    let EquilibriumInputs {
        gravity_force: fg,
        tilt,
        wrap_cosine: c,
        wheel_friction: mu_w,
        roller_friction: mu_r,
        contact_distance: d2,
    } = *inputs;
    let (s, co) = tilt.sin_cos();
    #[rustfmt::skip]
    let a = Matrix4::new(
        fg * co, 2.0 * d2 * (mu_r * co - s * c), 0.0,   0.0,
        0.0,     2.0 * mu_r,                     0.0,   1.0,
        0.0,     -2.0 * c,                       1.0,   0.0,
        0.0,     0.0,                            -mu_w, 1.0,
    );
    let b = Vector4::new(0.0, fg, 0.0, 0.0);
    let x = a.lu().solve(&b).ok_or(OracleError::Unsolvable)?;
    let residual = (a * x - b).norm();
    if !x.iter().all(|v| v.is_finite()) || residual > 1e-9 * b.norm() {
        return Err(OracleError::Unsolvable);
    }
    Ok(Equilibrium {
        com_offset: x[0],
        roller_normal: x[1],
        wheel_normal: x[2],
        wheel_friction: x[3],
    })
}

/// A randomized valid robot, column and link count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomScenario {
    pub params: RobotParams,
    pub column: ColumnSpec,
    pub links: u32,
    pub seed: u64,
    pub index: u64,
}

const MIN_DENOMINATOR: f64 = 1e-6;

impl RandomScenario {
    /// Scenario `index` of the stream selected by `seed`.
    pub fn draw(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        loop {
            let mut p = RobotParams::baseline();
            p.body_mass = rng.random_range(0.5..5.0);
            p.tail_mass = rng.random_range(0.5..6.0);
            p.link_mass = rng.random_range(0.05..0.5);
            p.end_mass = rng.random_range(0.1..1.5);
            p.tail_weight_mass = rng.random_range(0.05..0.5);
            p.body_com_offset = rng.random_range(0.05..0.3);
            p.tail_com_offset = rng.random_range(0.1..0.5);
            p.link_length = rng.random_range(0.03..0.12);
            p.latch_offset = rng.random_range(0.003..0.03);
            p.contact_standoff = rng.random_range(0.005..0.04);
            p.wheel_radius = rng.random_range(0.02..0.06);
            p.wheel_width = rng.random_range(0.01..0.05);
            p.rubber_modulus = rng.random_range(0.3e6..5e6);
            p.wheel_friction = rng.random_range(0.2..1.5);
            p.roller_friction = rng.random_range(0.1..1.2);
            p.tilt = rng.random_range(0.02..1.2);
            p.desired_accel = rng.random_range(0.1..3.0);
            p.drive_ratio = rng.random_range(0.3..5.0);
            p.turret_ratio = rng.random_range(1.0..10.0);
            let column = ColumnSpec::new(rng.random_range(0.04..0.6));
            let links = rng.random_range(p.min_links..=10);

            let c = wrap_cosine(&p, &column, links);
            let lock_den = p.wheel_friction * c + p.roller_friction;
            let cap_den = p.tilt.tan() * c - p.roller_friction;
            if lock_den.abs() > MIN_DENOMINATOR && cap_den.abs() > MIN_DENOMINATOR {
                return Self {
                    params: p,
                    column,
                    links,
                    seed,
                    index,
                };
            }
        }
    }

    pub fn equilibrium_inputs(&self) -> Result<EquilibriumInputs, OracleError> {
        let mass = com_distance_d1(&self.params, &self.column, self.links, 0)?;
        Ok(EquilibriumInputs {
            gravity_force: mass.total_mass * self.params.gravity,
            tilt: self.params.tilt,
            wrap_cosine: wrap_cosine(&self.params, &self.column, self.links),
            wheel_friction: self.params.wheel_friction,
            roller_friction: self.params.roller_friction,
            contact_distance: self.column.diameter,
        })
    }
}

/// Largest relative disagreement between the linear solve and the closed
/// forms for the self-lock threshold, wheel normal force and |F_W|.
pub fn equilibrium_crosscheck(scenario: &RandomScenario) -> Result<f64, OracleError> {
    let inputs = scenario.equilibrium_inputs()?;
    let eq = solve_limiting_equilibrium(&inputs)?;
    let (p, col, n) = (&scenario.params, &scenario.column, scenario.links);

    let threshold = self_lock_threshold(p, col, n)?;
    let d1 = eq.com_offset.abs();
    let mass = inputs.gravity_force / p.gravity;
    let load = friction_capacity_at(p, col, n, d1, mass)?;

    Ok([
        rel_diff(d1, threshold),
        rel_diff(eq.wheel_normal.abs(), load.normal_force),
        rel_diff(eq.wheel_friction.abs(), load.friction_capacity),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

#[derive(Debug, Default)]
pub struct BatchSummary {
    pub cases: usize,
    pub max_discrepancy: f64,
    /// Scenarios whose check could not be evaluated, with the reason.
    pub failures: Vec<(u64, String)>,
}

impl BatchSummary {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.failures.is_empty() && self.max_discrepancy <= tolerance
    }
}

pub fn equilibrium_batch(seed: u64, cases: usize) -> BatchSummary {
    let mut summary = BatchSummary {
        cases,
        ..Default::default()
    };
    for index in 0..cases as u64 {
        match equilibrium_crosscheck(&RandomScenario::draw(seed, index)) {
            Ok(d) => summary.max_discrepancy = summary.max_discrepancy.max(d),
            Err(e) => summary.failures.push((index, e.to_string())),
        }
    }
    summary
}

/// Random patch dimensions [m] in the range a loaded drive wheel produces.
pub fn random_patch(seed: u64, index: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    rng.set_stream(index);
    (rng.random_range(0.005..0.08), rng.random_range(1e-4..0.05))
}

/// Adaptive cubature against the midpoint reference and the closed form.
pub fn patch_batch(seed: u64, cases: usize) -> BatchSummary {
    let mut summary = BatchSummary {
        cases,
        ..Default::default()
    };
    for index in 0..cases as u64 {
        let (w, h) = random_patch(seed, index);
        match patch_polar_moment(w, h) {
            Ok(q) => {
                let d = rel_diff(q, reference_patch_integral(w, h))
                    .max(rel_diff(q, closed_form_patch_integral(w, h)));
                summary.max_discrepancy = summary.max_discrepancy.max(d);
            }
            Err(e) => summary.failures.push((index, e.to_string())),
        }
    }
    summary
}

/// Grid diameters where the link count drops relative to the previous one.
pub fn link_count_drops(params: &RobotParams, diameters: &[f64]) -> Result<Vec<f64>, ModelError> {
    let mut drops = Vec::new();
    let mut prev = None;
    for &d in diameters {
        let n = links_for_diameter(params, &ColumnSpec::new(d))?.links;
        if prev.is_some_and(|p| n < p) {
            drops.push(d);
        }
        prev = Some(n);
    }
    Ok(drops)
}

/// Every way a sweep breaks the torque staircase: a torque or mass decrease,
/// a link or weight count decrease, a torque change with no recorded
/// addition, or an addition with no torque change.
pub fn staircase_violations(curve: &DesignCurve) -> Vec<String> {
    let mut out = Vec::new();
    for pair in curve.points.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let at = b.diameter * 1e3;
        if b.drive_torque < a.drive_torque || b.total_mass < a.total_mass {
            out.push(format!("{at:.3} mm: torque or mass decreased"));
        }
        if b.links < a.links || b.tail_weights < a.tail_weights {
            out.push(format!("{at:.3} mm: link or weight count decreased"));
        }
        let stepped = b.links != a.links || b.tail_weights != a.tail_weights;
        let jumped = b.drive_torque != a.drive_torque;
        if stepped != jumped {
            out.push(format!(
                "{at:.3} mm: torque jump and addition do not coincide"
            ));
        }
        let recorded = curve.link_addition_diameters.contains(&b.diameter)
            || curve.weight_addition_diameters.contains(&b.diameter);
        if stepped != recorded {
            out.push(format!("{at:.3} mm: addition missing from the ledger"));
        }
    }
    out
}
