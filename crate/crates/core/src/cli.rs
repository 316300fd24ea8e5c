//! Command-line front end.
//!
//! Exit codes: 0 feasible/pass, 1 infeasible/fail (the full report is still
//! written), 2 usage or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::actuation::{motor_margin, read_motor_catalog, MotorSpec};
use crate::config::{key_help, parse_document, ConfigDocument};
use crate::design::{
    design_with_ballast, evaluate_configuration, sweep_with, DesignCurve, DesignPoint, MotorPair,
    SweepOptions,
};
use crate::error::ModelError;
use crate::numfmt::sig6;
use crate::oracle::{equilibrium_batch, patch_batch};
use crate::params::ColumnSpec;
use crate::statics::self_lock_check;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const SWEEP_HEADER: &str =
    "d_c_mm,n,k_tw,d1_mm,total_mass_kg,tau_drive_nm,tau_turret_nm,self_lock,no_slip,torque_ok,feasible";

pub const MOTORS_HEADER: &str =
    "d_c_mm,role,motor,required_nm,rated_nm,margin_nm,pass,climb_speed_mm_s";

/// Column diameters checked by `motors` when none are given [mm].
pub const TEST_DIAMETERS_MM: [f64; 3] = [90.0, 170.0, 220.0];

const EQUILIBRIUM_TOLERANCE: f64 = 1e-9;
const PATCH_TOLERANCE: f64 = 1e-6;

fn units_help() -> String {
    format!(
        "Units: config lengths and all --diameter/--min/--max/--step values are in mm; \
         masses in kg, angles in rad, E_rubber in MPa. Everything is converted to SI internally.\n\n\
         Config keys:\n{}",
        key_help()
    )
}

#[derive(Debug, Parser)]
#[command(
    name = "climber-design",
    version,
    about = "Design evaluation for modular wheeled-grasping column-climbing robots",
    after_help = units_help()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize and check the design at one column diameter.
    Check(PointArgs),
    /// Self-lock force balance at one column diameter.
    Selflock(PointArgs),
    /// Design sweep over a diameter range, written as CSV.
    Sweep(SweepArgs),
    /// Check every catalog motor against the drive and turret requirements.
    Motors(MotorsArgs),
    /// Run the randomized oracle cross-checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// Robot config file (`key = value`, lengths in mm).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Column diameter [mm].
    #[arg(long, value_name = "MM", allow_negative_numbers = true)]
    diameter: f64,
    /// Fix the link count instead of searching for it.
    #[arg(long, value_name = "N")]
    links: Option<u32>,
    /// Fix the tail-weight count instead of searching for it.
    #[arg(long, value_name = "K")]
    tail_weights: Option<u32>,
    /// Motor catalog; rows named `drive` and `turret` replace the built-in motors.
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, value_name = "MM", allow_negative_numbers = true)]
    min: Option<f64>,
    #[arg(long, value_name = "MM", allow_negative_numbers = true)]
    max: Option<f64>,
    #[arg(long, value_name = "MM", allow_negative_numbers = true)]
    step: Option<f64>,
    /// Write the CSV here; the summary then goes to standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
    /// Never add tail weights.
    #[arg(long)]
    no_ballast: bool,
}

#[derive(Debug, Args)]
struct MotorsArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, value_name = "PATH")]
    catalog: PathBuf,
    /// Diameters to check [mm]; repeatable. Defaults to 90, 170 and 220.
    #[arg(long = "diameter", value_name = "MM")]
    diameters: Vec<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Randomized equilibrium scenarios.
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    /// Randomized contact patches (each costs a 10⁶-point reference).
    #[arg(long, default_value_t = 100)]
    patches: usize,
}

/// Error that terminates a command with a specific exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::InvalidParameter { .. } | ModelError::InvalidRange(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a, out),
        Command::Selflock(a) => cmd_selflock(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Motors(a) => cmd_motors(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_config(arg: &ConfigArg) -> Result<ConfigDocument, Failure> {
    let text = fs::read_to_string(&arg.config)
        .map_err(|e| Failure::usage(format!("{}: {e}", arg.config.display())))?;
    parse_document(&text).map_err(|e| Failure::usage(format!("{}: {e}", arg.config.display())))
}

fn load_catalog(path: &Path) -> Result<Vec<MotorSpec>, Failure> {
    let file =
        fs::File::open(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    read_motor_catalog(file).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn motor_pair(catalog: Option<&Path>) -> Result<MotorPair, Failure> {
    let mut pair = MotorPair::default();
    if let Some(path) = catalog {
        for motor in load_catalog(path)? {
            match motor.name.as_str() {
                "drive" => pair.drive = motor,
                "turret" => pair.turret = motor,
                _ => {}
            }
        }
    }
    Ok(pair)
}

fn column_mm(diameter_mm: f64) -> Result<ColumnSpec, Failure> {
    let column = ColumnSpec::from_mm(diameter_mm);
    column.validate()?;
    Ok(column)
}

fn design_point(
    doc: &ConfigDocument,
    a: &PointArgs,
    motors: &MotorPair,
) -> Result<DesignPoint, Failure> {
    let column = column_mm(a.diameter)?;
    let p = &doc.params;
    let point = match (a.links, a.tail_weights) {
        (None, None) => design_with_ballast(p, &column, motors, 0, true)?,
        (None, Some(k)) => design_with_ballast(p, &column, motors, k, false)?,
        (Some(n), k) => evaluate_configuration(p, &column, n, k.unwrap_or(0), motors)?,
    };
    Ok(point)
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn cmd_check(a: &PointArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let doc = load_config(&a.config)?;
    let motors = motor_pair(a.catalog.as_deref())?;
    let pt = design_point(&doc, a, &motors)?;
    let mm = |x: f64| sig6(x * 1e3);
    writeln!(out, "config_fingerprint: {}", doc.fingerprint())?;
    writeln!(out, "diameter_mm: {}", mm(pt.diameter))?;
    writeln!(out, "links: {}", pt.links)?;
    writeln!(out, "tail_weights: {}", pt.tail_weights)?;
    writeln!(out, "wrap_valid: {}", flag(pt.wrap_valid))?;
    writeln!(out, "d1_mm: {}", mm(pt.com_offset))?;
    writeln!(out, "lock_threshold_mm: {}", mm(pt.lock_threshold))?;
    writeln!(out, "total_mass_kg: {}", sig6(pt.total_mass))?;
    writeln!(out, "drive_force_n: {}", sig6(pt.drive_force))?;
    writeln!(out, "wheel_capacity_n: {}", sig6(pt.wheel_capacity))?;
    writeln!(out, "wheel_normal_n: {}", sig6(pt.wheel_normal))?;
    writeln!(
        out,
        "tau_drive_nm: {} (rated {})",
        sig6(pt.drive_torque),
        sig6(motors.drive.rated_torque)
    )?;
    writeln!(
        out,
        "tau_turret_nm: {} (rated {})",
        sig6(pt.turret_torque),
        sig6(motors.turret.rated_torque)
    )?;
    writeln!(out, "margin_self_lock_mm: {}", mm(pt.margins.self_lock))?;
    writeln!(out, "margin_no_slip_n: {}", sig6(pt.margins.no_slip))?;
    writeln!(out, "margin_drive_nm: {}", sig6(pt.margins.drive_torque))?;
    writeln!(out, "margin_turret_nm: {}", sig6(pt.margins.turret_torque))?;
    if let Some(cause) = pt.ballast_cause {
        writeln!(out, "ballast_cause: {}", cause.label())?;
    }
    writeln!(out, "self_lock: {}", flag(pt.self_lock_ok))?;
    writeln!(out, "no_slip: {}", flag(pt.no_slip_ok))?;
    writeln!(out, "torque_ok: {}", flag(pt.torque_ok))?;
    writeln!(out, "feasible: {}", flag(pt.feasible))?;
    Ok(if pt.feasible { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_selflock(a: &PointArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let doc = load_config(&a.config)?;
    let motors = motor_pair(a.catalog.as_deref())?;
    let pt = design_point(&doc, a, &motors)?;
    let column = column_mm(a.diameter)?;
    let r = self_lock_check(&doc.params, &column, pt.links, pt.tail_weights)?;
    let mm = |x: f64| sig6(x * 1e3);
    writeln!(out, "config_fingerprint: {}", doc.fingerprint())?;
    writeln!(out, "diameter_mm: {}", mm(column.diameter))?;
    writeln!(out, "links: {}", r.links)?;
    writeln!(out, "tail_weights: {}", r.tail_weights)?;
    writeln!(out, "F_G_n: {}", sig6(r.gravity_force))?;
    writeln!(out, "N_W_n: {}", sig6(r.wheel_normal))?;
    writeln!(out, "N_R_n: {}", sig6(r.roller_normal))?;
    writeln!(out, "F_W_n: {}", sig6(r.wheel_friction))?;
    writeln!(out, "F_R_n: {}", sig6(r.roller_friction))?;
    writeln!(out, "F_B_n: {}", sig6(r.ball_transfer_friction))?;
    writeln!(out, "d1_mm: {}", mm(r.com_offset))?;
    writeln!(out, "d2_mm: {}", mm(r.contact_distance))?;
    writeln!(out, "d1_threshold_mm: {}", mm(r.lock_threshold))?;
    writeln!(out, "lock_slack_n: {}", sig6(r.lock_slack))?;
    writeln!(out, "denominator_sign: {}", r.denominator_sign)?;
    writeln!(out, "self_lock: {}", flag(r.self_lock_ok))?;
    Ok(if r.self_lock_ok { EXIT_PASS } else { EXIT_FAIL })
}

/// Renders a sweep as CSV with the fixed column order.
pub fn sweep_csv(curve: &DesignCurve) -> String {
    let mut s = String::with_capacity(64 * (curve.points.len() + 1));
    s.push_str(SWEEP_HEADER);
    s.push('\n');
    for p in &curve.points {
        let fields = [
            sig6(p.diameter * 1e3),
            p.links.to_string(),
            p.tail_weights.to_string(),
            sig6(p.com_offset * 1e3),
            sig6(p.total_mass),
            sig6(p.drive_torque),
            sig6(p.turret_torque),
            flag(p.self_lock_ok).into(),
            flag(p.no_slip_ok).into(),
            flag(p.torque_ok).into(),
            flag(p.feasible).into(),
        ];
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let doc = load_config(&a.config)?;
    let motors = motor_pair(a.catalog.as_deref())?;
    let min = a.min.map_or(doc.sweep.min, |v| v * 1e-3);
    let max = a.max.map_or(doc.sweep.max, |v| v * 1e-3);
    let step = a.step.map_or(doc.sweep.step, |v| v * 1e-3);
    let options = SweepOptions {
        remediate_ballast: !a.no_ballast,
    };
    let curve = sweep_with(&doc.params, min, max, step, &motors, options)?;
    let csv = sweep_csv(&curve);

    let summary: &mut dyn Write = match &a.out {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            out
        }
        None => {
            out.write_all(csv.as_bytes())?;
            err
        }
    };
    let mm_list = |v: &[f64]| {
        v.iter()
            .map(|d| sig6(d * 1e3))
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(summary, "config_fingerprint: {}", doc.fingerprint())?;
    writeln!(summary, "points: {}", curve.points.len())?;
    match curve.max_climbable_diameter {
        Some(d) => writeln!(summary, "max_climbable_diameter_mm: {}", sig6(d * 1e3))?,
        None => writeln!(summary, "max_climbable_diameter_mm: none")?,
    }
    writeln!(
        summary,
        "link_additions_mm: {}",
        mm_list(&curve.link_addition_diameters)
    )?;
    writeln!(
        summary,
        "weight_additions_mm: {}",
        mm_list(&curve.weight_addition_diameters)
    )?;
    for w in &curve.weight_additions {
        writeln!(
            summary,
            "  {} mm: k_tw {} -> {} ({})",
            sig6(w.diameter * 1e3),
            w.from,
            w.to,
            w.cause.map_or("carried", |c| c.label())
        )?;
    }
    Ok(if curve.max_climbable_diameter.is_some() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn cmd_motors(a: &MotorsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let doc = load_config(&a.config)?;
    let catalog = load_catalog(&a.catalog)?;
    if catalog.is_empty() {
        return Err(Failure::usage("motor catalog is empty"));
    }
    let diameters: Vec<f64> = if a.diameters.is_empty() {
        TEST_DIAMETERS_MM.to_vec()
    } else {
        a.diameters.clone()
    };
    // Requirements do not depend on which motors are installed.
    let mut requirements = Vec::new();
    for &d in &diameters {
        let column = column_mm(d)?;
        let pt = design_with_ballast(&doc.params, &column, &MotorPair::default(), 0, true)?;
        requirements.push((d, pt));
    }

    writeln!(out, "# config_fingerprint: {}", doc.fingerprint())?;
    writeln!(out, "{MOTORS_HEADER}")?;
    let mut drive_ok = vec![true; catalog.len()];
    let mut turret_ok = vec![true; catalog.len()];
    for (d, pt) in &requirements {
        for (i, motor) in catalog.iter().enumerate() {
            for (role, required, ok) in [
                ("drive", pt.drive_torque, &mut drive_ok[i]),
                ("turret", pt.turret_torque, &mut turret_ok[i]),
            ] {
                let check = motor_margin(required, motor);
                *ok &= check.pass;
                writeln!(
                    out,
                    "{},{role},{},{},{},{},{},{}",
                    sig6(*d),
                    motor.name,
                    sig6(required),
                    sig6(motor.rated_torque),
                    sig6(check.margin),
                    flag(check.pass),
                    sig6(motor.climb_speed(doc.params.wheel_radius) * 1e3),
                )?;
            }
        }
    }
    let pass = drive_ok.iter().any(|&b| b) && turret_ok.iter().any(|&b| b);
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let doc = load_config(&a.config)?;
    let eq = equilibrium_batch(a.seed, a.cases);
    let patches = patch_batch(a.seed, a.patches);
    writeln!(out, "config_fingerprint: {}", doc.fingerprint())?;
    writeln!(out, "seed: {}", a.seed)?;
    writeln!(
        out,
        "equilibrium: cases={} max_rel_discrepancy={:e} tolerance={:e} failures={} pass={}",
        eq.cases,
        eq.max_discrepancy,
        EQUILIBRIUM_TOLERANCE,
        eq.failures.len(),
        flag(eq.passes(EQUILIBRIUM_TOLERANCE))
    )?;
    for (i, why) in &eq.failures {
        writeln!(out, "  scenario {i}: {why}")?;
    }
    writeln!(
        out,
        "patch_integral: cases={} max_rel_discrepancy={:e} tolerance={:e} failures={} pass={}",
        patches.cases,
        patches.max_discrepancy,
        PATCH_TOLERANCE,
        patches.failures.len(),
        flag(patches.passes(PATCH_TOLERANCE))
    )?;
    for (i, why) in &patches.failures {
        writeln!(out, "  patch {i}: {why}")?;
    }
    let pass = eq.passes(EQUILIBRIUM_TOLERANCE) && patches.passes(PATCH_TOLERANCE);
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}
