//! `key = value` configuration files.
//!
//! Lengths are written in millimetres, masses in kilograms, angles in
//! radians and the rubber modulus in megapascals; everything is converted
//! to SI on ingestion. `#` starts a comment. Values may be decimals or a
//! simple ratio such as `8/3`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::error::ModelError;
use crate::params::{
    RobotParams, DEFAULT_CONTACT_STANDOFF, DEFAULT_MAX_LINKS, DEFAULT_MAX_TAIL_WEIGHTS,
    DEFAULT_MIN_LATCH_CLEARANCE, DEFAULT_MIN_LINKS,
};

/// The shipped reference config (`configs/table3.cfg`).
pub const REFERENCE_CONFIG: &str = include_str!("../configs/table3.cfg");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Millimetre,
    Kilogram,
    Radian,
    Megapascal,
    Newton,
    Ratio,
    Acceleration,
    Count,
}

impl Unit {
    fn to_si(self, value: f64) -> f64 {
        match self {
            Unit::Millimetre => value * 1e-3,
            Unit::Megapascal => value * 1e6,
            _ => value,
        }
    }

    fn to_file_units(self, value: f64) -> f64 {
        match self {
            Unit::Millimetre => value * 1e3,
            Unit::Megapascal => value * 1e-6,
            _ => value,
        }
    }
}

struct KeySpec {
    key: &'static str,
    unit: Unit,
    /// Documented default in file units; `None` means required.
    default: Option<f64>,
}

const fn req(key: &'static str, unit: Unit) -> KeySpec {
    KeySpec {
        key,
        unit,
        default: None,
    }
}

const fn opt(key: &'static str, unit: Unit, default: f64) -> KeySpec {
    KeySpec {
        key,
        unit,
        default: Some(default),
    }
}

const KEYS: &[KeySpec] = &[
    req("m_b", Unit::Kilogram),
    req("m_t", Unit::Kilogram),
    req("m_link", Unit::Kilogram),
    req("m_end", Unit::Kilogram),
    req("m_tw", Unit::Kilogram),
    req("d_b", Unit::Millimetre),
    req("d_t", Unit::Millimetre),
    req("mu_W", Unit::Ratio),
    req("mu_R", Unit::Ratio),
    req("gamma", Unit::Radian),
    req("l", Unit::Millimetre),
    req("w_latch", Unit::Millimetre),
    req("r_w", Unit::Millimetre),
    req("a_d", Unit::Acceleration),
    req("G_dr", Unit::Ratio),
    req("G_turret", Unit::Ratio),
    req("E_rubber", Unit::Megapascal),
    req("l_w", Unit::Millimetre),
    req("g", Unit::Acceleration),
    opt("w_b", Unit::Millimetre, DEFAULT_CONTACT_STANDOFF * 1e3),
    opt(
        "c_latch_min",
        Unit::Millimetre,
        DEFAULT_MIN_LATCH_CLEARANCE * 1e3,
    ),
    opt("F_B_aggregate", Unit::Newton, 0.0),
    opt("n_min", Unit::Count, DEFAULT_MIN_LINKS as f64),
    opt("n_max", Unit::Count, DEFAULT_MAX_LINKS as f64),
    opt("k_tw_max", Unit::Count, DEFAULT_MAX_TAIL_WEIGHTS as f64),
    opt("sweep_min", Unit::Millimetre, 60.0),
    opt("sweep_max", Unit::Millimetre, 400.0),
    opt("sweep_step", Unit::Millimetre, 5.0),
];

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required keys: {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

/// Sweep range carried in the config [m].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepDefaults {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

/// Parsed and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigDocument {
    pub params: RobotParams,
    pub sweep: SweepDefaults,
}

fn parse_number(text: &str) -> Option<f64> {
    let value = match text.split_once('/') {
        Some((num, den)) => num.trim().parse::<f64>().ok()? / den.trim().parse::<f64>().ok()?,
        None => text.parse::<f64>().ok()?,
    };
    value.is_finite().then_some(value)
}

pub fn parse_document(text: &str) -> Result<ConfigDocument, ConfigError> {
    let mut raw: BTreeMap<&'static str, f64> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let spec = KEYS
            .iter()
            .find(|s| s.key == key)
            .ok_or_else(|| ConfigError::UnknownKey {
                line: line_no,
                key: key.to_string(),
            })?;
        let number = parse_number(value).ok_or_else(|| ConfigError::Parse {
            line: line_no,
            message: format!("`{key}`: cannot parse `{value}` as a number"),
        })?;
        if spec.unit == Unit::Count && (number < 0.0 || number.fract() != 0.0) {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("`{key}` must be a non-negative integer, got `{value}`"),
            });
        }
        if raw.insert(spec.key, number).is_some() {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                key: key.to_string(),
            });
        }
    }

    let missing: Vec<String> = KEYS
        .iter()
        .filter(|s| s.default.is_none() && !raw.contains_key(s.key))
        .map(|s| s.key.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::Missing(missing));
    }

    let get = |key: &str| -> f64 {
        let spec = KEYS.iter().find(|s| s.key == key).expect("known key");
        let v = raw
            .get(key)
            .copied()
            .or(spec.default)
            .expect("checked above");
        spec.unit.to_si(v)
    };
    let count = |key: &str| -> u32 { get(key).min(u32::MAX as f64) as u32 };

    let params = RobotParams {
        body_mass: get("m_b"),
        tail_mass: get("m_t"),
        link_mass: get("m_link"),
        end_mass: get("m_end"),
        tail_weight_mass: get("m_tw"),
        body_com_offset: get("d_b"),
        tail_com_offset: get("d_t"),
        link_length: get("l"),
        latch_offset: get("w_latch"),
        contact_standoff: get("w_b"),
        wheel_radius: get("r_w"),
        wheel_width: get("l_w"),
        rubber_modulus: get("E_rubber"),
        wheel_friction: get("mu_W"),
        roller_friction: get("mu_R"),
        tilt: get("gamma"),
        desired_accel: get("a_d"),
        gravity: get("g"),
        drive_ratio: get("G_dr"),
        turret_ratio: get("G_turret"),
        ball_transfer_friction: get("F_B_aggregate"),
        min_latch_clearance: get("c_latch_min"),
        min_links: count("n_min"),
        max_links: count("n_max"),
        max_tail_weights: count("k_tw_max"),
    };
    params.validate()?;
    let sweep = SweepDefaults {
        min: get("sweep_min"),
        max: get("sweep_max"),
        step: get("sweep_step"),
    };
    Ok(ConfigDocument { params, sweep })
}

/// Parses and validates a config, returning SI parameters.
pub fn parse_config(text: &str) -> Result<RobotParams, ConfigError> {
    parse_document(text).map(|doc| doc.params)
}

impl ConfigDocument {
    /// Normalized `key=value` lines in file units, sorted by key.
    pub fn normalized(&self) -> String {
        let p = &self.params;
        let values: BTreeMap<&str, f64> = [
            ("m_b", p.body_mass),
            ("m_t", p.tail_mass),
            ("m_link", p.link_mass),
            ("m_end", p.end_mass),
            ("m_tw", p.tail_weight_mass),
            ("d_b", p.body_com_offset),
            ("d_t", p.tail_com_offset),
            ("mu_W", p.wheel_friction),
            ("mu_R", p.roller_friction),
            ("gamma", p.tilt),
            ("l", p.link_length),
            ("w_latch", p.latch_offset),
            ("r_w", p.wheel_radius),
            ("a_d", p.desired_accel),
            ("G_dr", p.drive_ratio),
            ("G_turret", p.turret_ratio),
            ("E_rubber", p.rubber_modulus),
            ("l_w", p.wheel_width),
            ("g", p.gravity),
            ("w_b", p.contact_standoff),
            ("c_latch_min", p.min_latch_clearance),
            ("F_B_aggregate", p.ball_transfer_friction),
            ("n_min", f64::from(p.min_links)),
            ("n_max", f64::from(p.max_links)),
            ("k_tw_max", f64::from(p.max_tail_weights)),
            ("sweep_min", self.sweep.min),
            ("sweep_max", self.sweep.max),
            ("sweep_step", self.sweep.step),
        ]
        .into_iter()
        .collect();
        let mut out = String::new();
        for (key, si) in values {
            let unit = KEYS.iter().find(|s| s.key == key).expect("known key").unit;
            let _ = writeln!(out, "{key}={:?}", unit.to_file_units(si));
        }
        out
    }

    /// First 16 hex digits of the SHA-256 of [`Self::normalized`].
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.normalized().as_bytes());
        digest.iter().take(8).fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Human-readable description of the config keys and units.
pub fn key_help() -> String {
    let mut out = String::new();
    for spec in KEYS {
        let unit = match spec.unit {
            Unit::Millimetre => "mm",
            Unit::Kilogram => "kg",
            Unit::Radian => "rad",
            Unit::Megapascal => "MPa",
            Unit::Newton => "N",
            Unit::Ratio => "-",
            Unit::Acceleration => "m/s^2",
            Unit::Count => "count",
        };
        let _ = match spec.default {
            Some(d) => writeln!(out, "  {:<14} [{unit}] default {d}", spec.key),
            None => writeln!(out, "  {:<14} [{unit}] required", spec.key),
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHIPPED: &str = REFERENCE_CONFIG;

    #[test]
    fn shipped_config_is_baseline() {
        let doc = parse_document(SHIPPED).unwrap();
        let base = RobotParams::baseline();
        let p = doc.params;
        // mm → m conversion may differ from the literal in the last ulp.
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-15 * b.abs().max(1.0);
        assert!(close(p.body_mass, base.body_mass));
        assert!(close(p.body_com_offset, base.body_com_offset));
        assert!(close(p.tail_com_offset, base.tail_com_offset));
        assert!(close(p.wheel_width, 0.032));
        assert!(close(p.turret_ratio, 8.0 / 3.0));
        assert!(close(p.rubber_modulus, 0.7e6));
        assert!(close(p.contact_standoff, 0.020));
        assert_eq!(p.min_links, 2);
        assert_eq!(p.max_tail_weights, 8);
        assert!(close(doc.sweep.step, 0.005));
    }

    #[test]
    fn empty_file_lists_every_required_key() {
        let ConfigError::Missing(keys) = parse_config("").unwrap_err() else {
            panic!("expected missing keys");
        };
        assert_eq!(keys.len(), 19);
        assert!(keys.contains(&"m_b".to_string()) && keys.contains(&"g".to_string()));
    }

    #[test]
    fn friction_range_violation_is_reported() {
        let text = SHIPPED.replace("mu_W = 0.7", "mu_W = -0.1");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Invalid(ModelError::InvalidParameter { name: "mu_W", .. })
        ));
        assert!(err.to_string().contains("(0, 2]"));
    }

    #[test]
    fn line_numbered_errors() {
        let err = parse_config("# header\nm_b 1.0\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::Parse {
                line: 2,
                message: "expected `key = value`, got `m_b 1.0`".into()
            }
        );
        let err = parse_config("bogus = 1\n").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { line: 1, .. }));
        let err = parse_config("m_b = 1\nm_b = 2\n").unwrap_err();
        assert!(matches!(err, ConfigError::DuplicateKey { line: 2, .. }));
        let err = parse_config("m_b = abc\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }));
        let err = parse_config("n_min = 2.5\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }));
    }

    #[test]
    fn fingerprint_ignores_formatting() {
        let a = parse_document(SHIPPED).unwrap();
        let reformatted = SHIPPED.replace("G_turret = 8/3", "G_turret=8/3   # ratio");
        let b = parse_document(&reformatted).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
        let c = parse_document(&SHIPPED.replace("w_b = 20", "w_b = 33")).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }
}
