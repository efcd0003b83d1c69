//! Run configuration files.
//!
//! Flat key-value text grouped in sections, SI units, one quantity per key:
//!
//! ```text
//! [params]
//! M = 1
//! m = 0.1
//! ...
//! [initial]
//! psi = pi
//! theta = pi/4
//! ```
//!
//! `#` and `;` start comments. Numeric values may be written with the token
//! `pi`, as in `pi`, `-pi/2`, `3*pi/4`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use thiserror::Error;
use wmr_pendulum::sim::EventTolerances;
use wmr_pendulum::{model, ControlMode, FullVelocityState, Gains, Params, Scenario, SwingUpLaw};

use crate::output::Column;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse {
        line: usize,
        key: Option<String>,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub out_dir: PathBuf,
    pub columns: Vec<Column>,
    /// Compute trajectory residuals for the summary.
    pub diagnostics: bool,
    pub events: EventTolerances,
}

impl RunConfig {
    /// Re-checks every invariant, e.g. after command-line overrides.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scenario
            .validate()
            .map_err(|e| ConfigError::Validation(e.to_string()))?;
        let ev = &self.events;
        if !(ev.energy > 0.0 && ev.upright > 0.0 && ev.origin > 0.0) {
            return Err(ConfigError::Validation(
                "event tolerances must be positive".into(),
            ));
        }
        if self.columns.is_empty() {
            return Err(ConfigError::Validation("no output columns selected".into()));
        }
        Ok(())
    }
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("params", &["M", "m", "J", "l", "g", "d", "R"]),
    (
        "gains",
        &["k_E", "k_p", "k_v", "k_psi", "k_psi_dot", "eps_origin"],
    ),
    (
        "initial",
        &[
            "x",
            "y",
            "psi",
            "x_dot",
            "y_dot",
            "psi_dot",
            "theta",
            "theta_dot",
        ],
    ),
    (
        "sim",
        &[
            "dt",
            "t_final",
            "mode",
            "sample_period",
            "printed_eq24",
            "constraint_tol",
        ],
    ),
    ("output", &["dir", "columns", "diagnostics"]),
    ("events", &["energy_tol", "upright_tol", "origin_radius"]),
];

struct Entry {
    line: usize,
    value: String,
}

struct Table {
    entries: BTreeMap<(String, String), Entry>,
}

impl Table {
    fn raw(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn number(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.raw(section, key) {
            None => Ok(None),
            Some(e) => parse_number(&e.value)
                .map(Some)
                .ok_or_else(|| ConfigError::Parse {
                    line: e.line,
                    key: Some(key.to_string()),
                    message: format!("`{key}` is not a number: `{}`", e.value),
                }),
        }
    }

    fn required(&self, section: &str, key: &str) -> Result<f64, ConfigError> {
        self.number(section, key)?.ok_or_else(|| {
            ConfigError::Validation(format!("missing required key `{key}` in [{section}]"))
        })
    }

    fn or(&self, section: &str, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.number(section, key)?.unwrap_or(default))
    }

    fn flag(&self, section: &str, key: &str) -> Result<bool, ConfigError> {
        match self.raw(section, key) {
            None => Ok(false),
            Some(e) => match e.value.as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                other => Err(ConfigError::Parse {
                    line: e.line,
                    key: Some(key.to_string()),
                    message: format!("`{key}` must be true or false, got `{other}`"),
                }),
            },
        }
    }
}

/// Parses `1.5`, `pi`, `-pi/4`, `3*pi/4`, `2*pi`.
pub fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1.0, r.trim_start()),
        None => (1.0, t.strip_prefix('+').unwrap_or(t).trim_start()),
    };
    let (coef, rest) = match rest.split_once('*') {
        Some((c, r)) => (c.trim().parse::<f64>().ok()?, r.trim()),
        None => (1.0, rest),
    };
    let (head, denom) = match rest.split_once('/') {
        Some((h, d)) => (h.trim(), d.trim().parse::<f64>().ok()?),
        None => (rest, 1.0),
    };
    if head != "pi" || denom == 0.0 {
        return None;
    }
    let v = sign * coef * PI / denom;
    v.is_finite().then_some(v)
}

fn tokenize(text: &str) -> Result<Table, ConfigError> {
    let mut entries = BTreeMap::new();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split(['#', ';']).next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| ConfigError::Parse {
                line,
                key: None,
                message: format!("malformed section header `{content}`"),
            })?;
            let name = name.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(ConfigError::Parse {
                    line,
                    key: None,
                    message: format!("unknown section [{name}]"),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            key: None,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.as_deref().ok_or_else(|| ConfigError::Parse {
            line,
            key: Some(key.to_string()),
            message: format!("key `{key}` appears before any section"),
        })?;
        let allowed = SECTIONS
            .iter()
            .find(|(s, _)| *s == sec)
            .map(|(_, k)| *k)
            .unwrap_or(&[]);
        if !allowed.contains(&key) {
            return Err(ConfigError::Parse {
                line,
                key: Some(key.to_string()),
                message: format!("unknown key `{key}` in [{sec}]"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                key: Some(key.to_string()),
                message: format!("`{key}` has no value"),
            });
        }
        let slot = (sec.to_string(), key.to_string());
        if entries.contains_key(&slot) {
            return Err(ConfigError::Parse {
                line,
                key: Some(key.to_string()),
                message: format!("duplicate key `{key}` in [{sec}]"),
            });
        }
        entries.insert(
            slot,
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    if entries.is_empty() {
        return Err(ConfigError::Parse {
            line: 0,
            key: None,
            message: "configuration is empty".into(),
        });
    }
    Ok(Table { entries })
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let t = tokenize(text)?;

    let params = Params {
        big_m: t.required("params", "M")?,
        m: t.required("params", "m")?,
        j: t.required("params", "J")?,
        l: t.required("params", "l")?,
        g: t.required("params", "g")?,
        d: t.or("params", "d", Params::DEFAULT_HALF_TRACK)?,
        r: t.or("params", "R", Params::DEFAULT_WHEEL_RADIUS)?,
    };
    let gains = Gains {
        k_e: t.required("gains", "k_E")?,
        k_p: t.required("gains", "k_p")?,
        k_v: t.required("gains", "k_v")?,
        k_psi: t.required("gains", "k_psi")?,
        k_psi_dot: t.required("gains", "k_psi_dot")?,
        eps_origin: t.or("gains", "eps_origin", Gains::DEFAULT_EPS_ORIGIN)?,
    };
    let initial = FullVelocityState {
        x: t.required("initial", "x")?,
        y: t.required("initial", "y")?,
        psi: t.required("initial", "psi")?,
        theta: t.required("initial", "theta")?,
        x_dot: t.required("initial", "x_dot")?,
        y_dot: t.required("initial", "y_dot")?,
        psi_dot: t.required("initial", "psi_dot")?,
        theta_dot: t.required("initial", "theta_dot")?,
    };

    let mode = match t.raw("sim", "mode").map(|e| (e.line, e.value.as_str())) {
        None | Some((_, "continuous")) => ControlMode::Continuous,
        Some((_, "passive")) => ControlMode::Passive,
        Some((line, "sampled")) => ControlMode::Sampled {
            period: t
                .number("sim", "sample_period")?
                .ok_or_else(|| ConfigError::Parse {
                    line,
                    key: Some("sample_period".into()),
                    message: "sampled mode needs `sample_period`".into(),
                })?,
        },
        Some((line, other)) => {
            return Err(ConfigError::Parse {
                line,
                key: Some("mode".into()),
                message: format!("unknown mode `{other}` (continuous, sampled or passive)"),
            })
        }
    };

    let scenario = Scenario {
        params,
        gains,
        initial,
        dt: t.or("sim", "dt", Scenario::DEFAULT_DT)?,
        t_final: t.or("sim", "t_final", Scenario::DEFAULT_T_FINAL)?,
        mode,
        swing_up_law: if t.flag("sim", "printed_eq24")? {
            SwingUpLaw::Printed
        } else {
            SwingUpLaw::Corrected
        },
        constraint_tol: t.or("sim", "constraint_tol", model::DEFAULT_CONSTRAINT_TOL)?,
    };

    let columns = match t.raw("output", "columns") {
        None => Column::ALL.to_vec(),
        Some(e) if e.value == "all" => Column::ALL.to_vec(),
        Some(e) => {
            let mut wanted = Vec::new();
            for name in e.value.split(',').map(str::trim) {
                let col = Column::from_name(name).ok_or_else(|| ConfigError::Parse {
                    line: e.line,
                    key: Some("columns".into()),
                    message: format!("unknown column `{name}`"),
                })?;
                wanted.push(col);
            }
            Column::ALL
                .iter()
                .copied()
                .filter(|c| wanted.contains(c))
                .collect()
        }
    };

    let defaults = EventTolerances::default();
    let cfg = RunConfig {
        scenario,
        out_dir: t
            .raw("output", "dir")
            .map_or_else(|| PathBuf::from("out"), |e| PathBuf::from(&e.value)),
        columns,
        diagnostics: t.raw("output", "diagnostics").is_none() || t.flag("output", "diagnostics")?,
        events: EventTolerances {
            energy: t.or("events", "energy_tol", defaults.energy)?,
            upright: t.or("events", "upright_tol", defaults.upright)?,
            origin: t.or("events", "origin_radius", defaults.origin)?,
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Configurations shipped with the tool.
pub mod bundled {
    pub const REFERENCE: &str = include_str!("../../../configs/paper_sec4.cfg");
    pub const ZERO_EQUILIBRIUM: &str = include_str!("../../../configs/zero_equilibrium.cfg");
    pub const DOWNWARD_REST: &str = include_str!("../../../configs/downward_rest.cfg");
    pub const PURE_SWING_UP: &str = include_str!("../../../configs/pure_swing_up.cfg");
    pub const HEADING_ONLY: &str = include_str!("../../../configs/heading_only.cfg");
}
