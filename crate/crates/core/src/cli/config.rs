//! Run configuration: `key = value` files overlaid by command-line flags.

use std::path::{Path, PathBuf};

use super::CliError;
use crate::model::{default_transient, ModelParams, ParamError};

/// Every recognised setting; `None` means "not given here".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub alpha: Option<f64>,
    pub cells: Option<usize>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub epsilon: Option<f64>,
    pub c: Option<f64>,
    pub a: Option<f64>,
    pub k: Option<f64>,
    pub transient: Option<f64>,
    pub sample_every: Option<u64>,
    pub svg: Option<bool>,
    pub out: Option<PathBuf>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_step: Option<f64>,
    pub locate_boundaries: Option<bool>,
    pub snapshot_t: Option<f64>,
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::validation(key, format!("cannot parse `{value}`")))
}

fn boolean(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::validation(
            key,
            format!("expected true or false, got `{value}`"),
        )),
    }
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let canonical = key.replace('-', "_");
        let k = canonical.as_str();
        match k {
            "alpha" => self.alpha = Some(number(k, value)?),
            "cells" => self.cells = Some(number(k, value)?),
            "t_end" => self.t_end = Some(number(k, value)?),
            "dt" => self.dt = Some(number(k, value)?),
            "epsilon" => self.epsilon = Some(number(k, value)?),
            "c" => self.c = Some(number(k, value)?),
            "A" => self.a = Some(number(k, value)?),
            "K" => self.k = Some(number(k, value)?),
            "transient" => self.transient = Some(number(k, value)?),
            "sample_every" => self.sample_every = Some(number(k, value)?),
            "svg" => self.svg = Some(boolean(k, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "alpha_min" => self.alpha_min = Some(number(k, value)?),
            "alpha_max" => self.alpha_max = Some(number(k, value)?),
            "alpha_step" => self.alpha_step = Some(number(k, value)?),
            "locate_boundaries" => self.locate_boundaries = Some(boolean(k, value)?),
            "snapshot_t" => self.snapshot_t = Some(number(k, value)?),
            _ => return Err(CliError::validation(key, "unknown setting")),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::validation(
                    line,
                    format!("line {}: expected `key = value`", i + 1),
                ));
            };
            s.set(key.trim(), value.trim())?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Values in `over` win.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            alpha: over.alpha.or(self.alpha),
            cells: over.cells.or(self.cells),
            t_end: over.t_end.or(self.t_end),
            dt: over.dt.or(self.dt),
            epsilon: over.epsilon.or(self.epsilon),
            c: over.c.or(self.c),
            a: over.a.or(self.a),
            k: over.k.or(self.k),
            transient: over.transient.or(self.transient),
            sample_every: over.sample_every.or(self.sample_every),
            svg: over.svg.or(self.svg),
            out: over.out.or(self.out),
            alpha_min: over.alpha_min.or(self.alpha_min),
            alpha_max: over.alpha_max.or(self.alpha_max),
            alpha_step: over.alpha_step.or(self.alpha_step),
            locate_boundaries: over.locate_boundaries.or(self.locate_boundaries),
            snapshot_t: over.snapshot_t.or(self.snapshot_t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Simulate,
    Sweep,
    Map,
    Wave,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_step: f64,
    pub locate_boundaries: bool,
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub out: PathBuf,
    pub sample_every: u64,
    pub svg: bool,
    pub sweep: SweepGrid,
    pub snapshot_t: f64,
}

fn param_error(e: ParamError) -> CliError {
    CliError::validation(e.key(), e.to_string())
}

fn on_grid(x: f64, dt: f64) -> bool {
    let r = x / dt;
    (r - r.round()).abs() <= 1e-9 * r.abs().max(1.0)
}

impl RunConfig {
    pub fn resolve(s: &Settings, kind: CommandKind) -> Result<Self, CliError> {
        let defaults = ModelParams::default();
        let sweep = SweepGrid {
            alpha_min: s.alpha_min.unwrap_or(7.0),
            alpha_max: s.alpha_max.unwrap_or(9.0),
            alpha_step: s.alpha_step.unwrap_or(0.1),
            locate_boundaries: s.locate_boundaries.unwrap_or(false),
        };
        let alpha = match kind {
            CommandKind::Sweep => sweep.alpha_min,
            _ => s.alpha.unwrap_or(defaults.alpha),
        };
        let transient_ref = if kind == CommandKind::Sweep {
            sweep.alpha_max
        } else {
            alpha
        };
        let params = ModelParams {
            epsilon: if kind == CommandKind::Map {
                0.0
            } else {
                s.epsilon.unwrap_or(defaults.epsilon)
            },
            c: s.c.unwrap_or(defaults.c),
            a: s.a.unwrap_or(defaults.a),
            k: s.k.unwrap_or(defaults.k),
            alpha,
            dt: s.dt.unwrap_or(defaults.dt),
            n_cells: s
                .cells
                .unwrap_or(if kind == CommandKind::Wave { 100 } else { 1 }),
            t_end: s.t_end.unwrap_or(if kind == CommandKind::Sweep {
                2000.0
            } else {
                defaults.t_end
            }),
            t_transient: s
                .transient
                .unwrap_or_else(|| default_transient(transient_ref)),
        };
        let config = RunConfig {
            out: s.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            sample_every: s.sample_every.unwrap_or(10),
            svg: s.svg.unwrap_or(false),
            snapshot_t: s.snapshot_t.unwrap_or(110.0),
            params,
            sweep,
        };
        config.validate(kind)?;
        Ok(config)
    }

    fn validate(&self, kind: CommandKind) -> Result<(), CliError> {
        let p = &self.params;
        match kind {
            CommandKind::Map => p.validate_model().map_err(param_error)?,
            _ => p.validate().map_err(param_error)?,
        }
        if p.epsilon == 0.0 && kind != CommandKind::Map {
            return Err(CliError::validation(
                "epsilon",
                "must be > 0 for simulation; `map` covers the singular limit",
            ));
        }
        match kind {
            CommandKind::Sweep => {
                let g = &self.sweep;
                if !(g.alpha_step > 0.0) || !g.alpha_step.is_finite() {
                    return Err(CliError::validation("alpha_step", "must be > 0"));
                }
                if !(g.alpha_max > g.alpha_min) || !g.alpha_max.is_finite() {
                    return Err(CliError::validation("alpha_max", "must exceed alpha_min"));
                }
                if !on_grid(g.alpha_step, p.dt) {
                    return Err(CliError::validation(
                        "alpha_step",
                        "must be an integer multiple of dt",
                    ));
                }
                if !(p.t_end > p.t_transient) {
                    return Err(CliError::validation("t_end", "must exceed the transient"));
                }
            }
            CommandKind::Wave => {
                if p.n_cells < 3 {
                    return Err(CliError::validation(
                        "cells",
                        "wave diagnostics need at least 3 cells",
                    ));
                }
                if !(self.snapshot_t >= 0.0 && self.snapshot_t <= p.t_end) {
                    return Err(CliError::validation("snapshot_t", "must lie in [0, t_end]"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}
