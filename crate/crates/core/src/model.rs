//! Model constants, the cubic nonlinearity and the landmarks of the phase plane.
//!
//! Each cell obeys the slow-fast FitzHugh-Nagumo field
//!
//! ```text
//!   eps * du/dt = f(u) - v
//!         dv/dt = u - c
//! ```
//!
//! with `f(u) = 3u - u^3`. Kicks are impulsive decrements of `v` and are
//! handled by the integrator, not by the smooth field.

use serde::Serialize;
use thiserror::Error;

/// Coefficients of `f(u) = linear * u - cubic * u^3`.
///
/// The fold abscissae, branch brackets and landmarks below all assume the
/// canonical instance `3u - u^3`.
pub const CUBIC_LINEAR: f64 = 3.0;
pub const CUBIC_CUBIC: f64 = 1.0;

/// The cubic nonlinearity `f(u) = 3u - u^3`.
#[inline]
pub fn f(u: f64) -> f64 {
    CUBIC_LINEAR * u - CUBIC_CUBIC * u * u * u
}

/// `f'(u) = 3 - 3u^2`.
#[inline]
pub fn f_prime(u: f64) -> f64 {
    CUBIC_LINEAR - 3.0 * CUBIC_CUBIC * u * u
}

/// One of the three monotone pieces of the critical manifold `v = f(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `u <= -1`, attracting.
    Left,
    /// `|u| <= 1`, repelling.
    Middle,
    /// `u >= 1`, attracting.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("v = {v} is outside the range of the {branch:?} branch")]
    OutOfRange { v: f64, branch: Branch },
    #[error("non-finite argument {0}")]
    NonFinite(f64),
}

/// Inverts the cubic on the requested branch.
///
/// Safeguarded Newton inside a branch-specific bracket; any Newton iterate
/// that leaves the bracket is replaced by a bisection step, which keeps the
/// iteration well behaved at the folds where `f'` vanishes.
pub fn f_inverse(v: f64, branch: Branch) -> Result<f64, DomainError> {
    if !v.is_finite() {
        return Err(DomainError::NonFinite(v));
    }
    let out_of_range = || DomainError::OutOfRange { v, branch };
    // Brackets [lo, hi] with f(lo) and f(hi) on opposite sides of v.
    let (mut lo, mut hi) = match branch {
        Branch::Left => {
            if v < -2.0 {
                return Err(out_of_range());
            }
            (-(1.0 + (1.0 + v.abs()).sqrt()), -1.0)
        }
        Branch::Right => {
            if v > 2.0 {
                return Err(out_of_range());
            }
            (1.0, 1.0 + (1.0 + v.abs()).sqrt())
        }
        Branch::Middle => {
            if v.abs() > 2.0 {
                return Err(out_of_range());
            }
            (-1.0, 1.0)
        }
    };
    // Endpoints that are exact roots (fold values) are returned directly.
    if f(lo) == v {
        return Ok(lo);
    }
    if f(hi) == v {
        return Ok(hi);
    }
    // g(u) = f(u) - v; sign at `lo` decides which half to keep.
    let g_lo_positive = f(lo) - v > 0.0;
    let mut u = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = f(u) - v;
        if g == 0.0 {
            return Ok(u);
        }
        if (g > 0.0) == g_lo_positive {
            lo = u;
        } else {
            hi = u;
        }
        let slope = f_prime(u);
        let newton = if slope != 0.0 {
            u - g / slope
        } else {
            f64::NAN
        };
        let next = if newton.is_finite() && newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - u).abs() <= 1e-15 * (1.0 + u.abs()) || (hi - lo).abs() <= 1e-15 {
            return Ok(next);
        }
        u = next;
    }
    Ok(u)
}

/// Landmarks of the critical manifold for a given rest abscissa `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseLandmarks {
    pub equilibrium: (f64, f64),
    pub fold_right: (f64, f64),
    pub fold_left: (f64, f64),
    /// Left-branch landing abscissa after a jump from the right fold.
    pub landing_from_right_fold: f64,
    /// Right-branch landing abscissa after a jump from the left fold.
    pub landing_from_left_fold: f64,
}

impl PhaseLandmarks {
    pub fn new(c: f64) -> Self {
        Self {
            equilibrium: (c, f(c)),
            fold_right: (1.0, f(1.0)),
            fold_left: (-1.0, f(-1.0)),
            landing_from_right_fold: -2.0,
            landing_from_left_fold: 2.0,
        }
    }
}

/// `(u, v)` state of a single cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellState {
    pub u: f64,
    pub v: f64,
}

impl CellState {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    /// The rest state `(c, f(c))`.
    pub fn rest(c: f64) -> Self {
        Self { u: c, v: f(c) }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    /// Sup-norm distance.
    pub fn dist_sup(&self, other: &CellState) -> f64 {
        (self.u - other.u).abs().max((self.v - other.v).abs())
    }
}

/// Ordered chain of cells plus the bookkeeping needed for crossing detection.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub cells: Vec<CellState>,
    /// `u` values at the start of the last step.
    pub prev_u: Vec<f64>,
    /// Number of integrator steps taken; time is `step * dt`.
    pub step: u64,
    pub t: f64,
}

impl ChainState {
    /// Every cell at rest, `t = 0`.
    pub fn at_rest(n_cells: usize, c: f64) -> Self {
        Self::from_cells(vec![CellState::rest(c); n_cells])
    }

    pub fn from_cells(cells: Vec<CellState>) -> Self {
        let prev_u = cells.iter().map(|c| c.u).collect();
        Self {
            cells,
            prev_u,
            step: 0,
            t: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("`{key}` = {value}: {constraint}")]
    Invalid {
        key: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("`c` = {0}: the excitable regime requires c < -1")]
    NotExcitable(f64),
}

impl ParamError {
    /// Name of the offending parameter.
    pub fn key(&self) -> &'static str {
        match self {
            ParamError::Invalid { key, .. } => key,
            ParamError::NotExcitable(_) => "c",
        }
    }
}

/// Model constants and numerics settings.
///
/// Defaults are `eps = 0.1`, `c = -1.2`, `A = 1`, `K = 0`, `dt = 0.001`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelParams {
    pub epsilon: f64,
    pub c: f64,
    /// Kick amplitude.
    #[serde(rename = "A")]
    pub a: f64,
    /// Firing threshold.
    #[serde(rename = "K")]
    pub k: f64,
    /// Forcing period of the front node.
    pub alpha: f64,
    pub dt: f64,
    pub n_cells: usize,
    pub t_end: f64,
    pub t_transient: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            c: -1.2,
            a: 1.0,
            k: 0.0,
            alpha: 50.0,
            dt: 0.001,
            n_cells: 1,
            t_end: 600.0,
            t_transient: 200.0,
        }
    }
}

/// Relative slack used when checking that a duration is a whole number of steps.
const GRID_TOL: f64 = 1e-9;

impl ModelParams {
    /// Default parameters at forcing period `alpha` with the default transient
    /// for that period.
    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha,
            t_transient: default_transient(alpha),
            ..Self::default()
        }
    }

    /// Same parameters at forcing period `alpha` snapped onto the `dt` grid.
    pub fn at_alpha(mut self, alpha: f64) -> Self {
        self.alpha = snap(alpha, self.dt);
        self
    }

    pub fn n_cells(mut self, n: usize) -> Self {
        self.n_cells = n;
        self
    }

    pub fn t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn t_transient(mut self, t: f64) -> Self {
        self.t_transient = t;
        self
    }

    pub fn epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }

    pub fn rest(&self) -> CellState {
        CellState::rest(self.c)
    }

    pub fn landmarks(&self) -> PhaseLandmarks {
        PhaseLandmarks::new(self.c)
    }

    /// Checks every invariant, including the `alpha`-on-grid requirement.
    pub fn validate(&self) -> Result<(), ParamError> {
        self.validate_model()?;
        if self.epsilon < 0.0 || !self.epsilon.is_finite() {
            return Err(invalid("epsilon", self.epsilon, "must be finite and >= 0"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("dt", self.dt, "must be > 0"));
        }
        if self.n_cells < 1 {
            return Err(invalid("cells", self.n_cells as f64, "must be >= 1"));
        }
        if !(self.t_transient >= 0.0) || !self.t_transient.is_finite() {
            return Err(invalid("transient", self.t_transient, "must be >= 0"));
        }
        if !(self.t_end > self.t_transient) || !self.t_end.is_finite() {
            return Err(invalid("t_end", self.t_end, "must exceed the transient"));
        }
        if steps_exact(self.alpha, self.dt).is_none() {
            return Err(invalid(
                "alpha",
                self.alpha,
                "must be an integer multiple of dt",
            ));
        }
        Ok(())
    }

    /// Checks only the constants the singular limit depends on (`c`, `A`, `alpha`).
    pub fn validate_model(&self) -> Result<(), ParamError> {
        if !self.c.is_finite() || self.c >= -1.0 {
            return Err(ParamError::NotExcitable(self.c));
        }
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(invalid("A", self.a, "must be > 0"));
        }
        if !self.k.is_finite() {
            return Err(invalid("K", self.k, "must be finite"));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(invalid("alpha", self.alpha, "must be > 0"));
        }
        Ok(())
    }

    /// Integrator steps per forcing period.
    pub fn period_steps(&self) -> u64 {
        (self.alpha / self.dt).round() as u64
    }

    pub fn total_steps(&self) -> u64 {
        (self.t_end / self.dt).round() as u64
    }

    /// Rounds `alpha` onto the integration grid.
    pub fn snap_to_grid(&self, alpha: f64) -> f64 {
        snap(alpha, self.dt)
    }
}

/// Transient discarded before analysis: 200 for `alpha <= 10`, else `4 * alpha`.
pub fn default_transient(alpha: f64) -> f64 {
    if alpha <= 10.0 {
        200.0
    } else {
        4.0 * alpha
    }
}

pub(crate) fn snap(x: f64, dt: f64) -> f64 {
    let n = (x / dt).round();
    // dividing by an integral 1/dt keeps values like 7.3 exact
    let inv = (1.0 / dt).round();
    if (inv * dt - 1.0).abs() < 1e-12 {
        n / inv
    } else {
        n * dt
    }
}

fn steps_exact(duration: f64, dt: f64) -> Option<u64> {
    let ratio = duration / dt;
    let n = ratio.round();
    (n >= 1.0 && (ratio - n).abs() <= GRID_TOL * n.max(1.0)).then_some(n as u64)
}

fn invalid(key: &'static str, value: f64, constraint: &'static str) -> ParamError {
    ParamError::Invalid {
        key,
        value,
        constraint,
    }
}
