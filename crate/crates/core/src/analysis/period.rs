use serde::Serialize;

use super::AnalysisError;
use crate::model::CellState;

/// Sup-norm recurrence tolerance between kick-instant states.
pub const RECURRENCE_TOL: f64 = 1e-3;

/// Fewest kick instants a period verdict is based on.
pub const MIN_SAMPLES: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodVerdict {
    pub periodic: bool,
    /// Number of kicks per period.
    pub m: Option<usize>,
    pub period: Option<f64>,
}

impl PeriodVerdict {
    fn none() -> Self {
        Self {
            periodic: false,
            m: None,
            period: None,
        }
    }
}

/// Finds the smallest `m` such that the kick-instant state recurs after `m`
/// kicks everywhere in the window.
///
/// Every pair `(i, i + m)` must agree within [`RECURRENCE_TOL`], the window
/// must hold at least two full blocks, and the elapsed times `t[i+m] - t[i]`
/// must agree to within the time grid. With `forcing = Some(alpha)` the
/// period is `m * alpha`, otherwise the last measured block duration.
pub fn detect_period(
    times: &[f64],
    states: &[CellState],
    forcing: Option<f64>,
    dt: f64,
) -> Result<PeriodVerdict, AnalysisError> {
    let n = times.len().min(states.len());
    if n < MIN_SAMPLES {
        return Err(AnalysisError::InsufficientData {
            needed: MIN_SAMPLES,
            found: n,
        });
    }
    let time_tol = 1.5 * dt;
    for m in 1..=n / 2 {
        let span = times[m] - times[0];
        let recurs = (0..n - m).all(|i| {
            states[i].dist_sup(&states[i + m]) < RECURRENCE_TOL
                && ((times[i + m] - times[i]) - span).abs() <= time_tol
        });
        if recurs {
            let period = match forcing {
                Some(alpha) => m as f64 * alpha,
                None => times[n - 1] - times[n - 1 - m],
            };
            return Ok(PeriodVerdict {
                periodic: true,
                m: Some(m),
                period: Some(period),
            });
        }
    }
    Ok(PeriodVerdict::none())
}
