use serde::Serialize;
use thiserror::Error;

use super::regime::RegimeLabel;
use crate::integrator::SimError;
use crate::model::snap;

/// Bisection stops once the bracket is narrower than this.
pub const BRACKET_WIDTH: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error(
        "bracket ends classify as {got_low} at alpha = {lo} and {got_high} at alpha = {hi}, \
         expected {want_low} and {want_high}"
    )]
    EndLabels {
        lo: f64,
        hi: f64,
        want_low: RegimeLabel,
        want_high: RegimeLabel,
        got_low: RegimeLabel,
        got_high: RegimeLabel,
    },
    #[error(
        "alpha = {alpha} classifies as {label}, outside both sub-brackets \
         [{lo}, {alpha}] and [{alpha}, {hi}]"
    )]
    Inconsistent {
        alpha: f64,
        label: RegimeLabel,
        lo: f64,
        hi: f64,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Boundary {
    pub alpha: f64,
    pub bracket: (f64, f64),
    pub label_low: RegimeLabel,
    pub label_high: RegimeLabel,
    /// Every evaluated `(alpha, label)` in evaluation order.
    pub evaluations: Vec<(f64, RegimeLabel)>,
}

/// Bisects `bracket` for the switch from `label_low` to `label_high`.
///
/// Midpoints are snapped to the `dt` grid. A midpoint label matching
/// neither end is reported as [`BoundaryError::Inconsistent`].
pub fn locate_boundary<F>(
    mut classify: F,
    label_low: RegimeLabel,
    label_high: RegimeLabel,
    bracket: (f64, f64),
    dt: f64,
) -> Result<Boundary, BoundaryError>
where
    F: FnMut(f64) -> Result<RegimeLabel, SimError>,
{
    let (mut lo, mut hi) = (snap(bracket.0, dt), snap(bracket.1, dt));
    let mut evaluations = Vec::new();
    let mut eval = |alpha: f64, evaluations: &mut Vec<(f64, RegimeLabel)>| {
        let label = classify(alpha)?;
        evaluations.push((alpha, label));
        Ok::<_, SimError>(label)
    };
    let (got_low, got_high) = (eval(lo, &mut evaluations)?, eval(hi, &mut evaluations)?);
    if got_low != label_low || got_high != label_high {
        return Err(BoundaryError::EndLabels {
            lo,
            hi,
            want_low: label_low,
            want_high: label_high,
            got_low,
            got_high,
        });
    }
    while hi - lo >= BRACKET_WIDTH {
        let mid = snap(0.5 * (lo + hi), dt);
        if mid <= lo || mid >= hi {
            break;
        }
        let label = eval(mid, &mut evaluations)?;
        if label == label_low {
            lo = mid;
        } else if label == label_high {
            hi = mid;
        } else {
            return Err(BoundaryError::Inconsistent {
                alpha: mid,
                label,
                lo,
                hi,
            });
        }
    }
    Ok(Boundary {
        alpha: 0.5 * (lo + hi),
        bracket: (lo, hi),
        label_low,
        label_high,
        evaluations,
    })
}

/// A regime switch of the front node and a bracket known to contain it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnownBoundary {
    pub name: &'static str,
    pub bracket: (f64, f64),
    pub low: RegimeLabel,
    pub high: RegimeLabel,
    /// Expected approximate location.
    pub reference: f64,
}

pub const KNOWN_BOUNDARIES: [KnownBoundary; 3] = [
    KnownBoundary {
        name: "alpha0",
        bracket: (8.3, 8.7),
        low: RegimeLabel::ComplexMMO,
        high: RegimeLabel::SimplePeriodic,
        reference: 8.5,
    },
    KnownBoundary {
        name: "alpha1",
        bracket: (8.0, 8.3),
        low: RegimeLabel::SimpleMMO,
        high: RegimeLabel::ComplexMMO,
        reference: 8.2,
    },
    KnownBoundary {
        name: "alpha2",
        bracket: (7.3, 7.7),
        low: RegimeLabel::SimplePeriodic,
        high: RegimeLabel::SimpleMMO,
        reference: 7.5,
    },
];
