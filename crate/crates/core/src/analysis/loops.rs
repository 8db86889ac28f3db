use serde::Serialize;

use super::AnalysisError;
use crate::integrator::{KickEvent, KickLog};
use crate::model::{f, ModelParams};

/// Kick times received by one node (zero-based index).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpikeTrain {
    pub node: usize,
    pub times: Vec<f64>,
}

impl SpikeTrain {
    pub fn from_log(log: &KickLog, node: usize) -> Self {
        Self {
            node,
            times: log.times(node),
        }
    }
}

/// What a node did between two consecutive kicks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LoopLabel {
    /// The voltage reached the threshold `K`.
    #[serde(rename = "L")]
    Large,
    /// A sub-threshold loop started below the rest level `v = f(c)`.
    #[serde(rename = "s")]
    Small,
    /// The kick left `v >= f(c)`: the cell was still relaxing from an
    /// excursion, so the kick only hastened its return and drew no loop.
    #[serde(rename = "k")]
    Skip,
}

impl LoopLabel {
    pub fn symbol(self) -> char {
        match self {
            LoopLabel::Large => 'L',
            LoopLabel::Small => 's',
            LoopLabel::Skip => 'k',
        }
    }

    pub fn classify(peak_u: f64, post_kick_v: f64, k: f64, rest_v: f64) -> Self {
        if peak_u >= k {
            LoopLabel::Large
        } else if post_kick_v < rest_v {
            LoopLabel::Small
        } else {
            LoopLabel::Skip
        }
    }
}

/// One inter-kick interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Loop {
    pub start: f64,
    pub end: f64,
    pub peak_u: f64,
    pub post_kick_v: f64,
    pub label: LoopLabel,
}

/// Index of the first event at or after `t_transient`.
pub(crate) fn window_start(events: &[KickEvent], t_transient: f64) -> usize {
    events.partition_point(|e| e.t < t_transient)
}

/// Labels every complete loop that starts after the transient.
pub fn extract_loops(
    events: &[KickEvent],
    params: &ModelParams,
) -> Result<Vec<Loop>, AnalysisError> {
    let first = window_start(events, params.t_transient);
    let found = events.len() - first;
    if found < 2 {
        return Err(AnalysisError::InsufficientData { needed: 2, found });
    }
    let rest_v = f(params.c);
    Ok(events[first..]
        .windows(2)
        .map(|w| {
            let post_kick_v = w[0].post(params.a).v;
            Loop {
                start: w[0].t,
                end: w[1].t,
                peak_u: w[1].peak_u,
                post_kick_v,
                label: LoopLabel::classify(w[1].peak_u, post_kick_v, params.k, rest_v),
            }
        })
        .collect())
}

pub fn pattern_string(labels: &[LoopLabel]) -> String {
    labels.iter().map(|l| l.symbol()).collect()
}
