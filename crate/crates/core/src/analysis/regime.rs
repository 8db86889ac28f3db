use serde::Serialize;

use super::loops::{extract_loops, window_start, Loop, LoopLabel};
use super::period::{detect_period, PeriodVerdict};
use crate::integrator::{simulate_from_rest, NodeStats, SimError, SimOptions, SimOutput};
use crate::model::ModelParams;

/// Voltage above which a node is considered to have run away.
pub const U_BLOWUP: f64 = 3.0;

/// Right-branch dwell, in forcing periods, beyond which a node is blocked.
pub const DWELL_PERIODS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegimeLabel {
    /// One depolarization per response period and no small loops.
    SimplePeriodic,
    /// One large and one small loop per period.
    SimpleMMO,
    /// Any other periodic mix containing small loops.
    ComplexMMO,
    /// Several depolarizations per period and no small loops.
    Bursting,
    Blocked,
    Unclassified,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::SimplePeriodic => "SimplePeriodic",
            RegimeLabel::SimpleMMO => "SimpleMMO",
            RegimeLabel::ComplexMMO => "ComplexMMO",
            RegimeLabel::Bursting => "Bursting",
            RegimeLabel::Blocked => "Blocked",
            RegimeLabel::Unclassified => "Unclassified",
        }
    }
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Loop labels over one steady period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MmoSignature {
    /// Starts at the first large loop that follows a non-large one.
    pub pattern: Vec<LoopLabel>,
    pub n_large: usize,
    pub n_small: usize,
    pub n_skip: usize,
    pub period: f64,
    pub periodic: bool,
}

impl MmoSignature {
    pub fn new(labels: &[LoopLabel], period: f64) -> Self {
        let pattern = rotate(labels);
        let count = |l| pattern.iter().filter(|&&x| x == l).count();
        Self {
            n_large: count(LoopLabel::Large),
            n_small: count(LoopLabel::Small),
            n_skip: count(LoopLabel::Skip),
            pattern,
            period,
            periodic: true,
        }
    }

    pub fn pattern_string(&self) -> String {
        super::loops::pattern_string(&self.pattern)
    }

    pub fn label(&self) -> RegimeLabel {
        match (self.n_large, self.n_small, self.n_skip) {
            (0, _, _) => RegimeLabel::Unclassified,
            (1, 0, _) => RegimeLabel::SimplePeriodic,
            (_, 0, _) => RegimeLabel::Bursting,
            (1, 1, 0) => RegimeLabel::SimpleMMO,
            _ => RegimeLabel::ComplexMMO,
        }
    }
}

fn rotate(labels: &[LoopLabel]) -> Vec<LoopLabel> {
    let n = labels.len();
    let start = (0..n)
        .find(|&i| labels[i] == LoopLabel::Large && labels[(i + n - 1) % n] != LoopLabel::Large)
        .unwrap_or(0);
    labels[start..]
        .iter()
        .chain(&labels[..start])
        .copied()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub alpha: f64,
    /// One-based position in the chain.
    pub node: usize,
    pub label: RegimeLabel,
    pub signature: Option<MmoSignature>,
    pub steady_period: Option<f64>,
    /// Depolarizations per unit time.
    pub depolarization_rate: Option<f64>,
    pub note: Option<String>,
}

impl RegimeReport {
    fn bare(alpha: f64, node: usize, label: RegimeLabel, note: impl Into<String>) -> Self {
        Self {
            alpha,
            node: node + 1,
            label,
            signature: None,
            steady_period: None,
            depolarization_rate: None,
            note: Some(note.into()),
        }
    }

    pub fn n_large(&self) -> Option<usize> {
        self.signature.as_ref().map(|s| s.n_large)
    }
}

fn blocked_reason(stats: &NodeStats, alpha: f64) -> Option<String> {
    if stats.max_u > U_BLOWUP {
        Some(format!("u reached {} > {U_BLOWUP}", stats.max_u))
    } else if stats.max_right_dwell > DWELL_PERIODS * alpha {
        Some(format!(
            "stayed right of u = 1 for {}",
            stats.max_right_dwell
        ))
    } else {
        None
    }
}

/// Classifies one node (zero-based) of a finished simulation.
pub fn classify_node(out: &SimOutput, node: usize, params: &ModelParams) -> RegimeReport {
    let alpha = params.alpha;
    if let Some(reason) = blocked_reason(&out.stats[node], alpha) {
        return RegimeReport::bare(alpha, node, RegimeLabel::Blocked, reason);
    }
    let events = out.kicks.events(node);
    let loops: Vec<Loop> = match extract_loops(events, params) {
        Ok(l) => l,
        Err(e) => return RegimeReport::bare(alpha, node, RegimeLabel::Unclassified, e.to_string()),
    };
    let window = &events[window_start(events, params.t_transient)..];
    let times: Vec<f64> = window.iter().map(|e| e.t).collect();
    let states: Vec<_> = window.iter().map(|e| e.post(params.a)).collect();
    let forcing = (node == 0).then_some(alpha);
    let verdict = match detect_period(&times, &states, forcing, params.dt) {
        Ok(v) => v,
        Err(e) => return RegimeReport::bare(alpha, node, RegimeLabel::Unclassified, e.to_string()),
    };
    let PeriodVerdict {
        periodic: true,
        m: Some(m),
        period: Some(period),
    } = verdict
    else {
        return RegimeReport::bare(
            alpha,
            node,
            RegimeLabel::Unclassified,
            "no recurrence in window",
        );
    };
    let labels: Vec<LoopLabel> = loops[loops.len() - m..].iter().map(|l| l.label).collect();
    let signature = MmoSignature::new(&labels, period);
    let label = signature.label();
    let note = (label == RegimeLabel::Unclassified).then(|| "no depolarizations".to_string());
    RegimeReport {
        alpha,
        node: node + 1,
        label,
        depolarization_rate: Some(signature.n_large as f64 / period),
        steady_period: Some(period),
        signature: Some(signature),
        note,
    }
}

/// Simulates the front node alone from rest and classifies its response.
pub fn classify_regime(params: &ModelParams) -> Result<RegimeReport, SimError> {
    let single = params.clone().n_cells(1);
    match simulate_from_rest(&single, &SimOptions::quiet()) {
        Ok(out) => Ok(classify_node(&out, 0, &single)),
        Err(SimError::Diverged { t, .. }) => Ok(RegimeReport::bare(
            params.alpha,
            0,
            RegimeLabel::Blocked,
            format!("diverged at t = {t}"),
        )),
        Err(e) => Err(e),
    }
}

/// Every node of a chain run, front to back.
pub fn filtering_report(out: &SimOutput, params: &ModelParams) -> Vec<RegimeReport> {
    (0..out.kicks.n_nodes())
        .map(|j| classify_node(out, j, params))
        .collect()
}

/// Whether the depolarization rate never increases down the chain.
pub fn rate_non_increasing(reports: &[RegimeReport]) -> bool {
    let tol = 1e-9;
    reports.windows(2).all(
        |w| match (w[0].depolarization_rate, w[1].depolarization_rate) {
            (Some(a), Some(b)) => b <= a * (1.0 + tol),
            _ => false,
        },
    )
}
