use serde::Serialize;

use super::AnalysisError;
use crate::integrator::KickLog;
use crate::model::{f, ModelParams};
use crate::quad;

/// Delay between node `j` and node `j + 1` for pulse `n` (both zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseDelay {
    pub pulse_n: usize,
    pub node_j: usize,
    pub delay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveReport {
    pub n_nodes: usize,
    pub delays: Vec<PulseDelay>,
    /// Pulses that reached every node.
    pub complete_pulses: usize,
    /// Mean delay over complete pulses after the first.
    pub beta: Option<f64>,
    /// Nodes per unit time.
    pub speed: Option<f64>,
    /// Largest relative deviation of a late delay from `beta`.
    pub delay_spread: Option<f64>,
    pub t_e: Option<f64>,
    /// `|beta - T_e| / T_e`.
    pub discrepancy: Option<f64>,
    pub propagation_failed: bool,
    /// One-based index of the first node that never received a kick.
    pub first_silent_node: Option<usize>,
}

/// `T_e = eps * integral from c to K of du / (f(u) - f(c) + A)`, the time a
/// kicked resting cell takes to reach threshold. `None` when the integrand
/// has a pole on `[c, K]`.
pub fn t_e_formula(params: &ModelParams) -> Option<f64> {
    let (c, k) = (params.c, params.k);
    if k <= c {
        return None;
    }
    let offset = params.a - f(c);
    let lowest = [c, k, -1.0, 1.0]
        .into_iter()
        .filter(|&u| u >= c && u <= k)
        .map(|u| f(u) + offset)
        .fold(f64::INFINITY, f64::min);
    if lowest <= 0.0 {
        return None;
    }
    Some(params.epsilon * quad::integrate(|u| 1.0 / (f(u) + offset), c, k, 1e-13))
}

/// Inter-node delays per pulse, the asymptotic delay and wave speed.
pub fn wave_diagnostics(log: &KickLog, params: &ModelParams) -> Result<WaveReport, AnalysisError> {
    let n = log.n_nodes();
    if n < 3 {
        return Err(AnalysisError::TooFewNodes(n));
    }
    let times: Vec<Vec<f64>> = (0..n).map(|j| log.times(j)).collect();
    let mut delays = Vec::new();
    for j in 0..n - 1 {
        for (p, (up, down)) in times[j].iter().zip(&times[j + 1]).enumerate() {
            delays.push(PulseDelay {
                pulse_n: p,
                node_j: j,
                delay: down - up,
            });
        }
    }
    delays.sort_by_key(|d| (d.pulse_n, d.node_j));

    let first_silent_node = times.iter().position(|t| t.is_empty()).map(|j| j + 1);
    let complete_pulses = times.iter().map(Vec::len).min().unwrap_or(0);
    let late: Vec<f64> = delays
        .iter()
        .filter(|d| d.pulse_n < complete_pulses && (d.pulse_n >= 1 || complete_pulses == 1))
        .map(|d| d.delay)
        .collect();
    let beta = (!late.is_empty()).then(|| late.iter().sum::<f64>() / late.len() as f64);
    let delay_spread = beta.map(|b| late.iter().map(|d| (d - b).abs() / b).fold(0.0, f64::max));
    let t_e = t_e_formula(params);
    let discrepancy = match (beta, t_e) {
        (Some(b), Some(te)) => Some((b - te).abs() / te),
        _ => None,
    };
    Ok(WaveReport {
        n_nodes: n,
        delays,
        complete_pulses,
        speed: beta.map(|b| 1.0 / b),
        beta,
        delay_spread,
        t_e,
        discrepancy,
        propagation_failed: first_silent_node.is_some(),
        first_silent_node,
    })
}
