use serde::Serialize;

use crate::integrator::{simulate, simulate_from_rest, SimError, SimOptions};
use crate::model::{CellState, ChainState, ModelParams};

/// `g = eps * du^2 + dv^2` between two cell states.
pub fn lyapunov_g(eps: f64, a: CellState, b: CellState) -> f64 {
    let (du, dv) = (a.u - b.u, a.v - b.v);
    eps * du * du + dv * dv
}

/// Pre-kick state of the front node at its last kick after the transient.
pub fn steady_kick_state(params: &ModelParams) -> Result<CellState, SimError> {
    let single = params.clone().n_cells(1);
    let out = simulate_from_rest(&single, &SimOptions::quiet())?;
    Ok(out
        .kicks
        .events(0)
        .last()
        .map(|e| e.pre)
        .unwrap_or(out.final_state.cells[0]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Contraction {
    pub g_start: f64,
    pub g_end: f64,
}

impl Contraction {
    pub fn contracts(&self) -> bool {
        self.g_end < self.g_start
    }
}

/// Evolves `base` and `base + offset` through one kick and one forcing
/// period and compares `g` before and after.
pub fn contraction_over_period(
    params: &ModelParams,
    base: CellState,
    offset: (f64, f64),
) -> Result<Contraction, SimError> {
    let run = params
        .clone()
        .n_cells(1)
        .t_end(params.alpha)
        .t_transient(0.0);
    let other = CellState::new(base.u + offset.0, base.v + offset.1);
    let end = |s: CellState| -> Result<CellState, SimError> {
        Ok(
            simulate(&run, ChainState::from_cells(vec![s]), &SimOptions::quiet())?
                .final_state
                .cells[0],
        )
    };
    Ok(Contraction {
        g_start: lyapunov_g(params.epsilon, base, other),
        g_end: lyapunov_g(params.epsilon, end(base)?, end(other)?),
    })
}
