//! Fixed-step RK4 integration of the kicked chain.
//!
//! Kicks are not part of the smooth field. The front node is kicked on the
//! grid steps that are multiples of `alpha / dt`; node `j + 1` is kicked at
//! the end of every step over which node `j` crosses `u = K` upward while its
//! recovery variable is negative.

use thiserror::Error;

use crate::model::{f, CellState, ChainState, ModelParams, ParamError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("epsilon = 0 selects the singular limit; use the singular-limit module")]
    SingularEpsilon,
    #[error("state diverged at t = {t} on node {node}")]
    Diverged { t: f64, node: usize },
    #[error("initial state has {got} cells, expected {expected}")]
    CellCount { expected: usize, got: usize },
}

/// A kick received by one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickEvent {
    pub step: u64,
    pub t: f64,
    /// Cell state immediately before the kick.
    pub pre: CellState,
    /// Number of coincident kicks merged into this event (amplitudes add).
    pub multiplicity: u32,
    /// Largest `u` reached since the node's previous kick (or since `t = 0`).
    pub peak_u: f64,
}

impl KickEvent {
    /// State right after the kick for amplitude `a`.
    pub fn post(&self, a: f64) -> CellState {
        CellState::new(self.pre.u, self.pre.v - a * self.multiplicity as f64)
    }
}

/// Per-node kick history, each list strictly increasing in time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KickLog {
    nodes: Vec<Vec<KickEvent>>,
}

impl KickLog {
    pub fn new(n_cells: usize) -> Self {
        Self {
            nodes: vec![Vec::new(); n_cells],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn events(&self, node: usize) -> &[KickEvent] {
        &self.nodes[node]
    }

    pub fn times(&self, node: usize) -> Vec<f64> {
        self.nodes[node].iter().map(|e| e.t).collect()
    }

    pub fn count(&self, node: usize) -> usize {
        self.nodes[node].len()
    }

    fn push(&mut self, node: usize, event: KickEvent) {
        let list = &mut self.nodes[node];
        match list.last_mut() {
            Some(last) if last.step == event.step => last.multiplicity += event.multiplicity,
            _ => list.push(event),
        }
    }
}

/// Sampled chain states.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<Vec<CellState>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `(t, u)` series of one node.
    pub fn node_u(&self, node: usize) -> Vec<(f64, f64)> {
        self.t
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| (t, s[node].u))
            .collect()
    }
}

/// Post-transient extremes per node, used for blocked-regime detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeStats {
    pub max_u: f64,
    /// Longest uninterrupted stay with `u > 1`, in t-units.
    pub max_right_dwell: f64,
}

impl Default for NodeStats {
    fn default() -> Self {
        Self {
            max_u: f64::NEG_INFINITY,
            max_right_dwell: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    /// Record the chain every this many steps; 0 disables sampling.
    pub sample_every: u64,
    /// Times at which to capture the whole chain.
    pub snapshot_times: Vec<f64>,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            sample_every: 10,
            snapshot_times: Vec::new(),
        }
    }
}

impl SimOptions {
    /// No sampling, no snapshots: kick log and stats only.
    pub fn quiet() -> Self {
        Self {
            sample_every: 0,
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub trajectory: Trajectory,
    pub kicks: KickLog,
    pub stats: Vec<NodeStats>,
    pub snapshots: Vec<(f64, Vec<CellState>)>,
    pub final_state: ChainState,
}

#[inline]
fn field(cell: CellState, eps: f64, c: f64) -> (f64, f64) {
    ((f(cell.u) - cell.v) / eps, cell.u - c)
}

/// One classical RK4 step of a single cell's smooth field.
#[inline]
pub fn rk4_cell(cell: CellState, eps: f64, c: f64, dt: f64) -> CellState {
    let h = 0.5 * dt;
    let (k1u, k1v) = field(cell, eps, c);
    let (k2u, k2v) = field(CellState::new(cell.u + h * k1u, cell.v + h * k1v), eps, c);
    let (k3u, k3v) = field(CellState::new(cell.u + h * k2u, cell.v + h * k2v), eps, c);
    let (k4u, k4v) = field(CellState::new(cell.u + dt * k3u, cell.v + dt * k3v), eps, c);
    CellState::new(
        cell.u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        cell.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

fn advance(state: &mut ChainState, params: &ModelParams) {
    for (cell, prev) in state.cells.iter_mut().zip(state.prev_u.iter_mut()) {
        *prev = cell.u;
        *cell = rk4_cell(*cell, params.epsilon, params.c, params.dt);
    }
    state.step += 1;
    state.t = state.step as f64 * params.dt;
}

/// Advances every cell by one RK4 step of size `dt`, without kicks.
pub fn rk4_step(state: &ChainState, params: &ModelParams) -> Result<ChainState, SimError> {
    if params.epsilon == 0.0 {
        return Err(SimError::SingularEpsilon);
    }
    let mut next = state.clone();
    advance(&mut next, params);
    Ok(next)
}

/// `(u, v) -> (u, v - A)`.
pub fn apply_kick(cell: CellState, a: f64) -> CellState {
    CellState::new(cell.u, cell.v - a)
}

/// Zero-based indices `j < n - 1` of nodes whose voltage crossed `k` upward
/// between `prev` and `next` with negative recovery variable at step end.
/// Node `j + 1` is the one to kick.
pub fn detect_crossings(prev: &ChainState, next: &ChainState, k: f64) -> Vec<usize> {
    let n = next.cells.len();
    (0..n.saturating_sub(1))
        .filter(|&j| crosses(prev.cells[j].u, next.cells[j], k))
        .collect()
}

#[inline]
fn crosses(prev_u: f64, next: CellState, k: f64) -> bool {
    prev_u < k && k <= next.u && next.v < 0.0
}

/// Stateful stepper over a chain; [`simulate`] drives it to `t_end`.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: ModelParams,
    state: ChainState,
    log: KickLog,
    peaks: Vec<f64>,
    stats: Vec<NodeStats>,
    right_since: Vec<Option<u64>>,
    period_steps: u64,
    transient_step: u64,
}

impl Simulator {
    pub fn new(params: &ModelParams, initial: ChainState) -> Result<Self, SimError> {
        params.validate()?;
        if params.epsilon == 0.0 {
            return Err(SimError::SingularEpsilon);
        }
        if initial.cells.len() != params.n_cells {
            return Err(SimError::CellCount {
                expected: params.n_cells,
                got: initial.cells.len(),
            });
        }
        let n = params.n_cells;
        let peaks = initial.cells.iter().map(|c| c.u).collect();
        Ok(Self {
            params: params.clone(),
            log: KickLog::new(n),
            peaks,
            stats: vec![NodeStats::default(); n],
            right_since: vec![None; n],
            period_steps: params.period_steps(),
            transient_step: (params.t_transient / params.dt).round() as u64,
            state: initial,
        })
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn kicks(&self) -> &KickLog {
        &self.log
    }

    fn kick(&mut self, node: usize, count: u32) {
        let cell = self.state.cells[node];
        self.log.push(
            node,
            KickEvent {
                step: self.state.step,
                t: self.state.t,
                pre: cell,
                multiplicity: count,
                peak_u: self.peaks[node],
            },
        );
        self.peaks[node] = cell.u;
        self.state.cells[node] = apply_kick(cell, self.params.a * count as f64);
    }

    /// Front kick (if due), RK4 step, then coupling kicks for this step's crossings.
    pub fn step(&mut self) -> Result<(), SimError> {
        if self.state.step.is_multiple_of(self.period_steps) {
            self.kick(0, 1);
        }
        advance(&mut self.state, &self.params);

        let after_transient = self.state.step > self.transient_step;
        let dt = self.params.dt;
        for (j, cell) in self.state.cells.iter().enumerate() {
            if !cell.is_finite() {
                return Err(SimError::Diverged {
                    t: self.state.t,
                    node: j,
                });
            }
            if cell.u > self.peaks[j] {
                self.peaks[j] = cell.u;
            }
            if after_transient {
                let stats = &mut self.stats[j];
                stats.max_u = stats.max_u.max(cell.u);
                if cell.u > 1.0 {
                    let since = *self.right_since[j].get_or_insert(self.state.step);
                    let dwell = (self.state.step - since) as f64 * dt;
                    stats.max_right_dwell = stats.max_right_dwell.max(dwell);
                } else {
                    self.right_since[j] = None;
                }
            }
        }

        // Increasing node order; kicks land after the whole chain has stepped.
        let k = self.params.k;
        for j in 0..self.state.cells.len().saturating_sub(1) {
            if crosses(self.state.prev_u[j], self.state.cells[j], k) {
                self.kick(j + 1, 1);
            }
        }
        Ok(())
    }

    pub fn finish(self) -> (ChainState, KickLog, Vec<NodeStats>) {
        (self.state, self.log, self.stats)
    }
}

/// Runs the chain from `initial` until `t_end`.
pub fn simulate(
    params: &ModelParams,
    initial: ChainState,
    options: &SimOptions,
) -> Result<SimOutput, SimError> {
    let mut sim = Simulator::new(params, initial)?;
    let total = params.total_steps();
    let mut snapshot_steps: Vec<u64> = options
        .snapshot_times
        .iter()
        .map(|t| (t / params.dt).round() as u64)
        .collect();
    snapshot_steps.sort_unstable();
    let mut next_snapshot = snapshot_steps.iter().peekable();
    let mut trajectory = Trajectory::default();
    let mut snapshots = Vec::new();

    let record = |sim: &Simulator, trajectory: &mut Trajectory| {
        trajectory.t.push(sim.state.t);
        trajectory.states.push(sim.state.cells.clone());
    };

    while sim.state.step < total {
        let step = sim.state.step;
        while next_snapshot.next_if(|&&s| s == step).is_some() {
            snapshots.push((sim.state.t, sim.state.cells.clone()));
        }
        if options.sample_every > 0 && step % options.sample_every == 0 {
            record(&sim, &mut trajectory);
        }
        sim.step()?;
    }
    for _ in next_snapshot.filter(|&&s| s == total) {
        snapshots.push((sim.state.t, sim.state.cells.clone()));
    }
    if options.sample_every > 0 {
        record(&sim, &mut trajectory);
    }
    let (final_state, kicks, stats) = sim.finish();
    Ok(SimOutput {
        trajectory,
        kicks,
        stats,
        snapshots,
        final_state,
    })
}

/// [`simulate`] from the rest state `(c, f(c))` on every cell.
pub fn simulate_from_rest(
    params: &ModelParams,
    options: &SimOptions,
) -> Result<SimOutput, SimError> {
    simulate(
        params,
        ChainState::at_rest(params.n_cells, params.c),
        options,
    )
}
