//! Kicked FitzHugh-Nagumo chains: a unidirectionally coupled chain of
//! relaxation oscillators whose first cell is forced by periodic kicks.
//!
//! The crate covers direct simulation ([`integrator`]), the `eps = 0`
//! hybrid dynamics and its one-dimensional return map ([`singular`]),
//! regime classification and wave diagnostics ([`analysis`]), and the
//! `kfhn` command line ([`cli`]).

// `!(x > y)` is deliberate: it rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod integrator;
pub mod model;
pub mod quad;
pub mod singular;

pub use integrator::{
    simulate, simulate_from_rest, KickEvent, KickLog, SimError, SimOptions, SimOutput, Simulator,
};
pub use model::{f, f_inverse, f_prime, Branch, CellState, ChainState, ModelParams, ParamError};
