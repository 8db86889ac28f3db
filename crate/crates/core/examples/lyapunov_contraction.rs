//! Two nearby states on the alpha = 50 orbit are pulled together over one
//! forcing period, measured by g = eps du^2 + dv^2.

use kicked_fhn::analysis::{contraction_over_period, steady_kick_state};
use kicked_fhn::ModelParams;

fn main() {
    let params = ModelParams::with_alpha(50.0);
    let base = steady_kick_state(&params).expect("steady state");
    println!("steady kick state: u = {:.12}, v = {:.12}", base.u, base.v);
    for offset in [(1e-3, 0.0), (0.0, 1e-3), (1e-3, 1e-3), (-0.05, 0.02)] {
        let c = contraction_over_period(&params, base, offset).expect("runs");
        println!(
            "offset {offset:?}: g(0) = {:.3e}, g(alpha) = {:.3e}, contracts: {}",
            c.g_start,
            c.g_end,
            c.contracts()
        );
    }
}
