use kicked_fhn::analysis::steady_kick_state;
use kicked_fhn::singular::{fixed_point, FixedPointOptions};
use kicked_fhn::ModelParams;

// Kick levels of the full model drift toward the singular fixed point as eps shrinks.
fn main() {
    for alpha in [10.0, 20.0, 50.0] {
        let v_star = fixed_point(
            &ModelParams::with_alpha(alpha),
            &FixedPointOptions::default(),
        )
        .expect("fixed point")
        .v_star;
        println!("alpha = {alpha}: singular v* = {v_star:.10}");
        for eps in [0.1, 0.05, 0.02, 0.01] {
            let v = steady_kick_state(&ModelParams::with_alpha(alpha).epsilon(eps))
                .expect("simulation")
                .v;
            println!(
                "  eps = {eps:<5} kick level {v:.10}  |v - v*| = {:.3e}",
                (v - v_star).abs()
            );
        }
    }
}
