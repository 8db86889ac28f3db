//! Sweep the forcing period, then refine each regime switch by bisection.

use kicked_fhn::analysis::{
    classify_regime, grid_brackets, locate_boundary, sweep, KNOWN_BOUNDARIES,
};
use kicked_fhn::ModelParams;

fn main() {
    let template = ModelParams::with_alpha(7.0).t_end(2000.0);
    let grid = sweep::alpha_grid(7.0, 9.0, 0.1, template.dt);
    let reports = sweep::run_sweep(&template, &grid).expect("sweep");
    for r in &reports {
        println!("alpha = {:.1}: {}", r.alpha, r.label);
    }

    for known in &KNOWN_BOUNDARIES {
        let Some(bracket) = grid_brackets(&reports, known) else {
            println!("{}: not bracketed by the grid", known.name);
            continue;
        };
        let classify = |a: f64| classify_regime(&template.clone().at_alpha(a)).map(|r| r.label);
        match locate_boundary(classify, known.low, known.high, bracket, template.dt) {
            Ok(b) => println!(
                "{}: {} -> {} at alpha = {:.4} (expected ~{}), {} evaluations",
                known.name,
                known.low,
                known.high,
                b.alpha,
                known.reference,
                b.evaluations.len()
            ),
            Err(e) => println!("{}: {e}", known.name),
        }
    }
}
