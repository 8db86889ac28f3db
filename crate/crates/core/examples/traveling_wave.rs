//! A long chain at alpha = 50 carries a traveling wave with a constant
//! node-to-node delay close to the threshold-reaching time T_e.

use kicked_fhn::analysis::wave_diagnostics;
use kicked_fhn::{simulate_from_rest, ModelParams, SimOptions};

fn main() {
    let params = ModelParams::with_alpha(50.0).n_cells(100);
    let opts = SimOptions {
        sample_every: 0,
        snapshot_times: vec![110.0],
    };
    let out = simulate_from_rest(&params, &opts).expect("simulation");
    let w = wave_diagnostics(&out.kicks, &params).expect("diagnostics");

    for d in w
        .delays
        .iter()
        .filter(|d| d.node_j % 33 == 0 && d.pulse_n < 3)
    {
        println!(
            "pulse {} node {:>2} -> {:>2}: delay {:.4}",
            d.pulse_n,
            d.node_j + 1,
            d.node_j + 2,
            d.delay
        );
    }
    let beta = w.beta.expect("wave reached every node");
    println!(
        "beta = {beta:.6}, speed = {:.3} nodes per unit time",
        w.speed.unwrap()
    );
    println!(
        "T_e = {:.6}, relative discrepancy {:.2}%",
        w.t_e.unwrap(),
        100.0 * w.discrepancy.unwrap()
    );

    // Excited nodes in the t = 110 snapshot: the front of the pulse kicked at t = 100.
    let (_, cells) = &out.snapshots[0];
    let excited: Vec<usize> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.u > 0.0)
        .map(|(j, _)| j + 1)
        .collect();
    println!(
        "u > 0 at t = 110 on nodes {:?}..{:?}",
        excited.first(),
        excited.last()
    );
}
