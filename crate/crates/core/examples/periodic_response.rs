//! Low-frequency forcing: every kick triggers one full excursion and the
//! front node settles into an alpha-periodic response.

use kicked_fhn::analysis::classify_regime;
use kicked_fhn::{simulate_from_rest, ModelParams, SimOptions};

fn main() {
    let params = ModelParams::with_alpha(50.0);
    let out = simulate_from_rest(&params, &SimOptions::default()).expect("simulation");

    let u = out.trajectory.node_u(0);
    let (t_max, u_max) = u
        .iter()
        .copied()
        .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    println!(
        "{} samples, highest u = {u_max:.4} at t = {t_max:.2}",
        u.len()
    );
    for e in out.kicks.events(0).iter().take(4) {
        println!(
            "kick at t = {:>5}: (u, v) = ({:.6}, {:.6}), previous loop peaked at {:.4}",
            e.t, e.pre.u, e.pre.v, e.peak_u
        );
    }

    let report = classify_regime(&params).expect("classification");
    println!("{} with period {:?}", report.label, report.steady_period);
}
