//! At alpha = 8 the front node alternates one depolarization with one
//! small sub-threshold loop: a 2 alpha-periodic mixed-mode oscillation.

use kicked_fhn::analysis::{classify_regime, extract_loops, loops::pattern_string};
use kicked_fhn::{simulate_from_rest, ModelParams, SimOptions};

fn main() {
    let params = ModelParams::with_alpha(8.0);
    let out = simulate_from_rest(&params, &SimOptions::quiet()).expect("simulation");
    let loops = extract_loops(out.kicks.events(0), &params).expect("loops");

    for l in loops.iter().take(6) {
        println!(
            "[{:>6.1}, {:>6.1}) peak u = {:>8.4}  post-kick v = {:>8.4}  {:?}",
            l.start, l.end, l.peak_u, l.post_kick_v, l.label
        );
    }
    let labels: Vec<_> = loops.iter().map(|l| l.label).collect();
    println!("post-transient loops: {}", pattern_string(&labels));

    let report = classify_regime(&params).expect("classification");
    let sig = report.signature.expect("periodic");
    println!(
        "{}: {} large, {} small per period {}",
        report.label, sig.n_large, sig.n_small, sig.period
    );
}
