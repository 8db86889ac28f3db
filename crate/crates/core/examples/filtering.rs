//! Activity simplifies as it travels down the chain.

use kicked_fhn::analysis::filtering_report;
use kicked_fhn::{simulate_from_rest, ModelParams, SimOptions};

fn main() {
    for (alpha, t_end) in [
        (8.0, 600.0),
        (4.0, 400.0),
        (4.2, 600.0),
        (8.41, 1000.0),
        (1.1, 400.0),
    ] {
        let params = ModelParams::with_alpha(alpha).n_cells(4).t_end(t_end);
        let out = simulate_from_rest(&params, &SimOptions::quiet()).expect("simulation");
        println!("alpha = {alpha}");
        for r in filtering_report(&out, &params) {
            let sig = r.signature.as_ref();
            println!(
                "  node {}: {:<14} {:<8} period {:>8.3}  rate {:.5}",
                r.node,
                r.label.as_str(),
                sig.map(|s| s.pattern_string()).unwrap_or_default(),
                r.steady_period.unwrap_or(f64::NAN),
                r.depolarization_rate.unwrap_or(f64::NAN)
            );
        }
    }
}
