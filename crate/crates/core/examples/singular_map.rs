//! The eps = 0 return map: kick a left-branch point, let it run for one
//! forcing period, read off the new left-branch level.

use kicked_fhn::singular::{fixed_point, return_map, FixedPointOptions, SingularError};
use kicked_fhn::{f, ModelParams};

fn main() {
    let open = FixedPointOptions {
        alpha_min_search: 0.0,
        ..Default::default()
    };
    for alpha in [5.0, 10.0, 20.0, 50.0] {
        let params = ModelParams::with_alpha(alpha).epsilon(0.0);
        let rest = f(params.c);
        let probe = return_map(rest + 0.1, &params).expect("map");
        print!("alpha = {alpha:>4}: F(f(c) + 0.1) = {:.6}  ", probe.v_out);
        match fixed_point(&params, &open) {
            Ok(fp) => println!(
                "v* = {:.12} (f(c) + {:.3e}), F'(v*) = {:.4}, residual {:.1e}",
                fp.v_star,
                fp.v_star - rest,
                fp.derivative,
                fp.residual
            ),
            Err(SingularError::NoFixedPoint { scan, .. }) => {
                let least = scan
                    .iter()
                    .map(|s| s.v_out - s.v_in)
                    .fold(f64::INFINITY, f64::min);
                println!("no fixed point; min F(v) - v over the scan = {least:.4}")
            }
            Err(e) => println!("{e}"),
        }
    }
}
