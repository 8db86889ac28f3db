//! Between the simple MMO and the periodic response the number of large
//! loops per small loop grows as alpha increases.

use kicked_fhn::analysis::classify_regime;
use kicked_fhn::ModelParams;

fn main() {
    println!(
        "{:>6}  {:<14} {:>7} {:>7} {:>9}  pattern",
        "alpha", "label", "n_large", "n_small", "period"
    );
    for alpha in [8.2, 8.3, 8.4, 8.41, 8.45, 8.47, 8.48, 8.5] {
        let r =
            classify_regime(&ModelParams::with_alpha(alpha).t_end(2000.0)).expect("classification");
        match &r.signature {
            Some(s) => println!(
                "{alpha:>6}  {:<14} {:>7} {:>7} {:>9.3}  {}",
                r.label.as_str(),
                s.n_large,
                s.n_small,
                s.period,
                s.pattern_string()
            ),
            None => println!(
                "{alpha:>6}  {:<14} ({})",
                r.label.as_str(),
                r.note.unwrap_or_default()
            ),
        }
    }
}
