//! Reference times for the simple MMO in the singular limit.
//!
//! green: kicked from rest, time until the cell is back on the left branch at
//! the level where the next kick keeps it sub-threshold. blue: same, down to
//! the last level from which a kick still depolarizes. red: time from the
//! left fold to within delta of rest, the duration of the small loop.

use kicked_fhn::singular::{delta_grid, time_estimates};

fn main() {
    let c = -1.2;
    let est = time_estimates(c, 1.0, &delta_grid(c, 12)).expect("estimates");
    println!("green = {:.6}, blue = {:.6}", est.green, est.blue);
    for (delta, red) in &est.red {
        println!("delta = {delta:>10.3e}: red = {red:>9.5}");
    }
    if let Some((lo, hi)) = est.window() {
        println!("window between green and blue: [{lo:.4}, {hi:.4}]");
    }
}
