//! One PASS/FAIL line per acceptance criterion, each against its runtime budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use std::path::Path;
use std::time::{Duration, Instant};

use kicked_fhn::analysis::{
    classify_regime, contraction_over_period, filtering_report, locate_boundary, steady_kick_state,
    sweep, wave_diagnostics, RegimeLabel, RegimeReport, KNOWN_BOUNDARIES,
};
use kicked_fhn::singular::{fixed_point, return_map, time_of_flight, FixedPointOptions};
use kicked_fhn::{f, simulate_from_rest, ModelParams, SimOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x - target).abs() <= rel * target.abs()
}

fn chain(alpha: f64, n: usize, t_end: f64) -> (ModelParams, Vec<RegimeReport>) {
    let p = ModelParams::with_alpha(alpha).n_cells(n).t_end(t_end);
    let out = simulate_from_rest(&p, &SimOptions::quiet()).expect("simulation");
    let reports = filtering_report(&out, &p);
    (p, reports)
}

fn describe(r: &RegimeReport) -> String {
    format!(
        "node {} {} {} T={:.4}",
        r.node,
        r.label,
        r.signature
            .as_ref()
            .map(|s| s.pattern_string())
            .unwrap_or_else(|| "-".into()),
        r.steady_period.unwrap_or(f64::NAN)
    )
}

fn c1() -> Outcome {
    let r = classify_regime(&ModelParams::with_alpha(50.0).t_end(600.0)).unwrap();
    let period = r.steady_period.unwrap_or(f64::NAN);
    outcome(
        r.label == RegimeLabel::SimplePeriodic && within(period, 50.0, 0.01),
        format!("{} period {period}", r.label),
    )
}

fn c2() -> Outcome {
    let r = classify_regime(&ModelParams::with_alpha(8.0)).unwrap();
    let s = r.signature.clone().unwrap();
    outcome(
        s.n_large == 1 && s.n_small == 1 && within(s.period, 16.0, 0.01),
        format!(
            "{} {}L {}s period {}",
            r.label, s.n_large, s.n_small, s.period
        ),
    )
}

fn c3() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (alpha, allowed) in [(8.3, &[2][..]), (8.4, &[3]), (8.41, &[4]), (8.45, &[5, 6])] {
        let r = classify_regime(&ModelParams::with_alpha(alpha).t_end(1000.0)).unwrap();
        let s = r.signature.clone().unwrap();
        let per_small = if s.n_small == 1 {
            s.n_large
        } else {
            usize::MAX
        };
        pass &= allowed.contains(&per_small) && r.label == RegimeLabel::ComplexMMO;
        detail.push(format!("{alpha}:{}", s.pattern_string()));
    }
    outcome(
        pass,
        format!("{} (8.45 measured as recorded)", detail.join(" ")),
    )
}

fn c4() -> Outcome {
    let located = sweep::in_pool(&KNOWN_BOUNDARIES, |k| {
        locate_boundary(
            |a| classify_regime(&ModelParams::with_alpha(a).t_end(2000.0)).map(|r| r.label),
            k.low,
            k.high,
            k.bracket,
            1e-3,
        )
    });
    let mut pass = true;
    let mut detail = Vec::new();
    for (k, b) in KNOWN_BOUNDARIES.iter().zip(located) {
        match b {
            Ok(b) => {
                pass &= (b.alpha - k.reference).abs() <= 0.15;
                detail.push(format!("{}={:.4} (ref {})", k.name, b.alpha, k.reference));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("{}: {e}", k.name));
            }
        }
    }
    outcome(pass, detail.join(", "))
}

fn c5() -> Outcome {
    let (_, r) = chain(4.0, 5, 400.0);
    let period = |i: usize| r[i].steady_period.unwrap_or(f64::NAN);
    let pass = within(period(0), 8.0, 0.01)
        && r[1].label == RegimeLabel::SimpleMMO
        && within(period(1), 16.0, 0.01)
        && r[2].label == RegimeLabel::SimplePeriodic
        && within(period(2), 16.0, 0.01);
    outcome(
        pass,
        r[..3].iter().map(describe).collect::<Vec<_>>().join("; "),
    )
}

fn c6() -> Outcome {
    let (_, r) = chain(4.2, 4, 600.0);
    let target = 8.0 * 4.2;
    let sig = |i: usize| r[i].signature.clone();
    let pass = match (sig(1), sig(2), sig(3)) {
        (Some(s2), Some(s3), Some(s4)) => {
            r[1].label == RegimeLabel::ComplexMMO
                && (s2.n_large, s2.n_small) == (3, 1)
                && within(s2.period, target, 0.01)
                && s3.n_large == 3
                && within(s3.period, target, 0.01)
                && s4.pattern == s3.pattern
                && within(s4.period, s3.period, 0.01)
        }
        _ => false,
    };
    outcome(
        pass,
        r[1..].iter().map(describe).collect::<Vec<_>>().join("; "),
    )
}

fn c7() -> Outcome {
    let (_, r) = chain(8.41, 3, 1000.0);
    let n = |i: usize| r[i].n_large().unwrap_or(usize::MAX);
    outcome(
        n(1) < n(0),
        format!(
            "{}; {} (n_large {} vs {})",
            describe(&r[0]),
            describe(&r[1]),
            n(0),
            n(1)
        ),
    )
}

fn c8() -> Outcome {
    let p = ModelParams::with_alpha(10.0).epsilon(0.0);
    let fp = fixed_point(&p, &FixedPointOptions::default()).unwrap();
    let lo = f(p.c) + 1e-9;
    let low = return_map(lo, &p).unwrap();
    let pass = fp.residual.abs() < 1e-9
        && fp.derivative.abs() < 1.0
        && low.v_out > lo
        && fp.upper.v_out < fp.upper.v_in;
    outcome(
        pass,
        format!(
            "v*={:.12} |F-v|={:.1e} F'={:.4} v̄={:.6}",
            fp.v_star,
            fp.residual.abs(),
            fp.derivative,
            fp.upper.v_in
        ),
    )
}

/// Adaptive Simpson, written independently of the library's quadrature.
fn simpson(g: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        s: f64,
        tol: f64,
        d: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (0.5 * (a + m), 0.5 * (m + b));
        let (fl, fr) = (g(l), g(r));
        let sl = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
        let sr = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
        if d == 0 || (sl + sr - s).abs() <= 15.0 * tol {
            return sl + sr + (sl + sr - s) / 15.0;
        }
        rec(g, a, m, fa, fl, fm, sl, tol / 2.0, d - 1)
            + rec(g, m, b, fm, fr, fb, sr, tol / 2.0, d - 1)
    }
    let (fa, fb, fm) = (g(a), g(b), g(0.5 * (a + b)));
    rec(
        g,
        a,
        b,
        fa,
        fm,
        fb,
        (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        tol,
        50,
    )
}

fn c9() -> Outcome {
    let c = -1.2;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let integrand = |u: f64| (3.0 - 3.0 * u * u) / (u - c);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        // left branch below c, left branch between c and the fold, right branch
        let (lo, hi) = match i % 3 {
            0 => (-2.5, c - 1e-3),
            1 => (c + 1e-3, -1.0),
            _ => (1.0, 2.5),
        };
        let (u1, u2) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        let closed = time_of_flight(u1, u2, c).unwrap();
        worst = worst.max((closed - simpson(&integrand, u1, u2, 1e-12)).abs());
    }
    outcome(
        worst < 1e-9,
        format!("max |closed - quadrature| = {worst:.2e}"),
    )
}

/// Post-transient pre-kick `v` of the front node.
fn kick_v(alpha: f64, eps: f64) -> f64 {
    steady_kick_state(&ModelParams::with_alpha(alpha).epsilon(eps))
        .unwrap()
        .v
}

fn c10() -> Outcome {
    const TIE: f64 = 1e-9;
    let mut pass = true;
    let mut detail = Vec::new();
    for (alpha, floor) in [(50.0, TIE), (10.0, 0.0)] {
        let v_star = fixed_point(
            &ModelParams::with_alpha(alpha),
            &FixedPointOptions::default(),
        )
        .unwrap()
        .v_star;
        let errs: Vec<f64> = [0.1, 0.05, 0.01]
            .iter()
            .map(|&e| (kick_v(alpha, e) - v_star).abs())
            .collect();
        pass &= errs
            .windows(2)
            .all(|w| w[1] < w[0] || w[1].max(w[0]) < floor);
        detail.push(format!(
            "alpha {alpha}: {:.2e} {:.2e} {:.2e}",
            errs[0], errs[1], errs[2]
        ));
    }
    outcome(
        pass,
        format!(
            "{} (alpha 50 errors tie below {TIE:.0e})",
            detail.join("; ")
        ),
    )
}

fn c11() -> Outcome {
    let p = ModelParams::with_alpha(50.0).n_cells(100).t_end(600.0);
    let out = simulate_from_rest(&p, &SimOptions::quiet()).unwrap();
    let w = wave_diagnostics(&out.kicks, &p).unwrap();
    let spread = w.delay_spread.unwrap_or(f64::INFINITY);
    let disc = w.discrepancy.unwrap_or(f64::INFINITY);
    outcome(
        !w.propagation_failed && spread <= 0.05 && disc <= 0.25,
        format!(
            "beta={:.6} T_e={:.6} discrepancy={:.2}% spread={spread:.1e} pulses={}",
            w.beta.unwrap_or(f64::NAN),
            w.t_e.unwrap_or(f64::NAN),
            100.0 * disc,
            w.complete_pulses
        ),
    )
}

fn c12() -> Outcome {
    let p = ModelParams::with_alpha(50.0);
    let base = steady_kick_state(&p).unwrap();
    let c = contraction_over_period(&p, base, (1e-3, 1e-3)).unwrap();
    outcome(
        c.contracts(),
        format!("g(0)={:.3e} g(alpha)={:.3e}", c.g_start, c.g_end),
    )
}

fn cli_runs(dir: &Path) {
    let runs: [&[&str]; 9] = [
        &["simulate", "--alpha", "50"],
        &["simulate", "--alpha", "8"],
        &["simulate", "--alpha", "8.3", "--t-end", "1000"],
        &["simulate", "--alpha", "8.4", "--t-end", "1000"],
        &["simulate", "--alpha", "8.41", "--t-end", "1000"],
        &["simulate", "--alpha", "8.45", "--t-end", "1000"],
        &["sweep", "--locate-boundaries"],
        &["simulate", "--alpha", "4", "--cells", "5", "--t-end", "400"],
        &[
            "simulate", "--alpha", "4.2", "--cells", "4", "--t-end", "600",
        ],
    ];
    for (i, args) in runs.iter().enumerate() {
        let out = dir.join(format!("run{i}"));
        let mut argv = vec!["kfhn".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        argv.extend(["--out".to_string(), out.display().to_string()]);
        kicked_fhn::cli::run(argv).expect("cli run");
    }
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    for run in std::fs::read_dir(dir).unwrap() {
        let run = run.unwrap().path();
        for file in std::fs::read_dir(&run).unwrap() {
            let path = file.unwrap().path();
            let name = path.strip_prefix(dir).unwrap().display().to_string();
            files.push((name, std::fs::read(&path).unwrap()));
        }
    }
    files.sort();
    files
}

fn c13() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    cli_runs(a.path());
    cli_runs(b.path());
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    let bytes: usize = ta.iter().map(|(_, d)| d.len()).sum();
    outcome(
        !ta.is_empty() && ta == tb,
        format!("{} files, {bytes} bytes compared", ta.len()),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, Check); 13] = [
        ("1 low-frequency periodic response", 5, c1),
        ("2 simple MMO at alpha = 8", 5, c2),
        ("3 MMO cascade", 20, c3),
        ("4 regime boundaries", 180, c4),
        ("5 filtering at alpha = 4", 10, c5),
        ("6 filtering at alpha = 4.2", 20, c6),
        ("7 downstream simplification at alpha = 8.41", 10, c7),
        ("8 singular map fixed point", 1, c8),
        ("9 closed form vs quadrature", 1, c9),
        ("10 epsilon -> 0 consistency", 30, c10),
        ("11 traveling-wave delays and speed", 60, c11),
        ("12 Lyapunov contraction", 5, c12),
        ("13 byte-identical outputs", 600, c13),
    ];
    let mut failed = Vec::new();
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let mut o = check();
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(budget) {
            o.pass = false;
            o.detail += &format!(" [over budget {budget} s]");
        }
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} [{name}] {:.2}s: {}",
            elapsed.as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
