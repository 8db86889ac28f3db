use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::config::RunConfig;
use super::format::{f17, f17_opt, to_json};
use super::svg::{line_plot, Series};
use super::{CliError, SCHEMA_VERSION};
use crate::analysis::regime::classify_regime;
use crate::analysis::{
    filtering_report, grid_brackets, locate_boundary, sweep, wave_diagnostics, Boundary,
    KnownBoundary, RegimeReport, KNOWN_BOUNDARIES,
};
use crate::integrator::{simulate_from_rest, SimError, SimOptions};
use crate::model::ModelParams;
use crate::singular::{
    delta_grid, depolarizing_domain, fixed_point, return_map, time_estimates, FixedPointOptions,
    MapSample, SingularError,
};

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

fn prepare(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn sim_error(e: SimError) -> CliError {
    match e {
        SimError::Params(p) => CliError::validation(p.key(), p.to_string()),
        other => CliError::Numeric(other.to_string()),
    }
}

fn singular_error(e: SingularError) -> CliError {
    match e {
        SingularError::Params(p) => CliError::validation(p.key(), p.to_string()),
        other => CliError::Numeric(other.to_string()),
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    command: &'static str,
    params: &'a ModelParams,
    nodes: Vec<RegimeReport>,
}

pub fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let p = &cfg.params;
    prepare(&cfg.out)?;
    let opts = SimOptions {
        sample_every: cfg.sample_every,
        snapshot_times: Vec::new(),
    };
    let out = simulate_from_rest(p, &opts).map_err(sim_error)?;

    let mut ts = String::from("t");
    for j in 1..=p.n_cells {
        let _ = write!(ts, ",u_{j},v_{j}");
    }
    ts.push('\n');
    for (t, cells) in out.trajectory.t.iter().zip(&out.trajectory.states) {
        ts.push_str(&f17(*t));
        for cell in cells {
            let _ = write!(ts, ",{},{}", f17(cell.u), f17(cell.v));
        }
        ts.push('\n');
    }
    write(&cfg.out, "timeseries.csv", &ts)?;

    let mut kicks = String::from("node,n,t\n");
    for j in 0..p.n_cells {
        for (n, e) in out.kicks.events(j).iter().enumerate() {
            let _ = writeln!(kicks, "{},{},{}", j + 1, n, f17(e.t));
        }
    }
    write(&cfg.out, "kicks.csv", &kicks)?;

    let nodes = filtering_report(&out, p);
    for r in &nodes {
        println!(
            "node {}: {} pattern={} period={}",
            r.node,
            r.label,
            r.signature
                .as_ref()
                .map(|s| s.pattern_string())
                .unwrap_or_default(),
            f17_opt(r.steady_period)
        );
    }
    write(
        &cfg.out,
        "summary.json",
        &to_json(&Summary {
            schema_version: SCHEMA_VERSION,
            command: "simulate",
            params: p,
            nodes,
        }),
    )?;

    if cfg.svg {
        let series: Vec<Series> = (0..p.n_cells.min(6))
            .map(|j| Series {
                name: ["u_1", "u_2", "u_3", "u_4", "u_5", "u_6"][j],
                points: out.trajectory.node_u(j),
            })
            .collect();
        write(
            &cfg.out,
            "timeseries.svg",
            &line_plot(&format!("alpha = {}", f17(p.alpha)), &series),
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundaryEntry {
    reference: f64,
    low: &'static str,
    high: &'static str,
    grid_bracket: (f64, f64),
    /// Bisection result, or the grid-bracket midpoint without refinement.
    value: Option<f64>,
    method: &'static str,
    bracket: Option<(f64, f64)>,
    error: Option<String>,
}

#[derive(Serialize)]
struct Boundaries {
    schema_version: u32,
    alpha0: Option<BoundaryEntry>,
    alpha1: Option<BoundaryEntry>,
    alpha2: Option<BoundaryEntry>,
}

pub fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let template = &cfg.params;
    let g = &cfg.sweep;
    prepare(&cfg.out)?;
    let grid = sweep::alpha_grid(g.alpha_min, g.alpha_max, g.alpha_step, template.dt);
    let reports = sweep::run_sweep(template, &grid).map_err(sim_error)?;

    let mut csv = String::from("alpha,label,n_large,n_small,period\n");
    for r in &reports {
        let sig = r.signature.as_ref();
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            f17(r.alpha),
            r.label,
            sig.map(|s| s.n_large.to_string()).unwrap_or_default(),
            sig.map(|s| s.n_small.to_string()).unwrap_or_default(),
            f17_opt(r.steady_period)
        );
        println!("alpha {}: {}", f17(r.alpha), r.label);
    }
    write(&cfg.out, "regimes.csv", &csv)?;

    let found: Vec<(KnownBoundary, Option<(f64, f64)>)> = KNOWN_BOUNDARIES
        .iter()
        .map(|k| (*k, grid_brackets(&reports, k)))
        .collect();
    let refined: Vec<Option<Result<Boundary, String>>> = if g.locate_boundaries {
        sweep::in_pool(&found, |(known, bracket)| {
            bracket.map(|b| {
                locate_boundary(
                    |a| classify_regime(&template.clone().at_alpha(a)).map(|r| r.label),
                    known.low,
                    known.high,
                    b,
                    template.dt,
                )
                .map_err(|e| e.to_string())
            })
        })
    } else {
        vec![None; found.len()]
    };
    let entries: Vec<Option<BoundaryEntry>> = found
        .iter()
        .zip(refined)
        .map(|((known, bracket), refined)| {
            bracket.map(|b| {
                let mut entry = BoundaryEntry {
                    reference: known.reference,
                    low: known.low.as_str(),
                    high: known.high.as_str(),
                    grid_bracket: b,
                    value: Some(0.5 * (b.0 + b.1)),
                    method: "grid",
                    bracket: Some(b),
                    error: None,
                };
                match refined {
                    Some(Ok(boundary)) => {
                        entry.value = Some(boundary.alpha);
                        entry.bracket = Some(boundary.bracket);
                        entry.method = "bisection";
                    }
                    Some(Err(message)) => {
                        entry.value = None;
                        entry.bracket = None;
                        entry.method = "bisection";
                        entry.error = Some(message);
                    }
                    None => {}
                }
                entry
            })
        })
        .collect();
    let mut it = entries.into_iter();
    let doc = Boundaries {
        schema_version: SCHEMA_VERSION,
        alpha0: it.next().flatten(),
        alpha1: it.next().flatten(),
        alpha2: it.next().flatten(),
    };
    write(&cfg.out, "boundaries.json", &to_json(&doc))?;

    if cfg.svg {
        let points = |f: fn(&RegimeReport) -> Option<f64>| -> Vec<(f64, f64)> {
            reports
                .iter()
                .filter_map(|r| f(r).map(|y| (r.alpha, y)))
                .collect()
        };
        let series = [
            Series {
                name: "n_large",
                points: points(|r| r.signature.as_ref().map(|s| s.n_large as f64)),
            },
            Series {
                name: "n_small",
                points: points(|r| r.signature.as_ref().map(|s| s.n_small as f64)),
            },
        ];
        write(
            &cfg.out,
            "regimes.svg",
            &line_plot("loop counts per period", &series),
        )?;
    }
    Ok(())
}

/// Levels at which the return map is sampled for `fmap.csv`.
pub const MAP_SAMPLES: usize = 400;

#[derive(Serialize)]
struct FixedPointDoc {
    schema_version: u32,
    alpha: f64,
    c: f64,
    #[serde(rename = "A")]
    a: f64,
    found: bool,
    v_star: Option<f64>,
    derivative: Option<f64>,
    residual: Option<f64>,
    stable: Option<bool>,
    lower: Option<MapSample>,
    upper: Option<MapSample>,
    reason: Option<String>,
    /// Evidence when no fixed point was found.
    scan: Vec<MapSample>,
}

pub fn map(cfg: &RunConfig) -> Result<(), CliError> {
    let p = &cfg.params;
    prepare(&cfg.out)?;
    let (lo, hi) = depolarizing_domain(p).map_err(singular_error)?;
    let mut csv = String::from("v_in,v_out,defined\n");
    let mut curve = Vec::new();
    for i in 0..=MAP_SAMPLES {
        let v = lo + (hi - lo) * i as f64 / MAP_SAMPLES as f64;
        let s = return_map(v, p).map_err(singular_error)?;
        let v_out = if s.defined {
            f17(s.v_out)
        } else {
            String::new()
        };
        let _ = writeln!(csv, "{},{},{}", f17(s.v_in), v_out, s.defined);
        if s.defined {
            curve.push((s.v_in, s.v_out));
        }
    }
    write(&cfg.out, "fmap.csv", &csv)?;

    // Search every alpha so that absence is recorded rather than refused.
    let opts = FixedPointOptions {
        alpha_min_search: 0.0,
        ..Default::default()
    };
    let mut doc = FixedPointDoc {
        schema_version: SCHEMA_VERSION,
        alpha: p.alpha,
        c: p.c,
        a: p.a,
        found: false,
        v_star: None,
        derivative: None,
        residual: None,
        stable: None,
        lower: None,
        upper: None,
        reason: None,
        scan: Vec::new(),
    };
    match fixed_point(p, &opts) {
        Ok(fp) => {
            println!(
                "fixed point v* = {}, F'(v*) = {}",
                f17(fp.v_star),
                f17(fp.derivative)
            );
            doc.found = true;
            doc.v_star = Some(fp.v_star);
            doc.derivative = Some(fp.derivative);
            doc.residual = Some(fp.residual);
            doc.stable = Some(fp.derivative.abs() < 1.0);
            doc.lower = Some(fp.lower);
            doc.upper = Some(fp.upper);
        }
        Err(SingularError::NoFixedPoint { scan, .. }) => {
            println!("no fixed point at alpha = {}", f17(p.alpha));
            doc.reason = Some("F(v) - v has no sign change on the depolarizing domain".into());
            doc.scan = scan;
        }
        Err(e) => return Err(singular_error(e)),
    }
    write(&cfg.out, "fixedpoint.json", &to_json(&doc))?;

    let est = time_estimates(p.c, p.a, &delta_grid(p.c, 200)).map_err(singular_error)?;
    let mut te = String::from("delta,red,green,blue\n");
    for &(d, red) in &est.red {
        let _ = writeln!(
            te,
            "{},{},{},{}",
            f17(d),
            f17(red),
            f17(est.green),
            f17(est.blue)
        );
    }
    write(&cfg.out, "time_estimates.csv", &te)?;

    if cfg.svg {
        let series = [
            Series {
                name: "F",
                points: curve,
            },
            Series {
                name: "identity",
                points: vec![(lo, lo), (hi, hi)],
            },
        ];
        write(
            &cfg.out,
            "fmap.svg",
            &line_plot(&format!("return map, alpha = {}", f17(p.alpha)), &series),
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct WaveDoc<'a> {
    schema_version: u32,
    params: &'a ModelParams,
    snapshot_t: f64,
    beta: Option<f64>,
    speed: Option<f64>,
    t_e: Option<f64>,
    discrepancy: Option<f64>,
    delay_spread: Option<f64>,
    complete_pulses: usize,
    /// Nodes between consecutive pulses, `alpha / beta`.
    pulse_spacing: Option<f64>,
    propagation_failed: bool,
    first_silent_node: Option<usize>,
}

pub fn wave(cfg: &RunConfig) -> Result<(), CliError> {
    let p = &cfg.params;
    prepare(&cfg.out)?;
    let opts = SimOptions {
        sample_every: 0,
        snapshot_times: vec![cfg.snapshot_t],
    };
    let out = simulate_from_rest(p, &opts).map_err(sim_error)?;
    let report = wave_diagnostics(&out.kicks, p)
        .map_err(|e| CliError::validation("cells", e.to_string()))?;

    let mut csv = String::from("pulse_n,node_j,delay\n");
    for d in &report.delays {
        let _ = writeln!(csv, "{},{},{}", d.pulse_n, d.node_j + 1, f17(d.delay));
    }
    write(&cfg.out, "delays.csv", &csv)?;

    let doc = WaveDoc {
        schema_version: SCHEMA_VERSION,
        params: p,
        snapshot_t: cfg.snapshot_t,
        beta: report.beta,
        speed: report.speed,
        t_e: report.t_e,
        discrepancy: report.discrepancy,
        delay_spread: report.delay_spread,
        complete_pulses: report.complete_pulses,
        pulse_spacing: report.beta.map(|b| p.alpha / b),
        propagation_failed: report.propagation_failed,
        first_silent_node: report.first_silent_node,
    };
    write(&cfg.out, "wave.json", &to_json(&doc))?;
    if report.propagation_failed {
        println!(
            "propagation failed: node {} never fired",
            report.first_silent_node.unwrap_or(0)
        );
    } else {
        println!(
            "beta = {}, speed = {}, T_e = {}",
            f17_opt(report.beta),
            f17_opt(report.speed),
            f17_opt(report.t_e)
        );
    }

    let (_, cells) = out
        .snapshots
        .first()
        .ok_or_else(|| CliError::Numeric("snapshot missing".into()))?;
    let mut profile = String::from("node,u,v\n");
    for (j, cell) in cells.iter().enumerate() {
        let _ = writeln!(profile, "{},{},{}", j + 1, f17(cell.u), f17(cell.v));
    }
    write(&cfg.out, "profile.csv", &profile)?;

    if cfg.svg {
        let points = cells
            .iter()
            .enumerate()
            .map(|(j, c)| ((j + 1) as f64, c.u))
            .collect();
        let rest = cells
            .iter()
            .enumerate()
            .map(|(j, _)| ((j + 1) as f64, p.c))
            .collect();
        let series = [
            Series {
                name: "u_j",
                points,
            },
            Series {
                name: "rest",
                points: rest,
            },
        ];
        write(
            &cfg.out,
            "profile.svg",
            &line_plot(&format!("profile at t = {}", f17(cfg.snapshot_t)), &series),
        )?;
    }
    Ok(())
}
