//! The `eps = 0` hybrid dynamics on the critical manifold.
//!
//! In the singular limit a cell lives on the left or right attracting branch
//! of `v = f(u)`. Between kicks it follows the slow flow `dv/dt = u - c`
//! along its branch; the right branch drains into the fold `(1, 2)`, from
//! which the state jumps to `(-2, 2)` on the left branch, and the left branch
//! relaxes toward the rest state `(c, f(c))` without reaching it. A kick
//! lowers `v` by `A` and the state slides horizontally to the first branch
//! point on its right.
//!
//! Times along a branch are exact: with `dv = f'(u) du`,
//!
//! ```text
//!   t(u1 -> u2) = integral of f'(u) / (u - c) du
//!              = 3 (1 - c^2) ln|(u2 - c) / (u1 - c)| - 6c (u2 - u1)
//!                - 3/2 ((u2 - c)^2 - (u1 - c)^2)
//! ```
//!
//! The only numerical step is inverting that closed form for the residual
//! time on the final branch segment.

use serde::Serialize;
use thiserror::Error;

use crate::model::{f, f_inverse, f_prime, Branch, DomainError, ModelParams, ParamError};

/// Closest approach to the rest abscissa that [`flow`] reports.
pub const REST_CAP: f64 = 1e-13;

const INVERT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingularError {
    #[error("time of flight into the rest abscissa u = c = {c} is infinite")]
    Singularity { c: f64 },
    #[error("u1 = {u1} and u2 = {u2} lie on opposite sides of c = {c}")]
    OppositeSides { u1: f64, u2: f64, c: f64 },
    #[error("kicked level v = {w} has no landing point on the right branch")]
    Geometry { w: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("alpha = {alpha} is below the fixed-point search range (alpha >= {alpha_min})")]
    BelowSearchRange { alpha: f64, alpha_min: f64 },
    #[error("no depolarizing fixed point of the return map at alpha = {alpha}")]
    NoFixedPoint { alpha: f64, scan: Vec<MapSample> },
    #[error("no left-branch levels produce a depolarizing kick for A = {a}")]
    EmptyDomain { a: f64 },
    #[error("delta = {delta} must lie in (0, {max}]")]
    DeltaOutOfRange { delta: f64, max: f64 },
}

/// A state of the singular hybrid system: a branch and a voltage on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularPoint {
    pub branch: Branch,
    pub u: f64,
}

impl SingularPoint {
    pub fn left(u: f64) -> Self {
        Self {
            branch: Branch::Left,
            u,
        }
    }

    pub fn right(u: f64) -> Self {
        Self {
            branch: Branch::Right,
            u,
        }
    }

    /// Left ⇒ `u <= -1`, right ⇒ `u >= 1`, never on the middle branch.
    pub fn is_valid(&self) -> bool {
        match self.branch {
            Branch::Left => self.u <= -1.0,
            Branch::Right => self.u >= 1.0,
            Branch::Middle => false,
        }
    }

    pub fn v(&self) -> f64 {
        f(self.u)
    }
}

/// Slow-flow travel time from `u1` to `u2` along one branch.
///
/// Positive when the motion from `u1` to `u2` follows `dv/dt = u - c`.
pub fn time_of_flight(u1: f64, u2: f64, c: f64) -> Result<f64, SingularError> {
    let (d1, d2) = (u1 - c, u2 - c);
    if d1 == 0.0 || d2 == 0.0 {
        return Err(SingularError::Singularity { c });
    }
    if (d1 > 0.0) != (d2 > 0.0) {
        return Err(SingularError::OppositeSides { u1, u2, c });
    }
    Ok(tof_unchecked(u1, u2, c))
}

#[inline]
fn tof_unchecked(u1: f64, u2: f64, c: f64) -> f64 {
    let (d1, d2) = (u1 - c, u2 - c);
    3.0 * (1.0 - c * c) * (d2 / d1).ln() - 6.0 * c * (u2 - u1) - 1.5 * (d2 * d2 - d1 * d1)
}

/// Applies a kick of size `a` and resolves the horizontal fast jump.
pub fn kick_resolve(p: SingularPoint, a: f64) -> Result<SingularPoint, SingularError> {
    let w = f(p.u) - a;
    if p.branch == Branch::Left && w > -2.0 {
        let landing = f_inverse(w, Branch::Left)?;
        if landing > p.u || a == 0.0 {
            return Ok(SingularPoint::left(landing));
        }
    }
    f_inverse(w, Branch::Right)
        .map(SingularPoint::right)
        .map_err(|_| SingularError::Geometry { w })
}

enum Sink {
    Rest,
    Fold(f64),
}

fn sink(branch: Branch, c: f64) -> Sink {
    match branch {
        Branch::Left if c <= -1.0 => Sink::Rest,
        Branch::Left => Sink::Fold(-1.0),
        Branch::Right if c >= 1.0 => Sink::Rest,
        _ => Sink::Fold(1.0),
    }
}

/// Advances the singular dynamics by `duration`, taking fold jumps as they
/// come. The rest abscissa is approached but reported no closer than
/// [`REST_CAP`].
pub fn flow(p: SingularPoint, duration: f64, c: f64) -> SingularPoint {
    let mut p = p;
    let mut remaining = duration.max(0.0);
    loop {
        match sink(p.branch, c) {
            Sink::Rest => {
                if (p.u - c).abs() <= REST_CAP {
                    return p;
                }
                let cap = if p.u < c { c - REST_CAP } else { c + REST_CAP };
                if remaining >= tof_unchecked(p.u, cap, c) {
                    return SingularPoint {
                        branch: p.branch,
                        u: cap,
                    };
                }
                return SingularPoint {
                    branch: p.branch,
                    u: invert(p.u, cap, remaining, c),
                };
            }
            Sink::Fold(fold) => {
                let to_fold = tof_unchecked(p.u, fold, c);
                if remaining >= to_fold {
                    remaining -= to_fold;
                    p = if fold > 0.0 {
                        SingularPoint::left(-2.0)
                    } else {
                        SingularPoint::right(2.0)
                    };
                    continue;
                }
                return SingularPoint {
                    branch: p.branch,
                    u: invert(p.u, fold, remaining, c),
                };
            }
        }
    }
}

/// Solves `tof(start, u) = target` for `u` between `start` and `end`, where
/// the travel time grows monotonically from 0 at `start`.
fn invert(start: f64, end: f64, target: f64, c: f64) -> f64 {
    if target <= 0.0 {
        return start;
    }
    // `near` has tof < target, `far` has tof >= target.
    let (mut near, mut far) = (start, end);
    let mut u = 0.5 * (near + far);
    for _ in 0..200 {
        let g = tof_unchecked(start, u, c) - target;
        if g < 0.0 {
            near = u;
        } else {
            far = u;
        }
        let slope = f_prime(u) / (u - c);
        let newton = u - g / slope;
        let (lo, hi) = (near.min(far), near.max(far));
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (near + far)
        };
        if (next - u).abs() <= INVERT_TOL * 1e-3 || (far - near).abs() <= INVERT_TOL * 1e-3 {
            return next;
        }
        u = next;
    }
    u
}

/// One sample of the kick-plus-flow return map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapSample {
    pub v_in: f64,
    pub v_out: f64,
    /// False when the flow of duration `alpha` does not end on the left branch.
    pub defined: bool,
}

/// Kick a left-branch point at level `v` and flow it for time `alpha`.
pub fn return_map(v: f64, params: &ModelParams) -> Result<MapSample, SingularError> {
    let start = SingularPoint::left(f_inverse(v, Branch::Left)?);
    let kicked = kick_resolve(start, params.a)?;
    let end = flow(kicked, params.alpha, params.c);
    Ok(MapSample {
        v_in: v,
        v_out: end.v(),
        defined: end.branch == Branch::Left,
    })
}

/// Left-branch levels whose kick lands on the right branch, `[f(c), A - 2]`.
pub fn depolarizing_domain(params: &ModelParams) -> Result<(f64, f64), SingularError> {
    let lo = f(params.c);
    let hi = params.a - 2.0;
    if hi <= lo {
        return Err(SingularError::EmptyDomain { a: params.a });
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointOptions {
    /// Smallest forcing period accepted.
    pub alpha_min_search: f64,
    /// Offset of the lower bracket end above `f(c)`.
    pub lower_offset: f64,
    pub scan_points: usize,
    pub tol: f64,
    /// Central-difference step for `F'`.
    pub h: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            alpha_min_search: 9.0,
            lower_offset: 1e-9,
            scan_points: 400,
            tol: 1e-10,
            h: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPoint {
    pub v_star: f64,
    /// `F'(v*)` by central difference.
    pub derivative: f64,
    /// `F(v*) - v*`.
    pub residual: f64,
    /// Lower bracket end, where `F(v) > v`.
    pub lower: MapSample,
    /// The scanned level `v̄` with `F(v̄) < v̄`.
    pub upper: MapSample,
}

/// Finds the depolarizing fixed point of the return map by scanning for a
/// sign change of `F(v) - v` and bisecting.
pub fn fixed_point(
    params: &ModelParams,
    options: &FixedPointOptions,
) -> Result<FixedPoint, SingularError> {
    params.validate_model()?;
    if params.alpha < options.alpha_min_search {
        return Err(SingularError::BelowSearchRange {
            alpha: params.alpha,
            alpha_min: options.alpha_min_search,
        });
    }
    let (rest_v, hi) = depolarizing_domain(params)?;
    let lo = rest_v + options.lower_offset;
    let gap = |s: &MapSample| s.v_out - s.v_in;

    let first = return_map(lo, params)?;
    let (mut below, mut above) = if first.defined && gap(&first) <= 0.0 {
        // The fixed point sits within `lower_offset` of rest (very long periods).
        (return_map(rest_v, params)?, first)
    } else {
        let n = options.scan_points.max(2);
        let mut scan = Vec::with_capacity(n + 1);
        let mut bracket = None;
        let mut prev: Option<MapSample> = None;
        for i in 0..=n {
            let v = lo + (hi - lo) * i as f64 / n as f64;
            let sample = return_map(v, params)?;
            scan.push(sample);
            if !sample.defined {
                prev = None;
                continue;
            }
            if let Some(p) = prev {
                if gap(&p) > 0.0 && gap(&sample) < 0.0 {
                    bracket = Some((p, sample));
                    break;
                }
            }
            prev = Some(sample);
        }
        match bracket {
            Some(b) => b,
            None => {
                return Err(SingularError::NoFixedPoint {
                    alpha: params.alpha,
                    scan,
                })
            }
        }
    };
    let (lower, upper) = (below, above);

    while above.v_in - below.v_in > options.tol {
        let mid = return_map(0.5 * (below.v_in + above.v_in), params)?;
        if mid.defined && gap(&mid) > 0.0 {
            below = mid;
        } else {
            above = mid;
        }
    }
    let v_star = 0.5 * (below.v_in + above.v_in);
    let at = return_map(v_star, params)?;
    let plus = return_map((v_star + options.h).min(hi), params)?;
    let minus = return_map(v_star - options.h, params)?;
    let derivative = (plus.v_out - minus.v_out) / (plus.v_in - minus.v_in);
    Ok(FixedPoint {
        v_star,
        derivative,
        residual: at.v_out - v_star,
        lower,
        upper,
    })
}

/// Reference times of the simple mixed-mode construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeEstimates {
    /// Kicked from rest, time to descend the left branch to `v = f(c) + A`.
    pub green: f64,
    /// Kicked from rest, time to descend the left branch to `v = A - 2`.
    pub blue: f64,
    /// `(delta, time from the left fold (-1, -2) to (c + delta, f(c + delta)))`.
    pub red: Vec<(f64, f64)>,
}

impl TimeEstimates {
    /// The `alpha` window `[green, blue]` where the kick after a full loop
    /// lands in the small-reset region, if the order is as expected.
    pub fn window(&self) -> Option<(f64, f64)> {
        (self.green < self.blue).then_some((self.green, self.blue))
    }
}

/// Time from the left fold to `c + delta` along the left branch.
pub fn fold_to_rest_time(delta: f64, c: f64) -> Result<f64, SingularError> {
    let max = -1.0 - c;
    if !(delta > 0.0 && delta <= max) {
        return Err(SingularError::DeltaOutOfRange { delta, max });
    }
    time_of_flight(-1.0, c + delta, c)
}

pub fn time_estimates(c: f64, a: f64, deltas: &[f64]) -> Result<TimeEstimates, SingularError> {
    let rest_v = f(c);
    let kicked = kick_resolve(SingularPoint::left(c), a)?;
    if kicked.branch != Branch::Right {
        return Err(SingularError::Geometry { w: rest_v - a });
    }
    let ascent = time_of_flight(kicked.u, 1.0, c)?;
    let descent_to = |v: f64| -> Result<f64, SingularError> {
        let u = f_inverse(v, Branch::Left)?;
        time_of_flight(-2.0, u, c)
    };
    let green = ascent + descent_to(rest_v + a)?;
    let blue = ascent + descent_to(a - 2.0)?;
    let red = deltas
        .iter()
        .map(|&d| fold_to_rest_time(d, c).map(|t| (d, t)))
        .collect::<Result<_, _>>()?;
    Ok(TimeEstimates { green, blue, red })
}

/// Logarithmic grid of `n` offsets in `[1e-6, -1 - c]`.
pub fn delta_grid(c: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (1e-6_f64.ln(), (-1.0 - c).ln());
    (0..n)
        .map(|i| {
            (lo + (hi - lo) * i as f64 / (n.max(2) - 1) as f64)
                .exp()
                .min(-1.0 - c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const C: f64 = -1.2;

    /// Adaptive Simpson with Richardson correction; independent of `crate::quad`.
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn step<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        step(f, a, b, fa, fm, fb, whole, tol, 60)
    }

    fn tof_oracle(u1: f64, u2: f64, c: f64) -> f64 {
        simpson(&|u: f64| (3.0 - 3.0 * u * u) / (u - c), u1, u2, 1e-13)
    }

    #[test]
    fn tof_identity() {
        assert_eq!(time_of_flight(-1.5, -1.5, C).unwrap(), 0.0);
    }

    #[test]
    fn tof_left_descent_matches_quadrature() {
        let t = time_of_flight(-2.0, -1.3, C).unwrap();
        assert!(t > 0.0);
        assert_abs_diff_eq!(t, tof_oracle(-2.0, -1.3, C), epsilon = 1e-9);
    }

    #[test]
    fn tof_right_ascent_matches_quadrature() {
        let u_r = f_inverse(f(C) - 1.0, Branch::Right).unwrap();
        let t = time_of_flight(u_r, 1.0, C).unwrap();
        assert!(t > 0.0);
        assert_abs_diff_eq!(t, tof_oracle(u_r, 1.0, C), epsilon = 1e-9);
    }

    #[test]
    fn tof_errors() {
        assert!(matches!(
            time_of_flight(C, -1.5, C),
            Err(SingularError::Singularity { .. })
        ));
        assert!(matches!(
            time_of_flight(-1.5, C, C),
            Err(SingularError::Singularity { .. })
        ));
        assert!(matches!(
            time_of_flight(-1.5, -1.1, C),
            Err(SingularError::OppositeSides { .. })
        ));
    }

    #[test]
    fn kick_cases() {
        let p = kick_resolve(SingularPoint::left(C), 1.0).unwrap();
        assert_eq!(p.branch, Branch::Right);
        assert_abs_diff_eq!(f(p.u), -2.872, epsilon = 1e-12);
        // frozen root of 3u - u^3 = -2.872 on u >= 1
        assert_abs_diff_eq!(p.u, 2.091_253_046_064_776_5, epsilon = 1e-12);

        let p = kick_resolve(SingularPoint::left(C), 0.05).unwrap();
        assert_eq!(p.branch, Branch::Left);
        assert_abs_diff_eq!(f(p.u), -1.922, epsilon = 1e-12);
        assert!(p.u > C && p.u <= -1.0);

        let p = kick_resolve(SingularPoint::right(2.0), 1.0).unwrap();
        assert_eq!(p.branch, Branch::Right);
        assert_abs_diff_eq!(f(p.u), -3.0, epsilon = 1e-12);
    }

    #[test]
    fn flow_zero_is_identity() {
        let p = SingularPoint::left(-1.3);
        assert_eq!(flow(p, 0.0, C), p);
    }

    #[test]
    fn flow_long_ends_left_near_rest() {
        let p = flow(SingularPoint::right(1.5), 1e3, C);
        assert_eq!(p.branch, Branch::Left);
        assert!(p.u > -2.0 && p.u < C);
        assert_abs_diff_eq!(p.u, C, epsilon = 2.0 * REST_CAP);
        let q = flow(SingularPoint::right(1.5), 20.0, C);
        let r = flow(SingularPoint::right(1.5), 25.0, C);
        assert!(q.u < r.u && r.u < C);
    }

    #[test]
    fn flow_composes_closed_form() {
        let start = SingularPoint::right(f_inverse(-2.872, Branch::Right).unwrap());
        let duration =
            time_of_flight(start.u, 1.0, C).unwrap() + time_of_flight(-2.0, -1.3, C).unwrap();
        let end = flow(start, duration, C);
        assert_eq!(end.branch, Branch::Left);
        assert_abs_diff_eq!(end.u, -1.3, epsilon = 1e-10);
    }

    #[test]
    fn flow_from_right_of_rest_rises() {
        let p = flow(SingularPoint::left(-1.0), 0.5, C);
        assert!(p.u < -1.0 && p.u > C);
        assert_abs_diff_eq!(time_of_flight(-1.0, p.u, C).unwrap(), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn return_map_relaxes_for_long_periods() {
        let params = ModelParams {
            alpha: 1e3,
            ..ModelParams::default()
        };
        let s = return_map(f(C), &params).unwrap();
        assert!(s.defined);
        assert_abs_diff_eq!(s.v_out, f(C), epsilon = 1e-6);
    }

    #[test]
    fn return_map_undefined_when_still_on_right_branch() {
        let params = ModelParams {
            alpha: 1.0,
            ..ModelParams::default()
        };
        let s = return_map(f(C), &params).unwrap();
        assert!(!s.defined);
    }

    #[test]
    fn fixed_point_alpha_10() {
        let params = ModelParams::with_alpha(10.0);
        let fp = fixed_point(&params, &FixedPointOptions::default()).unwrap();
        assert!(fp.residual.abs() < 1e-9);
        assert!(fp.derivative.abs() < 1.0);
        // brentq on the same closed form in f64 (scipy): -1.667206787956149
        assert_abs_diff_eq!(fp.v_star, -1.667_206_787_956_149, epsilon = 1e-9);
        assert!(fp.lower.v_out > fp.lower.v_in);
        assert!(fp.upper.v_out < fp.upper.v_in);
    }

    #[test]
    fn fixed_point_alpha_50_is_rest() {
        let params = ModelParams::with_alpha(50.0);
        let fp = fixed_point(&params, &FixedPointOptions::default()).unwrap();
        assert_abs_diff_eq!(fp.v_star, f(C), epsilon = 1e-6);
        assert!(fp.derivative.abs() < 1.0);
    }

    #[test]
    fn fixed_point_absent_at_alpha_5() {
        let params = ModelParams::with_alpha(5.0);
        assert!(matches!(
            fixed_point(&params, &FixedPointOptions::default()),
            Err(SingularError::BelowSearchRange { .. })
        ));
        let open = FixedPointOptions {
            alpha_min_search: 0.0,
            ..Default::default()
        };
        match fixed_point(&params, &open) {
            Err(SingularError::NoFixedPoint { scan, .. }) => {
                // F(v) > v over the whole depolarizing domain
                assert!(scan.iter().filter(|s| s.defined).all(|s| s.v_out > s.v_in));
            }
            other => panic!("expected NoFixedPoint, got {other:?}"),
        }
    }

    #[test]
    fn upper_comparison_point() {
        let params = ModelParams::with_alpha(10.0);
        let fp = fixed_point(&params, &FixedPointOptions::default()).unwrap();
        let s = return_map(fp.v_star + 1e-3, &params).unwrap();
        assert!(s.v_out - s.v_in < 0.0);
    }

    #[test]
    fn time_estimate_curves() {
        let deltas = delta_grid(C, 50);
        let est = time_estimates(C, 1.0, &deltas).unwrap();
        // red strictly increasing as delta shrinks
        assert!(est.red.windows(2).all(|w| w[0].1 > w[1].1));
        assert!(est.red[0].1 > 10.0);
        let (lo, hi) = est.window().unwrap();
        assert!(lo < hi);
        // the small reset settles well inside the window
        assert!(est.red.iter().any(|&(_, t)| t < lo));
        assert!(matches!(
            time_estimates(C, 1.0, &[0.0]),
            Err(SingularError::DeltaOutOfRange { .. })
        ));
        assert!(time_estimates(C, 1.0, &[-0.1]).is_err());
    }

    #[test]
    fn longer_right_branch_time_below_fixed_point() {
        let params = ModelParams::with_alpha(10.0);
        let fp = fixed_point(&params, &FixedPointOptions::default()).unwrap();
        let right_time = |v: f64| {
            let p = kick_resolve(
                SingularPoint::left(f_inverse(v, Branch::Left).unwrap()),
                1.0,
            )
            .unwrap();
            time_of_flight(p.u, 1.0, C).unwrap()
        };
        assert!(right_time(fp.v_star - 0.1) > right_time(fp.v_star));
        assert!(right_time(fp.v_star) > right_time(fp.v_star + 0.1));
    }

    proptest! {
        #[test]
        fn semigroup(u0 in 1.0f64..3.0, t1 in 0.0f64..12.0, t2 in 0.0f64..12.0) {
            let p = SingularPoint::right(u0);
            let two = flow(flow(p, t1, C), t2, C);
            let one = flow(p, t1 + t2, C);
            prop_assert_eq!(two.branch, one.branch);
            prop_assert!((two.u - one.u).abs() < 1e-9, "{:?} vs {:?}", two, one);
        }

        #[test]
        fn monotone_right_branch_time(va in -1.872f64..-1.0, dv in 1e-3f64..0.5) {
            let vb = (va + dv).min(-1.0);
            prop_assume!(vb > va);
            let time = |v: f64| {
                let u = f_inverse(v - 1.0, Branch::Right).unwrap();
                time_of_flight(u, 1.0, C).unwrap()
            };
            prop_assert!(time(va) > time(vb));
        }
    }
}
