//! `Z_X(t)`, `C_Z^I(t)` and the Zbaganu constant.

use serde::Serialize;

use super::{check_range, Chart, CziMethod, Fallible, SampleStat, ZbaganuMethod};
use crate::error::{GeoError, Result};
use crate::optimize::{maximize, Axis, Estimate, OptConfig};
use crate::orthogonality::sample_iso_complete_pairs;
use crate::space::{Exponent, SpaceSpec};

/// `Z_X(t) = sup ||u1 + t u2|| * ||u1 - t u2|| / 2` over unit `u1, u2`.
pub fn z_profile(space: &SpaceSpec, t: f64, cfg: &OptConfig) -> Result<Estimate> {
    check_range("t", t, 0.0, 1.0)?;
    let chart = Chart::new(space, "z_profile")?;
    if t == 0.0 {
        return Ok(Estimate::exact(0.5, vec![0.0; 2 * space.angle_count()]));
    }
    maximize(
        |p| {
            let u1 = chart.unit(p, 0);
            let u2 = chart.unit(p, 1);
            chart.norm(&u1.lin(1.0, &u2, t)) * chart.norm(&u1.lin(1.0, &u2, -t)) / 2.0
        },
        &chart.axes(2),
        cfg,
    )
}

/// `C_Z^I(t)` for `t` in `[0, 1/2]`.
///
/// `Direct` evaluates the defining ratio
/// `||t x1 + (1-t) x2|| * ||(1-t) x1 + t x2|| / ||x1 + x2||^2` on the pairs
/// `x1 = u1 + u2`, `x2 = u1 - u2`. `Identity` returns `Z_X(1 - 2t) / 2`.
pub fn czi(space: &SpaceSpec, t: f64, method: CziMethod, cfg: &OptConfig) -> Result<Estimate> {
    check_range("t", t, 0.0, 0.5)?;
    match method {
        CziMethod::Identity => {
            let mut est = z_profile(space, 1.0 - 2.0 * t, cfg)?;
            est.value /= 2.0;
            Ok(est)
        }
        CziMethod::Direct => {
            let chart = Chart::new(space, "czi")?;
            maximize(
                |p| {
                    let u1 = chart.unit(p, 0);
                    let u2 = chart.unit(p, 1);
                    let x1 = u1.lin(1.0, &u2, 1.0);
                    let x2 = u1.lin(1.0, &u2, -1.0);
                    let sum = chart.norm(&x1.lin(1.0, &x2, 1.0));
                    chart.norm(&x1.lin(t, &x2, 1.0 - t)) * chart.norm(&x1.lin(1.0 - t, &x2, t))
                        / (sum * sum)
                },
                &chart.axes(2),
                cfg,
            )
        }
    }
}

/// Independent sampling oracle for `C_Z^I(t)`: the largest defining ratio
/// over `n` seeded isosceles pairs from [`crate::orthogonality::iso_complete`].
pub fn czi_raw_sample(space: &SpaceSpec, t: f64, n: usize, seed: u64) -> Result<SampleStat> {
    check_range("t", t, 0.0, 0.5)?;
    if space.dim() != 2 {
        return Err(GeoError::UnsupportedDimension {
            operation: "czi_raw_sample",
            supported: "2",
            found: space.dim(),
        });
    }
    let mut best = f64::NEG_INFINITY;
    for pair in sample_iso_complete_pairs(space, n, seed)? {
        let a = pair.x1.combine(t, &pair.x2, 1.0 - t);
        let b = pair.x1.combine(1.0 - t, &pair.x2, t);
        let s = space.norm(&pair.x1.combine(1.0, &pair.x2, 1.0))?;
        let ratio = space.norm(&a)? * space.norm(&b)? / (s * s);
        best = best.max(ratio);
    }
    Ok(SampleStat {
        value: best,
        samples: n,
    })
}

/// Configuration of the outer one-dimensional search of the profile methods.
fn outer_config(cfg: &OptConfig) -> OptConfig {
    OptConfig {
        grid_resolution: cfg.grid_resolution.min(33),
        top_cells: 2,
        step_tol: cfg.step_tol.max(1e-7),
        extra_starts: 0,
        ..cfg.clone()
    }
}

/// The Zbaganu constant `sup ||x1 + x2|| ||x1 - x2|| / (||x1||^2 + ||x2||^2)`.
///
/// `Direct` uses scale invariance and the swap symmetry to put `x1 = u1`,
/// `x2 = s u2` with `s` in `[0, 1]`. The profile methods maximize
/// `k * C_Z^I((1 - e) / 2) / (1 + e^2)` over `e` in `[0, 1]`, with `k = 4`
/// (`ProfileCorrected`, equal to the direct value) or `k = 2`
/// (`ProfileHalf`, half of it).
pub fn zbaganu(space: &SpaceSpec, method: ZbaganuMethod, cfg: &OptConfig) -> Result<Estimate> {
    let chart = Chart::new(space, "zbaganu")?;
    let factor = match method {
        ZbaganuMethod::Direct => {
            let mut axes = chart.axes(2);
            axes.push(Axis::closed(0.0, 1.0));
            let s_at = axes.len() - 1;
            return maximize(
                |p| {
                    let s = p[s_at];
                    let u1 = chart.unit(p, 0);
                    let u2 = chart.unit(p, 1);
                    chart.norm(&u1.lin(1.0, &u2, s)) * chart.norm(&u1.lin(1.0, &u2, -s))
                        / (1.0 + s * s)
                },
                &axes,
                cfg,
            );
        }
        ZbaganuMethod::ProfileCorrected => 4.0,
        ZbaganuMethod::ProfileHalf => 2.0,
    };
    let guard = Fallible::new();
    let r = maximize(
        |p| {
            let eta = p[0];
            guard.wrap(
                czi(space, (1.0 - eta) / 2.0, CziMethod::Direct, cfg)
                    .map(|e| factor * e.value / (1.0 + eta * eta)),
            )
        },
        &[Axis::closed(0.0, 1.0)],
        &outer_config(cfg),
    );
    guard.finish(r)
}

/// Closed-form lower bounds for `C_Z^I(t)` on the `l_p` and `l_p-l_q` families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExampleBounds {
    pub lp_bound: Option<f64>,
    pub lplq_bound: Option<f64>,
}

/// `l_p`: `2^(-2/p) ((1-t)^p + t^p)^(2/p)`.
///
/// `l_p-l_q`: `2^(-2/p-2) [(1 + c - 2ct)^p + (1 - c + 2ct)^p]^(2/p)` with
/// `c = 2^(1/p - 1/q)`.
///
/// Both come from evaluating the constant on the diagonal pair
/// `x1 ~ (1, 1)`, `x2 ~ (1, -1)`.
pub fn example_bounds(space: &SpaceSpec, t: f64) -> Result<ExampleBounds> {
    check_range("t", t, 0.0, 0.5)?;
    let lp = |p: f64| 2f64.powf(-2.0 / p) * ((1.0 - t).powf(p) + t.powf(p)).powf(2.0 / p);
    let mut out = ExampleBounds {
        lp_bound: None,
        lplq_bound: None,
    };
    match space {
        SpaceSpec::Lp {
            p: Exponent::Finite(p),
            ..
        } => out.lp_bound = Some(lp(*p)),
        SpaceSpec::Euclidean { .. } => out.lp_bound = Some(lp(2.0)),
        SpaceSpec::LpLq { p, q } => {
            let c = 2f64.powf(1.0 / p - 1.0 / q);
            let a = 1.0 + c - 2.0 * c * t;
            let b = 1.0 - c + 2.0 * c * t;
            out.lplq_bound =
                Some(2f64.powf(-2.0 / p - 2.0) * (a.powf(*p) + b.powf(*p)).powf(2.0 / p));
        }
        _ => {}
    }
    Ok(out)
}
