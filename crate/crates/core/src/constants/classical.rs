//! Classical constants: James, von Neumann-Jordan, `H~`, and the moduli of
//! convexity and smoothness.

use std::f64::consts::PI;

use super::{check_range, Chart, Fallible, JamesMethod, NjVariant};
use crate::error::{GeoError, Result};
use crate::optimize::{maximize, Axis, Estimate, OptConfig};
use crate::orthogonality::unit_iso_partner;
use crate::space::{SpaceSpec, Vector};

/// The James constant.
///
/// `MinForm`: `sup min(||u1 + u2||, ||u1 - u2||)` over unit pairs.
/// `IsoForm` (planar only): `sup ||x + y||` over unit `x` with `y` its unit
/// isosceles partner.
pub fn james(space: &SpaceSpec, method: JamesMethod, cfg: &OptConfig) -> Result<Estimate> {
    let chart = Chart::new(space, "james")?;
    match method {
        JamesMethod::MinForm => maximize(
            |p| {
                let u1 = chart.unit(p, 0);
                let u2 = chart.unit(p, 1);
                chart
                    .norm(&u1.lin(1.0, &u2, 1.0))
                    .min(chart.norm(&u1.lin(1.0, &u2, -1.0)))
            },
            &chart.axes(2),
            cfg,
        ),
        JamesMethod::IsoForm => {
            if space.dim() != 2 {
                return Err(GeoError::UnsupportedDimension {
                    operation: "james (isoform)",
                    supported: "2",
                    found: space.dim(),
                });
            }
            let guard = Fallible::new();
            let r = maximize(
                |p| {
                    let x = chart.unit(p, 0);
                    let xv = Vector::from_raw(x.to_vec());
                    guard.wrap(unit_iso_partner(space, &xv).map(|y| {
                        space.norm_raw(&[x.as_ref()[0] + y[0], x.as_ref()[1] + y[1]])
                    }))
                },
                &chart.axes(1),
                cfg,
            );
            guard.finish(r)
        }
    }
}

/// von Neumann-Jordan type constants, all valued in `[1, 2]`.
///
/// * `Classic`: `sup (||x1 + x2||^2 + ||x1 - x2||^2) / (2 (||x1||^2 + ||x2||^2))`,
///   searched over `x1 = u1`, `x2 = s u2`, `s` in `[0, 1]`.
/// * `Modified`: `sup (||u1 + u2||^2 + ||u1 - u2||^2) / 4` over unit pairs.
/// * `Iso`: the classic ratio restricted to isosceles pairs, which on
///   `x1 = u1 + u2`, `x2 = u1 - u2` reads `4 / (||u1 + u2||^2 + ||u1 - u2||^2)`.
pub fn nj_constant(space: &SpaceSpec, variant: NjVariant, cfg: &OptConfig) -> Result<Estimate> {
    let chart = Chart::new(space, "nj_constant")?;
    match variant {
        NjVariant::Classic => {
            let mut axes = chart.axes(2);
            axes.push(Axis::closed(0.0, 1.0));
            let s_at = axes.len() - 1;
            maximize(
                |p| {
                    let s = p[s_at];
                    let u1 = chart.unit(p, 0);
                    let u2 = chart.unit(p, 1);
                    let a = chart.norm(&u1.lin(1.0, &u2, s));
                    let b = chart.norm(&u1.lin(1.0, &u2, -s));
                    (a * a + b * b) / (2.0 * (1.0 + s * s))
                },
                &axes,
                cfg,
            )
        }
        NjVariant::Modified | NjVariant::Iso => {
            let iso = variant == NjVariant::Iso;
            maximize(
                |p| {
                    let u1 = chart.unit(p, 0);
                    let u2 = chart.unit(p, 1);
                    let a = chart.norm(&u1.lin(1.0, &u2, 1.0));
                    let b = chart.norm(&u1.lin(1.0, &u2, -1.0));
                    if iso {
                        4.0 / (a * a + b * b)
                    } else {
                        (a * a + b * b) / 4.0
                    }
                },
                &chart.axes(2),
                cfg,
            )
        }
    }
}

/// `H~(X) = sup (||x1|| + ||x2||) / ||x1 + x2||` over isosceles pairs, i.e.
/// `sup (||u1 + u2|| + ||u1 - u2||) / 2` over unit pairs.
pub fn h_tilde(space: &SpaceSpec, cfg: &OptConfig) -> Result<Estimate> {
    let chart = Chart::new(space, "h_tilde")?;
    maximize(
        |p| {
            let u1 = chart.unit(p, 0);
            let u2 = chart.unit(p, 1);
            (chart.norm(&u1.lin(1.0, &u2, 1.0)) + chart.norm(&u1.lin(1.0, &u2, -1.0))) / 2.0
        },
        &chart.axes(2),
        cfg,
    )
}

/// Bisects `c(a) = target` between `lo` and `hi` (either order) given
/// `c(lo) <= target <= c(hi)`.
fn bisect(c: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= 1e-15 {
            return mid;
        }
        if c(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Modulus of convexity `inf { 1 - ||u1 + u2|| / 2 : ||u1 - u2|| = eps }`
/// over unit pairs of a planar space.
///
/// `u1` is searched by angle. For each `u1` the partner angle is found by
/// bisection on both half-turns starting at `u1` (the chord length rises
/// from 0 to 2 along each); the better branch is kept. The returned
/// `value` is the infimum, i.e. one minus half the largest `||u1 + u2||`.
pub fn modulus_convexity(space: &SpaceSpec, eps: f64, cfg: &OptConfig) -> Result<Estimate> {
    check_range("eps", eps, 0.0, 2.0)?;
    if space.dim() != 2 {
        return Err(GeoError::UnsupportedDimension {
            operation: "modulus_convexity",
            supported: "2",
            found: space.dim(),
        });
    }
    if eps == 0.0 {
        return Ok(Estimate::exact(0.0, vec![0.0]));
    }
    let unit = |a: f64| {
        let mut u = [0.0; 2];
        space.unit_into(&[a], &mut u);
        u
    };
    let objective = |p: &[f64]| {
        let theta = p[0];
        let u1 = unit(theta);
        let chord = |a: f64| {
            let u2 = unit(a);
            space.norm_raw(&[u1[0] - u2[0], u1[1] - u2[1]])
        };
        [1.0, -1.0]
            .iter()
            .map(|&dir| {
                // chord is 0 at theta and 2 half a turn away
                let a = bisect(chord, eps, theta, theta + dir * PI);
                let u2 = unit(a);
                space.norm_raw(&[u1[0] + u2[0], u1[1] + u2[1]]) / 2.0 - 1.0
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut est = maximize(objective, &[Axis::angle()], cfg)?;
    est.value = -est.value;
    Ok(est)
}

/// Modulus of smoothness `sup (||u1 + t u2|| + ||u1 - t u2||) / 2 - 1`.
pub fn modulus_smoothness(space: &SpaceSpec, t: f64, cfg: &OptConfig) -> Result<Estimate> {
    check_range("t", t, 0.0, f64::MAX)?;
    let chart = Chart::new(space, "modulus_smoothness")?;
    if t == 0.0 {
        return Ok(Estimate::exact(0.0, vec![0.0; 2 * space.angle_count()]));
    }
    maximize(
        |p| {
            let u1 = chart.unit(p, 0);
            let u2 = chart.unit(p, 1);
            (chart.norm(&u1.lin(1.0, &u2, t)) + chart.norm(&u1.lin(1.0, &u2, -t))) / 2.0 - 1.0
        },
        &chart.axes(2),
        cfg,
    )
}
