//! Deterministic derivative-free global maximization over small boxes.
//!
//! Two phases: an exhaustive uniform grid, then compass search (axis-aligned
//! probes, step halving on failure) from the best grid points and a few
//! seeded random starts. The objectives here are built from polyhedral and
//! `l_1`/`l_inf` norms, so gradients are unavailable on a dense set.
//!
//! The returned value is the best sample seen, so it is a lower bound of the
//! supremum. No enclosure is attempted; `grid_gap` (best minus second-best
//! grid value) is reported as a resolution heuristic.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GeoError, Result};

/// Largest box dimension accepted by [`maximize`].
pub const MAX_BOX_DIM: usize = 8;

/// One coordinate of the search box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    /// Periodic axes wrap into `[lo, hi)`; others are clamped to `[lo, hi]`.
    pub periodic: bool,
}

impl Axis {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            periodic: false,
        }
    }

    pub fn periodic(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            periodic: true,
        }
    }

    /// A full turn `[0, 2 pi)`.
    pub fn angle() -> Self {
        Self::periodic(0.0, TAU)
    }

    fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn grid_point(&self, k: usize, r: usize) -> f64 {
        if self.periodic {
            self.lo + self.width() * k as f64 / r as f64
        } else if r == 1 {
            0.5 * (self.lo + self.hi)
        } else if k + 1 == r {
            self.hi
        } else {
            self.lo + self.width() * k as f64 / (r - 1) as f64
        }
    }

    fn project(&self, x: f64) -> f64 {
        if self.periodic {
            let w = self.width();
            let y = self.lo + (x - self.lo).rem_euclid(w);
            if y >= self.hi {
                self.lo
            } else {
                y
            }
        } else {
            x.clamp(self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptConfig {
    /// Grid points per axis, before the evaluation-budget cap.
    pub grid_resolution: usize,
    pub top_cells: usize,
    /// Compass search stops once the step, as a fraction of each axis width,
    /// drops below this.
    pub step_tol: f64,
    pub max_evals: u64,
    pub seed: u64,
    pub extra_starts: usize,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            grid_resolution: 256,
            top_cells: 16,
            step_tol: 1e-10,
            max_evals: 5_000_000,
            seed: 0,
            extra_starts: 8,
        }
    }
}

impl OptConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution == 0 || self.top_cells == 0 || self.max_evals == 0 {
            return Err(GeoError::InvalidConfig(
                "grid_resolution, top_cells and max_evals must be positive".into(),
            ));
        }
        if !(self.step_tol > 0.0 && self.step_tol < 1.0) {
            return Err(GeoError::InvalidConfig(format!(
                "step_tol must lie in (0, 1), got {}",
                self.step_tol
            )));
        }
        Ok(())
    }

    /// Points per axis actually used for a `dim`-dimensional box.
    ///
    /// The grid may use at most half of `max_evals`. When that forces fewer
    /// points than `grid_resolution`, the count is rounded down to a multiple
    /// of 8 (when at least 8 fit) so that multiples of `pi / 4` stay on
    /// angular grids.
    pub fn effective_resolution(&self, dim: usize) -> usize {
        let budget = (self.max_evals / 2).max(1) as f64;
        let mut r = self.grid_resolution;
        if (r as f64).powi(dim as i32) > budget {
            let mut fit = budget.powf(1.0 / dim as f64).floor() as usize;
            while fit > 1 && (fit as f64).powi(dim as i32) > budget {
                fit -= 1;
            }
            r = if fit >= 8 { fit - fit % 8 } else { fit.max(1) };
        }
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    BudgetExhausted,
}

/// Result of one supremum computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub evaluations: u64,
    pub status: Status,
    /// Accepted compass moves plus step halvings, over all starts.
    pub refinement_steps: u64,
    /// Best minus second-best grid value.
    pub grid_gap: f64,
}

impl Estimate {
    /// An estimate known in closed form, with no search performed.
    pub fn exact(value: f64, argmax: Vec<f64>) -> Self {
        Self {
            value,
            argmax,
            evaluations: 0,
            status: Status::Converged,
            refinement_steps: 0,
            grid_gap: 0.0,
        }
    }
}

/// Orders candidates: larger value first, then lexicographically smaller point.
fn better(a_val: f64, a_pt: &[f64], b_val: f64, b_pt: &[f64]) -> bool {
    match a_val.partial_cmp(&b_val) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => lex_cmp(a_pt, b_pt) == Ordering::Less,
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

struct Counted<'a, F> {
    objective: &'a F,
    evals: u64,
}

impl<F: Fn(&[f64]) -> f64> Counted<'_, F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evals += 1;
        let v = (self.objective)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GeoError::NonFiniteObjective {
                point: x.to_vec(),
                value: v,
            })
        }
    }
}

/// Maximizes `objective` over the box.
///
/// Deterministic for a fixed configuration: ties between equal values go to
/// the lexicographically smallest point.
pub fn maximize<F>(objective: F, axes: &[Axis], cfg: &OptConfig) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64,
{
    cfg.validate()?;
    let d = axes.len();
    if d == 0 || d > MAX_BOX_DIM {
        return Err(GeoError::InvalidConfig(format!(
            "box dimension {d} not in 1..={MAX_BOX_DIM}"
        )));
    }
    for a in axes {
        if !(a.lo.is_finite() && a.hi.is_finite() && a.lo <= a.hi) {
            return Err(GeoError::InvalidConfig(format!(
                "bad interval [{}, {}]",
                a.lo, a.hi
            )));
        }
    }

    let mut f = Counted {
        objective: &objective,
        evals: 0,
    };

    // Phase 1: exhaustive grid. Points are enumerated in lexicographic order
    // of their indices, which matches lexicographic order of coordinates.
    let r = cfg.effective_resolution(d);
    let total = r.pow(d as u32);
    let mut values = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    for _ in 0..total {
        for k in 0..d {
            point[k] = axes[k].grid_point(idx[k], r);
        }
        values.push(f.eval(&point)?);
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < r {
                break;
            }
            idx[k] = 0;
        }
    }
    let decode = |mut i: usize| -> Vec<f64> {
        let mut p = vec![0.0; d];
        for k in (0..d).rev() {
            p[k] = axes[k].grid_point(i % r, r);
            i /= r;
        }
        p
    };

    let mut order: Vec<usize> = (0..total).collect();
    let by_value = |a: &usize, b: &usize| {
        values[*b]
            .partial_cmp(&values[*a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(b))
    };
    let keep = cfg.top_cells.min(total).max(2.min(total));
    if keep < total {
        order.select_nth_unstable_by(keep - 1, by_value);
        order.truncate(keep);
    }
    order.sort_by(by_value);
    let grid_gap = if order.len() >= 2 {
        values[order[0]] - values[order[1]]
    } else {
        0.0
    };

    let mut best_pt = decode(order[0]);
    let mut best_val = values[order[0]];

    // Phase 2: compass search from the top cells and seeded random starts.
    let mut starts: Vec<Vec<f64>> = order
        .iter()
        .take(cfg.top_cells)
        .map(|&i| decode(i))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.extra_starts {
        starts.push(
            axes.iter()
                .map(|a| {
                    if a.hi > a.lo {
                        a.project(rng.random_range(a.lo..a.hi))
                    } else {
                        a.lo
                    }
                })
                .collect(),
        );
    }

    let remaining = cfg.max_evals.saturating_sub(f.evals);
    let per_start = (remaining / starts.len().max(1) as u64).max(1);
    let sigma0 = 1.0 / r as f64;
    let mut status = Status::Converged;
    let mut steps = 0u64;
    for start in starts {
        let run = compass(&mut f, axes, start, sigma0, cfg.step_tol, per_start)?;
        steps += run.steps;
        if !run.converged {
            status = Status::BudgetExhausted;
        }
        if better(run.value, &run.point, best_val, &best_pt) {
            best_val = run.value;
            best_pt = run.point;
        }
    }

    Ok(Estimate {
        value: best_val,
        argmax: best_pt,
        evaluations: f.evals,
        status,
        refinement_steps: steps,
        grid_gap,
    })
}

struct CompassRun {
    point: Vec<f64>,
    value: f64,
    steps: u64,
    converged: bool,
}

fn compass<F: Fn(&[f64]) -> f64>(
    f: &mut Counted<'_, F>,
    axes: &[Axis],
    start: Vec<f64>,
    sigma0: f64,
    step_tol: f64,
    budget: u64,
) -> Result<CompassRun> {
    let stop_at = f.evals + budget;
    let mut x = start;
    let mut fx = f.eval(&x)?;
    let mut sigma = sigma0;
    let mut steps = 0;
    let mut cand = x.clone();
    while sigma >= step_tol {
        let mut improved = false;
        for k in 0..axes.len() {
            for dir in [1.0, -1.0] {
                if f.evals >= stop_at {
                    return Ok(CompassRun {
                        point: x,
                        value: fx,
                        steps,
                        converged: false,
                    });
                }
                cand.copy_from_slice(&x);
                cand[k] = axes[k].project(x[k] + dir * sigma * axes[k].width());
                if cand[k] == x[k] {
                    continue;
                }
                let fc = f.eval(&cand)?;
                if fc > fx {
                    x.copy_from_slice(&cand);
                    fx = fc;
                    improved = true;
                    steps += 1;
                    break;
                }
            }
        }
        if !improved {
            // axis moves failed; diagonal moves follow ridges of max/min objectives
            'diag: for i in 0..axes.len() {
                for j in i + 1..axes.len() {
                    for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        if f.evals >= stop_at {
                            return Ok(CompassRun {
                                point: x,
                                value: fx,
                                steps,
                                converged: false,
                            });
                        }
                        cand.copy_from_slice(&x);
                        cand[i] = axes[i].project(x[i] + si * sigma * axes[i].width());
                        cand[j] = axes[j].project(x[j] + sj * sigma * axes[j].width());
                        if cand[i] == x[i] || cand[j] == x[j] {
                            continue;
                        }
                        let fc = f.eval(&cand)?;
                        if fc > fx {
                            x.copy_from_slice(&cand);
                            fx = fc;
                            improved = true;
                            steps += 1;
                            break 'diag;
                        }
                    }
                }
            }
        }
        if !improved {
            sigma *= 0.5;
            steps += 1;
        }
    }
    Ok(CompassRun {
        point: x,
        value: fx,
        steps,
        converged: true,
    })
}
