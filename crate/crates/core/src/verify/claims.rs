//! The claim registry and one evaluator per claim.

use serde::Serialize;

use super::{Measured, Witness};
use crate::constants::{
    classify_nonsquare, czi, czi_curve, example_bounds, h_tilde, james, modulus_smoothness,
    nj_constant, nonsquare_ts, smoothness_slope, t_grid, z_curve, z_profile, zbaganu,
    CurveConstant, CurvePoint, CziMethod, JamesMethod, NjVariant, ZbaganuMethod,
};
use crate::error::{GeoError, Result};
use crate::optimize::{Estimate, OptConfig};
use crate::orthogonality::{
    iso_scaling_check, pyth_residual, sample_iso_complete_pairs, sample_unit_pair_isos, IsoPair,
};
use crate::space::{Exponent, SpaceSpec};

const CURVE_POINTS: usize = 51;
const BOUND_SLACK: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-5;
const VALUE_TOL: f64 = 1e-6;
const REPORT_TOL: f64 = 1e-4;
const HILBERT_GAP: f64 = 1e-8;
const NON_HILBERT_GAP: f64 = 1e-2;
const GAP_SAMPLES: usize = 1000;
const SCALING_UNIT_PAIRS: usize = 10_000;
const SCALING_RANDOM_PAIRS: usize = 1000;
const SCALING_ALPHAS: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
const NONSQUARE_TOL: f64 = 1e-3;
const SMOOTH_TS: [f64; 4] = [0.08, 0.04, 0.02, 0.01];
const SLOPE_TS: [f64; 4] = [0.1, 0.05, 0.02, 0.01];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    /// Gates the build.
    Asserted,
    /// Measured and documented, never gates.
    Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub kind: ClaimKind,
    pub description: &'static str,
    /// The checked relation as a formula.
    pub statement: &'static str,
}

impl Claim {
    pub fn applies_to(&self, space: &SpaceSpec) -> bool {
        match self.id {
            "L1" => space.dim() == 2,
            "P1" => space.is_hilbert(),
            "EX1" | "EX5" => matches!(
                space,
                SpaceSpec::Lp { dim: 2, p: Exponent::Finite(p) } if *p == 1.0
            ),
            "EX2" => matches!(space, SpaceSpec::GridSup { .. }),
            "EX4" => matches!(
                space,
                SpaceSpec::Lp { p: Exponent::Finite(p), .. } if *p > 1.0
            ),
            "EX6" => matches!(space, SpaceSpec::LpLq { .. }),
            _ => true,
        }
    }
}

use ClaimKind::{Asserted, Report};

static CLAIMS: [Claim; 19] = [
    Claim {
        id: "T1",
        kind: Asserted,
        description: "direct C_Z^I agrees with half the Z profile at 1 - 2t",
        statement: r"C_Z^I(t)=\frac{1}{2} Z_X(1-2t)",
    },
    Claim {
        id: "R1",
        kind: Asserted,
        description: "Z profile stays between its quadratic bounds",
        statement: r"\frac{1-t^2}{2} \leq Z_X(t) \leq \frac{(1+t)^2}{2}",
    },
    Claim {
        id: "L1",
        kind: Asserted,
        description: "isosceles pairs are Pythagorean exactly in Hilbert planes",
        statement: r"x \perp_I y \Leftrightarrow x \perp_P y \iff X \text{ is an inner product space}",
    },
    Claim {
        id: "P1",
        kind: Report,
        description: "C_Z^I on a Hilbert space against t - t^2",
        statement: r"C_Z^I(t)=t-t^2",
    },
    Claim {
        id: "P2",
        kind: Asserted,
        description: "C_Z^I stays between t - t^2 and (1 - t)^2",
        statement: r"t-t^2 \leq C_Z^I(t) \leq t^2-2 t+1",
    },
    Claim {
        id: "EX1",
        kind: Asserted,
        description: "C_Z^I on the l1 plane is (1 - t)^2",
        statement: r"C_Z^I(t)=t^2-2 t+1",
    },
    Claim {
        id: "EX2",
        kind: Asserted,
        description: "C_Z^I under a supremum norm is (1 - t)^2",
        statement: r"C_Z^I(t)=t^2-2 t+1",
    },
    Claim {
        id: "L2",
        kind: Asserted,
        description: "Z profile is non-decreasing",
        statement: r"t \mapsto Z_X(t) \text{ non-decreasing on } [0,1]",
    },
    Claim {
        id: "P3",
        kind: Asserted,
        description: "C_Z^I is non-increasing",
        statement: r"t \mapsto C_Z^I(t) \text{ non-increasing on } [0,\frac{1}{2}]",
    },
    Claim {
        id: "T2",
        kind: Report,
        description: "profile formula for the Zbaganu constant with factor 2",
        statement: r"C_Z(X)=\sup_{\eta\in[0,1]} \frac{2C_Z^I(\frac{1-\eta}{2})}{1+\eta^2}",
    },
    Claim {
        id: "EX4",
        kind: Asserted,
        description: "C_Z^I on l_p is above the diagonal-pair floor",
        statement: r"C_{l_p}^I(t)\geq 2^{-\frac{2}{p}}((1-t)^p+t^p)^{\frac{2}{p}}",
    },
    Claim {
        id: "EX5",
        kind: Report,
        description: "Zbaganu constant of the l1 plane against the value 1",
        statement: r"C_Z(X)=1",
    },
    Claim {
        id: "EX6",
        kind: Asserted,
        description: "C_Z^I on l_p-l_q is above the diagonal-pair floor",
        statement: r"C^I(t)\geq 2^{-\frac{2}{p}-2}[(1+c-2ct)^p+(1-c+2ct)^p]^{\frac{2}{p}},\ c=2^{\frac{1}{p}-\frac{1}{q}}",
    },
    Claim {
        id: "P4",
        kind: Report,
        description: "upper bound through H~ and the von Neumann-Jordan constant",
        statement: r"C_Z^I(t) \leq (1-t)^2 + (-2t^2+3t-1)\widetilde{H}(X) + \frac{(2t-1)^2}{2C_{NJ}(X)}",
    },
    Claim {
        id: "P5",
        kind: Report,
        description: "two-sided bound through the James constant",
        statement: r"\frac{1}{4}J^2-tJ-3t^2 \leq C_Z^I(t) \leq t^2+\frac{2t(1-2t)}{J}+\frac{(1-2t)^2}{J^2}",
    },
    Claim {
        id: "L3",
        kind: Asserted,
        description: "isosceles pairs satisfy the alpha-combination inequalities",
        statement: r"x_1 \perp_I x_2:\ |\alpha|\geq 1 \Rightarrow \|x_1\pm x_2\| \leq \|x_1+\alpha x_2\| \leq |\alpha|\|x_1\pm x_2\|;\ |\alpha|\leq 1 \Rightarrow |\alpha|\|x_1\pm x_2\| \leq \|x_1+\alpha x_2\| \leq \|x_1\pm x_2\|",
    },
    Claim {
        id: "T3",
        kind: Asserted,
        description: "C_Z^I reaching (1 - t)^2 coincides with James constant 2",
        statement: r"C_Z^I(t_0)=(1-t_0)^2 \Rightarrow J(X)=2",
    },
    Claim {
        id: "P6",
        kind: Asserted,
        description: "Z profile is dominated by the modulus of smoothness",
        statement: r"Z_X(t)\leq\frac{(\rho_X(t)+1)^2}{2}",
    },
    Claim {
        id: "T4",
        kind: Asserted,
        description: "slope of Z at 0 equals the C_Z^I slope at 1/2",
        statement: r"\frac{2C_Z^I(t)-\frac{1}{2}}{1-2t}=\frac{Z_X(\alpha)-\frac{1}{2}}{\alpha},\ \alpha=1-2t",
    },
];

/// Every registered claim.
pub fn claims() -> &'static [Claim] {
    &CLAIMS
}

/// Looks up a claim by id, ignoring case.
pub fn find_claim(id: &str) -> Option<&'static Claim> {
    CLAIMS.iter().find(|c| c.id.eq_ignore_ascii_case(id.trim()))
}

pub(super) struct Outcome {
    pub holds: bool,
    pub measured: Measured,
    pub witness: Option<Witness>,
}

impl Outcome {
    fn new(holds: bool, measured: Measured) -> Self {
        Self {
            holds,
            measured,
            witness: None,
        }
    }

    fn with(mut self, witness: Option<Witness>) -> Self {
        self.witness = witness;
        self
    }
}

/// Per-space computations shared between claims.
pub(super) struct Context<'a> {
    space: &'a SpaceSpec,
    cfg: &'a OptConfig,
    czi: Option<Vec<CurvePoint>>,
    z: Option<Vec<CurvePoint>>,
    james: Option<Estimate>,
    zbaganu: Option<Estimate>,
}

impl<'a> Context<'a> {
    pub(super) fn new(space: &'a SpaceSpec, cfg: &'a OptConfig) -> Self {
        Self {
            space,
            cfg,
            czi: None,
            z: None,
            james: None,
            zbaganu: None,
        }
    }

    fn czi_curve(&mut self) -> Result<&[CurvePoint]> {
        if self.czi.is_none() {
            let ts = t_grid(CurveConstant::Czi, CURVE_POINTS);
            self.czi = Some(czi_curve(self.space, &ts, CziMethod::Direct, self.cfg)?);
        }
        Ok(self.czi.as_deref().unwrap_or_default())
    }

    fn z_curve(&mut self) -> Result<&[CurvePoint]> {
        if self.z.is_none() {
            let ts = t_grid(CurveConstant::Z, CURVE_POINTS);
            self.z = Some(z_curve(self.space, &ts, self.cfg)?);
        }
        Ok(self.z.as_deref().unwrap_or_default())
    }

    fn james(&mut self) -> Result<Estimate> {
        if self.james.is_none() {
            self.james = Some(james(self.space, JamesMethod::MinForm, self.cfg)?);
        }
        Ok(self.james.clone().expect("cached"))
    }

    fn zbaganu(&mut self) -> Result<Estimate> {
        if self.zbaganu.is_none() {
            self.zbaganu = Some(zbaganu(self.space, ZbaganuMethod::Direct, self.cfg)?);
        }
        Ok(self.zbaganu.clone().expect("cached"))
    }
}

/// Largest `f(point)` over a curve with the `t` where it occurs.
fn worst(curve: &[CurvePoint], f: impl Fn(&CurvePoint) -> f64) -> (f64, f64) {
    curve
        .iter()
        .map(|p| (f(p), p.t))
        .fold((f64::NEG_INFINITY, f64::NAN), |a, b| if b.0 > a.0 { b } else { a })
}

/// Largest step of a curve against the expected direction.
fn worst_step(curve: &[CurvePoint], increasing: bool) -> (f64, f64) {
    curve
        .windows(2)
        .map(|w| {
            let d = w[1].value - w[0].value;
            (if increasing { -d } else { d }, w[1].t)
        })
        .fold((f64::NEG_INFINITY, f64::NAN), |a, b| if b.0 > a.0 { b } else { a })
}

fn square_curve(ctx: &mut Context) -> Result<Outcome> {
    let curve = ctx.czi_curve()?;
    let (dev, at) = worst(curve, |p| (p.value - (1.0 - p.t) * (1.0 - p.t)).abs());
    let mut m = Measured::default();
    m.push("max_abs_deviation", dev);
    m.push("worst_t", at);
    m.push("points", curve.len() as f64);
    let w = czi(ctx.space, 0.0, CziMethod::Direct, ctx.cfg)?.argmax;
    Ok(Outcome::new(dev <= VALUE_TOL, m).with(Some(Witness::Point(w))))
}

fn floor_curve(ctx: &mut Context, pick: fn(&SpaceSpec, f64) -> Result<Option<f64>>) -> Result<Outcome> {
    let space = ctx.space;
    let curve = ctx.czi_curve()?;
    let mut deficit = f64::NEG_INFINITY;
    let mut at = f64::NAN;
    for p in curve {
        if let Some(floor) = pick(space, p.t)? {
            if floor - p.value > deficit {
                deficit = floor - p.value;
                at = p.t;
            }
        }
    }
    let mut m = Measured::default();
    m.push("max_floor_excess", deficit);
    m.push("worst_t", at);
    Ok(Outcome::new(deficit <= BOUND_SLACK, m))
}

pub(super) fn evaluate(claim: &Claim, ctx: &mut Context) -> Result<Outcome> {
    let space = ctx.space;
    let cfg = ctx.cfg;
    match claim.id {
        "T1" => {
            let mut m = Measured::default();
            let mut diff: f64 = 0.0;
            for k in 0..=5 {
                let t = k as f64 / 10.0;
                let d = czi(space, t, CziMethod::Direct, cfg)?.value;
                let i = czi(space, t, CziMethod::Identity, cfg)?.value;
                m.push(format!("direct_t{t}"), d);
                diff = diff.max((d - i).abs());
            }
            m.push("max_abs_diff", diff);
            Ok(Outcome::new(diff <= IDENTITY_TOL, m))
        }
        "R1" => {
            let curve = ctx.z_curve()?;
            let (lo, lo_t) = worst(curve, |p| p.lower_bound - p.value);
            let (hi, hi_t) = worst(curve, |p| p.value - p.upper_bound);
            let mut m = Measured::default();
            m.push("max_lower_excess", lo);
            m.push("lower_worst_t", lo_t);
            m.push("max_upper_excess", hi);
            m.push("upper_worst_t", hi_t);
            Ok(Outcome::new(lo <= BOUND_SLACK && hi <= BOUND_SLACK, m))
        }
        "L1" => {
            let mut gap: f64 = 0.0;
            let mut witness: Option<IsoPair> = None;
            for pair in sample_iso_complete_pairs(space, GAP_SAMPLES, cfg.seed)? {
                let r = pyth_residual(space, &pair.x1, &pair.x2)? / (pair.scale * pair.scale);
                if r > gap || witness.is_none() {
                    gap = gap.max(r);
                    witness = Some(pair);
                }
            }
            let hilbert = space.is_hilbert();
            let mut m = Measured::default();
            m.push("gap", gap);
            m.push("samples", GAP_SAMPLES as f64);
            m.push("threshold", if hilbert { HILBERT_GAP } else { NON_HILBERT_GAP });
            let holds = if hilbert {
                gap <= HILBERT_GAP
            } else {
                gap > NON_HILBERT_GAP
            };
            Ok(Outcome::new(holds, m).with(witness.map(Witness::Pair)))
        }
        "P1" => {
            let curve = ctx.czi_curve()?;
            let (claimed, at) = worst(curve, |p| (p.value - (p.t - p.t * p.t)).abs());
            let (measured, _) =
                worst(curve, |p| (p.value - (p.t * p.t + (1.0 - p.t) * (1.0 - p.t)) / 2.0).abs());
            let mut m = Measured::default();
            m.push("max_dev_from_t_minus_t2", claimed);
            m.push("worst_t", at);
            m.push("max_dev_from_half_t2_plus_1mt2", measured);
            m.push("value_t0", curve[0].value);
            Ok(Outcome::new(claimed <= REPORT_TOL, m))
        }
        "P2" => {
            let curve = ctx.czi_curve()?;
            let (lo, lo_t) = worst(curve, |p| p.lower_bound - p.value);
            let (hi, hi_t) = worst(curve, |p| p.value - p.upper_bound);
            let mut m = Measured::default();
            m.push("max_lower_excess", lo);
            m.push("lower_worst_t", lo_t);
            m.push("max_upper_excess", hi);
            m.push("upper_worst_t", hi_t);
            Ok(Outcome::new(lo <= BOUND_SLACK && hi <= BOUND_SLACK, m))
        }
        "EX1" | "EX2" => square_curve(ctx),
        "L2" => {
            let (drop, at) = worst_step(ctx.z_curve()?, true);
            let mut m = Measured::default();
            m.push("max_decrease", drop);
            m.push("worst_t", at);
            Ok(Outcome::new(drop <= BOUND_SLACK, m))
        }
        "P3" => {
            let (rise, at) = worst_step(ctx.czi_curve()?, false);
            let mut m = Measured::default();
            m.push("max_increase", rise);
            m.push("worst_t", at);
            Ok(Outcome::new(rise <= BOUND_SLACK, m))
        }
        "T2" => {
            let direct = ctx.zbaganu()?;
            let half = zbaganu(space, ZbaganuMethod::ProfileHalf, cfg)?.value;
            let corrected = zbaganu(space, ZbaganuMethod::ProfileCorrected, cfg)?.value;
            let mut m = Measured::default();
            m.push("direct", direct.value);
            m.push("profile_half", half);
            m.push("profile_corrected", corrected);
            m.push("direct_over_half", direct.value / half);
            let holds = (half - direct.value).abs() <= REPORT_TOL;
            Ok(Outcome::new(holds, m).with(Some(Witness::Point(direct.argmax))))
        }
        "EX4" => floor_curve(ctx, |s, t| Ok(example_bounds(s, t)?.lp_bound)),
        "EX5" => {
            let direct = ctx.zbaganu()?;
            let mut m = Measured::default();
            m.push("claimed", 1.0);
            m.push("direct", direct.value);
            let holds = (direct.value - 1.0).abs() <= REPORT_TOL;
            Ok(Outcome::new(holds, m).with(Some(Witness::Point(direct.argmax))))
        }
        "EX6" => floor_curve(ctx, |s, t| Ok(example_bounds(s, t)?.lplq_bound)),
        "P4" => {
            let h = h_tilde(space, cfg)?.value;
            let nj = nj_constant(space, NjVariant::Classic, cfg)?.value;
            let (excess, at) = worst(ctx.czi_curve()?, |p| {
                let t = p.t;
                let rhs = (1.0 - t) * (1.0 - t)
                    + (-2.0 * t * t + 3.0 * t - 1.0) * h
                    + (2.0 * t - 1.0) * (2.0 * t - 1.0) / (2.0 * nj);
                p.value - rhs
            });
            let mut m = Measured::default();
            m.push("h_tilde", h);
            m.push("c_nj", nj);
            m.push("max_excess", excess);
            m.push("worst_t", at);
            Ok(Outcome::new(excess <= BOUND_SLACK, m))
        }
        "P5" => {
            let j = ctx.james()?.value;
            let curve = ctx.czi_curve()?;
            let (lo, lo_t) = worst(curve, |p| j * j / 4.0 - p.t * j - 3.0 * p.t * p.t - p.value);
            let (hi, hi_t) = worst(curve, |p| {
                let s = 1.0 - 2.0 * p.t;
                p.value - (p.t * p.t + 2.0 * p.t * s / j + s * s / (j * j))
            });
            let mut m = Measured::default();
            m.push("james", j);
            m.push("max_lower_excess", lo);
            m.push("lower_worst_t", lo_t);
            m.push("max_upper_excess", hi);
            m.push("upper_worst_t", hi_t);
            Ok(Outcome::new(lo <= BOUND_SLACK && hi <= BOUND_SLACK, m))
        }
        "L3" => {
            let mut pairs = sample_unit_pair_isos(space, SCALING_UNIT_PAIRS, cfg.seed)?;
            if space.dim() == 2 {
                pairs.extend(sample_iso_complete_pairs(space, SCALING_RANDOM_PAIRS, cfg.seed)?);
            }
            let mut failures = 0usize;
            let mut witness = None;
            for pair in &pairs {
                for alpha in SCALING_ALPHAS {
                    if !iso_scaling_check(space, pair, alpha) {
                        failures += 1;
                        witness.get_or_insert_with(|| pair.clone());
                    }
                }
            }
            let mut m = Measured::default();
            m.push("pairs", pairs.len() as f64);
            m.push("alphas", SCALING_ALPHAS.len() as f64);
            m.push("failures", failures as f64);
            Ok(Outcome::new(failures == 0, m).with(witness.map(Witness::Pair)))
        }
        "T3" => {
            let j = ctx.james()?.value;
            let curve = ctx.czi_curve()?;
            let scan: Vec<(f64, f64)> = nonsquare_ts()
                .map(|t| {
                    curve
                        .iter()
                        .find(|p| p.t == t)
                        .map(|p| (t, p.value))
                        .ok_or_else(|| GeoError::Degenerate(format!("t={t} missing from curve")))
                })
                .collect::<Result<_>>()?;
            let r = classify_nonsquare(&scan, j, NONSQUARE_TOL);
            let mut m = Measured::default();
            m.push("flag", if r.flag { 1.0 } else { 0.0 });
            if let Some(t) = r.t_witness {
                m.push("t_witness", t);
            }
            m.push("james", j);
            Ok(Outcome::new(r.consistent, m))
        }
        "P6" => {
            let mut m = Measured::default();
            let mut excess = f64::NEG_INFINITY;
            let mut min_slope = f64::INFINITY;
            for t in SMOOTH_TS {
                let z = z_profile(space, t, cfg)?.value;
                let rho = modulus_smoothness(space, t, cfg)?.value;
                excess = excess.max(z - (rho + 1.0) * (rho + 1.0) / 2.0);
                let slope = (z - 0.5) / t;
                min_slope = min_slope.min(slope);
                m.push(format!("slope_t{t}"), slope);
                m.push(format!("rho_over_t_t{t}"), rho / t);
            }
            m.push("max_excess", excess);
            Ok(Outcome::new(excess <= BOUND_SLACK && min_slope >= -BOUND_SLACK, m))
        }
        "T4" => {
            let mut m = Measured::default();
            match smoothness_slope(space, &SLOPE_TS, cfg) {
                Ok(points) => {
                    let diff = points
                        .iter()
                        .map(|p| (p.slope - p.czi_form).abs())
                        .fold(0.0, f64::max);
                    for p in &points {
                        m.push(format!("slope_t{}", p.t), p.slope);
                    }
                    m.push("max_form_diff", diff);
                    Ok(Outcome::new(true, m))
                }
                Err(GeoError::FormsDisagree { t, first, second }) => {
                    m.push("t", t);
                    m.push("slope", first);
                    m.push("czi_form", second);
                    Ok(Outcome::new(false, m))
                }
                Err(e) => Err(e),
            }
        }
        other => Err(GeoError::UnknownClaim(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_unique_and_found() {
        for (i, c) in CLAIMS.iter().enumerate() {
            assert!(CLAIMS[i + 1..].iter().all(|d| d.id != c.id), "{}", c.id);
            assert_eq!(find_claim(&c.id.to_lowercase()).unwrap().id, c.id);
        }
        assert!(find_claim("BOGUS").is_none());
    }

    #[test]
    fn applicability() {
        let l1 = SpaceSpec::lp(2, 1.0).unwrap();
        let e = SpaceSpec::euclidean(2).unwrap();
        let l15 = SpaceSpec::lp(2, 1.5).unwrap();
        let e3 = SpaceSpec::euclidean(3).unwrap();
        let ex1 = find_claim("EX1").unwrap();
        assert!(ex1.applies_to(&l1) && !ex1.applies_to(&l15));
        let p1 = find_claim("P1").unwrap();
        assert!(p1.applies_to(&e) && !p1.applies_to(&l1));
        assert!(find_claim("EX4").unwrap().applies_to(&l15));
        assert!(!find_claim("EX4").unwrap().applies_to(&l1));
        assert!(!find_claim("L1").unwrap().applies_to(&e3));
    }
}
