use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{czi, modulus_convexity, modulus_smoothness, z_profile, CziMethod};
use crate::error::Result;
use crate::optimize::OptConfig;
use crate::space::SpaceSpec;

/// One sample of a constant's curve together with the known bounds at `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub method: CziMethod,
}

/// Constants that can be tabulated as curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveConstant {
    /// `C_Z^I(t)`, `t` in `[0, 1/2]`
    Czi,
    /// `Z_X(t)`, `t` in `[0, 1]`
    Z,
    /// modulus of smoothness, `t` in `[0, 1]`
    Rho,
    /// modulus of convexity, `eps` in `[0, 2]`
    Delta,
}

impl CurveConstant {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveConstant::Czi => "czi",
            CurveConstant::Z => "z",
            CurveConstant::Rho => "rho",
            CurveConstant::Delta => "delta",
        }
    }

    fn domain_end(self) -> f64 {
        match self {
            CurveConstant::Czi => 0.5,
            CurveConstant::Z | CurveConstant::Rho => 1.0,
            CurveConstant::Delta => 2.0,
        }
    }
}

impl fmt::Display for CurveConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurveConstant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "czi" => Ok(CurveConstant::Czi),
            "z" => Ok(CurveConstant::Z),
            "rho" => Ok(CurveConstant::Rho),
            "delta" => Ok(CurveConstant::Delta),
            _ => Err(format!("unknown curve constant {s:?}; expected czi, z, rho or delta")),
        }
    }
}

/// `points` evenly spaced parameters over the constant's domain, both ends
/// included. For `C_Z^I` with 51 points this is `t = k / 100`.
pub fn t_grid(constant: CurveConstant, points: usize) -> Vec<f64> {
    let end = constant.domain_end();
    match points {
        0 => vec![],
        1 => vec![0.0],
        _ => {
            let steps = (points - 1) as f64;
            (0..points)
                .map(|k| {
                    if k + 1 == points {
                        end
                    } else {
                        k as f64 / (steps / end)
                    }
                })
                .collect()
        }
    }
}

/// `C_Z^I` along `ts`, with the bounds `t - t^2` and `(1 - t)^2`.
pub fn czi_curve(
    space: &SpaceSpec,
    ts: &[f64],
    method: CziMethod,
    cfg: &OptConfig,
) -> Result<Vec<CurvePoint>> {
    ts.iter()
        .map(|&t| {
            Ok(CurvePoint {
                t,
                value: czi(space, t, method, cfg)?.value,
                lower_bound: t - t * t,
                upper_bound: (1.0 - t) * (1.0 - t),
                method,
            })
        })
        .collect()
}

/// `Z_X` along `ts`, with the bounds `(1 - t^2) / 2` and `(1 + t)^2 / 2`.
pub fn z_curve(space: &SpaceSpec, ts: &[f64], cfg: &OptConfig) -> Result<Vec<CurvePoint>> {
    ts.iter()
        .map(|&t| {
            Ok(CurvePoint {
                t,
                value: z_profile(space, t, cfg)?.value,
                lower_bound: (1.0 - t * t) / 2.0,
                upper_bound: (1.0 + t) * (1.0 + t) / 2.0,
                method: CziMethod::Direct,
            })
        })
        .collect()
}

/// Tabulates `constant` on a `points`-point grid.
///
/// `C_Z^I` is tabulated with both methods: all direct rows, then all
/// identity rows. Bounds for the moduli are the Euclidean values (the
/// extreme case) and the trivial ones: `sqrt(1 + t^2) - 1 <= rho(t) <= t`
/// and `0 <= delta(eps) <= 1 - sqrt(1 - eps^2 / 4)`.
pub fn curve(
    space: &SpaceSpec,
    constant: CurveConstant,
    points: usize,
    cfg: &OptConfig,
) -> Result<Vec<CurvePoint>> {
    let ts = t_grid(constant, points);
    match constant {
        CurveConstant::Czi => {
            let mut rows = czi_curve(space, &ts, CziMethod::Direct, cfg)?;
            rows.extend(czi_curve(space, &ts, CziMethod::Identity, cfg)?);
            Ok(rows)
        }
        CurveConstant::Z => z_curve(space, &ts, cfg),
        CurveConstant::Rho => ts
            .iter()
            .map(|&t| {
                Ok(CurvePoint {
                    t,
                    value: modulus_smoothness(space, t, cfg)?.value,
                    lower_bound: (1.0 + t * t).sqrt() - 1.0,
                    upper_bound: t,
                    method: CziMethod::Direct,
                })
            })
            .collect(),
        CurveConstant::Delta => ts
            .iter()
            .map(|&e| {
                Ok(CurvePoint {
                    t: e,
                    value: modulus_convexity(space, e, cfg)?.value,
                    lower_bound: 0.0,
                    upper_bound: 1.0 - (1.0 - e * e / 4.0).max(0.0).sqrt(),
                    method: CziMethod::Direct,
                })
            })
            .collect(),
    }
}
