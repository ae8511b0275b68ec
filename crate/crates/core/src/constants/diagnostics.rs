//! Derived checks built on the profile constants.

use serde::Serialize;

use super::{czi, james, z_profile, CziMethod, JamesMethod, SampleStat};
use crate::error::{GeoError, Result};
use crate::optimize::OptConfig;
use crate::orthogonality::{pyth_residual, sample_iso_complete_pairs};
use crate::space::SpaceSpec;

/// Difference quotient of `Z_X` at zero, computed two ways.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopePoint {
    pub t: f64,
    /// `(Z_X(t) - 1/2) / t`
    pub slope: f64,
    /// `(2 C_Z^I((1 - t) / 2) - 1/2) / t`
    pub czi_form: f64,
}

/// Slope of `Z_X` near zero for each `t` in `(0, 0.1]`.
///
/// Fails with [`GeoError::FormsDisagree`] if the two forms differ by more
/// than `1e-6`.
pub fn smoothness_slope(space: &SpaceSpec, ts: &[f64], cfg: &OptConfig) -> Result<Vec<SlopePoint>> {
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        if !(t > 0.0 && t <= 0.1) {
            return Err(GeoError::OutOfRange {
                name: "t",
                value: t,
                lo: 0.0,
                hi: 0.1,
            });
        }
        let slope = (z_profile(space, t, cfg)?.value - 0.5) / t;
        let czi_form =
            (2.0 * czi(space, (1.0 - t) / 2.0, CziMethod::Direct, cfg)?.value - 0.5) / t;
        if (slope - czi_form).abs() > 1e-6 {
            return Err(GeoError::FormsDisagree {
                t,
                first: slope,
                second: czi_form,
            });
        }
        out.push(SlopePoint { t, slope, czi_form });
    }
    Ok(out)
}

/// Outcome of the non-squareness test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonSquareReport {
    /// `C_Z^I(t)` reaches its upper bound `(1 - t)^2` somewhere on the scan.
    pub flag: bool,
    /// First scanned `t` where the bound is reached.
    pub t_witness: Option<f64>,
    pub james_value: f64,
    /// `flag` agrees with `J(X) = 2`.
    pub consistent: bool,
}

/// Scans `t = 0, 0.01, ..., 0.40` for `C_Z^I(t) >= (1 - t)^2 - tol` and
/// cross-checks against the James constant (`J >= 2 - 10 tol`).
pub fn nonsquare_diagnostic(space: &SpaceSpec, cfg: &OptConfig, tol: f64) -> Result<NonSquareReport> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(GeoError::InvalidConfig(format!("tol must be positive, got {tol}")));
    }
    let mut scan = Vec::with_capacity(NONSQUARE_SCAN + 1);
    for t in nonsquare_ts() {
        scan.push((t, czi(space, t, CziMethod::Direct, cfg)?.value));
    }
    let james_value = james(space, JamesMethod::MinForm, cfg)?.value;
    Ok(classify_nonsquare(&scan, james_value, tol))
}

const NONSQUARE_SCAN: usize = 40;

/// The scan points `t = k / 100`, `k = 0..=40`.
pub(crate) fn nonsquare_ts() -> impl Iterator<Item = f64> {
    (0..=NONSQUARE_SCAN).map(|k| k as f64 / 100.0)
}

/// Builds the report from precomputed `(t, C_Z^I(t))` samples.
pub(crate) fn classify_nonsquare(scan: &[(f64, f64)], james_value: f64, tol: f64) -> NonSquareReport {
    let t_witness = scan
        .iter()
        .find(|(t, v)| *v >= (1.0 - t) * (1.0 - t) - tol)
        .map(|(t, _)| *t);
    let flag = t_witness.is_some();
    NonSquareReport {
        flag,
        t_witness,
        james_value,
        consistent: flag == (james_value >= 2.0 - 10.0 * tol),
    }
}

/// Largest Pythagorean residual, relative to the squared pair scale, over
/// `n` seeded isosceles pairs of a planar space.
pub fn orthogonality_gap(space: &SpaceSpec, n: usize, seed: u64) -> Result<SampleStat> {
    if space.dim() != 2 {
        return Err(GeoError::UnsupportedDimension {
            operation: "orthogonality_gap",
            supported: "2",
            found: space.dim(),
        });
    }
    let mut gap: f64 = 0.0;
    for pair in sample_iso_complete_pairs(space, n, seed)? {
        let r = pyth_residual(space, &pair.x1, &pair.x2)?;
        gap = gap.max(r / (pair.scale * pair.scale));
    }
    Ok(SampleStat {
        value: gap,
        samples: n,
    })
}
