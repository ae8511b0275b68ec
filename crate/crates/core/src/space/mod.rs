//! The catalog of finite-dimensional normed spaces.
//!
//! Every space is a norm on `R^n`; vectors are plain `f64` coordinates.
//! Norm evaluation is exact up to floating-point rounding for every family,
//! which the optimizers downstream rely on.

mod parse;
mod polygon;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::error::{GeoError, Result};

pub use parse::parse_space_spec;
pub use polygon::Polygon;

/// Validation and parse failures for space descriptions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("empty space spec")]
    Empty,
    #[error("unknown space family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} is missing parameter {name:?}")]
    MissingParameter { family: &'static str, name: &'static str },
    #[error("unknown parameter {0:?}")]
    UnknownParameter(String),
    #[error("malformed token {0:?}")]
    Malformed(String),
    #[error("invalid number {0:?}")]
    InvalidNumber(String),
    #[error("dimension {0:?} must be an integer >= 2")]
    DimensionTooSmall(String),
    #[error("exponent {0:?} is below 1")]
    ExponentBelowOne(String),
    #[error("q exceeds p (q={q}, p={p})")]
    QExceedsP { p: String, q: String },
    #[error("p must be finite for lplq, got {0:?}")]
    InfiniteExponent(String),
    #[error("polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not origin-symmetric: vertex {0} has no mirror image")]
    Asymmetric(String),
    #[error("polygon is not a counterclockwise convex polygon at {0}")]
    NotConvex(String),
    #[error("origin is not strictly inside the polygon (edge {0})")]
    OriginNotInterior(String),
}

/// A point of `R^n` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(GeoError::EmptyVector);
        }
        check_finite(&coords)?;
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Vector, b: f64) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn scaled(&self, a: f64) -> Vector {
        Vector(self.0.iter().map(|x| a * x).collect())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

fn check_finite(coords: &[f64]) -> Result<()> {
    match coords.iter().position(|c| !c.is_finite()) {
        Some(index) => Err(GeoError::NonFinite {
            index,
            value: coords[index],
        }),
        None => Ok(()),
    }
}

/// The exponent of an `l_p` norm; infinity is its own value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

/// A concrete finite-dimensional normed space.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    /// `R^dim` with the `l_p` norm, `1 <= p <= inf`.
    Lp { dim: usize, p: Exponent },
    /// `R^2` with the `l_p` norm on the closed first and third quadrants and
    /// the `l_q` norm elsewhere, `1 <= q <= p < inf`.
    LpLq { p: f64, q: f64 },
    /// `R^2` normed by the gauge of a symmetric convex polygon.
    Polyhedral(Polygon),
    /// `R^n` with the max-norm: a sampled sup-norm on `n` grid nodes.
    GridSup { n: usize },
    /// `R^dim` with the Euclidean norm.
    Euclidean { dim: usize },
}

impl SpaceSpec {
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        let p = if p.is_infinite() && p > 0.0 {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        };
        let s = SpaceSpec::Lp { dim, p };
        s.validate()?;
        Ok(s)
    }

    pub fn lp_lq(p: f64, q: f64) -> Result<Self> {
        let s = SpaceSpec::LpLq { p, q };
        s.validate()?;
        Ok(s)
    }

    pub fn polyhedral(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Ok(SpaceSpec::Polyhedral(Polygon::new(vertices)?))
    }

    pub fn grid_sup(n: usize) -> Result<Self> {
        let s = SpaceSpec::GridSup { n };
        s.validate()?;
        Ok(s)
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        let s = SpaceSpec::Euclidean { dim };
        s.validate()?;
        Ok(s)
    }

    /// Checks the family invariants. Variants built through the public enum
    /// constructors are not validated until this is called.
    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            SpaceSpec::Lp { dim, p } => {
                if *dim < 2 {
                    return Err(SpecError::DimensionTooSmall(dim.to_string()));
                }
                if let Exponent::Finite(p) = p {
                    if !(p.is_finite() && *p >= 1.0) {
                        return Err(SpecError::ExponentBelowOne(format!("p={p}")));
                    }
                }
                Ok(())
            }
            SpaceSpec::LpLq { p, q } => {
                if !p.is_finite() {
                    return Err(SpecError::InfiniteExponent(p.to_string()));
                }
                if *p < 1.0 {
                    return Err(SpecError::ExponentBelowOne(format!("p={p}")));
                }
                if !(q.is_finite() && *q >= 1.0) {
                    return Err(SpecError::ExponentBelowOne(format!("q={q}")));
                }
                if q > p {
                    return Err(SpecError::QExceedsP {
                        p: p.to_string(),
                        q: q.to_string(),
                    });
                }
                Ok(())
            }
            SpaceSpec::Polyhedral(_) => Ok(()),
            SpaceSpec::GridSup { n: dim } | SpaceSpec::Euclidean { dim } => {
                if *dim < 2 {
                    Err(SpecError::DimensionTooSmall(dim.to_string()))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SpaceSpec::Lp { dim, .. } | SpaceSpec::Euclidean { dim } => *dim,
            SpaceSpec::GridSup { n } => *n,
            SpaceSpec::LpLq { .. } | SpaceSpec::Polyhedral(_) => 2,
        }
    }

    /// True for the inner-product spaces of the catalog.
    pub fn is_hilbert(&self) -> bool {
        match self {
            SpaceSpec::Euclidean { .. } => true,
            SpaceSpec::Lp { p, .. } => *p == Exponent::Finite(2.0),
            SpaceSpec::LpLq { p, q } => *p == 2.0 && *q == 2.0,
            _ => false,
        }
    }

    pub fn norm(&self, v: &Vector) -> Result<f64> {
        self.norm_of(v.as_slice())
    }

    /// Norm of a raw coordinate slice, with the same checks as [`Self::norm`].
    pub fn norm_of(&self, coords: &[f64]) -> Result<f64> {
        if coords.len() != self.dim() {
            return Err(GeoError::DimensionMismatch {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        check_finite(coords)?;
        Ok(self.norm_raw(coords))
    }

    /// Norm without dimension or finiteness checks; the estimators' hot path.
    pub(crate) fn norm_raw(&self, x: &[f64]) -> f64 {
        match self {
            SpaceSpec::Lp { p, .. } => lp_norm(x, p.value()),
            SpaceSpec::Euclidean { .. } => lp_norm(x, 2.0),
            SpaceSpec::GridSup { .. } => lp_norm(x, f64::INFINITY),
            SpaceSpec::LpLq { p, q } => {
                if x[0] * x[1] >= 0.0 {
                    lp_norm(x, *p)
                } else {
                    lp_norm(x, *q)
                }
            }
            SpaceSpec::Polyhedral(poly) => poly.gauge([x[0], x[1]]),
        }
    }

    /// Number of direction angles that parameterize the unit sphere.
    pub fn angle_count(&self) -> usize {
        self.dim() - 1
    }

    /// The unit vector in the direction given by spherical angles.
    ///
    /// In dimension `n` the Euclidean direction is
    /// `(cos a0, sin a0 cos a1, ..., sin a0 ... sin a(n-2))`, then scaled
    /// by the reciprocal of its norm in this space.
    pub fn unit_vector(&self, angles: &[f64]) -> Result<Vector> {
        if angles.len() != self.angle_count() {
            return Err(GeoError::AngleCount {
                expected: self.angle_count(),
                found: angles.len(),
            });
        }
        check_finite(angles)?;
        let mut out = vec![0.0; self.dim()];
        self.unit_into(angles, &mut out);
        Ok(Vector(out))
    }

    pub(crate) fn unit_into(&self, angles: &[f64], out: &mut [f64]) {
        direction_into(angles, out);
        let r = self.norm_raw(out);
        for c in out.iter_mut() {
            *c /= r;
        }
    }

    pub fn normalize(&self, v: &Vector) -> Result<Vector> {
        let r = self.norm(v)?;
        if r == 0.0 {
            return Err(GeoError::ZeroVector);
        }
        Ok(v.scaled(1.0 / r))
    }
}

/// Euclidean unit direction from spherical angles; `out.len() == angles.len() + 1`.
pub(crate) fn direction_into(angles: &[f64], out: &mut [f64]) {
    let mut prod = 1.0;
    for (k, &a) in angles.iter().enumerate() {
        let (s, c) = a.sin_cos();
        out[k] = prod * c;
        prod *= s;
    }
    out[angles.len()] = prod;
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        x.iter().map(|c| c.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|c| c * c).sum::<f64>().sqrt()
    } else if p.is_infinite() {
        x.iter().fold(0.0, |m: f64, c| m.max(c.abs()))
    } else {
        let m = x.iter().fold(0.0, |m: f64, c| m.max(c.abs()));
        if m == 0.0 {
            return 0.0;
        }
        let sum: f64 = x
            .iter()
            .map(|c| {
                let a = c.abs() / m;
                if a == 0.0 {
                    0.0
                } else {
                    (p * a.ln()).exp()
                }
            })
            .sum();
        m * (sum.ln() / p).exp()
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lp { dim, p } => write!(f, "lp:dim={dim},p={p}"),
            SpaceSpec::LpLq { p, q } => write!(f, "lplq:p={p},q={q}"),
            SpaceSpec::Polyhedral(poly) => {
                let parts: Vec<String> =
                    poly.vertices().iter().map(|v| polygon::fmt_vertex(*v)).collect();
                write!(f, "poly:{}", parts.join(";"))
            }
            SpaceSpec::GridSup { n } => write!(f, "gridsup:n={n}"),
            SpaceSpec::Euclidean { dim } => write!(f, "euclidean:dim={dim}"),
        }
    }
}

impl Serialize for SpaceSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The nine spaces every asserted claim is checked on.
pub fn default_catalog() -> Vec<SpaceSpec> {
    let h = 3f64.sqrt() / 2.0;
    vec![
        SpaceSpec::Euclidean { dim: 2 },
        SpaceSpec::Lp { dim: 2, p: Exponent::Finite(1.0) },
        SpaceSpec::Lp { dim: 2, p: Exponent::Finite(1.5) },
        SpaceSpec::Lp { dim: 2, p: Exponent::Finite(3.0) },
        SpaceSpec::Lp { dim: 2, p: Exponent::Infinity },
        SpaceSpec::LpLq { p: 2.0, q: 1.0 },
        SpaceSpec::LpLq { p: 3.0, q: 1.5 },
        SpaceSpec::Polyhedral(
            Polygon::new(vec![
                [1.0, 0.0],
                [0.5, h],
                [-0.5, h],
                [-1.0, 0.0],
                [-0.5, -h],
                [0.5, -h],
            ])
            .expect("regular hexagon is a valid unit ball"),
        ),
        SpaceSpec::GridSup { n: 4 },
    ]
}
