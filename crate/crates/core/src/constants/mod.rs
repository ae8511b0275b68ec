//! Estimators for the geometric constants of a normed space.
//!
//! Each constant is a supremum (or infimum) over pairs of unit vectors,
//! computed by [`crate::optimize::maximize`] over the direction angles of
//! both vectors. Constants defined over isosceles-orthogonal pairs use the
//! parameterization `x1 = u1 + u2`, `x2 = u1 - u2`; all of them are
//! invariant under joint scaling, so no constraint projection is needed.

mod classical;
mod curves;
mod diagnostics;
mod profile;

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{GeoError, Result};
use crate::optimize::Axis;
use crate::space::SpaceSpec;

pub use classical::{h_tilde, james, modulus_convexity, modulus_smoothness, nj_constant};
pub use curves::{curve, czi_curve, t_grid, z_curve, CurveConstant, CurvePoint};
pub(crate) use diagnostics::{classify_nonsquare, nonsquare_ts};
pub use diagnostics::{
    nonsquare_diagnostic, orthogonality_gap, smoothness_slope, NonSquareReport, SlopePoint,
};
pub use profile::{czi, czi_raw_sample, example_bounds, z_profile, zbaganu, ExampleBounds};

/// Largest space dimension the angle-based estimators accept.
pub const MAX_ESTIMATOR_DIM: usize = 4;

/// Result of a sampling oracle: the best value seen over `samples` draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStat {
    /// `-inf` (or `0` for gaps) when there were no samples.
    pub value: f64,
    pub samples: usize,
}

macro_rules! method_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s.to_ascii_lowercase().replace('-', "_").as_str() {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(
                        "unknown {} {:?}; expected one of: {}",
                        stringify!($name),
                        s,
                        [$($text),+].join(", ")
                    )),
                }
            }
        }
    };
}

method_enum!(
    /// How `C_Z^I(t)` is computed.
    CziMethod { Direct => "direct", Identity => "identity" }
);
method_enum!(
    /// How the Zbaganu constant is computed.
    ZbaganuMethod {
        Direct => "direct",
        ProfileCorrected => "profile_corrected",
        ProfileHalf => "profile_half",
    }
);
method_enum!(
    /// Which form of the James constant.
    JamesMethod { MinForm => "minform", IsoForm => "isoform" }
);
method_enum!(
    /// Which von Neumann-Jordan type constant.
    NjVariant { Classic => "classic", Modified => "modified", Iso => "iso" }
);

/// Maps blocks of direction angles to unit vectors of a space.
pub(crate) struct Chart<'a> {
    space: &'a SpaceSpec,
    angles: usize,
}

impl<'a> Chart<'a> {
    pub(crate) fn new(space: &'a SpaceSpec, operation: &'static str) -> Result<Self> {
        let dim = space.dim();
        if dim > MAX_ESTIMATOR_DIM {
            return Err(GeoError::UnsupportedDimension {
                operation,
                supported: "2..=4",
                found: dim,
            });
        }
        Ok(Self {
            space,
            angles: space.angle_count(),
        })
    }

    /// Full-turn axes for `vectors` unit vectors.
    pub(crate) fn axes(&self, vectors: usize) -> Vec<Axis> {
        vec![Axis::angle(); vectors * self.angles]
    }

    /// The `i`-th unit vector encoded in `params`.
    pub(crate) fn unit(&self, params: &[f64], i: usize) -> Vec4 {
        let mut out = Vec4::zero(self.space.dim());
        self.space
            .unit_into(&params[i * self.angles..(i + 1) * self.angles], out.as_mut());
        out
    }

    pub(crate) fn norm(&self, v: &Vec4) -> f64 {
        self.space.norm_raw(v.as_ref())
    }
}

/// Stack vector of dimension at most [`MAX_ESTIMATOR_DIM`].
#[derive(Clone, Copy)]
pub(crate) struct Vec4 {
    c: [f64; MAX_ESTIMATOR_DIM],
    n: usize,
}

impl Vec4 {
    fn zero(n: usize) -> Self {
        Self {
            c: [0.0; MAX_ESTIMATOR_DIM],
            n,
        }
    }

    /// `a * self + b * other`
    pub(crate) fn lin(&self, a: f64, other: &Vec4, b: f64) -> Vec4 {
        let mut out = Vec4::zero(self.n);
        for i in 0..self.n {
            out.c[i] = a * self.c[i] + b * other.c[i];
        }
        out
    }

    pub(crate) fn to_vec(self) -> Vec<f64> {
        self.c[..self.n].to_vec()
    }
}

impl AsRef<[f64]> for Vec4 {
    fn as_ref(&self) -> &[f64] {
        &self.c[..self.n]
    }
}

impl AsMut<[f64]> for Vec4 {
    fn as_mut(&mut self) -> &mut [f64] {
        &mut self.c[..self.n]
    }
}

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(GeoError::OutOfRange { name, value, lo, hi })
    }
}

/// Adapts a fallible objective to [`crate::optimize::maximize`]: the first
/// error is stashed and the objective returns NaN, which stops the search.
pub(crate) struct Fallible {
    err: RefCell<Option<GeoError>>,
}

impl Fallible {
    pub(crate) fn new() -> Self {
        Self {
            err: RefCell::new(None),
        }
    }

    pub(crate) fn wrap(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    /// Prefers the stashed error over the optimizer's NaN report.
    pub(crate) fn finish<T>(self, r: Result<T>) -> Result<T> {
        match self.err.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}
