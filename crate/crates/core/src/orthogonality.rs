//! Isosceles and Pythagorean orthogonality.
//!
//! Two routes produce isosceles pairs. [`iso_from_unit_pair`] maps a pair of
//! unit vectors `(u1, u2)` to `(u1 + u2, u1 - u2)`; every isosceles pair is a
//! positive multiple of one of these. [`iso_complete`] instead solves for the
//! scalar `a` making `x` and `a x + y` isosceles, by bracketing and
//! bisection. The second route is the independent oracle for the first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GeoError, Result};
use crate::space::{SpaceSpec, Vector};

/// Relative tolerance for certifying `||x1 + x2|| = ||x1 - x2||`.
pub const TOL_ISO: f64 = 1e-9;

const UNIT_TOL: f64 = 1e-9;
const BRACKET_LIMIT: f64 = 1e6;

/// A pair certified isosceles-orthogonal within `TOL_ISO * scale`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoPair {
    pub x1: Vector,
    pub x2: Vector,
    /// `| ||x1 + x2|| - ||x1 - x2|| |`
    pub residual: f64,
    /// `max(||x1||, ||x2||, ||x1 + x2||)`
    pub scale: f64,
}

impl IsoPair {
    /// Certifies `(x1, x2)` at tolerance `tol` relative to the pair's scale.
    pub fn certify(space: &SpaceSpec, x1: Vector, x2: Vector, tol: f64) -> Result<Self> {
        let pair = Self::measure(space, x1, x2)?;
        if pair.scale == 0.0 {
            return Err(GeoError::Degenerate("both vectors are zero".into()));
        }
        if pair.residual > tol * pair.scale {
            return Err(GeoError::Degenerate(format!(
                "residual {:e} exceeds {:e} * scale {}",
                pair.residual, tol, pair.scale
            )));
        }
        Ok(pair)
    }

    fn measure(space: &SpaceSpec, x1: Vector, x2: Vector) -> Result<Self> {
        let residual = iso_residual(space, &x1, &x2)?;
        let sum = x1.combine(1.0, &x2, 1.0);
        let scale = space
            .norm(&x1)?
            .max(space.norm(&x2)?)
            .max(space.norm_raw(sum.as_slice()));
        Ok(Self {
            x1,
            x2,
            residual,
            scale,
        })
    }

    /// Same pair with both vectors multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            x1: self.x1.scaled(lambda),
            x2: self.x2.scaled(lambda),
            residual: self.residual * lambda.abs(),
            scale: self.scale * lambda.abs(),
        }
    }
}

fn check_dims(space: &SpaceSpec, vs: &[&Vector]) -> Result<()> {
    for v in vs {
        if v.dim() != space.dim() {
            return Err(GeoError::DimensionMismatch {
                expected: space.dim(),
                found: v.dim(),
            });
        }
    }
    Ok(())
}

/// `| ||x + y|| - ||x - y|| |`; zero when either vector is zero.
pub fn iso_residual(space: &SpaceSpec, x: &Vector, y: &Vector) -> Result<f64> {
    check_dims(space, &[x, y])?;
    if x.is_zero() || y.is_zero() {
        return Ok(0.0);
    }
    let plus = space.norm(&x.combine(1.0, y, 1.0))?;
    let minus = space.norm(&x.combine(1.0, y, -1.0))?;
    Ok((plus - minus).abs())
}

/// `| ||x - y||^2 - ||x||^2 - ||y||^2 |`
pub fn pyth_residual(space: &SpaceSpec, x: &Vector, y: &Vector) -> Result<f64> {
    check_dims(space, &[x, y])?;
    if y.is_zero() {
        return Ok(0.0);
    }
    let d = space.norm(&x.combine(1.0, y, -1.0))?;
    let nx = space.norm(x)?;
    let ny = space.norm(y)?;
    Ok((d * d - nx * nx - ny * ny).abs())
}

fn check_unit(space: &SpaceSpec, u: &Vector) -> Result<()> {
    let n = space.norm(u)?;
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(GeoError::NotUnit { norm: n });
    }
    Ok(())
}

/// The isosceles pair `(u1 + u2, u1 - u2)` built from two unit vectors.
pub fn iso_from_unit_pair(space: &SpaceSpec, u1: &Vector, u2: &Vector) -> Result<IsoPair> {
    check_dims(space, &[u1, u2])?;
    check_unit(space, u1)?;
    check_unit(space, u2)?;
    IsoPair::certify(
        space,
        u1.combine(1.0, u2, 1.0),
        u1.combine(1.0, u2, -1.0),
        2.0 * TOL_ISO,
    )
}

/// Finds `alpha` such that `x` and `alpha * x + y` are isosceles-orthogonal.
///
/// `g(a) = ||(1 + a) x + y|| - ||(a - 1) x + y||` tends to `+-2||x||` as
/// `a -> +-inf`. The bracket starts at `[-1, 1]` and doubles until `g`
/// changes sign, then bisects to width `1e-12` (relative for large roots).
pub fn iso_complete(space: &SpaceSpec, x: &Vector, y: &Vector) -> Result<f64> {
    check_dims(space, &[x, y])?;
    if x.is_zero() {
        return Err(GeoError::Degenerate("x is the zero vector".into()));
    }
    let xx: f64 = x.as_slice().iter().map(|a| a * a).sum();
    let yy: f64 = y.as_slice().iter().map(|a| a * a).sum();
    let xy: f64 = x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a * b).sum();
    if xx * yy - xy * xy <= 1e-20 * xx * yy {
        return Err(GeoError::Degenerate("y is parallel to x".into()));
    }

    let g = |a: f64| -> f64 {
        let plus: Vec<f64> = x
            .as_slice()
            .iter()
            .zip(y.as_slice())
            .map(|(xi, yi)| (1.0 + a) * xi + yi)
            .collect();
        let minus: Vec<f64> = x
            .as_slice()
            .iter()
            .zip(y.as_slice())
            .map(|(xi, yi)| (a - 1.0) * xi + yi)
            .collect();
        space.norm_raw(&plus) - space.norm_raw(&minus)
    };

    let (mut lo, mut hi) = (-1.0, 1.0);
    let (mut g_lo, mut g_hi) = (g(lo), g(hi));
    while !(g_lo <= 0.0 && g_hi >= 0.0) {
        if hi >= BRACKET_LIMIT {
            return Err(GeoError::BracketExhausted {
                limit: BRACKET_LIMIT,
            });
        }
        lo *= 2.0;
        hi *= 2.0;
        g_lo = g(lo);
        g_hi = g(hi);
    }
    if g_lo == 0.0 {
        return finish(space, x, y, lo);
    }
    if g_hi == 0.0 {
        return finish(space, x, y, hi);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            return finish(space, x, y, mid);
        }
        let gm = g(mid);
        if gm == 0.0 {
            return finish(space, x, y, mid);
        }
        if gm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn finish(space: &SpaceSpec, x: &Vector, y: &Vector, alpha: f64) -> Result<f64> {
    IsoPair::certify(space, x.clone(), x.combine(alpha, y, 1.0), TOL_ISO)?;
    Ok(alpha)
}

/// A unit vector `y` isosceles-orthogonal to the unit vector `x` (planar spaces).
///
/// `h(a) = ||x + u(a)|| - ||x - u(a)||` changes sign over any half-turn since
/// `u(a + pi) = -u(a)`; the half-turn starts a quarter-turn past `x`.
pub fn unit_iso_partner(space: &SpaceSpec, x: &Vector) -> Result<Vector> {
    if space.dim() != 2 {
        return Err(GeoError::UnsupportedDimension {
            operation: "unit_iso_partner",
            supported: "2",
            found: space.dim(),
        });
    }
    check_dims(space, &[x])?;
    check_unit(space, x)?;
    let (x0, x1) = (x[0], x[1]);
    let partner = |a: f64| -> [f64; 2] {
        let mut u = [0.0; 2];
        space.unit_into(&[a], &mut u);
        u
    };
    let h = |a: f64| -> f64 {
        let u = partner(a);
        space.norm_raw(&[x0 + u[0], x1 + u[1]]) - space.norm_raw(&[x0 - u[0], x1 - u[1]])
    };

    let start = x1.atan2(x0) + std::f64::consts::FRAC_PI_2;
    let (mut lo, mut hi) = (start, start + std::f64::consts::PI);
    let (h_lo, h_hi) = (h(lo), h(hi));
    let root = if h_lo == 0.0 {
        lo
    } else if h_hi == 0.0 {
        hi
    } else {
        // orient so that h(lo) < 0 < h(hi)
        if h_lo > 0.0 {
            std::mem::swap(&mut lo, &mut hi);
        }
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..200 {
            mid = 0.5 * (lo + hi);
            if (hi - lo).abs() <= 1e-15 {
                break;
            }
            let hm = h(mid);
            if hm == 0.0 {
                break;
            }
            if hm < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        mid
    };
    let y = Vector::from_raw(partner(root).to_vec());
    IsoPair::certify(space, x.clone(), y.clone(), TOL_ISO)?;
    Ok(y)
}

/// Checks the isosceles-orthogonality inequalities for `||x1 + alpha x2||`:
///
/// * `|alpha| >= 1`: `||x1 + a x2|| <= |a| ||x1 +- x2||` and `||x1 +- x2|| <= ||x1 + a x2||`
/// * `|alpha| <= 1`: `||x1 + a x2|| <= ||x1 +- x2||` and `|a| ||x1 +- x2|| <= ||x1 + a x2||`
///
/// Each holds within `1e-9 * pair.scale`.
pub fn iso_scaling_check(space: &SpaceSpec, pair: &IsoPair, alpha: f64) -> bool {
    let x1 = pair.x1.as_slice();
    let x2 = pair.x2.as_slice();
    let comb = |a: f64| -> f64 {
        let v: Vec<f64> = x1.iter().zip(x2).map(|(p, q)| p + a * q).collect();
        space.norm_raw(&v)
    };
    let plus = comb(1.0);
    let minus = comb(-1.0);
    let mixed = comb(alpha);
    let slack = 1e-9 * pair.scale;
    let a = alpha.abs();
    let mut ok = true;
    for side in [plus, minus] {
        if a >= 1.0 {
            ok &= mixed <= a * side + slack;
            ok &= side <= mixed + slack;
        }
        if a <= 1.0 {
            ok &= mixed <= side + slack;
            ok &= a * side <= mixed + slack;
        }
    }
    ok
}

/// Seeded random pairs `(x, alpha x + y)` with `alpha` from [`iso_complete`].
///
/// Inputs `x, y` have coordinates uniform in `[-1, 1]`; near-parallel or
/// tiny inputs are redrawn.
pub fn sample_iso_complete_pairs(space: &SpaceSpec, n: usize, seed: u64) -> Result<Vec<IsoPair>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = space.dim();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let y: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let (x, y) = (Vector::from_raw(x), Vector::from_raw(y));
        let xx: f64 = x.as_slice().iter().map(|a| a * a).sum();
        let yy: f64 = y.as_slice().iter().map(|a| a * a).sum();
        let xy: f64 = x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| a * b).sum();
        if xx < 1e-6 || yy < 1e-6 || xx * yy - xy * xy < 1e-6 * xx * yy {
            continue;
        }
        let alpha = iso_complete(space, &x, &y)?;
        let x2 = x.combine(alpha, &y, 1.0);
        out.push(IsoPair::certify(space, x, x2, TOL_ISO)?);
    }
    Ok(out)
}

/// Seeded random pairs from [`iso_from_unit_pair`], each rescaled by a
/// random factor in `[1e-3, 1e3]` (log-uniform).
pub fn sample_unit_pair_isos(space: &SpaceSpec, n: usize, seed: u64) -> Result<Vec<IsoPair>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = space.angle_count();
    let tau = std::f64::consts::TAU;
    (0..n)
        .map(|_| {
            let a: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..tau)).collect();
            let b: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..tau)).collect();
            let lambda = 10f64.powf(rng.random_range(-3.0..=3.0));
            let pair = iso_from_unit_pair(space, &space.unit_vector(&a)?, &space.unit_vector(&b)?)?;
            Ok(pair.scaled(lambda))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn l1() -> SpaceSpec {
        SpaceSpec::lp(2, 1.0).unwrap()
    }

    fn e2() -> SpaceSpec {
        SpaceSpec::euclidean(2).unwrap()
    }

    #[test]
    fn residual_examples() {
        assert_eq!(iso_residual(&e2(), &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(iso_residual(&l1(), &v(&[1.0, 1.0]), &v(&[1.0, -1.0])).unwrap(), 0.0);
        assert_eq!(iso_residual(&l1(), &v(&[0.3, -7.0]), &v(&[0.0, 0.0])).unwrap(), 0.0);
        assert!(pyth_residual(&e2(), &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap() < 1e-15);
        assert_eq!(pyth_residual(&l1(), &v(&[1.0, 1.0]), &v(&[1.0, -1.0])).unwrap(), 4.0);
        assert_eq!(pyth_residual(&l1(), &v(&[2.0, 5.0]), &v(&[0.0, 0.0])).unwrap(), 0.0);
        assert!(matches!(
            iso_residual(&l1(), &v(&[1.0]), &v(&[1.0, 0.0])),
            Err(GeoError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unit_pair_examples() {
        let p = iso_from_unit_pair(&l1(), &v(&[1.0, 0.0]), &v(&[1.0, 0.0])).unwrap();
        assert_eq!(p.x1.as_slice(), &[2.0, 0.0]);
        assert_eq!(p.x2.as_slice(), &[0.0, 0.0]);

        for space in [e2(), l1()] {
            let p = iso_from_unit_pair(&space, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
            assert_eq!(p.x1.as_slice(), &[1.0, 1.0]);
            assert_eq!(p.x2.as_slice(), &[1.0, -1.0]);
            assert_eq!(p.residual, 0.0);
        }
        assert!(matches!(
            iso_from_unit_pair(&l1(), &v(&[2.0, 0.0]), &v(&[0.0, 1.0])),
            Err(GeoError::NotUnit { .. })
        ));
    }

    #[test]
    fn iso_complete_examples() {
        let a = iso_complete(&e2(), &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert!(a.abs() < 1e-12);
        let a = iso_complete(&l1(), &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert!(a.abs() < 1e-12);
        let a = iso_complete(&l1(), &v(&[1.0, 0.0]), &v(&[1.0, 2.0])).unwrap();
        assert!((a + 1.0).abs() < 1e-9, "{a}");
        // a root far outside the initial bracket
        let a = iso_complete(&e2(), &v(&[1.0, 0.0]), &v(&[-300.0, 1.0])).unwrap();
        assert!((a - 300.0).abs() < 1e-6, "{a}");
        assert!(matches!(
            iso_complete(&l1(), &v(&[1.0, 1.0]), &v(&[-2.0, -2.0])),
            Err(GeoError::Degenerate(_))
        ));
        assert!(matches!(
            iso_complete(&l1(), &v(&[0.0, 0.0]), &v(&[1.0, 0.0])),
            Err(GeoError::Degenerate(_))
        ));
    }

    #[test]
    fn iso_complete_bracket_limit() {
        let e = e2();
        assert!(matches!(
            iso_complete(&e, &v(&[1e-7, 0.0]), &v(&[1.0, 1.0])),
            Err(GeoError::BracketExhausted { .. })
        ));
    }

    #[test]
    fn partner_examples() {
        let y = unit_iso_partner(&e2(), &v(&[1.0, 0.0])).unwrap();
        assert!(y[0].abs() < 1e-12 && (y[1].abs() - 1.0).abs() < 1e-12, "{y:?}");
        let y = unit_iso_partner(&l1(), &v(&[1.0, 0.0])).unwrap();
        assert!(y[0].abs() < 1e-12 && (y[1].abs() - 1.0).abs() < 1e-12, "{y:?}");
        let sup = SpaceSpec::grid_sup(2).unwrap();
        let y = unit_iso_partner(&sup, &v(&[1.0, 1.0])).unwrap();
        assert!(iso_residual(&sup, &v(&[1.0, 1.0]), &y).unwrap() <= TOL_ISO);
        assert!((y[0] + y[1]).abs() < 1e-12, "{y:?}");
        let e3 = SpaceSpec::euclidean(3).unwrap();
        assert!(matches!(
            unit_iso_partner(&e3, &v(&[1.0, 0.0, 0.0])),
            Err(GeoError::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn iso_scaling_examples() {
        let e = e2();
        let pair = IsoPair::certify(&e, v(&[1.0, 1.0]), v(&[1.0, -1.0]), TOL_ISO).unwrap();
        assert!(iso_scaling_check(&e, &pair, 0.0));
        let l = l1();
        let pair = IsoPair::certify(&l, v(&[1.0, 1.0]), v(&[1.0, -1.0]), TOL_ISO).unwrap();
        assert!(iso_scaling_check(&l, &pair, 0.5));
        assert!(iso_scaling_check(&l, &pair, 2.0));
        // a non-isosceles pair violates it
        let bad = IsoPair::measure(&l, v(&[1.0, 0.0]), v(&[1.0, 0.0])).unwrap();
        assert!(!iso_scaling_check(&l, &bad, 0.0));
    }

    #[test]
    fn certify_rejects() {
        let l = l1();
        assert!(IsoPair::certify(&l, v(&[1.0, 0.0]), v(&[1.0, 0.0]), TOL_ISO).is_err());
        assert!(IsoPair::certify(&l, v(&[0.0, 0.0]), v(&[0.0, 0.0]), TOL_ISO).is_err());
    }
}
