//! Origin-symmetric convex polygons and their Minkowski functionals.

use super::SpecError;

const SYMMETRY_TOL: f64 = 1e-12;

/// A convex, origin-symmetric polygon whose gauge defines a planar norm.
///
/// Vertices are kept in the order given (counterclockwise). A second copy is
/// rotated so that polar angles increase from the one closest to `-pi`,
/// which lets [`Polygon::gauge`] find the boundary edge hit by a ray with a
/// binary search.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
    by_angle: Vec<[f64; 2]>,
    angles: Vec<f64>,
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn fmt_vertex(v: [f64; 2]) -> String {
    format!("({},{})", v[0], v[1])
}

impl Polygon {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self, SpecError> {
        let n = vertices.len();
        if n < 4 {
            return Err(SpecError::TooFewVertices(n));
        }
        for v in &vertices {
            if !v[0].is_finite() || !v[1].is_finite() {
                return Err(SpecError::InvalidNumber(fmt_vertex(*v)));
            }
        }

        // Origin strictly inside every edge, strict left turns, one winding.
        let mut winding = 0.0;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if cross(a, b) <= 0.0 {
                return Err(SpecError::OriginNotInterior(format!(
                    "{}-{}",
                    fmt_vertex(a),
                    fmt_vertex(b)
                )));
            }
            if cross(sub(b, a), sub(c, b)) <= 0.0 {
                return Err(SpecError::NotConvex(fmt_vertex(b)));
            }
            winding += cross(a, b).atan2(a[0] * b[0] + a[1] * b[1]);
        }
        if (winding - std::f64::consts::TAU).abs() > 1e-9 {
            return Err(SpecError::NotConvex(format!(
                "vertices wind {:.6} rad instead of once",
                winding
            )));
        }

        for v in &vertices {
            let scale = 1.0 + v[0].abs().max(v[1].abs());
            let mirrored = vertices.iter().any(|w| {
                (w[0] + v[0]).abs() <= SYMMETRY_TOL * scale
                    && (w[1] + v[1]).abs() <= SYMMETRY_TOL * scale
            });
            if !mirrored {
                return Err(SpecError::Asymmetric(fmt_vertex(*v)));
            }
        }

        let start = (0..n)
            .min_by(|&i, &j| {
                let ai = vertices[i][1].atan2(vertices[i][0]);
                let aj = vertices[j][1].atan2(vertices[j][0]);
                ai.total_cmp(&aj)
            })
            .unwrap_or(0);
        let by_angle: Vec<[f64; 2]> = (0..n).map(|k| vertices[(start + k) % n]).collect();
        let angles = by_angle.iter().map(|v| v[1].atan2(v[0])).collect();

        Ok(Self {
            vertices,
            by_angle,
            angles,
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// Minkowski functional of the polygon at `v`.
    ///
    /// The ray through `v` crosses the edge `a -> b`; the crossing point is
    /// `v / gauge`, which gives `gauge = cross(v, b - a) / cross(a, b)`.
    pub fn gauge(&self, v: [f64; 2]) -> f64 {
        if v[0] == 0.0 && v[1] == 0.0 {
            return 0.0;
        }
        let n = self.by_angle.len();
        let phi = v[1].atan2(v[0]);
        let i = self.angles.partition_point(|&a| a <= phi);
        let (a, b) = if i == 0 || i == n {
            (self.by_angle[n - 1], self.by_angle[0])
        } else {
            (self.by_angle[i - 1], self.by_angle[i])
        };
        (cross(v, sub(b, a)) / cross(a, b)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::new(vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]).unwrap()
    }

    #[test]
    fn square_gauge_is_l1() {
        let sq = square();
        assert!((sq.gauge([0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert!((sq.gauge([-3.0, 1.0]) - 4.0).abs() < 1e-14);
        assert!((sq.gauge([0.0, -2.0]) - 2.0).abs() < 1e-15);
        assert!((sq.gauge([-1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert_eq!(sq.gauge([0.0, 0.0]), 0.0);
    }

    #[test]
    fn rejects_bad_polygons() {
        assert!(matches!(
            Polygon::new(vec![[1.0, 0.0], [-1.0, 0.0]]),
            Err(SpecError::TooFewVertices(2))
        ));
        // clockwise
        assert!(Polygon::new(vec![[1.0, 0.0], [0.0, -1.0], [-1.0, 0.0], [0.0, 1.0]]).is_err());
        // not symmetric
        assert!(matches!(
            Polygon::new(vec![[1.0, 0.0], [0.0, 1.0], [-2.0, 0.0], [0.0, -1.0]]),
            Err(SpecError::Asymmetric(_))
        ));
        // collinear middle vertex
        assert!(matches!(
            Polygon::new(vec![
                [1.0, 0.0],
                [0.5, 0.5],
                [0.0, 1.0],
                [-1.0, 0.0],
                [-0.5, -0.5],
                [0.0, -1.0]
            ]),
            Err(SpecError::NotConvex(_))
        ));
    }

    #[test]
    fn rotation_of_input_order_does_not_change_gauge() {
        let a = square();
        let b = Polygon::new(vec![[0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]).unwrap();
        for &v in &[[0.3, -0.9], [-0.7, 0.2], [1.0, 1.0], [-2.0, -0.5]] {
            assert_eq!(a.gauge(v), b.gauge(v));
        }
    }
}
