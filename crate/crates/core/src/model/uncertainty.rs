//! Objective-wise uncertainty sets: the five concrete kinds the toolkit
//! understands, with membership tests and support functions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::polytope::{contains_point, Polytope};
use crate::geometry::support::Support;
use crate::linalg;

#[derive(Clone, Debug, PartialEq)]
pub enum UncertaintySet {
    Polytope(Polytope),
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// { center + A^{1/2} z : |z|_2 <= 1 } for the SPD shape matrix A.
    Ellipsoid {
        center: Vec<f64>,
        shape: Vec<Vec<f64>>,
    },
    Finite {
        points: Vec<Vec<f64>>,
    },
}

impl UncertaintySet {
    pub fn dim(&self) -> usize {
        match self {
            UncertaintySet::Polytope(p) => p.dim(),
            UncertaintySet::Box { lo, .. } => lo.len(),
            UncertaintySet::Ball { center, .. } => center.len(),
            UncertaintySet::Ellipsoid { center, .. } => center.len(),
            UncertaintySet::Finite { points } => points[0].len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            UncertaintySet::Polytope(_) => Ok(()), // validated at construction
            UncertaintySet::Box { lo, hi } => {
                if lo.len() != hi.len() {
                    return Err(Error::Dimension {
                        expected: lo.len(),
                        found: hi.len(),
                    });
                }
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return Err(Error::validation("box bounds need lo <= hi"));
                }
                Ok(())
            }
            UncertaintySet::Ball { radius, center } => {
                if !(*radius > 0.0) {
                    return Err(Error::validation("ball radius must be positive"));
                }
                if !linalg::is_finite_vec(center) {
                    return Err(Error::validation("ball center has NaN/Inf"));
                }
                Ok(())
            }
            UncertaintySet::Ellipsoid { center, shape } => {
                let n = center.len();
                if shape.len() != n || shape.iter().any(|r| r.len() != n) {
                    return Err(Error::validation("ellipsoid shape matrix shape mismatch"));
                }
                self.cholesky_factor()?;
                Ok(())
            }
            UncertaintySet::Finite { points } => {
                if points.is_empty() {
                    return Err(Error::validation("finite uncertainty set is empty"));
                }
                let n = points[0].len();
                for p in points {
                    if p.len() != n {
                        return Err(Error::Dimension {
                            expected: n,
                            found: p.len(),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            UncertaintySet::Polytope(p) => p.is_bounded(),
            _ => true,
        }
    }

    /// Lower-triangular Cholesky factor of the ellipsoid shape; errors on
    /// non-SPD matrices (this is the SPD validity check).
    pub fn cholesky_factor(&self) -> Result<Vec<Vec<f64>>> {
        let UncertaintySet::Ellipsoid { shape, .. } = self else {
            return Err(Error::config("cholesky_factor only applies to ellipsoids"));
        };
        let n = shape.len();
        let m = DMatrix::from_fn(n, n, |i, j| shape[i][j]);
        let chol = m
            .clone()
            .cholesky()
            .ok_or_else(|| Error::validation("ellipsoid shape is not SPD"))?;
        let l = chol.l();
        Ok((0..n)
            .map(|i| (0..n).map(|j| l[(i, j)]).collect())
            .collect())
    }

    /// Membership within tolerance `tol`.
    pub fn contains(&self, u: &[f64], tol: f64) -> Result<bool> {
        if u.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: u.len(),
            });
        }
        Ok(match self {
            UncertaintySet::Polytope(p) => contains_point(p, u, tol)?,
            UncertaintySet::Box { lo, hi } => u
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(x, (l, h))| *x >= l - tol && *x <= h + tol),
            UncertaintySet::Ball { center, radius } => {
                linalg::dist2(u, center) <= radius + tol
            }
            UncertaintySet::Ellipsoid { center, shape } => {
                let diff = linalg::sub(u, center);
                let n = center.len();
                let m = DMatrix::from_fn(n, n, |i, j| shape[i][j]);
                let rhs = nalgebra::DVector::from_vec(diff.clone());
                let chol = m
                    .cholesky()
                    .ok_or_else(|| Error::validation("ellipsoid shape is not SPD"))?;
                let y = chol.solve(&rhs);
                let quad: f64 = diff.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
                quad.max(0.0).sqrt() <= 1.0 + tol
            }
            UncertaintySet::Finite { points } => points
                .iter()
                .any(|p| linalg::dist_inf(p, u) <= tol),
        })
    }

    /// Structural identity within `tol`: same kind and matching data. Vertex
    /// and point lists are compared as sets.
    pub fn structurally_eq(&self, other: &UncertaintySet, tol: f64) -> bool {
        match (self, other) {
            (UncertaintySet::Polytope(a), UncertaintySet::Polytope(b)) => {
                point_set_eq(a.vertices(), b.vertices(), tol)
                    && point_set_eq(a.rays(), b.rays(), tol)
            }
            (
                UncertaintySet::Box { lo: l1, hi: h1 },
                UncertaintySet::Box { lo: l2, hi: h2 },
            ) => {
                l1.len() == l2.len()
                    && linalg::dist_inf(l1, l2) <= tol
                    && linalg::dist_inf(h1, h2) <= tol
            }
            (
                UncertaintySet::Ball {
                    center: c1,
                    radius: r1,
                },
                UncertaintySet::Ball {
                    center: c2,
                    radius: r2,
                },
            ) => c1.len() == c2.len() && linalg::dist_inf(c1, c2) <= tol && (r1 - r2).abs() <= tol,
            (
                UncertaintySet::Ellipsoid {
                    center: c1,
                    shape: s1,
                },
                UncertaintySet::Ellipsoid {
                    center: c2,
                    shape: s2,
                },
            ) => {
                c1.len() == c2.len()
                    && linalg::dist_inf(c1, c2) <= tol
                    && s1.len() == s2.len()
                    && s1
                        .iter()
                        .zip(s2)
                        .all(|(r1, r2)| linalg::dist_inf(r1, r2) <= tol)
            }
            (UncertaintySet::Finite { points: p1 }, UncertaintySet::Finite { points: p2 }) => {
                point_set_eq(p1, p2, tol)
            }
            _ => false,
        }
    }
}

fn point_set_eq(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .all(|p| b.iter().any(|q| linalg::dist_inf(p, q) <= tol))
        && b.iter()
            .all(|q| a.iter().any(|p| linalg::dist_inf(p, q) <= tol))
}

impl Support for UncertaintySet {
    fn support(&self, d: &[f64]) -> f64 {
        match self {
            UncertaintySet::Polytope(p) => p.support(d),
            UncertaintySet::Box { lo, hi } => d
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(dc, (l, h))| (dc * l).max(dc * h))
                .sum(),
            UncertaintySet::Ball { center, radius } => {
                linalg::dot(center, d) + radius * linalg::norm2(d)
            }
            UncertaintySet::Ellipsoid { center, shape } => {
                let ad = linalg::symv(shape, d);
                linalg::dot(center, d) + linalg::dot(d, &ad).max(0.0).sqrt()
            }
            UncertaintySet::Finite { points } => points
                .iter()
                .map(|p| linalg::dot(p, d))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn support_point(&self, d: &[f64], target: f64) -> Vec<f64> {
        match self {
            UncertaintySet::Polytope(p) => p.support_point(d, target),
            UncertaintySet::Box { lo, hi } => d
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(dc, (l, h))| if dc * h >= dc * l { *h } else { *l })
                .collect(),
            UncertaintySet::Ball { center, radius } => {
                let norm = linalg::norm2(d);
                if norm <= 1e-300 {
                    center.clone()
                } else {
                    linalg::axpy(center, radius / norm, d)
                }
            }
            UncertaintySet::Ellipsoid { center, shape } => {
                let ad = linalg::symv(shape, d);
                let denom = linalg::dot(d, &ad).max(0.0).sqrt();
                if denom <= 1e-300 {
                    center.clone()
                } else {
                    linalg::axpy(center, 1.0 / denom, &ad)
                }
            }
            UncertaintySet::Finite { points } => points
                .iter()
                .max_by(|a, b| linalg::dot(a, d).total_cmp(&linalg::dot(b, d)))
                .expect("validated nonempty")
                .clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::support_value;

    #[test]
    fn box_support_matches_corner() {
        let s = UncertaintySet::Box {
            lo: vec![-0.5, 0.0],
            hi: vec![0.5, 1.0],
        };
        assert_eq!(support_value(&s, &[1.0, 0.0]), 0.5);
        assert_eq!(support_value(&s, &[0.0, 1.0]), 1.0);
        assert_eq!(support_value(&s, &[0.0, -1.0]), 0.0);
    }

    #[test]
    fn ball_support_is_radius_on_unit_directions() {
        let s = UncertaintySet::Ball {
            center: vec![0.0, 0.0],
            radius: 0.3,
        };
        assert!((support_value(&s, &[0.6, 0.8]) - 0.3).abs() < 1e-12);
        let p = s.support_point(&[0.6, 0.8], 0.0);
        assert!((linalg::norm2(&p) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn ellipsoid_support_and_membership() {
        let s = UncertaintySet::Ellipsoid {
            center: vec![0.0, 0.0],
            shape: vec![vec![4.0, 0.0], vec![0.0, 1.0]],
        };
        s.validate().unwrap();
        assert!((support_value(&s, &[1.0, 0.0]) - 2.0).abs() < 1e-12);
        assert!(s.contains(&[2.0, 0.0], 1e-9).unwrap());
        assert!(!s.contains(&[2.1, 0.0], 1e-9).unwrap());
        let p = s.support_point(&[1.0, 0.0], 0.0);
        assert!(s.contains(&p, 1e-9).unwrap());
    }

    #[test]
    fn non_spd_shape_is_rejected() {
        let s = UncertaintySet::Ellipsoid {
            center: vec![0.0, 0.0],
            shape: vec![vec![1.0, 3.0], vec![3.0, 1.0]],
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn structural_equality_tracks_kind_and_data() {
        let a = UncertaintySet::Box {
            lo: vec![-1.0, -1.0],
            hi: vec![0.0, 0.0],
        };
        let b = UncertaintySet::Box {
            lo: vec![-1.0, -1.0],
            hi: vec![0.0, 0.0],
        };
        let c = UncertaintySet::Box {
            lo: vec![-0.5, -1.0],
            hi: vec![0.0, 0.0],
        };
        assert!(a.structurally_eq(&b, 1e-12));
        assert!(!a.structurally_eq(&c, 1e-12));
    }
}
