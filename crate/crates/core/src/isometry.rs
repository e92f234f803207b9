//! Deck transformations: euclidean rigid motions and (anti-)holomorphic
//! Möbius maps of the upper half-plane.

use crate::geom::{Mat2, Vec2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsometryError {
    #[error("point {0:?} lies outside the cover domain")]
    OutOfDomain(Vec2),
    #[error("isometries live in different geometries")]
    GeometryMismatch,
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("Möbius matrix must have determinant 1, got {0}")]
    BadDeterminant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Euclidean,
    HyperbolicUhp,
}

/// Entry tolerance for matrix invariants and equality.
pub const MATRIX_TOL: f64 = 1e-9;

/// An isometry of the cover.
///
/// Euclidean: `x ↦ O x + t` with `O` orthogonal.
///
/// Hyperbolic: `z ↦ (a w + b)/(c w + d)` with `det M = 1`, where `w = z`
/// for holomorphic maps and `w = −z̄` for anti-holomorphic ones. Writing the
/// anti-holomorphic case through `−z̄` keeps `det M = 1` while mapping the
/// upper half-plane to itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "snake_case")]
pub enum Isometry {
    Euclidean { o: Mat2, t: Vec2 },
    HyperbolicUhp { m: Mat2, conj: bool },
}

fn cmul(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x)
}

fn cdiv(a: Vec2, b: Vec2) -> Vec2 {
    let d = b.x * b.x + b.y * b.y;
    Vec2::new((a.x * b.x + a.y * b.y) / d, (a.y * b.x - a.x * b.y) / d)
}

/// `M'` with `−conj(M·z) = M'·(−z̄)`.
fn mirror(m: &Mat2) -> Mat2 {
    Mat2::new(m.m[0][0], -m.m[0][1], -m.m[1][0], m.m[1][1])
}

impl Isometry {
    pub fn identity(geometry: Geometry) -> Isometry {
        match geometry {
            Geometry::Euclidean => Isometry::Euclidean {
                o: Mat2::IDENTITY,
                t: Vec2::ZERO,
            },
            Geometry::HyperbolicUhp => Isometry::HyperbolicUhp {
                m: Mat2::IDENTITY,
                conj: false,
            },
        }
    }

    pub fn translation(t: Vec2) -> Isometry {
        Isometry::Euclidean { o: Mat2::IDENTITY, t }
    }

    pub fn euclidean(o: Mat2, t: Vec2) -> Result<Isometry, IsometryError> {
        if o.transpose().mul(&o).max_dist(&Mat2::IDENTITY) > 1e-12 {
            return Err(IsometryError::NotOrthogonal);
        }
        Ok(Isometry::Euclidean { o, t })
    }

    pub fn mobius(m: Mat2, conj: bool) -> Result<Isometry, IsometryError> {
        let d = m.det();
        if (d - 1.0).abs() > 1e-12 {
            return Err(IsometryError::BadDeterminant(d));
        }
        Ok(Isometry::HyperbolicUhp { m, conj })
    }

    /// Normalizes a Möbius matrix with positive determinant to `det = 1`.
    pub fn mobius_normalized(m: Mat2, conj: bool) -> Result<Isometry, IsometryError> {
        let d = m.det();
        if !(d > 0.0) {
            return Err(IsometryError::BadDeterminant(d));
        }
        Isometry::mobius(m.scale(1.0 / d.sqrt()), conj)
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            Isometry::Euclidean { .. } => Geometry::Euclidean,
            Isometry::HyperbolicUhp { .. } => Geometry::HyperbolicUhp,
        }
    }

    /// Orientation sign ε: `+1` if orientation preserving.
    pub fn sign(&self) -> i32 {
        match self {
            Isometry::Euclidean { o, .. } => {
                if o.det() > 0.0 {
                    1
                } else {
                    -1
                }
            }
            Isometry::HyperbolicUhp { conj, .. } => {
                if *conj {
                    -1
                } else {
                    1
                }
            }
        }
    }

    fn check_domain(&self, p: Vec2) -> Result<(), IsometryError> {
        match self {
            Isometry::HyperbolicUhp { .. } if !(p.y > 0.0) => Err(IsometryError::OutOfDomain(p)),
            _ if !p.is_finite() => Err(IsometryError::OutOfDomain(p)),
            _ => Ok(()),
        }
    }

    /// Image of a point; hyperbolic maps require `Im p > 0`.
    pub fn apply(&self, p: Vec2) -> Result<Vec2, IsometryError> {
        self.check_domain(p)?;
        Ok(self.apply_unchecked(p))
    }

    pub fn apply_unchecked(&self, p: Vec2) -> Vec2 {
        match self {
            Isometry::Euclidean { o, t } => o.apply(p) + *t,
            Isometry::HyperbolicUhp { m, conj } => {
                let w = if *conj { Vec2::new(-p.x, p.y) } else { p };
                let [[a, b], [c, d]] = m.m;
                cdiv(Vec2::new(a * w.x + b, a * w.y), Vec2::new(c * w.x + d, c * w.y))
            }
        }
    }

    /// Jacobian matrix at `p`: a positive multiple of an orthogonal matrix
    /// whose determinant has the sign of the map.
    pub fn differential(&self, p: Vec2) -> Result<Mat2, IsometryError> {
        self.check_domain(p)?;
        Ok(self.differential_unchecked(p))
    }

    pub fn differential_unchecked(&self, p: Vec2) -> Mat2 {
        match self {
            Isometry::Euclidean { o, .. } => *o,
            Isometry::HyperbolicUhp { m, conj } => {
                let w = if *conj { Vec2::new(-p.x, p.y) } else { p };
                let [[_, _], [c, d]] = m.m;
                let den = Vec2::new(c * w.x + d, c * w.y);
                let f = cdiv(Vec2::new(1.0, 0.0), cmul(den, den));
                let rot = Mat2::new(f.x, -f.y, f.y, f.x);
                if *conj {
                    rot.mul(&Mat2::new(-1.0, 0.0, 0.0, 1.0))
                } else {
                    rot
                }
            }
        }
    }

    /// Pushforward of a tangent vector at `p`.
    pub fn push(&self, p: Vec2, v: Vec2) -> Vec2 {
        self.differential_unchecked(p).apply(v)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, IsometryError> {
        match (self, other) {
            (Isometry::Euclidean { o: o1, t: t1 }, Isometry::Euclidean { o: o2, t: t2 }) => Ok(Isometry::Euclidean {
                o: o1.mul(o2),
                t: o1.apply(*t2) + *t1,
            }),
            (Isometry::HyperbolicUhp { m: m1, conj: c1 }, Isometry::HyperbolicUhp { m: m2, conj: c2 }) => {
                let inner = if *c1 { mirror(m2) } else { *m2 };
                Ok(Isometry::HyperbolicUhp {
                    m: m1.mul(&inner),
                    conj: c1 ^ c2,
                })
            }
            _ => Err(IsometryError::GeometryMismatch),
        }
    }

    pub fn inverse(&self) -> Isometry {
        match self {
            Isometry::Euclidean { o, t } => {
                let oi = o.transpose();
                Isometry::Euclidean { o: oi, t: -oi.apply(*t) }
            }
            Isometry::HyperbolicUhp { m, conj } => {
                let inv = m.inverse();
                Isometry::HyperbolicUhp {
                    m: if *conj { mirror(&inv) } else { inv },
                    conj: *conj,
                }
            }
        }
    }

    pub fn pow(&self, k: i64) -> Isometry {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = Isometry::identity(self.geometry());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base).expect("same geometry");
        }
        acc
    }

    /// Tolerance-aware equality; Möbius matrices are compared up to sign.
    pub fn approx_eq(&self, other: &Isometry) -> Result<bool, IsometryError> {
        match (self, other) {
            (Isometry::Euclidean { o: o1, t: t1 }, Isometry::Euclidean { o: o2, t: t2 }) => {
                Ok(o1.max_dist(o2) <= MATRIX_TOL && (t1.x - t2.x).abs().max((t1.y - t2.y).abs()) <= MATRIX_TOL)
            }
            (Isometry::HyperbolicUhp { m: m1, conj: c1 }, Isometry::HyperbolicUhp { m: m2, conj: c2 }) => {
                let d = m1.max_dist(m2).min(m1.max_dist(&m2.scale(-1.0)));
                Ok(c1 == c2 && d <= MATRIX_TOL)
            }
            _ => Err(IsometryError::GeometryMismatch),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&Isometry::identity(self.geometry())).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec2, b: Vec2) -> bool {
        a.dist(b) < 1e-12
    }

    #[test]
    fn parabolic_moves_i_to_one_plus_i() {
        let t = Isometry::mobius(Mat2::new(1.0, 1.0, 0.0, 1.0), false).unwrap();
        assert!(close(t.apply(Vec2::new(0.0, 1.0)).unwrap(), Vec2::new(1.0, 1.0)));
        let d = t.differential(Vec2::new(0.0, 1.0)).unwrap();
        assert!(d.max_dist(&Mat2::IDENTITY) < 1e-15);
        assert!(t.apply(Vec2::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn antiholomorphic_map_reverses_orientation_and_keeps_half_plane() {
        let g = Isometry::mobius(Mat2::new(2.0, 0.0, 0.0, 0.5), true).unwrap();
        assert_eq!(g.sign(), -1);
        for p in [Vec2::new(0.3, 0.2), Vec2::new(-4.0, 1.5), Vec2::new(2.0, 7.0)] {
            assert!(g.apply(p).unwrap().y > 0.0);
            assert!(g.differential(p).unwrap().det() < 0.0);
        }
    }

    #[test]
    fn differential_matches_finite_differences() {
        let maps = [
            Isometry::mobius_normalized(Mat2::new(4.0, 7.5, 2.0, 4.0), false).unwrap(),
            Isometry::mobius_normalized(Mat2::new(1.0, 0.3, 0.5, 1.4), true).unwrap(),
        ];
        let p = Vec2::new(0.4, 0.9);
        let h = 1e-6;
        for t in maps {
            let d = t.differential(p).unwrap();
            for (k, e) in [Vec2::X, Vec2::new(0.0, 1.0)].into_iter().enumerate() {
                let fd = (t.apply_unchecked(p + e * h) - t.apply_unchecked(p - e * h)) * (0.5 / h);
                let col = Vec2::new(d.m[0][k], d.m[1][k]);
                assert!(fd.dist(col) < 1e-6, "{fd:?} vs {col:?}");
            }
            // conformal: columns orthogonal and same length
            let c0 = Vec2::new(d.m[0][0], d.m[1][0]);
            let c1 = Vec2::new(d.m[0][1], d.m[1][1]);
            assert!(c0.dot(c1).abs() < 1e-12 && (c0.norm() - c1.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_and_inverse() {
        let a = Isometry::mobius_normalized(Mat2::new(4.0, 7.5, 2.0, 4.0), false).unwrap();
        let g = Isometry::mobius(Mat2::new(2.0, 0.0, 0.0, 0.5), true).unwrap();
        let h = Isometry::mobius_normalized(Mat2::new(1.0, 0.3, 0.5, 1.4), true).unwrap();
        let p = Vec2::new(0.2, 0.7);
        for (x, y) in [(a, g), (g, a), (g, h), (h, a)] {
            let xy = x.compose(&y).unwrap();
            assert!(close(xy.apply_unchecked(p), x.apply_unchecked(y.apply_unchecked(p))));
            assert_eq!(xy.sign(), x.sign() * y.sign());
        }
        for x in [a, g, h] {
            assert!(x.compose(&x.inverse()).unwrap().is_identity());
            assert!(x.inverse().compose(&x).unwrap().is_identity());
        }
    }

    #[test]
    fn negated_matrix_is_same_map() {
        let a = Isometry::mobius(Mat2::new(1.0, 1.0, 0.0, 1.0), false).unwrap();
        let b = Isometry::mobius(Mat2::new(-1.0, -1.0, 0.0, -1.0), false).unwrap();
        assert!(a.approx_eq(&b).unwrap());
        let e = Isometry::translation(Vec2::X);
        assert_eq!(a.approx_eq(&e), Err(IsometryError::GeometryMismatch));
    }
}
