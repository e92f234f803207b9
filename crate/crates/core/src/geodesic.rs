//! Shortest geodesics in the cover, their angle data, external angles, and
//! closed curves with trivial winding (closed geodesics, horocycles,
//! figure eights in discs).

use crate::curve::{BaseBranch, CurveError, RegularCurve, Sample};
use crate::geom::{signed_angle, wrap_positive, wrap_signed, Vec2};
use crate::group::GroupWord;
use crate::isometry::{Geometry, Isometry};
use crate::lift::{LiftError, LiftedCurve};
use crate::surface::{SurfaceError, SurfaceModel};
use crate::Tolerances;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use thiserror::Error;

/// Distance from `±π` under which an external angle is rejected.
pub const STRAIGHT_ANGLE_GUARD: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("end points coincide")]
    CoincidentPoints,
    #[error("point {0:?} lies outside the cover domain")]
    OutOfDomain(Vec2),
    #[error("external angle {chi} is too close to ±π")]
    StraightAngle { chi: f64 },
    #[error("deck does not carry the start of the chord to its end (gap {gap})")]
    EndpointMismatch { gap: f64 },
    #[error("deck has no invariant geodesic: {0}")]
    NoAxis(&'static str),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeodesicSegment {
    Straight { p: Vec2, q: Vec2 },
    /// Vertical ray piece in the upper half-plane.
    Vertical { x0: f64, y_from: f64, y_to: f64 },
    /// Arc of the circle `|z − c| = r` from polar angle `phi1` to `phi2`.
    Arc { center: f64, radius: f64, phi1: f64, phi2: f64 },
}

pub fn shortest_geodesic(geometry: Geometry, p: Vec2, q: Vec2) -> Result<GeodesicSegment, GeodesicError> {
    for z in [p, q] {
        if !z.is_finite() || (geometry == Geometry::HyperbolicUhp && !(z.y > 0.0)) {
            return Err(GeodesicError::OutOfDomain(z));
        }
    }
    let scale = 1.0 + p.norm().max(q.norm());
    if p.dist(q) <= 1e-12 * scale {
        return Err(GeodesicError::CoincidentPoints);
    }
    Ok(match geometry {
        Geometry::Euclidean => GeodesicSegment::Straight { p, q },
        Geometry::HyperbolicUhp => {
            if (q.x - p.x).abs() <= 1e-12 * scale {
                GeodesicSegment::Vertical {
                    x0: 0.5 * (p.x + q.x),
                    y_from: p.y,
                    y_to: q.y,
                }
            } else {
                let c = (q.dot(q) - p.dot(p)) / (2.0 * (q.x - p.x));
                let cv = Vec2::new(c, 0.0);
                GeodesicSegment::Arc {
                    center: c,
                    radius: p.dist(cv),
                    phi1: (p - cv).angle(),
                    phi2: (q - cv).angle(),
                }
            }
        }
    })
}

impl GeodesicSegment {
    pub fn geometry(&self) -> Geometry {
        match self {
            GeodesicSegment::Straight { .. } => Geometry::Euclidean,
            _ => Geometry::HyperbolicUhp,
        }
    }

    pub fn start(&self) -> Vec2 {
        self.point(0.0)
    }

    pub fn end(&self) -> Vec2 {
        self.point(1.0)
    }

    fn point(&self, u: f64) -> Vec2 {
        self.sample(u).pos
    }

    fn sample(&self, u: f64) -> Sample {
        match *self {
            GeodesicSegment::Straight { p, q } => Sample::new(u, p.lerp(q, u), q - p),
            GeodesicSegment::Vertical { x0, y_from, y_to } => {
                Sample::new(u, Vec2::new(x0, y_from + (y_to - y_from) * u), Vec2::new(0.0, y_to - y_from))
            }
            GeodesicSegment::Arc { center, radius, phi1, phi2 } => {
                let phi = phi1 + (phi2 - phi1) * u;
                let (s, c) = phi.sin_cos();
                Sample::new(u, Vec2::new(center + radius * c, radius * s), Vec2::new(-s, c) * (radius * (phi2 - phi1)))
            }
        }
    }

    /// Samples the segment at `n ≥ 2` equally spaced parameters in `[0, 1]`,
    /// with exact velocities.
    pub fn curve(&self, n: usize) -> RegularCurve {
        let mut n = n.max(2);
        if let GeodesicSegment::Arc { phi1, phi2, .. } = self {
            n = n.max(((phi2 - phi1).abs() / (PI / 8.0)).ceil() as usize + 1);
        }
        RegularCurve::new((0..n).map(|k| self.sample(k as f64 / (n - 1) as f64)).collect(), false)
    }

    /// i-index by closed form: the tangent turns by the swept polar angle.
    pub fn i_index(&self) -> f64 {
        match *self {
            GeodesicSegment::Arc { phi1, phi2, .. } => (phi2 - phi1) / TAU,
            _ => 0.0,
        }
    }

    /// Initial direction angle on the requested branch.
    pub fn initial_angle(&self, branch: BaseBranch) -> f64 {
        let raw0 = wrap_positive(self.sample(0.0).vel.angle());
        match branch {
            BaseBranch::Canonical => raw0,
            BaseBranch::Shift(k) => raw0 + TAU * k as f64,
            BaseBranch::Near(x) => raw0 + TAU * ((x - raw0) / TAU).round(),
        }
    }

    pub fn j_index(&self, branch: BaseBranch) -> f64 {
        let a = self.initial_angle(branch);
        (2.0 * a + TAU * self.i_index()) / TAU
    }

    /// Length in the metric of the cover (euclidean or hyperbolic).
    pub fn length(&self) -> f64 {
        match *self {
            GeodesicSegment::Straight { p, q } => p.dist(q),
            GeodesicSegment::Vertical { y_from, y_to, .. } => (y_to / y_from).ln().abs(),
            GeodesicSegment::Arc { .. } => {
                let (p, q) = (self.start(), self.end());
                (1.0 + p.dist(q).powi(2) / (2.0 * p.y * q.y)).acosh()
            }
        }
    }
}

/// External angle of the chord `δ̃` closed up by `T`: the angle from the
/// final direction of `δ̃` to the pushed initial direction, in `(−π, π)`.
pub fn external_angle(delta: &RegularCurve, t: &Isometry, tol: &Tolerances) -> Result<f64, GeodesicError> {
    let a = delta.start();
    let gap = t.apply_unchecked(a).dist(delta.end());
    if gap > tol.pos * (1.0 + a.norm().max(delta.end().norm())) {
        return Err(GeodesicError::EndpointMismatch { gap });
    }
    let pushed = t.push(a, delta.first().vel);
    let chi = wrap_signed(signed_angle(delta.last().vel, pushed));
    if PI - chi.abs() < STRAIGHT_ANGLE_GUARD {
        return Err(GeodesicError::StraightAngle { chi });
    }
    Ok(chi)
}

/// Point on the invariant geodesic of `t` closest to `hint` (flat) or
/// matched to `hint` along the axis (hyperbolic).
pub fn axis_point(t: &Isometry, hint: Vec2) -> Result<Vec2, GeodesicError> {
    match *t {
        Isometry::Euclidean { o, t: v } => {
            if o.max_dist(&crate::geom::Mat2::IDENTITY) < 1e-12 {
                if v.norm() < 1e-12 {
                    return Err(GeodesicError::NoAxis("identity"));
                }
                return Ok(hint);
            }
            if o.det() > 0.0 {
                return Err(GeodesicError::NoAxis("rotation"));
            }
            // reflection part fixes the unit vector u, flips nrm
            let u = Vec2::new(1.0 + o.m[0][0], o.m[1][0]);
            let u = if u.norm() > 1e-6 { u.normalized() } else { Vec2::new(o.m[0][1], 1.0 + o.m[1][1]).normalized() };
            let nrm = u.perp();
            if v.dot(u).abs() < 1e-12 {
                return Err(GeodesicError::NoAxis("reflection"));
            }
            let off = 0.5 * v.dot(nrm);
            Ok(hint + nrm * (off - hint.dot(nrm)))
        }
        Isometry::HyperbolicUhp { conj, .. } => {
            let h = if conj { t.compose(t).expect("same geometry") } else { *t };
            let Isometry::HyperbolicUhp { m, .. } = h else { unreachable!() };
            let [[a, b], [c, d]] = m.m;
            let tr = a + d;
            if tr.abs() <= 2.0 + 1e-12 {
                return Err(GeodesicError::NoAxis("not hyperbolic"));
            }
            if c.abs() < 1e-14 {
                return Ok(Vec2::new(b / (d - a), hint.y.max(f64::MIN_POSITIVE)));
            }
            let disc = (tr * tr - 4.0).sqrt();
            let x1 = ((a - d) + disc) / (2.0 * c);
            let x2 = ((a - d) - disc) / (2.0 * c);
            let center = 0.5 * (x1 + x2);
            let radius = 0.5 * (x1 - x2).abs();
            let mut dir = hint - Vec2::new(center, 0.0);
            if !(dir.y > 0.0) || dir.norm() < 1e-12 {
                dir = Vec2::new(0.0, 1.0);
            }
            Ok(Vec2::new(center, 0.0) + dir.normalized() * radius)
        }
    }
}

/// The closed geodesic in the class of `word`, based on its axis near `hint`.
pub fn closed_geodesic(surface: &SurfaceModel, word: &GroupWord, hint: Vec2, n: usize, tol: &Tolerances) -> Result<LiftedCurve, GeodesicError> {
    let t = surface.word_isometry(word)?;
    let p = axis_point(&t, hint)?;
    surface.check_domain(p)?;
    let seg = shortest_geodesic(surface.geometry(), p, t.apply_unchecked(p))?;
    Ok(LiftedCurve::new(surface.clone(), seg.curve(n), t, Some(word.clone()), tol)?)
}

/// Horizontal horocycle `Im z = height` from `x0 + i·height` to its image
/// under the parabolic deck `z ↦ z + τ` named by `word`.
pub fn horocycle_loop(surface: &SurfaceModel, word: &GroupWord, x0: f64, height: f64, n: usize, tol: &Tolerances) -> Result<LiftedCurve, GeodesicError> {
    let t = surface.word_isometry(word)?;
    let Isometry::HyperbolicUhp { m, conj: false } = t else {
        return Err(GeodesicError::NoAxis("not a holomorphic deck"));
    };
    let [[a, b], [c, d]] = m.m;
    let s = a.signum();
    if c.abs() > 1e-12 || (a * s - 1.0).abs() > 1e-12 || (d * s - 1.0).abs() > 1e-12 || b.abs() < 1e-12 {
        return Err(GeodesicError::NoAxis("not a parabolic fixing ∞"));
    }
    let p = Vec2::new(x0, height);
    surface.check_domain(p)?;
    let q = Vec2::new(x0 + b * s, height);
    let seg = RegularCurve::segment(p, q, n);
    Ok(LiftedCurve::new(surface.clone(), seg, t, Some(word.clone()), tol)?)
}

/// A figure eight of half-width `r` around `center`, contractible in the surface.
pub fn figure_eight_in_disc(surface: &SurfaceModel, center: Vec2, r: f64, n: usize, tol: &Tolerances) -> Result<LiftedCurve, GeodesicError> {
    for k in 0..16 {
        surface.check_domain(center + Vec2::from_angle(FRAC_PI_2 * k as f64 / 4.0) * r)?;
    }
    let c = RegularCurve::lemniscate(center, r, n);
    Ok(LiftedCurve::new(surface.clone(), c, Isometry::identity(surface.geometry()), Some(GroupWord::identity()), tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn euclidean_segment() {
        let s = shortest_geodesic(Geometry::Euclidean, Vec2::ZERO, Vec2::new(3.0, 4.0)).unwrap();
        assert_eq!(s.length(), 5.0);
        assert_eq!(s.i_index(), 0.0);
        assert!(matches!(
            shortest_geodesic(Geometry::Euclidean, Vec2::X, Vec2::X),
            Err(GeodesicError::CoincidentPoints)
        ));
    }

    #[test]
    fn vertical_ray_length() {
        let s = shortest_geodesic(Geometry::HyperbolicUhp, Vec2::new(0.0, 1.0), Vec2::new(0.0, 2.0)).unwrap();
        assert!(matches!(s, GeodesicSegment::Vertical { .. }));
        assert!((s.length() - 2f64.ln()).abs() < 1e-15);
        for smp in s.curve(10).samples() {
            assert!(smp.dir().dist(Vec2::new(0.0, 1.0)) < 1e-15);
        }
    }

    #[test]
    fn arc_through_symmetric_points() {
        let s = shortest_geodesic(Geometry::HyperbolicUhp, Vec2::new(-1.0, 1.0), Vec2::new(1.0, 1.0)).unwrap();
        let GeodesicSegment::Arc { center, radius, .. } = s else {
            panic!("expected arc")
        };
        assert!(center.abs() < 1e-15);
        assert!((radius - 2f64.sqrt()).abs() < 1e-15);
        // clockwise quarter turn
        assert!((s.i_index() + 0.25).abs() < 1e-15);
        assert!((s.curve(4096).i_index().unwrap() - s.i_index()).abs() < 1e-9);
    }

    #[test]
    fn semicircle_left_to_right() {
        let s = shortest_geodesic(Geometry::HyperbolicUhp, Vec2::new(-1.0 + 1e-9, 1e-4), Vec2::new(1.0 - 1e-9, 1e-4)).unwrap();
        assert!((s.i_index() + 0.5).abs() < 1e-4);
    }

    #[test]
    fn torus_diagonal_has_zero_external_angle() {
        let torus = SurfaceModel::torus();
        let t = torus.word_isometry(&GroupWord::parse("a b").unwrap()).unwrap();
        let d = shortest_geodesic(Geometry::Euclidean, Vec2::new(0.2, 0.3), Vec2::new(1.2, 1.3)).unwrap();
        assert_eq!(external_angle(&d.curve(2), &t, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn straight_angle_is_rejected() {
        // reflection across the vertical line through the chord midpoint
        // reverses the direction of a horizontal chord
        let t = Isometry::euclidean(crate::geom::Mat2::new(-1.0, 0.0, 0.0, 1.0), Vec2::new(1.0, 0.0)).unwrap();
        let d = RegularCurve::segment(Vec2::ZERO, Vec2::X, 4);
        assert!(matches!(external_angle(&d, &t, &tol()), Err(GeodesicError::StraightAngle { .. })));
    }

    #[test]
    fn closed_geodesics_close_smoothly() {
        let cases = [
            (SurfaceModel::torus(), "a b^2", Vec2::new(0.1, 0.2)),
            (SurfaceModel::moebius(), "g", Vec2::new(0.1, 0.5)),
            (SurfaceModel::klein(), "a b", Vec2::new(0.3, 0.2)),
            (SurfaceModel::cusped_pants(), "a b", Vec2::new(0.0, 1.0)),
            (SurfaceModel::schottky_nonorientable(), "y", Vec2::new(0.0, 1.0)),
            (SurfaceModel::schottky_nonorientable(), "x y", Vec2::new(0.0, 1.0)),
        ];
        for (s, w, hint) in cases {
            let l = closed_geodesic(&s, &GroupWord::parse(w).unwrap(), hint, 256, &tol()).unwrap();
            let chi = external_angle(l.cover_curve(), l.terminal(), &tol()).unwrap();
            assert!(chi.abs() < 1e-9, "{w}: {chi}");
        }
    }

    #[test]
    fn horocycle_is_horizontal() {
        let s = SurfaceModel::cusped_pants();
        let l = horocycle_loop(&s, &GroupWord::parse("a").unwrap(), 0.0, 2.0, 32, &tol()).unwrap();
        assert!(l.cover_curve().positions().all(|p| (p.y - 2.0).abs() < 1e-15));
        assert!(l.cover_curve().end().dist(Vec2::new(1.0, 2.0)) < 1e-15);
        assert!(horocycle_loop(&s, &GroupWord::parse("b").unwrap(), 0.0, 2.0, 32, &tol()).is_err());
    }
}
