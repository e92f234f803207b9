//! Lifts of closed surface curves to the cover, with their terminal decks.

use crate::curve::{CurveError, RegularCurve, Sample, Twist};
use crate::geom::{signed_angle, Vec2};
use crate::group::GroupWord;
use crate::isometry::{Geometry, Isometry, IsometryError};
use crate::surface::{SurfaceError, SurfaceModel};
use crate::Tolerances;
use std::f64::consts::TAU;
use thiserror::Error;

/// Largest step between consecutive lifted samples accepted by `lift_path`,
/// in cover units (flat generators translate by 1).
pub const MAX_LIFT_STEP: f64 = 0.25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("path lifting needs a flat model; give hyperbolic curves as cover curves with a word")]
    UnsupportedGeometry,
    #[error("samples {index} and {} are {step} apart in the cover", index + 1)]
    SamplingTooCoarse { index: usize, step: f64 },
    #[error("terminal deck misses the end point by {gap}")]
    EndpointMismatch { gap: f64 },
    #[error("terminal deck carries the initial direction {angle} rad away from the final one")]
    DirectionMismatch { angle: f64 },
    #[error("sample {index} lies outside the cover domain")]
    OutOfDomain { index: usize },
    #[error("initial lift does not lie over the base curve's initial point")]
    InitialLiftMismatch,
    #[error("end points of the base curve are not identified on the surface")]
    NotClosedOnSurface,
    #[error("rotation discs at the two ends overlap")]
    SupportTooLarge,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
}

/// A lift `γ̃` of a closed curve together with the deck `T` carrying
/// `γ̃(a)` to `γ̃(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedCurve {
    surface: SurfaceModel,
    cover_curve: RegularCurve,
    terminal: Isometry,
    word: Option<GroupWord>,
}

fn position_scale(c: &RegularCurve) -> f64 {
    1.0 + c.positions().map(Vec2::norm).fold(0.0, f64::max)
}

impl LiftedCurve {
    /// Validates and packages a lift. The cover curve must be regular, stay
    /// in the cover domain, and close up under `terminal` in position and
    /// direction.
    pub fn new(
        surface: SurfaceModel,
        cover_curve: RegularCurve,
        terminal: Isometry,
        word: Option<GroupWord>,
        tol: &Tolerances,
    ) -> Result<Self, LiftError> {
        if terminal.geometry() != surface.geometry() {
            return Err(SurfaceError::GeometryMismatch.into());
        }
        if let Some(w) = &word {
            let t = surface.word_isometry(w)?;
            if !t.approx_eq(&terminal)? {
                return Err(LiftError::EndpointMismatch { gap: f64::NAN });
            }
        }
        if let Some(index) = cover_curve.positions().position(|p| !surface.in_domain(p)) {
            return Err(LiftError::OutOfDomain { index });
        }
        let closed = terminal.is_identity();
        let cover_curve = cover_curve.with_closed(false);
        cover_curve.check(tol)?;
        let gap = terminal.apply_unchecked(cover_curve.start()).dist(cover_curve.end());
        if gap > tol.pos * position_scale(&cover_curve) {
            return Err(LiftError::EndpointMismatch { gap });
        }
        let pushed = terminal.push(cover_curve.start(), cover_curve.first().vel);
        let angle = signed_angle(pushed, cover_curve.last().vel).abs();
        if angle > tol.ang {
            return Err(LiftError::DirectionMismatch { angle });
        }
        Ok(LiftedCurve {
            surface,
            cover_curve: cover_curve.with_closed(closed),
            terminal,
            word,
        })
    }

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn cover_curve(&self) -> &RegularCurve {
        &self.cover_curve
    }

    pub fn terminal(&self) -> &Isometry {
        &self.terminal
    }

    pub fn word(&self) -> Option<&GroupWord> {
        self.word.as_ref()
    }

    pub fn base_point(&self) -> Vec2 {
        self.cover_curve.start()
    }

    pub fn sign(&self) -> i32 {
        self.terminal.sign()
    }

    pub fn is_null_class(&self) -> bool {
        self.terminal.is_identity()
    }

    /// The lift `S∘γ̃`, whose terminal deck is `S T S⁻¹`.
    pub fn translate(&self, s: &Isometry, s_word: Option<&GroupWord>, tol: &Tolerances) -> Result<LiftedCurve, LiftError> {
        let moved = self.cover_curve.map(|p, v| (s.apply_unchecked(p), s.push(p, v)));
        let terminal = s.compose(&self.terminal)?.compose(&s.inverse())?;
        let word = match (&self.word, s_word) {
            (Some(w), Some(sw)) => Some(w.conjugate_by(sw)),
            _ => None,
        };
        LiftedCurve::new(self.surface.clone(), moved, terminal, word, tol)
    }

    /// Projects the cover curve into the fundamental domain (flat models).
    pub fn project(&self) -> Result<Vec<Vec2>, LiftError> {
        self.cover_curve
            .positions()
            .map(|p| Ok(self.surface.project(p)?.0))
            .collect()
    }

    /// Local rotation at the base point by `angle`: the lift is twisted by
    /// `angle` around `γ̃(a)` and by the conjugate twist `T∘R∘T⁻¹` around
    /// `γ̃(b)`, so it stays a lift of a closed regular curve.
    pub fn local_rotation(&self, angle: f64, radius: f64, tol: &Tolerances) -> Result<LiftedCurve, LiftError> {
        if self.is_null_class() {
            let c = self.cover_curve.local_rotation(angle, radius, tol)?;
            return LiftedCurve::new(self.surface.clone(), c, self.terminal.clone(), self.word.clone(), tol);
        }
        let c0 = self.base_point();
        let t = &self.terminal;
        let c1 = t.apply_unchecked(c0);
        let reach = (0..64)
            .map(|k| t.apply_unchecked(c0 + Vec2::from_angle(TAU * k as f64 / 64.0) * radius).dist(c1))
            .fold(0.0, f64::max);
        if radius + reach >= c0.dist(c1) {
            return Err(LiftError::SupportTooLarge);
        }
        let margin = match self.surface.geometry() {
            Geometry::HyperbolicUhp => c0.y.min(c1.y),
            Geometry::Euclidean if self.surface.kind() == crate::surface::SurfaceKind::Moebius => 1.0 - c0.y.abs(),
            Geometry::Euclidean => f64::INFINITY,
        };
        if radius >= margin {
            return Err(CurveError::InvalidSupport(radius).into());
        }
        let tw = Twist::new(c0, angle, radius);
        let t_inv = t.inverse();
        let refined = self.cover_curve.refine(|_, a, b| {
            let len = a.pos.dist(b.pos);
            let near0 = a.pos.dist(c0).min(b.pos.dist(c0)) < radius + len;
            let near1 = a.pos.dist(c1).min(b.pos.dist(c1)) < reach + len;
            if near0 || near1 {
                (8.0 * angle.abs() * len / radius.min(reach)).ceil().clamp(1.0, 256.0) as usize
            } else {
                1
            }
        });
        let out = refined.map(|p, v| {
            let (p, v) = tw.apply(p, v);
            let q = t_inv.apply_unchecked(p);
            if q.dist(c0) < radius {
                let w = t_inv.push(p, v);
                let (q2, w2) = tw.apply(q, w);
                (t.apply_unchecked(q2), t.push(q2, w2))
            } else {
                (p, v)
            }
        });
        match LiftedCurve::new(self.surface.clone(), out, self.terminal.clone(), self.word.clone(), tol) {
            Err(LiftError::Curve(CurveError::Invalid { index, kind: crate::curve::ViolationKind::CoarseSampling { .. } })) => {
                Err(CurveError::SupportUnderSampled { index }.into())
            }
            r => r,
        }
    }
}

/// Lifts a curve on a flat surface, given by samples in cover coordinates
/// of arbitrary representatives, starting at `initial_lift`.
pub fn lift_path(surface: &SurfaceModel, base: &RegularCurve, initial_lift: Vec2, tol: &Tolerances) -> Result<LiftedCurve, LiftError> {
    if !surface.kind().is_flat() {
        return Err(LiftError::UnsupportedGeometry);
    }
    base.clone().with_closed(false).check(tol)?;
    if let Some(index) = base.positions().position(|p| !surface.in_domain(p)) {
        return Err(LiftError::OutOfDomain { index });
    }
    if surface.identify_deck(base.start(), initial_lift, tol.pos * position_scale(base))?.is_none() {
        return Err(LiftError::InitialLiftMismatch);
    }
    let mut samples: Vec<Sample> = Vec::with_capacity(base.len());
    let mut prev = initial_lift;
    for (k, s) in base.samples().iter().enumerate() {
        let (q, d) = surface.project(s.pos)?;
        let back = surface.flat_deck(d)?.inverse();
        let qv = back.push(s.pos, s.vel);
        let (img, e) = surface.nearest_image(q, prev)?;
        if k > 0 {
            let step = img.dist(prev);
            if step > MAX_LIFT_STEP {
                return Err(LiftError::SamplingTooCoarse { index: k - 1, step });
            }
        }
        let vel = surface.flat_deck(e)?.push(q, qv);
        let pos = if k == 0 { initial_lift } else { img };
        samples.push(Sample::new(s.u, pos, vel));
        prev = pos;
    }
    let cover = RegularCurve::new(samples, false);
    let scale = tol.pos * position_scale(&cover);
    let Some(d) = surface.identify_deck(cover.start(), cover.end(), scale)? else {
        return Err(LiftError::NotClosedOnSurface);
    };
    let terminal = surface.flat_deck(d)?;
    let word = surface.flat_word(d)?;
    LiftedCurve::new(surface.clone(), cover, terminal, Some(word), tol)
}

/// Accepts a curve already given in the cover together with the word of
/// its terminal deck.
pub fn lift_given(surface: &SurfaceModel, cover_curve: RegularCurve, word: &GroupWord, tol: &Tolerances) -> Result<LiftedCurve, LiftError> {
    if let Some(index) = cover_curve.positions().position(|p| !surface.in_domain(p)) {
        return Err(LiftError::OutOfDomain { index });
    }
    let terminal = surface.word_isometry(word)?;
    let gap = terminal.apply_unchecked(cover_curve.start()).dist(cover_curve.end());
    if gap > tol.pos * position_scale(&cover_curve) {
        return Err(LiftError::EndpointMismatch { gap });
    }
    LiftedCurve::new(surface.clone(), cover_curve, terminal, Some(word.clone()), tol)
}
