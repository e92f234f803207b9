//! Based and free winding numbers of closed curves on surfaces.

use crate::curve::{mod2, CurveError, RegularCurve};
use crate::geodesic::{external_angle, shortest_geodesic, GeodesicError};
use crate::geom::Vec2;
use crate::group::{GroupWord, Reversibility};
use crate::isometry::{Geometry, Isometry, IsometryError};
use crate::lift::{LiftError, LiftedCurve};
use crate::surface::{SurfaceError, SurfaceKind, SurfaceModel};
use crate::Tolerances;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum WindingValue {
    Integer(i64),
    Mod2(u8),
    NonNegInteger(u64),
}

impl std::fmt::Display for WindingValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WindingValue::Integer(n) => write!(f, "{n}"),
            WindingValue::Mod2(b) => write!(f, "{b} (mod 2)"),
            WindingValue::NonNegInteger(n) => write!(f, "|{n}|"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindingError {
    #[error("raw winding value {raw} is not within tolerance of an integer")]
    NonIntegral { raw: f64 },
    #[error("external angle {chi} is too close to ±π")]
    StraightAngle { chi: f64 },
    #[error("curve is orientation preserving and non-reversible; a reference curve is required")]
    MissingReference,
    #[error("trace does not carry the reference class to the class of the curve")]
    TraceClassMismatch,
    #[error("reversibility of this class cannot be decided on this surface")]
    UnsupportedReversibility,
    #[error("the finger tube cannot be made thin enough to stay clear of its translate")]
    SelfCollisionOfTube,
    #[error("path does not start at the base point of the lift")]
    PathNotAtBase,
    #[error("curve lift has no generator word")]
    MissingWord,
    #[error(transparent)]
    Geodesic(GeodesicError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
}

impl From<GeodesicError> for WindingError {
    fn from(e: GeodesicError) -> Self {
        match e {
            GeodesicError::StraightAngle { chi } => WindingError::StraightAngle { chi },
            e => WindingError::Geodesic(e),
        }
    }
}

/// Based winding number with every quantity that went into it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasedWinding {
    pub value: WindingValue,
    /// Pre-snap real value.
    pub raw: f64,
    pub sign: i32,
    pub null_class: bool,
    pub i_curve: f64,
    pub j_curve: f64,
    /// Chord data; zero for the null class.
    pub i_chord: f64,
    pub j_chord: f64,
    pub chi: f64,
}

pub fn orientation_sign(lifted: &LiftedCurve) -> i32 {
    lifted.sign()
}

fn snap(raw: f64, tol: &Tolerances) -> Result<i64, WindingError> {
    let r = raw.round();
    if (raw - r).abs() > tol.int || !raw.is_finite() {
        return Err(WindingError::NonIntegral { raw });
    }
    Ok(r as i64)
}

pub fn based_winding(lifted: &LiftedCurve, tol: &Tolerances) -> Result<BasedWinding, WindingError> {
    let curve = lifted.cover_curve();
    let af = curve.angle_function(crate::curve::BaseBranch::Canonical)?;
    let (i_curve, j_curve) = (af.i_index(), af.j_index());
    let sign = lifted.sign();
    if lifted.is_null_class() {
        let n = snap(i_curve, tol)?;
        return Ok(BasedWinding {
            value: WindingValue::Integer(n),
            raw: i_curve,
            sign,
            null_class: true,
            i_curve,
            j_curve,
            i_chord: 0.0,
            j_chord: 0.0,
            chi: 0.0,
        });
    }
    let t = lifted.terminal();
    let p = lifted.base_point();
    let seg = shortest_geodesic(lifted.surface().geometry(), p, t.apply_unchecked(p))?;
    let chord = seg.curve(64);
    let chi = external_angle(&chord, t, tol)?;
    let i_chord = seg.i_index();
    let j_chord = seg.j_index(crate::curve::BaseBranch::Canonical);
    let (raw, value) = if sign == 1 {
        let raw = i_curve - i_chord - chi / TAU;
        (raw, WindingValue::Integer(snap(raw, tol)?))
    } else {
        let raw = j_curve - j_chord - chi / TAU;
        let n = snap(raw, tol)?;
        (raw, WindingValue::Mod2(n.rem_euclid(2) as u8))
    };
    Ok(BasedWinding {
        value,
        raw,
        sign,
        null_class: false,
        i_curve,
        j_curve,
        i_chord,
        j_chord,
        chi,
    })
}

pub fn based_winding_number(lifted: &LiftedCurve, tol: &Tolerances) -> Result<WindingValue, WindingError> {
    Ok(based_winding(lifted, tol)?.value)
}

/// Based winding number computed at the lift `S∘γ̃`.
pub fn winding_at_other_lift(lifted: &LiftedCurve, s: &Isometry, tol: &Tolerances) -> Result<WindingValue, WindingError> {
    based_winding_number(&lifted.translate(s, None, tol)?, tol)
}

/// Result of dragging the base point along a lifted loop `ξ̃`.
#[derive(Debug, Clone)]
pub struct FingerMove {
    /// The deformed lift, starting at `ξ̃(b)`.
    pub tracked: LiftedCurve,
    /// `T_ξ⁻¹` applied to `tracked`: starts at the original base point and
    /// lies in the conjugated class `[ξ][γ][ξ]⁻¹`.
    pub rebased: LiftedCurve,
    /// Tube radius actually used.
    pub radius: f64,
}

/// Bump profile of the push maps: `(1 − s²)²` on `[0, 1]`.
fn bump(s: f64) -> (f64, f64) {
    if s >= 1.0 {
        (0.0, 0.0)
    } else {
        let w = 1.0 - s * s;
        (w * w, -4.0 * s * w)
    }
}

/// Composition of small bump translations moving `path[0]` to `path[last]`
/// exactly, supported in the `rho`-neighbourhood of the path.
struct Push {
    centers: Vec<Vec2>,
    rho: f64,
}

impl Push {
    fn new(path: &[Vec2], rho: f64) -> Push {
        let mut centers = vec![path[0]];
        for w in path.windows(2) {
            let steps = (w[0].dist(w[1]) / (0.25 * rho)).ceil().max(1.0) as usize;
            for k in 1..=steps {
                centers.push(w[0].lerp(w[1], k as f64 / steps as f64));
            }
        }
        Push { centers, rho }
    }

    fn near(&self, p: Vec2) -> bool {
        self.centers.iter().any(|c| c.dist(p) < self.rho)
    }

    fn apply(&self, mut p: Vec2, mut v: Vec2) -> (Vec2, Vec2) {
        for w in self.centers.windows(2) {
            let r = p - w[0];
            let d = r.norm();
            if d >= self.rho {
                continue;
            }
            let step = w[1] - w[0];
            let (b, db) = bump(d / self.rho);
            let grad = if d > 0.0 { r * (db / (self.rho * d)) } else { Vec2::ZERO };
            v = v + step * grad.dot(v);
            p = p + step * b;
        }
        (p, v)
    }
}

/// Finger move of `lifted` along the lifted loop `xi` based at the same
/// point. The tube radius starts at `radius` and is halved until the push
/// and its translate by the terminal deck have disjoint supports.
pub fn finger_move(lifted: &LiftedCurve, xi: &LiftedCurve, radius: f64, tol: &Tolerances) -> Result<FingerMove, WindingError> {
    let p0 = lifted.base_point();
    if xi.base_point().dist(p0) > tol.pos * (1.0 + p0.norm()) {
        return Err(WindingError::PathNotAtBase);
    }
    let s_inv = xi.terminal().inverse();
    let s_word = xi.word().map(GroupWord::inverse);
    let path: Vec<Vec2> = xi.cover_curve().positions().collect();
    if path.iter().all(|p| p.dist(p0) <= tol.pos) {
        let rebased = lifted.translate(&Isometry::identity(lifted.surface().geometry()), None, tol)?;
        return Ok(FingerMove {
            tracked: lifted.clone(),
            rebased,
            radius,
        });
    }
    let t = *lifted.terminal();
    let null = lifted.is_null_class();
    let surface = lifted.surface();
    let mut rho = radius;
    for _ in 0..16 {
        if tube_fits(surface, &path, &t, null, rho) {
            let push = Push::new(&path, rho);
            let t_inv = t.inverse();
            let map = |p: Vec2, v: Vec2| {
                if push.near(p) {
                    return push.apply(p, v);
                }
                if !null {
                    let q = t_inv.apply_unchecked(p);
                    if push.near(q) {
                        let (q2, w2) = push.apply(q, t_inv.push(p, v));
                        return (t.apply_unchecked(q2), t.push(q2, w2));
                    }
                }
                (p, v)
            };
            let moved = lifted.cover_curve().map_adaptive(map, 0.25 * rho, 0.3);
            let mut moved_samples = moved.into_samples();
            // pin both ends to the exact images of the base point
            let end = moved_samples.len() - 1;
            moved_samples[0].pos = *path.last().unwrap();
            moved_samples[end].pos = t.apply_unchecked(moved_samples[0].pos);
            let moved = RegularCurve::new(moved_samples, null);
            let tracked = LiftedCurve::new(surface.clone(), moved, t, lifted.word().cloned(), tol)?;
            let word = match (tracked.word(), &s_word) {
                (Some(_), Some(sw)) => Some(sw.clone()),
                _ => None,
            };
            let rebased = tracked.translate(&s_inv, word.as_ref(), tol)?;
            return Ok(FingerMove { tracked, rebased, radius: rho });
        }
        rho *= 0.5;
    }
    Err(WindingError::SelfCollisionOfTube)
}

fn tube_fits(surface: &SurfaceModel, path: &[Vec2], t: &Isometry, null: bool, rho: f64) -> bool {
    let margin = |p: Vec2| match surface.kind() {
        SurfaceKind::HyperbolicCustom => p.y,
        SurfaceKind::Moebius => 1.0 - p.y.abs(),
        _ => f64::INFINITY,
    };
    // the push enlarges the tube by at most a quarter step
    if path.iter().any(|p| margin(*p) <= 1.5 * rho) {
        return false;
    }
    if null {
        return true;
    }
    let images: Vec<(Vec2, f64)> = path
        .iter()
        .map(|&c| {
            let tc = t.apply_unchecked(c);
            let reach = (0..16)
                .map(|k| t.apply_unchecked(c + Vec2::from_angle(TAU * k as f64 / 16.0) * rho).dist(tc))
                .fold(0.0, f64::max);
            if surface.geometry() == Geometry::HyperbolicUhp && margin(tc) <= 1.5 * reach {
                (tc, f64::INFINITY)
            } else {
                (tc, reach)
            }
        })
        .collect();
    path.iter().all(|c| images.iter().all(|(tc, reach)| c.dist(*tc) > 1.5 * (rho + reach)))
}

pub fn is_reversible(surface: &SurfaceModel, word: &GroupWord) -> Reversibility {
    surface.reversibility(word).unwrap_or(Reversibility::Unsupported)
}

/// Which definition of the free winding number applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FreeCase {
    W1,
    W2,
    W3,
    W4,
}

/// Reference data for the non-reversible case: a lift `γ̃₀` of the
/// reference curve, and the trace `η̃` of a free homotopy from `γ₀` to the
/// curve, lifted from `γ̃₀(a)`.
#[derive(Debug, Clone)]
pub struct Reference {
    pub curve: LiftedCurve,
    pub trace: Vec<Vec2>,
    /// Deck `S` with `η̃(b) = S(γ̃(a))`; found automatically on flat models.
    pub deck: Option<GroupWord>,
}

impl Reference {
    /// The reference moved by the deck `s`: `s∘γ̃₀` with trace `s∘η̃`.
    pub fn translated(&self, s: &Isometry, s_word: Option<&GroupWord>, tol: &Tolerances) -> Result<Reference, WindingError> {
        Ok(Reference {
            curve: self.curve.translate(s, None, tol)?,
            trace: self.trace.iter().map(|p| s.apply_unchecked(*p)).collect(),
            deck: match (&self.deck, s_word) {
                (Some(d), Some(w)) => Some(w.mul(d)),
                _ => None,
            },
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeWinding {
    pub case: FreeCase,
    pub value: WindingValue,
    pub reversibility: Option<Reversibility>,
    /// Based computation at the lift that was used.
    pub based: BasedWinding,
}

pub fn class_word(lifted: &LiftedCurve) -> Result<GroupWord, WindingError> {
    if let Some(w) = lifted.word() {
        return Ok(w.clone());
    }
    let s = lifted.surface();
    let d = s.deck_coordinates(lifted.terminal()).ok_or(WindingError::MissingWord)?;
    Ok(s.flat_word(d)?)
}

/// Lift of `γ` at the end point of the reference trace, after checking that
/// the trace conjugates the reference class to the class of `γ`.
pub fn traced_lift(lifted: &LiftedCurve, reference: &Reference, tol: &Tolerances) -> Result<LiftedCurve, WindingError> {
    let surface = lifted.surface();
    let (first, last) = match (reference.trace.first(), reference.trace.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(WindingError::TraceClassMismatch),
    };
    let r0 = reference.curve.base_point();
    if first.dist(r0) > tol.pos.max(1e-9) * (1.0 + r0.norm()) * 1e3 {
        return Err(WindingError::TraceClassMismatch);
    }
    let p = lifted.base_point();
    let s = match &reference.deck {
        Some(w) => surface.word_isometry(w)?,
        None => {
            let d = surface
                .identify_deck(p, last, 1e-6 * (1.0 + last.norm()))
                .map_err(|_| WindingError::MissingReference)?
                .ok_or(WindingError::TraceClassMismatch)?;
            surface.flat_deck(d)?
        }
    };
    if s.apply_unchecked(p).dist(last) > 1e-6 * (1.0 + last.norm()) {
        return Err(WindingError::TraceClassMismatch);
    }
    let moved = lifted.translate(&s, None, tol)?;
    if !moved.terminal().approx_eq(reference.curve.terminal())? {
        return Err(WindingError::TraceClassMismatch);
    }
    Ok(moved)
}

pub fn free_winding_number(lifted: &LiftedCurve, reference: Option<&Reference>, tol: &Tolerances) -> Result<FreeWinding, WindingError> {
    let surface = lifted.surface();
    if surface.is_orientable() {
        let based = based_winding(lifted, tol)?;
        return Ok(FreeWinding {
            case: FreeCase::W1,
            value: based.value,
            reversibility: None,
            based,
        });
    }
    if lifted.sign() == -1 {
        let based = based_winding(lifted, tol)?;
        return Ok(FreeWinding {
            case: FreeCase::W2,
            value: based.value,
            reversibility: Some(Reversibility::Reversible),
            based,
        });
    }
    let rev = surface.reversibility(&class_word(lifted)?)?;
    match rev {
        Reversibility::Reversible => {
            let based = based_winding(lifted, tol)?;
            let WindingValue::Integer(n) = based.value else { unreachable!() };
            Ok(FreeWinding {
                case: FreeCase::W3,
                value: WindingValue::NonNegInteger(n.unsigned_abs()),
                reversibility: Some(rev),
                based,
            })
        }
        Reversibility::Unsupported => Err(WindingError::UnsupportedReversibility),
        Reversibility::NonReversible => {
            let reference = reference.ok_or(WindingError::MissingReference)?;
            let at = traced_lift(lifted, reference, tol)?;
            let based = based_winding(&at, tol)?;
            Ok(FreeWinding {
                case: FreeCase::W4,
                value: based.value,
                reversibility: Some(rev),
                based,
            })
        }
    }
}

/// Free winding numbers of one curve against two references, with the sign
/// the change of reference should produce.
#[derive(Debug, Clone, Serialize)]
pub struct ReferenceChange {
    pub first: WindingValue,
    pub second: WindingValue,
    pub expected_sign: i32,
    pub holds: bool,
}

/// Compares `W` against `reference` and against its translate by the deck
/// `s`; the law predicts a factor `ε(s)`.
pub fn reference_change_law(lifted: &LiftedCurve, reference: &Reference, s: &Isometry, s_word: Option<&GroupWord>, tol: &Tolerances) -> Result<ReferenceChange, WindingError> {
    let moved = reference.translated(s, s_word, tol)?;
    compare_references(lifted, reference, &moved, s.sign(), tol)
}

/// Compares `W` against two references with a predicted relative sign.
pub fn compare_references(lifted: &LiftedCurve, r1: &Reference, r2: &Reference, expected_sign: i32, tol: &Tolerances) -> Result<ReferenceChange, WindingError> {
    let first = free_winding_number(lifted, Some(r1), tol)?.value;
    let second = free_winding_number(lifted, Some(r2), tol)?.value;
    let holds = match (first, second) {
        (WindingValue::Integer(a), WindingValue::Integer(b)) => b == expected_sign as i64 * a,
        (a, b) => a == b,
    };
    Ok(ReferenceChange {
        first,
        second,
        expected_sign,
        holds,
    })
}

/// Mod-2 representative of a real j-value.
pub fn j_mod2(j: f64) -> f64 {
    mod2(j)
}
