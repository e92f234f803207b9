//! Scene documents: one JSON file describing a surface, named curves, an
//! optional reference curve with traces, and render options.

use crate::classifier::Traced;
use crate::curve::{CurveError, RegularCurve, Sample};
use crate::geodesic::{closed_geodesic, horocycle_loop, GeodesicError};
use crate::geom::{Mat2, Vec2};
use crate::group::{GroupWord, WordError};
use crate::isometry::{Isometry, IsometryError};
use crate::lift::{lift_given, lift_path, LiftError, LiftedCurve};
use crate::surface::{Generator, SurfaceError, SurfaceModel};
use crate::winding::Reference;
use crate::Tolerances;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("malformed scene: {0}")]
    Parse(String),
    #[error("duplicate curve name {0:?}")]
    DuplicateName(String),
    #[error("no curve named {0:?}")]
    UnknownCurve(String),
    #[error("unknown surface kind {0:?}")]
    UnknownSurface(String),
    #[error("curve {0:?} is not a plane curve")]
    NotPlaneCurve(String),
    #[error("scene has no reference curve")]
    NoReference,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneDocument {
    pub surface: SurfaceSpec,
    pub curves: Vec<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceSpec>,
    #[serde(default)]
    pub render: RenderOptions,
}

/// A built-in surface (`plane`, `cylinder`, `torus`, `moebius`, `klein`,
/// `cusped_pants`, `schottky_nonorientable`) or `hyperbolic` with explicit
/// generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub free: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub m: [[f64; 2]; 2],
    #[serde(default)]
    pub conj: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub name: String,
    #[serde(flatten)]
    pub shape: Shape,
    /// How a curve drawn in cover coordinates becomes a lift.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftSpec>,
    /// Trace of a free homotopy from the reference curve to this one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSpec>,
}

fn one() -> i32 {
    1
}

fn default_samples() -> usize {
    1024
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Circle {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "one")]
        turns: i32,
        #[serde(default)]
        phase: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Segment {
        from: [f64; 2],
        to: [f64; 2],
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Lemniscate {
        center: [f64; 2],
        size: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    KinkedLoop {
        base: Box<Shape>,
        kinks: Vec<KinkSpec>,
    },
    GeodesicLoop {
        word: String,
        #[serde(default)]
        hint: [f64; 2],
        #[serde(default = "default_samples")]
        samples: usize,
    },
    HorocycleLoop {
        word: String,
        x0: f64,
        height: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    RawSamples {
        points: Vec<[f64; 2]>,
        #[serde(default = "yes")]
        closed: bool,
    },
    /// One period of a lift given by points; the final point is the image
    /// of the first under the deck of `word`.
    CoverCurve {
        points: Vec<[f64; 2]>,
        word: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinkSpec {
    /// Position as a fraction of the parameter range.
    pub at: f64,
    pub sign: i32,
    pub size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum LiftSpec {
    /// Path lifting on a flat surface; the start defaults to the first sample.
    Path {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial_lift: Option<[f64; 2]>,
    },
    /// The curve is already a lift with the given terminal word.
    Word { word: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSpec {
    pub points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deck: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSpec {
    pub curve: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    #[serde(default = "yes")]
    pub chords: bool,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squeeze: Option<SqueezeRender>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homotopy: Option<HomotopyRender>,
}

fn default_width() -> f64 {
    800.0
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            chords: true,
            width: default_width(),
            squeeze: None,
            homotopy: None,
        }
    }
}

/// Draws the squeezing family of a plane curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezeRender {
    pub curve: String,
    pub frames: usize,
}

/// Draws the frames of a synthesized homotopy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyRender {
    pub from: String,
    pub to: String,
    pub frames: usize,
}

fn v(p: [f64; 2]) -> Vec2 {
    Vec2::from(p)
}

/// Resolution of a shape: a bare curve in cover coordinates, or a lift.
enum Resolved {
    Plane(RegularCurve),
    Lifted(LiftedCurve),
}

impl SceneDocument {
    pub fn from_json(text: &str) -> Result<SceneDocument, SceneError> {
        let doc: SceneDocument = serde_json::from_str(text).map_err(|e| SceneError::Parse(e.to_string()))?;
        doc.check_names()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    fn check_names(&self) -> Result<(), SceneError> {
        let mut seen = BTreeSet::new();
        for c in &self.curves {
            if !seen.insert(c.name.as_str()) {
                return Err(SceneError::DuplicateName(c.name.clone()));
            }
        }
        if let Some(r) = &self.reference {
            self.spec(&r.curve)?;
        }
        Ok(())
    }

    pub fn surface_model(&self) -> Result<SurfaceModel, SceneError> {
        let s = &self.surface;
        if s.kind == "hyperbolic" {
            let gens = s
                .generators
                .iter()
                .map(|g| {
                    Ok(Generator {
                        name: g.name.clone(),
                        isometry: Isometry::mobius(Mat2::from(g.m), g.conj)?,
                    })
                })
                .collect::<Result<Vec<_>, SceneError>>()?;
            return Ok(SurfaceModel::hyperbolic(gens, s.free)?);
        }
        SurfaceModel::builtin(&s.kind).ok_or_else(|| SceneError::UnknownSurface(s.kind.clone()))
    }

    pub fn spec(&self, name: &str) -> Result<&CurveSpec, SceneError> {
        self.curves.iter().find(|c| c.name == name).ok_or_else(|| SceneError::UnknownCurve(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.curves.iter().map(|c| c.name.as_str()).collect()
    }

    fn resolve(&self, shape: &Shape, surface: &SurfaceModel, tol: &Tolerances) -> Result<Resolved, SceneError> {
        Ok(match shape {
            Shape::Circle { center, radius, turns, phase, samples } => {
                Resolved::Plane(RegularCurve::circle(v(*center), *radius, *turns, *phase, *samples))
            }
            Shape::Segment { from, to, samples } => Resolved::Plane(RegularCurve::segment(v(*from), v(*to), *samples)),
            Shape::Lemniscate { center, size, samples } => Resolved::Plane(RegularCurve::lemniscate(v(*center), *size, *samples)),
            Shape::RawSamples { points, closed } => {
                let pts: Vec<Vec2> = points.iter().copied().map(v).collect();
                Resolved::Plane(RegularCurve::from_points(&pts, *closed)?)
            }
            Shape::KinkedLoop { base, kinks } => {
                let kinked = |c: &RegularCurve| {
                    kinks.iter().try_fold(c.clone(), |c, k| c.with_kink(k.at, k.sign, k.size))
                };
                match self.resolve(base, surface, tol)? {
                    Resolved::Plane(c) => Resolved::Plane(kinked(&c)?),
                    Resolved::Lifted(l) => {
                        let word = l.word().cloned().unwrap_or_default();
                        Resolved::Lifted(lift_given(surface, kinked(l.cover_curve())?, &word, tol)?)
                    }
                }
            }
            Shape::GeodesicLoop { word, hint, samples } => {
                Resolved::Lifted(closed_geodesic(surface, &GroupWord::parse(word)?, v(*hint), *samples, tol)?)
            }
            Shape::HorocycleLoop { word, x0, height, samples } => {
                Resolved::Lifted(horocycle_loop(surface, &GroupWord::parse(word)?, *x0, *height, *samples, tol)?)
            }
            Shape::CoverCurve { points, word } => {
                let word = GroupWord::parse(word)?;
                let t = surface.word_isometry(&word)?;
                Resolved::Lifted(lift_given(surface, periodic_curve(points, &t)?, &word, tol)?)
            }
        })
    }

    /// The curve as drawn, in cover coordinates.
    pub fn plane_curve(&self, name: &str, tol: &Tolerances) -> Result<RegularCurve, SceneError> {
        let spec = self.spec(name)?;
        match self.resolve(&spec.shape, &self.surface_model()?, tol)? {
            Resolved::Plane(c) => Ok(c),
            Resolved::Lifted(_) => Err(SceneError::NotPlaneCurve(name.to_string())),
        }
    }

    pub fn lifted(&self, name: &str, tol: &Tolerances) -> Result<LiftedCurve, SceneError> {
        let spec = self.spec(name)?;
        let surface = self.surface_model()?;
        match self.resolve(&spec.shape, &surface, tol)? {
            Resolved::Lifted(l) => Ok(l),
            Resolved::Plane(c) => {
                let lift = spec.lift.clone().unwrap_or(if surface.kind().is_flat() {
                    LiftSpec::Path { initial_lift: None }
                } else {
                    LiftSpec::Word { word: "1".into() }
                });
                match lift {
                    LiftSpec::Path { initial_lift } => {
                        let start = initial_lift.map(v).unwrap_or(c.start());
                        Ok(lift_path(&surface, &c, start, tol)?)
                    }
                    LiftSpec::Word { word } => Ok(lift_given(&surface, c.with_closed(false), &GroupWord::parse(&word)?, tol)?),
                }
            }
        }
    }

    /// Lift plus reference data, when the scene has a reference and the
    /// curve carries a trace.
    pub fn traced(&self, name: &str, tol: &Tolerances) -> Result<Traced, SceneError> {
        let lift = self.lifted(name, tol)?;
        let spec = self.spec(name)?;
        let reference = match (&self.reference, &spec.trace) {
            (Some(r), Some(t)) => Some(Reference {
                curve: self.lifted(&r.curve, tol)?,
                trace: t.points.iter().copied().map(v).collect(),
                deck: t.deck.as_deref().map(GroupWord::parse).transpose()?,
            }),
            _ => None,
        };
        Ok(Traced { lift, reference })
    }
}

/// Closed-up lift from one period of points: velocities by central
/// differences, continued across the ends by the deck.
fn periodic_curve(points: &[[f64; 2]], t: &Isometry) -> Result<RegularCurve, SceneError> {
    let n = points.len();
    if n < 3 {
        return Err(CurveError::TooFewSamples(n).into());
    }
    let p: Vec<Vec2> = points.iter().copied().map(v).collect();
    let before = t.inverse().apply(p[n - 1])?;
    let after = t.apply(p[0])?;
    let mut samples: Vec<Sample> = (0..n)
        .map(|k| {
            let prev = if k == 0 { before } else { p[k - 1] };
            let next = if k + 1 == n { after } else { p[k + 1] };
            Sample::new(k as f64, p[k], (next - prev) * 0.5)
        })
        .collect();
    let first = samples[0];
    samples.push(Sample::new(n as f64, after, t.push(first.pos, first.vel)));
    Ok(RegularCurve::new(samples, false))
}
