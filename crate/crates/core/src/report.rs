//! Reports emitted by the command-line tool, as JSON or plain text.

use crate::classifier::{based_equivalent, freely_equivalent, ClassifyError, Reason, Verdict};
use crate::curve::mod2;
use crate::homotopy::{FrameCertificate, HomotopyFrames, SynthesisMetadata};
use crate::isometry::Isometry;
use crate::scene::{SceneDocument, SceneError};
use crate::surface::SurfaceKind;
use crate::winding::{based_winding, free_winding_number, BasedWinding, FreeWinding, WindingError};
use crate::Tolerances;
use serde::Serialize;
use std::fmt::Write as _;

/// Exit code for a subcommand whose input could not be resolved.
pub const EXIT_RESOLUTION: i32 = 2;
/// Exit code for non-integral raw values and straight external angles.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Error { kind: String, message: String },
}

impl<T> Outcome<T> {
    fn from_result(r: Result<T, WindingError>) -> Outcome<T> {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Error {
                kind: winding_error_kind(&e).to_string(),
                message: e.to_string(),
            },
        }
    }

    fn is_numeric_failure(&self) -> bool {
        matches!(self, Outcome::Error { kind, .. } if kind == "non_integral" || kind == "straight_angle")
    }
}

pub fn winding_error_kind(e: &WindingError) -> &'static str {
    match e {
        WindingError::NonIntegral { .. } => "non_integral",
        WindingError::StraightAngle { .. } => "straight_angle",
        WindingError::MissingReference => "missing_reference",
        WindingError::TraceClassMismatch => "trace_class_mismatch",
        WindingError::UnsupportedReversibility => "unsupported_reversibility",
        _ => "other",
    }
}

fn is_numeric(e: &WindingError) -> bool {
    matches!(e, WindingError::NonIntegral { .. } | WindingError::StraightAngle { .. })
}

#[derive(Debug, Clone, Serialize)]
pub struct WindingReport {
    pub curve: String,
    pub surface: SurfaceKind,
    pub i_index: f64,
    /// Representative of the j-index in `[0, 2)`.
    pub j_mod2: f64,
    pub sign: i32,
    pub null_class: bool,
    pub word: Option<String>,
    pub terminal: Isometry,
    pub based: Outcome<BasedWinding>,
    pub free: Outcome<FreeWinding>,
}

impl WindingReport {
    pub fn exit_code(&self) -> i32 {
        if self.based.is_numeric_failure() || self.free.is_numeric_failure() {
            EXIT_NUMERIC
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "curve: {}", self.curve);
        let _ = writeln!(s, "surface: {:?}", self.surface);
        let _ = writeln!(s, "i: {:.9}", self.i_index);
        let _ = writeln!(s, "j (mod 2): {:.9}", self.j_mod2);
        let _ = writeln!(s, "sign: {:+}", self.sign);
        let _ = writeln!(s, "class: {}", self.word.as_deref().unwrap_or("?"));
        match &self.based {
            Outcome::Ok(b) => {
                let _ = writeln!(s, "based winding: {} (raw {:.9})", b.value, b.raw);
            }
            Outcome::Error { message, .. } => {
                let _ = writeln!(s, "based winding: error: {message}");
            }
        }
        match &self.free {
            Outcome::Ok(f) => {
                let _ = writeln!(s, "free winding: {} [{:?}] (raw {:.9})", f.value, f.case, f.based.raw);
            }
            Outcome::Error { message, .. } => {
                let _ = writeln!(s, "free winding: error: {message}");
            }
        }
        s
    }
}

pub fn winding_report(doc: &SceneDocument, name: &str, tol: &Tolerances) -> Result<WindingReport, SceneError> {
    let traced = doc.traced(name, tol)?;
    let l = &traced.lift;
    let cover = l.cover_curve();
    let based = based_winding(l, tol);
    let free = free_winding_number(l, traced.reference.as_ref(), tol);
    Ok(WindingReport {
        curve: name.to_string(),
        surface: l.surface().kind(),
        i_index: cover.i_index()?,
        j_mod2: mod2(cover.j_index()?),
        sign: l.sign(),
        null_class: l.is_null_class(),
        word: l.word().map(|w| w.to_string()),
        terminal: *l.terminal(),
        based: Outcome::from_result(based),
        free: Outcome::from_result(free),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub curve1: String,
    pub curve2: String,
    pub based: bool,
    pub verdict: Outcome<Verdict>,
}

impl ClassifyReport {
    /// 0 equivalent, 1 not equivalent, 2 or 3 when no verdict was reached.
    pub fn exit_code(&self) -> i32 {
        match &self.verdict {
            Outcome::Ok(v) if v.equivalent => 0,
            Outcome::Ok(_) => 1,
            Outcome::Error { kind, .. } if kind == "non_integral" || kind == "straight_angle" => EXIT_NUMERIC,
            Outcome::Error { .. } => EXIT_RESOLUTION,
        }
    }

    pub fn to_text(&self) -> String {
        let mode = if self.based { "based" } else { "free" };
        match &self.verdict {
            Outcome::Ok(v) => {
                let what = if v.equivalent { "equivalent" } else { "not equivalent" };
                let why = match &v.reason {
                    Reason::Match { w, case, .. } => format!("winding numbers agree: {w}{}", case_tag(case)),
                    Reason::WindingMismatch { w1, w2, case, .. } => format!("winding numbers differ: {w1} vs {w2}{}", case_tag(case)),
                    Reason::ClassMismatch { .. } => "different elements of the fundamental group".to_string(),
                };
                format!("{} / {} ({mode}): {what}\nreason: {why}\n", self.curve1, self.curve2)
            }
            Outcome::Error { message, .. } => format!("{} / {} ({mode}): error: {message}\n", self.curve1, self.curve2),
        }
    }
}

fn case_tag(case: &Option<crate::winding::FreeCase>) -> String {
    case.map(|c| format!(" [{c:?}]")).unwrap_or_default()
}

pub fn classify_report(doc: &SceneDocument, n1: &str, n2: &str, based: bool, tol: &Tolerances) -> Result<ClassifyReport, SceneError> {
    let (c1, c2) = (doc.traced(n1, tol)?, doc.traced(n2, tol)?);
    let verdict = if based {
        based_equivalent(&c1.lift, &c2.lift, tol)
    } else {
        freely_equivalent(&c1, &c2, tol)
    };
    let verdict = match verdict {
        Ok(v) => Outcome::Ok(v),
        Err(ClassifyError::Winding(e)) if is_numeric(&e) => Outcome::Error {
            kind: winding_error_kind(&e).to_string(),
            message: e.to_string(),
        },
        Err(e) => Outcome::Error {
            kind: "classify".to_string(),
            message: e.to_string(),
        },
    };
    Ok(ClassifyReport {
        curve1: n1.to_string(),
        curve2: n2.to_string(),
        based,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesisReport {
    pub from: String,
    pub to: String,
    pub frames: usize,
    pub all_regular: bool,
    pub min_normalized_speed: f64,
    pub max_endpoint_drift: f64,
    pub max_direction_drift: f64,
    pub metadata: SynthesisMetadata,
    pub certificates: Vec<FrameCertificate>,
}

impl SynthesisReport {
    pub fn new(from: &str, to: &str, h: &HomotopyFrames) -> SynthesisReport {
        let c = &h.certificates;
        SynthesisReport {
            from: from.to_string(),
            to: to.to_string(),
            frames: h.frames.len(),
            all_regular: h.all_regular(),
            min_normalized_speed: c.iter().map(|c| c.normalized_min_speed).fold(f64::INFINITY, f64::min),
            max_endpoint_drift: c.iter().map(|c| c.endpoint_drift).fold(0.0, f64::max),
            max_direction_drift: c.iter().map(|c| c.direction_drift).fold(0.0, f64::max),
            metadata: h.metadata.clone(),
            certificates: c.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "{} -> {}: {} frames, regular: {}\nmin normalized speed: {:.6}\nmax endpoint drift: {:.3e}\nmax end-direction drift: {:.3e}\n",
            self.from, self.to, self.frames, self.all_regular, self.min_normalized_speed, self.max_endpoint_drift, self.max_direction_drift
        )
    }
}

/// One frame as written to disk: samples as `[u, x, y, vx, vy]`.
#[derive(Debug, Clone, Serialize)]
pub struct FrameFile {
    pub index: usize,
    pub stage: crate::homotopy::Stage,
    pub t: f64,
    pub samples: Vec<[f64; 5]>,
}

impl FrameFile {
    pub fn new(index: usize, frame: &crate::homotopy::Frame) -> FrameFile {
        FrameFile {
            index,
            stage: frame.stage,
            t: frame.t,
            samples: frame.curve.samples().iter().map(|s| [s.u, s.pos.x, s.pos.y, s.vel.x, s.vel.y]).collect(),
        }
    }
}
