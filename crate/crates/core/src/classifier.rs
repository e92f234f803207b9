//! Regular homotopy decisions: based (fixing the base point) and free.

use crate::group::GroupWord;
use crate::isometry::Isometry;
use crate::lift::LiftedCurve;
use crate::surface::SurfaceKind;
use crate::winding::{based_winding, free_winding_number, traced_lift, FreeCase, Reference, WindingError, WindingValue};
use crate::Tolerances;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("lifts start at different points of the cover")]
    BasePointMismatch,
    #[error("curves lie on different surfaces")]
    SurfaceMismatch,
    #[error("free homotopy between the curves is not established; supply traces to a common reference")]
    MissingReference,
    #[error("references of the two curves are in different classes")]
    ReferenceMismatch,
    #[error(transparent)]
    Winding(#[from] WindingError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    ClassMismatch { terminal1: Isometry, terminal2: Isometry },
    WindingMismatch { w1: WindingValue, w2: WindingValue, raw1: f64, raw2: f64, case: Option<FreeCase> },
    Match { w: WindingValue, raw1: f64, raw2: f64, case: Option<FreeCase> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub equivalent: bool,
    pub reason: Reason,
}

impl Verdict {
    fn from_values(w1: WindingValue, w2: WindingValue, raw1: f64, raw2: f64, case: Option<FreeCase>) -> Verdict {
        if w1 == w2 {
            Verdict {
                equivalent: true,
                reason: Reason::Match { w: w1, raw1, raw2, case },
            }
        } else {
            Verdict {
                equivalent: false,
                reason: Reason::WindingMismatch { w1, w2, raw1, raw2, case },
            }
        }
    }
}

fn same_base(l1: &LiftedCurve, l2: &LiftedCurve, tol: &Tolerances) -> Result<(), ClassifyError> {
    if l1.surface() != l2.surface() {
        return Err(ClassifyError::SurfaceMismatch);
    }
    let (p, q) = (l1.base_point(), l2.base_point());
    if p.dist(q) > tol.pos * (1.0 + p.norm().max(q.norm())) {
        return Err(ClassifyError::BasePointMismatch);
    }
    Ok(())
}

/// Whether two lifts from the same point represent the same element of
/// the fundamental group.
pub fn same_based_class(l1: &LiftedCurve, l2: &LiftedCurve, tol: &Tolerances) -> Result<bool, ClassifyError> {
    same_base(l1, l2, tol)?;
    Ok(l1.terminal().approx_eq(l2.terminal()).map_err(WindingError::from)?)
}

pub fn based_equivalent(l1: &LiftedCurve, l2: &LiftedCurve, tol: &Tolerances) -> Result<Verdict, ClassifyError> {
    if !same_based_class(l1, l2, tol)? {
        return Ok(Verdict {
            equivalent: false,
            reason: Reason::ClassMismatch {
                terminal1: *l1.terminal(),
                terminal2: *l2.terminal(),
            },
        });
    }
    let (b1, b2) = (based_winding(l1, tol)?, based_winding(l2, tol)?);
    Ok(Verdict::from_values(b1.value, b2.value, b1.raw, b2.raw, None))
}

/// A curve together with the data tying it to a common reference class.
#[derive(Debug, Clone)]
pub struct Traced {
    pub lift: LiftedCurve,
    pub reference: Option<Reference>,
}

/// Free regular homotopy.
///
/// With a reference on both curves, each trace is verified and the two
/// references must lie in the same class. Otherwise the raw lifts must have
/// the same terminal deck; they are then freely homotopic through the
/// straight (geodesic) interpolation, whose trace joins the two base points.
pub fn freely_equivalent(c1: &Traced, c2: &Traced, tol: &Tolerances) -> Result<Verdict, ClassifyError> {
    if c1.lift.surface() != c2.lift.surface() {
        return Err(ClassifyError::SurfaceMismatch);
    }
    let (f1, f2) = match (&c1.reference, &c2.reference) {
        (Some(r1), Some(r2)) => {
            let k1 = traced_lift(&c1.lift, r1, tol)?;
            let k2 = traced_lift(&c2.lift, r2, tol)?;
            if !k1.terminal().approx_eq(k2.terminal()).map_err(WindingError::from)? {
                return Err(ClassifyError::ReferenceMismatch);
            }
            (free_winding_number(&c1.lift, Some(r1), tol)?, free_winding_number(&c2.lift, Some(r2), tol)?)
        }
        _ => {
            if !c1.lift.terminal().approx_eq(c2.lift.terminal()).map_err(WindingError::from)? {
                // in an abelian deck group distinct elements are never conjugate
                if has_abelian_deck_group(c1.lift.surface().kind()) {
                    return Ok(Verdict {
                        equivalent: false,
                        reason: Reason::ClassMismatch {
                            terminal1: *c1.lift.terminal(),
                            terminal2: *c2.lift.terminal(),
                        },
                    });
                }
                return Err(ClassifyError::MissingReference);
            }
            let r1 = self_reference(&c1.lift);
            let r2 = Reference {
                curve: c1.lift.clone(),
                trace: vec![c1.lift.base_point(), c2.lift.base_point()],
                deck: Some(GroupWord::identity()),
            };
            (free_winding_number(&c1.lift, Some(&r1), tol)?, free_winding_number(&c2.lift, Some(&r2), tol)?)
        }
    };
    Ok(Verdict::from_values(f1.value, f2.value, f1.based.raw, f2.based.raw, Some(f1.case)))
}

fn has_abelian_deck_group(kind: SurfaceKind) -> bool {
    matches!(kind, SurfaceKind::Plane | SurfaceKind::Cylinder | SurfaceKind::Torus | SurfaceKind::Moebius)
}

/// A curve used as its own reference, with the constant trace.
pub fn self_reference(l: &LiftedCurve) -> Reference {
    Reference {
        curve: l.clone(),
        trace: vec![l.base_point()],
        deck: Some(GroupWord::identity()),
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Partition {
    /// Names grouped by free winding number, in order of first appearance.
    pub blocks: Vec<Block>,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub value: WindingValue,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub name: String,
    pub error: String,
}

/// Groups curves into regular homotopy classes. Each curve is compared
/// against the first successfully classified one; curves whose class
/// cannot be matched are reported as failures.
pub fn classify_batch(curves: &[(String, Traced)], tol: &Tolerances) -> Partition {
    let mut out = Partition::default();
    let mut anchor: Option<&Traced> = None;
    for (name, c) in curves {
        let value = match anchor {
            None => freely_equivalent(c, c, tol),
            Some(a) => freely_equivalent(a, c, tol),
        }
        .map_err(|e| e.to_string())
        .and_then(|v| match v.reason {
            Reason::Match { w, .. } => Ok(w),
            Reason::WindingMismatch { w2, .. } => Ok(w2),
            Reason::ClassMismatch { .. } => Err("not in the class of the first curve".to_string()),
        });
        match value {
            Ok(v) => {
                anchor.get_or_insert(c);
                match out.blocks.iter_mut().find(|b| b.value == v) {
                    Some(b) => b.members.push(name.clone()),
                    None => out.blocks.push(Block {
                        value: v,
                        members: vec![name.clone()],
                    }),
                }
            }
            Err(error) => out.failures.push(Failure {
                name: name.clone(),
                error,
            }),
        }
    }
    out
}
