//! Explicit regular homotopies between plane curves with common end points,
//! end directions and i-index.
//!
//! The curves are first moved by a similarity so that they run from the
//! origin to `(D, 0)`, and an inverse twist at each end makes both end
//! directions horizontal. In these coordinates each curve is squeezed
//! towards the origin with a straight tail added, the shorter squeezed curve
//! gets a small S-shaped detour so both have the same length, and the angle
//! functions are interpolated with a bump-supported correction that fixes
//! the terminal point. Every frame is mapped back by the same diffeomorphism.

use crate::curve::{hermite_length, BaseBranch, CurveError, RegularCurve, Sample, Twist};
use crate::geom::{signed_angle, Mat2, Vec2};
use crate::Tolerances;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Distance between the normalized end points.
pub const D: f64 = 10.0;
/// Length of the squeezed copy of a curve.
const SQUEEZED: f64 = 0.1;
/// Support of the correction bump.
const BUMP_FROM: f64 = 7.0;
const BUMP_TO: f64 = 9.0;
/// Radius of the straightening twists in normalized units.
const TWIST_RADIUS: f64 = 1.0;
/// The detour starts at this abscissa and has this arclength.
const DETOUR_X0: f64 = 1.0;
const DETOUR_LEN: f64 = 4.0;
const DETOUR_NODES: usize = 256;
/// Largest arclength step of the resampled input curves.
const MAX_DS: f64 = 0.02;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthesisError {
    #[error("i-indices differ: {i1} vs {i2}")]
    IndexMismatch { i1: f64, i2: f64 },
    #[error("curves do not share end points and end directions")]
    EndsMismatch,
    #[error("could not make the curves agree near their common end point")]
    DegenerateEnds,
    #[error("need at least {min} frames")]
    TooFewFrames { min: usize },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Straighten,
    Squeeze,
    Lengthen,
    Interpolate,
    Shorten,
    Unsqueeze,
    Unstraighten,
}

#[derive(Debug, Clone)]
pub struct Frame {
    pub stage: Stage,
    /// Stage parameter: squeeze factor, detour amplitude, or interpolation time.
    pub t: f64,
    pub curve: RegularCurve,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesisMetadata {
    pub d: f64,
    pub l1: f64,
    pub l2: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub l_eps: f64,
    /// Curve (1 or 2) that received the lengthening detour.
    pub detour_on: Option<u8>,
    pub detour_amplitude: f64,
    /// `max_t |α_t|` over the interpolation frames.
    pub max_correction: f64,
    /// Closed-curve reduction was used (common start and end point).
    pub closed_reduction: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameCertificate {
    pub index: usize,
    pub stage: Stage,
    pub t: f64,
    /// Minimum speed in normalized coordinates: arclength parameter for
    /// squeeze and detour frames, the bump parameter `s` for interpolation.
    pub normalized_min_speed: f64,
    pub endpoint_drift: f64,
    pub direction_drift: f64,
    pub i_index: f64,
    pub regular: bool,
}

#[derive(Debug, Clone)]
pub struct HomotopyFrames {
    pub frames: Vec<Frame>,
    pub metadata: SynthesisMetadata,
    pub certificates: Vec<FrameCertificate>,
}

impl HomotopyFrames {
    pub fn all_regular(&self) -> bool {
        self.certificates.iter().all(|c| c.regular)
    }
}

/// Correction bump `ψ(s) = (15/16)(s − 7)²(9 − s)²` and its primitive.
fn psi(s: f64) -> (f64, f64) {
    if s <= BUMP_FROM {
        return (0.0, 0.0);
    }
    if s >= BUMP_TO {
        return (0.0, 1.0);
    }
    let x = s - 0.5 * (BUMP_FROM + BUMP_TO);
    let w = 1.0 - x * x;
    let c = 15.0 / 16.0;
    (c * w * w, c * (x - 2.0 * x.powi(3) / 3.0 + x.powi(5) / 5.0 + 8.0 / 15.0))
}

/// Angle profile of the detour on `[0, 1]`: antisymmetric about `1/2`, so
/// the detour has no net turning and no net vertical displacement.
fn detour_profile(z: f64) -> f64 {
    (TAU * z).sin() * (PI * z).sin().powi(2)
}

/// `∫₀ʰ (cos θ, sin θ)` for `θ` linear from `a` to `b`.
fn chord(a: f64, b: f64, h: f64) -> Vec2 {
    let d = b - a;
    if d.abs() < 1e-6 {
        let m = 0.5 * (a + b);
        let k = h * (1.0 - d * d / 24.0);
        Vec2::new(m.cos(), m.sin()) * k
    } else {
        Vec2::new(b.sin() - a.sin(), a.cos() - b.cos()) * (h / d)
    }
}

/// Integrates a piecewise linear angle function to positions.
fn integrate(s: &[f64], theta: &[f64], start: Vec2) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(s.len());
    let mut p = start;
    out.push(p);
    for k in 1..s.len() {
        p += chord(theta[k - 1], theta[k], s[k] - s[k - 1]);
        out.push(p);
    }
    out
}

/// Arclength form of a curve in normalized coordinates.
#[derive(Debug, Clone)]
struct ArcForm {
    s: Vec<f64>,
    pos: Vec<Vec2>,
    dir: Vec<Vec2>,
    theta: Vec<f64>,
    length: f64,
}

impl ArcForm {
    fn new(c: &RegularCurve) -> Result<ArcForm, SynthesisError> {
        let r = c.refine(|_, a, b| (hermite_length(a, b) / MAX_DS).ceil().clamp(1.0, 1e6) as usize);
        let s = r.arclengths();
        let theta = r.angle_function(BaseBranch::Near(0.0))?.values;
        Ok(ArcForm {
            length: *s.last().unwrap(),
            pos: r.positions().collect(),
            dir: r.samples().iter().map(Sample::dir).collect(),
            theta,
            s,
        })
    }

    fn theta_end(&self) -> f64 {
        // exact multiple of 2π once both ends are horizontal
        TAU * (self.theta.last().unwrap() / TAU).round()
    }
}

#[derive(Debug, Clone, Copy)]
struct Detour {
    amplitude: f64,
}

impl Detour {
    fn nodes(&self, theta_end: f64) -> (Vec<f64>, Vec<f64>) {
        let s: Vec<f64> = (0..=DETOUR_NODES).map(|i| DETOUR_LEN * i as f64 / DETOUR_NODES as f64).collect();
        let th = s.iter().map(|&x| theta_end + self.amplitude * detour_profile(x / DETOUR_LEN)).collect();
        (s, th)
    }

    /// Arclength gained over the straight segment it replaces.
    fn extra(&self) -> f64 {
        let (s, th) = self.nodes(0.0);
        DETOUR_LEN - integrate(&s, &th, Vec2::ZERO).last().unwrap().x
    }

    fn for_extra(target: f64) -> Detour {
        let (mut lo, mut hi) = (0.0, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (Detour { amplitude: mid }).extra() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Detour { amplitude: 0.5 * (lo + hi) }
    }
}

fn push_segment(samples: &mut Vec<Sample>, from: Vec2, to: Vec2, u0: f64) {
    let len = from.dist(to);
    if len <= 1e-14 {
        return;
    }
    let dir = (to - from) * (1.0 / len);
    let n = (len / 0.25).ceil().max(1.0) as usize;
    for k in 1..=n {
        let f = k as f64 / n as f64;
        samples.push(Sample::new(u0 + len * f, from.lerp(to, f), dir));
    }
}

/// `τ_t`: the curve scaled by `t` towards the origin followed by the
/// horizontal tail to `(D, 0)`, optionally with a detour in the tail.
/// Arclength parametrized.
fn squeezed(arc: &ArcForm, t: f64, detour: Option<Detour>) -> RegularCurve {
    let mut samples: Vec<Sample> = arc
        .s
        .iter()
        .zip(&arc.pos)
        .zip(&arc.dir)
        .map(|((&s, &p), &d)| Sample::new(t * s, p * t, d))
        .collect();
    let mut at = Vec2::new(D * t, 0.0);
    let mut u = t * arc.length;
    if let Some(dt) = detour.filter(|d| d.amplitude != 0.0) {
        let x0 = Vec2::new(DETOUR_X0, 0.0);
        push_segment(&mut samples, at, x0, u);
        u += at.dist(x0);
        let theta_end = arc.theta_end();
        let (s, th) = dt.nodes(theta_end);
        let pts = integrate(&s, &th, x0);
        for k in 1..s.len() {
            samples.push(Sample::new(u + s[k], pts[k], Vec2::from_angle(th[k])));
        }
        u += DETOUR_LEN;
        at = *pts.last().unwrap();
        at.y = 0.0;
    }
    push_segment(&mut samples, at, Vec2::new(D, 0.0), u);
    RegularCurve::new(samples, false)
}

/// Angle function of a squeezed curve (with optional detour) on `[0, l_ε]`.
struct Profile<'a> {
    arc: &'a ArcForm,
    eps: f64,
    detour: Option<(f64, Detour)>,
}

impl Profile<'_> {
    fn eval(&self, s: f64) -> f64 {
        let end = self.arc.theta_end();
        if s < SQUEEZED {
            let x = s / self.eps;
            let k = self.arc.s.partition_point(|&v| v <= x).clamp(1, self.arc.s.len() - 1);
            let (s0, s1) = (self.arc.s[k - 1], self.arc.s[k]);
            let f = ((x - s0) / (s1 - s0)).clamp(0.0, 1.0);
            return self.arc.theta[k - 1] + f * (self.arc.theta[k] - self.arc.theta[k - 1]);
        }
        match self.detour {
            Some((s0, d)) if s > s0 && s < s0 + DETOUR_LEN => end + d.amplitude * detour_profile((s - s0) / DETOUR_LEN),
            _ => end,
        }
    }
}

/// Normalizing diffeomorphism: similarity to `0 → (D,0)` followed by the
/// straightening twists.
struct Normalization {
    a: Mat2,
    b: Vec2,
    twists: Vec<Twist>,
}

impl Normalization {
    fn new(p: Vec2, q: Vec2, e_start: Vec2, e_end: Vec2) -> Normalization {
        let k = D / p.dist(q);
        let a = Mat2::rotation(-(q - p).angle()).scale(k);
        let b = -a.apply(p);
        let alpha = a.apply(e_start).angle();
        let beta = a.apply(e_end).angle();
        let twists = [(Vec2::ZERO, alpha), (Vec2::new(D, 0.0), beta)]
            .into_iter()
            .filter(|(_, ang)| *ang != 0.0)
            .map(|(c, ang)| Twist::new(c, ang, TWIST_RADIUS))
            .collect();
        Normalization { a, b, twists }
    }

    fn forward(&self, c: &RegularCurve) -> RegularCurve {
        let n = c.affine(&self.a, self.b);
        let inv: Vec<Twist> = self.twists.iter().map(Twist::inverse).collect();
        n.map_adaptive(
            |p, v| inv.iter().fold((p, v), |(p, v), t| t.apply(p, v)),
            0.05,
            0.2,
        )
    }

    fn back(&self, c: &RegularCurve) -> RegularCurve {
        let ai = self.a.inverse();
        let b = self.b;
        let out = c.map_adaptive(|p, v| self.twists.iter().fold((p, v), |(p, v), t| t.apply(p, v)), 0.05, 0.2);
        out.map(|p, v| (ai.apply(p - b), ai.apply(v)))
    }
}

/// Splits `total` frames into stage counts, at least one each.
fn allocate(total: usize, weights: &[f64]) -> Vec<usize> {
    let n = weights.len();
    let spare = total - n;
    let wsum: f64 = weights.iter().sum();
    let mut counts: Vec<usize> = weights.iter().map(|w| 1 + (spare as f64 * w / wsum).floor() as usize).collect();
    let mut k = 0;
    while counts.iter().sum::<usize>() < total {
        counts[k % n] += 1;
        k += 1;
    }
    counts
}

struct Core {
    frames: Vec<(Stage, f64, RegularCurve, f64)>,
    metadata: SynthesisMetadata,
}

fn log_steps(from: f64, to: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| (from.ln() + (to.ln() - from.ln()) * k as f64 / n as f64).exp()).collect()
}

fn lin_steps(from: f64, to: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| from + (to - from) * k as f64 / n as f64).collect()
}

/// Frames (after the first) for distinct end points; `new_frames` excludes
/// the initial curve.
fn core(g1: &RegularCurve, g2: &RegularCurve, new_frames: usize) -> Result<Core, SynthesisError> {
    let nz = Normalization::new(g1.start(), g1.end(), g1.start_dir(), g1.end_dir());
    let arcs = [ArcForm::new(&nz.forward(g1))?, ArcForm::new(&nz.forward(g2))?];
    let eps = [SQUEEZED / arcs[0].length, SQUEEZED / arcs[1].length];
    let l_eps0 = [SQUEEZED + D * (1.0 - eps[0]), SQUEEZED + D * (1.0 - eps[1])];
    let gap = l_eps0[0] - l_eps0[1];
    let (detour_on, detour) = if gap.abs() < 1e-13 {
        (None, None)
    } else if gap > 0.0 {
        (Some(1u8), Some(Detour::for_extra(gap)))
    } else {
        (Some(0u8), Some(Detour::for_extra(-gap)))
    };
    let l_eps = l_eps0[0].max(l_eps0[1]);

    let mut stages = vec![(Stage::Squeeze, 0.3)];
    if detour_on == Some(0) {
        stages.push((Stage::Lengthen, 0.05));
    }
    stages.push((Stage::Interpolate, 0.4));
    if detour_on == Some(1) {
        stages.push((Stage::Shorten, 0.05));
    }
    stages.push((Stage::Unsqueeze, 0.3));
    if new_frames < stages.len() {
        return Err(SynthesisError::TooFewFrames { min: stages.len() + 1 });
    }
    let counts = allocate(new_frames, &stages.iter().map(|s| s.1).collect::<Vec<_>>());

    let detour_for = |j: usize| detour.filter(|_| detour_on == Some(j as u8));
    let profiles: Vec<Profile> = (0..2)
        .map(|j| Profile {
            arc: &arcs[j],
            eps: eps[j],
            detour: detour_for(j).map(|d| (SQUEEZED + DETOUR_X0 - D * eps[j], d)),
        })
        .collect();

    // common grid for the interpolation stage
    let mut grid: Vec<f64> = Vec::new();
    for j in 0..2 {
        grid.extend(arcs[j].s.iter().map(|s| s * eps[j]).filter(|&s| s < SQUEEZED));
        if let Some((s0, _)) = profiles[j].detour {
            grid.extend((0..=DETOUR_NODES).map(|i| s0 + DETOUR_LEN * i as f64 / DETOUR_NODES as f64));
        }
    }
    let tail_n = ((l_eps - SQUEEZED) / 0.01).ceil() as usize;
    grid.extend((0..=tail_n).map(|i| SQUEEZED + (l_eps - SQUEEZED) * i as f64 / tail_n as f64));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let th: [Vec<f64>; 2] = [grid.iter().map(|&s| profiles[0].eval(s)).collect(), grid.iter().map(|&s| profiles[1].eval(s)).collect()];

    let mut out: Vec<(Stage, f64, RegularCurve, f64)> = Vec::new();
    let mut max_corr: f64 = 0.0;
    for (&(stage, _), &n) in stages.iter().zip(&counts) {
        match stage {
            Stage::Squeeze => {
                for t in log_steps(1.0, eps[0], n) {
                    let c = squeezed(&arcs[0], t, None);
                    out.push((stage, t, c, 1.0));
                }
            }
            Stage::Lengthen | Stage::Shorten => {
                let j = if stage == Stage::Lengthen { 0 } else { 1 };
                let full = detour.unwrap().amplitude;
                let amps = if stage == Stage::Lengthen { lin_steps(0.0, full, n) } else { lin_steps(full, 0.0, n) };
                for a in amps {
                    let c = squeezed(&arcs[j], eps[j], Some(Detour { amplitude: a }));
                    let speed = c.min_speed();
                    out.push((stage, a, c, speed));
                }
            }
            Stage::Interpolate => {
                for t in lin_steps(0.0, 1.0, n) {
                    let theta: Vec<f64> = th[0].iter().zip(&th[1]).map(|(a, b)| (1.0 - t) * a + t * b).collect();
                    let q = integrate(&grid, &theta, Vec2::ZERO);
                    let alpha = *q.last().unwrap() - Vec2::new(D, 0.0);
                    max_corr = max_corr.max(alpha.norm());
                    let samples: Vec<Sample> = grid
                        .iter()
                        .zip(&q)
                        .zip(&theta)
                        .map(|((&s, &p), &a)| {
                            let (b, cb) = psi(s);
                            Sample::new(s, p - alpha * cb, Vec2::from_angle(a) - alpha * b)
                        })
                        .collect();
                    let mut c = RegularCurve::new(samples, false).into_samples();
                    let last = c.len() - 1;
                    c[last].pos = Vec2::new(D, 0.0);
                    let c = RegularCurve::new(c, false);
                    let speed = c.min_speed();
                    out.push((stage, t, c, speed));
                }
            }
            Stage::Unsqueeze => {
                for t in log_steps(eps[1], 1.0, n) {
                    let c = squeezed(&arcs[1], t, None);
                    out.push((stage, t, c, 1.0));
                }
            }
            Stage::Straighten | Stage::Unstraighten => unreachable!(),
        }
    }
    let frames = out.into_iter().map(|(s, t, c, v)| (s, t, nz.back(&c), v)).collect();
    Ok(Core {
        frames,
        metadata: SynthesisMetadata {
            d: D,
            l1: arcs[0].length,
            l2: arcs[1].length,
            eps1: eps[0],
            eps2: eps[1],
            l_eps,
            detour_on: detour_on.map(|j| j + 1),
            detour_amplitude: detour.map_or(0.0, |d| d.amplitude),
            max_correction: max_corr,
            closed_reduction: false,
        },
    })
}

fn ends_match(g1: &RegularCurve, g2: &RegularCurve, tol: &Tolerances) -> bool {
    let scale = 1.0 + g1.start().norm().max(g1.end().norm());
    g1.start().dist(g2.start()) <= tol.pos * scale
        && g1.end().dist(g2.end()) <= tol.pos * scale
        && signed_angle(g1.start_dir(), g2.start_dir()).abs() <= tol.ang
        && signed_angle(g1.end_dir(), g2.end_dir()).abs() <= tol.ang
}

fn smooth01(x: f64) -> (f64, f64) {
    let x = x.clamp(0.0, 1.0);
    (x * x * (3.0 - 2.0 * x), 6.0 * x * (1.0 - x))
}

/// Blends the curve into its tangent lines on parameter windows of width
/// `delta` at both ends, with weight `w ∈ [0, 1]`.
fn straighten_ends(c: &RegularCurve, delta: f64, w: f64) -> RegularCurve {
    let (f, l) = (*c.first(), *c.last());
    let map = |s: &Sample| {
        let (mut pos, mut vel) = (s.pos, s.vel);
        for (e, sign) in [(f, 1.0), (l, -1.0)] {
            let x = sign * (s.u - e.u) / delta;
            if x >= 1.0 {
                continue;
            }
            // weight 1 on the first half of the window, 0 beyond it
            let (b, db) = smooth01(2.0 - 2.0 * x);
            let db = db * -2.0 * sign / delta;
            let line = e.pos + e.vel * (s.u - e.u);
            let diff = line - pos;
            let dvel = e.vel - vel;
            pos = pos + diff * (w * b);
            vel = vel + dvel * (w * b) + diff * (w * db);
        }
        Sample::new(s.u, pos, vel)
    };
    RegularCurve::new(c.samples().iter().map(map).collect(), c.is_closed())
}

/// Keeps the samples with parameter in `[lo, hi]`, adding exact Hermite
/// samples at the cut points.
fn trim(c: &RegularCurve, lo: f64, hi: f64) -> RegularCurve {
    let s = c.samples();
    let at = |u: f64| {
        let k = s.partition_point(|x| x.u <= u).clamp(1, s.len() - 1);
        let (a, b) = (&s[k - 1], &s[k]);
        crate::curve::hermite(a, b, (u - a.u) / (b.u - a.u))
    };
    let mut out = vec![at(lo)];
    out.extend(s.iter().filter(|x| x.u > lo + 1e-12 && x.u < hi - 1e-12).copied());
    out.push(at(hi));
    RegularCurve::new(out, false)
}

/// Builds a regular homotopy from `g1` to `g2` with `n_frames` frames,
/// the first of which is `g1` and the last `g2`.
pub fn synthesize_regular_homotopy(g1: &RegularCurve, g2: &RegularCurve, n_frames: usize, tol: &Tolerances) -> Result<HomotopyFrames, SynthesisError> {
    let (g1, g2) = (g1.clone().with_closed(false), g2.clone().with_closed(false));
    g1.check(tol)?;
    g2.check(tol)?;
    if !ends_match(&g1, &g2, tol) {
        return Err(SynthesisError::EndsMismatch);
    }
    let (i1, i2) = (g1.i_index()?, g2.i_index()?);
    if (i1 - i2).abs() > tol.int {
        return Err(SynthesisError::IndexMismatch { i1, i2 });
    }
    let (p, q) = (g1.start(), g1.end());
    let scale = 1.0 + p.norm().max(q.norm());
    let mut frames: Vec<Frame> = vec![Frame {
        stage: Stage::Squeeze,
        t: 1.0,
        curve: g1.clone(),
    }];
    let mut speeds = vec![1.0];
    let metadata;
    if p.dist(q) > 1e3 * tol.pos * scale {
        if n_frames < 6 {
            return Err(SynthesisError::TooFewFrames { min: 6 });
        }
        let c = core(&g1, &g2, n_frames - 1)?;
        for (stage, t, curve, v) in c.frames {
            frames.push(Frame { stage, t, curve });
            speeds.push(v);
        }
        metadata = c.metadata;
    } else {
        let (s1, d1, s2, d2) = straighten_pair(&g1, &g2, tol)?;
        if n_frames < 8 {
            return Err(SynthesisError::TooFewFrames { min: 8 });
        }
        let ws = allocate(n_frames - 1, &[0.1, 0.8, 0.1]);
        for w in lin_steps(0.0, 1.0, ws[0]) {
            frames.push(Frame {
                stage: Stage::Straighten,
                t: w,
                curve: straighten_ends(&g1, d1, w),
            });
            speeds.push(1.0);
        }
        // both straightened curves now contain the same tangent segments
        // at the ends; cut them off, homotope the rest, and glue back
        let r0 = 0.25 * (d1 * g1.first().vel.norm()).min(d2 * g2.first().vel.norm());
        let r1 = 0.25 * (d1 * g1.last().vel.norm()).min(d2 * g2.last().vel.norm());
        let r1 = if signed_angle(g1.start_dir(), -g1.end_dir()).abs() < 1e-6 { 0.5 * r1 } else { r1 };
        let cut = |c: &RegularCurve, r0: f64, r1: f64| {
            let (f, l) = (c.first(), c.last());
            (f.u + r0 / f.vel.norm(), l.u - r1 / l.vel.norm())
        };
        let (a1, b1) = cut(&g1, r0, r1);
        let (a2, b2) = cut(&g2, r0, r1);
        let head = trim(&s1, g1.first().u, a1);
        let tail = trim(&s1, b1, g1.last().u);
        let c = core(&trim(&s1, a1, b1), &trim(&s2, a2, b2), ws[1])?;
        for (stage, t, curve, v) in c.frames {
            frames.push(Frame {
                stage,
                t,
                curve: head.concat(&curve).concat(&tail),
            });
            speeds.push(v);
        }
        for w in lin_steps(1.0, 0.0, ws[2]) {
            frames.push(Frame {
                stage: Stage::Unstraighten,
                t: w,
                curve: straighten_ends(&g2, d2, w),
            });
            speeds.push(1.0);
        }
        metadata = SynthesisMetadata {
            closed_reduction: true,
            ..c.metadata
        };
    }
    // the final stage ends on a resampled copy of `g2`; hand back the input
    if let Some(f) = frames.last_mut() {
        f.curve = g2.clone();
    }
    let (e0, e1) = (g1.start_dir(), g1.end_dir());
    let certificates = frames
        .iter()
        .zip(&speeds)
        .enumerate()
        .map(|(index, (f, &v))| {
            let c = &f.curve;
            FrameCertificate {
                index,
                stage: f.stage,
                t: f.t,
                normalized_min_speed: v,
                endpoint_drift: c.start().dist(p).max(c.end().dist(q)),
                direction_drift: signed_angle(c.start_dir(), e0).abs().max(signed_angle(c.end_dir(), e1).abs()),
                i_index: c.i_index().unwrap_or(f64::NAN),
                regular: c.validate(tol).passed(),
            }
        })
        .collect();
    Ok(HomotopyFrames {
        frames,
        metadata,
        certificates,
    })
}

/// Straightens both curves near their ends with a common window policy:
/// 1% of each parameter range, halved until the blends stay regular.
fn straighten_pair(g1: &RegularCurve, g2: &RegularCurve, tol: &Tolerances) -> Result<(RegularCurve, f64, RegularCurve, f64), SynthesisError> {
    let range = |c: &RegularCurve| c.last().u - c.first().u;
    let (mut d1, mut d2) = (0.01 * range(g1), 0.01 * range(g2));
    for _ in 0..12 {
        let ok = |c: &RegularCurve, d: f64| {
            let fine = c.refine(|_, a, b| {
                let near = (a.u - c.first().u) < d || (c.last().u - b.u) < d;
                if near {
                    16
                } else {
                    1
                }
            });
            [0.25, 0.5, 0.75, 1.0].iter().all(|&w| {
                let s = straighten_ends(&fine, d, w);
                s.validate(tol).passed() && s.min_speed() > 0.25 * c.min_speed()
            })
        };
        if ok(g1, d1) && ok(g2, d2) {
            return Ok((straighten_ends(g1, d1, 1.0), d1, straighten_ends(g2, d2, 1.0), d2));
        }
        d1 *= 0.5;
        d2 *= 0.5;
    }
    Err(SynthesisError::DegenerateEnds)
}

/// The squeezing family `τ_t` of a single curve for `n` log-spaced values
/// of `t` from 1 down to `ε = 0.1/l`, in the curve's own coordinates.
pub fn squeeze_family(g: &RegularCurve, n: usize) -> Result<Vec<RegularCurve>, SynthesisError> {
    let g = g.clone().with_closed(false);
    if g.start().dist(g.end()) <= 1e-12 * (1.0 + g.start().norm()) {
        return Err(SynthesisError::DegenerateEnds);
    }
    let nz = Normalization::new(g.start(), g.end(), g.start_dir(), g.end_dir());
    let arc = ArcForm::new(&nz.forward(&g))?;
    let eps = SQUEEZED / arc.length;
    let n = n.max(2);
    let ts = (0..n).map(|k| (eps.ln() * k as f64 / (n - 1) as f64).exp());
    Ok(ts.map(|t| nz.back(&squeezed(&arc, t, None))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_integrates_to_one() {
        let n = 20000;
        let h = 2.0 / n as f64;
        let sum: f64 = (0..n).map(|k| psi(7.0 + (k as f64 + 0.5) * h).0 * h).sum();
        assert!((sum - 1.0).abs() < 1e-8);
        assert_eq!(psi(9.5).1, 1.0);
        assert!((psi(8.0).0 - 0.9375).abs() < 1e-15);
        assert!((psi(8.0).1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn detour_has_no_vertical_offset() {
        let d = Detour::for_extra(0.05);
        assert!((d.extra() - 0.05).abs() < 1e-12);
        let (s, th) = d.nodes(0.0);
        let end = *integrate(&s, &th, Vec2::ZERO).last().unwrap();
        assert!(end.y.abs() < 1e-14, "{end:?}");
    }

    #[test]
    fn chord_matches_quadrature() {
        let (a, b, h) = (0.3, 1.1, 0.7);
        let n = 100000;
        let mut acc = Vec2::ZERO;
        for k in 0..n {
            let th = a + (b - a) * (k as f64 + 0.5) / n as f64;
            acc += Vec2::from_angle(th) * (h / n as f64);
        }
        assert!(chord(a, b, h).dist(acc) < 1e-10);
    }

    fn graph(f: impl Fn(f64) -> (Vec2, Vec2), n: usize) -> RegularCurve {
        let samples = (0..n)
            .map(|k| {
                let u = k as f64 / (n - 1) as f64;
                let (p, v) = f(u);
                Sample::new(u, p, v)
            })
            .collect();
        RegularCurve::new(samples, false)
    }

    fn s_curve(a: f64) -> RegularCurve {
        graph(
            |u| {
                let w = TAU * u;
                let y = a * w.sin() * (1.0 - w.cos());
                let dy = a * TAU * (w.cos() - (2.0 * w).cos());
                (Vec2::new(u, y), Vec2::new(1.0, dy))
            },
            400,
        )
    }

    fn trochoid(r: f64) -> RegularCurve {
        graph(
            |u| {
                let w = TAU * u;
                (Vec2::new(u + r * w.sin(), r * (1.0 - w.cos())), Vec2::new(1.0 + r * TAU * w.cos(), r * TAU * w.sin()))
            },
            400,
        )
    }

    fn assert_certified(h: &HomotopyFrames, n: usize) {
        assert_eq!(h.frames.len(), n);
        for c in &h.certificates {
            assert!(c.regular, "{c:?}");
            assert!(c.normalized_min_speed >= 0.8, "{c:?}");
            assert!(c.endpoint_drift < 1e-6, "{c:?}");
            assert!(c.direction_drift < 1e-6, "{c:?}");
            assert!((c.i_index - h.certificates[0].i_index).abs() < 1e-6, "{c:?}");
        }
    }

    #[test]
    fn straight_to_s_shape() {
        let tol = Tolerances::default();
        let h = synthesize_regular_homotopy(&RegularCurve::segment(Vec2::ZERO, Vec2::X, 50), &s_curve(0.3), 24, &tol).unwrap();
        assert_certified(&h, 24);
        assert!(h.metadata.detour_on.is_some());
        assert!(h.metadata.max_correction <= 0.2);
    }

    #[test]
    fn loops_with_one_turn() {
        let tol = Tolerances::default();
        let k = RegularCurve::segment(Vec2::ZERO, Vec2::X, 200).with_kink(0.3, 1, 0.05).unwrap();
        let t = trochoid(0.4);
        assert!((k.i_index().unwrap() - 1.0).abs() < 1e-9);
        assert!((t.i_index().unwrap() - 1.0).abs() < 1e-9);
        let h = synthesize_regular_homotopy(&k, &t, 30, &tol).unwrap();
        assert_certified(&h, 30);
        let bad = synthesize_regular_homotopy(&k, &s_curve(0.2), 30, &tol);
        assert!(matches!(bad, Err(SynthesisError::IndexMismatch { .. })));
    }

    #[test]
    fn identical_curves() {
        let tol = Tolerances::default();
        let c = s_curve(0.5);
        let h = synthesize_regular_homotopy(&c, &c, 12, &tol).unwrap();
        assert_certified(&h, 12);
        assert!(h.metadata.detour_on.is_none());
    }

    #[test]
    fn closed_curves_share_base_point() {
        let tol = Tolerances::default();
        let c = RegularCurve::circle(Vec2::ZERO, 1.0, 1, 0.0, 200);
        let k = c.with_kink(0.4, 1, 0.05).unwrap().with_kink(0.7, -1, 0.05).unwrap();
        let h = synthesize_regular_homotopy(&c, &k, 40, &tol).unwrap();
        assert!(h.metadata.closed_reduction);
        assert_certified(&h, 40);
    }

    #[test]
    fn mismatched_ends() {
        let tol = Tolerances::default();
        let a = RegularCurve::segment(Vec2::ZERO, Vec2::X, 10);
        let b = RegularCurve::segment(Vec2::ZERO, Vec2::new(2.0, 0.0), 10);
        assert_eq!(synthesize_regular_homotopy(&a, &b, 10, &tol).unwrap_err(), SynthesisError::EndsMismatch);
    }

    #[test]
    fn squeeze_family_shrinks() {
        let f = squeeze_family(&s_curve(0.3), 5).unwrap();
        assert_eq!(f.len(), 5);
        let ymax = |c: &RegularCurve| c.positions().map(|p| p.y.abs()).fold(0.0, f64::max);
        assert!(ymax(&f[4]) < 0.2 * ymax(&f[0]));
    }
}
