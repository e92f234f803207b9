//! Sampled regular curves in the plane, their angle functions and indices.
//!
//! A [`RegularCurve`] is a list of samples `(u, pos, vel)` with strictly
//! increasing parameter and non-vanishing velocity. Directions between
//! consecutive samples must differ by less than a quarter turn so that the
//! angle function can be unwrapped without ambiguity.

use crate::geom::{signed_angle, wrap_positive, wrap_signed, Mat2, Vec2};
use crate::Tolerances;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("curve needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("curve is not regular at sample {index}: {kind:?}")]
    Invalid { index: usize, kind: ViolationKind },
    #[error("direction jump of {jump} rad between samples {index} and {next}", next = .index + 1)]
    UnwrapAmbiguous { index: usize, jump: f64 },
    #[error("operation requires a closed curve")]
    NotClosed,
    #[error("support radius must be positive and finite, got {0}")]
    InvalidSupport(f64),
    #[error("rotation supports around the two end points overlap")]
    SupportTooLarge,
    #[error("rotated curve is under-sampled near sample {index}")]
    SupportUnderSampled { index: usize },
    #[error("kink window does not fit inside the curve")]
    KinkOutOfRange,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub u: f64,
    pub pos: Vec2,
    pub vel: Vec2,
}

impl Sample {
    pub fn new(u: f64, pos: Vec2, vel: Vec2) -> Self {
        Sample { u, pos, vel }
    }

    pub fn dir(&self) -> Vec2 {
        self.vel.normalized()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViolationKind {
    TooFewSamples,
    NonFinite,
    NonIncreasingParameter,
    ZeroVelocity,
    /// Angle between consecutive directions is at least a quarter turn.
    CoarseSampling { angle: f64 },
    /// Closed flag set but end points differ.
    EndpointGap { gap: f64 },
    /// Closed flag set but end directions differ.
    EndDirectionMismatch { angle: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
}

/// Result of [`RegularCurve::validate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub violations: Vec<Violation>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularCurve {
    samples: Vec<Sample>,
    closed: bool,
}

/// Which representative of the initial angle an angle function starts from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BaseBranch {
    /// θ(a) in `[0, 2π)`.
    #[default]
    Canonical,
    /// Canonical representative plus `2πk`.
    Shift(i64),
    /// The representative closest to the given value.
    Near(f64),
}

/// Continuous lift of the direction map, one value per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleFunction {
    pub values: Vec<f64>,
    pub base_branch: f64,
    /// Total turning, accumulated from zero so that it does not depend on
    /// the branch.
    pub turning: f64,
}

impl AngleFunction {
    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("angle function is never empty")
    }

    pub fn i_index(&self) -> f64 {
        self.turning / TAU
    }

    /// Branch-dependent j-index; only its class modulo 2 is meaningful.
    pub fn j_index(&self) -> f64 {
        (self.last() + self.first()) / TAU
    }
}

/// Representative of `j` modulo 2 in `[0, 2)`.
pub fn mod2(j: f64) -> f64 {
    let r = j.rem_euclid(2.0);
    if r >= 2.0 {
        0.0
    } else {
        r
    }
}

/// Which integrality guarantees apply to a curve, and whether its indices
/// actually are integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralityReport {
    pub i: f64,
    pub j: f64,
    pub end_directions_equal: bool,
    pub end_directions_mirrored: bool,
    pub i_integral: bool,
    pub j_integral: bool,
}

/// Distance from `x` to the nearest integer.
pub fn integer_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn smoothstep(z: f64) -> f64 {
    z * z * (3.0 - 2.0 * z)
}

fn smoothstep_d(z: f64) -> f64 {
    6.0 * z * (1.0 - z)
}

/// Rotation of the plane around `center` by `angle`, tapering smoothly to
/// the identity at distance `radius`. Every twist is a diffeomorphism
/// (it preserves each circle around the center), so it maps regular curves
/// to regular curves. Its differential at the center is the rotation by
/// `angle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Twist {
    pub center: Vec2,
    pub angle: f64,
    pub radius: f64,
}

impl Twist {
    pub fn new(center: Vec2, angle: f64, radius: f64) -> Self {
        Twist {
            center,
            angle,
            radius,
        }
    }

    pub fn inverse(&self) -> Twist {
        Twist {
            angle: -self.angle,
            ..*self
        }
    }

    /// Image of a point and the pushforward of a tangent vector at it.
    pub fn apply(&self, pos: Vec2, vel: Vec2) -> (Vec2, Vec2) {
        let x = pos - self.center;
        let r = x.norm();
        let s = r / self.radius;
        if s >= 1.0 || self.angle == 0.0 {
            return (pos, vel);
        }
        let theta = self.angle * (1.0 - smoothstep(s));
        // d theta / du, written without dividing by r
        let rho = self.radius;
        let dtheta = self.angle * (-6.0 / (rho * rho) + 6.0 * r / (rho * rho * rho)) * x.dot(vel);
        let rx = x.rotated(theta);
        (self.center + rx, vel.rotated(theta) + rx.perp() * dtheta)
    }

    pub fn apply_curve(&self, curve: &RegularCurve) -> RegularCurve {
        curve.map(|p, v| self.apply(p, v))
    }
}

impl RegularCurve {
    pub fn new(samples: Vec<Sample>, closed: bool) -> Self {
        RegularCurve { samples, closed }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn with_closed(mut self, closed: bool) -> Self {
        self.closed = closed;
        self
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("non-empty curve")
    }

    pub fn start(&self) -> Vec2 {
        self.first().pos
    }

    pub fn end(&self) -> Vec2 {
        self.last().pos
    }

    pub fn start_dir(&self) -> Vec2 {
        self.first().dir()
    }

    pub fn end_dir(&self) -> Vec2 {
        self.last().dir()
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.samples.iter().map(|s| s.pos)
    }

    pub fn min_speed(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.vel.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Applies a map to positions and a matching map to velocities.
    pub fn map(&self, f: impl Fn(Vec2, Vec2) -> (Vec2, Vec2)) -> RegularCurve {
        let samples = self
            .samples
            .iter()
            .map(|s| {
                let (pos, vel) = f(s.pos, s.vel);
                Sample::new(s.u, pos, vel)
            })
            .collect();
        RegularCurve::new(samples, self.closed)
    }

    /// Image under the affine map `x ↦ A x + b`.
    pub fn affine(&self, a: &Mat2, b: Vec2) -> RegularCurve {
        self.map(|p, v| (a.apply(p) + b, a.apply(v)))
    }

    pub fn validate(&self, tol: &Tolerances) -> Diagnostics {
        let mut violations = Vec::new();
        let n = self.samples.len();
        if n < 2 {
            violations.push(Violation {
                index: 0,
                kind: ViolationKind::TooFewSamples,
            });
            return Diagnostics { violations };
        }
        for (k, s) in self.samples.iter().enumerate() {
            if !(s.u.is_finite() && s.pos.is_finite() && s.vel.is_finite()) {
                violations.push(Violation {
                    index: k,
                    kind: ViolationKind::NonFinite,
                });
            } else if s.vel.norm() <= 0.0 {
                violations.push(Violation {
                    index: k,
                    kind: ViolationKind::ZeroVelocity,
                });
            }
            if k > 0 && !(s.u > self.samples[k - 1].u) {
                violations.push(Violation {
                    index: k,
                    kind: ViolationKind::NonIncreasingParameter,
                });
            }
        }
        for k in 0..n - 1 {
            let (a, b) = (self.samples[k].vel, self.samples[k + 1].vel);
            if a.norm() > 0.0 && b.norm() > 0.0 {
                let ang = signed_angle(a, b).abs();
                if !(ang < FRAC_PI_2) {
                    violations.push(Violation {
                        index: k,
                        kind: ViolationKind::CoarseSampling { angle: ang },
                    });
                }
            }
        }
        if self.closed {
            let scale = 1.0 + self.samples.iter().map(|s| s.pos.norm()).fold(0.0, f64::max);
            let gap = self.start().dist(self.end());
            if gap > tol.pos * scale {
                violations.push(Violation {
                    index: n - 1,
                    kind: ViolationKind::EndpointGap { gap },
                });
            }
            let (a, b) = (self.first().vel, self.last().vel);
            if a.norm() > 0.0 && b.norm() > 0.0 {
                let ang = signed_angle(a, b).abs();
                if ang > tol.ang {
                    violations.push(Violation {
                        index: n - 1,
                        kind: ViolationKind::EndDirectionMismatch { angle: ang },
                    });
                }
            }
        }
        violations.sort_by_key(|v| v.index);
        Diagnostics { violations }
    }

    /// Errors with the first violation if the curve is not a valid regular curve.
    pub fn check(&self, tol: &Tolerances) -> Result<(), CurveError> {
        if self.samples.len() < 2 {
            return Err(CurveError::TooFewSamples(self.samples.len()));
        }
        match self.validate(tol).first_violation() {
            None => Ok(()),
            Some(v) => Err(CurveError::Invalid {
                index: v.index,
                kind: v.kind,
            }),
        }
    }

    /// Unwraps the direction angles into a continuous angle function.
    pub fn angle_function(&self, branch: BaseBranch) -> Result<AngleFunction, CurveError> {
        if self.samples.len() < 2 {
            return Err(CurveError::TooFewSamples(self.samples.len()));
        }
        let raw0 = wrap_positive(self.samples[0].vel.angle());
        let base = match branch {
            BaseBranch::Canonical => raw0,
            BaseBranch::Shift(k) => raw0 + TAU * k as f64,
            BaseBranch::Near(x) => raw0 + TAU * ((x - raw0) / TAU).round(),
        };
        let mut values = Vec::with_capacity(self.samples.len());
        values.push(base);
        let mut prev_raw = self.samples[0].vel.angle();
        let mut acc = 0.0;
        for (k, s) in self.samples.iter().enumerate().skip(1) {
            let raw = s.vel.angle();
            let step = wrap_signed(raw - prev_raw);
            if !(step.abs() < FRAC_PI_2) || !step.is_finite() {
                return Err(CurveError::UnwrapAmbiguous {
                    index: k - 1,
                    jump: step.abs(),
                });
            }
            acc += step;
            values.push(base + acc);
            prev_raw = raw;
        }
        Ok(AngleFunction {
            values,
            base_branch: base,
            turning: acc,
        })
    }

    pub fn i_index(&self) -> Result<f64, CurveError> {
        Ok(self.angle_function(BaseBranch::Canonical)?.i_index())
    }

    /// j-index computed from the canonical branch.
    pub fn j_index(&self) -> Result<f64, CurveError> {
        Ok(self.angle_function(BaseBranch::Canonical)?.j_index())
    }

    pub fn integrality_conditions(&self, tol: &Tolerances) -> Result<IntegralityReport, CurveError> {
        let theta = self.angle_function(BaseBranch::Canonical)?;
        let (ea, eb) = (self.start_dir(), self.end_dir());
        let mirrored = Vec2::new(ea.x, -ea.y);
        let i = theta.i_index();
        let j = theta.j_index();
        Ok(IntegralityReport {
            i,
            j,
            end_directions_equal: signed_angle(ea, eb).abs() <= tol.ang,
            end_directions_mirrored: signed_angle(mirrored, eb).abs() <= tol.ang,
            i_integral: integer_distance(i) <= tol.int,
            j_integral: integer_distance(j) <= tol.int,
        })
    }

    /// Cubic Hermite interpolation between samples `k` and `k + 1`.
    pub fn hermite(&self, k: usize, tau: f64) -> Sample {
        hermite(&self.samples[k], &self.samples[k + 1], tau)
    }

    /// Subdivides interval `k` into `pieces(k, s_k, s_{k+1})` pieces using
    /// Hermite interpolation. Original samples are kept verbatim.
    pub fn refine(&self, pieces: impl Fn(usize, &Sample, &Sample) -> usize) -> RegularCurve {
        let mut out = Vec::with_capacity(self.samples.len());
        for k in 0..self.samples.len().saturating_sub(1) {
            let (a, b) = (&self.samples[k], &self.samples[k + 1]);
            out.push(*a);
            let m = pieces(k, a, b).max(1);
            for j in 1..m {
                out.push(hermite(a, b, j as f64 / m as f64));
            }
        }
        if let Some(last) = self.samples.last() {
            out.push(*last);
        }
        RegularCurve::new(out, self.closed)
    }

    /// Image under a smooth map `(pos, vel) ↦ (pos', vel')`, bisecting source
    /// intervals (Hermite) until consecutive images are at most `max_step`
    /// apart and their directions differ by at most `max_turn`.
    pub fn map_adaptive(&self, f: impl Fn(Vec2, Vec2) -> (Vec2, Vec2), max_step: f64, max_turn: f64) -> RegularCurve {
        let img = |s: &Sample| {
            let (p, v) = f(s.pos, s.vel);
            Sample::new(s.u, p, v)
        };
        let mut out = Vec::with_capacity(self.samples.len());
        for w in self.samples.windows(2) {
            // stack of (source interval, image of its left end)
            let mut stack = vec![(w[0], w[1], 0u32)];
            while let Some((a, b, depth)) = stack.pop() {
                let (ia, ib) = (img(&a), img(&b));
                let coarse = ia.pos.dist(ib.pos) > max_step || signed_angle(ia.vel, ib.vel).abs() > max_turn;
                if coarse && depth < 24 {
                    let m = hermite(&a, &b, 0.5);
                    stack.push((m, b, depth + 1));
                    stack.push((a, m, depth + 1));
                } else {
                    out.push(ia);
                }
            }
        }
        if let Some(last) = self.samples.last() {
            out.push(img(last));
        }
        RegularCurve::new(out, self.closed)
    }

    /// Cumulative arclength at each sample.
    pub fn arclengths(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.samples.len());
        let mut acc = 0.0;
        out.push(0.0);
        for w in self.samples.windows(2) {
            acc += hermite_length(&w[0], &w[1]);
            out.push(acc);
        }
        out
    }

    pub fn length(&self) -> f64 {
        self.samples.windows(2).map(|w| hermite_length(&w[0], &w[1])).sum()
    }

    /// Concatenates `other` after `self`; the parameter of `other` is shifted
    /// to continue, and a duplicated junction sample is dropped.
    pub fn concat(&self, other: &RegularCurve) -> RegularCurve {
        let mut samples = self.samples.clone();
        let shift = self.last().u - other.first().u;
        let skip = usize::from(other.start().dist(self.end()) <= 1e-12);
        let mut gap = 0.0;
        if skip == 0 {
            gap = 1e-9_f64.max(shift.abs() * 1e-12);
        }
        samples.extend(
            other
                .samples
                .iter()
                .skip(skip)
                .map(|s| Sample::new(s.u + shift + gap, s.pos, s.vel)),
        );
        RegularCurve::new(samples, false)
    }

    /// Local rotation of a closed curve around its base point: the curve is
    /// unchanged outside the disc of radius `support_radius`, and the base
    /// direction is rotated by `angle`.
    pub fn local_rotation(&self, angle: f64, support_radius: f64, tol: &Tolerances) -> Result<RegularCurve, CurveError> {
        if !self.closed {
            return Err(CurveError::NotClosed);
        }
        let twist = self.checked_twist(self.start(), angle, support_radius)?;
        self.apply_twists(&[twist], tol)
    }

    /// Rotates the curve around its initial point by `start_angle` and
    /// around its terminal point by `end_angle`, each inside its own disc.
    pub fn rotate_ends(
        &self,
        start_angle: f64,
        start_radius: f64,
        end_angle: f64,
        end_radius: f64,
        tol: &Tolerances,
    ) -> Result<RegularCurve, CurveError> {
        let t0 = self.checked_twist(self.start(), start_angle, start_radius)?;
        let t1 = self.checked_twist(self.end(), end_angle, end_radius)?;
        let sep = self.start().dist(self.end());
        if sep <= tol.pos * (1.0 + self.start().norm()) {
            if (start_angle - end_angle).abs() > tol.ang {
                return Err(CurveError::SupportTooLarge);
            }
            return self.apply_twists(&[t0], tol);
        }
        if start_radius + end_radius >= sep {
            return Err(CurveError::SupportTooLarge);
        }
        self.apply_twists(&[t0, t1], tol)
    }

    fn checked_twist(&self, center: Vec2, angle: f64, radius: f64) -> Result<Twist, CurveError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(CurveError::InvalidSupport(radius));
        }
        if !angle.is_finite() {
            return Err(CurveError::InvalidArgument(format!("rotation angle {angle}")));
        }
        Ok(Twist::new(center, angle, radius))
    }

    fn apply_twists(&self, twists: &[Twist], tol: &Tolerances) -> Result<RegularCurve, CurveError> {
        // refine intervals that pass through a twist disc so the rotated arc
        // stays adequately sampled
        let refined = self.refine(|_, a, b| {
            let len = a.pos.dist(b.pos);
            twists
                .iter()
                .filter(|t| t.angle != 0.0)
                .filter(|t| a.pos.dist(t.center).min(b.pos.dist(t.center)) < t.radius + len)
                .map(|t| (8.0 * t.angle.abs() * len / t.radius).ceil().clamp(1.0, 256.0) as usize)
                .max()
                .unwrap_or(1)
        });
        let mut out = refined;
        for t in twists {
            out = t.apply_curve(&out);
        }
        match out.validate(tol).first_violation() {
            None => Ok(out),
            Some(v) => match v.kind {
                ViolationKind::CoarseSampling { .. } => Err(CurveError::SupportUnderSampled { index: v.index }),
                kind => Err(CurveError::Invalid { index: v.index, kind }),
            },
        }
    }

    /// Adds a small loop ("kink") of radius `size` near the parameter
    /// fraction `at`, turning counter-clockwise for `sign > 0`. The i-index
    /// changes by `±1`; the curve is untouched outside a short window.
    pub fn with_kink(&self, at: f64, sign: i32, size: f64) -> Result<RegularCurve, CurveError> {
        if sign == 0 || !(size > 0.0) {
            return Err(CurveError::InvalidArgument("kink needs nonzero sign and positive size".into()));
        }
        if self.samples.len() < 2 {
            return Err(CurveError::TooFewSamples(self.samples.len()));
        }
        let (ua, ub) = (self.first().u, self.last().u);
        let u0 = ua + at * (ub - ua);
        let k0 = self
            .samples
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.u - u0).abs().total_cmp(&(b.1.u - u0).abs()))
            .map(|(k, _)| k)
            .unwrap();
        let centre = self.samples[k0];
        let speed = centre.vel.norm();
        let half = PI * size / (4.0 * speed);
        let (lo, hi) = (centre.u - half, centre.u + half);
        if lo <= ua || hi >= ub {
            return Err(CurveError::KinkOutOfRange);
        }
        let refined = self.refine(|_, a, b| {
            if b.u > lo && a.u < hi {
                (96.0 * (b.u - a.u) / (hi - lo)).ceil().clamp(1.0, 4096.0) as usize
            } else {
                1
            }
        });
        let t = centre.dir();
        let n = t.perp() * sign.signum() as f64;
        let out = refined.map_samples(|s| {
            if s.u <= lo || s.u >= hi {
                return *s;
            }
            let z = (s.u - lo) / (hi - lo);
            let phase = TAU * smoothstep(z);
            let dphase = TAU * smoothstep_d(z) / (hi - lo);
            let (sn, cs) = phase.sin_cos();
            let disp = (t * sn + n * (1.0 - cs)) * size;
            let ddisp = (t * cs + n * sn) * (size * dphase);
            Sample::new(s.u, s.pos + disp, s.vel + ddisp)
        });
        Ok(out)
    }

    fn map_samples(&self, f: impl Fn(&Sample) -> Sample) -> RegularCurve {
        RegularCurve::new(self.samples.iter().map(f).collect(), self.closed)
    }

    /// Circle traversed `turns` times (clockwise for negative `turns`),
    /// starting at polar angle `phase`.
    pub fn circle(center: Vec2, radius: f64, turns: i32, phase: f64, n: usize) -> RegularCurve {
        assert!(turns != 0, "circle needs a nonzero number of turns");
        let sign = turns.signum() as f64;
        let span = TAU * turns.unsigned_abs() as f64;
        let n = n.max(4 * turns.unsigned_abs() as usize + 1);
        let samples = (0..n)
            .map(|k| {
                let u = span * k as f64 / (n - 1) as f64;
                let phi = phase + sign * u;
                let (s, c) = phi.sin_cos();
                Sample::new(u, center + Vec2::new(c, s) * radius, Vec2::new(-s, c) * (radius * sign))
            })
            .collect();
        RegularCurve::new(samples, true)
    }

    /// Arc of a circle from polar angle `from` to `to` (either orientation).
    pub fn arc(center: Vec2, radius: f64, from: f64, to: f64, n: usize) -> RegularCurve {
        let n = n.max(((to - from).abs() / (PI / 4.0)).ceil() as usize + 1).max(2);
        let samples = (0..n)
            .map(|k| {
                let u = k as f64 / (n - 1) as f64;
                let phi = from + (to - from) * u;
                let (s, c) = phi.sin_cos();
                Sample::new(u, center + Vec2::new(c, s) * radius, Vec2::new(-s, c) * (radius * (to - from)))
            })
            .collect();
        RegularCurve::new(samples, false)
    }

    pub fn segment(p: Vec2, q: Vec2, n: usize) -> RegularCurve {
        let n = n.max(2);
        let v = q - p;
        let samples = (0..n)
            .map(|k| {
                let u = k as f64 / (n - 1) as f64;
                Sample::new(u, p + v * u, v)
            })
            .collect();
        RegularCurve::new(samples, false)
    }

    /// Figure eight `size·(sin u, sin u cos u)` around `center`, based at
    /// the crossing point.
    pub fn lemniscate(center: Vec2, size: f64, n: usize) -> RegularCurve {
        let n = n.max(9);
        let samples = (0..n)
            .map(|k| {
                let u = TAU * k as f64 / (n - 1) as f64;
                let (s, c) = u.sin_cos();
                let c2 = (2.0 * u).cos();
                Sample::new(u, center + Vec2::new(s, s * c) * size, Vec2::new(c, c2) * size)
            })
            .collect();
        RegularCurve::new(samples, true)
    }

    /// Builds a curve from raw points with central finite-difference
    /// velocities. For closed input the first point must not be repeated at
    /// the end; it is appended internally.
    pub fn from_points(points: &[Vec2], closed: bool) -> Result<RegularCurve, CurveError> {
        let n = points.len();
        if n < 3 {
            return Err(CurveError::TooFewSamples(n));
        }
        let mut samples = Vec::with_capacity(n + 1);
        if closed {
            for k in 0..n {
                let prev = points[(k + n - 1) % n];
                let next = points[(k + 1) % n];
                samples.push(Sample::new(k as f64, points[k], (next - prev) * 0.5));
            }
            let first = samples[0];
            samples.push(Sample::new(n as f64, first.pos, first.vel));
        } else {
            for k in 0..n {
                let vel = if k == 0 {
                    (points[1] * 4.0 - points[0] * 3.0 - points[2]) * 0.5
                } else if k == n - 1 {
                    (points[n - 1] * 3.0 - points[n - 2] * 4.0 + points[n - 3]) * 0.5
                } else {
                    (points[k + 1] - points[k - 1]) * 0.5
                };
                samples.push(Sample::new(k as f64, points[k], vel));
            }
        }
        Ok(RegularCurve::new(samples, closed))
    }
}

/// Cubic Hermite interpolation between two samples at `tau ∈ [0, 1]`.
pub fn hermite(a: &Sample, b: &Sample, tau: f64) -> Sample {
    let h = b.u - a.u;
    let t2 = tau * tau;
    let t3 = t2 * tau;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + tau;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let d00 = 6.0 * t2 - 6.0 * tau;
    let d10 = 3.0 * t2 - 4.0 * tau + 1.0;
    let d01 = -6.0 * t2 + 6.0 * tau;
    let d11 = 3.0 * t2 - 2.0 * tau;
    let pos = a.pos * h00 + a.vel * (h * h10) + b.pos * h01 + b.vel * (h * h11);
    let vel = (a.pos * d00 + b.pos * d01) * (1.0 / h) + a.vel * d10 + b.vel * d11;
    Sample::new(a.u + h * tau, pos, vel)
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// Length of the Hermite arc between two samples (5-point Gauss–Legendre).
pub fn hermite_length(a: &Sample, b: &Sample) -> f64 {
    let h = b.u - a.u;
    GAUSS5
        .iter()
        .map(|&(x, w)| w * hermite(a, b, 0.5 * (x + 1.0)).vel.norm())
        .sum::<f64>()
        * 0.5
        * h
}
