#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use regwind::geodesic::closed_geodesic;
use regwind::group::GroupWord;
use regwind::lift::{lift_given, LiftedCurve};
use regwind::surface::SurfaceModel;
use regwind::{RegularCurve, Sample, Tolerances, Vec2};
use std::f64::consts::TAU;

pub fn tol() -> Tolerances {
    Tolerances::default()
}

/// Trigonometric closed curve `z(t) = Σ c_k e^{ikt}`.
#[derive(Debug, Clone)]
pub struct Fourier {
    pub coeffs: Vec<(i32, Vec2)>,
}

fn cmul(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x)
}

impl Fourier {
    pub fn random(rng: &mut StdRng) -> Fourier {
        let lead = [-2, -1, 1, 2, 3][rng.gen_range(0..5)];
        let mut coeffs = vec![(lead, Vec2::new(1.0, 0.0))];
        for k in -3..=3 {
            if k != 0 && k != lead {
                coeffs.push((k, Vec2::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3))));
            }
        }
        Fourier { coeffs }
    }

    /// Position, first and second derivative at `t`.
    pub fn eval(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        let (mut z, mut d1, mut d2) = (Vec2::ZERO, Vec2::ZERO, Vec2::ZERO);
        for &(k, c) in &self.coeffs {
            let e = cmul(c, Vec2::from_angle(k as f64 * t));
            let kf = k as f64;
            z += e;
            d1 += Vec2::new(-e.y, e.x) * kf;
            d2 += e * (-kf * kf);
        }
        (z, d1, d2)
    }

    pub fn min_speed(&self) -> f64 {
        (0..4000).map(|k| self.eval(TAU * k as f64 / 4000.0).1.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn curve(&self, n: usize) -> RegularCurve {
        let samples = (0..n)
            .map(|k| {
                let t = TAU * k as f64 / (n - 1) as f64;
                let (z, d, _) = self.eval(t);
                Sample::new(t, z, d)
            })
            .collect();
        RegularCurve::new(samples, true)
    }

    /// Total curvature `(1/2π)∫ (x'y'' − y'x'')/|z'|² dt` by Simpson's rule
    /// on the analytic derivatives.
    pub fn rotation_index(&self) -> f64 {
        let n = 20000;
        let h = TAU / n as f64;
        let f = |t: f64| {
            let (_, d1, d2) = self.eval(t);
            d1.cross(d2) / d1.dot(d1)
        };
        let mut acc = f(0.0) + f(TAU);
        for k in 1..n {
            acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0 / TAU
    }
}

/// A random regular Fourier curve with speed bounded away from zero.
pub fn random_regular_fourier(rng: &mut StdRng) -> Fourier {
    loop {
        let f = Fourier::random(rng);
        if f.min_speed() > 0.1 {
            return f;
        }
    }
}

/// Adds `s²(1−s)²·Σ(a_k sin 2πks + b_k cos 2πks)` to a cover curve; the
/// perturbation and its derivative vanish at both ends, so the end data
/// keep their deck relation.
pub fn perturb(c: &RegularCurve, coeffs: &[(Vec2, Vec2)]) -> RegularCurve {
    let (u0, u1) = (c.first().u, c.last().u);
    let span = u1 - u0;
    let samples = c
        .samples()
        .iter()
        .map(|s| {
            let x = (s.u - u0) / span;
            let w = x * x * (1.0 - x) * (1.0 - x);
            let dw = 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
            let (mut f, mut df) = (Vec2::ZERO, Vec2::ZERO);
            for (k, (a, b)) in coeffs.iter().enumerate() {
                let om = TAU * (k + 1) as f64;
                let (sn, cs) = (om * x).sin_cos();
                f += *a * sn + *b * cs;
                df += *a * (om * cs) - *b * (om * sn);
            }
            Sample::new(s.u, s.pos + f * w, s.vel + (f * dw + df * w) * (1.0 / span))
        })
        .collect();
    RegularCurve::new(samples, false)
}

/// Closed geodesic of `word`, perturbed and kinked at random, as a lift.
pub fn random_lift(surface: &SurfaceModel, word: &GroupWord, hint: Vec2, scale: f64, rng: &mut StdRng) -> Option<LiftedCurve> {
    let base = closed_geodesic(surface, word, hint, 1024, &tol()).ok()?;
    for attempt in 0..8 {
        let amp = scale * 0.5f64.powi(attempt);
        let coeffs: Vec<(Vec2, Vec2)> = (0..3)
            .map(|_| {
                let mut r = || Vec2::new(rng.gen_range(-amp..amp), rng.gen_range(-amp..amp));
                (r(), r())
            })
            .collect();
        let mut c = perturb(base.cover_curve(), &coeffs);
        let kinks = rng.gen_range(0..3);
        for _ in 0..kinks {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let at = rng.gen_range(0.2..0.8);
            match c.with_kink(at, sign, 0.2 * scale) {
                Ok(k) => c = k,
                Err(_) => break,
            }
        }
        if let Ok(l) = lift_given(surface, c, word, &tol()) {
            return Some(l);
        }
    }
    None
}

pub fn random_word(rng: &mut StdRng, gens: &[&str], max_len: usize) -> GroupWord {
    loop {
        let len = rng.gen_range(1..=max_len);
        let mut w = GroupWord::identity();
        for _ in 0..len {
            let g = gens[rng.gen_range(0..gens.len())];
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            w = w.mul(&GroupWord::generator(g, e));
        }
        if !w.is_empty() {
            return w;
        }
    }
}

/// A non-null lift on `surface` at random, with the scale of perturbations
/// adapted to the model.
pub fn random_surface_lift(surface: &SurfaceModel, rng: &mut StdRng) -> LiftedCurve {
    loop {
        let (word, hint, scale) = match surface.kind() {
            regwind::SurfaceKind::Torus => (random_word(rng, &["a", "b"], 3), Vec2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)), 0.1),
            regwind::SurfaceKind::Moebius => (random_word(rng, &["g"], 3), Vec2::new(rng.gen_range(0.0..1.0), 0.0), 0.1),
            regwind::SurfaceKind::Klein => (random_word(rng, &["a", "b"], 3), Vec2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)), 0.1),
            _ => {
                let names: Vec<&str> = surface.generators().iter().map(|g| g.name.as_str()).collect();
                (random_word(rng, &names, 3), Vec2::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.3..1.0)), 0.0)
            }
        };
        let scale = if scale > 0.0 {
            scale
        } else {
            // hyperbolic: relative to the height of the geodesic
            match closed_geodesic(surface, &word, hint, 64, &tol()) {
                Ok(g) => 0.05 * g.cover_curve().positions().map(|p| p.y).fold(f64::INFINITY, f64::min),
                Err(_) => continue,
            }
        };
        if let Some(l) = random_lift(surface, &word, hint, scale, rng) {
            return l;
        }
    }
}
