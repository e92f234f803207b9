//! Deterministic SVG rendering of scene curves in the cover.

use crate::geodesic::shortest_geodesic;
use crate::geom::Vec2;
use crate::homotopy::{squeeze_family, synthesize_regular_homotopy};
use crate::isometry::Isometry;
use crate::scene::{SceneDocument, SceneError};
use crate::surface::SurfaceModel;
use crate::Tolerances;
use std::fmt::Write as _;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy)]
struct BBox {
    min: Vec2,
    max: Vec2,
}

impl BBox {
    fn of<'a>(pts: impl IntoIterator<Item = &'a Vec2>) -> Option<BBox> {
        pts.into_iter().fold(None, |b, &p| {
            Some(match b {
                None => BBox { min: p, max: p },
                Some(b) => BBox {
                    min: Vec2::new(b.min.x.min(p.x), b.min.y.min(p.y)),
                    max: Vec2::new(b.max.x.max(p.x), b.max.y.max(p.y)),
                },
            })
        })
    }

    fn with_margin(self) -> BBox {
        let d = self.max - self.min;
        let m = Vec2::new(d.x.max(1e-9) * 0.05, d.y.max(1e-9) * 0.05);
        BBox {
            min: self.min - m,
            max: self.max + m,
        }
    }

    fn size(&self) -> Vec2 {
        self.max - self.min
    }
}

/// A polyline layer entry.
struct Path {
    id: String,
    points: Vec<Vec2>,
    color: &'static str,
    dashed: bool,
    opacity: f64,
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Plots `(x, −y)` so that the picture is upright.
fn points_attr(pts: &[Vec2]) -> String {
    let mut s = String::new();
    for (k, p) in pts.iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", num(p.x), num(-p.y));
    }
    s
}

/// Fundamental-domain lines for a flat model, or the real axis and the
/// generators' isometric circles for the upper half-plane.
fn domain_marks(surface: &SurfaceModel, b: &BBox) -> Vec<Vec<Vec2>> {
    let mut out = Vec::new();
    let mut steps_x: Vec<f64> = Vec::new();
    let mut steps_y: Vec<f64> = Vec::new();
    for g in surface.generators() {
        match g.isometry {
            Isometry::Euclidean { t, .. } => {
                if t.x.abs() > 1e-12 {
                    steps_x.push(t.x.abs());
                }
                if t.y.abs() > 1e-12 {
                    steps_y.push(t.y.abs());
                }
            }
            Isometry::HyperbolicUhp { .. } => {
                for iso in [g.isometry, g.isometry.inverse()] {
                    out.extend(isometric_boundary(&iso, b));
                }
            }
        }
    }
    if !surface.kind().is_flat() {
        out.push(vec![Vec2::new(b.min.x, 0.0), Vec2::new(b.max.x, 0.0)]);
    }
    let lines = |step: f64, lo: f64, hi: f64| {
        let (k0, k1) = ((lo / step).ceil() as i64, (hi / step).floor() as i64);
        (k0..=k1.min(k0 + 200)).map(move |k| k as f64 * step)
    };
    if let Some(&s) = steps_x.iter().min_by(|a, b| a.total_cmp(b)) {
        out.extend(lines(s, b.min.x, b.max.x).map(|x| vec![Vec2::new(x, b.min.y), Vec2::new(x, b.max.y)]));
    }
    if let Some(&s) = steps_y.iter().min_by(|a, b| a.total_cmp(b)) {
        out.extend(lines(s, b.min.y, b.max.y).map(|y| vec![Vec2::new(b.min.x, y), Vec2::new(b.max.x, y)]));
    }
    out
}

fn semicircle(c: f64, r: f64) -> Vec<Vec2> {
    (0..=64).map(|k| Vec2::new(c, 0.0) + Vec2::from_angle(std::f64::consts::PI * k as f64 / 64.0) * r).collect()
}

fn isometric_boundary(iso: &Isometry, b: &BBox) -> Vec<Vec<Vec2>> {
    let Isometry::HyperbolicUhp { m, conj } = iso else {
        return vec![];
    };
    let [[a, bb], [c, d]] = m.m;
    if c.abs() > 1e-12 {
        // |c w + d| = 1 with w = z or w = −z̄
        let center = if *conj { d / c } else { -d / c };
        return vec![semicircle(center, 1.0 / c.abs())];
    }
    let k = (a / d).abs();
    if (k - 1.0).abs() < 1e-12 {
        let x = 0.5 * (bb / d).abs();
        vec![vec![Vec2::new(x, 0.0), Vec2::new(x, b.max.y)], vec![Vec2::new(-x, 0.0), Vec2::new(-x, b.max.y)]]
    } else {
        vec![semicircle(0.0, k.sqrt())]
    }
}

/// SVG of the named curves with optional squeeze and homotopy layers.
pub fn render_scene(doc: &SceneDocument, names: &[String], tol: &Tolerances) -> Result<String, SceneError> {
    let surface = doc.surface_model()?;
    let mut paths: Vec<Path> = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        // open plane curves have no lift; draw them as given
        let lift = match doc.lifted(name, tol) {
            Ok(l) => Some(l),
            Err(e) => {
                let c = doc.plane_curve(name, tol).map_err(|_| e)?;
                paths.push(Path {
                    id: format!("curve-{name}"),
                    points: c.positions().collect(),
                    color,
                    dashed: false,
                    opacity: 1.0,
                });
                None
            }
        };
        let Some(lift) = lift else { continue };
        paths.push(Path {
            id: format!("curve-{name}"),
            points: lift.cover_curve().positions().collect(),
            color,
            dashed: false,
            opacity: 1.0,
        });
        if doc.render.chords && !lift.is_null_class() {
            let p = lift.base_point();
            if let Ok(seg) = shortest_geodesic(surface.geometry(), p, lift.terminal().apply_unchecked(p)) {
                paths.push(Path {
                    id: format!("chord-{name}"),
                    points: seg.curve(64).positions().collect(),
                    color,
                    dashed: true,
                    opacity: 1.0,
                });
            }
        }
    }
    if let Some(sq) = &doc.render.squeeze {
        let family = squeeze_family(&doc.plane_curve(&sq.curve, tol)?, sq.frames).map_err(|e| SceneError::Parse(e.to_string()))?;
        let n = family.len();
        for (k, c) in family.iter().enumerate() {
            paths.push(Path {
                id: format!("squeeze-{k}"),
                points: c.positions().collect(),
                color: PALETTE[0],
                dashed: false,
                opacity: 1.0 - 0.7 * k as f64 / n.max(2) as f64,
            });
        }
    }
    if let Some(h) = &doc.render.homotopy {
        let (a, b) = (doc.plane_curve(&h.from, tol)?, doc.plane_curve(&h.to, tol)?);
        let frames = synthesize_regular_homotopy(&a, &b, h.frames, tol).map_err(|e| SceneError::Parse(e.to_string()))?;
        let n = frames.frames.len();
        for (k, f) in frames.frames.iter().enumerate() {
            paths.push(Path {
                id: format!("frame-{k}"),
                points: f.curve.positions().collect(),
                color: PALETTE[2],
                dashed: false,
                opacity: 0.3 + 0.7 * k as f64 / n.max(2) as f64,
            });
        }
    }

    let bbox = BBox::of(paths.iter().flat_map(|p| p.points.iter()))
        .unwrap_or(BBox {
            min: Vec2::new(-1.0, -1.0),
            max: Vec2::new(1.0, 1.0),
        })
        .with_margin();
    let size = bbox.size();
    let width = doc.render.width;
    let height = width * size.y / size.x;
    let stroke = 0.002 * size.x.max(size.y);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(bbox.min.x),
        num(-bbox.max.y),
        num(size.x),
        num(size.y),
        num(width),
        num(height)
    );
    let _ = writeln!(s, r##"<g id="domain" fill="none" stroke="#999999" stroke-width="{}">"##, num(0.5 * stroke));
    for m in domain_marks(&surface, &bbox) {
        let _ = writeln!(s, r#"<polyline points="{}"/>"#, points_attr(&m));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="curves" fill="none" stroke-width="{}">"#, num(stroke));
    for p in &paths {
        let dash = if p.dashed { format!(r#" stroke-dasharray="{} {}""#, num(4.0 * stroke), num(2.0 * stroke)) } else { String::new() };
        let _ = writeln!(
            s,
            r#"<polyline id="{}" stroke="{}" stroke-opacity="{}"{} points="{}"/>"#,
            xml_escape(&p.id),
            p.color,
            num(p.opacity),
            dash,
            points_attr(&p.points)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
