//! Surfaces as quotients of a cover by a group of deck isometries.

use crate::geom::{Mat2, Vec2};
use crate::group::{GroupWord, Reversibility, WordError};
use crate::isometry::{Geometry, Isometry, IsometryError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("point {0:?} lies outside the cover domain")]
    OutOfDomain(Vec2),
    #[error("generator geometry differs from the surface geometry")]
    GeometryMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("operation needs a flat surface model")]
    NotFlat,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Plane,
    Cylinder,
    Torus,
    Moebius,
    Klein,
    HyperbolicCustom,
}

impl SurfaceKind {
    pub fn is_flat(self) -> bool {
        self != SurfaceKind::HyperbolicCustom
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub isometry: Isometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceModel {
    kind: SurfaceKind,
    geometry: Geometry,
    generators: Vec<Generator>,
    /// The generators freely generate the deck group.
    free: bool,
}

/// Coordinates `(m, n)` of a deck transformation of a flat model in its
/// normal form: `a^m` (cylinder), `a^m b^n` (torus, Klein bottle), `g^n`
/// (Möbius band).
pub type FlatDeck = (i64, i64);

fn parity(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

impl SurfaceModel {
    fn flat(kind: SurfaceKind, gens: &[(&str, Mat2, Vec2)], free: bool) -> Self {
        SurfaceModel {
            kind,
            geometry: Geometry::Euclidean,
            generators: gens
                .iter()
                .map(|(n, o, t)| Generator {
                    name: n.to_string(),
                    isometry: Isometry::Euclidean { o: *o, t: *t },
                })
                .collect(),
            free,
        }
    }

    pub fn plane() -> Self {
        Self::flat(SurfaceKind::Plane, &[], true)
    }

    pub fn cylinder() -> Self {
        Self::flat(SurfaceKind::Cylinder, &[("a", Mat2::IDENTITY, Vec2::new(1.0, 0.0))], true)
    }

    pub fn torus() -> Self {
        Self::flat(
            SurfaceKind::Torus,
            &[
                ("a", Mat2::IDENTITY, Vec2::new(1.0, 0.0)),
                ("b", Mat2::IDENTITY, Vec2::new(0.0, 1.0)),
            ],
            false,
        )
    }

    /// Open band `ℝ × (−1, 1)` modulo `g(x, y) = (x + 1, −y)`.
    pub fn moebius() -> Self {
        Self::flat(
            SurfaceKind::Moebius,
            &[("g", Mat2::new(1.0, 0.0, 0.0, -1.0), Vec2::new(1.0, 0.0))],
            true,
        )
    }

    pub fn klein() -> Self {
        Self::flat(
            SurfaceKind::Klein,
            &[
                ("a", Mat2::IDENTITY, Vec2::new(1.0, 0.0)),
                ("b", Mat2::new(-1.0, 0.0, 0.0, 1.0), Vec2::new(0.0, 1.0)),
            ],
            false,
        )
    }

    /// Hyperbolic surface given by generators acting on the upper half-plane.
    /// `free` declares that the generators form a free basis of the deck
    /// group; it is trusted, not verified.
    pub fn hyperbolic(generators: Vec<Generator>, free: bool) -> Result<Self, SurfaceError> {
        for (i, g) in generators.iter().enumerate() {
            if g.isometry.geometry() != Geometry::HyperbolicUhp {
                return Err(SurfaceError::GeometryMismatch);
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(SurfaceError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(SurfaceModel {
            kind: SurfaceKind::HyperbolicCustom,
            geometry: Geometry::HyperbolicUhp,
            generators,
            free,
        })
    }

    /// Pair of pants with cusps: the free group on two parabolics
    /// `a = [[1,1],[0,1]]` and `b = [[1,0],[4,1]]`.
    pub fn cusped_pants() -> Self {
        Self::hyperbolic(
            vec![
                Generator {
                    name: "a".into(),
                    isometry: Isometry::mobius(Mat2::new(1.0, 1.0, 0.0, 1.0), false).unwrap(),
                },
                Generator {
                    name: "b".into(),
                    isometry: Isometry::mobius(Mat2::new(1.0, 0.0, 4.0, 1.0), false).unwrap(),
                },
            ],
            true,
        )
        .unwrap()
    }

    /// Non-orientable Schottky surface: a hyperbolic `x` pairing the discs
    /// `D(−2, 1/2)` and `D(2, 1/2)`, and the glide reflection
    /// `y(z) = −4z̄` along the imaginary axis.
    pub fn schottky_nonorientable() -> Self {
        Self::hyperbolic(
            vec![
                Generator {
                    name: "x".into(),
                    isometry: Isometry::mobius(Mat2::new(4.0, 7.5, 2.0, 4.0), false).unwrap(),
                },
                Generator {
                    name: "y".into(),
                    isometry: Isometry::mobius(Mat2::new(2.0, 0.0, 0.0, 0.5), true).unwrap(),
                },
            ],
            true,
        )
        .unwrap()
    }

    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "plane" => Self::plane(),
            "cylinder" => Self::cylinder(),
            "torus" => Self::torus(),
            "moebius" => Self::moebius(),
            "klein" => Self::klein(),
            "cusped_pants" => Self::cusped_pants(),
            "schottky_nonorientable" => Self::schottky_nonorientable(),
            _ => return None,
        })
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn generator(&self, name: &str) -> Result<&Isometry, SurfaceError> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .map(|g| &g.isometry)
            .ok_or_else(|| SurfaceError::UnknownGenerator(name.into()))
    }

    pub fn sign_of(&self, name: &str) -> Option<i32> {
        self.generator(name).ok().map(Isometry::sign)
    }

    pub fn is_orientable(&self) -> bool {
        self.generators.iter().all(|g| g.isometry.sign() == 1)
    }

    pub fn in_domain(&self, p: Vec2) -> bool {
        p.is_finite()
            && match self.kind {
                SurfaceKind::HyperbolicCustom => p.y > 0.0,
                SurfaceKind::Moebius => p.y.abs() < 1.0,
                _ => true,
            }
    }

    pub fn check_domain(&self, p: Vec2) -> Result<(), SurfaceError> {
        if self.in_domain(p) {
            Ok(())
        } else {
            Err(SurfaceError::OutOfDomain(p))
        }
    }

    pub fn apply(&self, t: &Isometry, p: Vec2) -> Result<Vec2, SurfaceError> {
        if t.geometry() != self.geometry {
            return Err(SurfaceError::GeometryMismatch);
        }
        self.check_domain(p)?;
        let q = t.apply(p)?;
        self.check_domain(q)?;
        Ok(q)
    }

    /// Composes the generators of `word` as maps, leftmost outermost.
    pub fn word_isometry(&self, word: &GroupWord) -> Result<Isometry, SurfaceError> {
        let mut t = Isometry::identity(self.geometry);
        for l in word.letters() {
            let g = self.generator(&l.name)?;
            let g = if l.exp < 0 { g.inverse() } else { g.clone() };
            t = t.compose(&g)?;
        }
        Ok(t)
    }

    pub fn word_sign(&self, word: &GroupWord) -> Result<i32, SurfaceError> {
        Ok(word.orientation(|n| self.sign_of(n))?)
    }

    fn require_flat(&self) -> Result<(), SurfaceError> {
        if self.kind.is_flat() {
            Ok(())
        } else {
            Err(SurfaceError::NotFlat)
        }
    }

    /// Deck transformation in normal form coordinates.
    pub fn flat_deck(&self, (m, n): FlatDeck) -> Result<Isometry, SurfaceError> {
        self.require_flat()?;
        let (mf, nf) = (m as f64, n as f64);
        let (o, t) = match self.kind {
            SurfaceKind::Plane => (Mat2::IDENTITY, Vec2::ZERO),
            SurfaceKind::Cylinder => (Mat2::IDENTITY, Vec2::new(mf, 0.0)),
            SurfaceKind::Torus => (Mat2::IDENTITY, Vec2::new(mf, nf)),
            SurfaceKind::Moebius => (Mat2::new(1.0, 0.0, 0.0, parity(n)), Vec2::new(nf, 0.0)),
            SurfaceKind::Klein => (Mat2::new(parity(n), 0.0, 0.0, 1.0), Vec2::new(mf, nf)),
            SurfaceKind::HyperbolicCustom => unreachable!(),
        };
        Ok(Isometry::Euclidean { o, t })
    }

    pub fn flat_word(&self, (m, n): FlatDeck) -> Result<GroupWord, SurfaceError> {
        self.require_flat()?;
        Ok(match self.kind {
            SurfaceKind::Plane => GroupWord::identity(),
            SurfaceKind::Cylinder => GroupWord::generator("a", m),
            SurfaceKind::Moebius => GroupWord::generator("g", n),
            _ => GroupWord::klein(m, n),
        })
    }

    /// Normal form of a word in the generators of a flat model.
    pub fn flat_normal_form(&self, word: &GroupWord) -> Result<FlatDeck, SurfaceError> {
        self.require_flat()?;
        let mut m = 0i64;
        let mut n = 0i64;
        for l in word.letters() {
            let e = l.exp as i64;
            match (self.kind, l.name.as_str()) {
                (SurfaceKind::Cylinder | SurfaceKind::Torus, "a") => m += e,
                (SurfaceKind::Torus, "b") => n += e,
                (SurfaceKind::Moebius, "g") => n += e,
                (SurfaceKind::Klein, "a") => m += parity(n) as i64 * e,
                (SurfaceKind::Klein, "b") => n += e,
                _ => return Err(SurfaceError::UnknownGenerator(l.name.clone())),
            }
        }
        Ok((m, n))
    }

    /// Maps a cover point to the fundamental domain; returns the domain
    /// point `q` and the deck `D` with `D(q) = p`.
    pub fn project(&self, p: Vec2) -> Result<(Vec2, FlatDeck), SurfaceError> {
        self.require_flat()?;
        self.check_domain(p)?;
        let d = match self.kind {
            SurfaceKind::Plane => (0, 0),
            SurfaceKind::Cylinder => (p.x.floor() as i64, 0),
            SurfaceKind::Torus => (p.x.floor() as i64, p.y.floor() as i64),
            SurfaceKind::Moebius => (0, p.x.floor() as i64),
            SurfaceKind::Klein => {
                let n = p.y.floor() as i64;
                let m = if n.rem_euclid(2) == 0 { p.x.floor() } else { p.x.ceil() };
                (m as i64, n)
            }
            SurfaceKind::HyperbolicCustom => unreachable!(),
        };
        let q = self.flat_deck(d)?.inverse().apply_unchecked(p);
        Ok((q, d))
    }

    /// Deck `D` minimizing `|D(q) − near|`, found in closed form from the
    /// rounded coordinate offsets.
    pub fn nearest_image(&self, q: Vec2, near: Vec2) -> Result<(Vec2, FlatDeck), SurfaceError> {
        self.require_flat()?;
        let mut best: Option<(f64, Vec2, FlatDeck)> = None;
        let mut consider = |d: FlatDeck| -> Result<(), SurfaceError> {
            let img = self.flat_deck(d)?.apply_unchecked(q);
            let dist = img.dist(near);
            if best.map_or(true, |(b, _, _)| dist < b) {
                best = Some((dist, img, d));
            }
            Ok(())
        };
        match self.kind {
            SurfaceKind::Plane => consider((0, 0))?,
            SurfaceKind::Cylinder => consider(((near.x - q.x).round() as i64, 0))?,
            SurfaceKind::Torus => consider(((near.x - q.x).round() as i64, (near.y - q.y).round() as i64))?,
            SurfaceKind::Moebius => {
                let n0 = (near.x - q.x).round() as i64;
                for n in n0 - 1..=n0 + 1 {
                    consider((0, n))?;
                }
            }
            SurfaceKind::Klein => {
                let n0 = (near.y - q.y).round() as i64;
                for n in n0 - 1..=n0 + 1 {
                    let m = (near.x - parity(n) * q.x).round() as i64;
                    consider((m, n))?;
                }
            }
            SurfaceKind::HyperbolicCustom => unreachable!(),
        }
        let (_, img, d) = best.unwrap();
        Ok((img, d))
    }

    /// The deck `D` with `D(from) = to`, if one exists within `tol`.
    pub fn identify_deck(&self, from: Vec2, to: Vec2, tol: f64) -> Result<Option<FlatDeck>, SurfaceError> {
        self.require_flat()?;
        let (q, d_from) = self.project(from)?;
        let (img, d_to) = self.nearest_image(q, to)?;
        if img.dist(to) > tol {
            return Ok(None);
        }
        let t = self.flat_deck(d_to)?.compose(&self.flat_deck(d_from)?.inverse())?;
        Ok(Some(self.deck_coordinates(&t).expect("flat deck composition")))
    }

    /// Reads normal form coordinates off a flat deck isometry.
    pub fn deck_coordinates(&self, t: &Isometry) -> Option<FlatDeck> {
        let Isometry::Euclidean { t: v, .. } = t else {
            return None;
        };
        if !self.kind.is_flat() {
            return None;
        }
        let d = match self.kind {
            SurfaceKind::Moebius => (0, v.x.round() as i64),
            _ => (v.x.round() as i64, v.y.round() as i64),
        };
        let cand = self.flat_deck(d).ok()?;
        cand.approx_eq(t).ok()?.then_some(d)
    }

    /// Reversibility of the free homotopy class of `word`.
    pub fn reversibility(&self, word: &GroupWord) -> Result<Reversibility, SurfaceError> {
        match self.kind {
            SurfaceKind::Klein => {
                let (m, n) = self.flat_normal_form(word)?;
                Ok(crate::group::klein_reversible(m, n))
            }
            SurfaceKind::Moebius | SurfaceKind::HyperbolicCustom if self.free => Ok(crate::group::free_group_reversible(word, |n| self.sign_of(n))?),
            _ => Ok(Reversibility::Unsupported),
        }
    }
}
