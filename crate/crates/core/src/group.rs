//! Words in surface group generators: free reduction, the Klein bottle
//! normal form `a^m b^n`, primitive roots in free groups, and reversibility.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WordError {
    #[error("cannot parse word token `{0}`")]
    BadToken(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub name: String,
    /// `+1` or `-1`.
    pub exp: i8,
}

impl Letter {
    pub fn new(name: impl Into<String>, exp: i8) -> Self {
        Letter { name: name.into(), exp }
    }

    pub fn inverse(&self) -> Letter {
        Letter::new(self.name.clone(), -self.exp)
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.name == other.name && self.exp == -other.exp
    }
}

/// A freely reduced word; letters compose left to right as maps, so the
/// word `s1 s2` acts as `s1 ∘ s2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = GroupWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn generator(name: &str, exp: i64) -> Self {
        let e = if exp < 0 { -1 } else { 1 };
        GroupWord::from_letters((0..exp.unsigned_abs()).map(|_| Letter::new(name, e)))
    }

    /// Parses `"a b^-1 a^3"`, `"a·b"`, `"a*b"`; `""`, `"1"` and `"e"` are the identity.
    pub fn parse(s: &str) -> Result<Self, WordError> {
        let mut w = GroupWord::identity();
        for tok in s.split(|c: char| c.is_whitespace() || c == '·' || c == '*' || c == '.') {
            if tok.is_empty() || tok == "1" || tok == "e" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| WordError::BadToken(tok.into()))?),
                None => (tok, 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(WordError::BadToken(tok.into()));
            }
            let e = if exp < 0 { -1 } else { 1 };
            for _ in 0..exp.unsigned_abs() {
                w.push(Letter::new(name, e));
            }
        }
        Ok(w)
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last().is_some_and(|t| t.cancels(&l)) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.clone());
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    pub fn conjugate_by(&self, x: &GroupWord) -> GroupWord {
        x.mul(self).mul(&x.inverse())
    }

    /// Product of `sign(letter)` over the letters.
    pub fn orientation(&self, sign_of: impl Fn(&str) -> Option<i32>) -> Result<i32, WordError> {
        self.letters.iter().try_fold(1, |acc, l| {
            sign_of(&l.name)
                .map(|s| acc * s)
                .ok_or_else(|| WordError::UnknownGenerator(l.name.clone()))
        })
    }

    /// Splits the word as `u · core · u⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduction(&self) -> (GroupWord, GroupWord) {
        let l = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < l.len() && l[k].cancels(&l[l.len() - 1 - k]) {
            k += 1;
        }
        let prefix = GroupWord {
            letters: l[..k].to_vec(),
        };
        let core = GroupWord {
            letters: l[k..l.len() - k].to_vec(),
        };
        (prefix, core)
    }

    /// Primitive root `r` and exponent `k` with `self = r^k`, `k ≥ 1`, in
    /// the free group on the letters. The identity returns itself with `k = 1`.
    pub fn primitive_root(&self) -> (GroupWord, u32) {
        if self.is_empty() {
            return (GroupWord::identity(), 1);
        }
        let (prefix, core) = self.cyclic_reduction();
        let n = core.len();
        let period = (1..=n)
            .filter(|p| n % p == 0)
            .find(|&p| (0..n).all(|i| core.letters[i] == core.letters[i % p]))
            .unwrap_or(n);
        let root_core = GroupWord {
            letters: core.letters[..period].to_vec(),
        };
        (root_core.conjugate_by(&prefix), (n / period) as u32)
    }

    /// Normal form `(m, n)` with the element equal to `a^m b^n` in the Klein
    /// bottle group, using `b a = a⁻¹ b`.
    pub fn klein_normal_form(&self) -> Result<(i64, i64), WordError> {
        let (mut m, mut n) = (0i64, 0i64);
        for l in &self.letters {
            match l.name.as_str() {
                "a" => m += if n.rem_euclid(2) == 0 { l.exp as i64 } else { -(l.exp as i64) },
                "b" => n += l.exp as i64,
                other => return Err(WordError::UnknownGenerator(other.into())),
            }
        }
        Ok((m, n))
    }

    pub fn klein(m: i64, n: i64) -> GroupWord {
        GroupWord::generator("a", m).mul(&GroupWord::generator("b", n))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == *l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let e = run as i64 * l.exp as i64;
            if e == 1 {
                write!(f, "{}", l.name)?;
            } else {
                write!(f, "{}^{}", l.name, e)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Outcome of a reversibility decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reversibility {
    Reversible,
    NonReversible,
    Unsupported,
}

impl Reversibility {
    fn from_bool(b: bool) -> Self {
        if b {
            Reversibility::Reversible
        } else {
            Reversibility::NonReversible
        }
    }
}

/// Klein bottle: `a^m b^n` is reversible iff it reverses orientation
/// (`n` odd) or `m = 0`.
pub fn klein_reversible(m: i64, n: i64) -> Reversibility {
    Reversibility::from_bool(n.rem_euclid(2) == 1 || m == 0)
}

/// Free group with orientation character `sign_of`: an orientation
/// preserving element is reversible iff its primitive root reverses
/// orientation. Orientation reversing elements are trivially reversible,
/// and so is the identity whenever some generator reverses orientation.
pub fn free_group_reversible(word: &GroupWord, sign_of: impl Fn(&str) -> Option<i32> + Copy) -> Result<Reversibility, WordError> {
    if word.orientation(sign_of)? == -1 {
        return Ok(Reversibility::Reversible);
    }
    if word.is_empty() {
        return Ok(Reversibility::Reversible);
    }
    let (root, _) = word.primitive_root();
    Ok(Reversibility::from_bool(root.orientation(sign_of)? == -1))
}
