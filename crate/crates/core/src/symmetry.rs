//! Stable word maps and the finite group they generate on templates.
//!
//! Artin words carry three commuting involutions: reversal-inversion (`inv`),
//! letterwise inversion (`theta`) and the Garside flip σ_k ↦ σ_{n-k} (`flip`).
//! Dual words carry `inv` and the rotation a_{p,q} ↦ a_{p+1,q+1} (indices mod n),
//! of order n. Template images are computed from closed forms, never by
//! conjugating words.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::template::{pairs, Permutation, Template};
use crate::words::{Alphabet, Generator, Kind, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Artin { inv: bool, theta: bool, flip: bool },
    Dual { inv: bool, rotation: u8 },
}

impl Symmetry {
    pub fn identity(kind: Kind) -> Self {
        match kind {
            Kind::Artin => Symmetry::Artin { inv: false, theta: false, flip: false },
            Kind::Dual => Symmetry::Dual { inv: false, rotation: 0 },
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(
            self,
            Symmetry::Artin { inv: false, theta: false, flip: false }
                | Symmetry::Dual { inv: false, rotation: 0 }
        )
    }

    pub fn kind(&self) -> Kind {
        match self {
            Symmetry::Artin { .. } => Kind::Artin,
            Symmetry::Dual { .. } => Kind::Dual,
        }
    }

    pub fn inverse(&self, n: usize) -> Self {
        match *self {
            Symmetry::Dual { inv, rotation } => {
                Symmetry::Dual { inv, rotation: ((n - rotation as usize) % n) as u8 }
            }
            artin => artin,
        }
    }

    fn check(&self, alphabet: Alphabet) -> Result<()> {
        match (self, alphabet.kind()) {
            (Symmetry::Artin { theta: false, flip: false, .. }, _) => Ok(()),
            (Symmetry::Artin { .. }, Kind::Artin) => Ok(()),
            (Symmetry::Dual { rotation: 0, .. }, _) => Ok(()),
            (Symmetry::Dual { .. }, Kind::Dual) => Ok(()),
            (Symmetry::Artin { .. }, Kind::Dual) => {
                Err(Error::MapKind { map: "theta/flip", kind: "dual" })
            }
            (Symmetry::Dual { .. }, Kind::Artin) => {
                Err(Error::MapKind { map: "rotation", kind: "Artin" })
            }
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match *self {
            Symmetry::Artin { inv, theta, flip } => {
                if inv {
                    parts.push("inv".to_string());
                }
                if theta {
                    parts.push("theta".to_string());
                }
                if flip {
                    parts.push("flip".to_string());
                }
            }
            Symmetry::Dual { inv, rotation } => {
                if inv {
                    parts.push("inv".to_string());
                }
                if rotation > 0 {
                    parts.push(format!("rot^{rotation}"));
                }
            }
        }
        if parts.is_empty() {
            f.write_str("id")
        } else {
            f.write_str(&parts.join("∘"))
        }
    }
}

/// The group elements in their fixed enumeration order, identity first.
///
/// For n = 2 every extra generator acts trivially and the group is {id, inv}.
pub fn group(alphabet: Alphabet) -> Vec<Symmetry> {
    let n = alphabet.strands();
    match alphabet.kind() {
        Kind::Artin if n == 2 => vec![
            Symmetry::Artin { inv: false, theta: false, flip: false },
            Symmetry::Artin { inv: true, theta: false, flip: false },
        ],
        Kind::Artin => (0..8u8)
            .map(|b| Symmetry::Artin { inv: b & 1 != 0, theta: b & 2 != 0, flip: b & 4 != 0 })
            .collect(),
        Kind::Dual => {
            let rotations = if n == 2 { 1 } else { n as u8 };
            (0..rotations)
                .flat_map(|rotation| [false, true].map(|inv| Symmetry::Dual { inv, rotation }))
                .collect()
        }
    }
}

/// [k]_n: 0 ↦ n, n+1 ↦ 1, otherwise k.
#[inline]
fn wrap(k: usize, n: usize) -> usize {
    if k == 0 {
        n
    } else if k == n + 1 {
        1
    } else {
        k
    }
}

fn rotate_letter(alphabet: Alphabet, x: u8) -> u8 {
    let n = alphabet.strands();
    match alphabet.generator(x) {
        Generator::Band { p, q, sign } => alphabet.band(wrap(p + 1, n), wrap(q + 1, n), sign),
        Generator::Sigma { .. } => unreachable!("rotation applied to an Artin letter"),
    }
}

fn flip_letter(alphabet: Alphabet, x: u8) -> u8 {
    let n = alphabet.strands();
    match alphabet.generator(x) {
        Generator::Sigma { i, sign } => alphabet.sigma(n - i, sign),
        Generator::Band { .. } => unreachable!("flip applied to a dual letter"),
    }
}

/// Image of a single letter under the letterwise part of `g` (everything but the reversal).
fn map_letter(g: Symmetry, alphabet: Alphabet, mut x: u8) -> u8 {
    match g {
        Symmetry::Artin { inv, theta, flip } => {
            if flip && alphabet.strands() > 2 {
                x = flip_letter(alphabet, x);
            }
            if theta != inv {
                x = alphabet.inverse(x);
            }
            x
        }
        Symmetry::Dual { inv, rotation } => {
            for _ in 0..rotation {
                x = rotate_letter(alphabet, x);
            }
            if inv {
                x = alphabet.inverse(x);
            }
            x
        }
    }
}

fn reverses(g: Symmetry) -> bool {
    match g {
        Symmetry::Artin { inv, .. } | Symmetry::Dual { inv, .. } => inv,
    }
}

/// Applies `g` to raw letters, writing into `out`.
pub fn map_letters_into(g: Symmetry, alphabet: Alphabet, letters: &[u8], out: &mut Vec<u8>) {
    out.clear();
    if reverses(g) {
        out.extend(letters.iter().rev().map(|&x| map_letter(g, alphabet, x)));
    } else {
        out.extend(letters.iter().map(|&x| map_letter(g, alphabet, x)));
    }
}

/// The image of a word under `g`; ω is carried over unchanged.
pub fn map_word(g: Symmetry, w: &Word) -> Result<Word> {
    let a = w.alphabet();
    g.check(a)?;
    let mut letters = Vec::with_capacity(w.len());
    map_letters_into(g, a, w.letters(), &mut letters);
    Ok(Word::from_raw(a, letters, w.omega))
}

fn inv_template(t: &Template) -> Template {
    let n = t.strands();
    let p = t.perm();
    let links = pairs(n).map(|(i, j)| -t.link(p.apply(i), p.apply(j))).collect();
    Template::new(p.inverse(), links)
}

fn theta_template(t: &Template) -> Template {
    Template::new(t.perm().clone(), t.links().iter().map(|&l| -l).collect())
}

fn flip_template(t: &Template) -> Template {
    let n = t.strands();
    let p = t.perm();
    let images = (1..=n).map(|k| (n + 1 - p.apply(n + 1 - k)) as u8).collect();
    let links = pairs(n).map(|(i, j)| t.link(n + 1 - j, n + 1 - i)).collect();
    Template::new(Permutation::from_images(images), links)
}

// The δ^{-1} factor contributes -1 to every pair that contains the strand
// ending at [1 + π(n)], whichever side of the pair it falls on.
fn rotate_template(t: &Template) -> Template {
    let n = t.strands();
    let p = t.perm();
    let images = (1..=n).map(|k| wrap(1 + p.apply(wrap(k - 1, n)), n) as u8).collect();
    let last = wrap(1 + p.apply(n), n);
    let links = pairs(n)
        .map(|(i, j)| {
            t.link(wrap(i - 1, n), wrap(j - 1, n)) + (i == 1) as i32
                - (last == i || last == j) as i32
        })
        .collect();
    Template::new(Permutation::from_images(images), links)
}

/// The template map induced by `g`.
pub fn map_template(g: Symmetry, kind: Kind, t: &Template) -> Result<Template> {
    if g.kind() != kind && !g.is_identity() {
        return Err(Error::MapKind {
            map: if g.kind() == Kind::Artin { "theta/flip" } else { "rotation" },
            kind: kind.name(),
        });
    }
    Ok(apply_template(g, t))
}

pub(crate) fn apply_template(g: Symmetry, t: &Template) -> Template {
    let n = t.strands();
    let mut out = t.clone();
    match g {
        Symmetry::Artin { inv, theta, flip } => {
            if flip && n > 2 {
                out = flip_template(&out);
            }
            if theta {
                out = theta_template(&out);
            }
            if inv {
                out = inv_template(&out);
            }
        }
        Symmetry::Dual { inv, rotation } => {
            for _ in 0..rotation {
                out = rotate_template(&out);
            }
            if inv {
                out = inv_template(&out);
            }
        }
    }
    out
}

/// Symmetry machinery bound to one alphabet.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    alphabet: Alphabet,
    elements: Vec<Symmetry>,
}

impl SymmetryGroup {
    pub fn new(alphabet: Alphabet) -> Self {
        SymmetryGroup { alphabet, elements: group(alphabet) }
    }

    /// The group {id}: every template is its own class.
    pub fn trivial(alphabet: Alphabet) -> Self {
        SymmetryGroup { alphabet, elements: vec![Symmetry::identity(alphabet.kind())] }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn elements(&self) -> &[Symmetry] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The distinct images of `t`, sorted by template order.
    pub fn orbit(&self, t: &Template) -> Vec<Template> {
        let mut out: Vec<Template> = self.elements.iter().map(|&g| apply_template(g, t)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// The minimal element of the orbit and the first group element reaching it.
    pub fn reduce(&self, t: &Template) -> (Template, Symmetry) {
        let mut best = (t.clone(), self.elements[0]);
        for &g in &self.elements[1..] {
            let image = apply_template(g, t);
            if image.order(&best.0) == Ordering::Less {
                best = (image, g);
            }
        }
        best
    }

    pub fn is_reduced(&self, t: &Template) -> bool {
        self.elements[1..].iter().all(|&g| apply_template(g, t).order(t) != Ordering::Less)
    }
}

/// Minimal element of the orbit of `t` with one witness g, g(t) = red(t).
pub fn reduce(alphabet: Alphabet, t: &Template) -> (Template, Symmetry) {
    SymmetryGroup::new(alphabet).reduce(t)
}

pub fn orbit(alphabet: Alphabet, t: &Template) -> Vec<Template> {
    SymmetryGroup::new(alphabet).orbit(t)
}

pub fn template_compare(a: &Template, b: &Template) -> Ordering {
    a.order(b)
}
