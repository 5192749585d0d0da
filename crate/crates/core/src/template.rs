//! Braid templates: the underlying permutation together with all pairwise
//! linking numbers. The template of `β·x` depends only on the template of `β`
//! and the letter `x`, which is what lets a sphere be split into independent
//! pieces.

use std::cmp::Ordering;
use std::fmt;

use crate::words::{Alphabet, Generator, Word};

/// A permutation of {1..n}; `images[k-1]` is the start position of the strand
/// ending at position k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n as u8).collect() }
    }

    /// Builds from 1-based images. Panics if they do not form a bijection.
    pub fn from_images(images: Vec<u8>) -> Self {
        assert!(Self::is_bijection(&images), "not a permutation: {images:?}");
        Permutation { images }
    }

    pub fn try_from_images(images: Vec<u8>) -> Option<Self> {
        Self::is_bijection(&images).then_some(Permutation { images })
    }

    fn is_bijection(images: &[u8]) -> bool {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        images.iter().all(|&v| {
            let v = v as usize;
            (1..=n).contains(&v) && !std::mem::replace(&mut seen[v], true)
        })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    /// Builds a permutation from disjoint cycles written with 1-based points.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Self {
        let mut images: Vec<u8> = (1..=n as u8).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                images[a as usize - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.len()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = (k + 1) as u8;
        }
        Permutation { images }
    }

    /// `self ∘ other`: k ↦ self(other(k)).
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation { images: other.images.iter().map(|&v| self.images[v as usize - 1]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    /// Co-lex order on image tuples: the last differing position decides.
    pub fn colex_cmp(&self, other: &Permutation) -> Ordering {
        self.images.iter().rev().cmp(other.images.iter().rev())
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, fixed points omitted; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        let mut seen = vec![false; n + 1];
        let mut any = false;
        for start in 1..=n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut k = start;
            let mut first = true;
            while !seen[k] {
                seen[k] = true;
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{k}")?;
                first = false;
                k = self.apply(k);
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Position of ℓ_{i,j} in co-lex pair order; the pair may come in either order.
#[inline]
pub fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(i >= 1 && i < j);
    (j - 1) * (j - 2) / 2 + (i - 1)
}

/// Pairs (i,j), i<j ≤ n, in co-lex order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=n).flat_map(|j| (1..j).map(move |i| (i, j)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Template {
    perm: Permutation,
    links: Vec<i32>,
}

impl Template {
    pub fn identity(n: usize) -> Self {
        Template { perm: Permutation::identity(n), links: vec![0; n * (n - 1) / 2] }
    }

    pub fn new(perm: Permutation, links: Vec<i32>) -> Self {
        let n = perm.len();
        assert_eq!(links.len(), n * (n - 1) / 2, "wrong number of linking numbers");
        Template { perm, links }
    }

    #[inline]
    pub fn strands(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn links(&self) -> &[i32] {
        &self.links
    }

    /// ℓ_{i,j}, symmetric in its arguments.
    #[inline]
    pub fn link(&self, i: usize, j: usize) -> i32 {
        self.links[pair_index(i, j)]
    }

    /// `self ∗ x`: the template of `β·x` for any β with template `self`.
    pub fn extend(&self, alphabet: Alphabet, x: u8) -> Template {
        let n = self.strands();
        let letter_perm = perm_of_letter(alphabet, x);
        let perm = self.perm.compose(&letter_perm);
        let back = self.perm.inverse();
        let mut links = self.links.clone();
        for (slot, (i, j)) in pairs(n).enumerate() {
            let (a, b) = (back.apply(i), back.apply(j));
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            links[slot] += linking_of_letter(alphabet, x, a, b);
        }
        Template { perm, links }
    }

    /// Canonical bytes: n permutation images, then each link as little-endian i32.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.strands() + 4 * self.links.len());
        out.extend_from_slice(self.perm.images());
        for &l in &self.links {
            out.extend_from_slice(&l.to_le_bytes());
        }
        out
    }

    pub fn decode(n: usize, bytes: &[u8]) -> Option<Template> {
        let m = n * (n - 1) / 2;
        if bytes.len() != n + 4 * m {
            return None;
        }
        let perm = Permutation::try_from_images(bytes[..n].to_vec())?;
        let links = bytes[n..]
            .chunks_exact(4)
            .map(|c| i32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        Some(Template { perm, links })
    }

    /// Total order: permutations co-lex, then links lexicographically.
    pub fn order(&self, other: &Template) -> Ordering {
        self.perm.colex_cmp(&other.perm).then_with(|| self.links.cmp(&other.links))
    }
}

impl Ord for Template {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order(other)
    }
}

impl PartialOrd for Template {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.perm)?;
        for l in &self.links {
            write!(f, ",{l}")?;
        }
        f.write_str(")")
    }
}

pub fn perm_of_letter(alphabet: Alphabet, x: u8) -> Permutation {
    let n = alphabet.strands();
    match alphabet.generator(x) {
        Generator::Sigma { i, .. } => Permutation::transposition(n, i, i + 1),
        Generator::Band { p, q, .. } => Permutation::transposition(n, p, q),
    }
}

/// ℓ_{i,j} of a single letter, for 1 ≤ i < j ≤ n.
pub fn linking_of_letter(alphabet: Alphabet, x: u8, i: usize, j: usize) -> i32 {
    debug_assert!(i < j);
    match alphabet.generator(x) {
        Generator::Sigma { i: k, sign } => {
            if i == k && j == k + 1 {
                sign as i32
            } else {
                0
            }
        }
        Generator::Band { p, q, sign } => {
            if i == p && j == q {
                sign as i32
            } else if i == p && j < q {
                1
            } else if p < i && j == q {
                -1
            } else {
                0
            }
        }
    }
}

pub fn template_of_word(w: &Word) -> Template {
    let a = w.alphabet();
    w.letters().iter().fold(Template::identity(a.strands()), |t, &x| t.extend(a, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_permutations() {
        let a4 = Alphabet::artin(4).unwrap();
        assert_eq!(perm_of_letter(a4, a4.sigma(2, -1)), Permutation::from_cycles(4, &[&[2, 3]]));
        let d4 = Alphabet::dual(4).unwrap();
        assert_eq!(perm_of_letter(d4, d4.band(1, 4, 1)), Permutation::from_cycles(4, &[&[1, 4]]));

        let a3 = Alphabet::artin(3).unwrap();
        let w = Word::new(a3, vec![a3.sigma(1, 1), a3.sigma(2, -1), a3.sigma(1, 1), a3.sigma(2, 1)])
            .unwrap();
        assert_eq!(template_of_word(&w).perm().images(), &[3, 1, 2]);
    }

    #[test]
    fn letter_linking_numbers() {
        let d4 = Alphabet::dual(4).unwrap();
        assert_eq!(linking_of_letter(d4, d4.band(1, 4, -1), 1, 4), -1);
        assert_eq!(linking_of_letter(d4, d4.band(1, 4, 1), 1, 3), 1);
        assert_eq!(linking_of_letter(d4, d4.band(1, 4, 1), 2, 4), -1);
        assert_eq!(linking_of_letter(d4, d4.band(1, 4, 1), 2, 3), 0);
        let a3 = Alphabet::artin(3).unwrap();
        assert_eq!(linking_of_letter(a3, a3.sigma(1, 1), 2, 3), 0);
        assert_eq!(linking_of_letter(a3, a3.sigma(1, -1), 1, 2), -1);
    }

    #[test]
    fn extension_by_inverse_band() {
        let d3 = Alphabet::dual(3).unwrap();
        let perm = Permutation::from_cycles(3, &[&[1, 3, 2]]);
        let t = Template::new(perm, vec![5, 7, 11]);
        let u = t.extend(d3, d3.band(1, 3, -1));
        assert_eq!(u.perm(), &Permutation::from_cycles(3, &[&[1, 2]]));
        assert_eq!(u.links(), &[4, 8, 10]);
    }

    #[test]
    fn single_crossing() {
        let a3 = Alphabet::artin(3).unwrap();
        let t = Template::identity(3).extend(a3, a3.sigma(1, 1));
        assert_eq!(t.perm().images(), &[2, 1, 3]);
        assert_eq!(t.links(), &[1, 0, 0]);
    }

    #[test]
    fn four_strand_example() {
        let a4 = Alphabet::artin(4).unwrap();
        let w = Word::new(a4, vec![a4.sigma(1, 1), a4.sigma(2, -1)]).unwrap();
        let t = template_of_word(&w);
        assert_eq!(t.perm(), &Permutation::from_cycles(4, &[&[1, 2, 3]]));
        assert_eq!(t.links(), &[1, -1, 0, 0, 0, 0]);
        assert_eq!(t.to_string(), "((1 2 3),1,-1,0,0,0,0)");
    }

    #[test]
    fn empty_word_has_identity_template() {
        let a = Alphabet::dual(5).unwrap();
        assert_eq!(template_of_word(&Word::empty(a)), Template::identity(5));
        assert!(Template::identity(5).perm().is_identity());
    }

    #[test]
    fn encoding_round_trip() {
        let t = Template::new(Permutation::from_cycles(4, &[&[1, 2, 3]]), vec![1, -1, 0, 0, -300, 7]);
        let bytes = t.encode();
        assert_eq!(bytes.len(), 4 + 24);
        assert_eq!(&bytes[..4], &[2, 3, 1, 4]);
        assert_eq!(&bytes[4..8], &1i32.to_le_bytes());
        assert_eq!(Template::decode(4, &bytes), Some(t));
        assert_eq!(Template::decode(4, &bytes[1..]), None);
        let mut bad = bytes.clone();
        bad[0] = 3;
        assert_eq!(Template::decode(4, &bad), None);
    }

    #[test]
    fn colex_permutation_order() {
        let c = |cyc: &[u8]| Permutation::from_cycles(4, &[cyc]);
        let order = [c(&[2, 3, 4]), c(&[2, 4, 3]), c(&[1, 2, 3]), c(&[1, 3, 2])];
        for w in order.windows(2) {
            assert_eq!(w[0].colex_cmp(&w[1]), Ordering::Less, "{} < {}", w[0], w[1]);
        }
    }
}
