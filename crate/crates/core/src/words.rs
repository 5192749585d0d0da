//! Generator alphabets, words over them, and the packed byte layout used on disk.
//!
//! Letters are small integers. The positive generators come first, in base-id
//! order (σ_1..σ_{n-1} for Artin, a_{p,q} in co-lex order of (p,q) for dual),
//! followed by their inverses in the same order, so `inverse(x)` is `x ± |S|/2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_STRANDS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Artin,
    Dual,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Artin => "artin",
            Kind::Dual => "dual",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            Kind::Artin => 0,
            Kind::Dual => 1,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Kind> {
        match code {
            0 => Some(Kind::Artin),
            1 => Some(Kind::Dual),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A letter decoded into its generator and exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// σ_i^sign, 1 ≤ i ≤ n-1.
    Sigma { i: usize, sign: i8 },
    /// a_{p,q}^sign, 1 ≤ p < q ≤ n.
    Band { p: usize, q: usize, sign: i8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    n: u8,
    kind: Kind,
}

impl Alphabet {
    pub fn new(n: usize, kind: Kind) -> Result<Self> {
        if !(2..=MAX_STRANDS).contains(&n) {
            return Err(Error::StrandCount(n));
        }
        Ok(Alphabet { n: n as u8, kind })
    }

    pub fn artin(n: usize) -> Result<Self> {
        Self::new(n, Kind::Artin)
    }

    pub fn dual(n: usize) -> Result<Self> {
        Self::new(n, Kind::Dual)
    }

    #[inline]
    pub fn strands(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Number of positive generators.
    #[inline]
    pub fn half(&self) -> usize {
        let n = self.strands();
        match self.kind {
            Kind::Artin => n - 1,
            Kind::Dual => n * (n - 1) / 2,
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        2 * self.half()
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> {
        0..self.size() as u8
    }

    #[inline]
    pub fn inverse(&self, x: u8) -> u8 {
        let h = self.half() as u8;
        if x < h {
            x + h
        } else {
            x - h
        }
    }

    #[inline]
    pub fn sign(&self, x: u8) -> i8 {
        if (x as usize) < self.half() {
            1
        } else {
            -1
        }
    }

    pub fn check(&self, x: u8) -> Result<()> {
        if (x as usize) < self.size() {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange { letter: x, size: self.size() })
        }
    }

    pub fn generator(&self, x: u8) -> Generator {
        let sign = self.sign(x);
        let base = (x as usize) % self.half();
        match self.kind {
            Kind::Artin => Generator::Sigma { i: base + 1, sign },
            Kind::Dual => {
                let (p, q) = dual_pair(base);
                Generator::Band { p, q, sign }
            }
        }
    }

    /// σ_i^sign as a letter of an Artin alphabet.
    pub fn sigma(&self, i: usize, sign: i8) -> u8 {
        debug_assert_eq!(self.kind, Kind::Artin);
        debug_assert!(i >= 1 && i < self.strands());
        let base = (i - 1) as u8;
        if sign > 0 {
            base
        } else {
            base + self.half() as u8
        }
    }

    /// a_{p,q}^sign as a letter of a dual alphabet; (p,q) may be given in either order.
    pub fn band(&self, p: usize, q: usize, sign: i8) -> u8 {
        debug_assert_eq!(self.kind, Kind::Dual);
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        debug_assert!(p >= 1 && q <= self.strands() && p < q);
        let base = dual_index(p, q) as u8;
        if sign > 0 {
            base
        } else {
            base + self.half() as u8
        }
    }

    /// Letters per packed byte: the largest k with |S|^k ≤ 256.
    pub fn letters_per_byte(&self) -> usize {
        let s = self.size();
        let mut k = 0;
        let mut cap = 1usize;
        while cap * s <= 256 {
            cap *= s;
            k += 1;
        }
        k
    }

    pub fn packed_len(&self, len: usize) -> usize {
        len.div_ceil(self.letters_per_byte())
    }

    /// The Artin alphabet on the same strands.
    pub fn artin_counterpart(&self) -> Alphabet {
        Alphabet { n: self.n, kind: Kind::Artin }
    }

    /// Artin letters spelling `x`; a single letter for Artin alphabets.
    pub fn artin_expansion(&self, x: u8) -> Vec<u8> {
        match self.generator(x) {
            Generator::Sigma { .. } => vec![x],
            Generator::Band { p, q, sign } => {
                let artin = self.artin_counterpart();
                let mut out = Vec::with_capacity(2 * (q - p) - 1);
                for i in p..q - 1 {
                    out.push(artin.sigma(i, 1));
                }
                out.push(artin.sigma(q - 1, sign));
                for i in (p..q - 1).rev() {
                    out.push(artin.sigma(i, -1));
                }
                out
            }
        }
    }

    pub fn format_letter(&self, x: u8) -> String {
        match self.generator(x) {
            Generator::Sigma { i, sign } if sign > 0 => format!("s{i}"),
            Generator::Sigma { i, .. } => format!("s{i}^-1"),
            Generator::Band { p, q, sign } if sign > 0 => format!("a{p}{q}"),
            Generator::Band { p, q, .. } => format!("a{p}{q}^-1"),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}-{}", self.n, self.kind)
    }
}

/// Co-lex position of the pair (p,q), 1 ≤ p < q.
#[inline]
pub fn dual_index(p: usize, q: usize) -> usize {
    (q - 1) * (q - 2) / 2 + (p - 1)
}

pub fn dual_pair(index: usize) -> (usize, usize) {
    let mut q = 2;
    while dual_index(1, q + 1) <= index {
        q += 1;
    }
    (index - dual_index(1, q) + 1, q)
}

/// A word over an alphabet, carrying the number ω of geodesic words for its braid
/// when it sits in a representative set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u8>,
    pub omega: u64,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<u8>) -> Result<Self> {
        for &x in &letters {
            alphabet.check(x)?;
        }
        Ok(Word { alphabet, letters, omega: 1 })
    }

    pub(crate) fn from_raw(alphabet: Alphabet, letters: Vec<u8>, omega: u64) -> Self {
        Word { alphabet, letters, omega }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word { alphabet, letters: Vec::new(), omega: 1 }
    }

    pub fn with_omega(mut self, omega: u64) -> Self {
        self.omega = omega;
        self
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self · x`, keeping ω.
    pub fn extended(&self, x: u8) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.extend_from_slice(&self.letters);
        letters.push(x);
        Word { alphabet: self.alphabet, letters, omega: self.omega }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { alphabet: self.alphabet, letters, omega: 1 }
    }

    pub fn pack(&self) -> Vec<u8> {
        pack_letters(self.alphabet, &self.letters)
    }

    pub fn unpack(alphabet: Alphabet, bytes: &[u8], len: usize) -> Result<Word> {
        Ok(Word { alphabet, letters: unpack_letters(alphabet, bytes, len)?, omega: 1 })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (k, &x) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.alphabet.format_letter(x))?;
        }
        Ok(())
    }
}

/// Replaces each dual letter by its Artin spelling
/// a_{p,q} = σ_p…σ_{q-2} σ_{q-1} σ_{q-2}^{-1}…σ_p^{-1}.
pub fn dual_to_artin(w: &Word) -> Result<Word> {
    if w.alphabet.kind != Kind::Dual {
        return Err(Error::AlphabetMismatch(format!("expected a dual word, got {}", w.alphabet)));
    }
    let letters = w.letters.iter().flat_map(|&x| w.alphabet.artin_expansion(x)).collect();
    Ok(Word { alphabet: w.alphabet.artin_counterpart(), letters, omega: w.omega })
}

pub fn pack_letters(alphabet: Alphabet, letters: &[u8]) -> Vec<u8> {
    let k = alphabet.letters_per_byte();
    let base = alphabet.size() as u32;
    letters
        .chunks(k)
        .map(|chunk| {
            let mut value = 0u32;
            for &x in chunk.iter().rev() {
                value = value * base + x as u32;
            }
            value as u8
        })
        .collect()
}

pub fn unpack_letters(alphabet: Alphabet, bytes: &[u8], len: usize) -> Result<Vec<u8>> {
    let expected = alphabet.packed_len(len);
    if bytes.len() != expected {
        return Err(Error::PackedLength { expected, actual: bytes.len() });
    }
    let k = alphabet.letters_per_byte();
    let base = alphabet.size() as u32;
    let mut out = Vec::with_capacity(len);
    for (offset, &byte) in bytes.iter().enumerate() {
        let slots = k.min(len - offset * k);
        if (byte as u32) >= base.pow(slots as u32) {
            return Err(Error::InvalidPackedByte { offset, value: byte, slots });
        }
        let mut value = byte as u32;
        for _ in 0..slots {
            out.push((value % base) as u8);
            value /= base;
        }
    }
    Ok(out)
}
