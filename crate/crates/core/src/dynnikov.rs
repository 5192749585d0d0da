//! Dynnikov coordinates: the action of braid words on Z^{2n}, starting from
//! the base point (0,1,…,0,1). Two words are equivalent exactly when their
//! coordinates agree, which makes this the equality test for braids.
//!
//! All arithmetic is checked; overflow surfaces as
//! [`Error::CoordinateOverflow`] with the offending (Artin) word position.

use std::fmt;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Kind, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynnikovCoords {
    coords: Vec<i64>,
}

impl DynnikovCoords {
    pub fn base(n: usize) -> Self {
        let mut coords = vec![0; 2 * n];
        for b in coords.iter_mut().skip(1).step_by(2) {
            *b = 1;
        }
        DynnikovCoords { coords }
    }

    pub fn from_vec(coords: Vec<i64>) -> Self {
        assert!(coords.len() >= 4 && coords.len() % 2 == 0, "need 2n coordinates with n ≥ 2");
        DynnikovCoords { coords }
    }

    pub fn strands(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.coords
    }

    /// Applies σ_i^sign in place. `position` only labels the error.
    pub fn apply(&mut self, i: usize, sign: i8, position: usize) -> Result<()> {
        let k = 2 * (i - 1);
        let q = [self.coords[k], self.coords[k + 1], self.coords[k + 2], self.coords[k + 3]];
        let r = apply_sigma(q, sign).ok_or(Error::CoordinateOverflow { position })?;
        self.coords[k..k + 4].copy_from_slice(&r);
        Ok(())
    }

    /// Applies one Artin letter.
    pub fn apply_letter(&mut self, artin: Alphabet, x: u8, position: usize) -> Result<()> {
        let h = artin.half() as u8;
        let (i, sign) = if x < h { (x as usize + 1, 1) } else { ((x - h) as usize + 1, -1) };
        self.apply(i, sign, position)
    }
}

impl fmt::Display for DynnikovCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[inline]
fn pos(x: i64) -> i64 {
    x.max(0)
}

#[inline]
fn neg(x: i64) -> i64 {
    x.min(0)
}

/// The action of σ^{±1} on one block (x₁,y₁,x₂,y₂). `None` on overflow.
pub fn apply_sigma(q: [i64; 4], sign: i8) -> Option<[i64; 4]> {
    let [x1, y1, x2, y2] = q;
    if sign > 0 {
        let t1 = x1.checked_sub(neg(y1))?.checked_sub(x2)?.checked_add(pos(y2))?;
        let a1 = x1.checked_add(pos(y1))?.checked_add(pos(pos(y2).checked_sub(t1)?))?;
        let b1 = y2.checked_sub(pos(t1))?;
        let a2 = x2.checked_add(neg(y2))?.checked_add(neg(neg(y1).checked_add(t1)?))?;
        let b2 = y1.checked_add(pos(t1))?;
        Some([a1, b1, a2, b2])
    } else {
        let t2 = x1.checked_add(neg(y1))?.checked_sub(x2)?.checked_sub(pos(y2))?;
        let a1 = x1.checked_sub(pos(y1))?.checked_sub(pos(pos(y2).checked_add(t2)?))?;
        let b1 = y2.checked_add(neg(t2))?;
        let a2 = x2.checked_sub(neg(y2))?.checked_sub(neg(neg(y1).checked_sub(t2)?))?;
        let b2 = y1.checked_sub(neg(t2))?;
        Some([a1, b1, a2, b2])
    }
}

/// Precomputed Artin spellings of every letter, so dual words are translated
/// once per letter rather than once per use.
#[derive(Debug, Clone)]
pub struct LetterAction {
    alphabet: Alphabet,
    artin: Alphabet,
    spellings: Vec<Vec<u8>>,
}

impl LetterAction {
    pub fn new(alphabet: Alphabet) -> Self {
        let spellings = alphabet.letters().map(|x| alphabet.artin_expansion(x)).collect();
        LetterAction { alphabet, artin: alphabet.artin_counterpart(), spellings }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Applies letter `x`; `position` counts Artin letters already applied and is advanced.
    pub fn apply(&self, c: &mut DynnikovCoords, x: u8, position: &mut usize) -> Result<()> {
        for &y in &self.spellings[x as usize] {
            c.apply_letter(self.artin, y, *position)?;
            *position += 1;
        }
        Ok(())
    }

    pub fn coords_of(&self, letters: &[u8]) -> Result<DynnikovCoords> {
        let mut c = DynnikovCoords::base(self.alphabet.strands());
        let mut position = 0;
        for &x in letters {
            self.apply(&mut c, x, &mut position)?;
        }
        Ok(c)
    }
}

pub fn dynnikov(w: &Word) -> Result<DynnikovCoords> {
    let a = w.alphabet();
    let mut c = DynnikovCoords::base(a.strands());
    let mut position = 0;
    let artin = a.artin_counterpart();
    for &x in w.letters() {
        match a.kind() {
            Kind::Artin => {
                c.apply_letter(artin, x, position)?;
                position += 1;
            }
            Kind::Dual => {
                for y in a.artin_expansion(x) {
                    c.apply_letter(artin, y, position)?;
                    position += 1;
                }
            }
        }
    }
    Ok(c)
}

pub fn braids_equal(u: &Word, v: &Word) -> Result<bool> {
    if u.alphabet().strands() != v.alphabet().strands() {
        return Err(Error::AlphabetMismatch(format!(
            "cannot compare braids of {} and {}",
            u.alphabet(),
            v.alphabet()
        )));
    }
    Ok(dynnikov(u)? == dynnikov(v)?)
}

#[inline]
fn rem256(x: i64) -> u64 {
    x.rem_euclid(256) as u64
}

/// Bucket hash of a coordinate vector.
///
/// For four strands this is Σ rem(a_i,256)·256^{2i-2} + rem(b_i,256)·256^{2i-1},
/// i.e. the eight low bytes laid out little-endian. Other strand counts fold all
/// 2n positive remainders through a splitmix64 step. Equal coordinates always
/// hash equally; the converse is never assumed.
pub fn hash64(c: &DynnikovCoords) -> u64 {
    let coords = c.as_slice();
    if coords.len() == 8 {
        coords.iter().enumerate().fold(0u64, |h, (k, &x)| h | (rem256(x) << (8 * k)))
    } else {
        coords.iter().fold(0x9e37_79b9_7f4a_7c15u64, |h, &x| splitmix64(h ^ rem256(x)))
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_on_base_block() {
        assert_eq!(apply_sigma([0, 1, 0, 1], 1), Some([1, 0, 0, 2]));
        assert_eq!(apply_sigma([1, 0, 0, 2], -1), Some([0, 1, 0, 1]));
        assert_eq!(apply_sigma([0, 0, 0, 0], 1), Some([0, 0, 0, 0]));
        assert_eq!(apply_sigma([0, 0, 0, 0], -1), Some([0, 0, 0, 0]));
    }

    #[test]
    fn sigma_overflow_is_reported() {
        assert_eq!(apply_sigma([i64::MAX, 1, 0, 1], 1), None);
        assert_eq!(apply_sigma([i64::MIN, 1, 0, 1], -1), None);
    }

    #[test]
    fn empty_and_cancelling_words() {
        let a3 = Alphabet::artin(3).unwrap();
        assert_eq!(dynnikov(&Word::empty(a3)).unwrap().as_slice(), &[0, 1, 0, 1, 0, 1]);
        let a2 = Alphabet::artin(2).unwrap();
        let w = Word::new(a2, vec![a2.sigma(1, 1), a2.sigma(1, -1)]).unwrap();
        assert_eq!(dynnikov(&w).unwrap(), DynnikovCoords::base(2));
    }

    #[test]
    fn braid_relation_holds() {
        let a = Alphabet::artin(3).unwrap();
        let (s1, s2) = (a.sigma(1, 1), a.sigma(2, 1));
        let u = Word::new(a, vec![s1, s2, s1]).unwrap();
        let v = Word::new(a, vec![s2, s1, s2]).unwrap();
        assert!(braids_equal(&u, &v).unwrap());
        let w = Word::new(a, vec![s1, s2]).unwrap();
        assert!(!braids_equal(&u, &w).unwrap());
    }

    #[test]
    fn dual_examples() {
        let d = Alphabet::dual(3).unwrap();
        let a = Alphabet::artin(3).unwrap();
        let u = Word::new(d, vec![d.band(1, 2, 1)]).unwrap();
        let v = Word::new(a, vec![a.sigma(1, 1)]).unwrap();
        assert!(braids_equal(&u, &v).unwrap());

        let u = Word::new(d, vec![d.band(1, 2, 1), d.band(2, 3, 1)]).unwrap();
        let v = Word::new(d, vec![d.band(2, 3, 1), d.band(1, 3, 1)]).unwrap();
        assert!(braids_equal(&u, &v).unwrap());

        let u = Word::new(d, vec![d.band(1, 2, -1), d.band(2, 3, -1)]).unwrap();
        let v = Word::new(d, vec![d.band(2, 3, -1), d.band(1, 3, -1)]).unwrap();
        assert!(!braids_equal(&u, &v).unwrap());
    }

    #[test]
    fn comparing_different_strand_counts_fails() {
        let u = Word::empty(Alphabet::artin(3).unwrap());
        let v = Word::empty(Alphabet::artin(4).unwrap());
        assert!(braids_equal(&u, &v).is_err());
    }

    #[test]
    fn hash_of_base_point() {
        let h = hash64(&DynnikovCoords::base(4));
        assert_eq!(h, 72_058_693_566_333_184);
        assert_eq!(h, 256u64.pow(1) + 256u64.pow(3) + 256u64.pow(5) + 256u64.pow(7));
        assert_eq!(hash64(&DynnikovCoords::from_vec(vec![0; 8])), 0);
        let c = DynnikovCoords::from_vec(vec![-1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(hash64(&c), 255);
        let c = DynnikovCoords::from_vec(vec![0, 0, 0, 0, 0, 0, 0, 257]);
        assert_eq!(hash64(&c), 256u64.pow(7));
    }

    #[test]
    fn overflow_names_the_position() {
        let a = Alphabet::artin(2).unwrap();
        let mut c = DynnikovCoords::from_vec(vec![i64::MAX - 1, 1, 0, 1]);
        let err = c.apply_letter(a, a.sigma(1, 1), 7).unwrap_err();
        assert!(matches!(err, Error::CoordinateOverflow { position: 7 }));
    }
}
