//! The 2-torsion Picard group, modeled as `(Z/2)^r`.
//!
//! Only the group structure is used, so the group is given by its rank.
//! The identity element stands for the structure sheaf. The curve is
//! assumed to have a rational point; nothing here can check that.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest rank [`Pic2Group::elements`] will enumerate by default.
pub const MAX_ENUMERATION_RANK: u32 = 20;

/// Largest rank supported at all (elements are packed into a `u64`).
pub const MAX_RANK: u32 = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicError {
    #[error("Picard rank mismatch: {0} vs {1}")]
    RankMismatch(u32, u32),
    #[error("rank {rank} exceeds the bound {bound}")]
    RankTooLarge { rank: u32, bound: u32 },
    #[error("invalid bit string {0:?}")]
    BadBits(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pic2Group {
    rank: u32,
}

impl Pic2Group {
    pub fn new(rank: u32) -> Result<Self, PicError> {
        if rank > MAX_RANK {
            return Err(PicError::RankTooLarge { rank, bound: MAX_RANK });
        }
        Ok(Pic2Group { rank })
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    pub fn order(self) -> u64 {
        1u64 << self.rank
    }

    pub fn identity(self) -> PicElement {
        PicElement {
            bits: 0,
            rank: self.rank,
        }
    }

    /// The element whose bit string, read as a binary number, is `index`.
    pub fn element(self, index: u64) -> Option<PicElement> {
        (index < self.order()).then_some(PicElement {
            bits: index,
            rank: self.rank,
        })
    }

    /// All elements in lexicographic bit order, identity first.
    pub fn elements(self) -> Result<Vec<PicElement>, PicError> {
        self.elements_bounded(MAX_ENUMERATION_RANK)
    }

    pub fn elements_bounded(self, bound: u32) -> Result<Vec<PicElement>, PicError> {
        if self.rank > bound {
            return Err(PicError::RankTooLarge { rank: self.rank, bound });
        }
        Ok((0..self.order())
            .map(|bits| PicElement { bits, rank: self.rank })
            .collect())
    }
}

/// An element of `(Z/2)^r`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicElement {
    bits: u64,
    rank: u32,
}

impl PicElement {
    pub fn rank(self) -> u32 {
        self.rank
    }

    /// Bit string as a binary number; the element's position in enumeration order.
    pub fn index(self) -> u64 {
        self.bits
    }

    pub fn group(self) -> Pic2Group {
        Pic2Group { rank: self.rank }
    }

    pub fn is_identity(self) -> bool {
        self.bits == 0
    }

    pub fn try_mul(self, other: PicElement) -> Result<PicElement, PicError> {
        if self.rank != other.rank {
            return Err(PicError::RankMismatch(self.rank, other.rank));
        }
        Ok(PicElement {
            bits: self.bits ^ other.bits,
            rank: self.rank,
        })
    }

    /// Bit string, first character most significant; empty for rank 0.
    pub fn to_bits(self) -> String {
        (0..self.rank)
            .rev()
            .map(|i| if (self.bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn parse_bits(s: &str) -> Result<PicElement, PicError> {
        let s = s.trim();
        let bad = || PicError::BadBits(s.to_string());
        if s.len() > MAX_RANK as usize {
            return Err(bad());
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(bad()),
                };
        }
        Ok(PicElement {
            bits,
            rank: s.len() as u32,
        })
    }
}

impl std::ops::Mul for PicElement {
    type Output = PicElement;

    fn mul(self, rhs: PicElement) -> PicElement {
        self.try_mul(rhs).expect("Picard elements must share a rank")
    }
}

impl FromStr for PicElement {
    type Err = PicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_bits(s)
    }
}

impl fmt::Debug for PicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L[{}]", self.to_bits())
    }
}

/// Text form: the bit string, or `O` for the identity.
impl fmt::Display for PicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("O")
        } else {
            f.write_str(&self.to_bits())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_law() {
        let g = Pic2Group::new(2).unwrap();
        let a = PicElement::parse_bits("10").unwrap();
        let b = PicElement::parse_bits("11").unwrap();
        assert_eq!(a * b, PicElement::parse_bits("01").unwrap());
        assert_eq!(a * a, g.identity());
        assert_eq!(a * g.identity(), a);
    }

    #[test]
    fn rank_mismatch() {
        let a = PicElement::parse_bits("1").unwrap();
        let b = PicElement::parse_bits("10").unwrap();
        assert_eq!(a.try_mul(b), Err(PicError::RankMismatch(1, 2)));
    }

    #[test]
    fn enumeration() {
        let g0 = Pic2Group::new(0).unwrap();
        assert_eq!(g0.elements().unwrap(), vec![g0.identity()]);
        let g1 = Pic2Group::new(1).unwrap();
        let bits: Vec<String> = g1.elements().unwrap().into_iter().map(|e| e.to_bits()).collect();
        assert_eq!(bits, vec!["0", "1"]);
        let g2 = Pic2Group::new(2).unwrap();
        let bits: Vec<String> = g2.elements().unwrap().into_iter().map(|e| e.to_bits()).collect();
        assert_eq!(bits, vec!["00", "01", "10", "11"]);
        assert!(Pic2Group::new(21).unwrap().elements().is_err());
        assert!(Pic2Group::new(64).is_err());
    }

    #[test]
    fn group_axioms_exhaustive() {
        for r in 0..=4 {
            let els = Pic2Group::new(r).unwrap().elements().unwrap();
            let id = els[0];
            for &a in &els {
                assert_eq!(a * id, a);
                assert_eq!(a * a, id);
                for &b in &els {
                    assert_eq!(a * b, b * a);
                    for &c in &els {
                        assert_eq!((a * b) * c, a * (b * c));
                    }
                }
            }
        }
    }

    #[test]
    fn bits_round_trip() {
        for r in 0..=5 {
            for e in Pic2Group::new(r).unwrap().elements().unwrap() {
                assert_eq!(PicElement::parse_bits(&e.to_bits()).unwrap(), e);
            }
        }
        assert!(PicElement::parse_bits("102").is_err());
    }
}
