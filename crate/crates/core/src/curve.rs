//! Canonical elements of `W(C)` and their arithmetic.
//!
//! Every class of `W(C)` has a representative `<L_u>` (odd) or
//! `<1, -L_u>` (even), where `L` is 2-torsion in the Picard group and
//! `u` is a square class of `k` twisting the fixed base form on `L`.
//! The base form on each `L` is labelled `1`; on the structure sheaf
//! it is `<1>`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::SquareClass;
use crate::forms::Parity;
use crate::pic::{Pic2Group, PicElement, PicError};
use crate::wittk::{WittContext, WittK};

/// Largest Picard rank accepted by [`enumerate_classes`].
pub const MAX_CLASS_ENUMERATION_RANK: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("mixed contexts: {0} vs {1}")]
    MixedContexts(WittContext, WittContext),
    #[error(transparent)]
    Pic(#[from] PicError),
    #[error("invalid class record: {0}")]
    BadRecord(String),
}

/// A Witt class of the curve in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WittClass {
    parity: Parity,
    u: SquareClass,
    pic: PicElement,
    context: WittContext,
}

impl WittClass {
    /// `<L_u>`.
    pub fn odd(context: WittContext, u: SquareClass, pic: PicElement) -> Self {
        WittClass {
            parity: Parity::Odd,
            u,
            pic,
            context,
        }
    }

    /// `<1, -L_u>`.
    pub fn even(context: WittContext, u: SquareClass, pic: PicElement) -> Self {
        WittClass {
            parity: Parity::Even,
            u,
            pic,
            context,
        }
    }

    pub fn zero(context: WittContext, group: Pic2Group) -> Self {
        Self::even(context, SquareClass::One, group.identity())
    }

    pub fn one(context: WittContext, group: Pic2Group) -> Self {
        Self::odd(context, SquareClass::One, group.identity())
    }

    pub fn parity(self) -> Parity {
        self.parity
    }

    pub fn twist(self) -> SquareClass {
        self.u
    }

    pub fn pic(self) -> PicElement {
        self.pic
    }

    pub fn context(self) -> WittContext {
        self.context
    }

    pub fn group(self) -> Pic2Group {
        self.pic.group()
    }

    pub fn is_zero(self) -> bool {
        self.parity == Parity::Even && self.u.is_one() && self.pic.is_identity()
    }

    fn check(self, other: WittClass) -> Result<(), CurveError> {
        if self.context != other.context {
            return Err(CurveError::MixedContexts(self.context, other.context));
        }
        if self.pic.rank() != other.pic.rank() {
            return Err(PicError::RankMismatch(self.pic.rank(), other.pic.rank()).into());
        }
        Ok(())
    }

    /// Addition table:
    ///
    /// | +            | `<L_u>`              | `<1,-L'_u'>`      |
    /// |--------------|----------------------|-------------------|
    /// | `<M_v>`      | `<1,(LM)_uv>`        | `<(ML')_vu'>`     |
    /// | `<1,-M'_v'>` | `<(M'L)_v'u>`        | `<1,-(M'L')_v'u'>`|
    ///
    /// with `<1, X_a> = <1, -X_{σa}>`, `σ` the square class of `-1`.
    pub fn try_add(self, other: WittClass) -> Result<WittClass, CurveError> {
        self.check(other)?;
        let ctx = self.context;
        let pic = self.pic * other.pic;
        let uv = self.u * other.u;
        Ok(match (self.parity, other.parity) {
            (Parity::Odd, Parity::Odd) => WittClass::even(ctx, ctx.sigma() * uv, pic),
            (Parity::Odd, Parity::Even) | (Parity::Even, Parity::Odd) => WittClass::odd(ctx, uv, pic),
            (Parity::Even, Parity::Even) => WittClass::even(ctx, uv, pic),
        })
    }

    /// Multiplication table: `<L_u><M_v> = <(LM)_uv>`, odd times even is the
    /// even factor, even times even is `0`.
    pub fn try_mul(self, other: WittClass) -> Result<WittClass, CurveError> {
        self.check(other)?;
        Ok(match (self.parity, other.parity) {
            (Parity::Odd, Parity::Odd) => WittClass::odd(self.context, self.u * other.u, self.pic * other.pic),
            (Parity::Odd, Parity::Even) => other,
            (Parity::Even, Parity::Odd) => self,
            (Parity::Even, Parity::Even) => WittClass::zero(self.context, self.group()),
        })
    }

    pub fn try_sub(self, other: WittClass) -> Result<WittClass, CurveError> {
        self.try_add(-other)
    }

    /// Signed discriminant as a rank-one class `<L_u>`, returned as `(u, L)`.
    pub fn signed_discriminant_class(self) -> (SquareClass, PicElement) {
        match self.parity {
            Parity::Even => (self.u, self.pic),
            Parity::Odd => (self.context.sigma() * self.u, self.pic),
        }
    }

    /// Image of `W(k)` under the structure map (forms on the structure sheaf).
    pub fn from_wittk(a: WittK, group: Pic2Group) -> WittClass {
        let ctx = a.context();
        match a.rank_one_label() {
            Some(u) => WittClass::odd(ctx, u, group.identity()),
            None => WittClass::even(ctx, a.disc(), group.identity()),
        }
    }

    /// Inverse of [`WittClass::from_wittk`] on classes supported on the structure sheaf.
    pub fn to_wittk(self) -> Option<WittK> {
        if !self.pic.is_identity() {
            return None;
        }
        let (d, _) = self.signed_discriminant_class();
        Some(WittK::from_invariants(self.context, self.parity, d))
    }

    pub fn to_record(self) -> ClassRecord {
        ClassRecord {
            parity: self.parity.label().to_string(),
            u: self.u.label().to_string(),
            pic: self.pic.to_bits(),
        }
    }

    pub fn from_record(context: WittContext, record: &ClassRecord) -> Result<WittClass, CurveError> {
        let u =
            SquareClass::from_label(&record.u).ok_or_else(|| CurveError::BadRecord(format!("u = {:?}", record.u)))?;
        let pic = PicElement::parse_bits(&record.pic)?;
        match record.parity.as_str() {
            "odd" => Ok(WittClass::odd(context, u, pic)),
            "even" => Ok(WittClass::even(context, u, pic)),
            other => Err(CurveError::BadRecord(format!("parity = {other:?}"))),
        }
    }
}

/// JSON shape of a class: `{"parity":"odd"|"even","u":"1"|"s","L":"<bits>"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub parity: String,
    pub u: String,
    #[serde(rename = "L")]
    pub pic: String,
}

impl std::ops::Add for WittClass {
    type Output = WittClass;

    fn add(self, rhs: WittClass) -> WittClass {
        self.try_add(rhs).expect("W(C) operands must share context and rank")
    }
}

impl std::ops::Sub for WittClass {
    type Output = WittClass;

    fn sub(self, rhs: WittClass) -> WittClass {
        self.try_sub(rhs).expect("W(C) operands must share context and rank")
    }
}

impl std::ops::Mul for WittClass {
    type Output = WittClass;

    fn mul(self, rhs: WittClass) -> WittClass {
        self.try_mul(rhs).expect("W(C) operands must share context and rank")
    }
}

impl std::ops::Neg for WittClass {
    type Output = WittClass;

    fn neg(self) -> WittClass {
        match self.parity {
            Parity::Odd => WittClass::odd(self.context, self.context.sigma() * self.u, self.pic),
            Parity::Even => self,
        }
    }
}

fn letter(u: SquareClass, pic: PicElement) -> String {
    if pic.is_identity() {
        u.label().to_string()
    } else {
        format!("{}·{}", u.label(), pic.to_bits())
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        match self.parity {
            Parity::Odd => write!(f, "<{}>", letter(self.u, self.pic)),
            Parity::Even => write!(f, "<1,-{}>", letter(self.u, self.pic)),
        }
    }
}

impl fmt::Debug for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.parity.label(), self.u.label(), self.pic.to_bits())
    }
}

/// All `4 · 2^r` classes. For each `L` in enumeration order:
/// `even(1,L), odd(1,L), odd(s,L), even(s,L)`, so rank 0 lists
/// `0, <1>, <s>, e` like [`WittK::all`].
pub fn enumerate_classes(context: WittContext, group: Pic2Group) -> Result<Vec<WittClass>, CurveError> {
    let pics = group.elements_bounded(MAX_CLASS_ENUMERATION_RANK)?;
    let mut out = Vec::with_capacity(pics.len() * 4);
    for l in pics {
        out.push(WittClass::even(context, SquareClass::One, l));
        out.push(WittClass::odd(context, SquareClass::One, l));
        out.push(WittClass::odd(context, SquareClass::NonSquare, l));
        out.push(WittClass::even(context, SquareClass::NonSquare, l));
    }
    Ok(out)
}

/// Class of the orthogonal sum `<L1_u1, ..., Ln_un>`: folds the addition
/// table over the rank-one letters.
pub fn reduce_word(
    context: WittContext,
    group: Pic2Group,
    word: &[(SquareClass, PicElement)],
) -> Result<WittClass, CurveError> {
    word.iter().try_fold(WittClass::zero(context, group), |acc, &(u, l)| {
        acc.try_add(WittClass::odd(context, u, l))
    })
}

/// Parses `"(u,L);(v,M);..."` with `u ∈ {1, s}` and `L` a bit string.
pub fn parse_word(text: &str) -> Result<Vec<(SquareClass, PicElement)>, CurveError> {
    let mut out = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let inner = part
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| CurveError::BadRecord(format!("letter {part:?} is not of the form (u,L)")))?;
        let (u, l) = inner
            .split_once(',')
            .ok_or_else(|| CurveError::BadRecord(format!("letter {part:?} is not of the form (u,L)")))?;
        let u = SquareClass::from_label(u).ok_or_else(|| CurveError::BadRecord(format!("square class {u:?}")))?;
        out.push((u, PicElement::parse_bits(l)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SquareClass::{NonSquare as S, One};
    use WittContext::*;

    fn g(r: u32) -> Pic2Group {
        Pic2Group::new(r).unwrap()
    }

    #[test]
    fn note_identities() {
        for ctx in WittContext::ALL {
            let sigma = ctx.sigma();
            for l in g(2).elements().unwrap() {
                for u in SquareClass::ALL {
                    let a = WittClass::odd(ctx, u, l);
                    let b = WittClass::odd(ctx, S * u, l);
                    let id = g(2).identity();
                    assert_eq!(a + a, WittClass::even(ctx, sigma, id));
                    assert_eq!(a + b, WittClass::even(ctx, sigma * S, id));
                    assert_eq!(a * a, WittClass::one(ctx, g(2)));
                    assert_eq!(a * b, WittClass::odd(ctx, S, id));
                }
            }
        }
    }

    #[test]
    fn zero_is_additive_identity() {
        for ctx in WittContext::ALL {
            for r in 0..=3 {
                let z = WittClass::zero(ctx, g(r));
                for x in enumerate_classes(ctx, g(r)).unwrap() {
                    assert_eq!(x + z, x);
                    assert_eq!(x + (-x), z);
                }
            }
        }
    }

    #[test]
    fn even_times_even_is_zero() {
        let l = PicElement::parse_bits("01").unwrap();
        let m = PicElement::parse_bits("11").unwrap();
        let a = WittClass::even(ThreeModFour, S, l);
        let b = WittClass::even(ThreeModFour, One, m);
        assert!((a * b).is_zero());
    }

    #[test]
    fn negation_examples() {
        let l = PicElement::parse_bits("1").unwrap();
        assert!((-WittClass::zero(OneModFour, g(1))).is_zero());
        let e = WittClass::even(OneModFour, S, l);
        assert_eq!(-e, e);
        assert!((e + e).is_zero());
        assert_eq!(
            -WittClass::odd(ThreeModFour, One, l),
            WittClass::odd(ThreeModFour, S, l)
        );
        assert_eq!(-WittClass::odd(OneModFour, One, l), WittClass::odd(OneModFour, One, l));
    }

    #[test]
    fn signed_discriminants() {
        let l = PicElement::parse_bits("10").unwrap();
        assert_eq!(
            WittClass::zero(OneModFour, g(2)).signed_discriminant_class(),
            (One, g(2).identity())
        );
        assert_eq!(WittClass::even(ThreeModFour, S, l).signed_discriminant_class(), (S, l));
        assert_eq!(WittClass::odd(OneModFour, S, l).signed_discriminant_class(), (S, l));
        assert_eq!(WittClass::odd(ThreeModFour, S, l).signed_discriminant_class(), (One, l));
    }

    #[test]
    fn enumeration_sizes() {
        for ctx in WittContext::ALL {
            for (r, n) in [(0, 4), (1, 8), (2, 16), (3, 32)] {
                let classes = enumerate_classes(ctx, g(r)).unwrap();
                assert_eq!(classes.len(), n);
                let mut dedup = classes.clone();
                dedup.sort_by_key(|c| format!("{c:?}"));
                dedup.dedup();
                assert_eq!(dedup.len(), n);
                assert_eq!(classes.iter().filter(|c| c.parity().is_odd()).count(), n / 2);
            }
        }
        assert!(enumerate_classes(OneModFour, g(17)).is_err());
    }

    #[test]
    fn rank_zero_matches_wittk_order() {
        for ctx in WittContext::ALL {
            let classes = enumerate_classes(ctx, g(0)).unwrap();
            let ks: Vec<WittK> = classes.iter().map(|c| c.to_wittk().unwrap()).collect();
            assert_eq!(ks, WittK::all(ctx).to_vec());
            for k in WittK::all(ctx) {
                assert_eq!(WittClass::from_wittk(k, g(0)).to_wittk(), Some(k));
            }
        }
    }

    #[test]
    fn word_examples() {
        let ctx = ThreeModFour;
        assert!(reduce_word(ctx, g(2), &[]).unwrap().is_zero());
        let l = PicElement::parse_bits("01").unwrap();
        let m = PicElement::parse_bits("10").unwrap();
        let n = PicElement::parse_bits("11").unwrap();
        assert_eq!(reduce_word(ctx, g(2), &[(S, l)]).unwrap(), WittClass::odd(ctx, S, l));
        let c = reduce_word(ctx, g(2), &[(One, l), (S, m), (One, n)]).unwrap();
        assert!(c.parity().is_odd());
        assert_eq!(c.pic(), l * m * n);
        let mismatched = PicElement::parse_bits("1").unwrap();
        assert!(reduce_word(ctx, g(2), &[(One, mismatched)]).is_err());
    }

    #[test]
    fn parse_word_syntax() {
        let w = parse_word("(1,01); (s,10)").unwrap();
        assert_eq!(
            w,
            vec![
                (One, PicElement::parse_bits("01").unwrap()),
                (S, PicElement::parse_bits("10").unwrap())
            ]
        );
        assert!(parse_word("(x,01)").is_err());
        assert!(parse_word("1,01").is_err());
        assert_eq!(parse_word("").unwrap(), vec![]);
    }

    #[test]
    fn mixed_inputs_rejected() {
        let a = WittClass::one(OneModFour, g(1));
        assert!(matches!(
            a.try_add(WittClass::one(ThreeModFour, g(1))),
            Err(CurveError::MixedContexts(..))
        ));
        assert!(matches!(
            a.try_mul(WittClass::one(OneModFour, g(2))),
            Err(CurveError::Pic(_))
        ));
    }

    #[test]
    fn record_round_trip() {
        for ctx in WittContext::ALL {
            for c in enumerate_classes(ctx, g(2)).unwrap() {
                let json = serde_json::to_string(&c.to_record()).unwrap();
                let back: ClassRecord = serde_json::from_str(&json).unwrap();
                assert_eq!(WittClass::from_record(ctx, &back).unwrap(), c);
            }
        }
        let rec = ClassRecord {
            parity: "odd".into(),
            u: "s".into(),
            pic: "01".into(),
        };
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"parity":"odd","u":"s","L":"01"}"#
        );
    }
}
