//! The Witt ring `W(k)` of a finite field `k` of odd characteristic.
//!
//! `W(k)` has four elements and its structure depends only on whether
//! `-1` is a square, i.e. on `q mod 4`. Elements are stored as the
//! complete invariant pair (rank parity, signed discriminant).

use std::fmt;

use thiserror::Error;

use crate::field::{FiniteField, SquareClass};
use crate::forms::{DiagonalForm, FormError, Parity};

/// `q mod 4`: which of the two possible Witt rings we are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WittContext {
    /// `q ≡ 1 (mod 4)`: `-1` is a square; `W(k) ≅ F_2[Z/2]`.
    OneModFour,
    /// `q ≡ 3 (mod 4)`: `-1` is not a square; `W(k) ≅ Z/4`.
    ThreeModFour,
}

impl WittContext {
    pub const ALL: [WittContext; 2] = [WittContext::OneModFour, WittContext::ThreeModFour];

    pub fn of_field(field: &FiniteField) -> Self {
        Self::from_residue(field.residue_mod4()).expect("odd q is 1 or 3 mod 4")
    }

    pub fn from_residue(r: u32) -> Option<Self> {
        match r % 4 {
            1 => Some(WittContext::OneModFour),
            3 => Some(WittContext::ThreeModFour),
            _ => None,
        }
    }

    pub fn residue(self) -> u32 {
        match self {
            WittContext::OneModFour => 1,
            WittContext::ThreeModFour => 3,
        }
    }

    /// Square class of `-1`.
    pub fn sigma(self) -> SquareClass {
        match self {
            WittContext::OneModFour => SquareClass::One,
            WittContext::ThreeModFour => SquareClass::NonSquare,
        }
    }
}

impl fmt::Display for WittContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q ≡ {} (mod 4)", self.residue())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("mixed contexts: {0} vs {1}")]
    MixedContexts(WittContext, WittContext),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// An element of `W(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WittK {
    parity: Parity,
    disc: SquareClass,
    context: WittContext,
}

impl WittK {
    pub fn zero(context: WittContext) -> Self {
        WittK {
            parity: Parity::Even,
            disc: SquareClass::One,
            context,
        }
    }

    /// The rank-one class `<u>`.
    pub fn rank_one(context: WittContext, u: SquareClass) -> Self {
        WittK {
            parity: Parity::Odd,
            disc: context.sigma() * u,
            context,
        }
    }

    pub fn one(context: WittContext) -> Self {
        Self::rank_one(context, SquareClass::One)
    }

    /// `<s>`.
    pub fn s(context: WittContext) -> Self {
        Self::rank_one(context, SquareClass::NonSquare)
    }

    /// The nontrivial even class: `<1,s>` when `q ≡ 1`, `<1,1>` when `q ≡ 3`.
    pub fn nontrivial_even(context: WittContext) -> Self {
        WittK {
            parity: Parity::Even,
            disc: SquareClass::NonSquare,
            context,
        }
    }

    pub fn from_invariants(context: WittContext, parity: Parity, disc: SquareClass) -> Self {
        WittK { parity, disc, context }
    }

    /// `[0, <1>, <s>, e]`.
    pub fn all(context: WittContext) -> [WittK; 4] {
        [
            Self::zero(context),
            Self::one(context),
            Self::s(context),
            Self::nontrivial_even(context),
        ]
    }

    pub fn parity(self) -> Parity {
        self.parity
    }

    /// Signed discriminant `d±`.
    pub fn disc(self) -> SquareClass {
        self.disc
    }

    pub fn context(self) -> WittContext {
        self.context
    }

    pub fn is_zero(self) -> bool {
        self == Self::zero(self.context)
    }

    /// For an odd class `<u>`, the square class `u`.
    pub fn rank_one_label(self) -> Option<SquareClass> {
        self.parity.is_odd().then(|| self.context.sigma() * self.disc)
    }

    /// Position in [`WittK::all`]; the two-bit coefficient code used by the group ring.
    pub fn code(self) -> u8 {
        match (self.parity, self.rank_one_label()) {
            (Parity::Even, _) if self.disc.is_one() => 0,
            (Parity::Odd, Some(SquareClass::One)) => 1,
            (Parity::Odd, _) => 2,
            (Parity::Even, _) => 3,
        }
    }

    pub fn from_code(context: WittContext, code: u8) -> Self {
        Self::all(context)[(code & 3) as usize]
    }

    /// Label used in JSON: `"0"`, `"1"`, `"s"` or `"e"`.
    pub fn label(self) -> &'static str {
        ["0", "1", "s", "e"][self.code() as usize]
    }

    pub fn from_label(context: WittContext, label: &str) -> Option<Self> {
        let code = ["0", "1", "s", "e"].iter().position(|&l| l == label.trim())?;
        Some(Self::from_code(context, code as u8))
    }

    fn check(self, other: WittK) -> Result<(), WittError> {
        if self.context == other.context {
            Ok(())
        } else {
            Err(WittError::MixedContexts(self.context, other.context))
        }
    }

    /// `(e1, d1) + (e2, d2) = (e1 + e2, (-1)^{e1 e2} d1 d2)`.
    pub fn try_add(self, other: WittK) -> Result<WittK, WittError> {
        self.check(other)?;
        let mut disc = self.disc * other.disc;
        if self.parity.is_odd() && other.parity.is_odd() {
            disc = disc * self.context.sigma();
        }
        Ok(WittK {
            parity: self.parity + other.parity,
            disc,
            context: self.context,
        })
    }

    /// `<u><v> = <uv>`, `<u>·x = x` for even `x`, and even·even = 0.
    pub fn try_mul(self, other: WittK) -> Result<WittK, WittError> {
        self.check(other)?;
        let ctx = self.context;
        Ok(match (self.rank_one_label(), other.rank_one_label()) {
            (Some(u), Some(v)) => WittK::rank_one(ctx, u * v),
            (Some(_), None) => other,
            (None, Some(_)) => self,
            (None, None) => WittK::zero(ctx),
        })
    }

    pub fn try_sub(self, other: WittK) -> Result<WittK, WittError> {
        self.try_add(-other)
    }

    /// Class of a concrete form: (rank mod 2, signed discriminant).
    pub fn from_form(form: &DiagonalForm) -> WittK {
        WittK {
            parity: Parity::of(form.rank()),
            disc: form.signed_discriminant(),
            context: WittContext::of_field(form.field()),
        }
    }

    /// A concrete representative over `field` of rank at most 2.
    pub fn representative(self, field: &FiniteField) -> Result<DiagonalForm, WittError> {
        let ctx = WittContext::of_field(field);
        self.check(WittK::zero(ctx))?;
        let s = field.canonical_nonsquare();
        let entries = match self.code() {
            0 => vec![],
            1 => vec![field.one()],
            2 => vec![s],
            _ => match ctx {
                WittContext::OneModFour => vec![field.one(), s],
                WittContext::ThreeModFour => vec![field.one(), field.one()],
            },
        };
        Ok(DiagonalForm::new(field, entries)?)
    }
}

impl std::ops::Add for WittK {
    type Output = WittK;

    fn add(self, rhs: WittK) -> WittK {
        self.try_add(rhs).expect("W(k) operands must share a context")
    }
}

impl std::ops::Sub for WittK {
    type Output = WittK;

    fn sub(self, rhs: WittK) -> WittK {
        self.try_sub(rhs).expect("W(k) operands must share a context")
    }
}

impl std::ops::Mul for WittK {
    type Output = WittK;

    fn mul(self, rhs: WittK) -> WittK {
        self.try_mul(rhs).expect("W(k) operands must share a context")
    }
}

impl std::ops::Neg for WittK {
    type Output = WittK;

    fn neg(self) -> WittK {
        match self.rank_one_label() {
            Some(u) => WittK::rank_one(self.context, self.context.sigma() * u),
            None => self,
        }
    }
}

impl fmt::Display for WittK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.code() {
            0 => "0",
            1 => "<1>",
            2 => "<s>",
            _ => match self.context {
                WittContext::OneModFour => "<1,s>",
                WittContext::ThreeModFour => "<1,1>",
            },
        };
        f.write_str(s)
    }
}

/// One identity from the list of properties of `W(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BulletCheck {
    pub statement: &'static str,
    /// Whether the identity is asserted for this field's residue.
    pub applies: bool,
    /// Whether it holds in this field.
    pub holds: bool,
}

impl BulletCheck {
    pub fn passed(&self) -> bool {
        !self.applies || self.holds
    }
}

#[derive(Debug, Clone)]
pub struct BulletReport {
    pub field: FiniteField,
    pub checks: Vec<BulletCheck>,
}

impl BulletReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(BulletCheck::passed)
    }
}

/// Checks the four identities of `W(k)` with concrete forms over `field`:
/// `<1,1> = <s,s>`; `<1,1,1> = <1> = <-1>` when `q ≡ 1`;
/// `<1,1,1> = <s> = <-1>` when `q ≡ 3`; `<1,1,1,1> = 0`.
/// The residue-specific identity that does not apply is still evaluated
/// and reported (it should fail).
pub fn verify_bullets(field: &FiniteField) -> BulletReport {
    let form = |xs: Vec<crate::field::FieldElement>| DiagonalForm::new(field, xs).expect("nonzero entries");
    let one = field.one();
    let s = field.canonical_nonsquare();
    let minus_one = -field.one();
    let eq = |a: &DiagonalForm, b: &DiagonalForm| a.witt_equal(b).expect("same field");

    let ones2 = form(vec![one.clone(); 2]);
    let ones3 = form(vec![one.clone(); 3]);
    let ones4 = form(vec![one.clone(); 4]);
    let r1 = form(vec![one.clone()]);
    let rs = form(vec![s.clone()]);
    let rm = form(vec![minus_one]);
    let ss = form(vec![s.clone(), s]);
    let q1 = field.residue_mod4() == 1;

    let checks = vec![
        BulletCheck {
            statement: "<1,1> = <s,s>",
            applies: true,
            holds: eq(&ones2, &ss),
        },
        BulletCheck {
            statement: "<1,1,1> = <1> = <-1> (q ≡ 1 mod 4)",
            applies: q1,
            holds: eq(&ones3, &r1) && eq(&r1, &rm),
        },
        BulletCheck {
            statement: "<1,1,1> = <s> = <-1> (q ≡ 3 mod 4)",
            applies: !q1,
            holds: eq(&ones3, &rs) && eq(&rs, &rm),
        },
        BulletCheck {
            statement: "<1,1,1,1> = 0",
            applies: true,
            holds: ones4.witt_decompose().anisotropic.rank() == 0,
        },
    ];
    BulletReport {
        field: field.clone(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use WittContext::*;

    #[test]
    fn addition_examples() {
        assert_eq!(
            WittK::one(ThreeModFour) + WittK::one(ThreeModFour),
            WittK::nontrivial_even(ThreeModFour)
        );
        assert_eq!(WittK::one(OneModFour) + WittK::one(OneModFour), WittK::zero(OneModFour));
        for ctx in WittContext::ALL {
            for a in WittK::all(ctx) {
                assert_eq!(a + WittK::zero(ctx), a);
                assert_eq!(a + (-a), WittK::zero(ctx));
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        for ctx in WittContext::ALL {
            assert_eq!(WittK::s(ctx) * WittK::s(ctx), WittK::one(ctx));
            for a in WittK::all(ctx) {
                assert_eq!(WittK::one(ctx) * a, a);
            }
        }
        let e = WittK::nontrivial_even(OneModFour);
        assert_eq!(e * e, WittK::zero(OneModFour));
    }

    #[test]
    fn negation_examples() {
        assert_eq!(-WittK::one(OneModFour), WittK::one(OneModFour));
        assert_eq!(-WittK::one(ThreeModFour), WittK::s(ThreeModFour));
        for ctx in WittContext::ALL {
            assert_eq!(-WittK::zero(ctx), WittK::zero(ctx));
        }
    }

    #[test]
    fn mixed_contexts_rejected() {
        assert!(matches!(
            WittK::one(OneModFour).try_add(WittK::one(ThreeModFour)),
            Err(WittError::MixedContexts(..))
        ));
        assert!(WittK::one(OneModFour).try_mul(WittK::one(ThreeModFour)).is_err());
    }

    #[test]
    fn codes_and_labels_round_trip() {
        for ctx in WittContext::ALL {
            for (i, a) in WittK::all(ctx).into_iter().enumerate() {
                assert_eq!(a.code() as usize, i);
                assert_eq!(WittK::from_label(ctx, a.label()), Some(a));
            }
        }
    }

    #[test]
    fn concrete_form_examples() {
        let f7 = FiniteField::prime(7).unwrap();
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(
            WittK::from_form(&DiagonalForm::from_ints(&f7, &[1]).unwrap()),
            WittK::one(ThreeModFour)
        );
        for f in [&f5, &f7] {
            let four = DiagonalForm::from_ints(f, &[1, 1, 1, 1]).unwrap();
            assert!(WittK::from_form(&four).is_zero());
        }
        let one_s = DiagonalForm::new(&f5, vec![f5.one(), f5.canonical_nonsquare()]).unwrap();
        assert_eq!(WittK::from_form(&one_s), WittK::nontrivial_even(OneModFour));
    }

    #[test]
    fn representatives_map_back() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let f = FiniteField::of_order(q).unwrap();
            let ctx = WittContext::of_field(&f);
            for a in WittK::all(ctx) {
                assert_eq!(WittK::from_form(&a.representative(&f).unwrap()), a);
            }
        }
    }

    #[test]
    fn bullets_hold_in_sample_fields() {
        for q in [5u64, 7, 9] {
            let f = FiniteField::of_order(q).unwrap();
            let report = verify_bullets(&f);
            assert!(report.all_passed(), "{report:?}");
            // the residue-specific identity for the other branch must fail
            for c in &report.checks {
                if !c.applies {
                    assert!(!c.holds, "{}", c.statement);
                }
            }
        }
    }
}
