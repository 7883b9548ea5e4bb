//! Exact arithmetic in the Witt ring `W(C)` of a smooth projective curve
//! over a finite field of odd characteristic.
//!
//! `W(C)` is presented as the quotient of the group ring `W(k)[₂Pic(C)]`
//! by the relations `<1> - <u>L - <v>M + <uv>LM`. Its elements have
//! canonical representatives `<L_u>` and `<1, -L_u>`, which
//! [`curve::WittClass`] stores directly. The field-side machinery
//! ([`field`], [`forms`], [`wittk`]) works with concrete forms over `F_q`
//! and backs the symbolic layers with exhaustive checks.
//!
//! ```
//! use wittring::{Pic2Group, PicElement, SquareClass, WittClass, WittContext};
//!
//! let ctx = WittContext::ThreeModFour;
//! let l: PicElement = "01".parse().unwrap();
//! let a = WittClass::odd(ctx, SquareClass::One, l);
//! // <L> + <L> = <1,1>, which is nonzero when q ≡ 3 (mod 4)
//! let two = a + a;
//! assert!(!two.is_zero());
//! assert!((two + two).is_zero());
//! assert_eq!(a * a, WittClass::one(ctx, Pic2Group::new(2).unwrap()));
//! ```

pub mod curve;
pub mod field;
pub mod forms;
pub mod group_ring;
pub mod pic;
pub mod suite;
pub mod wittk;

pub use curve::{enumerate_classes, reduce_word, ClassRecord, CurveError, WittClass};
pub use field::{FieldElement, FieldError, FiniteField, SquareClass};
pub use forms::{DiagonalForm, FormError, GramForm, Parity, WittDecomposition, WittInvariants};
pub use group_ring::{
    ideal_closure, normal_form, relation_generators, verify_isomorphism, GroupRingElement, GroupRingError,
    RelationGenerator, TermRecord,
};
pub use pic::{Pic2Group, PicElement, PicError};
pub use wittk::{verify_bullets, WittContext, WittError, WittK};
