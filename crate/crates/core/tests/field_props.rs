use proptest::prelude::*;
use wittring::{FiniteField, SquareClass};

const ORDERS: [u64; 9] = [3, 5, 7, 9, 11, 25, 27, 49, 243];

fn field_and_elems() -> impl Strategy<Value = (FiniteField, u32, u32, u32)> {
    (
        prop::sample::select(ORDERS.to_vec()),
        any::<u32>(),
        any::<u32>(),
        any::<u32>(),
    )
        .prop_map(|(q, a, b, c)| {
            let f = FiniteField::of_order(q).unwrap();
            let n = f.order();
            (f, a % n, b % n, c % n)
        })
}

proptest! {
    #[test]
    fn field_axioms((f, a, b, c) in field_and_elems()) {
        let (a, b, c) = (f.element(a).unwrap(), f.element(b).unwrap(), f.element(c).unwrap());
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(a.try_div(&b).unwrap() * b.clone(), a.clone());
        }
    }

    #[test]
    fn square_class_is_a_homomorphism((f, a, b, _c) in field_and_elems()) {
        let (a, b) = (f.element(a).unwrap(), f.element(b).unwrap());
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!((&a * &b).square_class().unwrap(), a.square_class().unwrap() * b.square_class().unwrap());
        prop_assert_eq!(a.square().square_class().unwrap(), SquareClass::One);
    }
}

#[test]
fn square_class_kernel_has_half_the_units() {
    for q in ORDERS {
        let f = FiniteField::of_order(q).unwrap();
        let ones = f
            .nonzero_elements()
            .filter(|x| x.square_class().unwrap() == SquareClass::One)
            .count() as u32;
        assert_eq!(ones, (f.order() - 1) / 2);
        assert_eq!(f.canonical_nonsquare().square_class().unwrap(), SquareClass::NonSquare);
        let earlier_all_squares =
            (1..f.canonical_nonsquare().index()).all(|i| f.element(i).unwrap().is_square().unwrap());
        assert!(earlier_all_squares);
    }
}
