//! Bilinear forms checked against brute-force oracles.

use proptest::prelude::*;
use wittring::{DiagonalForm, FieldElement, FiniteField, WittContext, WittK};

fn fq(q: u64) -> FiniteField {
    FiniteField::of_order(q).unwrap()
}

fn all_forms(f: &FiniteField, n: usize) -> Vec<DiagonalForm> {
    let pool: Vec<FieldElement> = f.nonzero_elements().collect();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<FieldElement>| {
                pool.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out.into_iter().map(|e| DiagonalForm::new(f, e).unwrap()).collect()
}

fn all_vectors(f: &FiniteField, n: usize) -> Vec<Vec<FieldElement>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<FieldElement>| {
                f.elements().map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn bilinear(g: &DiagonalForm, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    g.entries()
        .iter()
        .zip(x.iter().zip(y))
        .fold(g.field().zero(), |acc, (a, (xi, yi))| acc + a * &(xi * yi))
}

/// Backtracking search for columns `t_0..t_{n-1}` with `g(t_i, t_j) = h_ij`.
/// A solution is automatically invertible because `h` is nondegenerate.
fn isometric_brute_force(g: &DiagonalForm, h: &DiagonalForm) -> bool {
    if g.rank() != h.rank() {
        return false;
    }
    let vectors = all_vectors(g.field(), g.rank());
    // candidates for column k: vectors with g(v, v) = h_k
    let buckets: Vec<Vec<usize>> = h
        .entries()
        .iter()
        .map(|hk| {
            (0..vectors.len())
                .filter(|&i| &bilinear(g, &vectors[i], &vectors[i]) == hk)
                .collect()
        })
        .collect();
    fn extend(g: &DiagonalForm, vectors: &[Vec<FieldElement>], buckets: &[Vec<usize>], cols: &mut Vec<usize>) -> bool {
        let k = cols.len();
        if k == buckets.len() {
            return true;
        }
        for &i in &buckets[k] {
            if cols.iter().any(|&c| !bilinear(g, &vectors[c], &vectors[i]).is_zero()) {
                continue;
            }
            cols.push(i);
            if extend(g, vectors, buckets, cols) {
                return true;
            }
            cols.pop();
        }
        false
    }
    extend(g, &vectors, &buckets, &mut Vec::new())
}

#[test]
fn isometry_by_invariants_matches_basis_search() {
    for q in [3u64, 5] {
        let f = fq(q);
        for n in 0..=3 {
            let forms = all_forms(&f, n);
            for a in &forms {
                for b in &forms {
                    assert_eq!(
                        a.isometric_by_invariants(b).unwrap(),
                        isometric_brute_force(a, b),
                        "F_{q}: {a} vs {b}"
                    );
                }
            }
        }
    }
    let f5 = fq(5);
    let s = f5.canonical_nonsquare();
    let ones = DiagonalForm::from_ints(&f5, &[1, 1]).unwrap();
    let ss = DiagonalForm::new(&f5, vec![s.clone(), s]).unwrap();
    assert!(isometric_brute_force(&ones, &ss));
}

#[test]
fn rank_three_and_four_forms_are_isotropic() {
    for q in [3u64, 5, 7, 9, 11] {
        let f = fq(q);
        let reps = [f.one(), f.canonical_nonsquare()];
        for n in 3..=4 {
            for bits in 0..(1u32 << n) {
                let entries = (0..n).map(|i| reps[((bits >> i) & 1) as usize].clone()).collect();
                let form = DiagonalForm::new(&f, entries).unwrap();
                let v = form.find_isotropic_vector(10_000_000).unwrap().unwrap();
                assert!(form.evaluate(&v).is_zero());
            }
        }
    }
}

#[test]
fn rank_four_reduces_to_rank_two() {
    // <a1,a2,a3,a4> = <1,1,1,a1a2a3a4> = <-1,a1a2a3a4> in the Witt ring
    for q in [3u64, 5, 7] {
        let f = fq(q);
        for form in all_forms(&f, 4) {
            let d = form.determinant();
            let three_ones = DiagonalForm::new(&f, vec![f.one(), f.one(), f.one(), d.clone()]).unwrap();
            let short = DiagonalForm::new(&f, vec![-f.one(), d]).unwrap();
            assert!(form.witt_equal(&three_ones).unwrap(), "F_{q}: {form}");
            assert!(form.witt_equal(&short).unwrap(), "F_{q}: {form}");
        }
    }
}

#[test]
fn wittk_has_exactly_four_elements_in_larger_fields() {
    for q in [13u64, 17, 19, 25, 27] {
        let f = fq(q);
        let ctx = WittContext::of_field(&f);
        let mut classes = std::collections::HashSet::new();
        for n in 0..=2 {
            for form in all_forms(&f, n) {
                if form.is_anisotropic() {
                    classes.insert(WittK::from_form(&form));
                }
            }
        }
        assert_eq!(classes.len(), 4);
        assert_eq!(classes, WittK::all(ctx).into_iter().collect());
    }
}

fn form_strategy() -> impl Strategy<Value = DiagonalForm> {
    (
        prop::sample::select(vec![3u64, 5, 7, 9, 11, 13, 25]),
        prop::collection::vec(any::<u32>(), 0..=4),
    )
        .prop_map(|(q, raw)| {
            let f = fq(q);
            let entries = raw
                .into_iter()
                .map(|r| f.element(1 + r % (f.order() - 1)).unwrap())
                .collect();
            DiagonalForm::new(&f, entries).unwrap()
        })
}

fn pair_strategy() -> impl Strategy<Value = (DiagonalForm, DiagonalForm)> {
    (
        prop::sample::select(vec![3u64, 5, 7, 9, 11, 13]),
        prop::collection::vec(any::<u32>(), 0..=4),
        prop::collection::vec(any::<u32>(), 0..=4),
    )
        .prop_map(|(q, a, b)| {
            let f = fq(q);
            let mk = |raw: Vec<u32>| {
                let entries = raw
                    .into_iter()
                    .map(|r| f.element(1 + r % (f.order() - 1)).unwrap())
                    .collect();
                DiagonalForm::new(&f, entries).unwrap()
            };
            (mk(a), mk(b))
        })
}

proptest! {
    #[test]
    fn hyperbolic_planes_vanish(form in form_strategy()) {
        let h = DiagonalForm::hyperbolic_plane(form.field());
        prop_assert!(form.witt_equal(&form.orthogonal_sum(&h).unwrap()).unwrap());
    }

    #[test]
    fn diagonalization_round_trip(form in form_strategy(), seed in any::<u64>()) {
        // scramble with an invertible upper-triangular matrix, then diagonalize
        let f = form.field().clone();
        let n = form.rank();
        let mut t = vec![f.zero(); n * n];
        let mut s = seed;
        for i in 0..n {
            for j in 0..n {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                t[i * n + j] = if i == j {
                    f.one()
                } else if i < j {
                    f.element(((s >> 33) % f.order() as u64) as u32).unwrap()
                } else {
                    f.zero()
                };
            }
        }
        let mut gram = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    acc = acc + &t[k * n + r] * &(&form.entries()[k] * &t[k * n + c]);
                }
                gram.push(acc);
            }
        }
        let g = wittring::GramForm::new(&f, n, gram).unwrap();
        let d = g.diagonalize().unwrap();
        let lhs = d.basis.transpose().mul(g.matrix()).mul(&d.basis);
        let diag = d.form.gram();
        prop_assert_eq!(&lhs, diag.matrix());
        prop_assert!(d.form.isometric_by_invariants(&form).unwrap());
    }

    #[test]
    fn witt_equal_preserves_invariants((a, b) in pair_strategy()) {
        let eq = a.witt_equal(&b).unwrap();
        prop_assert_eq!(eq, a.invariants() == b.invariants());
    }

    #[test]
    fn concrete_forms_map_homomorphically((a, b) in pair_strategy()) {
        let (ka, kb) = (WittK::from_form(&a), WittK::from_form(&b));
        prop_assert_eq!(WittK::from_form(&a.orthogonal_sum(&b).unwrap()), ka + kb);
        prop_assert_eq!(WittK::from_form(&a.tensor_product(&b).unwrap()), ka * kb);
        prop_assert_eq!(WittK::from_form(&a.negated()), -ka);
    }

    #[test]
    fn decomposition_shape(form in form_strategy()) {
        let d = form.witt_decompose();
        prop_assert!(d.anisotropic.rank() <= 2);
        prop_assert!(d.anisotropic.is_anisotropic());
        prop_assert_eq!(2 * d.hyperbolic_planes + d.anisotropic.rank(), form.rank());
        prop_assert!(form.witt_equal(&d.anisotropic).unwrap());
    }
}
