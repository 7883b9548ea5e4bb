//! Exhaustive verification suite.
//!
//! Each check is an exact, desk-scale computation that either passes or
//! returns a concrete counterexample. The CLI `verify` command and the
//! `acceptance` test target both run [`run_all`].

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{enumerate_classes, reduce_word, WittClass};
use crate::field::{FieldElement, FiniteField, SquareClass};
use crate::forms::{DiagonalForm, Parity, DEFAULT_SEARCH_LIMIT};
use crate::group_ring::verify_isomorphism;
use crate::pic::{Pic2Group, PicElement};
use crate::wittk::{verify_bullets, WittContext, WittK};

/// Number of random triples checked at Picard rank 8, per context.
pub const RANDOM_TRIPLES: usize = 100_000;

/// Seed for the randomized ring-axiom check.
pub const RANDOM_SEED: u64 = 0x5717_7C0A_11A5_0001;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: u8,
    pub title: &'static str,
    /// Summary on success, counterexample on failure.
    pub result: Result<String, String>,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

type CheckFn = fn() -> Result<String, String>;

/// `(id, title, check)` for every check in the suite.
pub const CHECKS: [(u8, &str, CheckFn); 10] = [
    (1, "W(k) identities via concrete forms", wk_bullets),
    (2, "|W(k)| = 4 by anisotropic enumeration", wk_has_four_elements),
    (3, "W(k) additive structure split by q mod 4", wk_structure_split),
    (4, "forms of rank 3 and 4 are isotropic", finite_field_isotropy),
    (
        5,
        "Witt equality <=> (rank parity, signed discriminant)",
        invariant_completeness,
    ),
    (6, "W(C) addition and multiplication tables", curve_tables),
    (7, "W(C) commutative ring axioms", curve_ring_axioms),
    (
        8,
        "W(C) classification and rank <= 2 representatives",
        curve_classification,
    ),
    (9, "W(k)[2Pic]/R is isomorphic to W(C)", main_isomorphism),
    (10, "rank-0 W(C) coincides with W(k)", rank_zero_degeneration),
];

pub fn run(id: u8) -> Option<CheckOutcome> {
    let &(id, title, check) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let result = check();
    Some(CheckOutcome {
        id,
        title,
        result,
        elapsed: start.elapsed(),
    })
}

pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS.iter().filter_map(|c| run(c.0)).collect()
}

fn field(q: u64) -> FiniteField {
    FiniteField::of_order(q).expect("suite fields are valid")
}

fn group(r: u32) -> Pic2Group {
    Pic2Group::new(r).expect("suite ranks are valid")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// All tuples of length `n` drawn from `pool`.
fn tuples(pool: &[FieldElement], n: usize) -> Vec<Vec<FieldElement>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn forms_up_to_rank(f: &FiniteField, pool: &[FieldElement], max_rank: usize) -> Vec<DiagonalForm> {
    (0..=max_rank)
        .flat_map(|n| tuples(pool, n))
        .map(|t| DiagonalForm::new(f, t).expect("pool is nonzero"))
        .collect()
}

fn wk_bullets() -> Result<String, String> {
    let qs = [3u64, 5, 7, 9, 11, 13, 25, 27];
    for q in qs {
        let report = verify_bullets(&field(q));
        for c in &report.checks {
            ensure(c.passed(), || format!("F_{q}: {} fails", c.statement))?;
        }
    }
    Ok(format!("4 identities hold for q in {qs:?}"))
}

fn wk_has_four_elements() -> Result<String, String> {
    let qs = [3u64, 5, 7, 9, 11, 13];
    for q in qs {
        let f = field(q);
        let pool: Vec<FieldElement> = f.nonzero_elements().collect();
        let mut reps: Vec<DiagonalForm> = Vec::new();
        for form in forms_up_to_rank(&f, &pool, 2) {
            if !form.is_anisotropic() {
                continue;
            }
            let known = reps.iter().any(|r| r.witt_equal(&form).expect("same field"));
            if !known {
                reps.push(form);
            }
        }
        ensure(reps.len() == 4, || {
            format!("F_{q}: {} classes of anisotropic forms: {reps:?}", reps.len())
        })?;
    }
    Ok(format!("exactly 4 classes for q in {qs:?}"))
}

fn wk_structure_split() -> Result<String, String> {
    for ctx in WittContext::ALL {
        let zero = WittK::zero(ctx);
        match ctx {
            WittContext::OneModFour => {
                for a in WittK::all(ctx) {
                    ensure((a + a).is_zero(), || format!("{ctx}: {a} + {a} = {}", a + a))?;
                }
            }
            WittContext::ThreeModFour => {
                let one = WittK::one(ctx);
                let multiples: Vec<WittK> = (1..=4)
                    .scan(zero, |acc, _| {
                        *acc = *acc + one;
                        Some(*acc)
                    })
                    .collect();
                ensure(
                    multiples[..3].iter().all(|m| !m.is_zero()) && multiples[3].is_zero(),
                    || format!("{ctx}: multiples of <1> are {multiples:?}"),
                )?;
                ensure(multiples[2] == WittK::s(ctx), || {
                    format!("{ctx}: 3<1> = {}", multiples[2])
                })?;
            }
        }
    }
    // the same facts with concrete forms
    for q in [5u64, 9, 13] {
        let f = field(q);
        let ctx = WittContext::of_field(&f);
        for a in WittK::all(ctx) {
            let rep = a.representative(&f).map_err(|e| e.to_string())?;
            let doubled = rep.orthogonal_sum(&rep).expect("same field");
            ensure(doubled.witt_decompose().anisotropic.rank() == 0, || {
                format!("F_{q}: {rep} ⊥ {rep} is not hyperbolic")
            })?;
        }
    }
    for q in [3u64, 7, 11] {
        let f = field(q);
        for k in 1..=4usize {
            let form = DiagonalForm::new(&f, vec![f.one(); k]).expect("nonzero");
            let hyperbolic = form.witt_decompose().anisotropic.rank() == 0;
            ensure(hyperbolic == (k == 4), || {
                format!("F_{q}: {k}·<1> hyperbolic = {hyperbolic}")
            })?;
        }
    }
    Ok("q ≡ 1: x + x = 0 for all x; q ≡ 3: <1> has additive order 4".into())
}

fn finite_field_isotropy() -> Result<String, String> {
    let qs = [3u64, 5, 7, 11];
    let mut checked = 0usize;
    for q in qs {
        let f = field(q);
        let pool: Vec<FieldElement> = f.nonzero_elements().collect();
        for n in 1..=4 {
            for entries in tuples(&pool, n) {
                let form = DiagonalForm::new(&f, entries).expect("nonzero");
                if n >= 3 {
                    let v = form
                        .find_isotropic_vector(DEFAULT_SEARCH_LIMIT)
                        .map_err(|e| e.to_string())?;
                    let ok = v
                        .as_ref()
                        .is_some_and(|v| form.evaluate(v).is_zero() && v.iter().any(|x| !x.is_zero()));
                    ensure(ok, || format!("F_{q}: {form} has no isotropic vector"))?;
                }
                let dec = form.witt_decompose();
                ensure(
                    dec.anisotropic.rank() <= 2
                        && dec.anisotropic.is_anisotropic()
                        && 2 * dec.hyperbolic_planes + dec.anisotropic.rank() == n,
                    || format!("F_{q}: {form} decomposes as {dec:?}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} forms of rank 1..=4 over q in {qs:?}"))
}

fn invariant_completeness() -> Result<String, String> {
    let mut pairs = 0usize;
    let mut run = |f: &FiniteField, forms: &[DiagonalForm]| -> Result<(), String> {
        for a in forms {
            for b in forms {
                let equal = a.witt_equal(b).expect("same field");
                let same_inv = a.invariants() == b.invariants();
                ensure(equal == same_inv, || {
                    format!("{f}: {a} vs {b}: witt_equal = {equal}, equal invariants = {same_inv}")
                })?;
                pairs += 1;
            }
        }
        Ok(())
    };
    for q in [3u64, 5, 7, 9, 11] {
        let f = field(q);
        let reps = [f.one(), f.canonical_nonsquare()];
        run(&f, &forms_up_to_rank(&f, &reps, 4))?;
    }
    for q in [3u64, 5] {
        let f = field(q);
        let pool: Vec<FieldElement> = f.nonzero_elements().collect();
        run(&f, &forms_up_to_rank(&f, &pool, 3))?;
    }
    Ok(format!("{pairs} pairs of forms, rank <= 4, q <= 11"))
}

/// Independent evaluation of an orthogonal sum of rank-one letters: the
/// class is fixed by rank parity and `d± = (-1)^(n(n+1)/2) Π u_i · Π L_i`.
fn class_of_letters(ctx: WittContext, g: Pic2Group, letters: &[(SquareClass, PicElement)]) -> WittClass {
    let n = letters.len();
    let mut u = if (n * (n + 1) / 2) % 2 == 1 {
        ctx.sigma()
    } else {
        SquareClass::One
    };
    let mut pic = g.identity();
    for &(a, l) in letters {
        u = u * a;
        pic = pic * l;
    }
    match Parity::of(n) {
        Parity::Odd => WittClass::odd(ctx, ctx.sigma() * u, pic),
        Parity::Even => WittClass::even(ctx, u, pic),
    }
}

fn curve_tables() -> Result<String, String> {
    use SquareClass::NonSquare as S;
    let mut cells = 0usize;
    for ctx in WittContext::ALL {
        let sigma = ctx.sigma();
        for r in 0..=3 {
            let g = group(r);
            let id = g.identity();
            let pics = g.elements().expect("small rank");
            for &l in &pics {
                for &m in &pics {
                    for u in SquareClass::ALL {
                        for v in SquareClass::ALL {
                            let odd_l = WittClass::odd(ctx, u, l);
                            let odd_m = WittClass::odd(ctx, v, m);
                            let even_l = WittClass::even(ctx, u, l);
                            let even_m = WittClass::even(ctx, v, m);
                            // `<1, -X_a>` as letters
                            let neg = |a: SquareClass, x: PicElement| vec![(SquareClass::One, id), (sigma * a, x)];
                            let expected = [
                                // addition table
                                (odd_m + odd_l, vec![(SquareClass::One, id), (u * v, l * m)]),
                                (odd_m + even_l, vec![(v * u, m * l)]),
                                (even_m + odd_l, vec![(v * u, m * l)]),
                                (even_m + even_l, neg(v * u, m * l)),
                                // multiplication table
                                (odd_m * odd_l, vec![(u * v, l * m)]),
                                (odd_m * even_l, neg(u, l)),
                                (even_m * odd_l, neg(v, m)),
                                (even_m * even_l, vec![]),
                            ];
                            for (i, (got, letters)) in expected.iter().enumerate() {
                                let want = class_of_letters(ctx, g, letters);
                                ensure(*got == want, || {
                                    format!("{ctx}, r={r}, u={u}, v={v}, L={l}, M={m}: cell {i} gives {got}, table says {want}")
                                })?;
                                cells += 1;
                            }
                            if v == u && m == l {
                                let notes = [
                                    (odd_l * odd_l, vec![(SquareClass::One, id)]),
                                    (odd_l + odd_l, vec![(SquareClass::One, id), (SquareClass::One, id)]),
                                ];
                                let twisted = WittClass::odd(ctx, S * u, l);
                                let notes_s = [
                                    (odd_l * twisted, vec![(S, id)]),
                                    (odd_l + twisted, vec![(SquareClass::One, id), (S, id)]),
                                ];
                                for (got, letters) in notes.iter().chain(&notes_s) {
                                    let want = class_of_letters(ctx, g, letters);
                                    ensure(*got == want, || {
                                        format!(
                                            "{ctx}, r={r}, L={l}, u={u}: note identity gives {got}, expected {want}"
                                        )
                                    })?;
                                    cells += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{cells} table cells and note identities, r <= 3, both contexts"
    ))
}

fn check_axioms(a: WittClass, b: WittClass, c: WittClass, zero: WittClass, one: WittClass) -> Result<(), String> {
    let fail = |law: &str| format!("{law} fails for a={a:?}, b={b:?}, c={c:?}");
    ensure((a + b) + c == a + (b + c), || fail("additive associativity"))?;
    ensure((a * b) * c == a * (b * c), || fail("multiplicative associativity"))?;
    ensure(a + b == b + a, || fail("additive commutativity"))?;
    ensure(a * b == b * a, || fail("multiplicative commutativity"))?;
    ensure(a * (b + c) == a * b + a * c, || fail("distributivity"))?;
    ensure(a + zero == a && a * one == a, || fail("identities"))?;
    ensure(a + (-a) == zero, || fail("additive inverse"))?;
    Ok(())
}

fn random_class(rng: &mut ChaCha8Rng, ctx: WittContext, g: Pic2Group) -> WittClass {
    let u = if rng.random() {
        SquareClass::One
    } else {
        SquareClass::NonSquare
    };
    let pic = g.element(rng.random_range(0..g.order())).expect("in range");
    if rng.random() {
        WittClass::odd(ctx, u, pic)
    } else {
        WittClass::even(ctx, u, pic)
    }
}

fn curve_ring_axioms() -> Result<String, String> {
    let mut triples = 0usize;
    for ctx in WittContext::ALL {
        for r in 0..=2 {
            let g = group(r);
            let (zero, one) = (WittClass::zero(ctx, g), WittClass::one(ctx, g));
            let classes = enumerate_classes(ctx, g).map_err(|e| e.to_string())?;
            for &a in &classes {
                for &b in &classes {
                    for &c in &classes {
                        check_axioms(a, b, c, zero, one)?;
                        triples += 1;
                    }
                }
            }
        }
        let g = group(8);
        let (zero, one) = (WittClass::zero(ctx, g), WittClass::one(ctx, g));
        let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED ^ ctx.residue() as u64);
        for _ in 0..RANDOM_TRIPLES {
            let (a, b, c) = (
                random_class(&mut rng, ctx, g),
                random_class(&mut rng, ctx, g),
                random_class(&mut rng, ctx, g),
            );
            check_axioms(a, b, c, zero, one)?;
            triples += 1;
        }
    }
    Ok(format!(
        "{triples} triples: exhaustive for r <= 2, {RANDOM_TRIPLES} random at r = 8, both contexts"
    ))
}

fn curve_classification() -> Result<String, String> {
    let mut classes_seen = 0usize;
    for ctx in WittContext::ALL {
        for r in 0..=3 {
            let g = group(r);
            let classes = enumerate_classes(ctx, g).map_err(|e| e.to_string())?;
            let invariants: HashSet<(Parity, SquareClass, PicElement)> = classes
                .iter()
                .map(|c| {
                    let (d, l) = c.signed_discriminant_class();
                    (c.parity(), d, l)
                })
                .collect();
            ensure(invariants.len() == classes.len(), || {
                format!("{ctx}, r={r}: (parity, d±) is not injective")
            })?;

            let pics = g.elements().expect("small rank");
            let letters: Vec<(SquareClass, PicElement)> =
                pics.iter().flat_map(|&l| SquareClass::ALL.map(|u| (u, l))).collect();
            let mut reached: HashSet<WittClass> = HashSet::new();
            reached.insert(reduce_word(ctx, g, &[]).map_err(|e| e.to_string())?);
            for &a in &letters {
                reached.insert(reduce_word(ctx, g, &[a]).map_err(|e| e.to_string())?);
                for &b in &letters {
                    reached.insert(reduce_word(ctx, g, &[a, b]).map_err(|e| e.to_string())?);
                }
            }
            for c in &classes {
                ensure(reached.contains(c), || {
                    format!("{ctx}, r={r}: {c} needs a word longer than 2")
                })?;
            }
            classes_seen += classes.len();
        }
    }
    Ok(format!("{classes_seen} classes, r <= 3, both contexts"))
}

fn main_isomorphism() -> Result<String, String> {
    let mut orders = Vec::new();
    for ctx in WittContext::ALL {
        for r in 0..=3 {
            let report = verify_isomorphism(ctx, group(r)).map_err(|e| e.to_string())?;
            ensure(report.passed(), || {
                format!("{ctx}, r={r}: {}", report.counterexamples().join("; "))
            })?;
            if r <= 2 {
                ensure(
                    report.kernel_matches_ideal.is_some() && report.ring_homomorphism.is_some(),
                    || format!("{ctx}, r={r}: pairwise checks were skipped"),
                )?;
            }
            orders.push(report.quotient_order);
        }
    }
    Ok(format!("quotient orders {orders:?} (r = 0..=3, q ≡ 1 then q ≡ 3)"))
}

fn rank_zero_degeneration() -> Result<String, String> {
    for ctx in WittContext::ALL {
        let g = group(0);
        let classes = enumerate_classes(ctx, g).map_err(|e| e.to_string())?;
        let image: HashSet<WittK> = classes.iter().filter_map(|c| c.to_wittk()).collect();
        ensure(image.len() == 4, || {
            format!("{ctx}: rank-0 classes do not biject onto W(k)")
        })?;
        for &a in &classes {
            for &b in &classes {
                let (ka, kb) = (a.to_wittk().expect("rank 0"), b.to_wittk().expect("rank 0"));
                ensure((a + b).to_wittk() == Some(ka + kb), || format!("{ctx}: {a} + {b}"))?;
                ensure((a * b).to_wittk() == Some(ka * kb), || format!("{ctx}: {a} · {b}"))?;
            }
        }
    }
    Ok("4x4 addition and multiplication tables agree in both contexts".into())
}
