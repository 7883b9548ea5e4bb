//! Finite fields `F_q` of odd characteristic.
//!
//! A field is `F_p[x]/(m(x))` where `m` is the first monic irreducible
//! polynomial of degree `e` in lexicographic order. Elements are stored
//! as their base-`p` digit encoding `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`,
//! so "enumeration order" everywhere in this crate means increasing
//! integer encoding (highest coefficient most significant).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Default upper bound on the field cardinality.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Hard ceiling: encodings must fit in a `u32`.
const ABSOLUTE_MAX_ORDER: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported (dyadic fields are excluded)")]
    CharacteristicTwo,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds the configured bound {bound}")]
    TooLarge { p: u64, e: u32, bound: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("cannot parse field order {0:?}; expected `p` , `q` or `p^e`")]
    BadOrder(String),
    #[error("operands belong to different fields ({0} and {1})")]
    MixedFields(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no square class")]
    ZeroHasNoSquareClass,
    #[error("coefficient vector has length {got}, expected at most {expected}")]
    BadCoefficients { got: usize, expected: usize },
}

/// The two square classes of `F_q^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    One,
    NonSquare,
}

impl SquareClass {
    pub const ALL: [SquareClass; 2] = [SquareClass::One, SquareClass::NonSquare];

    pub fn is_one(self) -> bool {
        self == SquareClass::One
    }

    /// Label used in text and JSON output: `"1"` or `"s"`.
    pub fn label(self) -> &'static str {
        match self {
            SquareClass::One => "1",
            SquareClass::NonSquare => "s",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s.trim() {
            "1" => Some(SquareClass::One),
            "s" => Some(SquareClass::NonSquare),
            _ => None,
        }
    }
}

impl Mul for SquareClass {
    type Output = SquareClass;

    fn mul(self, rhs: SquareClass) -> SquareClass {
        if self == rhs {
            SquareClass::One
        } else {
            SquareClass::NonSquare
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug)]
struct FieldInner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, constant term first, length `e + 1`.
    modulus: Vec<u32>,
    nonsquare: u32,
}

/// A finite field `F_q`, `q = p^e`, `p` odd. Cheap to clone.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldInner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl std::hash::Hash for FiniteField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.e.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{} = F_{}[x]/({})", self.0.q, self.0.p, self.modulus_string())
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digits_of(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(v % p);
        v /= p;
    }
    out
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Remainder of `num` modulo the monic polynomial `den` over `F_p`.
/// Both constant-term first; `den` must be monic with degree ≥ 1.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let d = den.len() - 1;
    let p64 = p as u64;
    for top in (d..r.len()).rev() {
        let c = r[top] % p64;
        if c == 0 {
            continue;
        }
        for (i, &dc) in den.iter().enumerate() {
            let idx = top - d + i;
            r[idx] = (r[idx] + p64 - (c * dc as u64) % p64) % p64;
        }
    }
    r.truncate(d);
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut factor = digits_of(idx as u32, p, d as u32);
            factor.push(1);
            if poly_rem(poly, &factor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e);
    for idx in 0..count {
        let mut poly = digits_of(idx as u32, p, e);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

impl FiniteField {
    /// Builds `F_{p^e}` with the default cardinality bound.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        Self::with_bound(p, e, DEFAULT_MAX_ORDER)
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn with_bound(p: u64, e: u32, bound: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let bound = bound.min(ABSOLUTE_MAX_ORDER);
        let q = p.checked_pow(e).filter(|&q| q <= bound);
        let Some(q) = q else {
            return Err(FieldError::TooLarge { p, e, bound });
        };
        let (p, q) = (p as u32, q as u32);
        let modulus = first_irreducible(p, e);
        let probe = FiniteField(Arc::new(FieldInner {
            p,
            e,
            q,
            modulus,
            nonsquare: 0,
        }));
        let nonsquare = (1..q)
            .find(|&v| !probe.euler_is_one(v))
            .expect("every odd finite field has a non-square");
        let mut inner = Arc::try_unwrap(probe.0).expect("probe is uniquely owned");
        inner.nonsquare = nonsquare;
        Ok(FiniteField(Arc::new(inner)))
    }

    /// Builds the field of order `q`, where `q` is an odd prime power.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        Self::of_order_with_bound(q, DEFAULT_MAX_ORDER)
    }

    pub fn of_order_with_bound(q: u64, bound: u64) -> Result<Self, FieldError> {
        if q < 2 {
            return Err(FieldError::NotPrimePower(q));
        }
        let p = (2..)
            .take_while(|d| d * d <= q)
            .find(|d| q.is_multiple_of(*d))
            .unwrap_or(q);
        let mut rest = q;
        let mut e = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrimePower(q));
        }
        Self::with_bound(p, e, bound)
    }

    /// Parses `"7"`, `"9"` or `"3^2"`.
    pub fn parse_order(text: &str, bound: u64) -> Result<Self, FieldError> {
        let bad = || FieldError::BadOrder(text.to_string());
        match text.trim().split_once('^') {
            Some((p, e)) => {
                let p: u64 = p.trim().parse().map_err(|_| bad())?;
                let e: u32 = e.trim().parse().map_err(|_| bad())?;
                Self::with_bound(p, e, bound)
            }
            None => {
                let q: u64 = text.trim().parse().map_err(|_| bad())?;
                Self::of_order_with_bound(q, bound)
            }
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, constant term first (monic, length `e + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn modulus_string(&self) -> String {
        poly_string(&self.0.modulus)
    }

    /// `q mod 4`, either 1 or 3.
    pub fn residue_mod4(&self) -> u32 {
        self.0.q % 4
    }

    pub fn zero(&self) -> FieldElement {
        self.raw(0)
    }

    pub fn one(&self) -> FieldElement {
        self.raw(1)
    }

    /// The image of an integer in the prime subfield.
    pub fn int(&self, n: i64) -> FieldElement {
        self.raw(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given encoding `0 ≤ index < q`.
    pub fn element(&self, index: u32) -> Option<FieldElement> {
        (index < self.0.q).then(|| self.raw(index))
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement, FieldError> {
        let e = self.0.e as usize;
        if coeffs.len() > e {
            return Err(FieldError::BadCoefficients {
                got: coeffs.len(),
                expected: e,
            });
        }
        let p = self.0.p as i64;
        let digits: Vec<u32> = coeffs.iter().map(|&c| c.rem_euclid(p) as u32).collect();
        Ok(self.raw(encode(&digits, self.0.p)))
    }

    /// All `q` elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |v| self.raw(v))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.0.q).map(move |v| self.raw(v))
    }

    /// The first non-square in enumeration order; the fixed `s` of this field.
    pub fn canonical_nonsquare(&self) -> FieldElement {
        self.raw(self.0.nonsquare)
    }

    /// Representative of a square class: `1` or the canonical non-square.
    pub fn class_representative(&self, class: SquareClass) -> FieldElement {
        match class {
            SquareClass::One => self.one(),
            SquareClass::NonSquare => self.canonical_nonsquare(),
        }
    }

    /// Square class of `-1`.
    pub fn minus_one_class(&self) -> SquareClass {
        if self.residue_mod4() == 1 {
            SquareClass::One
        } else {
            SquareClass::NonSquare
        }
    }

    fn raw(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.e == 1 {
            return ((a as u64 + b as u64) % p as u64) as u32;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.e {
            let d = (a % p + b % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        out
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let p = self.0.p;
        if self.0.e == 1 {
            return (p - a) % p;
        }
        let digits: Vec<u32> = digits_of(a, p, self.0.e).into_iter().map(|d| (p - d) % p).collect();
        encode(&digits, p)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.e == 1 {
            return ((a as u64 * b as u64) % p as u64) as u32;
        }
        let e = self.0.e as usize;
        let da = digits_of(a, p, self.0.e);
        let db = digits_of(b, p, self.0.e);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        encode(&poly_rem(&prod, &self.0.modulus, p), p)
    }

    fn pow_raw(&self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, b);
            }
            b = self.mul_raw(b, b);
            exp >>= 1;
        }
        acc
    }

    fn euler_is_one(&self, v: u32) -> bool {
        self.pow_raw(v, (self.0.q as u64 - 1) / 2) == 1
    }
}

fn poly_string(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// An element of a [`FiniteField`].
///
/// The arithmetic operators panic when the operands live in different
/// fields; the `try_*` methods report [`FieldError::MixedFields`] instead.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FiniteField,
    value: u32,
}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.0.q.hash(state);
        self.value.hash(state);
    }
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Integer encoding; the position of this element in enumeration order.
    pub fn index(&self) -> u32 {
        self.value
    }

    /// Coefficients over `F_p`, constant term first.
    pub fn coeffs(&self) -> Vec<u32> {
        digits_of(self.value, self.field.0.p, self.field.0.e)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields(
                format!("{:?}", self.field),
                format!("{:?}", other.field),
            ))
        }
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn try_add(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(rhs)?;
        Ok(self.with(self.field.add_raw(self.value, rhs.value)))
    }

    pub fn try_sub(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(rhs)?;
        let neg = self.field.neg_raw(rhs.value);
        Ok(self.with(self.field.add_raw(self.value, neg)))
    }

    pub fn try_mul(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(rhs)?;
        Ok(self.with(self.field.mul_raw(self.value, rhs.value)))
    }

    pub fn try_div(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(rhs)?;
        let inv = rhs.inverse()?;
        Ok(self.with(self.field.mul_raw(self.value, inv.value)))
    }

    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.with(self.field.pow_raw(self.value, self.field.0.q as u64 - 2)))
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        self.with(self.field.pow_raw(self.value, exp))
    }

    pub fn square(&self) -> FieldElement {
        self.with(self.field.mul_raw(self.value, self.value))
    }

    /// Euler's criterion: `x^((q-1)/2) = 1`.
    pub fn is_square(&self) -> Result<bool, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroHasNoSquareClass);
        }
        Ok(self.field.euler_is_one(self.value))
    }

    pub fn square_class(&self) -> Result<SquareClass, FieldError> {
        Ok(if self.is_square()? {
            SquareClass::One
        } else {
            SquareClass::NonSquare
        })
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.0.e == 1 {
            write!(f, "{}", self.value)
        } else {
            let c = self.coeffs();
            let body: Vec<String> = c.iter().map(|d| d.to_string()).collect();
            write!(f, "({})", body.join(","))
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("field operands must share a field")
            }
        }

        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }

        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        self.with(self.field.neg_raw(self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}
