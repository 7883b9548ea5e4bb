//! Nondegenerate symmetric bilinear forms over `F_q`.
//!
//! [`GramForm`] holds an arbitrary symmetric matrix; [`DiagonalForm`] is
//! the diagonal form `<a_1, ..., a_n>` that everything else works with.
//! Isotropy is decided by exhaustive search, so all of this is meant for
//! small fields and ranks.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FiniteField, SquareClass};

/// Default cap on candidate vectors examined by [`DiagonalForm::find_isotropic_vector`].
pub const DEFAULT_SEARCH_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("Gram matrix has {got} entries, expected {n}x{n}")]
    Shape { n: usize, got: usize },
    #[error("Gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("form is degenerate: radical has dimension {radical_dim}")]
    Degenerate { radical_dim: usize },
    #[error("diagonal entry {index} is zero")]
    ZeroEntry { index: usize },
    #[error("isotropic search exceeded {limit} candidate vectors")]
    SearchLimit { limit: u64 },
}

/// Rank parity, i.e. rank mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::ops::Mul for Parity {
    type Output = Parity;

    fn mul(self, rhs: Parity) -> Parity {
        if self.is_odd() && rhs.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Rank mod 2 and signed discriminant; a complete Witt-class invariant over `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WittInvariants {
    pub rank_parity: Parity,
    pub signed_disc: SquareClass,
}

/// A square matrix over a finite field, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let mut data = vec![field.zero(); n * n];
        for i in 0..n {
            data[i * n + i] = field.one();
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &FieldElement {
        &self.data[row * self.n + col]
    }

    fn set(&mut self, row: usize, col: usize, v: FieldElement) {
        self.data[row * self.n + col] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for r in 0..self.n {
            for c in 0..self.n {
                data.push(self.get(c, r).clone());
            }
        }
        Matrix { n: self.n, data }
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = self.get(r, c).field().zero();
                for k in 0..n {
                    acc = acc + self.get(r, k) * rhs.get(k, c);
                }
                data.push(acc);
            }
        }
        Matrix { n, data }
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Rank of a list of vectors (all the same length).
fn rank_of(rows: &[Vec<FieldElement>]) -> usize {
    let mut reduced: Vec<Vec<FieldElement>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows {
        if let Some((v, pivot)) = reduce_against(row, &reduced, &pivots) {
            reduced.push(v);
            pivots.push(pivot);
        }
    }
    reduced.len()
}

/// Reduces `row` against an echelon set; returns the normalized residue and
/// its pivot column when it is independent.
fn reduce_against(
    row: &[FieldElement],
    reduced: &[Vec<FieldElement>],
    pivots: &[usize],
) -> Option<(Vec<FieldElement>, usize)> {
    let mut v = row.to_vec();
    for (basis, &p) in reduced.iter().zip(pivots) {
        if !v[p].is_zero() {
            let c = v[p].clone();
            for (x, b) in v.iter_mut().zip(basis) {
                *x = &*x - &(&c * b);
            }
        }
    }
    let pivot = v.iter().position(|x| !x.is_zero())?;
    let inv = v[pivot].inverse().expect("pivot is nonzero");
    for x in v.iter_mut() {
        *x = &*x * &inv;
    }
    Some((v, pivot))
}

/// Indices of a maximal linearly independent subset, greedily in order.
fn independent_subset(vectors: &[Vec<FieldElement>]) -> Vec<usize> {
    let mut reduced = Vec::new();
    let mut pivots = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in vectors.iter().enumerate() {
        if let Some((v, p)) = reduce_against(row, &reduced, &pivots) {
            reduced.push(v);
            pivots.push(p);
            chosen.push(i);
        }
    }
    chosen
}

/// A symmetric bilinear form given by its Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GramForm {
    field: FiniteField,
    matrix: Matrix,
}

/// Output of [`GramForm::diagonalize`]: `basisᵀ · gram · basis = diag(form)`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub form: DiagonalForm,
    /// Change of basis; column `k` is the `k`-th new basis vector.
    pub basis: Matrix,
}

impl GramForm {
    /// Builds a form from a row-major `n × n` matrix.
    pub fn new(field: &FiniteField, n: usize, entries: Vec<FieldElement>) -> Result<Self, FormError> {
        if entries.len() != n * n {
            return Err(FormError::Shape { n, got: entries.len() });
        }
        for x in &entries {
            if x.field() != field {
                return Err(FieldError::MixedFields(format!("{field:?}"), format!("{:?}", x.field())).into());
            }
        }
        let matrix = Matrix { n, data: entries };
        for r in 0..n {
            for c in r + 1..n {
                if matrix.get(r, c) != matrix.get(c, r) {
                    return Err(FormError::NotSymmetric { row: r, col: c });
                }
            }
        }
        Ok(GramForm {
            field: field.clone(),
            matrix,
        })
    }

    /// Rows of integers, reduced into the prime subfield.
    pub fn from_int_rows(field: &FiniteField, rows: &[Vec<i64>]) -> Result<Self, FormError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(FormError::Shape {
                    n,
                    got: rows.iter().map(Vec::len).sum(),
                });
            }
            entries.extend(row.iter().map(|&v| field.int(v)));
        }
        Self::new(field, n, entries)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn radical_dim(&self) -> usize {
        self.dim() - rank_of(&self.matrix.rows())
    }

    /// Diagonalizes by congruence. The pivot is the first remaining index
    /// with a nonzero diagonal entry; when the remaining diagonal vanishes,
    /// row/column `j` is added to `i` for the first nonzero off-diagonal
    /// `(i, j)`, which creates the diagonal entry `2 a_ij`.
    pub fn diagonalize(&self) -> Result<Diagonalization, FormError> {
        let radical_dim = self.radical_dim();
        if radical_dim > 0 {
            return Err(FormError::Degenerate { radical_dim });
        }
        let n = self.dim();
        let mut a = self.matrix.clone();
        let mut t = Matrix::identity(&self.field, n);

        for k in 0..n {
            let pivot = match (k..n).find(|&i| !a.get(i, i).is_zero()) {
                Some(i) => i,
                None => {
                    let (i, j) = (k..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !a.get(i, j).is_zero())
                        .expect("nondegenerate block has a nonzero entry");
                    add_multiple(&mut a, &mut t, i, j, &self.field.one());
                    i
                }
            };
            if pivot != k {
                swap(&mut a, &mut t, pivot, k);
            }
            let inv = a.get(k, k).inverse().expect("pivot is nonzero");
            for j in k + 1..n {
                if a.get(j, k).is_zero() {
                    continue;
                }
                let c = -(a.get(j, k) * &inv);
                add_multiple(&mut a, &mut t, j, k, &c);
            }
        }

        let entries = (0..n).map(|i| a.get(i, i).clone()).collect();
        Ok(Diagonalization {
            form: DiagonalForm::new(&self.field, entries)?,
            basis: t,
        })
    }
}

/// Basis vector `target += c · source`, applied to the Gram matrix by congruence.
fn add_multiple(a: &mut Matrix, t: &mut Matrix, target: usize, source: usize, c: &FieldElement) {
    let n = a.n;
    for k in 0..n {
        let v = a.get(target, k) + &(c * a.get(source, k));
        a.set(target, k, v);
    }
    for k in 0..n {
        let v = a.get(k, target) + &(c * a.get(k, source));
        a.set(k, target, v);
    }
    for k in 0..n {
        let v = t.get(k, target) + &(c * t.get(k, source));
        t.set(k, target, v);
    }
}

fn swap(a: &mut Matrix, t: &mut Matrix, i: usize, j: usize) {
    let n = a.n;
    for k in 0..n {
        a.data.swap(i * n + k, j * n + k);
    }
    for k in 0..n {
        a.data.swap(k * n + i, k * n + j);
        t.data.swap(k * n + i, k * n + j);
    }
}

/// The diagonal form `<a_1, ..., a_n>` with every `a_i` nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    field: FiniteField,
    entries: Vec<FieldElement>,
}

/// Result of [`DiagonalForm::witt_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittDecomposition {
    pub hyperbolic_planes: usize,
    pub anisotropic: DiagonalForm,
}

impl DiagonalForm {
    pub fn new(field: &FiniteField, entries: Vec<FieldElement>) -> Result<Self, FormError> {
        for (index, x) in entries.iter().enumerate() {
            if x.field() != field {
                return Err(FieldError::MixedFields(format!("{field:?}"), format!("{:?}", x.field())).into());
            }
            if x.is_zero() {
                return Err(FormError::ZeroEntry { index });
            }
        }
        Ok(DiagonalForm {
            field: field.clone(),
            entries,
        })
    }

    pub fn from_ints(field: &FiniteField, entries: &[i64]) -> Result<Self, FormError> {
        Self::new(field, entries.iter().map(|&v| field.int(v)).collect())
    }

    /// The rank-0 form, the zero of the Witt ring.
    pub fn empty(field: &FiniteField) -> Self {
        DiagonalForm {
            field: field.clone(),
            entries: Vec::new(),
        }
    }

    /// `<1, -1>`.
    pub fn hyperbolic_plane(field: &FiniteField) -> Self {
        DiagonalForm {
            field: field.clone(),
            entries: vec![field.one(), -field.one()],
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn gram(&self) -> GramForm {
        let n = self.rank();
        let mut m = Matrix::identity(&self.field, n);
        for (i, a) in self.entries.iter().enumerate() {
            m.set(i, i, a.clone());
        }
        GramForm {
            field: self.field.clone(),
            matrix: m,
        }
    }

    fn same_field(&self, other: &DiagonalForm) -> Result<(), FormError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields(format!("{:?}", self.field), format!("{:?}", other.field)).into())
        }
    }

    pub fn determinant(&self) -> FieldElement {
        self.entries.iter().fold(self.field.one(), |acc, a| acc * a)
    }

    pub fn determinant_class(&self) -> SquareClass {
        self.determinant().square_class().expect("entries are nonzero")
    }

    /// Square class of `(-1)^(n(n+1)/2) · a_1 ⋯ a_n`.
    pub fn signed_discriminant(&self) -> SquareClass {
        let n = self.rank();
        let sign_odd = (n * (n + 1) / 2) % 2 == 1;
        let det = self.determinant_class();
        if sign_odd {
            det * self.field.minus_one_class()
        } else {
            det
        }
    }

    pub fn invariants(&self) -> WittInvariants {
        WittInvariants {
            rank_parity: Parity::of(self.rank()),
            signed_disc: self.signed_discriminant(),
        }
    }

    pub fn orthogonal_sum(&self, other: &DiagonalForm) -> Result<DiagonalForm, FormError> {
        self.same_field(other)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(DiagonalForm {
            field: self.field.clone(),
            entries,
        })
    }

    pub fn tensor_product(&self, other: &DiagonalForm) -> Result<DiagonalForm, FormError> {
        self.same_field(other)?;
        let entries = self
            .entries
            .iter()
            .flat_map(|a| other.entries.iter().map(move |b| a * b))
            .collect();
        Ok(DiagonalForm {
            field: self.field.clone(),
            entries,
        })
    }

    /// `<-a_1, ..., -a_n>`, the additive inverse in the Witt ring.
    pub fn negated(&self) -> DiagonalForm {
        DiagonalForm {
            field: self.field.clone(),
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    /// `q(v) = Σ a_i v_i²`.
    pub fn evaluate(&self, v: &[FieldElement]) -> FieldElement {
        self.entries
            .iter()
            .zip(v)
            .fold(self.field.zero(), |acc, (a, x)| acc + a * &x.square())
    }

    /// Exhaustive search for `v ≠ 0` with `q(v) = 0`.
    ///
    /// Projective points are scanned by support: for `k = 0, 1, ...` the
    /// vectors with `v_k = 1`, `v_j = 0` for `j > k`, and `v_0..v_{k-1}`
    /// running through `F_q^k` in enumeration order. `limit` caps the number
    /// of candidates examined.
    pub fn find_isotropic_vector(&self, limit: u64) -> Result<Option<Vec<FieldElement>>, FormError> {
        self.scan_isotropic(Some(limit))
    }

    fn scan_isotropic(&self, limit: Option<u64>) -> Result<Option<Vec<FieldElement>>, FormError> {
        let n = self.rank();
        let q = self.field.order();
        let mut examined = 0u64;
        let zero = self.field.zero();
        for k in 0..n {
            // running sum over v_0..v_{k-1}, odometer-style
            let mut digits = vec![0u32; k];
            loop {
                examined += 1;
                if let Some(limit) = limit {
                    if examined > limit {
                        return Err(FormError::SearchLimit { limit });
                    }
                }
                let mut v: Vec<FieldElement> = digits
                    .iter()
                    .map(|&d| self.field.element(d).expect("digit below q"))
                    .collect();
                v.push(self.field.one());
                if self.evaluate(&v).is_zero() {
                    v.resize(n, zero.clone());
                    return Ok(Some(v));
                }
                let mut pos = 0;
                while pos < k {
                    digits[pos] += 1;
                    if digits[pos] < q {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
        }
        Ok(None)
    }

    pub fn is_anisotropic(&self) -> bool {
        self.isotropic_vector().is_none()
    }

    /// Unbounded scan. Any rank-3 form over `F_q` is isotropic, so the
    /// support-ordered scan stops within the first three coordinates and
    /// examines at most `q² + q + 1` candidates.
    fn isotropic_vector(&self) -> Option<Vec<FieldElement>> {
        self.scan_isotropic(None).expect("unbounded scan cannot hit a limit")
    }

    fn bilinear(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        self.entries
            .iter()
            .zip(x.iter().zip(y))
            .fold(self.field.zero(), |acc, (a, (xi, yi))| acc + a * &(xi * yi))
    }

    /// Splits off hyperbolic planes until the remainder is anisotropic.
    pub fn witt_decompose(&self) -> WittDecomposition {
        let mut current = self.clone();
        let mut planes = 0;
        while let Some(v) = current.isotropic_vector() {
            current = current.split_hyperbolic(&v);
            planes += 1;
        }
        WittDecomposition {
            hyperbolic_planes: planes,
            anisotropic: current,
        }
    }

    /// Completes the isotropic `v` to a hyperbolic pair `(v, w)` and returns
    /// the re-diagonalized orthogonal complement of `span(v, w)`.
    fn split_hyperbolic(&self, v: &[FieldElement]) -> DiagonalForm {
        let n = self.rank();
        let f = &self.field;
        let i = v.iter().position(|x| !x.is_zero()).expect("v is nonzero");
        // B(v, e_i / (a_i v_i)) = 1
        let mut w = vec![f.zero(); n];
        w[i] = (&self.entries[i] * &v[i]).inverse().expect("nonzero");
        // w <- w - (B(w,w)/2) v makes w isotropic and keeps B(v,w) = 1
        let half = f.int(2).inverse().expect("odd characteristic");
        let shift = &self.bilinear(&w, &w) * &half;
        for (wk, vk) in w.iter_mut().zip(v) {
            *wk = &*wk - &(&shift * vk);
        }

        // x - B(x,w) v - B(x,v) w is orthogonal to v and w
        let projected: Vec<Vec<FieldElement>> = (0..n)
            .map(|j| {
                let mut x = vec![f.zero(); n];
                x[j] = f.one();
                let bxw = self.bilinear(&x, &w);
                let bxv = self.bilinear(&x, v);
                x.iter()
                    .zip(v.iter().zip(&w))
                    .map(|(xk, (vk, wk))| xk - &(&bxw * vk) - &bxv * wk)
                    .collect()
            })
            .collect();
        let basis: Vec<&Vec<FieldElement>> = independent_subset(&projected)
            .into_iter()
            .map(|k| &projected[k])
            .collect();
        debug_assert_eq!(basis.len(), n - 2);

        let m = basis.len();
        let mut gram = Vec::with_capacity(m * m);
        for x in &basis {
            for y in &basis {
                gram.push(self.bilinear(x, y));
            }
        }
        GramForm::new(f, m, gram)
            .and_then(|g| g.diagonalize())
            .expect("complement of a hyperbolic plane is nondegenerate")
            .form
    }

    /// Equality in the Witt ring: `f ⊥ -g` is hyperbolic.
    pub fn witt_equal(&self, other: &DiagonalForm) -> Result<bool, FormError> {
        let diff = self.orthogonal_sum(&other.negated())?;
        Ok(diff.witt_decompose().anisotropic.rank() == 0)
    }

    /// Isometry test by rank and determinant class, which is complete over
    /// finite fields of odd characteristic.
    pub fn isometric_by_invariants(&self, other: &DiagonalForm) -> Result<bool, FormError> {
        self.same_field(other)?;
        Ok(self.rank() == other.rank() && self.determinant_class() == other.determinant_class())
    }
}

impl fmt::Debug for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        write!(f, "<{}>", body.join(","))
    }
}
