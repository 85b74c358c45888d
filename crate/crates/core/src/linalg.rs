//! Dense exact matrices, row reduction, spinning and algebra closure.
//!
//! Vectors are plain `Vec<Scalar>` and act as columns: a matrix `g` acts on
//! `v` by `g * v`. Pivots are always chosen leftmost and worklists are FIFO,
//! so every routine here is deterministic.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}](", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, ")")
    }
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|s| s.field() != field) {
            return Err(Error::MixedFields);
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(field, data).expect("well-formed literal")
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::scalar(field, n, field.one())
    }

    pub fn scalar(field: FieldSpec, n: usize, s: Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    /// Matrix unit E_ij (zero-based).
    pub fn unit(field: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.data[i * n + j] = field.one();
        m
    }

    /// The square matrix whose row-major entries are `flat`.
    pub fn from_flat(field: FieldSpec, n: usize, flat: Vec<Scalar>) -> Self {
        debug_assert_eq!(flat.len(), n * n);
        Matrix { field, rows: n, cols: n, data: flat }
    }

    /// The matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.data[i * cols.len() + j] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// `Some(λ)` when the matrix equals λ·I.
    pub fn scalar_value(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(self.field.zero());
        }
        let lambda = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect_diag = i == j;
                let v = self.get(i, j);
                if (expect_diag && *v != lambda) || (!expect_diag && !v.is_zero()) {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).expect("compatible matrices")
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-self.field.one())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Two-sided inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        matrix_inverse(self)
    }
}

/// Reduced row echelon form together with rank and pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a.get(r, c).inv().expect("nonzero pivot");
        for j in c..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let sub = &factor * a.get(r, j);
                if !sub.is_zero() {
                    let v = a.get(i, j) - &sub;
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, rank: r, pivots }
}

/// Some `x` with `a x = b`, free variables set to zero; `None` when inconsistent.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if a.rows != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    let field = a.field;
    let mut aug = Matrix::zeros(field, a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, b[i].clone());
    }
    let red = rref(&aug);
    if red.pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); a.cols];
    for (row, &p) in red.pivots.iter().enumerate() {
        x[p] = red.matrix.get(row, a.cols).clone();
    }
    Ok(Some(x))
}

/// Basis of the right null space `{x : a x = 0}`, one vector per free column.
pub fn kernel(a: &Matrix) -> Vec<Vector> {
    let red = rref(a);
    let field = a.field;
    let free: Vec<usize> = (0..a.cols).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); a.cols];
            v[f] = field.one();
            for (row, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.matrix.get(row, f);
            }
            v
        })
        .collect()
}

pub fn matrix_inverse(m: &Matrix) -> Option<Matrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows;
    let field = m.field;
    let mut aug = Matrix::zeros(field, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, field.one());
    }
    let red = rref(&aug);
    if red.rank < n || red.pivots[n - 1] >= n {
        return None;
    }
    let mut inv = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, red.matrix.get(i, n + j).clone());
        }
    }
    Some(inv)
}

/// A subspace of K^n stored as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace { field, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Subspace { field, ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let m = Matrix::from_rows(field, vectors.to_vec()).expect("vectors of equal length");
        assert_eq!(m.cols, ambient, "vector length differs from ambient dimension");
        let red = rref(&m);
        let basis = (0..red.rank).map(|i| red.matrix.row(i).to_vec()).collect();
        Subspace { field, ambient, basis, pivots: red.pivots }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after reduction against the basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates of `v` relative to the RREF basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, &all)
    }
}

/// Incremental echelon basis that remembers how each row was built from the
/// inserted vectors, so membership queries can return coefficients.
#[derive(Clone, Debug)]
pub struct SpanIndex {
    field: FieldSpec,
    len: usize,
    rows: Vec<(usize, Vector, Vector)>,
}

impl SpanIndex {
    pub fn new(field: FieldSpec, len: usize) -> Self {
        SpanIndex { field, len, rows: Vec::new() }
    }

    pub fn from_vectors(field: FieldSpec, len: usize, vs: &[Vector]) -> (Self, Vec<bool>) {
        let mut idx = SpanIndex::new(field, len);
        let kept = vs.iter().map(|v| idx.insert(v)).collect();
        (idx, kept)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracked(&self, v: &[Scalar]) -> (Vector, Vector) {
        let mut r = v.to_vec();
        let mut combo = vec![self.field.zero(); self.rows.len()];
        for (pivot, row, row_combo) in &self.rows {
            let c = r[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
            for (x, y) in combo.iter_mut().zip(row_combo) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        (r, combo)
    }

    /// Adds `v` when it is independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let (mut r, combo) = self.reduce_tracked(v);
        let Some(pivot) = r.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = r[pivot].inv().expect("nonzero pivot");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        // new row = inv · (v + Σ combo_j · original_j)
        let k = self.rows.len();
        let mut new_combo: Vector = combo.iter().map(|c| c * &inv).collect();
        new_combo.push(inv);
        for (_, _, rc) in self.rows.iter_mut() {
            rc.push(self.field.zero());
        }
        debug_assert_eq!(new_combo.len(), k + 1);
        self.rows.push((pivot, r, new_combo));
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce_tracked(v).0.iter().all(Scalar::is_zero)
    }

    /// Coefficients `c` with `v = Σ c_k · original_k` over the independent inserted vectors.
    pub fn express(&self, v: &[Scalar]) -> Option<Vector> {
        let (r, combo) = self.reduce_tracked(v);
        if !r.iter().all(Scalar::is_zero) {
            return None;
        }
        // r = v + Σ combo_j original_j = 0
        let coeffs = combo.iter().map(|c| -c).collect();
        Some(coeffs)
    }
}

/// A scaled product of generators: `coeff · g[letters[0]] · g[letters[1]] ⋯`.
/// The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<usize>,
    pub coeff: Scalar,
}

impl Word {
    pub fn identity(field: FieldSpec) -> Self {
        Word { letters: Vec::new(), coeff: field.one() }
    }

    pub fn letter(field: FieldSpec, i: usize) -> Self {
        Word { letters: vec![i], coeff: field.one() }
    }

    pub fn evaluate(&self, gens: &[Matrix], n: usize) -> Matrix {
        let field = self.coeff.field();
        let mut acc = Matrix::identity(field, n);
        for &l in &self.letters {
            acc = acc.mul(&gens[l]);
        }
        acc.scale(&self.coeff)
    }

    pub fn render(&self, names: &[String]) -> String {
        let body = if self.letters.is_empty() {
            "1".to_string()
        } else {
            self.letters.iter().map(|&l| names[l].as_str()).collect::<Vec<_>>().join("*")
        };
        if self.coeff.is_one() {
            body
        } else {
            format!("{}*{}", self.coeff, body)
        }
    }
}

/// Result of spinning a single seed with word tracking: `vectors[i] = words[i] · seed`.
#[derive(Clone, Debug)]
pub struct SpinBasis {
    pub vectors: Vec<Vector>,
    pub words: Vec<Word>,
}

impl SpinBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Smallest subspace containing `seeds` and invariant under every action matrix.
pub fn spin(field: FieldSpec, ambient: usize, seeds: &[Vector], actions: &[Matrix]) -> Subspace {
    let mut index = SpanIndex::new(field, ambient);
    let mut found = Vec::new();
    let mut queue: VecDeque<Vector> = VecDeque::new();
    for s in seeds {
        if index.insert(s) {
            found.push(s.clone());
            queue.push_back(s.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        for g in actions {
            let w = g.mul_vec(&v);
            if index.insert(&w) {
                found.push(w.clone());
                queue.push_back(w);
            }
        }
    }
    Subspace::span(field, ambient, &found)
}

/// Spins one vector, recording for each new basis vector the word that produced it.
pub fn spin_tracked(seed: &[Scalar], actions: &[Matrix]) -> SpinBasis {
    let field = seed.first().map_or(FieldSpec::Rational, Scalar::field);
    let field = actions.first().map_or(field, Matrix::field);
    let mut index = SpanIndex::new(field, seed.len());
    let mut out = SpinBasis { vectors: Vec::new(), words: Vec::new() };
    if !index.insert(seed) {
        return out;
    }
    out.vectors.push(seed.to_vec());
    out.words.push(Word::identity(field));
    let mut head = 0;
    while head < out.vectors.len() {
        for (gi, g) in actions.iter().enumerate() {
            let w = g.mul_vec(&out.vectors[head]);
            if index.insert(&w) {
                let mut letters = vec![gi];
                letters.extend_from_slice(&out.words[head].letters);
                out.vectors.push(w);
                out.words.push(Word { letters, coeff: field.one() });
            }
        }
        head += 1;
    }
    out
}

/// Basis of the unital algebra generated by `gens`, identity first, each
/// basis element paired with the word that produced it.
#[derive(Clone, Debug)]
pub struct Closure {
    pub basis: Vec<Matrix>,
    pub words: Vec<Word>,
    pub index: SpanIndex,
}

impl Closure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index.contains(m.entries())
    }

    /// Coefficients of `m` over `basis`.
    pub fn express(&self, m: &Matrix) -> Option<Vector> {
        self.index.express(m.entries())
    }
}

/// Breadth-first closure under left multiplication by the generators.
pub fn algebra_closure(field: FieldSpec, n: usize, gens: &[Matrix]) -> Result<Closure> {
    for g in gens {
        if g.rows != n || g.cols != n {
            return Err(Error::ShapeMismatch(format!(
                "generator is {}x{}, expected {n}x{n}",
                g.rows, g.cols
            )));
        }
        if g.field != field {
            return Err(Error::MixedFields);
        }
    }
    let cap = (n * n).max(1);
    let one = Matrix::identity(field, n);
    let mut index = SpanIndex::new(field, n * n);
    index.insert(one.entries());
    let mut basis = vec![one];
    let mut words = vec![Word::identity(field)];
    let mut head = 0;
    while head < basis.len() {
        for (gi, g) in gens.iter().enumerate() {
            let prod = g.mul(&basis[head]);
            if index.insert(prod.entries()) {
                let mut letters = vec![gi];
                letters.extend_from_slice(&words[head].letters);
                if letters.len() > cap {
                    return Err(Error::ClosureTooLong(cap));
                }
                basis.push(prod);
                words.push(Word { letters, coeff: field.one() });
            }
        }
        head += 1;
    }
    Ok(Closure { basis, words, index })
}

/// Coefficients `c` with `Σ c_i basis_i = target`, or `None` when outside the span.
pub fn express_in_span(target: &Matrix, basis: &[Matrix]) -> Result<Option<Vector>> {
    let field = target.field;
    for b in basis {
        if (b.rows, b.cols) != (target.rows, target.cols) {
            return Err(Error::ShapeMismatch("basis element shape differs from target".into()));
        }
    }
    let cols: Vec<Vector> = basis.iter().map(|b| b.entries().to_vec()).collect();
    let a = Matrix::from_columns(field, target.rows * target.cols, &cols);
    solve(&a, target.entries())
}
