//! Exact integer and rational matrix algebra.
//!
//! Boundary matrices, Smith normal forms, ranks and signatures of symmetric
//! forms. All entries are arbitrary precision; nothing here rounds.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, found {found}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("cannot multiply a {0}x{1} matrix by a {2}x{3} matrix")]
    ProductShape(usize, usize, usize, usize),
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                rows,
                cols,
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(n: usize, diag: &[T]) -> Self {
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> core::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ProductShape(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * &rhs[(k, j)];
                    let cell = &mut out[(i, j)];
                    *cell = core::mem::replace(cell, T::zero()) + prod;
                }
            }
        }
        Ok(out)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self, LinalgError> {
        Self::from_vec(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = v / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -core::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }
}

/// Smith normal form `U·A·V = D` with `D` diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub diag: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// The full `rows x cols` diagonal matrix `D`.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.rows());
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

/// Row and column operations are mirrored into these when present.
struct Transforms<'a> {
    left: Option<&'a mut IntMatrix>,
    right: Option<&'a mut IntMatrix>,
}

impl Transforms<'_> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some(u) = self.left.as_deref_mut() {
            u.swap_rows(a, b);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some(v) = self.right.as_deref_mut() {
            v.swap_cols(a, b);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if let Some(u) = self.left.as_deref_mut() {
            u.add_row_multiple(dst, src, k);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if let Some(v) = self.right.as_deref_mut() {
            v.add_col_multiple(dst, src, k);
        }
    }
    fn negate_row(&mut self, i: usize) {
        if let Some(u) = self.left.as_deref_mut() {
            u.negate_row(i);
        }
    }
}

/// Smallest nonzero |entry| in the trailing block starting at `(t, t)`;
/// ties go to the first entry in row-major order.
fn min_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some(b) if d[b].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn diagonalize(d: &mut IntMatrix, mut tr: Transforms<'_>) -> Vec<BigInt> {
    let (m, n) = (d.rows(), d.cols());
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_pivot(d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        tr.swap_rows(t, pi);
        d.swap_cols(t, pj);
        tr.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                tr.add_row(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                tr.add_col(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if !dirty {
                let pivot = d[(t, t)].clone();
                let offender = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !d[(i, j)].is_multiple_of(&pivot));
                match offender {
                    Some((i, _)) => {
                        let one = BigInt::one();
                        d.add_row_multiple(t, i, &one);
                        tr.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            let (pi, pj) = min_pivot(d, t).expect("block still has a nonzero entry");
            d.swap_rows(t, pi);
            tr.swap_rows(t, pi);
            d.swap_cols(t, pj);
            tr.swap_cols(t, pj);
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            tr.negate_row(t);
        }
        t += 1;
    }
    (0..t).map(|i| d[(i, i)].clone()).collect()
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut d = a.clone();
    let mut left = IntMatrix::identity(a.rows());
    let mut right = IntMatrix::identity(a.cols());
    let diag = diagonalize(
        &mut d,
        Transforms {
            left: Some(&mut left),
            right: Some(&mut right),
        },
    );
    SnfResult { diag, left, right }
}

/// Invariant factors only; skips the transform bookkeeping.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut d = a.clone();
    diagonalize(
        &mut d,
        Transforms {
            left: None,
            right: None,
        },
    )
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rational_rank(a: &IntMatrix) -> usize {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(rank, p);
        for i in rank + 1..rows {
            if m[(i, c)].is_zero() {
                continue;
            }
            let (pv, iv) = (m[(rank, c)].clone(), m[(i, c)].clone());
            let g = pv.gcd(&iv);
            let (fp, fi) = (&pv / &g, &iv / &g);
            for j in c..cols {
                let v = &m[(i, j)] * &fp - &m[(rank, j)] * &fi;
                m[(i, j)] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over the prime field `F_p`.
pub fn rank_mod_p(a: &IntMatrix, p: u64) -> usize {
    let modulus = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| {
                    let r = x.mod_floor(&modulus);
                    r.iter_u64_digits().next().unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let inv = |x: u64| -> u64 {
        // Fermat: x^(p-2)
        let (mut base, mut e, mut acc) = (x % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * base as u128) % p as u128) as u64;
            }
            base = ((base as u128 * base as u128) % p as u128) as u64;
            e >>= 1;
        }
        acc
    };
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let scale = inv(m[rank][c]);
        for x in &mut m[rank][c..] {
            *x = ((*x as u128 * scale as u128) % p as u128) as u64;
        }
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                let sub = ((f as u128 * y as u128) % p as u128) as u64;
                *x = (*x + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rational_matrix_rank(a: &RatMatrix) -> usize {
    let mut basis = EchelonBasis::new(a.cols());
    (0..a.rows())
        .filter(|&i| basis.insert(a.row(i).to_vec()))
        .count()
}

/// Incrementally maintained row-echelon basis of a subspace of `Q^n`.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    len: usize,
    // (pivot column, row normalized so that the pivot is 1)
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis {
            len,
            rows: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<BigRational>) -> bool {
        assert_eq!(v.len(), self.len, "vector length");
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let f = row[pivot].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

/// Inertia of a symmetric rational form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignatureTriple {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl SignatureTriple {
    pub fn signature(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn dimension(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }
}

/// Counts positive, negative and zero entries after congruence
/// diagonalization over the rationals.
pub fn symmetric_signature(q: &RatMatrix) -> Result<SignatureTriple, LinalgError> {
    if !q.is_square() {
        return Err(LinalgError::NotSquare {
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    let n = q.rows();
    for i in 0..n {
        for j in i + 1..n {
            if q[(i, j)] != q[(j, i)] {
                return Err(LinalgError::NotSymmetric { row: i, col: j });
            }
        }
    }
    let mut a = q.clone();
    let mut out = SignatureTriple::default();
    let mut k = 0;
    while k < n {
        let pivot = match (k..n).find(|&i| !a[(i, i)].is_zero()) {
            Some(p) => p,
            None => {
                let off = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[(i, j)].is_zero());
                let Some((i, j)) = off else {
                    out.n_zero += n - k;
                    break;
                };
                // a_ii = a_jj = 0, so adding j to i leaves 2·a_ij on the diagonal.
                congruence_add(&mut a, i, j);
                i
            }
        };
        congruence_swap(&mut a, k, pivot);
        let p = a[(k, k)].clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &p;
            for j in k..n {
                let v = &f * &a[(k, j)];
                a[(i, j)] -= v;
            }
            for j in k..n {
                let v = &f * &a[(j, k)];
                a[(j, i)] -= v;
            }
        }
        if p.is_positive() {
            out.n_plus += 1;
        } else {
            out.n_minus += 1;
        }
        k += 1;
    }
    Ok(out)
}

fn congruence_swap(a: &mut RatMatrix, x: usize, y: usize) {
    a.swap_rows(x, y);
    a.swap_cols(x, y);
}

// row_i += row_j, then col_i += col_j
fn congruence_add(a: &mut RatMatrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a[(j, c)].clone();
        a[(i, c)] += v;
    }
    for r in 0..n {
        let v = a[(r, j)].clone();
        a[(r, i)] += v;
    }
}
