//! Exact field arithmetic and the dense matrix kernels that every linear
//! matroid operation reduces to.
//!
//! Matrices are generic over a [`Field`] context. The context carries any
//! runtime data (the modulus of a prime field) so that element values can
//! stay plain `Copy` integers. Any exact `num_traits::Num` type, such as
//! `num_rational::BigRational`, can be used through [`Exact`].

use std::fmt::Debug;
use std::marker::PhantomData;

use itertools::Itertools;
use num_traits::Num;
use thiserror::Error;

/// The modulus used when none is given: the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("cannot take {p} columns' minors with only {rows} rows")]
    TooManyColumns { p: usize, rows: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// Arithmetic context for a field.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// The prime field GF(p), elements stored as residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self, FieldError> {
        if !is_prime(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduces an arbitrary integer into the field.
    pub fn reduce(&self, value: i64) -> u64 {
        value.rem_euclid(self.modulus as i64) as u64
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        let mut b = base % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, b, self.modulus);
            }
            b = mul_mod(b, b, self.modulus);
            exp >>= 1;
        }
        acc
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { modulus: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.modulus)
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    // extended Euclid
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.modulus as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.modulus as i128) as u64)
    }
}

/// Any exact numeric type implementing `num_traits::Num`, used as its own field.
#[derive(Debug)]
pub struct Exact<T>(PhantomData<T>);

impl<T> Exact<T> {
    pub fn new() -> Self {
        Exact(PhantomData)
    }
}

impl<T> Default for Exact<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for Exact<T> {
    fn clone(&self) -> Self {
        Self::new()
    }
}

impl<T> Field for Exact<T>
where
    T: Num + Clone + Debug + Send + Sync,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }
    fn neg(&self, a: &T) -> T {
        T::zero() - a.clone()
    }
    fn inv(&self, a: &T) -> Result<T, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(T::one() / a.clone())
    }
    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let f = PrimeField { modulus: n };
    'witness: for &a in &BASES {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> FieldMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Self { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self, FieldError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(FieldError::Shape("ragged rows".into()));
        }
        Ok(Self { field, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: F, rows: usize, columns: &[Vec<F::Elem>]) -> Result<Self, FieldError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(FieldError::Shape("column length differs from row count".into()));
        }
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F::Elem) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.field.clone(), self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.data[r * m.cols + j] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut m = Self::zeros(self.field.clone(), rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            m.data[i * m.cols..(i + 1) * m.cols].clone_from_slice(self.row(r));
        }
        m
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        if self.cols != rhs.rows {
            return Err(FieldError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = f.mul(a, rhs.get(l, j));
                    let cell = &mut out.data[i * rhs.cols + j];
                    *cell = f.add(cell, &t);
                }
            }
        }
        Ok(out)
    }

    /// Multiplies column `c` by `s`.
    pub fn scale_column(&mut self, c: usize, s: &F::Elem) {
        for r in 0..self.rows {
            let v = self.field.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Reduced row echelon form in place. Returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(sel) = (pr..self.rows).find(|&r| !f.is_zero(self.get(r, c))) else {
                continue;
            };
            if sel != pr {
                for j in 0..self.cols {
                    self.data.swap(sel * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = f.inv(self.get(pr, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(pr, j), &inv);
                self.set(pr, j, v);
            }
            for r in 0..self.rows {
                if r == pr || f.is_zero(self.get(r, c)) {
                    continue;
                }
                let factor = self.get(r, c).clone();
                for j in c..self.cols {
                    let t = f.mul(&factor, self.get(pr, j));
                    let v = f.sub(self.get(r, j), &t);
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    /// Column rank together with the lexicographically earliest column basis.
    pub fn rank_and_pivots(&self) -> (usize, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        (pivots.len(), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rank_and_pivots().0
    }

    /// Determinant of a square matrix by elimination.
    pub fn determinant(&self) -> Result<F::Elem, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::Shape(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(sel) = (c..n).find(|&r| !f.is_zero(&m[r * n + c])) else {
                return Ok(f.zero());
            };
            if sel != c {
                for j in 0..n {
                    m.swap(sel * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let pivot = m[c * n + c].clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot)?;
            for r in c + 1..n {
                if f.is_zero(&m[r * n + c]) {
                    continue;
                }
                let factor = f.mul(&m[r * n + c], &inv);
                for j in c..n {
                    let t = f.mul(&factor, &m[c * n + j]);
                    m[r * n + j] = f.sub(&m[r * n + j], &t);
                }
            }
        }
        Ok(det)
    }

    /// All maximal minors of a matrix with at least as many rows as columns,
    /// indexed by row subsets of size `cols` in lexicographic order.
    ///
    /// The result is the coordinate vector of the wedge product of the
    /// columns. It is zero exactly when the columns are dependent.
    pub fn wedge_vector(&self) -> Result<Vec<F::Elem>, FieldError> {
        let p = self.cols;
        if p > self.rows {
            return Err(FieldError::TooManyColumns { p, rows: self.rows });
        }
        Ok((0..self.rows)
            .combinations(p)
            .map(|rows| self.select_rows(&rows).determinant().expect("square minor"))
            .collect())
    }
}

/// Incremental row-echelon basis: decides whether each new vector is
/// independent of the ones accepted so far.
#[derive(Debug, Clone)]
pub struct EchelonBasis<F: Field> {
    field: F,
    // reduced rows paired with their pivot coordinate (pivot entry is one)
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F) -> Self {
        Self { field, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the basis; if something nonzero remains the
    /// remainder joins the basis and `true` is returned.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        let f = &self.field;
        for (pivot, row) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(row) {
                let t = f.mul(&factor, y);
                *x = f.sub(x, &t);
            }
        }
        let Some(pivot) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[pivot]).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        // keep earlier rows reduced in the new pivot coordinate
        for (_, row) in self.rows.iter_mut() {
            if f.is_zero(&row[pivot]) {
                continue;
            }
            let factor = row[pivot].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                let t = f.mul(&factor, y);
                *x = f.sub(x, &t);
            }
        }
        self.rows.push((pivot, v));
        true
    }
}
