//! Dense linear algebra over the two-element field.
//!
//! Vectors are packed into `u64` words and row operations are word-wise XOR.
//! Elimination always pivots on the leftmost nonzero column using the first
//! available row, so echelon forms and kernel bases are reproducible.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

const WORD_BITS: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over F₂ of fixed ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// The `index`-th standard basis vector.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I>(bits: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<u8>,
    {
        let bits: Vec<u8> = bits.into_iter().map(Into::into).collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit {index} out of range {}", self.len);
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit {index} out of range {}", self.len);
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(i * WORD_BITS + bit)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Standard inner product.
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "dimension mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

impl BitXorAssign<&F2Vector> for F2Vector {
    fn bitxor_assign(&mut self, rhs: &F2Vector) {
        assert_eq!(self.len, rhs.len, "dimension mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&F2Vector> for &F2Vector {
    type Output = F2Vector;

    fn bitxor(self, rhs: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector(")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

/// A dense matrix over F₂ stored by rows.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zeros(row_count: usize, col_count: usize) -> Self {
        Self {
            cols: col_count,
            rows: vec![F2Vector::zeros(col_count); row_count],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| F2Vector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows; every row must have length `col_count`.
    pub fn from_rows(col_count: usize, rows: Vec<F2Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), col_count, "row length mismatch");
        }
        Self {
            cols: col_count,
            rows,
        }
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(row_count: usize, columns: &[F2Vector]) -> Self {
        let mut m = Self::zeros(row_count, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), row_count, "column length mismatch");
            for i in c.ones() {
                m.rows[i].set(j, true);
            }
        }
        m
    }

    pub fn from_bit_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter().map(|r| F2Vector::from_bits(r.iter().copied())).collect(),
        )
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.rows[row].set(col, value);
    }

    pub fn push_row(&mut self, row: F2Vector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(F2Vector::is_zero)
    }

    pub fn column(&self, col: usize) -> F2Vector {
        F2Vector::from_ones(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.get(col))
                .map(|(i, _)| i),
        )
    }

    pub fn transpose(&self) -> F2Matrix {
        let columns: Vec<F2Vector> = self.rows.clone();
        F2Matrix::from_columns(self.cols, &columns)
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        F2Vector::from_ones(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.dot(v))
                .map(|(i, _)| i),
        )
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, rhs.row_count(), "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = F2Vector::zeros(rhs.cols);
                for k in r.ones() {
                    out ^= &rhs.rows[k];
                }
                out
            })
            .collect();
        F2Matrix::from_rows(rhs.cols, rows)
    }

    /// Reduced row echelon form.
    pub fn echelon(&self) -> EchelonForm {
        EchelonForm::from_rows(self.cols, self.rows.clone())
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Rank, pivot columns and a kernel basis of `{v : self · v = 0}`.
    pub fn row_reduce(&self) -> RowReduction {
        let ech = self.echelon();
        let kernel_basis = ech.kernel_basis();
        RowReduction {
            rank: ech.rank(),
            pivot_columns: ech.pivots.clone(),
            kernel_basis,
        }
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    pub kernel_basis: Vec<F2Vector>,
}

/// Fully reduced row echelon form: row `i` has its pivot at `pivots[i]`,
/// pivots increase strictly, and every pivot column is zero in all other rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonForm {
    cols: usize,
    rows: Vec<F2Vector>,
    pivots: Vec<usize>,
}

impl EchelonForm {
    pub fn empty(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, mut rows: Vec<F2Vector>) -> Self {
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows.len() {
                break;
            }
            let Some(found) = (rank..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(rank, found);
            let (head, tail) = rows.split_at_mut(rank);
            let (pivot_row, rest) = tail.split_first_mut().expect("pivot row exists");
            for r in head.iter_mut().chain(rest.iter_mut()) {
                if r.get(col) {
                    *r ^= &*pivot_row;
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        let pivots = rows
            .iter()
            .map(|r| r.first_one().expect("echelon rows are nonzero"))
            .collect();
        Self { cols, rows, pivots }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.binary_search(&col).is_ok()
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.is_pivot(*c)).collect()
    }

    /// Clears every pivot coordinate of `v` using the rows. The result is the
    /// unique representative of `v` modulo the row space supported off the
    /// pivot columns.
    pub fn reduce(&self, v: &F2Vector) -> F2Vector {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out ^= row;
            }
        }
        out
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a vector to the row space, keeping the form fully reduced.
    /// Returns `false` if the vector was already in the span.
    pub fn insert(&mut self, v: &F2Vector) -> bool {
        let reduced = self.reduce(v);
        let Some(p) = reduced.first_one() else {
            return false;
        };
        for r in &mut self.rows {
            if r.get(p) {
                *r ^= &reduced;
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, reduced);
        self.pivots.insert(at, p);
        true
    }

    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = F2Vector::unit(self.cols, f);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// Solves for coordinates with respect to a fixed ordered list of linearly
/// independent vectors.
#[derive(Debug, Clone)]
pub struct CoordinateSolver {
    basis_len: usize,
    rows: Vec<F2Vector>,
    pivots: Vec<usize>,
    tags: Vec<F2Vector>,
}

impl CoordinateSolver {
    /// Returns `None` if the vectors are linearly dependent.
    pub fn new(dim: usize, basis: &[F2Vector]) -> Option<Self> {
        let n = basis.len();
        let mut solver = Self {
            basis_len: n,
            rows: Vec::with_capacity(n),
            pivots: Vec::with_capacity(n),
            tags: Vec::with_capacity(n),
        };
        for (i, b) in basis.iter().enumerate() {
            assert_eq!(b.len(), dim, "basis vector length mismatch");
            let (v, tag) = solver.eliminate(b.clone(), F2Vector::unit(n, i));
            let p = v.first_one()?;
            solver.rows.push(v);
            solver.pivots.push(p);
            solver.tags.push(tag);
        }
        Some(solver)
    }

    fn eliminate(&self, mut v: F2Vector, mut tag: F2Vector) -> (F2Vector, F2Vector) {
        for ((row, &p), t) in self.rows.iter().zip(&self.pivots).zip(&self.tags) {
            if v.get(p) {
                v ^= row;
                tag ^= t;
            }
        }
        (v, tag)
    }

    /// Coefficients `c` with `Σ c_i basis_i = v`, or `None` if `v` is outside
    /// the span.
    pub fn solve(&self, v: &F2Vector) -> Option<F2Vector> {
        let (rest, tag) = self.eliminate(v.clone(), F2Vector::zeros(self.basis_len));
        rest.is_zero().then_some(tag)
    }
}

/// Basis of a complement of `sub` inside `span(sup)`: vectors drawn from `sup`
/// (in order) that extend a basis of `sub`.
pub fn complement_basis(dim: usize, sub: &[F2Vector], sup: &[F2Vector]) -> Vec<F2Vector> {
    let mut ech = EchelonForm::from_rows(dim, sub.to_vec());
    sup.iter().filter(|v| ech.insert(v)).cloned().collect()
}

/// `C(n, k) mod 2` by Lucas' theorem: odd iff the binary digits of `k` are
/// dominated by those of `n`.
pub fn binom_mod2(n: u64, k: u64) -> bool {
    k <= n && (k & !n) == 0
}
