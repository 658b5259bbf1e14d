//! Bit-packed linear algebra over GF(2).
//!
//! Vectors pack bit `i` into word `i / 64` at position `i % 64`. Matrices are
//! row-major collections of equal-length vectors. Elimination pivots on the
//! lowest set column of each row.

use std::fmt;

use crate::error::{BccError, Result};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A dense vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// Vector with ones exactly at `indices`. Repeated indices cancel.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from the low `len` bits of `mask`.
    pub fn from_u128(len: usize, mask: u128) -> Self {
        assert!(len <= 128);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask as u64;
        }
        if len > 64 {
            v.words[1] = (mask >> 64) as u64;
        }
        v.clear_tail();
        v
    }

    /// The vector as a 128-bit mask. Panics if longer than 128 bits.
    pub fn to_u128(&self) -> u128 {
        assert!(self.len <= 128, "vector of length {} does not fit a u128", self.len);
        let lo = self.words.first().copied().unwrap_or(0) as u128;
        let hi = self.words.get(1).copied().unwrap_or(0) as u128;
        lo | (hi << 64)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Panics if lengths differ.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "length mismatch in and");
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn or(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "length mismatch in or");
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Indices of set bits in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + t)
                }
            })
        })
    }

    /// Returns the sub-vector `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len);
        Self::from_indices(
            len,
            self.ones()
                .filter(|&i| i >= start && i < start + len)
                .map(|i| i - start),
        )
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD_BITS;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::from_indices(n, [i])).collect(),
        }
    }

    /// Panics if a row has the wrong length.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length {} != cols {}", r.len(), cols);
        }
        Self { cols, rows }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    /// Vertical stack of `self` over `other`.
    pub fn stack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix { cols: self.cols, rows }
    }

    /// `M · v` as a vector of row parities.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        BitVector::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self).rank()
    }

    pub fn in_rowspace(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.cols {
            return Err(BccError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(Echelon::new(self).contains(v))
    }

    /// Basis of `{x : M xᵀ = 0}`, one vector per row.
    pub fn kernel_basis(&self) -> BitMatrix {
        let ech = Echelon::new(self);
        let mut pivot_of_col = vec![None; self.cols];
        for (r, &c) in ech.pivots.iter().enumerate() {
            pivot_of_col[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| pivot_of_col[c].is_none()) {
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (r, row) in ech.rows.iter().enumerate() {
                if row.get(free) {
                    v.set(ech.pivots[r], true);
                }
            }
            basis.push(v);
        }
        BitMatrix {
            cols: self.cols,
            rows: basis,
        }
    }

    /// A maximal linearly independent subset of the rows, in original order.
    pub fn independent_rows(&self) -> BitMatrix {
        let mut ech = Echelon::empty(self.cols);
        let mut keep = Vec::new();
        for r in &self.rows {
            if ech.insert(r.clone()) {
                keep.push(r.clone());
            }
        }
        BitMatrix {
            cols: self.cols,
            rows: keep,
        }
    }

    /// True iff both matrices have the same row space.
    pub fn same_rowspace(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let a = Echelon::new(self);
        let b = Echelon::new(other);
        a.rank() == b.rank() && other.rows.iter().all(|r| a.contains(r))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form, kept for repeated membership queries.
///
/// Every row has a distinct pivot column (its lowest set bit) and no other
/// row has that column set.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn empty(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn new(m: &BitMatrix) -> Self {
        let mut e = Self::empty(m.cols);
        for r in &m.rows {
            e.insert(r.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` reduced against the basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns false if it was already contained.
    pub fn insert(&mut self, v: BitVector) -> bool {
        let v = self.reduce(&v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

/// Row-reduced basis of a span of `u128` masks, for the enumeration hot loops.
#[derive(Clone, Debug, Default)]
pub struct MaskBasis {
    rows: Vec<u128>,
}

impl MaskBasis {
    pub fn new(masks: impl IntoIterator<Item = u128>) -> Self {
        let mut b = Self::default();
        for m in masks {
            b.insert(m);
        }
        b
    }

    #[inline]
    pub fn reduce(&self, mut v: u128) -> u128 {
        for &r in &self.rows {
            let p = r.trailing_zeros();
            if (v >> p) & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    #[inline]
    pub fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }

    pub fn insert(&mut self, v: u128) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let p = v.trailing_zeros();
        for r in &mut self.rows {
            if (*r >> p) & 1 == 1 {
                *r ^= v;
            }
        }
        self.rows.push(v);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[u128] {
        &self.rows
    }

    /// All elements of the span, in Gray-code order starting from zero.
    pub fn span(&self) -> Vec<u128> {
        let k = self.rows.len();
        assert!(k < 40, "span of rank {k} too large to enumerate");
        let mut out = Vec::with_capacity(1 << k);
        let mut cur = 0u128;
        out.push(cur);
        for i in 1u64..(1u64 << k) {
            cur ^= self.rows[i.trailing_zeros() as usize];
            out.push(cur);
        }
        out
    }
}
