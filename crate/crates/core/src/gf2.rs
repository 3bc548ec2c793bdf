//! Linear algebra over the two-element field.
//!
//! Rows are bit-packed into 64-bit words. Elimination always pivots on the
//! lowest free column, and columns follow basis declaration order, so every
//! rank and every reduced form is reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign};

const WORD: usize = 64;

/// Index of a class in the declared basis of an [`UnstableModule`](crate::steenrod::UnstableModule).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub usize);

/// A fixed-length row of bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut row = BitRow::zeros(len);
        for i in ones {
            row.toggle(i);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.toggle(i);
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set bit at or after `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from / WORD;
        let mut word = self.words[wi] & (!0u64 << (from % WORD));
        loop {
            if word != 0 {
                let i = wi * WORD + word.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            word = self.words[wi];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.next_one(0);
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.next_one(cur + 1);
            Some(cur)
        })
    }
}

/// Dense bit matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    rows: Vec<BitRow>,
    cols: usize,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows: vec![BitRow::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of `'0'`/`'1'` characters.
    ///
    /// Panics if the rows have different lengths or contain other characters.
    pub fn from_bit_strings(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged bit-string rows");
                let mut row = BitRow::zeros(cols);
                for (i, c) in r.chars().enumerate() {
                    match c {
                        '0' => {}
                        '1' => row.toggle(i),
                        other => panic!("invalid bit character {other:?}"),
                    }
                }
                row
            })
            .collect();
        F2Matrix { rows, cols }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitRow>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix { rows, cols }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitRow {
        &self.rows[r]
    }

    pub fn transpose(&self) -> Self {
        let mut t = F2Matrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Reduces the rows in place to echelon form and returns the pivot columns.
    pub fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            if next_row == self.rows.len() {
                break;
            }
            let Some(found) = (next_row..self.rows.len()).find(|&r| self.rows[r].get(col)) else {
                continue;
            };
            self.rows.swap(next_row, found);
            let (done, rest) = self.rows.split_at_mut(next_row + 1);
            let pivot_row = &done[next_row];
            for row in rest.iter_mut() {
                if row.get(col) {
                    row.xor_assign(pivot_row);
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        pivots
    }
}

/// Rank over GF(2).
pub fn rank(m: &F2Matrix) -> usize {
    m.clone().echelonize().len()
}

/// A homogeneous element of H*(X; F2): a set of basis classes, each with
/// coefficient one, all in the same degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    degree: usize,
    terms: BTreeSet<ClassId>,
}

impl F2Vector {
    pub fn zero(degree: usize) -> Self {
        F2Vector {
            degree,
            terms: BTreeSet::new(),
        }
    }

    pub fn basis(degree: usize, id: ClassId) -> Self {
        F2Vector {
            degree,
            terms: BTreeSet::from([id]),
        }
    }

    /// Sums the given classes; repeated ids cancel in pairs.
    pub fn from_ids(degree: usize, ids: impl IntoIterator<Item = ClassId>) -> Self {
        let mut v = F2Vector::zero(degree);
        for id in ids {
            v.toggle(id);
        }
        v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeSet<ClassId> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn toggle(&mut self, id: ClassId) {
        if !self.terms.remove(&id) {
            self.terms.insert(id);
        }
    }
}

impl AddAssign<&F2Vector> for F2Vector {
    fn add_assign(&mut self, rhs: &F2Vector) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = rhs.degree;
        }
        assert_eq!(
            self.degree, rhs.degree,
            "adding classes of different degrees"
        );
        for &id in &rhs.terms {
            self.toggle(id);
        }
    }
}

impl Add<&F2Vector> for &F2Vector {
    type Output = F2Vector;
    fn add(self, rhs: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|id| format!("#{}", id.0)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Anything with a degree and a finite set of coordinates in a fixed basis of
/// that degree.
pub trait GradedElement {
    fn degree(&self) -> usize;
    /// Coordinates with coefficient one, in any order.
    fn support(&self) -> Vec<usize>;
}

impl GradedElement for F2Vector {
    fn degree(&self) -> usize {
        self.degree
    }

    fn support(&self) -> Vec<usize> {
        self.terms.iter().map(|id| id.0).collect()
    }
}

fn matrix_of<'a, E: GradedElement + 'a>(elems: impl IntoIterator<Item = &'a E>) -> F2Matrix {
    let supports: Vec<Vec<usize>> = elems.into_iter().map(|e| e.support()).collect();
    let cols = supports
        .iter()
        .flat_map(|s| s.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let rows = supports
        .into_iter()
        .map(|s| BitRow::from_indices(cols, s))
        .collect();
    F2Matrix::from_rows(cols, rows)
}

/// Dimension of the span in every degree that has a nonzero element.
pub fn span_dims_by_degree<E: GradedElement>(elems: &[E]) -> BTreeMap<usize, usize> {
    let mut by_degree: BTreeMap<usize, Vec<&E>> = BTreeMap::new();
    for e in elems {
        by_degree.entry(e.degree()).or_default().push(e);
    }
    by_degree
        .into_iter()
        .filter_map(|(d, group)| {
            let r = rank(&matrix_of(group));
            (r > 0).then_some((d, r))
        })
        .collect()
}

/// Whether `w` is an F2-combination of the elements of `span` with the same degree.
pub fn contains<E: GradedElement>(span: &[E], w: &E) -> bool {
    if w.support().is_empty() {
        return true;
    }
    let same: Vec<&E> = span.iter().filter(|e| e.degree() == w.degree()).collect();
    let base = rank(&matrix_of(same.iter().copied()));
    let with_w = rank(&matrix_of(same.into_iter().chain(std::iter::once(w))));
    base == with_w
}
