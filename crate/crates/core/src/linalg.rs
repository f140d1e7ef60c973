//! Sparse exact linear algebra over a [`CoeffField`].
//!
//! Elimination is deterministic: vectors are inserted in row order and each
//! reduced vector pivots on its lowest nonzero column.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{CoeffField, Scalar};

/// A sparse vector as a sorted list of `(index, nonzero coefficient)`.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `x + c * y` on sorted sparse vectors.
pub fn axpy(x: &[(usize, Scalar)], c: &Scalar, y: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + &(c * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A sparse matrix with no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    field: CoeffField,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zero(field: CoeffField, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(field: CoeffField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.add_entry(i, i, &field.one());
        }
        m
    }

    pub fn from_rows(field: CoeffField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.add_entry(i, j, &field.from_i64(v));
            }
        }
        m
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Adds `v` to entry `(r, c)`, dropping the entry if it cancels.
    pub fn add_entry(&mut self, r: usize, c: usize, v: &Scalar) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(|| self.field.zero());
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut m = Self::zero(self.field, self.rows, self.cols);
        for (r, c, v) in self.entries() {
            m.add_entry(r, c, &(v * s));
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (r, c, v) in other.entries() {
            m.add_entry(r, c, v);
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (r, c, v) in other.entries() {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zero(self.field, self.rows, other.cols);
        for (r, k, a) in self.entries() {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.add_entry(r, c, &(a * b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        let cols = self.columns();
        for (j, x) in v {
            if let Some(col) = cols.get(j) {
                for (i, a) in col {
                    let e = acc.entry(*i).or_insert_with(|| self.field.zero());
                    *e += &(a * x);
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Rows as sparse vectors.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            out[r].push((c, v.clone()));
        }
        out
    }

    fn columns(&self) -> BTreeMap<usize, Vec<(usize, Scalar)>> {
        let mut cols: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (r, c, v) in self.entries() {
            cols.entry(c).or_default().push((r, v.clone()));
        }
        cols
    }

    /// Columns as sparse vectors (the images of the basis vectors).
    pub fn column_vectors(&self) -> Vec<SparseVec> {
        let mut cols = self.columns();
        (0..self.cols).map(|c| cols.remove(&c).unwrap_or_default()).collect()
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

/// Row echelon form built by incremental insertion.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: CoeffField,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(field: CoeffField) -> Self {
        Echelon { field, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `v` until none of its entries sit in a pivot column.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut v: SparseVec = v.to_vec();
        let mut from = 0usize;
        loop {
            let hit = v
                .iter()
                .filter(|(c, _)| *c >= from)
                .find(|(c, _)| self.pivots.contains_key(c))
                .cloned();
            match hit {
                None => return v,
                Some((c, coeff)) => {
                    let row = &self.pivots[&c];
                    v = axpy(&v, &(-coeff), row);
                    from = c + 1;
                }
            }
        }
    }

    /// Inserts `v`; returns `true` when it was independent of the current span.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        let r = self.reduce(v);
        match r.first() {
            None => false,
            Some((c, lead)) => {
                let inv = lead.inverse();
                let row: SparseVec = r.iter().map(|(i, x)| (*i, x * &inv)).collect();
                let c = *c;
                self.pivots.insert(c, row);
                true
            }
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.pivots.values()
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Back-substitutes so every pivot column has a single nonzero entry.
    pub fn into_reduced(mut self) -> Self {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &cols {
            let row = self.pivots[&c].clone();
            for (_, other) in self.pivots.range_mut(..c) {
                if let Ok(pos) = other.binary_search_by_key(&c, |(i, _)| *i) {
                    let coeff = other[pos].1.clone();
                    *other = axpy(other, &(-coeff), &row);
                }
            }
        }
        self
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut ech = Echelon::new(m.field());
    for row in m.row_vectors() {
        ech.insert(&row);
    }
    ech.rank()
}

/// A basis of `{ v : m v = 0 }`; its size is `cols - rank(m)`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let field = m.field();
    let mut ech = Echelon::new(field);
    for row in m.row_vectors() {
        ech.insert(&row);
    }
    let ech = ech.into_reduced();
    let mut out = Vec::new();
    for free in (0..m.cols()).filter(|c| !ech.is_pivot(*c)) {
        let mut v: BTreeMap<usize, Scalar> = BTreeMap::new();
        v.insert(free, field.one());
        for (pc, row) in &ech.pivots {
            if let Ok(pos) = row.binary_search_by_key(&free, |(i, _)| *i) {
                v.insert(*pc, -row[pos].1.clone());
            }
        }
        out.push(v.into_iter().collect());
    }
    out
}

/// `dim ker(d_out) - rank(d_in)` for `d_in: C_{+} -> C`, `d_out: C -> C_{-}`.
pub fn homology_dimension(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::Invalid(format!(
            "incompatible differentials: d_in has {} rows, d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let comp = d_out.mul(d_in);
    if !comp.is_zero() {
        let (r, c, v) = comp.entries().next().unwrap();
        return Err(Error::CompositionNotZero(format!(
            "entry ({r},{c}) of d_out*d_in is {v}"
        )));
    }
    let kernel = d_out.cols() - d_out.rank();
    Ok(kernel - d_in.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoeffField {
        CoeffField::Rationals
    }

    #[test]
    fn rank_examples() {
        let f2 = CoeffField::Prime(2);
        assert_eq!(SparseMatrix::identity(f2, 2).rank(), 2);
        assert_eq!(SparseMatrix::zero(q(), 3, 4).rank(), 0);
        assert_eq!(SparseMatrix::from_rows(q(), &[vec![1, 2], vec![2, 4]]).rank(), 1);
        // singular mod 2 only
        let m = SparseMatrix::from_rows(f2, &[vec![1, 1], vec![1, 3]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(SparseMatrix::from_rows(q(), &[vec![1, 1], vec![1, 3]]).rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(q(), 2)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zero(q(), 1, 3)).len(), 3);
        let f2 = CoeffField::Prime(2);
        let k = kernel_basis(&SparseMatrix::from_rows(f2, &[vec![1, 1]]));
        assert_eq!(k, vec![vec![(0, f2.one()), (1, f2.one())]]);
    }

    #[test]
    fn homology_examples() {
        let z_in = SparseMatrix::zero(q(), 1, 0);
        let z_out = SparseMatrix::zero(q(), 0, 1);
        assert_eq!(homology_dimension(&z_in, &z_out).unwrap(), 1);
        // k -> k identity: homology vanishes at both spots
        let id = SparseMatrix::identity(q(), 1);
        assert_eq!(homology_dimension(&id, &SparseMatrix::zero(q(), 0, 1)).unwrap(), 0);
        assert_eq!(homology_dimension(&SparseMatrix::zero(q(), 1, 0), &id).unwrap(), 0);
        let bad = homology_dimension(&id, &id);
        assert!(matches!(bad, Err(Error::CompositionNotZero(_))));
    }

    #[test]
    fn quotient_reduction_clears_pivots() {
        let f = CoeffField::Prime(5);
        let mut e = Echelon::new(f);
        e.insert(&[(0, f.one()), (2, f.from_i64(3))]);
        e.insert(&[(1, f.one()), (2, f.one())]);
        let r = e.reduce(&[(0, f.one()), (1, f.one()), (2, f.one())]);
        assert!(r.iter().all(|(c, _)| !e.is_pivot(*c)));
        // 1 - 3 - 1 = -3 = 2 mod 5
        assert_eq!(r, vec![(2, f.from_i64(2))]);
    }
}
