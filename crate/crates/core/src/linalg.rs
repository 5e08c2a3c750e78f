//! Exact sparse linear algebra: echelon forms, rank, kernels.
//!
//! Both prime fields and the rationals go through the same elimination code;
//! the field context supplies the arithmetic.

use crate::field::Field;

/// Sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

pub fn to_dense<F: Field>(f: &F, v: &[(usize, F::Elem)], dim: usize) -> Vec<F::Elem> {
    let mut d = vec![f.zero(); dim];
    for (i, c) in v {
        d[*i] = c.clone();
    }
    d
}

pub fn to_sparse<F: Field>(f: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(c))
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// `a + c * b` on sparse vectors.
pub fn axpy<F: Field>(
    f: &F,
    a: &[(usize, F::Elem)],
    c: &F::Elem,
    b: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = f.mul(c, &b[j].1);
            if !f.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec<F::Elem>>) -> Self {
        debug_assert!(data.iter().all(|r| r.iter().all(|(c, _)| *c < cols)));
        SparseMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_dense(f: &F, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| to_sparse(f, &r.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>()))
            .collect();
        SparseMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn identity(f: &F, n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, f.one())]).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, F::Elem)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, f: &F, i: usize, j: usize) -> F::Elem {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => f.zero(),
        }
    }

    pub fn set(&mut self, f: &F, i: usize, j: usize, v: F::Elem) {
        assert!(i < self.rows && j < self.cols);
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => {
                if f.is_zero(&v) {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !f.is_zero(&v) {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, c) in r {
                data[*j].push((i, c.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul_vec(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .fold(f.zero(), |acc, (j, c)| f.add(&acc, &f.mul(c, &v[*j])))
            })
            .collect()
    }
}

/// An incrementally built row-echelon basis of a subspace of `k^dim`.
///
/// Every stored row has a leading one at its pivot column; rows may still
/// carry entries in later pivot columns until [`EchelonBasis::into_reduced`].
#[derive(Debug, Clone)]
pub struct EchelonBasis<F: Field> {
    dim: usize,
    rows: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
            pivot_row: vec![None; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Eliminates all pivot columns from a dense vector in place.
    pub fn reduce_dense(&self, f: &F, acc: &mut [F::Elem]) {
        for c in 0..self.dim {
            if f.is_zero(&acc[c]) {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let factor = acc[c].clone();
                for (j, v) in &self.rows[r] {
                    acc[*j] = f.sub_mul(&acc[*j], &factor, v);
                }
            }
        }
    }

    pub fn reduce(&self, f: &F, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        if v.is_empty() {
            return Vec::new();
        }
        let mut acc = to_dense(f, v, self.dim);
        self.reduce_dense(f, &mut acc);
        to_sparse(f, &acc)
    }

    pub fn contains(&self, f: &F, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(f, v).is_empty()
    }

    /// Adds `v` to the span. Returns the new pivot column if the rank grew.
    pub fn insert(&mut self, f: &F, v: &[(usize, F::Elem)]) -> Option<usize> {
        let r = self.reduce(f, v);
        self.insert_reduced(f, r)
    }

    /// Adds an already-reduced nonzero vector (as returned by [`Self::reduce`]).
    pub fn insert_reduced(&mut self, f: &F, r: SparseVec<F::Elem>) -> Option<usize> {
        let (pc, lead) = r.first().cloned()?;
        let inv = f.inv(&lead);
        let row: SparseVec<F::Elem> = r.into_iter().map(|(j, c)| (j, f.mul(&c, &inv))).collect();
        self.pivot_row[pc] = Some(self.rows.len());
        self.rows.push(row);
        Some(pc)
    }

    /// Reduced row-echelon rows sorted by pivot column.
    pub fn into_reduced(self, f: &F) -> Vec<SparseVec<F::Elem>> {
        let mut order: Vec<(usize, usize)> = self
            .pivot_row
            .iter()
            .enumerate()
            .filter_map(|(c, r)| r.map(|r| (c, r)))
            .collect();
        order.sort();
        let mut rows = self.rows;
        // back-substitute from the last pivot upward
        let pivot_row = self.pivot_row;
        for &(_, r) in order.iter().rev() {
            let row = std::mem::take(&mut rows[r]);
            let mut acc = to_dense(f, &row, self.dim);
            let lead = row[0].0;
            for c in lead + 1..self.dim {
                if f.is_zero(&acc[c]) {
                    continue;
                }
                if let Some(pr) = pivot_row[c] {
                    let factor = acc[c].clone();
                    for (j, v) in &rows[pr] {
                        acc[*j] = f.sub_mul(&acc[*j], &factor, v);
                    }
                }
            }
            rows[r] = to_sparse(f, &acc);
        }
        order
            .into_iter()
            .map(|(_, r)| std::mem::take(&mut rows[r]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub rank: usize,
    pub matrix: SparseMatrix<F>,
    pub pivot_cols: Vec<usize>,
}

/// Reduced row-echelon form. Zero rows are dropped from `matrix`, which has
/// `rank` rows ordered by pivot column.
pub fn rref<F: Field>(f: &F, m: &SparseMatrix<F>) -> Rref<F> {
    let mut e = EchelonBasis::new(m.cols);
    for r in &m.data {
        e.insert(f, r);
    }
    let rows = e.into_reduced(f);
    let pivot_cols = rows.iter().map(|r| r[0].0).collect();
    Rref {
        rank: rows.len(),
        matrix: SparseMatrix::from_rows(m.cols, rows),
        pivot_cols,
    }
}

pub fn rank<F: Field>(f: &F, m: &SparseMatrix<F>) -> usize {
    let mut e = EchelonBasis::new(m.cols);
    for r in &m.data {
        e.insert(f, r);
    }
    e.rank()
}

/// Canonical basis of the right null space: one vector per free column, in
/// column order, with that free coordinate equal to one.
pub fn kernel_basis<F: Field>(f: &F, m: &SparseMatrix<F>) -> Vec<Vec<F::Elem>> {
    let r = rref(f, m);
    let mut is_pivot = vec![false; m.cols];
    for &c in &r.pivot_cols {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); m.cols];
            v[free] = f.one();
            for (row, &pc) in r.pivot_cols.iter().enumerate() {
                let e = r.matrix.get(f, row, free);
                if !f.is_zero(&e) {
                    v[pc] = f.neg(&e);
                }
            }
            v
        })
        .collect()
}

/// Linear relations among the given vectors: all `c` with `sum c_k v_k = 0`.
pub fn relations_among<F: Field>(
    f: &F,
    dim: usize,
    vecs: &[SparseVec<F::Elem>],
) -> Vec<Vec<F::Elem>> {
    let m = SparseMatrix::from_rows(dim, vecs.to_vec()).transpose();
    kernel_basis(f, &m)
}
