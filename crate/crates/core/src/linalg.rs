//! Dense exact linear algebra: matrices, reduced echelon form, kernels,
//! subspaces in canonical form, and quotient spaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, k: usize) -> Vector {
    let mut v = zero_vector(n);
    v[k] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Build from columns; `rows` fixes the height when there are no columns.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect()).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    t.set(j, i, x.clone());
                }
            }
        }
        t
    }

    pub fn map_entries(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map_entries(|x| c * x)
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix add shape");
        Matrix { rows: self.rows, cols: self.cols, data: add_vectors(&self.data, &o.data) }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sub shape");
        Matrix { rows: self.rows, cols: self.cols, data: sub_vectors(&self.data, &o.data) }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let (lo, hi) = (i * o.cols, (i + 1) * o.cols);
                axpy(&mut out.data[lo..hi], a, o.row(k));
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let mut out = zero_vector(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        out
    }

    /// Stack `self` on top of `o`.
    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "vstack width");
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Reduced row-echelon form, pivot columns and rank.
    pub fn rref(&self) -> (Matrix, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let x = m.get(r, j);
                if !x.is_zero() {
                    let y = x * &inv;
                    m.set(r, j, y);
                }
            }
            let pivot_row: Vector = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                let neg = -f;
                let (lo, hi) = (i * m.cols, (i + 1) * m.cols);
                axpy(&mut m.data[lo..hi], &neg, &pivot_row);
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        (m, pivots, rank)
    }

    pub fn rank(&self) -> usize {
        Subspace::from_vectors(self.cols, (0..self.rows).map(|i| self.row(i).to_vec())).dim()
    }

    /// Null space `{ v : self * v = 0 }`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots, rank) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors = free.iter().map(|&f| {
            let mut v = zero_vector(self.cols);
            v[f] = Scalar::one();
            for (k, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -r.get(k, f);
            }
            v
        });
        Subspace::from_vectors(self.cols, vectors)
    }

    /// Column space as a subspace of the target.
    pub fn image(&self) -> Subspace {
        Subspace::from_vectors(self.rows, self.columns())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots, _) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Some `x` with `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "rhs length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots, _) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(self.cols);
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r.get(k, self.cols).clone();
        }
        Some(x)
    }
}

/// Kronecker product `a ⊗ b`, index `(i, k) ↦ i * b.rows() + k`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    let y = b.get(k, l);
                    if !y.is_zero() {
                        out.set(i * b.rows() + k, j * b.cols() + l, x * y);
                    }
                }
            }
        }
    }
    out
}

/// Coordinates of `u ⊗ v`, index `i * v.len() + j`.
pub fn tensor_vectors(u: &[Scalar], v: &[Scalar]) -> Vector {
    let mut out = zero_vector(u.len() * v.len());
    for (i, x) in u.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in v.iter().enumerate() {
            if !y.is_zero() {
                out[i * v.len() + j] = x * y;
            }
        }
    }
    out
}

/// Column-major sparse matrix; each column holds its nonzero entries
/// sorted by row. Used for module actions, which are mostly zero.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Scalar)>>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} ({} nonzero)", self.rows, self.cols, self.nnz())
    }
}

/// Sorted `(index, value)` pairs without explicit zeros.
pub type SparseVector = Vec<(usize, Scalar)>;

/// Sums the terms by index and drops zeros.
pub fn sparse_collect(terms: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVector {
    let mut acc: std::collections::BTreeMap<usize, Scalar> = std::collections::BTreeMap::new();
    for (i, x) in terms {
        *acc.entry(i).or_default() += &x;
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVector {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, columns: (0..n).map(|i| vec![(i, Scalar::one())]).collect() }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        SparseMatrix { rows: m.rows(), cols: m.cols(), columns: (0..m.cols()).map(|j| sparse_from_dense(&m.column(j))).collect() }
    }

    /// Build from dense columns.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        SparseMatrix { rows, cols: columns.len(), columns: columns.iter().map(|c| sparse_from_dense(c)).collect() }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn sparse_column(&self, j: usize) -> &[(usize, Scalar)] {
        &self.columns[j]
    }

    pub fn column(&self, j: usize) -> Vector {
        let mut v = zero_vector(self.rows);
        for (i, x) in &self.columns[j] {
            v[*i] = x.clone();
        }
        v
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "sparse matrix-vector shape");
        let mut out = zero_vector(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in &self.columns[j] {
                out[*i] += &(a * x);
            }
        }
        out
    }

    fn combine_column(&self, col: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        let mut acc: std::collections::BTreeMap<usize, Scalar> = std::collections::BTreeMap::new();
        for (k, b) in col {
            for (i, a) in &self.columns[*k] {
                *acc.entry(*i).or_default() += &(a * b);
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    pub fn apply_sparse(&self, v: &[(usize, Scalar)]) -> SparseVector {
        self.combine_column(v)
    }

    pub fn mul(&self, o: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, o.rows, "sparse matrix product shape");
        SparseMatrix { rows: self.rows, cols: o.cols, columns: o.columns.iter().map(|c| self.combine_column(c)).collect() }
    }

    /// `Σ c_k M_k` over matrices of one shape.
    pub fn linear_combination(rows: usize, cols: usize, terms: &[(&Scalar, &SparseMatrix)]) -> SparseMatrix {
        let mut columns = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut acc: std::collections::BTreeMap<usize, Scalar> = std::collections::BTreeMap::new();
            for (c, m) in terms {
                if c.is_zero() {
                    continue;
                }
                for (i, a) in &m.columns[j] {
                    *acc.entry(*i).or_default() += &(a * *c);
                }
            }
            columns.push(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        }
        SparseMatrix { rows, cols, columns }
    }

    /// `a ⊗ b`, index `(i * b.rows + k, j * b.cols + l)`.
    pub fn kron(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
        let mut columns = Vec::with_capacity(a.cols * b.cols);
        for ca in &a.columns {
            for cb in &b.columns {
                let mut col = Vec::with_capacity(ca.len() * cb.len());
                for (i, x) in ca {
                    for (k, y) in cb {
                        col.push((i * b.rows + k, x * y));
                    }
                }
                columns.push(col);
            }
        }
        SparseMatrix { rows: a.rows * b.rows, cols: a.cols * b.cols, columns }
    }
}

/// Sparse row used while building echelon bases.
type SparseRow = Vec<(usize, Scalar)>;

fn sparse_axpy(row: &SparseRow, c: &Scalar, other: &SparseRow) -> SparseRow {
    // row + c * other
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j == other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_other = i == row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_other {
            out.push((other[j].0, c * &other[j].1));
            j += 1;
        } else {
            let x = &row[i].1 + &(c * &other[j].1);
            if !x.is_zero() {
                out.push((row[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A linear subspace stored by its reduced row-echelon basis, so two equal
/// subspaces of the same ambient space compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient_dim, self.basis)
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(ambient_dim), pivots: (0..ambient_dim).collect() }
    }

    /// Span of the given vectors, in canonical form.
    pub fn from_vectors<I>(ambient_dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut builder = EchelonBuilder::new(ambient_dim);
        for v in vectors {
            builder.insert(&v);
        }
        builder.finish()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Canonical basis, one row per vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its component along the canonical basis; zero iff `v` lies
    /// in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.ambient_dim, "vector length");
        let mut w = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let c = w[p].clone();
            if !c.is_zero() {
                axpy(&mut w, &-c, self.basis.row(k));
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient mismatch");
        Subspace::from_vectors(self.ambient_dim, self.basis_vectors().into_iter().chain(other.basis_vectors()))
    }

    /// `map(S) ⊆ S`
    pub fn is_invariant_under(&self, map: &Matrix) -> bool {
        self.basis_vectors().iter().all(|v| self.contains(&map.apply(v)))
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, map: &Matrix) -> Subspace {
        Subspace::from_vectors(map.rows(), self.basis_vectors().iter().map(|v| map.apply(v)))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

/// Incremental reduced-echelon basis over sparse rows.
pub struct EchelonBuilder {
    ambient_dim: usize,
    rows: Vec<(usize, SparseRow)>,
}

impl EchelonBuilder {
    pub fn new(ambient_dim: usize) -> Self {
        EchelonBuilder { ambient_dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Insert `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length");
        if self.rows.len() == self.ambient_dim {
            return false;
        }
        let mut w: Vector = v.to_vec();
        for (p, row) in &self.rows {
            let c = w[*p].clone();
            if c.is_zero() {
                continue;
            }
            let neg = -c;
            for (j, x) in row {
                w[*j] += &(&neg * x);
            }
        }
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let inv = w[p].inv();
        let new_row: SparseRow = w.iter().enumerate().skip(p).filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x * &inv)).collect();
        for (_, row) in self.rows.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&p, |(j, _)| *j) {
                let c = -row[k].1.clone();
                *row = sparse_axpy(row, &c, &new_row);
            }
        }
        self.rows.push((p, new_row));
        true
    }

    pub fn finish(mut self) -> Subspace {
        self.rows.sort_by_key(|(p, _)| *p);
        let mut basis = Matrix::zeros(self.rows.len(), self.ambient_dim);
        let mut pivots = Vec::with_capacity(self.rows.len());
        for (i, (p, row)) in self.rows.into_iter().enumerate() {
            pivots.push(p);
            for (j, x) in row {
                basis.set(i, j, x);
            }
        }
        Subspace { ambient_dim: self.ambient_dim, basis, pivots }
    }
}

/// `ambient / killed`, with quotient coordinates indexed by the non-pivot
/// columns of the killed subspace's canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    ambient_dim: usize,
    killed: Subspace,
    kept: Vec<usize>,
    project: Matrix,
    section: Matrix,
}

impl QuotientSpace {
    pub fn new(ambient_dim: usize, killed: Subspace) -> Result<Self> {
        if killed.ambient_dim() != ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "killed subspace lives in dimension {}, ambient is {}",
                killed.ambient_dim(),
                ambient_dim
            )));
        }
        let kept: Vec<usize> = (0..ambient_dim).filter(|c| !killed.pivots().contains(c)).collect();
        let q = kept.len();
        let mut project = Matrix::zeros(q, ambient_dim);
        for (a, &j) in kept.iter().enumerate() {
            project.set(a, j, Scalar::one());
            // e_p for a pivot p reduces to -(row_p restricted to kept columns)
            for (k, &p) in killed.pivots().iter().enumerate() {
                let x = killed.basis().get(k, j);
                if !x.is_zero() {
                    project.set(a, p, -x);
                }
            }
        }
        let mut section = Matrix::zeros(ambient_dim, q);
        for (a, &j) in kept.iter().enumerate() {
            section.set(j, a, Scalar::one());
        }
        Ok(QuotientSpace { ambient_dim, killed, kept, project, section })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    pub fn killed(&self) -> &Subspace {
        &self.killed
    }

    /// Ambient indices whose unit vectors form the section's image basis.
    pub fn kept_indices(&self) -> &[usize] {
        &self.kept
    }

    pub fn project_matrix(&self) -> &Matrix {
        &self.project
    }

    pub fn section_matrix(&self) -> &Matrix {
        &self.section
    }

    pub fn project(&self, v: &[Scalar]) -> Vector {
        self.project.apply(v)
    }

    pub fn section(&self, q: &[Scalar]) -> Vector {
        self.section.apply(q)
    }

    /// Induced endomorphism `project ∘ map ∘ section`; only meaningful
    /// when `map` preserves the killed subspace.
    pub fn induced(&self, map: &Matrix) -> Matrix {
        self.project.mul(&map.mul(&self.section))
    }
}

/// Convenience: quotient of `ambient` by the span of `vectors`.
pub fn quotient(ambient_dim: usize, killed: Subspace) -> Result<QuotientSpace> {
    QuotientSpace::new(ambient_dim, killed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vector {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn rref_identity_zero_and_rank_one() {
        let id = Matrix::identity(3);
        let (r, p, k) = id.rref();
        assert_eq!((r, p, k), (Matrix::identity(3), vec![0, 1, 2], 3));

        let z = Matrix::zeros(2, 4);
        let (r, p, k) = z.rref();
        assert_eq!((r, p, k), (Matrix::zeros(2, 4), vec![], 0));

        let m = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        let (r, p, k) = m.rref();
        assert_eq!(r, Matrix::from_ints(&[&[1, 2], &[0, 0]]));
        assert_eq!((p, k), (vec![0], 1));
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(4).kernel().is_zero());
        assert_eq!(Matrix::zeros(2, 3).kernel(), Subspace::full(3));
        let k = Matrix::from_ints(&[&[1, 1, 0]]).kernel();
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&ints(&[1, -1, 0])));
        assert!(k.contains(&ints(&[0, 0, 1])));
        assert!(!k.contains(&ints(&[1, 0, 0])));
    }

    #[test]
    fn quotient_examples() {
        let q = QuotientSpace::new(4, Subspace::zero(4)).unwrap();
        assert_eq!(q.dim(), 4);
        assert_eq!(q.project_matrix(), &Matrix::identity(4));

        let q = QuotientSpace::new(4, Subspace::full(4)).unwrap();
        assert_eq!(q.dim(), 0);

        let q = QuotientSpace::new(3, Subspace::from_vectors(3, [ints(&[1, 0, 0])])).unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&ints(&[1, 2, 3])), q.project(&ints(&[0, 2, 3])));

        assert!(QuotientSpace::new(3, Subspace::zero(2)).is_err());
    }

    #[test]
    fn quotient_section_is_right_inverse() {
        let killed = Subspace::from_vectors(4, [ints(&[1, 2, 0, 1]), ints(&[0, 1, 1, 1])]);
        let q = QuotientSpace::new(4, killed.clone()).unwrap();
        assert_eq!(q.project_matrix().mul(q.section_matrix()), Matrix::identity(2));
        for v in killed.basis_vectors() {
            assert!(is_zero_vector(&q.project(&v)));
        }
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let x = m.solve(&ints(&[3, 2])).unwrap();
        assert_eq!(x, ints(&[1, 1]));
        assert!(Matrix::from_ints(&[&[1, 1], &[1, 1]]).solve(&ints(&[1, 2])).is_none());
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let s = Subspace::from_vectors(3, [ints(&[2, 4, 6]), ints(&[1, 0, 1])]);
        let again = Subspace::from_vectors(3, s.basis_vectors());
        assert_eq!(s, again);
        let (r, _, _) = s.basis().rref();
        assert_eq!(&r, s.basis());
    }
}
