//! Bimodules with explicit action matrices, tensor products over the base
//! algebra, bimodule-map verification and sub-bimodule closure.

use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{
    axpy, is_zero_vector, tensor_vectors, unit_vector, zero_vector, EchelonBuilder, Matrix, QuotientSpace, SparseMatrix, Subspace, Vector,
};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Bimodule {
    algebra: Arc<FiniteAlgebra>,
    dim: usize,
    /// `left[a]`: matrix of `m ↦ basis_a · m`
    left: Vec<SparseMatrix>,
    /// `right[a]`: matrix of `m ↦ m · basis_a`
    right: Vec<SparseMatrix>,
    labels: Vec<String>,
}

pub fn same_algebra(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Bimodule {
    /// Validated constructor.
    pub fn new(algebra: Arc<FiniteAlgebra>, left: Vec<SparseMatrix>, right: Vec<SparseMatrix>, labels: Vec<String>) -> Result<Self> {
        let m = Bimodule::new_unchecked(algebra, left, right, labels)?;
        m.check_axioms()?;
        Ok(m)
    }

    /// Shape checks only; used when the axioms follow from construction and
    /// are verified separately.
    pub fn new_unchecked(
        algebra: Arc<FiniteAlgebra>,
        left: Vec<SparseMatrix>,
        right: Vec<SparseMatrix>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let dim = labels.len();
        let n = algebra.dim();
        if left.len() != n || right.len() != n {
            return Err(Error::InvalidBimodule("one action matrix per algebra basis element".into()));
        }
        if left.iter().chain(&right).any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidBimodule("action matrices must be dim × dim".into()));
        }
        Ok(Bimodule { algebra, dim, left, right, labels })
    }

    /// `A` acting on itself from both sides.
    pub fn regular(algebra: Arc<FiniteAlgebra>) -> Self {
        let n = algebra.dim();
        let left = (0..n).map(|a| SparseMatrix::from_dense(&algebra.left_mul_matrix(&algebra.basis(a)))).collect();
        let right = (0..n).map(|a| SparseMatrix::from_dense(&algebra.right_mul_matrix(&algebra.basis(a)))).collect();
        let labels = algebra.labels().to_vec();
        Bimodule { algebra, dim: n, left, right, labels }
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.dim, i)
    }

    pub fn zero(&self) -> Vector {
        zero_vector(self.dim)
    }

    pub fn left_basis_matrix(&self, a: usize) -> &SparseMatrix {
        &self.left[a]
    }

    pub fn right_basis_matrix(&self, a: usize) -> &SparseMatrix {
        &self.right[a]
    }

    /// Matrix of `m ↦ f · m` for an algebra element `f`.
    pub fn left_matrix(&self, f: &[Scalar]) -> SparseMatrix {
        combine(&self.left, f, self.dim)
    }

    pub fn right_matrix(&self, f: &[Scalar]) -> SparseMatrix {
        combine(&self.right, f, self.dim)
    }

    pub fn act_left(&self, f: &[Scalar], m: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim);
        for (a, c) in f.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.left[a].apply(m));
            }
        }
        out
    }

    pub fn act_right(&self, m: &[Scalar], f: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim);
        for (a, c) in f.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.right[a].apply(m));
            }
        }
        out
    }

    /// Representation, anti-representation, commuting actions, unit.
    pub fn check_axioms(&self) -> Result<()> {
        let alg = &self.algebra;
        let n = alg.dim();
        let id = SparseMatrix::identity(self.dim);
        if self.left_matrix(alg.unit()) != id || self.right_matrix(alg.unit()) != id {
            return Err(Error::InvalidBimodule("unit does not act as the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = alg.product_of_basis(a, b);
                if self.left_matrix(ab) != self.left[a].mul(&self.left[b]) {
                    return Err(Error::InvalidBimodule(format!("left action not multiplicative on ({}, {})", alg.label(a), alg.label(b))));
                }
                if self.right_matrix(ab) != self.right[b].mul(&self.right[a]) {
                    return Err(Error::InvalidBimodule(format!(
                        "right action not anti-multiplicative on ({}, {})",
                        alg.label(a),
                        alg.label(b)
                    )));
                }
                if self.left[a].mul(&self.right[b]) != self.right[b].mul(&self.left[a]) {
                    return Err(Error::InvalidBimodule(format!("actions of {} and {} do not commute", alg.label(a), alg.label(b))));
                }
            }
        }
        Ok(())
    }
}

fn combine(mats: &[SparseMatrix], f: &[Scalar], dim: usize) -> SparseMatrix {
    let terms: Vec<(&Scalar, &SparseMatrix)> = f.iter().zip(mats).filter(|(c, _)| !c.is_zero()).collect();
    SparseMatrix::linear_combination(dim, dim, &terms)
}

/// The free bimodule of rank one, `A ⊗_ℂ A`, index `i * dim + j`.
pub fn free_bimodule(algebra: Arc<FiniteAlgebra>) -> Bimodule {
    let n = algebra.dim();
    let id = SparseMatrix::identity(n);
    let left = (0..n).map(|a| SparseMatrix::kron(&SparseMatrix::from_dense(&algebra.left_mul_matrix(&algebra.basis(a))), &id)).collect();
    let right = (0..n).map(|a| SparseMatrix::kron(&id, &SparseMatrix::from_dense(&algebra.right_mul_matrix(&algebra.basis(a))))).collect();
    let mut labels = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            labels.push(format!("{}⊗{}", algebra.label(i), algebra.label(j)));
        }
    }
    Bimodule { algebra, dim: n * n, left, right, labels }
}

#[derive(Clone, Debug)]
pub struct BimoduleMap {
    pub source: Arc<Bimodule>,
    pub target: Arc<Bimodule>,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Where a candidate bimodule map fails to intertwine an action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub side: Side,
    pub algebra_basis: usize,
    pub module_basis: usize,
}

impl BimoduleMap {
    pub fn new(source: Arc<Bimodule>, target: Arc<Bimodule>, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch("map matrix does not match source/target".into()));
        }
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(Error::AlgebraMismatch("source and target over different algebras".into()));
        }
        Ok(BimoduleMap { source, target, matrix })
    }

    pub fn identity(m: Arc<Bimodule>) -> Self {
        let id = Matrix::identity(m.dim());
        BimoduleMap { source: m.clone(), target: m, matrix: id }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.apply(v)
    }
}

/// `Ok(())` iff the map commutes with both actions of every basis element.
pub fn verify_bimodule_map(phi: &BimoduleMap) -> std::result::Result<(), Counterexample> {
    let n = phi.source.algebra().dim();
    let columns: Vec<Vector> = phi.matrix.columns();
    for a in 0..n {
        for (side, src, tgt) in [
            (Side::Left, phi.source.left_basis_matrix(a), phi.target.left_basis_matrix(a)),
            (Side::Right, phi.source.right_basis_matrix(a), phi.target.right_basis_matrix(a)),
        ] {
            for (k, col) in columns.iter().enumerate() {
                let lhs = phi.matrix.apply(&src.column(k));
                if lhs != tgt.apply(col) {
                    return Err(Counterexample { side, algebra_basis: a, module_basis: k });
                }
            }
        }
    }
    Ok(())
}

fn sparse_invariant(s: &Subspace, map: &SparseMatrix) -> bool {
    s.basis_vectors().iter().all(|v| s.contains(&map.apply(v)))
}

fn sparse_induced(q: &QuotientSpace, map: &SparseMatrix) -> SparseMatrix {
    let cols: Vec<Vector> = q.kept_indices().iter().map(|&k| q.project(&map.column(k))).collect();
    SparseMatrix::from_columns(q.dim(), &cols)
}

/// `M ⊗_A N` as the quotient of `M ⊗_ℂ N` by the balancing relations.
#[derive(Clone, Debug)]
pub struct TensorOverA {
    pub left_factor: Arc<Bimodule>,
    pub right_factor: Arc<Bimodule>,
    pub relations: Subspace,
    pub quotient: QuotientSpace,
    pub bimodule: Arc<Bimodule>,
}

impl TensorOverA {
    pub fn ambient_dim(&self) -> usize {
        self.left_factor.dim() * self.right_factor.dim()
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Quotient class of `m ⊗ n`.
    pub fn class_of(&self, m: &[Scalar], n: &[Scalar]) -> Vector {
        self.quotient.project(&tensor_vectors(m, n))
    }

    /// Class of an ambient vector of `M ⊗_ℂ N`.
    pub fn project(&self, v: &[Scalar]) -> Vector {
        self.quotient.project(v)
    }

    /// Canonical ambient representative of a class.
    pub fn lift(&self, q: &[Scalar]) -> Vector {
        self.quotient.section(q)
    }

    /// Nonzero pure-tensor terms `(i, j, c)` of an ambient vector.
    pub fn terms(&self, v: &[Scalar]) -> Vec<(usize, usize, Scalar)> {
        let nd = self.right_factor.dim();
        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k / nd, k % nd, c.clone())).collect()
    }
}

pub fn tensor_over_a(m: Arc<Bimodule>, n: Arc<Bimodule>) -> Result<TensorOverA> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch("tensor factors over different algebras".into()));
    }
    let alg = m.algebra().clone();
    let (dm, dn) = (m.dim(), n.dim());
    let ambient = dm * dn;
    let mut builder = EchelonBuilder::new(ambient);
    for a in 0..alg.dim() {
        let ra = m.right_basis_matrix(a);
        let la = n.left_basis_matrix(a);
        for i in 0..dm {
            let mi_a = ra.column(i);
            for j in 0..dn {
                let a_nj = la.column(j);
                let mut rel = tensor_vectors(&mi_a, &unit_vector(dn, j));
                axpy(&mut rel, &-Scalar::one(), &tensor_vectors(&unit_vector(dm, i), &a_nj));
                builder.insert(&rel);
            }
        }
    }
    let relations = builder.finish();
    let quotient = QuotientSpace::new(ambient, relations.clone())?;
    let id_m = SparseMatrix::identity(dm);
    let id_n = SparseMatrix::identity(dn);
    let mut left = Vec::with_capacity(alg.dim());
    let mut right = Vec::with_capacity(alg.dim());
    for a in 0..alg.dim() {
        let l = SparseMatrix::kron(m.left_basis_matrix(a), &id_n);
        let r = SparseMatrix::kron(&id_m, n.right_basis_matrix(a));
        if !sparse_invariant(&relations, &l) || !sparse_invariant(&relations, &r) {
            return Err(Error::InvalidBimodule("balancing relations not stable under the outer actions".into()));
        }
        left.push(sparse_induced(&quotient, &l));
        right.push(sparse_induced(&quotient, &r));
    }
    let labels: Vec<String> = quotient.kept_indices().iter().map(|&k| format!("{}⊗{}", m.label(k / dn), n.label(k % dn))).collect();
    let bimodule = Arc::new(Bimodule::new_unchecked(alg, left, right, labels)?);
    Ok(TensorOverA { left_factor: m, right_factor: n, relations, quotient, bimodule })
}

/// Basis of the space of bimodule maps `M → N`, as `dim N × dim M` matrices.
pub fn bimodule_homs(m: &Bimodule, n: &Bimodule) -> Result<Vec<Matrix>> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch("hom between modules over different algebras".into()));
    }
    let (dm, dn) = (m.dim(), n.dim());
    // unknown φ_ij sits at i * dm + j
    let mut rows = EchelonBuilder::new(dm * dn);
    for a in 0..m.algebra().dim() {
        for (src, tgt) in [(m.left_basis_matrix(a), n.left_basis_matrix(a)), (m.right_basis_matrix(a), n.right_basis_matrix(a))] {
            for k in 0..dm {
                // (φ ∘ act_M)(e_k) - (act_N ∘ φ)(e_k), component i
                for i in 0..dn {
                    let mut row = zero_vector(dm * dn);
                    for (j, x) in src.sparse_column(k) {
                        row[i * dm + j] += x;
                    }
                    for l in 0..dn {
                        for (r, x) in tgt.sparse_column(l) {
                            if *r == i {
                                row[l * dm + k] -= x;
                            }
                        }
                    }
                    rows.insert(&row);
                }
            }
        }
    }
    let constraints = rows.finish();
    let solutions = constraints.basis().kernel();
    Ok(solutions
        .basis_vectors()
        .iter()
        .map(|v| Matrix::from_rows(v.chunks(dm).map(<[Scalar]>::to_vec).collect()).expect("rectangular"))
        .collect())
}

/// Smallest sub-bimodule containing `gens`.
pub fn sub_bimodule_generated(m: &Bimodule, gens: &[Vector]) -> Subspace {
    let mut builder = EchelonBuilder::new(m.dim());
    let mut queue: Vec<Vector> = Vec::new();
    for g in gens {
        if builder.insert(g) {
            queue.push(g.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for a in 0..m.algebra().dim() {
            for w in [m.left_basis_matrix(a).apply(&v), m.right_basis_matrix(a).apply(&v)] {
                if !is_zero_vector(&w) && builder.insert(&w) {
                    queue.push(w);
                }
            }
        }
    }
    builder.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{block_algebra, matrix_algebra};

    #[test]
    fn free_bimodule_dimensions() {
        for (alg, dim) in [(matrix_algebra(1), 1), (matrix_algebra(2), 16), (block_algebra(&[2, 1]), 25)] {
            let m = free_bimodule(Arc::new(alg.unwrap()));
            assert_eq!(m.dim(), dim);
            m.check_axioms().unwrap();
        }
    }

    #[test]
    fn unit_cancellation_in_tensor_products() {
        let alg = Arc::new(block_algebra(&[2, 1]).unwrap());
        let reg = Arc::new(Bimodule::regular(alg.clone()));
        let free = Arc::new(free_bimodule(alg));
        let t = tensor_over_a(free.clone(), reg.clone()).unwrap();
        assert_eq!(t.dim(), free.dim());
        let t = tensor_over_a(reg, free.clone()).unwrap();
        assert_eq!(t.dim(), free.dim());
        t.bimodule.check_axioms().unwrap();
    }

    #[test]
    fn relation_generators_project_to_zero() {
        let alg = Arc::new(matrix_algebra(2).unwrap());
        let reg = Arc::new(Bimodule::regular(alg.clone()));
        let t = tensor_over_a(reg.clone(), reg.clone()).unwrap();
        assert_eq!(t.dim(), 4);
        for a in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let lhs = t.class_of(&reg.right_basis_matrix(a).column(i), &reg.basis(j));
                    let rhs = t.class_of(&reg.basis(i), &reg.left_basis_matrix(a).column(j));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn identity_is_bimodule_map_and_scaling_by_element_is_not() {
        let alg = Arc::new(matrix_algebra(2).unwrap());
        let reg = Arc::new(Bimodule::regular(alg.clone()));
        assert!(verify_bimodule_map(&BimoduleMap::identity(reg.clone())).is_ok());
        let e11 = alg.element(&[("E11", Scalar::one())]);
        let phi = BimoduleMap::new(reg.clone(), reg.clone(), alg.left_mul_matrix(&e11)).unwrap();
        let err = verify_bimodule_map(&phi).unwrap_err();
        assert_eq!(err.side, Side::Left);
    }

    #[test]
    fn generated_sub_bimodules() {
        let alg = Arc::new(matrix_algebra(2).unwrap());
        let reg = Bimodule::regular(alg.clone());
        assert!(sub_bimodule_generated(&reg, &[]).is_zero());
        let e11 = alg.element(&[("E11", Scalar::one())]);
        assert!(sub_bimodule_generated(&reg, &[e11]).is_full());
    }
}
