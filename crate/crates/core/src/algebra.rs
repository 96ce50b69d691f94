//! Finite-dimensional unital associative algebras given by structure
//! constants, plus the matrix, block, opposite and enveloping constructions.

use crate::error::{Error, Result};
use crate::linalg::{axpy, sub_vectors, unit_vector, zero_vector, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

/// Linear embedding of an algebra into `M_size`: column `k` holds the
/// row-major entries of basis element `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixEmbedding {
    pub size: usize,
    pub map: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    dim: usize,
    /// `table[i * dim + j]` = coordinates of `basis_i * basis_j`.
    table: Vec<Vector>,
    unit: Vector,
    labels: Vec<String>,
    /// Antilinear involution `x* = involution * conj(x)`.
    involution: Option<Matrix>,
    embedding: Option<MatrixEmbedding>,
}

impl FiniteAlgebra {
    /// Build and validate an algebra from its product table.
    pub fn new(table: Vec<Vector>, unit: Vector, labels: Vec<String>) -> Result<Self> {
        let dim = unit.len();
        if table.len() != dim * dim || table.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidAlgebra(format!("product table does not match dimension {dim}")));
        }
        if labels.len() != dim {
            return Err(Error::InvalidAlgebra("label count does not match dimension".into()));
        }
        let a = FiniteAlgebra { dim, table, unit, labels, involution: None, embedding: None };
        if let Some((i, j, k)) = a.associativity_failure() {
            return Err(Error::InvalidAlgebra(format!("not associative on ({}, {}, {})", a.labels[i], a.labels[j], a.labels[k])));
        }
        if let Some(i) = a.unit_failure() {
            return Err(Error::InvalidAlgebra(format!("unit does not act trivially on {}", a.labels[i])));
        }
        Ok(a)
    }

    /// Subalgebra of `M_size` spanned by the given matrices (must be closed
    /// under multiplication and contain the identity).
    pub fn from_matrix_basis(size: usize, basis: &[Matrix], labels: Vec<String>) -> Result<Self> {
        let dim = basis.len();
        let columns: Vec<Vector> = basis.iter().map(|m| m.entries().to_vec()).collect();
        let map = Matrix::from_columns(size * size, &columns);
        let coords = |m: &Matrix| -> Result<Vector> {
            map.solve(m.entries()).ok_or_else(|| Error::InvalidAlgebra("matrix span not closed under multiplication".into()))
        };
        let mut table = Vec::with_capacity(dim * dim);
        for a in basis {
            for b in basis {
                table.push(coords(&a.mul(b))?);
            }
        }
        let unit = coords(&Matrix::identity(size))?;
        let mut alg = FiniteAlgebra::new(table, unit, labels)?;
        let inv_columns: Result<Vec<Vector>> =
            basis.iter().map(|m| coords(&m.transpose()).map(|v| v.iter().map(Scalar::conj).collect())).collect();
        // conj-transpose of a real basis element; antilinearity handles the rest
        if let Ok(cols) = inv_columns {
            alg.involution = Some(Matrix::from_columns(dim, &cols));
        }
        alg.embedding = Some(MatrixEmbedding { size, map });
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn embedding(&self) -> Option<&MatrixEmbedding> {
        self.embedding.as_ref()
    }

    pub fn has_involution(&self) -> bool {
        self.involution.is_some()
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.dim, i)
    }

    pub fn zero(&self) -> Vector {
        zero_vector(self.dim)
    }

    /// Structure constants: `basis_i * basis_j = Σ_k c[k] basis_k`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim + j]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                axpy(&mut out, &(a * b), &self.table[i * self.dim + j]);
            }
        }
        out
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mul_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(x, &self.basis(j))).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mul_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(&self.basis(j), x)).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn commutator(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        sub_vectors(&self.mul(x, y), &self.mul(y, x))
    }

    pub fn star(&self, x: &[Scalar]) -> Option<Vector> {
        let inv = self.involution.as_ref()?;
        let c: Vector = x.iter().map(Scalar::conj).collect();
        Some(inv.apply(&c))
    }

    /// First basis triple violating associativity.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let ij = &self.table[i * n + j];
                for k in 0..n {
                    let left = self.mul(ij, &self.basis(k));
                    let right = self.mul(&self.basis(i), &self.table[j * n + k]);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn unit_failure(&self) -> Option<usize> {
        (0..self.dim).find(|&i| {
            let b = self.basis(i);
            self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b
        })
    }

    /// First basis pair on which the involution fails to be an
    /// antihomomorphic involution.
    pub fn involution_failure(&self) -> Option<(usize, usize)> {
        self.involution.as_ref()?;
        for i in 0..self.dim {
            let b = self.basis(i);
            if self.star(&self.star(&b)?)? != b {
                return Some((i, i));
            }
            for j in 0..self.dim {
                let c = self.basis(j);
                let lhs = self.star(&self.mul(&b, &c))?;
                let rhs = self.mul(&self.star(&c)?, &self.star(&b)?);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| self.table[i * n + j] == self.table[j * n + i]))
    }

    pub fn center(&self) -> Subspace {
        let mut stacked = Matrix::zeros(0, self.dim);
        for i in 0..self.dim {
            let b = self.basis(i);
            stacked = stacked.vstack(&self.right_mul_matrix(&b).sub(&self.left_mul_matrix(&b)));
        }
        stacked.kernel()
    }

    /// Represent `x` as an `N × N` matrix through the stored embedding.
    pub fn to_matrix(&self, x: &[Scalar]) -> Option<Matrix> {
        let e = self.embedding.as_ref()?;
        let flat = e.map.apply(x);
        Matrix::from_rows(flat.chunks(e.size).map(<[Scalar]>::to_vec).collect()).ok()
    }

    /// Coordinates of an `N × N` matrix lying in the image of the embedding.
    pub fn from_matrix(&self, m: &Matrix) -> Option<Vector> {
        let e = self.embedding.as_ref()?;
        let x = e.map.solve(m.entries())?;
        (e.map.apply(&x) == m.entries()).then_some(x)
    }

    /// Element `Σ c · label`.
    pub fn element(&self, terms: &[(&str, Scalar)]) -> Vector {
        let mut v = self.zero();
        for (label, c) in terms {
            let k = self.index_of(label).unwrap_or_else(|| panic!("unknown basis label {label}"));
            v[k] += c;
        }
        v
    }

    /// Checks that `rho` is a unital algebra automorphism.
    pub fn check_automorphism(&self, rho: &Matrix) -> Result<()> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::NotAutomorphism("shape does not match algebra".into()));
        }
        if rho.apply(&self.unit) != self.unit {
            return Err(Error::NotAutomorphism("unit not preserved".into()));
        }
        if rho.inverse().is_none() {
            return Err(Error::NotAutomorphism("not invertible".into()));
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = rho.apply(self.product_of_basis(i, j));
                let rhs = self.mul(&rho.column(i), &rho.column(j));
                if lhs != rhs {
                    return Err(Error::NotAutomorphism(format!("not multiplicative on ({}, {})", self.labels[i], self.labels[j])));
                }
            }
        }
        Ok(())
    }

    /// Inner automorphism `x ↦ u x u⁻¹`.
    pub fn inner_automorphism(&self, u: &[Scalar], u_inv: &[Scalar]) -> Result<Matrix> {
        if self.mul(u, u_inv) != self.unit {
            return Err(Error::NotAutomorphism("u_inv is not the inverse of u".into()));
        }
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(&self.mul(u, &self.basis(j)), u_inv)).collect();
        Ok(Matrix::from_columns(self.dim, &cols))
    }
}

fn elementary(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m.set(i, j, Scalar::one());
    m
}

fn elementary_label(i: usize, j: usize) -> String {
    format!("E{}{}", i + 1, j + 1)
}

/// `M_n` on the elementary-matrix basis `E_ij` (index `i * n + j`).
pub fn matrix_algebra(n: usize) -> Result<FiniteAlgebra> {
    if n == 0 {
        return Err(Error::InvalidAlgebra("matrix algebra needs n >= 1".into()));
    }
    block_algebra(&[n])
}

/// Block-diagonal subalgebra `M_{s1} × M_{s2} × …` of `M_N`.
pub fn block_algebra(sizes: &[usize]) -> Result<FiniteAlgebra> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidAlgebra("block sizes must be non-empty and positive".into()));
    }
    let total: usize = sizes.iter().sum();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut offset = 0;
    for &s in sizes {
        for i in 0..s {
            for j in 0..s {
                basis.push(elementary(total, offset + i, offset + j));
                labels.push(elementary_label(offset + i, offset + j));
            }
        }
        offset += s;
    }
    FiniteAlgebra::from_matrix_basis(total, &basis, labels)
}

/// Same space, reversed product.
pub fn opposite(a: &FiniteAlgebra) -> FiniteAlgebra {
    let n = a.dim;
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(a.table[j * n + i].clone());
        }
    }
    FiniteAlgebra { dim: n, table, unit: a.unit.clone(), labels: a.labels.clone(), involution: a.involution.clone(), embedding: None }
}

/// `A ⊗ A^op` with its two factor embeddings.
#[derive(Clone, Debug)]
pub struct Enveloping {
    pub algebra: FiniteAlgebra,
    pub base_dim: usize,
    /// `a ↦ a ⊗ 1`
    pub left: Matrix,
    /// `b ↦ 1 ⊗ b`
    pub right: Matrix,
}

impl Enveloping {
    /// Coordinates of `a ⊗ b` (index `i * dim + j`).
    pub fn tensor(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let n = self.base_dim;
        let mut out = zero_vector(n * n);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i * n + j] = x * y;
                }
            }
        }
        out
    }
}

pub fn enveloping(a: &FiniteAlgebra) -> Enveloping {
    let n = a.dim;
    let mut table = Vec::with_capacity(n.pow(4));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    // (a_i ⊗ b_j)(a_k ⊗ b_l) = a_i a_k ⊗ b_l b_j
                    let left = &a.table[i * n + k];
                    let right = &a.table[l * n + j];
                    let mut v = zero_vector(n * n);
                    for (p, x) in left.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (q, y) in right.iter().enumerate() {
                            if !y.is_zero() {
                                v[p * n + q] = x * y;
                            }
                        }
                    }
                    table.push(v);
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            labels.push(format!("{}⊗{}", a.labels[i], a.labels[j]));
        }
    }
    let mut unit = zero_vector(n * n);
    for (i, x) in a.unit.iter().enumerate() {
        for (j, y) in a.unit.iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                unit[i * n + j] = x * y;
            }
        }
    }
    let algebra = FiniteAlgebra { dim: n * n, table, unit, labels, involution: None, embedding: None };
    let env = Enveloping { algebra, base_dim: n, left: Matrix::zeros(0, 0), right: Matrix::zeros(0, 0) };
    let left_cols: Vec<Vector> = (0..n).map(|i| env.tensor(&a.basis(i), &a.unit)).collect();
    let right_cols: Vec<Vector> = (0..n).map(|i| env.tensor(&a.unit, &a.basis(i))).collect();
    Enveloping { left: Matrix::from_columns(n * n, &left_cols), right: Matrix::from_columns(n * n, &right_cols), ..env }
}

/// `x ↦ [a, x]`
pub fn inner_derivation(alg: &FiniteAlgebra, a: &[Scalar]) -> Result<Matrix> {
    if a.len() != alg.dim() {
        return Err(Error::DimensionMismatch("element does not belong to the algebra".into()));
    }
    Ok(alg.left_mul_matrix(a).sub(&alg.right_mul_matrix(a)))
}

/// First basis pair on which `der(xy) = der(x) y + x der(y)` fails.
pub fn derivation_failure(alg: &FiniteAlgebra, der: &Matrix) -> Option<(usize, usize)> {
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let (x, y) = (alg.basis(i), alg.basis(j));
            let lhs = der.apply(alg.product_of_basis(i, j));
            let mut rhs = alg.mul(&der.apply(&x), &y);
            axpy(&mut rhs, &Scalar::one(), &alg.mul(&x, &der.apply(&y)));
            if lhs != rhs {
                return Some((i, j));
            }
        }
    }
    None
}

/// `w = Γ·1 + J` with `J` traceless, in a full matrix algebra.
pub fn trace_split(alg: &FiniteAlgebra, w: &[Scalar]) -> Result<(Scalar, Vector)> {
    let e = alg
        .embedding()
        .filter(|e| e.size * e.size == alg.dim())
        .ok_or_else(|| Error::Unsupported("trace split needs a full matrix algebra".into()))?;
    let m = alg.to_matrix(w).expect("embedding present");
    let trace: Scalar = (0..e.size).map(|i| m.get(i, i).clone()).sum();
    let gamma = &trace / &Scalar::from_int(e.size as i64);
    let mut j = w.to_vec();
    axpy(&mut j, &-gamma.clone(), alg.unit());
    Ok((gamma, j))
}

/// Trace through the matrix embedding, when one exists.
pub fn trace(alg: &FiniteAlgebra, w: &[Scalar]) -> Option<Scalar> {
    let m = alg.to_matrix(w)?;
    Some((0..m.rows()).map(|i| m.get(i, i).clone()).sum())
}

/// Product table of a custom algebra as `c[i][j][k]`.
pub fn structure_constants(alg: &FiniteAlgebra) -> Vec<Vec<Vector>> {
    (0..alg.dim()).map(|i| (0..alg.dim()).map(|j| alg.product_of_basis(i, j).clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_zero_vector;

    fn m2() -> FiniteAlgebra {
        matrix_algebra(2).unwrap()
    }

    #[test]
    fn matrix_algebra_examples() {
        let a1 = matrix_algebra(1).unwrap();
        assert_eq!(a1.dim(), 1);
        assert!(a1.is_commutative());

        let a = m2();
        assert_eq!(a.dim(), 4);
        let p = a.mul(&a.element(&[("E12", Scalar::one())]), &a.element(&[("E21", Scalar::one())]));
        assert_eq!(p, a.element(&[("E11", Scalar::one())]));

        let a3 = matrix_algebra(3).unwrap();
        assert_eq!(a3.dim(), 9);
        assert_eq!(a3.center().dim(), 1);
        assert!(matrix_algebra(0).is_err());
    }

    #[test]
    fn block_algebra_examples() {
        let b = block_algebra(&[2, 1]).unwrap();
        assert_eq!(b.dim(), 5);
        assert_eq!(b.embedding().unwrap().size, 3);
        assert_eq!(b.labels(), ["E11", "E12", "E21", "E22", "E33"]);
        assert_eq!(block_algebra(&[1]).unwrap(), matrix_algebra(1).unwrap());
        let d = block_algebra(&[1, 1, 1]).unwrap();
        assert_eq!(d.dim(), 3);
        assert!(d.is_commutative());
        assert!(block_algebra(&[]).is_err());
        assert!(b.involution_failure().is_none());
    }

    #[test]
    fn opposite_examples() {
        let d = block_algebra(&[1, 1]).unwrap();
        assert_eq!(structure_constants(&opposite(&d)), structure_constants(&d));
        let a = m2();
        let op = opposite(&a);
        let p = op.mul(&a.element(&[("E12", Scalar::one())]), &a.element(&[("E21", Scalar::one())]));
        assert_eq!(p, a.element(&[("E22", Scalar::one())]));
        let back = opposite(&opposite(&a));
        assert_eq!(structure_constants(&back), structure_constants(&a));
        assert_eq!(back.unit(), a.unit());
    }

    #[test]
    fn enveloping_examples() {
        assert_eq!(enveloping(&matrix_algebra(1).unwrap()).algebra.dim(), 1);
        let a = m2();
        let e = enveloping(&a);
        assert_eq!(e.algebra.dim(), 16);
        assert_eq!(e.algebra.unit(), &e.tensor(a.unit(), a.unit()));
        assert_eq!(enveloping(&block_algebra(&[2, 1]).unwrap()).algebra.dim(), 25);
        // restriction to A ⊗ 1 is A's product
        for i in 0..4 {
            for j in 0..4 {
                let lhs = e.algebra.mul(&e.left.column(i), &e.left.column(j));
                assert_eq!(lhs, e.left.apply(a.product_of_basis(i, j)));
            }
        }
        assert!(e.algebra.associativity_failure().is_none());
    }

    #[test]
    fn inner_derivation_examples() {
        let a = m2();
        assert!(inner_derivation(&a, a.unit()).unwrap().is_zero());
        let d = inner_derivation(&a, &a.element(&[("E11", Scalar::one())])).unwrap();
        assert_eq!(d.apply(&a.element(&[("E12", Scalar::one())])), a.element(&[("E12", Scalar::one())]));
        assert!(derivation_failure(&a, &d).is_none());
    }

    #[test]
    fn trace_split_examples() {
        let a = m2();
        let (g, j) = trace_split(&a, a.unit()).unwrap();
        assert_eq!(g, Scalar::one());
        assert!(is_zero_vector(&j));
        let e12 = a.element(&[("E12", Scalar::one())]);
        let (g, j) = trace_split(&a, &e12).unwrap();
        assert!(g.is_zero());
        assert_eq!(j, e12);
        let (g, j) = trace_split(&a, &a.element(&[("E11", Scalar::one())])).unwrap();
        assert_eq!(g, Scalar::ratio(1, 2));
        assert_eq!(j, a.element(&[("E11", Scalar::ratio(1, 2)), ("E22", Scalar::ratio(-1, 2))]));
        let (g2, _) = trace_split(&a, &j).unwrap();
        assert!(g2.is_zero());
        assert!(trace_split(&block_algebra(&[2, 1]).unwrap(), &e12_block()).is_err());
    }

    fn e12_block() -> Vector {
        block_algebra(&[2, 1]).unwrap().element(&[("E12", Scalar::one())])
    }

    #[test]
    fn custom_algebra_validation() {
        // ℂ[x]/(x²) with basis 1, x
        let one = vec![Scalar::one(), Scalar::zero()];
        let x = vec![Scalar::zero(), Scalar::one()];
        let z = vec![Scalar::zero(), Scalar::zero()];
        let ok = FiniteAlgebra::new(vec![one.clone(), x.clone(), x.clone(), z.clone()], one.clone(), vec!["1".into(), "x".into()]);
        assert!(ok.is_ok());
        // x·x = 1 but 1·x = 0 breaks the unit
        let bad = FiniteAlgebra::new(vec![one.clone(), z.clone(), x.clone(), one.clone()], one, vec!["1".into(), "x".into()]);
        assert!(bad.is_err());
    }

    #[test]
    fn automorphism_checks() {
        let a = m2();
        assert!(a.check_automorphism(&Matrix::identity(4)).is_ok());
        let u = a.element(&[("E11", Scalar::one()), ("E22", Scalar::from_int(2))]);
        let u_inv = a.element(&[("E11", Scalar::one()), ("E22", Scalar::ratio(1, 2))]);
        let rho = a.inner_automorphism(&u, &u_inv).unwrap();
        assert!(a.check_automorphism(&rho).is_ok());
        assert!(a.check_automorphism(&Matrix::identity(4).scale(&Scalar::from_int(2))).is_err());
    }
}
