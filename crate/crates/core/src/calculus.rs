//! Differential calculi truncated at degree three, with explicit bimodules
//! of forms, differentials and wedge products.
//!
//! The derivation-based calculus on `M_n` is built here; the Connes-Lott
//! calculus has its own module.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::{matrix_algebra, FiniteAlgebra};
use crate::bimodule::{tensor_over_a, Bimodule, BimoduleMap, TensorOverA};
use crate::error::{Error, Result};
use crate::exterior::Exterior;
use crate::lie::{sl_basis, SlBasis};
use crate::linalg::{
    axpy, is_zero_vector, sparse_collect, tensor_vectors, unit_vector, zero_vector, Matrix, SparseMatrix, SparseVector, Subspace, Vector,
};
use crate::scalar::Scalar;

/// Highest form degree carried by every calculus.
pub const TOP_DEGREE: usize = 3;

/// Product of basis forms `(i, j)` at `i * dim Ω^q + j`, as sparse
/// `(index, coefficient)` lists in `Ω^{p+q}`.
pub type ProductTable = Vec<Vec<(usize, Scalar)>>;

#[derive(Debug)]
pub struct DifferentialCalculus {
    name: String,
    algebra: Arc<FiniteAlgebra>,
    /// `forms[p]` is `Ω^p`; `forms[0]` is the regular bimodule.
    forms: Vec<Arc<Bimodule>>,
    /// `d[p]: Ω^p → Ω^{p+1}`
    d: Vec<Matrix>,
    d_sparse: Vec<SparseMatrix>,
    /// Products of positive-degree basis forms, keyed by degrees.
    products: HashMap<(usize, usize), ProductTable>,
    theta: Option<Vector>,
    t11: OnceLock<Arc<TensorOverA>>,
    t21: OnceLock<Arc<TensorOverA>>,
    pi: OnceLock<Matrix>,
}

/// Failure of one calculus axiom on specific basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: String,
    pub witness: String,
}

impl DifferentialCalculus {
    /// Assemble and validate a calculus.
    pub fn new(
        name: &str,
        algebra: Arc<FiniteAlgebra>,
        forms: Vec<Arc<Bimodule>>,
        d: Vec<Matrix>,
        products: HashMap<(usize, usize), ProductTable>,
        theta: Option<Vector>,
    ) -> Result<Self> {
        if forms.len() != TOP_DEGREE + 1 || d.len() != TOP_DEGREE {
            return Err(Error::DimensionMismatch(format!("a calculus carries degrees 0..={TOP_DEGREE}")));
        }
        for (p, m) in forms.iter().enumerate() {
            if !Arc::ptr_eq(m.algebra(), &algebra) && **m.algebra() != *algebra {
                return Err(Error::AlgebraMismatch(format!("Ω^{p} is over a different algebra")));
            }
        }
        for (p, dp) in d.iter().enumerate() {
            if dp.rows() != forms[p + 1].dim() || dp.cols() != forms[p].dim() {
                return Err(Error::DimensionMismatch(format!("d on Ω^{p} has the wrong shape")));
            }
        }
        for p in 1..=TOP_DEGREE {
            for q in 1..=TOP_DEGREE - p {
                let table =
                    products.get(&(p, q)).ok_or_else(|| Error::DimensionMismatch(format!("missing product table Ω^{p} × Ω^{q}")))?;
                if table.len() != forms[p].dim() * forms[q].dim()
                    || table.iter().any(|v| v.iter().any(|(k, x)| *k >= forms[p + q].dim() || x.is_zero()))
                {
                    return Err(Error::DimensionMismatch(format!("product table Ω^{p} × Ω^{q} has the wrong shape")));
                }
            }
        }
        if let Some(t) = &theta {
            if t.len() != forms[1].dim() {
                return Err(Error::DimensionMismatch("θ is not a 1-form".into()));
            }
        }
        let calc = DifferentialCalculus {
            name: name.to_string(),
            algebra,
            forms,
            d_sparse: d.iter().map(SparseMatrix::from_dense).collect(),
            d,
            products,
            theta,
            t11: OnceLock::new(),
            t21: OnceLock::new(),
            pi: OnceLock::new(),
        };
        if let Some(f) = calc.axiom_failures().into_iter().next() {
            return Err(Error::IdentityFailed(format!("{}: {}", f.axiom, f.witness)));
        }
        Ok(calc)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn omega(&self, p: usize) -> &Arc<Bimodule> {
        &self.forms[p]
    }

    pub fn dim(&self, p: usize) -> usize {
        self.forms[p].dim()
    }

    /// Highest degree with a nonzero space of forms.
    pub fn top_nonzero_degree(&self) -> usize {
        (0..=TOP_DEGREE).rev().find(|&p| self.dim(p) > 0).unwrap_or(0)
    }

    pub fn d_matrix(&self, p: usize) -> &Matrix {
        &self.d[p]
    }

    pub fn d(&self, p: usize, x: &[Scalar]) -> Vector {
        self.d_sparse[p].apply(x)
    }

    pub fn theta(&self) -> Option<&Vector> {
        self.theta.as_ref()
    }

    /// Product of a degree-`p` form with a degree-`q` form.
    pub fn wedge(&self, p: usize, x: &[Scalar], q: usize, y: &[Scalar]) -> Vector {
        assert!(p + q <= TOP_DEGREE, "product beyond the top degree");
        if p == 0 {
            return self.forms[q].act_left(x, y);
        }
        if q == 0 {
            return self.forms[p].act_right(x, y);
        }
        let table = &self.products[&(p, q)];
        let dq = self.dim(q);
        let mut out = zero_vector(self.dim(p + q));
        let ys: Vec<(usize, &Scalar)> = y.iter().enumerate().filter(|(_, b)| !b.is_zero()).collect();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &ys {
                let ab = a * b;
                for (k, c) in &table[i * dq + j] {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    /// Product of positive-degree forms given as sparse vectors.
    fn sparse_wedge(&self, p: usize, x: &[(usize, Scalar)], q: usize, y: &[(usize, Scalar)]) -> SparseVector {
        let table = &self.products[&(p, q)];
        let dq = self.dim(q);
        let mut terms = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                terms.extend(table[i * dq + j].iter().map(|(k, c)| (*k, &ab * c)));
            }
        }
        sparse_collect(terms)
    }

    /// Product of two basis forms.
    pub fn wedge_basis(&self, p: usize, i: usize, q: usize, j: usize) -> Vector {
        self.wedge(p, &unit_vector(self.dim(p), i), q, &unit_vector(self.dim(q), j))
    }

    /// `Ω¹ ⊗_A Ω¹`
    pub fn t11(&self) -> Arc<TensorOverA> {
        self.t11
            .get_or_init(|| Arc::new(tensor_over_a(self.forms[1].clone(), self.forms[1].clone()).expect("forms share the base algebra")))
            .clone()
    }

    /// `Ω² ⊗_A Ω¹`
    pub fn t21(&self) -> Arc<TensorOverA> {
        self.t21
            .get_or_init(|| Arc::new(tensor_over_a(self.forms[2].clone(), self.forms[1].clone()).expect("forms share the base algebra")))
            .clone()
    }

    /// The product `π: Ω¹ ⊗_A Ω¹ → Ω²` in quotient coordinates.
    pub fn pi(&self) -> &Matrix {
        self.pi.get_or_init(|| {
            let t = self.t11();
            let cols: Vec<Vector> = (0..t.dim())
                .map(|a| {
                    let k = t.quotient.kept_indices()[a];
                    let d1 = self.dim(1);
                    self.wedge_basis(1, k / d1, 1, k % d1)
                })
                .collect();
            Matrix::from_columns(self.dim(2), &cols)
        })
    }

    /// Checks that the product is balanced, so `π` is well defined on the
    /// quotient, and that it intertwines both actions.
    pub fn pi_failure(&self) -> Option<String> {
        let t = self.t11();
        let d1 = self.dim(1);
        for rel in t.relations.basis_vectors() {
            let mut img = zero_vector(self.dim(2));
            for (k, c) in rel.iter().enumerate() {
                if !c.is_zero() {
                    axpy(&mut img, c, &self.wedge_basis(1, k / d1, 1, k % d1));
                }
            }
            if !is_zero_vector(&img) {
                return Some("product does not vanish on a balancing relation".into());
            }
        }
        let map = BimoduleMap::new(t.bimodule.clone(), self.forms[2].clone(), self.pi().clone()).ok()?;
        crate::bimodule::verify_bimodule_map(&map)
            .err()
            .map(|c| format!("π fails to intertwine on algebra basis {}", self.algebra.label(c.algebra_basis)))
    }

    /// Every axiom the engine relies on, checked over basis elements.
    pub fn axiom_failures(&self) -> Vec<AxiomFailure> {
        let mut out = Vec::new();
        let alg = &self.algebra;
        let fail = |axiom: &str, witness: String| AxiomFailure { axiom: axiom.to_string(), witness };
        for p in 0..=TOP_DEGREE {
            if let Err(e) = self.forms[p].check_axioms() {
                out.push(fail("bimodule axioms", format!("Ω^{p}: {e}")));
            }
        }
        // graded Leibniz against the algebra on both sides
        'leibniz: for p in 0..TOP_DEGREE {
            for f in 0..alg.dim() {
                let fv = alg.basis(f);
                let df = self.d(0, &fv);
                for k in 0..self.dim(p) {
                    let w = unit_vector(self.dim(p), k);
                    let lhs = self.d(p, &self.forms[p].act_left(&fv, &w));
                    let mut rhs = self.wedge(1, &df, p, &w);
                    axpy(&mut rhs, &Scalar::one(), &self.forms[p + 1].act_left(&fv, &self.d(p, &w)));
                    if lhs != rhs {
                        out.push(fail("left Leibniz", format!("d({} · Ω^{p}[{k}])", alg.label(f))));
                        break 'leibniz;
                    }
                    let lhs = self.d(p, &self.forms[p].act_right(&w, &fv));
                    let mut rhs = self.forms[p + 1].act_right(&self.d(p, &w), &fv);
                    let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                    axpy(&mut rhs, &sign, &self.wedge(p, &w, 1, &df));
                    if lhs != rhs {
                        out.push(fail("right Leibniz", format!("d(Ω^{p}[{k}] · {})", alg.label(f))));
                        break 'leibniz;
                    }
                }
            }
        }
        'dd: for p in 0..TOP_DEGREE - 1 {
            let dd = self.d[p + 1].mul(&self.d[p]);
            if !dd.is_zero() {
                let k = (0..dd.cols()).find(|&k| !is_zero_vector(&dd.column(k))).unwrap_or(0);
                out.push(fail("d∘d = 0", format!("on Ω^{p}[{k}]")));
                break 'dd;
            }
        }
        // products: compatibility with the actions, associativity, Leibniz
        'prod: for p in 1..TOP_DEGREE {
            for q in 1..=TOP_DEGREE - p {
                for i in 0..self.dim(p) {
                    let x: SparseVector = vec![(i, Scalar::one())];
                    for j in 0..self.dim(q) {
                        let y: SparseVector = vec![(j, Scalar::one())];
                        let xy = self.sparse_wedge(p, &x, q, &y);
                        for f in 0..alg.dim() {
                            let (lp, rp) = (self.forms[p].left_basis_matrix(f), self.forms[p].right_basis_matrix(f));
                            let (lq, rq) = (self.forms[q].left_basis_matrix(f), self.forms[q].right_basis_matrix(f));
                            let a = self.sparse_wedge(p, lp.sparse_column(i), q, &y);
                            let b = self.forms[p + q].left_basis_matrix(f).apply_sparse(&xy);
                            let c = self.sparse_wedge(p, rp.sparse_column(i), q, &y);
                            let e = self.sparse_wedge(p, &x, q, lq.sparse_column(j));
                            let g = self.sparse_wedge(p, &x, q, rq.sparse_column(j));
                            let h = self.forms[p + q].right_basis_matrix(f).apply_sparse(&xy);
                            if a != b || c != e || g != h {
                                out.push(fail("product is A-balanced and bilinear", format!("Ω^{p}[{i}] · Ω^{q}[{j}]")));
                                break 'prod;
                            }
                        }
                        if p + q < TOP_DEGREE {
                            let lhs = self.d_sparse[p + q].apply_sparse(&xy);
                            let first = self.sparse_wedge(p + 1, self.d_sparse[p].sparse_column(i), q, &y);
                            let second = self.sparse_wedge(p, &x, q + 1, self.d_sparse[q].sparse_column(j));
                            let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                            let rhs = sparse_collect(first.into_iter().chain(second.into_iter().map(|(k, v)| (k, &sign * &v))));
                            if lhs != rhs {
                                out.push(fail("graded Leibniz", format!("d(Ω^{p}[{i}] · Ω^{q}[{j}])")));
                                break 'prod;
                            }
                        }
                        for r in 1..=TOP_DEGREE.saturating_sub(p + q) {
                            for k in 0..self.dim(r) {
                                let z: SparseVector = vec![(k, Scalar::one())];
                                let lhs = self.sparse_wedge(p + q, &xy, r, &z);
                                let rhs = self.sparse_wedge(p, &x, q + r, &self.sparse_wedge(q, &y, r, &z));
                                if lhs != rhs {
                                    out.push(fail("associativity", format!("Ω^{p}[{i}] Ω^{q}[{j}] Ω^{r}[{k}]")));
                                    break 'prod;
                                }
                            }
                        }
                    }
                }
            }
        }
        if let Some(theta) = &self.theta {
            for f in 0..alg.dim() {
                let fv = alg.basis(f);
                let mut comm = self.forms[1].act_left(&fv, theta);
                axpy(&mut comm, &-Scalar::one(), &self.forms[1].act_right(theta, &fv));
                if self.d(0, &fv) != comm {
                    out.push(fail("d f = -[θ, f]", format!("f = {}", alg.label(f))));
                    break;
                }
            }
        }
        out
    }

    /// First basis element of `A` on which `d f ≠ -[θ, f]`.
    pub fn inner_failure(&self) -> Option<usize> {
        let theta = self.theta.as_ref()?;
        (0..self.algebra.dim()).find(|&f| {
            let fv = self.algebra.basis(f);
            let mut comm = self.forms[1].act_left(&fv, theta);
            axpy(&mut comm, &-Scalar::one(), &self.forms[1].act_right(theta, &fv));
            self.d(0, &fv) != comm
        })
    }

    /// `dθ + θ²`, when `θ` is present.
    pub fn theta_curvature(&self) -> Option<Vector> {
        let theta = self.theta.as_ref()?;
        let mut v = self.d(1, theta);
        axpy(&mut v, &Scalar::one(), &self.wedge(1, theta, 1, theta));
        Some(v)
    }

    /// Sub-bimodule of `Ω¹` generated by the exact forms `d f`.
    pub fn exact_generated(&self) -> Subspace {
        let gens: Vec<Vector> = (0..self.algebra.dim()).map(|f| self.d(0, &self.algebra.basis(f))).collect();
        crate::bimodule::sub_bimodule_generated(&self.forms[1], &gens)
    }

    /// `Ω^p ⊗_ℂ Ω^q` ambient vector of a pure tensor.
    pub fn pure(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        tensor_vectors(x, y)
    }
}

fn one_form_labels(alg: &FiniteAlgebra, ext: &Exterior, p: usize) -> Vec<String> {
    let mut labels = Vec::new();
    for a in 0..alg.dim() {
        for k in 0..ext.dim(p) {
            labels.push(format!("{}·{}", alg.label(a), ext.label(p, k, "θ")));
        }
    }
    labels
}

/// Derivation-based calculus on `M_n`: forms are `M_n ⊗ Λ(sl_n*)` with the
/// central frame `θ^r` dual to `ad λ_r`. Basis index of `E_a ⊗ θ^I` in
/// degree `p` is `a · dim Λ^p + I`.
#[derive(Debug)]
pub struct DerivationCalculus {
    pub calc: Arc<DifferentialCalculus>,
    pub sl: SlBasis,
    pub ext: Exterior,
    /// `λ_r` as algebra elements.
    pub lambda: Vec<Vector>,
}

pub fn derivation_calculus(n: usize) -> Result<DerivationCalculus> {
    if n < 2 {
        return Err(Error::Unsupported("the derivation calculus needs n >= 2".into()));
    }
    let alg = Arc::new(matrix_algebra(n)?);
    let sl = sl_basis(n)?;
    let rank = sl.rank();
    let ext = Exterior::new(rank, TOP_DEGREE);
    let lambda: Vec<Vector> = sl.generators.iter().map(|g| alg.from_matrix(g).expect("sl_n generators live in M_n")).collect();
    let dim_a = alg.dim();

    let mut forms = vec![Arc::new(Bimodule::regular(alg.clone()))];
    for p in 1..=TOP_DEGREE {
        let id = SparseMatrix::identity(ext.dim(p));
        let left = (0..dim_a).map(|a| SparseMatrix::kron(&SparseMatrix::from_dense(&alg.left_mul_matrix(&alg.basis(a))), &id)).collect();
        let right = (0..dim_a).map(|a| SparseMatrix::kron(&SparseMatrix::from_dense(&alg.right_mul_matrix(&alg.basis(a))), &id)).collect();
        forms.push(Arc::new(Bimodule::new(alg.clone(), left, right, one_form_labels(&alg, &ext, p))?));
    }
    let idx = |p: usize, a: usize, k: usize| a * ext.dim(p) + k;

    let mut products = HashMap::new();
    for p in 1..=TOP_DEGREE {
        for q in 1..=TOP_DEGREE - p {
            let mut table = Vec::with_capacity(forms[p].dim() * forms[q].dim());
            for a in 0..dim_a {
                for i in 0..ext.dim(p) {
                    for b in 0..dim_a {
                        for j in 0..ext.dim(q) {
                            let mut v = Vec::new();
                            if let Some((sign, k)) = ext.wedge(p, i, q, j) {
                                let ab = alg.product_of_basis(a, b);
                                for (c, x) in ab.iter().enumerate() {
                                    if !x.is_zero() {
                                        v.push((idx(p + q, c, k), x * &Scalar::from_int(sign)));
                                    }
                                }
                            }
                            table.push(v);
                        }
                    }
                }
            }
            products.insert((p, q), table);
        }
    }

    // d on the constant forms: dθ^r = -Σ_{s<t} C^r_st θ^sθ^t, extended as
    // an antiderivation
    let mut d_ext: Vec<Vec<Vector>> = vec![vec![zero_vector(1)]];
    let d1_ext: Vec<Vector> = (0..rank)
        .map(|r| {
            let mut v = zero_vector(ext.dim(2));
            for s in 0..rank {
                for t in s + 1..rank {
                    let k = ext.index_of(&[s, t]).expect("pair index");
                    v[k] = -sl.c(r, s, t).clone();
                }
            }
            v
        })
        .collect();
    d_ext.push(d1_ext);
    for p in 2..TOP_DEGREE {
        let mut level = Vec::with_capacity(ext.dim(p));
        for k in 0..ext.dim(p) {
            let word = ext.element(p, k).to_vec();
            let head = word[0];
            let rest = ext.index_of(&word[1..]).expect("tail index");
            let mut v = zero_vector(ext.dim(p + 1));
            // d(θ^h ∧ ρ) = dθ^h ∧ ρ - θ^h ∧ dρ
            for (i, c) in d_ext[1][head].iter().enumerate() {
                if let (false, Some((sign, out))) = (c.is_zero(), ext.wedge(2, i, p - 1, rest)) {
                    v[out] += &(c * &Scalar::from_int(sign));
                }
            }
            for (i, c) in d_ext[p - 1][rest].iter().enumerate() {
                if let (false, Some((sign, out))) = (c.is_zero(), ext.wedge(1, head, p, i)) {
                    v[out] -= &(c * &Scalar::from_int(sign));
                }
            }
            level.push(v);
        }
        d_ext.push(level);
    }

    let mut d = Vec::with_capacity(TOP_DEGREE);
    for p in 0..TOP_DEGREE {
        let mut m = Matrix::zeros(forms[p + 1].dim(), forms[p].dim());
        for a in 0..dim_a {
            let av = alg.basis(a);
            for k in 0..ext.dim(p) {
                let col = idx(p, a, k);
                // Σ_s [λ_s, a] θ^s ∧ θ^I
                for (s, lam) in lambda.iter().enumerate() {
                    let br = alg.commutator(lam, &av);
                    if is_zero_vector(&br) {
                        continue;
                    }
                    let s_idx = ext.index_of(&[s]).expect("generator index");
                    if let Some((sign, out)) = ext.wedge(1, s_idx, p, k) {
                        for (c, x) in br.iter().enumerate() {
                            if !x.is_zero() {
                                let cur = m.get(idx(p + 1, c, out), col).clone();
                                m.set(idx(p + 1, c, out), col, &cur + &(x * &Scalar::from_int(sign)));
                            }
                        }
                    }
                }
                if p >= 1 {
                    for (out, x) in d_ext[p][k].iter().enumerate() {
                        if !x.is_zero() {
                            let cur = m.get(idx(p + 1, a, out), col).clone();
                            m.set(idx(p + 1, a, out), col, &cur + x);
                        }
                    }
                }
            }
        }
        d.push(m);
    }

    // θ = -λ_r θ^r
    let mut theta = zero_vector(forms[1].dim());
    for (r, lam) in lambda.iter().enumerate() {
        for (a, x) in lam.iter().enumerate() {
            if !x.is_zero() {
                theta[idx(1, a, r)] = -x.clone();
            }
        }
    }
    let calc = DifferentialCalculus::new(&format!("derivations on M_{n}"), alg, forms, d, products, Some(theta))?;
    Ok(DerivationCalculus { calc: Arc::new(calc), sl, ext, lambda })
}

impl DerivationCalculus {
    pub fn n(&self) -> usize {
        self.sl.n
    }

    pub fn rank(&self) -> usize {
        self.sl.rank()
    }

    /// `a θ^I` for an algebra element `a` and a degree-`p` frame index.
    pub fn form(&self, p: usize, a: &[Scalar], k: usize) -> Vector {
        let dp = self.ext.dim(p);
        let mut v = zero_vector(self.calc.dim(p));
        for (c, x) in a.iter().enumerate() {
            if !x.is_zero() {
                v[c * dp + k] = x.clone();
            }
        }
        v
    }

    /// The central frame element `θ^r`.
    pub fn frame(&self, r: usize) -> Vector {
        self.form(1, self.calc.algebra().unit(), r)
    }

    /// `θ^t θ^u` as a 2-form.
    pub fn frame2(&self, t: usize, u: usize) -> Vector {
        self.calc.wedge(1, &self.frame(t), 1, &self.frame(u))
    }

    /// The generalized flip `a θ^r ⊗ θ^s ↦ a θ^s ⊗ θ^r` on `Ω¹ ⊗_A Ω¹`.
    pub fn flip_sigma(&self) -> Result<BimoduleMap> {
        let t = self.calc.t11();
        let alg = self.calc.algebra();
        let rank = self.rank();
        let d1 = self.calc.dim(1);
        let cols: Vec<Vector> = t
            .quotient
            .kept_indices()
            .iter()
            .map(|&k| {
                let (i, j) = (k / d1, k % d1);
                let (a, r) = (i / rank, i % rank);
                let (b, s) = (j / rank, j % rank);
                let ab = alg.product_of_basis(a, b);
                t.class_of(&self.form(1, ab, s), &self.frame(r))
            })
            .collect();
        let m = Matrix::from_columns(t.dim(), &cols);
        BimoduleMap::new(t.bimodule.clone(), t.bimodule.clone(), m)
    }

    /// Class of `θ^s ⊗ θ^t` in `Ω¹ ⊗_A Ω¹`.
    pub fn frame_pair(&self, s: usize, t: usize) -> Vector {
        self.calc.t11().class_of(&self.frame(s), &self.frame(t))
    }

    /// Class of `θ^t θ^u ⊗ θ^s` in `Ω² ⊗_A Ω¹`.
    pub fn frame_triple(&self, t: usize, u: usize, s: usize) -> Vector {
        self.calc.t21().class_of(&self.frame2(t, u), &self.frame(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{sub_bimodule_generated, verify_bimodule_map};

    #[test]
    fn derivation_calculus_on_m2() {
        let dc = derivation_calculus(2).unwrap();
        let c = &dc.calc;
        assert_eq!((c.dim(0), c.dim(1), c.dim(2), c.dim(3)), (4, 12, 12, 4));
        let alg = c.algebra();
        for r in 0..3 {
            for f in 0..4 {
                let fv = alg.basis(f);
                assert_eq!(c.omega(1).act_left(&fv, &dc.frame(r)), c.omega(1).act_right(&dc.frame(r), &fv));
            }
        }
        assert!(is_zero_vector(&c.d(0, alg.unit())));
        assert!(is_zero_vector(&c.theta_curvature().unwrap()));
        assert!(c.exact_generated().is_full());
        let theta = c.theta().unwrap().clone();
        assert!(sub_bimodule_generated(c.omega(1), &[theta]).is_full());
        assert!(c.pi_failure().is_none());
    }

    #[test]
    fn frame_differential_matches_structure_constants() {
        let dc = derivation_calculus(2).unwrap();
        let c = &dc.calc;
        for r in 0..3 {
            let mut expect = zero_vector(c.dim(2));
            for s in 0..3 {
                for t in 0..3 {
                    let half = &Scalar::ratio(-1, 2) * dc.sl.c(r, s, t);
                    axpy(&mut expect, &half, &dc.frame2(s, t));
                }
            }
            assert_eq!(c.d(1, &dc.frame(r)), expect);
        }
    }

    #[test]
    fn tensor_square_is_free_of_rank_nine() {
        let dc = derivation_calculus(2).unwrap();
        assert_eq!(dc.calc.t11().dim(), 36);
        let flip = dc.flip_sigma().unwrap();
        assert!(verify_bimodule_map(&flip).is_ok());
        assert_eq!(flip.apply(&dc.frame_pair(0, 2)), dc.frame_pair(2, 0));
        assert_eq!(flip.matrix.mul(&flip.matrix), Matrix::identity(36));
    }

    #[test]
    fn rejects_small_n() {
        assert!(derivation_calculus(1).is_err());
    }
}
