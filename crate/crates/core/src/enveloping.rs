//! Forms on the enveloping algebra: `Ω(A) ⊗ Ω(A)^op` in degrees 0 to 2,
//! projector descriptions `Ω¹ ≅ A^e P` and the connections they induce.
//!
//! Products follow the graded tensor rule
//! `(b ⊗ c)(b' ⊗ c') = (-1)^{|c||b'|} bb' ⊗ (c ∘ c')` with the graded
//! opposite product `c ∘ c' = (-1)^{|c||c'|} c'c`, and
//! `d(b ⊗ c) = db ⊗ c + (-1)^{|b|} b ⊗ dc`. In degree 1 the two summands
//! `Ω¹ ⊗ A^op` and `A ⊗ Ω¹` are the images of `d_L` and `d_R`.

use std::sync::Arc;

use crate::algebra::{enveloping, Enveloping};
use crate::bimodule::{BimoduleMap, TensorOverA};
use crate::calculus::{DerivationCalculus, DifferentialCalculus};
use crate::connection::{compose_lr, Connection, LeftConnection};
use crate::connes_lott::ConnesLott;
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, axpy, is_zero_vector, scale_vector, sub_vectors, unit_vector, zero_vector, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

/// Highest total degree constructed.
pub const MAX_DEGREE: usize = 2;

fn sign(e: usize) -> Scalar {
    if e.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

#[derive(Debug)]
pub struct EnvelopingCalculus {
    base: Arc<DifferentialCalculus>,
    env: Enveloping,
    /// Per total degree: `(p, offset)` of the `Ω^p ⊗ Ω^{k-p}` block.
    blocks: Vec<Vec<(usize, usize)>>,
    dims: Vec<usize>,
}

/// Which part of `d^e` to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Full,
    Left,
    Right,
}

impl EnvelopingCalculus {
    pub fn new(base: Arc<DifferentialCalculus>) -> Self {
        let env = enveloping(base.algebra());
        let mut blocks = Vec::new();
        let mut dims = Vec::new();
        for k in 0..=MAX_DEGREE {
            let mut offset = 0;
            let mut row = Vec::new();
            for p in 0..=k {
                row.push((p, offset));
                offset += base.dim(p) * base.dim(k - p);
            }
            blocks.push(row);
            dims.push(offset);
        }
        EnvelopingCalculus { base, env, blocks, dims }
    }

    pub fn base(&self) -> &Arc<DifferentialCalculus> {
        &self.base
    }

    pub fn algebra(&self) -> &Enveloping {
        &self.env
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    /// Dimension of the `Ω^p ⊗ Ω^{k-p}` summand of degree `k`.
    pub fn block_dim(&self, k: usize, p: usize) -> usize {
        self.base.dim(p) * self.base.dim(k - p)
    }

    fn offset(&self, k: usize, p: usize) -> usize {
        self.blocks[k][p].1
    }

    fn index(&self, p: usize, i: usize, q: usize, j: usize) -> usize {
        self.offset(p + q, p) + i * self.base.dim(q) + j
    }

    /// Decodes a degree-`k` index into `(p, i, q, j)`.
    fn decode(&self, k: usize, idx: usize) -> (usize, usize, usize, usize) {
        let &(p, off) = self.blocks[k].iter().rev().find(|(_, off)| *off <= idx).expect("index in range");
        let q = k - p;
        let local = idx - off;
        (p, local / self.base.dim(q), q, local % self.base.dim(q))
    }

    /// `b ⊗ c` for `b ∈ Ω^p`, `c ∈ Ω^q`.
    pub fn tensor(&self, p: usize, b: &[Scalar], q: usize, c: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim(p + q));
        for (i, x) in b.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in c.iter().enumerate() {
                if !y.is_zero() {
                    out[self.index(p, i, q, j)] = x * y;
                }
            }
        }
        out
    }

    /// `β ⊗ 1`
    pub fn left_form(&self, p: usize, b: &[Scalar]) -> Vector {
        self.tensor(p, b, 0, self.base.algebra().unit())
    }

    /// `1 ⊗ γ`
    pub fn right_form(&self, q: usize, c: &[Scalar]) -> Vector {
        self.tensor(0, self.base.algebra().unit(), q, c)
    }

    pub fn unit(&self) -> Vector {
        self.env.algebra.unit().clone()
    }

    pub fn mul(&self, k1: usize, x: &[Scalar], k2: usize, y: &[Scalar]) -> Vector {
        assert!(k1 + k2 <= MAX_DEGREE, "product beyond the constructed degrees");
        let ys: Vec<(usize, usize, usize, usize, &Scalar)> = y
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(idx, v)| {
                let (p, i, q, j) = self.decode(k2, idx);
                (p, i, q, j, v)
            })
            .collect();
        let mut out = zero_vector(self.dim(k1 + k2));
        for (idx, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (p, i, q, j) = self.decode(k1, idx);
            for &(p2, i2, q2, j2, b) in &ys {
                let coeff = &(a * b) * &sign(q * p2 + q * q2);
                let left = self.base.wedge_basis(p, i, p2, i2);
                let right = self.base.wedge_basis(q2, j2, q, j);
                let (pp, qq) = (p + p2, q + q2);
                for (u, l) in left.iter().enumerate() {
                    if l.is_zero() {
                        continue;
                    }
                    let cl = &coeff * l;
                    for (v, r) in right.iter().enumerate() {
                        if !r.is_zero() {
                            out[self.index(pp, u, qq, v)] += &(&cl * r);
                        }
                    }
                }
            }
        }
        out
    }

    /// `d^e`, `d_L` or `d_R` on a degree-`k` element.
    pub fn d(&self, k: usize, x: &[Scalar], part: Part) -> Vector {
        assert!(k < MAX_DEGREE, "d beyond the constructed degrees");
        let mut out = zero_vector(self.dim(k + 1));
        for (idx, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (p, i, q, j) = self.decode(k, idx);
            if part != Part::Right {
                let db = self.base.d_matrix(p).column(i);
                axpy(&mut out, a, &self.tensor(p + 1, &db, q, &unit_vector(self.base.dim(q), j)));
            }
            if part != Part::Left {
                let dc = self.base.d_matrix(q).column(j);
                let c = a * &sign(p);
                axpy(&mut out, &c, &self.tensor(p, &unit_vector(self.base.dim(p), i), q + 1, &dc));
            }
        }
        out
    }

    /// Restriction of a degree-1 element to the `Ω¹ ⊗ A^op` summand.
    pub fn left_summand(&self, x: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim(1));
        let (off, len) = (self.offset(1, 1), self.block_dim(1, 1));
        out[off..off + len].clone_from_slice(&x[off..off + len]);
        out
    }

    /// Restriction of a degree-1 element to the `A ⊗ Ω¹` summand.
    pub fn right_summand(&self, x: &[Scalar]) -> Vector {
        sub_vectors(x, &self.left_summand(x))
    }
}

/// `Ω¹ ≅ A^e P` through an injective bimodule map `ε: Ω¹ → A^e`.
#[derive(Debug)]
pub struct ProjectorModel {
    pub env: EnvelopingCalculus,
    pub p: Vector,
    /// Column `k` is `ε(ξ_k)`.
    pub epsilon: Matrix,
}

/// Structural checks on a projector model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorChecks {
    pub idempotent: bool,
    /// `dim A^e P`
    pub span_dim: usize,
    /// `ε` is an injective bimodule map onto `A^e P`.
    pub embedding_onto_span: bool,
    /// `ε(ξ) P = ε(ξ)` on every basis `ξ`.
    pub fixes_one_forms: bool,
    /// `P (θ ⊗ 1) P = 0`
    pub theta_left_sandwich_zero: bool,
    /// `P (1 ⊗ θ) P = 0`
    pub theta_right_sandwich_zero: bool,
}

impl ProjectorChecks {
    pub fn all_hold(&self) -> bool {
        self.idempotent && self.embedding_onto_span && self.fixes_one_forms
    }
}

impl ProjectorModel {
    pub fn new(base: Arc<DifferentialCalculus>, p: Vector, epsilon: Matrix) -> Result<Self> {
        let env = EnvelopingCalculus::new(base);
        if p.len() != env.dim(0) || epsilon.rows() != env.dim(0) || epsilon.cols() != env.base.dim(1) {
            return Err(Error::DimensionMismatch("P and ε must live in A ⊗ A^op".into()));
        }
        let model = ProjectorModel { env, p, epsilon };
        if model.env.mul(0, &model.p, 0, &model.p) != model.p {
            return Err(Error::NotIdempotent("P² ≠ P".into()));
        }
        Ok(model)
    }

    pub fn base(&self) -> &Arc<DifferentialCalculus> {
        self.env.base()
    }

    pub fn embed(&self, xi: &[Scalar]) -> Vector {
        self.epsilon.apply(xi)
    }

    /// `A^e P`
    pub fn span(&self) -> Subspace {
        let n = self.env.dim(0);
        Subspace::from_vectors(n, (0..n).map(|k| self.env.mul(0, &unit_vector(n, k), 0, &self.p)))
    }

    fn embedding_is_bimodule_map(&self) -> bool {
        let base = self.base();
        let alg = base.algebra();
        let omega1 = base.omega(1);
        let unit = alg.unit();
        (0..alg.dim()).all(|a| {
            let av = alg.basis(a);
            let left = self.env.algebra().tensor(&av, unit);
            let right = self.env.algebra().tensor(unit, &av);
            (0..omega1.dim()).all(|k| {
                let e = self.epsilon.column(k);
                self.embed(&omega1.left_basis_matrix(a).column(k)) == self.env.mul(0, &left, 0, &e)
                    && self.embed(&omega1.right_basis_matrix(a).column(k)) == self.env.mul(0, &right, 0, &e)
            })
        })
    }

    pub fn checks(&self) -> ProjectorChecks {
        let span = self.span();
        let d1 = self.base().dim(1);
        let injective = self.epsilon.rank() == d1;
        let image = self.epsilon.image();
        let fixes = (0..d1).all(|k| {
            let e = self.epsilon.column(k);
            self.env.mul(0, &e, 0, &self.p) == e
        });
        let (left_zero, right_zero) = match self.base().theta() {
            Some(theta) => {
                let sandwich = |t: Vector| {
                    let tp = self.env.mul(1, &t, 0, &self.p);
                    is_zero_vector(&self.env.mul(0, &self.p, 1, &tp))
                };
                (sandwich(self.env.left_form(1, theta)), sandwich(self.env.right_form(1, theta)))
            }
            None => (false, false),
        };
        ProjectorChecks {
            idempotent: self.env.mul(0, &self.p, 0, &self.p) == self.p,
            span_dim: span.dim(),
            embedding_onto_span: injective && image == span && self.embedding_is_bimodule_map(),
            fixes_one_forms: fixes,
            theta_left_sandwich_zero: left_zero,
            theta_right_sandwich_zero: right_zero,
        }
    }

    /// Quotient-coordinate map `Ω¹ ⊗_A Ω¹ → Ω¹(A^e) P`, built from an
    /// ambient rule on `(i, j)` basis pairs; fails unless it is well defined
    /// and injective.
    fn iota(&self, rule: impl Fn(usize, usize) -> Vector) -> Result<Matrix> {
        let t = self.base().t11();
        let d1 = self.base().dim(1);
        let ambient_cols: Vec<Vector> = (0..d1 * d1).map(|k| rule(k / d1, k % d1)).collect();
        let ambient = Matrix::from_columns(self.env.dim(1), &ambient_cols);
        for rel in t.relations.basis_vectors() {
            if !is_zero_vector(&ambient.apply(&rel)) {
                return Err(Error::IdentityFailed("ι does not factor through Ω¹ ⊗_A Ω¹".into()));
            }
        }
        let iota = ambient.mul(t.quotient.section_matrix());
        if iota.rank() != t.dim() {
            return Err(Error::IdentityFailed("ι is not injective".into()));
        }
        Ok(iota)
    }

    /// `ι_L(α ⊗ ξ) = (α ⊗ 1) ε(ξ)`
    pub fn iota_left(&self) -> Result<Matrix> {
        let d1 = self.base().dim(1);
        self.iota(|i, j| self.env.mul(1, &self.env.left_form(1, &unit_vector(d1, i)), 0, &self.epsilon.column(j)))
    }

    /// `ι_R(ξ ⊗ β) = (1 ⊗ β) ε(ξ)`
    pub fn iota_right(&self) -> Result<Matrix> {
        let d1 = self.base().dim(1);
        self.iota(|i, j| self.env.mul(1, &self.env.right_form(1, &unit_vector(d1, j)), 0, &self.epsilon.column(i)))
    }

    /// `(d^e ε(ξ)) P` on every basis `ξ`, as degree-1 elements.
    pub fn nabla_e(&self, part: Part) -> Vec<Vector> {
        (0..self.base().dim(1)).map(|k| self.env.mul(1, &self.env.d(0, &self.epsilon.column(k), part), 0, &self.p)).collect()
    }

    /// `∇^{e2} ξ` by applying the projector connection twice:
    /// `(d^e((d^e ε(ξ)) P)) P`.
    pub fn nabla_e_square(&self) -> Vec<Vector> {
        self.nabla_e(Part::Full).iter().map(|y| self.env.mul(2, &self.env.d(1, y, Part::Full), 0, &self.p)).collect()
    }

    /// `(d^e P)(d^e P) P`
    pub fn curvature_form(&self) -> Vector {
        let dp = self.env.d(0, &self.p, Part::Full);
        let dpdp = self.env.mul(1, &dp, 1, &dp);
        self.env.mul(2, &dpdp, 0, &self.p)
    }

    /// `Curv^e(ξ) = -ξ (d^e P)(d^e P) P` on every basis `ξ`.
    pub fn curv_enveloping(&self) -> Vec<Vector> {
        let form = self.curvature_form();
        (0..self.base().dim(1)).map(|k| scale_vector(&-Scalar::one(), &self.env.mul(0, &self.epsilon.column(k), 2, &form))).collect()
    }
}

fn solve_columns(iota: &Matrix, values: &[Vector], what: &str) -> Result<Matrix> {
    let cols: Result<Vec<Vector>> =
        values.iter().map(|v| iota.solve(v).ok_or_else(|| Error::IdentityFailed(format!("{what} leaves the image of ι")))).collect();
    Ok(Matrix::from_columns(iota.cols(), &cols?))
}

/// `D_L`, `D_R` pulled back from the projector connection, and the
/// corrections `τ_L`, `τ_R` relative to `-θ ⊗ ξ` and `ξ ⊗ θ`.
#[derive(Clone, Debug)]
pub struct ProjectorParts {
    pub d_l: Matrix,
    pub d_r: Matrix,
    pub tau_l: Matrix,
    pub tau_r: Matrix,
    /// `(d^e ε(ξ)) P = ι_L(D_L ξ) + ι_R(D_R ξ)` on every basis `ξ`.
    pub splitting_holds: bool,
}

pub fn projector_parts(model: &ProjectorModel) -> Result<ProjectorParts> {
    let base = model.base();
    let theta = base.theta().ok_or_else(|| Error::Unsupported("the calculus has no θ".into()))?.clone();
    let iota_l = model.iota_left()?;
    let iota_r = model.iota_right()?;
    let d_l = solve_columns(&iota_l, &model.nabla_e(Part::Left), "(d_L ξ) P")?;
    let d_r = solve_columns(&iota_r, &model.nabla_e(Part::Right), "(d_R ξ) P")?;
    let t: Arc<TensorOverA> = base.t11();
    let d1 = base.dim(1);
    let mut tau_l_cols = Vec::with_capacity(d1);
    let mut tau_r_cols = Vec::with_capacity(d1);
    for k in 0..d1 {
        let xi = unit_vector(d1, k);
        tau_l_cols.push(add_vectors(&d_l.column(k), &t.class_of(&theta, &xi)));
        tau_r_cols.push(sub_vectors(&d_r.column(k), &t.class_of(&xi, &theta)));
    }
    let full = model.nabla_e(Part::Full);
    let splitting_holds = (0..d1).all(|k| add_vectors(&iota_l.apply(&d_l.column(k)), &iota_r.apply(&d_r.column(k))) == full[k]);
    Ok(ProjectorParts {
        d_l,
        d_r,
        tau_l: Matrix::from_columns(t.dim(), &tau_l_cols),
        tau_r: Matrix::from_columns(t.dim(), &tau_r_cols),
        splitting_holds,
    })
}

/// `D = D_L + σ ∘ D_R` from the projector parts.
pub fn projector_connection(model: &ProjectorModel, sigma: BimoduleMap) -> Result<Connection> {
    let parts = projector_parts(model)?;
    compose_lr(model.base().clone(), &parts.d_l, &parts.d_r, sigma)
}

/// Comparison of the closed form with the direct double application.
#[derive(Clone, Debug)]
pub struct EnvelopingCurvature {
    pub nabla_square: Vec<Vector>,
    pub curv: Vec<Vector>,
    /// `Curv^e = -∇^{e2}` on every basis `ξ`.
    pub equals_minus_nabla_square: bool,
    /// `Curv^e = ∇^{e2}` on every basis `ξ`.
    pub equals_nabla_square: bool,
    /// `∇^{e2}ξ = -(d^e ε(ξ))(d^e P) P`, the module-rule form of the same
    /// double application.
    pub oracle_consistent: bool,
    /// `Curv^e(aξb) = (a ⊗ b) Curv^e(ξ)` over basis elements.
    pub bilinear: bool,
}

impl EnvelopingCurvature {
    pub fn vanishes(&self) -> bool {
        self.curv.iter().all(|v| is_zero_vector(v))
    }
}

pub fn curv_enveloping(model: &ProjectorModel) -> EnvelopingCurvature {
    let env = &model.env;
    let nabla_square = model.nabla_e_square();
    let curv = model.curv_enveloping();
    let dp = env.d(0, &model.p, Part::Full);
    let oracle_consistent = (0..curv.len()).all(|k| {
        let dx = env.d(0, &model.epsilon.column(k), Part::Full);
        let alt = env.mul(2, &env.mul(1, &dx, 1, &dp), 0, &model.p);
        scale_vector(&-Scalar::one(), &alt) == nabla_square[k]
    });
    let minus = (0..curv.len()).all(|k| scale_vector(&-Scalar::one(), &nabla_square[k]) == curv[k]);
    let plus = (0..curv.len()).all(|k| nabla_square[k] == curv[k]);
    let base = model.base();
    let alg = base.algebra();
    let omega1 = base.omega(1);
    let form = model.curvature_form();
    let curv_of = |xi: &[Scalar]| scale_vector(&-Scalar::one(), &env.mul(0, &model.embed(xi), 2, &form));
    let unit = alg.unit();
    let bilinear = (0..alg.dim()).all(|a| {
        let av = alg.basis(a);
        let l = env.algebra().tensor(&av, unit);
        let r = env.algebra().tensor(unit, &av);
        (0..omega1.dim()).all(|k| {
            curv_of(&omega1.left_basis_matrix(a).column(k)) == env.mul(0, &l, 2, &curv[k])
                && curv_of(&omega1.right_basis_matrix(a).column(k)) == env.mul(0, &r, 2, &curv[k])
        })
    });
    EnvelopingCurvature { nabla_square, curv, equals_minus_nabla_square: minus, equals_nabla_square: plus, oracle_consistent, bilinear }
}

/// Compares the `Ω² ⊗ A^op` block of `∇^{e2}` with `∇²` of the left
/// connection `D_L` on `Ω¹`, carried over by `β ⊗ ξ ↦ (β ⊗ 1) ε(ξ)`.
pub fn left_block_matches(model: &ProjectorModel, d_l: &Matrix) -> Result<bool> {
    let env = &model.env;
    let calc = model.base().clone();
    let (d1, d2) = (calc.dim(1), calc.dim(2));
    let lc = LeftConnection::new(calc.clone(), calc.omega(1).clone(), calc.t11(), calc.t21(), d_l.clone())?;
    let nabla2 = lc.nabla_square()?;
    let t21 = calc.t21();
    let cols: Vec<Vector> =
        (0..d2 * d1).map(|k| env.mul(2, &env.left_form(2, &unit_vector(d2, k / d1)), 0, &model.epsilon.column(k % d1))).collect();
    let ambient = Matrix::from_columns(env.dim(2), &cols);
    if t21.relations.basis_vectors().iter().any(|r| !is_zero_vector(&ambient.apply(r))) {
        return Err(Error::IdentityFailed("β ⊗ ξ ↦ (β ⊗ 1) ε(ξ) does not factor through Ω² ⊗_A Ω¹".into()));
    }
    let iota = ambient.mul(t21.quotient.section_matrix());
    let (off, len) = (env.offset(2, 2), env.block_dim(2, 2));
    let direct = model.nabla_e_square();
    Ok((0..d1).all(|k| iota.apply(&nabla2.column(k))[off..off + len] == direct[k][off..off + len]))
}

/// The Connes-Lott projector `P = E22 ⊗ E33 + E33 ⊗ E22` with
/// `ε(ξ) = (ξ13 E12 + ξ23 E22) ⊗ E33 + E33 ⊗ (ξ31 E21 + ξ32 E22)`.
pub fn connes_lott_projector(cl: &ConnesLott) -> Result<ProjectorModel> {
    let alg = cl.algebra();
    let env = enveloping(alg);
    let el = |label: &str| alg.basis(alg.index_of(label).expect("block algebra label"));
    let (e12, e21, e22, e33) = (el("E12"), el("E21"), el("E22"), el("E33"));
    let p = add_vectors(&env.tensor(&e22, &e33), &env.tensor(&e33, &e22));
    // Ω¹ basis order: (1,3), (2,3), (3,1), (3,2)
    let cols = vec![env.tensor(&e12, &e33), env.tensor(&e22, &e33), env.tensor(&e33, &e21), env.tensor(&e33, &e22)];
    let epsilon = Matrix::from_columns(env.algebra.dim(), &cols);
    ProjectorModel::new(cl.calc.clone(), p, epsilon)
}

/// `ζ = (1/n) Σ E_ij ⊗ E_ji` in `M_n ⊗ M_n^op`.
pub fn zeta(dc: &DerivationCalculus) -> Vector {
    let alg = dc.calc.algebra();
    let env = enveloping(alg);
    let n = dc.n();
    let inv = Scalar::ratio(1, n as i64);
    let mut z = zero_vector(env.algebra.dim());
    for i in 0..n {
        for j in 0..n {
            let eij = alg.basis(alg.index_of(&format!("E{}{}", i + 1, j + 1)).expect("matrix unit"));
            let eji = alg.basis(alg.index_of(&format!("E{}{}", j + 1, i + 1)).expect("matrix unit"));
            axpy(&mut z, &inv, &env.tensor(&eij, &eji));
        }
    }
    z
}

/// `M_n ⊗ M_n = Ω¹(M_n) ⊕ M_n ζ`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaReport {
    pub idempotent: bool,
    /// `f ζ = ζ f` in the bimodule `M_n ⊗ M_n` for every basis `f`.
    pub commutes: bool,
    /// `(1 ⊗ f - f ⊗ 1) ζ = 0` for every basis `f`.
    pub kills_exact: bool,
    pub one_form_dim: usize,
    pub zeta_dim: usize,
    pub total_dim: usize,
    pub direct_sum: bool,
}

impl ZetaReport {
    pub fn all_hold(&self) -> bool {
        self.idempotent && self.commutes && self.kills_exact && self.direct_sum
    }
}

pub fn zeta_check(dc: &DerivationCalculus) -> ZetaReport {
    let alg = dc.calc.algebra();
    let env = enveloping(alg);
    let ea = &env.algebra;
    let z = zeta(dc);
    let unit = alg.unit();
    let one_minus = sub_vectors(ea.unit(), &z);
    let commutes = (0..alg.dim()).all(|f| {
        let fv = alg.basis(f);
        ea.mul(&env.tensor(&fv, unit), &z) == ea.mul(&env.tensor(unit, &fv), &z)
    });
    let kills_exact = (0..alg.dim()).all(|f| {
        let fv = alg.basis(f);
        is_zero_vector(&ea.mul(&universal_d(&env, unit, &fv), &z))
    });
    let n = ea.dim();
    let span = |x: &Vector| Subspace::from_vectors(n, (0..n).map(|k| ea.mul(&ea.basis(k), x)));
    let omega = span(&one_minus);
    let zs = span(&z);
    let sum = omega.sum(&zs);
    ZetaReport {
        idempotent: ea.mul(&z, &z) == z,
        commutes,
        kills_exact,
        one_form_dim: omega.dim(),
        zeta_dim: zs.dim(),
        total_dim: n,
        direct_sum: omega.dim() + zs.dim() == n && sum.is_full() && omega.dim() == dc.calc.dim(1),
    }
}

/// `1 ⊗ f - f ⊗ 1`
fn universal_d(env: &Enveloping, unit: &[Scalar], f: &[Scalar]) -> Vector {
    sub_vectors(&env.tensor(unit, f), &env.tensor(f, unit))
}

/// The matrix-geometry projector `P = 1 ⊗ 1 - ζ` with `ε(df) = 1 ⊗ f - f ⊗ 1`
/// extended as a left module map; `ε` is solved for, then checked.
pub fn matrix_projector(dc: &DerivationCalculus) -> Result<ProjectorModel> {
    let calc = &dc.calc;
    let alg = calc.algebra();
    let env = enveloping(alg);
    let ea = &env.algebra;
    let unit = alg.unit();
    let dim_a = alg.dim();
    // f ⊗ g ↦ f dg in Ω¹ and f ⊗ g ↦ (f ⊗ 1)(1 ⊗ g - g ⊗ 1) in A^e
    let mut to_forms = Vec::with_capacity(dim_a * dim_a);
    let mut to_env = Vec::with_capacity(dim_a * dim_a);
    for f in 0..dim_a {
        let fv = alg.basis(f);
        for g in 0..dim_a {
            let gv = alg.basis(g);
            to_forms.push(calc.omega(1).act_left(&fv, &calc.d(0, &gv)));
            to_env.push(ea.mul(&env.tensor(&fv, unit), &universal_d(&env, unit, &gv)));
        }
    }
    let forms = Matrix::from_columns(calc.dim(1), &to_forms);
    let target = Matrix::from_columns(ea.dim(), &to_env);
    for v in forms.kernel().basis_vectors() {
        if !is_zero_vector(&target.apply(&v)) {
            return Err(Error::IdentityFailed("df ↦ 1 ⊗ f - f ⊗ 1 is not well defined on Ω¹".into()));
        }
    }
    let cols: Result<Vec<Vector>> = (0..calc.dim(1))
        .map(|k| {
            forms
                .solve(&unit_vector(calc.dim(1), k))
                .map(|pre| target.apply(&pre))
                .ok_or_else(|| Error::IdentityFailed("Ω¹ is not spanned by f dg".into()))
        })
        .collect();
    let epsilon = Matrix::from_columns(ea.dim(), &cols?);
    let p = sub_vectors(ea.unit(), &zeta(dc));
    ProjectorModel::new(calc.clone(), p, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::derivation_calculus;
    use crate::connection::theta_connection;
    use crate::connes_lott::connes_lott_calculus;

    #[test]
    fn degree_dimensions() {
        let cl = connes_lott_calculus().unwrap();
        let env = EnvelopingCalculus::new(cl.calc.clone());
        assert_eq!((env.dim(0), env.dim(1), env.dim(2)), (25, 40, 26));
        let dc = derivation_calculus(2).unwrap();
        let env = EnvelopingCalculus::new(dc.calc.clone());
        assert_eq!((env.dim(0), env.dim(1), env.dim(2)), (16, 96, 240));
    }

    #[test]
    fn degree_zero_product_is_the_enveloping_algebra() {
        let cl = connes_lott_calculus().unwrap();
        let env = EnvelopingCalculus::new(cl.calc.clone());
        let ea = &env.algebra().algebra;
        for i in 0..ea.dim() {
            for j in 0..ea.dim() {
                assert_eq!(env.mul(0, &ea.basis(i), 0, &ea.basis(j)), *ea.product_of_basis(i, j));
            }
        }
    }

    #[test]
    fn d_squares_to_zero_and_splits() {
        let cl = connes_lott_calculus().unwrap();
        let env = EnvelopingCalculus::new(cl.calc.clone());
        assert!(is_zero_vector(&env.d(0, &env.unit(), Part::Full)));
        let theta = cl.calc.theta().unwrap();
        let tl = env.left_form(1, theta);
        let tr = env.right_form(1, theta);
        for k in 0..env.dim(0) {
            let x = unit_vector(env.dim(0), k);
            let dx = env.d(0, &x, Part::Full);
            assert!(is_zero_vector(&env.d(1, &dx, Part::Full)));
            assert_eq!(dx, add_vectors(&env.d(0, &x, Part::Left), &env.d(0, &x, Part::Right)));
            let dl = sub_vectors(&env.mul(0, &x, 1, &tl), &env.mul(1, &tl, 0, &x));
            assert_eq!(env.d(0, &x, Part::Left), dl);
            let dr = sub_vectors(&env.mul(1, &tr, 0, &x), &env.mul(0, &x, 1, &tr));
            assert_eq!(env.d(0, &x, Part::Right), dr);
        }
    }

    #[test]
    fn connes_lott_projector_reproduces_the_theta_connection() {
        let cl = connes_lott_calculus().unwrap();
        let model = connes_lott_projector(&cl).unwrap();
        let checks = model.checks();
        assert!(checks.all_hold());
        assert_eq!(checks.span_dim, 4);
        assert!(checks.theta_left_sandwich_zero);
        let parts = projector_parts(&model).unwrap();
        assert!(parts.splitting_holds);
        assert!(parts.tau_l.is_zero());
        assert!(parts.tau_r.is_zero());
        for mu in [Scalar::zero(), Scalar::one(), Scalar::ratio(1, 2)] {
            let sigma = cl.sigma_family(&mu).unwrap();
            let via_p = projector_connection(&model, sigma.clone()).unwrap();
            let direct = theta_connection(cl.calc.clone(), sigma).unwrap();
            assert_eq!(via_p.d_matrix(), direct.d_matrix());
        }
    }

    #[test]
    fn zeta_decomposition_on_m2() {
        let dc = derivation_calculus(2).unwrap();
        let report = zeta_check(&dc);
        assert!(report.all_hold(), "{report:?}");
        assert_eq!((report.one_form_dim, report.zeta_dim, report.total_dim), (12, 4, 16));
    }

    #[test]
    fn constant_projector_is_flat() {
        let cl = connes_lott_calculus().unwrap();
        let env = EnvelopingCalculus::new(cl.calc.clone());
        let dp = env.d(0, &env.unit(), Part::Full);
        assert!(is_zero_vector(&dp));
        assert!(is_zero_vector(&env.mul(2, &env.mul(1, &dp, 1, &dp), 0, &env.unit())));
    }

    #[test]
    fn graded_leibniz_on_mixed_degrees() {
        let cl = connes_lott_calculus().unwrap();
        let env = EnvelopingCalculus::new(cl.calc.clone());
        let (n0, n1) = (env.dim(0), env.dim(1));
        for a in 0..n0 {
            for b in 0..n1 {
                let (x, y) = (unit_vector(n0, a), unit_vector(n1, b));
                let lhs = env.d(1, &env.mul(1, &y, 0, &x), Part::Full);
                let rhs = sub_vectors(&env.mul(2, &env.d(1, &y, Part::Full), 0, &x), &env.mul(1, &y, 1, &env.d(0, &x, Part::Full)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn enveloping_curvature_on_connes_lott() {
        let cl = connes_lott_calculus().unwrap();
        let model = connes_lott_projector(&cl).unwrap();
        let report = curv_enveloping(&model);
        assert!(report.oracle_consistent);
        assert!(report.bilinear);
        assert!(!report.vanishes());
        // -ξ (dP)(dP)P coincides with +∇^{e2}ξ
        assert!(report.equals_nabla_square);
        assert!(!report.equals_minus_nabla_square);
        let parts = projector_parts(&model).unwrap();
        assert!(left_block_matches(&model, &parts.d_l).unwrap());
    }

    #[test]
    fn matrix_projector_on_m2() {
        let dc = derivation_calculus(2).unwrap();
        let model = matrix_projector(&dc).unwrap();
        let checks = model.checks();
        assert!(checks.all_hold());
        assert_eq!(checks.span_dim, 12);
        let parts = projector_parts(&model).unwrap();
        assert!(parts.splitting_holds);
        assert!(!parts.tau_l.is_zero());
        let conn = projector_connection(&model, dc.flip_sigma().unwrap()).unwrap();
        assert!(conn.right_leibniz_failure().is_none());
        let curv = crate::curvature::curvature(conn.left()).unwrap();
        assert!(curv.junk_is_zero());
        assert!(curv.curv.is_zero());
        let report = curv_enveloping(&model);
        assert!(report.oracle_consistent && report.bilinear && report.equals_nabla_square);
        assert!(!report.vanishes());
        assert!(left_block_matches(&model, &parts.d_l).unwrap());
    }
}
