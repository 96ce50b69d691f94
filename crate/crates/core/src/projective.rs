//! `Ω¹(M_3^+)` as a direct summand of the free left module `ℳ = (M_3^+)³`.
//!
//! `ℳ` carries the entrywise left action and the right action through
//! `ρ(f) = 1 ⊗ f`, which moves the slots of a row vector with the scalar
//! entries of `f`. Basis element `E_a θ^r` of `ℳ` sits at `r * dim A + a`.

use std::sync::Arc;

use crate::bimodule::{tensor_over_a, verify_bimodule_map, Bimodule, BimoduleMap, TensorOverA};
use crate::calculus::DifferentialCalculus;
use crate::connection::{Coefficients, Connection, LeftConnection};
use crate::connes_lott::ConnesLott;
use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vector, unit_vector, zero_vector, Matrix, SparseMatrix, Subspace, Vector};
use crate::scalar::Scalar;

pub const RANK: usize = 3;

#[derive(Clone, Debug)]
pub struct ProjectiveModel {
    calc: Arc<DifferentialCalculus>,
    pub module: Arc<Bimodule>,
    /// `ι: Ω¹ → ℳ`
    pub iota: Matrix,
    /// Entries `P_rs ∈ M_3^+` of the projector in `M_3(M_3^+)`.
    pub projector: Vec<Vec<Vector>>,
    /// `α ↦ αP` on `ℳ`.
    pub projection: Matrix,
    /// `p: ℳ → Ω¹` with `ι ∘ p = (α ↦ αP)`.
    pub p: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveChecks {
    /// `P² = P` in `M_3(M_3^+)`.
    pub idempotent: bool,
    /// `ι(ξ)P = ι(ξ)` on every basis `ξ`.
    pub fixes_one_forms: bool,
    pub image_dim: usize,
    /// `ℳP = ι(Ω¹)`
    pub image_is_one_forms: bool,
    /// `p ∘ ι = 1`
    pub left_inverse: bool,
    /// `ι` intertwines both actions when `ℳ` is twisted by `ρ`.
    pub iota_bimodule_map: bool,
    /// First basis `(f, r)` with `f θ^r ≠ θ^r ρ(f)`.
    pub rho_witness: Option<(usize, usize)>,
}

impl ProjectiveChecks {
    pub fn all_hold(&self) -> bool {
        self.idempotent
            && self.fixes_one_forms
            && self.image_dim == 4
            && self.image_is_one_forms
            && self.left_inverse
            && self.iota_bimodule_map
            && self.rho_witness.is_some()
    }
}

/// `Dθ^r = (1 ⊗ ι) D θ^r_P` on the generators, with coefficients `ω^r_{st}`
/// reproducing it as `-ω^r_{st} θ^s_P ⊗ θ^t`.
#[derive(Clone, Debug)]
pub struct LiftedConnection {
    pub omega: Coefficients,
    /// Connection on `ℳ` built from `ω` and the left Leibniz rule.
    pub connection: LeftConnection,
    /// `(1 ⊗ ι) ∘ D ∘ p` as a map `ℳ → Ω¹ ⊗_A ℳ`.
    pub through_omega: Matrix,
    /// The square commutes on each generator `θ^r`.
    pub square_on_generators: Vec<bool>,
    /// Basis elements of `ℳ` on which the square commutes.
    pub square_on_basis: usize,
}

impl LiftedConnection {
    pub fn square_commutes(&self) -> bool {
        self.square_on_generators.iter().all(|b| *b)
    }
}

impl ProjectiveModel {
    pub fn new(cl: &ConnesLott) -> Result<Self> {
        let calc = cl.calc.clone();
        let alg = calc.algebra().clone();
        let n = alg.dim();
        let mats: Vec<Matrix> = (0..n)
            .map(|a| alg.to_matrix(&alg.basis(a)).ok_or_else(|| Error::Unsupported("algebra has no matrix form".into())))
            .collect::<Result<_>>()?;
        let dim = RANK * n;
        let left: Vec<SparseMatrix> = (0..n)
            .map(|a| {
                let l = alg.left_mul_matrix(&alg.basis(a));
                let mut m = Matrix::zeros(dim, dim);
                for r in 0..RANK {
                    for i in 0..n {
                        for j in 0..n {
                            m.set(r * n + i, r * n + j, l.get(i, j).clone());
                        }
                    }
                }
                SparseMatrix::from_dense(&m)
            })
            .collect();
        let right: Vec<SparseMatrix> = mats
            .iter()
            .map(|f| {
                let mut m = Matrix::zeros(dim, dim);
                for r in 0..RANK {
                    for s in 0..RANK {
                        for a in 0..n {
                            m.set(s * n + a, r * n + a, f.get(r, s).clone());
                        }
                    }
                }
                SparseMatrix::from_dense(&m)
            })
            .collect();
        let labels = (0..RANK).flat_map(|r| (0..n).map(move |a| (r, a))).map(|(r, a)| format!("{}θ{}", alg.label(a), r + 1)).collect();
        let module = Arc::new(Bimodule::new(alg.clone(), left, right, labels)?);

        // ξ ↦ (ξ31 E33, ξ32 E33, ξ13 E12 + ξ23 E22)
        let el = |label: &str| alg.element(&[(label, Scalar::one())]);
        let mut iota = Matrix::zeros(dim, 4);
        let place = |iota: &mut Matrix, slot: usize, label: &str, col: usize| {
            for (a, c) in el(label).iter().enumerate() {
                if !c.is_zero() {
                    iota.set(slot * n + a, col, c.clone());
                }
            }
        };
        let omega1 = calc.omega(1);
        for (col, lab) in omega1.labels().iter().enumerate() {
            match lab.as_str() {
                "E31" => place(&mut iota, 0, "E33", col),
                "E32" => place(&mut iota, 1, "E33", col),
                "E13" => place(&mut iota, 2, "E12", col),
                "E23" => place(&mut iota, 2, "E22", col),
                other => return Err(Error::InvalidBimodule(format!("unexpected 1-form label {other}"))),
            }
        }

        let mut projector = vec![vec![alg.zero(); RANK]; RANK];
        projector[0][0] = el("E33");
        projector[1][1] = el("E33");
        projector[2][2] = el("E22");
        let projection = right_multiplication(&alg_mul(&alg), &projector, n);
        let mut p_cols = Vec::with_capacity(dim);
        for k in 0..dim {
            let image = projection.column(k);
            let x = iota
                .solve(&image)
                .filter(|x| iota.apply(x) == image)
                .ok_or_else(|| Error::IdentityFailed(format!("αP leaves ι(Ω¹) at {}", module.label(k))))?;
            p_cols.push(x);
        }
        let p = Matrix::from_columns(4, &p_cols);
        Ok(ProjectiveModel { calc, module, iota, projector, projection, p })
    }

    pub fn calculus(&self) -> &Arc<DifferentialCalculus> {
        &self.calc
    }

    /// `θ^r`, the unit in slot `r`.
    pub fn generator(&self, r: usize) -> Vector {
        let n = self.calc.algebra().dim();
        let mut v = zero_vector(RANK * n);
        for (a, c) in self.calc.algebra().unit().iter().enumerate() {
            v[r * n + a] = c.clone();
        }
        v
    }

    /// `θ^r_P = p(θ^r)`
    pub fn theta_p(&self, r: usize) -> Vector {
        self.p.apply(&self.generator(r))
    }

    pub fn iota_map(&self) -> Result<BimoduleMap> {
        BimoduleMap::new(self.calc.omega(1).clone(), self.module.clone(), self.iota.clone())
    }

    pub fn checks(&self) -> ProjectiveChecks {
        let alg = self.calc.algebra();
        let n = alg.dim();
        let mul = alg_mul(alg);
        let square = matrix_product(&mul, &self.projector, &self.projector, n);
        let d1 = self.calc.dim(1);
        let fixes_one_forms = (0..d1).all(|k| {
            let x = self.iota.column(k);
            self.projection.apply(&x) == x
        });
        let image = self.projection.image();
        let embedded = self.iota.image();
        let left_inverse = self.p.mul(&self.iota) == Matrix::identity(d1);
        let iota_bimodule_map = self.iota_map().map(|m| verify_bimodule_map(&m).is_ok()).unwrap_or(false);
        let mut rho_witness = None;
        'search: for f in 0..n {
            let fv = alg.basis(f);
            for r in 0..RANK {
                let g = self.generator(r);
                if self.module.act_left(&fv, &g) != self.module.act_right(&g, &fv) {
                    rho_witness = Some((f, r));
                    break 'search;
                }
            }
        }
        ProjectiveChecks {
            idempotent: square == self.projector,
            fixes_one_forms,
            image_dim: image.dim(),
            image_is_one_forms: image == embedded,
            left_inverse,
            iota_bimodule_map,
            rho_witness,
        }
    }

    /// `1 ⊗ ι: Ω¹ ⊗_A Ω¹ → Ω¹ ⊗_A ℳ`, checked to descend to the quotient.
    pub fn tensor_iota(&self, target: &TensorOverA) -> Result<Matrix> {
        let t11 = self.calc.t11();
        let d1 = self.calc.dim(1);
        let ambient: Vec<Vector> = (0..d1 * d1).map(|k| target.class_of(&unit_vector(d1, k / d1), &self.iota.column(k % d1))).collect();
        let ambient = Matrix::from_columns(target.dim(), &ambient);
        if t11.relations.basis_vectors().iter().any(|rel| !is_zero_vector(&ambient.apply(rel))) {
            return Err(Error::IdentityFailed("1 ⊗ ι does not descend to Ω¹ ⊗_A Ω¹".into()));
        }
        Ok(ambient.mul(t11.quotient.section_matrix()))
    }

    /// Transports `D` on `Ω¹` to `ℳ` through `p` and `ι` and solves for
    /// `ω^r_{st} ∈ A`.
    pub fn lift_connection(&self, conn: &Connection) -> Result<LiftedConnection> {
        let calc = &self.calc;
        let alg = calc.algebra();
        let n = alg.dim();
        let t1 = Arc::new(tensor_over_a(calc.omega(1).clone(), self.module.clone())?);
        let t2 = Arc::new(tensor_over_a(calc.omega(2).clone(), self.module.clone())?);
        let one_iota = self.tensor_iota(&t1)?;
        let through_omega = one_iota.mul(conn.d_matrix()).mul(&self.p);

        // columns -E_a θ^s_P ⊗ θ^t, unknown ω^r_{st} coordinate a at (s * RANK + t) * n + a
        let omega1 = calc.omega(1);
        let mut cols = Vec::with_capacity(RANK * RANK * n);
        for s in 0..RANK {
            let tp = self.theta_p(s);
            for t in 0..RANK {
                let gt = self.generator(t);
                for a in 0..n {
                    let form = omega1.act_left(&alg.basis(a), &tp);
                    let mut v = t1.class_of(&form, &gt);
                    v.iter_mut().for_each(|x| *x = -x.clone());
                    cols.push(v);
                }
            }
        }
        let system = Matrix::from_columns(t1.dim(), &cols);
        let mut omega: Coefficients = Vec::with_capacity(RANK);
        let mut generator_values = Vec::with_capacity(RANK);
        for r in 0..RANK {
            let target = through_omega.apply(&self.generator(r));
            let x = system
                .solve(&target)
                .filter(|x| system.apply(x) == target)
                .ok_or_else(|| Error::IdentityFailed(format!("Dθ^{} is not of the form -ω θ_P ⊗ θ", r + 1)))?;
            omega.push((0..RANK).map(|s| (0..RANK).map(|t| x[(s * RANK + t) * n..(s * RANK + t + 1) * n].to_vec()).collect()).collect());
            generator_values.push(system.apply(&x));
        }

        // E_a θ^r ↦ dE_a ⊗ θ^r + E_a Dθ^r
        let mut d_cols = Vec::with_capacity(RANK * n);
        for (r, gen_value) in generator_values.iter().enumerate() {
            for a in 0..n {
                let av = alg.basis(a);
                let mut v = t1.class_of(&calc.d(0, &av), &self.generator(r));
                axpy(&mut v, &Scalar::one(), &t1.bimodule.act_left(&av, gen_value));
                d_cols.push(v);
            }
        }
        let d_map = Matrix::from_columns(t1.dim(), &d_cols);
        let connection = LeftConnection::new(calc.clone(), self.module.clone(), t1, t2, d_map)?;
        let square_on_generators =
            (0..RANK).map(|r| connection.apply(&self.generator(r)) == through_omega.apply(&self.generator(r))).collect();
        let square_on_basis = (0..RANK * n).filter(|&k| connection.d_matrix().column(k) == through_omega.column(k)).count();
        Ok(LiftedConnection { omega, connection, through_omega, square_on_generators, square_on_basis })
    }

    /// Span of the images `ι(Ω¹)` inside `ℳ`.
    pub fn embedded_one_forms(&self) -> Subspace {
        self.iota.image()
    }
}

fn alg_mul(alg: &crate::algebra::FiniteAlgebra) -> impl Fn(&[Scalar], &[Scalar]) -> Vector + '_ {
    move |x, y| alg.mul(x, y)
}

fn matrix_product(mul: &impl Fn(&[Scalar], &[Scalar]) -> Vector, a: &[Vec<Vector>], b: &[Vec<Vector>], n: usize) -> Vec<Vec<Vector>> {
    let size = a.len();
    (0..size)
        .map(|r| {
            (0..size)
                .map(|s| {
                    let mut acc = zero_vector(n);
                    for k in 0..size {
                        axpy(&mut acc, &Scalar::one(), &mul(&a[r][k], &b[k][s]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `α ↦ αQ` with `(αQ)_s = Σ_r α_r Q_rs`, products taken in `A`.
fn right_multiplication(mul: &impl Fn(&[Scalar], &[Scalar]) -> Vector, q: &[Vec<Vector>], n: usize) -> Matrix {
    let size = q.len();
    let mut cols = Vec::with_capacity(size * n);
    for r in 0..size {
        for a in 0..n {
            let mut v = zero_vector(size * n);
            let ea = unit_vector(n, a);
            for s in 0..size {
                let prod = mul(&ea, &q[r][s]);
                for (b, c) in prod.into_iter().enumerate() {
                    v[s * n + b] = c;
                }
            }
            cols.push(v);
        }
    }
    Matrix::from_columns(size * n, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::theta_connection;
    use crate::connes_lott::connes_lott_calculus;

    #[test]
    fn projector_and_embedding() {
        let cl = connes_lott_calculus().unwrap();
        let model = ProjectiveModel::new(&cl).unwrap();
        assert_eq!(model.module.dim(), 15);
        let checks = model.checks();
        assert!(checks.all_hold(), "{checks:?}");
        let (f, r) = checks.rho_witness.unwrap();
        assert_eq!((cl.algebra().label(f), r), ("E11", 0));
        assert_eq!(model.iota.mul(&model.p), model.projection);
    }

    #[test]
    fn projected_generators_are_the_lower_and_right_forms() {
        let cl = connes_lott_calculus().unwrap();
        let model = ProjectiveModel::new(&cl).unwrap();
        let omega1 = cl.calc.omega(1);
        let labels: Vec<&str> = (0..RANK)
            .map(|r| {
                let v = model.theta_p(r);
                let k = v.iter().position(|c| !c.is_zero()).unwrap();
                assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 1);
                assert!(v[k].is_one());
                omega1.label(k)
            })
            .collect();
        assert_eq!(labels, ["E31", "E32", "E23"]);
    }

    #[test]
    fn lifted_connection_square() {
        let cl = connes_lott_calculus().unwrap();
        let model = ProjectiveModel::new(&cl).unwrap();
        for mu in [Scalar::zero(), Scalar::ratio(1, 2)] {
            let conn = theta_connection(cl.calc.clone(), cl.sigma_family(&mu).unwrap()).unwrap();
            let lifted = model.lift_connection(&conn).unwrap();
            assert!(lifted.square_commutes());
            assert!(lifted.square_on_basis >= RANK);
            assert_eq!(lifted.connection.t1().dim(), 12);
        }
    }
}
