//! The Connes-Lott calculus on `M_3^+ = M_2 × M_1`: 1-forms are the
//! off-diagonal block `M_3^-`, 2-forms are `M_1` and `d = -[θ, ·]` in the
//! graded sense.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{block_algebra, FiniteAlgebra};
use crate::bimodule::{Bimodule, BimoduleMap};
use crate::calculus::{DifferentialCalculus, TOP_DEGREE};
use crate::error::{Error, Result};
use crate::linalg::{unit_vector, zero_vector, Matrix, SparseMatrix, Vector};
use crate::scalar::Scalar;

/// Matrix positions of the `Ω¹` basis.
pub const ONE_FORM_POSITIONS: [(usize, usize); 4] = [(0, 2), (1, 2), (2, 0), (2, 1)];

#[derive(Debug)]
pub struct ConnesLott {
    pub calc: Arc<DifferentialCalculus>,
    pub theta_matrix: Matrix,
    /// `η₁, η₂, η₁*, η₂*` in `Ω¹` coordinates.
    pub eta: [Vector; 4],
    /// Generator of `Ω²`.
    pub e: Vector,
}

fn one_form_coords(m: &Matrix) -> Vector {
    ONE_FORM_POSITIONS.iter().map(|&(i, j)| m.get(i, j).clone()).collect()
}

fn one_form_matrix(v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(3, 3);
    for (k, &(i, j)) in ONE_FORM_POSITIONS.iter().enumerate() {
        m.set(i, j, v[k].clone());
    }
    m
}

fn conj_transpose(m: &Matrix) -> Matrix {
    m.transpose().map_entries(Scalar::conj)
}

/// `θ = E13 - E31`: its upper part is `η₁` and `θ² = -(E11 + E33)`, which
/// gives `dθ + θ² = e`.
pub fn default_theta() -> Matrix {
    let mut m = Matrix::zeros(3, 3);
    m.set(0, 2, Scalar::one());
    m.set(2, 0, -Scalar::one());
    m
}

pub fn connes_lott_calculus() -> Result<ConnesLott> {
    connes_lott_with_theta(default_theta())
}

/// Builds the calculus for a given odd `θ` and solves for the `η` basis.
pub fn connes_lott_with_theta(theta: Matrix) -> Result<ConnesLott> {
    let alg = Arc::new(block_algebra(&[2, 1])?);
    if one_form_matrix(&one_form_coords(&theta)) != theta {
        return Err(Error::InvalidBimodule("θ must lie in the off-diagonal block".into()));
    }
    let mats: Vec<Matrix> = (0..alg.dim()).map(|a| alg.to_matrix(&alg.basis(a)).expect("embedded")).collect();
    let basis1: Vec<Matrix> = (0..4).map(|k| one_form_matrix(&unit_vector(4, k))).collect();

    let act = |f: &Matrix, left: bool| -> Matrix {
        let cols: Vec<Vector> = basis1.iter().map(|x| one_form_coords(&if left { f.mul(x) } else { x.mul(f) })).collect();
        Matrix::from_columns(4, &cols)
    };
    let omega1 = Bimodule::new(
        alg.clone(),
        mats.iter().map(|f| SparseMatrix::from_dense(&act(f, true))).collect(),
        mats.iter().map(|f| SparseMatrix::from_dense(&act(f, false))).collect(),
        ["E13", "E23", "E31", "E32"].iter().map(|s| s.to_string()).collect(),
    )?;
    // Ω² = M_1, acted on through the (3,3) entry
    let corner = |f: &Matrix| Matrix::from_rows(vec![vec![f.get(2, 2).clone()]]).expect("1x1");
    let omega2 = Bimodule::new(
        alg.clone(),
        mats.iter().map(|f| SparseMatrix::from_dense(&corner(f))).collect(),
        mats.iter().map(|f| SparseMatrix::from_dense(&corner(f))).collect(),
        vec!["e".to_string()],
    )?;
    let omega3 =
        Bimodule::new(alg.clone(), vec![SparseMatrix::zeros(0, 0); alg.dim()], vec![SparseMatrix::zeros(0, 0); alg.dim()], Vec::new())?;

    let mut products = HashMap::new();
    let mut t11 = Vec::with_capacity(16);
    for x in &basis1 {
        for y in &basis1 {
            let c = x.mul(y).get(2, 2).clone();
            t11.push(if c.is_zero() { Vec::new() } else { vec![(0, c)] });
        }
    }
    products.insert((1, 1), t11);
    products.insert((1, 2), vec![Vec::new(); 4]);
    products.insert((2, 1), vec![Vec::new(); 4]);

    let d0_cols: Vec<Vector> = mats
        .iter()
        .map(|f| {
            let comm = theta.mul(f).sub(&f.mul(&theta));
            one_form_coords(&comm.scale(&-Scalar::one()))
        })
        .collect();
    let d1_cols: Vec<Vector> = basis1
        .iter()
        .map(|x| {
            let anti = theta.mul(x).add(&x.mul(&theta));
            vec![-anti.get(2, 2).clone()]
        })
        .collect();
    let d = vec![Matrix::from_columns(4, &d0_cols), Matrix::from_columns(1, &d1_cols), Matrix::zeros(0, 1)];

    let forms = vec![Arc::new(Bimodule::regular(alg.clone())), Arc::new(omega1), Arc::new(omega2), Arc::new(omega3)];
    debug_assert_eq!(forms.len(), TOP_DEGREE + 1);
    let theta_v = one_form_coords(&theta);
    let calc = Arc::new(DifferentialCalculus::new("Connes-Lott on M_2 × M_1", alg.clone(), forms, d, products, Some(theta_v))?);
    let eta = solve_eta(&theta)?;
    let eta = [
        one_form_coords(&eta[0]),
        one_form_coords(&eta[1]),
        one_form_coords(&conj_transpose(&eta[0])),
        one_form_coords(&conj_transpose(&eta[1])),
    ];
    Ok(ConnesLott { calc, theta_matrix: theta, eta, e: vec![Scalar::one()] })
}

/// Upper-triangular `η₁, η₂` with `θ = η₁ - η₁*`, `η_i η_j* = 0` and
/// `η_i* η_j = δ_ij e`. `η₂` is fixed up to a phase; the phase is chosen
/// so its nonzero entry with the largest row index is a positive rational.
fn solve_eta(theta: &Matrix) -> Result<[Matrix; 2]> {
    let mut eta1 = Matrix::zeros(3, 3);
    eta1.set(0, 2, theta.get(0, 2).clone());
    eta1.set(1, 2, theta.get(1, 2).clone());
    if eta1.sub(&conj_transpose(&eta1)) != *theta {
        return Err(Error::IdentityFailed("θ is not of the form η₁ - η₁*".into()));
    }
    let corner = |m: &Matrix| m.get(2, 2).clone();
    if corner(&conj_transpose(&eta1).mul(&eta1)) != Scalar::one() {
        return Err(Error::IdentityFailed("η₁* η₁ ≠ e".into()));
    }
    // η₂ = a E13 + b E23 with η₁* η₂ = 0: one linear condition on (a, b)
    let cond = Matrix::from_rows(vec![vec![eta1.get(0, 2).conj(), eta1.get(1, 2).conj()]])?;
    let kernel = cond.kernel();
    if kernel.dim() != 1 {
        return Err(Error::IdentityFailed(format!("η₂ not unique: solution space has dimension {}", kernel.dim())));
    }
    let v = kernel.basis_vectors().remove(0);
    let norm = v[0].norm_sqr() + v[1].norm_sqr();
    let root = rational_sqrt(&norm).ok_or_else(|| Error::Unsupported("normalising η₂ needs an irrational square root".into()))?;
    let scale = Scalar::new(root, num_traits::Zero::zero()).inv();
    let lead = if v[1].is_zero() { &v[0] } else { &v[1] };
    let phase = if lead.is_real() && lead.re() < &num_traits::Zero::zero() { -Scalar::one() } else { Scalar::one() };
    if !lead.is_real() {
        return Err(Error::Unsupported("η₂ phase normalisation expects a real direction".into()));
    }
    let mut eta2 = Matrix::zeros(3, 3);
    eta2.set(0, 2, &(&v[0] * &scale) * &phase);
    eta2.set(1, 2, &(&v[1] * &scale) * &phase);
    let e1s = conj_transpose(&eta1);
    let e2s = conj_transpose(&eta2);
    let checks = [
        (corner(&eta1.mul(&e1s)), Scalar::zero()),
        (corner(&eta1.mul(&e2s)), Scalar::zero()),
        (corner(&eta2.mul(&e1s)), Scalar::zero()),
        (corner(&eta2.mul(&e2s)), Scalar::zero()),
        (corner(&e1s.mul(&eta1)), Scalar::one()),
        (corner(&e1s.mul(&eta2)), Scalar::zero()),
        (corner(&e2s.mul(&eta1)), Scalar::zero()),
        (corner(&e2s.mul(&eta2)), Scalar::one()),
    ];
    if checks.iter().any(|(a, b)| a != b) {
        return Err(Error::IdentityFailed("η relations do not hold".into()));
    }
    Ok([eta1, eta2])
}

fn rational_sqrt(q: &num_rational::BigRational) -> Option<num_rational::BigRational> {
    use num_traits::Signed;
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| num_rational::BigRational::new(n, d))
}

impl ConnesLott {
    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        self.calc.algebra()
    }

    /// Matrix of a 1-form.
    pub fn one_form_matrix(&self, v: &[Scalar]) -> Matrix {
        one_form_matrix(v)
    }

    pub fn one_form_coords(&self, m: &Matrix) -> Vector {
        one_form_coords(m)
    }

    /// The multiplication isomorphism `Ω¹ ⊗_A Ω¹ → M_3^+`, `ξ ⊗ η ↦ ξη`,
    /// in quotient coordinates.
    pub fn multiplication_iso(&self) -> Result<Matrix> {
        let t = self.calc.t11();
        let alg = self.algebra();
        let cols: Vec<Vector> = t
            .quotient
            .kept_indices()
            .iter()
            .map(|&k| {
                let m = one_form_matrix(&unit_vector(4, k / 4)).mul(&one_form_matrix(&unit_vector(4, k % 4)));
                alg.from_matrix(&m).expect("products of odd elements are even")
            })
            .collect();
        let iso = Matrix::from_columns(alg.dim(), &cols);
        // well defined on the quotient: the ambient multiplication kills relations
        for rel in t.relations.basis_vectors() {
            let mut acc = zero_vector(alg.dim());
            for (k, c) in rel.iter().enumerate() {
                if !c.is_zero() {
                    let m = one_form_matrix(&unit_vector(4, k / 4)).mul(&one_form_matrix(&unit_vector(4, k % 4)));
                    crate::linalg::axpy(&mut acc, c, &alg.from_matrix(&m).expect("even"));
                }
            }
            if !crate::linalg::is_zero_vector(&acc) {
                return Err(Error::IdentityFailed("multiplication does not factor through Ω¹ ⊗_A Ω¹".into()));
            }
        }
        if iso.inverse().is_none() {
            return Err(Error::IdentityFailed("Ω¹ ⊗_A Ω¹ → M_3^+ is not invertible".into()));
        }
        Ok(iso)
    }

    /// `σ` acting as `mu` on the `M_2` block and `corner` on `M_1`, under
    /// the identification `Ω¹ ⊗_A Ω¹ ≅ M_3^+`.
    pub fn sigma_general(&self, mu: &Scalar, corner: &Scalar) -> Result<BimoduleMap> {
        let iso = self.multiplication_iso()?;
        let inv = iso.inverse().expect("checked invertible");
        let alg = self.algebra();
        let mut diag = Matrix::zeros(alg.dim(), alg.dim());
        for a in 0..alg.dim() {
            let m = alg.to_matrix(&alg.basis(a)).expect("embedded");
            let in_m1 = m.get(2, 2).is_one();
            diag.set(a, a, if in_m1 { corner.clone() } else { mu.clone() });
        }
        let t = self.calc.t11();
        let sigma = BimoduleMap::new(t.bimodule.clone(), t.bimodule.clone(), inv.mul(&diag).mul(&iso))?;
        crate::bimodule::verify_bimodule_map(&sigma)
            .map_err(|c| Error::NotBimoduleMap(format!("σ fails on algebra basis {}", alg.label(c.algebra_basis))))?;
        Ok(sigma)
    }

    /// The family `diag(μ, μ, -1)`; the `-1` is forced by `π ∘ (σ + 1) = 0`.
    pub fn sigma_family(&self, mu: &Scalar) -> Result<BimoduleMap> {
        self.sigma_general(mu, &-Scalar::one())
    }

    /// Class of `e ⊗ ξ` in `Ω² ⊗_A Ω¹`.
    pub fn e_tensor(&self, xi: &[Scalar]) -> Vector {
        self.calc.t21().class_of(&self.e, xi)
    }
}

/// `σ_μ` for the default Connes-Lott calculus.
pub fn sigma_family_cl(cl: &ConnesLott, mu: &Scalar) -> Result<BimoduleMap> {
    cl.sigma_family(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_zero_vector;

    #[test]
    fn dimensions_and_eta_relations() {
        let cl = connes_lott_calculus().unwrap();
        let c = &cl.calc;
        assert_eq!((c.dim(0), c.dim(1), c.dim(2), c.dim(3)), (5, 4, 1, 0));
        assert_eq!(c.t11().ambient_dim(), 16);
        assert_eq!(c.t11().dim(), 5);
        let [e1, e2, e1s, e2s] = &cl.eta;
        assert_eq!(c.wedge(1, e1s, 1, e2), vec![Scalar::zero()]);
        assert_eq!(c.wedge(1, e1s, 1, e1), cl.e);
        assert_eq!(c.wedge(1, e2s, 1, e2), cl.e);
        assert_eq!(c.wedge(1, e1, 1, e2s), vec![Scalar::zero()]);
        let mut theta = e1.clone();
        crate::linalg::axpy(&mut theta, &-Scalar::one(), e1s);
        assert_eq!(c.theta().unwrap(), &theta);
    }

    #[test]
    fn theta_curvature_is_e_and_central() {
        let cl = connes_lott_calculus().unwrap();
        let c = &cl.calc;
        let w = c.theta_curvature().unwrap();
        assert_eq!(w, cl.e);
        for f in 0..5 {
            let fv = c.algebra().basis(f);
            let comm = crate::linalg::sub_vectors(&c.omega(2).act_left(&fv, &w), &c.omega(2).act_right(&w, &fv));
            assert!(is_zero_vector(&comm));
        }
    }

    #[test]
    fn sigma_family_satisfies_the_product_condition() {
        let cl = connes_lott_calculus().unwrap();
        let c = &cl.calc;
        for mu in [Scalar::zero(), Scalar::one(), Scalar::ratio(3, 2)] {
            let s = cl.sigma_family(&mu).unwrap();
            let plus_one = s.matrix.add(&Matrix::identity(5));
            assert!(c.pi().mul(&plus_one).is_zero());
        }
        let s0 = cl.sigma_family(&Scalar::zero()).unwrap();
        assert_eq!(s0.matrix.rank(), 1);
    }

    #[test]
    fn exact_forms_generate() {
        let cl = connes_lott_calculus().unwrap();
        assert!(cl.calc.exact_generated().is_full());
    }
}
