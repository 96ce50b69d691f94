//! `∇²`, the junk space, the bilinear curvature `Curv = -p ∘ ∇²` and its
//! variants, plus the curvature coefficients of matrix geometries.

use crate::bimodule::sub_bimodule_generated;
use crate::calculus::{DerivationCalculus, DifferentialCalculus};
use crate::connection::{linearity_failure, torsion, Connection, LeftConnection, Side, Witness};
use crate::error::{Error, Result};
use crate::lie::SlBasis;
use crate::linalg::{axpy, unit_vector, EchelonBuilder, Matrix, QuotientSpace, Subspace, Vector};
use crate::scalar::Scalar;

/// Ambient map `e_k ⊗ e_l ↦ Σ c · class(π(x_k ⊗ e_i), e_j)` over the
/// canonical lift `Σ c e_i ⊗ e_j` of `D e_l`, where `x_k` is produced by
/// `first` from `e_k ⊗ e_i` in `Ω¹ ⊗_A Ω¹`.
fn ambient_through_d(conn: &Connection, first: impl Fn(&Vector) -> Vector) -> Matrix {
    let calc = conn.calculus();
    let (t11, t21) = (calc.t11(), calc.t21());
    let d1 = calc.dim(1);
    let pi = calc.pi();
    let lifts: Vec<Vec<(usize, usize, Scalar)>> = (0..d1).map(|l| t11.terms(&t11.lift(&conn.d_matrix().column(l)))).collect();
    let mut cols = Vec::with_capacity(d1 * d1);
    for k in 0..d1 {
        let ek = unit_vector(d1, k);
        for lift in &lifts {
            let mut v = crate::linalg::zero_vector(t21.dim());
            for (i, j, c) in lift {
                let two = pi.apply(&first(&t11.class_of(&ek, &unit_vector(d1, *i))));
                axpy(&mut v, c, &t21.class_of(&two, &unit_vector(d1, *j)));
            }
            cols.push(v);
        }
    }
    Matrix::from_columns(t21.dim(), &cols)
}

/// `x ↦ Σ class(map(e_k), e_l) x_{kl}` on `Ω¹ ⊗_ℂ Ω¹`.
fn ambient_first_factor(calc: &DifferentialCalculus, map: &Matrix) -> Matrix {
    let t21 = calc.t21();
    let d1 = calc.dim(1);
    let mut cols = Vec::with_capacity(d1 * d1);
    for k in 0..d1 {
        let two = map.column(k);
        for l in 0..d1 {
            cols.push(t21.class_of(&two, &unit_vector(d1, l)));
        }
    }
    Matrix::from_columns(t21.dim(), &cols)
}

/// `π₁₂ D²` with `D(ξ ⊗ η) = Dξ ⊗ η + (σ ⊗ 1)(ξ ⊗ Dη)`, evaluated on the
/// canonical lift of `Dξ`.
pub fn pi12_d2(conn: &Connection) -> Matrix {
    let calc = conn.calculus();
    let first = ambient_first_factor(calc, &calc.pi().mul(conn.d_matrix()));
    let second = ambient_through_d(conn, |x| conn.sigma().apply(x));
    first.add(&second).mul(calc.t11().quotient.section_matrix()).mul(conn.d_matrix())
}

/// Both routes to `∇²` on `Ω¹` and the identity tying them together,
/// `∇² = π₁₂D² + (T ⊗ 1)D - π₁₂((σ+1) ⊗ 1)(1 ⊗ D)D`.
#[derive(Clone, Debug)]
pub struct NablaPaths {
    pub nabla_square: Matrix,
    pub pi12_d2: Matrix,
    pub paths_equal: bool,
    pub identity_holds: bool,
    pub torsion_free: bool,
    pub sigma_condition: bool,
    /// `π₁₂D²(fξ) = f π₁₂D²ξ`
    pub pi12_d2_left_linear: bool,
}

pub fn nabla_paths(conn: &Connection) -> Result<NablaPaths> {
    let calc = conn.calculus();
    let nabla_square = conn.left().nabla_square()?;
    let p12 = pi12_d2(conn);
    let t = torsion(conn);
    let section_d = calc.t11().quotient.section_matrix().mul(conn.d_matrix());
    let t_term = ambient_first_factor(calc, &t.map).mul(&section_d);
    let s_term = ambient_through_d(conn, |x| {
        let mut y = conn.sigma().apply(x);
        axpy(&mut y, &Scalar::one(), x);
        y
    })
    .mul(&section_d);
    let predicted = p12.add(&t_term).sub(&s_term);
    let t21 = calc.t21();
    Ok(NablaPaths {
        paths_equal: nabla_square == p12,
        identity_holds: nabla_square == predicted,
        torsion_free: t.is_zero(),
        sigma_condition: conn.sigma_condition_holds(),
        pi12_d2_left_linear: linearity_failure(calc.omega(1), &t21.bimodule, &p12, Side::Left).is_none(),
        nabla_square,
        pi12_d2: p12,
    })
}

/// Span of `∇²(ξf) - ∇²(ξ)ρ(f)` over basis pairs; the defect is bilinear
/// in `(ξ, f)`, so basis pairs span the whole space.
pub fn junk_space(lc: &LeftConnection, nabla2: &Matrix, rho: Option<&Matrix>) -> Subspace {
    let module = lc.module();
    let t2 = lc.t2();
    let alg = module.algebra();
    let mut builder = EchelonBuilder::new(t2.dim());
    for f in 0..alg.dim() {
        let rf = rho.map_or_else(|| alg.basis(f), |r| r.column(f));
        for k in 0..module.dim() {
            let mut v = nabla2.apply(&module.right_basis_matrix(f).column(k));
            axpy(&mut v, &-Scalar::one(), &t2.bimodule.act_right(&nabla2.column(k), &rf));
            builder.insert(&v);
        }
    }
    builder.finish()
}

/// Curvature `-p ∘ ∇²` modulo a (possibly `ρ`-twisted) junk space.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub nabla_square: Matrix,
    pub junk: Subspace,
    /// The junk space is a sub-bimodule.
    pub junk_closed: bool,
    pub quotient: QuotientSpace,
    /// `Curv` in quotient coordinates, one column per module basis vector.
    pub curv: Matrix,
    pub left_failure: Option<Witness>,
    /// Failure of `Curv(ξf) = Curv(ξ)ρ(f)`.
    pub right_failure: Option<Witness>,
}

impl CurvatureReport {
    pub fn is_bilinear(&self) -> bool {
        self.left_failure.is_none() && self.right_failure.is_none()
    }

    pub fn junk_is_zero(&self) -> bool {
        self.junk.is_zero()
    }

    pub fn junk_is_full(&self) -> bool {
        self.junk.is_full()
    }
}

fn curvature_modulo(lc: &LeftConnection, nabla2: Matrix, rho: Option<&Matrix>) -> Result<CurvatureReport> {
    let junk = junk_space(lc, &nabla2, rho);
    let t2 = lc.t2();
    let junk_closed = sub_bimodule_generated(&t2.bimodule, &junk.basis_vectors()) == junk;
    let quotient = QuotientSpace::new(t2.dim(), junk.clone())?;
    let curv = quotient.project_matrix().mul(&nabla2).scale(&-Scalar::one());
    let module = lc.module();
    let alg = module.algebra();
    let mut left_failure = None;
    let mut right_failure = None;
    for f in 0..alg.dim() {
        let fv = alg.basis(f);
        let rf = rho.map_or_else(|| fv.clone(), |r| r.column(f));
        for k in 0..module.dim() {
            let l = nabla2.apply(&module.left_basis_matrix(f).column(k));
            let l2 = t2.bimodule.act_left(&fv, &nabla2.column(k));
            if left_failure.is_none() && quotient.project(&l) != quotient.project(&l2) {
                left_failure = Some(Witness { algebra_basis: f, module_basis: k });
            }
            let r = nabla2.apply(&module.right_basis_matrix(f).column(k));
            let r2 = t2.bimodule.act_right(&nabla2.column(k), &rf);
            if right_failure.is_none() && quotient.project(&r) != quotient.project(&r2) {
                right_failure = Some(Witness { algebra_basis: f, module_basis: k });
            }
        }
    }
    Ok(CurvatureReport { nabla_square: nabla2, junk, junk_closed, quotient, curv, left_failure, right_failure })
}

/// `Curv = -p ∘ ∇²`; fails hard if the result is not bilinear.
pub fn curvature(lc: &LeftConnection) -> Result<CurvatureReport> {
    let report = curvature_modulo(lc, lc.nabla_square()?, None)?;
    if !report.is_bilinear() || !report.junk_closed {
        return Err(Error::IdentityFailed("Curv is not bilinear".into()));
    }
    Ok(report)
}

/// `Curv_ρ` for an algebra automorphism `ρ`; the right linearity flag
/// refers to `Curv_ρ(ξf) = Curv_ρ(ξ)ρ(f)`.
pub fn curvature_twisted(lc: &LeftConnection, rho: &Matrix) -> Result<CurvatureReport> {
    lc.module().algebra().check_automorphism(rho)?;
    curvature_modulo(lc, lc.nabla_square()?, Some(rho))
}

/// Two curvatures on the same module agree once both junk spaces are
/// divided out; connections differing by a traceless `J` have different
/// junk, so their raw quotient maps are not directly comparable.
pub fn curvatures_agree(a: &CurvatureReport, b: &CurvatureReport) -> bool {
    if a.nabla_square.rows() != b.nabla_square.rows() || a.nabla_square.cols() != b.nabla_square.cols() {
        return false;
    }
    let junk = a.junk.sum(&b.junk);
    match QuotientSpace::new(junk.ambient_dim(), junk) {
        Ok(q) => q.project_matrix().mul(&a.nabla_square) == q.project_matrix().mul(&b.nabla_square),
        Err(_) => false,
    }
}

/// `Curv_L(ξ) = (dθ + θ²) ⊗ ξ` as a map `Ω¹ → Ω² ⊗_A Ω¹`.
pub fn curv_left(calc: &DifferentialCalculus) -> Result<Matrix> {
    let form = calc.theta_curvature().ok_or_else(|| Error::Unsupported("the calculus has no θ".into()))?;
    let t21 = calc.t21();
    let d1 = calc.dim(1);
    let cols: Vec<Vector> = (0..d1).map(|k| t21.class_of(&form, &unit_vector(d1, k))).collect();
    Ok(Matrix::from_columns(t21.dim(), &cols))
}

/// `R[r][s][t][u]`
pub type RiemannTensor = Vec<Vec<Vec<Vec<Scalar>>>>;

/// `R^r_{stu} = Γ^r_{tp}Γ^p_{us} - Γ^r_{up}Γ^p_{ts} - Γ^r_{ps}C^p_{tu}`
pub fn matrix_curvature_coeffs(gamma: &[Vec<Vec<Scalar>>], sl: &SlBasis) -> RiemannTensor {
    let m = sl.rank();
    let mut out = vec![vec![vec![vec![Scalar::zero(); m]; m]; m]; m];
    for (r, out_r) in out.iter_mut().enumerate() {
        for (s, out_rs) in out_r.iter_mut().enumerate() {
            for (t, out_rst) in out_rs.iter_mut().enumerate() {
                for (u, x) in out_rst.iter_mut().enumerate() {
                    for p in 0..m {
                        *x += &(&gamma[r][t][p] * &gamma[p][u][s]);
                        *x -= &(&gamma[r][u][p] * &gamma[p][t][s]);
                        *x -= &(&gamma[r][p][s] * sl.c(p, t, u));
                    }
                }
            }
        }
    }
    out
}

/// Reads `R` off `Curv(θ^r) = ½ R^r_{stu} θ^tθ^u ⊗ θ^s` when the junk
/// space is zero; `None` if some `Curv(θ^r)` is not of that form.
pub fn extract_riemann(dc: &DerivationCalculus, curv: &Matrix) -> Option<RiemannTensor> {
    let m = dc.rank();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|t| (t + 1..m).map(move |u| (t, u))).collect();
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for &(t, u) in &pairs {
        for s in 0..m {
            cols.push(dc.frame_triple(t, u, s));
            labels.push((t, u, s));
        }
    }
    let basis = Matrix::from_columns(dc.calc.t21().dim(), &cols);
    let mut out = vec![vec![vec![vec![Scalar::zero(); m]; m]; m]; m];
    for (r, out_r) in out.iter_mut().enumerate() {
        let value = curv.apply(&dc.frame(r));
        let x = basis.solve(&value)?;
        if basis.apply(&x) != value {
            return None;
        }
        for (&(t, u, s), c) in labels.iter().zip(&x) {
            out_r[s][t][u] = c.clone();
            out_r[s][u][t] = -c.clone();
        }
    }
    Some(out)
}

/// `Curv(θ^r)` for each frame element.
pub fn curvature_on_frame(dc: &DerivationCalculus, curv: &Matrix) -> Vec<Vector> {
    (0..dc.rank()).map(|r| curv.apply(&dc.frame(r))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::derivation_calculus;
    use crate::connection::{connection_from_coefficients, scalar_coefficients, theta_connection};
    use crate::connes_lott::connes_lott_calculus;
    use crate::linalg::{add_vectors, scale_vector};

    #[test]
    fn connes_lott_nabla_square_table() {
        let cl = connes_lott_calculus().unwrap();
        for mu in [Scalar::zero(), Scalar::one(), -Scalar::one(), Scalar::from_int(2), Scalar::ratio(1, 2)] {
            let conn = theta_connection(cl.calc.clone(), cl.sigma_family(&mu).unwrap()).unwrap();
            let n2 = conn.left().nabla_square().unwrap();
            let [e1, e2, e1s, e2s] = cl.eta.clone();
            assert!(is_zero(&n2.apply(&e1)), "μ = {mu}");
            assert!(is_zero(&n2.apply(&e2)), "μ = {mu}");
            let minus_mu1 = -(&mu + &Scalar::one());
            assert_eq!(n2.apply(&e1s), scale_vector(&minus_mu1, &cl.e_tensor(&e1s)), "μ = {mu}");
            assert_eq!(n2.apply(&e2s), scale_vector(&-Scalar::one(), &cl.e_tensor(&e2s)), "μ = {mu}");
            let report = curvature(conn.left()).unwrap();
            if mu.is_zero() {
                assert!(report.junk_is_zero());
                let curv_l = curv_left(&cl.calc).unwrap();
                assert_eq!(report.curv, report.quotient.project_matrix().mul(&curv_l));
            } else {
                assert!(report.junk_is_full());
                assert!(report.curv.is_zero());
            }
            let paths = nabla_paths(&conn).unwrap();
            assert!(paths.identity_holds);
        }
    }

    fn is_zero(v: &[Scalar]) -> bool {
        v.iter().all(Scalar::is_zero)
    }

    fn half_c(dc: &DerivationCalculus) -> Vec<Vec<Vec<Scalar>>> {
        let m = dc.rank();
        (0..m).map(|r| (0..m).map(|s| (0..m).map(|t| dc.sl.c(r, s, t) * &Scalar::ratio(1, 2)).collect()).collect()).collect()
    }

    #[test]
    fn riemann_extraction_matches_closed_form() {
        let dc = derivation_calculus(2).unwrap();
        let gamma = half_c(&dc);
        let conn = connection_from_coefficients(&dc, &scalar_coefficients(&dc, &gamma), dc.flip_sigma().unwrap()).unwrap();
        let report = curvature(conn.left()).unwrap();
        assert!(report.junk_is_zero());
        let extracted = extract_riemann(&dc, &report.curv).unwrap();
        assert_eq!(extracted, matrix_curvature_coeffs(&gamma, &dc.sl));
        let paths = nabla_paths(&conn).unwrap();
        assert!(paths.torsion_free && paths.sigma_condition && paths.paths_equal && paths.pi12_d2_left_linear);
    }

    #[test]
    fn flat_theta_connection_on_m2() {
        let dc = derivation_calculus(2).unwrap();
        let conn = theta_connection(dc.calc.clone(), dc.flip_sigma().unwrap()).unwrap();
        let report = curvature(conn.left()).unwrap();
        assert!(report.curv.is_zero());
        assert!(curv_left(&dc.calc).unwrap().is_zero());
        let paths = nabla_paths(&conn).unwrap();
        assert!(paths.identity_holds);
        assert!(!paths.torsion_free);
    }

    #[test]
    fn traceless_perturbation_leaves_curvature() {
        let dc = derivation_calculus(2).unwrap();
        let gamma = half_c(&dc);
        let sigma = dc.flip_sigma().unwrap();
        let base = connection_from_coefficients(&dc, &scalar_coefficients(&dc, &gamma), sigma.clone()).unwrap();
        let base_report = curvature(base.left()).unwrap();
        let alg = dc.calc.algebra();
        let mut omega = scalar_coefficients(&dc, &gamma);
        let e12 = alg.basis(alg.index_of("E12").unwrap());
        let h = alg.element(&[("E11", Scalar::one()), ("E22", -Scalar::one())]);
        omega[0][1][2] = add_vectors(&omega[0][1][2], &e12);
        omega[2][2][0] = add_vectors(&omega[2][2][0], &scale_vector(&Scalar::ratio(-3, 2), &h));
        let perturbed = connection_from_coefficients(&dc, &omega, sigma).unwrap();
        assert!(perturbed.right_leibniz_failure().is_some());
        let report = curvature(perturbed.left()).unwrap();
        assert!(!report.junk_is_zero());
        assert!(curvatures_agree(&base_report, &report));
        let zero = vec![vec![vec![Scalar::zero(); 3]; 3]; 3];
        let flat = connection_from_coefficients(&dc, &scalar_coefficients(&dc, &zero), dc.flip_sigma().unwrap()).unwrap();
        assert!(!curvatures_agree(&curvature(flat.left()).unwrap(), &report));
    }
}
