//! Connections on bimodules: left connections `D: H → Ω¹ ⊗_A H`, bimodule
//! (linear) connections `(D, σ)` on `Ω¹`, and their torsion.

use std::sync::Arc;

use crate::bimodule::{tensor_over_a, verify_bimodule_map, Bimodule, BimoduleMap, TensorOverA};
use crate::calculus::{DerivationCalculus, DifferentialCalculus, TOP_DEGREE};
use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vector, sub_vectors, unit_vector, zero_vector, Matrix, Vector};
use crate::scalar::Scalar;

/// Algebra and module basis indices on which an identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub algebra_basis: usize,
    pub module_basis: usize,
}

/// `D: H → Ω¹ ⊗_A H` satisfying `D(fψ) = df ⊗ ψ + f Dψ`.
#[derive(Clone, Debug)]
pub struct LeftConnection {
    calc: Arc<DifferentialCalculus>,
    module: Arc<Bimodule>,
    t1: Arc<TensorOverA>,
    t2: Arc<TensorOverA>,
    d_map: Matrix,
}

fn left_leibniz_failure(calc: &DifferentialCalculus, module: &Bimodule, t1: &TensorOverA, d_map: &Matrix) -> Option<Witness> {
    let alg = calc.algebra();
    for f in 0..alg.dim() {
        let fv = alg.basis(f);
        let df = calc.d(0, &fv);
        for k in 0..module.dim() {
            let lhs = d_map.apply(&module.left_basis_matrix(f).column(k));
            let mut rhs = t1.class_of(&df, &unit_vector(module.dim(), k));
            axpy(&mut rhs, &Scalar::one(), &t1.bimodule.act_left(&fv, &d_map.column(k)));
            if lhs != rhs {
                return Some(Witness { algebra_basis: f, module_basis: k });
            }
        }
    }
    None
}

impl LeftConnection {
    /// `t1 = Ω¹ ⊗_A H` and `t2 = Ω² ⊗_A H` must be built from the
    /// calculus forms and `module`.
    pub fn new(
        calc: Arc<DifferentialCalculus>,
        module: Arc<Bimodule>,
        t1: Arc<TensorOverA>,
        t2: Arc<TensorOverA>,
        d_map: Matrix,
    ) -> Result<Self> {
        let factors_ok = Arc::ptr_eq(&t1.left_factor, calc.omega(1))
            && Arc::ptr_eq(&t2.left_factor, calc.omega(2))
            && Arc::ptr_eq(&t1.right_factor, &module)
            && Arc::ptr_eq(&t2.right_factor, &module);
        if !factors_ok {
            return Err(Error::DimensionMismatch("tensor products are not Ω¹ ⊗ H and Ω² ⊗ H".into()));
        }
        if d_map.rows() != t1.dim() || d_map.cols() != module.dim() {
            return Err(Error::DimensionMismatch("D has the wrong shape".into()));
        }
        if let Some(w) = left_leibniz_failure(&calc, &module, &t1, &d_map) {
            return Err(Error::Leibniz(format!(
                "left rule fails for f = {} on {}",
                calc.algebra().label(w.algebra_basis),
                module.label(w.module_basis)
            )));
        }
        Ok(LeftConnection { calc, module, t1, t2, d_map })
    }

    /// Builds `Ω¹ ⊗_A H` and `Ω² ⊗_A H` for the module.
    pub fn on_module(calc: Arc<DifferentialCalculus>, module: Arc<Bimodule>, d_map: Matrix) -> Result<Self> {
        let t1 = Arc::new(tensor_over_a(calc.omega(1).clone(), module.clone())?);
        let t2 = Arc::new(tensor_over_a(calc.omega(2).clone(), module.clone())?);
        Self::new(calc, module, t1, t2, d_map)
    }

    pub fn calculus(&self) -> &Arc<DifferentialCalculus> {
        &self.calc
    }

    pub fn module(&self) -> &Arc<Bimodule> {
        &self.module
    }

    /// `Ω¹ ⊗_A H`
    pub fn t1(&self) -> &Arc<TensorOverA> {
        &self.t1
    }

    /// `Ω² ⊗_A H`
    pub fn t2(&self) -> &Arc<TensorOverA> {
        &self.t2
    }

    pub fn d_matrix(&self) -> &Matrix {
        &self.d_map
    }

    pub fn apply(&self, h: &[Scalar]) -> Vector {
        self.d_map.apply(h)
    }

    /// `∇(α ⊗ ψ) = dα ⊗ ψ - α Dψ` on the ℂ-basis `e_k ⊗ h_l` of
    /// `Ω¹ ⊗_ℂ H`, checked to vanish on the balancing relations.
    pub fn nabla_on_ambient(&self) -> Result<Matrix> {
        let calc = &self.calc;
        let (d1, dh) = (calc.dim(1), self.module.dim());
        let lifts: Vec<Vec<(usize, usize, Scalar)>> = (0..dh).map(|l| self.t1.terms(&self.t1.lift(&self.d_map.column(l)))).collect();
        let mut cols = Vec::with_capacity(d1 * dh);
        for k in 0..d1 {
            let ek = unit_vector(d1, k);
            let dek = calc.d(1, &ek);
            for (l, lift) in lifts.iter().enumerate() {
                let mut v = self.t2.class_of(&dek, &unit_vector(dh, l));
                for (i, j, c) in lift {
                    let prod = calc.wedge_basis(1, k, 1, *i);
                    axpy(&mut v, &-c.clone(), &self.t2.class_of(&prod, &unit_vector(dh, *j)));
                }
                cols.push(v);
            }
        }
        let n = Matrix::from_columns(self.t2.dim(), &cols);
        if self.t1.relations.basis_vectors().iter().any(|r| !is_zero_vector(&n.apply(r))) {
            return Err(Error::IdentityFailed("∇ does not descend to Ω¹ ⊗_A H".into()));
        }
        Ok(n)
    }

    /// `∇²: H → Ω² ⊗_A H`
    pub fn nabla_square(&self) -> Result<Matrix> {
        let n = self.nabla_on_ambient()?;
        Ok(n.mul(self.t1.quotient.section_matrix()).mul(&self.d_map))
    }
}

/// A linear connection `(D, σ)` on `Ω¹`.
#[derive(Clone, Debug)]
pub struct Connection {
    left: LeftConnection,
    sigma: BimoduleMap,
    right_leibniz: Option<Witness>,
}

fn right_leibniz_failure(calc: &DifferentialCalculus, d_map: &Matrix, sigma: &Matrix) -> Option<Witness> {
    let alg = calc.algebra();
    let t = calc.t11();
    let omega1 = calc.omega(1);
    for f in 0..alg.dim() {
        let fv = alg.basis(f);
        let df = calc.d(0, &fv);
        for k in 0..omega1.dim() {
            let lhs = d_map.apply(&omega1.right_basis_matrix(f).column(k));
            let mut rhs = sigma.apply(&t.class_of(&unit_vector(omega1.dim(), k), &df));
            axpy(&mut rhs, &Scalar::one(), &t.bimodule.act_right(&d_map.column(k), &fv));
            if lhs != rhs {
                return Some(Witness { algebra_basis: f, module_basis: k });
            }
        }
    }
    None
}

impl Connection {
    /// Accepts `D` when the left Leibniz rule holds and `σ` is a bimodule
    /// map; the right Leibniz rule is recorded, not required.
    pub fn new(calc: Arc<DifferentialCalculus>, d_map: Matrix, sigma: BimoduleMap) -> Result<Self> {
        let t11 = calc.t11();
        if !Arc::ptr_eq(&sigma.source, &t11.bimodule) || !Arc::ptr_eq(&sigma.target, &t11.bimodule) {
            return Err(Error::DimensionMismatch("σ must act on Ω¹ ⊗_A Ω¹".into()));
        }
        verify_bimodule_map(&sigma)
            .map_err(|c| Error::NotBimoduleMap(format!("σ fails on {:?} action of {}", c.side, calc.algebra().label(c.algebra_basis))))?;
        let right_leibniz = right_leibniz_failure(&calc, &d_map, &sigma.matrix);
        let omega1 = calc.omega(1).clone();
        let left = LeftConnection::new(calc.clone(), omega1, t11, calc.t21(), d_map)?;
        Ok(Connection { left, sigma, right_leibniz })
    }

    pub fn left(&self) -> &LeftConnection {
        &self.left
    }

    pub fn calculus(&self) -> &Arc<DifferentialCalculus> {
        &self.left.calc
    }

    pub fn sigma(&self) -> &BimoduleMap {
        &self.sigma
    }

    pub fn d_matrix(&self) -> &Matrix {
        &self.left.d_map
    }

    pub fn apply(&self, xi: &[Scalar]) -> Vector {
        self.left.apply(xi)
    }

    /// First basis pair violating `D(ξf) = σ(ξ ⊗ df) + (Dξ)f`.
    pub fn right_leibniz_failure(&self) -> Option<&Witness> {
        self.right_leibniz.as_ref()
    }

    /// `π ∘ (σ + 1) = 0`
    pub fn sigma_condition_holds(&self) -> bool {
        sigma_condition(self.calculus(), &self.sigma.matrix)
    }
}

/// `π ∘ (σ + 1) = 0` for a candidate `σ` on `Ω¹ ⊗_A Ω¹`.
pub fn sigma_condition(calc: &DifferentialCalculus, sigma: &Matrix) -> bool {
    let shifted = sigma.add(&Matrix::identity(sigma.rows()));
    calc.pi().mul(&shifted).is_zero()
}

/// `Dξ = -θ ⊗ ξ + σ(ξ ⊗ θ)`
pub fn theta_connection(calc: Arc<DifferentialCalculus>, sigma: BimoduleMap) -> Result<Connection> {
    let (d_l, d_r) = standard_parts(&calc)?;
    let d_map = d_l.add(&sigma.matrix.mul(&d_r));
    Connection::new(calc, d_map, sigma)
}

/// `D_L ξ = -θ ⊗ ξ` and `D_R ξ = ξ ⊗ θ`, both valued in `Ω¹ ⊗_A Ω¹`.
pub fn standard_parts(calc: &DifferentialCalculus) -> Result<(Matrix, Matrix)> {
    let theta = calc.theta().ok_or_else(|| Error::Unsupported("the calculus has no θ".into()))?;
    let t = calc.t11();
    let d1 = calc.dim(1);
    let mut left = Vec::with_capacity(d1);
    let mut right = Vec::with_capacity(d1);
    for k in 0..d1 {
        let ek = unit_vector(d1, k);
        let mut l = t.class_of(theta, &ek);
        l.iter_mut().for_each(|x| *x = -x.clone());
        left.push(l);
        right.push(t.class_of(&ek, theta));
    }
    Ok((Matrix::from_columns(t.dim(), &left), Matrix::from_columns(t.dim(), &right)))
}

/// `D = D_L + σ ∘ D_R` after checking that `D_L` is left Leibniz and right
/// linear and `D_R` is right Leibniz and left linear.
pub fn compose_lr(calc: Arc<DifferentialCalculus>, d_l: &Matrix, d_r: &Matrix, sigma: BimoduleMap) -> Result<Connection> {
    let t = calc.t11();
    let omega1 = calc.omega(1);
    let alg = calc.algebra();
    let name = |w: &Witness| format!("f = {}, ξ = {}", alg.label(w.algebra_basis), omega1.label(w.module_basis));
    if let Some(w) = left_leibniz_failure(&calc, omega1, &t, d_l) {
        return Err(Error::Leibniz(format!("D_L fails the left rule at {}", name(&w))));
    }
    let identity = Matrix::identity(t.dim());
    if let Some(w) = right_leibniz_failure(&calc, d_r, &identity) {
        return Err(Error::Leibniz(format!("D_R fails the right rule at {}", name(&w))));
    }
    if let Some(w) = linearity_failure(omega1, &t.bimodule, d_l, Side::Right) {
        return Err(Error::Leibniz(format!("D_L is not right linear at {}", name(&w))));
    }
    if let Some(w) = linearity_failure(omega1, &t.bimodule, d_r, Side::Left) {
        return Err(Error::Leibniz(format!("D_R is not left linear at {}", name(&w))));
    }
    let d_map = d_l.add(&sigma.matrix.mul(d_r));
    Connection::new(calc, d_map, sigma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// First basis pair where `map(f·x) ≠ f·map(x)` (or the right analogue).
pub fn linearity_failure(source: &Bimodule, target: &Bimodule, map: &Matrix, side: Side) -> Option<Witness> {
    let alg = source.algebra();
    for f in 0..alg.dim() {
        let (s, t) = match side {
            Side::Left => (source.left_basis_matrix(f), target.left_basis_matrix(f)),
            Side::Right => (source.right_basis_matrix(f), target.right_basis_matrix(f)),
        };
        for k in 0..source.dim() {
            if map.apply(&s.column(k)) != t.apply(&map.column(k)) {
                return Some(Witness { algebra_basis: f, module_basis: k });
            }
        }
    }
    None
}

/// `ω^r_{st}` as algebra elements, indexed `[r][s][t]`.
pub type Coefficients = Vec<Vec<Vec<Vector>>>;

/// `ω^r_{st} = Γ^r_{st} · 1`
pub fn scalar_coefficients(dc: &DerivationCalculus, gamma: &[Vec<Vec<Scalar>>]) -> Coefficients {
    let unit = dc.calc.algebra().unit();
    gamma.iter().map(|gs| gs.iter().map(|gt| gt.iter().map(|g| unit.iter().map(|u| u * g).collect()).collect()).collect()).collect()
}

/// `Dθ^r = -ω^r_{st} θ^s ⊗ θ^t`, extended by the left Leibniz rule.
pub fn connection_from_coefficients(dc: &DerivationCalculus, omega: &Coefficients, sigma: BimoduleMap) -> Result<Connection> {
    let calc = dc.calc.clone();
    let rank = dc.rank();
    let alg = calc.algebra();
    let shape_ok = omega.len() == rank
        && omega.iter().all(|w| w.len() == rank && w.iter().all(|v| v.len() == rank && v.iter().all(|x| x.len() == alg.dim())));
    if !shape_ok {
        return Err(Error::DimensionMismatch(format!("ω must be indexed [r][s][t] with {rank} values each")));
    }
    let t = calc.t11();
    let frame_d: Vec<Vector> = (0..rank)
        .map(|r| {
            let mut v = zero_vector(t.dim());
            for s in 0..rank {
                for tt in 0..rank {
                    let w = &omega[r][s][tt];
                    if !is_zero_vector(w) {
                        axpy(&mut v, &-Scalar::one(), &t.class_of(&dc.form(1, w, s), &dc.frame(tt)));
                    }
                }
            }
            v
        })
        .collect();
    // basis E_a θ^r sits at a * rank + r
    let mut cols = Vec::with_capacity(calc.dim(1));
    for a in 0..alg.dim() {
        let av = alg.basis(a);
        let da = calc.d(0, &av);
        for (r, dr) in frame_d.iter().enumerate() {
            let mut v = t.class_of(&da, &dc.frame(r));
            axpy(&mut v, &Scalar::one(), &t.bimodule.act_left(&av, dr));
            cols.push(v);
        }
    }
    Connection::new(calc, Matrix::from_columns(t.dim(), &cols), sigma)
}

/// `T = d - π ∘ D` with its linearity on each side.
#[derive(Clone, Debug)]
pub struct Torsion {
    pub map: Matrix,
    pub left_failure: Option<Witness>,
    pub right_failure: Option<Witness>,
}

impl Torsion {
    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    pub fn is_bilinear(&self) -> bool {
        self.left_failure.is_none() && self.right_failure.is_none()
    }
}

pub fn torsion(conn: &Connection) -> Torsion {
    let calc = conn.calculus();
    let map = calc.d_matrix(1).sub(&calc.pi().mul(conn.d_matrix()));
    let (o1, o2) = (calc.omega(1), calc.omega(2));
    Torsion { left_failure: linearity_failure(o1, o2, &map, Side::Left), right_failure: linearity_failure(o1, o2, &map, Side::Right), map }
}

/// `T_n = dπ - π ∘ D` on ℂ-basis tensors of `(Ω¹)^{⊗n}`, `n ∈ {1, 2}`.
/// For `n = 2` the column of `e_i ⊗ e_j` sits at `i * dim Ω¹ + j`.
pub fn higher_torsion(conn: &Connection, n: usize) -> Result<Matrix> {
    if n == 0 || n + 1 > TOP_DEGREE {
        return Err(Error::Unsupported(format!("T_{n} needs Ω^{} which is not carried", n + 1)));
    }
    if n == 1 {
        return Ok(torsion(conn).map);
    }
    let calc = conn.calculus();
    let d1 = calc.dim(1);
    let pi = calc.pi();
    let pi_d: Vec<Vector> = (0..d1).map(|k| pi.apply(&conn.d_matrix().column(k))).collect();
    let mut cols = Vec::with_capacity(d1 * d1);
    for i in 0..d1 {
        let ei = unit_vector(d1, i);
        for j in 0..d1 {
            let ej = unit_vector(d1, j);
            let mut v = calc.d(2, &calc.wedge_basis(1, i, 1, j));
            // D(ξ ⊗ ν) = Dξ ⊗ ν + (σ ⊗ 1)(ξ ⊗ Dν)
            axpy(&mut v, &-Scalar::one(), &calc.wedge(2, &pi_d[i], 1, &ej));
            for (a, b, c) in lift_terms(conn, j) {
                let sig = pi.apply(&conn.sigma().apply(&calc.t11().class_of(&ei, &unit_vector(d1, a))));
                axpy(&mut v, &-c, &calc.wedge(2, &sig, 1, &unit_vector(d1, b)));
            }
            cols.push(v);
        }
    }
    Ok(Matrix::from_columns(calc.dim(3), &cols))
}

fn lift_terms(conn: &Connection, k: usize) -> Vec<(usize, usize, Scalar)> {
    let t = conn.calculus().t11();
    t.terms(&t.lift(&conn.d_matrix().column(k)))
}

/// Comparison of `T₂(ξ ⊗ ν)` with `T₁(ξ)ν - ξT₁(ν) ± π((σ+1) ⊗ 1)(ξ ⊗ Dν)`
/// over all basis pairs.
#[derive(Clone, Debug)]
pub struct TorsionRecursion {
    pub t1_matches_torsion: bool,
    /// `T₂` vanishes on the balancing relations of `Ω¹ ⊗_A Ω¹`.
    pub t2_descends: bool,
    /// With `+` in front of the `(σ+1)` term.
    pub plus_form_holds: bool,
    /// With `-` in front of the `(σ+1)` term.
    pub minus_form_holds: bool,
    pub sigma_term_vanishes: bool,
    pub sigma_condition: bool,
}

pub fn torsion_recursion(conn: &Connection) -> Result<TorsionRecursion> {
    let calc = conn.calculus();
    let d1 = calc.dim(1);
    let t1 = higher_torsion(conn, 1)?;
    let t2 = higher_torsion(conn, 2)?;
    let pi = calc.pi();
    let mut plus = true;
    let mut minus = true;
    let mut term_zero = true;
    for i in 0..d1 {
        let ei = unit_vector(d1, i);
        for j in 0..d1 {
            let ej = unit_vector(d1, j);
            let mut base = calc.wedge(2, &t1.column(i), 1, &ej);
            axpy(&mut base, &-Scalar::one(), &calc.wedge(1, &ei, 2, &t1.column(j)));
            let mut term = zero_vector(calc.dim(3));
            for (a, b, c) in lift_terms(conn, j) {
                let pair = calc.t11().class_of(&ei, &unit_vector(d1, a));
                let mut shifted = conn.sigma().apply(&pair);
                axpy(&mut shifted, &Scalar::one(), &pair);
                axpy(&mut term, &c, &calc.wedge(2, &pi.apply(&shifted), 1, &unit_vector(d1, b)));
            }
            let col = t2.column(i * d1 + j);
            let mut with_plus = base.clone();
            axpy(&mut with_plus, &Scalar::one(), &term);
            let with_minus = sub_vectors(&base, &term);
            plus &= col == with_plus;
            minus &= col == with_minus;
            term_zero &= is_zero_vector(&term);
        }
    }
    let t2_descends = calc.t11().relations.basis_vectors().iter().all(|r| is_zero_vector(&t2.apply(r)));
    Ok(TorsionRecursion {
        t1_matches_torsion: t1 == torsion(conn).map,
        t2_descends,
        plus_form_holds: plus,
        minus_form_holds: minus,
        sigma_term_vanishes: term_zero,
        sigma_condition: conn.sigma_condition_holds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::bimodule_homs;
    use crate::calculus::derivation_calculus;
    use crate::connes_lott::connes_lott_calculus;

    #[test]
    fn theta_connection_on_m2_is_not_torsion_free() {
        let dc = derivation_calculus(2).unwrap();
        let conn = theta_connection(dc.calc.clone(), dc.flip_sigma().unwrap()).unwrap();
        assert!(conn.right_leibniz_failure().is_none());
        assert!(conn.sigma_condition_holds());
        let t = torsion(&conn);
        assert!(!t.is_zero());
        assert!(t.is_bilinear());
        // ω ≡ 0 reproduces the θ-connection
        let zero = vec![vec![vec![Scalar::zero(); 3]; 3]; 3];
        let c0 = connection_from_coefficients(&dc, &scalar_coefficients(&dc, &zero), dc.flip_sigma().unwrap()).unwrap();
        assert_eq!(c0.d_matrix(), conn.d_matrix());
    }

    #[test]
    fn half_structure_constants_are_torsion_free() {
        let dc = derivation_calculus(2).unwrap();
        let gamma: Vec<Vec<Vec<Scalar>>> =
            (0..3).map(|r| (0..3).map(|s| (0..3).map(|t| dc.sl.c(r, s, t) * &Scalar::ratio(1, 2)).collect()).collect()).collect();
        let conn = connection_from_coefficients(&dc, &scalar_coefficients(&dc, &gamma), dc.flip_sigma().unwrap()).unwrap();
        assert!(torsion(&conn).is_zero());
        let rec = torsion_recursion(&conn).unwrap();
        assert!(rec.t1_matches_torsion && rec.minus_form_holds && rec.sigma_term_vanishes);
    }

    #[test]
    fn traceless_coefficients_break_right_leibniz() {
        let dc = derivation_calculus(2).unwrap();
        let alg = dc.calc.algebra();
        let mut omega = scalar_coefficients(&dc, &vec![vec![vec![Scalar::zero(); 3]; 3]; 3]);
        omega[0][1][2] = alg.basis(alg.index_of("E12").unwrap());
        let conn = connection_from_coefficients(&dc, &omega, dc.flip_sigma().unwrap()).unwrap();
        assert!(conn.right_leibniz_failure().is_some());
    }

    #[test]
    fn compose_reproduces_theta_connection() {
        let cl = connes_lott_calculus().unwrap();
        let sigma = cl.sigma_family(&Scalar::ratio(3, 2)).unwrap();
        let (d_l, d_r) = standard_parts(&cl.calc).unwrap();
        let composed = compose_lr(cl.calc.clone(), &d_l, &d_r, sigma.clone()).unwrap();
        let direct = theta_connection(cl.calc.clone(), sigma).unwrap();
        assert_eq!(composed.d_matrix(), direct.d_matrix());
        assert!(direct.right_leibniz_failure().is_none());
    }

    #[test]
    fn connes_lott_connection_is_unique() {
        let cl = connes_lott_calculus().unwrap();
        let homs = bimodule_homs(cl.calc.omega(1), &cl.calc.t11().bimodule).unwrap();
        assert!(homs.is_empty());
    }

    #[test]
    fn identity_sigma_leaves_the_recursion_term() {
        let dc = derivation_calculus(2).unwrap();
        let t = dc.calc.t11();
        let conn = theta_connection(dc.calc.clone(), BimoduleMap::identity(t.bimodule.clone())).unwrap();
        let rec = torsion_recursion(&conn).unwrap();
        assert!(!rec.sigma_condition);
        assert!(!rec.sigma_term_vanishes);
        assert!(rec.minus_form_holds);
    }
}
