//! Linear connections on the Connes-Lott calculus over `M_3^+ = M_2 × M_1`.

use crate::bimodule::{bimodule_homs, verify_bimodule_map};
use crate::connection::{theta_connection, torsion, torsion_recursion, Connection};
use crate::connes_lott::{connes_lott_calculus, ConnesLott};
use crate::curvature::{curv_left, curvature, curvature_twisted, nabla_paths, CurvatureReport};
use crate::enveloping::{connes_lott_projector, curv_enveloping, left_block_matches, projector_connection, projector_parts};
use crate::error::Result;
use crate::linalg::{scale_vector, Matrix};
use crate::report::{ScenarioReport, Table};
use crate::scalar::Scalar;

use super::{calculus_property_checks, default_mu_samples, format_vector, witness_text};

pub const NAME: &str = "connes-lott";

#[derive(Clone, Debug)]
pub struct ConnesLottConfig {
    pub mus: Vec<Scalar>,
    /// Diagonal entries `k` of the automorphisms `Ad diag(1, k, 1)`.
    pub rho_family: Vec<Scalar>,
}

impl Default for ConnesLottConfig {
    fn default() -> Self {
        let rho_family = [(1, 1), (2, 1), (3, 1), (1, 2), (3, 2), (-1, 1)].iter().map(|&(n, d)| Scalar::ratio(n, d)).collect();
        ConnesLottConfig { mus: default_mu_samples(), rho_family }
    }
}

pub fn run_connes_lott(cfg: &ConnesLottConfig) -> Result<ScenarioReport> {
    let cl = connes_lott_calculus()?;
    let mut report = ScenarioReport::new(NAME);
    report.input("mu", cfg.mus.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", "));
    report.input("rho_family", cfg.rho_family.iter().map(|k| format!("Ad diag(1, {k}, 1)")).collect::<Vec<_>>().join(", "));

    calculus_property_checks(&mut report, "calculus", &cl.calc);
    static_checks(&mut report, &cl)?;
    projector_checks(&mut report, &cl, &cfg.mus)?;

    let mut table = Table::new("∇² on the η basis", &["μ", "∇²η₁", "∇²η₂", "∇²η₁*", "∇²η₂*", "dim J", "Curv"]);
    let mut rho_table = Table::new("twisted junk dimension dim J_ρ", &["μ", "k", "dim J_ρ", "Curv_ρ twisted-bilinear"]);
    for mu in &cfg.mus {
        per_mu(&mut report, &cl, mu, &cfg.rho_family, &mut table, &mut rho_table)?;
    }
    report.tables.push(table);
    report.tables.push(rho_table);
    Ok(report)
}

fn static_checks(report: &mut ScenarioReport, cl: &ConnesLott) -> Result<()> {
    let calc = &cl.calc;
    let t11 = calc.t11();
    report.check_with("dims.omega1", "dim Ω¹(M_3^+) = 4", calc.dim(1) == 4, Some(calc.dim(1).to_string()));
    report.check_with("dims.tensor_c", "dim Ω¹ ⊗_ℂ Ω¹ = 16", t11.ambient_dim() == 16, Some(t11.ambient_dim().to_string()));
    report.check_with("dims.tensor_a", "dim Ω¹ ⊗_A Ω¹ = 5", t11.dim() == 5, Some(t11.dim().to_string()));
    report.check_with(
        "calculus.inner",
        "d f = −[θ, f] for every basis f",
        calc.inner_failure().is_none(),
        calc.inner_failure().map(|f| calc.algebra().label(f).to_string()),
    );

    let [e1, e2, e1s, e2s] = &cl.eta;
    let zero = vec![Scalar::zero()];
    let rel_ok = [e1, e2].iter().all(|x| [e1s, e2s].iter().all(|y| calc.wedge(1, x, 1, y) == zero))
        && calc.wedge(1, e1s, 1, e1) == cl.e
        && calc.wedge(1, e2s, 1, e2) == cl.e
        && calc.wedge(1, e1s, 1, e2) == zero
        && calc.wedge(1, e2s, 1, e1) == zero;
    report.check("eta.relations", "η_i η_j* = 0 and η_i* η_j = δ_ij e", rel_ok);
    let theta_curv = calc.theta_curvature().unwrap_or_default();
    report.check("theta.curvature", "dθ + θ² = e", theta_curv == cl.e);
    let alg = calc.algebra();
    let omega2 = calc.omega(2);
    let central = (0..alg.dim()).all(|f| {
        let fv = alg.basis(f);
        omega2.act_left(&fv, &theta_curv) == omega2.act_right(&theta_curv, &fv)
    });
    report.check("theta.curvature_central", "[dθ + θ², f] = 0 for every basis f", central);
    let cl_left = curv_left(calc)?;
    let e_times = (0..4).all(|k| cl_left.column(k) == cl.e_tensor(&crate::linalg::unit_vector(4, k)));
    report.check("curv_left.e_tensor", "Curv_L(ξ) = e ⊗ ξ on every basis ξ", e_times);

    let homs = bimodule_homs(&t11.bimodule, &t11.bimodule)?;
    let pi = calc.pi();
    let images: Vec<Vec<Scalar>> = homs.iter().map(|h| pi.mul(h).entries().to_vec()).collect();
    let constraint = Matrix::from_columns(pi.rows() * pi.cols(), &images);
    let free = homs.len() - constraint.rank();
    report.check_with(
        "sigma.family",
        "bimodule maps on Ω¹ ⊗_A Ω¹ form a 2-dimensional space and π ∘ (σ + 1) = 0 leaves a 1-parameter family",
        homs.len() == 2 && free == 1,
        Some(format!("dim Hom = {}, free parameters = {free}", homs.len())),
    );
    let d_homs = bimodule_homs(calc.omega(1), &t11.bimodule)?;
    report.check_with(
        "connection.unique",
        "Hom(Ω¹, Ω¹ ⊗_A Ω¹) = 0, so D is determined by σ",
        d_homs.is_empty(),
        Some(format!("dim = {}", d_homs.len())),
    );
    Ok(())
}

fn projector_checks(report: &mut ScenarioReport, cl: &ConnesLott, mus: &[Scalar]) -> Result<()> {
    let model = connes_lott_projector(cl)?;
    let checks = model.checks();
    report.check("projector.idempotent", "P² = P for P = E22 ⊗ E33 + E33 ⊗ E22", checks.idempotent);
    report.check_with(
        "projector.span",
        "the two-sided span of P is all of Ω¹",
        checks.embedding_onto_span && checks.span_dim == 4,
        Some(format!("dim = {}", checks.span_dim)),
    );
    report.check("projector.fixes_one_forms", "ξ P = ξ for every basis ξ", checks.fixes_one_forms);
    report.check(
        "projector.theta_sandwich",
        "P(θ ⊗ 1)P = 0 and P(1 ⊗ θ)P = 0",
        checks.theta_left_sandwich_zero && checks.theta_right_sandwich_zero,
    );
    let parts = projector_parts(&model)?;
    report.check("projector.splitting", "D_L and D_R obey their Leibniz rules and sum to the projected d^e", parts.splitting_holds);
    report.check("projector.tau_zero", "τ_L = τ_R = 0", parts.tau_l.is_zero() && parts.tau_r.is_zero());
    let mut same = true;
    for mu in mus {
        let sigma = cl.sigma_family(mu)?;
        let via_p = projector_connection(&model, sigma.clone())?;
        let direct = theta_connection(cl.calc.clone(), sigma)?;
        same &= via_p.d_matrix() == direct.d_matrix();
    }
    report.check("projector.equals_theta", "the projector connection equals −θ ⊗ ξ + σ(ξ ⊗ θ) for every sampled μ", same);
    let ce = curv_enveloping(&model);
    report.check("projector.curv_e_oracle", "−ξ(d^eP)(d^eP)P computed as a product equals −(d^e ξ)(d^e P)P", ce.oracle_consistent);
    report.check("projector.curv_e_bilinear", "ξ ↦ −ξ(d^eP)(d^eP)P is bilinear", ce.bilinear);
    report.check("projector.curv_e_sign", "−ξ(d^eP)(d^eP)P = ∇^{e2}ξ on every basis ξ", ce.equals_nabla_square);
    report.check("projector.curv_e_minus", "−ξ(d^eP)(d^eP)P = −∇^{e2}ξ on every basis ξ", ce.equals_minus_nabla_square);
    report.check("projector.left_block", "the Ω² ⊗ A^op block of ∇^{e2} is ∇² of D_L", left_block_matches(&model, &parts.d_l)?);
    Ok(())
}

/// `c` with `v = c · w`, if any.
fn multiple_of(v: &[Scalar], w: &[Scalar]) -> Option<Scalar> {
    let k = w.iter().position(|c| !c.is_zero())?;
    let c = &v[k] / &w[k];
    (scale_vector(&c, w) == v).then_some(c)
}

fn per_mu(
    report: &mut ScenarioReport,
    cl: &ConnesLott,
    mu: &Scalar,
    rho_family: &[Scalar],
    table: &mut Table,
    rho_table: &mut Table,
) -> Result<()> {
    let calc = &cl.calc;
    let tag = format!("mu={mu}");
    let sigma = cl.sigma_family(mu)?;
    report.check(
        format!("sigma.{tag}"),
        "σ_μ is a bimodule map with π ∘ (σ + 1) = 0",
        verify_bimodule_map(&sigma).is_ok() && crate::connection::sigma_condition(calc, &sigma.matrix),
    );
    let conn = theta_connection(calc.clone(), sigma)?;
    report.check_with(
        format!("connection.right_leibniz.{tag}"),
        "D(ξf) = σ(ξ ⊗ df) + (Dξ)f",
        conn.right_leibniz_failure().is_none(),
        conn.right_leibniz_failure().map(|w| witness_text(calc, calc.omega(1), w)),
    );
    let n2 = conn.left().nabla_square()?;
    let [e1, e2, e1s, e2s] = &cl.eta;
    let minus_mu1 = -(mu + &Scalar::one());
    let expected = [(e1, Scalar::zero()), (e2, Scalar::zero()), (e1s, minus_mu1.clone()), (e2s, -Scalar::one())];
    let table_ok = expected.iter().all(|(x, c)| n2.apply(x) == scale_vector(c, &cl.e_tensor(x)));
    report.check(format!("nabla_square.table.{tag}"), "∇²η₁ = 0, ∇²η₂ = 0, ∇²η₁* = −(μ+1) e ⊗ η₁*, ∇²η₂* = −e ⊗ η₂*", table_ok);
    let cell = |x: &Vec<Scalar>| match multiple_of(&n2.apply(x), &cl.e_tensor(x)) {
        Some(c) if c.is_zero() => "0".to_string(),
        Some(c) => format!("({c}) e⊗ξ"),
        None => format_vector(calc.t21().bimodule.labels(), &n2.apply(x)),
    };
    let curv = curvature(conn.left())?;
    curvature_verdict(report, cl, &tag, mu, &curv)?;
    table.push(vec![
        mu.to_string(),
        cell(e1),
        cell(e2),
        cell(e1s),
        cell(e2s),
        curv.junk.dim().to_string(),
        if curv.curv.is_zero() { "0".into() } else { "Curv_L".into() },
    ]);

    let omega1 = calc.omega(1);
    let t21 = calc.t21();
    let alg = calc.algebra();
    let diagonal_ok = ["E11", "E22", "E33"].iter().all(|lab| {
        let f = alg.index_of(lab).expect("diagonal unit");
        let fv = alg.basis(f);
        (0..omega1.dim()).all(|k| n2.apply(&omega1.right_basis_matrix(f).column(k)) == t21.bimodule.act_right(&n2.column(k), &fv))
    });
    report.check(format!("nabla_square.diagonal_right_linear.{tag}"), "∇²(ξf) = ∇²(ξ)f for f in M_1 × M_1 × M_1", diagonal_ok);

    let paths = nabla_paths(&conn)?;
    report.check(format!("nabla.identity.{tag}"), "∇² = π₁₂D² + (T ⊗ 1)D − π₁₂((σ + 1) ⊗ 1)(1 ⊗ D)D", paths.identity_holds);
    if paths.torsion_free && paths.sigma_condition {
        report.check(format!("nabla.paths_equal.{tag}"), "∇² through the ∇ extension equals π₁₂ D² on Ω¹", paths.paths_equal);
        report.check(format!("nabla.left_linear.{tag}"), "π₁₂D² is left linear when T = 0 and π ∘ (σ + 1) = 0", paths.pi12_d2_left_linear);
    } else {
        report.inform(
            format!("nabla.paths_equal.{tag}"),
            "∇² through the ∇ extension equals π₁₂ D² (not guaranteed: T ≠ 0 or π ∘ (σ + 1) ≠ 0)",
            paths.paths_equal,
            None,
        );
        report.inform(
            format!("nabla.left_linear.{tag}"),
            "π₁₂D² is left linear (not guaranteed: T ≠ 0 or π ∘ (σ + 1) ≠ 0)",
            paths.pi12_d2_left_linear,
            None,
        );
    }
    let t = torsion(&conn);
    report.check(format!("torsion.bilinear.{tag}"), "T(fξg) = f T(ξ) g on all basis pairs", t.is_bilinear());
    recursion(report, &conn, &tag)?;

    let identity = Matrix::identity(alg.dim());
    let plain = curvature_twisted(conn.left(), &identity)?;
    report.check(format!("rho.identity.{tag}"), "ρ = id reproduces J and Curv exactly", plain.junk == curv.junk && plain.curv == curv.curv);
    let mut any_kills = false;
    let mut kills_iff = true;
    let shifted = mu + &Scalar::one();
    let mut family = rho_family.to_vec();
    if !shifted.is_zero() && !family.contains(&shifted) {
        family.push(shifted.clone());
    }
    for k in &family {
        let u = alg.element(&[("E11", Scalar::one()), ("E22", k.clone()), ("E33", Scalar::one())]);
        let u_inv = alg.element(&[("E11", Scalar::one()), ("E22", k.inv()), ("E33", Scalar::one())]);
        let rho = alg.inner_automorphism(&u, &u_inv)?;
        let twisted = curvature_twisted(conn.left(), &rho)?;
        any_kills |= twisted.junk_is_zero();
        kills_iff &= twisted.junk_is_zero() == (*k == shifted);
        report.check(
            format!("rho.twisted_bilinear.{tag}.k={k}"),
            "Curv_ρ(fξ) = f Curv_ρ(ξ) and Curv_ρ(ξf) = Curv_ρ(ξ)ρ(f)",
            twisted.is_bilinear() && twisted.junk_closed,
        );
        rho_table.push(vec![mu.to_string(), k.to_string(), twisted.junk.dim().to_string(), twisted.is_bilinear().to_string()]);
    }
    report.inform(format!("rho.kills_junk.{tag}"), "some ρ in the family gives J_ρ = 0", any_kills, None);
    report.inform(
        format!("rho.junk_zero_iff.{tag}"),
        "for ρ = Ad diag(1, k, 1), J_ρ = 0 exactly when k = μ + 1",
        kills_iff && (shifted.is_zero() || any_kills),
        Some(format!("k tried: {}", family.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))),
    );
    Ok(())
}

fn curvature_verdict(report: &mut ScenarioReport, cl: &ConnesLott, tag: &str, mu: &Scalar, curv: &CurvatureReport) -> Result<()> {
    report.check(format!("curvature.junk_closed.{tag}"), "the junk space is a sub-bimodule", curv.junk_closed);
    report.check(format!("curvature.bilinear.{tag}"), "Curv(fξg) = f Curv(ξ) g on all basis pairs", curv.is_bilinear());
    if mu.is_zero() {
        let projected = curv.quotient.project_matrix().mul(&curv_left(&cl.calc)?);
        report.check(format!("curvature.{tag}"), "J = 0 and Curv = Curv_L", curv.junk_is_zero() && curv.curv == projected);
    } else {
        report.check(format!("curvature.{tag}"), "J = Ω² ⊗_A Ω¹ and Curv ≡ 0", curv.junk_is_full() && curv.curv.is_zero());
    }
    Ok(())
}

fn recursion(report: &mut ScenarioReport, conn: &Connection, tag: &str) -> Result<()> {
    let rec = torsion_recursion(conn)?;
    report.check(format!("torsion.t1.{tag}"), "T₁ = d − π ∘ D", rec.t1_matches_torsion);
    report.check(
        format!("torsion.recursion.{tag}"),
        "T₂(ξ ⊗ ν) = T₁(ξ)ν − ξT₁(ν) + π((σ+1) ⊗ 1)(ξ ⊗ Dν)",
        rec.plus_form_holds && rec.t2_descends,
    );
    report.check(
        format!("torsion.sigma_term.{tag}"),
        "the (σ+1) term vanishes exactly when π ∘ (σ + 1) = 0",
        rec.sigma_term_vanishes == rec.sigma_condition,
    );
    Ok(())
}
