//! Linear connections on the derivation calculus of `M_n`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::trace_split;
use crate::bimodule::BimoduleMap;
use crate::calculus::{derivation_calculus, DerivationCalculus};
use crate::connection::{
    connection_from_coefficients, scalar_coefficients, theta_connection, torsion, torsion_recursion, Coefficients, Connection,
    TorsionRecursion,
};
use crate::curvature::{
    curv_left, curvature, curvatures_agree, extract_riemann, matrix_curvature_coeffs, nabla_paths, CurvatureReport, RiemannTensor,
};
use crate::enveloping::{curv_enveloping, left_block_matches, matrix_projector, projector_connection, projector_parts, zeta_check};
use crate::error::{Error, Result};
use crate::io::{CoefficientSpec, Gamma};
use crate::linalg::{add_vectors, axpy, zero_vector, Vector};
use crate::report::{ScenarioReport, Table};
use crate::scalar::Scalar;

use super::{calculus_property_checks, format_vector, witness_text};

pub const NAME: &str = "matrix-geometry";

#[derive(Clone, Debug)]
pub struct MatrixGeometryConfig {
    pub n: usize,
    /// Preset name or coefficient file path.
    pub gamma: String,
    pub seed: u64,
    pub trials: usize,
}

impl Default for MatrixGeometryConfig {
    fn default() -> Self {
        MatrixGeometryConfig { n: 2, gamma: "levi-civita".into(), seed: 0, trials: 10 }
    }
}

pub fn run_matrix_geometry(cfg: &MatrixGeometryConfig) -> Result<ScenarioReport> {
    if !(2..=3).contains(&cfg.n) {
        return Err(Error::Unsupported(format!("n = {} is outside the supported range 2..=3", cfg.n)));
    }
    let dc = derivation_calculus(cfg.n)?;
    let spec = CoefficientSpec::resolve(&cfg.gamma, &dc)?;
    let (omega, scalar_part) = spec.coefficients(&dc)?;
    let mut report = ScenarioReport::new(NAME);
    report.input("n", cfg.n.to_string());
    report.input("gamma", spec.name.clone());
    report.input("seed", cfg.seed.to_string());
    report.input("trials", cfg.trials.to_string());

    frame_checks(&mut report, &dc);
    let z = zeta_check(&dc);
    report.check("zeta.idempotent", "ζ² = ζ for ζ = (1/n) Σ E_ij ⊗ E_ji", z.idempotent);
    report.check("zeta.central", "f ζ = ζ f for every basis f", z.commutes);
    report.check("zeta.kills_exact", "(1 ⊗ f − f ⊗ 1) ζ = 0 for every basis f", z.kills_exact);
    report.check_with(
        "zeta.decomposition",
        "M_n ⊗ M_n = Ω¹ ⊕ M_n ζ",
        z.direct_sum,
        Some(format!("{} + {} = {}", z.one_form_dim, z.zeta_dim, z.total_dim)),
    );
    riemann_table(&mut report, &dc, &spec.gamma, "closed-form R^r_stu for Γ");

    if cfg.n > 2 {
        report
            .notes
            .push(format!("n = {}: connection, torsion and curvature checks need Ω¹ ⊗_A Ω¹ and Ω² ⊗_A Ω¹ and run for n = 2 only", cfg.n));
        return Ok(report);
    }

    calculus_property_checks(&mut report, "calculus", &dc.calc);
    let sigma = dc.flip_sigma()?;
    let sigma_ok = crate::bimodule::verify_bimodule_map(&sigma).is_ok();
    report.check(
        "sigma.flip",
        "σ(θ^r ⊗ θ^s) = θ^s ⊗ θ^r is a bimodule map with π ∘ (σ + 1) = 0",
        sigma_ok && crate::connection::sigma_condition(&dc.calc, &sigma.matrix),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    torsion_checks(&mut report, &dc, &sigma, &spec, &mut rng, cfg.trials)?;

    let base = connection_from_coefficients(&dc, &scalar_part, sigma.clone())?;
    report.check_with(
        "right_leibniz.scalar",
        "D(ξf) = σ(ξ ⊗ df) + (Dξ)f for ω^r_st = Γ^r_st · 1",
        base.right_leibniz_failure().is_none(),
        base.right_leibniz_failure().map(|w| witness_text(&dc.calc, dc.calc.omega(1), w)),
    );
    let base_curv = curvature(base.left())?;
    curvature_checks(&mut report, &dc, &base, &base_curv, &spec.gamma)?;

    if spec.has_traceless_part() {
        let user = connection_from_coefficients(&dc, &omega, sigma.clone())?;
        let curv = curvature(user.left())?;
        report.check_with(
            "right_leibniz.file_traceless",
            "the right Leibniz rule fails for the supplied nonzero traceless J^r_st",
            user.right_leibniz_failure().is_some(),
            user.right_leibniz_failure().map(|w| witness_text(&dc.calc, dc.calc.omega(1), w)),
        );
        report.check(
            "curvature.file_traceless_invariant",
            "Curv for ω = Γ + J equals Curv for ω = Γ modulo both junk spaces",
            curvatures_agree(&base_curv, &curv),
        );
    }

    perturbation_checks(&mut report, &dc, &sigma, &scalar_part, &base_curv, &mut rng, cfg.trials)?;
    random_gamma_checks(&mut report, &dc, &sigma, &mut rng, cfg.trials)?;
    theta_checks(&mut report, &dc, &sigma)?;
    recursion_checks(&mut report, &dc, &base, &sigma)?;
    projector_checks(&mut report, &dc, &sigma)?;
    Ok(report)
}

fn frame_checks(report: &mut ScenarioReport, dc: &DerivationCalculus) {
    let calc = &dc.calc;
    let n = dc.n();
    report.check_with(
        "calculus.dim_omega1",
        "dim Ω¹ = n²(n² − 1)",
        calc.dim(1) == n * n * (n * n - 1),
        Some(format!("dim Ω¹ = {}", calc.dim(1))),
    );
    let alg = calc.algebra();
    let omega1 = calc.omega(1);
    let mut witness = None;
    'outer: for r in 0..dc.rank() {
        let th = dc.frame(r);
        for f in 0..alg.dim() {
            let fv = alg.basis(f);
            if omega1.act_left(&fv, &th) != omega1.act_right(&th, &fv) {
                witness = Some(format!("θ^{} and {}", r + 1, alg.label(f)));
                break 'outer;
            }
        }
    }
    report.check_with("frame.central", "f θ^r = θ^r f for every basis f and r", witness.is_none(), witness);
}

fn gamma_torsion_condition(dc: &DerivationCalculus, gamma: &Gamma) -> bool {
    let m = dc.rank();
    (0..m).all(|r| (0..m).all(|s| (0..m).all(|t| &(&gamma[r][s][t] - &gamma[r][t][s]) == dc.sl.c(r, s, t))))
}

fn torsion_checks(
    report: &mut ScenarioReport,
    dc: &DerivationCalculus,
    sigma: &BimoduleMap,
    spec: &CoefficientSpec,
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<()> {
    let mut cases: Vec<(String, Gamma)> = Vec::new();
    for name in ["levi-civita", "zero"] {
        cases.push((name.to_string(), CoefficientSpec::preset(name, dc)?.gamma));
    }
    if !cases.iter().any(|(n, _)| n == &spec.name) {
        cases.push(("file".to_string(), spec.gamma.clone()));
    }
    let mut directions = [false, false];
    for (name, gamma) in &cases {
        let conn = connection_from_coefficients(dc, &scalar_coefficients(dc, gamma), sigma.clone())?;
        let t = torsion(&conn);
        let cond = gamma_torsion_condition(dc, gamma);
        directions[usize::from(t.is_zero())] = true;
        report.check_with(
            format!("torsion.iff.{name}"),
            "T = 0 ⟺ Γ^r_st − Γ^r_ts = C^r_st",
            t.is_zero() == cond,
            Some(format!("T = 0: {}, Γ condition: {}", t.is_zero(), cond)),
        );
        report.check(format!("torsion.bilinear.{name}"), "T(fξg) = f T(ξ) g on all basis pairs", t.is_bilinear());
        if name == "zero" {
            let ok = (0..dc.rank()).all(|r| {
                let mut expected = zero_vector(dc.calc.dim(2));
                for s in 0..dc.rank() {
                    for u in 0..dc.rank() {
                        let c = dc.sl.c(r, s, u) * &Scalar::ratio(-1, 2);
                        if !c.is_zero() {
                            axpy(&mut expected, &c, &dc.frame2(s, u));
                        }
                    }
                }
                t.map.apply(&dc.frame(r)) == expected
            });
            report.check("torsion.zero_preset", "Γ = 0 gives T(θ^r) = −½ C^r_st θ^s θ^t ≠ 0", ok && !t.is_zero());
        }
    }
    let mut agree = true;
    for _ in 0..trials {
        let gamma = random_gamma(dc, rng);
        let conn = connection_from_coefficients(dc, &scalar_coefficients(dc, &gamma), sigma.clone())?;
        let zero = torsion(&conn).is_zero();
        directions[usize::from(zero)] = true;
        agree &= zero == gamma_torsion_condition(dc, &gamma);
    }
    report.check("torsion.iff.random", "T = 0 ⟺ Γ^r_st − Γ^r_ts = C^r_st on seeded random Γ", agree);
    report.check("torsion.iff.both_directions", "the equivalence was exercised with T = 0 and with T ≠ 0", directions == [true, true]);
    Ok(())
}

fn curvature_checks(
    report: &mut ScenarioReport,
    dc: &DerivationCalculus,
    conn: &Connection,
    curv: &CurvatureReport,
    gamma: &Gamma,
) -> Result<()> {
    let omega1 = dc.calc.omega(1);
    report.check("curvature.junk_closed", "the junk space is a sub-bimodule of Ω² ⊗_A Ω¹", curv.junk_closed);
    report.check_with(
        "curvature.bilinear",
        "Curv(fξg) = f Curv(ξ) g on all basis pairs",
        curv.is_bilinear(),
        curv.left_failure.as_ref().or(curv.right_failure.as_ref()).map(|w| witness_text(&dc.calc, omega1, w)),
    );
    report.check_with(
        "curvature.junk_zero",
        "J = 0 for ω^r_st = Γ^r_st · 1",
        curv.junk_is_zero(),
        Some(format!("dim J = {}", curv.junk.dim())),
    );
    let extracted = extract_riemann(dc, &curv.curv);
    let closed = matrix_curvature_coeffs(gamma, &dc.sl);
    report.check(
        "riemann.closed_form",
        "Curv(θ^r) = ½ R^r_stu θ^t θ^u ⊗ θ^s with R^r_stu = Γ^r_tp Γ^p_us − Γ^r_up Γ^p_ts − Γ^r_ps C^p_tu",
        extracted.as_ref() == Some(&closed),
    );
    let paths = nabla_paths(conn)?;
    report.check("nabla.identity", "∇² = π₁₂D² + (T ⊗ 1)D − π₁₂((σ + 1) ⊗ 1)(1 ⊗ D)D", paths.identity_holds);
    if paths.torsion_free && paths.sigma_condition {
        report.check("nabla.paths_equal", "∇² through the ∇ extension equals π₁₂ D² on Ω¹", paths.paths_equal);
        report.check("nabla.left_linear", "π₁₂D² is left linear when T = 0 and π ∘ (σ + 1) = 0", paths.pi12_d2_left_linear);
    } else {
        report.inform(
            "nabla.paths_equal",
            "∇² through the ∇ extension equals π₁₂ D² (not guaranteed: T ≠ 0 or π ∘ (σ + 1) ≠ 0)",
            paths.paths_equal,
            None,
        );
        report.inform(
            "nabla.left_linear",
            "π₁₂D² is left linear (not guaranteed: T ≠ 0 or π ∘ (σ + 1) ≠ 0)",
            paths.pi12_d2_left_linear,
            None,
        );
    }
    let t21 = dc.calc.t21();
    let labels = t21.bimodule.labels();
    let mut table = Table::new("Curv(θ^r) for ω^r_st = Γ^r_st · 1", &["r", "Curv(θ^r)"]);
    for r in 0..dc.rank() {
        let v = curv.quotient.section(&curv.curv.apply(&dc.frame(r)));
        table.push(vec![(r + 1).to_string(), format_vector(labels, &v)]);
    }
    report.tables.push(table);
    Ok(())
}

fn riemann_table(report: &mut ScenarioReport, dc: &DerivationCalculus, gamma: &Gamma, title: &str) {
    let m = dc.rank();
    let shape_ok = gamma.len() == m && gamma.iter().all(|g| g.len() == m && g.iter().all(|h| h.len() == m));
    if !shape_ok {
        return;
    }
    let r_tensor: RiemannTensor = matrix_curvature_coeffs(gamma, &dc.sl);
    let mut table = Table::new(title, &["r", "s", "t", "u", "R"]);
    for (r, rr) in r_tensor.iter().enumerate() {
        for (s, rs) in rr.iter().enumerate() {
            for t in 0..m {
                for u in t + 1..m {
                    let x = &rs[t][u];
                    if !x.is_zero() {
                        table.push(vec![r + 1, s + 1, t + 1, u + 1].into_iter().map(|i| i.to_string()).chain([x.to_string()]).collect());
                    }
                }
            }
        }
    }
    report.tables.push(table);
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let re = Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    if rng.gen_bool(0.25) {
        &re + &(&Scalar::i() * &Scalar::ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2)))
    } else {
        re
    }
}

fn random_gamma(dc: &DerivationCalculus, rng: &mut ChaCha8Rng) -> Gamma {
    let m = dc.rank();
    (0..m).map(|_| (0..m).map(|_| (0..m).map(|_| random_scalar(rng)).collect()).collect()).collect()
}

/// Adds random traceless elements at a few random `(r, s, t)`.
fn random_traceless(dc: &DerivationCalculus, base: &Coefficients, rng: &mut ChaCha8Rng) -> Result<Coefficients> {
    let m = dc.rank();
    let alg = dc.calc.algebra();
    let mut omega = base.clone();
    let mut touched = false;
    while !touched {
        for _ in 0..3 {
            let (r, s, t) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
            let w: Vec<Scalar> = (0..alg.dim()).map(|_| random_scalar(rng)).collect();
            let (_, j) = trace_split(alg, &w)?;
            touched |= j.iter().any(|c| !c.is_zero());
            omega[r][s][t] = add_vectors(&omega[r][s][t], &j);
        }
    }
    Ok(omega)
}

fn perturbation_checks(
    report: &mut ScenarioReport,
    dc: &DerivationCalculus,
    sigma: &BimoduleMap,
    scalar_part: &Coefficients,
    base_curv: &CurvatureReport,
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<()> {
    let mut leibniz_fails = true;
    let mut invariant = true;
    let mut first_witness = None;
    let mut bad_trial = None;
    for trial in 0..trials {
        let omega = random_traceless(dc, scalar_part, rng)?;
        let conn = connection_from_coefficients(dc, &omega, sigma.clone())?;
        match conn.right_leibniz_failure() {
            Some(w) => {
                first_witness.get_or_insert_with(|| witness_text(&dc.calc, dc.calc.omega(1), w));
            }
            None => leibniz_fails = false,
        }
        let curv = curvature(conn.left())?;
        if !curvatures_agree(base_curv, &curv) {
            invariant = false;
            bad_trial.get_or_insert_with(|| format!("trial {trial}, J nonzero at {}", perturbed_slots(&omega, scalar_part)));
        }
    }
    report.check_with(
        "right_leibniz.traceless",
        "the right Leibniz rule fails whenever the traceless part J^r_st ≠ 0 (seeded trials)",
        leibniz_fails,
        first_witness,
    );
    report.check_with(
        "curvature.traceless_invariance",
        "Curv is unchanged by traceless J^r_st perturbations (seeded trials, modulo both junk spaces)",
        invariant,
        bad_trial,
    );

    // Deterministic probes: one traceless entry alone, and a chained pair
    // J^r_tp, J^p_us whose product H·H = 1 is pure trace.
    let alg = dc.calc.algebra();
    let e12 = alg.element(&[("E12", Scalar::one())]);
    let h = alg.element(&[("E11", Scalar::one()), ("E22", -Scalar::one())]);
    let probes: [(&str, Vec<(Slot, Vector)>); 2] =
        [("single", vec![((0, 1, 1), e12)]), ("chained", vec![((0, 1, 1), h.clone()), ((1, 2, 0), h)])];
    for (name, entries) in probes {
        let mut omega = scalar_part.clone();
        for ((r, s, t), j) in &entries {
            omega[*r][*s][*t] = add_vectors(&omega[*r][*s][*t], j);
        }
        let conn = connection_from_coefficients(dc, &omega, sigma.clone())?;
        let curv = curvature(conn.left())?;
        report.inform(
            format!("curvature.traceless_invariance.{name}"),
            match name {
                "single" => "Curv unchanged by J^1_22 = E12 alone",
                _ => "Curv unchanged by J^1_22 = J^2_31 = E11 − E22",
            },
            curvatures_agree(base_curv, &curv),
            Some(format!("dim junk {}", curv.junk.dim())),
        );
    }
    Ok(())
}

/// A coefficient position `(r, s, t)`, zero-based.
type Slot = (usize, usize, usize);

fn perturbed_slots(omega: &Coefficients, scalar_part: &Coefficients) -> String {
    let mut slots = Vec::new();
    for (r, wr) in omega.iter().enumerate() {
        for (s, ws) in wr.iter().enumerate() {
            for (t, w) in ws.iter().enumerate() {
                if w != &scalar_part[r][s][t] {
                    slots.push(format!("({},{},{})", r + 1, s + 1, t + 1));
                }
            }
        }
    }
    slots.join(" ")
}

fn random_gamma_checks(
    report: &mut ScenarioReport,
    dc: &DerivationCalculus,
    sigma: &BimoduleMap,
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<()> {
    let mut bad = None;
    for trial in 0..trials {
        let gamma = random_gamma(dc, rng);
        let conn = connection_from_coefficients(dc, &scalar_coefficients(dc, &gamma), sigma.clone())?;
        let curv = curvature(conn.left())?;
        if extract_riemann(dc, &curv.curv) != Some(matrix_curvature_coeffs(&gamma, &dc.sl)) {
            bad.get_or_insert(trial);
        }
    }
    report.check_with(
        "riemann.random",
        "R extracted from Curv equals the closed form for seeded random Γ",
        bad.is_none(),
        bad.map(|t| format!("trial {t}")),
    );
    Ok(())
}

fn theta_checks(report: &mut ScenarioReport, dc: &DerivationCalculus, sigma: &BimoduleMap) -> Result<()> {
    let conn = theta_connection(dc.calc.clone(), sigma.clone())?;
    let curv = curvature(conn.left())?;
    report.check("theta.right_leibniz", "Dξ = −θ ⊗ ξ + σ(ξ ⊗ θ) satisfies both Leibniz rules", conn.right_leibniz_failure().is_none());
    report.check("theta.curv_zero", "Curv ≡ 0 for the θ-connection", curv.curv.is_zero());
    report.check("theta.torsion_nonzero", "T ≢ 0 for the θ-connection", !torsion(&conn).is_zero());
    report.check("theta.curv_left_zero", "dθ + θ² = 0", curv_left(&dc.calc)?.is_zero());
    Ok(())
}

fn recursion_checks(report: &mut ScenarioReport, dc: &DerivationCalculus, base: &Connection, flip: &BimoduleMap) -> Result<()> {
    let identity = BimoduleMap::identity(dc.calc.t11().bimodule.clone());
    let theta_flip = theta_connection(dc.calc.clone(), flip.clone())?;
    let theta_id = theta_connection(dc.calc.clone(), identity)?;
    let cases: [(&str, &Connection); 3] = [("gamma", base), ("theta_flip", &theta_flip), ("theta_identity", &theta_id)];
    let mut table = Table::new("torsion recursion", &["connection", "π(σ+1) = 0", "(σ+1) term zero", "with +", "with −"]);
    let mut iff = true;
    for (name, conn) in cases {
        let rec: TorsionRecursion = torsion_recursion(conn)?;
        report.check(format!("torsion.t1.{name}"), "T₁ = d − π ∘ D", rec.t1_matches_torsion);
        report.check(format!("torsion.t2_descends.{name}"), "T₂ vanishes on the balancing relations", rec.t2_descends);
        if rec.sigma_condition {
            report.check(format!("torsion.recursion.{name}"), "T₂(ξ ⊗ ν) = T₁(ξ)ν − ξT₁(ν) + π((σ+1) ⊗ 1)(ξ ⊗ Dν)", rec.plus_form_holds);
        } else {
            report.check(format!("torsion.recursion.{name}"), "T₂(ξ ⊗ ν) = T₁(ξ)ν − ξT₁(ν) − π((σ+1) ⊗ 1)(ξ ⊗ Dν)", rec.minus_form_holds);
            report.check(
                format!("torsion.recursion_plus.{name}"),
                "T₂(ξ ⊗ ν) = T₁(ξ)ν − ξT₁(ν) + π((σ+1) ⊗ 1)(ξ ⊗ Dν) with π ∘ (σ + 1) ≠ 0",
                rec.plus_form_holds,
            );
        }
        iff &= rec.sigma_term_vanishes == rec.sigma_condition;
        table.push(vec![
            name.to_string(),
            rec.sigma_condition.to_string(),
            rec.sigma_term_vanishes.to_string(),
            rec.plus_form_holds.to_string(),
            rec.minus_form_holds.to_string(),
        ]);
    }
    report.check("torsion.sigma_term", "the (σ+1) term vanishes exactly when π ∘ (σ + 1) = 0", iff);
    report.tables.push(table);
    Ok(())
}

fn projector_checks(report: &mut ScenarioReport, dc: &DerivationCalculus, sigma: &BimoduleMap) -> Result<()> {
    let model = matrix_projector(dc)?;
    let checks = model.checks();
    report.check("projector.idempotent", "P² = P for P = 1 ⊗ 1 − ζ", checks.idempotent);
    report.check_with(
        "projector.span",
        "A^e P ≅ Ω¹",
        checks.embedding_onto_span && checks.span_dim == dc.calc.dim(1),
        Some(format!("dim = {}", checks.span_dim)),
    );
    report.check("projector.fixes_one_forms", "ξ P = ξ for every basis ξ", checks.fixes_one_forms);
    let parts = projector_parts(&model)?;
    report.check("projector.splitting", "D_L and D_R obey their Leibniz rules and sum to the projected d^e", parts.splitting_holds);
    let conn = projector_connection(&model, sigma.clone())?;
    report.check(
        "projector.right_leibniz",
        "the projector connection D_L + σ D_R satisfies both Leibniz rules",
        conn.right_leibniz_failure().is_none(),
    );
    let curv = curvature(conn.left())?;
    report.check("projector.curv_zero", "Curv ≡ 0 for the projector connection", curv.curv.is_zero());
    let ce = curv_enveloping(&model);
    report.check("projector.curv_e_oracle", "−ξ(d^eP)(d^eP)P computed as a product equals −(d^e ξ)(d^e P)P", ce.oracle_consistent);
    report.check("projector.curv_e_bilinear", "ξ ↦ −ξ(d^eP)(d^eP)P is bilinear", ce.bilinear);
    report.check("projector.curv_e_sign", "−ξ(d^eP)(d^eP)P = ∇^{e2}ξ on every basis ξ", ce.equals_nabla_square);
    report.check("projector.curv_e_minus", "−ξ(d^eP)(d^eP)P = −∇^{e2}ξ on every basis ξ", ce.equals_minus_nabla_square);
    report.check("projector.curv_e_vanishes", "−ξ(d^eP)(d^eP)P = 0 for P = 1 ⊗ 1 − ζ", ce.vanishes());
    report.check("projector.left_block", "the Ω² ⊗ A^op block of ∇^{e2} is ∇² of D_L", left_block_matches(&model, &parts.d_l)?);
    Ok(())
}
