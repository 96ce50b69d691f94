//! `Ω¹(M_3^+)` as the image of a projector on the free module `(M_3^+)³`.

use crate::connection::theta_connection;
use crate::connes_lott::connes_lott_calculus;
use crate::error::Result;
use crate::projective::{ProjectiveModel, RANK};
use crate::report::{ScenarioReport, Table};

use super::{default_mu_samples, format_vector};

pub const NAME: &str = "projective";

pub fn run_projective_structure() -> Result<ScenarioReport> {
    let cl = connes_lott_calculus()?;
    let model = ProjectiveModel::new(&cl)?;
    let mut report = ScenarioReport::new(NAME);
    let mus = default_mu_samples();
    report.input("module", "(M_3^+)^3 with right action through ρ(f) = 1 ⊗ f");
    report.input("mu", mus.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));

    report.check("module.bimodule_axioms", "ℳ with the ρ-twisted right action is a bimodule", model.module.check_axioms().is_ok());
    let c = model.checks();
    report.check("iota.bimodule_map", "ι: Ω¹ → ℳ intertwines both actions", c.iota_bimodule_map);
    report.check("projector.idempotent", "P² = P in M_3(M_3^+)", c.idempotent);
    report.check("projector.fixes_one_forms", "ξ P = ξ for every basis ξ", c.fixes_one_forms);
    report.check_with(
        "projector.image",
        "ℳ P = ι(Ω¹) with dim 4",
        c.image_is_one_forms && c.image_dim == 4,
        Some(format!("dim ℳP = {}", c.image_dim)),
    );
    report.check("projection.left_inverse", "p ∘ ι = 1 on Ω¹", c.left_inverse);
    let alg = cl.algebra();
    report.check_with(
        "rho.witness",
        "f θ^r ≠ θ^r ρ(f) for some basis f and r",
        c.rho_witness.is_some(),
        c.rho_witness.map(|(f, r)| format!("f = {}, r = {}", alg.label(f), r + 1)),
    );

    let omega1 = cl.calc.omega(1);
    let mut gens = Table::new("projected generators θ^r_P = p(θ^r)", &["r", "θ^r_P"]);
    for r in 0..RANK {
        gens.push(vec![(r + 1).to_string(), format_vector(omega1.labels(), &model.theta_p(r))]);
    }
    report.tables.push(gens);

    let mut square = Table::new("lifted connection", &["μ", "square on θ^r", "square on basis of ℳ", "nonzero ω^r_st"]);
    let mut all_commute = true;
    let mut first_omega = None;
    for mu in &mus {
        let conn = theta_connection(cl.calc.clone(), cl.sigma_family(mu)?)?;
        let lifted = model.lift_connection(&conn)?;
        all_commute &= lifted.square_commutes();
        let nonzero = lifted.omega.iter().flatten().flatten().filter(|w| w.iter().any(|c| !c.is_zero())).count();
        square.push(vec![
            mu.to_string(),
            lifted.square_commutes().to_string(),
            format!("{}/{}", lifted.square_on_basis, model.module.dim()),
            nonzero.to_string(),
        ]);
        first_omega.get_or_insert(lifted);
    }
    report.check("lift.square", "D̃θ^r = −ω^r_st θ^s_P ⊗ θ^t equals (1 ⊗ ι) D θ^r_P for each r and sampled μ", all_commute);
    report.tables.push(square);
    if let Some(lifted) = first_omega {
        let mut table = Table::new(format!("ω^r_st for μ = {}", mus[0]), &["r", "s", "t", "ω^r_st"]);
        for (r, wr) in lifted.omega.iter().enumerate() {
            for (s, ws) in wr.iter().enumerate() {
                for (t, w) in ws.iter().enumerate() {
                    if w.iter().any(|c| !c.is_zero()) {
                        table.push(vec![(r + 1).to_string(), (s + 1).to_string(), (t + 1).to_string(), format_vector(alg.labels(), w)]);
                    }
                }
            }
        }
        report.tables.push(table);
    }
    report.notes.push(
        "on all of ℳ the square differs from the Leibniz extension by df_r ⊗ (1 − ιp)θ^r, so only the generators are required to match"
            .into(),
    );
    Ok(report)
}
