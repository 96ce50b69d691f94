//! The three worked geometries, each producing a [`ScenarioReport`].

pub mod connes_lott;
pub mod matrix_geometry;
pub mod projective;

use crate::bimodule::Bimodule;
use crate::calculus::DifferentialCalculus;
use crate::connection::Witness;
use crate::error::Result;
use crate::report::{RunReport, ScenarioReport};
use crate::scalar::Scalar;

pub use connes_lott::{run_connes_lott, ConnesLottConfig};
pub use matrix_geometry::{run_matrix_geometry, MatrixGeometryConfig};
pub use projective::run_projective_structure;

/// μ sample points used when none are given.
pub fn default_mu_samples() -> Vec<Scalar> {
    vec![Scalar::zero(), Scalar::one(), -Scalar::one(), Scalar::from_int(2), Scalar::ratio(1, 2)]
}

#[derive(Clone, Debug, Default)]
pub struct AllConfig {
    pub matrix: MatrixGeometryConfig,
    pub connes_lott: ConnesLottConfig,
}

/// Runs the three scenarios on separate threads; the result is ordered by
/// scenario name.
pub fn run_all(cfg: &AllConfig) -> Result<RunReport> {
    let (m, c, p) = std::thread::scope(|s| {
        let m = s.spawn(|| run_matrix_geometry(&cfg.matrix));
        let c = s.spawn(|| run_connes_lott(&cfg.connes_lott));
        let p = s.spawn(run_projective_structure);
        (join(m), join(c), join(p))
    });
    Ok(RunReport::new(vec![m?, c?, p?]))
}

fn join<T>(h: std::thread::ScopedJoinHandle<'_, T>) -> T {
    h.join().unwrap_or_else(|e| std::panic::resume_unwind(e))
}

/// `Σ c · label` over the nonzero coordinates, `0` when empty.
pub(crate) fn format_vector(labels: &[String], v: &[Scalar]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(labels)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, l)| if c.is_one() { l.clone() } else { format!("({c})·{l}") })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub(crate) fn witness_text(calc: &DifferentialCalculus, module: &Bimodule, w: &Witness) -> String {
    format!("f = {}, basis {}", calc.algebra().label(w.algebra_basis), module.label(w.module_basis))
}

/// Engine-level invariants of a calculus and of its tensor products.
pub(crate) fn calculus_property_checks(report: &mut ScenarioReport, prefix: &str, calc: &DifferentialCalculus) {
    let alg = calc.algebra();
    let assoc = alg.associativity_failure();
    report.check_with(
        format!("{prefix}.algebra_axioms"),
        "(ab)c = a(bc) and 1a = a1 = a on all basis elements",
        assoc.is_none() && alg.unit_failure().is_none(),
        assoc.map(|(i, j, k)| format!("{} {} {}", alg.label(i), alg.label(j), alg.label(k))),
    );
    let modules_ok = (0..=crate::calculus::TOP_DEGREE).all(|p| calc.omega(p).check_axioms().is_ok())
        && calc.t11().bimodule.check_axioms().is_ok()
        && calc.t21().bimodule.check_axioms().is_ok();
    report.check(format!("{prefix}.bimodule_axioms"), "f(gm) = (fg)m, (mf)g = m(fg), (fm)g = f(mg) on Ω^p, Ω¹⊗Ω¹ and Ω²⊗Ω¹", modules_ok);
    let failures = calc.axiom_failures();
    report.check_with(
        format!("{prefix}.calculus_axioms"),
        "d² = 0, graded Leibniz rule, Ω^p bimodules, A-linear associative wedge",
        failures.is_empty(),
        failures.first().map(|f| format!("{}: {}", f.axiom, f.witness)),
    );
    report.check_with(
        format!("{prefix}.pi_well_defined"),
        "π: Ω¹ ⊗_A Ω¹ → Ω² is a well-defined bimodule map",
        calc.pi_failure().is_none(),
        calc.pi_failure(),
    );
}
