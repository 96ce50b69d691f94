//! Coefficient files for connections on the derivation calculus.
//!
//! A file is either a bare JSON array `Γ[r][s][t]` of scalar strings or an
//! object `{"gamma": Γ, "traceless": J}` where `J[r][s][t]` maps algebra basis
//! labels to scalar strings. Presets: `levi-civita` (`Γ = ½C`) and `zero`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::trace;
use crate::calculus::DerivationCalculus;
use crate::connection::{scalar_coefficients, Coefficients};
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, is_zero_vector};
use crate::scalar::Scalar;

pub type Gamma = Vec<Vec<Vec<Scalar>>>;
pub type TracelessPart = Vec<Vec<Vec<BTreeMap<String, Scalar>>>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum CoefficientFile {
    Bare(Gamma),
    Full {
        gamma: Gamma,
        #[serde(default)]
        traceless: Option<TracelessPart>,
    },
}

/// `ω^r_{st} = Γ^r_{st} · 1 + J^r_{st}`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSpec {
    pub name: String,
    pub gamma: Gamma,
    pub traceless: Option<TracelessPart>,
}

impl CoefficientSpec {
    pub fn preset(name: &str, dc: &DerivationCalculus) -> Result<Self> {
        let m = dc.rank();
        let gamma = match name {
            "levi-civita" => half_structure_constants(dc),
            "zero" => vec![vec![vec![Scalar::zero(); m]; m]; m],
            other => return Err(Error::Parse(format!("unknown preset {other:?}; expected levi-civita or zero"))),
        };
        Ok(CoefficientSpec { name: name.to_string(), gamma, traceless: None })
    }

    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let file: CoefficientFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("{name}: {e}")))?;
        let (gamma, traceless) = match file {
            CoefficientFile::Bare(g) => (g, None),
            CoefficientFile::Full { gamma, traceless } => (gamma, traceless),
        };
        Ok(CoefficientSpec { name: name.to_string(), gamma, traceless })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&path.display().to_string(), &text)
    }

    /// A preset name or a path to a coefficient file.
    pub fn resolve(source: &str, dc: &DerivationCalculus) -> Result<Self> {
        match source {
            "levi-civita" | "zero" => Self::preset(source, dc),
            path => Self::load(Path::new(path)),
        }
    }

    /// Validates shapes and tracelessness and returns `ω` together with
    /// the scalar part alone.
    pub fn coefficients(&self, dc: &DerivationCalculus) -> Result<(Coefficients, Coefficients)> {
        let m = dc.rank();
        check_shape(&self.gamma, m, "gamma")?;
        let scalar = scalar_coefficients(dc, &self.gamma);
        let Some(j) = &self.traceless else {
            return Ok((scalar.clone(), scalar));
        };
        check_shape(j, m, "traceless")?;
        let alg = dc.calc.algebra();
        let mut omega = scalar.clone();
        for r in 0..m {
            for s in 0..m {
                for t in 0..m {
                    let mut v = alg.zero();
                    for (label, c) in &j[r][s][t] {
                        let k = alg.index_of(label).ok_or_else(|| Error::Parse(format!("unknown basis label {label:?}")))?;
                        v[k] += c;
                    }
                    if is_zero_vector(&v) {
                        continue;
                    }
                    let tr = trace(alg, &v).ok_or_else(|| Error::Unsupported("algebra has no trace".into()))?;
                    if !tr.is_zero() {
                        return Err(Error::Parse(format!("J[{r}][{s}][{t}] has trace {tr}, expected 0")));
                    }
                    omega[r][s][t] = add_vectors(&omega[r][s][t], &v);
                }
            }
        }
        Ok((omega, scalar))
    }

    pub fn has_traceless_part(&self) -> bool {
        self.traceless.as_ref().is_some_and(|j| j.iter().flatten().flatten().any(|e| e.values().any(|c| !c.is_zero())))
    }

    pub fn to_json(&self) -> String {
        let file = match &self.traceless {
            None => CoefficientFile::Bare(self.gamma.clone()),
            Some(j) => CoefficientFile::Full { gamma: self.gamma.clone(), traceless: Some(j.clone()) },
        };
        serde_json::to_string(&file).expect("coefficients serialize")
    }
}

fn check_shape<T>(x: &[Vec<Vec<T>>], m: usize, what: &str) -> Result<()> {
    if x.len() == m && x.iter().all(|a| a.len() == m && a.iter().all(|b| b.len() == m)) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("{what} must be indexed [r][s][t] with {m} entries each")))
    }
}

/// `Γ^r_{st} = ½ C^r_{st}`
pub fn half_structure_constants(dc: &DerivationCalculus) -> Gamma {
    let m = dc.rank();
    let half = Scalar::ratio(1, 2);
    (0..m).map(|r| (0..m).map(|s| (0..m).map(|t| dc.sl.c(r, s, t) * &half).collect()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::derivation_calculus;

    #[test]
    fn bare_and_full_files() {
        let dc = derivation_calculus(2).unwrap();
        let lc = CoefficientSpec::preset("levi-civita", &dc).unwrap();
        let back = CoefficientSpec::parse("levi-civita", &lc.to_json()).unwrap();
        assert_eq!(back, lc);
        let zero = r#"[["0","0","0"],["0","0","0"],["0","0","0"]]"#;
        let text = format!(
            r#"{{"gamma": [{zero},{zero},{zero}], "traceless": [[[{{"E12": "1"}},{{}},{{}}],[{{}},{{}},{{}}],[{{}},{{}},{{}}]],[[{{}},{{}},{{}}],[{{}},{{}},{{}}],[{{}},{{}},{{}}]],[[{{}},{{}},{{}}],[{{}},{{}},{{}}],[{{}},{{}},{{}}]]]}}"#
        );
        let spec = CoefficientSpec::parse("file", &text).unwrap();
        assert!(spec.has_traceless_part());
        let (omega, scalar) = spec.coefficients(&dc).unwrap();
        assert_ne!(omega, scalar);
    }

    #[test]
    fn rejects_bad_input() {
        let dc = derivation_calculus(2).unwrap();
        assert!(CoefficientSpec::parse("x", "[1, 2]").is_err());
        assert!(CoefficientSpec::parse("x", r#"[["1/0"]]"#).is_err());
        let short = CoefficientSpec::parse("x", r#"[[["1"]]]"#).unwrap();
        assert!(short.coefficients(&dc).is_err());
        assert!(CoefficientSpec::preset("flat", &dc).is_err());
        let zero = r#"[{},{},{}]"#;
        let block = format!("[{zero},{zero},{zero}]");
        let g = r#"[["0","0","0"],["0","0","0"],["0","0","0"]]"#;
        let traced = format!(
            r#"{{"gamma": [{g},{g},{g}], "traceless": [[[{{"E11": "1"}},{{}},{{}}],[{{}},{{}},{{}}],[{{}},{{}},{{}}]],{block},{block}]}}"#
        );
        let spec = CoefficientSpec::parse("x", &traced).unwrap();
        assert!(spec.coefficients(&dc).is_err());
    }
}
