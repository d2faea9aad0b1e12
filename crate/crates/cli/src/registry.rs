//! JSON case registry.
//!
//! The registry document is a JSON array of case entries with the schema
//!
//! ```json
//! [{"id": 1,
//!   "left":  {"mu": 1.5, "theta": 0.1, "gamma": 0.0, "kappa": 0},
//!   "right": {"advection_law": "identity", "theta": 0.2, "gamma": 2.0, "kappa": 0},
//!   "domain": [-1.0, 1.0], "T": 5.0, "dt": 0.05, "dx": 0.05,
//!   "x1": -0.15, "x2": -0.2, "overlap_nodes": 2}]
//! ```
//!
//! Each side carries either a constant `mu` or an `advection_law` tag
//! (`identity`, `square`, `sine-pi`). Numbers round-trip at full double
//! precision.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;
use swr_core::{case, AdrParameters, AdvectionLaw, CoupledProblem, InitialProfile};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SideEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advection_law: Option<String>,
    pub theta: f64,
    pub gamma: f64,
    pub kappa: u32,
}

impl SideEntry {
    fn from_params(params: &AdrParameters) -> Self {
        let (mu, advection_law) = match params.advection {
            AdvectionLaw::Constant(mu) => (Some(mu), None),
            AdvectionLaw::Identity => (None, Some("identity".to_owned())),
            AdvectionLaw::Square => (None, Some("square".to_owned())),
            AdvectionLaw::SinePi => (None, Some("sine-pi".to_owned())),
        };
        Self { mu, advection_law, theta: params.theta, gamma: params.gamma, kappa: params.kappa }
    }

    fn to_params(&self) -> Result<AdrParameters> {
        let law = match (&self.mu, &self.advection_law) {
            (Some(mu), None) => AdvectionLaw::Constant(*mu),
            (None, Some(tag)) => match tag.as_str() {
                "identity" => AdvectionLaw::Identity,
                "square" => AdvectionLaw::Square,
                "sine-pi" => AdvectionLaw::SinePi,
                other => bail!("registry: unknown advection law {other:?}"),
            },
            _ => bail!("registry: each side needs exactly one of mu or advection_law"),
        };
        AdrParameters::nonlinear(law, self.theta, self.gamma, self.kappa)
            .context("registry: invalid side parameters")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CaseEntry {
    pub id: u32,
    pub left: SideEntry,
    pub right: SideEntry,
    pub domain: [f64; 2],
    #[serde(rename = "T")]
    pub horizon: f64,
    pub dt: f64,
    pub dx: f64,
    pub x1: f64,
    pub x2: f64,
    pub overlap_nodes: usize,
}

impl CaseEntry {
    pub fn from_problem(id: u32, problem: &CoupledProblem) -> Self {
        Self {
            id,
            left: SideEntry::from_params(&problem.left),
            right: SideEntry::from_params(&problem.right),
            domain: [problem.domain.0, problem.domain.1],
            horizon: problem.horizon,
            dt: problem.dt,
            dx: problem.dx,
            x1: problem.x1,
            x2: problem.x2,
            overlap_nodes: problem.overlap_nodes,
        }
    }

    pub fn to_problem(&self) -> Result<CoupledProblem> {
        let problem = CoupledProblem::new(
            self.left.to_params()?,
            self.right.to_params()?,
            (self.domain[0], self.domain[1]),
            self.x1,
            self.x2,
            InitialProfile::NegSinPi,
            self.horizon,
            self.dt,
            self.dx,
            (0.0, 0.0),
        )
        .with_context(|| format!("registry: case {} is not a valid coupled problem", self.id))?;
        if problem.overlap_nodes != self.overlap_nodes {
            bail!(
                "registry: case {} declares {} overlap nodes but the interfaces span {}",
                self.id,
                self.overlap_nodes,
                problem.overlap_nodes
            );
        }
        Ok(problem)
    }
}

/// The seven built-in cases as registry entries.
pub fn builtin_registry() -> Vec<CaseEntry> {
    (1..=7)
        .map(|id| CaseEntry::from_problem(id, &case(id).expect("built-in case")))
        .collect()
}

pub fn registry_to_json(entries: &[CaseEntry]) -> Result<String> {
    let mut text = serde_json::to_string_pretty(entries).context("registry: serialization")?;
    text.push('\n');
    Ok(text)
}

pub fn registry_from_json(text: &str) -> Result<Vec<CaseEntry>> {
    serde_json::from_str(text).context("registry: parsing the case document failed")
}

/// Look up a case, either from a registry file or the built-in table.
pub fn load_case(registry: Option<&Path>, id: u32) -> Result<CoupledProblem> {
    match registry {
        None => case(id).with_context(|| format!("cases: no built-in case {id}")),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("registry: cannot read {}", path.display()))?;
            let entries = registry_from_json(&text)?;
            let entry = entries
                .iter()
                .find(|entry| entry.id == id)
                .with_context(|| format!("registry: no case {id} in {}", path.display()))?;
            entry.to_problem()
        }
    }
}
