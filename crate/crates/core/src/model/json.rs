//! Bit-exact JSON model files. Rationals travel as strings (`"62/100"`,
//! `"0.62"`, or integers) and serialize back in reduced `a/b` form.
//!
//! ```json
//! { "worlds": ["w1"], "domain": ["d1"],
//!   "valuation": { "w1": {"p": true} },
//!   "term_values": { "w1": {"t": "d1"} },
//!   "measures": { "agent:1": { "w1": {"w1": "1/1"} } } }
//! ```

use super::{ProbModel, Violation};
use crate::rat::{parse_rat, rat_to_frac_string, RatParseError};
use crate::syntax::{Agent, Term};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    pub domain: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, BTreeMap<String, bool>>,
    #[serde(default)]
    pub term_values: BTreeMap<String, BTreeMap<String, String>>,
    /// Keys are `agent:<index>`; inner maps are world -> world -> mass.
    #[serde(default)]
    pub measures: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelFileError {
    #[error("model JSON malformed: {0}")]
    Json(String),
    #[error("bad agent key `{0}` (expected `agent:<index>` with index >= 1)")]
    BadAgentKey(String),
    #[error("bad rational `{literal}` in measures: {source}")]
    BadRational {
        literal: String,
        #[source]
        source: RatParseError,
    },
    #[error("model invalid: {}", summarize(.0))]
    Invalid(Vec<Violation>),
}

fn summarize(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl ModelFile {
    pub fn from_json_str(text: &str) -> Result<Self, ModelFileError> {
        serde_json::from_str(text).map_err(|e| ModelFileError::Json(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }

    fn parse_agent_key(key: &str) -> Result<Agent, ModelFileError> {
        let index = key
            .strip_prefix("agent:")
            .and_then(|s| s.parse::<u32>().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| ModelFileError::BadAgentKey(key.to_string()))?;
        Ok(Agent::new(index))
    }

    /// All structural and arithmetic violations; parse-level problems (bad
    /// rationals, bad agent keys) surface as errors instead.
    pub fn violations(&self) -> Result<Vec<Violation>, ModelFileError> {
        let mut out = Vec::new();
        let world_ix = |name: &str| self.worlds.iter().position(|w| w == name);
        let value_ix = |name: &str| self.domain.iter().position(|d| d == name);

        if self.worlds.is_empty() {
            out.push(Violation::EmptyWorlds);
        }
        if self.domain.is_empty() {
            out.push(Violation::EmptyDomain);
        }
        for world in self.valuation.keys() {
            if world_ix(world).is_none() {
                out.push(Violation::DanglingWorld {
                    context: "valuation".to_string(),
                    world: world.clone(),
                });
            }
        }
        for (world, terms) in &self.term_values {
            if world_ix(world).is_none() {
                out.push(Violation::DanglingWorld {
                    context: "term_values".to_string(),
                    world: world.clone(),
                });
            }
            for value in terms.values() {
                if value_ix(value).is_none() {
                    out.push(Violation::DanglingValue {
                        context: format!("term_values at {world}"),
                        value: value.clone(),
                    });
                }
            }
        }
        for (agent_key, rows) in &self.measures {
            let agent = Self::parse_agent_key(agent_key)?;
            for (source, dist) in rows {
                if world_ix(source).is_none() {
                    out.push(Violation::DanglingWorld {
                        context: format!("measures of {agent_key}"),
                        world: source.clone(),
                    });
                }
                let mut sum = crate::rat::rat_zero();
                for (target, literal) in dist {
                    if world_ix(target).is_none() {
                        out.push(Violation::DanglingWorld {
                            context: format!("measures of {agent_key} at {source}"),
                            world: target.clone(),
                        });
                    }
                    let mass = parse_rat(literal).map_err(|source| ModelFileError::BadRational {
                        literal: literal.clone(),
                        source,
                    })?;
                    if mass.is_negative() {
                        out.push(Violation::NegativeMass {
                            agent,
                            world: source.clone(),
                            target: target.clone(),
                            mass: mass.clone(),
                        });
                    }
                    sum += mass;
                }
                if sum != crate::rat::rat_one() {
                    out.push(Violation::MassSum {
                        agent,
                        world: source.clone(),
                        sum,
                    });
                }
            }
            // Every world needs a distribution for every agent present.
            for world in &self.worlds {
                if !rows.contains_key(world) {
                    out.push(Violation::MassSum {
                        agent,
                        world: world.clone(),
                        sum: crate::rat::rat_zero(),
                    });
                }
            }
        }
        // Term totality across worlds.
        let referenced: std::collections::BTreeSet<&String> = self
            .term_values
            .values()
            .flat_map(|tv| tv.keys())
            .collect();
        for world in &self.worlds {
            let assigned = self.term_values.get(world);
            for term in &referenced {
                if assigned.map_or(true, |tv| !tv.contains_key(*term)) {
                    out.push(Violation::MissingTermValue {
                        world: world.clone(),
                        term: Term::new((*term).clone()),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Indexes the file into a `ProbModel`, failing on any violation.
    pub fn build(&self) -> Result<ProbModel, ModelFileError> {
        let violations = self.violations()?;
        if !violations.is_empty() {
            return Err(ModelFileError::Invalid(violations));
        }
        let mut model = ProbModel::new(self.worlds.clone(), self.domain.clone());
        for (world, props) in &self.valuation {
            let w = model.world_index(world).unwrap();
            for (prop, &value) in props {
                model.set_prop(w, prop.clone(), value);
            }
        }
        for (world, terms) in &self.term_values {
            let w = model.world_index(world).unwrap();
            for (term, value) in terms {
                let d = model.value_index(value).unwrap();
                model.set_term_value(w, Term::new(term.clone()), d);
            }
        }
        for (agent_key, rows) in &self.measures {
            let agent = Self::parse_agent_key(agent_key)?;
            for (source, dist) in rows {
                let w = model.world_index(source).unwrap();
                let parsed: Vec<(usize, crate::rat::Rat)> = dist
                    .iter()
                    .map(|(target, literal)| {
                        (
                            model.world_index(target).unwrap(),
                            parse_rat(literal).unwrap(),
                        )
                    })
                    .collect();
                model.set_measure(agent, w, parsed);
            }
        }
        Ok(model)
    }
}

impl ProbModel {
    /// Canonical file form: rationals reduced to `a/b` strings, keys sorted.
    pub fn to_file(&self) -> ModelFile {
        let mut file = ModelFile {
            worlds: self.worlds().to_vec(),
            domain: self.domain().to_vec(),
            ..ModelFile::default()
        };
        for (w, name) in self.worlds().iter().enumerate() {
            let mut props = BTreeMap::new();
            for prop in self.props_at(w) {
                props.insert(prop.clone(), true);
            }
            if !props.is_empty() {
                file.valuation.insert(name.clone(), props);
            }
            let mut terms = BTreeMap::new();
            for (term, &value) in self.term_values_at(w) {
                terms.insert(term.name().to_string(), self.domain()[value].clone());
            }
            if !terms.is_empty() {
                file.term_values.insert(name.clone(), terms);
            }
        }
        for agent in self.agents().collect::<Vec<_>>() {
            let mut rows = BTreeMap::new();
            for (w, name) in self.worlds().iter().enumerate() {
                let Some(dist) = self.measure_row(agent, w) else {
                    continue;
                };
                let entries: BTreeMap<String, String> = dist
                    .iter()
                    .map(|(target, mass)| {
                        (self.worlds()[*target].clone(), rat_to_frac_string(mass))
                    })
                    .collect();
                rows.insert(name.clone(), entries);
            }
            file.measures.insert(format!("agent:{agent}"), rows);
        }
        file
    }

    pub fn to_json_string(&self) -> String {
        self.to_file().to_json_string()
    }
}
