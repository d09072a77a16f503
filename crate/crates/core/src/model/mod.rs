//! Finite probabilistic knowing-value models and the satisfaction relation.
//!
//! Worlds and domain values are named; evaluation works over their indices.
//! Each agent carries one exact-rational distribution per world, stored
//! sparsely (zero-mass worlds omitted). All operations are pure; a model is
//! immutable once validated.

pub mod json;
pub mod random;

use crate::rat::{rat_one, rat_to_frac_string, Rat};
use crate::syntax::{Agent, Formula, Term};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

/// Sparse distribution over world indices; strictly positive masses only,
/// sorted by world index.
pub type SparseDist = Vec<(usize, Rat)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbModel {
    worlds: Vec<String>,
    domain: Vec<String>,
    /// Per world: the propositional atoms true there.
    valuation: Vec<BTreeSet<String>>,
    /// Per world: term assignments into the domain.
    term_values: Vec<BTreeMap<Term, usize>>,
    /// Per agent: one distribution per world.
    measures: BTreeMap<Agent, Vec<SparseDist>>,
}

/// A model with a designated world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModel {
    pub model: ProbModel,
    pub world: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown term `{0}` (no value assigned in some world)")]
    UnknownTerm(Term),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(Agent),
    #[error("unknown domain value `{0}`")]
    UnknownValue(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyWorlds,
    EmptyDomain,
    NegativeMass {
        agent: Agent,
        world: String,
        target: String,
        mass: Rat,
    },
    MassSum {
        agent: Agent,
        world: String,
        sum: Rat,
    },
    MissingTermValue {
        world: String,
        term: Term,
    },
    DanglingWorld {
        context: String,
        world: String,
    },
    DanglingValue {
        context: String,
        value: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyWorlds => write!(f, "world set is empty"),
            Violation::EmptyDomain => write!(f, "value domain is empty"),
            Violation::NegativeMass {
                agent,
                world,
                target,
                mass,
            } => write!(
                f,
                "negative mass {} for agent {agent} at {world} on {target}",
                rat_to_frac_string(mass)
            ),
            Violation::MassSum { agent, world, sum } => write!(
                f,
                "agent {agent} at {world}: sum = {} != 1",
                rat_to_frac_string(sum)
            ),
            Violation::MissingTermValue { world, term } => {
                write!(f, "missing term value for `{term}` at {world}")
            }
            Violation::DanglingWorld { context, world } => {
                write!(f, "{context} references unknown world `{world}`")
            }
            Violation::DanglingValue { context, value } => {
                write!(f, "{context} references unknown value `{value}`")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ProbModel {
    pub fn new(worlds: Vec<String>, domain: Vec<String>) -> Self {
        let n = worlds.len();
        ProbModel {
            worlds,
            domain,
            valuation: vec![BTreeSet::new(); n],
            term_values: vec![BTreeMap::new(); n],
            measures: BTreeMap::new(),
        }
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn num_worlds(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn value_index(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn agents(&self) -> impl Iterator<Item = Agent> + '_ {
        self.measures.keys().copied()
    }

    pub fn set_prop(&mut self, world: usize, prop: impl Into<String>, value: bool) {
        if value {
            self.valuation[world].insert(prop.into());
        } else {
            self.valuation[world].remove(&prop.into());
        }
    }

    pub fn prop_true_at(&self, world: usize, prop: &str) -> bool {
        self.valuation[world].contains(prop)
    }

    pub fn props_at(&self, world: usize) -> impl Iterator<Item = &String> {
        self.valuation[world].iter()
    }

    pub fn term_values_at(&self, world: usize) -> impl Iterator<Item = (&Term, &usize)> {
        self.term_values[world].iter()
    }

    pub fn set_term_value(&mut self, world: usize, term: Term, value: usize) {
        assert!(value < self.domain.len(), "value index out of range");
        self.term_values[world].insert(term, value);
    }

    pub fn term_value(&self, world: usize, term: &Term) -> Option<usize> {
        self.term_values[world].get(term).copied()
    }

    /// Installs agent `i`'s distribution at `world`; zero masses are dropped.
    pub fn set_measure(&mut self, agent: Agent, world: usize, dist: Vec<(usize, Rat)>) {
        let rows = self
            .measures
            .entry(agent)
            .or_insert_with(|| vec![Vec::new(); self.worlds.len()]);
        let mut dist: SparseDist = dist.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        dist.sort_by_key(|&(w, _)| w);
        rows[world] = dist;
    }

    pub fn measure_row(&self, agent: Agent, world: usize) -> Option<&SparseDist> {
        self.measures.get(&agent).map(|rows| &rows[world])
    }

    /// Mass agent `i` assigns at `world` to the world set `event`.
    pub fn mass_of(&self, agent: Agent, world: usize, event: &[bool]) -> Result<Rat, EvalError> {
        let row = self
            .measure_row(agent, world)
            .ok_or(EvalError::UnknownAgent(agent))?;
        Ok(row
            .iter()
            .filter(|&&(w, _)| event[w])
            .map(|(_, m)| m.clone())
            .sum())
    }

    /// Structural and measure-theoretic checks; violations are reported, not
    /// thrown.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.worlds.is_empty() {
            violations.push(Violation::EmptyWorlds);
        }
        if self.domain.is_empty() {
            violations.push(Violation::EmptyDomain);
        }
        for (&agent, rows) in &self.measures {
            for (w, dist) in rows.iter().enumerate() {
                let mut sum = Rat::zero();
                for (target, mass) in dist {
                    if mass.is_negative() {
                        violations.push(Violation::NegativeMass {
                            agent,
                            world: self.worlds[w].clone(),
                            target: self.worlds[*target].clone(),
                            mass: mass.clone(),
                        });
                    }
                    sum += mass;
                }
                if sum != rat_one() {
                    violations.push(Violation::MassSum {
                        agent,
                        world: self.worlds[w].clone(),
                        sum,
                    });
                }
            }
        }
        // Term totality: every term referenced anywhere must have a value at
        // every world.
        let referenced: BTreeSet<Term> = self
            .term_values
            .iter()
            .flat_map(|tv| tv.keys().cloned())
            .collect();
        for (w, tv) in self.term_values.iter().enumerate() {
            for term in &referenced {
                if !tv.contains_key(term) {
                    violations.push(Violation::MissingTermValue {
                        world: self.worlds[w].clone(),
                        term: term.clone(),
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// The worlds where `term` takes the named value.
    pub fn event_value(&self, term: &Term, value: &str) -> Result<Vec<bool>, EvalError> {
        let d = self
            .value_index(value)
            .ok_or_else(|| EvalError::UnknownValue(value.to_string()))?;
        self.event_value_ix(term, d)
    }

    pub fn event_value_ix(&self, term: &Term, value: usize) -> Result<Vec<bool>, EvalError> {
        let mut out = vec![false; self.worlds.len()];
        for w in 0..self.worlds.len() {
            let v = self
                .term_value(w, term)
                .ok_or_else(|| EvalError::UnknownTerm(term.clone()))?;
            out[w] = v == value;
        }
        Ok(out)
    }

    /// Mass agent `i` assigns at `world` to the fiber `{u : val(u,t) = d}`.
    pub fn fiber_mass(
        &self,
        agent: Agent,
        world: usize,
        term: &Term,
        value: usize,
    ) -> Result<Rat, EvalError> {
        let event = self.event_value_ix(term, value)?;
        self.mass_of(agent, world, &event)
    }

    /// Number of domain values whose fiber reaches mass `eta` for agent `i`
    /// at `world`. The knowing-value clause requires exactly one.
    pub fn kv_witness_count(
        &self,
        agent: Agent,
        world: usize,
        term: &Term,
        eta: &Rat,
    ) -> Result<usize, EvalError> {
        let mut count = 0;
        for d in 0..self.domain.len() {
            if self.fiber_mass(agent, world, term, d)? >= *eta {
                count += 1;
            }
        }
        Ok(count)
    }

    /// The world set satisfying `f`, computed bottom-up with per-subformula
    /// memoization confined to this call.
    pub fn extension(&self, f: &Formula) -> Result<Vec<bool>, EvalError> {
        let mut memo = HashMap::new();
        self.extension_memo(f, &mut memo)
    }

    fn extension_memo(
        &self,
        f: &Formula,
        memo: &mut HashMap<Formula, Vec<bool>>,
    ) -> Result<Vec<bool>, EvalError> {
        if let Some(cached) = memo.get(f) {
            return Ok(cached.clone());
        }
        let n = self.worlds.len();
        let out = match f {
            Formula::Atom(p) => (0..n).map(|w| self.prop_true_at(w, p)).collect(),
            Formula::Eq(t, s) => {
                let mut out = vec![false; n];
                for (w, slot) in out.iter_mut().enumerate() {
                    let vt = self
                        .term_value(w, t)
                        .ok_or_else(|| EvalError::UnknownTerm(t.clone()))?;
                    let vs = self
                        .term_value(w, s)
                        .ok_or_else(|| EvalError::UnknownTerm(s.clone()))?;
                    *slot = vt == vs;
                }
                out
            }
            Formula::Not(g) => {
                let inner = self.extension_memo(g, memo)?;
                inner.into_iter().map(|b| !b).collect()
            }
            Formula::Imp(a, b) => {
                let ea = self.extension_memo(a, memo)?;
                let eb = self.extension_memo(b, memo)?;
                ea.into_iter().zip(eb).map(|(x, y)| !x || y).collect()
            }
            Formula::K(agent, theta, body) => {
                let event = self.extension_memo(body, memo)?;
                let mut out = vec![false; n];
                for (w, slot) in out.iter_mut().enumerate() {
                    *slot = self.mass_of(*agent, w, &event)? >= *theta;
                }
                out
            }
            Formula::Kv(agent, eta, term) => {
                let mut out = vec![false; n];
                for (w, slot) in out.iter_mut().enumerate() {
                    *slot = self.kv_witness_count(*agent, w, term, eta)? == 1;
                }
                out
            }
        };
        memo.insert(f.clone(), out.clone());
        Ok(out)
    }

    pub fn satisfies(&self, world: usize, f: &Formula) -> Result<bool, EvalError> {
        if world >= self.worlds.len() {
            return Err(EvalError::UnknownWorld(format!("#{world}")));
        }
        Ok(self.extension(f)?[world])
    }

    pub fn satisfies_named(&self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        let w = self
            .world_index(world)
            .ok_or_else(|| EvalError::UnknownWorld(world.to_string()))?;
        self.satisfies(w, f)
    }

    pub fn valid_in_model(&self, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.extension(f)?.iter().all(|&b| b))
    }
}
