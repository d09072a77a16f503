//! Iterative elimination to the refined type set: repeatedly drop types whose
//! FC system is infeasible for some agent until the sequence stabilizes, then
//! retain solutions computed against the final set.

use super::fc::{build_fc, fc_feasible, fc_variable_space, modal_profile, FcSolution, FcVariables};
use super::{TypeCandidate, TypespaceError};
use crate::lp::LinearSystem;
use crate::syntax::{print, Agent, Closure, Formula};
use std::collections::BTreeMap;

/// A type dropped during elimination, with the smallest agent whose FC was
/// infeasible and the full (infeasible) disjunctive expansion for that agent.
#[derive(Debug, Clone)]
pub struct EliminatedType {
    pub candidate: TypeCandidate,
    pub witness_agent: Agent,
    pub infeasible_fc: Vec<LinearSystem>,
}

/// One elimination round: the set after the round and what was removed by it.
#[derive(Debug, Clone)]
pub struct Stage {
    pub index: usize,
    pub survivors: Vec<TypeCandidate>,
    pub eliminated: Vec<EliminatedType>,
}

/// The full elimination history. The final stage eliminates nothing, so the
/// last two surviving sets coincide (the fixed point); a closure with no
/// agents skips elimination entirely and has no stages.
#[derive(Debug, Clone)]
pub struct EliminationTrace {
    pub initial: Vec<TypeCandidate>,
    pub stages: Vec<Stage>,
}

impl EliminationTrace {
    pub fn eliminated(&self) -> impl Iterator<Item = &EliminatedType> {
        self.stages.iter().flat_map(|s| s.eliminated.iter())
    }

    pub fn to_json(&self, closure: &Closure) -> serde_json::Value {
        let stages: Vec<serde_json::Value> = self
            .stages
            .iter()
            .map(|stage| {
                let eliminated: Vec<serde_json::Value> = stage
                    .eliminated
                    .iter()
                    .map(|e| {
                        let literals: Vec<String> =
                            modal_profile(closure, e.candidate, e.witness_agent)
                                .formulas(closure)
                                .iter()
                                .map(print)
                                .collect();
                        let members: Vec<String> =
                            e.candidate.members(closure).iter().map(print).collect();
                        serde_json::json!({
                            "members": members,
                            "witness_agent": e.witness_agent.index(),
                            "modal_literals": literals,
                            "infeasible_fc": e
                                .infeasible_fc
                                .iter()
                                .map(|s| s.to_json())
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                serde_json::json!({
                    "stage": stage.index,
                    "surviving": stage.survivors.len(),
                    "eliminated": eliminated,
                })
            })
            .collect();
        serde_json::json!({
            "initial_types": self.initial.len(),
            "stages": stages,
        })
    }
}

/// Everything the canonical construction needs: the refined set, the history,
/// and per-(type, agent) solutions over the refined set's variable space.
#[derive(Debug, Clone)]
pub struct EliminationOutcome {
    pub type_star: Vec<TypeCandidate>,
    pub trace: EliminationTrace,
    pub solutions: BTreeMap<(u64, Agent), FcSolution>,
    pub variables: FcVariables,
}

/// Runs elimination to its fixed point. Solutions are the witnesses from the
/// final confirming round, hence computed against the fixed point itself.
pub fn iterate_elimination(
    closure: &Closure,
    initial: Vec<TypeCandidate>,
    k_size: usize,
) -> Result<EliminationOutcome, TypespaceError> {
    let agents = closure.agents().to_vec();
    let mut trace = EliminationTrace {
        initial: initial.clone(),
        stages: Vec::new(),
    };

    if agents.is_empty() {
        let variables = fc_variable_space(closure, &initial, k_size)?;
        return Ok(EliminationOutcome {
            type_star: initial,
            trace,
            solutions: BTreeMap::new(),
            variables,
        });
    }

    let mut current = initial;
    let mut stage_index = 0;
    loop {
        let mut survivors = Vec::new();
        let mut eliminated = Vec::new();
        let mut solutions: BTreeMap<(u64, Agent), FcSolution> = BTreeMap::new();
        // FC depends on the type only through its modal profile, so solve
        // once per distinct profile and agent.
        let mut memo: BTreeMap<(Vec<(usize, bool)>, Agent), Option<FcSolution>> = BTreeMap::new();

        for &gamma in &current {
            let mut failed_agent: Option<Agent> = None;
            let mut gamma_solutions: Vec<(Agent, FcSolution)> = Vec::new();
            for &agent in &agents {
                let profile = modal_profile(closure, gamma, agent);
                let key = (profile.literals.clone(), agent);
                let solved = match memo.get(&key) {
                    Some(cached) => cached.clone(),
                    None => {
                        let solved = fc_feasible(closure, gamma, &current, agent, k_size)?;
                        memo.insert(key, solved.clone());
                        solved
                    }
                };
                match solved {
                    Some(solution) => gamma_solutions.push((agent, solution)),
                    None => {
                        failed_agent = Some(agent);
                        break;
                    }
                }
            }
            match failed_agent {
                None => {
                    survivors.push(gamma);
                    for (agent, solution) in gamma_solutions {
                        solutions.insert((gamma.mask, agent), solution);
                    }
                }
                Some(agent) => {
                    let infeasible_fc = build_fc(closure, gamma, &current, agent, k_size)?;
                    eliminated.push(EliminatedType {
                        candidate: gamma,
                        witness_agent: agent,
                        infeasible_fc,
                    });
                }
            }
        }

        let done = eliminated.is_empty();
        trace.stages.push(Stage {
            index: stage_index,
            survivors: survivors.clone(),
            eliminated,
        });
        if done {
            let variables = fc_variable_space(closure, &survivors, k_size)?;
            return Ok(EliminationOutcome {
                type_star: survivors,
                trace,
                solutions,
                variables,
            });
        }
        current = survivors;
        stage_index += 1;
    }
}

/// The blocking axioms: for each eliminated type, the negated conjunction of
/// its witnessing agent's modal literals, in trace order.
pub fn emit_star_axioms(closure: &Closure, trace: &EliminationTrace) -> Vec<Formula> {
    trace
        .eliminated()
        .map(|e| {
            let literals = modal_profile(closure, e.candidate, e.witness_agent).formulas(closure);
            assert!(
                !literals.is_empty(),
                "eliminated types always have modal literals (the bare simplex is feasible)"
            );
            Formula::not(Formula::conjoin_all(literals))
        })
        .collect()
}

/// Searches the refined set for a type containing the formula: the first in
/// bitmask order, or `None` when every surviving type excludes it.
pub fn lindenbaum(
    chi: &Formula,
    closure: &Closure,
    type_star: &[TypeCandidate],
) -> Result<Option<TypeCandidate>, TypespaceError> {
    if !closure.contains(chi) && closure.core_index(chi).is_none() {
        return Err(TypespaceError::FormulaNotInClosure(print(chi)));
    }
    Ok(type_star
        .iter()
        .copied()
        .find(|ty| ty.contains(closure, chi)))
}
