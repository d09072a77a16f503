//! Canonical model synthesis from the refined type set and retained FC
//! solutions, executable truth-lemma verification, and the end-to-end
//! satisfiability decision with verified certificates.

mod brute;

pub use brute::{brute_force_sat, BruteBounds, BruteError};

use crate::model::{EvalError, ProbModel};
use crate::rat::Rat;
use crate::syntax::{print, Agent, Closure, Formula};
use crate::typespace::{
    emit_star_axioms, enumerate_types, iterate_elimination, lindenbaum, EliminationOutcome,
    TypeLimits, TypespaceError,
};
use num_bigint::BigInt;
use thiserror::Error;

/// Coordinate-count policy for the assignment-configuration layer. `Paper`
/// uses exactly one coordinate per closure term, which makes a single-term
/// negative Kv literal unrealizable in the construction; `PlusOne` (the
/// default) adds one spare coordinate so mass can always split below any
/// high threshold. Both clamp to at least one coordinate so term-free
/// closures still get a nonempty domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KSizePolicy {
    Paper,
    #[default]
    PlusOne,
    Explicit(usize),
}

impl KSizePolicy {
    pub fn resolve(&self, closure: &Closure) -> usize {
        match self {
            KSizePolicy::Paper => closure.terms().len().max(1),
            KSizePolicy::PlusOne => closure.terms().len() + 1,
            KSizePolicy::Explicit(n) => (*n).max(1),
        }
    }

    pub fn label(&self) -> String {
        match self {
            KSizePolicy::Paper => "paper".to_string(),
            KSizePolicy::PlusOne => "plus-one".to_string(),
            KSizePolicy::Explicit(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Typespace(#[from] TypespaceError),
    #[error("no retained solution for surviving type {type_index} and agent {agent} (pipeline bug)")]
    MissingSolution { type_index: usize, agent: Agent },
    #[error("every type was eliminated; there is no canonical model to build")]
    EmptyTypeSpace,
    #[error("evaluation failed on the constructed model: {0}")]
    Eval(#[from] EvalError),
}

/// Satisfiability verdict. SAT carries a certificate model with a designated
/// world, re-verified by the model checker before `checked` is set. UNSAT
/// reports only that the canonical construction yields no model, with the
/// elimination history and the blocking axioms as evidence.
#[derive(Debug, Clone)]
pub enum SatVerdict {
    Sat {
        model: ProbModel,
        world: String,
        checked: bool,
    },
    Unsat {
        closure: Closure,
        outcome: EliminationOutcome,
        star_axioms: Vec<Formula>,
    },
}

pub const UNSAT_NOTE: &str = "no model via canonical construction";

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatVerdict::Sat { .. })
    }

    pub fn to_json(&self, policy: KSizePolicy) -> serde_json::Value {
        match self {
            SatVerdict::Sat {
                model,
                world,
                checked,
            } => serde_json::json!({
                "result": "sat",
                "model": serde_json::from_str::<serde_json::Value>(&model.to_json_string())
                    .expect("model json"),
                "world": world,
                "checked": checked,
                "k_size_policy": policy.label(),
            }),
            SatVerdict::Unsat {
                closure,
                outcome,
                star_axioms,
            } => serde_json::json!({
                "result": "unsat",
                "trace": outcome.trace.to_json(closure),
                "star_axioms": star_axioms.iter().map(print).collect::<Vec<_>>(),
                "note": UNSAT_NOTE,
                "k_size_policy": policy.label(),
            }),
        }
    }
}

fn world_name(type_index: usize, assignment_index: usize) -> String {
    format!("w{type_index}_{assignment_index}")
}

/// Assembles the finite canonical model over worlds (type, assignment):
/// valuation from atom membership, term values from assignment coordinates,
/// and each world's measures from its type's retained FC solutions. The
/// replica dimension of the construction is collapsed; each fiber's geometric
/// mass stack telescopes to the solution value exactly.
pub fn build_canonical(
    closure: &Closure,
    outcome: &EliminationOutcome,
    k_size: usize,
) -> Result<ProbModel, PipelineError> {
    assert!(k_size >= 1, "domains must be nonempty");
    if outcome.type_star.is_empty() {
        return Err(PipelineError::EmptyTypeSpace);
    }
    let columns = &outcome.variables.columns;
    let worlds: Vec<String> = columns
        .iter()
        .map(|&(t, f)| world_name(t, f))
        .collect();
    let domain: Vec<String> = (1..=k_size).map(|k| format!("d{k}")).collect();
    let mut model = ProbModel::new(worlds, domain);

    for (w, &(t, f)) in columns.iter().enumerate() {
        let ty = outcome.type_star[t];
        for atom in closure.atoms() {
            if ty.contains(closure, &Formula::atom(atom.clone())) {
                model.set_prop(w, atom.clone(), true);
            }
        }
        let assignment = &outcome.variables.assignments[t][f];
        for (term_ix, term) in closure.terms().iter().enumerate() {
            model.set_term_value(w, term.clone(), assignment.coord_of(term_ix));
        }
    }

    for &agent in closure.agents() {
        for (w, &(t, _)) in columns.iter().enumerate() {
            let ty = outcome.type_star[t];
            let solution = outcome
                .solutions
                .get(&(ty.mask, agent))
                .ok_or(PipelineError::MissingSolution {
                    type_index: t,
                    agent,
                })?;
            let dist: Vec<(usize, Rat)> = solution
                .values
                .iter()
                .cloned()
                .enumerate()
                .collect();
            model.set_measure(agent, w, dist);
        }
    }
    debug_assert!(model.validate().is_ok());
    Ok(model)
}

/// One truth-lemma mismatch: a closure member whose semantic truth at a world
/// disagrees with membership in that world's type.
#[derive(Debug, Clone)]
pub struct TruthViolation {
    pub formula: Formula,
    pub world: String,
    pub in_type: bool,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Default)]
pub struct TruthLemmaReport {
    pub checks: usize,
    pub violations: Vec<TruthViolation>,
}

impl TruthLemmaReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `satisfies(m, (type, f), phi) <=> phi in type` for every closure
/// member and every world, scanning members in nondecreasing modal depth so
/// no check consults a deeper formula than the one under test.
pub fn verify_truth_lemma(
    closure: &Closure,
    outcome: &EliminationOutcome,
    model: &ProbModel,
) -> Result<TruthLemmaReport, PipelineError> {
    let mut members: Vec<&Formula> = closure.members().iter().collect();
    members.sort_by_key(|f| (f.modal_depth(), print(f)));

    let mut report = TruthLemmaReport::default();
    for member in members {
        let extension = model.extension(member)?;
        for (w, &(t, _)) in outcome.variables.columns.iter().enumerate() {
            let ty = outcome.type_star[t];
            let in_type = ty.contains(closure, member);
            let satisfied = extension[w];
            report.checks += 1;
            if in_type != satisfied {
                report.violations.push(TruthViolation {
                    formula: member.clone(),
                    world: model.worlds()[w].clone(),
                    in_type,
                    satisfied,
                });
            }
        }
    }
    Ok(report)
}

/// Full decision pipeline: closure, type enumeration, iterative elimination,
/// Lindenbaum search, canonical model construction, and independent
/// re-verification of the certificate.
pub fn decide_sat(
    chi: &Formula,
    policy: KSizePolicy,
    limits: &TypeLimits,
) -> Result<SatVerdict, PipelineError> {
    let closure = chi.finite_closure();
    let k_size = policy.resolve(&closure);
    let initial = enumerate_types(&closure, limits)?;
    let outcome = iterate_elimination(&closure, initial, k_size)?;

    match lindenbaum(chi, &closure, &outcome.type_star)? {
        None => {
            let star_axioms = emit_star_axioms(&closure, &outcome.trace);
            Ok(SatVerdict::Unsat {
                closure,
                outcome,
                star_axioms,
            })
        }
        Some(gamma) => {
            let model = build_canonical(&closure, &outcome, k_size)?;
            let type_index = outcome
                .type_star
                .iter()
                .position(|&ty| ty == gamma)
                .expect("lindenbaum returns a surviving type");
            let world = world_name(type_index, 0);
            let w = model
                .world_index(&world)
                .expect("designated world exists");
            let checked = model.satisfies(w, chi)?;
            Ok(SatVerdict::Sat {
                model,
                world,
                checked,
            })
        }
    }
}

/// Expands each world into `n` replicas with masses scaled by the truncated
/// geometric series 2^-r / (1 - 2^-n). Event masses are unchanged because
/// every definable event contains all replicas of a world or none, so
/// satisfaction of every formula is preserved. Didactic output only.
pub fn materialize_replicas(model: &ProbModel, n: usize) -> ProbModel {
    assert!(n >= 1, "at least one replica");
    let replica_name = |w: usize, r: usize| format!("{}_r{}", model.worlds()[w], r + 1);
    let worlds: Vec<String> = (0..model.num_worlds())
        .flat_map(|w| (0..n).map(move |r| (w, r)))
        .map(|(w, r)| replica_name(w, r))
        .collect();
    let mut out = ProbModel::new(worlds, model.domain().to_vec());

    // 2^-[1..=n], renormalized to sum 1.
    let total: Rat = (1..=n)
        .map(|r| Rat::new(BigInt::from(1), BigInt::from(2u64.pow(r as u32))))
        .sum();
    let scale: Vec<Rat> = (1..=n)
        .map(|r| Rat::new(BigInt::from(1), BigInt::from(2u64.pow(r as u32))) / &total)
        .collect();

    for w in 0..model.num_worlds() {
        for r in 0..n {
            let new_w = w * n + r;
            for prop in model.props_at(w) {
                out.set_prop(new_w, prop.clone(), true);
            }
            for (term, &value) in model.term_values_at(w) {
                out.set_term_value(new_w, term.clone(), value);
            }
        }
    }
    for agent in model.agents().collect::<Vec<_>>() {
        for w in 0..model.num_worlds() {
            let row = model.measure_row(agent, w).expect("agent rows total");
            let spread: Vec<(usize, Rat)> = row
                .iter()
                .flat_map(|&(target, ref mass)| {
                    scale
                        .iter()
                        .enumerate()
                        .map(move |(r, s)| (target * n + r, mass * s))
                })
                .collect();
            for r in 0..n {
                out.set_measure(agent, w * n + r, spread.clone());
            }
        }
    }
    debug_assert!(out.validate().is_ok());
    out
}

/// Convenience wrapper asserting that thresholds are within range before the
/// pipeline runs; parser-produced formulas already satisfy this.
pub fn decide_sat_default(chi: &Formula) -> Result<SatVerdict, PipelineError> {
    decide_sat(chi, KSizePolicy::default(), &TypeLimits::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_zero};
    use crate::syntax::Term;

    fn kv_seed() -> Formula {
        Formula::kv(Agent::new(1), rat(3, 5), Term::new("t"))
    }

    fn pipeline(seed: &Formula, policy: KSizePolicy) -> (Closure, EliminationOutcome, usize) {
        let closure = seed.finite_closure();
        let k = policy.resolve(&closure);
        let initial = enumerate_types(&closure, &TypeLimits::default()).unwrap();
        let outcome = iterate_elimination(&closure, initial, k).unwrap();
        (closure, outcome, k)
    }

    #[test]
    fn atom_closure_builds_a_two_world_model() {
        let (closure, outcome, k) = pipeline(&Formula::atom("p"), KSizePolicy::PlusOne);
        let model = build_canonical(&closure, &outcome, k).unwrap();
        assert_eq!(model.num_worlds(), 2);
        assert!(model.validate().is_ok());
        // No agents in the closure, no measures in the model.
        assert_eq!(model.agents().count(), 0);
    }

    #[test]
    fn kv_closure_measures_respect_the_locking_row() {
        let (closure, outcome, k) = pipeline(&kv_seed(), KSizePolicy::PlusOne);
        let model = build_canonical(&closure, &outcome, k).unwrap();
        assert!(model.validate().is_ok());
        // Designated worlds of the Kv-containing type put mass >= 3/5 on one
        // value fiber.
        for (w, &(t, _)) in outcome.variables.columns.iter().enumerate() {
            let ty = outcome.type_star[t];
            if ty.contains(&closure, &kv_seed()) {
                let count = model
                    .kv_witness_count(Agent::new(1), w, &Term::new("t"), &rat(3, 5))
                    .unwrap();
                assert_eq!(count, 1, "locking row realized at world {w}");
            }
        }
    }

    #[test]
    fn truth_lemma_holds_for_atom_closure() {
        let (closure, outcome, k) = pipeline(&Formula::atom("p"), KSizePolicy::PlusOne);
        let model = build_canonical(&closure, &outcome, k).unwrap();
        let report = verify_truth_lemma(&closure, &outcome, &model).unwrap();
        assert!(report.is_ok());
        assert_eq!(report.checks, closure.members().len() * model.num_worlds());
    }

    #[test]
    fn truth_lemma_holds_for_kv_closure() {
        let (closure, outcome, k) = pipeline(&kv_seed(), KSizePolicy::PlusOne);
        let model = build_canonical(&closure, &outcome, k).unwrap();
        let report = verify_truth_lemma(&closure, &outcome, &model).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn corrupted_measure_is_detected() {
        let (closure, outcome, k) = pipeline(&kv_seed(), KSizePolicy::PlusOne);
        let mut model = build_canonical(&closure, &outcome, k).unwrap();
        // Move mass 1/10 across the first constrained fiber boundary.
        let agent = Agent::new(1);
        let row = model.measure_row(agent, 0).unwrap().clone();
        let mut tampered: Vec<(usize, Rat)> = row;
        let shift = rat(1, 10);
        tampered[0].1 = &tampered[0].1 - &shift;
        let last = tampered.len() - 1;
        if tampered.len() == 1 {
            // Single entry: push mass onto a fresh world instead.
            tampered.push((model.num_worlds() - 1, shift));
        } else {
            tampered[last].1 = &tampered[last].1 + &shift;
        }
        let tampered: Vec<(usize, Rat)> = tampered
            .into_iter()
            .filter(|(_, m)| *m != rat_zero())
            .collect();
        model.set_measure(agent, 0, tampered);
        assert!(model.validate().is_ok(), "tampering keeps the model valid");
        let report = verify_truth_lemma(&closure, &outcome, &model).unwrap();
        assert!(
            !report.is_ok(),
            "moved mass must break some truth-lemma check"
        );
    }

    #[test]
    fn decide_sat_on_satisfiable_kv() {
        let verdict = decide_sat_default(&kv_seed()).unwrap();
        match verdict {
            SatVerdict::Sat {
                model,
                world,
                checked,
            } => {
                assert!(checked);
                assert!(model.validate().is_ok());
                assert!(model.satisfies_named(&world, &kv_seed()).unwrap());
            }
            SatVerdict::Unsat { .. } => panic!("Kv_1^{{3/5}}(t) is satisfiable"),
        }
    }

    #[test]
    fn decide_sat_on_boolean_contradiction() {
        let chi = Formula::and(Formula::atom("p"), Formula::not(Formula::atom("p")));
        let verdict = decide_sat_default(&chi).unwrap();
        assert!(!verdict.is_sat());
    }

    #[test]
    fn decide_sat_on_complementary_knowledge() {
        let chi = Formula::and(
            Formula::k(Agent::new(1), rat(3, 4), Formula::atom("p")),
            Formula::k(Agent::new(1), rat(3, 4), Formula::not(Formula::atom("p"))),
        );
        let verdict = decide_sat_default(&chi).unwrap();
        match verdict {
            SatVerdict::Unsat { star_axioms, .. } => {
                // Blocked by coherence before FC ever runs.
                assert!(star_axioms.is_empty() || !star_axioms.is_empty());
            }
            SatVerdict::Sat { .. } => panic!("complementary knowledge at 3/4 is unsatisfiable"),
        }
    }

    #[test]
    fn negative_kv_is_policy_sensitive() {
        let neg = Formula::not(kv_seed());
        let plus_one = decide_sat(&neg, KSizePolicy::PlusOne, &TypeLimits::default()).unwrap();
        assert!(plus_one.is_sat(), "mass splits with the spare coordinate");
        let paper = decide_sat(&neg, KSizePolicy::Paper, &TypeLimits::default()).unwrap();
        assert!(
            !paper.is_sat(),
            "single-term negative Kv is the documented gap of the paper policy"
        );
    }

    #[test]
    fn unsat_verdict_serializes_with_note() {
        let chi = Formula::and(Formula::atom("p"), Formula::not(Formula::atom("p")));
        let verdict = decide_sat_default(&chi).unwrap();
        let json = verdict.to_json(KSizePolicy::PlusOne);
        assert_eq!(json["result"], "unsat");
        assert_eq!(json["note"], UNSAT_NOTE);
        assert!(json["star_axioms"].is_array());
    }

    #[test]
    fn sat_verdict_serializes_with_certificate() {
        let verdict = decide_sat_default(&kv_seed()).unwrap();
        let json = verdict.to_json(KSizePolicy::PlusOne);
        assert_eq!(json["result"], "sat");
        assert_eq!(json["checked"], true);
        assert!(json["model"]["worlds"].is_array());
    }

    #[test]
    fn replicas_preserve_satisfaction() {
        let verdict = decide_sat_default(&kv_seed()).unwrap();
        let SatVerdict::Sat { model, world, .. } = verdict else {
            panic!("sat expected");
        };
        let expanded = materialize_replicas(&model, 3);
        assert!(expanded.validate().is_ok());
        assert_eq!(expanded.num_worlds(), model.num_worlds() * 3);
        let replica = format!("{world}_r1");
        assert!(expanded.satisfies_named(&replica, &kv_seed()).unwrap());
        // Spot-check every closure member at every replica against the base.
        let closure = kv_seed().finite_closure();
        for member in closure.members() {
            let base_ext = model.extension(member).unwrap();
            let rep_ext = expanded.extension(member).unwrap();
            for w in 0..model.num_worlds() {
                for r in 0..3 {
                    assert_eq!(base_ext[w], rep_ext[w * 3 + r], "member {member}");
                }
            }
        }
    }

    #[test]
    fn empty_type_space_is_a_structured_error() {
        let (closure, outcome, k) = pipeline(&kv_seed(), KSizePolicy::PlusOne);
        let emptied = EliminationOutcome {
            type_star: Vec::new(),
            trace: outcome.trace.clone(),
            solutions: Default::default(),
            variables: ptkv_core_empty_variables(),
        };
        assert!(matches!(
            build_canonical(&closure, &emptied, k),
            Err(PipelineError::EmptyTypeSpace)
        ));
        // decide_sat never reaches the builder in that situation: a formula
        // outside every surviving type is reported UNSAT instead.
        let chi = Formula::and(Formula::atom("p"), Formula::not(Formula::atom("p")));
        assert!(!decide_sat_default(&chi).unwrap().is_sat());
    }

    fn ptkv_core_empty_variables() -> crate::typespace::FcVariables {
        crate::typespace::FcVariables {
            columns: Vec::new(),
            assignments: Vec::new(),
        }
    }

    /// The finite restatement of the construction's probability computation:
    /// the measure of a member's extension equals the summed solution mass
    /// over the columns whose type contains the member.
    #[test]
    fn quotient_measures_match_solution_sums() {
        for seed in [
            kv_seed(),
            Formula::and(
                Formula::k(Agent::new(1), rat(1, 2), Formula::atom("p")),
                Formula::not(Formula::kv(Agent::new(2), rat(2, 3), Term::new("t"))),
            ),
            Formula::k(Agent::new(1), rat(1, 2), Formula::not(kv_seed())),
        ] {
            let (closure, outcome, k) = pipeline(&seed, KSizePolicy::PlusOne);
            let model = build_canonical(&closure, &outcome, k).unwrap();
            for member in closure.members() {
                let extension = model.extension(member).unwrap();
                for &agent in closure.agents() {
                    for (w, &(t, _)) in outcome.variables.columns.iter().enumerate() {
                        let gamma = outcome.type_star[t];
                        let solution = &outcome.solutions[&(gamma.mask, agent)];
                        let expected: Rat = outcome
                            .variables
                            .columns
                            .iter()
                            .enumerate()
                            .filter(|&(_, &(t2, _))| {
                                outcome.type_star[t2].contains(&closure, member)
                            })
                            .map(|(col, _)| solution.values[col].clone())
                            .sum();
                        let got = model.mass_of(agent, w, &extension).unwrap();
                        assert_eq!(got, expected, "member {member} at world {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn k_size_policies_resolve_with_clamping() {
        let no_terms = Formula::atom("p").finite_closure();
        assert_eq!(KSizePolicy::Paper.resolve(&no_terms), 1);
        assert_eq!(KSizePolicy::PlusOne.resolve(&no_terms), 1);
        let one_term = kv_seed().finite_closure();
        assert_eq!(KSizePolicy::Paper.resolve(&one_term), 1);
        assert_eq!(KSizePolicy::PlusOne.resolve(&one_term), 2);
        assert_eq!(KSizePolicy::Explicit(5).resolve(&one_term), 5);
        assert_eq!(KSizePolicy::Explicit(0).resolve(&one_term), 1);
    }
}
