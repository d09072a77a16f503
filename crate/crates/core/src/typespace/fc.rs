//! The joint constraint systems FC(Gamma, S, i): variables z_{Delta,f} over
//! candidate successor types and their assignment configurations, rows from
//! agent i's modal literals in Gamma.

use super::{config_space, Assignment, TypeCandidate, TypespaceError};
use crate::lp::{feasible_mixed, LinearSystem, Relation};
use crate::rat::{rat_one, Rat};
use num_traits::Signed;
use crate::syntax::{Agent, Closure, Formula};

/// Agent i's modal literals in a type: one polarity per i-modal core formula
/// (saturation makes the polarity total), in core-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalProfile {
    pub literals: Vec<(usize, bool)>,
}

impl ModalProfile {
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// The literal formulas, in deterministic (core-index) order.
    pub fn formulas(&self, closure: &Closure) -> Vec<Formula> {
        self.literals
            .iter()
            .map(|&(ix, positive)| {
                let f = closure.core()[ix].clone();
                if positive {
                    f
                } else {
                    Formula::not(f)
                }
            })
            .collect()
    }
}

/// The set of all i-modal literals of the type: K/Kv core formulas whose top
/// operator belongs to the agent, with the type's polarity.
pub fn modal_profile(closure: &Closure, ty: TypeCandidate, agent: Agent) -> ModalProfile {
    let literals = closure
        .core()
        .iter()
        .enumerate()
        .filter(|(_, f)| match f {
            Formula::K(i, _, _) | Formula::Kv(i, _, _) => *i == agent,
            _ => false,
        })
        .map(|(ix, _)| (ix, ty.contains_core(ix)))
        .collect();
    ModalProfile { literals }
}

/// The variable space of FC over a candidate set: one column per (type,
/// assignment) pair, types in `S` order, assignments in configuration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcVariables {
    /// Column -> (index into S, index into that type's assignment list).
    pub columns: Vec<(usize, usize)>,
    /// Per type in S: its assignment configurations.
    pub assignments: Vec<Vec<Assignment>>,
}

impl FcVariables {
    pub fn column_names(&self) -> Vec<String> {
        self.columns
            .iter()
            .map(|&(t, f)| format!("z[{t},{f}]"))
            .collect()
    }
}

pub fn fc_variable_space(
    closure: &Closure,
    candidates: &[TypeCandidate],
    k_size: usize,
) -> Result<FcVariables, TypespaceError> {
    let mut columns = Vec::new();
    let mut assignments = Vec::new();
    for (t, &ty) in candidates.iter().enumerate() {
        let space = config_space(closure, ty, k_size)?;
        for f in 0..space.len() {
            columns.push((t, f));
        }
        assignments.push(space);
    }
    Ok(FcVariables {
        columns,
        assignments,
    })
}

/// A normalized solution of FC, aligned with `FcVariables::columns`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcSolution {
    pub values: Vec<Rat>,
}

/// The full disjunctive expansion of FC(Gamma, S, i): one `LinearSystem` per
/// choice of witness coordinate for each positive knowing-value literal
/// (Cartesian product, lexicographic witness order). Every system shares the
/// normalization row, the K-literal rows, and the negative Kv rows.
pub fn build_fc(
    closure: &Closure,
    gamma: TypeCandidate,
    candidates: &[TypeCandidate],
    agent: Agent,
    k_size: usize,
) -> Result<Vec<LinearSystem>, TypespaceError> {
    debug_assert!(
        candidates.contains(&gamma),
        "FC requires the type to be in the candidate set"
    );
    let vars = fc_variable_space(closure, candidates, k_size)?;
    let profile = modal_profile(closure, gamma, agent);
    let witness_tuples = witness_tuples(&profile, closure, k_size);
    let mut out = Vec::with_capacity(witness_tuples.len());
    for tuple in &witness_tuples {
        out.push(assemble_system(
            closure, candidates, &vars, &profile, tuple, k_size,
        ));
    }
    Ok(out)
}

/// Positive knowing-value literals of the profile, as (term index, eta).
fn positive_kv_literals(profile: &ModalProfile, closure: &Closure) -> Vec<(usize, Rat)> {
    profile
        .literals
        .iter()
        .filter(|&&(_, positive)| positive)
        .filter_map(|&(ix, _)| match &closure.core()[ix] {
            Formula::Kv(_, eta, term) => Some((
                closure.term_index(term).expect("Kv terms are closure terms"),
                eta.clone(),
            )),
            _ => None,
        })
        .collect()
}

fn witness_tuples(profile: &ModalProfile, closure: &Closure, k_size: usize) -> Vec<Vec<usize>> {
    let count = positive_kv_literals(profile, closure).len();
    let mut out = Vec::new();
    let mut tuple = vec![0usize; count];
    loop {
        out.push(tuple.clone());
        // Lexicographic successor over base k_size.
        let mut pos = count;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < k_size {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Witness tuples are interchangeable under coordinate permutations, so only
/// orbit representatives (restricted-growth strings) need solving. The
/// lexicographically least feasible tuple is always canonical.
fn is_canonical_tuple(tuple: &[usize]) -> bool {
    let mut max_seen: Option<usize> = None;
    for &k in tuple {
        let bound = max_seen.map_or(0, |m| m + 1);
        if k > bound {
            return false;
        }
        max_seen = Some(max_seen.map_or(k, |m| m.max(k)));
    }
    true
}

fn assemble_system(
    closure: &Closure,
    candidates: &[TypeCandidate],
    vars: &FcVariables,
    profile: &ModalProfile,
    witness_tuple: &[usize],
    k_size: usize,
) -> LinearSystem {
    let mut sys = LinearSystem::new(vars.column_names(), true);
    let columns = &vars.columns;

    // Normalization: total mass one.
    sys.push(
        columns.iter().enumerate().map(|(c, _)| (c, rat_one())),
        Relation::Eq,
        rat_one(),
    );

    // Columns whose type contains a formula.
    let columns_with_body = |body: &Formula| -> Vec<usize> {
        let member: Vec<bool> = candidates
            .iter()
            .map(|ty| ty.contains(closure, body))
            .collect();
        columns
            .iter()
            .enumerate()
            .filter(|&(_, &(t, _))| member[t])
            .map(|(c, _)| c)
            .collect()
    };
    // Columns whose assignment sends the term to the coordinate.
    let columns_on_fiber = |term_ix: usize, coord: usize| -> Vec<usize> {
        columns
            .iter()
            .enumerate()
            .filter(|&(_, &(t, f))| vars.assignments[t][f].coord_of(term_ix) == coord)
            .map(|(c, _)| c)
            .collect()
    };

    let mut kv_witness = witness_tuple.iter();
    for &(ix, positive) in &profile.literals {
        match &closure.core()[ix] {
            Formula::K(_, theta, body) => {
                let cols = columns_with_body(body);
                let coeffs = cols.iter().map(|&c| (c, rat_one()));
                if positive {
                    sys.push(coeffs, Relation::Ge, theta.clone());
                } else {
                    sys.push_lt(coeffs, theta.clone());
                }
            }
            Formula::Kv(_, eta, term) => {
                let term_ix = closure.term_index(term).expect("closure term");
                if positive {
                    let &coord = kv_witness.next().expect("one witness per positive Kv");
                    let cols = columns_on_fiber(term_ix, coord);
                    sys.push(
                        cols.iter().map(|&c| (c, rat_one())),
                        Relation::Ge,
                        eta.clone(),
                    );
                } else {
                    for coord in 0..k_size {
                        let cols = columns_on_fiber(term_ix, coord);
                        sys.push_lt(cols.iter().map(|&c| (c, rat_one())), eta.clone());
                    }
                }
            }
            _ => unreachable!("modal profiles contain only modal literals"),
        }
    }
    sys
}

/// Solves FC(Gamma, S, i): the first disjunct (deterministic witness order,
/// symmetric duplicates solved once) whose mixed system is feasible, with a
/// normalized solution; `None` when every disjunct is infeasible.
pub fn fc_feasible(
    closure: &Closure,
    gamma: TypeCandidate,
    candidates: &[TypeCandidate],
    agent: Agent,
    k_size: usize,
) -> Result<Option<FcSolution>, TypespaceError> {
    let vars = fc_variable_space(closure, candidates, k_size)?;
    let profile = modal_profile(closure, gamma, agent);
    for tuple in witness_tuples(&profile, closure, k_size) {
        if !is_canonical_tuple(&tuple) {
            continue;
        }
        let sys = assemble_system(closure, candidates, &vars, &profile, &tuple, k_size);
        if let Some(witness) = feasible_mixed(&sys) {
            debug_assert!(witness.assignment.iter().all(|v| !v.is_negative()));
            debug_assert_eq!(
                witness.assignment.iter().cloned().sum::<Rat>(),
                rat_one()
            );
            return Ok(Some(FcSolution {
                values: witness.assignment,
            }));
        }
    }
    Ok(None)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::syntax::Term;
    use crate::typespace::{enumerate_types, TypeLimits};

    fn kv_seed() -> Formula {
        Formula::kv(Agent::new(1), rat(3, 5), Term::new("t"))
    }

    fn types_of(closure: &Closure) -> Vec<TypeCandidate> {
        enumerate_types(closure, &TypeLimits::default()).unwrap()
    }

    #[test]
    fn profile_filters_by_agent() {
        let seed = Formula::and(
            Formula::and(
                Formula::k(Agent::new(1), rat(1, 2), Formula::atom("p")),
                Formula::not(kv_seed()),
            ),
            Formula::k(Agent::new(2), rat(1, 1), Formula::atom("q")),
        );
        let closure = seed.finite_closure();
        let ty = types_of(&closure)
            .into_iter()
            .find(|ty| ty.contains(&closure, &seed))
            .expect("seed type exists");
        let profile = modal_profile(&closure, ty, Agent::new(1));
        let formulas: Vec<String> = profile
            .formulas(&closure)
            .iter()
            .map(crate::syntax::print)
            .collect();
        assert_eq!(formulas, vec!["K_1^{1/2}p", "~Kv_1^{3/5}(t)"]);

        let profile2 = modal_profile(&closure, ty, Agent::new(2));
        assert_eq!(profile2.literals.len(), 1);
    }

    #[test]
    fn empty_profile_for_uninvolved_agent() {
        let closure = Formula::atom("p").finite_closure();
        let ty = types_of(&closure)[0];
        assert!(modal_profile(&closure, ty, Agent::new(1)).is_empty());
    }

    #[test]
    fn equal_literals_give_equal_profiles() {
        let seed = Formula::and(
            Formula::k(Agent::new(1), rat(1, 2), Formula::atom("p")),
            Formula::atom("q"),
        );
        let closure = seed.finite_closure();
        let types = types_of(&closure);
        let k = Formula::k(Agent::new(1), rat(1, 2), Formula::atom("p"));
        let same: Vec<_> = types
            .iter()
            .filter(|ty| ty.contains(&closure, &k))
            .collect();
        assert!(same.len() >= 2, "q varies independently");
        for pair in same.windows(2) {
            assert_eq!(
                modal_profile(&closure, *pair[0], Agent::new(1)),
                modal_profile(&closure, *pair[1], Agent::new(1))
            );
        }
    }

    #[test]
    fn positive_kv_expands_per_witness_coordinate() {
        let closure = kv_seed().finite_closure();
        let types = types_of(&closure);
        let pos = types
            .iter()
            .copied()
            .find(|ty| ty.contains(&closure, &kv_seed()))
            .unwrap();
        let systems = build_fc(&closure, pos, &types, Agent::new(1), 2).unwrap();
        assert_eq!(systems.len(), 2, "one disjunct per witness coordinate");
        for sys in &systems {
            assert!(sys.nonneg);
            // Normalization plus the single locking row.
            assert_eq!(sys.rows.len(), 2);
            assert_eq!(sys.rows[0].relation, Relation::Eq);
            assert_eq!(sys.rows[1].relation, Relation::Ge);
            assert_eq!(sys.rows[1].rhs, rat(3, 5));
        }
    }

    #[test]
    fn negative_kv_with_one_coordinate_is_infeasible() {
        let closure = kv_seed().finite_closure();
        let types = types_of(&closure);
        let neg = types
            .iter()
            .copied()
            .find(|ty| !ty.contains(&closure, &kv_seed()))
            .unwrap();
        let systems = build_fc(&closure, neg, &types, Agent::new(1), 1).unwrap();
        assert_eq!(systems.len(), 1);
        assert!(fc_feasible(&closure, neg, &types, Agent::new(1), 1)
            .unwrap()
            .is_none());
    }

    #[test]
    fn negative_kv_with_two_coordinates_splits_mass() {
        let closure = kv_seed().finite_closure();
        let types = types_of(&closure);
        let neg = types
            .iter()
            .copied()
            .find(|ty| !ty.contains(&closure, &kv_seed()))
            .unwrap();
        let solution = fc_feasible(&closure, neg, &types, Agent::new(1), 2)
            .unwrap()
            .expect("mass splits below 3/5 across two coordinates");
        let sum: Rat = solution.values.iter().cloned().sum();
        assert_eq!(sum, rat(1, 1));
    }

    #[test]
    fn empty_profile_yields_the_bare_simplex() {
        let closure = Formula::atom("p").finite_closure();
        let types = types_of(&closure);
        let systems = build_fc(&closure, types[0], &types, Agent::new(1), 1).unwrap();
        assert_eq!(systems.len(), 1);
        assert_eq!(systems[0].rows.len(), 1);
        assert!(fc_feasible(&closure, types[0], &types, Agent::new(1), 1)
            .unwrap()
            .is_some());
    }

    #[test]
    fn forced_complementary_knowledge_is_infeasible() {
        // Manually admit a type containing K^3/4 p and K^3/4 ~p, bypassing
        // coherence, and watch FC reject it.
        let seed = Formula::and(
            Formula::k(Agent::new(1), rat(3, 4), Formula::atom("p")),
            Formula::k(Agent::new(1), rat(3, 4), Formula::not(Formula::atom("p"))),
        );
        let closure = seed.finite_closure();
        let k_pos = closure
            .core_index(&Formula::k(Agent::new(1), rat(3, 4), Formula::atom("p")))
            .unwrap();
        let k_neg = closure
            .core_index(&Formula::k(
                Agent::new(1),
                rat(3, 4),
                Formula::not(Formula::atom("p")),
            ))
            .unwrap();
        let p_ix = closure.core_index(&Formula::atom("p")).unwrap();
        let forced = TypeCandidate {
            mask: 1 << k_pos | 1 << k_neg | 1 << p_ix,
        };
        // Candidate set: the forced type plus the two coherent p-types.
        let mut candidates = enumerate_types(&closure, &TypeLimits::default()).unwrap();
        candidates.push(forced);
        candidates.sort();
        candidates.dedup();
        assert!(fc_feasible(&closure, forced, &candidates, Agent::new(1), 1)
            .unwrap()
            .is_none());
    }

    #[test]
    fn profile_invariance_gives_identical_systems() {
        let seed = Formula::and(
            Formula::k(Agent::new(1), rat(1, 2), Formula::atom("p")),
            Formula::atom("q"),
        );
        let closure = seed.finite_closure();
        let types = types_of(&closure);
        let k = Formula::k(Agent::new(1), rat(1, 2), Formula::atom("p"));
        let same: Vec<TypeCandidate> = types
            .iter()
            .copied()
            .filter(|ty| ty.contains(&closure, &k))
            .collect();
        assert!(same.len() >= 2);
        let a = build_fc(&closure, same[0], &types, Agent::new(1), 1).unwrap();
        let b = build_fc(&closure, same[1], &types, Agent::new(1), 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_tuples_are_restricted_growth() {
        assert!(is_canonical_tuple(&[]));
        assert!(is_canonical_tuple(&[0]));
        assert!(!is_canonical_tuple(&[1]));
        assert!(is_canonical_tuple(&[0, 0]));
        assert!(is_canonical_tuple(&[0, 1]));
        assert!(!is_canonical_tuple(&[0, 2]));
        assert!(!is_canonical_tuple(&[1, 0]));
        assert!(is_canonical_tuple(&[0, 1, 0]));
        assert!(is_canonical_tuple(&[0, 1, 2]));
        assert!(!is_canonical_tuple(&[0, 1, 3]));
    }
}
