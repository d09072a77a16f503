//! Type enumeration over a closure, assignment-configuration spaces, the
//! FC(Gamma, S, i) constraint systems, iterative elimination to the refined
//! type set, and emission of the blocking axioms for eliminated types.

mod assign;
mod elim;
mod fc;

pub use assign::{config_space, equality_classes, Assignment};
pub use elim::{
    emit_star_axioms, iterate_elimination, lindenbaum, EliminatedType, EliminationOutcome,
    EliminationTrace, Stage,
};
pub use fc::{build_fc, fc_feasible, fc_variable_space, modal_profile, FcSolution, FcVariables, ModalProfile};

use crate::rat::rat_zero;
use crate::syntax::{Closure, Formula};
use thiserror::Error;

/// A saturated subset of the closure: bit `k` set means core formula `k` is a
/// member, clear means its single negation is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeCandidate {
    pub mask: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypespaceError {
    #[error("closure too large: {core} core formulas exceed the cap of {cap}")]
    ClosureTooLarge { core: usize, cap: usize },
    #[error("type space exceeds the cap of {cap} candidates")]
    TypeCapExceeded { cap: usize },
    #[error("{classes} equality classes cannot be injected into {k_size} coordinates")]
    TooFewCoordinates { classes: usize, k_size: usize },
    #[error("formula `{0}` is not a member of the closure")]
    FormulaNotInClosure(String),
}

/// Enumeration caps; the construction is exponential, so fail loudly.
#[derive(Debug, Clone, Copy)]
pub struct TypeLimits {
    pub closure_cap: usize,
    pub type_cap: usize,
}

impl Default for TypeLimits {
    fn default() -> Self {
        TypeLimits {
            closure_cap: 40,
            type_cap: 1 << 20,
        }
    }
}

impl TypeCandidate {
    pub fn contains_core(&self, core_ix: usize) -> bool {
        self.mask >> core_ix & 1 == 1
    }

    /// Membership of an arbitrary closure member in this type: positive core
    /// formulas by their bit, negations by the flipped bit, compound members
    /// by bottom-up evaluation (which coincides with the stored bit for
    /// coherent types).
    pub fn contains(&self, closure: &Closure, f: &Formula) -> bool {
        match f {
            Formula::Not(inner) => !self.contains(closure, inner),
            Formula::Imp(a, b) => !self.contains(closure, a) || self.contains(closure, b),
            _ => {
                let ix = closure
                    .core_index(f)
                    .unwrap_or_else(|| panic!("`{f}` is not in the closure"));
                self.contains_core(ix)
            }
        }
    }

    /// The type's members, one per core formula.
    pub fn members(&self, closure: &Closure) -> Vec<Formula> {
        closure
            .core()
            .iter()
            .enumerate()
            .map(|(ix, f)| {
                if self.contains_core(ix) {
                    f.clone()
                } else {
                    Formula::not(f.clone())
                }
            })
            .collect()
    }
}

/// Truth-functional constraints a coherent saturated type must satisfy, over
/// core formula indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CoherenceRule {
    ForcedTrue(usize),
    /// value(a) implies value(b)
    Implies(usize, usize),
    /// not both value(a) and value(b)
    NotBoth(usize, usize),
    /// value(a) and value(b) imply value(c)
    AndImplies(usize, usize, usize),
}

fn coherence_rules(closure: &Closure) -> Vec<CoherenceRule> {
    use CoherenceRule::*;
    let mut rules = Vec::new();
    let core = closure.core();
    let eq_ix = |t: &crate::syntax::Term, s: &crate::syntax::Term| {
        closure
            .core_index(&Formula::eq(t.clone(), s.clone()))
            .expect("closures contain all term equalities")
    };

    // Equality congruence: reflexivity forced, symmetry both ways,
    // transitivity over every term triple.
    for t in closure.terms() {
        rules.push(ForcedTrue(eq_ix(t, t)));
        for s in closure.terms() {
            if t != s {
                rules.push(Implies(eq_ix(t, s), eq_ix(s, t)));
            }
            for u in closure.terms() {
                if t != s || s != u {
                    rules.push(AndImplies(eq_ix(t, s), eq_ix(s, u), eq_ix(t, u)));
                }
            }
        }
    }

    // Modal literal constraints internal to the closure.
    for (i, f) in core.iter().enumerate() {
        match f {
            Formula::K(agent, theta, body) => {
                if theta == &rat_zero() {
                    rules.push(ForcedTrue(i));
                }
                for (j, g) in core.iter().enumerate() {
                    let Formula::K(agent2, theta2, body2) = g else {
                        continue;
                    };
                    if agent != agent2 {
                        continue;
                    }
                    // Threshold monotonicity on the same body.
                    if i != j && body == body2 && theta2 <= theta {
                        rules.push(Implies(i, j));
                    }
                    // Complementary exclusion: bodies negate each other.
                    if **body2 == Formula::not((**body).clone())
                        && theta + theta2 > crate::rat::rat_one()
                    {
                        rules.push(NotBoth(i, j));
                    }
                }
            }
            Formula::Kv(agent, eta, term) => {
                for (j, g) in core.iter().enumerate() {
                    let Formula::Kv(agent2, eta2, term2) = g else {
                        continue;
                    };
                    if i != j && agent == agent2 && term == term2 && eta2 <= eta {
                        rules.push(Implies(i, j));
                    }
                }
            }
            _ => {}
        }
    }
    rules
}

/// The truth value of `f` under an assignment to the non-compound core
/// formulas. `None` while some needed input is still unassigned.
fn eval_formula(closure: &Closure, values: &[Option<bool>], f: &Formula) -> Option<bool> {
    match f {
        Formula::Not(inner) => eval_formula(closure, values, inner).map(|b| !b),
        Formula::Imp(a, b) => {
            let va = eval_formula(closure, values, a)?;
            let vb = eval_formula(closure, values, b)?;
            Some(!va || vb)
        }
        _ => values[closure.core_index(f).expect("subformula closure")],
    }
}

/// All saturated, coherent types over the closure, in ascending bitmask
/// order. Coherence: Boolean-skeleton satisfiability, equality congruence,
/// and the closure-internal literal instances of threshold monotonicity,
/// complementary exclusion, zero-threshold knowledge, and knowing-value
/// monotonicity.
pub fn enumerate_types(
    closure: &Closure,
    limits: &TypeLimits,
) -> Result<Vec<TypeCandidate>, TypespaceError> {
    let core = closure.core();
    if core.len() > limits.closure_cap {
        return Err(TypespaceError::ClosureTooLarge {
            core: core.len(),
            cap: limits.closure_cap,
        });
    }

    // Compound (implication) members are determined by the rest; everything
    // else is a free choice.
    let free: Vec<usize> = (0..core.len())
        .filter(|&i| !matches!(core[i], Formula::Imp(..)))
        .collect();
    let rules = coherence_rules(closure);

    let mut out = Vec::new();
    let mut values: Vec<Option<bool>> = vec![None; core.len()];
    dfs(
        closure,
        &free,
        &rules,
        &mut values,
        0,
        &mut out,
        limits.type_cap,
    )?;
    out.sort();
    Ok(out)
}

fn dfs(
    closure: &Closure,
    free: &[usize],
    rules: &[CoherenceRule],
    values: &mut Vec<Option<bool>>,
    depth: usize,
    out: &mut Vec<TypeCandidate>,
    type_cap: usize,
) -> Result<(), TypespaceError> {
    if depth == free.len() {
        // Fill in the determined compound members and emit.
        let core = closure.core();
        let mut mask = 0u64;
        for (i, f) in core.iter().enumerate() {
            let value = match values[i] {
                Some(v) => v,
                None => eval_formula(closure, values, f).expect("free leaves assigned"),
            };
            if value {
                mask |= 1 << i;
            }
        }
        if out.len() >= type_cap {
            return Err(TypespaceError::TypeCapExceeded { cap: type_cap });
        }
        out.push(TypeCandidate { mask });
        return Ok(());
    }
    let ix = free[depth];
    'branch: for value in [false, true] {
        values[ix] = Some(value);
        for rule in rules {
            if violated(rule, values) {
                continue 'branch;
            }
        }
        dfs(closure, free, rules, values, depth + 1, out, type_cap)?;
    }
    values[ix] = None;
    Ok(())
}

fn violated(rule: &CoherenceRule, values: &[Option<bool>]) -> bool {
    match *rule {
        CoherenceRule::ForcedTrue(a) => values[a] == Some(false),
        CoherenceRule::Implies(a, b) => values[a] == Some(true) && values[b] == Some(false),
        CoherenceRule::NotBoth(a, b) => values[a] == Some(true) && values[b] == Some(true),
        CoherenceRule::AndImplies(a, b, c) => {
            values[a] == Some(true) && values[b] == Some(true) && values[c] == Some(false)
        }
    }
}
