//! Finite closure of a seed formula: closed under subformulas and single
//! negations, with all term equalities over its term set.
//!
//! Members are normalized so that a double negation never appears: the
//! closure stores the non-negation "core" formulas, and every member is
//! either a core formula or the single negation of one. Bitmask indices over
//! the core are stable across runs (core formulas sorted lexicographically
//! by printed form).

use super::{print, Agent, Formula, Term};
use crate::rat::Rat;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    seed: Formula,
    /// Non-negation members, sorted lexicographically by printed form.
    core: Vec<Formula>,
    /// All members: each core formula and its single negation.
    members: Vec<Formula>,
    terms: Vec<Term>,
    thresholds: Vec<Rat>,
    agents: Vec<Agent>,
    atoms: Vec<String>,
}

/// Rebuilds a formula through the normalizing constructors, collapsing any
/// double negations introduced by direct enum construction.
pub(crate) fn normalize(f: &Formula) -> Formula {
    match f {
        Formula::Atom(p) => Formula::atom(p.clone()),
        Formula::Eq(t, s) => Formula::eq(t.clone(), s.clone()),
        Formula::Not(g) => Formula::not(normalize(g)),
        Formula::Imp(a, b) => Formula::imp(normalize(a), normalize(b)),
        Formula::K(i, theta, body) => Formula::k(*i, theta.clone(), normalize(body)),
        Formula::Kv(i, eta, t) => Formula::kv(*i, eta.clone(), t.clone()),
    }
}

/// Strips negations down to the non-negation core, returning the polarity:
/// `true` when the formula is the core itself, `false` when it is its single
/// negation.
fn strip_polarity(f: &Formula) -> (&Formula, bool) {
    match f {
        Formula::Not(g) => (g, false),
        _ => (f, true),
    }
}

impl Formula {
    /// The minimal finite closure containing this formula.
    pub fn finite_closure(&self) -> Closure {
        let seed = normalize(self);
        let mut core: BTreeSet<Formula> = BTreeSet::new();

        let mut pending: Vec<Formula> = vec![seed.clone()];
        while let Some(f) = pending.pop() {
            let (positive, _) = strip_polarity(&f);
            if core.insert(positive.clone()) {
                for child in positive.children() {
                    pending.push(child.clone());
                }
            }
        }

        // Close under term equalities until nothing new appears. Equalities
        // introduce no new terms, so this stabilizes after one extra sweep.
        loop {
            let terms: BTreeSet<Term> = core.iter().flat_map(|f| f.terms()).collect();
            let mut added = false;
            for t in &terms {
                for s in &terms {
                    if core.insert(Formula::eq(t.clone(), s.clone())) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }

        let mut core: Vec<Formula> = core.into_iter().collect();
        core.sort_by_key(print);

        let mut members: Vec<Formula> = core
            .iter()
            .flat_map(|f| [f.clone(), Formula::not(f.clone())])
            .collect();
        members.sort_by_key(print);

        let mut terms: Vec<Term> = core.iter().flat_map(|f| f.terms()).collect();
        terms.sort();
        terms.dedup();

        let mut thresholds: Vec<Rat> = core.iter().flat_map(|f| f.thresholds()).collect();
        thresholds.sort();
        thresholds.dedup();

        let mut agents: Vec<Agent> = core.iter().flat_map(|f| f.agents()).collect();
        agents.sort();
        agents.dedup();

        let mut atoms: Vec<String> = core.iter().flat_map(|f| f.atoms()).collect();
        atoms.sort();
        atoms.dedup();

        Closure {
            seed,
            core,
            members,
            terms,
            thresholds,
            agents,
            atoms,
        }
    }
}

impl Closure {
    pub fn seed(&self) -> &Formula {
        &self.seed
    }

    /// Non-negation members in bitmask-index order.
    pub fn core(&self) -> &[Formula] {
        &self.core
    }

    /// All members (core formulas and their single negations), in
    /// lexicographic print order.
    pub fn members(&self) -> &[Formula] {
        &self.members
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn thresholds(&self) -> &[Rat] {
        &self.thresholds
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn core_index(&self, f: &Formula) -> Option<usize> {
        self.core.binary_search_by_key(&print(f), print).ok()
    }

    pub fn term_index(&self, t: &Term) -> Option<usize> {
        self.terms.binary_search(t).ok()
    }

    /// Resolves a formula to its core index and polarity, normalizing double
    /// negations. Returns `None` when the formula is not a member.
    pub fn polarity_of(&self, f: &Formula) -> Option<(usize, bool)> {
        let normalized = normalize(f);
        let (positive, polarity) = strip_polarity(&normalized);
        self.core_index(positive).map(|ix| (ix, polarity))
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.polarity_of(f).is_some()
    }
}
