//! Seeded random model generation for the validity harness and the semantic
//! property suites: 1-4 worlds, 1-3 values, distributions from normalized
//! integer weights bounded by 8. Small exact grids keep counterexamples
//! reproducible and easy to shrink.

use super::ProbModel;
use crate::rat::{rat, Rat};
use crate::syntax::{Agent, Term};
use num_bigint::BigInt;
use rand::RngExt;

/// The vocabulary a generated model must interpret.
#[derive(Debug, Clone)]
pub struct ModelVocab {
    pub atoms: Vec<String>,
    pub terms: Vec<Term>,
    pub agents: Vec<Agent>,
}

impl ModelVocab {
    pub fn new(
        atoms: impl IntoIterator<Item = &'static str>,
        terms: impl IntoIterator<Item = &'static str>,
        agents: impl IntoIterator<Item = u32>,
    ) -> Self {
        ModelVocab {
            atoms: atoms.into_iter().map(String::from).collect(),
            terms: terms.into_iter().map(Term::new).collect(),
            agents: agents.into_iter().map(Agent::new).collect(),
        }
    }
}

/// Random distribution over `n` worlds: integer weights in 0..=8 with at
/// least one strictly positive, normalized by their sum.
pub fn random_distribution(rng: &mut impl rand::Rng, n: usize) -> Vec<(usize, Rat)> {
    let mut weights = vec![0i64; n];
    loop {
        for w in weights.iter_mut() {
            *w = rng.random_range(0..=8i64);
        }
        if weights.iter().any(|&w| w > 0) {
            break;
        }
    }
    let total: i64 = weights.iter().sum();
    weights
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w > 0)
        .map(|(i, &w)| (i, Rat::new(BigInt::from(w), BigInt::from(total))))
        .collect()
}

/// Random model over the vocabulary: world count 1-4, domain size 1-3.
pub fn random_model(rng: &mut impl rand::Rng, vocab: &ModelVocab) -> ProbModel {
    let num_worlds = rng.random_range(1..=4usize);
    let num_values = rng.random_range(1..=3usize);
    let worlds = (1..=num_worlds).map(|i| format!("w{i}")).collect();
    let domain = (1..=num_values).map(|i| format!("d{i}")).collect();
    let mut model = ProbModel::new(worlds, domain);
    for w in 0..num_worlds {
        for atom in &vocab.atoms {
            model.set_prop(w, atom.clone(), rng.random_bool(0.5));
        }
        for term in &vocab.terms {
            let value = rng.random_range(0..num_values);
            model.set_term_value(w, term.clone(), value);
        }
    }
    for &agent in &vocab.agents {
        for w in 0..num_worlds {
            let dist = random_distribution(rng, num_worlds);
            model.set_measure(agent, w, dist);
        }
    }
    debug_assert!(model.validate().is_ok());
    model
}

/// Random placeholder formula of bounded modal/Boolean depth over the
/// vocabulary. Small depths suffice: counterexamples to unsound schemata
/// appear at tiny sizes.
pub fn random_formula(rng: &mut impl rand::Rng, vocab: &ModelVocab, depth: usize) -> Formula {
    let leaf = |rng: &mut dyn rand::Rng| -> Formula {
        let can_eq = !vocab.terms.is_empty();
        if can_eq && rng.random_bool(0.3) {
            let t = vocab.terms[rng.random_range(0..vocab.terms.len())].clone();
            let s = vocab.terms[rng.random_range(0..vocab.terms.len())].clone();
            Formula::eq(t, s)
        } else {
            let p = &vocab.atoms[rng.random_range(0..vocab.atoms.len())];
            Formula::atom(p.clone())
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let has_agents = !vocab.agents.is_empty();
    let has_terms = !vocab.terms.is_empty();
    match rng.random_range(0..10u32) {
        0 | 1 => leaf(rng),
        2 | 3 => Formula::not(random_formula(rng, vocab, depth - 1)),
        4 | 5 | 6 => Formula::imp(
            random_formula(rng, vocab, depth - 1),
            random_formula(rng, vocab, depth - 1),
        ),
        7 | 8 if has_agents => {
            let agent = vocab.agents[rng.random_range(0..vocab.agents.len())];
            Formula::k(
                agent,
                random_unit_threshold(rng),
                random_formula(rng, vocab, depth - 1),
            )
        }
        _ if has_agents && has_terms => {
            let agent = vocab.agents[rng.random_range(0..vocab.agents.len())];
            let term = vocab.terms[rng.random_range(0..vocab.terms.len())].clone();
            Formula::kv(agent, random_high_threshold(rng), term)
        }
        _ => leaf(rng),
    }
}

use crate::syntax::Formula;

/// Random threshold from the unit-interval grid with denominators up to 6.
pub fn random_unit_threshold(rng: &mut impl rand::Rng) -> Rat {
    let denom = rng.random_range(1..=6i64);
    let numer = rng.random_range(0..=denom);
    rat(numer, denom)
}

/// Random threshold from the (1/2, 1] grid with denominators up to 6.
pub fn random_high_threshold(rng: &mut impl rand::Rng) -> Rat {
    loop {
        let r = random_unit_threshold(rng);
        if crate::rat::in_high_interval(&r) {
            return r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_models_always_validate() {
        let vocab = ModelVocab::new(["p", "q"], ["t", "s"], [1, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = random_model(&mut rng, &vocab);
            assert!(m.validate().is_ok());
        }
    }

    #[test]
    fn distributions_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..50 {
                let d = random_distribution(&mut rng, n);
                let sum: Rat = d.iter().map(|(_, m)| m.clone()).sum();
                assert_eq!(sum, crate::rat::rat_one());
            }
        }
    }

    #[test]
    fn high_thresholds_stay_high() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let eta = random_high_threshold(&mut rng);
            assert!(crate::rat::in_high_interval(&eta));
        }
    }
}
