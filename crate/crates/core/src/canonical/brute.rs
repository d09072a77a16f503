//! Exhaustive bounded model search: the independent oracle the acceptance
//! suite holds the decision pipeline against.
//!
//! Models are drawn from a finite grid: up to four worlds, up to three
//! domain values, and distributions whose masses have denominators up to
//! three. For formulas of modal depth at most one, satisfaction at the
//! designated world depends on the measures only through that world's rows,
//! so one distribution per agent (installed at every world) is a complete
//! search; deeper formulas fall back to the full per-world product under a
//! search-size guard.

use crate::model::{PointedModel, ProbModel};
use crate::rat::{rat, rat_one, rat_zero, Rat};
use crate::syntax::Formula;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteBounds {
    pub max_worlds: usize,
    pub max_domain: usize,
    pub max_denominator: i64,
}

impl Default for BruteBounds {
    fn default() -> Self {
        BruteBounds {
            max_worlds: 3,
            max_domain: 3,
            max_denominator: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteError {
    #[error("search bounds too large: {0}")]
    BoundsTooLarge(String),
}

const HARD_MAX_WORLDS: usize = 4;
const HARD_MAX_DOMAIN: usize = 3;
const HARD_MAX_DENOMINATOR: i64 = 3;
const SEARCH_CAP: u128 = 5_000_000;

/// All grid masses a/b with 1 <= b <= max_denominator, 0 <= a <= b,
/// deduplicated, ascending.
fn mass_grid(max_denominator: i64) -> Vec<Rat> {
    let mut grid: Vec<Rat> = Vec::new();
    for b in 1..=max_denominator {
        for a in 0..=b {
            grid.push(rat(a, b));
        }
    }
    grid.sort();
    grid.dedup();
    grid
}

/// All distributions over `n` worlds with masses from the grid, summing to
/// one, in ascending lexicographic order.
fn distributions(n: usize, grid: &[Rat]) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    let mut current: Vec<Rat> = Vec::with_capacity(n);
    fn recurse(
        n: usize,
        grid: &[Rat],
        remaining: Rat,
        current: &mut Vec<Rat>,
        out: &mut Vec<Vec<Rat>>,
    ) {
        if current.len() == n - 1 {
            if grid.contains(&remaining) {
                current.push(remaining);
                out.push(current.clone());
                current.pop();
            }
            return;
        }
        for mass in grid {
            if *mass > remaining {
                break;
            }
            current.push(mass.clone());
            recurse(n, grid, &remaining - mass, current, out);
            current.pop();
        }
    }
    recurse(n, grid, rat_one(), &mut current, &mut out);
    out
}

/// Exhaustive search over the bounded model grid; the first satisfying
/// pointed model in enumeration order (worlds, then domain size, then
/// structure, then measures), or `None` when the grid holds no model.
pub fn brute_force_sat(
    chi: &Formula,
    bounds: &BruteBounds,
) -> Result<Option<PointedModel>, BruteError> {
    if bounds.max_worlds > HARD_MAX_WORLDS
        || bounds.max_domain > HARD_MAX_DOMAIN
        || bounds.max_denominator > HARD_MAX_DENOMINATOR
        || bounds.max_worlds == 0
        || bounds.max_domain == 0
        || bounds.max_denominator == 0
    {
        return Err(BruteError::BoundsTooLarge(format!(
            "requested {bounds:?}, hard limits are {HARD_MAX_WORLDS} worlds, \
             {HARD_MAX_DOMAIN} values, denominator {HARD_MAX_DENOMINATOR}"
        )));
    }
    let atoms = chi.atoms();
    let terms = chi.terms();
    let agents = chi.agents();
    let grid = mass_grid(bounds.max_denominator);
    let shallow = chi.modal_depth() <= 1;

    for num_worlds in 1..=bounds.max_worlds {
        for num_values in 1..=bounds.max_domain {
            let distros = distributions(num_worlds, &grid);
            // Measure slots: one per agent when the formula is shallow, one
            // per (agent, world) otherwise.
            let slots = if shallow || agents.is_empty() {
                agents.len()
            } else {
                agents.len() * num_worlds
            };
            let measure_combos = (distros.len() as u128)
                .checked_pow(slots as u32)
                .ok_or_else(|| BruteError::BoundsTooLarge("measure space overflow".into()))?;
            let structures = (2u128)
                .checked_pow((num_worlds * atoms.len()) as u32)
                .and_then(|v| {
                    v.checked_mul((num_values as u128).pow((num_worlds * terms.len()) as u32))
                })
                .ok_or_else(|| BruteError::BoundsTooLarge("structure space overflow".into()))?;
            if structures.saturating_mul(measure_combos) > SEARCH_CAP {
                return Err(BruteError::BoundsTooLarge(format!(
                    "{structures} structures x {measure_combos} measure choices \
                     exceeds the search cap"
                )));
            }

            let worlds: Vec<String> = (1..=num_worlds).map(|i| format!("w{i}")).collect();
            let domain: Vec<String> = (1..=num_values).map(|i| format!("d{i}")).collect();

            let mut valuation_code = vec![0usize; num_worlds * atoms.len()];
            loop {
                let mut term_code = vec![0usize; num_worlds * terms.len()];
                loop {
                    let mut base = ProbModel::new(worlds.clone(), domain.clone());
                    for w in 0..num_worlds {
                        for (a, atom) in atoms.iter().enumerate() {
                            base.set_prop(w, atom.clone(), valuation_code[w * atoms.len() + a] == 1);
                        }
                        for (t, term) in terms.iter().enumerate() {
                            base.set_term_value(w, term.clone(), term_code[w * terms.len() + t]);
                        }
                    }
                    if let Some(found) = search_measures(chi, &base, &agents, &distros, shallow) {
                        return Ok(Some(found));
                    }
                    if !increment(&mut term_code, num_values) {
                        break;
                    }
                }
                if !increment(&mut valuation_code, 2) {
                    break;
                }
            }
        }
    }
    Ok(None)
}

/// Mixed-radix increment; false on wrap-around (enumeration done).
fn increment(code: &mut [usize], base: usize) -> bool {
    for digit in code.iter_mut() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}

fn search_measures(
    chi: &Formula,
    base: &ProbModel,
    agents: &[crate::syntax::Agent],
    distros: &[Vec<Rat>],
    shallow: bool,
) -> Option<PointedModel> {
    let num_worlds = base.num_worlds();
    if agents.is_empty() {
        return first_satisfying_world(chi, base.clone());
    }
    let slots = if shallow {
        agents.len()
    } else {
        agents.len() * num_worlds
    };
    let mut code = vec![0usize; slots];
    loop {
        let mut model = base.clone();
        for (a, &agent) in agents.iter().enumerate() {
            for w in 0..num_worlds {
                let slot = if shallow { a } else { a * num_worlds + w };
                let dist: Vec<(usize, Rat)> = distros[code[slot]]
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| **m != rat_zero())
                    .map(|(target, m)| (target, m.clone()))
                    .collect();
                model.set_measure(agent, w, dist);
            }
        }
        if let Some(found) = first_satisfying_world(chi, model) {
            return Some(found);
        }
        if !increment(&mut code, distros.len()) {
            return None;
        }
    }
}

fn first_satisfying_world(chi: &Formula, model: ProbModel) -> Option<PointedModel> {
    let extension = model.extension(chi).ok()?;
    extension
        .iter()
        .position(|&b| b)
        .map(|world| PointedModel { model, world })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Agent, Term};

    fn kv() -> Formula {
        Formula::kv(Agent::new(1), rat(3, 5), Term::new("t"))
    }

    #[test]
    fn positive_kv_hits_a_point_mass_world() {
        let found = brute_force_sat(&kv(), &BruteBounds::default())
            .unwrap()
            .expect("satisfiable");
        assert_eq!(found.model.num_worlds(), 1);
        assert_eq!(
            found.model.measure_row(Agent::new(1), 0).unwrap(),
            &vec![(0, rat(1, 1))]
        );
        assert!(found.model.satisfies(found.world, &kv()).unwrap());
    }

    #[test]
    fn negative_kv_needs_two_worlds_with_split_mass() {
        let neg = Formula::not(kv());
        let found = brute_force_sat(&neg, &BruteBounds::default())
            .unwrap()
            .expect("satisfiable by splitting mass");
        assert_eq!(found.model.num_worlds(), 2);
        assert!(found.model.satisfies(found.world, &neg).unwrap());
        let term = Term::new("t");
        for d in 0..found.model.domain().len() {
            let mass = found
                .model
                .fiber_mass(Agent::new(1), found.world, &term, d)
                .unwrap();
            assert!(mass < rat(3, 5));
        }
    }

    #[test]
    fn boolean_contradiction_finds_nothing() {
        let chi = Formula::and(Formula::atom("p"), Formula::not(Formula::atom("p")));
        assert!(brute_force_sat(&chi, &BruteBounds::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn oversized_bounds_rejected() {
        let bounds = BruteBounds {
            max_worlds: 5,
            ..BruteBounds::default()
        };
        assert!(matches!(
            brute_force_sat(&Formula::atom("p"), &bounds),
            Err(BruteError::BoundsTooLarge(_))
        ));
    }

    #[test]
    fn depth_two_formulas_use_the_full_product() {
        // K_1^{1/2} ~K_1^{1} p: needs measure rows that differ across worlds.
        let inner = Formula::not(Formula::k(Agent::new(1), rat_one(), Formula::atom("p")));
        let chi = Formula::k(Agent::new(1), rat(1, 2), inner);
        let bounds = BruteBounds {
            max_worlds: 2,
            max_domain: 1,
            max_denominator: 2,
        };
        let found = brute_force_sat(&chi, &bounds).unwrap().expect("satisfiable");
        assert!(found.model.satisfies(found.world, &chi).unwrap());
    }

    #[test]
    fn grid_distributions_all_sum_to_one() {
        let grid = mass_grid(3);
        for n in 1..=4 {
            let all = distributions(n, &grid);
            assert!(!all.is_empty());
            for d in &all {
                let sum: Rat = d.iter().cloned().sum();
                assert_eq!(sum, rat_one());
                assert!(d.iter().all(|m| grid.contains(m)));
            }
        }
        // Spot value: three worlds with denominator <= 3 gives 13 rows.
        assert_eq!(distributions(3, &grid).len(), 13);
    }
}
