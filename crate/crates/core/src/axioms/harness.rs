//! Randomized validity harness: every schema instance must hold at every
//! world of every sampled model. Counterexamples are shrunk by removing
//! worlds (renormalizing the remaining mass) and merging domain values.

use super::{instantiate, SchemaId, SchemaParams, TAUT_TEMPLATE_COUNT};
use crate::model::random::{
    random_formula, random_high_threshold, random_model, random_unit_threshold, ModelVocab,
};
use crate::model::ProbModel;
use crate::rat::{rat_one, Rat};
use crate::syntax::{print, Formula, Term};
use num_traits::Zero;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub schema: String,
    pub instance: Formula,
    pub world: String,
    pub model: ProbModel,
}

#[derive(Debug, Clone, Default)]
pub struct SchemaReport {
    pub checks: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone)]
pub struct SoundnessReport {
    pub seed: u64,
    pub trials: usize,
    pub schemas: BTreeMap<String, SchemaReport>,
}

impl SoundnessReport {
    pub fn total_counterexamples(&self) -> usize {
        self.schemas.values().map(|r| r.counterexamples.len()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let schemas: BTreeMap<String, serde_json::Value> = self
            .schemas
            .iter()
            .map(|(name, report)| {
                let counterexamples: Vec<serde_json::Value> = report
                    .counterexamples
                    .iter()
                    .map(|ce| {
                        serde_json::json!({
                            "formula": print(&ce.instance),
                            "world": ce.world,
                            "model": serde_json::from_str::<serde_json::Value>(
                                &ce.model.to_json_string()
                            )
                            .expect("model json"),
                        })
                    })
                    .collect();
                (
                    name.clone(),
                    serde_json::json!({
                        "checks": report.checks,
                        "counterexamples": counterexamples,
                    }),
                )
            })
            .collect();
        serde_json::json!({
            "seed": self.seed,
            "trials": self.trials,
            "schemas": schemas,
        })
    }
}

fn harness_vocab() -> ModelVocab {
    ModelVocab::new(["p", "q"], ["t", "s", "u"], [1, 2])
}

/// Independent per-trial generator split from the suite seed.
fn trial_rng(seed: u64, lane: u64, trial: u64) -> ChaCha8Rng {
    let mixed = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .rotate_left(17)
        .wrapping_add(lane.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(trial);
    ChaCha8Rng::seed_from_u64(mixed)
}

fn random_params(rng: &mut ChaCha8Rng, schema: SchemaId, vocab: &ModelVocab) -> SchemaParams {
    let agent = vocab.agents[rng.random_range(0..vocab.agents.len())];
    let pick_term = |rng: &mut ChaCha8Rng| -> Term {
        vocab.terms[rng.random_range(0..vocab.terms.len())].clone()
    };
    let terms = vec![pick_term(rng), pick_term(rng), pick_term(rng)];
    let formulas = vec![
        random_formula(rng, vocab, 2),
        random_formula(rng, vocab, 2),
    ];
    let thresholds: Vec<Rat> = match schema {
        SchemaId::KMon => {
            let (a, b) = (random_unit_threshold(rng), random_unit_threshold(rng));
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            vec![lo, hi]
        }
        SchemaId::KImp => vec![random_unit_threshold(rng), random_unit_threshold(rng)],
        SchemaId::KExcl => loop {
            let (a, b) = (random_unit_threshold(rng), random_unit_threshold(rng));
            if &a + &b > rat_one() {
                break vec![a, b];
            }
        },
        SchemaId::KAdd1 => loop {
            let (a, b) = (random_unit_threshold(rng), random_unit_threshold(rng));
            if &a + &b <= rat_one() {
                break vec![a, b];
            }
        },
        SchemaId::KvMon => {
            let (a, b) = (random_high_threshold(rng), random_high_threshold(rng));
            let (zeta, eta) = if a <= b { (a, b) } else { (b, a) };
            vec![eta, zeta]
        }
        SchemaId::KvEqSub1 => vec![random_high_threshold(rng)],
        SchemaId::KEqSub1 | SchemaId::KSub1 | SchemaId::NecK => {
            vec![random_unit_threshold(rng)]
        }
        _ => vec![],
    };
    SchemaParams {
        agent: Some(agent),
        terms,
        thresholds,
        formulas,
        variant: rng.random_range(0..TAUT_TEMPLATE_COUNT),
    }
}

/// Runs `trials` random (model, instance, world) checks for every axiom
/// schema. Expected outcome: zero counterexamples everywhere.
pub fn soundness_suite(seed: u64, trials: usize) -> SoundnessReport {
    assert!(trials >= 1, "at least one trial required");
    let vocab = harness_vocab();
    let mut schemas = BTreeMap::new();
    for (lane, &schema) in SchemaId::AXIOMS.iter().enumerate() {
        let mut report = SchemaReport::default();
        for trial in 0..trials {
            let mut rng = trial_rng(seed, lane as u64, trial as u64);
            let params = random_params(&mut rng, schema, &vocab);
            let instance = instantiate(schema, &params).expect("generated params obey side conditions");
            let model = random_model(&mut rng, &vocab);
            let world = rng.random_range(0..model.num_worlds());
            report.checks += 1;
            if !model.satisfies(world, &instance).expect("total vocabulary") {
                let world_name = model.worlds()[world].clone();
                let (model, world_name) = shrink_counterexample(model, world_name, &instance);
                report.counterexamples.push(Counterexample {
                    schema: schema.name().to_string(),
                    instance,
                    world: world_name,
                    model,
                });
            }
        }
        schemas.insert(schema.name().to_string(), report);
    }
    SoundnessReport {
        seed,
        trials,
        schemas,
    }
}

/// Deliberately corrupted schemata. None of these are valid; the harness must
/// find a counterexample for each, confirming it has teeth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativeControl {
    /// K_i^theta phi -> phi
    Factivity,
    /// K_i^theta phi -> K_i^theta K_i^theta phi
    PositiveIntrospection,
    /// Kv_i^eta(t) -> K_i^theta Kv_i^eta(t)
    KvIntrospection,
    /// Kv_i^eta(t) -> Kv_i^zeta(t) with zeta > eta
    KvMonUpward,
}

impl NegativeControl {
    pub const ALL: [NegativeControl; 4] = [
        NegativeControl::Factivity,
        NegativeControl::PositiveIntrospection,
        NegativeControl::KvIntrospection,
        NegativeControl::KvMonUpward,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NegativeControl::Factivity => "Factivity",
            NegativeControl::PositiveIntrospection => "PositiveIntrospection",
            NegativeControl::KvIntrospection => "KvIntrospection",
            NegativeControl::KvMonUpward => "KvMonUpward",
        }
    }

    fn instantiate(&self, rng: &mut ChaCha8Rng, vocab: &ModelVocab) -> Formula {
        let agent = vocab.agents[rng.random_range(0..vocab.agents.len())];
        let term = vocab.terms[rng.random_range(0..vocab.terms.len())].clone();
        match self {
            NegativeControl::Factivity => {
                let phi = random_formula(rng, vocab, 2);
                let theta = random_unit_threshold(rng);
                Formula::imp(Formula::k(agent, theta, phi.clone()), phi)
            }
            NegativeControl::PositiveIntrospection => {
                let phi = random_formula(rng, vocab, 1);
                let theta = random_unit_threshold(rng);
                let k = Formula::k(agent, theta.clone(), phi);
                Formula::imp(k.clone(), Formula::k(agent, theta, k))
            }
            NegativeControl::KvIntrospection => {
                let eta = random_high_threshold(rng);
                let theta = random_unit_threshold(rng);
                let kv = Formula::kv(agent, eta, term);
                Formula::imp(kv.clone(), Formula::k(agent, theta, kv))
            }
            NegativeControl::KvMonUpward => loop {
                let (a, b) = (random_high_threshold(rng), random_high_threshold(rng));
                if a == b {
                    continue;
                }
                let (eta, zeta) = if a < b { (a, b) } else { (b, a) };
                break Formula::imp(
                    Formula::kv(agent, eta, term.clone()),
                    Formula::kv(agent, zeta, term),
                );
            },
        }
    }
}

/// Runs the corrupted schemata; each should be caught within the trial
/// budget. The search stops at the first (shrunk) counterexample per control.
pub fn negative_control_suite(seed: u64, trials: usize) -> BTreeMap<String, SchemaReport> {
    assert!(trials >= 1, "at least one trial required");
    let vocab = harness_vocab();
    let mut out = BTreeMap::new();
    for (lane, control) in NegativeControl::ALL.iter().enumerate() {
        let mut report = SchemaReport::default();
        for trial in 0..trials {
            let mut rng = trial_rng(seed, 100 + lane as u64, trial as u64);
            let instance = control.instantiate(&mut rng, &vocab);
            let model = random_model(&mut rng, &vocab);
            let world = rng.random_range(0..model.num_worlds());
            report.checks += 1;
            if !model.satisfies(world, &instance).expect("total vocabulary") {
                let world_name = model.worlds()[world].clone();
                let (model, world_name) = shrink_counterexample(model, world_name, &instance);
                report.counterexamples.push(Counterexample {
                    schema: control.name().to_string(),
                    instance,
                    world: world_name,
                    model,
                });
                break;
            }
        }
        out.insert(control.name().to_string(), report);
    }
    out
}

/// Greedy minimization: drop worlds (renormalizing each agent's remaining
/// mass), then merge domain values, re-checking after every step.
pub fn shrink_counterexample(
    mut model: ProbModel,
    mut world: String,
    instance: &Formula,
) -> (ProbModel, String) {
    let still_fails = |m: &ProbModel, world: &str| -> bool {
        m.validate().is_ok()
            && m.world_index(world)
                .map(|w| m.satisfies(w, instance) == Ok(false))
                .unwrap_or(false)
    };
    loop {
        let mut improved = false;
        for victim in model.worlds().to_vec() {
            if victim == world {
                continue;
            }
            if let Some(smaller) = remove_world(&model, &victim) {
                if still_fails(&smaller, &world) {
                    model = smaller;
                    improved = true;
                }
            }
        }
        let domain = model.domain().to_vec();
        for keep in 0..domain.len() {
            for merge in (keep + 1)..domain.len() {
                if model.domain().len() <= 1 {
                    break;
                }
                if let Some(smaller) = merge_values(&model, &domain[keep], &domain[merge]) {
                    if still_fails(&smaller, &world) {
                        model = smaller;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    let w = model.world_index(&world).expect("world preserved");
    world = model.worlds()[w].clone();
    (model, world)
}

fn remove_world(model: &ProbModel, victim: &str) -> Option<ProbModel> {
    if model.num_worlds() <= 1 {
        return None;
    }
    let victim_ix = model.world_index(victim)?;
    let keep: Vec<usize> = (0..model.num_worlds()).filter(|&w| w != victim_ix).collect();
    let worlds: Vec<String> = keep.iter().map(|&w| model.worlds()[w].clone()).collect();
    let mut out = ProbModel::new(worlds, model.domain().to_vec());
    for (new_w, &old_w) in keep.iter().enumerate() {
        for prop in model.props_at(old_w) {
            out.set_prop(new_w, prop.clone(), true);
        }
        for (term, &value) in model.term_values_at(old_w) {
            out.set_term_value(new_w, term.clone(), value);
        }
    }
    for agent in model.agents().collect::<Vec<_>>() {
        for (new_w, &old_w) in keep.iter().enumerate() {
            let row = model.measure_row(agent, old_w)?;
            let remaining: Vec<(usize, Rat)> = row
                .iter()
                .filter(|&&(target, _)| target != victim_ix)
                .map(|&(target, ref mass)| {
                    (keep.iter().position(|&k| k == target).unwrap(), mass.clone())
                })
                .collect();
            let total: Rat = remaining.iter().map(|(_, m)| m.clone()).sum();
            if total.is_zero() {
                return None;
            }
            let renormalized = remaining
                .into_iter()
                .map(|(t, m)| (t, m / &total))
                .collect();
            out.set_measure(agent, new_w, renormalized);
        }
    }
    Some(out)
}

fn merge_values(model: &ProbModel, keep: &str, merge: &str) -> Option<ProbModel> {
    let keep_ix = model.value_index(keep)?;
    let merge_ix = model.value_index(merge)?;
    let survivors: Vec<usize> = (0..model.domain().len())
        .filter(|&d| d != merge_ix)
        .collect();
    let domain: Vec<String> = survivors
        .iter()
        .map(|&d| model.domain()[d].clone())
        .collect();
    let mut out = ProbModel::new(model.worlds().to_vec(), domain);
    for w in 0..model.num_worlds() {
        for prop in model.props_at(w) {
            out.set_prop(w, prop.clone(), true);
        }
        for (term, &value) in model.term_values_at(w) {
            let target = if value == merge_ix { keep_ix } else { value };
            let new_ix = survivors.iter().position(|&d| d == target).unwrap();
            out.set_term_value(w, term.clone(), new_ix);
        }
    }
    for agent in model.agents().collect::<Vec<_>>() {
        for w in 0..model.num_worlds() {
            out.set_measure(agent, w, model.measure_row(agent, w)?.clone());
        }
    }
    Some(out)
}
