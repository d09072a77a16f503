//! Independent closure-fixpoint oracle: recompute finite closures by blind
//! fixpoint iteration over the closure conditions and compare against the
//! implementation, member for member.

use ptkv_core::syntax::{parse, print, Formula, Term};
use std::collections::BTreeSet;

/// Blind fixpoint: repeatedly add immediate subformulas, single negations
/// (normalized), and all term equalities, until nothing changes. Shares no
/// code with `finite_closure` beyond the AST itself.
fn closure_fixpoint_oracle(seed: &Formula) -> BTreeSet<String> {
    let mut members: BTreeSet<Formula> = BTreeSet::new();
    members.insert(seed.clone());
    loop {
        let mut additions: Vec<Formula> = Vec::new();
        for f in &members {
            for child in f.children() {
                additions.push(child.clone());
            }
            // Single negation, with the double negation collapsed.
            let negated = match f {
                Formula::Not(inner) => (**inner).clone(),
                other => Formula::Not(Box::new(other.clone())),
            };
            additions.push(negated);
        }
        let terms: BTreeSet<Term> = members.iter().flat_map(|f| f.terms()).collect();
        for t in &terms {
            for s in &terms {
                additions.push(Formula::Eq(t.clone(), s.clone()));
            }
        }
        let before = members.len();
        members.extend(additions);
        if members.len() == before {
            break;
        }
    }
    members.iter().map(print).collect()
}

fn assert_matches_oracle(text: &str) {
    let seed = parse(text).unwrap();
    let closure = seed.finite_closure();
    let implementation: BTreeSet<String> = closure.members().iter().map(print).collect();
    let oracle = closure_fixpoint_oracle(&seed);
    assert_eq!(
        implementation, oracle,
        "closure of `{text}` diverges from the fixpoint oracle"
    );
}

#[test]
fn atom_seed_matches_oracle() {
    assert_matches_oracle("p");
    let closure = parse("p").unwrap().finite_closure();
    assert_eq!(closure.members().len(), 2);
    assert!(closure.terms().is_empty());
}

#[test]
fn kv_seed_matches_oracle() {
    assert_matches_oracle("Kv_1^{3/5}(t)");
    let closure = parse("Kv_1^{3/5}(t)").unwrap().finite_closure();
    // Exactly the seed, t = t, and their negations; minimality confirmed by
    // the oracle equality above.
    assert_eq!(closure.members().len(), 4);
    assert_eq!(closure.thresholds().len(), 1);
}

#[test]
fn equality_seed_matches_oracle() {
    assert_matches_oracle("K_1^{1/2}(t = s)");
    let closure = parse("K_1^{1/2}(t = s)").unwrap().finite_closure();
    // Seed, 4 equalities, and negations.
    assert_eq!(closure.members().len(), 10);
}

#[test]
fn corpus_of_seeds_matches_oracle() {
    for text in [
        "(p -> q)",
        "(p & ~p)",
        "~(p <-> q)",
        "((p | q) -> K_1^{1/2}p)",
        "K_2^{0}(p -> q)",
        "~K_1^{1}~p",
        "(Kv_1^{3/5}(t) & ~Kv_1^{4/5}(t))",
        "(t = s & s = u)",
        "K_1^{1/2}K_2^{1/3}(t = s)",
        "(K_1^{1}(t = s) -> Kv_2^{2/3}(u))",
        "T",
        "F",
    ] {
        assert_matches_oracle(text);
    }
}

#[test]
fn closure_members_reclose_inside_the_original() {
    for text in [
        "p",
        "(p & ~q)",
        "Kv_1^{3/5}(t)",
        "K_1^{1/2}(t = s)",
        "(K_1^{3/4}p -> Kv_2^{2/3}(t))",
    ] {
        let closure = parse(text).unwrap().finite_closure();
        let member_set: BTreeSet<String> = closure.members().iter().map(print).collect();
        for member in closure.members() {
            let re_closed = member.finite_closure();
            for inner in re_closed.members() {
                assert!(
                    member_set.contains(&print(inner)),
                    "re-closing `{member}` of `{text}` escaped with `{inner}`"
                );
            }
        }
    }
}
