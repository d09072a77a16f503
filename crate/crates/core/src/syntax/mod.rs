//! Formula representation, parsing, printing, subformula machinery, modal
//! depth, and finite-closure computation.

mod closure;
mod parse;

pub use closure::Closure;
pub use parse::{parse, ParseError};

use crate::rat::{in_high_interval, in_unit_interval, rat_to_formula_string, Rat};
use std::fmt;

/// An atomic term symbol. Terms compare by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(pub String);

impl Term {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "term names must be nonempty");
        Term(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An agent, identified by a positive index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(pub u32);

impl Agent {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "agent indices start at 1");
        Agent(index)
    }

    pub fn index(&self) -> u32 {
        self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Core formula syntax. Conjunction, disjunction, biconditional, and the
/// constants are construction helpers that expand into this core.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Eq(Term, Term),
    Not(Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    K(Agent, Rat, Box<Formula>),
    Kv(Agent, Rat, Term),
}

/// Atom name used by the `T`/`F` expansion: `T` is `(tt -> tt)` and `F` its
/// negation. Any atom works; truth is independent of its valuation.
pub const CONST_ATOM: &str = "tt";

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn eq(left: Term, right: Term) -> Self {
        Formula::Eq(left, right)
    }

    /// Negation, normalizing double negation away: `not(not(f)) = f`.
    pub fn not(inner: Formula) -> Self {
        match inner {
            Formula::Not(f) => *f,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn imp(lhs: Formula, rhs: Formula) -> Self {
        Formula::Imp(Box::new(lhs), Box::new(rhs))
    }

    /// Threshold knowledge operator; `theta` must lie in [0, 1].
    pub fn k(agent: Agent, theta: Rat, body: Formula) -> Self {
        assert!(
            in_unit_interval(&theta),
            "K threshold {theta} outside [0,1]"
        );
        Formula::K(agent, theta, Box::new(body))
    }

    /// Knowing-value operator; `eta` must lie in (1/2, 1].
    pub fn kv(agent: Agent, eta: Rat, term: Term) -> Self {
        assert!(
            in_high_interval(&eta),
            "Kv threshold {eta} outside (1/2,1]"
        );
        Formula::Kv(agent, eta, term)
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::not(Formula::imp(lhs, Formula::not(rhs)))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::imp(Formula::not(lhs), rhs)
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Self {
        Formula::and(
            Formula::imp(lhs.clone(), rhs.clone()),
            Formula::imp(rhs, lhs),
        )
    }

    pub fn top() -> Self {
        Formula::imp(Formula::atom(CONST_ATOM), Formula::atom(CONST_ATOM))
    }

    pub fn bottom() -> Self {
        Formula::not(Formula::top())
    }

    pub fn conjoin_all(mut formulas: Vec<Formula>) -> Self {
        assert!(!formulas.is_empty(), "empty conjunction");
        let first = formulas.remove(0);
        formulas.into_iter().fold(first, Formula::and)
    }

    /// Modal depth: atoms and equalities are 0, negation preserves,
    /// implication takes the max, K adds one, Kv is exactly one.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::Imp(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::K(_, _, f) => f.modal_depth() + 1,
            Formula::Kv(..) => 1,
        }
    }

    /// Immediate subformulas (terms are not formulas, so Eq and Kv have none).
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Eq(..) | Formula::Kv(..) => vec![],
            Formula::Not(f) => vec![f],
            Formula::Imp(a, b) => vec![a, b],
            Formula::K(_, _, f) => vec![f],
        }
    }

    /// All subformulas including self, preorder.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = vec![self];
        let mut stack: Vec<&Formula> = self.children();
        while let Some(f) = stack.pop() {
            out.push(f);
            stack.extend(f.children());
        }
        out
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Atom(p) => Some(p.clone()),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn terms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        for f in self.subformulas() {
            match f {
                Formula::Eq(t, s) => {
                    out.push(t.clone());
                    out.push(s.clone());
                }
                Formula::Kv(_, _, t) => out.push(t.clone()),
                _ => {}
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn agents(&self) -> Vec<Agent> {
        let mut out: Vec<Agent> = self
            .subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::K(i, _, _) | Formula::Kv(i, _, _) => Some(*i),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn thresholds(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self
            .subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::K(_, r, _) | Formula::Kv(_, r, _) => Some(r.clone()),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Walks the tree checking the threshold invariants: every K threshold in
    /// [0,1], every Kv threshold in (1/2,1].
    pub fn thresholds_well_formed(&self) -> bool {
        self.subformulas().into_iter().all(|f| match f {
            Formula::K(_, theta, _) => in_unit_interval(theta),
            Formula::Kv(_, eta, _) => in_high_interval(eta),
            _ => true,
        })
    }

    pub fn is_negation(&self) -> bool {
        matches!(self, Formula::Not(_))
    }
}

/// Canonical text form; `parse(print(f))` structurally equals `f`.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(p) => out.push_str(p),
        Formula::Eq(t, s) => {
            out.push_str(t.name());
            out.push_str(" = ");
            out.push_str(s.name());
        }
        Formula::Not(inner) => {
            out.push('~');
            write_formula(inner, out);
        }
        Formula::Imp(a, b) => {
            out.push('(');
            write_formula(a, out);
            out.push_str(" -> ");
            write_formula(b, out);
            out.push(')');
        }
        Formula::K(i, theta, body) => {
            out.push_str(&format!("K_{i}^{{{}}}", rat_to_formula_string(theta)));
            write_formula(body, out);
        }
        Formula::Kv(i, eta, term) => {
            out.push_str(&format!(
                "Kv_{i}^{{{}}}({})",
                rat_to_formula_string(eta),
                term
            ));
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn t() -> Term {
        Term::new("t")
    }

    #[test]
    fn print_examples() {
        assert_eq!(
            print(&Formula::kv(Agent::new(1), rat(3, 5), t())),
            "Kv_1^{3/5}(t)"
        );
        assert_eq!(print(&Formula::eq(t(), Term::new("s"))), "t = s");
        assert_eq!(print(&Formula::not(Formula::atom("p"))), "~p");
        assert_eq!(
            print(&Formula::k(
                Agent::new(2),
                rat(0, 1),
                Formula::imp(Formula::atom("p"), Formula::atom("q"))
            )),
            "K_2^{0}(p -> q)"
        );
    }

    #[test]
    fn modal_depth_examples() {
        assert_eq!(Formula::atom("p").modal_depth(), 0);
        assert_eq!(Formula::kv(Agent::new(1), rat(3, 5), t()).modal_depth(), 1);
        let nested = Formula::k(
            Agent::new(1),
            rat(1, 2),
            Formula::k(Agent::new(2), rat(1, 3), Formula::atom("p")),
        );
        assert_eq!(nested.modal_depth(), 2);
        assert_eq!(Formula::eq(t(), t()).modal_depth(), 0);
    }

    #[test]
    fn depth_of_k_is_body_plus_one() {
        let bodies = [
            Formula::atom("p"),
            Formula::kv(Agent::new(2), rat(4, 5), t()),
            Formula::imp(
                Formula::atom("q"),
                Formula::k(Agent::new(1), rat(1, 3), Formula::atom("p")),
            ),
        ];
        for body in bodies {
            let d = body.modal_depth();
            assert_eq!(
                Formula::k(Agent::new(1), rat(1, 2), body).modal_depth(),
                d + 1
            );
        }
    }

    #[test]
    fn double_negation_normalizes() {
        let p = Formula::atom("p");
        assert_eq!(Formula::not(Formula::not(p.clone())), p);
        let contradiction = Formula::and(p.clone(), Formula::not(p.clone()));
        // (p & ~p) expands to ~(p -> p), not ~(p -> ~~p).
        assert_eq!(
            contradiction,
            Formula::not(Formula::imp(p.clone(), p.clone()))
        );
    }

    #[test]
    #[should_panic(expected = "Kv threshold")]
    fn kv_rejects_low_threshold() {
        Formula::kv(Agent::new(1), rat(1, 2), t());
    }

    #[test]
    #[should_panic(expected = "K threshold")]
    fn k_rejects_out_of_range() {
        Formula::k(Agent::new(1), rat(3, 2), Formula::atom("p"));
    }

    #[test]
    fn vocabulary_extraction() {
        let f = Formula::and(
            Formula::k(Agent::new(2), rat(1, 2), Formula::atom("q")),
            Formula::kv(Agent::new(1), rat(3, 5), t()),
        );
        assert_eq!(f.atoms(), vec!["q".to_string()]);
        assert_eq!(f.terms(), vec![t()]);
        assert_eq!(f.agents(), vec![Agent::new(1), Agent::new(2)]);
        assert_eq!(f.thresholds(), vec![rat(1, 2), rat(3, 5)]);
    }
}
