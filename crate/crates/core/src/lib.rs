//! Exact-arithmetic tooling for a dual-threshold probabilistic knowing-value
//! logic: formula parsing and printing, finite probabilistic models with an
//! exact satisfaction relation, an executable axiom catalogue with a
//! randomized validity harness, exact mixed strict/non-strict linear
//! feasibility, type enumeration with iterative elimination, and canonical
//! model synthesis driving a certificate-producing satisfiability decision.
//!
//! All probabilities and thresholds are exact rationals; no floating point is
//! used anywhere in the semantics.


pub mod axioms;
pub mod canonical;
pub mod lp;
pub mod model;
pub mod rat;
pub mod syntax;
pub mod typespace;

pub use rat::Rat;
pub use syntax::{Agent, Closure, Formula, Term};
