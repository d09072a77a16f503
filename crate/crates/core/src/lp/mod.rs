//! Exact-rational feasibility for mixed strict/non-strict linear systems,
//! with an independent Fourier–Motzkin oracle for cross-validation.
//!
//! `feasible_mixed` decides systems containing both `>=` and `>` rows by
//! slack maximization: every strict row `a·x > b` becomes `a·x >= b + delta`,
//! and the system is strictly feasible exactly when the maximal `delta`
//! (capped at one) is positive. This also settles the implicit-equality case:
//! the maximum is zero precisely when some strict row is an implicit equality
//! of the closed relaxation.

mod fm;
mod simplex;

pub use fm::fm_oracle;
pub use simplex::{feasible_closed, feasible_mixed, max_delta};

use crate::rat::{rat_to_frac_string, Rat};
use num_traits::{Signed, Zero};
use rand::RngExt;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `coeffs · x >= rhs`
    Ge,
    /// `coeffs · x > rhs`
    Gt,
    /// `coeffs · x = rhs`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    /// Sparse coefficients keyed by variable index.
    pub coeffs: BTreeMap<usize, Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

/// A finite system of linear constraints over named variables, optionally
/// with `x >= 0` applied to every variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub variables: Vec<String>,
    pub rows: Vec<Row>,
    pub nonneg: bool,
}

/// A satisfying assignment, indexed like `LinearSystem::variables`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("too many variables for Fourier-Motzkin elimination: {count} > {max}")]
    TooManyVariables { count: usize, max: usize },
}

impl LinearSystem {
    pub fn new(variables: Vec<String>, nonneg: bool) -> Self {
        LinearSystem {
            variables,
            rows: Vec::new(),
            nonneg,
        }
    }

    /// Convenience constructor with anonymous variable names `x0..x{n-1}`.
    pub fn with_anonymous_vars(count: usize, nonneg: bool) -> Self {
        Self::new((0..count).map(|i| format!("x{i}")).collect(), nonneg)
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn push(
        &mut self,
        coeffs: impl IntoIterator<Item = (usize, Rat)>,
        relation: Relation,
        rhs: Rat,
    ) {
        let coeffs: BTreeMap<usize, Rat> = coeffs
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for &var in coeffs.keys() {
            assert!(var < self.variables.len(), "row references unknown variable {var}");
        }
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    /// `coeffs · x <= rhs`, stored as the negated `>=` row.
    pub fn push_le(&mut self, coeffs: impl IntoIterator<Item = (usize, Rat)>, rhs: Rat) {
        self.push(coeffs.into_iter().map(|(v, c)| (v, -c)), Relation::Ge, -rhs);
    }

    /// `coeffs · x < rhs`, stored as the negated `>` row.
    pub fn push_lt(&mut self, coeffs: impl IntoIterator<Item = (usize, Rat)>, rhs: Rat) {
        self.push(coeffs.into_iter().map(|(v, c)| (v, -c)), Relation::Gt, -rhs);
    }

    pub fn has_strict_rows(&self) -> bool {
        self.rows.iter().any(|r| r.relation == Relation::Gt)
    }

    fn row_value(&self, row: &Row, assignment: &[Rat]) -> Rat {
        row.coeffs
            .iter()
            .map(|(&v, c)| c * &assignment[v])
            .sum()
    }

    /// Row-by-row substitution check with strict rows read as `>`.
    pub fn satisfied_strictly(&self, witness: &Witness) -> bool {
        self.check(witness, true)
    }

    /// Row-by-row substitution check with strict rows relaxed to `>=`.
    pub fn satisfied_relaxed(&self, witness: &Witness) -> bool {
        self.check(witness, false)
    }

    fn check(&self, witness: &Witness, strict: bool) -> bool {
        if witness.assignment.len() != self.variables.len() {
            return false;
        }
        if self.nonneg && witness.assignment.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.rows.iter().all(|row| {
            let lhs = self.row_value(row, &witness.assignment);
            match row.relation {
                Relation::Ge => lhs >= row.rhs,
                Relation::Eq => lhs == row.rhs,
                Relation::Gt => {
                    if strict {
                        lhs > row.rhs
                    } else {
                        lhs >= row.rhs
                    }
                }
            }
        })
    }

    /// Debug-dump form with coefficients as exact rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let coeffs: BTreeMap<String, String> = row
                    .coeffs
                    .iter()
                    .map(|(&v, c)| (self.variables[v].clone(), rat_to_frac_string(c)))
                    .collect();
                serde_json::json!({
                    "coeffs": coeffs,
                    "relation": match row.relation {
                        Relation::Ge => "GE",
                        Relation::Gt => "GT",
                        Relation::Eq => "EQ",
                    },
                    "rhs": rat_to_frac_string(&row.rhs),
                })
            })
            .collect();
        serde_json::json!({
            "variables": self.variables,
            "nonneg": self.nonneg,
            "rows": rows,
        })
    }
}

impl Witness {
    pub fn value(&self, var: usize) -> &Rat {
        &self.assignment[var]
    }
}

/// Random mixed system inside the oracle-agreement bounds: up to 4 variables,
/// up to 6 rows, integer coefficients in -2..=2, rhs denominators up to 4.
pub fn random_system(rng: &mut impl rand::Rng) -> LinearSystem {
    let num_vars = rng.random_range(1..=4usize);
    let num_rows = rng.random_range(1..=6usize);
    let nonneg = rng.random_bool(0.5);
    let mut sys = LinearSystem::with_anonymous_vars(num_vars, nonneg);
    for _ in 0..num_rows {
        let coeffs: Vec<(usize, Rat)> = (0..num_vars)
            .map(|v| (v, crate::rat::rat(rng.random_range(-2..=2i64), 1)))
            .collect();
        let relation = match rng.random_range(0..6u32) {
            0 | 1 => Relation::Ge,
            2 | 3 => Relation::Gt,
            4 => Relation::Eq,
            _ => Relation::Ge,
        };
        let denom = rng.random_range(1..=4i64);
        let numer = rng.random_range(-4..=4i64);
        sys.push(coeffs, relation, crate::rat::rat(numer, denom));
    }
    sys
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simplex_and_fm_agree_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..300 {
            let sys = random_system(&mut rng);
            let mixed = feasible_mixed(&sys);
            let oracle = fm_oracle(&sys).unwrap();
            assert_eq!(
                mixed.is_some(),
                oracle,
                "trial {trial} diverged on {}",
                sys.to_json()
            );
            if let Some(w) = &mixed {
                assert!(sys.satisfied_strictly(w), "trial {trial} witness invalid");
                assert!(feasible_closed(&sys).is_some(), "relaxation consistency");
            }
        }
    }

    #[test]
    fn delta_zero_exactly_when_strictness_alone_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut hit = 0;
        for _ in 0..400 {
            let sys = random_system(&mut rng);
            if feasible_closed(&sys).is_some() && feasible_mixed(&sys).is_none() {
                assert_eq!(max_delta(&sys), Some(rat(0, 1)));
                hit += 1;
            }
        }
        assert!(hit > 0, "expected at least one implicit-equality case");
    }

    #[test]
    fn witness_checks_cover_strictness() {
        let mut sys = LinearSystem::with_anonymous_vars(1, true);
        sys.push([(0, rat(1, 1))], Relation::Gt, rat(1, 2));
        let on_boundary = Witness {
            assignment: vec![rat(1, 2)],
        };
        assert!(!sys.satisfied_strictly(&on_boundary));
        assert!(sys.satisfied_relaxed(&on_boundary));
        let inside = Witness {
            assignment: vec![rat(3, 4)],
        };
        assert!(sys.satisfied_strictly(&inside));
    }

    #[test]
    fn nonneg_flag_rejects_negative_assignments() {
        let sys = LinearSystem::with_anonymous_vars(2, true);
        let w = Witness {
            assignment: vec![rat(1, 1), rat(-1, 1)],
        };
        assert!(!sys.satisfied_strictly(&w));
    }

    #[test]
    fn le_lt_helpers_negate() {
        let mut sys = LinearSystem::with_anonymous_vars(1, false);
        sys.push_le([(0, rat(1, 1))], rat(2, 1));
        sys.push_lt([(0, rat(1, 1))], rat(3, 1));
        assert_eq!(sys.rows[0].relation, Relation::Ge);
        assert_eq!(sys.rows[0].rhs, rat(-2, 1));
        assert_eq!(sys.rows[1].relation, Relation::Gt);
        let w = Witness {
            assignment: vec![rat(2, 1)],
        };
        assert!(sys.satisfied_strictly(&w));
    }
}
