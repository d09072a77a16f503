//! Fourier–Motzkin elimination with strict-flag propagation.
//!
//! Independent feasibility oracle for mixed systems: shares no code with the
//! simplex. Combining a lower and an upper bound keeps the result strict when
//! either input was strict; after eliminating every variable the surviving
//! constant constraints decide feasibility.

use super::{LinearSystem, LpError, Relation};
use crate::rat::{rat_one, rat_zero, Rat};
use num_traits::{Signed, Zero};

const MAX_VARS: usize = 8;

/// A constraint `coeffs · x + constant >= 0` (or `> 0` when strict).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Constraint {
    coeffs: Vec<Rat>,
    constant: Rat,
    strict: bool,
}

impl Constraint {
    /// Trivial when no variable occurs; then the constraint is decided by the
    /// constant alone.
    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn constant_holds(&self) -> bool {
        if self.strict {
            self.constant.is_positive()
        } else {
            !self.constant.is_negative()
        }
    }

    /// Scales so the largest absolute coefficient is one, enabling
    /// deduplication of combined rows.
    fn normalized(mut self) -> Self {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .filter(|m| !m.is_zero());
        if let Some(scale) = scale {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &scale;
            }
            self.constant = &self.constant / &scale;
        }
        self
    }
}

/// Exact feasibility of a mixed strict/non-strict system by variable
/// elimination. Errors when the system has more than 8 variables.
pub fn fm_oracle(sys: &LinearSystem) -> Result<bool, LpError> {
    let n = sys.num_vars();
    if n > MAX_VARS {
        return Err(LpError::TooManyVariables {
            count: n,
            max: MAX_VARS,
        });
    }

    let mut constraints: Vec<Constraint> = Vec::new();
    for row in &sys.rows {
        let mut coeffs = vec![rat_zero(); n];
        for (&v, c) in &row.coeffs {
            coeffs[v] = c.clone();
        }
        match row.relation {
            Relation::Ge | Relation::Gt => constraints.push(Constraint {
                coeffs,
                constant: -row.rhs.clone(),
                strict: row.relation == Relation::Gt,
            }),
            Relation::Eq => {
                constraints.push(Constraint {
                    coeffs: coeffs.clone(),
                    constant: -row.rhs.clone(),
                    strict: false,
                });
                constraints.push(Constraint {
                    coeffs: coeffs.into_iter().map(|c| -c).collect(),
                    constant: row.rhs.clone(),
                    strict: false,
                });
            }
        }
    }
    if sys.nonneg {
        for v in 0..n {
            let mut coeffs = vec![rat_zero(); n];
            coeffs[v] = rat_one();
            constraints.push(Constraint {
                coeffs,
                constant: rat_zero(),
                strict: false,
            });
        }
    }

    for var in 0..n {
        let mut lower: Vec<Constraint> = Vec::new();
        let mut upper: Vec<Constraint> = Vec::new();
        let mut rest: Vec<Constraint> = Vec::new();
        for c in constraints {
            if c.is_constant() {
                if !c.constant_holds() {
                    return Ok(false);
                }
                continue;
            }
            if c.coeffs[var].is_positive() {
                lower.push(c);
            } else if c.coeffs[var].is_negative() {
                upper.push(c);
            } else {
                rest.push(c);
            }
        }

        let mut combined: std::collections::BTreeSet<Constraint> = rest.into_iter().collect();
        for lo in &lower {
            for hi in &upper {
                let lo_scale = -hi.coeffs[var].clone(); // positive
                let hi_scale = lo.coeffs[var].clone(); // positive
                let coeffs: Vec<Rat> = lo
                    .coeffs
                    .iter()
                    .zip(&hi.coeffs)
                    .map(|(a, b)| a * &lo_scale + b * &hi_scale)
                    .collect();
                let constant = &lo.constant * &lo_scale + &hi.constant * &hi_scale;
                let c = Constraint {
                    coeffs,
                    constant,
                    strict: lo.strict || hi.strict,
                }
                .normalized();
                if c.is_constant() {
                    if !c.constant_holds() {
                        return Ok(false);
                    }
                } else {
                    combined.insert(c);
                }
            }
        }
        constraints = combined.into_iter().collect();
    }

    Ok(constraints.iter().all(Constraint::constant_holds))
}
