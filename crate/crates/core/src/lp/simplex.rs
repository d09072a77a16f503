//! Exact phase-1/phase-2 simplex with Bland's rule.
//!
//! Bland's rule (smallest-index entering column, smallest-index basic
//! variable on ratio ties) guarantees termination; with exact rationals,
//! cycling is the only termination risk, so no perturbation is needed.

use super::{LinearSystem, Relation, Witness};
use crate::rat::{rat_one, rat_zero, Rat};
use num_traits::{Signed, Zero};

/// Feasible point of the closed relaxation (all `>` rows read as `>=`), or
/// `None` when even the relaxation is infeasible.
pub fn feasible_closed(sys: &LinearSystem) -> Option<Witness> {
    let mut tableau = Tableau::build(sys, false);
    if !tableau.phase_one() {
        return None;
    }
    let witness = tableau.extract_witness();
    debug_assert!(sys.satisfied_relaxed(&witness));
    Some(witness)
}

/// Maximal strictness slack: each `a·x > b` row becomes `a·x >= b + delta`,
/// and `delta` is maximized subject to the closed system and `delta <= 1`.
/// Returns `None` when the closed relaxation is infeasible; otherwise the
/// optimum, which is positive exactly when the mixed system is feasible.
pub fn max_delta(sys: &LinearSystem) -> Option<Rat> {
    if !sys.has_strict_rows() {
        return feasible_closed(sys).map(|_| rat_one());
    }
    solve_with_delta(sys).map(|(delta, _)| delta)
}

/// Witness satisfying every strict row strictly, or `None` when the mixed
/// system is infeasible.
pub fn feasible_mixed(sys: &LinearSystem) -> Option<Witness> {
    if !sys.has_strict_rows() {
        return feasible_closed(sys);
    }
    let (delta, assignment) = solve_with_delta(sys)?;
    if delta.is_positive() {
        let witness = Witness { assignment };
        debug_assert!(sys.satisfied_strictly(&witness));
        Some(witness)
    } else {
        None
    }
}

fn solve_with_delta(sys: &LinearSystem) -> Option<(Rat, Vec<Rat>)> {
    let mut tableau = Tableau::build(sys, true);
    if !tableau.phase_one() {
        return None;
    }
    tableau.phase_two_maximize_delta();
    let delta = tableau.delta_value();
    let witness = tableau.extract_witness();
    Some((delta, witness.assignment))
}

struct Tableau {
    /// Row-major constraint matrix in equality form.
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    /// Basic column per row.
    basis: Vec<usize>,
    num_cols: usize,
    first_artificial: usize,
    /// For each original variable, the (positive, optional negative) column.
    var_cols: Vec<(usize, Option<usize>)>,
    delta_col: Option<usize>,
}

impl Tableau {
    fn build(sys: &LinearSystem, with_delta: bool) -> Self {
        let mut num_cols = 0;
        let mut var_cols = Vec::with_capacity(sys.num_vars());
        for _ in 0..sys.num_vars() {
            if sys.nonneg {
                var_cols.push((num_cols, None));
                num_cols += 1;
            } else {
                var_cols.push((num_cols, Some(num_cols + 1)));
                num_cols += 2;
            }
        }
        let delta_col = if with_delta {
            let c = num_cols;
            num_cols += 1;
            Some(c)
        } else {
            None
        };

        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        let mut surplus_count = 0;
        for row in &sys.rows {
            if matches!(row.relation, Relation::Ge | Relation::Gt) {
                surplus_count += 1;
            }
        }
        let delta_cap_slack = usize::from(with_delta);
        let total_cols = num_cols + surplus_count + delta_cap_slack;

        let mut next_surplus = num_cols;
        for row in &sys.rows {
            let mut coeffs = vec![rat_zero(); total_cols];
            for (&var, c) in &row.coeffs {
                let (pos, neg) = var_cols[var];
                coeffs[pos] += c;
                if let Some(neg) = neg {
                    coeffs[neg] -= c;
                }
            }
            if row.relation == Relation::Gt {
                if let Some(dc) = delta_col {
                    coeffs[dc] = -rat_one();
                }
            }
            if matches!(row.relation, Relation::Ge | Relation::Gt) {
                coeffs[next_surplus] = -rat_one();
                next_surplus += 1;
            }
            rows.push(coeffs);
            rhs.push(row.rhs.clone());
        }
        if let Some(dc) = delta_col {
            // delta + slack = 1 caps the objective.
            let mut coeffs = vec![rat_zero(); total_cols];
            coeffs[dc] = rat_one();
            coeffs[num_cols + surplus_count] = rat_one();
            rows.push(coeffs);
            rhs.push(rat_one());
        }

        // Normalize rhs >= 0, then append one artificial column per row.
        let m = rows.len();
        let first_artificial = total_cols;
        let mut basis = Vec::with_capacity(m);
        for (i, row) in rows.iter_mut().enumerate() {
            if rhs[i].is_negative() {
                for c in row.iter_mut() {
                    *c = -c.clone();
                }
                rhs[i] = -rhs[i].clone();
            }
            row.resize(first_artificial + m, rat_zero());
            row[first_artificial + i] = rat_one();
            basis.push(first_artificial + i);
        }

        Tableau {
            rows,
            rhs,
            basis,
            num_cols: first_artificial + m,
            first_artificial,
            var_cols,
            delta_col,
        }
    }

    /// Minimizes the given cost vector with Bland's rule. Panics on an
    /// unbounded problem; both phases used here are bounded by construction.
    fn minimize(&mut self, cost: &[Rat]) {
        loop {
            let (cost_row, _) = self.reduced_costs(cost);
            let entering = (0..self.num_cols).find(|&j| cost_row[j].is_negative());
            let Some(col) = entering else {
                return;
            };
            let mut leaving: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][col];
                    let better = match &leaving {
                        None => true,
                        Some((best_i, best_ratio)) => {
                            ratio < *best_ratio
                                || (ratio == *best_ratio && self.basis[i] < self.basis[*best_i])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                unreachable!("phase objectives are bounded, so no entering column is unbounded");
            };
            self.pivot(row, col);
        }
    }

    fn reduced_costs(&self, cost: &[Rat]) -> (Vec<Rat>, Rat) {
        let mut reduced = cost.to_vec();
        let mut objective = rat_zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            objective += &cost[b] * &self.rhs[i];
            for j in 0..self.num_cols {
                if !self.rows[i][j].is_zero() {
                    let adj = &cost[b] * &self.rows[i][j];
                    reduced[j] -= adj;
                }
            }
        }
        (reduced, objective)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot_val = self.rows[row][col].clone();
        debug_assert!(!pivot_val.is_zero());
        for c in self.rows[row].iter_mut() {
            *c = &*c / &pivot_val;
        }
        self.rhs[row] = &self.rhs[row] / &pivot_val;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..self.num_cols {
                if !pivot_row[j].is_zero() {
                    let adj = &factor * &pivot_row[j];
                    self.rows[i][j] -= adj;
                }
            }
            let adj = &factor * &pivot_rhs;
            self.rhs[i] -= adj;
        }
        self.basis[row] = col;
    }

    /// Minimizes the artificial sum; true when the system is feasible. On
    /// success, drives artificial variables out of the basis and removes
    /// their columns.
    fn phase_one(&mut self) -> bool {
        let mut cost = vec![rat_zero(); self.num_cols];
        for c in self.first_artificial..self.num_cols {
            cost[c] = rat_one();
        }
        self.minimize(&cost);
        let (_, objective) = self.reduced_costs(&cost);
        if !objective.is_zero() {
            return false;
        }

        // Basic artificials sit at value zero; pivot them out on any
        // structural column, or drop the row as redundant.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                debug_assert!(self.rhs[r].is_zero());
                match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(col) => self.pivot(r, col),
                    None => {
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in &mut self.rows {
            row.truncate(self.first_artificial);
        }
        self.num_cols = self.first_artificial;
        true
    }

    fn phase_two_maximize_delta(&mut self) {
        let dc = self.delta_col.expect("phase two requires a delta column");
        let mut cost = vec![rat_zero(); self.num_cols];
        cost[dc] = -rat_one();
        self.minimize(&cost);
    }

    fn column_value(&self, col: usize) -> Rat {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map(|row| self.rhs[row].clone())
            .unwrap_or_else(rat_zero)
    }

    fn delta_value(&self) -> Rat {
        self.column_value(self.delta_col.expect("no delta column"))
    }

    fn extract_witness(&self) -> Witness {
        let assignment = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                None => self.column_value(pos),
                Some(neg) => self.column_value(pos) - self.column_value(neg),
            })
            .collect();
        Witness { assignment }
    }
}
