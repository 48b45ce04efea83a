//! Dense two-phase simplex over exact rationals, with Bland's rule for both
//! the entering and the leaving choice so degenerate problems cannot cycle.
//! Problem sizes here are tiny (a handful of variables and constraints), so
//! a straightforward tableau is the right tool.

use num::{BigRational, One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal {
        x: Vec<BigRational>,
        objective: BigRational,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>, // m x (ncols + 1), last column is rhs
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &inv;
        }
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..=self.ncols {
                let delta = &factor * &self.rows[row][c];
                self.rows[r][c] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering = lowest-index improving column; leaving =
    /// minimum ratio, ties broken by the lowest basic variable index.
    /// Returns false when the current basis is optimal for `costs`.
    fn minimize(&mut self, costs: &[BigRational], allowed: &[bool]) -> Result<(), ()> {
        loop {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                // reduced cost c_j - sum_i c_{B(i)} T[i][j]
                let mut reduced = costs[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !costs[b].is_zero() {
                        reduced -= &costs[b] * &self.rows[i][j];
                    }
                }
                if reduced < BigRational::zero() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col] <= BigRational::zero() {
                    continue;
                }
                let ratio = &self.rows[i][self.ncols] / &self.rows[i][col];
                let better = match &leaving {
                    None => true,
                    Some((best_row, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best_row])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return Err(()); // unbounded in the entering direction
            };
            self.pivot(row, col);
        }
    }
}

/// Minimizes `objective . x` over `x >= 0` subject to the constraints.
pub(crate) fn solve_min(objective: &[BigRational], constraints: &[Constraint]) -> LpOutcome {
    let nv = objective.len();
    // columns: structural | one slack/surplus per inequality | artificials
    let n_slack = constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let mut ncols = nv + n_slack;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(constraints.len());
    let mut basis = vec![usize::MAX; constraints.len()];
    let mut artificial_cols = Vec::new();

    let mut slack_cursor = nv;
    for (i, c) in constraints.iter().enumerate() {
        debug_assert_eq!(c.coeffs.len(), nv);
        let flip = c.rhs < BigRational::zero();
        let sign = |v: &BigRational| if flip { -v.clone() } else { v.clone() };
        let mut row: Vec<BigRational> = c.coeffs.iter().map(sign).collect();
        row.resize(ncols, BigRational::zero());
        row.push(sign(&c.rhs));
        let relation = match (c.relation, flip) {
            (Relation::Eq, _) => Relation::Eq,
            (r, false) => r,
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
        };
        match relation {
            Relation::Le => {
                row[slack_cursor] = BigRational::one();
                basis[i] = slack_cursor;
                slack_cursor += 1;
            }
            Relation::Ge => {
                row[slack_cursor] = -BigRational::one();
                slack_cursor += 1;
            }
            Relation::Eq => {}
        }
        rows.push(row);
    }
    // artificials for every row without a basic slack
    for i in 0..rows.len() {
        if basis[i] == usize::MAX {
            for row in rows.iter_mut() {
                row.insert(ncols, BigRational::zero());
            }
            rows[i][ncols] = BigRational::one();
            basis[i] = ncols;
            artificial_cols.push(ncols);
            ncols += 1;
        }
    }

    let mut tableau = Tableau { rows, basis, ncols };

    if !artificial_cols.is_empty() {
        let mut phase1 = vec![BigRational::zero(); ncols];
        for &c in &artificial_cols {
            phase1[c] = BigRational::one();
        }
        let allowed = vec![true; ncols];
        if tableau.minimize(&phase1, &allowed).is_err() {
            // the phase-1 objective is bounded below by zero
            unreachable!("phase 1 cannot be unbounded");
        }
        let infeasibility: BigRational = tableau
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| artificial_cols.contains(&b))
            .map(|(i, _)| tableau.rows[i][ncols].clone())
            .sum();
        if !infeasibility.is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive any artificial still basic (at zero) out, or drop its row
        let mut drop_rows = Vec::new();
        for i in 0..tableau.rows.len() {
            if !artificial_cols.contains(&tableau.basis[i]) {
                continue;
            }
            match (0..nv + n_slack).find(|&j| !tableau.rows[i][j].is_zero()) {
                Some(col) => tableau.pivot(i, col),
                None => drop_rows.push(i),
            }
        }
        for &i in drop_rows.iter().rev() {
            tableau.rows.remove(i);
            tableau.basis.remove(i);
        }
    }

    let mut costs = objective.to_vec();
    costs.resize(ncols, BigRational::zero());
    let mut allowed = vec![true; ncols];
    for &c in &artificial_cols {
        allowed[c] = false;
    }
    if tableau.minimize(&costs, &allowed).is_err() {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![BigRational::zero(); nv];
    for (i, &b) in tableau.basis.iter().enumerate() {
        if b < nv {
            x[b] = tableau.rows[i][tableau.ncols].clone();
        }
    }
    let objective_value = objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum();
    LpOutcome::Optimal {
        x,
        objective: objective_value,
    }
}
