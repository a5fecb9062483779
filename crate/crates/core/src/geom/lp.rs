//! Exact linear programming over rationals.
//!
//! A dense two-phase simplex with Bland's rule, for the small feasibility
//! and minimization problems that show up in face enumeration and in the
//! per-face minimization of maximal axial numbers. All variables are
//! implicitly constrained to be nonnegative; callers shift their variables
//! accordingly.

use crate::Rat;
use num_traits::{One, Signed, Zero};

/// Relation of a constraint row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
    Le,
}

/// One constraint `coeffs · x REL rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Rel, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

/// Result of a minimization over `{ x ≥ 0 : constraints }`.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// m rows of length `ncols + 1`; the last entry is the rhs.
    rows: Vec<Vec<Rat>>,
    /// Reduced-cost row of length `ncols + 1`; the last entry is the
    /// negated objective value.
    cost: Vec<Rat>,
    /// Basic variable (column index) of each row.
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &piv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v = &*v - &(&factor * p);
            }
        }
        let factor = self.cost[c].clone();
        if !factor.is_zero() {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v = &*v - &(&factor * p);
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: entering column is the lowest index with a negative
    /// reduced cost; leaving row is the lowest basic index among the
    /// minimum-ratio rows. Returns false when optimal, errors on an
    /// unbounded ray.
    fn run(&mut self, active_cols: usize) -> std::result::Result<(), ()> {
        loop {
            let mut entering = None;
            for c in 0..active_cols {
                if self.cost[c].is_negative() {
                    entering = Some(c);
                    break;
                }
            }
            let Some(e) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][e].is_positive() {
                    let ratio = &self.rows[r][self.ncols] / &self.rows[r][e];
                    let better = match &leaving {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio
                                || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, e),
                None => return Err(()),
            }
        }
    }
}

/// Minimize `objective · x` over `{ x ≥ 0 }` intersected with the
/// constraints.
pub fn minimize(objective: &[Rat], constraints: &[Constraint]) -> Outcome {
    let n = objective.len();
    // Normalize to nonnegative right-hand sides.
    let mut rows: Vec<(Vec<Rat>, Rel, Rat)> = Vec::with_capacity(constraints.len());
    for c in constraints {
        debug_assert_eq!(c.coeffs.len(), n);
        if c.rhs.is_negative() {
            let coeffs: Vec<Rat> = c.coeffs.iter().map(|v| -v).collect();
            let rel = match c.rel {
                Rel::Eq => Rel::Eq,
                Rel::Ge => Rel::Le,
                Rel::Le => Rel::Ge,
            };
            rows.push((coeffs, rel, -&c.rhs));
        } else {
            rows.push((c.coeffs.clone(), c.rel, c.rhs.clone()));
        }
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Rel::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Rel::Le).count();
    let ncols = n + n_slack + n_art;

    let mut tab = Tableau {
        rows: vec![vec![Rat::zero(); ncols + 1]; m],
        cost: vec![Rat::zero(); ncols + 1],
        basis: vec![0; m],
        ncols,
    };

    let mut slack_at = n;
    let mut art_at = n + n_slack;
    let mut artificials = Vec::new();
    for (r, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        for (j, v) in coeffs.iter().enumerate() {
            tab.rows[r][j] = v.clone();
        }
        tab.rows[r][ncols] = rhs.clone();
        match rel {
            Rel::Le => {
                tab.rows[r][slack_at] = Rat::one();
                tab.basis[r] = slack_at;
                slack_at += 1;
            }
            Rel::Ge => {
                tab.rows[r][slack_at] = -Rat::one();
                slack_at += 1;
                tab.rows[r][art_at] = Rat::one();
                tab.basis[r] = art_at;
                artificials.push(art_at);
                art_at += 1;
            }
            Rel::Eq => {
                tab.rows[r][art_at] = Rat::one();
                tab.basis[r] = art_at;
                artificials.push(art_at);
                art_at += 1;
            }
        }
    }

    // Phase 1: minimize the sum of artificial variables.
    if !artificials.is_empty() {
        for &a in &artificials {
            tab.cost[a] = Rat::one();
        }
        for r in 0..m {
            if artificials.contains(&tab.basis[r]) {
                let row = tab.rows[r].clone();
                for (v, p) in tab.cost.iter_mut().zip(&row) {
                    *v = &*v - p;
                }
            }
        }
        // Phase 1 is always bounded below by 0.
        tab.run(ncols).expect("phase 1 cannot be unbounded");
        if tab.cost[ncols].is_negative() {
            return Outcome::Infeasible;
        }
        // Drive leftover artificials out of the basis.
        let art_start = n + n_slack;
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                let mut pivoted = false;
                for c in 0..art_start {
                    if !tab.rows[r][c].is_zero() {
                        tab.pivot(r, c);
                        pivoted = true;
                        break;
                    }
                }
                if !pivoted {
                    // Redundant constraint.
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
    }

    // Phase 2 over the original columns only.
    let active = n + n_slack;
    tab.cost = vec![Rat::zero(); ncols + 1];
    for (j, v) in objective.iter().enumerate() {
        tab.cost[j] = v.clone();
    }
    for r in 0..tab.rows.len() {
        let b = tab.basis[r];
        if !tab.cost[b].is_zero() {
            let factor = tab.cost[b].clone();
            let row = tab.rows[r].clone();
            for (v, p) in tab.cost.iter_mut().zip(&row) {
                *v = &*v - &(&factor * p);
            }
        }
    }
    if tab.run(active).is_err() {
        return Outcome::Unbounded;
    }

    let mut point = vec![Rat::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            point[b] = tab.rows[r][ncols].clone();
        }
    }
    Outcome::Optimal {
        value: -tab.cost[ncols].clone(),
        point,
    }
}

/// A feasible point of `{ x ≥ 0 : constraints }`, if any.
pub fn feasible(n: usize, constraints: &[Constraint]) -> Option<Vec<Rat>> {
    match minimize(&vec![Rat::zero(); n], constraints) {
        Outcome::Optimal { point, .. } => Some(point),
        Outcome::Infeasible => None,
        Outcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn r(v: i64) -> Rat {
        rat(v, 1)
    }

    #[test]
    fn minimizes_a_small_lp() {
        // min x + y  s.t.  x + 2y >= 4, 3x + y >= 6
        let out = minimize(
            &[r(1), r(1)],
            &[
                Constraint::new(vec![r(1), r(2)], Rel::Ge, r(4)),
                Constraint::new(vec![r(3), r(1)], Rel::Ge, r(6)),
            ],
        );
        match out {
            Outcome::Optimal { value, point } => {
                assert_eq!(value, rat(14, 5));
                assert_eq!(point, vec![rat(8, 5), rat(6, 5)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // x >= 2 and x <= 1
        let out = minimize(
            &[r(0)],
            &[
                Constraint::new(vec![r(1)], Rel::Ge, r(2)),
                Constraint::new(vec![r(1)], Rel::Le, r(1)),
            ],
        );
        assert_eq!(out, Outcome::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        let out = minimize(&[r(-1)], &[Constraint::new(vec![r(1)], Rel::Ge, r(1))]);
        assert_eq!(out, Outcome::Unbounded);
    }

    #[test]
    fn handles_equalities_and_degenerate_rows() {
        // x + y = 2, duplicated; minimize x.
        let out = minimize(
            &[r(1), r(0)],
            &[
                Constraint::new(vec![r(1), r(1)], Rel::Eq, r(2)),
                Constraint::new(vec![r(1), r(1)], Rel::Eq, r(2)),
            ],
        );
        match out {
            Outcome::Optimal { value, point } => {
                assert_eq!(value, r(0));
                assert_eq!(point, vec![r(0), r(2)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn feasibility_wrapper() {
        let sol = feasible(
            2,
            &[
                Constraint::new(vec![r(1), r(1)], Rel::Eq, r(1)),
                Constraint::new(vec![r(1), r(-1)], Rel::Ge, r(0)),
            ],
        );
        let sol = sol.unwrap();
        assert_eq!(&sol[0] + &sol[1], r(1));
        assert!(&sol[0] - &sol[1] >= r(0));
        assert!(feasible(
            1,
            &[
                Constraint::new(vec![r(1)], Rel::Le, r(-1)),
            ]
        )
        .is_none());
    }
}
