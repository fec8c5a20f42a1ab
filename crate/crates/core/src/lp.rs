//! Dense two-phase simplex method with Bland's anti-cycling rule.
//!
//! Problems here are small (a few dozen variables), so a dense tableau is
//! plenty. Variables are nonnegative unless declared free; free variables are
//! split into a difference of two nonnegative ones.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<f64>,
    rel: Relation,
    rhs: f64,
}

/// A linear program `minimize c·x` over linear constraints.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    n: usize,
    objective: Vec<f64>,
    free: Vec<bool>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Vec<f64>, f64)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// `n` nonnegative variables, objective to be minimized.
    pub fn minimize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram { n, objective, free: vec![false; n], rows: Vec::new() }
    }

    /// Maximization is minimization of the negated objective; the reported
    /// value is the maximum.
    pub fn maximize(objective: Vec<f64>) -> MaxProgram {
        MaxProgram(Self::minimize(objective.iter().map(|c| -c).collect()))
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) -> Result<&mut Self> {
        if coeffs.len() != self.n {
            return Err(Error::Lp(format!("constraint of length {} for {} variables", coeffs.len(), self.n)));
        }
        if !rhs.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.rows.push(Row { coeffs, rel, rhs });
        Ok(self)
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        // Column map: original variable -> (positive column, optional negative column).
        let mut cols = Vec::with_capacity(self.n);
        let mut width = 0;
        for &f in &self.free {
            if f {
                cols.push((width, Some(width + 1)));
                width += 2;
            } else {
                cols.push((width, None));
                width += 1;
            }
        }
        let slack_count = self.rows.iter().filter(|r| r.rel != Relation::Eq).count();
        let structural = width + slack_count;
        let m = self.rows.len();
        let total = structural + m;

        let mut t = Tableau::new(m, total);
        let mut slack = width;
        for (i, row) in self.rows.iter().enumerate() {
            let mut line = vec![0.0; total + 1];
            for (j, &(p, neg)) in cols.iter().enumerate() {
                line[p] = row.coeffs[j];
                if let Some(q) = neg {
                    line[q] = -row.coeffs[j];
                }
            }
            match row.rel {
                Relation::Le => {
                    line[slack] = 1.0;
                    slack += 1;
                }
                Relation::Ge => {
                    line[slack] = -1.0;
                    slack += 1;
                }
                Relation::Eq => {}
            }
            line[total] = row.rhs;
            if row.rhs < 0.0 {
                line.iter_mut().for_each(|v| *v = -*v);
            }
            line[structural + i] = 1.0;
            t.rows[i] = line;
            t.basis[i] = structural + i;
        }

        // Phase one: minimize the sum of artificials.
        let mut phase1 = vec![0.0; total];
        for c in phase1.iter_mut().skip(structural) {
            *c = 1.0;
        }
        t.set_objective(&phase1);
        if !t.run(total)? {
            return Err(Error::Lp("phase one reported unbounded".into()));
        }
        let rhs_scale = 1.0 + self.rows.iter().fold(0.0f64, |a, r| a.max(r.rhs.abs()));
        if -t.obj[total] > 1e-9 * rhs_scale {
            return Ok(LpOutcome::Infeasible);
        }
        t.drive_out_artificials(structural);

        // Phase two on the structural columns only.
        let mut phase2 = vec![0.0; total];
        for (j, &(p, neg)) in cols.iter().enumerate() {
            phase2[p] = self.objective[j];
            if let Some(q) = neg {
                phase2[q] = -self.objective[j];
            }
        }
        t.set_objective(&phase2);
        if !t.run(structural)? {
            return Ok(LpOutcome::Unbounded);
        }
        let values = t.solution(total);
        let x: Vec<f64> = cols
            .iter()
            .map(|&(p, neg)| values[p] - neg.map_or(0.0, |q| values[q]))
            .collect();
        let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpOutcome::Optimal { x, value })
    }
}

/// A maximization problem; thin wrapper over [`LinearProgram`].
#[derive(Clone, Debug)]
pub struct MaxProgram(LinearProgram);

impl MaxProgram {
    pub fn all_free(&mut self) -> &mut Self {
        self.0.all_free();
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.0.set_free(var);
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) -> Result<&mut Self> {
        self.0.constrain(coeffs, rel, rhs)?;
        Ok(self)
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        Ok(match self.0.solve()? {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            other => other,
        })
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Reduced costs; last entry is minus the objective value.
    obj: Vec<f64>,
}

impl Tableau {
    fn new(m: usize, total: usize) -> Self {
        Tableau { rows: vec![Vec::new(); m], basis: vec![0; m], obj: vec![0.0; total + 1] }
    }

    fn set_objective(&mut self, c: &[f64]) {
        let total = c.len();
        self.obj = c.to_vec();
        self.obj.push(0.0);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c[b];
            if cb != 0.0 {
                for k in 0..=total {
                    self.obj[k] -= cb * self.rows[i][k];
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    row.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
                    row[c] = 0.0;
                }
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            self.obj.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations with entering columns restricted to
    /// `0..allowed`. Returns false when unbounded.
    fn run(&mut self, allowed: usize) -> Result<bool> {
        let rhs = self.obj.len() - 1;
        for _ in 0..MAX_PIVOTS {
            let scale = 1.0 + self.obj[..allowed].iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let Some(c) = (0..allowed).find(|&j| self.obj[j] < -PIVOT_EPS * scale) else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_EPS {
                    let ratio = row[rhs] / row[c];
                    let better = match best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br - 1e-14 || (ratio <= br + 1e-14 && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c),
            }
        }
        Err(Error::Lp("simplex iteration limit reached".into()))
    }

    fn drive_out_artificials(&mut self, structural: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= structural {
                let col = (0..structural).find(|&j| self.rows[i][j].abs() > 1e-9);
                match col {
                    Some(c) => self.pivot(i, c),
                    None => {
                        // Redundant equality.
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        // Artificial columns may not re-enter.
        for row in &mut self.rows {
            let end = row.len() - 1;
            for v in &mut row[structural..end] {
                *v = 0.0;
            }
        }
    }

    fn solution(&self, total: usize) -> Vec<f64> {
        let mut x = vec![0.0; total];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rows[i][total];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 -> 36 at (2, 6).
        let mut lp = LinearProgram::maximize(vec![3.0, 5.0]);
        lp.constrain(vec![1.0, 0.0], Relation::Le, 4.0).unwrap();
        lp.constrain(vec![0.0, 2.0], Relation::Le, 12.0).unwrap();
        lp.constrain(vec![3.0, 2.0], Relation::Le, 18.0).unwrap();
        let (x, v) = lp.solve().unwrap().optimal().unwrap();
        assert!((v - 36.0).abs() < 1e-10);
        assert!((x[0] - 2.0).abs() < 1e-10 && (x[1] - 6.0).abs() < 1e-10);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::minimize(vec![1.0]);
        lp.constrain(vec![1.0], Relation::Ge, 2.0).unwrap();
        lp.constrain(vec![1.0], Relation::Le, 1.0).unwrap();
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::maximize(vec![1.0, 0.0]);
        lp.constrain(vec![-1.0, 1.0], Relation::Le, 1.0).unwrap();
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x + 2y with x free, y ≥ 0, x + y = -3, plus a duplicate row.
        let mut lp = LinearProgram::minimize(vec![1.0, 2.0]);
        lp.set_free(0);
        lp.constrain(vec![1.0, 1.0], Relation::Eq, -3.0).unwrap();
        lp.constrain(vec![2.0, 2.0], Relation::Eq, -6.0).unwrap();
        let (x, v) = lp.solve().unwrap().optimal().unwrap();
        assert!((v + 3.0).abs() < 1e-10, "{x:?}");
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Many redundant constraints through the optimum.
        let mut lp = LinearProgram::maximize(vec![1.0, 1.0]);
        for k in 0..20 {
            let t = k as f64 / 19.0;
            lp.constrain(vec![t, 1.0 - t], Relation::Le, 0.5).unwrap();
        }
        lp.constrain(vec![1.0, 0.0], Relation::Le, 0.5).unwrap();
        let (_, v) = lp.solve().unwrap().optimal().unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }
}
