//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Solves `maximize c·x` subject to `A x ≤ b` and `lower ≤ x ≤ upper`, where
//! bounds may be infinite. Problem sizes here are tiny (effect polytopes of a
//! few dozen facets), so the tableau is kept dense and reduced costs are
//! recomputed at every pivot.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of variables.
pub const DEFAULT_VARIABLE_CAP: usize = 4096;

const EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    /// Maximize `objective · x`.
    pub objective: Vec<f64>,
    /// Rows of `A` in `A x ≤ b`.
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// A program with only box constraints.
    pub fn boxed(objective: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        Self {
            objective,
            a_ub: Vec::new(),
            b_ub: Vec::new(),
            lower,
            upper,
        }
    }

    pub fn with_row(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    fn check(&self, cap: usize) -> Result<()> {
        let n = self.objective.len();
        if n > cap {
            return Err(Error::CapExceeded {
                what: "LP variables",
                value: n,
                cap,
            });
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.lower.len().min(self.upper.len()),
            });
        }
        if self.a_ub.len() != self.b_ub.len() {
            return Err(Error::DimensionMismatch {
                expected: self.a_ub.len(),
                got: self.b_ub.len(),
            });
        }
        if let Some(r) = self.a_ub.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// How an original variable is rebuilt from nonnegative standard-form ones.
enum VarMap {
    /// `x = l + y`
    Shift(f64, usize),
    /// `x = u − y`
    Flip(f64, usize),
    /// `x = y⁺ − y⁻`
    Split(usize, usize),
}

pub fn lp_solve(p: &LinearProgram) -> Result<LpOutcome> {
    lp_solve_capped(p, DEFAULT_VARIABLE_CAP)
}

pub fn lp_solve_capped(p: &LinearProgram, cap: usize) -> Result<LpOutcome> {
    p.check(cap)?;
    let n = p.objective.len();
    for j in 0..n {
        if p.lower[j] > p.upper[j] {
            return Ok(LpOutcome::Infeasible);
        }
    }

    // Standard form: maximize c'·y + c0, A' y ≤ b', y ≥ 0.
    let mut maps = Vec::with_capacity(n);
    let mut ny = 0;
    for j in 0..n {
        let (l, u) = (p.lower[j], p.upper[j]);
        if l.is_finite() {
            maps.push(VarMap::Shift(l, ny));
            ny += 1;
        } else if u.is_finite() {
            maps.push(VarMap::Flip(u, ny));
            ny += 1;
        } else {
            maps.push(VarMap::Split(ny, ny + 1));
            ny += 2;
        }
    }
    let mut cost = vec![0.0; ny];
    let mut c0 = 0.0;
    for (j, m) in maps.iter().enumerate() {
        let c = p.objective[j];
        match *m {
            VarMap::Shift(l, y) => {
                cost[y] = c;
                c0 += c * l;
            }
            VarMap::Flip(u, y) => {
                cost[y] = -c;
                c0 += c * u;
            }
            VarMap::Split(a, b) => {
                cost[a] = c;
                cost[b] = -c;
            }
        }
    }
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (r, &b) in p.a_ub.iter().zip(&p.b_ub) {
        let mut row = vec![0.0; ny];
        let mut rhs = b;
        for (j, m) in maps.iter().enumerate() {
            let a = r[j];
            match *m {
                VarMap::Shift(l, y) => {
                    row[y] = a;
                    rhs -= a * l;
                }
                VarMap::Flip(u, y) => {
                    row[y] = -a;
                    rhs -= a * u;
                }
                VarMap::Split(ya, yb) => {
                    row[ya] = a;
                    row[yb] = -a;
                }
            }
        }
        rows.push((row, rhs));
    }
    for (j, m) in maps.iter().enumerate() {
        if let VarMap::Shift(l, y) = *m {
            if p.upper[j].is_finite() {
                let mut row = vec![0.0; ny];
                row[y] = 1.0;
                rows.push((row, p.upper[j] - l));
            }
        }
    }

    let m = rows.len();
    let n_art = rows.iter().filter(|(_, b)| *b < 0.0).count();
    let width = ny + m + n_art;
    let mut t = vec![vec![0.0; width + 1]; m];
    let mut basis = vec![0usize; m];
    let mut art = ny + m;
    for (i, (row, b)) in rows.iter().enumerate() {
        if *b >= 0.0 {
            t[i][..ny].copy_from_slice(row);
            t[i][ny + i] = 1.0;
            t[i][width] = *b;
            basis[i] = ny + i;
        } else {
            for k in 0..ny {
                t[i][k] = -row[k];
            }
            t[i][ny + i] = -1.0;
            t[i][art] = 1.0;
            t[i][width] = -*b;
            basis[i] = art;
            art += 1;
        }
    }

    let is_art = |j: usize| j >= ny + m;
    if n_art > 0 {
        let mut c1 = vec![0.0; width];
        for c in c1.iter_mut().skip(ny + m) {
            *c = -1.0;
        }
        match run_simplex(&mut t, &mut basis, &c1, &|_| true)? {
            Phase::Optimal => {}
            Phase::Unbounded => unreachable!("phase one is bounded"),
        }
        let infeas: f64 = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| is_art(b))
            .map(|(i, _)| t[i][width])
            .sum();
        if infeas > 1e-9 {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining artificials out of the basis.
        let mut i = 0;
        while i < t.len() {
            if is_art(basis[i]) {
                if let Some(j) = (0..ny + m).find(|&j| t[i][j].abs() > EPS) {
                    pivot(&mut t, &mut basis, i, j);
                    i += 1;
                } else {
                    t.remove(i);
                    basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
    }

    let mut c2 = vec![0.0; width];
    c2[..ny].copy_from_slice(&cost);
    match run_simplex(&mut t, &mut basis, &c2, &|j| !is_art(j))? {
        Phase::Unbounded => return Ok(LpOutcome::Unbounded),
        Phase::Optimal => {}
    }
    let mut y = vec![0.0; ny];
    for (i, &b) in basis.iter().enumerate() {
        if b < ny {
            y[b] = t[i][width];
        }
    }
    let x: Vec<f64> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift(l, k) => l + y[k],
            VarMap::Flip(u, k) => u - y[k],
            VarMap::Split(a, b) => y[a] - y[b],
        })
        .collect();
    let value = c0 + cost.iter().zip(&y).map(|(c, v)| c * v).sum::<f64>();
    Ok(LpOutcome::Optimal { value, x })
}

enum Phase {
    Optimal,
    Unbounded,
}

fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    allowed: &dyn Fn(usize) -> bool,
) -> Result<Phase> {
    let width = cost.len();
    for _ in 0..MAX_PIVOTS {
        // Bland: lowest-index column with positive reduced cost.
        let entering = (0..width).find(|&j| {
            if !allowed(j) || basis.contains(&j) {
                return false;
            }
            let z: f64 = basis
                .iter()
                .enumerate()
                .map(|(i, &b)| cost[b] * t[i][j])
                .sum();
            cost[j] - z > EPS
        });
        let Some(j) = entering else {
            return Ok(Phase::Optimal);
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..t.len() {
            let a = t[i][j];
            if a > EPS {
                let ratio = t[i][width] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, r)) => {
                        if ratio < r - EPS || ((ratio - r).abs() <= EPS && basis[i] < basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, r))
                        }
                    }
                };
            }
        }
        let Some((i, _)) = leave else {
            return Ok(Phase::Unbounded);
        };
        pivot(t, basis, i, j);
    }
    Err(Error::InvalidArgument("simplex pivot limit reached".into()))
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let f = r[col];
        if f != 0.0 {
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_interval() {
        let p = LinearProgram::boxed(vec![1.0], vec![0.0], vec![1.0]);
        match lp_solve(&p).unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert_relative_eq!(value, 1.0);
                assert_relative_eq!(x[0], 1.0);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn box_lp_is_l1_norm() {
        // max Σ (2a_i − 1) δ_i over a ∈ [0,1]^2
        let delta = [0.4, -0.4];
        let p = LinearProgram::boxed(
            delta.iter().map(|d| 2.0 * d).collect(),
            vec![0.0; 2],
            vec![1.0; 2],
        );
        let v = lp_solve(&p).unwrap().value().unwrap() - delta.iter().sum::<f64>();
        assert_relative_eq!(v, 0.8, epsilon = 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = LinearProgram::boxed(vec![1.0], vec![1.0], vec![f64::INFINITY]).with_row(vec![1.0], 0.0);
        assert_eq!(lp_solve(&p).unwrap(), LpOutcome::Infeasible);
        let p = LinearProgram::boxed(vec![1.0], vec![0.0], vec![f64::INFINITY]);
        assert_eq!(lp_solve(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // max x + y, x + y ≤ 3, x − y ≥ 1 (−x + y ≤ −1), x,y free, x ≤ 10
        let p = LinearProgram::boxed(
            vec![1.0, 1.0],
            vec![f64::NEG_INFINITY; 2],
            vec![10.0, f64::INFINITY],
        )
        .with_row(vec![1.0, 1.0], 3.0)
        .with_row(vec![-1.0, 1.0], -1.0);
        let out = lp_solve(&p).unwrap();
        assert_relative_eq!(out.value().unwrap(), 3.0, epsilon = 1e-12);
        if let LpOutcome::Optimal { x, .. } = out {
            assert!(x[0] - x[1] >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn degenerate_program_terminates() {
        // Classic cycling example (Beale), solved with Bland's rule.
        let p = LinearProgram::boxed(
            vec![0.75, -150.0, 0.02, -6.0],
            vec![0.0; 4],
            vec![f64::INFINITY; 4],
        )
        .with_row(vec![0.25, -60.0, -0.04, 9.0], 0.0)
        .with_row(vec![0.5, -90.0, -0.02, 3.0], 0.0)
        .with_row(vec![0.0, 0.0, 1.0, 0.0], 1.0);
        assert_relative_eq!(lp_solve(&p).unwrap().value().unwrap(), 0.05, epsilon = 1e-9);
    }

    #[test]
    fn rejects_oversized_programs() {
        let p = LinearProgram::boxed(vec![0.0; 10], vec![0.0; 10], vec![1.0; 10]);
        assert!(matches!(lp_solve_capped(&p, 5), Err(Error::CapExceeded { .. })));
    }
}
