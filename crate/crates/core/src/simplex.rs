//! Dense two-phase simplex for the small linear programs built by the
//! certifier.
//!
//! Rows are sign-normalized so every right-hand side is nonnegative, then
//! `<=` rows get a slack column and `>=`/`=` rows an artificial column (plus
//! a surplus for `>=`). Phase one minimizes the artificial sum; phase two
//! optimizes the real objective with artificial columns barred from
//! entering. Entering columns follow Dantzig's rule until `r` consecutive
//! degenerate pivots are seen, after which Bland's rule takes over until
//! the objective moves again.
//!
//! Column layout of the standard form (as reported in [`LpSolution::basis`]):
//! one column per variable, a second (negated) column per free variable,
//! then slack/surplus columns in row order, then artificial columns.

use crate::error::{Error, Result};

/// Absolute tolerance on primal and dual residuals.
pub const FEAS_TOL: f64 = 1e-9;
/// Smallest tableau entry accepted as a pivot.
pub const PIVOT_TOL: f64 = 1e-10;
const OPT_TOL: f64 = 1e-10;
const DEGENERATE_STEP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    NonNegative,
    Free,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<f64>,
    pub bounds: Vec<Bound>,
}

impl LinearProgram {
    /// An LP with no rows and all variables nonnegative.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let m = objective.len();
        LinearProgram {
            sense,
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            bounds: vec![Bound::NonNegative; m],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.rows.push(coeffs);
        self.relations.push(relation);
        self.rhs.push(rhs);
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.bounds[var] = Bound::Free;
        self
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Default pivot cap, `50 * (r + m)`.
    pub fn pivot_cap(&self) -> usize {
        50 * (self.num_rows() + self.num_vars())
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.num_vars();
        let r = self.num_rows();
        if m == 0 || r == 0 {
            return Err(Error::InvalidParameter(format!(
                "LP needs at least one row and one variable (r={r}, m={m})"
            )));
        }
        if self.relations.len() != r {
            return Err(Error::DimensionMismatch { expected: r, got: self.relations.len() });
        }
        if self.rhs.len() != r {
            return Err(Error::DimensionMismatch { expected: r, got: self.rhs.len() });
        }
        if self.bounds.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: self.bounds.len() });
        }
        if let Some(row) = self.rows.iter().find(|row| row.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: row.len() });
        }
        let finite = self.objective.iter().chain(self.rhs.iter()).chain(self.rows.iter().flatten());
        if finite.into_iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("LP data".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`solve`].
///
/// Duals are shadow prices, `y_i = d(optimal value)/d(b_i)`: with this
/// convention the optimal objective equals `b . y` for either sense.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: Status,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub objective: f64,
    pub basis: Vec<usize>,
    pub pivots: usize,
}

struct StandardForm {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    cost: Vec<f64>,
    row_sign: Vec<f64>,
    /// column of the negative part for each free variable
    neg_col: Vec<Option<usize>>,
    art_start: usize,
    initial_basis: Vec<usize>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.num_vars();
        let r = lp.num_rows();
        let sigma = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };

        let mut neg_col = vec![None; m];
        let mut ns = m;
        for (j, b) in lp.bounds.iter().enumerate() {
            if *b == Bound::Free {
                neg_col[j] = Some(ns);
                ns += 1;
            }
        }

        let row_sign: Vec<f64> = lp.rhs.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect();
        let relations: Vec<Relation> = lp
            .relations
            .iter()
            .zip(&row_sign)
            .map(|(&rel, &s)| match (rel, s < 0.0) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (rel, _) => rel,
            })
            .collect();
        let n_slack = relations.iter().filter(|&&rel| rel != Relation::Eq).count();
        let n_art = relations.iter().filter(|&&rel| rel != Relation::Le).count();
        let art_start = ns + n_slack;
        let ncols = art_start + n_art;

        let mut a = vec![vec![0.0; ncols]; r];
        let mut initial_basis = Vec::with_capacity(r);
        let (mut slack, mut art) = (ns, art_start);
        for i in 0..r {
            let s = row_sign[i];
            for j in 0..m {
                a[i][j] = s * lp.rows[i][j];
                if let Some(nc) = neg_col[j] {
                    a[i][nc] = -s * lp.rows[i][j];
                }
            }
            match relations[i] {
                Relation::Le => {
                    a[i][slack] = 1.0;
                    initial_basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    a[i][slack] = -1.0;
                    slack += 1;
                    a[i][art] = 1.0;
                    initial_basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    a[i][art] = 1.0;
                    initial_basis.push(art);
                    art += 1;
                }
            }
        }

        let mut cost = vec![0.0; ncols];
        for j in 0..m {
            cost[j] = sigma * lp.objective[j];
            if let Some(nc) = neg_col[j] {
                cost[nc] = -sigma * lp.objective[j];
            }
        }
        let b = lp.rhs.iter().zip(&row_sign).map(|(b, s)| b * s).collect();
        StandardForm { a, b, cost, row_sign, neg_col, art_start, initial_basis }
    }

    fn ncols(&self) -> usize {
        self.cost.len()
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// `r` rows of `ncols + 1` entries, the last being the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    pivots: usize,
    cap: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        *self.t[i].last().unwrap()
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (row, &bv) in self.t.iter().zip(&self.basis) {
            let cb = cost[bv];
            if cb != 0.0 {
                for (dj, &tij) in d.iter_mut().zip(row.iter()) {
                    *dj -= cb * tij;
                }
            }
        }
        d
    }

    fn pivot(&mut self, p: usize, q: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.cap {
            return Err(Error::SolverStalled(self.cap));
        }
        let pv = self.t[p][q];
        for v in self.t[p].iter_mut() {
            *v /= pv;
        }
        let prow = self.t[p].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == p {
                continue;
            }
            let f = row[q];
            if f != 0.0 {
                for (v, &pr) in row.iter_mut().zip(&prow) {
                    *v -= f * pr;
                }
                row[q] = 0.0;
            }
        }
        self.basis[p] = q;
        Ok(())
    }

    fn run_phase(&mut self, cost: &[f64], allowed: usize) -> Result<PhaseEnd> {
        let r = self.t.len();
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run >= r;
            let d = self.reduced_costs(cost);
            let mut entering = None;
            let mut best = -OPT_TOL;
            for (j, &dj) in d.iter().enumerate().take(allowed) {
                if self.basis.contains(&j) || dj >= -OPT_TOL {
                    continue;
                }
                if bland {
                    entering = Some(j);
                    break;
                }
                if dj < best {
                    best = dj;
                    entering = Some(j);
                }
            }
            let Some(q) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..r {
                let a = self.t[i][q];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((l, lr)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * lr.max(1.0);
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[l]
                            } else {
                                a > self.t[l][q]
                            }
                        } else {
                            ratio < lr
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((l, lr))
                        }
                    }
                };
            }
            let Some((p, step)) = leaving else {
                return Ok(PhaseEnd::Unbounded);
            };
            if step <= DEGENERATE_STEP {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(p, q)?;
        }
    }
}

/// Gaussian elimination with partial pivoting on a square system.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-14 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            if f != 0.0 {
                for k in c..n {
                    a[i][k] -= f * a[c][k];
                }
                b[i] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Solves `lp` to optimality, or reports infeasibility or unboundedness.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with_cap(lp, lp.pivot_cap())
}

pub fn solve_with_cap(lp: &LinearProgram, cap: usize) -> Result<LpSolution> {
    lp.validate()?;
    let sf = StandardForm::build(lp);
    let r = lp.num_rows();
    let ncols = sf.ncols();

    let t = sf
        .a
        .iter()
        .zip(&sf.b)
        .map(|(row, &b)| {
            let mut row = row.clone();
            row.push(b);
            row
        })
        .collect();
    let mut tab = Tableau { t, basis: sf.initial_basis.clone(), pivots: 0, cap };

    if sf.art_start < ncols {
        let mut phase1 = vec![0.0; ncols];
        phase1[sf.art_start..].iter_mut().for_each(|c| *c = 1.0);
        tab.run_phase(&phase1, ncols)?;
        let infeasibility: f64 = (0..r)
            .filter(|&i| tab.basis[i] >= sf.art_start)
            .map(|i| tab.rhs(i))
            .sum();
        if infeasibility > FEAS_TOL {
            return Ok(LpSolution {
                status: Status::Infeasible,
                x: Vec::new(),
                y: Vec::new(),
                objective: f64::NAN,
                basis: tab.basis,
                pivots: tab.pivots,
            });
        }
        // drive zero-level artificials out; rows with no usable entry are redundant
        for i in 0..r {
            if tab.basis[i] < sf.art_start {
                continue;
            }
            let best = (0..sf.art_start)
                .filter(|j| !tab.basis.contains(j))
                .max_by(|&a, &b| tab.t[i][a].abs().total_cmp(&tab.t[i][b].abs()));
            if let Some(j) = best.filter(|&j| tab.t[i][j].abs() > PIVOT_TOL) {
                tab.pivot(i, j)?;
            }
        }
    }

    let end = tab.run_phase(&sf.cost, sf.art_start)?;
    let status = match end {
        PhaseEnd::Optimal => Status::Optimal,
        PhaseEnd::Unbounded => Status::Unbounded,
    };

    // refactorize the final basis against the original data
    let bmat: Vec<Vec<f64>> = (0..r).map(|i| tab.basis.iter().map(|&j| sf.a[i][j]).collect()).collect();
    let x_basic = solve_square(bmat.clone(), sf.b.clone())
        .unwrap_or_else(|| (0..r).map(|i| tab.rhs(i)).collect());
    let mut x_std = vec![0.0; ncols];
    for (&j, &v) in tab.basis.iter().zip(&x_basic) {
        x_std[j] = v.max(0.0);
    }
    let x: Vec<f64> = (0..lp.num_vars())
        .map(|j| x_std[j] - sf.neg_col[j].map_or(0.0, |nc| x_std[nc]))
        .collect();
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();

    let y = if status == Status::Optimal {
        let bt: Vec<Vec<f64>> = (0..r).map(|i| (0..r).map(|k| bmat[k][i]).collect()).collect();
        let cb: Vec<f64> = tab.basis.iter().map(|&j| sf.cost[j]).collect();
        let y_std = solve_square(bt, cb.clone()).unwrap_or_else(|| {
            // y'_i = c_B . B^{-1} e_i, read from the tableau's initial identity columns
            (0..r)
                .map(|i| {
                    let col = sf.initial_basis[i];
                    (0..r).map(|k| cb[k] * tab.t[k][col]).sum()
                })
                .collect()
        });
        let sigma = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        y_std.iter().zip(&sf.row_sign).map(|(v, s)| sigma * s * v).collect()
    } else {
        Vec::new()
    };

    Ok(LpSolution { status, x, y, objective, basis: tab.basis, pivots: tab.pivots })
}

/// Residuals recomputed from scratch for a claimed optimal solution.
#[derive(Debug, Clone)]
pub struct SolutionReport {
    pub status_optimal: bool,
    pub primal_residual: f64,
    pub equality_residual: f64,
    pub dual_residual: f64,
    pub complementarity: f64,
    pub duality_gap: f64,
    pub objective_error: f64,
    pub tolerance: f64,
}

impl SolutionReport {
    pub fn entries(&self) -> Vec<(&'static str, f64, bool)> {
        let tol = self.tolerance;
        vec![
            ("primal feasibility", self.primal_residual, self.primal_residual <= tol),
            ("equality rows", self.equality_residual, self.equality_residual <= tol),
            ("dual feasibility", self.dual_residual, self.dual_residual <= tol),
            ("complementary slackness", self.complementarity, self.complementarity <= tol),
            ("duality gap", self.duality_gap, self.duality_gap <= tol),
            ("objective value", self.objective_error, self.objective_error <= tol),
        ]
    }

    pub fn passed(&self) -> bool {
        self.status_optimal && self.entries().iter().all(|e| e.2)
    }
}

/// Recomputes primal, dual and complementarity residuals of `sol` against
/// `lp` at the default tolerance.
pub fn check_solution(lp: &LinearProgram, sol: &LpSolution) -> SolutionReport {
    check_solution_with(lp, sol, FEAS_TOL)
}

pub fn check_solution_with(lp: &LinearProgram, sol: &LpSolution, tolerance: f64) -> SolutionReport {
    let nan_report = |status_optimal| SolutionReport {
        status_optimal,
        primal_residual: f64::INFINITY,
        equality_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        complementarity: f64::INFINITY,
        duality_gap: f64::INFINITY,
        objective_error: f64::INFINITY,
        tolerance,
    };
    if sol.status != Status::Optimal
        || lp.validate().is_err()
        || sol.x.len() != lp.num_vars()
        || sol.y.len() != lp.num_rows()
    {
        return nan_report(sol.status == Status::Optimal);
    }
    let max = |acc: f64, v: f64| if v.is_nan() { f64::INFINITY } else { acc.max(v) };

    let mut primal = 0.0f64;
    let mut equality = 0.0f64;
    let mut dual = 0.0f64;
    let mut compl = 0.0f64;
    for (i, row) in lp.rows.iter().enumerate() {
        let ax: f64 = row.iter().zip(&sol.x).map(|(a, x)| a * x).sum();
        let gap = ax - lp.rhs[i];
        let yi = sol.y[i];
        let (viol, sign_viol) = match (lp.relations[i], lp.sense) {
            (Relation::Eq, _) => {
                equality = max(equality, gap.abs());
                (gap.abs(), 0.0)
            }
            (Relation::Le, Sense::Maximize) => (gap.max(0.0), (-yi).max(0.0)),
            (Relation::Le, Sense::Minimize) => (gap.max(0.0), yi.max(0.0)),
            (Relation::Ge, Sense::Maximize) => ((-gap).max(0.0), yi.max(0.0)),
            (Relation::Ge, Sense::Minimize) => ((-gap).max(0.0), (-yi).max(0.0)),
        };
        primal = max(primal, viol);
        dual = max(dual, sign_viol);
        compl = max(compl, (yi * gap).abs());
    }
    for (j, &xj) in sol.x.iter().enumerate() {
        let aty: f64 = lp.rows.iter().zip(&sol.y).map(|(row, y)| row[j] * y).sum();
        let d = lp.objective[j] - aty;
        let viol = match (lp.bounds[j], lp.sense) {
            (Bound::Free, _) => d.abs(),
            (Bound::NonNegative, Sense::Minimize) => (-d).max(0.0),
            (Bound::NonNegative, Sense::Maximize) => d.max(0.0),
        };
        dual = max(dual, viol);
        if lp.bounds[j] == Bound::NonNegative {
            primal = max(primal, (-xj).max(0.0));
        }
        compl = max(compl, (d * xj).abs());
    }
    let cx: f64 = lp.objective.iter().zip(&sol.x).map(|(c, x)| c * x).sum();
    let by: f64 = lp.rhs.iter().zip(&sol.y).map(|(b, y)| b * y).sum();
    SolutionReport {
        status_optimal: true,
        primal_residual: primal,
        equality_residual: equality,
        dual_residual: dual,
        complementarity: compl,
        duality_gap: (cx - by).abs(),
        objective_error: (cx - sol.objective).abs(),
        tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_x1_le_1() -> LinearProgram {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![1.0], Relation::Le, 1.0);
        lp
    }

    #[test]
    fn single_bound() {
        let lp = max_x1_le_1();
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-12);
        assert!((sol.objective - 1.0).abs() < 1e-12);
        assert!((sol.y[0] - 1.0).abs() < 1e-12);
        assert!(check_solution(&lp, &sol).passed());
    }

    #[test]
    fn objective_equals_constraint() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Eq, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-12);
        let report = check_solution(&lp, &sol);
        assert!(report.passed(), "{report:?}");
        assert!(report.equality_residual <= 1e-12);
    }

    #[test]
    fn contradictory_rows() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![1.0], Relation::Ge, 2.0);
        lp.add_row(vec![1.0], Relation::Le, 1.0);
        assert_eq!(solve(&lp).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 0.0]);
        lp.add_row(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(solve(&lp).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // min t s.t. t >= -3, t - w >= -1, t + w >= -1  ->  t = -1, w = 0
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 0.0]);
        lp.set_free(0).set_free(1);
        lp.add_row(vec![1.0, 0.0], Relation::Ge, -3.0);
        lp.add_row(vec![1.0, -1.0], Relation::Ge, -1.0);
        lp.add_row(vec![1.0, 1.0], Relation::Ge, -1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective + 1.0).abs() < 1e-12);
        assert!(check_solution(&lp, &sol).passed());
    }

    #[test]
    fn perturbed_solution_is_flagged() {
        let lp = max_x1_le_1();
        let mut sol = solve(&lp).unwrap();
        sol.x[0] += 1e-3;
        let report = check_solution(&lp, &sol);
        assert!(!report.passed());
        assert!(report.primal_residual > 1e-4);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's cycling example; Dantzig's rule alone cycles on it
        let mut lp = LinearProgram::new(Sense::Minimize, vec![-0.75, 150.0, -0.02, 6.0]);
        lp.add_row(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add_row(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add_row(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective + 0.05).abs() < 1e-12);
        assert!(check_solution(&lp, &sol).passed());
    }

    #[test]
    fn redundant_equality_rows() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 2.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Eq, 1.0);
        lp.add_row(vec![2.0, 2.0], Relation::Eq, 2.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective - 2.0).abs() < 1e-12);
        assert!(check_solution(&lp, &sol).passed());
    }

    #[test]
    fn input_errors() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        assert!(solve(&lp).is_err());
        lp.add_row(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve(&lp), Err(Error::DimensionMismatch { .. })));
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_row(vec![f64::INFINITY], Relation::Le, 1.0);
        assert!(matches!(solve(&lp), Err(Error::NonFinite(_))));
    }

    #[test]
    fn stall_cap() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add_row(vec![1.0, 0.0], Relation::Le, 1.0);
        lp.add_row(vec![0.0, 1.0], Relation::Le, 1.0);
        assert!(matches!(solve_with_cap(&lp, 1), Err(Error::SolverStalled(1))));
    }
}
