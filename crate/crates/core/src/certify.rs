//! Envelope evaluation, affine-dominator fitting and the pass/fail decision.
//!
//! The concave envelope of a grid function at a target `u` is the best
//! value reachable by a convex combination of grid points averaging to `u`:
//!
//! ```text
//! max  sum_j q_j F_j   s.t.  sum_j q_j u_j = u,  sum_j q_j = 1,  q >= 0
//! ```
//!
//! At `u = 1` this is exactly the quantity a singleton null on the grid
//! points bounds by 1, so a value above 1 is a disproof. Its LP dual is the
//! search for a hyperplane `G_w(u) = 1 + sum_k w_k (u_k - 1)` dominating the
//! grid, which [`fit_dominator`] solves directly as a separate program.

use serde::{Deserialize, Serialize};

use crate::corpus::{check_point, GridFunction};
use crate::error::{Error, Result};
use crate::simplex::{self, Bound, LinearProgram, Relation, Sense, Status};
use crate::witness::{build_certificate, Certificate};

/// Verdict threshold on the envelope value at the ones-vector.
pub const VERDICT_TOL: f64 = 1e-9;
/// Convex-combination weights at or below this are treated as zero.
const SUPPORT_EPS: f64 = 1e-13;
/// Paper-form weights within this distance below zero are LP round-off.
const SIGN_EPS: f64 = 1e-12;
/// Largest dense tableau (cells) the dominator fit will allocate.
const MAX_TABLEAU_CELLS: usize = 16_000_000;

/// Concave-envelope value at a target with the optimal convex combination.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeResult {
    pub value: f64,
    pub target: Vec<f64>,
    /// `(grid index, q_j)` with every `q_j > 0`, in increasing index order.
    pub weights: Vec<(usize, f64)>,
}

impl EnvelopeResult {
    pub fn n_support(&self) -> usize {
        self.weights.len()
    }
}

/// Evaluates the concave envelope of the grid restriction at `target`.
pub fn envelope_at(g: &GridFunction, target: &[f64]) -> Result<EnvelopeResult> {
    check_point(target, g.dim(), "envelope target")?;
    let k = g.dim();
    let n = g.len();

    let mut lp = LinearProgram::new(Sense::Maximize, g.values().to_vec());
    for (kk, &tk) in target.iter().enumerate() {
        lp.add_row(g.points().iter().map(|p| p[kk]).collect(), Relation::Eq, tk);
    }
    lp.add_row(vec![1.0; n], Relation::Eq, 1.0);

    let sol = simplex::solve(&lp)?;
    match sol.status {
        Status::Infeasible => return Err(Error::TargetOutsideHull),
        Status::Unbounded => {
            return Err(Error::SolverFault("envelope LP reported unbounded over a simplex".into()))
        }
        Status::Optimal => {}
    }
    let weights: Vec<(usize, f64)> = sol
        .x
        .iter()
        .enumerate()
        .filter(|(_, &q)| q > SUPPORT_EPS)
        .map(|(j, &q)| (j, q))
        .collect();
    if weights.len() > k + 2 {
        return Err(Error::SolverFault(format!(
            "envelope support {} exceeds K+2 = {}",
            weights.len(),
            k + 2
        )));
    }
    let value = weights.iter().map(|&(j, q)| q * g.value(j)).sum();
    Ok(EnvelopeResult { value, target: target.to_vec(), weights })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMode {
    /// `w >= 0` and `sum w <= 1`.
    PaperForm,
    /// Any real `w`.
    Unconstrained,
}

impl FitMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FitMode::PaperForm => "paper-form",
            FitMode::Unconstrained => "unconstrained",
        }
    }
}

/// The hyperplane `G_w(u) = 1 + sum_k w_k (u_k - 1)` and how far the grid
/// pokes above it.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineDominator {
    pub w: Vec<f64>,
    /// `max_j F_j - G_w(u_j)`; at most the tolerance iff `G_w` dominates.
    pub slack: f64,
    pub mode: FitMode,
}

impl AffineDominator {
    pub fn value_at(&self, u: &[f64]) -> f64 {
        1.0 + self.w.iter().zip(u).map(|(w, x)| w * (x - 1.0)).sum::<f64>()
    }

    /// Whether `w` lies in `{w >= 0, sum w <= 1}` up to round-off.
    pub fn is_paper_form(&self) -> bool {
        self.w.iter().all(|&w| w >= -SIGN_EPS) && self.w.iter().sum::<f64>() <= 1.0 + SIGN_EPS
    }

    fn grid_slack(w: &[f64], g: &GridFunction) -> f64 {
        g.points()
            .iter()
            .zip(g.values())
            .map(|(u, &f)| f - (1.0 + w.iter().zip(u).map(|(w, x)| w * (x - 1.0)).sum::<f64>()))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Fits the tightest affine dominator through `G(1) = 1`:
///
/// ```text
/// min t  s.t.  1 + sum_k w_k (u_jk - 1) + t >= F_j   for every grid point j
/// ```
///
/// with `w >= 0, sum w <= 1` added in paper-form mode.
pub fn fit_dominator(g: &GridFunction, mode: FitMode) -> Result<AffineDominator> {
    let k = g.dim();
    let n = g.len();
    let rows = n + usize::from(mode == FitMode::PaperForm);
    // structural columns (free ones split), slack/surplus and artificial columns
    let cells = rows.saturating_mul(2 * (k + 1) + 2 * rows + 1);
    if cells > MAX_TABLEAU_CELLS {
        return Err(Error::GridTooLarge { size: n, cap: MAX_TABLEAU_CELLS });
    }

    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    lp.set_free(k);
    if mode == FitMode::Unconstrained {
        for kk in 0..k {
            lp.set_free(kk);
        }
    }
    for (u, &f) in g.points().iter().zip(g.values()) {
        let mut row: Vec<f64> = u.iter().map(|x| x - 1.0).collect();
        row.push(1.0);
        lp.add_row(row, Relation::Ge, f - 1.0);
    }
    if mode == FitMode::PaperForm {
        let mut row = vec![1.0; k];
        row.push(0.0);
        lp.add_row(row, Relation::Le, 1.0);
    }
    debug_assert!(lp.bounds[k] == Bound::Free);

    let sol = simplex::solve(&lp)?;
    match sol.status {
        Status::Optimal => {}
        Status::Unbounded => return Err(Error::OnesOutsideHull),
        Status::Infeasible => {
            return Err(Error::SolverFault("dominator LP reported infeasible".into()))
        }
    }
    let mut w = sol.x[..k].to_vec();
    if mode == FitMode::PaperForm {
        for wk in w.iter_mut() {
            if *wk < 0.0 && *wk >= -SIGN_EPS {
                *wk = 0.0;
            }
        }
    }
    let slack = AffineDominator::grid_slack(&w, g);
    Ok(AffineDominator { w, slack, mode })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Holds on the sampled points only.
    GridExact,
    /// Holds on the whole orthant.
    FullDomain,
}

impl Scope {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scope::GridExact => "grid-exact",
            Scope::FullDomain => "full-domain",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Note {
    /// Envelope value in `(1, 1 + tol]`.
    Boundary(f64),
    /// Envelope at 1 is fine, but no `w` in the paper-form set dominates
    /// the grid; only an unconstrained hyperplane does.
    PaperFormGap(f64),
}

impl Note {
    pub fn describe(&self) -> String {
        match self {
            Note::Boundary(v) => format!("boundary: envelope value {v} lies within tolerance above 1"),
            Note::PaperFormGap(s) => format!(
                "paper_form_gap: no w >= 0 with sum w <= 1 dominates the grid (best slack {s}); an unconstrained hyperplane does"
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Pass {
        /// Dominator in the requested fit mode.
        dominator: AffineDominator,
        /// Supporting hyperplane of the grid envelope at 1.
        unconstrained: AffineDominator,
    },
    Fail(Certificate),
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    pub scope: Scope,
    pub envelope_value_at_one: f64,
    pub envelope: EnvelopeResult,
    pub notes: Vec<Note>,
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self.outcome, Outcome::Pass { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Outcome::Fail(c) => Some(c),
            Outcome::Pass { .. } => None,
        }
    }

    pub fn dominator(&self) -> Option<&AffineDominator> {
        match &self.outcome {
            Outcome::Pass { dominator, .. } => Some(dominator),
            Outcome::Fail(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub tolerance: f64,
    pub mode: FitMode,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { tolerance: VERDICT_TOL, mode: FitMode::PaperForm }
    }
}

/// Decides validity on the grid with default options.
pub fn certify(g: &GridFunction) -> Result<Verdict> {
    certify_with(g, &CertifyOptions::default())
}

pub fn certify_with(g: &GridFunction, opts: &CertifyOptions) -> Result<Verdict> {
    let ones = vec![1.0; g.dim()];
    let env = match envelope_at(g, &ones) {
        Err(Error::TargetOutsideHull) => return Err(Error::OnesOutsideHull),
        other => other?,
    };
    let value = env.value;
    let tol = opts.tolerance;

    if value > 1.0 + tol {
        let cert = build_certificate(g, &env, tol)?;
        return Ok(Verdict {
            outcome: Outcome::Fail(cert),
            scope: Scope::FullDomain,
            envelope_value_at_one: value,
            envelope: env,
            notes: Vec::new(),
        });
    }

    let mut notes = Vec::new();
    if value > 1.0 {
        notes.push(Note::Boundary(value));
    }
    let unconstrained = fit_dominator(g, FitMode::Unconstrained)?;
    if unconstrained.slack > tol + simplex::FEAS_TOL {
        return Err(Error::SolverFault(format!(
            "envelope at 1 is {value} but the supporting hyperplane has slack {}",
            unconstrained.slack
        )));
    }
    let dominator = match opts.mode {
        FitMode::Unconstrained => unconstrained.clone(),
        FitMode::PaperForm => fit_dominator(g, FitMode::PaperForm)?,
    };
    let paper_slack = if opts.mode == FitMode::PaperForm {
        dominator.slack
    } else {
        fit_dominator(g, FitMode::PaperForm)?.slack
    };
    if paper_slack > tol {
        notes.push(Note::PaperFormGap(paper_slack));
    }
    Ok(Verdict {
        outcome: Outcome::Pass { dominator, unconstrained },
        scope: Scope::GridExact,
        envelope_value_at_one: value,
        envelope: env,
        notes,
    })
}

/// Full-domain status of an affine candidate from its weights alone.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineWeightCheck {
    pub valid: bool,
    pub min_weight: f64,
    pub weight_sum: f64,
}

/// `G_w` is an e-merging function on the whole orthant iff `w >= 0` and
/// `sum w <= 1`.
pub fn check_affine_weights(w: &[f64]) -> AffineWeightCheck {
    let min_weight = w.iter().copied().fold(f64::INFINITY, f64::min);
    let weight_sum: f64 = w.iter().sum();
    AffineWeightCheck {
        valid: min_weight >= -SIGN_EPS && weight_sum <= 1.0 + SIGN_EPS,
        min_weight,
        weight_sum,
    }
}
