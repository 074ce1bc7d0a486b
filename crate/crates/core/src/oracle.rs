//! Brute-force envelope evaluation by enumerating basic solutions.
//!
//! With `K + 1` equality rows, an optimal vertex of the envelope LP uses at
//! most `K + 1` grid points with linearly independent lifted columns
//! `(u_j, 1)`. Enumerating every such subset, solving its square-or-tall
//! system exactly and keeping the nonnegative solutions reaches the LP
//! optimum without touching the simplex code.

use itertools::Itertools;
use rand::prelude::*;
use rand_chacha::ChaCha20Rng;

use crate::corpus::{check_point, CandidateFunction, GridFunction};
use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 25;
pub const MAX_DIM: usize = 4;
const SINGULAR: f64 = 1e-12;
const NEG_Q: f64 = -1e-12;
const CONSISTENCY: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Feasible { value: f64, support: Vec<(usize, f64)> },
    Infeasible,
}

impl OracleOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            OracleOutcome::Feasible { value, .. } => Some(*value),
            OracleOutcome::Infeasible => None,
        }
    }
}

/// Solves `m q = rhs` for a tall-or-square `m` (rows x cols, rows >= cols).
/// Returns `None` when the columns are dependent or the system is
/// inconsistent.
fn solve_tall(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for c in 0..cols {
        let (p, piv) = (c..rows)
            .map(|r| (r, m[r][c].abs()))
            .fold((c, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv < SINGULAR {
            return None;
        }
        m.swap(c, p);
        rhs.swap(c, p);
        for r in c + 1..rows {
            let f = m[r][c] / m[c][c];
            if f == 0.0 {
                continue;
            }
            for cc in c..cols {
                m[r][cc] -= f * m[c][cc];
            }
            rhs[r] -= f * rhs[c];
        }
    }
    if rhs[cols..].iter().any(|v| v.abs() > CONSISTENCY) {
        return None;
    }
    let mut q = vec![0.0; cols];
    for c in (0..cols).rev() {
        let s: f64 = (c + 1..cols).map(|cc| m[c][cc] * q[cc]).sum();
        q[c] = (rhs[c] - s) / m[c][c];
    }
    Some(q)
}

/// Maximum of `sum q_j F_j` over convex combinations of at most `K + 1`
/// grid points averaging to `target`.
///
/// Ties are broken toward the lexicographically smallest support.
pub fn brute_force_envelope(g: &GridFunction, target: &[f64]) -> Result<OracleOutcome> {
    let k = g.dim();
    let n = g.len();
    if n > MAX_POINTS || k > MAX_DIM {
        return Err(Error::GuardExceeded { n, k });
    }
    check_point(target, k, "oracle target")?;

    let mut rhs = target.to_vec();
    rhs.push(1.0);
    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;

    for size in 1..=(k + 1).min(n) {
        for subset in (0..n).combinations(size) {
            let m: Vec<Vec<f64>> = (0..=k)
                .map(|row| {
                    subset
                        .iter()
                        .map(|&j| if row < k { g.point(j)[row] } else { 1.0 })
                        .collect()
                })
                .collect();
            let Some(q) = solve_tall(m, rhs.clone()) else {
                continue;
            };
            if q.iter().any(|&v| v < NEG_Q) {
                continue;
            }
            let q: Vec<f64> = q.into_iter().map(|v| v.max(0.0)).collect();
            // independent residual check against the raw data
            let residual = (0..=k)
                .map(|row| {
                    let lhs: f64 = subset
                        .iter()
                        .zip(&q)
                        .map(|(&j, qj)| qj * if row < k { g.point(j)[row] } else { 1.0 })
                        .sum();
                    (lhs - rhs[row]).abs()
                })
                .fold(0.0, f64::max);
            if residual > CONSISTENCY {
                continue;
            }
            let value: f64 = subset.iter().zip(&q).map(|(&j, qj)| qj * g.value(j)).sum();
            let better = match &best {
                None => true,
                Some((bv, bs, _)) => value > *bv || (value == *bv && subset < *bs),
            };
            if better {
                best = Some((value, subset, q));
            }
        }
    }

    Ok(match best {
        None => OracleOutcome::Infeasible,
        Some((value, subset, q)) => OracleOutcome::Feasible {
            value,
            support: subset.into_iter().zip(q).filter(|&(_, qj)| qj > 0.0).collect(),
        },
    })
}

#[derive(Debug, Clone)]
pub enum ValueLaw {
    Uniform { v_max: f64 },
    Builtin(CandidateFunction),
}

/// A seeded random grid: `n` points uniform on `[0, coord_range]^K`, plus
/// the ones-vector and the origin when not already present.
pub fn random_grid(seed: u64, k: usize, n: usize, coord_range: f64, law: &ValueLaw) -> Result<GridFunction> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("random grid needs K >= 1 and n >= 1 (K={k}, n={n})")));
    }
    if !(coord_range.is_finite() && coord_range > 0.0) {
        return Err(Error::InvalidParameter(format!("coordinate range {coord_range}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 2);
    for _ in 0..n {
        let p: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..=coord_range)).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    for anchor in [vec![1.0; k], vec![0.0; k]] {
        if !points.contains(&anchor) {
            points.push(anchor);
        }
    }
    let values = match law {
        ValueLaw::Uniform { v_max } => {
            if !(v_max.is_finite() && *v_max >= 0.0) {
                return Err(Error::InvalidParameter(format!("v_max {v_max}")));
            }
            points.iter().map(|_| rng.gen_range(0.0..=*v_max)).collect()
        }
        ValueLaw::Builtin(f) => points.iter().map(|p| f.evaluate(p)).collect::<Result<Vec<_>>>()?,
    };
    GridFunction::new(points, values)
}
