//! Counterexample certificates.
//!
//! A certificate is a finite probability space `{x_1, ..., x_n}` with null
//! `Q = sum_j q_j delta_{x_j}` and a table `E_k(x_j)`. Every column has
//! `Q`-mean exactly 1, so each `E_k` is an e-variable for `{Q}`; the merged
//! column `F(E_1, ..., E_K)` has mean above 1, so `F` is not an e-merging
//! function. Checking this needs nothing but the table.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::certify::EnvelopeResult;
use crate::corpus::{CandidateFunction, GridFunction};
use crate::error::{Error, Result};

pub const PROB_SUM_TOL: f64 = 1e-12;
pub const MEAN_TOL: f64 = 1e-9;
pub const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub k: usize,
    pub n: usize,
    pub atoms: Vec<String>,
    pub probs: Vec<f64>,
    /// Row `j` holds `(E_1(x_j), ..., E_K(x_j))`.
    pub evar_table: Vec<Vec<f64>>,
    pub f_values: Vec<f64>,
    pub merged_expectation: f64,
}

/// Turns an envelope optimum at the ones-vector into a certificate.
pub fn build_certificate(g: &GridFunction, env: &EnvelopeResult, tol: f64) -> Result<Certificate> {
    if env.target.len() != g.dim() || env.target.iter().any(|&t| t != 1.0) {
        return Err(Error::InvalidParameter(
            "certificates are built from the envelope at the ones-vector".into(),
        ));
    }
    if env.weights.iter().any(|&(j, _)| j >= g.len()) {
        return Err(Error::InvalidParameter("envelope support refers to a missing grid point".into()));
    }
    let probs: Vec<f64> = env.weights.iter().map(|&(_, q)| q).collect();
    let evar_table: Vec<Vec<f64>> = env.weights.iter().map(|&(j, _)| g.point(j).to_vec()).collect();
    let f_values: Vec<f64> = env.weights.iter().map(|&(j, _)| g.value(j)).collect();
    let merged_expectation: f64 = probs.iter().zip(&f_values).map(|(q, f)| q * f).sum();
    if merged_expectation <= 1.0 + tol {
        return Err(Error::NotACounterexample(merged_expectation));
    }
    let n = probs.len();
    let cert = Certificate {
        k: g.dim(),
        n,
        atoms: (1..=n).map(|j| format!("x{j}")).collect(),
        probs,
        evar_table,
        f_values,
        merged_expectation,
    };
    let report = verify_certificate(&cert, None);
    if !report.passed() {
        return Err(Error::SolverFault(format!(
            "built certificate does not verify: {}",
            report.failures().join("; ")
        )));
    }
    Ok(cert)
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// Recomputed `sum_j q_j F_j - 1`; NaN when the structure is broken.
    pub margin: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn structure_problem(c: &Certificate) -> Option<String> {
    if c.k == 0 || c.n == 0 {
        return Some(format!("K={} and n={} must both be positive", c.k, c.n));
    }
    let lens = [c.atoms.len(), c.probs.len(), c.evar_table.len(), c.f_values.len()];
    if lens.iter().any(|&l| l != c.n) {
        return Some(format!(
            "n={} but atoms/probs/evar_table/f_values have lengths {lens:?}",
            c.n
        ));
    }
    if let Some((j, row)) = c.evar_table.iter().enumerate().find(|(_, r)| r.len() != c.k) {
        return Some(format!("evar_table row {j} has {} entries, expected K={}", row.len(), c.k));
    }
    let all = c.probs.iter().chain(&c.f_values).chain(c.evar_table.iter().flatten());
    if all.into_iter().chain(std::iter::once(&c.merged_expectation)).any(|x| !x.is_finite()) {
        return Some("non-finite entry".into());
    }
    None
}

/// Recomputes every derived quantity of `c` from its raw fields.
///
/// Never errors: malformed certificates produce failed checks.
pub fn verify_certificate(c: &Certificate, f: Option<&CandidateFunction>) -> VerificationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check { name: name.to_string(), passed, detail })
    };

    if let Some(problem) = structure_problem(c) {
        push("structure", false, problem);
        return VerificationReport { checks, margin: f64::NAN };
    }
    push("structure", true, format!("K={}, n={}", c.k, c.n));

    let mut labels = c.atoms.clone();
    labels.sort();
    labels.dedup();
    push(
        "atoms distinct",
        labels.len() == c.n,
        format!("{} distinct labels for {} atoms", labels.len(), c.n),
    );

    let min_q = c.probs.iter().copied().fold(f64::INFINITY, f64::min);
    push("probabilities nonnegative", min_q >= 0.0, format!("min q = {min_q}"));

    let q_sum: f64 = c.probs.iter().sum();
    push(
        "probabilities sum to 1",
        (q_sum - 1.0).abs() <= PROB_SUM_TOL,
        format!("sum q = {q_sum}"),
    );

    let min_e = c.evar_table.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    push("e-variables nonnegative", min_e >= 0.0, format!("min E = {min_e}"));

    for kk in 0..c.k {
        let mean: f64 = c.probs.iter().zip(&c.evar_table).map(|(q, row)| q * row[kk]).sum();
        push(
            &format!("E_{} has mean 1", kk + 1),
            (mean - 1.0).abs() <= MEAN_TOL,
            format!("mean = {mean}"),
        );
    }

    let min_f = c.f_values.iter().copied().fold(f64::INFINITY, f64::min);
    push("merged values nonnegative", min_f >= 0.0, format!("min F = {min_f}"));

    let merged: f64 = c.probs.iter().zip(&c.f_values).map(|(q, v)| q * v).sum();
    push(
        "merged expectation consistent",
        (merged - c.merged_expectation).abs() <= MEAN_TOL,
        format!("recomputed {merged}, stored {}", c.merged_expectation),
    );
    let margin = merged - 1.0;
    push(
        "merged expectation exceeds 1",
        margin > MARGIN_TOL,
        format!("margin {margin}"),
    );

    if let Some(f) = f {
        let mut worst = 0.0f64;
        let mut problem = None;
        for (j, (row, &fv)) in c.evar_table.iter().zip(&c.f_values).enumerate() {
            match f.evaluate(row) {
                Ok(v) => worst = worst.max((v - fv).abs()),
                Err(e) => {
                    problem = Some(format!("row {j}: {e}"));
                    break;
                }
            }
        }
        match problem {
            Some(p) => push("f values match candidate", false, p),
            None => push(
                "f values match candidate",
                worst <= MEAN_TOL,
                format!("max deviation {worst}"),
            ),
        }
    }

    VerificationReport { checks, margin }
}

/// Empirical mean with its standard errors.
#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub expected: f64,
    pub mean: f64,
    /// From the certificate's population variance.
    pub se: f64,
    /// From the sample variance (0 for a single draw).
    pub sample_se: f64,
}

impl Estimate {
    pub fn within(&self, n_se: f64) -> bool {
        (self.mean - self.expected).abs() <= n_se * self.se + 1e-12
    }
}

pub const MC_GENERATOR: &str = "ChaCha20Rng (rand_chacha 0.3), seed_from_u64";

#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub generator: &'static str,
    pub seed: u64,
    pub draws: u64,
    pub atom_counts: Vec<u64>,
    pub evar_means: Vec<Estimate>,
    pub merged: Estimate,
}

/// Samples atoms i.i.d. from the certificate's null and reports empirical
/// means of every `E_k` and of `f(E)`.
pub fn monte_carlo_check(c: &Certificate, f: &CandidateFunction, draws: u64, seed: u64) -> Result<McReport> {
    if draws == 0 {
        return Err(Error::InvalidDraws(draws));
    }
    if let Some(problem) = structure_problem(c) {
        return Err(Error::InvalidParameter(format!("certificate: {problem}")));
    }
    let merged_at: Vec<f64> = c.evar_table.iter().map(|row| f.evaluate(row)).collect::<Result<_>>()?;
    let dist = WeightedIndex::new(&c.probs)
        .map_err(|e| Error::InvalidParameter(format!("certificate probabilities: {e}")))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);

    let mut counts = vec![0u64; c.n];
    for _ in 0..draws {
        counts[dist.sample(&mut rng)] += 1;
    }

    let estimate = |column: &dyn Fn(usize) -> f64, expected: f64| {
        let total = draws as f64;
        let mean = (0..c.n).map(|j| counts[j] as f64 * column(j)).sum::<f64>() / total;
        let sample_var = if draws > 1 {
            (0..c.n).map(|j| counts[j] as f64 * (column(j) - mean).powi(2)).sum::<f64>() / (total - 1.0)
        } else {
            0.0
        };
        let pop_mean: f64 = (0..c.n).map(|j| c.probs[j] * column(j)).sum();
        let pop_var: f64 = (0..c.n).map(|j| c.probs[j] * (column(j) - pop_mean).powi(2)).sum();
        Estimate {
            expected,
            mean,
            se: (pop_var / total).sqrt(),
            sample_se: (sample_var / total).sqrt(),
        }
    };

    let evar_means = (0..c.k).map(|kk| estimate(&|j| c.evar_table[j][kk], 1.0)).collect();
    let merged = estimate(&|j| merged_at[j], c.merged_expectation);
    Ok(McReport { generator: MC_GENERATOR, seed, draws, atom_counts: counts, evar_means, merged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::envelope_at;
    use crate::corpus::{lattice_grid, sample_on_grid, Kind};

    fn product_certificate() -> Certificate {
        Certificate {
            k: 2,
            n: 2,
            atoms: vec!["x1".into(), "x2".into()],
            probs: vec![0.5, 0.5],
            evar_table: vec![vec![0.0, 0.0], vec![2.0, 2.0]],
            f_values: vec![0.0, 4.0],
            merged_expectation: 2.0,
        }
    }

    fn product() -> CandidateFunction {
        CandidateFunction::new(Kind::Product, 2).unwrap()
    }

    #[test]
    fn build_from_product_envelope() {
        let g = sample_on_grid(&product(), lattice_grid(2, &[0.0, 2.0]).unwrap()).unwrap();
        let env = envelope_at(&g, &[1.0, 1.0]).unwrap();
        let c = build_certificate(&g, &env, 1e-9).unwrap();
        assert!((c.merged_expectation - 2.0).abs() < 1e-12);
        assert_eq!(c.atoms, vec!["x1", "x2"]);
        assert_eq!(c.evar_table, vec![vec![0.0, 0.0], vec![2.0, 2.0]]);
        assert!(verify_certificate(&c, Some(&product())).passed());
    }

    #[test]
    fn build_rejects_non_counterexample() {
        let f = CandidateFunction::new(Kind::ArithmeticMean, 2).unwrap();
        let g = sample_on_grid(&f, lattice_grid(2, &[0.0, 1.0, 2.0]).unwrap()).unwrap();
        let env = envelope_at(&g, &[1.0, 1.0]).unwrap();
        assert!(matches!(build_certificate(&g, &env, 1e-9), Err(Error::NotACounterexample(_))));
    }

    #[test]
    fn verify_product_certificate() {
        let r = verify_certificate(&product_certificate(), Some(&product()));
        assert!(r.passed(), "{:?}", r.failures());
        assert!((r.margin - 1.0).abs() < 1e-15);
    }

    #[test]
    fn verify_perturbed_weights() {
        let mut c = product_certificate();
        c.probs = vec![0.6, 0.4];
        let r = verify_certificate(&c, Some(&product()));
        assert!(!r.passed());
        let e1 = r.check("E_1 has mean 1").unwrap();
        assert!(!e1.passed);
        assert!(e1.detail.contains("0.8"));
        assert!(r.check("probabilities sum to 1").unwrap().passed);
    }

    #[test]
    fn verify_edited_expectation() {
        let mut c = product_certificate();
        c.f_values = vec![0.0, 3.0];
        let r = verify_certificate(&c, None);
        assert!(!r.check("merged expectation consistent").unwrap().passed);
        assert!(r.check("merged expectation exceeds 1").unwrap().passed);
    }

    #[test]
    fn verify_wrong_candidate_and_malformed() {
        let max = CandidateFunction::new(Kind::Maximum, 2).unwrap();
        let r = verify_certificate(&product_certificate(), Some(&max));
        assert!(!r.check("f values match candidate").unwrap().passed);

        let mut c = product_certificate();
        c.evar_table[1].pop();
        let r = verify_certificate(&c, None);
        assert!(!r.passed());
        assert_eq!(r.checks.len(), 1);

        let mut c = product_certificate();
        c.n = 3;
        assert!(!verify_certificate(&c, None).passed());
    }

    #[test]
    fn monte_carlo_single_draw() {
        let r = monte_carlo_check(&product_certificate(), &product(), 1, 3).unwrap();
        assert_eq!(r.atom_counts.iter().sum::<u64>(), 1);
        assert_eq!(r.atom_counts.iter().filter(|&&c| c == 1).count(), 1);
        assert!(r.merged.mean == 0.0 || r.merged.mean == 4.0);
        assert_eq!(r.merged.sample_se, 0.0);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo_check(&product_certificate(), &product(), 1000, 11).unwrap();
        let b = monte_carlo_check(&product_certificate(), &product(), 1000, 11).unwrap();
        assert_eq!(a.atom_counts, b.atom_counts);
        let c = monte_carlo_check(&product_certificate(), &product(), 1000, 12).unwrap();
        assert_ne!(a.atom_counts, c.atom_counts);
    }

    #[test]
    fn monte_carlo_product_million() {
        let r = monte_carlo_check(&product_certificate(), &product(), 1_000_000, 2024).unwrap();
        // population variance of {0, 4} at (1/2, 1/2) is 4, so se = 0.002
        assert!((r.merged.se - 0.002).abs() < 1e-15);
        assert!(r.merged.within(3.0), "{:?}", r.merged);
        for e in &r.evar_means {
            assert!((e.se - 0.001).abs() < 1e-15);
            assert!(e.within(3.0), "{e:?}");
        }
    }

    #[test]
    fn monte_carlo_errors() {
        assert_eq!(
            monte_carlo_check(&product_certificate(), &product(), 0, 1).unwrap_err(),
            Error::InvalidDraws(0)
        );
        let mut c = product_certificate();
        c.probs = vec![0.0, 0.0];
        assert!(monte_carlo_check(&c, &product(), 10, 1).is_err());
    }
}
