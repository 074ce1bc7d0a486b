//! Certification of e-merging functions.
//!
//! A candidate merging function `F: [0,inf)^K -> [0,inf)` is sampled on a
//! finite grid. The concave envelope of the sampled restriction at the
//! all-ones vector decides the outcome:
//!
//! * envelope <= 1: an affine dominator `G_w(u) = 1 + sum_k w_k (u_k - 1)`
//!   is fitted to the grid ([`certify::fit_dominator`]);
//! * envelope > 1: the optimal convex combination is turned into a finite
//!   probability space whose coordinate projections are e-variables with
//!   mean exactly 1 while the merged value has mean above 1
//!   ([`witness::Certificate`]). Such a certificate disproves validity on
//!   the full domain, not just on the grid.
//!
//! All linear programs are solved by the dense two-phase simplex in
//! [`simplex`]; [`oracle`] recomputes envelopes by exhaustive enumeration of
//! basic solutions so the LP path can be checked independently.

pub mod certify;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod io;
pub mod oracle;
pub mod simplex;
pub mod witness;

pub use certify::{certify, envelope_at, fit_dominator, AffineDominator, EnvelopeResult, FitMode, Verdict};
pub use corpus::{lattice_grid, sample_on_grid, CandidateFunction, GridFunction, Kind};
pub use error::{Error, Result};
pub use witness::{build_certificate, monte_carlo_check, verify_certificate, Certificate};
