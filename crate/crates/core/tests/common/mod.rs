#![allow(dead_code)]

use emcert::corpus::{CandidateFunction, GridFunction, Kind};
use emcert::oracle::{random_grid, ValueLaw};
use emcert::simplex::{Bound, LinearProgram, Relation, Sense};
use rand::prelude::*;
use rand_chacha::ChaCha20Rng;

/// Value law for corpus grid `i`: a mix of random tables (mostly invalid)
/// and builtin closed forms (valid and invalid).
pub fn law_for(i: u64, k: usize) -> ValueLaw {
    let builtin = |kind| ValueLaw::Builtin(CandidateFunction::new(kind, k).unwrap());
    match i % 10 {
        0 | 1 => ValueLaw::Uniform { v_max: 2.0 },
        2 => ValueLaw::Uniform { v_max: 1.2 },
        3 => builtin(Kind::ArithmeticMean),
        4 => builtin(Kind::Product),
        5 => builtin(Kind::Maximum),
        6 => builtin(Kind::Minimum),
        7 => builtin(Kind::Constant(1.0)),
        8 => builtin(Kind::Projection(1 + (i as usize / 10) % k)),
        _ => {
            let w: Vec<f64> = (0..k).map(|j| 0.9 / k as f64 * (1.0 + 0.1 * j as f64) / 1.2).collect();
            builtin(Kind::Affine { w, clamp: false })
        }
    }
}

/// The seeded corpus: K in 1..=3, at most 10 points including the
/// ones-vector and the origin.
pub fn corpus_grids(count: u64) -> Vec<GridFunction> {
    (0..count)
        .map(|i| {
            let k = 1 + (i % 3) as usize;
            let n = 1 + ((i / 3) % 8) as usize;
            random_grid(1000 + i, k, n, 3.0, &law_for(i, k)).unwrap()
        })
        .collect()
}

/// Random LP with `r, m <= 12` and entries in `[-5, 5]`. Odd seeds are
/// built to be feasible and bounded (primal point and dual certificate
/// planted); even seeds are unconstrained draws.
pub fn random_lp(seed: u64) -> LinearProgram {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let r = rng.gen_range(1..=12);
    let m = rng.gen_range(1..=12);
    let a: Vec<Vec<f64>> = (0..r).map(|_| (0..m).map(|_| rng.gen_range(-5.0..=5.0)).collect()).collect();
    let relations: Vec<Relation> = (0..r)
        .map(|_| match rng.gen_range(0..3) {
            0 => Relation::Le,
            1 => Relation::Ge,
            _ => Relation::Eq,
        })
        .collect();
    let bounds: Vec<Bound> =
        (0..m).map(|_| if rng.gen_bool(0.2) { Bound::Free } else { Bound::NonNegative }).collect();

    if seed % 2 == 0 {
        let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
        let c = (0..m).map(|_| rng.gen_range(-5.0..=5.0)).collect();
        let b = (0..r).map(|_| rng.gen_range(-5.0..=5.0)).collect();
        return LinearProgram { sense, objective: c, rows: a, relations, rhs: b, bounds };
    }

    let x0: Vec<f64> = bounds
        .iter()
        .map(|b| match b {
            Bound::Free => rng.gen_range(-2.0..=2.0),
            Bound::NonNegative if rng.gen_bool(0.3) => 0.0,
            Bound::NonNegative => rng.gen_range(0.0..=2.0),
        })
        .collect();
    let b: Vec<f64> = a
        .iter()
        .zip(&relations)
        .map(|(row, rel)| {
            let ax: f64 = row.iter().zip(&x0).map(|(p, q)| p * q).sum();
            let s = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..=2.0) };
            match rel {
                Relation::Le => ax + s,
                Relation::Ge => ax - s,
                Relation::Eq => ax,
            }
        })
        .collect();
    // maximize: Le rows need y >= 0, Ge rows y <= 0
    let y0: Vec<f64> = relations
        .iter()
        .map(|rel| {
            let v = rng.gen_range(0.0..=2.0);
            match rel {
                Relation::Le => v,
                Relation::Ge => -v,
                Relation::Eq => v - 1.0,
            }
        })
        .collect();
    let c: Vec<f64> = (0..m)
        .map(|j| {
            let aty: f64 = (0..r).map(|i| a[i][j] * y0[i]).sum();
            match bounds[j] {
                Bound::Free => aty,
                Bound::NonNegative => aty - rng.gen_range(0.0..=1.0),
            }
        })
        .collect();
    LinearProgram { sense: Sense::Maximize, objective: c, rows: a, relations, rhs: b, bounds }
}

/// Random `u <= v` pair in `[0, 5]^k`.
pub fn ordered_pair(rng: &mut impl Rng, k: usize) -> (Vec<f64>, Vec<f64>) {
    let u: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..=5.0)).collect();
    let v = u.iter().map(|x| x + rng.gen_range(0.0..=3.0)).collect();
    (u, v)
}
