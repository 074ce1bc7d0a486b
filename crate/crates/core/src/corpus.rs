//! Candidate merging functions and the grids they are sampled on.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Default cap on the number of lattice points.
pub const DEFAULT_GRID_CAP: usize = 1_000_000;

/// A finite sample of a merging function: points in the nonnegative orthant
/// and the function values at those points.
#[derive(Debug, Clone)]
pub struct GridFunction {
    k: usize,
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
    index: HashMap<Vec<u64>, usize>,
}

fn point_key(u: &[f64]) -> Vec<u64> {
    // +0.0 folds -0.0 into 0.0 so both address the same point
    u.iter().map(|x| (x + 0.0).to_bits()).collect()
}

pub(crate) fn check_point(u: &[f64], k: usize, what: &str) -> Result<()> {
    if u.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: u.len() });
    }
    for &x in u {
        if !x.is_finite() {
            return Err(Error::NonFinite(what.to_string()));
        }
        if x < 0.0 {
            return Err(Error::NegativeValue { what: what.to_string(), value: x });
        }
    }
    Ok(())
}

impl GridFunction {
    pub fn new(points: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one point".into()));
        }
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: values.len() });
        }
        let k = points[0].len();
        if k == 0 {
            return Err(Error::InvalidParameter("dimension K must be at least 1".into()));
        }
        let mut index = HashMap::with_capacity(points.len());
        let mut clean = Vec::with_capacity(points.len());
        for (j, (p, &v)) in points.into_iter().zip(&values).enumerate() {
            check_point(&p, k, "grid point")?;
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("value at grid point {j}")));
            }
            if v < 0.0 {
                return Err(Error::NegativeValue { what: format!("value at grid point {p:?}"), value: v });
            }
            let p: Vec<f64> = p.into_iter().map(|x| x + 0.0).collect();
            if index.insert(point_key(&p), j).is_some() {
                return Err(Error::DuplicatePoint(p));
            }
            clean.push(p);
        }
        Ok(GridFunction { k, points: clean, values, index })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.points[j]
    }

    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    /// Exact lookup of a grid point; `None` when `u` is not on the grid.
    pub fn lookup(&self, u: &[f64]) -> Option<f64> {
        self.index.get(&point_key(u)).map(|&j| self.values[j])
    }

    /// Position of `u` in the grid, if present.
    pub fn position(&self, u: &[f64]) -> Option<usize> {
        self.index.get(&point_key(u)).copied()
    }
}

/// Closed-form or tabulated merging function families.
#[derive(Debug, Clone)]
pub enum Kind {
    /// `1 + sum_k w_k (u_k - 1)`, optionally clamped below at 0.
    Affine { w: Vec<f64>, clamp: bool },
    ArithmeticMean,
    Product,
    Maximum,
    Minimum,
    /// Returns coordinate `k` (1-based).
    Projection(usize),
    Constant(f64),
    Table(GridFunction),
}

#[derive(Debug, Clone)]
pub struct CandidateFunction {
    kind: Kind,
    k: usize,
}

impl CandidateFunction {
    pub fn new(kind: Kind, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("dimension K must be at least 1".into()));
        }
        match &kind {
            Kind::Affine { w, .. } => {
                if w.len() != k {
                    return Err(Error::DimensionMismatch { expected: k, got: w.len() });
                }
                if w.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFinite("affine weights".into()));
                }
            }
            Kind::Projection(i) => {
                if *i == 0 || *i > k {
                    return Err(Error::InvalidParameter(format!(
                        "projection index {i} outside 1..={k}"
                    )));
                }
            }
            Kind::Constant(c) => {
                if !c.is_finite() {
                    return Err(Error::NonFinite("constant".into()));
                }
                if *c < 0.0 {
                    return Err(Error::NegativeValue { what: "constant".into(), value: *c });
                }
            }
            Kind::Table(g) => {
                if g.dim() != k {
                    return Err(Error::DimensionMismatch { expected: k, got: g.dim() });
                }
            }
            _ => {}
        }
        Ok(CandidateFunction { kind, k })
    }

    pub fn affine(w: Vec<f64>) -> Result<Self> {
        let k = w.len();
        Self::new(Kind::Affine { w, clamp: false }, k)
    }

    pub fn table(g: GridFunction) -> Self {
        let k = g.dim();
        CandidateFunction { kind: Kind::Table(g), k }
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Affine { .. } => "affine",
            Kind::ArithmeticMean => "arithmetic_mean",
            Kind::Product => "product",
            Kind::Maximum => "maximum",
            Kind::Minimum => "minimum",
            Kind::Projection(_) => "projection",
            Kind::Constant(_) => "constant",
            Kind::Table(_) => "table",
        }
    }

    /// Evaluates the candidate at `u`.
    ///
    /// The unclamped affine kind returns its raw value, which is negative
    /// somewhere whenever the weights leave `{w >= 0, sum w <= 1}`.
    pub fn evaluate(&self, u: &[f64]) -> Result<f64> {
        check_point(u, self.k, "evaluation point")?;
        let v = match &self.kind {
            Kind::Affine { w, clamp } => {
                let raw = 1.0 + w.iter().zip(u).map(|(wk, uk)| wk * (uk - 1.0)).sum::<f64>();
                if *clamp {
                    raw.max(0.0)
                } else {
                    raw
                }
            }
            Kind::ArithmeticMean => u.iter().sum::<f64>() / self.k as f64,
            Kind::Product => u.iter().product(),
            Kind::Maximum => u.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Kind::Minimum => u.iter().copied().fold(f64::INFINITY, f64::min),
            Kind::Projection(i) => u[i - 1],
            Kind::Constant(c) => *c,
            Kind::Table(g) => g.lookup(u).ok_or_else(|| Error::OffGrid(u.to_vec()))?,
        };
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("{} value at {u:?}", self.name())));
        }
        Ok(v)
    }
}

/// Samples `f` at `points`. Rejects duplicate points and negative values.
pub fn sample_on_grid(f: &CandidateFunction, points: Vec<Vec<f64>>) -> Result<GridFunction> {
    let values = points.iter().map(|u| f.evaluate(u)).collect::<Result<Vec<_>>>()?;
    GridFunction::new(points, values)
}

/// Cartesian product `levels^K` in lexicographic order, capped at
/// [`DEFAULT_GRID_CAP`] points.
pub fn lattice_grid(k: usize, levels: &[f64]) -> Result<Vec<Vec<f64>>> {
    lattice_grid_capped(k, levels, DEFAULT_GRID_CAP)
}

pub fn lattice_grid_capped(k: usize, levels: &[f64], cap: usize) -> Result<Vec<Vec<f64>>> {
    if k == 0 {
        return Err(Error::InvalidParameter("dimension K must be at least 1".into()));
    }
    if levels.is_empty() {
        return Err(Error::InvalidParameter("lattice levels must be nonempty".into()));
    }
    for &l in levels {
        if !l.is_finite() {
            return Err(Error::NonFinite("lattice levels".into()));
        }
        if l < 0.0 {
            return Err(Error::NegativeValue { what: "lattice level".into(), value: l });
        }
    }
    if levels.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidParameter(
            "lattice levels must be sorted and distinct".into(),
        ));
    }
    let size = u32::try_from(k)
        .ok()
        .and_then(|e| levels.len().checked_pow(e))
        .filter(|&s| s <= cap)
        .ok_or(Error::GridTooLarge {
            size: levels.len().saturating_pow(k.min(u32::MAX as usize) as u32),
            cap,
        })?;

    let mut out = Vec::with_capacity(size);
    let mut idx = vec![0usize; k];
    loop {
        out.push(idx.iter().map(|&i| levels[i]).collect());
        // odometer: last coordinate varies fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < levels.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// One refinement round: adds midpoints between consecutive levels and
/// doubles every level, so both density and range grow.
pub fn refine_levels(levels: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = levels.to_vec();
    out.extend(levels.windows(2).map(|p| 0.5 * (p[0] + p[1])));
    out.extend(levels.iter().map(|l| 2.0 * l));
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(kind: Kind, k: usize) -> CandidateFunction {
        CandidateFunction::new(kind, k).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let aff = CandidateFunction::affine(vec![0.5, 0.5]).unwrap();
        assert_eq!(aff.evaluate(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(cf(Kind::Product, 2).evaluate(&[2.0, 2.0]).unwrap(), 4.0);
        assert_eq!(cf(Kind::ArithmeticMean, 2).evaluate(&[0.0, 2.0]).unwrap(), 1.0);
        assert_eq!(cf(Kind::Maximum, 3).evaluate(&[0.0, 2.0, 1.0]).unwrap(), 2.0);
        assert_eq!(cf(Kind::Minimum, 3).evaluate(&[0.5, 2.0, 1.0]).unwrap(), 0.5);
        assert_eq!(cf(Kind::Projection(2), 3).evaluate(&[0.5, 2.0, 1.0]).unwrap(), 2.0);
        assert_eq!(cf(Kind::Constant(1.5), 1).evaluate(&[7.0]).unwrap(), 1.5);
    }

    #[test]
    fn affine_raw_and_clamped() {
        let raw = CandidateFunction::affine(vec![0.6, 0.6]).unwrap();
        assert!((raw.evaluate(&[0.0, 0.0]).unwrap() + 0.2).abs() < 1e-15);
        let clamped = cf(Kind::Affine { w: vec![0.6, 0.6], clamp: true }, 2);
        assert_eq!(clamped.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        assert!((clamped.evaluate(&[2.0, 2.0]).unwrap() - 2.2).abs() < 1e-15);
    }

    #[test]
    fn evaluate_errors() {
        let p = cf(Kind::Product, 2);
        assert_eq!(
            p.evaluate(&[1.0]).unwrap_err(),
            Error::DimensionMismatch { expected: 2, got: 1 }
        );
        assert!(matches!(p.evaluate(&[-1.0, 1.0]), Err(Error::NegativeValue { .. })));
        assert!(matches!(p.evaluate(&[f64::NAN, 1.0]), Err(Error::NonFinite(_))));
        let g = GridFunction::new(vec![vec![0.0], vec![2.0]], vec![0.0, 2.0]).unwrap();
        let t = CandidateFunction::table(g);
        assert_eq!(t.evaluate(&[2.0]).unwrap(), 2.0);
        assert_eq!(t.evaluate(&[1.0]).unwrap_err(), Error::OffGrid(vec![1.0]));
    }

    #[test]
    fn constructor_validation() {
        assert!(CandidateFunction::new(Kind::Projection(0), 2).is_err());
        assert!(CandidateFunction::new(Kind::Projection(3), 2).is_err());
        assert!(CandidateFunction::new(Kind::Constant(-1.0), 2).is_err());
        assert!(CandidateFunction::new(Kind::Affine { w: vec![1.0], clamp: false }, 2).is_err());
        assert!(CandidateFunction::new(Kind::Product, 0).is_err());
    }

    #[test]
    fn sample_examples() {
        let g = sample_on_grid(&cf(Kind::Product, 2), vec![vec![0.0, 0.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(g.values(), &[0.0, 4.0]);

        let pts = vec![vec![0.0, 1.0], vec![3.0, 2.0], vec![5.0, 5.0]];
        let g = sample_on_grid(&cf(Kind::Constant(1.0), 2), pts).unwrap();
        assert_eq!(g.values(), &[1.0, 1.0, 1.0]);

        let aff = CandidateFunction::affine(vec![0.5, 0.5]).unwrap();
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0], vec![2.0, 2.0]];
        let g = sample_on_grid(&aff, pts).unwrap();
        assert_eq!(g.values(), &[0.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn sample_rejects_duplicates_and_negatives() {
        let p = cf(Kind::Product, 1);
        let err = sample_on_grid(&p, vec![vec![1.0], vec![1.0]]).unwrap_err();
        assert_eq!(err, Error::DuplicatePoint(vec![1.0]));
        // -0.0 and 0.0 are the same point
        let err = sample_on_grid(&p, vec![vec![0.0], vec![-0.0]]).unwrap_err();
        assert!(matches!(err, Error::DuplicatePoint(_)));

        let raw = CandidateFunction::affine(vec![0.6, 0.6]).unwrap();
        let err = sample_on_grid(&raw, vec![vec![0.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NegativeValue { .. }));
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(
            lattice_grid(2, &[0.0, 2.0]).unwrap(),
            vec![vec![0.0, 0.0], vec![0.0, 2.0], vec![2.0, 0.0], vec![2.0, 2.0]]
        );
        assert_eq!(
            lattice_grid(1, &[0.0, 1.0, 3.0]).unwrap(),
            vec![vec![0.0], vec![1.0], vec![3.0]]
        );
        assert_eq!(lattice_grid(3, &[0.0, 1.0]).unwrap().len(), 8);
    }

    #[test]
    fn lattice_errors() {
        assert!(matches!(
            lattice_grid(7, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]),
            Err(Error::GridTooLarge { .. })
        ));
        assert!(lattice_grid(2, &[]).is_err());
        assert!(lattice_grid(2, &[1.0, 0.0]).is_err());
        assert!(lattice_grid(2, &[1.0, 1.0]).is_err());
        assert!(lattice_grid(2, &[-1.0, 1.0]).is_err());
        assert!(matches!(
            lattice_grid_capped(2, &[0.0, 1.0, 2.0], 8),
            Err(Error::GridTooLarge { size: 9, cap: 8 })
        ));
    }

    #[test]
    fn refine_doubles_range_and_density() {
        assert_eq!(refine_levels(&[0.0, 1.0, 2.0]), vec![0.0, 0.5, 1.0, 1.5, 2.0, 4.0]);
        assert_eq!(refine_levels(&[0.0, 2.0]), vec![0.0, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn table_roundtrip_lookup() {
        let f = cf(Kind::Maximum, 2);
        let pts = lattice_grid(2, &[0.0, 0.5, 3.0]).unwrap();
        let g = sample_on_grid(&f, pts.clone()).unwrap();
        for u in &pts {
            assert_eq!(g.lookup(u).unwrap(), f.evaluate(u).unwrap());
        }
    }
}
