//! Combined (CR) and scaled combined (SCR) ranking-matrices, and the
//! cumulative objectives both solvers maximize.
//!
//! SCR entries are rationals `Σ_k a^k_ij / (n̄^k(n̄^k-1))`. They are stored as
//! integer numerators over the least common multiple of the judges'
//! denominators, so objective values compare exactly and alternative optima
//! are never split or merged by rounding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::pairs2;
use crate::ranking::{Instance, Ranking, RankingMatrix};

/// The two correlation coefficients a consensus can be built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficient {
    TauX,
    TauXHat,
}

impl Coefficient {
    pub const BOTH: [Coefficient; 2] = [Coefficient::TauX, Coefficient::TauXHat];

    pub fn name(&self) -> &'static str {
        match self {
            Coefficient::TauX => "tau_x",
            Coefficient::TauXHat => "tau_x_hat",
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau_x" => Ok(Coefficient::TauX),
            "tau_x_hat" => Ok(Coefficient::TauXHat),
            _ => Err(Error::InvalidParameter(format!("unknown coefficient {s:?} (expected tau_x or tau_x_hat)"))),
        }
    }
}

/// Integer pairwise weights with two denominators: `entry_denominator` turns
/// a weight into the matrix entry, `correlation_denominator` turns an inner
/// product with a ranking-matrix into the summed correlation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    pub(crate) n: usize,
    pub(crate) weights: Vec<i64>,
    pub(crate) entry_denominator: i64,
    pub(crate) correlation_denominator: i64,
    /// Constant added (in weight units) when converting to a correlation sum;
    /// accounts for judges excluded from the matrix.
    pub(crate) offset: i64,
}

impl WeightMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> i64 {
        self.weights[i * self.n + j]
    }

    pub fn entry_denominator(&self) -> i64 {
        self.entry_denominator
    }

    pub fn correlation_denominator(&self) -> i64 {
        self.correlation_denominator
    }

    /// `Σ_ij w_ij r_ij` in integer weight units.
    pub fn inner_product(&self, r: &RankingMatrix) -> i64 {
        assert_eq!(r.size(), self.n);
        self.weights.iter().zip(r.entries()).map(|(&w, &x)| w * x as i64).sum()
    }

    /// `Σ_{i≠j} |w_ij|` in integer weight units.
    pub fn abs_sum(&self) -> i64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.weight(i, j)).sum()).collect()
    }

    pub fn to_correlation(&self, units: i64) -> f64 {
        (units + self.offset) as f64 / self.correlation_denominator as f64
    }
}

/// A matrix of pairwise aggregate preferences that a consensus is scored against.
pub trait PairwiseMatrix {
    fn size(&self) -> usize;
    fn entry(&self, i: usize, j: usize) -> f64;
    fn weights(&self) -> WeightMatrix;
}

/// Sum of the judges' ranking-matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinedMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl CombinedMatrix {
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }
}

impl PairwiseMatrix for CombinedMatrix {
    fn size(&self) -> usize {
        self.n
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.get(i, j) as f64
    }

    fn weights(&self) -> WeightMatrix {
        WeightMatrix {
            n: self.n,
            weights: self.entries.clone(),
            entry_denominator: 1,
            correlation_denominator: pairs2(self.n).max(1),
            offset: 0,
        }
    }
}

/// Sum of the judges' ranking-matrices, each divided by `n̄^k(n̄^k-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaledCombinedMatrix {
    n: usize,
    numerators: Vec<i64>,
    denominator: i64,
    skipped_judges: usize,
}

impl ScaledCombinedMatrix {
    /// Judges ranking fewer than two objects; they contribute nothing.
    pub fn skipped_judges(&self) -> usize {
        self.skipped_judges
    }

    pub fn numerator(&self, i: usize, j: usize) -> i64 {
        self.numerators[i * self.n + j]
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.numerator(i, j) as f64 / self.denominator as f64
    }
}

impl PairwiseMatrix for ScaledCombinedMatrix {
    fn size(&self) -> usize {
        self.n
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }

    fn weights(&self) -> WeightMatrix {
        WeightMatrix {
            n: self.n,
            weights: self.numerators.clone(),
            entry_denominator: self.denominator,
            correlation_denominator: self.denominator,
            offset: 0,
        }
    }
}

pub fn combined_matrix(inst: &Instance) -> CombinedMatrix {
    let n = inst.universe_size();
    let mut entries = vec![0i64; n * n];
    for judge in inst.judges() {
        let m = RankingMatrix::from_ranking(judge);
        for (e, &a) in entries.iter_mut().zip(m.entries()) {
            *e += a as i64;
        }
    }
    CombinedMatrix { n, entries }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

pub fn scaled_combined_matrix(inst: &Instance) -> Result<ScaledCombinedMatrix> {
    let n = inst.universe_size();
    let mut denominator = 1i64;
    let mut skipped_judges = 0;
    for judge in inst.judges() {
        let m = judge.ranked_count();
        if m < 2 {
            skipped_judges += 1;
            continue;
        }
        let d = pairs2(m);
        denominator = (denominator / gcd(denominator, d)).checked_mul(d).ok_or(Error::Overflow)?;
    }
    let mut numerators = vec![0i64; n * n];
    for judge in inst.judges() {
        let m = judge.ranked_count();
        if m < 2 {
            continue;
        }
        let factor = denominator / pairs2(m);
        let matrix = RankingMatrix::from_ranking(judge);
        for (e, &a) in numerators.iter_mut().zip(matrix.entries()) {
            *e = e.checked_add(a as i64 * factor).ok_or(Error::Overflow)?;
        }
    }
    Ok(ScaledCombinedMatrix { n, numerators, denominator, skipped_judges })
}

/// Weights for the requested coefficient, plus the number of judges whose
/// ranking covers fewer than two objects.
///
/// Such judges have an all-zero ranking-matrix. Under `tau_x_hat` each one
/// still correlates 1 with any ranking, which the returned matrix carries as a
/// constant offset so that [`WeightMatrix::to_correlation`] equals the direct
/// sum over all judges.
pub fn weights_for(inst: &Instance, coefficient: Coefficient) -> Result<(WeightMatrix, usize)> {
    let skipped = inst.judges().iter().filter(|j| j.ranked_count() < 2).count();
    let weights = match coefficient {
        Coefficient::TauX => combined_matrix(inst).weights(),
        Coefficient::TauXHat => {
            let mut w = scaled_combined_matrix(inst)?.weights();
            w.offset = (skipped as i64).checked_mul(w.correlation_denominator).ok_or(Error::Overflow)?;
            w
        }
    };
    Ok((weights, skipped))
}

/// Inner product of the matrix with the ranking-matrix of a complete `r`.
///
/// For an SCR this is `Σ_k tau_x_hat(r, a^k)`; for a CR divide by `n(n-1)`
/// to obtain `Σ_k tau_x(r, a^k)`.
pub fn cumulative_objective<M: PairwiseMatrix + ?Sized>(m: &M, r: &Ranking) -> Result<f64> {
    if r.len() != m.size() {
        return Err(Error::LengthMismatch { expected: m.size(), found: r.len() });
    }
    r.ensure_complete()?;
    let w = m.weights();
    Ok(w.inner_product(&RankingMatrix::from_ranking(r)) as f64 / w.entry_denominator as f64)
}

/// Summed correlation of a complete `r` with every judge, evaluated through
/// the aggregate matrix.
pub fn cumulative_correlation(inst: &Instance, coefficient: Coefficient, r: &Ranking) -> Result<f64> {
    let (w, _) = weights_for(inst, coefficient)?;
    if r.len() != w.n {
        return Err(Error::LengthMismatch { expected: w.n, found: r.len() });
    }
    r.ensure_complete()?;
    Ok(w.to_correlation(w.inner_product(&RankingMatrix::from_ranking(r))))
}

/// `Σ_{i≠j} |m_ij|`, which no complete ranking's objective can exceed.
pub fn upper_bound<M: PairwiseMatrix + ?Sized>(m: &M) -> f64 {
    let w = m.weights();
    w.abs_sum() as f64 / w.entry_denominator as f64
}
