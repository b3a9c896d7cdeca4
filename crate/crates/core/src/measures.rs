//! Pairwise comparison measures between rankings.
//!
//! Correlations (`tau`, `tau_x`, `tau_x_hat`) are matrix inner products of
//! ranking-matrices over a fixed integer denominator. Distances (`d_ks` and its
//! projected/normalized variants) are computed independently from sign
//! differences so that the linear links between the two families can be
//! checked rather than assumed.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::{common_ranked, Ranking, RankingMatrix};

/// Divisor applied to the summed sign differences of `d_ks`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    gamma: f64,
}

impl MeasureConfig {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
        }
        Ok(MeasureConfig { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl MeasureConfig {
    /// `gamma = 4`: a tie against a strict preference costs 1/2.
    pub const DEFAULT: MeasureConfig = MeasureConfig { gamma: 4.0 };
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig::DEFAULT
    }
}

/// Every measure the library computes between two rankings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Tau,
    TauX,
    TauXHat,
    DKs,
    DPks,
    DNpks,
}

impl Measure {
    pub const ALL: [Measure; 6] = [Measure::Tau, Measure::TauX, Measure::TauXHat, Measure::DKs, Measure::DPks, Measure::DNpks];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Tau => "tau",
            Measure::TauX => "tau_x",
            Measure::TauXHat => "tau_x_hat",
            Measure::DKs => "d_ks",
            Measure::DPks => "d_pks",
            Measure::DNpks => "d_npks",
        }
    }

    pub fn evaluate(&self, a: &Ranking, b: &Ranking, cfg: &MeasureConfig) -> Result<f64> {
        match self {
            Measure::Tau => kendall_tau(a, b),
            Measure::TauX => tau_x(a, b),
            Measure::TauXHat => tau_x_hat(a, b),
            Measure::DKs => d_ks(a, b, cfg),
            Measure::DPks => d_pks(a, b, cfg),
            Measure::DNpks => d_npks(a, b, cfg),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown measure {s:?}")))
    }
}

/// Integer ingredients shared by the correlation measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairStats {
    /// Universe size.
    pub n: usize,
    /// Number of objects ranked by both rankings.
    pub n_bar: usize,
    /// `Σ_ij a_ij b_ij`.
    pub inner_product: i64,
}

impl PairStats {
    pub fn new(a: &Ranking, b: &Ranking) -> Result<Self> {
        a.ensure_same_universe(b)?;
        let inner_product = RankingMatrix::from_ranking(a).inner_product(&RankingMatrix::from_ranking(b));
        Ok(PairStats { n: a.len(), n_bar: common_ranked(a, b).len(), inner_product })
    }

    /// `(numerator, denominator)` of `tau_x`.
    pub fn tau_x_ratio(&self) -> Result<(i64, i64)> {
        if self.n < 2 {
            return Err(Error::TooFewObjects { needed: 2, found: self.n });
        }
        Ok((self.inner_product, pairs2(self.n)))
    }

    /// `(numerator, denominator)` of `tau_x_hat`; `(1, 1)` when fewer than two
    /// objects are ranked in common.
    pub fn tau_x_hat_ratio(&self) -> (i64, i64) {
        if self.n_bar < 2 {
            (1, 1)
        } else {
            (self.inner_product, pairs2(self.n_bar))
        }
    }
}

/// `m(m-1)`: the number of ordered pairs of distinct objects.
pub(crate) fn pairs2(m: usize) -> i64 {
    let m = m as i64;
    m * (m - 1)
}

fn sign(o: Ordering) -> i64 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

// Σ_i Σ_j |sign(a_i - a_j) - sign(b_i - b_j)| over the given objects.
fn sign_disagreement(a: &Ranking, b: &Ranking, objects: &[usize]) -> i64 {
    let mut total = 0;
    for &i in objects {
        for &j in objects {
            let sa = sign(a.relation(i, j).expect("ranked"));
            let sb = sign(b.relation(i, j).expect("ranked"));
            total += (sa - sb).abs();
        }
    }
    total
}

/// Kemeny-Snell distance between complete rankings.
pub fn d_ks(a: &Ranking, b: &Ranking, cfg: &MeasureConfig) -> Result<f64> {
    a.ensure_same_universe(b)?;
    a.ensure_complete()?;
    b.ensure_complete()?;
    let all: Vec<usize> = (0..a.len()).collect();
    Ok(sign_disagreement(a, b, &all) as f64 / cfg.gamma)
}

/// `d_ks` on the objects ranked by both; zero when fewer than two.
pub fn d_pks(a: &Ranking, b: &Ranking, cfg: &MeasureConfig) -> Result<f64> {
    a.ensure_same_universe(b)?;
    let common = common_ranked(a, b);
    Ok(sign_disagreement(a, b, &common) as f64 / cfg.gamma)
}

/// `d_pks` divided by the number of common pairs; zero when fewer than two.
pub fn d_npks(a: &Ranking, b: &Ranking, cfg: &MeasureConfig) -> Result<f64> {
    a.ensure_same_universe(b)?;
    let common = common_ranked(a, b);
    let m = common.len();
    if m < 2 {
        return Ok(0.0);
    }
    let d = sign_disagreement(a, b, &common) as f64 / cfg.gamma;
    Ok(d / (pairs2(m) as f64 / 2.0))
}

/// Tau-extended correlation: ranking-matrix inner product over `n(n-1)`.
pub fn tau_x(a: &Ranking, b: &Ranking) -> Result<f64> {
    let (num, den) = PairStats::new(a, b)?.tau_x_ratio()?;
    Ok(num as f64 / den as f64)
}

/// Scaled tau-extended correlation: inner product over `n̄(n̄-1)`, where `n̄`
/// counts the objects ranked by both. Returns 1 when `n̄ < 2`.
pub fn tau_x_hat(a: &Ranking, b: &Ranking) -> Result<f64> {
    let (num, den) = PairStats::new(a, b)?.tau_x_hat_ratio();
    Ok(num as f64 / den as f64)
}

/// Classic Kendall tau on strict complete rankings.
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> Result<f64> {
    a.ensure_same_universe(b)?;
    for r in [a, b] {
        r.ensure_complete()?;
        r.ensure_strict()?;
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::TooFewObjects { needed: 2, found: n });
    }
    let mut score = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            score += if a.relation(i, j) == b.relation(i, j) { 1 } else { -1 };
        }
    }
    Ok(score as f64 / (pairs2(n) / 2) as f64)
}

/// `t ↦ 1/2 - t/2`, mapping `tau_x_hat` onto `d_npks`.
pub fn npks_from_tau_hat(t: f64) -> Result<f64> {
    check_range(t, -1.0, 1.0)?;
    Ok(0.5 - 0.5 * t)
}

/// Inverse of [`npks_from_tau_hat`].
pub fn tau_hat_from_npks(d: f64) -> Result<f64> {
    check_range(d, 0.0, 1.0)?;
    Ok(1.0 - 2.0 * d)
}

fn check_range(value: f64, min: f64, max: f64) -> Result<()> {
    if !(min..=max).contains(&value) {
        return Err(Error::OutOfRange { value, min, max });
    }
    Ok(())
}
