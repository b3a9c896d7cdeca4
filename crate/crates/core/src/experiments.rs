//! Simulation studies over generated instances.
//!
//! Decisiveness: how many alternative optima each coefficient returns as the
//! dispersion grows. Fairness: how close the consensus stays to the majority's
//! ground truth when a minority of spammers or contrarians joins.
//!
//! Every replicate `s` derives its instance seed from `(base_seed, s)` only, so
//! all grid cells share the same random streams. Replicates run in parallel and
//! are merged in a fixed order, which keeps reports deterministic.

use std::time::Duration;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregation::Coefficient;
use crate::bnb::{solve, BnbOptions, OptimalitySet};
use crate::error::{Error, Result};
use crate::io::FORMAT_VERSION;
use crate::measures::{tau_x, tau_x_hat};
use crate::ranking::Ranking;
use crate::sampling::{
    generate_instance, judge_rng, Generator, Majority, Minority, MinorityKind, ScenarioSpec, SizeDist,
};

pub const DEFAULT_NODE_LIMIT: u64 = 5_000_000;

/// Instance seed for replicate `replicate`.
pub fn replicate_seed(base_seed: u64, replicate: u64) -> u64 {
    judge_rng(base_seed, replicate).gen()
}

/// Mean and sample standard deviation (0 with fewer than two values).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn solver_options(node_limit: u64, time_limit_secs: Option<f64>) -> Result<BnbOptions> {
    let time_limit = match time_limit_secs {
        None => None,
        Some(t) if t.is_finite() && t > 0.0 => Some(Duration::from_secs_f64(t)),
        Some(t) => return Err(Error::InvalidParameter(format!("time limit {t} must be positive"))),
    };
    Ok(BnbOptions { node_limit: Some(node_limit), time_limit, start_solution: None })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecisivenessConfig {
    pub n: usize,
    pub k: usize,
    pub seeds: usize,
    pub base_seed: u64,
    pub generator: Generator,
    pub phis: Vec<f64>,
    pub size_dist: SizeDist,
    pub node_limit: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<f64>,
}

impl Default for DecisivenessConfig {
    fn default() -> Self {
        DecisivenessConfig {
            n: 8,
            k: 25,
            seeds: 10,
            base_seed: 0,
            generator: Generator::Rime2,
            phis: vec![0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95],
            size_dist: SizeDist::new(2, 6),
            node_limit: DEFAULT_NODE_LIMIT,
            time_limit_secs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisivenessRow {
    pub phi: f64,
    pub measure: Coefficient,
    pub avg_num_optima: f64,
    pub sd_num_optima: f64,
    pub instances_solved: usize,
    pub instances_timed_out: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisivenessReport {
    pub format_version: u32,
    pub config: DecisivenessConfig,
    pub rows: Vec<DecisivenessRow>,
}

impl DecisivenessReport {
    pub fn row(&self, phi: f64, measure: Coefficient) -> Option<&DecisivenessRow> {
        self.rows.iter().find(|r| r.phi == phi && r.measure == measure)
    }
}

fn solve_both(spec: &ScenarioSpec, opts: &BnbOptions) -> Result<Vec<OptimalitySet>> {
    let inst = generate_instance(spec)?;
    Coefficient::BOTH.iter().map(|&c| solve(&inst, c, opts)).collect()
}

pub fn run_decisiveness(config: &DecisivenessConfig) -> Result<DecisivenessReport> {
    if config.seeds == 0 || config.phis.is_empty() {
        return Err(Error::InvalidParameter("need at least one seed and one phi".into()));
    }
    let opts = solver_options(config.node_limit, config.time_limit_secs)?;
    let jobs: Vec<(usize, usize)> =
        (0..config.phis.len()).flat_map(|p| (0..config.seeds).map(move |s| (p, s))).collect();
    let results: Vec<Vec<OptimalitySet>> = jobs
        .par_iter()
        .map(|&(p, s)| {
            let spec = ScenarioSpec::simple(
                config.n,
                config.k,
                config.generator,
                config.phis[p],
                config.size_dist,
                replicate_seed(config.base_seed, s as u64),
            );
            solve_both(&spec, &opts)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (p, &phi) in config.phis.iter().enumerate() {
        let cell = &results[p * config.seeds..(p + 1) * config.seeds];
        for (m, &measure) in Coefficient::BOTH.iter().enumerate() {
            let sets: Vec<&OptimalitySet> = cell.iter().map(|r| &r[m]).collect();
            let counts: Vec<f64> = sets.iter().filter(|s| s.proven_complete).map(|s| s.len() as f64).collect();
            let (avg, sd) = mean_sd(&counts);
            rows.push(DecisivenessRow {
                phi,
                measure,
                avg_num_optima: avg,
                sd_num_optima: sd,
                instances_solved: counts.len(),
                instances_timed_out: sets.len() - counts.len(),
            });
        }
    }
    Ok(DecisivenessReport { format_version: FORMAT_VERSION, config: config.clone(), rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FairnessConfig {
    pub n: usize,
    pub k: usize,
    pub seeds: usize,
    pub base_seed: u64,
    pub generator: Generator,
    pub majority: Majority,
    pub minority_kind: MinorityKind,
    pub minority_phi: f64,
    /// Minority proportions; 0 runs the majority alone.
    pub alphas: Vec<f64>,
    pub minority_size_dists: Vec<SizeDist>,
    pub node_limit: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<f64>,
}

impl Default for FairnessConfig {
    fn default() -> Self {
        FairnessConfig {
            n: 8,
            k: 20,
            seeds: 10,
            base_seed: 0,
            generator: Generator::Rime2,
            majority: Majority { reference: None, phi: 0.05, size_dist: SizeDist::new(2, 4) },
            minority_kind: MinorityKind::Contrarians,
            minority_phi: 0.05,
            alphas: vec![0.0, 0.1, 0.2, 0.3, 0.4],
            minority_size_dists: vec![SizeDist::new(2, 4), SizeDist::new(5, 7)],
            node_limit: DEFAULT_NODE_LIMIT,
            time_limit_secs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessRow {
    pub alpha: f64,
    pub minority_kind: MinorityKind,
    /// `U(l,u)`, or `-` when there is no minority.
    pub minority_size_dist: String,
    pub measure: Coefficient,
    pub avg_sgs: f64,
    pub sd_sgs: f64,
    pub instances_solved: usize,
    pub instances_timed_out: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub format_version: u32,
    /// SGS is averaged over the optima of each instance, then across seeds.
    pub averaging: String,
    pub config: FairnessConfig,
    pub rows: Vec<FairnessRow>,
}

impl FairnessReport {
    pub fn row(&self, alpha: f64, minority_size_dist: Option<SizeDist>, measure: Coefficient) -> Option<&FairnessRow> {
        let label = minority_size_dist.map_or_else(|| "-".to_string(), |d| d.to_string());
        self.rows.iter().find(|r| r.alpha == alpha && r.minority_size_dist == label && r.measure == measure)
    }
}

/// Mean `tau_x_hat` between each optimum and the ground truth. Both rankings
/// are complete, so this also equals the mean `tau_x`.
pub fn solution_ground_truth_similarity(optima: &[Ranking], truth: &Ranking) -> Result<f64> {
    if optima.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let mut total = 0.0;
    for r in optima {
        let hat = tau_x_hat(r, truth)?;
        let plain = tau_x(r, truth)?;
        assert!((hat - plain).abs() < 1e-12, "complete rankings give equal tau_x and tau_x_hat");
        total += hat;
    }
    Ok(total / optima.len() as f64)
}

pub fn run_fairness(config: &FairnessConfig) -> Result<FairnessReport> {
    if config.seeds == 0 || config.alphas.is_empty() {
        return Err(Error::InvalidParameter("need at least one seed and one alpha".into()));
    }
    let opts = solver_options(config.node_limit, config.time_limit_secs)?;
    let mut cells: Vec<(f64, Option<SizeDist>)> = Vec::new();
    for &alpha in &config.alphas {
        if alpha == 0.0 {
            cells.push((alpha, None));
        } else {
            if config.minority_size_dists.is_empty() {
                return Err(Error::InvalidParameter("minority_size_dists is empty".into()));
            }
            cells.extend(config.minority_size_dists.iter().map(|&d| (alpha, Some(d))));
        }
    }
    let truth = config.majority.reference.clone().unwrap_or_else(|| Ranking::identity(config.n));
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..config.seeds).map(move |s| (c, s))).collect();
    let results: Vec<Vec<OptimalitySet>> = jobs
        .par_iter()
        .map(|&(c, s)| {
            let (alpha, dist) = cells[c];
            let spec = ScenarioSpec {
                n: config.n,
                k: config.k,
                generator: config.generator,
                seed: replicate_seed(config.base_seed, s as u64),
                majority: config.majority.clone(),
                minority: dist.map(|size_dist| Minority {
                    alpha,
                    kind: config.minority_kind,
                    phi: config.minority_phi,
                    size_dist,
                }),
            };
            solve_both(&spec, &opts)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (c, &(alpha, dist)) in cells.iter().enumerate() {
        let cell = &results[c * config.seeds..(c + 1) * config.seeds];
        for (m, &measure) in Coefficient::BOTH.iter().enumerate() {
            let sets: Vec<&OptimalitySet> = cell.iter().map(|r| &r[m]).collect();
            let sgs = sets
                .iter()
                .filter(|s| s.proven_complete)
                .map(|s| solution_ground_truth_similarity(&s.rankings, &truth))
                .collect::<Result<Vec<f64>>>()?;
            let (avg, sd) = mean_sd(&sgs);
            rows.push(FairnessRow {
                alpha,
                minority_kind: config.minority_kind,
                minority_size_dist: dist.map_or_else(|| "-".to_string(), |d| d.to_string()),
                measure,
                avg_sgs: avg,
                sd_sgs: sd,
                instances_solved: sgs.len(),
                instances_timed_out: sets.len() - sgs.len(),
            });
        }
    }
    Ok(FairnessReport {
        format_version: FORMAT_VERSION,
        averaging: "per-instance mean over optima, then mean across seeds".into(),
        config: config.clone(),
        rows,
    })
}

fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

impl DecisivenessReport {
    pub fn to_csv(&self) -> Result<String> {
        rows_to_csv(&self.rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl FairnessReport {
    pub fn to_csv(&self) -> Result<String> {
        rows_to_csv(&self.rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_sd_basics() {
        assert_eq!(mean_sd(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
        assert!(mean_sd(&[]).0.is_nan());
    }

    #[test]
    fn replicate_seed_is_stable() {
        assert_eq!(replicate_seed(5, 3), replicate_seed(5, 3));
        assert_ne!(replicate_seed(5, 3), replicate_seed(5, 4));
    }

    #[test]
    fn single_judge_gives_one_optimum() {
        let cfg = DecisivenessConfig {
            n: 4,
            k: 1,
            seeds: 3,
            phis: vec![0.3],
            size_dist: SizeDist::new(4, 4),
            ..Default::default()
        };
        let rep = run_decisiveness(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 2);
        for r in &rep.rows {
            assert_eq!(r.avg_num_optima, 1.0);
            assert_eq!(r.sd_num_optima, 0.0);
            assert_eq!(r.instances_solved, 3);
        }
    }

    #[test]
    fn sgs_of_truth_is_one() {
        let t = Ranking::identity(5);
        assert_eq!(solution_ground_truth_similarity(std::slice::from_ref(&t), &t).unwrap(), 1.0);
        assert!(solution_ground_truth_similarity(&[], &t).is_err());
    }

    #[test]
    fn fairness_cells_and_csv() {
        let cfg = FairnessConfig {
            n: 5,
            k: 6,
            seeds: 2,
            majority: Majority { reference: None, phi: 0.3, size_dist: SizeDist::new(2, 3) },
            alphas: vec![0.0, 0.2],
            minority_size_dists: vec![SizeDist::new(4, 5)],
            ..Default::default()
        };
        let rep = run_fairness(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 4);
        assert!(rep.row(0.0, None, Coefficient::TauX).is_some());
        assert!(rep.row(0.2, Some(SizeDist::new(4, 5)), Coefficient::TauXHat).is_some());
        let csv = rep.to_csv().unwrap();
        assert!(csv.starts_with("alpha,minority_kind,minority_size_dist,measure,avg_sgs,sd_sgs"));
        assert_eq!(rep, run_fairness(&cfg).unwrap());
    }

    #[test]
    fn bad_configs_rejected() {
        let cfg = DecisivenessConfig { seeds: 0, ..Default::default() };
        assert!(run_decisiveness(&cfg).is_err());
        let cfg = DecisivenessConfig { time_limit_secs: Some(-1.0), ..Default::default() };
        assert!(run_decisiveness(&cfg).is_err());
    }

    #[test]
    fn partial_config_keeps_defaults() {
        let cfg: DecisivenessConfig = serde_json::from_str(r#"{"n": 5, "seeds": 3}"#).unwrap();
        assert_eq!(cfg, DecisivenessConfig { n: 5, seeds: 3, ..Default::default() });
        let cfg: FairnessConfig = serde_json::from_str(r#"{"alphas": [0.0]}"#).unwrap();
        assert_eq!(cfg, FairnessConfig { alphas: vec![0.0], ..Default::default() });
        assert!(serde_json::from_str::<FairnessConfig>(r#"{"alpha": [0.0]}"#).is_err());
    }
}
