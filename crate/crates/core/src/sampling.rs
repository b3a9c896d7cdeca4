//! Mallows model sampling.
//!
//! [`rim_sample`] draws strict complete rankings through repeated insertion.
//! [`rime1_sample`] and [`rime2_sample`] produce incomplete rankings over a
//! subset of objects: the first samples on the projected reference, the second
//! samples on the full reference and then hides objects outside the subset.
//!
//! Randomness comes from [`judge_rng`], a ChaCha8 stream keyed by a base seed
//! and a judge index, so generated instances do not depend on sampling order.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::FORMAT_VERSION;
use crate::ranking::{psi, reverse, Instance, Ranking};

/// Lower end (exclusive) of the dispersion range used for spammer judges.
pub const SPAMMER_MIN_PHI: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MallowsParams {
    reference: Ranking,
    phi: f64,
}

impl MallowsParams {
    pub fn new(reference: Ranking, phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi <= 1.0) {
            return Err(Error::OutOfRange { value: phi, min: 0.0, max: 1.0 });
        }
        reference.ensure_complete()?;
        reference.ensure_strict()?;
        Ok(MallowsParams { reference, phi })
    }

    pub fn reference(&self) -> &Ranking {
        &self.reference
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn len(&self) -> usize {
        self.reference.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reference.is_empty()
    }

    /// Objects from best to worst in the reference.
    fn order(&self) -> Vec<usize> {
        psi(&self.reference).objects().collect()
    }

    /// `Z = Π_{i=1..n} (1 + φ + ... + φ^{i-1})`.
    pub fn normalization(&self) -> f64 {
        (1..=self.len()).map(|i| geometric_sum(self.phi, i)).product()
    }
}

fn geometric_sum(phi: f64, terms: usize) -> f64 {
    (0..terms).map(|e| phi.powi(e as i32)).sum()
}

/// Probabilities of inserting the `i`-th reference object at positions
/// `1..=i`: `p_ij = φ^{i-j} / (1 + φ + ... + φ^{i-1})`.
pub fn insertion_probabilities(phi: f64, i: usize) -> Vec<f64> {
    let z = geometric_sum(phi, i);
    (1..=i).map(|j| phi.powi((i - j) as i32) / z).collect()
}

/// Number of object pairs ordered differently by two strict complete rankings.
pub fn discordant_pairs(a: &Ranking, b: &Ranking) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::UniverseMismatch { left: a.len(), right: b.len() });
    }
    for r in [a, b] {
        r.ensure_complete()?;
        r.ensure_strict()?;
    }
    let n = a.len();
    Ok((0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| a.relation(i, j) != b.relation(i, j))
        .count())
}

/// `φ^{d(r, ā)} / Z` where `d` counts discordant pairs.
pub fn mallows_pmf(params: &MallowsParams, r: &Ranking) -> Result<f64> {
    let d = discordant_pairs(r, &params.reference)?;
    Ok(params.phi.powi(d as i32) / params.normalization())
}

/// Repeated insertion over `order`; returns objects best to worst.
fn insert_all<R: Rng + ?Sized>(order: &[usize], phi: f64, rng: &mut R) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(order.len());
    for (idx, &object) in order.iter().enumerate() {
        let i = idx + 1;
        let j = if i == 1 {
            0
        } else {
            WeightedIndex::new(insertion_probabilities(phi, i))
                .expect("insertion weights are positive")
                .sample(rng)
        };
        out.insert(j, object);
    }
    out
}

fn positions_from_order(n: usize, order: &[usize]) -> Ranking {
    let mut positions = vec![None; n];
    for (p, &o) in order.iter().enumerate() {
        positions[o] = Some(p as u32 + 1);
    }
    Ranking::from_raw(positions)
}

pub fn rim_sample<R: Rng + ?Sized>(params: &MallowsParams, rng: &mut R) -> Ranking {
    let order = insert_all(&params.order(), params.phi, rng);
    positions_from_order(params.len(), &order)
}

fn subset_mask(n: usize, subset: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &o in subset {
        if o >= n {
            return Err(Error::ObjectOutOfRange { index: o, n });
        }
        if std::mem::replace(&mut mask[o], true) {
            return Err(Error::DuplicateObject(o + 1));
        }
    }
    Ok(mask)
}

/// Samples on the reference projected to `subset`; other objects are unranked.
pub fn rime1_sample<R: Rng + ?Sized>(params: &MallowsParams, subset: &[usize], rng: &mut R) -> Result<Ranking> {
    let mask = subset_mask(params.len(), subset)?;
    if subset.is_empty() {
        return Err(Error::InvalidParameter("subset must contain at least one object".into()));
    }
    let projected: Vec<usize> = params.order().into_iter().filter(|&o| mask[o]).collect();
    let order = insert_all(&projected, params.phi, rng);
    Ok(positions_from_order(params.len(), &order))
}

/// Samples a full ranking, then keeps only `subset`, renumbered densely.
pub fn rime2_sample<R: Rng + ?Sized>(params: &MallowsParams, subset: &[usize], rng: &mut R) -> Result<Ranking> {
    let mask = subset_mask(params.len(), subset)?;
    let order = insert_all(&params.order(), params.phi, rng);
    let kept: Vec<usize> = order.into_iter().filter(|&o| mask[o]).collect();
    Ok(positions_from_order(params.len(), &kept))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Rim,
    Rime1,
    Rime2,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Rim => "rim",
            Generator::Rime1 => "rime1",
            Generator::Rime2 => "rime2",
        }
    }

    /// `Rim` ignores `subset` and always returns a complete ranking.
    pub fn sample<R: Rng + ?Sized>(&self, params: &MallowsParams, subset: &[usize], rng: &mut R) -> Result<Ranking> {
        match self {
            Generator::Rim => Ok(rim_sample(params, rng)),
            Generator::Rime1 => rime1_sample(params, subset, rng),
            Generator::Rime2 => rime2_sample(params, subset, rng),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rim" => Ok(Generator::Rim),
            "rime1" => Ok(Generator::Rime1),
            "rime2" => Ok(Generator::Rime2),
            _ => Err(Error::Parse(format!("unknown generator {s:?} (expected rim, rime1 or rime2)"))),
        }
    }
}

/// Independent RNG stream for one judge.
pub fn judge_rng(seed: u64, judge_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(judge_index);
    rng
}

/// Uniform integer subset size on `l..=u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeDist {
    pub l: usize,
    pub u: usize,
}

impl SizeDist {
    pub fn new(l: usize, u: usize) -> Self {
        SizeDist { l, u }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.l < 2 || self.l > self.u || self.u > n {
            return Err(Error::InvalidParameter(format!(
                "size distribution U({}, {}) must satisfy 2 <= l <= u <= n = {n}",
                self.l, self.u
            )));
        }
        Ok(())
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.gen_range(self.l..=self.u)
    }
}

impl fmt::Display for SizeDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U({},{})", self.l, self.u)
    }
}

impl FromStr for SizeDist {
    type Err = Error;

    /// Parses `l:u`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("subset size {s:?} must look like l:u"));
        let (l, u) = s.split_once(':').ok_or_else(bad)?;
        Ok(SizeDist { l: l.trim().parse().map_err(|_| bad())?, u: u.trim().parse().map_err(|_| bad())? })
    }
}

/// Draws a subset: size from `dist`, members from a seeded shuffle prefix.
/// Returns the members in ascending order.
pub fn draw_subset<R: Rng + ?Sized>(n: usize, dist: &SizeDist, rng: &mut R) -> Vec<usize> {
    let size = dist.draw(rng);
    let mut objects: Vec<usize> = (0..n).collect();
    objects.shuffle(rng);
    objects.truncate(size);
    objects.sort_unstable();
    objects
}

/// Draws `count` rankings; ranking `i` uses `judge_rng(seed, i)`. Without a
/// size distribution every ranking covers all objects.
pub fn sample_rankings(
    generator: Generator,
    params: &MallowsParams,
    sizes: Option<&SizeDist>,
    count: usize,
    seed: u64,
) -> Result<Vec<Ranking>> {
    let n = params.len();
    if let Some(d) = sizes {
        d.check(n)?;
    }
    (0..count)
        .map(|i| {
            let mut rng = judge_rng(seed, i as u64);
            let subset = match sizes {
                Some(d) => draw_subset(n, d, &mut rng),
                None => (0..n).collect(),
            };
            generator.sample(params, &subset, &mut rng)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinorityKind {
    /// Same reference, high dispersion.
    Spammers,
    /// Reversed reference.
    Contrarians,
}

impl MinorityKind {
    pub fn name(&self) -> &'static str {
        match self {
            MinorityKind::Spammers => "spammers",
            MinorityKind::Contrarians => "contrarians",
        }
    }
}

impl fmt::Display for MinorityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Majority {
    /// Ground truth; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Ranking>,
    pub phi: f64,
    pub size_dist: SizeDist,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Minority {
    pub alpha: f64,
    pub kind: MinorityKind,
    pub phi: f64,
    pub size_dist: SizeDist,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub n: usize,
    pub k: usize,
    pub generator: Generator,
    pub seed: u64,
    pub majority: Majority,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minority: Option<Minority>,
}

impl ScenarioSpec {
    /// Single-population scenario with an identity ground truth.
    pub fn simple(n: usize, k: usize, generator: Generator, phi: f64, size_dist: SizeDist, seed: u64) -> Self {
        ScenarioSpec { n, k, generator, seed, majority: Majority { reference: None, phi, size_dist }, minority: None }
    }

    pub fn ground_truth(&self) -> Ranking {
        self.majority.reference.clone().unwrap_or_else(|| Ranking::identity(self.n))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewObjects { needed: 2, found: self.n });
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if self.generator == Generator::Rim {
            return Err(Error::InvalidParameter("scenario generator must be rime1 or rime2".into()));
        }
        let truth = self.ground_truth();
        if truth.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: truth.len() });
        }
        MallowsParams::new(truth, self.majority.phi)?;
        self.majority.size_dist.check(self.n)?;
        if let Some(m) = &self.minority {
            if !(m.alpha > 0.0 && m.alpha < 0.5) {
                return Err(Error::InvalidParameter(format!("minority proportion {} must lie in (0, 0.5)", m.alpha)));
            }
            if !(m.phi > 0.0 && m.phi <= 1.0) {
                return Err(Error::OutOfRange { value: m.phi, min: 0.0, max: 1.0 });
            }
            if m.kind == MinorityKind::Spammers && m.phi <= SPAMMER_MIN_PHI {
                return Err(Error::InvalidParameter(format!(
                    "spammer dispersion {} must exceed {SPAMMER_MIN_PHI}",
                    m.phi
                )));
            }
            m.size_dist.check(self.n)?;
        }
        Ok(())
    }

    /// `(majority, minority)` judge counts; majority is `⌊(1-α)K⌋`.
    pub fn group_sizes(&self) -> (usize, usize) {
        match &self.minority {
            None => (self.k, 0),
            Some(m) => {
                let major = (((1.0 - m.alpha) * self.k as f64) + 1e-9).floor() as usize;
                (major, self.k - major)
            }
        }
    }
}

/// Samples every judge of the scenario. Majority judges come first; judge
/// `i` draws from `judge_rng(seed, i)`.
pub fn generate_instance(spec: &ScenarioSpec) -> Result<Instance> {
    spec.validate()?;
    let truth = spec.ground_truth();
    let majority = MallowsParams::new(truth.clone(), spec.majority.phi)?;
    let minority = match &spec.minority {
        None => None,
        Some(m) => {
            let reference = match m.kind {
                MinorityKind::Contrarians => reverse(&truth),
                MinorityKind::Spammers => truth.clone(),
            };
            Some((MallowsParams::new(reference, m.phi)?, m.size_dist))
        }
    };
    let (major, minor) = spec.group_sizes();
    let mut judges = Vec::with_capacity(spec.k);
    for i in 0..spec.k {
        let mut rng = judge_rng(spec.seed, i as u64);
        let (params, dist) = match (&minority, i >= major) {
            (Some((p, d)), true) => (p, d),
            _ => (&majority, &spec.majority.size_dist),
        };
        let subset = draw_subset(spec.n, dist, &mut rng);
        judges.push(spec.generator.sample(params, &subset, &mut rng)?);
    }
    let metadata = serde_json::json!({
        "format_version": FORMAT_VERSION,
        "scenario": spec,
        "majority_judges": major,
        "minority_judges": minor,
    });
    Ok(Instance::new(spec.n, judges)?.with_metadata(metadata))
}
