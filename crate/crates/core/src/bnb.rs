//! Exact branch and bound over complete weak orders, returning every ranking
//! that attains the optimal cumulative correlation.
//!
//! Objects are inserted one at a time, in the order given by the start
//! solution's object-ordering, into the equivalence classes of the partial
//! ranking built so far. With `m` classes there are `2m + 1` placements: a new
//! class before each existing class, a tie with each class, or a new class at
//! the end. Every placement fixes the new object as preferred, tied or
//! dispreferred with respect to each placed object, and each weak order is
//! reached by exactly one insertion sequence.
//!
//! The penalty of a node is the agreement it gives up on its decided pairs
//! relative to the best relation each pair could take on its own. It never
//! decreases down the tree, so a node whose penalty exceeds the incumbent
//! minimum cannot lead to an optimum. Nodes that tie the incumbent are kept,
//! which is what makes the returned set complete.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::aggregation::{weights_for, Coefficient, WeightMatrix};
use crate::error::{Error, Result};
use crate::ranking::{dense_rank_descending, psi, Instance, Ranking, RankingMatrix};

#[derive(Debug, Clone, Default)]
pub struct BnbOptions {
    /// Complete ranking that seeds the incumbent and fixes the insertion order.
    pub start_solution: Option<Ranking>,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl BnbOptions {
    pub fn with_node_limit(limit: u64) -> Self {
        BnbOptions { node_limit: Some(limit), ..Default::default() }
    }

    fn check(&self) -> Result<()> {
        if self.node_limit == Some(0) {
            return Err(Error::InvalidParameter("node_limit must be positive".into()));
        }
        if self.time_limit == Some(Duration::ZERO) {
            return Err(Error::InvalidParameter("time_limit must be positive".into()));
        }
        Ok(())
    }
}

/// Every consensus ranking with the optimal objective.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalitySet {
    pub coefficient: Coefficient,
    /// Canonical (dense) complete rankings, sorted lexicographically.
    pub rankings: Vec<Ranking>,
    /// Summed correlation of each member with all judges.
    pub objective: f64,
    /// `Σ|m_ij|` of the aggregate matrix minus the objective's inner product,
    /// in matrix-entry units.
    pub penalty: f64,
    pub nodes_explored: u64,
    /// False when a node or time limit stopped the search early.
    pub proven_complete: bool,
    /// Judges ranking fewer than two objects, excluded from the search.
    pub skipped_judges: usize,
}

impl OptimalitySet {
    pub fn len(&self) -> usize {
        self.rankings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rankings.is_empty()
    }
}

/// Orders objects by non-increasing row sum of the aggregate matrix; equal
/// row sums share a position.
pub fn default_start(inst: &Instance, coefficient: Coefficient) -> Result<Ranking> {
    let (w, _) = weights_for(inst, coefficient)?;
    Ok(start_from_weights(&w))
}

pub fn start_from_weights(w: &WeightMatrix) -> Ranking {
    dense_rank_descending(&w.row_sums())
}

pub fn solve(inst: &Instance, coefficient: Coefficient, opts: &BnbOptions) -> Result<OptimalitySet> {
    let n = inst.universe_size();
    if n < 2 {
        return Err(Error::TooFewObjects { needed: 2, found: n });
    }
    let (weights, skipped) = weights_for(inst, coefficient)?;
    if skipped == inst.len() {
        return Err(Error::EmptyInstance);
    }
    let out = solve_weights(&weights, coefficient, opts)?;
    Ok(OptimalitySet { skipped_judges: skipped, ..out })
}

/// Runs the search directly on a weight matrix.
pub fn solve_weights(weights: &WeightMatrix, coefficient: Coefficient, opts: &BnbOptions) -> Result<OptimalitySet> {
    opts.check()?;
    let n = weights.size();
    let start = match &opts.start_solution {
        Some(s) => {
            if s.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: s.len() });
            }
            s.ensure_complete()?;
            s.canonical()
        }
        None => start_from_weights(weights),
    };
    let order: Vec<usize> = psi(&start).objects().collect();

    let mut search = Search::new(weights, order, opts);
    search.incumbent = search.loss_of(&start);
    search.run();

    let proven_complete = !search.aborted;
    let nodes_explored = search.nodes;
    let mut rankings = std::mem::take(&mut search.saved);
    if rankings.is_empty() {
        // stopped before reaching a leaf; the start is the best known ranking
        rankings.push(start);
    }
    rankings.sort();
    rankings.dedup();

    let units = weights.inner_product(&RankingMatrix::from_ranking(&rankings[0]));
    Ok(OptimalitySet {
        coefficient,
        objective: weights.to_correlation(units),
        penalty: (weights.abs_sum() - units) as f64 / weights.entry_denominator() as f64,
        rankings,
        nodes_explored,
        proven_complete,
        skipped_judges: 0,
    })
}

struct Search {
    n: usize,
    order: Vec<usize>,
    // contribution of "row object preferred to column object", and of a tie
    prefer: Vec<i64>,
    tie: Vec<i64>,
    best: Vec<i64>,
    classes: Vec<Vec<usize>>,
    incumbent: i64,
    saved: Vec<Ranking>,
    nodes: u64,
    aborted: bool,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
}

impl Search {
    fn new(w: &WeightMatrix, order: Vec<usize>, opts: &BnbOptions) -> Self {
        let n = w.size();
        let mut prefer = vec![0; n * n];
        let mut tie = vec![0; n * n];
        let mut best = vec![0; n * n];
        for v in 0..n {
            for u in 0..n {
                if u == v {
                    continue;
                }
                let (vu, uv) = (w.weight(v, u), w.weight(u, v));
                prefer[v * n + u] = vu - uv;
                tie[v * n + u] = vu + uv;
                best[v * n + u] = (vu - uv).abs().max(vu + uv);
            }
        }
        Search {
            n,
            order,
            prefer,
            tie,
            best,
            classes: Vec::with_capacity(n),
            incumbent: i64::MAX,
            saved: Vec::new(),
            nodes: 0,
            aborted: false,
            node_limit: opts.node_limit,
            deadline: opts.time_limit.map(|t| Instant::now() + t),
        }
    }

    fn loss_of(&self, r: &Ranking) -> i64 {
        let mut loss = 0;
        for v in 0..self.n {
            for u in 0..v {
                let k = v * self.n + u;
                let contribution = match r.relation(v, u).expect("complete") {
                    std::cmp::Ordering::Less => self.prefer[k],
                    std::cmp::Ordering::Equal => self.tie[k],
                    std::cmp::Ordering::Greater => -self.prefer[k],
                };
                loss += self.best[k] - contribution;
            }
        }
        loss
    }

    fn run(&mut self) {
        if self.n == 0 {
            return;
        }
        self.nodes += 1;
        self.classes.push(vec![self.order[0]]);
        self.descend(1, 0);
        self.classes.pop();
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        self.aborted = self.node_limit.is_some_and(|limit| self.nodes >= limit)
            || (self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d));
        self.aborted
    }

    fn leaf(&mut self, loss: i64) {
        if loss < self.incumbent {
            self.incumbent = loss;
            self.saved.clear();
        }
        let mut positions = vec![None; self.n];
        for (c, class) in self.classes.iter().enumerate() {
            for &o in class {
                positions[o] = Some(c as u32 + 1);
            }
        }
        self.saved.push(Ranking::from_raw(positions));
    }

    fn descend(&mut self, depth: usize, loss: i64) {
        if depth == self.n {
            self.leaf(loss);
            return;
        }
        let v = self.order[depth];
        let m = self.classes.len();
        // per-class loss when v is preferred to / tied with / dispreferred to the class
        let mut lp = vec![0i64; m];
        let mut lt = vec![0i64; m];
        let mut ld = vec![0i64; m];
        for (c, class) in self.classes.iter().enumerate() {
            for &u in class {
                let k = v * self.n + u;
                lp[c] += self.best[k] - self.prefer[k];
                lt[c] += self.best[k] - self.tie[k];
                ld[c] += self.best[k] + self.prefer[k];
            }
        }
        // suffix sums of lp: cost of v preferred to classes c..m
        let mut pref_suffix = vec![0i64; m + 1];
        for c in (0..m).rev() {
            pref_suffix[c] = pref_suffix[c + 1] + lp[c];
        }
        let mut disp_prefix = 0i64;
        for t in 0..=m {
            // new class in front of class t
            let cost = loss + disp_prefix + pref_suffix[t];
            if cost <= self.incumbent {
                if self.out_of_budget() {
                    return;
                }
                self.nodes += 1;
                self.classes.insert(t, vec![v]);
                self.descend(depth + 1, cost);
                self.classes.remove(t);
                if self.aborted {
                    return;
                }
            }
            if t == m {
                break;
            }
            // tie with class t
            let cost = loss + disp_prefix + lt[t] + pref_suffix[t + 1];
            if cost <= self.incumbent {
                if self.out_of_budget() {
                    return;
                }
                self.nodes += 1;
                self.classes[t].push(v);
                self.descend(depth + 1, cost);
                self.classes[t].pop();
                if self.aborted {
                    return;
                }
            }
            disp_prefix += ld[t];
        }
    }
}
