#![allow(dead_code)]

use std::cmp::Ordering;

use rand::Rng;
use rankagg::ranking::enumerate_weak_orders;
use rankagg::{Coefficient, Instance, Ranking};

pub fn rk(p: &[i64]) -> Ranking {
    Ranking::new(p.iter().map(|&x| (x > 0).then_some(x)).collect()).unwrap()
}

pub fn worked_example() -> Instance {
    let rows: [[i64; 5]; 11] = [
        [1, 2, 0, 0, 0],
        [1, 2, 0, 0, 0],
        [0, 1, 2, 0, 0],
        [0, 1, 2, 0, 0],
        [0, 0, 1, 2, 0],
        [0, 0, 1, 2, 0],
        [0, 0, 1, 2, 0],
        [0, 0, 0, 1, 2],
        [0, 0, 0, 1, 2],
        [0, 1, 0, 0, 2],
        [5, 4, 3, 2, 1],
    ];
    Instance::from_judges(rows.iter().map(|r| rk(r)).collect()).unwrap()
}

/// Random ranking with ties (positions drawn from a small range) and nulls.
pub fn random_ranking<R: Rng>(rng: &mut R, n: usize, null_prob: f64) -> Ranking {
    let levels = rng.gen_range(1..=n.max(1)) as i64;
    Ranking::new(
        (0..n)
            .map(|_| if rng.gen_bool(null_prob) { None } else { Some(rng.gen_range(1..=levels)) })
            .collect(),
    )
    .unwrap()
}

pub fn random_complete<R: Rng>(rng: &mut R, n: usize) -> Ranking {
    random_ranking(rng, n, 0.0)
}

pub fn random_strict<R: Rng>(rng: &mut R, n: usize) -> Ranking {
    use rand::seq::SliceRandom;
    let mut p: Vec<i64> = (1..=n as i64).collect();
    p.shuffle(rng);
    Ranking::new(p.into_iter().map(Some).collect()).unwrap()
}

/// Sign encoding computed straight from positions: +1 if `i` is ranked no
/// worse than `j`, -1 if worse, 0 on the diagonal or when either is unranked.
pub fn sign(r: &Ranking, i: usize, j: usize) -> i64 {
    if i == j {
        return 0;
    }
    match (r.position(i), r.position(j)) {
        (Some(a), Some(b)) if a <= b => 1,
        (Some(_), Some(_)) => -1,
        _ => 0,
    }
}

pub fn inner(a: &Ranking, b: &Ranking) -> i64 {
    let n = a.len();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| sign(a, i, j) * sign(b, i, j)).sum()
}

pub fn common(a: &Ranking, b: &Ranking) -> usize {
    (0..a.len()).filter(|&i| a.is_ranked(i) && b.is_ranked(i)).count()
}

pub fn oracle_tau_x(a: &Ranking, b: &Ranking) -> f64 {
    let n = a.len() as f64;
    inner(a, b) as f64 / (n * (n - 1.0))
}

pub fn oracle_tau_x_hat(a: &Ranking, b: &Ranking) -> f64 {
    let m = common(a, b) as f64;
    if m < 2.0 {
        1.0
    } else {
        inner(a, b) as f64 / (m * (m - 1.0))
    }
}

/// Pair disagreement count: opposite strict order counts 1, tie vs strict 1/2.
pub fn oracle_kemeny(a: &Ranking, b: &Ranking) -> f64 {
    let n = a.len();
    let mut d = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if let (Some(x), Some(y)) = (a.relation(i, j), b.relation(i, j)) {
                d += match (x, y) {
                    _ if x == y => 0.0,
                    (Ordering::Equal, _) | (_, Ordering::Equal) => 0.5,
                    _ => 1.0,
                };
            }
        }
    }
    d
}

/// Every complete weak order maximizing `score`, compared with tolerance.
pub fn argmax_weak_orders(n: usize, score: impl Fn(&Ranking) -> f64) -> (f64, Vec<Ranking>) {
    let all: Vec<(f64, Ranking)> = enumerate_weak_orders(n).unwrap().map(|w| (score(&w), w)).collect();
    let best = all.iter().map(|(s, _)| *s).fold(f64::NEG_INFINITY, f64::max);
    let mut set: Vec<Ranking> = all.into_iter().filter(|(s, _)| (s - best).abs() < 1e-9).map(|(_, w)| w).collect();
    set.sort();
    (best, set)
}

/// Direct sum of the coefficient over all judges.
pub fn direct_objective(inst: &Instance, c: Coefficient, r: &Ranking) -> f64 {
    inst.judges()
        .iter()
        .map(|j| match c {
            Coefficient::TauX => oracle_tau_x(r, j),
            Coefficient::TauXHat => oracle_tau_x_hat(r, j),
        })
        .sum()
}

pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, max_k: usize) -> Instance {
    let n = rng.gen_range(2..=max_n);
    let k = rng.gen_range(1..=max_k);
    loop {
        let judges: Vec<Ranking> = (0..k)
            .map(|_| {
                let null_prob = [0.0, 0.3, 0.6][rng.gen_range(0..3)];
                random_ranking(rng, n, null_prob)
            })
            .collect();
        if judges.iter().any(|j| j.ranked_count() >= 2) {
            return Instance::from_judges(judges).unwrap();
        }
    }
}

/// Mallows probabilities by brute force: `φ^d / Σ_perm φ^d`.
pub fn brute_mallows(n: usize, phi: f64) -> Vec<(Vec<usize>, f64)> {
    let perms = permutations(n);
    let weights: Vec<f64> = perms
        .iter()
        .map(|p| {
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            phi.powi(inv as i32)
        })
        .collect();
    let z: f64 = weights.iter().sum();
    perms.into_iter().zip(weights).map(|(p, w)| (p, w / z)).collect()
}

/// All orderings of `0..n` (object listed first is best).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Objects from best to worst of a strict complete ranking.
pub fn order_of(r: &Ranking) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..r.len()).collect();
    idx.sort_by_key(|&i| r.position(i).unwrap());
    idx
}

/// Exact probability that `x` precedes `y` under the identity-reference
/// Mallows model on `n` objects.
pub fn exact_precedence(n: usize, phi: f64, x: usize, y: usize) -> f64 {
    brute_mallows(n, phi)
        .into_iter()
        .filter(|(p, _)| p.iter().position(|&o| o == x) < p.iter().position(|&o| o == y))
        .map(|(_, w)| w)
        .sum()
}
