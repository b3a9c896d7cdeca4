//! Rankings over a fixed object universe, their pairwise-preference matrices,
//! object-orderings and the betweenness relation.
//!
//! Objects are indexed from 0 internally and displayed as `v1..vn`. A position
//! is any positive integer; only pairwise comparisons between positions carry
//! meaning, so `(1,2,2,•,4)` and `(1,2,2,•,3)` express the same preferences.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest universe for which [`enumerate_weak_orders`] runs by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// A (possibly non-strict, possibly incomplete) ranking of `n` objects.
/// `None` marks an unranked object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Option<i64>>", into = "Vec<Option<i64>>")]
pub struct Ranking {
    positions: Vec<Option<u32>>,
}

/// Shape of a ranking: whether it contains ties and whether it ranks every object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankingKind {
    pub strict: bool,
    pub complete: bool,
}

impl Ranking {
    /// Builds a ranking, rejecting zero or negative positions.
    pub fn new(positions: Vec<Option<i64>>) -> Result<Self> {
        let mut out = Vec::with_capacity(positions.len());
        for (object, p) in positions.into_iter().enumerate() {
            match p {
                None => out.push(None),
                Some(p) if p >= 1 && p <= u32::MAX as i64 => out.push(Some(p as u32)),
                Some(position) => return Err(Error::NonPositivePosition { object: object + 1, position }),
            }
        }
        Ok(Ranking { positions: out })
    }

    /// Builds a ranking and checks it covers exactly `n` objects.
    pub fn with_universe(positions: Vec<Option<i64>>, n: usize) -> Result<Self> {
        if positions.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: positions.len() });
        }
        Self::new(positions)
    }

    /// A complete ranking from plain positions.
    pub fn complete(positions: &[u32]) -> Result<Self> {
        Self::new(positions.iter().map(|&p| Some(p as i64)).collect())
    }

    /// The identity permutation `(1, 2, ..., n)`.
    pub fn identity(n: usize) -> Self {
        Ranking { positions: (1..=n as u32).map(Some).collect() }
    }

    /// The ranking that ties every object.
    pub fn all_tied(n: usize) -> Self {
        Ranking { positions: vec![Some(1); n] }
    }

    /// The ranking with no object ranked.
    pub fn empty(n: usize) -> Self {
        Ranking { positions: vec![None; n] }
    }

    pub(crate) fn from_raw(positions: Vec<Option<u32>>) -> Self {
        Ranking { positions }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn universe_size(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[Option<u32>] {
        &self.positions
    }

    pub fn position(&self, object: usize) -> Option<u32> {
        self.positions[object]
    }

    pub fn is_ranked(&self, object: usize) -> bool {
        self.positions[object].is_some()
    }

    /// Indices of the ranked objects, ascending.
    pub fn ranked_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_ranked(i)).collect()
    }

    pub fn ranked_count(&self) -> usize {
        self.positions.iter().filter(|p| p.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.positions.iter().all(Option::is_some)
    }

    pub fn is_strict(&self) -> bool {
        let mut seen: Vec<u32> = self.positions.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn kind(&self) -> RankingKind {
        RankingKind { strict: self.is_strict(), complete: self.is_complete() }
    }

    /// Pairwise relation of `i` to `j`: `Less` means `i` is preferred, `Equal`
    /// a tie, `Greater` that `j` is preferred; `None` if either is unranked.
    pub fn relation(&self, i: usize, j: usize) -> Option<Ordering> {
        match (self.positions[i], self.positions[j]) {
            (Some(a), Some(b)) => Some(a.cmp(&b)),
            _ => None,
        }
    }

    /// True if both rankings express the same relation on every pair.
    pub fn same_relations(&self, other: &Ranking) -> bool {
        self.len() == other.len()
            && self.positions.iter().zip(&other.positions).all(|(a, b)| a.is_some() == b.is_some())
            && (0..self.len()).all(|i| (i + 1..self.len()).all(|j| self.relation(i, j) == other.relation(i, j)))
    }

    /// Dense relabeling: ranked objects get positions `1..=#classes`.
    pub fn canonical(&self) -> Ranking {
        let mut distinct: Vec<u32> = self.positions.iter().flatten().copied().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let positions = self
            .positions
            .iter()
            .map(|p| p.map(|p| distinct.binary_search(&p).unwrap() as u32 + 1))
            .collect();
        Ranking { positions }
    }

    pub fn ensure_complete(&self) -> Result<()> {
        match self.positions.iter().position(Option::is_none) {
            Some(i) => Err(Error::Incomplete(i + 1)),
            None => Ok(()),
        }
    }

    pub fn ensure_strict(&self) -> Result<()> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.relation(i, j) == Some(Ordering::Equal) {
                    return Err(Error::NotStrict(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn ensure_same_universe(&self, other: &Ranking) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::UniverseMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }

    /// Relabels objects: object `i` of `self` becomes object `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Ranking> {
        check_permutation(perm, self.len())?;
        let mut positions = vec![None; self.len()];
        for (i, &target) in perm.iter().enumerate() {
            positions[target] = self.positions[i];
        }
        Ok(Ranking { positions })
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: perm.len() });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(Error::ObjectOutOfRange { index: p, n });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::DuplicateObject(p + 1));
        }
    }
    Ok(())
}

impl TryFrom<Vec<Option<i64>>> for Ranking {
    type Error = Error;

    fn try_from(v: Vec<Option<i64>>) -> Result<Self> {
        Ranking::new(v)
    }
}

impl From<Ranking> for Vec<Option<i64>> {
    fn from(r: Ranking) -> Self {
        r.positions.into_iter().map(|p| p.map(i64::from)).collect()
    }
}

impl fmt::Display for Ranking {
    /// Comma-separated positions, `NA` for unranked objects.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.positions.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match p {
                Some(p) => write!(f, "{p}")?,
                None => f.write_str("NA")?,
            }
        }
        Ok(())
    }
}

/// Checks a ranking's invariants against a universe size and reports its shape.
pub fn validate(r: &Ranking, n: usize) -> Result<RankingKind> {
    if r.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: r.len() });
    }
    Ok(r.kind())
}

/// The `{-1, 0, +1}` pairwise-preference matrix of a ranking.
///
/// `entries[i][j]` is `+1` when `v_i` is preferred to or tied with `v_j`, `-1`
/// when `v_j` is strictly preferred, and `0` on the diagonal or when either
/// object is unranked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl RankingMatrix {
    pub fn from_ranking(r: &Ranking) -> Self {
        let n = r.len();
        let mut entries = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                entries[i * n + j] = match r.relation(i, j) {
                    None => 0,
                    Some(Ordering::Greater) => -1,
                    Some(_) => 1,
                };
            }
        }
        RankingMatrix { n, entries }
    }

    /// Wraps raw entries (row-major), checking only the shape and value set.
    pub fn from_entries(n: usize, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, found: entries.len() });
        }
        if let Some(v) = entries.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::InvalidParameter(format!("ranking-matrix entry {v} not in {{-1,0,1}}")));
        }
        Ok(RankingMatrix { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// `Σ_ij a_ij b_ij`.
    pub fn inner_product(&self, other: &RankingMatrix) -> i64 {
        assert_eq!(self.n, other.n, "ranking-matrices of different sizes");
        self.entries.iter().zip(&other.entries).map(|(&a, &b)| a as i64 * b as i64).sum()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) as i64).sum()).collect()
    }
}

/// Convenience wrapper for [`RankingMatrix::from_ranking`].
pub fn ranking_matrix(r: &Ranking) -> RankingMatrix {
    RankingMatrix::from_ranking(r)
}

/// Ranks objects by non-increasing score, tied scores sharing a dense position.
pub fn dense_rank_descending(scores: &[i64]) -> Ranking {
    let mut distinct: Vec<i64> = scores.to_vec();
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.dedup();
    let positions = scores
        .iter()
        .map(|s| Some(distinct.iter().position(|d| d == s).unwrap() as u32 + 1))
        .collect();
    Ranking::from_raw(positions)
}

/// Keeps positions of objects in `subset`; every other object becomes unranked.
pub fn project(r: &Ranking, subset: &[usize]) -> Result<Ranking> {
    let n = r.len();
    let mut keep = vec![false; n];
    for &i in subset {
        if i >= n {
            return Err(Error::ObjectOutOfRange { index: i, n });
        }
        keep[i] = true;
    }
    let positions = r.positions.iter().zip(keep).map(|(&p, k)| if k { p } else { None }).collect();
    Ok(Ranking::from_raw(positions))
}

/// Objects ranked by both rankings.
pub fn common_ranked(a: &Ranking, b: &Ranking) -> Vec<usize> {
    (0..a.len().min(b.len())).filter(|&i| a.is_ranked(i) && b.is_ranked(i)).collect()
}

/// Reverses every pairwise preference among ranked objects.
pub fn reverse(r: &Ranking) -> Ranking {
    let ranked = r.positions.iter().flatten();
    let (Some(&lo), Some(&hi)) = (ranked.clone().min(), ranked.max()) else {
        return r.clone();
    };
    Ranking::from_raw(r.positions.iter().map(|p| p.map(|p| hi + lo - p)).collect())
}

/// Preference equivalence classes of ranked objects, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObjectOrdering {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl ObjectOrdering {
    /// Builds an ordering over a universe of `n` objects. Classes must be
    /// non-empty and pairwise disjoint; members are sorted ascending.
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut classes = classes;
        for class in &mut classes {
            if class.is_empty() {
                return Err(Error::InvalidParameter("empty equivalence class".into()));
            }
            for &o in class.iter() {
                if o >= n {
                    return Err(Error::ObjectOutOfRange { index: o, n });
                }
                if std::mem::replace(&mut seen[o], true) {
                    return Err(Error::DuplicateObject(o + 1));
                }
            }
            class.sort_unstable();
        }
        Ok(ObjectOrdering { n, classes })
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Objects in class order, members of a class ascending.
    pub fn objects(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().flatten().copied()
    }
}

impl fmt::Display for ObjectOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, class) in self.classes.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            let names: Vec<String> = class.iter().map(|o| format!("v{}", o + 1)).collect();
            if class.len() == 1 {
                f.write_str(&names[0])?;
            } else {
                write!(f, "<{}>", names.join(","))?;
            }
        }
        f.write_str(")")
    }
}

/// Sorts the ranked objects of `r` into equivalence classes, best first.
pub fn psi(r: &Ranking) -> ObjectOrdering {
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, p) in r.positions.iter().enumerate() {
        if let Some(p) = p {
            groups.entry(*p).or_default().push(i);
        }
    }
    ObjectOrdering { n: r.len(), classes: groups.into_values().collect() }
}

/// Labels each object with its class position: one plus the number of objects
/// in earlier classes. Objects absent from the ordering are unranked.
pub fn psi_inverse(o: &ObjectOrdering) -> Ranking {
    let mut positions = vec![None; o.n];
    let mut ahead = 0u32;
    for class in &o.classes {
        for &obj in class {
            positions[obj] = Some(ahead + 1);
        }
        ahead += class.len() as u32;
    }
    Ranking::from_raw(positions)
}

/// Whether `b` lies between `a` and `c` on the objects all three rank: for each
/// pair, `b` agrees with `a`, or with `c`, or ties a pair that `a` and `c`
/// strictly order in opposite directions.
pub fn is_between(a: &Ranking, b: &Ranking, c: &Ranking) -> Result<bool> {
    a.ensure_same_universe(b)?;
    a.ensure_same_universe(c)?;
    let common: Vec<usize> = (0..a.len()).filter(|&i| a.is_ranked(i) && b.is_ranked(i) && c.is_ranked(i)).collect();
    for (x, &i) in common.iter().enumerate() {
        for &j in &common[x + 1..] {
            let (ra, rb, rc) = (a.relation(i, j), b.relation(i, j), c.relation(i, j));
            let opposed = matches!(
                (ra, rc),
                (Some(Ordering::Less), Some(Ordering::Greater)) | (Some(Ordering::Greater), Some(Ordering::Less))
            );
            if rb != ra && rb != rc && !(opposed && rb == Some(Ordering::Equal)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every complete weak order on `n` objects in dense canonical form, ordered
/// lexicographically by position sequence.
pub fn enumerate_weak_orders(n: usize) -> Result<WeakOrders> {
    enumerate_weak_orders_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_weak_orders_capped(n: usize, cap: usize) -> Result<WeakOrders> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(WeakOrders { n, current: None, done: false })
}

/// Iterator returned by [`enumerate_weak_orders`].
#[derive(Debug, Clone)]
pub struct WeakOrders {
    n: usize,
    current: Option<Vec<u32>>,
    done: bool,
}

impl WeakOrders {
    // A prefix extends to a dense sequence iff the gaps below its maximum can
    // still be filled by the remaining slots.
    fn feasible(prefix: &[u32], remaining: usize) -> bool {
        let max = prefix.iter().copied().max().unwrap_or(0) as usize;
        let mut seen = vec![false; max + 1];
        for &v in prefix {
            seen[v as usize] = true;
        }
        let distinct = seen.iter().filter(|&&s| s).count();
        max - distinct <= remaining
    }

    fn fill_smallest(&self, seq: &mut Vec<u32>) {
        while seq.len() < self.n {
            let remaining = self.n - seq.len() - 1;
            let v = (1..=self.n as u32)
                .find(|&v| {
                    seq.push(v);
                    let ok = Self::feasible(seq, remaining);
                    seq.pop();
                    ok
                })
                .expect("a dense completion always exists");
            seq.push(v);
        }
    }

    fn advance(&self, seq: &mut Vec<u32>) -> bool {
        while let Some(last) = seq.pop() {
            let remaining = self.n - seq.len() - 1;
            for v in last + 1..=self.n as u32 {
                seq.push(v);
                if Self::feasible(seq, remaining) {
                    self.fill_smallest(seq);
                    return true;
                }
                seq.pop();
            }
        }
        false
    }
}

impl Iterator for WeakOrders {
    type Item = Ranking;

    fn next(&mut self) -> Option<Ranking> {
        if self.done {
            return None;
        }
        let mut seq = match self.current.take() {
            None => {
                let mut seq = Vec::with_capacity(self.n);
                self.fill_smallest(&mut seq);
                seq
            }
            Some(mut seq) => {
                if !self.advance(&mut seq) {
                    self.done = true;
                    return None;
                }
                seq
            }
        };
        if self.n == 0 {
            self.done = true;
        }
        let out = Ranking::from_raw(seq.iter().map(|&p| Some(p)).collect());
        self.current = Some(std::mem::take(&mut seq));
        Some(out)
    }
}

/// A set of judges' rankings over a common universe plus free-form provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    universe_size: usize,
    judges: Vec<Ranking>,
    #[serde(default)]
    metadata: serde_json::Value,
}

impl Instance {
    pub fn new(universe_size: usize, judges: Vec<Ranking>) -> Result<Self> {
        for r in &judges {
            if r.len() != universe_size {
                return Err(Error::LengthMismatch { expected: universe_size, found: r.len() });
            }
        }
        Ok(Instance { universe_size, judges, metadata: serde_json::Value::Null })
    }

    /// Infers the universe size from the first judge.
    pub fn from_judges(judges: Vec<Ranking>) -> Result<Self> {
        let n = judges.first().map(Ranking::len).ok_or(Error::EmptyInstance)?;
        Self::new(n, judges)
    }

    pub fn with_metadata(mut self, metadata: serde_json::Value) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn judges(&self) -> &[Ranking] {
        &self.judges
    }

    pub fn metadata(&self) -> &serde_json::Value {
        &self.metadata
    }

    pub fn len(&self) -> usize {
        self.judges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.judges.is_empty()
    }

    pub(crate) fn check(&self) -> Result<()> {
        for r in &self.judges {
            if r.len() != self.universe_size {
                return Err(Error::LengthMismatch { expected: self.universe_size, found: r.len() });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> Ranking {
        // 0 stands in for an unranked object in these fixtures
        Ranking::new(v.iter().map(|&p| if p == 0 { None } else { Some(p) }).collect()).unwrap()
    }

    #[test]
    fn validate_examples() {
        let a = r(&[1, 2, 2, 0, 4]);
        assert_eq!(validate(&a, 5).unwrap(), RankingKind { strict: false, complete: false });
        assert_eq!(validate(&Ranking::identity(5), 5).unwrap(), RankingKind { strict: true, complete: true });
        assert_eq!(
            Ranking::new(vec![Some(0), Some(1), None]),
            Err(Error::NonPositivePosition { object: 1, position: 0 })
        );
        assert!(matches!(validate(&a, 4), Err(Error::LengthMismatch { .. })));
        assert!(Ranking::with_universe(vec![Some(1)], 2).is_err());
    }

    #[test]
    fn ranking_matrix_examples() {
        let m = ranking_matrix(&r(&[1, 2, 0]));
        assert_eq!((m.get(0, 1), m.get(1, 0)), (1, -1));
        for k in 0..3 {
            assert_eq!((m.get(2, k), m.get(k, 2)), (0, 0));
        }
        let tie = ranking_matrix(&r(&[1, 1]));
        assert_eq!((tie.get(0, 1), tie.get(1, 0)), (1, 1));
        let rev = ranking_matrix(&r(&[2, 1]));
        assert_eq!((rev.get(0, 1), rev.get(1, 0)), (-1, 1));
    }

    #[test]
    fn project_examples() {
        let a = r(&[1, 2, 2, 0, 4]);
        assert_eq!(project(&a, &[0, 4]).unwrap(), r(&[1, 0, 0, 0, 4]));
        assert_eq!(project(&a, &[0, 1, 2, 3, 4]).unwrap(), a);
        assert_eq!(project(&r(&[1, 2, 0]), &[2]).unwrap(), Ranking::empty(3));
        assert!(matches!(project(&a, &[5]), Err(Error::ObjectOutOfRange { .. })));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&r(&[1, 5, 2, 4, 3])).to_string(), "(v1,v3,v5,v4,v2)");
        assert_eq!(psi(&r(&[1, 3, 3, 1, 5])).to_string(), "(<v1,v4>,<v2,v3>,v5)");
        let o = ObjectOrdering::new(5, vec![vec![0], vec![1, 3], vec![4], vec![2]]).unwrap();
        assert_eq!(psi_inverse(&o), r(&[1, 2, 5, 2, 4]));
    }

    #[test]
    fn object_ordering_rejects_overlap() {
        assert!(ObjectOrdering::new(3, vec![vec![0], vec![0, 1]]).is_err());
        assert!(ObjectOrdering::new(3, vec![vec![]]).is_err());
        assert!(ObjectOrdering::new(3, vec![vec![3]]).is_err());
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse(&r(&[1, 2, 3, 0])), r(&[3, 2, 1, 0]));
        assert_eq!(reverse(&Ranking::all_tied(4)), Ranking::all_tied(4));
        assert_eq!(reverse(&r(&[1, 2])), r(&[2, 1]));
        assert_eq!(reverse(&Ranking::empty(2)), Ranking::empty(2));
    }

    #[test]
    fn betweenness_examples() {
        assert!(is_between(&r(&[1, 2]), &r(&[1, 1]), &r(&[2, 1])).unwrap());
        assert!(!is_between(&r(&[1, 2]), &r(&[2, 1]), &r(&[1, 2])).unwrap());
        let a = r(&[2, 1, 3, 0]);
        assert!(is_between(&a, &a, &a).unwrap());
        // a ties, c prefers v1: b must not prefer v2
        assert!(!is_between(&r(&[1, 1]), &r(&[2, 1]), &r(&[1, 2])).unwrap());
        assert!(is_between(&r(&[1, 1]), &r(&[1, 2]), &r(&[1, 2])).unwrap());
    }

    #[test]
    fn weak_order_counts() {
        let fubini = [1usize, 1, 3, 13, 75, 541, 4683];
        for (n, &expected) in fubini.iter().enumerate() {
            let all: Vec<Ranking> = enumerate_weak_orders(n).unwrap().collect();
            assert_eq!(all.len(), expected, "n = {n}");
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, all, "not strictly lexicographic for n = {n}");
            assert!(all.iter().all(|w| w.is_complete() && w.canonical() == *w));
        }
        let two: Vec<String> = enumerate_weak_orders(2).unwrap().map(|r| r.to_string()).collect();
        assert_eq!(two, ["1,1", "1,2", "2,1"]);
        assert!(matches!(enumerate_weak_orders(9), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn canonical_is_dense() {
        assert_eq!(r(&[1, 5, 5, 0, 9]).canonical(), r(&[1, 2, 2, 0, 3]));
        assert_eq!(dense_rank_descending(&[3, 7, 3, -1]), r(&[2, 1, 2, 3]));
    }

    #[test]
    fn instance_rejects_mixed_universes() {
        assert!(Instance::new(2, vec![r(&[1, 2]), r(&[1, 2, 3])]).is_err());
        assert_eq!(Instance::from_judges(vec![]), Err(Error::EmptyInstance));
    }

    #[test]
    fn serde_uses_null_for_unranked() {
        let a = r(&[1, 0, 2]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[1,null,2]");
        assert_eq!(serde_json::from_str::<Ranking>(&json).unwrap(), a);
        assert!(serde_json::from_str::<Ranking>("[0,1]").is_err());
    }
}
