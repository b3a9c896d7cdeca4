//! Integer programming formulation of consensus ranking.
//!
//! Variables `r_i_j ∈ {-1, 0, 1}` and `y_i_j ∈ {0, 1}` for every ordered pair
//! `i != j`. The diagonal `r_i_i = 0` is implicit and has no variable.
//!
//! ```text
//! r_ij - r_kj - r_ik >= -1   i, j, k distinct   (transitivity)
//! r_ij + r_ji        >=  0   i < j              (no double negative)
//! r_ij - 2 y_ij      = -1    i != j             (parity)
//! ```
//!
//! The objective maximizes `Σ w_ij r_ij` over the integer aggregate weights.

use std::fmt::Write as _;
use std::path::Path;

use crate::aggregation::{weights_for, Coefficient, WeightMatrix};
use crate::error::{Error, Result};
use crate::ranking::{dense_rank_descending, enumerate_weak_orders, Instance, Ranking, RankingMatrix};

/// Largest `n` for which [`feasible_points`] enumerates the raw variable space.
pub const FEASIBLE_ENUMERATION_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    R(usize, usize),
    Y(usize, usize),
}

impl Var {
    pub fn name(&self) -> String {
        match *self {
            Var::R(i, j) => format!("r_{}_{}", i + 1, j + 1),
            Var::Y(i, j) => format!("y_{}_{}", i + 1, j + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Transitivity,
    NoDoubleNegative,
    Parity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub kind: RowKind,
    pub terms: Vec<(i64, Var)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Row {
    fn holds(&self, value: impl Fn(Var) -> i64) -> bool {
        let lhs: i64 = self.terms.iter().map(|&(c, v)| c * value(v)).sum();
        match self.sense {
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// Values of all `r` and `y` variables as row-major `n x n` arrays; diagonal
/// entries are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub n: usize,
    pub r: Vec<i64>,
    pub y: Vec<i64>,
}

impl Assignment {
    pub fn value(&self, v: Var) -> i64 {
        match v {
            Var::R(i, j) => self.r[i * self.n + j],
            Var::Y(i, j) => self.y[i * self.n + j],
        }
    }

    /// The assignment induced by a complete ranking.
    pub fn from_ranking(r: &Ranking) -> Result<Self> {
        r.ensure_complete()?;
        let n = r.len();
        let m = RankingMatrix::from_ranking(r);
        let rv: Vec<i64> = m.entries().iter().map(|&e| e as i64).collect();
        let y = rv.iter().enumerate().map(|(k, &e)| if k / n == k % n { 0 } else { (e + 1) / 2 }).collect();
        Ok(Assignment { n, r: rv, y })
    }

    /// Ranking recovered from the `r` row sums, non-increasing, ties dense.
    pub fn to_ranking(&self) -> Ranking {
        let n = self.n;
        let sums: Vec<i64> =
            (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| self.r[i * n + j]).sum()).collect();
        dense_rank_descending(&sums)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpModel {
    coefficient: Coefficient,
    weights: WeightMatrix,
}

pub fn build_model(inst: &Instance, coefficient: Coefficient) -> Result<IpModel> {
    let (weights, _) = weights_for(inst, coefficient)?;
    model_from_weights(weights, coefficient)
}

pub fn model_from_weights(weights: WeightMatrix, coefficient: Coefficient) -> Result<IpModel> {
    let n = weights.size();
    if n < 2 {
        return Err(Error::TooFewObjects { needed: 2, found: n });
    }
    Ok(IpModel { coefficient, weights })
}

fn off_diagonal(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

impl IpModel {
    pub fn size(&self) -> usize {
        self.weights.size()
    }

    pub fn coefficient(&self) -> Coefficient {
        self.coefficient
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    /// Objective coefficient of `r_i_j`, in integer weight units.
    pub fn objective_coefficient(&self, i: usize, j: usize) -> i64 {
        self.weights.weight(i, j)
    }

    pub fn r_variables(&self) -> Vec<Var> {
        off_diagonal(self.size()).map(|(i, j)| Var::R(i, j)).collect()
    }

    pub fn y_variables(&self) -> Vec<Var> {
        off_diagonal(self.size()).map(|(i, j)| Var::Y(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Row> {
        let n = self.size();
        let mut rows = Vec::new();
        for (i, j) in off_diagonal(n) {
            for k in (0..n).filter(|&k| k != i && k != j) {
                rows.push(Row {
                    name: format!("tr_{}_{}_{}", i + 1, j + 1, k + 1),
                    kind: RowKind::Transitivity,
                    terms: vec![(1, Var::R(i, j)), (-1, Var::R(k, j)), (-1, Var::R(i, k))],
                    sense: Sense::Ge,
                    rhs: -1,
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                rows.push(Row {
                    name: format!("nd_{}_{}", i + 1, j + 1),
                    kind: RowKind::NoDoubleNegative,
                    terms: vec![(1, Var::R(i, j)), (1, Var::R(j, i))],
                    sense: Sense::Ge,
                    rhs: 0,
                });
            }
        }
        for (i, j) in off_diagonal(n) {
            rows.push(Row {
                name: format!("par_{}_{}", i + 1, j + 1),
                kind: RowKind::Parity,
                terms: vec![(1, Var::R(i, j)), (-2, Var::Y(i, j))],
                sense: Sense::Eq,
                rhs: -1,
            });
        }
        rows
    }

    pub fn row_count(&self, kind: RowKind) -> usize {
        let n = self.size();
        match kind {
            RowKind::Transitivity => n * (n - 1) * (n - 2),
            RowKind::NoDoubleNegative => n * (n - 1) / 2,
            RowKind::Parity => n * (n - 1),
        }
    }

    /// Checks bounds, integrality domains and every constraint row.
    pub fn is_feasible(&self, a: &Assignment) -> bool {
        let n = self.size();
        if a.n != n || a.r.len() != n * n || a.y.len() != n * n {
            return false;
        }
        let in_domain = off_diagonal(n).all(|(i, j)| {
            (-1..=1).contains(&a.r[i * n + j]) && (0..=1).contains(&a.y[i * n + j])
        });
        in_domain && self.rows().iter().all(|row| row.holds(|v| a.value(v)))
    }

    /// `Σ w_ij r_ij` in integer weight units.
    pub fn objective_units(&self, a: &Assignment) -> i64 {
        off_diagonal(self.size()).map(|(i, j)| self.weights.weight(i, j) * a.value(Var::R(i, j))).sum()
    }

    /// Summed correlation with all judges of the ranking encoded by `a`.
    pub fn objective(&self, a: &Assignment) -> f64 {
        self.weights.to_correlation(self.objective_units(a))
    }

    /// Model text in CPLEX LP format.
    pub fn to_lp(&self) -> String {
        let n = self.size();
        let mut out = String::new();
        let _ = writeln!(out, "\\ consensus ranking, n = {n}, coefficient {}", self.coefficient);
        let _ = writeln!(
            out,
            "\\ objective = (sum of terms + {}) / {} gives the summed correlation",
            self.weights.offset, self.weights.correlation_denominator()
        );
        out.push_str("Maximize\n");
        let mut terms: Vec<(i64, Var)> = off_diagonal(n)
            .map(|(i, j)| (self.weights.weight(i, j), Var::R(i, j)))
            .filter(|&(c, _)| c != 0)
            .collect();
        if terms.is_empty() {
            terms.push((0, Var::R(0, 1)));
        }
        write_expression(&mut out, " obj:", &terms);
        out.push('\n');
        out.push_str("Subject To\n");
        for row in self.rows() {
            write_expression(&mut out, &format!(" {}:", row.name), &row.terms);
            let op = match row.sense {
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let _ = writeln!(out, " {op} {}", row.rhs);
        }
        out.push_str("Bounds\n");
        for v in self.r_variables() {
            let _ = writeln!(out, " -1 <= {} <= 1", v.name());
        }
        out.push_str("General\n");
        write_names(&mut out, &self.r_variables());
        out.push_str("Binary\n");
        write_names(&mut out, &self.y_variables());
        out.push_str("End\n");
        out
    }
}

const TERMS_PER_LINE: usize = 8;

fn write_expression(out: &mut String, label: &str, terms: &[(i64, Var)]) {
    out.push_str(label);
    for (idx, &(c, v)) in terms.iter().enumerate() {
        if idx > 0 && idx % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c < 0 { "-" } else { "+" };
        let mag = c.unsigned_abs();
        let coef = if mag == 1 { String::new() } else { format!("{mag} ") };
        if idx == 0 {
            let lead = if c < 0 { "-" } else { "" };
            let _ = write!(out, " {lead}{coef}{}", v.name());
        } else {
            let _ = write!(out, " {sign} {coef}{}", v.name());
        }
    }
}

fn write_names(out: &mut String, vars: &[Var]) {
    for chunk in vars.chunks(TERMS_PER_LINE) {
        let names: Vec<String> = chunk.iter().map(Var::name).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
}

pub fn export_model(m: &IpModel, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, m.to_lp())?;
    Ok(())
}

/// Every feasible assignment, found by enumerating the raw variable domains.
/// Only practical for `n <= FEASIBLE_ENUMERATION_CAP`.
pub fn feasible_points(m: &IpModel) -> Result<Vec<Assignment>> {
    let n = m.size();
    if n > FEASIBLE_ENUMERATION_CAP {
        return Err(Error::CapExceeded { n, cap: FEASIBLE_ENUMERATION_CAP });
    }
    let cells: Vec<(usize, usize)> = off_diagonal(n).collect();
    let total_r = 3usize.pow(cells.len() as u32);
    let total_y = 1usize << cells.len();
    let mut found = Vec::new();
    for rc in 0..total_r {
        let mut r = vec![0i64; n * n];
        let mut code = rc;
        for &(i, j) in &cells {
            r[i * n + j] = (code % 3) as i64 - 1;
            code /= 3;
        }
        for yc in 0..total_y {
            let mut y = vec![0i64; n * n];
            for (bit, &(i, j)) in cells.iter().enumerate() {
                y[i * n + j] = ((yc >> bit) & 1) as i64;
            }
            let a = Assignment { n, r: r.clone(), y };
            if m.is_feasible(&a) {
                found.push(a);
            }
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IpSolution {
    /// Summed correlation of each optimum with all judges.
    pub objective: f64,
    pub objective_units: i64,
    /// Canonical optima, sorted.
    pub rankings: Vec<Ranking>,
}

/// Exact optimum by enumerating weak orders; each optimum is recovered from
/// its variable values through row sums.
pub fn brute_force_solve(m: &IpModel) -> Result<IpSolution> {
    let mut best: Option<i64> = None;
    let mut rankings = Vec::new();
    for w in enumerate_weak_orders(m.size())? {
        let a = Assignment::from_ranking(&w)?;
        let units = m.objective_units(&a);
        match best {
            Some(b) if units < b => continue,
            Some(b) if units == b => {}
            _ => {
                best = Some(units);
                rankings.clear();
            }
        }
        rankings.push(a.to_ranking());
    }
    let units = best.ok_or(Error::EmptyInstance)?;
    rankings.sort();
    Ok(IpSolution { objective: m.weights.to_correlation(units), objective_units: units, rankings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(rows: &[&[i64]], c: Coefficient) -> IpModel {
        let judges = rows.iter().map(|r| Ranking::new(r.iter().map(|&p| (p > 0).then_some(p)).collect()).unwrap());
        build_model(&Instance::from_judges(judges.collect()).unwrap(), c).unwrap()
    }

    #[test]
    fn counts_at_three() {
        let m = model(&[&[1, 2, 3]], Coefficient::TauX);
        assert_eq!(m.r_variables().len(), 6);
        assert_eq!(m.y_variables().len(), 6);
        let rows = m.rows();
        for kind in [RowKind::Transitivity, RowKind::NoDoubleNegative, RowKind::Parity] {
            assert_eq!(rows.iter().filter(|r| r.kind == kind).count(), m.row_count(kind));
        }
        assert_eq!(m.row_count(RowKind::Transitivity), 6);
    }

    #[test]
    fn two_objects_admit_three_points() {
        let m = model(&[&[1, 2]], Coefficient::TauX);
        assert_eq!(m.row_count(RowKind::Transitivity), 0);
        let pts: Vec<(i64, i64)> = feasible_points(&m).unwrap().iter().map(|a| (a.r[1], a.r[2])).collect();
        assert_eq!(pts.len(), 3);
        for p in [(1, 1), (1, -1), (-1, 1)] {
            assert!(pts.contains(&p));
        }
    }

    #[test]
    fn lp_text_for_two_objects() {
        let lp = model(&[&[1, 2]], Coefficient::TauX).to_lp();
        assert_eq!(lp.lines().filter(|l| l.starts_with(" par_")).count(), 2);
        assert_eq!(lp.lines().filter(|l| l.starts_with(" nd_")).count(), 1);
        assert!(lp.contains(" obj: r_1_2 - r_2_1\n"));
        assert!(lp.ends_with("End\n"));
    }

    #[test]
    fn zero_objective_still_written() {
        let lp = model(&[&[1, 2, 3], &[3, 2, 1]], Coefficient::TauX).to_lp();
        assert!(lp.contains(" obj: 0 r_1_2\n"));
        let sol = brute_force_solve(&model(&[&[1, 2, 3], &[3, 2, 1]], Coefficient::TauX)).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert_eq!(sol.rankings.len(), 13);
    }

    #[test]
    fn single_judge_recovered() {
        let sol = brute_force_solve(&model(&[&[2, 3, 1, 4]], Coefficient::TauXHat)).unwrap();
        assert_eq!(sol.rankings, vec![Ranking::complete(&[2, 3, 1, 4]).unwrap()]);
        assert_eq!(sol.objective, 1.0);
    }

    #[test]
    fn opposed_pair_has_three_optima() {
        let sol = brute_force_solve(&model(&[&[1, 2], &[2, 1]], Coefficient::TauX)).unwrap();
        assert_eq!(sol.rankings.len(), 3);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn ranking_assignment_round_trip() {
        let m = model(&[&[1, 2, 3, 4]], Coefficient::TauX);
        for w in enumerate_weak_orders(4).unwrap() {
            let a = Assignment::from_ranking(&w).unwrap();
            assert!(m.is_feasible(&a));
            assert_eq!(a.to_ranking(), w);
        }
    }

    #[test]
    fn feasible_enumeration_capped() {
        assert!(matches!(feasible_points(&model(&[&[1, 2, 3, 4]], Coefficient::TauX)), Err(Error::CapExceeded { .. })));
    }
}
