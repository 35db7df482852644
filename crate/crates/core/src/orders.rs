//! The three partial orders as reachability tables over an enumerated family,
//! their Hasse diagrams, and relation comparison.
//!
//! Orientation: `reach(a, b)` holds iff member `b` is below or equal to member
//! `a`. An `L2 -> I2` interchange moves down.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{ones, BitTable};
use crate::curves::{curve_digraph, CocharacterSpec};
use crate::enumerate::BctFamily;
use crate::matrix::MarginPair;

/// Families above this size are refused unless a larger limit is passed.
pub const DEFAULT_CLOSURE_LIMIT: usize = 60_000;

/// Default number of discrepancy pairs kept by [`compare_relations`].
pub const DEFAULT_REPORT_LIMIT: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("family has {members} members, above the closure limit {limit}")]
    TooLarge { members: usize, limit: usize },
    #[error("relation has a cycle through member {0}")]
    Cycle(usize),
    #[error("antisymmetry fails between members {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("relations live on different families")]
    FamilyMismatch,
    #[error("{0}")]
    Cocharacter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Bruhat,
    Secondary,
    Geometric,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Bruhat => "bruhat",
            RelationKind::Secondary => "secondary",
            RelationKind::Geometric => "geometric",
        }
    }
}

impl std::str::FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bruhat" | "b" => Ok(RelationKind::Bruhat),
            "secondary" | "s" => Ok(RelationKind::Secondary),
            "geometric" | "g" => Ok(RelationKind::Geometric),
            other => Err(format!("unknown relation kind {other:?}")),
        }
    }
}

/// A reflexive-transitive relation on a family, stored as reachability rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRelation {
    margins: MarginPair,
    kind: RelationKind,
    reach: BitTable,
}

impl FiniteRelation {
    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    pub fn margins(&self) -> &MarginPair {
        &self.margins
    }

    pub fn len(&self) -> usize {
        self.reach.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reach.is_empty()
    }

    /// `member[lower] <= member[upper]`.
    pub fn leq(&self, lower: usize, upper: usize) -> bool {
        self.reach.get(upper, lower)
    }

    /// Number of related ordered pairs, the diagonal included.
    pub fn pair_count(&self) -> usize {
        self.reach.count_ones()
    }

    pub fn reach(&self) -> &BitTable {
        &self.reach
    }

    /// Everything below `upper`, itself included.
    pub fn down_set(&self, upper: usize) -> impl Iterator<Item = usize> + '_ {
        self.reach.row_ones(upper)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|a| self.reach.get(a, a))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.first_symmetric_pair().is_none()
    }

    fn first_symmetric_pair(&self) -> Option<(usize, usize)> {
        (0..self.len()).find_map(|a| self.reach.row_ones(a).find(|&b| b != a && self.reach.get(b, a)).map(|b| (a, b)))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|a| {
            let row = self.reach.row(a);
            self.reach.row_ones(a).all(|b| self.reach.row(b).iter().zip(row).all(|(x, y)| x & !y == 0))
        })
    }
}

/// Builds the requested relation on `family`. `sigma` only affects the
/// geometric order.
pub fn build_relation(
    family: &BctFamily,
    kind: RelationKind,
    sigma: &CocharacterSpec,
    limit: usize,
) -> Result<FiniteRelation, OrderError> {
    if family.len() > limit {
        return Err(OrderError::TooLarge { members: family.len(), limit });
    }
    match kind {
        RelationKind::Bruhat => Ok(bruhat_unchecked(family)),
        RelationKind::Secondary => closure_from_arcs(family, kind, &interchange_arcs(family)),
        RelationKind::Geometric => {
            if sigma.len() != family.margins().cols() {
                return Err(OrderError::Cocharacter(format!(
                    "permutation has length {} but the family has {} columns",
                    sigma.len(),
                    family.margins().cols()
                )));
            }
            let digraph = curve_digraph(family, sigma);
            let arcs: Vec<(usize, usize)> = digraph.arcs.iter().map(|a| (a.source, a.target)).collect();
            closure_from_arcs(family, kind, &arcs)
        }
    }
}

/// `M1 <=_B M2` iff `Sigma_{M1} >= Sigma_{M2}` entrywise, for all pairs.
pub fn bruhat_relation(family: &BctFamily) -> Result<FiniteRelation, OrderError> {
    build_relation(family, RelationKind::Bruhat, &CocharacterSpec::identity(family.margins().cols()), DEFAULT_CLOSURE_LIMIT)
}

/// Reflexive-transitive closure of all `L2 -> I2` interchanges.
pub fn secondary_relation(family: &BctFamily) -> Result<FiniteRelation, OrderError> {
    build_relation(family, RelationKind::Secondary, &CocharacterSpec::identity(family.margins().cols()), DEFAULT_CLOSURE_LIMIT)
}

fn bruhat_unchecked(family: &BctFamily) -> FiniteRelation {
    let n = family.len();
    let sums: Vec<Vec<u32>> = family.iter().map(|m| m.partial_sum_matrix().as_slice().to_vec()).collect();
    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![0u64; n.div_ceil(64)];
            for b in 0..n {
                if sums[b].iter().zip(&sums[a]).all(|(x, y)| x >= y) {
                    row[b / 64] |= 1 << (b % 64);
                }
            }
            row
        })
        .collect();
    let mut reach = BitTable::new(n);
    for (a, row) in rows.iter().enumerate() {
        reach.set_row(a, row);
    }
    FiniteRelation { margins: family.margins().clone(), kind: RelationKind::Bruhat, reach }
}

/// Directed arcs `M -> interchange(M, sel)` for every `L2` corner, sorted.
pub fn interchange_arcs(family: &BctFamily) -> Vec<(usize, usize)> {
    let mut arcs: Vec<(usize, usize)> = family
        .members()
        .par_iter()
        .enumerate()
        .flat_map_iter(|(a, m)| {
            m.find_l2()
                .into_iter()
                .map(|sel| {
                    let next = m.interchange(sel).expect("L2 corner");
                    (a, family.position(&next).expect("interchange preserves margins"))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    arcs.sort_unstable();
    arcs.dedup();
    arcs
}

/// Reflexive-transitive closure of `arcs` (`(upper, lower)` pairs), filled
/// in reverse topological order by OR-ing successor rows.
pub fn closure_from_arcs(
    family: &BctFamily,
    kind: RelationKind,
    arcs: &[(usize, usize)],
) -> Result<FiniteRelation, OrderError> {
    let n = family.len();
    let mut succ = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(a, b) in arcs {
        if a == b {
            continue;
        }
        succ[a].push(b);
        indegree[b] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &succ[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&v| indegree[v] > 0).unwrap_or(0);
        return Err(OrderError::Cycle(stuck));
    }
    let mut reach = BitTable::identity(n);
    for &a in order.iter().rev() {
        for &b in &succ[a] {
            reach.or_row(a, b);
        }
    }
    Ok(FiniteRelation { margins: family.margins().clone(), kind, reach })
}

/// Cover pairs `(upper, lower)` of a partial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseDiagram {
    pub margins: MarginPair,
    pub size: usize,
    /// Sorted `(upper, lower)` pairs.
    pub cover_edges: Vec<(usize, usize)>,
}

impl HasseDiagram {
    /// Length of the longest descending chain from each element to a minimal one.
    pub fn levels(&self) -> Vec<usize> {
        let mut below = vec![Vec::new(); self.size];
        for &(u, l) in &self.cover_edges {
            below[u].push(l);
        }
        let mut level = vec![usize::MAX; self.size];
        fn visit(v: usize, below: &[Vec<usize>], level: &mut [usize]) -> usize {
            if level[v] != usize::MAX {
                return level[v];
            }
            let h = below[v].iter().map(|&w| visit(w, below, level) + 1).max().unwrap_or(0);
            level[v] = h;
            h
        }
        for v in 0..self.size {
            visit(v, &below, &mut level);
        }
        level
    }
}

/// Transitive reduction of a partial order.
pub fn hasse(rel: &FiniteRelation) -> Result<HasseDiagram, OrderError> {
    if let Some((a, b)) = rel.first_symmetric_pair() {
        return Err(OrderError::NotAntisymmetric(a, b));
    }
    let n = rel.len();
    let stride = n.div_ceil(64);
    let cover_rows: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut strict: Vec<u64> = rel.reach.row(a).to_vec();
            strict[a / 64] &= !(1 << (a % 64));
            let mut shadowed = vec![0u64; stride];
            for c in ones(&strict) {
                let row = rel.reach.row(c);
                for w in 0..stride {
                    let own = if w == c / 64 { 1u64 << (c % 64) } else { 0 };
                    shadowed[w] |= row[w] & !own;
                }
            }
            let mut covers = Vec::new();
            for w in 0..stride {
                covers.extend(ones(&[strict[w] & !shadowed[w]]).map(|b| (a, w * 64 + b)));
            }
            covers
        })
        .collect();
    Ok(HasseDiagram { margins: rel.margins.clone(), size: n, cover_edges: cover_rows.concat() })
}

/// Cover edges straight from the interchange cover criterion, without closure.
pub fn secondary_hasse_direct(family: &BctFamily) -> HasseDiagram {
    let mut edges: Vec<(usize, usize)> = family
        .members()
        .par_iter()
        .enumerate()
        .flat_map_iter(|(a, m)| {
            m.find_l2()
                .into_iter()
                .filter(|&sel| m.is_secondary_cover(sel).expect("L2 corner"))
                .map(|sel| (a, family.position(&m.interchange(sel).expect("L2 corner")).expect("same margins")))
                .collect::<Vec<_>>()
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    HasseDiagram { margins: family.margins().clone(), size: family.len(), cover_edges: edges }
}

/// Difference report between two relations on the same family. Pairs are
/// `(upper, lower)` member indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationComparison {
    pub first: RelationKind,
    pub second: RelationKind,
    pub equal: bool,
    pub only_in_first_count: usize,
    pub only_in_second_count: usize,
    pub only_in_first: Vec<(usize, usize)>,
    pub only_in_second: Vec<(usize, usize)>,
}

pub fn compare_relations(
    first: &FiniteRelation,
    second: &FiniteRelation,
    report_limit: usize,
) -> Result<RelationComparison, OrderError> {
    if first.margins != second.margins || first.len() != second.len() {
        return Err(OrderError::FamilyMismatch);
    }
    let mut report = RelationComparison {
        first: first.kind,
        second: second.kind,
        equal: true,
        only_in_first_count: 0,
        only_in_second_count: 0,
        only_in_first: Vec::new(),
        only_in_second: Vec::new(),
    };
    for a in 0..first.len() {
        let (x, y) = (first.reach.row(a), second.reach.row(a));
        if x == y {
            continue;
        }
        report.equal = false;
        let only_x: Vec<u64> = x.iter().zip(y).map(|(p, q)| p & !q).collect();
        let only_y: Vec<u64> = x.iter().zip(y).map(|(p, q)| q & !p).collect();
        for b in ones(&only_x) {
            report.only_in_first_count += 1;
            if report.only_in_first.len() < report_limit {
                report.only_in_first.push((a, b));
            }
        }
        for b in ones(&only_y) {
            report.only_in_second_count += 1;
            if report.only_in_second.len() < report_limit {
                report.only_in_second.push((a, b));
            }
        }
    }
    Ok(report)
}
