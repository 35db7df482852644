//! Feasibility, exhaustive enumeration of `BCT(r, c)` and the interchange graph.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::matrix::{BinaryMatrix, MarginPair};

/// Gale-Ryser test: with `c` sorted decreasingly, `BCT(r, c)` is non-empty iff
/// `sum(r) == sum(c)` and `c_1 + ... + c_k <= sum_i min(r_i, k)` for every `k`.
pub fn gale_ryser_feasible(margins: &MarginPair) -> bool {
    gale_ryser(&margins.r, &margins.c)
}

fn gale_ryser(r: &[usize], c: &[usize]) -> bool {
    if r.iter().sum::<usize>() != c.iter().sum::<usize>() {
        return false;
    }
    let mut sorted = c.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut prefix = 0;
    for (idx, &cj) in sorted.iter().enumerate() {
        let k = idx + 1;
        prefix += cj;
        let bound: usize = r.iter().map(|&ri| ri.min(k)).sum();
        if prefix > bound {
            return false;
        }
    }
    // rows longer than the number of columns
    r.iter().all(|&ri| ri <= c.len())
}

/// All members of `BCT(r, c)` in ascending row-major bitstring order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BctFamily {
    margins: MarginPair,
    members: Vec<BinaryMatrix>,
}

impl BctFamily {
    /// Wraps an explicit member list; members are sorted and deduplicated.
    pub fn from_members(margins: MarginPair, mut members: Vec<BinaryMatrix>) -> Self {
        members.sort();
        members.dedup();
        debug_assert!(members.iter().all(|m| m.row_sums() == margins.r && m.col_sums() == margins.c));
        BctFamily { margins, members }
    }

    pub fn margins(&self) -> &MarginPair {
        &self.margins
    }

    pub fn members(&self) -> &[BinaryMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, idx: usize) -> &BinaryMatrix {
        &self.members[idx]
    }

    /// Position of `m` in the canonical order.
    pub fn position(&self, m: &BinaryMatrix) -> Option<usize> {
        self.members.binary_search(m).ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BinaryMatrix> {
        self.members.iter()
    }

    /// JSON export `{"r": [...], "c": [...], "members": [[...bit rows...], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.margins.r,
            "c": self.margins.c,
            "members": self.members.iter().map(|m| m.to_rows()).collect::<Vec<_>>(),
        })
    }
}

/// Per-row choice tables for the backtracking search.
struct Search {
    cols: usize,
    r: Vec<usize>,
    /// `suffix_bound[s][k] = sum_{i >= s} min(r_i, k)`.
    suffix_bound: Vec<Vec<usize>>,
    /// masks of each popcount, sorted by bitstring order (column 0 first).
    by_size: Vec<Vec<u64>>,
}

impl Search {
    fn new(margins: &MarginPair) -> Self {
        let (m, n) = (margins.rows(), margins.cols());
        let mut suffix_bound = vec![vec![0; n + 1]; m + 1];
        for s in (0..m).rev() {
            for k in 0..=n {
                suffix_bound[s][k] = suffix_bound[s + 1][k] + margins.r[s].min(k);
            }
        }
        let mut by_size = vec![Vec::new(); n + 1];
        for size in margins.r.iter().copied().filter(|&s| s <= n) {
            if by_size[size].is_empty() {
                by_size[size] = subsets_of_size(n, size);
            }
        }
        Search { cols: n, r: margins.r.clone(), suffix_bound, by_size }
    }

    /// Gale-Ryser on rows `row..` against the residual column sums.
    fn residual_feasible(&self, row: usize, residual: &[usize]) -> bool {
        let mut sorted = residual.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut prefix = 0;
        for (idx, &v) in sorted.iter().enumerate() {
            if v == 0 {
                break;
            }
            prefix += v;
            if prefix > self.suffix_bound[row][idx + 1] {
                return false;
            }
        }
        true
    }

    fn extend(&self, row: usize, masks: &mut Vec<u64>, residual: &mut [usize], out: &mut Vec<BinaryMatrix>) {
        if row == self.r.len() {
            out.push(BinaryMatrix::from_row_masks(self.cols, masks));
            return;
        }
        let available = residual
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .fold(0u64, |acc, (j, _)| acc | 1 << j);
        for &mask in &self.by_size[self.r[row]] {
            if mask & !available != 0 {
                continue;
            }
            apply(mask, residual, false);
            if self.residual_feasible(row + 1, residual) {
                masks.push(mask);
                self.extend(row + 1, masks, residual, out);
                masks.pop();
            }
            apply(mask, residual, true);
        }
    }
}

fn apply(mask: u64, residual: &mut [usize], undo: bool) {
    let mut rest = mask;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        if undo {
            residual[j] += 1;
        } else {
            residual[j] -= 1;
        }
        rest &= rest - 1;
    }
}

/// Bitmasks over `n` columns with exactly `size` bits set, ascending by the
/// bitstring that lists column 0 first.
fn subsets_of_size(n: usize, size: usize) -> Vec<u64> {
    let mut out = Vec::new();
    fn rec(n: usize, start: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for j in start..n {
            if n - j < left {
                break;
            }
            rec(n, j + 1, left - 1, acc | 1 << j, out);
        }
    }
    rec(n, 0, size, 0, &mut out);
    out.sort_by_key(|&mask| mask.reverse_bits());
    out
}

/// Enumerates `BCT(r, c)` row by row with Gale-Ryser pruning on the residual
/// margins. Returns an empty family when the margins are infeasible or have
/// no rows or columns.
///
/// # Panics
/// If there are more than 64 columns.
pub fn enumerate_bcts(margins: &MarginPair) -> BctFamily {
    let (m, n) = (margins.rows(), margins.cols());
    assert!(n <= 64, "enumeration supports at most 64 columns");
    if m == 0 || n == 0 || !gale_ryser_feasible(margins) {
        return BctFamily { margins: margins.clone(), members: Vec::new() };
    }
    let search = Search::new(margins);
    let firsts: Vec<u64> = search.by_size[margins.r[0]].clone();
    let chunks: Vec<Vec<BinaryMatrix>> = firsts
        .par_iter()
        .map(|&mask| {
            let mut residual = margins.c.clone();
            if (0..n).any(|j| mask >> j & 1 == 1 && residual[j] == 0) {
                return Vec::new();
            }
            apply(mask, &mut residual, false);
            let mut out = Vec::new();
            if search.residual_feasible(1, &residual) {
                search.extend(1, &mut vec![mask], &mut residual, &mut out);
            }
            out
        })
        .collect();
    BctFamily { margins: margins.clone(), members: chunks.concat() }
}

/// Undirected graph on a family; one edge per pair related by one interchange.
#[derive(Debug, Clone)]
pub struct InterchangeGraph<'a> {
    pub family: &'a BctFamily,
    /// `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
}

pub fn interchange_graph(family: &BctFamily) -> InterchangeGraph<'_> {
    let mut edges: Vec<(usize, usize)> = family
        .members()
        .par_iter()
        .enumerate()
        .flat_map_iter(|(a, m)| {
            m.find_l2()
                .into_iter()
                .map(move |sel| {
                    let next = m.interchange(sel).expect("find_l2 returns L2 corners");
                    let b = family.position(&next).expect("interchange preserves margins");
                    (a.min(b), a.max(b))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    InterchangeGraph { family, edges }
}

impl InterchangeGraph<'_> {
    pub fn vertex_count(&self) -> usize {
        self.family.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Breadth-first connectivity; vacuously true with at most one vertex.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }
}

pub fn is_connected(graph: &InterchangeGraph<'_>) -> bool {
    graph.is_connected()
}
