//! Matched blocks, block swap moves and their tangent weights, and the
//! directed curve relation whose closure is the geometric order.
//!
//! A block swap move on `M` swaps columns `k < l` on a contiguous row range
//! whose two column sums agree. Moves are identified with their trimmed
//! block: the top and bottom rows are affected rows, i.e. `(0,1)` or `(1,0)`
//! on columns `(k, l)`. A move is indecomposable when its block is minimal.
//! The tangent weight of the move is `a_{q1}/a_{q0} h^d` where, on the top
//! row `i`, `q0` is the column whose 0 becomes 1, `q1` the column whose 1
//! becomes 0, and `d = 1 + s_{i,q0} - s_{i,q1}` with `s` the column prefix
//! sums through row `i`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::BctFamily;
use crate::matrix::{BinaryMatrix, CornerSelection};
use crate::orders::{closure_from_arcs, FiniteRelation, OrderError, RelationKind, DEFAULT_CLOSURE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("block {0} is not matched")]
    NotMatched(MatchedBlock),
    #[error("block {0} does not start on an affected row")]
    TopRowNotAffected(MatchedBlock),
    #[error("block {0} lies outside the matrix")]
    OutOfBounds(MatchedBlock),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

/// Columns `k < l`, rows `top..=bottom` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatchedBlock {
    pub k: usize,
    pub l: usize,
    pub top: usize,
    pub bottom: usize,
}

impl MatchedBlock {
    pub fn new(k: usize, l: usize, top: usize, bottom: usize) -> Self {
        MatchedBlock { k, l, top, bottom }
    }

    pub fn height(&self) -> usize {
        self.bottom + 1 - self.top
    }
}

impl fmt::Display for MatchedBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cols ({},{}) rows [{},{}]", self.k + 1, self.l + 1, self.top + 1, self.bottom + 1)
    }
}

/// `a_{num}/a_{den} h^{hbar_exp}` with 0-based column indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TangentWeight {
    /// `q1`: the column whose 1 becomes 0 on the top row.
    pub num: usize,
    /// `q0`: the column whose 0 becomes 1 on the top row.
    pub den: usize,
    pub hbar_exp: i64,
}

impl fmt::Display for TangentWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}/a{} h^{}", self.num + 1, self.den + 1, self.hbar_exp)
    }
}

/// The permutation `sigma` behind the cocharacter `t -> (t^sigma(1), ..., t^sigma(n), 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CocharacterSpec {
    sigma: Vec<usize>,
}

impl CocharacterSpec {
    pub fn identity(n: usize) -> Self {
        CocharacterSpec { sigma: (0..n).collect() }
    }

    /// From 0-based images `sigma[j]`.
    pub fn new(sigma: Vec<usize>) -> Result<Self, CurveError> {
        let mut seen = vec![false; sigma.len()];
        for &s in &sigma {
            if s >= sigma.len() || std::mem::replace(&mut seen[s], true) {
                return Err(CurveError::InvalidPermutation(format!("{sigma:?} is not a bijection")));
            }
        }
        Ok(CocharacterSpec { sigma })
    }

    /// From 1-based one-line notation, e.g. `"2,1,3"`.
    pub fn parse_one_line(text: &str) -> Result<Self, CurveError> {
        let images = text
            .split(',')
            .map(|t| match t.trim().parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(CurveError::InvalidPermutation(format!("bad entry {t:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(images)
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn image(&self, j: usize) -> usize {
        self.sigma[j]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(j, &s)| j == s)
    }
}

/// Pullback of the weight along the cocharacter has positive exponent.
pub fn is_attractive(w: &TangentWeight, spec: &CocharacterSpec) -> bool {
    spec.image(w.num) > spec.image(w.den)
}

#[inline]
fn affected(m: &BinaryMatrix, p: usize, k: usize, l: usize) -> bool {
    m.get(p, k) != m.get(p, l)
}

fn check_matched(m: &BinaryMatrix, block: MatchedBlock) -> Result<(), CurveError> {
    if block.k >= block.l || block.l >= m.cols() || block.top > block.bottom || block.bottom >= m.rows() {
        return Err(CurveError::OutOfBounds(block));
    }
    let balance: i64 = (block.top..=block.bottom)
        .map(|p| m.entry(p, block.k) as i64 - m.entry(p, block.l) as i64)
        .sum();
    if balance != 0 {
        return Err(CurveError::NotMatched(block));
    }
    Ok(())
}

/// All trimmed matched blocks of `m`, ascending by `(k, l, top, bottom)`.
pub fn matched_blocks(m: &BinaryMatrix) -> Vec<MatchedBlock> {
    let mut out = Vec::new();
    for k in 0..m.cols() {
        for l in k + 1..m.cols() {
            // prefix[p] = balance of rows 0..p
            let mut prefix = vec![0i64; m.rows() + 1];
            for p in 0..m.rows() {
                prefix[p + 1] = prefix[p] + m.entry(p, k) as i64 - m.entry(p, l) as i64;
            }
            let rows: Vec<usize> = (0..m.rows()).filter(|&p| affected(m, p, k, l)).collect();
            for (a, &top) in rows.iter().enumerate() {
                for &bottom in &rows[a + 1..] {
                    if prefix[bottom + 1] == prefix[top] {
                        out.push(MatchedBlock::new(k, l, top, bottom));
                    }
                }
            }
        }
    }
    out
}

/// Splits a matched block into its minimal matched blocks, top to bottom.
/// Rows between components are `(0,0)`/`(1,1)` separators.
pub fn minimal_decomposition(m: &BinaryMatrix, block: MatchedBlock) -> Result<Vec<MatchedBlock>, CurveError> {
    check_matched(m, block)?;
    let MatchedBlock { k, l, .. } = block;
    let mut out = Vec::new();
    let mut open: Option<usize> = None;
    let mut balance = 0i64;
    for p in block.top..=block.bottom {
        if !affected(m, p, k, l) {
            continue;
        }
        balance += if m.get(p, k) { 1 } else { -1 };
        match open {
            None => open = Some(p),
            Some(start) if balance == 0 => {
                out.push(MatchedBlock::new(k, l, start, p));
                open = None;
            }
            Some(_) => {}
        }
    }
    debug_assert!(open.is_none());
    Ok(out)
}

pub fn is_minimal(m: &BinaryMatrix, block: MatchedBlock) -> Result<bool, CurveError> {
    Ok(minimal_decomposition(m, block)? == vec![block])
}

/// Swaps columns `k` and `l` on the block's rows.
pub fn apply_block_swap(m: &BinaryMatrix, block: MatchedBlock) -> Result<BinaryMatrix, CurveError> {
    check_matched(m, block)?;
    Ok(m.swap_columns_on_rows(block.k, block.l, block.top, block.bottom))
}

pub fn tangent_weight(m: &BinaryMatrix, block: MatchedBlock) -> Result<TangentWeight, CurveError> {
    check_matched(m, block)?;
    let i = block.top;
    if !affected(m, i, block.k, block.l) {
        return Err(CurveError::TopRowNotAffected(block));
    }
    let (q0, q1) = if m.get(i, block.k) { (block.l, block.k) } else { (block.k, block.l) };
    let s = |q: usize| m.column_prefix_sum(i + 1, q).expect("in range") as i64;
    Ok(TangentWeight { num: q1, den: q0, hbar_exp: 1 + s(q0) - s(q1) })
}

/// A block swap move between two members of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSwapMove {
    pub source: usize,
    pub target: usize,
    pub block: MatchedBlock,
    pub components: Vec<MatchedBlock>,
    pub weight: TangentWeight,
    /// All components carry the same tangent weight, so the move spans one
    /// weight space and forms a pencil.
    pub uniform_weight: bool,
}

impl BlockSwapMove {
    /// Dimension of the pencil of compact curves: the number of minimal components.
    pub fn pencil_dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.components.len() == 1
    }
}

/// An arc `source -> target` of the directed curve relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveArc {
    pub source: usize,
    pub target: usize,
    pub block: MatchedBlock,
    pub weight: TangentWeight,
    pub pencil_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDigraph {
    pub size: usize,
    /// Indecomposable attractive moves, sorted by source then block.
    pub arcs: Vec<CurveArc>,
    /// Every move, decomposable ones included, in the same order.
    pub moves: Vec<BlockSwapMove>,
}

/// All block swap moves out of member `source`.
pub fn block_swap_moves(family: &BctFamily, source: usize) -> Vec<BlockSwapMove> {
    let m = family.get(source);
    matched_blocks(m)
        .into_iter()
        .map(|block| {
            let target = family.position(&m.swap_columns_on_rows(block.k, block.l, block.top, block.bottom)).expect("swap preserves margins");
            let components = minimal_decomposition(m, block).expect("matched");
            let weight = tangent_weight(m, block).expect("trimmed");
            let uniform_weight = components.iter().all(|&c| tangent_weight(m, c).expect("trimmed") == weight);
            BlockSwapMove { source, target, block, components, weight, uniform_weight }
        })
        .collect()
}

pub fn curve_digraph(family: &BctFamily, spec: &CocharacterSpec) -> CurveDigraph {
    let moves: Vec<BlockSwapMove> = (0..family.len())
        .into_par_iter()
        .flat_map_iter(|a| block_swap_moves(family, a))
        .collect();
    let arcs = moves
        .iter()
        .filter(|mv| mv.is_indecomposable() && is_attractive(&mv.weight, spec))
        .map(|mv| CurveArc { source: mv.source, target: mv.target, block: mv.block, weight: mv.weight, pencil_dim: 1 })
        .collect();
    CurveDigraph { size: family.len(), arcs, moves }
}

impl CurveDigraph {
    /// Moves whose components share one tangent weight.
    pub fn pencils(&self) -> impl Iterator<Item = &BlockSwapMove> {
        self.moves.iter().filter(|mv| mv.uniform_weight)
    }
}

/// Reflexive-transitive closure of the directed curve arcs.
pub fn geometric_relation(family: &BctFamily, spec: &CocharacterSpec) -> Result<FiniteRelation, OrderError> {
    crate::orders::build_relation(family, RelationKind::Geometric, spec, DEFAULT_CLOSURE_LIMIT)
}

/// Closure of arcs already computed, for callers that keep the digraph.
pub fn relation_from_digraph(family: &BctFamily, digraph: &CurveDigraph) -> Result<FiniteRelation, OrderError> {
    let arcs: Vec<(usize, usize)> = digraph.arcs.iter().map(|a| (a.source, a.target)).collect();
    closure_from_arcs(family, RelationKind::Geometric, &arcs)
}

/// A sequence of `L2 -> I2` interchanges that performs the swap of `block`,
/// pairing the t-th `(0,1)` row with the t-th `(1,0)` row. `None` when some
/// prefix of the block has more `(1,0)` than `(0,1)` rows, i.e. the swap is
/// not a downward move in the secondary order.
pub fn interchange_chain(m: &BinaryMatrix, block: MatchedBlock) -> Result<Option<Vec<CornerSelection>>, CurveError> {
    check_matched(m, block)?;
    let (k, l) = (block.k, block.l);
    let ups: Vec<usize> = (block.top..=block.bottom).filter(|&p| !m.get(p, k) && m.get(p, l)).collect();
    let downs: Vec<usize> = (block.top..=block.bottom).filter(|&p| m.get(p, k) && !m.get(p, l)).collect();
    if ups.iter().zip(&downs).any(|(u, d)| u > d) {
        return Ok(None);
    }
    Ok(Some(ups.iter().zip(&downs).map(|(&u, &d)| CornerSelection::new(u, d, k, l)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_bcts;
    use crate::matrix::MarginPair;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn blocks_of_2x2() {
        let i2 = m(&[&[1, 0], &[0, 1]]);
        let l2 = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(matched_blocks(&i2), vec![MatchedBlock::new(0, 1, 0, 1)]);
        assert_eq!(matched_blocks(&l2), vec![MatchedBlock::new(0, 1, 0, 1)]);
        let full = MatchedBlock::new(0, 1, 0, 1);
        assert_eq!(apply_block_swap(&l2, full).unwrap(), i2);
        assert_eq!(apply_block_swap(&i2, full).unwrap(), l2);
    }

    #[test]
    fn weights_of_2x2() {
        let full = MatchedBlock::new(0, 1, 0, 1);
        let l2 = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(tangent_weight(&l2, full).unwrap(), TangentWeight { num: 1, den: 0, hbar_exp: 0 });
        // top row (1,0): q0 = 2, q1 = 1, d = 1 + s_{1,2} - s_{1,1} = 1 + 0 - 1
        let i2 = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(tangent_weight(&i2, full).unwrap(), TangentWeight { num: 0, den: 1, hbar_exp: 0 });
        assert_eq!(tangent_weight(&l2, full).unwrap().to_string(), "a2/a1 h^0");
    }

    #[test]
    fn attractiveness() {
        let up = TangentWeight { num: 1, den: 0, hbar_exp: 0 };
        let down = TangentWeight { num: 0, den: 1, hbar_exp: 3 };
        let id = CocharacterSpec::identity(2);
        assert!(is_attractive(&up, &id));
        assert!(!is_attractive(&down, &id));
        let swap = CocharacterSpec::parse_one_line("2,1").unwrap();
        assert!(is_attractive(&down, &swap));
        assert!(CocharacterSpec::parse_one_line("1,1").is_err());
        assert!(CocharacterSpec::parse_one_line("0,1").is_err());
    }

    #[test]
    fn eleven_row_block() {
        let rows: [[u8; 2]; 11] = [[0, 1], [1, 0], [1, 1], [1, 0], [1, 0], [0, 1], [1, 1], [0, 1], [0, 0], [1, 0], [0, 1]];
        let b = BinaryMatrix::from_rows(&rows).unwrap();
        let parts = minimal_decomposition(&b, MatchedBlock::new(0, 1, 0, 10)).unwrap();
        assert_eq!(parts, vec![MatchedBlock::new(0, 1, 0, 1), MatchedBlock::new(0, 1, 3, 7), MatchedBlock::new(0, 1, 9, 10)]);
        for p in &parts {
            assert!(is_minimal(&b, *p).unwrap());
        }
    }

    #[test]
    fn rejects_unmatched() {
        let b = m(&[&[1, 0], &[1, 0]]);
        assert!(matches!(apply_block_swap(&b, MatchedBlock::new(0, 1, 0, 1)), Err(CurveError::NotMatched(_))));
        let c = m(&[&[1, 1], &[1, 0], &[0, 1]]);
        assert!(matches!(tangent_weight(&c, MatchedBlock::new(0, 1, 0, 2)), Err(CurveError::TopRowNotAffected(_))));
    }

    #[test]
    fn single_arc_on_2x2() {
        let f = enumerate_bcts(&MarginPair::new(vec![1, 1], vec![1, 1]).unwrap());
        let g = curve_digraph(&f, &CocharacterSpec::identity(2));
        assert_eq!(g.arcs.len(), 1);
        let arc = &g.arcs[0];
        assert_eq!(f.get(arc.source).bitstring(), "0110");
        assert_eq!(f.get(arc.target).bitstring(), "1001");
        assert_eq!(arc.weight.to_string(), "a2/a1 h^0");
    }

    #[test]
    fn chain_for_minimal_block() {
        let b = m(&[&[0, 1], &[0, 1], &[1, 1], &[1, 0], &[1, 0]]);
        let block = MatchedBlock::new(0, 1, 0, 4);
        let chain = interchange_chain(&b, block).unwrap().unwrap();
        let mut cur = b.clone();
        for sel in chain {
            cur = cur.interchange(sel).unwrap();
        }
        assert_eq!(cur, apply_block_swap(&b, block).unwrap());
        let flipped = apply_block_swap(&b, block).unwrap();
        assert_eq!(interchange_chain(&flipped, block).unwrap(), None);
    }
}
