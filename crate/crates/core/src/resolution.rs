//! Column resolutions: splitting a column of a table into two adjacent
//! columns, the merge map `q` that undoes it, maximal resolutions into
//! `BCT(r, 1^d)`, and the two-column description of the secondary order.

use thiserror::Error;

use crate::enumerate::{enumerate_bcts, BctFamily};
use crate::matrix::{BinaryMatrix, CornerSelection, MarginPair, MatrixError};
use crate::orders::{secondary_relation, FiniteRelation, OrderError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("column {column} is out of range")]
    ColumnOutOfRange { column: usize },
    #[error("cannot split column sum {sum} as {left} + {right}")]
    InvalidSplit { sum: usize, left: usize, right: usize },
    #[error("row {row} has ones in both merged columns")]
    BothBitsSet { row: usize },
    #[error("matrices have different margins")]
    MarginMismatch,
    #[error("expected two columns, found {0}")]
    NotTwoColumns(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Split `c_column = left + right` with both parts positive (0-based column).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChargeResolution {
    pub column: usize,
    pub left: usize,
    pub right: usize,
}

impl ChargeResolution {
    pub fn new(column: usize, left: usize, right: usize) -> Self {
        ChargeResolution { column, left, right }
    }

    fn check(&self, c: &[usize]) -> Result<(), ResolutionError> {
        let sum = *c.get(self.column).ok_or(ResolutionError::ColumnOutOfRange { column: self.column })?;
        if self.left == 0 || self.right == 0 || self.left + self.right != sum {
            return Err(ResolutionError::InvalidSplit { sum, left: self.left, right: self.right });
        }
        Ok(())
    }

    /// Every valid split of every column of `c`.
    pub fn all_for(c: &[usize]) -> Vec<ChargeResolution> {
        let mut out = Vec::new();
        for (column, &ck) in c.iter().enumerate() {
            for left in 1..ck {
                out.push(ChargeResolution::new(column, left, ck - left));
            }
        }
        out
    }
}

/// `c` with `c_k` replaced by the consecutive pair `(left, right)`.
pub fn resolve_charges(c: &[usize], res: ChargeResolution) -> Result<Vec<usize>, ResolutionError> {
    res.check(c)?;
    let mut out = Vec::with_capacity(c.len() + 1);
    out.extend_from_slice(&c[..res.column]);
    out.push(res.left);
    out.push(res.right);
    out.extend_from_slice(&c[res.column + 1..]);
    Ok(out)
}

/// A table with margins `(r, c~)` whose columns `origin_column` and
/// `origin_column + 1` never both hold a 1 in the same row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolvedMatrix {
    pub matrix: BinaryMatrix,
    pub origin_column: usize,
}

impl ResolvedMatrix {
    pub fn new(matrix: BinaryMatrix, origin_column: usize) -> Result<Self, ResolutionError> {
        if origin_column + 1 >= matrix.cols() {
            return Err(ResolutionError::ColumnOutOfRange { column: origin_column });
        }
        if let Some(row) = (0..matrix.rows()).find(|&i| matrix.get(i, origin_column) && matrix.get(i, origin_column + 1)) {
            return Err(ResolutionError::BothBitsSet { row });
        }
        Ok(ResolvedMatrix { matrix, origin_column })
    }
}

/// The map `q`: ORs columns `k` and `k + 1`.
pub fn merge_columns(resolved: &ResolvedMatrix) -> Result<BinaryMatrix, ResolutionError> {
    merge_at(&resolved.matrix, resolved.origin_column)
}

pub fn merge_at(m: &BinaryMatrix, k: usize) -> Result<BinaryMatrix, ResolutionError> {
    collapse_groups(m, &(0..m.cols() - 1).map(|j| if j == k { 2 } else { 1 }).collect::<Vec<_>>())
}

/// Merges consecutive groups of columns of the given sizes; each group may
/// hold at most one 1 per row.
pub fn collapse_groups(m: &BinaryMatrix, sizes: &[usize]) -> Result<BinaryMatrix, ResolutionError> {
    if sizes.iter().sum::<usize>() != m.cols() {
        return Err(ResolutionError::ColumnOutOfRange { column: m.cols() });
    }
    let mut starts = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in sizes {
        starts.push(acc);
        acc += s;
    }
    for i in 0..m.rows() {
        for (g, &s) in sizes.iter().enumerate() {
            if (starts[g]..starts[g] + s).filter(|&j| m.get(i, j)).count() > 1 {
                return Err(ResolutionError::BothBitsSet { row: i });
            }
        }
    }
    Ok(BinaryMatrix::from_fn(m.rows(), sizes.len(), |i, g| (starts[g]..starts[g] + sizes[g]).any(|j| m.get(i, j)))?)
}

/// The fiber `q^{-1}(M)`, ordered lexicographically by the set of rows
/// whose 1 goes to the left sub-column.
pub fn column_resolutions(m: &BinaryMatrix, res: ChargeResolution) -> Result<Vec<ResolvedMatrix>, ResolutionError> {
    res.check(m.col_sums())?;
    let k = res.column;
    let ones: Vec<usize> = (0..m.rows()).filter(|&i| m.get(i, k)).collect();
    let mut out = Vec::new();
    for left in combinations(&ones, res.left) {
        let matrix = BinaryMatrix::from_fn(m.rows(), m.cols() + 1, |i, j| match j.cmp(&k) {
            std::cmp::Ordering::Less => m.get(i, j),
            std::cmp::Ordering::Equal => left.contains(&i),
            std::cmp::Ordering::Greater if j == k + 1 => m.get(i, k) && !left.contains(&i),
            std::cmp::Ordering::Greater => m.get(i, j - 1),
        })?;
        out.push(ResolvedMatrix { matrix, origin_column: k });
    }
    Ok(out)
}

/// `size`-subsets of `items` in lexicographic order.
fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], size: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == size {
            out.push(acc.clone());
            return;
        }
        for idx in start..items.len() {
            if items.len() - idx < size - acc.len() {
                break;
            }
            acc.push(items[idx]);
            rec(items, size, idx + 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::new(), &mut out);
    out
}

/// All permutations of `items` in lexicographic order of positions.
fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for idx in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(idx);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every way of replacing column `i` by `c_i` columns each holding one of
/// its 1s. The results lie in `BCT(r, 1^d)` with `d = sum(c)`; there are
/// `prod c_i!` of them. Empty when `M` has no 1s.
pub fn maximal_resolutions(m: &BinaryMatrix) -> Vec<BinaryMatrix> {
    let d = m.ones();
    if d == 0 {
        return Vec::new();
    }
    let per_column: Vec<Vec<Vec<usize>>> = (0..m.cols())
        .map(|j| permutations(&(0..m.rows()).filter(|&i| m.get(i, j)).collect::<Vec<_>>()))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; m.cols()];
    loop {
        let mut row_of_col = Vec::with_capacity(d);
        for (j, perms) in per_column.iter().enumerate() {
            row_of_col.extend_from_slice(&perms[choice[j]]);
        }
        out.push(BinaryMatrix::from_fn(m.rows(), d, |i, j| row_of_col[j] == i).expect("nonempty"));
        // odometer with the last column varying fastest
        let mut j = m.cols();
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            choice[j] += 1;
            if choice[j] < per_column[j].len() {
                break;
            }
            choice[j] = 0;
        }
    }
}

/// Secondary order on `BCT(r, c~)` for one resolution, kept for repeated
/// compatibility queries.
pub struct ResolvedOrder {
    pub margins: MarginPair,
    pub res: ChargeResolution,
    pub family: BctFamily,
    pub relation: FiniteRelation,
}

impl ResolvedOrder {
    pub fn new(margins: &MarginPair, res: ChargeResolution) -> Result<Self, ResolutionError> {
        let resolved = MarginPair::new(margins.r.clone(), resolve_charges(&margins.c, res)?)?;
        let family = enumerate_bcts(&resolved);
        let relation = secondary_relation(&family)?;
        Ok(ResolvedOrder { margins: margins.clone(), res, family, relation })
    }

    /// Whether every resolution of `m1` lies above some resolution of `m2`.
    pub fn compatible(&self, m1: &BinaryMatrix, m2: &BinaryMatrix) -> Result<bool, ResolutionError> {
        if m1.margins() != self.margins || m2.margins() != self.margins {
            return Err(ResolutionError::MarginMismatch);
        }
        let lift = |m: &BinaryMatrix| -> Result<Vec<usize>, ResolutionError> {
            Ok(column_resolutions(m, self.res)?
                .iter()
                .map(|r| self.family.position(&r.matrix).expect("resolution lies in the resolved family"))
                .collect())
        };
        let (upper, lower) = (lift(m1)?, lift(m2)?);
        Ok(upper.iter().all(|&u| lower.iter().any(|&w| self.relation.leq(w, u))))
    }
}

/// Right-hand side of the resolution lemma: for every `M1~` in the fiber
/// of `M1` some `M2~` in the fiber of `M2` satisfies `M2~ <= M1~` in the
/// secondary order on `BCT(r, c~)`. The lemma says this holds iff
/// `M2 <= M1` in the secondary order.
pub fn check_resolution_compatibility(m1: &BinaryMatrix, m2: &BinaryMatrix, res: ChargeResolution) -> Result<bool, ResolutionError> {
    if m1.margins() != m2.margins() {
        return Err(ResolutionError::MarginMismatch);
    }
    ResolvedOrder::new(&m1.margins(), res)?.compatible(m1, m2)
}

fn two_column_pairs(m: &BinaryMatrix, m_prime: &BinaryMatrix) -> Result<Option<Vec<(usize, usize)>>, ResolutionError> {
    if m.cols() != 2 {
        return Err(ResolutionError::NotTwoColumns(m.cols()));
    }
    if m.margins() != m_prime.margins() {
        return Err(ResolutionError::MarginMismatch);
    }
    // rows where Z = M' - M is (1,-1), resp. (-1,1); (0,0) otherwise
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 0..m.rows() {
        match (m.get(i, 0), m.get(i, 1), m_prime.get(i, 0), m_prime.get(i, 1)) {
            (a, b, c, d) if a == c && b == d => {}
            (false, true, true, false) => plus.push(i),
            (true, false, false, true) => minus.push(i),
            _ => return Ok(None),
        }
        if plus.len() < minus.len() {
            return Ok(None);
        }
    }
    if plus.len() != minus.len() {
        return Ok(None);
    }
    Ok(Some(plus.into_iter().zip(minus).collect()))
}

/// For two-column tables: `M' <= M` in the secondary order iff `Z = M' - M`
/// has rows in `{(0,0), (1,-1), (-1,1)}`, every prefix has at least as many
/// `(1,-1)` as `(-1,1)` rows, and the totals agree.
pub fn two_column_leq(m: &BinaryMatrix, m_prime: &BinaryMatrix) -> Result<bool, ResolutionError> {
    Ok(two_column_pairs(m, m_prime)?.is_some())
}

/// Interchanges taking `M` to `M'`, pairing the t-th `(1,-1)` row of `Z`
/// with the t-th `(-1,1)` row. `None` when `M' <= M` fails.
pub fn two_column_witness(m: &BinaryMatrix, m_prime: &BinaryMatrix) -> Result<Option<Vec<CornerSelection>>, ResolutionError> {
    Ok(two_column_pairs(m, m_prime)?.map(|pairs| pairs.into_iter().map(|(u, d)| CornerSelection::new(u, d, 0, 1)).collect()))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
