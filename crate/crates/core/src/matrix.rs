//! Binary contingency tables: the `BinaryMatrix` type, corner partial sums,
//! `L2 -> I2` interchanges and the secondary cover criterion.
//!
//! The Rust API indexes rows and columns from 0. Formulas in doc comments
//! use the 1-based notation `m_ij` of the literature; `CornerSelection`
//! prints itself 1-based for the same reason.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("a matrix needs at least one row and one column")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("entry ({row}, {col}) is {value}, expected 0 or 1")]
    NonBit { row: usize, col: usize, value: i64 },
    #[error("row sums add up to {rows} but column sums add up to {cols}")]
    SumMismatch { rows: usize, cols: usize },
    #[error("matrices do not share margins")]
    MarginMismatch,
    #[error("invalid corner selection {0}")]
    InvalidSelection(CornerSelection),
    #[error("submatrix at {0} is not L2")]
    NotL2(CornerSelection),
    #[error("index ({row}, {col}) out of range")]
    IndexOutOfRange { row: usize, col: usize },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

/// Row sum vector `r` and column sum vector `c`, with `sum(r) == sum(c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarginPair {
    pub r: Vec<usize>,
    pub c: Vec<usize>,
}

impl MarginPair {
    pub fn new(r: Vec<usize>, c: Vec<usize>) -> Result<Self, MatrixError> {
        let rows: usize = r.iter().sum();
        let cols: usize = c.iter().sum();
        if rows != cols {
            return Err(MatrixError::SumMismatch { rows, cols });
        }
        Ok(MarginPair { r, c })
    }

    pub fn total(&self) -> usize {
        self.r.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.r.len()
    }

    pub fn cols(&self) -> usize {
        self.c.len()
    }
}

impl fmt::Display for MarginPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "(({}),({}))", join(&self.r), join(&self.c))
    }
}

/// Dense matrix of non-negative integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl IntegerMatrix {
    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged integer matrix");
        IntegerMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    /// True iff every entry of `self` is `>=` the matching entry of `other`.
    pub fn dominates(&self, other: &IntegerMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a >= b)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).collect()
    }
}

/// Two rows `i < j` and two columns `k < l`, not necessarily adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CornerSelection {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl CornerSelection {
    pub fn new(i: usize, j: usize, k: usize, l: usize) -> Self {
        CornerSelection { i, j, k, l }
    }
}

impl fmt::Display for CornerSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.i + 1, self.j + 1, self.k + 1, self.l + 1)
    }
}

/// A 0/1 matrix with cached margins.
///
/// Rows are packed into 64-bit words with column 0 in the most significant
/// bit, so comparing the word vectors compares the row-major bitstrings
/// lexicographically. The derived `Ord` relies on the field order below.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words: Vec<u64>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: Vec<Vec<i64>>,
}

impl BinaryMatrix {
    fn words_per_row(cols: usize) -> usize {
        cols.div_ceil(WORD_BITS)
    }

    fn blank(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows,
            cols,
            words: vec![0; rows * Self::words_per_row(cols)],
            row_sums: vec![0; rows],
            col_sums: vec![0; cols],
        }
    }

    #[inline]
    fn locate(&self, i: usize, j: usize) -> (usize, u64) {
        let w = i * Self::words_per_row(self.cols) + j / WORD_BITS;
        (w, 1u64 << (WORD_BITS - 1 - j % WORD_BITS))
    }

    /// Flips a bit without touching the cached margins.
    #[inline]
    fn toggle_raw(&mut self, i: usize, j: usize) {
        let (w, mask) = self.locate(i, j);
        self.words[w] ^= mask;
    }

    fn recompute_margins(&mut self) {
        for i in 0..self.rows {
            self.row_sums[i] = (0..self.cols).filter(|&j| self.get(i, j)).count();
        }
        for j in 0..self.cols {
            self.col_sums[j] = (0..self.rows).filter(|&i| self.get(i, j)).count();
        }
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_rows<R: AsRef<[u8]>>(bit_rows: &[R]) -> Result<Self, MatrixError> {
        let wide: Vec<Vec<i64>> = bit_rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| x as i64).collect())
            .collect();
        Self::from_i64_rows(&wide)
    }

    fn from_i64_rows(bit_rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let rows = bit_rows.len();
        let cols = bit_rows.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        let mut m = Self::blank(rows, cols);
        for (i, row) in bit_rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged { row: i, found: row.len(), expected: cols });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.toggle_raw(i, j),
                    _ => return Err(MatrixError::NonBit { row: i, col: j, value: v }),
                }
            }
        }
        m.recompute_margins();
        Ok(m)
    }

    /// Builds an `rows x cols` matrix whose `(i, j)` entry is `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        let mut m = Self::blank(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.toggle_raw(i, j);
                }
            }
        }
        m.recompute_margins();
        Ok(m)
    }

    /// Builds a matrix from per-row column sets, each given as a bitmask
    /// over at most 64 columns (bit `j` set means column `j` holds a 1).
    pub(crate) fn from_row_masks(cols: usize, masks: &[u64]) -> Self {
        debug_assert!(cols <= WORD_BITS);
        let mut m = Self::blank(masks.len(), cols);
        for (i, &mask) in masks.iter().enumerate() {
            m.words[i] = mask.reverse_bits();
            m.row_sums[i] = mask.count_ones() as usize;
            for j in 0..cols {
                if mask >> j & 1 == 1 {
                    m.col_sums[j] += 1;
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `m_{i+1, j+1}` as a boolean.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        let (w, mask) = self.locate(i, j);
        self.words[w] & mask != 0
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.get(i, j) as u8
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn margins(&self) -> MarginPair {
        MarginPair { r: self.row_sums.clone(), c: self.col_sums.clone() }
    }

    pub fn ones(&self) -> usize {
        self.row_sums.iter().sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// Row-major bitstring, e.g. `"101010101"` for a 3x3 matrix.
    pub fn bitstring(&self) -> String {
        let mut s = String::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
        }
        s
    }

    /// Text format: one line per row, characters `0`/`1`, no separators.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self, MatrixError> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().map(str::trim).filter(|l| !l.is_empty()).enumerate() {
            let row = line
                .chars()
                .enumerate()
                .map(|(j, ch)| match ch {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(MatrixError::Parse(format!("unexpected {other:?} at row {}, column {}", i + 1, j + 1))),
                })
                .collect::<Result<Vec<i64>, _>>()?;
            rows.push(row);
        }
        Self::from_i64_rows(&rows)
    }

    /// JSON form `{"rows": [[0,1],[1,0]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "rows": self.to_rows() })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, MatrixError> {
        let parsed: MatrixJson =
            serde_json::from_value(value.clone()).map_err(|e| MatrixError::Parse(e.to_string()))?;
        Self::from_i64_rows(&parsed.rows)
    }

    /// Parses either the JSON form or the plain text form.
    pub fn parse_any(input: &str) -> Result<Self, MatrixError> {
        if input.trim_start().starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(input).map_err(|e| MatrixError::Parse(e.to_string()))?;
            Self::from_json(&v)
        } else {
            Self::parse_text(input)
        }
    }

    /// Corner sums `sigma(M)_{ij} = sum_{k<=i, l<=j} m_kl`.
    pub fn partial_sum_matrix(&self) -> IntegerMatrix {
        let (m, n) = (self.rows, self.cols);
        let mut data = vec![0u32; m * n];
        for i in 0..m {
            let mut run = 0u32;
            for j in 0..n {
                run += self.entry(i, j) as u32;
                data[i * n + j] = run + if i > 0 { data[(i - 1) * n + j] } else { 0 };
            }
        }
        IntegerMatrix { rows: m, cols: n, data }
    }

    /// `s_pq`: number of 1s in column `q` among the first `rows` rows.
    pub fn column_prefix_sum(&self, rows: usize, q: usize) -> Result<usize, MatrixError> {
        if rows > self.rows || q >= self.cols {
            return Err(MatrixError::IndexOutOfRange { row: rows, col: q });
        }
        Ok((0..rows).filter(|&p| self.get(p, q)).count())
    }

    fn check_selection(&self, sel: CornerSelection) -> Result<(), MatrixError> {
        if sel.i < sel.j && sel.k < sel.l && sel.j < self.rows && sel.l < self.cols {
            Ok(())
        } else {
            Err(MatrixError::InvalidSelection(sel))
        }
    }

    /// True iff the 2x2 submatrix at `sel` is `L2 = [[0,1],[1,0]]`.
    pub fn is_l2_at(&self, sel: CornerSelection) -> bool {
        !self.get(sel.i, sel.k) && self.get(sel.i, sel.l) && self.get(sel.j, sel.k) && !self.get(sel.j, sel.l)
    }

    /// All corner selections carrying an `L2`, in ascending `(i, j, k, l)` order.
    pub fn find_l2(&self) -> Vec<CornerSelection> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in i + 1..self.rows {
                for k in 0..self.cols {
                    if self.get(i, k) || !self.get(j, k) {
                        continue;
                    }
                    for l in k + 1..self.cols {
                        if self.get(i, l) && !self.get(j, l) {
                            out.push(CornerSelection::new(i, j, k, l));
                        }
                    }
                }
            }
        }
        out
    }

    /// Replaces the `L2` at `sel` by `I2`.
    pub fn interchange(&self, sel: CornerSelection) -> Result<BinaryMatrix, MatrixError> {
        self.check_selection(sel)?;
        if !self.is_l2_at(sel) {
            return Err(MatrixError::NotL2(sel));
        }
        let mut out = self.clone();
        for (p, q) in [(sel.i, sel.k), (sel.i, sel.l), (sel.j, sel.k), (sel.j, sel.l)] {
            out.toggle_raw(p, q);
        }
        Ok(out)
    }

    /// Decides whether the `L2 -> I2` interchange at `sel` is a cover in the
    /// secondary Bruhat order. With `i<p<j` and `k<q<l`:
    /// (1) `m_pk = m_pl`, (2) `m_iq = m_jq`,
    /// (3) `m_pk = 0` and `m_iq = 0` imply `m_pq = 0`,
    /// (4) `m_pk = 1` and `m_iq = 1` imply `m_pq = 1`.
    pub fn is_secondary_cover(&self, sel: CornerSelection) -> Result<bool, MatrixError> {
        self.check_selection(sel)?;
        if !self.is_l2_at(sel) {
            return Err(MatrixError::NotL2(sel));
        }
        let CornerSelection { i, j, k, l } = sel;
        for p in i + 1..j {
            if self.get(p, k) != self.get(p, l) {
                return Ok(false);
            }
        }
        for q in k + 1..l {
            if self.get(i, q) != self.get(j, q) {
                return Ok(false);
            }
        }
        for p in i + 1..j {
            let side = self.get(p, k);
            for q in k + 1..l {
                if self.get(i, q) == side && self.get(p, q) != side {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Swaps columns `k` and `l` on rows `top..=bottom`; caller checks balance.
    pub(crate) fn swap_columns_on_rows(&self, k: usize, l: usize, top: usize, bottom: usize) -> BinaryMatrix {
        let mut out = self.clone();
        for p in top..=bottom {
            if self.get(p, k) != self.get(p, l) {
                out.toggle_raw(p, k);
                out.toggle_raw(p, l);
            }
        }
        out
    }

    /// The matrix whose column `sigma[j]` is column `j` of `self`.
    pub fn relabel_columns(&self, sigma: &[usize]) -> BinaryMatrix {
        assert_eq!(sigma.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| {
            let src = sigma.iter().position(|&s| s == j).expect("sigma is a permutation");
            self.get(i, src)
        })
        .expect("shape is non-empty")
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> Result<BinaryMatrix, MatrixError> {
        Self::from_fn(self.rows, keep.len(), |i, j| self.get(i, keep[j]))
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> Result<BinaryMatrix, MatrixError> {
        Self::from_fn(keep.len(), self.cols, |i, j| self.get(keep[i], j))
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect())
            .collect();
        write!(f, "BinaryMatrix[{}]", rows.join("/"))
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_text().trim_end())
    }
}

/// `m1 <=_B m2` iff `Sigma_{m1} >= Sigma_{m2}` entrywise.
pub fn leq_bruhat(m1: &BinaryMatrix, m2: &BinaryMatrix) -> Result<bool, MatrixError> {
    if m1.rows != m2.rows || m1.cols != m2.cols || m1.row_sums != m2.row_sums || m1.col_sums != m2.col_sums {
        return Err(MatrixError::MarginMismatch);
    }
    Ok(m1.partial_sum_matrix().dominates(&m2.partial_sum_matrix()))
}

/// Compares two matrices by row-major bitstring; same as `Ord` when shapes agree.
pub fn bitstring_cmp(a: &BinaryMatrix, b: &BinaryMatrix) -> Ordering {
    a.bitstring().cmp(&b.bitstring())
}
