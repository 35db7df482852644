//! Type A brane diagrams: NS5 (`/`) and D5 (`\`) fivebranes with D3
//! multiplicities between them, their charges, Hanany-Witten transitions,
//! the separated representative and tie diagrams.
//!
//! Fivebrane positions and tie indices are 0-based in the API. The JSON
//! form of a tie diagram and the CLI use 1-based indices.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{BinaryMatrix, MarginPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraneError {
    #[error("cannot parse brane diagram: {0}")]
    Parse(String),
    #[error("position {0} is out of range")]
    PositionOutOfRange(usize),
    #[error("fivebranes at position {position} do not match {expected:?}")]
    PatternMismatch { position: usize, expected: &'static str },
    #[error("transition at position {0} would produce a negative D3 dimension")]
    NegativeDimension(usize),
    #[error("fivebrane at position {0} has negative charge")]
    NegativeCharge(usize),
    #[error("row and column sums differ")]
    SumMismatch,
    #[error("invalid tie diagram: {0}")]
    InvalidTies(String),
    #[error("matrix margins {found} differ from the diagram charges {expected}")]
    MarginMismatch { found: MarginPair, expected: MarginPair },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fivebrane {
    Ns5,
    D5,
}

impl Fivebrane {
    fn symbol(self) -> char {
        match self {
            Fivebrane::Ns5 => '/',
            Fivebrane::D5 => '\\',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HwDirection {
    /// `d1 / d2 \ d3  ->  d1 \ d1+d3-d2+1 / d3`
    Forward,
    /// `d1 \ d2 / d3  ->  d1 / d1+d3-d2+1 \ d3`
    Backward,
}

impl FromStr for HwDirection {
    type Err = BraneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fwd" | "forward" => Ok(HwDirection::Forward),
            "bwd" | "backward" => Ok(HwDirection::Backward),
            other => Err(BraneError::Parse(format!("unknown direction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraneDiagram {
    fivebranes: Vec<Fivebrane>,
    /// Internal D3 dimensions; `d3_dims[p]` sits between fivebranes `p` and `p + 1`.
    d3_dims: Vec<usize>,
}

impl BraneDiagram {
    pub fn new(fivebranes: Vec<Fivebrane>, d3_dims: Vec<usize>) -> Result<Self, BraneError> {
        if fivebranes.is_empty() {
            return Err(BraneError::Parse("no fivebranes".into()));
        }
        if d3_dims.len() + 1 != fivebranes.len() {
            return Err(BraneError::Parse(format!(
                "{} fivebranes need {} D3 dimensions, got {}",
                fivebranes.len(),
                fivebranes.len() - 1,
                d3_dims.len()
            )));
        }
        Ok(BraneDiagram { fivebranes, d3_dims })
    }

    pub fn fivebranes(&self) -> &[Fivebrane] {
        &self.fivebranes
    }

    pub fn d3_dims(&self) -> &[usize] {
        &self.d3_dims
    }

    pub fn len(&self) -> usize {
        self.fivebranes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fivebranes.is_empty()
    }

    /// Dimensions including the two boundary D3 branes, which are 0.
    pub fn full_dims(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.d3_dims.len() + 2);
        out.push(0);
        out.extend_from_slice(&self.d3_dims);
        out.push(0);
        out
    }

    /// Positions of the NS5 branes, left to right.
    pub fn ns5_positions(&self) -> Vec<usize> {
        self.positions(Fivebrane::Ns5)
    }

    pub fn d5_positions(&self) -> Vec<usize> {
        self.positions(Fivebrane::D5)
    }

    fn positions(&self, kind: Fivebrane) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.fivebranes[p] == kind).collect()
    }

    /// Every internal D3 brane has positive dimension.
    pub fn is_conformant(&self) -> bool {
        self.d3_dims.iter().all(|&d| d > 0)
    }

    /// All NS5 branes lie left of all D5 branes.
    pub fn is_separated(&self) -> bool {
        self.fivebranes.windows(2).all(|w| w != [Fivebrane::D5, Fivebrane::Ns5])
    }

    /// Charge vectors `(r, c)`: NS5 charges then D5 charges, left to right.
    pub fn charges(&self) -> Result<MarginPair, BraneError> {
        let dims = self.full_dims();
        let total_ns5 = self.ns5_positions().len() as i64;
        let (mut r, mut c) = (Vec::new(), Vec::new());
        let (mut d5_left, mut ns5_left) = (0i64, 0i64);
        for (p, &brane) in self.fivebranes.iter().enumerate() {
            let (left, right) = (dims[p] as i64, dims[p + 1] as i64);
            let charge = match brane {
                Fivebrane::Ns5 => {
                    ns5_left += 1;
                    right - left + d5_left
                }
                Fivebrane::D5 => {
                    d5_left += 1;
                    left - right + (total_ns5 - ns5_left)
                }
            };
            let charge = usize::try_from(charge).map_err(|_| BraneError::NegativeCharge(p))?;
            match brane {
                Fivebrane::Ns5 => r.push(charge),
                Fivebrane::D5 => c.push(charge),
            }
        }
        Ok(MarginPair { r, c })
    }

    /// One Hanany-Witten transition on the fivebranes at `position` and `position + 1`.
    pub fn hw_step(&self, position: usize, direction: HwDirection) -> Result<BraneDiagram, BraneError> {
        if position + 1 >= self.len() {
            return Err(BraneError::PositionOutOfRange(position));
        }
        let (expected, pattern) = match direction {
            HwDirection::Forward => ("/\\", [Fivebrane::Ns5, Fivebrane::D5]),
            HwDirection::Backward => ("\\/", [Fivebrane::D5, Fivebrane::Ns5]),
        };
        if self.fivebranes[position..position + 2] != pattern {
            return Err(BraneError::PatternMismatch { position, expected });
        }
        let dims = self.full_dims();
        let (d1, d2, d3) = (dims[position] as i64, dims[position + 1] as i64, dims[position + 2] as i64);
        let middle = usize::try_from(d1 + d3 - d2 + 1).map_err(|_| BraneError::NegativeDimension(position))?;
        let mut out = self.clone();
        out.fivebranes.swap(position, position + 1);
        out.d3_dims[position] = middle;
        Ok(out)
    }

    /// Moves D5 branes rightwards past NS5 branes until the diagram is
    /// separated, always transitioning the leftmost `\/` pair. Returns the
    /// final diagram and the positions used.
    pub fn separate(&self) -> Result<(BraneDiagram, Vec<usize>), BraneError> {
        let mut cur = self.clone();
        let mut steps = Vec::new();
        while let Some(p) = cur.fivebranes.windows(2).position(|w| w == [Fivebrane::D5, Fivebrane::Ns5]) {
            cur = cur.hw_step(p, HwDirection::Backward)?;
            steps.push(p);
        }
        Ok((cur, steps))
    }
}

impl fmt::Display for BraneDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, brane) in self.fivebranes.iter().enumerate() {
            if p > 0 {
                write!(f, "{}", self.d3_dims[p - 1])?;
            }
            write!(f, "{}", brane.symbol())?;
        }
        Ok(())
    }
}

pub fn parse_diagram(text: &str) -> Result<BraneDiagram, BraneError> {
    let text = text.trim();
    let mut fivebranes = Vec::new();
    let mut dims = Vec::new();
    let mut pending: Option<usize> = None;
    let mut chars = text.char_indices().peekable();
    while let Some((idx, ch)) = chars.next() {
        match ch {
            '/' | '\\' => {
                if !fivebranes.is_empty() {
                    dims.push(pending.take().ok_or_else(|| BraneError::Parse(format!("missing D3 dimension before offset {idx}")))?);
                } else if pending.is_some() {
                    return Err(BraneError::Parse("integer before the first fivebrane".into()));
                }
                fivebranes.push(if ch == '/' { Fivebrane::Ns5 } else { Fivebrane::D5 });
            }
            '0'..='9' => {
                if pending.is_some() {
                    return Err(BraneError::Parse(format!("unexpected digit at offset {idx}")));
                }
                let mut value = ch.to_digit(10).unwrap() as usize;
                while let Some(&(_, d)) = chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    value = value
                        .checked_mul(10)
                        .and_then(|x| x.checked_add(v as usize))
                        .ok_or_else(|| BraneError::Parse("dimension overflows".into()))?;
                    chars.next();
                }
                pending = Some(value);
            }
            '-' => return Err(BraneError::Parse("negative D3 dimension".into())),
            other => return Err(BraneError::Parse(format!("unexpected character {other:?} at offset {idx}"))),
        }
    }
    if pending.is_some() {
        return Err(BraneError::Parse("integer after the last fivebrane".into()));
    }
    BraneDiagram::new(fivebranes, dims)
}

impl FromStr for BraneDiagram {
    type Err = BraneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_diagram(s)
    }
}

pub fn format_diagram(d: &BraneDiagram) -> String {
    d.to_string()
}

pub fn charges(d: &BraneDiagram) -> Result<MarginPair, BraneError> {
    d.charges()
}

pub fn hw_step(d: &BraneDiagram, position: usize, direction: HwDirection) -> Result<BraneDiagram, BraneError> {
    d.hw_step(position, direction)
}

/// `/r1/r1+r2/.../Σr\c2+..+cn\...\cn\`.
pub fn separated_diagram(margins: &MarginPair) -> Result<BraneDiagram, BraneError> {
    if margins.r.iter().sum::<usize>() != margins.c.iter().sum::<usize>() {
        return Err(BraneError::SumMismatch);
    }
    let (m, n) = (margins.rows(), margins.cols());
    let mut fivebranes = vec![Fivebrane::Ns5; m];
    fivebranes.extend(std::iter::repeat_n(Fivebrane::D5, n));
    let mut dims = Vec::with_capacity(m + n);
    let mut acc = 0;
    for &ri in &margins.r {
        acc += ri;
        dims.push(acc);
    }
    for j in 1..n {
        dims.push(margins.c[j..].iter().sum());
    }
    dims.truncate((m + n).saturating_sub(1));
    BraneDiagram::new(fivebranes, dims)
}

/// A set of `(ns5, d5)` pairs, 0-based indices among the NS5 and D5 branes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TieDiagram {
    pub ties: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct TieJson {
    ties: Vec<[usize; 2]>,
}

impl TieDiagram {
    pub fn new(ties: impl IntoIterator<Item = (usize, usize)>) -> Self {
        TieDiagram { ties: ties.into_iter().collect() }
    }

    /// `{"ties": [[z, a], ...]}` with 1-based indices.
    pub fn to_json(&self) -> String {
        let json = TieJson { ties: self.ties.iter().map(|&(z, a)| [z + 1, a + 1]).collect() };
        serde_json::to_string(&json).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, BraneError> {
        let json: TieJson = serde_json::from_str(text).map_err(|e| BraneError::InvalidTies(e.to_string()))?;
        let mut ties = BTreeSet::new();
        for [z, a] in json.ties {
            if z == 0 || a == 0 {
                return Err(BraneError::InvalidTies("indices are 1-based".into()));
            }
            if !ties.insert((z - 1, a - 1)) {
                return Err(BraneError::InvalidTies(format!("tie ({z},{a}) repeated")));
            }
        }
        Ok(TieDiagram { ties })
    }
}

/// Coverage of each internal D3 brane by the ties.
fn coverage(d: &BraneDiagram, ties: &TieDiagram) -> Result<Vec<usize>, BraneError> {
    let (ns5, d5) = (d.ns5_positions(), d.d5_positions());
    let mut cover = vec![0usize; d.d3_dims.len()];
    for &(z, a) in &ties.ties {
        let (&pz, &pa) = ns5
            .get(z)
            .zip(d5.get(a))
            .ok_or_else(|| BraneError::InvalidTies(format!("tie ({},{}) out of range", z + 1, a + 1)))?;
        for seg in cover.iter_mut().take(pz.max(pa)).skip(pz.min(pa)) {
            *seg += 1;
        }
    }
    Ok(cover)
}

pub fn is_valid_tie_diagram(d: &BraneDiagram, ties: &TieDiagram) -> bool {
    matches!(coverage(d, ties), Ok(cover) if cover == d.d3_dims)
}

/// Every tie diagram of `d`, sorted by tie list.
pub fn enumerate_tie_diagrams(d: &BraneDiagram) -> Vec<TieDiagram> {
    let (ns5, d5) = (d.ns5_positions(), d.d5_positions());
    // (left position, right position, tie) sorted by left position
    let mut candidates: Vec<(usize, usize, (usize, usize))> = Vec::new();
    for (z, &pz) in ns5.iter().enumerate() {
        for (a, &pa) in d5.iter().enumerate() {
            candidates.push((pz.min(pa), pz.max(pa), (z, a)));
        }
    }
    candidates.sort();
    let mut remaining = vec![0usize; d.d3_dims.len()];
    for &(lo, hi, _) in &candidates {
        for seg in &mut remaining[lo..hi] {
            *seg += 1;
        }
    }
    let mut state = TieSearch { target: &d.d3_dims, candidates: &candidates, cover: vec![0; d.d3_dims.len()], remaining, chosen: Vec::new(), out: Vec::new() };
    state.run(0);
    let mut out = state.out;
    out.sort();
    out
}

struct TieSearch<'a> {
    target: &'a [usize],
    candidates: &'a [(usize, usize, (usize, usize))],
    cover: Vec<usize>,
    /// undecided candidates straddling each segment
    remaining: Vec<usize>,
    chosen: Vec<(usize, usize)>,
    out: Vec<TieDiagram>,
}

impl TieSearch<'_> {
    fn run(&mut self, idx: usize) {
        if idx == self.candidates.len() {
            if self.cover == self.target {
                self.out.push(TieDiagram::new(self.chosen.iter().copied()));
            }
            return;
        }
        let (lo, hi, tie) = self.candidates[idx];
        for seg in lo..hi {
            self.remaining[seg] -= 1;
        }
        // take it
        if (lo..hi).all(|s| self.cover[s] < self.target[s]) {
            for s in lo..hi {
                self.cover[s] += 1;
            }
            self.chosen.push(tie);
            if self.still_reachable(lo, hi) {
                self.run(idx + 1);
            }
            self.chosen.pop();
            for s in lo..hi {
                self.cover[s] -= 1;
            }
        }
        // skip it
        if self.still_reachable(lo, hi) {
            self.run(idx + 1);
        }
        for seg in lo..hi {
            self.remaining[seg] += 1;
        }
    }

    fn still_reachable(&self, lo: usize, hi: usize) -> bool {
        (lo..hi).all(|s| self.cover[s] + self.remaining[s] >= self.target[s])
    }
}

/// Entry `(z, a)` is 1 iff `z`-`a` is a tie with `z` left of `a`, or is not
/// a tie with `z` right of `a`.
pub fn tie_to_bct(d: &BraneDiagram, ties: &TieDiagram) -> Result<BinaryMatrix, BraneError> {
    if !is_valid_tie_diagram(d, ties) {
        return Err(BraneError::InvalidTies("coverage differs from the D3 dimensions".into()));
    }
    let (ns5, d5) = (d.ns5_positions(), d.d5_positions());
    BinaryMatrix::from_fn(ns5.len(), d5.len(), |z, a| ties.ties.contains(&(z, a)) == (ns5[z] < d5[a]))
        .map_err(|_| BraneError::InvalidTies("diagram needs both kinds of fivebrane".into()))
}

pub fn bct_to_tie(d: &BraneDiagram, m: &BinaryMatrix) -> Result<TieDiagram, BraneError> {
    let expected = d.charges()?;
    let found = m.margins();
    if found != expected {
        return Err(BraneError::MarginMismatch { found, expected });
    }
    let (ns5, d5) = (d.ns5_positions(), d.d5_positions());
    let mut ties = BTreeSet::new();
    for (z, &pz) in ns5.iter().enumerate() {
        for (a, &pa) in d5.iter().enumerate() {
            if m.get(z, a) == (pz < pa) {
                ties.insert((z, a));
            }
        }
    }
    let out = TieDiagram { ties };
    if !is_valid_tie_diagram(d, &out) {
        return Err(BraneError::InvalidTies("matrix does not yield a tie diagram".into()));
    }
    Ok(out)
}
