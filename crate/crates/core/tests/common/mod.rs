//! Slow reference implementations working on plain nested vectors. They
//! share no code with the library beyond converting results for comparison.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use bct_core::{BctFamily, BinaryMatrix, FiniteRelation};

pub type Grid = Vec<Vec<u8>>;

pub fn grid(m: &BinaryMatrix) -> Grid {
    m.to_rows()
}

/// Cell-by-cell search with margin bookkeeping only; sorted.
pub fn naive_family(r: &[usize], c: &[usize]) -> Vec<Grid> {
    fn rec(r: &[usize], c: &[usize], cell: usize, cur: &mut Grid, rs: &mut [usize], cs: &mut [usize], out: &mut Vec<Grid>) {
        let (m, n) = (r.len(), c.len());
        if cell == m * n {
            if rs == r && cs == c {
                out.push(cur.clone());
            }
            return;
        }
        let (i, j) = (cell / n, cell % n);
        for v in [0u8, 1] {
            if v == 1 && (rs[i] == r[i] || cs[j] == c[j]) {
                continue;
            }
            // a finished row must be complete
            if j == n - 1 && rs[i] + v as usize != r[i] {
                continue;
            }
            if i == m - 1 && cs[j] + v as usize != c[j] {
                continue;
            }
            cur[i][j] = v;
            rs[i] += v as usize;
            cs[j] += v as usize;
            rec(r, c, cell + 1, cur, rs, cs, out);
            rs[i] -= v as usize;
            cs[j] -= v as usize;
            cur[i][j] = 0;
        }
    }
    if r.is_empty() || c.is_empty() || r.iter().sum::<usize>() != c.iter().sum::<usize>() {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(r, c, 0, &mut vec![vec![0; c.len()]; r.len()], &mut vec![0; r.len()], &mut vec![0; c.len()], &mut out);
    out.sort();
    out
}

fn corner_sums(g: &Grid) -> Vec<Vec<usize>> {
    let (m, n) = (g.len(), g[0].len());
    let mut s = vec![vec![0; n]; m];
    for i in 0..m {
        for j in 0..n {
            s[i][j] = (0..=i).flat_map(|a| (0..=j).map(move |b| (a, b))).filter(|&(a, b)| g[a][b] == 1).count();
        }
    }
    s
}

/// `leq[a][b]` iff `a <= b`.
pub type Leq = Vec<Vec<bool>>;

pub fn naive_bruhat(family: &[Grid]) -> Leq {
    let sums: Vec<_> = family.iter().map(corner_sums).collect();
    sums.iter()
        .map(|sa| sums.iter().map(|sb| sa.iter().flatten().zip(sb.iter().flatten()).all(|(x, y)| x >= y)).collect())
        .collect()
}

fn closure_by_search(family: &[Grid], next: impl Fn(&Grid) -> Vec<Grid>) -> Leq {
    let index: HashMap<&Grid, usize> = family.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let n = family.len();
    let mut leq = vec![vec![false; n]; n];
    for top in 0..n {
        let mut seen = vec![false; n];
        seen[top] = true;
        let mut queue = VecDeque::from([top]);
        while let Some(v) = queue.pop_front() {
            leq[v][top] = true;
            for g in next(&family[v]) {
                let w = index[&g];
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    leq
}

/// Every `L2 -> I2` interchange.
pub fn interchanges_down(g: &Grid) -> Vec<Grid> {
    let (m, n) = (g.len(), g[0].len());
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in 0..n {
                for l in k + 1..n {
                    if g[i][k] == 0 && g[i][l] == 1 && g[j][k] == 1 && g[j][l] == 0 {
                        let mut h = g.clone();
                        h[i][k] = 1;
                        h[i][l] = 0;
                        h[j][k] = 0;
                        h[j][l] = 1;
                        out.push(h);
                    }
                }
            }
        }
    }
    out
}

pub fn naive_secondary(family: &[Grid]) -> Leq {
    closure_by_search(family, interchanges_down)
}

/// Minimal matched blocks straight from the definition:
/// boundary rows affected, equal column sums, no proper matched prefix.
pub fn naive_minimal_blocks(g: &Grid) -> Vec<(usize, usize, usize, usize)> {
    let (m, n) = (g.len(), g[0].len());
    let mut out = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            for top in 0..m {
                for bottom in top + 1..m {
                    let matched = |a: usize, b: usize| {
                        (a..=b).map(|p| g[p][k] as i32).sum::<i32>() == (a..=b).map(|p| g[p][l] as i32).sum::<i32>()
                    };
                    if g[top][k] == g[top][l] || g[bottom][k] == g[bottom][l] || !matched(top, bottom) {
                        continue;
                    }
                    if (top..bottom).any(|t| matched(top, t)) {
                        continue;
                    }
                    out.push((k, l, top, bottom));
                }
            }
        }
    }
    out
}

/// `(q1, q0, exponent)` of the move on a block whose top row is affected.
pub fn naive_weight(g: &Grid, block: (usize, usize, usize, usize)) -> (usize, usize, i64) {
    let (k, l, top, _) = block;
    let (q0, q1) = if g[top][k] == 0 { (k, l) } else { (l, k) };
    let s = |q: usize| (0..=top).map(|p| g[p][q] as i64).sum::<i64>();
    (q1, q0, 1 + s(q0) - s(q1))
}

pub fn swap_block(g: &Grid, block: (usize, usize, usize, usize)) -> Grid {
    let (k, l, top, bottom) = block;
    let mut h = g.clone();
    for row in h.iter_mut().take(bottom + 1).skip(top) {
        row.swap(k, l);
    }
    h
}

/// Attractive indecomposable moves for the permutation `sigma` (0-based images).
pub fn naive_curve_moves(g: &Grid, sigma: &[usize]) -> Vec<Grid> {
    naive_minimal_blocks(g)
        .into_iter()
        .filter(|&b| {
            let (q1, q0, _) = naive_weight(g, b);
            sigma[q1] > sigma[q0]
        })
        .map(|b| swap_block(g, b))
        .collect()
}

pub fn naive_geometric(family: &[Grid], sigma: &[usize]) -> Leq {
    closure_by_search(family, |g| naive_curve_moves(g, sigma))
}

pub fn same_relation(lib: &FiniteRelation, oracle: &Leq) -> bool {
    lib.len() == oracle.len() && (0..lib.len()).all(|a| (0..lib.len()).all(|b| lib.leq(a, b) == oracle[a][b]))
}

pub fn family_grids(family: &BctFamily) -> Vec<Grid> {
    family.iter().map(grid).collect()
}

pub fn is_connected_naive(family: &[Grid]) -> bool {
    if family.len() <= 1 {
        return true;
    }
    let index: HashMap<&Grid, usize> = family.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut seen = vec![false; family.len()];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        let g = &family[v];
        let (m, n) = (g.len(), g[0].len());
        for i in 0..m {
            for j in i + 1..m {
                for k in 0..n {
                    for l in k + 1..n {
                        if g[i][k] != g[i][l] && g[i][k] == g[j][l] && g[i][l] == g[j][k] {
                            let mut h = g.clone();
                            h[i].swap(k, l);
                            h[j].swap(k, l);
                            let w = index[&h];
                            if !seen[w] {
                                seen[w] = true;
                                stack.push(w);
                            }
                        }
                    }
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

pub fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    (1..=total)
        .flat_map(|first| compositions(total - first).into_iter().map(move |mut rest| {
            rest.insert(0, first);
            rest
        }))
        .collect()
}

/// All `(r, c)` positive compositions with equal total at most `max_total`.
pub fn margin_pairs(max_total: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for t in 1..=max_total {
        let comps = compositions(t);
        for r in &comps {
            for c in &comps {
                out.push((r.clone(), c.clone()));
            }
        }
    }
    out
}

/// Ones of each column as `D5` charges of a brane diagram, straight from the
/// charge definition on the full dimension vector.
pub fn naive_charges(symbols: &[char], dims: &[usize]) -> (Vec<i64>, Vec<i64>) {
    let full: Vec<i64> = std::iter::once(0).chain(dims.iter().map(|&d| d as i64)).chain(std::iter::once(0)).collect();
    let (mut r, mut c) = (Vec::new(), Vec::new());
    for (p, &s) in symbols.iter().enumerate() {
        if s == '/' {
            let d5_left = symbols[..p].iter().filter(|&&x| x == '\\').count() as i64;
            r.push(full[p + 1] - full[p] + d5_left);
        } else {
            let ns5_right = symbols[p + 1..].iter().filter(|&&x| x == '/').count() as i64;
            c.push(full[p] - full[p + 1] + ns5_right);
        }
    }
    (r, c)
}
