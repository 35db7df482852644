//! Verification sweeps: build several orders on every family with small
//! total and compare them pairwise.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::CocharacterSpec;
use crate::enumerate::{enumerate_bcts, BctFamily};
use crate::matrix::MarginPair;
use crate::orders::{
    build_relation, closure_from_arcs, compare_relations, interchange_arcs, FiniteRelation, OrderError, RelationKind,
    DEFAULT_CLOSURE_LIMIT, DEFAULT_REPORT_LIMIT,
};

/// Compositions of `total` into positive parts, lexicographic.
pub fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every `(r, c)` of positive compositions with `1 <= sum(r) = sum(c) <= max_total`.
pub fn margin_pairs(max_total: usize) -> Vec<MarginPair> {
    let mut out = Vec::new();
    for t in 1..=max_total {
        let comps = compositions(t);
        for r in &comps {
            for c in &comps {
                out.push(MarginPair { r: r.clone(), c: c.clone() });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub max_total: usize,
    pub kinds: Vec<RelationKind>,
    pub sigma: Option<CocharacterSpec>,
    pub report_limit: usize,
    pub closure_limit: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_total: 5,
            kinds: vec![RelationKind::Secondary, RelationKind::Geometric],
            sigma: None,
            report_limit: DEFAULT_REPORT_LIMIT,
            closure_limit: DEFAULT_CLOSURE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairComparison {
    pub first: RelationKind,
    pub second: RelationKind,
    pub equal: bool,
    pub only_in_first_count: usize,
    pub only_in_second_count: usize,
    /// `[lower, upper]` bitstrings related by `first` only.
    pub only_in_first: Vec<[String; 2]>,
    pub only_in_second: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub r: Vec<usize>,
    pub c: Vec<usize>,
    pub family_size: usize,
    /// Number of related pairs `(lower, upper)`, reflexive ones included.
    pub relation_sizes: BTreeMap<RelationKind, usize>,
    pub comparisons: Vec<PairComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl PairReport {
    pub fn all_equal(&self) -> bool {
        self.comparisons.iter().all(|c| c.equal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_total: usize,
    pub kinds: Vec<RelationKind>,
    /// 1-based one-line notation.
    pub sigma: Option<Vec<usize>>,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    pub nonempty_families: usize,
    pub discrepancies: usize,
    pub all_equal: bool,
    pub pairs: Vec<PairReport>,
}

/// Secondary order of the column-relabelled family `BCT(r, c o sigma^-1)`,
/// pulled back to `family`. Column `j` of a member moves to `sigma(j)`.
pub fn relabeled_secondary(family: &BctFamily, sigma: &CocharacterSpec) -> Result<FiniteRelation, OrderError> {
    let perm = sigma.as_slice();
    let c = &family.margins().c;
    let mut relabeled_c = vec![0; c.len()];
    for (j, &cj) in c.iter().enumerate() {
        relabeled_c[perm[j]] = cj;
    }
    let relabeled_margins = MarginPair { r: family.margins().r.clone(), c: relabeled_c };
    let relabeled = BctFamily::from_members(relabeled_margins, family.iter().map(|m| m.relabel_columns(perm)).collect());
    let back: Vec<usize> = relabeled
        .iter()
        .map(|m| {
            let mut inverse = vec![0; perm.len()];
            for (j, &s) in perm.iter().enumerate() {
                inverse[s] = j;
            }
            family.position(&m.relabel_columns(&inverse)).expect("relabelling is a bijection")
        })
        .collect();
    let arcs: Vec<(usize, usize)> = interchange_arcs(&relabeled).into_iter().map(|(a, b)| (back[a], back[b])).collect();
    closure_from_arcs(family, RelationKind::Secondary, &arcs)
}

/// Builds the configured relations on one family and compares consecutive
/// kinds pairwise.
pub fn verify_pair(margins: &MarginPair, config: &SweepConfig) -> PairReport {
    let family = enumerate_bcts(margins);
    verify_family(&family, config)
}

pub fn verify_family(family: &BctFamily, config: &SweepConfig) -> PairReport {
    let margins = family.margins();
    let mut report = PairReport {
        r: margins.r.clone(),
        c: margins.c.clone(),
        family_size: family.len(),
        relation_sizes: BTreeMap::new(),
        comparisons: Vec::new(),
        skipped: None,
    };
    let sigma = match &config.sigma {
        Some(s) if s.len() != margins.cols() => {
            report.skipped = Some(format!("permutation length {} differs from column count {}", s.len(), margins.cols()));
            return report;
        }
        Some(s) => s.clone(),
        None => CocharacterSpec::identity(margins.cols()),
    };
    let mut relations = Vec::new();
    for &kind in &config.kinds {
        let built = if kind == RelationKind::Secondary && !sigma.is_identity() {
            if family.len() > config.closure_limit {
                Err(OrderError::TooLarge { members: family.len(), limit: config.closure_limit })
            } else {
                relabeled_secondary(family, &sigma)
            }
        } else {
            build_relation(family, kind, &sigma, config.closure_limit)
        };
        match built {
            Ok(rel) => {
                report.relation_sizes.insert(kind, rel.pair_count());
                relations.push(rel);
            }
            Err(e) => {
                report.skipped = Some(e.to_string());
                return report;
            }
        }
    }
    for w in relations.windows(2) {
        let cmp = compare_relations(&w[0], &w[1], config.report_limit).expect("same family");
        let name = |pairs: &[(usize, usize)]| -> Vec<[String; 2]> {
            pairs.iter().map(|&(u, l)| [family.get(l).bitstring(), family.get(u).bitstring()]).collect()
        };
        report.comparisons.push(PairComparison {
            first: cmp.first,
            second: cmp.second,
            equal: cmp.equal,
            only_in_first_count: cmp.only_in_first_count,
            only_in_second_count: cmp.only_in_second_count,
            only_in_first: name(&cmp.only_in_first),
            only_in_second: name(&cmp.only_in_second),
        });
    }
    report
}

pub fn run_sweep(config: &SweepConfig) -> VerificationReport {
    let pairs: Vec<PairReport> = margin_pairs(config.max_total).par_iter().map(|mp| verify_pair(mp, config)).collect();
    let discrepancies = pairs.iter().filter(|p| !p.all_equal()).count();
    VerificationReport {
        max_total: config.max_total,
        kinds: config.kinds.clone(),
        sigma: config.sigma.as_ref().map(|s| s.as_slice().iter().map(|&v| v + 1).collect()),
        pairs_checked: pairs.iter().filter(|p| p.skipped.is_none()).count(),
        pairs_skipped: pairs.iter().filter(|p| p.skipped.is_some()).count(),
        nonempty_families: pairs.iter().filter(|p| p.family_size > 0).count(),
        discrepancies,
        all_equal: discrepancies == 0,
        pairs,
    }
}
