//! DOT, JSON and CSV renderings. Output is deterministic for a fixed input.

use std::fmt::Write;
use std::str::FromStr;

use crate::curves::CurveDigraph;
use crate::enumerate::BctFamily;
use crate::orders::{FiniteRelation, HasseDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
    Csv,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            other => Err(format!("unknown format {other:?}; expected dot, json or csv")),
        }
    }
}

fn dot_nodes(out: &mut String, family: &BctFamily) {
    for (idx, m) in family.iter().enumerate() {
        writeln!(out, "  n{idx} [label=\"{}\"];", m.bitstring()).unwrap();
    }
}

/// Nodes labelled by bitstring, edges from upper to lower.
pub fn hasse_dot(family: &BctFamily, hasse: &HasseDiagram) -> String {
    let mut out = String::from("digraph hasse {\n");
    dot_nodes(&mut out, family);
    for &(u, l) in &hasse.cover_edges {
        writeln!(out, "  n{u} -> n{l};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Curve arcs labelled with their tangent weight.
pub fn curves_dot(family: &BctFamily, digraph: &CurveDigraph) -> String {
    let mut out = String::from("digraph curves {\n");
    dot_nodes(&mut out, family);
    for arc in &digraph.arcs {
        writeln!(out, "  n{} -> n{} [label=\"{}\"];", arc.source, arc.target, arc.weight).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn hasse_json(family: &BctFamily, hasse: &HasseDiagram) -> serde_json::Value {
    serde_json::json!({
        "r": family.margins().r,
        "c": family.margins().c,
        "nodes": family.iter().map(|m| m.bitstring()).collect::<Vec<_>>(),
        "levels": hasse.levels(),
        "covers": hasse.cover_edges.iter().map(|&(u, l)| [u, l]).collect::<Vec<_>>(),
    })
}

pub fn curves_json(family: &BctFamily, digraph: &CurveDigraph) -> serde_json::Value {
    serde_json::json!({
        "r": family.margins().r,
        "c": family.margins().c,
        "nodes": family.iter().map(|m| m.bitstring()).collect::<Vec<_>>(),
        "arcs": digraph.arcs.iter().map(|a| serde_json::json!({
            "source": a.source,
            "target": a.target,
            "columns": [a.block.k + 1, a.block.l + 1],
            "rows": [a.block.top + 1, a.block.bottom + 1],
            "weight": a.weight.to_string(),
            "pencil_dim": a.pencil_dim,
        })).collect::<Vec<_>>(),
    })
}

pub fn relation_json(family: &BctFamily, rel: &FiniteRelation) -> serde_json::Value {
    let pairs: Vec<[usize; 2]> = (0..rel.len()).flat_map(|u| rel.down_set(u).map(move |l| [l, u])).collect();
    serde_json::json!({
        "r": family.margins().r,
        "c": family.margins().c,
        "kind": rel.kind().name(),
        "nodes": family.iter().map(|m| m.bitstring()).collect::<Vec<_>>(),
        "leq": pairs,
    })
}

/// `upper,lower` bitstring rows.
pub fn hasse_csv(family: &BctFamily, hasse: &HasseDiagram) -> String {
    let mut out = String::from("upper,lower\n");
    for &(u, l) in &hasse.cover_edges {
        writeln!(out, "{},{}", family.get(u).bitstring(), family.get(l).bitstring()).unwrap();
    }
    out
}

pub fn curves_csv(family: &BctFamily, digraph: &CurveDigraph) -> String {
    let mut out = String::from("source,target,k,l,top,bottom,weight,pencil_dim\n");
    for a in &digraph.arcs {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            family.get(a.source).bitstring(),
            family.get(a.target).bitstring(),
            a.block.k + 1,
            a.block.l + 1,
            a.block.top + 1,
            a.block.bottom + 1,
            a.weight,
            a.pencil_dim
        )
        .unwrap();
    }
    out
}

/// `lower,upper` bitstring rows, one per related pair.
pub fn relation_csv(family: &BctFamily, rel: &FiniteRelation) -> String {
    let mut out = String::from("lower,upper\n");
    for u in 0..rel.len() {
        for l in rel.down_set(u) {
            writeln!(out, "{},{}", family.get(l).bitstring(), family.get(u).bitstring()).unwrap();
        }
    }
    out
}

pub fn family_csv(family: &BctFamily) -> String {
    let mut out = String::from("index,bitstring\n");
    for (idx, m) in family.iter().enumerate() {
        writeln!(out, "{idx},{}", m.bitstring()).unwrap();
    }
    out
}
