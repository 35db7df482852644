mod common;

use bct_core::curves::{self, CocharacterSpec};
use bct_core::export;
use bct_core::orders::{self, build_relation, OrderError, RelationKind};
use bct_core::{enumerate_bcts, BctFamily, BinaryMatrix, MarginPair};
use common::*;

fn family(r: &[usize], c: &[usize]) -> BctFamily {
    enumerate_bcts(&MarginPair { r: r.to_vec(), c: c.to_vec() })
}

#[test]
fn relations_match_oracles() {
    for (r, c) in margin_pairs(5) {
        let f = family(&r, &c);
        let grids = family_grids(&f);
        assert!(same_relation(&orders::bruhat_relation(&f).unwrap(), &naive_bruhat(&grids)), "bruhat r={r:?} c={c:?}");
        assert!(same_relation(&orders::secondary_relation(&f).unwrap(), &naive_secondary(&grids)), "secondary r={r:?} c={c:?}");
        let id: Vec<usize> = (0..c.len()).collect();
        let geo = curves::geometric_relation(&f, &CocharacterSpec::identity(c.len())).unwrap();
        assert!(same_relation(&geo, &naive_geometric(&grids, &id)), "geometric r={r:?} c={c:?}");
        let reversed: Vec<usize> = (0..c.len()).rev().collect();
        let geo = curves::geometric_relation(&f, &CocharacterSpec::new(reversed.clone()).unwrap()).unwrap();
        assert!(same_relation(&geo, &naive_geometric(&grids, &reversed)), "reversed r={r:?} c={c:?}");
    }
}

#[test]
fn partial_order_axioms() {
    for (r, c) in margin_pairs(6) {
        let f = family(&r, &c);
        for rel in [
            orders::bruhat_relation(&f).unwrap(),
            orders::secondary_relation(&f).unwrap(),
            curves::geometric_relation(&f, &CocharacterSpec::identity(c.len())).unwrap(),
        ] {
            assert!(rel.is_reflexive() && rel.is_antisymmetric() && rel.is_transitive(), "{:?} r={r:?} c={c:?}", rel.kind());
        }
    }
}

#[test]
fn secondary_refines_bruhat() {
    for (r, c) in margin_pairs(7) {
        let f = family(&r, &c);
        if f.len() > 1500 {
            continue;
        }
        let b = orders::bruhat_relation(&f).unwrap();
        let s = orders::secondary_relation(&f).unwrap();
        let cmp = orders::compare_relations(&s, &b, 4).unwrap();
        assert_eq!(cmp.only_in_first_count, 0, "r={r:?} c={c:?}");
    }
}

#[test]
fn counterexample_family_differs() {
    let f = family(&[1, 4, 5, 2, 1, 3], &[3, 1, 2, 5, 4, 1]);
    let b = orders::bruhat_relation(&f).unwrap();
    let s = orders::secondary_relation(&f).unwrap();
    let cmp = orders::compare_relations(&b, &s, 8).unwrap();
    assert!(!cmp.equal);
    assert_eq!(cmp.only_in_second_count, 0);
    assert!(cmp.only_in_first_count > 0);
    assert!(cmp.only_in_first.len() <= 8);
}

/// Deleting zero rows and columns keeps every order.
#[test]
fn zero_components_erase() {
    let cases: [(&[usize], &[usize]); 4] = [(&[2, 0, 1, 2], &[2, 1, 0, 2]), (&[0, 1, 1], &[1, 0, 1]), (&[1, 2, 0], &[0, 2, 1]), (&[2, 1, 1, 0, 2], &[0, 3, 1, 2])];
    for (r, c) in cases {
        let f = family(r, c);
        let keep_r: Vec<usize> = (0..r.len()).filter(|&i| r[i] > 0).collect();
        let keep_c: Vec<usize> = (0..c.len()).filter(|&j| c[j] > 0).collect();
        let erased_margins = MarginPair { r: keep_r.iter().map(|&i| r[i]).collect(), c: keep_c.iter().map(|&j| c[j]).collect() };
        let g = enumerate_bcts(&erased_margins);
        assert_eq!(f.len(), g.len());
        let image: Vec<usize> = f
            .iter()
            .map(|m| g.position(&m.select_rows(&keep_r).unwrap().select_columns(&keep_c).unwrap()).unwrap())
            .collect();
        let id_f = CocharacterSpec::identity(c.len());
        let id_g = CocharacterSpec::identity(keep_c.len());
        for kind in [RelationKind::Bruhat, RelationKind::Secondary, RelationKind::Geometric] {
            let rf = build_relation(&f, kind, &id_f, 1000).unwrap();
            let rg = build_relation(&g, kind, &id_g, 1000).unwrap();
            for a in 0..f.len() {
                for b in 0..f.len() {
                    assert_eq!(rf.leq(a, b), rg.leq(image[a], image[b]), "{kind:?} r={r:?} c={c:?}");
                }
            }
        }
    }
}

#[test]
fn closure_limit_refuses_large_families() {
    let f = family(&[1, 1, 1, 1], &[1, 1, 1, 1]);
    assert_eq!(
        build_relation(&f, RelationKind::Secondary, &CocharacterSpec::identity(4), 10),
        Err(OrderError::TooLarge { members: 24, limit: 10 })
    );
    let err = build_relation(&f, RelationKind::Geometric, &CocharacterSpec::identity(3), 100).unwrap_err();
    assert!(matches!(err, OrderError::Cocharacter(_)));
}

#[test]
fn figure1_dot_export() {
    let f = family(&[2, 1, 2], &[2, 1, 2]);
    let h = orders::hasse(&orders::secondary_relation(&f).unwrap()).unwrap();
    let dot = export::hasse_dot(&f, &h);
    assert_eq!(dot.matches("[label=").count(), 5);
    assert_eq!(dot.matches(" -> ").count(), 4);
    assert_eq!(export::hasse_dot(&f, &h), dot);
}

#[test]
fn permutation_matrices_bruhat_equals_secondary() {
    for n in 1..=5 {
        let f = family(&vec![1; n], &vec![1; n]);
        let b = orders::bruhat_relation(&f).unwrap();
        let s = orders::secondary_relation(&f).unwrap();
        assert!(orders::compare_relations(&b, &s, 1).unwrap().equal);
    }
}

/// The four compact moves at the middle matrix of the Figure 1 family carry
/// weights that appear among the labels drawn around that fixed point.
#[test]
fn figure1_middle_weights() {
    let middle = BinaryMatrix::from_rows(&[[1u8, 0, 1], [0, 1, 0], [1, 0, 1]]).unwrap();
    let mut weights: Vec<String> = curves::matched_blocks(&middle)
        .into_iter()
        .map(|b| curves::tangent_weight(&middle, b).unwrap().to_string())
        .collect();
    weights.sort();
    assert_eq!(weights, vec!["a1/a2 h^0", "a2/a1 h^1", "a2/a3 h^1", "a3/a2 h^0"]);
}

#[test]
fn secondary_hasse_direct_matches_reduction() {
    for (r, c) in margin_pairs(6) {
        let f = family(&r, &c);
        let direct = orders::secondary_hasse_direct(&f);
        let reduced = orders::hasse(&orders::secondary_relation(&f).unwrap()).unwrap();
        assert_eq!(direct, reduced);
    }
}
