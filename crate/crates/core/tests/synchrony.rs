mod common;

use cellnet::dynamics::check_conjugacy;
use cellnet::fibration::{check_fibration_input_maps, enumerate_fibrations, FIBRATION_LIMIT};
use cellnet::network::{Network, Partition};
use cellnet::synchrony::{
    enumerate_balanced, is_balanced, is_balanced_input_maps, quotient, syn_subspace_project, ENUMERATION_LIMIT,
};
use cellnet::{Error, LoadedNetwork};
use common::*;
use proptest::prelude::*;

fn robust(cells: &[String]) -> Vec<Partition> {
    vec![
        Partition::singletons(3),
        partition(cells, &[&["v1", "v2"], &["v3"]]),
        partition(cells, &[&["v1", "v2", "v3"]]),
    ]
}

#[test]
fn robust_synchrony_of_a_is_balanced() {
    let a = digraph("A");
    assert!(is_balanced(&a, &partition(a.cells(), &[&["v1", "v2"], &["v3"]])).unwrap());
}

#[test]
fn singletons_always_balanced() {
    for name in ["A", "B", "C", "nonhom", "triangle"] {
        let n = digraph(name);
        assert!(is_balanced(&n, &Partition::singletons(n.len())).unwrap(), "{name}");
    }
}

#[test]
fn v2_v3_not_balanced_in_a() {
    let a = digraph("A");
    let p = partition(a.cells(), &[&["v2", "v3"], &["v1"]]);
    assert!(!is_balanced(&a, &p).unwrap());
    assert!(!is_balanced_input_maps(&imn("A"), &p).unwrap());
}

#[test]
fn partition_must_cover() {
    let a = digraph("A");
    assert!(matches!(is_balanced(&a, &Partition::new(vec![vec![0, 1]])), Err(Error::InvalidPartition(_))));
}

#[test]
fn a_b_c_share_three_balanced_partitions() {
    for name in ["A", "B", "C"] {
        let n = digraph(name);
        assert_eq!(enumerate_balanced(&n, ENUMERATION_LIMIT).unwrap(), robust(n.cells()), "{name}");
    }
}

#[test]
fn fundamental_c_has_embedded_copy_of_c() {
    let ct = fundamental("C");
    let cells = ct.cells().to_vec();
    let p = partition(&cells, &[&["σ1", "σ3"], &["σ2", "σ5"], &["σ4"]]);
    let all = enumerate_balanced(&ct.to_digraph(), ENUMERATION_LIMIT).unwrap();
    assert!(all.contains(&p));
    assert!(all.contains(&Partition::singletons(5)));
    assert!(all.contains(&Partition::new(vec![(0..5).collect()])));
}

#[test]
fn too_large_is_rejected() {
    let big = random_homogeneous(3, 13, 1).to_digraph();
    assert!(matches!(enumerate_balanced(&big, ENUMERATION_LIMIT), Err(Error::TooLarge { size: 13, limit: 12 })));
}

#[test]
fn quotient_of_c_is_e() {
    let c = imn("C");
    let (q, fib) = quotient(&c, &partition(c.cells(), &[&["v1", "v2"], &["v3"]])).unwrap();
    assert_eq!(q.cells(), &names(&["v1+v2", "v3"]));
    assert_eq!(images(&q, "blue"), names(&["v1+v2", "v1+v2"]));
    assert_eq!(images(&q, "red"), names(&["v3", "v3"]));
    assert_eq!(fib.vertex_map, vec![0, 0, 1]);
    assert!(check_fibration_input_maps(&fib.vertex_map, &c, &q));
}

#[test]
fn singleton_quotient_is_a_copy() {
    let b = imn("B");
    let (q, fib) = quotient(&b, &Partition::singletons(3)).unwrap();
    assert_eq!(q.cells(), b.cells());
    assert_eq!(images(&q, "blue"), images(&b, "blue"));
    assert_eq!(images(&q, "red"), images(&b, "red"));
    assert_eq!(fib.vertex_map, vec![0, 1, 2]);
}

#[test]
fn quotient_of_fundamental_c_is_c() {
    let ct = fundamental("C");
    let cells = ct.cells().to_vec();
    let p = partition(&cells, &[&["σ1", "σ3"], &["σ2", "σ5"], &["σ4"]]);
    let (q, _) = quotient(&ct, &p).unwrap();
    let c = imn("C");
    let isos: Vec<_> =
        enumerate_fibrations(&q, &c, FIBRATION_LIMIT).unwrap().into_iter().filter(|f| f.is_bijective()).collect();
    assert_eq!(isos.len(), 1);
}

#[test]
fn projection_examples() {
    let p = Partition::new(vec![vec![0, 1], vec![2]]);
    assert_eq!(syn_subspace_project(&p, &[1.0, 3.0, 5.0]).unwrap(), vec![2.0, 2.0, 5.0]);
    assert_eq!(syn_subspace_project(&p, &[2.0, 2.0, 5.0]).unwrap(), vec![2.0, 2.0, 5.0]);
    let one = Partition::new(vec![vec![0, 1, 2]]);
    assert_eq!(syn_subspace_project(&one, &[1.0, 2.0, 3.0]).unwrap(), vec![2.0, 2.0, 2.0]);
    assert!(matches!(syn_subspace_project(&p, &[1.0]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn quotient_conjugacy() {
    for name in ["A", "B", "C"] {
        let net = imn(name);
        for p in enumerate_balanced(&net.to_digraph(), ENUMERATION_LIMIT).unwrap() {
            let (q, fib) = quotient(&net, &p).unwrap();
            let f = responses(&bundled_loaded(name), 7);
            let r = check_conjugacy(&fib, &system(&q, &f), &system(&net, &f), 100, 11).unwrap();
            assert!(r < 1e-12, "{name} {r}");
        }
    }
}

fn bundled_loaded(name: &str) -> LoadedNetwork {
    cellnet::bundled::network(name)
}

fn brute_force(net: &Network) -> Vec<Partition> {
    let mut found: Vec<Partition> =
        all_partitions(net.cell_colors()).into_iter().filter(|p| is_balanced(net, p).unwrap()).collect();
    found.sort_by(cellnet::synchrony::canonical_order);
    found
}

#[test]
fn bundled_networks_match_brute_force() {
    for name in ["A", "B", "C", "nonhom", "triangle"] {
        let n = digraph(name);
        assert_eq!(enumerate_balanced(&n, ENUMERATION_LIMIT).unwrap(), brute_force(&n), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_brute_force(seed in any::<u64>(), cells in 1usize..=6) {
        let net = random_digraph(seed, cells);
        prop_assert_eq!(enumerate_balanced(&net, ENUMERATION_LIMIT).unwrap(), brute_force(&net));
    }

    #[test]
    fn counting_matches_bijection_search(seed in any::<u64>(), cells in 1usize..=6) {
        let net = random_digraph(seed, cells);
        for p in all_partitions(net.cell_colors()) {
            prop_assert_eq!(is_balanced(&net, &p).unwrap(), balanced_by_bijection(&net, &p));
        }
    }

    #[test]
    fn both_criteria_agree(seed in any::<u64>(), cells in 1usize..=6, maps in 1usize..=3) {
        let m = random_homogeneous(seed, cells, maps.min(cells.pow(cells as u32) - 1));
        let d = m.to_digraph();
        for p in all_partitions(d.cell_colors()) {
            prop_assert_eq!(is_balanced(&d, &p).unwrap(), is_balanced_input_maps(&m, &p).unwrap());
        }
    }

    #[test]
    fn balanced_partitions_closed_under_join(seed in any::<u64>(), cells in 1usize..=6) {
        let net = random_digraph(seed, cells);
        let all = enumerate_balanced(&net, ENUMERATION_LIMIT).unwrap();
        for p in &all {
            for q in &all {
                let j = p.join(q);
                prop_assert!(is_balanced(&net, &j).unwrap());
                prop_assert!(p.refines(&j) && q.refines(&j));
            }
        }
    }
}
