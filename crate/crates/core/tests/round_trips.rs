use std::collections::BTreeSet;

use piecework::bijections::*;
use piecework::enumerate::{heaps_paths, pyramids_blocks, pyramids_paths};
use piecework::nat::{self, complete_with_leaves, enumerate_complete_nafs, enumerate_complete_nats};
use piecework::series::has_common_rise;
use piecework::structures::{all_permutations, perms_with_descent_set, regular_descent_set};
use piecework::{Heap, Limits, Mode, Permutation, Piece};

fn roomy() -> Limits {
    Limits {
        nat_leaves: 4,
        naf_leaves: 4,
        ..Limits::default()
    }
}

fn perm(s: &str) -> Permutation {
    Permutation::parse(s).unwrap()
}

#[test]
fn g_is_a_bijection_up_to_length_eight() {
    let l = Limits::default();
    for r in 2..=9usize {
        for n in 1..=9 / r {
            let len = r * n - 1;
            let perms = perms_with_descent_set(len, &regular_descent_set(n, r), &l).unwrap();
            let mut images = BTreeSet::new();
            for p in &perms {
                let h = g_perm_to_pyramid(p, r).unwrap();
                assert!(h.is_pyramid());
                let top = h.piece(h.maximal_pieces()[0]).unwrap();
                assert!(top.as_block().unwrap().contains(&((r * n) as u32)));
                assert_eq!(g_pyramid_to_perm(&h).unwrap(), (p.clone(), r), "r={r} p={p}");
                images.insert(h);
            }
            if r * n <= 8 {
                let pyramids: BTreeSet<Heap> = pyramids_blocks(n, r, true, &l).unwrap().into_iter().collect();
                assert_eq!(images, pyramids, "r={r} n={n}");
            } else {
                assert_eq!(images.len(), perms.len());
            }
        }
    }
}

#[test]
fn q_is_a_bijection_up_to_four_leaves() {
    let l = roomy();
    for n in 1..=4 {
        let trees = enumerate_complete_nats(n, &l).unwrap();
        let images: BTreeSet<Heap> = trees.iter().map(|t| q_nat_to_pyramid(t).unwrap()).collect();
        assert_eq!(images.len(), trees.len());
        let pyramids: BTreeSet<Heap> = pyramids_paths(n, 2, true, &l).unwrap().into_iter().collect();
        assert_eq!(images, pyramids, "n={n}");
        for t in &trees {
            assert_eq!(&q_pyramid_to_nat(&q_nat_to_pyramid(t).unwrap()).unwrap(), t);
        }
        for p in &pyramids {
            assert_eq!(&q_nat_to_pyramid(&q_pyramid_to_nat(p).unwrap()).unwrap(), p);
        }
    }
}

#[test]
fn s_is_a_bijection_up_to_four_leaves() {
    let l = roomy();
    for n in 1..=4 {
        let forests = enumerate_complete_nafs(n, &l).unwrap();
        let images: BTreeSet<Heap> = forests.iter().map(|f| s_naf_to_heap(f).unwrap()).collect();
        assert_eq!(images.len(), forests.len());
        let heaps: BTreeSet<Heap> = heaps_paths(n, &l).unwrap().into_iter().collect();
        assert_eq!(images, heaps, "n={n}");
        for h in &heaps {
            assert_eq!(&s_naf_to_heap(&s_heap_to_naf(h).unwrap()).unwrap(), h);
        }
    }
}

#[test]
fn pairs_and_heaps_up_to_five() {
    let l = Limits::default();
    for n in 1..=5 {
        let perms = all_permutations(n);
        let mut images = BTreeSet::new();
        for pi in &perms {
            for xi in &perms {
                if has_common_rise(pi.values(), xi.values()) {
                    assert!(pair_to_heap(pi, xi).is_err());
                    continue;
                }
                let h = pair_to_heap(pi, xi).unwrap();
                assert_eq!(heap_to_pair(&h).unwrap(), (pi.clone(), xi.clone()));
                images.insert(h);
            }
        }
        let heaps: BTreeSet<Heap> = heaps_paths(n, &l).unwrap().into_iter().collect();
        assert_eq!(images, heaps, "n={n}");
        for h in &heaps {
            let (pi, xi) = heap_to_pair(h).unwrap();
            assert!(!has_common_rise(pi.values(), xi.values()));
        }
    }
}

#[test]
fn five_leaf_trees_over_53412() {
    let sigma = perm("53412");
    let trees = complete_with_leaves(&sigma, Mode::Tree);
    assert!(!trees.is_empty());
    for t in &trees {
        assert_eq!(t.len(), 9);
        let h = q_nat_to_pyramid(t).unwrap();
        assert_eq!(permutation_of_paths(&h).unwrap(), sigma);
        let top = h.piece(h.maximal_pieces()[0]).unwrap();
        assert_eq!(top, &Piece::path(&[1, 5]));
        assert_eq!(&q_pyramid_to_nat(&h).unwrap(), t);
    }
    assert_eq!(trees.iter().filter(|t| nat::validate_nat(t)).count(), trees.len());
}

#[test]
fn forest_of_the_pair_54132_21543() {
    let h = pair_to_heap(&perm("54132"), &perm("21543")).unwrap();
    let forest = s_heap_to_naf(&h).unwrap();
    let leaves = nat::leaves(&forest).unwrap();
    let expected: Vec<(u32, u32)> = vec![(0, 4), (1, 2), (2, 3), (3, 0), (4, 1)];
    assert_eq!(leaves, expected);
    assert!(complete_with_leaves(&perm("53412"), Mode::Forest).contains(&forest));
    assert_eq!(s_naf_to_heap(&forest).unwrap(), h);
}
