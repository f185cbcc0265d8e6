use std::collections::BTreeSet;

use proptest::prelude::*;

use piecework::enumerate::{heaps_paths, pyramids_blocks, pyramids_paths};
use piecework::{Alphabet, Heap, Limits, Piece};

fn int_word(max_len: usize) -> impl Strategy<Value = Vec<Piece>> {
    prop::collection::vec((0i64..6).prop_map(Piece::Int), 0..max_len)
}

fn block_word(max_len: usize) -> impl Strategy<Value = Vec<Piece>> {
    let block = prop::sample::subsequence((1u32..=6).collect::<Vec<_>>(), 1..=3).prop_map(|b| Piece::block(&b));
    prop::collection::vec(block, 0..max_len)
}

fn heap(alphabet: &Alphabet, word: &[Piece]) -> Heap {
    Heap::from_word(alphabet, word).unwrap()
}

/// Layers are antichains and every piece above the bottom rests on a related
/// piece one layer down.
fn check_axioms(h: &Heap) {
    let a = h.alphabet();
    for (k, layer) in h.layers().iter().enumerate() {
        for (i, x) in layer.iter().enumerate() {
            for y in &layer[i + 1..] {
                assert!(!a.related(x, y), "{x} and {y} share layer {k}");
            }
            if k > 0 {
                assert!(h.layers()[k - 1].iter().any(|y| a.related(x, y)), "{x} floats");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_is_associative(a in int_word(8), b in int_word(8), c in int_word(8)) {
        let al = Alphabet::Integers;
        let (ha, hb, hc) = (heap(&al, &a), heap(&al, &b), heap(&al, &c));
        let left = ha.compose(&hb).unwrap().compose(&hc).unwrap();
        let right = ha.compose(&hb.compose(&hc).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let empty = Heap::empty(al);
        prop_assert_eq!(&ha.compose(&empty).unwrap(), &ha);
        prop_assert_eq!(&empty.compose(&ha).unwrap(), &ha);
    }

    #[test]
    fn block_composition_is_associative(a in block_word(5), b in block_word(5), c in block_word(5)) {
        let al = Alphabet::Blocks;
        let (ha, hb, hc) = (heap(&al, &a), heap(&al, &b), heap(&al, &c));
        prop_assert_eq!(
            ha.compose(&hb).unwrap().compose(&hc).unwrap(),
            ha.compose(&hb.compose(&hc).unwrap()).unwrap()
        );
    }

    #[test]
    fn commuting_neighbours_never_change_the_heap(
        word in int_word(12),
        swaps in prop::collection::vec(any::<prop::sample::Index>(), 0..30),
    ) {
        let al = Alphabet::Integers;
        let h = heap(&al, &word);
        let mut w = word.clone();
        for s in swaps {
            if w.len() < 2 {
                break;
            }
            let i = s.index(w.len() - 1);
            if !al.related(&w[i], &w[i + 1]) {
                w.swap(i, i + 1);
            }
            prop_assert_eq!(&heap(&al, &w), &h);
        }
    }

    #[test]
    fn heaps_satisfy_the_axioms(word in block_word(10)) {
        let h = heap(&Alphabet::Blocks, &word);
        check_axioms(&h);
        prop_assert_eq!(h.len(), word.len());
        prop_assert_eq!(&heap(&Alphabet::Blocks, &h.word()), &h);
        let mut content = word.clone();
        content.sort();
        prop_assert_eq!(h.content(), content);
    }

    #[test]
    fn down_sets_split_and_recompose(word in int_word(10), pick in any::<prop::sample::Index>()) {
        let h = heap(&Alphabet::Integers, &word);
        prop_assume!(!h.is_empty());
        let occs: Vec<_> = h.occurrences().collect();
        let (lower, upper) = h.split_down_set(occs[pick.index(occs.len())]).unwrap();
        prop_assert!(lower.is_pyramid());
        prop_assert_eq!(lower.compose(&upper).unwrap(), h);
    }
}

/// Strict order of a heap with distinct pieces, as pairs of pieces.
fn strict_order(h: &Heap) -> BTreeSet<(Piece, Piece)> {
    let mut out = BTreeSet::new();
    for y in h.occurrences() {
        for x in h.down_set(y).unwrap() {
            if x != y {
                out.insert((h.piece(x).unwrap().clone(), h.piece(y).unwrap().clone()));
            }
        }
    }
    out
}

fn close(mut rel: BTreeSet<(Piece, Piece)>) -> BTreeSet<(Piece, Piece)> {
    loop {
        let extra: Vec<(Piece, Piece)> = rel
            .iter()
            .flat_map(|(a, b)| rel.iter().filter(move |(c, _)| c == b).map(move |(_, d)| (a.clone(), d.clone())))
            .filter(|p| !rel.contains(p))
            .collect();
        if extra.is_empty() {
            return rel;
        }
        rel.extend(extra);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reading {
    /// `y` must be minimal in its whole part.
    MinimalInPart,
    /// `y` must be minimal among the admissible pieces of its part.
    MinimalAmongAdmissible,
    /// Every admissible `y` minimal among the admissible pieces covers `x`.
    AllMinimalAdmissible,
}

/// Orders obtained by stacking the heaps in `parts` bottom to top the way a
/// cover-based construction does: each `x` in a lower part is covered by one
/// chosen `y` of a higher part that crosses `x` and crosses nothing above `x`
/// in its own part. One order per combination of choices.
fn cover_stackings(parts: &[Heap], reading: Reading) -> Vec<BTreeSet<(Piece, Piece)>> {
    let al = parts[0].alphabet().clone();
    let mut base = BTreeSet::new();
    for p in parts {
        base.extend(strict_order(p));
    }
    let mut options: Vec<Vec<(Piece, Piece)>> = Vec::new();
    for (i, lower) in parts.iter().enumerate() {
        let lower_order = strict_order(lower);
        for upper in &parts[i + 1..] {
            let upper_order = strict_order(upper);
            let minimal_in = |set: &[Piece]| -> Vec<Piece> {
                set.iter()
                    .filter(|y| !set.iter().any(|w| upper_order.contains(&(w.clone(), (*y).clone()))))
                    .cloned()
                    .collect()
            };
            for x in lower.content() {
                let above_x: Vec<&Piece> = lower_order.iter().filter(|(a, _)| a == &x).map(|(_, b)| b).collect();
                let admissible = |y: &Piece| al.related(&x, y) && !above_x.iter().any(|z| al.related(z, y));
                let pool: Vec<Piece> = match reading {
                    Reading::MinimalInPart => minimal_in(&upper.content()),
                    Reading::MinimalAmongAdmissible | Reading::AllMinimalAdmissible => {
                        minimal_in(&upper.content().into_iter().filter(|y| admissible(y)).collect::<Vec<_>>())
                    }
                };
                let cands: Vec<(Piece, Piece)> = pool
                    .iter()
                    .filter(|y| admissible(y))
                    .map(|y| (x.clone(), y.clone()))
                    .collect();
                if reading == Reading::AllMinimalAdmissible {
                    base.extend(cands);
                } else if !cands.is_empty() {
                    options.push(cands);
                }
            }
        }
    }
    let mut results = vec![base];
    for opts in options {
        results = results
            .into_iter()
            .flat_map(|r| {
                opts.iter().map(move |e| {
                    let mut r = r.clone();
                    r.insert(e.clone());
                    r
                })
            })
            .collect();
    }
    results.into_iter().map(close).collect()
}

fn stacking_agrees(parts: &[Heap], composed: &Heap, reading: Reading) -> bool {
    let expected = strict_order(composed);
    cover_stackings(parts, reading).into_iter().all(|got| got == expected)
}

fn assert_stacking_agrees(parts: &[Heap], composed: &Heap) {
    assert!(
        stacking_agrees(parts, composed, Reading::AllMinimalAdmissible),
        "parts {parts:?}"
    );
}

/// Splits a pyramid at every occurrence whose down-set leaves a pyramid.
fn pyramid_splits(p: &Heap) -> Vec<(Heap, Heap)> {
    p.occurrences()
        .filter_map(|o| p.split_down_set(o).ok())
        .filter(|(lower, upper)| !upper.is_empty() && upper.is_pyramid() && lower.is_pyramid())
        .collect()
}

#[test]
fn composition_matches_cover_stacking_of_pyramids() {
    let l = Limits::default();
    let mut pyramids = Vec::new();
    for n in 2..=4 {
        pyramids.extend(pyramids_paths(n, 2, false, &l).unwrap());
        pyramids.extend(pyramids_blocks(n, 2, false, &l).unwrap());
    }
    pyramids.extend(pyramids_paths(3, 3, false, &l).unwrap());
    pyramids.extend(pyramids_blocks(2, 3, false, &l).unwrap());
    let mut checked = 0;
    for p in &pyramids {
        for (lower, upper) in pyramid_splits(p) {
            assert_stacking_agrees(&[lower, upper], p);
            checked += 1;
        }
    }
    assert!(checked > 1000, "only {checked} splits");
}

#[test]
fn composition_matches_cover_stacking_of_pyramid_sequences() {
    // the peeling used to decompose a heap of paths into pyramids
    let l = Limits::default();
    for n in 1..=4 {
        for h in heaps_paths(n, &l).unwrap() {
            let mut parts = Vec::new();
            let mut rest = h.clone();
            while !rest.is_empty() {
                let a = rest.content().iter().map(|p| p.as_path().unwrap()[0]).min().unwrap();
                let occ = rest.find(|p| p.as_path().unwrap()[0] == a).unwrap();
                let (pyramid, remainder) = rest.split_down_set(occ).unwrap();
                parts.push(pyramid);
                rest = remainder;
            }
            assert_stacking_agrees(&parts, &h);
        }
    }
}

fn paths(word: &[[u32; 2]]) -> Heap {
    let w: Vec<Piece> = word.iter().map(|p| Piece::path(p)).collect();
    Heap::from_word(&Alphabet::Paths, &w).unwrap()
}

#[test]
fn a_single_cover_per_piece_can_lose_relations() {
    // (1,2) crosses (3,1) but not the minimal piece (2,3) below it
    let parts = [paths(&[[1, 2]]), paths(&[[2, 3], [3, 1]])];
    let composed = parts[0].compose(&parts[1]).unwrap();
    assert!(!stacking_agrees(&parts, &composed, Reading::MinimalInPart));
    assert!(stacking_agrees(&parts, &composed, Reading::MinimalAmongAdmissible));

    // (1,3) crosses both minimal pieces (3,1) and (4,2); one cover is not enough
    let parts = [paths(&[[1, 3]]), paths(&[[3, 1], [4, 2], [2, 4]])];
    let composed = parts[0].compose(&parts[1]).unwrap();
    assert!(!stacking_agrees(&parts, &composed, Reading::MinimalAmongAdmissible));
    assert!(stacking_agrees(&parts, &composed, Reading::AllMinimalAdmissible));
}
