//! Constructive correspondences between pyramids or heaps and classical
//! objects:
//!
//! * `g`: permutations of `[rn-1]` with descent set `{r, 2r, …, rn-r}` and
//!   pyramids of blocks whose maximal block contains `rn`;
//! * `q`: complete non-ambiguous trees with `n` leaves and pyramids over the
//!   paths of a permutation whose maximal path starts at 1;
//! * `s`: complete non-ambiguous forests and heaps over the paths of a
//!   permutation;
//! * heaps over the paths of a permutation and pairs of permutations with no
//!   common rise.
//!
//! Every stacking step is monoid composition. Inverses refuse anything
//! outside the image, checking by recomputing the forward map.

use std::collections::BTreeSet;

use crate::error::{domain, Error, Result};
use crate::heap::{Alphabet, Heap, Occurrence, Piece};
use crate::nat::{self, Forest, Mode, Point, PointSet};
use crate::series::has_common_rise;
use crate::structures::{blocks_of_descent_perm, descent_set, regular_descent_set, Permutation};

fn single(alphabet: &Alphabet, piece: Piece) -> Heap {
    Heap::from_word_unchecked(alphabet, &[piece])
}

fn pieces_of(h: &Heap) -> Vec<Piece> {
    h.layers().iter().flatten().cloned().collect()
}

fn the_max(h: &Heap) -> Result<&Piece> {
    match h.maximal_pieces().as_slice() {
        [m] => h.piece(*m),
        _ => Err(domain("not a pyramid")),
    }
}

/// In a set of blocks whose union has maximum `top`, the largest element
/// outside `top`'s block. Everything above it shares `top`'s block.
fn split_point(blocks: &[&[u32]]) -> Result<u32> {
    let top = blocks.iter().flat_map(|b| b.iter()).copied().max().ok_or_else(|| domain("no blocks"))?;
    let top_block = blocks.iter().find(|b| b.contains(&top)).expect("top lies in some block");
    let mut ground: Vec<u32> = blocks.iter().flat_map(|b| b.iter()).copied().collect();
    ground.sort_unstable();
    ground
        .into_iter()
        .rev()
        .find(|x| !top_block.contains(x))
        .ok_or_else(|| domain("a single block has no split point"))
}

fn g_build(blocks: &[Vec<u32>]) -> Result<Heap> {
    if let [b] = blocks {
        return Ok(single(&Alphabet::Blocks, Piece::Block(b.clone())));
    }
    let refs: Vec<&[u32]> = blocks.iter().map(Vec::as_slice).collect();
    let m = split_point(&refs)?;
    let i = blocks.iter().position(|b| b.contains(&m)).expect("m lies in some block");
    let (first, second) = blocks.split_at(i + 1);
    if second.is_empty() {
        return Err(domain("the block of m comes after the block of the maximum"));
    }
    g_build(first)?.compose(&g_build(second)?)
}

/// Sends a permutation of `[rn-1]` with descent set `{r, 2r, …, rn-r}` to the
/// pyramid of its blocks (segments, with `rn` appended to the last).
pub fn g_perm_to_pyramid(p: &Permutation, r: usize) -> Result<Heap> {
    if r == 0 || !(p.len() + 1).is_multiple_of(r) {
        return Err(domain(format!("length {} is not rn-1 for r = {r}", p.len())));
    }
    let n = (p.len() + 1) / r;
    if descent_set(p) != regular_descent_set(n, r) {
        return Err(domain(format!("descent set of {p} is not {{r, 2r, ..., rn-r}} for r = {r}")));
    }
    g_build(&blocks_of_descent_perm(p, r)?)
}

fn g_split(h: &Heap) -> Result<Vec<Vec<u32>>> {
    let pieces = pieces_of(h);
    if let [p] = pieces.as_slice() {
        return Ok(vec![p.as_block().expect("blocks alphabet").to_vec()]);
    }
    let refs: Vec<&[u32]> = pieces.iter().map(|p| p.as_block().expect("blocks alphabet")).collect();
    let m = split_point(&refs)?;
    let occ = h
        .find(|p| p.as_block().is_some_and(|b| b.contains(&m)))
        .expect("m lies in some block");
    let (lower, upper) = h.split_down_set(occ)?;
    if upper.is_empty() {
        return Err(domain("the block of the maximum lies below the block of m"));
    }
    let mut out = g_split(&lower)?;
    out.extend(g_split(&upper)?);
    Ok(out)
}

/// Inverse of [`g_perm_to_pyramid`]. Also returns `r`.
pub fn g_pyramid_to_perm(h: &Heap) -> Result<(Permutation, usize)> {
    if h.alphabet() != &Alphabet::Blocks {
        return Err(domain("g needs a heap of blocks"));
    }
    let pieces = pieces_of(h);
    let r = pieces.first().and_then(Piece::as_block).map_or(0, <[u32]>::len);
    if r == 0 || pieces.iter().any(|p| p.as_block().map(<[u32]>::len) != Some(r)) {
        return Err(domain("blocks must be nonempty of one size"));
    }
    let rn = (r * pieces.len()) as u32;
    let mut all: Vec<u32> = pieces.iter().flat_map(|p| p.as_block().unwrap().iter().copied()).collect();
    all.sort_unstable();
    if all != (1..=rn).collect::<Vec<_>>() {
        return Err(domain(format!("blocks do not partition [{rn}]")));
    }
    if !the_max(h)?.as_block().unwrap().contains(&rn) {
        return Err(domain(format!("the maximal block does not contain {rn}")));
    }
    let mut word: Vec<u32> = g_split(h)?.into_iter().flatten().collect();
    word.pop();
    let p = Permutation::new(word)?;
    if &g_perm_to_pyramid(&p, r)? != h {
        return Err(domain("pyramid is not in the image of g"));
    }
    Ok((p, r))
}

fn path(a: u32, b: u32) -> Piece {
    Piece::Path(vec![a, b])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// The whole tree, or a column child.
    Left,
    /// A row child.
    Right,
}

/// Pyramid of the subtree at `node`, pieces shifted by one.
fn q_build(f: &Forest, node: Point, side: Side) -> Result<Heap> {
    let (l, r) = (f.left.get(&node), f.right.get(&node));
    match (l, r) {
        (None, None) => Ok(single(&Alphabet::Paths, path(node.0 + 1, node.1 + 1))),
        (Some(&l), Some(&r)) => {
            let col = q_build(f, l, Side::Left)?;
            let row = q_build(f, r, Side::Right)?;
            match side {
                Side::Left => row.compose(&col),
                Side::Right => col.compose(&row),
            }
        }
        _ => Err(domain("tree is not complete")),
    }
}

/// Sends a complete non-ambiguous tree to its pyramid of paths.
pub fn q_nat_to_pyramid(ps: &PointSet) -> Result<Heap> {
    let ps = ps.with_mode(Mode::Tree);
    if !nat::validate_nat(&ps) || !nat::is_complete(&ps)? {
        return Err(Error::InvalidPointSet(format!("{ps} is not a complete non-ambiguous tree")));
    }
    q_build(&nat::underlying_forest(&ps)?, (0, 0), Side::Left)
}

fn coords(p: &Piece) -> (u32, u32) {
    let v = p.as_path().expect("paths alphabet");
    (v[0], v[1])
}

/// Checks that `h` is a heap over the paths `(i, σ(i))` of a permutation
/// and returns `σ`.
pub fn permutation_of_paths(h: &Heap) -> Result<Permutation> {
    if h.alphabet() != &Alphabet::Paths {
        return Err(domain("expected a heap of paths"));
    }
    let pieces = pieces_of(h);
    let mut values = vec![0u32; pieces.len()];
    for p in &pieces {
        match p.as_path() {
            Some(&[a, b]) if a >= 1 && (a as usize) <= values.len() && values[a as usize - 1] == 0 => {
                values[a as usize - 1] = b;
            }
            _ => return Err(domain(format!("{p} is not a path (i, sigma(i)) of a permutation"))),
        }
    }
    Permutation::new(values).map_err(|_| domain("paths do not form the graph of a permutation"))
}

/// Shifted points of the tree whose pyramid is `h`.
fn q_unbuild(h: &Heap, side: Side) -> Result<BTreeSet<Point>> {
    let pieces = pieces_of(h);
    if let [p] = pieces.as_slice() {
        return Ok(BTreeSet::from([coords(p)]));
    }
    let a = pieces.iter().map(|p| coords(p).0).min().unwrap();
    let b = pieces.iter().map(|p| coords(p).1).min().unwrap();
    let (col, row) = match side {
        Side::Left => {
            let occ = h.find(|p| coords(p).1 == b).unwrap();
            let (row, col) = h.split_down_set(occ)?;
            (col, row)
        }
        Side::Right => {
            let occ = h.find(|p| coords(p).0 == a).unwrap();
            h.split_down_set(occ)?
        }
    };
    if col.is_empty() || row.is_empty() {
        return Err(domain("pyramid does not split into two subtrees"));
    }
    let mut out = q_unbuild(&col, Side::Left)?;
    out.extend(q_unbuild(&row, Side::Right)?);
    if !out.insert((a, b)) {
        return Err(domain("reconstructed internal node collides with another point"));
    }
    Ok(out)
}

fn unshift(points: BTreeSet<Point>, mode: Mode) -> Result<PointSet> {
    let shifted = points
        .into_iter()
        .map(|(x, y)| match (x.checked_sub(1), y.checked_sub(1)) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(domain("coordinates must be at least 1 before shifting")),
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(shifted, mode)
}

/// Inverse of [`q_nat_to_pyramid`].
pub fn q_pyramid_to_nat(h: &Heap) -> Result<PointSet> {
    let sigma = permutation_of_paths(h)?;
    if the_max(h)? != &path(1, sigma.apply(1)) {
        return Err(domain("the maximal path does not start at 1"));
    }
    let ps = unshift(q_unbuild(h, Side::Left)?, Mode::Tree)?;
    if !nat::validate_nat(&ps) || !nat::is_complete(&ps)? || &q_nat_to_pyramid(&ps)? != h {
        return Err(domain("pyramid is not in the image of q"));
    }
    Ok(ps)
}

/// Sends a complete non-ambiguous forest to a heap of paths: the pyramids
/// of its trees stacked in increasing order of leftmost leaf.
pub fn s_naf_to_heap(ps: &PointSet) -> Result<Heap> {
    let ps = ps.with_mode(Mode::Forest);
    if !nat::validate_naf(&ps) || !nat::is_complete(&ps)? {
        return Err(Error::InvalidPointSet(format!("{ps} is not a complete non-ambiguous forest")));
    }
    let f = nat::underlying_forest(&ps)?;
    let mut trees: Vec<(u32, Point)> = f
        .roots
        .iter()
        .map(|&root| {
            let leftmost = f
                .subtree(root)
                .into_iter()
                .filter(|&p| f.children(p) == 0)
                .map(|p| p.0)
                .min()
                .expect("a tree has a leaf");
            (leftmost, root)
        })
        .collect();
    trees.sort();
    let mut h = Heap::empty(Alphabet::Paths);
    for (_, root) in trees {
        h = h.compose(&q_build(&f, root, Side::Left)?)?;
    }
    Ok(h)
}

/// Inverse of [`s_naf_to_heap`].
pub fn s_heap_to_naf(h: &Heap) -> Result<PointSet> {
    permutation_of_paths(h)?;
    let mut rest = h.clone();
    let mut points = BTreeSet::new();
    while !rest.is_empty() {
        let a = pieces_of(&rest).iter().map(|p| coords(p).0).min().unwrap();
        let occ = rest.find(|p| coords(p).0 == a).unwrap();
        let (pyramid, remainder) = rest.split_down_set(occ)?;
        for p in q_unbuild(&pyramid, Side::Left)? {
            if !points.insert(p) {
                return Err(domain("trees of the forest overlap"));
            }
        }
        rest = remainder;
    }
    let ps = unshift(points, Mode::Forest)?;
    if !nat::validate_naf(&ps) || !nat::is_complete(&ps)? || &s_naf_to_heap(&ps)? != h {
        return Err(domain("heap is not in the image of s"));
    }
    Ok(ps)
}

/// The heap in which `(π(j), ξ(j))` lies below `(π(i), ξ(i))` whenever
/// `i < j` and the two paths cross.
pub fn pair_to_heap(pi: &Permutation, xi: &Permutation) -> Result<Heap> {
    if pi.len() != xi.len() {
        return Err(Error::LengthMismatch(pi.len(), xi.len()));
    }
    if has_common_rise(pi.values(), xi.values()) {
        return Err(domain(format!("({pi}, {xi}) has a common rise")));
    }
    let word: Vec<Piece> = pi
        .values()
        .iter()
        .zip(xi.values())
        .rev()
        .map(|(&a, &b)| path(a, b))
        .collect();
    Ok(Heap::from_word_unchecked(&Alphabet::Paths, &word))
}

/// Inverse of [`pair_to_heap`]: peels maximal pieces from the top, taking
/// the one with the largest first coordinate each time.
pub fn heap_to_pair(h: &Heap) -> Result<(Permutation, Permutation)> {
    permutation_of_paths(h)?;
    let occs: Vec<Occurrence> = h.occurrences().collect();
    let below: Vec<BTreeSet<Occurrence>> = occs
        .iter()
        .map(|&o| h.down_set(o))
        .collect::<Result<_>>()?;
    let mut alive: BTreeSet<usize> = (0..occs.len()).collect();
    let (mut pi, mut xi) = (Vec::new(), Vec::new());
    while !alive.is_empty() {
        let next = alive
            .iter()
            .copied()
            .filter(|&i| !alive.iter().any(|&j| j != i && below[j].contains(&occs[i])))
            .max_by_key(|&i| coords(h.piece(occs[i]).unwrap()).0)
            .unwrap();
        let (a, b) = coords(h.piece(occs[next])?);
        pi.push(a);
        xi.push(b);
        alive.remove(&next);
    }
    let (pi, xi) = (Permutation::new(pi)?, Permutation::new(xi)?);
    if has_common_rise(pi.values(), xi.values()) || &pair_to_heap(&pi, &xi)? != h {
        return Err(domain("heap does not decode to a pair without common rise"));
    }
    Ok((pi, xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn blocks_heap(word: &[&[u32]]) -> Heap {
        let w: Vec<Piece> = word.iter().map(|b| Piece::block(b)).collect();
        Heap::from_word(&Alphabet::Blocks, &w).unwrap()
    }

    #[test]
    fn g_on_the_small_cases() {
        assert_eq!(g_perm_to_pyramid(&perm("1"), 2).unwrap(), blocks_heap(&[&[1, 2]]));
        assert_eq!(
            g_perm_to_pyramid(&perm("132"), 2).unwrap(),
            blocks_heap(&[&[1, 3], &[2, 4]])
        );
        let h = blocks_heap(&[&[2, 3], &[1, 4]]);
        assert_eq!(g_pyramid_to_perm(&h).unwrap(), (perm("231"), 2));
        assert_eq!(g_pyramid_to_perm(&blocks_heap(&[&[1, 2]])).unwrap(), (perm("1"), 2));
    }

    #[test]
    fn g_on_the_large_example() {
        let p = Permutation::new(vec![6, 8, 12, 9, 13, 14, 1, 2, 5, 3, 10, 11, 4, 7]).unwrap();
        let h = g_perm_to_pyramid(&p, 3).unwrap();
        assert!(h.is_pyramid());
        assert_eq!(the_max(&h).unwrap(), &Piece::block(&[4, 7, 15]));
        let content: BTreeSet<Piece> = h.content().into_iter().collect();
        let expected: BTreeSet<Piece> = [&[6, 8, 12][..], &[9, 13, 14], &[1, 2, 5], &[3, 10, 11], &[4, 7, 15]]
            .iter()
            .map(|b| Piece::block(b))
            .collect();
        assert_eq!(content, expected);
        assert_eq!(g_pyramid_to_perm(&h).unwrap(), (p, 3));
    }

    #[test]
    fn g_rejects_outside_its_domain() {
        assert!(g_perm_to_pyramid(&perm("123"), 2).is_err());
        assert!(g_perm_to_pyramid(&perm("12"), 2).is_err());
        // maximum {2,4} does not hold 4 on top
        assert!(g_pyramid_to_perm(&blocks_heap(&[&[2, 4], &[1, 3]])).is_err());
        // not a pyramid
        assert!(g_pyramid_to_perm(&blocks_heap(&[&[1, 2], &[3, 4]])).is_err());
        assert!(g_pyramid_to_perm(&blocks_heap(&[&[1, 2], &[2, 4]])).is_err());
    }

    fn tree(pts: &[Point]) -> PointSet {
        PointSet::new(pts.iter().copied(), Mode::Tree).unwrap()
    }

    #[test]
    fn q_on_a_point() {
        let h = q_nat_to_pyramid(&tree(&[(0, 0)])).unwrap();
        assert_eq!(h.word(), vec![path(1, 1)]);
        assert_eq!(q_pyramid_to_nat(&h).unwrap(), tree(&[(0, 0)]));
    }

    #[test]
    fn q_on_the_four_small_trees() {
        let l = Limits::default();
        let trees = nat::enumerate_complete_nats(3, &l).unwrap();
        let images: BTreeSet<Heap> = trees.iter().map(|t| q_nat_to_pyramid(t).unwrap()).collect();
        let expected: BTreeSet<Heap> = crate::enumerate::pyramids_paths(3, 2, true, &l)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(images, expected);
        for t in trees {
            assert_eq!(q_pyramid_to_nat(&q_nat_to_pyramid(&t).unwrap()).unwrap(), t);
        }
    }

    #[test]
    fn q_rejects_bad_input() {
        assert!(q_nat_to_pyramid(&tree(&[(0, 0), (1, 0)])).is_err());
        let h = Heap::from_word(&Alphabet::Paths, &[path(1, 2), path(2, 1)]).unwrap();
        // maximum is (2,1)
        assert!(q_pyramid_to_nat(&h).is_err());
        let not_perm = Heap::from_word(&Alphabet::Paths, &[path(1, 1), path(1, 2)]).unwrap();
        assert!(q_pyramid_to_nat(&not_perm).is_err());
    }

    #[test]
    fn s_on_small_forests() {
        let l = Limits::default();
        let single = PointSet::new([(0, 0)], Mode::Forest).unwrap();
        let h = s_naf_to_heap(&single).unwrap();
        assert_eq!(h.word(), vec![path(1, 1)]);
        assert_eq!(s_heap_to_naf(&h).unwrap(), single);
        let forests = nat::enumerate_complete_nafs(2, &l).unwrap();
        let images: BTreeSet<Heap> = forests.iter().map(|f| s_naf_to_heap(f).unwrap()).collect();
        assert_eq!(images.len(), 3);
        for f in forests {
            assert_eq!(s_heap_to_naf(&s_naf_to_heap(&f).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn pairs() {
        let h = pair_to_heap(&perm("1"), &perm("1")).unwrap();
        assert_eq!(heap_to_pair(&h).unwrap(), (perm("1"), perm("1")));
        let h = pair_to_heap(&perm("12"), &perm("21")).unwrap();
        assert_eq!(h.layers(), &[vec![path(2, 1)], vec![path(1, 2)]]);
        assert!(pair_to_heap(&perm("12"), &perm("12")).is_err());
        assert!(pair_to_heap(&perm("12"), &perm("1")).is_err());
    }

    #[test]
    fn the_forest_pair_example() {
        let (pi, xi) = (perm("54132"), perm("21543"));
        let h = pair_to_heap(&pi, &xi).unwrap();
        assert_eq!(permutation_of_paths(&h).unwrap(), perm("53412"));
        assert_eq!(heap_to_pair(&h).unwrap(), (pi, xi));
        let forest = s_heap_to_naf(&h).unwrap();
        assert!(nat::validate_naf(&forest) && nat::is_complete(&forest).unwrap());
        assert_eq!(s_naf_to_heap(&forest).unwrap(), h);
    }
}
