//! Concrete pieces and ground sets: crossing blocks, crossing paths, the
//! minimal elements of both families, and permutations by descent set.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::heap::Piece;
use crate::limits::{self, Limits};

/// A permutation of `[n]` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let i = v as usize;
            if i == 0 || i > n || seen[i - 1] {
                return Err(domain(format!("{values:?} is not a permutation of [{n}]")));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    /// Parses one-line notation: either digits without separators (`"132"`,
    /// only for n <= 9) or whitespace/comma separated values.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let values: Vec<u32> = if s.contains(|c: char| c == ',' || c.is_whitespace()) {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| Error::Format(format!("bad entry {t:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::Format(format!("bad digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// `π(i)` for `1 <= i <= n`.
    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation(inv)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Vec<u32> {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.len() > 9 { " " } else { "" };
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(sep))
    }
}

/// A set partition of `[rn]` into blocks of size exactly `r`, blocks sorted
/// by their minima.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    blocks: Vec<Vec<u32>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        let r = blocks.first().map_or(0, Vec::len);
        for b in &mut blocks {
            b.sort_unstable();
            if b.len() != r || r == 0 {
                return Err(domain("blocks must be nonempty and of equal size"));
            }
        }
        blocks.sort();
        let all: Vec<u32> = {
            let mut v: Vec<u32> = blocks.iter().flatten().copied().collect();
            v.sort_unstable();
            v
        };
        if all.iter().enumerate().any(|(i, &x)| x != i as u32 + 1) {
            return Err(domain("blocks must partition [rn]"));
        }
        Ok(Partition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn pieces(&self) -> Vec<Piece> {
        self.blocks.iter().map(|b| Piece::Block(b.clone())).collect()
    }
}

/// An `(r-1)`-tuple of permutations of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PermTuple {
    perms: Vec<Permutation>,
}

impl PermTuple {
    pub fn new(perms: Vec<Permutation>) -> Result<Self> {
        if let Some(first) = perms.first() {
            if let Some(p) = perms.iter().find(|p| p.len() != first.len()) {
                return Err(Error::LengthMismatch(first.len(), p.len()));
            }
        }
        Ok(PermTuple { perms })
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
}

/// Blocks cross unless one lies entirely to the left of the other.
pub fn blocks_crossing(b1: &[u32], b2: &[u32]) -> bool {
    let (lo1, hi1) = (b1[0], b1[b1.len() - 1]);
    let (lo2, hi2) = (b2[0], b2[b2.len() - 1]);
    !(hi1 < lo2 || hi2 < lo1)
}

/// Paths cross unless one is strictly smaller than the other in every
/// coordinate. Equal paths cross.
pub fn paths_crossing(p1: &[u32], p2: &[u32]) -> Result<bool> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch(p1.len(), p2.len()));
    }
    let below = p1.iter().zip(p2).all(|(a, b)| a < b);
    let above = p1.iter().zip(p2).all(|(a, b)| a > b);
    Ok(!(below || above))
}

/// Advances `a` to the next permutation in lexicographic order.
pub fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let Some(i) = (0..a.len() - 1).rfind(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = a.iter().rposition(|x| x > &a[i]).expect("a[i+1] > a[i]");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// All permutations of `[n]` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut a: Vec<u32> = (1..=n as u32).collect();
    let mut out = vec![Permutation(a.clone())];
    while next_permutation(&mut a) {
        out.push(Permutation(a.clone()));
    }
    out
}

/// All `r`-subsets of `items`, lexicographic.
fn combinations(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    fn go(items: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Set partitions of `ground` whose block sizes are all in `sizes`; each
/// block is built around the smallest unused element. Lexicographic.
pub(crate) fn set_partitions_with(ground: &[u32], allowed: &dyn Fn(usize) -> bool) -> Vec<Vec<Vec<u32>>> {
    fn go(
        rest: &[u32],
        allowed: &dyn Fn(usize) -> bool,
        cur: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        let Some((&first, others)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        for size in 1..=rest.len() {
            if !allowed(size) {
                continue;
            }
            for mates in combinations(others, size - 1) {
                let mut block = Vec::with_capacity(size);
                block.push(first);
                block.extend(&mates);
                let remaining: Vec<u32> =
                    others.iter().copied().filter(|x| !mates.contains(x)).collect();
                cur.push(block);
                go(&remaining, allowed, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(ground, allowed, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `[rn]` into `n` blocks of size `r`.
pub fn partitions_rn(n: usize, r: usize, limits: &Limits) -> Result<Vec<Partition>> {
    if r == 0 {
        return Err(domain("block size r must be at least 1"));
    }
    limits::check_usize("r*n (partition ground set)", r * n, limits.partition_ground)?;
    let ground: Vec<u32> = (1..=(r * n) as u32).collect();
    Ok(set_partitions_with(&ground, &|s| s == r)
        .into_iter()
        .map(|blocks| Partition { blocks })
        .collect())
}

/// All `(r-1)`-tuples of permutations of `[n]`, lexicographic.
pub fn perm_tuples(n: usize, r: usize, limits: &Limits) -> Result<Vec<PermTuple>> {
    if r == 0 {
        return Err(domain("r must be at least 1"));
    }
    limits::check_usize("n (permutation length)", n, limits.perm_len)?;
    let fact: u64 = (1..=n as u64).product();
    let count = fact
        .checked_pow((r - 1) as u32)
        .unwrap_or(u64::MAX);
    limits::check("number of permutation tuples", count, limits.tuple_count)?;
    let perms = all_permutations(n);
    let mut tuples: Vec<Vec<Permutation>> = vec![Vec::new()];
    for _ in 1..r {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                perms.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples.into_iter().map(|perms| PermTuple { perms }).collect())
}

/// The `n` paths `(m, σ1(m), σ2σ1(m), ...)`, ordered by starting point.
pub fn paths_of_tuple(t: &PermTuple) -> Vec<Piece> {
    let n = t.perms.first().map_or(0, Permutation::len);
    (1..=n as u32)
        .map(|m| {
            let mut path = vec![m];
            let mut cur = m;
            for p in &t.perms {
                cur = p.apply(cur);
                path.push(cur);
            }
            Piece::Path(path)
        })
        .collect()
}

/// Paths of a single permutation: `(i, σ(i))`.
pub fn paths_of_permutation(sigma: &Permutation) -> Vec<Piece> {
    paths_of_tuple(&PermTuple {
        perms: vec![sigma.clone()],
    })
}

/// Positions `i` (1-based) with `a_i > a_{i+1}`.
pub fn descent_set(p: &Permutation) -> BTreeSet<usize> {
    p.0.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > w[1])
        .map(|(i, _)| i + 1)
        .collect()
}

/// All permutations of `[n]` whose descent set is exactly `set`, in
/// lexicographic order.
pub fn perms_with_descent_set(
    n: usize,
    set: &BTreeSet<usize>,
    limits: &Limits,
) -> Result<Vec<Permutation>> {
    limits::check_usize("n (permutation length)", n, limits.perm_len)?;
    if set.iter().any(|&i| i == 0 || i >= n.max(1)) {
        return Err(domain(format!("descent positions must lie in 1..{n}")));
    }
    // Descents can only sit at the cut points, so each segment between cuts
    // is increasing: choose the segment contents, then filter exact descents.
    let mut cuts: Vec<usize> = vec![0];
    cuts.extend(set.iter().copied());
    cuts.push(n);
    let sizes: Vec<usize> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = Vec::new();
    let ground: Vec<u32> = (1..=n as u32).collect();
    fn go(
        rest: &[u32],
        sizes: &[usize],
        cur: &mut Vec<u32>,
        set: &BTreeSet<usize>,
        out: &mut Vec<Permutation>,
    ) {
        let Some((&size, more)) = sizes.split_first() else {
            let p = Permutation(cur.clone());
            if descent_set(&p) == *set {
                out.push(p);
            }
            return;
        };
        for seg in combinations(rest, size) {
            if let (Some(&last), Some(&first)) = (cur.last(), seg.first()) {
                if last < first {
                    continue;
                }
            }
            let remaining: Vec<u32> = rest.iter().copied().filter(|x| !seg.contains(x)).collect();
            let len = cur.len();
            cur.extend(&seg);
            go(&remaining, more, cur, set, out);
            cur.truncate(len);
        }
    }
    go(&ground, &sizes, &mut Vec::with_capacity(n), set, &mut out);
    out.sort();
    Ok(out)
}

/// `{r, 2r, ..., rn - r}`.
pub fn regular_descent_set(n: usize, r: usize) -> BTreeSet<usize> {
    (1..n).map(|k| k * r).collect()
}

/// Blocks of a permutation of `[rn-1]` with descent set `{r, 2r, ..., rn-r}`:
/// consecutive length-`r` segments, with `rn` appended to the last one.
/// Blocks are returned in segment order.
pub fn blocks_of_descent_perm(p: &Permutation, r: usize) -> Result<Vec<Vec<u32>>> {
    if r == 0 || !(p.len() + 1).is_multiple_of(r) {
        return Err(domain(format!(
            "length {} is not of the form r*n - 1 for r = {r}",
            p.len()
        )));
    }
    let n = (p.len() + 1) / r;
    if descent_set(p) != regular_descent_set(n, r) {
        return Err(domain(format!(
            "descent set of {p} is not {{r, 2r, ..., rn-r}} for r = {r}"
        )));
    }
    let mut values = p.0.clone();
    values.push((r * n) as u32);
    Ok(values.chunks(r).map(<[u32]>::to_vec).collect())
}

/// The partition formed by [`blocks_of_descent_perm`].
pub fn partition_of_descent_perm(p: &Permutation, r: usize) -> Result<Partition> {
    Partition::new(blocks_of_descent_perm(p, r)?)
}
