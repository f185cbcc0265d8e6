//! Finite posets of set partitions and r-partitions, with the Möbius
//! function from an adjoined bottom to the top.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::limits::{self, Limits};
use crate::series::{r_sequence, SequenceSpec};
use crate::structures::set_partitions_with;

/// Rows of a relation matrix packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn new(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_subset(&self, other: &BitRow) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// An explicit finite poset. `up[i]` holds every `j` with `i <= j`.
#[derive(Clone, Debug)]
pub struct FinitePoset<T> {
    elements: Vec<T>,
    up: Vec<BitRow>,
}

impl<T: Clone + fmt::Display> FinitePoset<T> {
    /// Builds the poset and checks reflexivity, antisymmetry and
    /// transitivity on every pair or triple.
    pub fn new(elements: Vec<T>, leq: impl Fn(&T, &T) -> bool) -> Result<Self> {
        let n = elements.len();
        let mut up = vec![BitRow::new(n); n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                if leq(a, b) {
                    up[i].set(j);
                }
            }
        }
        let p = FinitePoset { elements, up };
        p.check_order()?;
        Ok(p)
    }

    fn check_order(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.up[i].get(i) {
                return Err(Error::NotAPartialOrder(format!("{} is not <= itself", self.elements[i])));
            }
            for j in 0..n {
                if i == j || !self.up[i].get(j) {
                    continue;
                }
                if self.up[j].get(i) {
                    return Err(Error::NotAPartialOrder(format!(
                        "{} and {} are <= each other",
                        self.elements[i], self.elements[j]
                    )));
                }
                // i <= j forces everything above j to be above i
                if !self.up[j].is_subset(&self.up[i]) {
                    return Err(Error::NotAPartialOrder(format!(
                        "transitivity fails above {} <= {}",
                        self.elements[i], self.elements[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].get(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| (0..self.len()).all(|i| !self.lt(i, j)))
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| (0..self.len()).all(|j| !self.lt(i, j)))
            .collect()
    }

    /// Index of the unique maximal element.
    pub fn top(&self) -> Result<usize> {
        match self.maximal().as_slice() {
            [t] => Ok(*t),
            _ => Err(Error::NoUniqueMaximum),
        }
    }

    /// Cover pairs `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt(i, j) && !(0..n).any(|k| self.lt(i, k) && self.lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Indices sorted so that every element follows everything below it.
    fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        let below = |j: usize| (0..self.len()).filter(|&i| self.leq(i, j)).count();
        idx.sort_by_key(|&j| below(j));
        idx
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
        for (i, e) in self.elements.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{e}\"];\n"));
        }
        for (i, j) in self.covers() {
            out.push_str(&format!("  n{i} -> n{j};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// `μ(0̂, 1̂)` in the poset with a new bottom element adjoined below
/// everything, by the recursion `μ(0̂,y) = -Σ_{0̂ <= z < y} μ(0̂,z)`.
pub fn mobius_bottom_top<T: Clone + fmt::Display>(p: &FinitePoset<T>) -> Result<BigInt> {
    let top = p.top()?;
    let mut mu = vec![BigInt::zero(); p.len()];
    for y in p.linear_extension() {
        let mut acc = BigInt::one(); // the adjoined bottom
        for (z, m) in mu.iter().enumerate() {
            if p.lt(z, y) {
                acc += m;
            }
        }
        mu[y] = -acc;
    }
    Ok(mu[top].clone())
}

pub fn minimal_count<T: Clone + fmt::Display>(p: &FinitePoset<T>) -> usize {
    p.minimal().len()
}

/// True iff every maximal chain has exactly `n` elements. Tracks the
/// shortest and longest cover chain from a minimal element to each element.
pub fn verify_chain_condition<T: Clone + fmt::Display>(p: &FinitePoset<T>, n: usize) -> bool {
    if p.is_empty() {
        return n == 0;
    }
    let mut lo = vec![usize::MAX; p.len()];
    let mut hi = vec![0usize; p.len()];
    let covers = p.covers();
    for y in p.linear_extension() {
        let lower: Vec<usize> = covers.iter().filter(|c| c.1 == y).map(|c| c.0).collect();
        if lower.is_empty() {
            lo[y] = 1;
            hi[y] = 1;
        } else {
            lo[y] = lower.iter().map(|&x| lo[x]).min().unwrap() + 1;
            hi[y] = lower.iter().map(|&x| hi[x]).max().unwrap() + 1;
        }
    }
    p.maximal().into_iter().all(|m| lo[m] == n && hi[m] == n)
}

/// A set partition with sorted blocks in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition(pub Vec<Vec<u32>>);

impl SetPartition {
    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        self.0
            .iter()
            .all(|b| other.0.iter().any(|c| b.iter().all(|x| c.contains(x))))
    }
}

fn fmt_block(b: &[u32]) -> String {
    let items: Vec<String> = b.iter().map(u32::to_string).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(&fmt_block(b))?;
        }
        Ok(())
    }
}

/// Partitions of `[rn]` whose block sizes are divisible by `r`, ordered by
/// refinement.
pub fn build_block_poset(n: usize, r: usize, limits: &Limits) -> Result<FinitePoset<SetPartition>> {
    if r == 0 || n == 0 {
        return Err(domain("block posets need n, r >= 1"));
    }
    limits::check_usize("r*n (block poset ground set)", r * n, limits.block_poset_ground)?;
    let ground: Vec<u32> = (1..=(r * n) as u32).collect();
    let elements = set_partitions_with(&ground, &|size| size % r == 0)
        .into_iter()
        .map(SetPartition)
        .collect();
    FinitePoset::new(elements, SetPartition::refines)
}

/// A set of block tuples `(B_1, …, B_r)` with `|B_1| = … = |B_r|`, each axis
/// forming a partition of `[n]`. Canonically sorted by the axis-1 minima.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RPartition {
    tuples: Vec<Vec<Vec<u32>>>,
}

impl RPartition {
    pub fn new(mut tuples: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let r = tuples.first().map_or(0, Vec::len);
        let n: usize = tuples.iter().map(|t| t.first().map_or(0, Vec::len)).sum();
        if r == 0 || tuples.iter().any(|t| t.len() != r) {
            return Err(domain("r-partition tuples must share a positive length"));
        }
        for t in &mut tuples {
            for b in t.iter_mut() {
                b.sort_unstable();
            }
            if t.iter().any(|b| b.is_empty() || b.len() != t[0].len()) {
                return Err(domain("blocks of a tuple must be nonempty of equal size"));
            }
        }
        for axis in 0..r {
            let mut seen: Vec<u32> = tuples.iter().flat_map(|t| t[axis].iter().copied()).collect();
            seen.sort_unstable();
            if seen != (1..=n as u32).collect::<Vec<_>>() {
                return Err(domain(format!("axis {} is not a partition of [{n}]", axis + 1)));
            }
        }
        tuples.sort_by_key(|t| t[0][0]);
        Ok(RPartition { tuples })
    }

    pub fn tuples(&self) -> &[Vec<Vec<u32>>] {
        &self.tuples
    }

    /// Every tuple of `self` is contained, axis by axis, in a tuple of
    /// `other`.
    pub fn leq(&self, other: &RPartition) -> bool {
        self.tuples.iter().all(|t| {
            other.tuples.iter().any(|u| {
                t.iter()
                    .zip(u)
                    .all(|(b, c)| b.iter().all(|x| c.binary_search(x).is_ok()))
            })
        })
    }
}

impl fmt::Display for RPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tuples {
            let blocks: Vec<String> = t.iter().map(|b| fmt_block(b)).collect();
            write!(f, "({})", blocks.join(","))?;
        }
        Ok(())
    }
}

/// Ordered choices of disjoint subsets of `pool` with the given sizes.
fn ordered_assignments(pool: &[u32], sizes: &[usize]) -> Vec<Vec<Vec<u32>>> {
    let Some((&k, rest)) = sizes.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for chosen in subsets_of_size(pool, k) {
        let remaining: Vec<u32> = pool.iter().copied().filter(|x| !chosen.contains(x)).collect();
        for mut tail in ordered_assignments(&remaining, rest) {
            tail.insert(0, chosen.clone());
            out.push(tail);
        }
    }
    out
}

fn subsets_of_size(pool: &[u32], k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if pool.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mut s in subsets_of_size(&pool[1..], k - 1) {
        s.insert(0, pool[0]);
        out.push(s);
    }
    out.extend(subsets_of_size(&pool[1..], k));
    out
}

/// All r-partitions of `[n]`, ordered by tuple containment.
pub fn build_rpartition_poset(n: usize, r: usize, limits: &Limits) -> Result<FinitePoset<RPartition>> {
    if r == 0 || n == 0 {
        return Err(domain("r-partition posets need n, r >= 1"));
    }
    limits::check_usize("r-partition n", n, limits.rpartition_n)?;
    limits::check_usize("r-partition r", r, limits.rpartition_r)?;
    let ground: Vec<u32> = (1..=n as u32).collect();
    let mut elements = BTreeSet::new();
    for first in set_partitions_with(&ground, &|_| true) {
        let sizes: Vec<usize> = first.iter().map(Vec::len).collect();
        let per_axis = ordered_assignments(&ground, &sizes);
        // odometer over the choice made on each of the axes 2..=r
        let mut pick = vec![0usize; r - 1];
        loop {
            let tuples = first
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let mut t = vec![b.clone()];
                    t.extend(pick.iter().map(|&c| per_axis[c][i].clone()));
                    t
                })
                .collect();
            elements.insert(RPartition::new(tuples)?);
            let Some(axis) = (0..pick.len()).find(|&a| pick[a] + 1 < per_axis.len()) else {
                break;
            };
            pick[axis] += 1;
            pick[..axis].iter_mut().for_each(|c| *c = 0);
        }
    }
    FinitePoset::new(elements.into_iter().collect(), RPartition::leq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Blocks,
    RPartitions,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s {
            "blocks" => Ok(Family::Blocks),
            "rpartitions" => Ok(Family::RPartitions),
            _ => Err(domain(format!("family must be blocks or rpartitions, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MobiusReport {
    pub family: Family,
    pub n: usize,
    pub r: usize,
    pub elements: usize,
    pub mobius: String,
    pub r_n: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Compares `(-1)^n μ(0̂, 1̂)` with `r_n` from the generating function.
pub fn verify_mobius(family: Family, n: usize, r: usize, limits: &Limits) -> Result<MobiusReport> {
    let (elements, mu) = match family {
        Family::Blocks => {
            let p = build_block_poset(n, r, limits)?;
            (p.len(), mobius_bottom_top(&p)?)
        }
        Family::RPartitions => {
            let p = build_rpartition_poset(n, r, limits)?;
            (p.len(), mobius_bottom_top(&p)?)
        }
    };
    let spec = match family {
        Family::Blocks => SequenceSpec::Blocks(r),
        Family::RPartitions => SequenceSpec::RPartitions(r),
    };
    let r_n = r_sequence(&spec, n)?[n - 1].clone();
    let signed = if n.is_multiple_of(2) { mu.clone() } else { -mu.clone() };
    Ok(MobiusReport {
        family,
        n,
        r,
        elements,
        mobius: mu.to_string(),
        r_n: r_n.to_string(),
        matches: signed == r_n && !r_n.is_negative(),
    })
}
