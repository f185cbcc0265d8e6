//! Exhaustive enumeration of heaps and pyramids over small ground sets, and
//! coefficient-exact checks of the monoid identities in commuting variables.
//!
//! Heaps are produced by running every distinct sequencing of a multiset of
//! pieces through [`Heap::from_word`] and deduplicating by normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::heap::{Alphabet, Heap, Piece};
use crate::limits::{self, Limits};
use crate::structures::{self, next_permutation, Permutation};

/// All distinct heaps whose content is exactly `pieces` (a multiset).
pub fn enumerate_heaps(
    pieces: &[Piece],
    alphabet: &Alphabet,
    limits: &Limits,
) -> Result<BTreeSet<Heap>> {
    limits::check_usize("heap size", pieces.len(), limits.heap_pieces)?;
    let mut word = pieces.to_vec();
    word.sort();
    // validates membership once; the loop below skips the check
    let mut out = BTreeSet::from([Heap::from_word(alphabet, &word)?]);
    while next_permutation(&mut word) {
        out.insert(Heap::from_word_unchecked(alphabet, &word));
    }
    Ok(out)
}

fn is_top_block(h: &Heap, top: u32) -> bool {
    let maxima = h.maximal_pieces();
    maxima.len() == 1
        && h.piece(maxima[0])
            .ok()
            .and_then(Piece::as_block)
            .is_some_and(|b| b.contains(&top))
}

fn is_top_path_from_one(h: &Heap) -> bool {
    let maxima = h.maximal_pieces();
    maxima.len() == 1
        && h.piece(maxima[0])
            .ok()
            .and_then(Piece::as_path)
            .is_some_and(|p| p[0] == 1)
}

/// All pyramids whose pieces are the blocks of some partition of `[rn]` into
/// blocks of size `r`; with `restrict_max`, only those whose unique maximal
/// block contains `rn`.
pub fn pyramids_blocks(n: usize, r: usize, restrict_max: bool, limits: &Limits) -> Result<Vec<Heap>> {
    limits::check_usize("r*n (pyramid ground set)", r * n, limits.pyramid_ground)?;
    limits::check_usize("n (pieces per heap)", n, limits.heap_pieces)?;
    let unbounded = Limits::unbounded();
    let top = (r * n) as u32;
    let mut out = Vec::new();
    for partition in structures::partitions_rn(n, r, &unbounded)? {
        for h in enumerate_heaps(&partition.pieces(), &Alphabet::Blocks, &unbounded)? {
            let keep = if restrict_max { is_top_block(&h, top) } else { h.is_pyramid() };
            if keep {
                out.push(h);
            }
        }
    }
    Ok(out)
}

pub fn count_pyramids_blocks(n: usize, r: usize, restrict_max: bool, limits: &Limits) -> Result<u64> {
    Ok(pyramids_blocks(n, r, restrict_max, limits)?.len() as u64)
}

fn check_path_work(n: usize, r: usize, limits: &Limits) -> Result<()> {
    let fact: u64 = (1..=n as u64).product();
    let work = fact.checked_pow(r as u32).unwrap_or(u64::MAX);
    limits::check("n!^r words over paths", work, limits.path_work)
}

/// All pyramids over the paths of some `(r-1)`-tuple of permutations of
/// `[n]`; with `restrict_max`, only those whose maximal path starts at 1.
pub fn pyramids_paths(n: usize, r: usize, restrict_max: bool, limits: &Limits) -> Result<Vec<Heap>> {
    if r < 2 {
        return Err(domain("paths need r >= 2"));
    }
    check_path_work(n, r, limits)?;
    let unbounded = Limits::unbounded();
    let mut out = Vec::new();
    for t in structures::perm_tuples(n, r, &unbounded)? {
        let paths = structures::paths_of_tuple(&t);
        for h in enumerate_heaps(&paths, &Alphabet::Paths, &unbounded)? {
            let keep = if restrict_max { is_top_path_from_one(&h) } else { h.is_pyramid() };
            if keep {
                out.push(h);
            }
        }
    }
    Ok(out)
}

pub fn count_pyramids_paths(n: usize, r: usize, restrict_max: bool, limits: &Limits) -> Result<u64> {
    Ok(pyramids_paths(n, r, restrict_max, limits)?.len() as u64)
}

/// All heaps over the paths `(i, σ(i))` of a permutation `σ` of `[n]`.
pub fn heaps_paths(n: usize, limits: &Limits) -> Result<Vec<Heap>> {
    check_path_work(n, 2, limits)?;
    let unbounded = Limits::unbounded();
    let mut out = Vec::new();
    for sigma in structures::all_permutations(n) {
        let paths = structures::paths_of_permutation(&sigma);
        out.extend(enumerate_heaps(&paths, &Alphabet::Paths, &unbounded)?);
    }
    Ok(out)
}

pub fn count_heaps_paths(n: usize, limits: &Limits) -> Result<u64> {
    Ok(heaps_paths(n, limits)?.len() as u64)
}

/// A finite set of pieces of some alphabet.
#[derive(Clone, Debug)]
pub struct Universe {
    pub name: String,
    pub alphabet: Alphabet,
    pub pieces: Vec<Piece>,
}

impl Universe {
    pub fn new(name: impl Into<String>, alphabet: Alphabet, pieces: Vec<Piece>) -> Result<Self> {
        let mut sorted = pieces.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != pieces.len() {
            return Err(domain("universe pieces must be distinct"));
        }
        Heap::from_word(&alphabet, &pieces)?;
        Ok(Universe {
            name: name.into(),
            alphabet,
            pieces: sorted,
        })
    }

    /// All `k`-subsets of `[m]` as blocks.
    pub fn blocks(m: u32, k: usize) -> Self {
        let ground: Vec<u32> = (1..=m).collect();
        let pieces = structures::set_partitions_with(&ground, &|_| true)
            .into_iter()
            .flatten()
            .filter(|b| b.len() == k)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(Piece::Block)
            .collect();
        Universe {
            name: format!("blocks{m}"),
            alphabet: Alphabet::Blocks,
            pieces,
        }
    }

    /// The paths of every permutation of `[n]`.
    pub fn paths_of_sn(n: usize) -> Self {
        let pieces: BTreeSet<Piece> = structures::all_permutations(n)
            .iter()
            .flat_map(structures::paths_of_permutation)
            .collect();
        Universe {
            name: format!("paths{n}"),
            alphabet: Alphabet::Paths,
            pieces: pieces.into_iter().collect(),
        }
    }

    pub fn single() -> Self {
        Universe {
            name: "single".into(),
            alphabet: Alphabet::Integers,
            pieces: vec![Piece::Int(0)],
        }
    }

    /// Two integers at distance two, hence unrelated.
    pub fn unrelated_pair() -> Self {
        Universe {
            name: "unrelated".into(),
            alphabet: Alphabet::Integers,
            pieces: vec![Piece::Int(0), Piece::Int(2)],
        }
    }

    /// The blocks `{1,3}` and `{2,4}`.
    pub fn crossing_pair() -> Self {
        Universe {
            name: "crossing".into(),
            alphabet: Alphabet::Blocks,
            pieces: vec![Piece::block(&[1, 3]), Piece::block(&[2, 4])],
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "single" => Ok(Universe::single()),
            "unrelated" => Ok(Universe::unrelated_pair()),
            "crossing" => Ok(Universe::crossing_pair()),
            _ => {
                if let Some(m) = name.strip_prefix("blocks").and_then(|m| m.parse().ok()) {
                    Ok(Universe::blocks(m, 2))
                } else if let Some(n) = name.strip_prefix("paths").and_then(|n| n.parse().ok()) {
                    Ok(Universe::paths_of_sn(n))
                } else {
                    Err(domain(format!(
                        "unknown universe {name:?} (single, unrelated, crossing, blocksM, pathsN)"
                    )))
                }
            }
        }
    }
}

type Monomial = Vec<u16>;
type Poly = BTreeMap<Monomial, BigRational>;

fn degree(m: &Monomial) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

fn monomial_of(universe: &Universe, pieces: &[Piece]) -> Monomial {
    let mut m = vec![0u16; universe.pieces.len()];
    for p in pieces {
        let i = universe.pieces.binary_search(p).expect("piece in universe");
        m[i] += 1;
    }
    m
}

fn poly_mul(a: &Poly, b: &Poly, dmax: usize) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            if degree(&m) <= dmax {
                *out.entry(m).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_add_scaled(acc: &mut Poly, p: &Poly, c: &BigRational) {
    for (m, x) in p {
        *acc.entry(m.clone()).or_insert_with(BigRational::zero) += x * c;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn poly_one(vars: usize) -> Poly {
    Poly::from([(vec![0; vars], BigRational::one())])
}

/// Multisets of universe indices of size `d`, as sorted index vectors.
fn multisets(vars: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(vars: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..vars {
            cur.push(i);
            go(vars, d, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(vars, d, 0, &mut Vec::new(), &mut out);
    out
}

/// Heap and pyramid generating polynomials of a universe, truncated at
/// total degree `dmax`, with the trivial-heap polynomial.
struct Expansion {
    vars: usize,
    heaps: Poly,
    pyramids_weighted: Poly,
    trivial_signed: Poly,
}

fn expand(universe: &Universe, dmax: usize, limits: &Limits) -> Result<Expansion> {
    limits::check_usize("total degree", dmax, limits.degree)?;
    let vars = universe.pieces.len();
    let words = (vars as u64).checked_pow(dmax as u32).unwrap_or(u64::MAX);
    limits::check("words of maximal degree", words, limits.tuple_count)?;
    let unbounded = Limits::unbounded();
    let mut heaps = poly_one(vars);
    let mut pyramids_weighted = Poly::new();
    for d in 1..=dmax {
        for ms in multisets(vars, d) {
            let content: Vec<Piece> = ms.iter().map(|&i| universe.pieces[i].clone()).collect();
            let found = enumerate_heaps(&content, &universe.alphabet, &unbounded)?;
            let m = monomial_of(universe, &content);
            let pyramids = found.iter().filter(|h| h.is_pyramid()).count();
            heaps.insert(m.clone(), BigRational::from_integer(BigInt::from(found.len())));
            if pyramids > 0 {
                pyramids_weighted.insert(
                    m,
                    BigRational::new(BigInt::from(pyramids), BigInt::from(d)),
                );
            }
        }
    }
    // trivial heaps: sets of distinct, pairwise unrelated pieces
    let mut trivial_signed = Poly::new();
    let related = |i: usize, j: usize| {
        universe
            .alphabet
            .related(&universe.pieces[i], &universe.pieces[j])
    };
    fn subsets(
        vars: usize,
        dmax: usize,
        start: usize,
        cur: &mut Vec<usize>,
        related: &dyn Fn(usize, usize) -> bool,
        out: &mut Poly,
    ) {
        let mut m = vec![0u16; vars];
        for &i in cur.iter() {
            m[i] = 1;
        }
        let sign = if cur.len().is_multiple_of(2) { 1 } else { -1 };
        out.insert(m, BigRational::from_integer(BigInt::from(sign)));
        if cur.len() == dmax {
            return;
        }
        for i in start..vars {
            if cur.iter().all(|&j| !related(i, j)) {
                cur.push(i);
                subsets(vars, dmax, i + 1, cur, related, out);
                cur.pop();
            }
        }
    }
    subsets(vars, dmax, 0, &mut Vec::new(), &related, &mut trivial_signed);
    Ok(Expansion {
        vars,
        heaps,
        pyramids_weighted,
        trivial_signed,
    })
}

/// Outcome of a coefficient-by-coefficient identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub universe: String,
    pub dmax: usize,
    pub coefficients_checked: usize,
    /// First monomial (exponent vector over the sorted universe) whose two
    /// sides differ, with both values.
    pub first_mismatch: Option<(Vec<u16>, String, String)>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn compare(
    identity: &'static str,
    universe: &Universe,
    dmax: usize,
    lhs: &Poly,
    rhs: &Poly,
) -> IdentityReport {
    // every monomial up to dmax, so vanishing coefficients are compared too
    let vars = universe.pieces.len();
    let mut keys: BTreeSet<Monomial> = (0..=dmax)
        .flat_map(|d| multisets(vars, d))
        .map(|ms| {
            let mut m = vec![0u16; vars];
            for i in ms {
                m[i] += 1;
            }
            m
        })
        .collect();
    keys.extend(lhs.keys().chain(rhs.keys()).cloned());
    let zero = BigRational::zero();
    let first_mismatch = keys.iter().find_map(|m| {
        let a = lhs.get(m).unwrap_or(&zero);
        let b = rhs.get(m).unwrap_or(&zero);
        (a != b).then(|| (m.clone(), a.to_string(), b.to_string()))
    });
    IdentityReport {
        identity,
        universe: universe.name.clone(),
        dmax,
        coefficients_checked: keys.len(),
        first_mismatch,
    }
}

/// Checks `(Σ_T (-1)^|T| x^T) · (Σ_H x^H) = 1` up to total degree `dmax`.
pub fn verify_cf_inversion(universe: &Universe, dmax: usize, limits: &Limits) -> Result<IdentityReport> {
    let e = expand(universe, dmax, limits)?;
    let product = poly_mul(&e.trivial_signed, &e.heaps, dmax);
    Ok(compare("cartier-foata inversion", universe, dmax, &product, &poly_one(e.vars)))
}

fn poly_exp(p: &Poly, vars: usize, dmax: usize) -> Poly {
    // p has no constant term, so p^k vanishes beyond k = dmax
    let mut acc = poly_one(vars);
    let mut power = poly_one(vars);
    let mut fact = BigInt::one();
    for k in 1..=dmax {
        power = poly_mul(&power, p, dmax);
        fact *= BigInt::from(k);
        poly_add_scaled(&mut acc, &power, &BigRational::new(BigInt::one(), fact.clone()));
    }
    acc
}

fn poly_minus_log(p: &Poly, vars: usize, dmax: usize) -> Poly {
    // -log(1 + u) = Σ_k (-1)^k u^k / k
    let mut u = p.clone();
    u.remove(&vec![0; vars]);
    let mut acc = Poly::new();
    let mut power = poly_one(vars);
    for k in 1..=dmax {
        power = poly_mul(&power, &u, dmax);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        poly_add_scaled(&mut acc, &power, &BigRational::new(BigInt::from(sign), BigInt::from(k)));
    }
    acc
}

/// Checks `Σ_H x^H = exp(Σ_P x^P / |P|)` up to total degree `dmax`.
pub fn verify_exp_formula(universe: &Universe, dmax: usize, limits: &Limits) -> Result<IdentityReport> {
    let e = expand(universe, dmax, limits)?;
    let rhs = poly_exp(&e.pyramids_weighted, e.vars, dmax);
    Ok(compare("exponential formula", universe, dmax, &e.heaps, &rhs))
}

/// Checks `Σ_P x^P / |P| = -log(Σ_T (-1)^|T| x^T)` up to total degree `dmax`.
pub fn verify_log_identity(universe: &Universe, dmax: usize, limits: &Limits) -> Result<IdentityReport> {
    let e = expand(universe, dmax, limits)?;
    let rhs = poly_minus_log(&e.trivial_signed, e.vars, dmax);
    Ok(compare("pyramid logarithm", universe, dmax, &e.pyramids_weighted, &rhs))
}

/// Counts of the paths heaps for `n`, grouped by permutation; used to cross
/// check the forest and pair bijections.
pub fn heaps_of_permutation(sigma: &Permutation) -> Result<BTreeSet<Heap>> {
    enumerate_heaps(
        &structures::paths_of_permutation(sigma),
        &Alphabet::Paths,
        &Limits::unbounded(),
    )
}
