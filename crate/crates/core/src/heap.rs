//! Heaps of pieces and the Cartier-Foata monoid.
//!
//! A heap is stored in its Foata normal form: a bottom-up sequence of layers,
//! each an antichain of pairwise unrelated pieces sorted by the piece order,
//! with every piece of layer `k + 1` related to some piece of layer `k`. Two
//! words give the same [`Heap`] exactly when they are equal in the monoid, so
//! heap equality is structural equality of the layers.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// A piece of one of the three built-in alphabets.
///
/// The derived order (integers by value, blocks and paths lexicographically)
/// is the piece order used to sort layers and emit canonical words.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Piece {
    Int(i64),
    /// Strictly increasing positive integers.
    Block(Vec<u32>),
    /// Positive integers, one per row of the path diagram.
    Path(Vec<u32>),
}

impl Piece {
    pub fn block(entries: &[u32]) -> Piece {
        Piece::Block(entries.to_vec())
    }

    pub fn path(entries: &[u32]) -> Piece {
        Piece::Path(entries.to_vec())
    }

    pub fn as_block(&self) -> Option<&[u32]> {
        match self {
            Piece::Block(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_path(&self) -> Option<&[u32]> {
        match self {
            Piece::Path(p) => Some(p),
            _ => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Piece::Int(i) => Value::from(*i),
            Piece::Block(v) | Piece::Path(v) => Value::from(v.clone()),
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(v: &[u32]) -> String {
            v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
        match self {
            Piece::Int(i) => write!(f, "{i}"),
            Piece::Block(b) => write!(f, "{{{}}}", join(b)),
            Piece::Path(p) => write!(f, "({})", join(p)),
        }
    }
}

/// A finite concurrence relation given by its list of related pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExplicitRelation {
    name: String,
    universe: Vec<Piece>,
    related: BTreeSet<(Piece, Piece)>,
}

/// A set of pieces with a symmetric reflexive concurrence relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alphabet {
    /// Integers, related when they differ by at most one.
    Integers,
    /// Blocks, related when their spans overlap.
    Blocks,
    /// Paths of equal length, related unless one strictly dominates the other
    /// in every coordinate.
    Paths,
    /// A finite universe with an explicit relation.
    Explicit(Arc<ExplicitRelation>),
}

impl Alphabet {
    /// Builds a finite alphabet. `pairs` is closed under symmetry and
    /// reflexivity, so only the nontrivial unordered pairs need be listed.
    pub fn explicit(
        name: impl Into<String>,
        universe: Vec<Piece>,
        pairs: impl IntoIterator<Item = (Piece, Piece)>,
    ) -> Result<Alphabet> {
        let set: BTreeSet<&Piece> = universe.iter().collect();
        let mut related = BTreeSet::new();
        for (a, b) in pairs {
            for p in [&a, &b] {
                if !set.contains(p) {
                    return Err(Error::NotInAlphabet {
                        piece: p.to_string(),
                        alphabet: "explicit".into(),
                    });
                }
            }
            related.insert((b.clone(), a.clone()));
            related.insert((a, b));
        }
        for p in &universe {
            related.insert((p.clone(), p.clone()));
        }
        Ok(Alphabet::Explicit(Arc::new(ExplicitRelation {
            name: name.into(),
            universe,
            related,
        })))
    }

    pub fn tag(&self) -> &str {
        match self {
            Alphabet::Integers => "integers",
            Alphabet::Blocks => "blocks",
            Alphabet::Paths => "paths",
            Alphabet::Explicit(rel) => &rel.name,
        }
    }

    pub fn from_tag(tag: &str) -> Result<Alphabet> {
        match tag {
            "integers" => Ok(Alphabet::Integers),
            "blocks" => Ok(Alphabet::Blocks),
            "paths" => Ok(Alphabet::Paths),
            other => Err(Error::Format(format!("unknown alphabet tag {other:?}"))),
        }
    }

    /// The finite universe, if the alphabet has one.
    pub fn universe(&self) -> Option<&[Piece]> {
        match self {
            Alphabet::Explicit(rel) => Some(&rel.universe),
            _ => None,
        }
    }

    pub fn contains(&self, piece: &Piece) -> bool {
        match (self, piece) {
            (Alphabet::Integers, Piece::Int(_)) => true,
            (Alphabet::Blocks, Piece::Block(b)) => {
                !b.is_empty() && b[0] >= 1 && b.windows(2).all(|w| w[0] < w[1])
            }
            (Alphabet::Paths, Piece::Path(p)) => !p.is_empty() && p.iter().all(|&x| x >= 1),
            (Alphabet::Explicit(rel), p) => rel.universe.contains(p),
            _ => false,
        }
    }

    /// The concurrence relation. Both pieces must belong to the alphabet (and,
    /// for paths, have the same length).
    pub fn related(&self, a: &Piece, b: &Piece) -> bool {
        match (self, a, b) {
            (Alphabet::Integers, Piece::Int(x), Piece::Int(y)) => x.abs_diff(*y) <= 1,
            (Alphabet::Blocks, Piece::Block(x), Piece::Block(y)) => {
                crate::structures::blocks_crossing(x, y)
            }
            (Alphabet::Paths, Piece::Path(x), Piece::Path(y)) => {
                crate::structures::paths_crossing(x, y).unwrap_or(true)
            }
            (Alphabet::Explicit(rel), a, b) => rel.related.contains(&(a.clone(), b.clone())),
            _ => true,
        }
    }

    fn check_word(&self, word: &[Piece]) -> Result<()> {
        for p in word {
            if !self.contains(p) {
                return Err(Error::NotInAlphabet {
                    piece: p.to_string(),
                    alphabet: self.tag().to_string(),
                });
            }
        }
        if let Alphabet::Paths = self {
            if let Some(first) = word.first() {
                let len = first.as_path().map_or(0, <[u32]>::len);
                for p in word {
                    let l = p.as_path().map_or(0, <[u32]>::len);
                    if l != len {
                        return Err(Error::LengthMismatch(len, l));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Position of a piece inside a heap: its layer (0 = bottom) and its index in
/// that layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Occurrence {
    pub layer: usize,
    pub position: usize,
}

impl Occurrence {
    pub fn new(layer: usize, position: usize) -> Self {
        Occurrence { layer, position }
    }
}

/// Result of comparing two occurrences in the heap order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `x <= y` (including `x == y`).
    Below,
    /// `y < x`.
    Above,
    Incomparable,
}

/// An element of the Cartier-Foata monoid, in Foata normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Heap {
    alphabet: Alphabet,
    layers: Vec<Vec<Piece>>,
}

impl Heap {
    pub fn empty(alphabet: Alphabet) -> Heap {
        Heap {
            alphabet,
            layers: Vec::new(),
        }
    }

    /// Drops the pieces of `word` one at a time: each lands one layer above
    /// the highest earlier piece it is related to.
    pub fn from_word(alphabet: &Alphabet, word: &[Piece]) -> Result<Heap> {
        alphabet.check_word(word)?;
        Ok(Heap::from_word_unchecked(alphabet, word))
    }

    pub(crate) fn from_word_unchecked(alphabet: &Alphabet, word: &[Piece]) -> Heap {
        let mut placed: Vec<(usize, &Piece)> = Vec::with_capacity(word.len());
        let mut layers: Vec<Vec<Piece>> = Vec::new();
        for piece in word {
            let level = placed
                .iter()
                .filter(|(_, q)| alphabet.related(piece, q))
                .map(|(l, _)| l + 1)
                .max()
                .unwrap_or(0);
            placed.push((level, piece));
            if level == layers.len() {
                layers.push(Vec::new());
            }
            layers[level].push(piece.clone());
        }
        for layer in &mut layers {
            layer.sort();
        }
        Heap {
            alphabet: alphabet.clone(),
            layers,
        }
    }

    /// Builds a heap from explicit layers, checking the normal-form
    /// conditions.
    pub fn from_layers(alphabet: &Alphabet, layers: Vec<Vec<Piece>>) -> Result<Heap> {
        let word: Vec<Piece> = layers.iter().flatten().cloned().collect();
        alphabet.check_word(&word)?;
        for (k, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::Format(format!("layer {k} is empty")));
            }
            if layer.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Format(format!("layer {k} is not sorted")));
            }
            for (i, a) in layer.iter().enumerate() {
                if layer[i + 1..].iter().any(|b| alphabet.related(a, b)) {
                    return Err(Error::Format(format!(
                        "layer {k} holds related pieces"
                    )));
                }
                if k > 0 && !layers[k - 1].iter().any(|b| alphabet.related(a, b)) {
                    return Err(Error::Format(format!(
                        "piece {a} in layer {k} rests on nothing"
                    )));
                }
            }
        }
        Ok(Heap {
            alphabet: alphabet.clone(),
            layers,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn layers(&self) -> &[Vec<Piece>] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Canonical word: layers bottom-up, each in piece order.
    pub fn word(&self) -> Vec<Piece> {
        self.layers.iter().flatten().cloned().collect()
    }

    /// Pieces as a sorted multiset.
    pub fn content(&self) -> Vec<Piece> {
        let mut v = self.word();
        v.sort();
        v
    }

    pub fn occurrences(&self) -> impl Iterator<Item = Occurrence> + '_ {
        self.layers.iter().enumerate().flat_map(|(l, layer)| {
            (0..layer.len()).map(move |p| Occurrence::new(l, p))
        })
    }

    pub fn piece(&self, occ: Occurrence) -> Result<&Piece> {
        self.layers
            .get(occ.layer)
            .and_then(|layer| layer.get(occ.position))
            .ok_or(Error::OccurrenceOutOfRange {
                layer: occ.layer,
                position: occ.position,
            })
    }

    /// Stacks `other` on top of `self`.
    pub fn compose(&self, other: &Heap) -> Result<Heap> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(
                self.alphabet.tag().to_string(),
                other.alphabet.tag().to_string(),
            ));
        }
        let mut word = self.word();
        word.extend(other.word());
        Heap::from_word(&self.alphabet, &word)
    }

    /// All occurrences `>= occ`.
    fn up_set(&self, occ: Occurrence) -> BTreeSet<Occurrence> {
        let mut seen = BTreeSet::from([occ]);
        let mut frontier = vec![occ];
        while let Some(x) = frontier.pop() {
            let px = &self.layers[x.layer][x.position];
            for (l, layer) in self.layers.iter().enumerate().skip(x.layer + 1) {
                for (p, py) in layer.iter().enumerate() {
                    let y = Occurrence::new(l, p);
                    if !seen.contains(&y) && self.alphabet.related(px, py) {
                        seen.insert(y);
                        frontier.push(y);
                    }
                }
            }
        }
        seen
    }

    /// All occurrences `<= occ`.
    pub fn down_set(&self, occ: Occurrence) -> Result<BTreeSet<Occurrence>> {
        self.piece(occ)?;
        let mut seen = BTreeSet::from([occ]);
        let mut frontier = vec![occ];
        while let Some(x) = frontier.pop() {
            let px = &self.layers[x.layer][x.position];
            for (l, layer) in self.layers.iter().enumerate().take(x.layer) {
                for (p, py) in layer.iter().enumerate() {
                    let y = Occurrence::new(l, p);
                    if !seen.contains(&y) && self.alphabet.related(px, py) {
                        seen.insert(y);
                        frontier.push(y);
                    }
                }
            }
        }
        Ok(seen)
    }

    pub fn order_relation(&self, x: Occurrence, y: Occurrence) -> Result<Comparison> {
        self.piece(x)?;
        self.piece(y)?;
        if self.up_set(x).contains(&y) {
            Ok(Comparison::Below)
        } else if self.up_set(y).contains(&x) {
            Ok(Comparison::Above)
        } else {
            Ok(Comparison::Incomparable)
        }
    }

    /// Occurrences with nothing above them.
    pub fn maximal_pieces(&self) -> Vec<Occurrence> {
        self.occurrences()
            .filter(|&x| {
                let px = &self.layers[x.layer][x.position];
                !self.layers[x.layer + 1..]
                    .iter()
                    .flatten()
                    .any(|py| self.alphabet.related(px, py))
            })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.layers.len() <= 1
    }

    pub fn is_pyramid(&self) -> bool {
        self.maximal_pieces().len() == 1
    }

    /// Cover relation of the heap poset, as `(lower, upper)` pairs.
    pub fn hasse_dag(&self) -> Vec<(Occurrence, Occurrence)> {
        let occs: Vec<Occurrence> = self.occurrences().collect();
        let ups: Vec<BTreeSet<Occurrence>> = occs.iter().map(|&x| self.up_set(x)).collect();
        let mut edges = Vec::new();
        for (i, &x) in occs.iter().enumerate() {
            for &y in &ups[i] {
                if y == x {
                    continue;
                }
                let covered = ups[i].iter().any(|&z| {
                    z != x && z != y && {
                        let k = occs.binary_search(&z).expect("occurrence list is sorted");
                        ups[k].contains(&y)
                    }
                });
                if !covered {
                    edges.push((x, y));
                }
            }
        }
        edges
    }

    /// Splits off the down-set of `occ`, returning it together with the heap
    /// of the remaining pieces. The original is the composition of the two.
    pub fn split_down_set(&self, occ: Occurrence) -> Result<(Heap, Heap)> {
        let below = self.down_set(occ)?;
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for x in self.occurrences() {
            let p = self.layers[x.layer][x.position].clone();
            if below.contains(&x) {
                lower.push(p);
            } else {
                upper.push(p);
            }
        }
        Ok((
            Heap::from_word_unchecked(&self.alphabet, &lower),
            Heap::from_word_unchecked(&self.alphabet, &upper),
        ))
    }

    /// Occurrence of the first piece (in layer order) satisfying `pred`.
    pub fn find(&self, mut pred: impl FnMut(&Piece) -> bool) -> Option<Occurrence> {
        self.occurrences()
            .find(|&x| pred(&self.layers[x.layer][x.position]))
    }

    /// JSON encoding: `{"alphabet": tag, "layers": [[piece, ...], ...]}`.
    pub fn to_json(&self) -> Value {
        let layers: Vec<Value> = self
            .layers
            .iter()
            .map(|layer| Value::Array(layer.iter().map(Piece::to_json).collect()))
            .collect();
        serde_json::json!({ "alphabet": self.alphabet.tag(), "layers": layers })
    }

    /// Reads the encoding of [`Heap::to_json`], or `{"alphabet": tag,
    /// "word": [piece, ...]}` for a heap given by any of its words.
    pub fn from_json(value: &Value) -> Result<Heap> {
        let raw: RawHeap = serde_json::from_value(value.clone())?;
        let alphabet = Alphabet::from_tag(&raw.alphabet)?;
        let raw_layers = match (raw.layers, raw.word) {
            (Some(layers), None) => layers,
            (None, Some(word)) => {
                let pieces = word
                    .iter()
                    .map(|v| piece_from_json(&alphabet, v))
                    .collect::<Result<Vec<_>>>()?;
                return Heap::from_word(&alphabet, &pieces);
            }
            _ => return Err(Error::Format("give exactly one of \"layers\" and \"word\"".into())),
        };
        let mut layers = Vec::with_capacity(raw_layers.len());
        for layer in raw_layers {
            let mut pieces = Vec::with_capacity(layer.len());
            for v in layer {
                pieces.push(piece_from_json(&alphabet, &v)?);
            }
            layers.push(pieces);
        }
        Heap::from_layers(&alphabet, layers)
    }

    /// Graphviz rendering of the cover relation, one node per occurrence
    /// labelled by its piece.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph heap {\n  rankdir=BT;\n");
        for x in self.occurrences() {
            out.push_str(&format!(
                "  n{}_{} [label=\"{}\"];\n",
                x.layer, x.position, self.layers[x.layer][x.position]
            ));
        }
        for (a, b) in self.hasse_dag() {
            out.push_str(&format!(
                "  n{}_{} -> n{}_{};\n",
                a.layer, a.position, b.layer, b.position
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Deserialize)]
struct RawHeap {
    alphabet: String,
    layers: Option<Vec<Vec<Value>>>,
    word: Option<Vec<Value>>,
}

fn piece_from_json(alphabet: &Alphabet, v: &Value) -> Result<Piece> {
    let bad = || Error::Format(format!("bad piece {v} for the {} alphabet", alphabet.tag()));
    let ints = || -> Result<Vec<u32>> {
        v.as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(bad))
            .collect()
    };
    match alphabet {
        Alphabet::Integers => v.as_i64().map(Piece::Int).ok_or_else(bad),
        Alphabet::Blocks => Ok(Piece::block(&ints()?)),
        Alphabet::Paths => Ok(Piece::Path(ints()?)),
        Alphabet::Explicit(_) => Err(bad()),
    }
}

/// Free-function forms of the heap operations.
pub fn heap_from_word(word: &[Piece], alphabet: &Alphabet) -> Result<Heap> {
    Heap::from_word(alphabet, word)
}

pub fn word_of_heap(h: &Heap) -> Vec<Piece> {
    h.word()
}

pub fn compose(h1: &Heap, h2: &Heap) -> Result<Heap> {
    h1.compose(h2)
}
