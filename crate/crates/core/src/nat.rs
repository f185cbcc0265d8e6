//! Non-ambiguous trees and forests as finite sets of lattice points.
//!
//! Every non-root point has a nearest predecessor either above it in its
//! column (same `x1`, smaller `x2`) or to its left in its row (same `x2`,
//! smaller `x1`), never both. The column predecessor makes the point a left
//! child, the row predecessor a right child. Coordinates are 0-based; the
//! bijections shift them by one internally.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::limits::{self, Limits};
use crate::structures::Permutation;

pub type Point = (u32, u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Tree,
    Forest,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "tree" => Ok(Mode::Tree),
            "forest" => Ok(Mode::Forest),
            _ => Err(Error::Format(format!("mode must be tree or forest, got {s:?}"))),
        }
    }
}

/// A set of lattice points read either as a tree or as a forest.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet {
    points: BTreeSet<Point>,
    mode: Mode,
}

impl PointSet {
    /// Rejects repeated points; everything else is left to the validators.
    pub fn new(points: impl IntoIterator<Item = Point>, mode: Mode) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if !set.insert(p) {
                return Err(Error::InvalidPointSet(format!("duplicate point {p:?}")));
            }
        }
        Ok(PointSet { points: set, mode })
    }

    pub(crate) fn from_set(points: BTreeSet<Point>, mode: Mode) -> Self {
        PointSet { points, mode }
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn with_mode(&self, mode: Mode) -> PointSet {
        PointSet { points: self.points.clone(), mode }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.contains(&p)
    }

    /// Nearest point above `p` in its column.
    fn above(&self, p: Point) -> Option<Point> {
        self.points
            .range((p.0, 0)..(p.0, p.1))
            .next_back()
            .copied()
    }

    /// Nearest point left of `p` in its row.
    fn left_of(&self, p: Point) -> Option<Point> {
        self.points
            .iter()
            .filter(|q| q.1 == p.1 && q.0 < p.0)
            .max()
            .copied()
    }

    fn no_empty_line(&self) -> bool {
        let xs: BTreeSet<u32> = self.points.iter().map(|p| p.0).collect();
        let ys: BTreeSet<u32> = self.points.iter().map(|p| p.1).collect();
        let dense = |s: &BTreeSet<u32>| s.iter().enumerate().all(|(i, &v)| i as u32 == v);
        dense(&xs) && dense(&ys)
    }

    /// Parses one point per line as `x1 x2`; blank lines and `#` comments
    /// are skipped.
    pub fn parse_text(text: &str, mode: Mode) -> Result<Self> {
        let mut points = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            let coords: Vec<u32> = parts
                .iter()
                .map(|s| s.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Format(format!("bad point line {line:?}")))?;
            if coords.len() != 2 {
                return Err(Error::Format(format!("expected two coordinates in {line:?}")));
            }
            points.push((coords[0], coords[1]));
        }
        PointSet::new(points, mode)
    }

    pub fn to_text(&self) -> String {
        self.points.iter().map(|(x, y)| format!("{x} {y}\n")).collect()
    }

    /// `{"mode": "tree", "points": [[x1, x2], ...]}`.
    pub fn to_json(&self) -> Value {
        let pts: Vec<[u32; 2]> = self.points.iter().map(|&(x, y)| [x, y]).collect();
        json!({ "mode": self.mode, "points": pts })
    }

    /// Accepts the object written by [`PointSet::to_json`] or a bare list of
    /// pairs, in which case `default_mode` applies.
    pub fn from_json(value: &Value, default_mode: Mode) -> Result<Self> {
        let (mode, pts) = match value {
            Value::Array(_) => (default_mode, value.clone()),
            Value::Object(map) => {
                let mode = match map.get("mode") {
                    Some(m) => serde_json::from_value(m.clone())?,
                    None => default_mode,
                };
                let pts = map
                    .get("points")
                    .cloned()
                    .ok_or_else(|| Error::Format("missing \"points\"".into()))?;
                (mode, pts)
            }
            _ => return Err(Error::Format("expected a point list or object".into())),
        };
        let pairs: Vec<(u32, u32)> = serde_json::from_value(pts)?;
        PointSet::new(pairs, mode)
    }

    pub fn to_dot(&self) -> Result<String> {
        let f = underlying_forest(self)?;
        let mut out = String::from("digraph nat {\n");
        for (x, y) in &self.points {
            out.push_str(&format!("  \"{x},{y}\" [label=\"({x},{y})\"];\n"));
        }
        for (edges, side) in [(&f.left, "L"), (&f.right, "R")] {
            for (parent, child) in edges {
                out.push_str(&format!(
                    "  \"{},{}\" -> \"{},{}\" [label=\"{side}\"];\n",
                    parent.0, parent.1, child.0, child.1
                ));
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(|(x, y)| format!("({x},{y})")).collect();
        write!(f, "{{{}}}", pts.join(","))
    }
}

/// True iff `ps` is a non-ambiguous tree: it contains the root `(0,0)`,
/// every other point has a predecessor in its column or in its row but not
/// both, and no row or column between two points is empty.
pub fn validate_nat(ps: &PointSet) -> bool {
    ps.contains((0, 0))
        && ps.no_empty_line()
        && ps
            .points
            .iter()
            .filter(|&&p| p != (0, 0))
            .all(|&p| ps.above(p).is_some() != ps.left_of(p).is_some())
}

/// True iff `ps` is a non-ambiguous forest: no point has predecessors in
/// both its column and its row, and no line is empty. Points with neither
/// are roots.
pub fn validate_naf(ps: &PointSet) -> bool {
    ps.no_empty_line()
        && ps
            .points
            .iter()
            .all(|&p| ps.above(p).is_none() || ps.left_of(p).is_none())
}

fn validate(ps: &PointSet) -> Result<()> {
    let ok = match ps.mode {
        Mode::Tree => validate_nat(ps),
        Mode::Forest => validate_naf(ps),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidPointSet(format!("{ps} is not a non-ambiguous {:?}", ps.mode).to_lowercase()))
    }
}

/// The binary forest carried by a valid point set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Forest {
    /// Non-root points mapped to their parents.
    pub parents: BTreeMap<Point, Point>,
    /// Parent to column child.
    pub left: BTreeMap<Point, Point>,
    /// Parent to row child.
    pub right: BTreeMap<Point, Point>,
    /// Roots, ordered by point.
    pub roots: Vec<Point>,
}

impl Forest {
    pub fn children(&self, p: Point) -> usize {
        self.left.contains_key(&p) as usize + self.right.contains_key(&p) as usize
    }

    /// Points of the subtree rooted at `p`.
    pub fn subtree(&self, p: Point) -> BTreeSet<Point> {
        let mut out = BTreeSet::new();
        let mut stack = vec![p];
        while let Some(q) = stack.pop() {
            out.insert(q);
            stack.extend(self.left.get(&q));
            stack.extend(self.right.get(&q));
        }
        out
    }
}

/// Recovers the parent structure; errors if `ps` fails its mode's validator.
pub fn underlying_forest(ps: &PointSet) -> Result<Forest> {
    validate(ps)?;
    let mut f = Forest::default();
    for &p in &ps.points {
        if let Some(q) = ps.above(p) {
            f.parents.insert(p, q);
            f.left.insert(q, p);
        } else if let Some(s) = ps.left_of(p) {
            f.parents.insert(p, s);
            f.right.insert(s, p);
        } else {
            f.roots.push(p);
        }
    }
    Ok(f)
}

/// The parent map alone.
pub fn parent_map(ps: &PointSet) -> Result<BTreeMap<Point, Point>> {
    Ok(underlying_forest(ps)?.parents)
}

pub fn is_complete(ps: &PointSet) -> Result<bool> {
    let f = underlying_forest(ps)?;
    Ok(ps.points.iter().all(|&p| f.children(p) != 1))
}

pub fn leaves(ps: &PointSet) -> Result<Vec<Point>> {
    let f = underlying_forest(ps)?;
    Ok(ps.points.iter().copied().filter(|&p| f.children(p) == 0).collect())
}

/// The permutation `σ` whose graph `(i, σ(i))` is the set of leaves shifted
/// by one; errors unless the leaves occupy each row and column once.
pub fn leaf_permutation(ps: &PointSet) -> Result<Permutation> {
    let ls = leaves(ps)?;
    let mut values = vec![0u32; ls.len()];
    for &(x, y) in &ls {
        let slot = values
            .get_mut(x as usize)
            .ok_or_else(|| Error::InvalidPointSet(format!("leaf ({x},{y}) outside the leaf box")))?;
        if *slot != 0 {
            return Err(Error::InvalidPointSet(format!("two leaves in column {x}")));
        }
        *slot = y + 1;
    }
    Permutation::new(values).map_err(|_| Error::InvalidPointSet("leaves do not form a permutation".into()))
}

fn box_subsets(n: usize, sizes: std::ops::RangeInclusive<usize>, with_origin: bool) -> Vec<BTreeSet<Point>> {
    let cells: Vec<Point> = (0..n as u32)
        .flat_map(|x| (0..n as u32).map(move |y| (x, y)))
        .filter(|&p| !with_origin || p != (0, 0))
        .collect();
    let mut out = Vec::new();
    fn go(
        cells: &[Point],
        start: usize,
        want: usize,
        cur: &mut Vec<Point>,
        out: &mut Vec<BTreeSet<Point>>,
        base: &BTreeSet<Point>,
    ) {
        if cur.len() == want {
            let mut s = base.clone();
            s.extend(cur.iter().copied());
            out.push(s);
            return;
        }
        for i in start..cells.len() {
            if cells.len() - i < want - cur.len() {
                break;
            }
            cur.push(cells[i]);
            go(cells, i + 1, want, cur, out, base);
            cur.pop();
        }
    }
    let base: BTreeSet<Point> = if with_origin { BTreeSet::from([(0, 0)]) } else { BTreeSet::new() };
    for size in sizes {
        let want = size - base.len();
        go(&cells, 0, want, &mut Vec::new(), &mut out, &base);
    }
    out
}

/// All complete non-ambiguous trees with `n` leaves, by exhaustive search
/// over `(2n-1)`-point subsets of the `[0, n-1]^2` box.
pub fn enumerate_complete_nats(n: usize, limits: &Limits) -> Result<Vec<PointSet>> {
    limits::check_usize("tree leaves", n, limits.nat_leaves)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<PointSet> = box_subsets(n, 2 * n - 1..=2 * n - 1, true)
        .into_iter()
        .map(|s| PointSet::from_set(s, Mode::Tree))
        .filter(|ps| validate_nat(ps) && is_complete(ps).unwrap_or(false))
        .collect();
    out.sort();
    Ok(out)
}

/// All complete non-ambiguous forests with `n` leaves inside the
/// `[0, n-1]^2` box. A forest of `k` complete trees has `2n - k` points.
pub fn enumerate_complete_nafs(n: usize, limits: &Limits) -> Result<Vec<PointSet>> {
    limits::check_usize("forest leaves", n, limits.naf_leaves)?;
    if n == 0 {
        return Ok(vec![PointSet::from_set(BTreeSet::new(), Mode::Forest)]);
    }
    let mut out: Vec<PointSet> = box_subsets(n, n..=2 * n - 1, false)
        .into_iter()
        .map(|s| PointSet::from_set(s, Mode::Forest))
        .filter(|ps| {
            validate_naf(ps)
                && is_complete(ps).unwrap_or(false)
                && leaves(ps).map(|l| l.len() == n).unwrap_or(false)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Complete trees (or forests, by `mode`) whose leaves shifted by one are
/// exactly the graph of `sigma`. Searches only over internal points, so it
/// reaches larger `n` than the box enumerators.
pub fn complete_with_leaves(sigma: &Permutation, mode: Mode) -> Vec<PointSet> {
    let n = sigma.len();
    let leaf_set: BTreeSet<Point> = (1..=n as u32).map(|i| (i - 1, sigma.apply(i) - 1)).collect();
    let cells: Vec<Point> = (0..n as u32)
        .flat_map(|x| (0..n as u32).map(move |y| (x, y)))
        .filter(|p| !leaf_set.contains(p))
        .collect();
    let internal = match mode {
        Mode::Tree => n.saturating_sub(1)..=n.saturating_sub(1),
        Mode::Forest => 0..=n.saturating_sub(1),
    };
    let mut out = Vec::new();
    for k in internal {
        let mut pick: Vec<usize> = (0..k).collect();
        loop {
            let mut pts = leaf_set.clone();
            pts.extend(pick.iter().map(|&i| cells[i]));
            let ps = PointSet::from_set(pts, mode);
            let valid = match mode {
                Mode::Tree => validate_nat(&ps),
                Mode::Forest => validate_naf(&ps),
            };
            if valid && leaves(&ps).is_ok_and(|l| l.into_iter().collect::<BTreeSet<_>>() == leaf_set)
                && is_complete(&ps).unwrap_or(false)
            {
                out.push(ps);
            }
            // next k-combination of the cell indices
            let Some(i) = (0..k).rev().find(|&i| pick[i] < cells.len() - k + i) else {
                break;
            };
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    out.sort();
    out
}
