use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};

use piecework::bijections::*;
use piecework::{Heap, Mode, Permutation, PointSet};

use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    G,
    Q,
    S,
    Pairs,
}

// variant names double as the `to-*` flag values
#[allow(clippy::enum_variant_names)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToPyramid,
    ToPerm,
    ToNat,
    ToHeap,
    ToNaf,
    ToPair,
}

/// What a map produced, kept around for DOT export.
pub enum Image {
    Heap(Heap),
    Points(PointSet),
    None,
}

impl Image {
    pub fn to_dot(&self) -> Result<Option<String>> {
        Ok(match self {
            Image::Heap(h) => Some(h.to_dot()),
            Image::Points(p) => Some(p.to_dot()?),
            Image::None => None,
        })
    }
}

/// `--input` is a file path if one exists, otherwise the text itself.
pub fn read_input(input: &str) -> Result<String> {
    let path = std::path::Path::new(input);
    if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("reading {input}"))
    } else {
        Ok(input.to_string())
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).context("input is not valid JSON")
}

fn parse_heap(text: &str) -> Result<Heap> {
    Ok(Heap::from_json(&parse_json(text)?)?)
}

fn parse_perm(text: &str) -> Result<Permutation> {
    let t = text.trim();
    if t.starts_with('[') {
        let values: Vec<u32> = serde_json::from_str(t).context("permutation must be a list of integers")?;
        Ok(Permutation::new(values)?)
    } else {
        Ok(Permutation::parse(t)?)
    }
}

/// JSON (object or bare list) or the "x1 x2" line format.
fn parse_points(text: &str, mode: Mode) -> Result<PointSet> {
    let t = text.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        Ok(PointSet::from_json(&parse_json(t)?, mode)?.with_mode(mode))
    } else {
        Ok(PointSet::parse_text(text, mode)?)
    }
}

/// `{"pi": .., "xi": ..}` or two permutations separated by whitespace,
/// a comma or a semicolon.
fn parse_pair(text: &str) -> Result<(Permutation, Permutation)> {
    let t = text.trim();
    if t.starts_with('{') {
        let v = parse_json(t)?;
        let get = |k: &str| -> Result<Permutation> {
            match v.get(k) {
                Some(Value::String(s)) => parse_perm(s),
                Some(other) => parse_perm(&other.to_string()),
                None => bail!("pair is missing {k:?}"),
            }
        };
        return Ok((get("pi")?, get("xi")?));
    }
    let parts: Vec<&str> = t
        .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
        .filter(|s| !s.is_empty())
        .collect();
    match parts.as_slice() {
        [pi, xi] => Ok((parse_perm(pi)?, parse_perm(xi)?)),
        _ => bail!("expected two permutations, e.g. \"54132 21543\""),
    }
}

pub fn flag(v: impl ValueEnum) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn perm_json(p: &Permutation) -> Value {
    json!(p.values())
}

pub fn run(which: Which, direction: Direction, text: &str, r: Option<usize>, report: &mut Report) -> Result<Image> {
    use Direction::*;
    use Which::*;
    let image = match (which, direction) {
        (G, ToPyramid) => {
            let r = r.context("--r is required for g to-pyramid")?;
            let p = parse_perm(text)?;
            let h = g_perm_to_pyramid(&p, r)?;
            let back = g_pyramid_to_perm(&h)?;
            report.values = h.to_json();
            report.check("is a pyramid", h.is_pyramid(), true);
            report.check(
                "round trip",
                json!({ "permutation": perm_json(&back.0), "r": back.1 }),
                json!({ "permutation": perm_json(&p), "r": r }),
            );
            Image::Heap(h)
        }
        (G, ToPerm) => {
            let h = parse_heap(text)?;
            let (p, r) = g_pyramid_to_perm(&h)?;
            report.values = json!({ "permutation": perm_json(&p), "r": r });
            report.check("round trip", g_perm_to_pyramid(&p, r)?.to_json(), h.to_json());
            Image::None
        }
        (Q, ToPyramid) => {
            let t = parse_points(text, Mode::Tree)?;
            let h = q_nat_to_pyramid(&t)?;
            report.values = h.to_json();
            report.check("round trip", q_pyramid_to_nat(&h)?.to_json(), t.to_json());
            Image::Heap(h)
        }
        (Q, ToNat) => {
            let h = parse_heap(text)?;
            let t = q_pyramid_to_nat(&h)?;
            report.values = t.to_json();
            report.check("round trip", q_nat_to_pyramid(&t)?.to_json(), h.to_json());
            Image::Points(t)
        }
        (S, ToHeap) => {
            let f = parse_points(text, Mode::Forest)?;
            let h = s_naf_to_heap(&f)?;
            report.values = h.to_json();
            report.check("round trip", s_heap_to_naf(&h)?.to_json(), f.to_json());
            Image::Heap(h)
        }
        (S, ToNaf) => {
            let h = parse_heap(text)?;
            let f = s_heap_to_naf(&h)?;
            report.values = f.to_json();
            report.check("round trip", s_naf_to_heap(&f)?.to_json(), h.to_json());
            Image::Points(f)
        }
        (Pairs, ToHeap) => {
            let (pi, xi) = parse_pair(text)?;
            let h = pair_to_heap(&pi, &xi)?;
            let (pi2, xi2) = heap_to_pair(&h)?;
            report.values = json!({ "heap": h.to_json(), "sigma": perm_json(&permutation_of_paths(&h)?) });
            report.check(
                "round trip",
                json!({ "pi": perm_json(&pi2), "xi": perm_json(&xi2) }),
                json!({ "pi": perm_json(&pi), "xi": perm_json(&xi) }),
            );
            Image::Heap(h)
        }
        (Pairs, ToPair) => {
            let h = parse_heap(text)?;
            let (pi, xi) = heap_to_pair(&h)?;
            report.values = json!({ "pi": perm_json(&pi), "xi": perm_json(&xi) });
            report.check("round trip", pair_to_heap(&pi, &xi)?.to_json(), h.to_json());
            Image::None
        }
        _ => bail!(
            "direction {} does not apply to {}; use g: to-pyramid|to-perm, \
             q: to-pyramid|to-nat, s: to-heap|to-naf, pairs: to-heap|to-pair",
            flag(direction),
            flag(which)
        ),
    };
    Ok(image)
}
