//! One line per acceptance criterion. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use piecework::bijections::*;
use piecework::enumerate::*;
use piecework::heap::{heap_from_word, word_of_heap};
use piecework::nat::{complete_with_leaves, enumerate_complete_nafs, enumerate_complete_nats};
use piecework::posets::{verify_mobius, Family};
use piecework::series::*;
use piecework::structures::{all_permutations, perms_with_descent_set, regular_descent_set};
use piecework::{Alphabet, Heap, Limits, Mode, Permutation, Piece};

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn limits() -> Limits {
    Limits {
        nat_leaves: 4,
        naf_leaves: 4,
        ..Limits::default()
    }
}

fn sequence_values() -> Outcome {
    let blocks = r_sequence(&SequenceSpec::Blocks(2), 4).map_err(err)?;
    check(blocks == ints(&[1, 2, 16, 272]), format!("blocks(2): {blocks:?}"))?;
    let rp = r_sequence(&SequenceSpec::RPartitions(2), 4).map_err(err)?;
    check(rp == ints(&[1, 1, 4, 33]), format!("rpartitions(2): {rp:?}"))?;
    let rp3 = r_sequence(&SequenceSpec::RPartitions(3), 2).map_err(err)?;
    check(rp3.last() == Some(&BigInt::from(3)), format!("rpartitions(3): {rp3:?}"))?;
    Ok("1 2 16 272 | 1 1 4 33 | r_2 = 3 for r = 3".into())
}

fn descent_classes() -> Outcome {
    let l = limits();
    let mut seen = Vec::new();
    for (r, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let perms = perms_with_descent_set(r * n - 1, &regular_descent_set(n, r), &l).map_err(err)?.len();
        let pyramids = count_pyramids_blocks(n, r, true, &l).map_err(err)?;
        let series = r_sequence(&SequenceSpec::Blocks(r), n).map_err(err)?[n - 1].clone();
        check(
            BigInt::from(perms) == series && BigInt::from(pyramids) == series,
            format!("(r,n)=({r},{n}): perms {perms}, pyramids {pyramids}, series {series}"),
        )?;
        seen.push(format!("({r},{n})={series}"));
    }
    Ok(seen.join(" "))
}

fn trees() -> Outcome {
    let l = limits();
    let series = r_sequence(&SequenceSpec::RPartitions(2), 4).map_err(err)?;
    let mut seen = Vec::new();
    for n in 1..=4 {
        let nats = enumerate_complete_nats(n, &l).map_err(err)?.len();
        let pyramids = count_pyramids_paths(n, 2, true, &l).map_err(err)?;
        check(
            BigInt::from(nats) == series[n - 1] && BigInt::from(pyramids) == series[n - 1],
            format!("n={n}: trees {nats}, pyramids {pyramids}, series {}", series[n - 1]),
        )?;
        seen.push(nats.to_string());
    }
    Ok(seen.join(" "))
}

fn forests() -> Outcome {
    let l = limits();
    let tau = tau_sequence(4).map_err(err)?;
    let mut seen = Vec::new();
    for n in 1..=3 {
        let nafs = enumerate_complete_nafs(n, &l).map_err(err)?.len() as u64;
        let heaps = count_heaps_paths(n, &l).map_err(err)?;
        let omega = omega_bruteforce(n, &l).map_err(err)?;
        check(
            BigInt::from(nafs) == tau[n - 1] && heaps == nafs && omega == nafs,
            format!("n={n}: forests {nafs}, heaps {heaps}, omega {omega}, tau {}", tau[n - 1]),
        )?;
        seen.push(nafs.to_string());
    }
    let omega4 = omega_bruteforce(4, &l).map_err(err)?;
    check(
        tau[3] == BigInt::from(211) && omega4 == 211,
        format!("n=4: tau {}, omega {omega4}", tau[3]),
    )?;
    seen.push("211".into());
    Ok(seen.join(" "))
}

fn mobius() -> Outcome {
    let l = limits();
    let mut seen = Vec::new();
    for family in [Family::Blocks, Family::RPartitions] {
        for n in 1..=3 {
            let rep = verify_mobius(family, n, 2, &l).map_err(err)?;
            check(rep.matches, format!("{family:?} n={n}: mu {}, r_n {}", rep.mobius, rep.r_n))?;
            seen.push(rep.mobius.to_string());
        }
    }
    Ok(format!("mu = {}", seen.join(" ")))
}

fn identities() -> Outcome {
    let l = limits();
    let cases = [
        (Universe::blocks(4, 2), 3),
        (Universe::paths_of_sn(2), 3),
        (Universe::single(), 4),
    ];
    let mut coefficients = 0;
    for (u, d) in cases {
        for rep in [verify_cf_inversion(&u, d, &l), verify_exp_formula(&u, d, &l)] {
            let rep = rep.map_err(err)?;
            check(rep.holds(), format!("{} over {}: {:?}", rep.identity, u.name, rep.first_mismatch))?;
            coefficients += rep.coefficients_checked;
        }
    }
    Ok(format!("{coefficients} coefficients"))
}

fn perm(s: &str) -> Permutation {
    Permutation::parse(s).expect("literal permutation")
}

fn bijections() -> Outcome {
    let l = limits();
    let mut count = 0usize;
    // g on every descent class with rn - 1 <= 8
    for r in 2..=9usize {
        for n in 1..=9 / r {
            for p in perms_with_descent_set(r * n - 1, &regular_descent_set(n, r), &l).map_err(err)? {
                let h = g_perm_to_pyramid(&p, r).map_err(err)?;
                check(g_pyramid_to_perm(&h).map_err(err)? == (p.clone(), r), format!("g at {p}"))?;
                count += 1;
            }
        }
        for n in 1..=8 / r {
            for h in pyramids_blocks(n, r, true, &l).map_err(err)? {
                let (p, _) = g_pyramid_to_perm(&h).map_err(err)?;
                check(g_perm_to_pyramid(&p, r).map_err(err)? == h, format!("g inverse at {p}"))?;
            }
        }
    }
    // q and s for n <= 4
    for n in 1..=4 {
        for t in enumerate_complete_nats(n, &l).map_err(err)? {
            check(q_pyramid_to_nat(&q_nat_to_pyramid(&t).map_err(err)?).map_err(err)? == t, format!("q at {t}"))?;
            count += 1;
        }
        for p in pyramids_paths(n, 2, true, &l).map_err(err)? {
            check(q_nat_to_pyramid(&q_pyramid_to_nat(&p).map_err(err)?).map_err(err)? == p, "q inverse")?;
        }
        for f in enumerate_complete_nafs(n, &l).map_err(err)? {
            check(s_heap_to_naf(&s_naf_to_heap(&f).map_err(err)?).map_err(err)? == f, format!("s at {f}"))?;
            count += 1;
        }
        for h in heaps_paths(n, &l).map_err(err)? {
            check(s_naf_to_heap(&s_heap_to_naf(&h).map_err(err)?).map_err(err)? == h, "s inverse")?;
        }
    }
    // pairs for n <= 5
    for n in 1..=5 {
        let perms = all_permutations(n);
        let mut images = BTreeSet::new();
        for pi in &perms {
            for xi in &perms {
                if has_common_rise(pi.values(), xi.values()) {
                    continue;
                }
                let h = pair_to_heap(pi, xi).map_err(err)?;
                check(heap_to_pair(&h).map_err(err)? == (pi.clone(), xi.clone()), format!("pair ({pi},{xi})"))?;
                images.insert(h);
                count += 1;
            }
        }
        let heaps: BTreeSet<Heap> = heaps_paths(n, &l).map_err(err)?.into_iter().collect();
        check(images == heaps, format!("pair images at n={n}"))?;
    }

    // golden: the 14-letter permutation with r = 3
    let big = Permutation::new(vec![6, 8, 12, 9, 13, 14, 1, 2, 5, 3, 10, 11, 4, 7]).map_err(err)?;
    let h = g_perm_to_pyramid(&big, 3).map_err(err)?;
    let top = h.piece(h.maximal_pieces()[0]).map_err(err)?.clone();
    let content: BTreeSet<Piece> = h.content().into_iter().collect();
    let expected: BTreeSet<Piece> = [&[6, 8, 12][..], &[9, 13, 14], &[1, 2, 5], &[3, 10, 11], &[4, 7, 15]]
        .iter()
        .map(|b| Piece::block(b))
        .collect();
    check(
        h.is_pyramid() && top == Piece::block(&[4, 7, 15]) && content == expected,
        "14-letter pyramid",
    )?;
    check(g_pyramid_to_perm(&h).map_err(err)? == (big, 3), "14-letter inverse")?;

    // golden: trees with leaves 53412 give pyramids topped by (1,5)
    let sigma = perm("53412");
    let five = complete_with_leaves(&sigma, Mode::Tree);
    check(!five.is_empty(), "no tree with leaves 53412")?;
    for t in &five {
        let p = q_nat_to_pyramid(t).map_err(err)?;
        let top = p.piece(p.maximal_pieces()[0]).map_err(err)?;
        check(
            top == &Piece::path(&[1, 5]) && permutation_of_paths(&p).map_err(err)? == sigma,
            format!("tree {t}"),
        )?;
        check(&q_pyramid_to_nat(&p).map_err(err)? == t, format!("tree {t} inverse"))?;
    }

    // golden: the pair (54132, 21543)
    let h = pair_to_heap(&perm("54132"), &perm("21543")).map_err(err)?;
    check(permutation_of_paths(&h).map_err(err)? == sigma, "pair heap is not over 53412")?;
    check(heap_to_pair(&h).map_err(err)? == (perm("54132"), perm("21543")), "pair round trip")?;
    let forest = s_heap_to_naf(&h).map_err(err)?;
    check(s_naf_to_heap(&forest).map_err(err)? == h, "forest round trip")?;

    // golden: word round trip and concatenation
    let x = |i: i64| Piece::Int(i);
    let word: Vec<Piece> = [2, 1, 3, 2, 4, 4, 3, 5, 3].into_iter().map(x).collect();
    let h1 = heap_from_word(&word, &Alphabet::Integers).map_err(err)?;
    let layers: Vec<Vec<Piece>> = vec![vec![x(2)], vec![x(1), x(3)], vec![x(2), x(4)], vec![x(4)], vec![x(3), x(5)], vec![x(3)]];
    check(h1.layers() == layers.as_slice(), "word heap layers")?;
    check(heap_from_word(&word_of_heap(&h1), &Alphabet::Integers).map_err(err)? == h1, "word round trip")?;
    let w2: Vec<Piece> = [0, 2, 4, 2, 4, 3, 5].into_iter().map(x).collect();
    let h2 = heap_from_word(&w2, &Alphabet::Integers).map_err(err)?;
    let joined: Vec<i64> = word_of_heap(&h1.compose(&h2).map_err(err)?)
        .iter()
        .map(|p| match p {
            Piece::Int(i) => *i,
            _ => unreachable!(),
        })
        .collect();
    check(
        joined == vec![2, 1, 3, 0, 2, 4, 4, 3, 5, 3, 2, 4, 2, 4, 3, 5],
        format!("concatenated word {joined:?}"),
    )?;
    Ok(format!("{count} domain elements, {} trees over 53412", five.len()))
}

fn properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let al = Alphabet::Integers;
    let word = |rng: &mut StdRng| -> Vec<Piece> {
        let len = rng.random_range(0..9);
        (0..len).map(|_| Piece::Int(rng.random_range(0..6))).collect()
    };
    for _ in 0..1000 {
        let (a, b, c) = (word(&mut rng), word(&mut rng), word(&mut rng));
        let h = |w: &[Piece]| Heap::from_word(&al, w).map_err(err);
        let (ha, hb, hc) = (h(&a)?, h(&b)?, h(&c)?);
        let left = ha.compose(&hb).map_err(err)?.compose(&hc).map_err(err)?;
        let right = ha.compose(&hb.compose(&hc).map_err(err)?).map_err(err)?;
        check(left == right, format!("associativity at {a:?} {b:?} {c:?}"))?;
    }
    for _ in 0..1000 {
        let mut w = word(&mut rng);
        w.extend(word(&mut rng));
        let h = Heap::from_word(&al, &w).map_err(err)?;
        for _ in 0..20 {
            if w.len() < 2 {
                break;
            }
            let i = rng.random_range(0..w.len() - 1);
            if !al.related(&w[i], &w[i + 1]) {
                w.swap(i, i + 1);
            }
            check(Heap::from_word(&al, &w).map_err(err)? == h, format!("commutation changed {w:?}"))?;
        }
    }
    let euler = euler_sequence(2, 9).map_err(err)?;
    let tangent = tangent_numbers(9).map_err(err)?;
    check(euler == tangent, "Euler and tangent numbers differ")?;
    let l = limits();
    for (r, n_max) in [(2, 4), (3, 2)] {
        for n in 1..=n_max {
            let all = count_pyramids_blocks(n, r, false, &l).map_err(err)?;
            let top = count_pyramids_blocks(n, r, true, &l).map_err(err)?;
            check(all == n as u64 * top, format!("blocks r={r} n={n}: {all} vs {n}*{top}"))?;
        }
    }
    for (r, n_max) in [(2, 4), (3, 3)] {
        for n in 1..=n_max {
            let all = count_pyramids_paths(n, r, false, &l).map_err(err)?;
            let top = count_pyramids_paths(n, r, true, &l).map_err(err)?;
            check(all == n as u64 * top, format!("paths r={r} n={n}: {all} vs {n}*{top}"))?;
        }
    }
    Ok("1000 triples, 1000 commutation walks, 9 tangent terms".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("sequence values", sequence_values),
        ("descent classes = block pyramids = series", descent_classes),
        ("complete trees = path pyramids = series", trees),
        ("forests = heaps = tau = omega", forests),
        ("mobius = r_n", mobius),
        ("monoid identities", identities),
        ("bijection round trips", bijections),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
