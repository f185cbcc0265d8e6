//! `piecework`: sequences, enumerations, bijections and identity checks for
//! heaps of pieces. Every run prints one JSON report and exits 0 iff all of
//! its checks matched.

mod bij;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use piecework::enumerate::{self, Universe};
use piecework::nat::{enumerate_complete_nafs, enumerate_complete_nats};
use piecework::posets::{self, Family};
use piecework::series::{self, SequenceSpec};
use piecework::structures::{perms_with_descent_set, regular_descent_set};
use piecework::{Error, Limits};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "piecework", version, about = "Heaps of pieces: sequences, enumeration, bijections")]
struct Cli {
    /// Overrides the size caps measured in n (leaves, permutation length, ...).
    #[arg(long, global = true, env = "PIECEWORK_MAX_N")]
    max_n: Option<usize>,

    /// Sets one cap by field name, e.g. `--cap path_work=20000`. Repeatable.
    #[arg(long = "cap", global = true, value_name = "NAME=VALUE")]
    caps: Vec<String>,

    /// Writes a Graphviz rendering of the result here (bij, verify mobius).
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,

    /// Leaves out `wall_time_ms` so output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_time: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prints r_1..r_N of a family, compared against brute-force counts.
    Seq {
        #[arg(long, value_enum)]
        family: SeqFamily,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Truncation order (12 by default, 5 for omega).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Counts heaps by exhaustive enumeration and compares with the series.
    Enum {
        #[arg(long, value_enum)]
        kind: EnumKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Keep only pyramids whose top piece is the distinguished one.
        #[arg(long)]
        restrict: bool,
    },
    /// Applies one of the bijections and checks its round trip.
    Bij {
        #[arg(long, value_enum)]
        which: bij::Which,
        #[arg(long, value_enum)]
        direction: bij::Direction,
        /// A file path, or the input itself (JSON, points, or a permutation).
        #[arg(long)]
        input: String,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Checks the inversion, exponential and Möbius identities.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// single, unrelated, crossing, blocksM or pathsN.
        #[arg(long)]
        universe: Option<String>,
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long, default_value = "blocks")]
        family: Family,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeqFamily {
    Blocks,
    Rpartitions,
    Euler,
    Tau,
    Omega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EnumKind {
    PyramidsBlocks,
    PyramidsPaths,
    HeapsPaths,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Cf,
    Exp,
    Mobius,
    All,
}

fn limits(cli: &Cli) -> Result<Limits> {
    let mut l = match cli.max_n {
        Some(n) => Limits::default().with_max_n(n),
        None => Limits::default(),
    };
    for cap in &cli.caps {
        let (name, value) = cap.split_once('=').with_context(|| format!("--cap {cap:?} is not NAME=VALUE"))?;
        let v: u64 = value.trim().parse().with_context(|| format!("--cap {name}: {value:?} is not a number"))?;
        let u = v as usize;
        match name.trim() {
            "partition_ground" => l.partition_ground = u,
            "perm_len" => l.perm_len = u,
            "tuple_count" => l.tuple_count = v,
            "heap_pieces" => l.heap_pieces = u,
            "pyramid_ground" => l.pyramid_ground = u,
            "path_work" => l.path_work = v,
            "degree" => l.degree = u,
            "block_poset_ground" => l.block_poset_ground = u,
            "rpartition_n" => l.rpartition_n = u,
            "rpartition_r" => l.rpartition_r = u,
            "nat_leaves" => l.nat_leaves = u,
            "naf_leaves" => l.naf_leaves = u,
            "omega_n" => l.omega_n = u,
            other => bail!("unknown cap {other:?}"),
        }
    }
    Ok(l)
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(T::to_string).collect()
}

/// Compares `oracle(n)` with `series[n-1]` for increasing `n`, stopping at
/// the first size an oracle cap rules out and recording that it stopped.
fn cross_check<T: ToString>(
    report: &mut Report,
    name: &str,
    series: &[String],
    oracle: impl Fn(usize) -> piecework::Result<T>,
) -> Result<()> {
    for n in 1..=series.len() {
        match oracle(n) {
            Ok(v) => report.check(format!("{name}[{n}]"), v.to_string(), series[n - 1].clone()),
            Err(e @ Error::CapExceeded { .. }) => {
                report.skipped.push(format!("{name} for n >= {n}: {e}"));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn cmd_seq(family: SeqFamily, r: usize, n: Option<usize>, l: &Limits) -> Result<Report> {
    let n_max = n.unwrap_or(if family == SeqFamily::Omega { 5 } else { 12 });
    let mut report = Report::new(json!({ "family": bij::flag(family), "r": r, "n": n_max }));
    let values: Vec<String> = match family {
        SeqFamily::Blocks => strings(&series::r_sequence(&SequenceSpec::Blocks(r), n_max)?),
        SeqFamily::Rpartitions => strings(&series::r_sequence(&SequenceSpec::RPartitions(r), n_max)?),
        SeqFamily::Euler => strings(&series::euler_sequence(r, n_max)?),
        SeqFamily::Tau => strings(&series::tau_sequence(n_max)?),
        SeqFamily::Omega => {
            let v = (1..=n_max)
                .map(|n| series::omega_bruteforce(n, l))
                .collect::<piecework::Result<Vec<_>>>()?;
            strings(&v)
        }
    };
    match family {
        SeqFamily::Blocks => {
            cross_check(&mut report, "pyramids", &values, |n| enumerate::count_pyramids_blocks(n, r, true, l))?;
            if r >= 2 {
                cross_check(&mut report, "descent classes", &values, |n| {
                    Ok(perms_with_descent_set(r * n - 1, &regular_descent_set(n, r), l)?.len())
                })?;
            }
        }
        SeqFamily::Rpartitions => {
            cross_check(&mut report, "pyramids", &values, |n| enumerate::count_pyramids_paths(n, r, true, l))?;
            if r == 2 {
                cross_check(&mut report, "trees", &values, |n| Ok(enumerate_complete_nats(n, l)?.len()))?;
            }
        }
        SeqFamily::Euler => {
            let blocks = strings(&series::r_sequence(&SequenceSpec::Blocks(r), n_max)?);
            cross_check(&mut report, "block series", &values, |n| Ok(blocks[n - 1].clone()))?;
            cross_check(&mut report, "descent classes", &values, |n| {
                Ok(perms_with_descent_set(r * n - 1, &regular_descent_set(n, r), l)?.len())
            })?;
            if r == 2 {
                let tangent = strings(&series::tangent_numbers(n_max)?);
                cross_check(&mut report, "tangent numbers", &values, |n| Ok(tangent[n - 1].clone()))?;
            }
        }
        SeqFamily::Tau => {
            cross_check(&mut report, "pairs", &values, |n| series::omega_bruteforce(n, l))?;
            cross_check(&mut report, "heaps", &values, |n| enumerate::count_heaps_paths(n, l))?;
            cross_check(&mut report, "forests", &values, |n| Ok(enumerate_complete_nafs(n, l)?.len()))?;
        }
        SeqFamily::Omega => {
            let tau = strings(&series::tau_sequence(n_max)?);
            cross_check(&mut report, "tau", &values, |n| Ok(tau[n - 1].clone()))?;
        }
    }
    report.values = json!(values);
    Ok(report)
}

fn cmd_enum(kind: EnumKind, n: usize, r: usize, restrict: bool, l: &Limits) -> Result<Report> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let mut report = Report::new(json!({ "kind": bij::flag(kind), "n": n, "r": r, "restrict": restrict }));
    let (count, series_value) = match kind {
        EnumKind::PyramidsBlocks => (
            enumerate::count_pyramids_blocks(n, r, restrict, l)?,
            series::r_sequence(&SequenceSpec::Blocks(r), n)?[n - 1].clone(),
        ),
        EnumKind::PyramidsPaths => (
            enumerate::count_pyramids_paths(n, r, restrict, l)?,
            series::r_sequence(&SequenceSpec::RPartitions(r), n)?[n - 1].clone(),
        ),
        EnumKind::HeapsPaths => {
            if r != 2 {
                bail!("heaps-paths is defined for r = 2 only");
            }
            (enumerate::count_heaps_paths(n, l)?, series::tau_sequence(n)?[n - 1].clone())
        }
    };
    // every pyramid has n pieces and each is the top equally often
    let expected = if restrict || kind == EnumKind::HeapsPaths {
        series_value
    } else {
        series_value * n
    };
    report.values = json!({ "n": n, "r": r, "count": count.to_string() });
    report.expected = json!(expected.to_string());
    report.check("count", count.to_string(), expected.to_string());
    Ok(report)
}

fn identity_checks(report: &mut Report, u: &Universe, dmax: usize, which: &[Suite], l: &Limits) -> Result<()> {
    for s in which {
        let (name, r) = match s {
            Suite::Cf => ("cf", enumerate::verify_cf_inversion(u, dmax, l)?),
            Suite::Exp => ("exp", enumerate::verify_exp_formula(u, dmax, l)?),
            _ => ("log", enumerate::verify_log_identity(u, dmax, l)?),
        };
        let value = match &r.first_mismatch {
            None => json!(format!("{} coefficients equal", r.coefficients_checked)),
            Some((m, a, b)) => json!({ "monomial": m, "lhs": a, "rhs": b }),
        };
        let ok = r.holds();
        report.push(
            format!("{name}[{} d<={dmax}]", u.name),
            value,
            json!(format!("{} coefficients equal", r.coefficients_checked)),
            ok,
        );
    }
    Ok(())
}

fn mobius_check(report: &mut Report, family: Family, n: usize, r: usize, l: &Limits) -> Result<Value> {
    let m = posets::verify_mobius(family, n, r, l)?;
    let sign = if n.is_multiple_of(2) { "" } else { "-" };
    let expected = if m.r_n == "0" { "0".to_string() } else { format!("{sign}{}", m.r_n) };
    report.push(
        format!("mobius[{family:?} n={n} r={r}]"),
        json!(m.mobius),
        json!(expected),
        m.matches,
    );
    Ok(serde_json::to_value(&m)?)
}

fn cmd_verify(
    suite: Suite,
    universe: Option<&str>,
    dmax: Option<usize>,
    (family, r, n): (Family, usize, usize),
    l: &Limits,
) -> Result<(Report, Option<String>)> {
    let mut report = Report::new(json!({
        "suite": bij::flag(suite),
        "universe": universe,
        "dmax": dmax,
        "family": family,
        "r": r,
        "n": n,
    }));
    let mut dot = None;
    match suite {
        Suite::Cf | Suite::Exp => {
            let u = Universe::by_name(universe.unwrap_or("blocks4"))?;
            identity_checks(&mut report, &u, dmax.unwrap_or(3), &[suite], l)?;
        }
        Suite::Mobius => {
            report.values = mobius_check(&mut report, family, n, r, l)?;
            dot = Some(match family {
                Family::Blocks => posets::build_block_poset(n, r, l)?.to_dot(),
                Family::RPartitions => posets::build_rpartition_poset(n, r, l)?.to_dot(),
            });
        }
        Suite::All => {
            let battery: Vec<(Universe, usize)> = match universe {
                Some(name) => vec![(Universe::by_name(name)?, dmax.unwrap_or(3))],
                None => vec![
                    (Universe::single(), dmax.unwrap_or(4)),
                    (Universe::crossing_pair(), dmax.unwrap_or(3)),
                    (Universe::blocks(4, 2), dmax.unwrap_or(3)),
                    (Universe::paths_of_sn(2), dmax.unwrap_or(3)),
                ],
            };
            for (u, d) in &battery {
                identity_checks(&mut report, u, *d, &[Suite::Cf, Suite::Exp, Suite::All], l)?;
            }
            let mut mobius = Vec::new();
            for fam in [Family::Blocks, Family::RPartitions] {
                for (n, r) in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)] {
                    mobius.push(mobius_check(&mut report, fam, n, r, l)?);
                }
            }
            report.values = json!({ "mobius": mobius });
        }
    }
    Ok((report, dot))
}

fn run(cli: &Cli) -> Result<Report> {
    let started = Instant::now();
    let l = limits(cli)?;
    let (report, dot) = match &cli.command {
        Command::Seq { family, r, n } => (cmd_seq(*family, *r, *n, &l)?, None),
        Command::Enum { kind, n, r, restrict } => (cmd_enum(*kind, *n, *r, *restrict, &l)?, None),
        Command::Bij { which, direction, input, r } => {
            let text = bij::read_input(input)?;
            let mut report = Report::new(json!({
                "which": bij::flag(*which),
                "direction": bij::flag(*direction),
                "input": text.trim(),
                "r": r,
            }));
            let image = bij::run(*which, *direction, &text, *r, &mut report)?;
            (report, image.to_dot()?)
        }
        Command::Verify { suite, universe, dmax, family, r, n } => {
            cmd_verify(*suite, universe.as_deref(), *dmax, (*family, *r, *n), &l)?
        }
    };
    if let Some(path) = &cli.dot {
        let Some(dot) = dot else {
            bail!("--dot has nothing to draw for this command");
        };
        std::fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.finish(started, !cli.no_time))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            if report.matches {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let args: Vec<String> = std::env::args().skip(1).collect();
            println!("{}", json!({ "command": args, "error": format!("{e:#}"), "match": false }));
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
