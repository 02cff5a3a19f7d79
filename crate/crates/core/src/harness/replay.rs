//! Replays a stream against a maintainer with periodic audits.

use std::fmt::Write as _;
use std::thread;

use serde::Serialize;

use crate::error::{AuditViolation, ReplayError};
use crate::instrument::{LevelEpochStats, WorkCounter};
use crate::maintainer::{Algorithm, Maintainer};
use crate::matching::{
    check_maximal, maximum_matching_blossom, MatchingRatio, DEFAULT_ORACLE_BOUND,
};
use crate::multilevel::MultilevelStats;

use super::stream::{Op, UpdateStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplayConfig {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Audit after every `verify_every` updates; 0 audits only at the end.
    pub verify_every: usize,
    /// Compare against an exact maximum matching at the end.
    pub oracle: bool,
    /// Include per-level epoch statistics in the report.
    pub epoch_stats: bool,
}

impl ReplayConfig {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        ReplayConfig {
            algorithm,
            seed,
            verify_every: 0,
            oracle: false,
            epoch_stats: false,
        }
    }

    pub fn verify_every(mut self, k: usize) -> Self {
        self.verify_every = k;
        self
    }

    pub fn oracle(mut self, on: bool) -> Self {
        self.oracle = on;
        self
    }

    pub fn epoch_stats(mut self, on: bool) -> Self {
        self.epoch_stats = on;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub n: usize,
    pub t: usize,
    pub final_edges: usize,
    pub matching_size: usize,
    pub maximal: bool,
    /// Present when the oracle ran.
    pub maximum: Option<usize>,
    pub ratio: Option<f64>,
    pub audits: u64,
    /// Always empty in a returned report: the first failure aborts the replay.
    pub audit_failures: Vec<String>,
    pub work: WorkCounter,
    pub work_per_update: f64,
    pub epochs: Option<Vec<LevelEpochStats>>,
    pub alive_epochs: usize,
    pub multilevel: Option<MultilevelStats>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} seed={} n={} t={} m={} |M|={}",
            self.algorithm, self.seed, self.n, self.t, self.final_edges, self.matching_size
        );
        if let (Some(max), Some(r)) = (self.maximum, self.ratio) {
            let _ = write!(s, " max={max} ratio={r:.4}");
        }
        let _ = write!(
            s,
            " audits={} ops={} ops/update={:.2}",
            self.audits,
            self.work.total(),
            self.work_per_update
        );
        if let Some(levels) = &self.epochs {
            for l in levels {
                let _ = write!(
                    s,
                    "\n  level {:>2}: natural={} induced={} alive={} t_i={} mean_duration={:.2}",
                    l.level, l.natural, l.induced, l.alive, l.deletions, l.mean_duration
                );
            }
        }
        s
    }
}

/// Replays `stream`, calling `observe` after every update with the update
/// index. An observer error aborts the replay like an audit failure.
pub fn replay_with<F>(
    stream: &UpdateStream,
    cfg: &ReplayConfig,
    mut observe: F,
) -> Result<RunReport, ReplayError>
where
    F: FnMut(usize, &dyn Maintainer) -> Result<(), String>,
{
    let mut m = cfg.algorithm.build(stream.n, cfg.seed)?;
    let mut audits = 0u64;
    for (index, up) in stream.updates.iter().enumerate() {
        let res = match up.op {
            Op::Insert => m.insert(up.u, up.v),
            Op::Delete => m.delete(up.u, up.v),
        };
        res.map_err(|source| ReplayError::Update { index, source })?;
        if !m.work().phi_balanced() {
            return Err(ReplayError::Audit {
                index,
                violation: AuditViolation::new("potential decrements exceed increments"),
            });
        }
        if cfg.verify_every > 0 && (index + 1) % cfg.verify_every == 0 {
            audits += 1;
            m.audit()
                .map_err(|violation| ReplayError::Audit { index, violation })?;
        }
        observe(index, m.as_ref()).map_err(|msg| ReplayError::Audit {
            index,
            violation: AuditViolation::new(msg),
        })?;
    }
    let last = stream.len().saturating_sub(1);
    audits += 1;
    m.audit().map_err(|violation| ReplayError::Audit {
        index: last,
        violation,
    })?;
    let maximal = check_maximal(m.graph(), m.matching()).maximal;

    let (maximum, ratio) = if cfg.oracle && stream.n <= DEFAULT_ORACLE_BOUND {
        let maximum = maximum_matching_blossom(m.graph());
        let r = MatchingRatio {
            matched: m.matching().len(),
            maximum,
        };
        if !r.is_at_least_half() {
            return Err(ReplayError::Oracle(format!("ratio {r} below one half")));
        }
        (Some(maximum), Some(r.as_f64()))
    } else {
        (None, None)
    };

    let ledger = m.ledger();
    let epochs = cfg.epoch_stats.then(|| {
        ledger
            .active_levels()
            .into_iter()
            .map(|l| ledger.level_epoch_stats(l))
            .collect()
    });
    let work = *m.work();
    Ok(RunReport {
        algorithm: cfg.algorithm,
        seed: cfg.seed,
        n: stream.n,
        t: stream.len(),
        final_edges: m.graph().m(),
        matching_size: m.matching().len(),
        maximal,
        maximum,
        ratio,
        audits,
        audit_failures: Vec::new(),
        work,
        work_per_update: if stream.is_empty() {
            0.0
        } else {
            work.total() as f64 / stream.len() as f64
        },
        epochs,
        alive_epochs: ledger.alive().count(),
        multilevel: m.multilevel_stats(),
    })
}

pub fn replay(stream: &UpdateStream, cfg: &ReplayConfig) -> Result<RunReport, ReplayError> {
    replay_with(stream, cfg, |_, _| Ok(()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub runs: Vec<RunReport>,
    /// Every pair of final matching sizes `a, b` satisfies `a <= 2b`.
    pub sizes_within_factor_two: bool,
}

impl CompareReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs all three maintainers on the same stream, one thread each.
pub fn compare(
    stream: &UpdateStream,
    seed: u64,
    verify_every: usize,
    oracle: bool,
) -> Result<CompareReport, ReplayError> {
    let results: Vec<Result<RunReport, ReplayError>> = thread::scope(|scope| {
        let handles: Vec<_> = Algorithm::ALL
            .iter()
            .map(|&algorithm| {
                let cfg = ReplayConfig {
                    algorithm,
                    seed,
                    verify_every,
                    oracle,
                    epoch_stats: false,
                };
                scope.spawn(move || replay(stream, &cfg))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("replay thread panicked"))
            .collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    if let Some(bad) = runs.iter().find(|r| !r.maximal) {
        return Err(ReplayError::Oracle(format!(
            "{} ended with a non-maximal matching",
            bad.algorithm
        )));
    }
    let sizes_within_factor_two = runs
        .iter()
        .all(|a| runs.iter().all(|b| a.matching_size <= 2 * b.matching_size));
    Ok(CompareReport {
        runs,
        sizes_within_factor_two,
    })
}
