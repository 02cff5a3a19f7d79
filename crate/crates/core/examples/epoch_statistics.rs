//! Per-level epoch counts for the two maintainers with levels.

use dynmatch::harness::{gen_deletion_heavy, replay, ReplayConfig};
use dynmatch::Algorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let stream = gen_deletion_heavy(1024, 100_000, 2)?;
    for algo in [Algorithm::TwoLevel, Algorithm::Multilevel] {
        let r = replay(&stream, &ReplayConfig::new(algo, 2).epoch_stats(true))?;
        println!("{}", r.summary());
        for l in r
            .epochs
            .iter()
            .flatten()
            .filter(|l| l.level >= 0 && l.deletions > 0)
        {
            let scale = (1u64 << l.level) as f64;
            println!(
                "  level {:>2}: natural / (t_i / 2^i) = {:.3}",
                l.level,
                l.natural as f64 / (l.deletions as f64 / scale)
            );
        }
    }
    Ok(())
}
