//! A clique with one pendant per vertex. Matching the clique first leaves a
//! maximal matching that can be half the maximum.

use dynmatch::harness::{gen_conclusion_adversary, replay, ReplayConfig};
use dynmatch::Algorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let per_side = 16;
    let stream = gen_conclusion_adversary(per_side)?;
    let mut half = 0;
    for seed in 0..20 {
        let r = replay(
            &stream,
            &ReplayConfig::new(Algorithm::Multilevel, seed).oracle(true),
        )?;
        let max = r.maximum.unwrap();
        if 2 * r.matching_size == max {
            half += 1;
        }
        println!("seed {seed:>2}: |M| = {:>2} of {max}", r.matching_size);
    }
    println!("{half}/20 runs ended at exactly one half");
    Ok(())
}
