//! Maximum matching by blossom contraction and by exhaustive search.

use dynmatch::harness::gen_random_stream;
use dynmatch::matching::{maximum_matching_blossom, maximum_matching_by_search};
use dynmatch::{approximation_ratio, Algorithm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for seed in 0..5 {
        let stream = gen_random_stream(20, 60, 0.8, seed)?;
        let g = stream.validate()?;
        let blossom = maximum_matching_blossom(&g);
        let search = maximum_matching_by_search(&g).unwrap();
        let mut m = Algorithm::Trivial.build(20, seed)?;
        for e in g.edges() {
            m.insert(e.lo(), e.hi())?;
        }
        let ratio = approximation_ratio(m.graph(), m.matching())?;
        println!(
            "seed {seed}: m={:>2} blossom={blossom} search={search} greedy {ratio}",
            g.m()
        );
    }
    Ok(())
}
