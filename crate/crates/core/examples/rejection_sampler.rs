//! Exact uniform draws on [1, M] from draws on [1, n].

use dynmatch::SeededSource;

fn main() {
    for (n, m) in [(10u64, 3u64), (100, 7), (1000, 999), (64, 33)] {
        let mut src = SeededSource::new(1);
        let mut counts = vec![0u32; m as usize];
        for _ in 0..30_000 {
            counts[src.uniform_index(m, n).unwrap() as usize - 1] += 1;
        }
        let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
        println!(
            "n={n:>4} M={m:>3}: draws/sample {:.3}, bin counts in [{lo}, {hi}]",
            src.draws_per_sample()
        );
    }
}
