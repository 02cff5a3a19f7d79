//! All three maintainers on one deletion-heavy stream.

use dynmatch::harness::{compare, gen_deletion_heavy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let stream = gen_deletion_heavy(128, 20_000, 5)?;
    let report = compare(&stream, 5, 0, true)?;
    for r in &report.runs {
        println!("{}", r.summary());
    }
    println!(
        "sizes within a factor of two: {}",
        report.sizes_within_factor_two
    );
    Ok(())
}
