//! Write a stream to text, read it back and replay it with audits.

use dynmatch::harness::{gen_random_stream, replay, ReplayConfig, UpdateStream};
use dynmatch::Algorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let stream = gen_random_stream(16, 40, 0.7, 9)?;
    let text = stream.to_text();
    println!("{}", text.lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("...");

    let back: UpdateStream = text.parse()?;
    assert_eq!(back, stream);
    for algo in Algorithm::ALL {
        let r = replay(
            &back,
            &ReplayConfig::new(algo, 1).verify_every(1).oracle(true),
        )?;
        println!("{}", r.summary());
    }

    let bad = "3 1\nD 0 1\n";
    println!(
        "illegal stream: {}",
        bad.parse::<UpdateStream>().unwrap_err()
    );
    Ok(())
}
