//! A star center climbs one level each time its edge count doubles, then
//! falls back as the leaves go away.

use dynmatch::{Maintainer, Multilevel, VertexId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v = VertexId;
    let mut m = Multilevel::new(64, 3)?;
    for leaf in 1..=32 {
        m.insert(v(0), v(leaf))?;
        if leaf.is_power_of_two() {
            println!(
                "{leaf:>2} leaves: center on level {}, owns {}",
                m.level(v(0)),
                m.owned_count(v(0))
            );
        }
    }
    for leaf in 1..=32 {
        m.delete(v(0), v(leaf))?;
        let left = 32 - leaf;
        if left > 0 && left.is_power_of_two() {
            println!(
                "{left:>2} left:   center on level {}, mate {:?}",
                m.level(v(0)),
                m.matching().mate(v(0))
            );
        }
    }
    m.audit()?;
    println!("{:?}", m.stats());
    Ok(())
}
