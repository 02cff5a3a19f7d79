//! Insert and delete a few edges and watch the matching repair itself.

use dynmatch::{Maintainer, Multilevel, VertexId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v = VertexId;
    let mut m = Multilevel::new(8, 7)?;
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)] {
        m.insert(v(a), v(b))?;
    }
    m.audit()?;
    println!(
        "matching after path 0..5: {:?}",
        m.matching().edges().collect::<Vec<_>>()
    );

    m.delete(v(1), v(2))?;
    m.delete(v(3), v(4))?;
    m.audit()?;
    println!(
        "after two deletions:     {:?}",
        m.matching().edges().collect::<Vec<_>>()
    );
    for u in m.graph().vertices() {
        println!(
            "  {u}: level {:>2}, mate {:?}",
            m.level(u),
            m.matching().mate(u)
        );
    }
    Ok(())
}
