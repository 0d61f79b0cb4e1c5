//! Searching for tiled simple loops.

use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::{solve_ouroboros, SolveBudget};
use domino_snakes::tilesets::fixtures;

fn main() -> domino_snakes::error::Result<()> {
    let z2 = GroupOracle::free_abelian_standard(2)?;
    let f2 = GroupOracle::free_group(2)?;
    let budget = SolveBudget::with_length(8);
    let cases = [(&z2, "loopy", fixtures::loopy()), (&z2, "fig1", fixtures::fig1()), (&f2, "loopy", fixtures::loopy())];
    for (group, name, g) in cases {
        let d = solve_ouroboros(group, &g, &budget, None)?;
        println!("{} {name}: {}", group.descriptor(), d.verdict);
        if let Some(w) = d.witness() {
            println!("  witness: {}", w.variant());
        }
    }
    Ok(())
}
