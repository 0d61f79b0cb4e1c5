//! The infinite snake problem on ℤ² and on a free group.

use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::{solve_infinite_snake, SolveBudget};
use domino_snakes::tilesets::fixtures;

fn main() -> domino_snakes::error::Result<()> {
    let budget = SolveBudget::default();
    for descriptor in ["zd:2", "free:2"] {
        let group = GroupOracle::from_descriptor(descriptor)?;
        for (name, g) in [("fig1", fixtures::fig1()), ("pingpong", fixtures::pingpong())] {
            let d = solve_infinite_snake(&group, &g, &budget, None)?;
            println!("{descriptor} {name}: {} after {} nodes", d.verdict, d.spent.nodes_expanded);
            if let Some(c) = &d.certificate {
                print!("{}", c.to_text());
            }
        }
    }
    Ok(())
}
