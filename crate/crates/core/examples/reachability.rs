//! Snake reachability between two group elements.

use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::{solve_reachability, SolveBudget};
use domino_snakes::tilesets::fixtures;

fn main() -> domino_snakes::error::Result<()> {
    let budget = SolveBudget::default();
    let g = fixtures::fig1();
    for descriptor in ["zd:2", "free:2"] {
        let group = GroupOracle::from_descriptor(descriptor)?;
        for target in ["a b a", "a a", "b^-1 a^-1"] {
            let p = group.alphabet().parse_word("ε")?;
            let q = group.alphabet().parse_word(target)?;
            let d = solve_reachability(&group, &g, &p, &q, 2, &budget, None)?;
            let how = d.witness().map_or("budget exhausted", |w| w.variant());
            println!("{descriptor} 1 -> {target}: {} ({how})", d.verdict);
        }
    }
    Ok(())
}
