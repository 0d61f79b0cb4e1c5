//! Snakes restricted to a sofic skeleton: geodesics and fixed directions.

use domino_snakes::automata::{audit_skeleton, builtin_skeleton, SkeletonKind};
use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::solve_y_snake;
use domino_snakes::tilesets::fixtures;

fn main() -> domino_snakes::error::Result<()> {
    let z2 = GroupOracle::free_abelian_standard(2)?;
    let a = z2.alphabet();
    for spec in ["geodesic", "directions=a,b", "directions=a,b^-1"] {
        let kind = SkeletonKind::parse(spec, a)?;
        let y = builtin_skeleton(&kind, a)?;
        assert!(audit_skeleton(&z2, &y, 6)?.is_none());
        for (name, g) in [("fig1", fixtures::fig1()), ("pingpong", fixtures::pingpong())] {
            let d = solve_y_snake(&z2, &y, &g, None)?;
            println!("{} {name}: {}", kind.describe(a), d.verdict);
        }
    }
    Ok(())
}
