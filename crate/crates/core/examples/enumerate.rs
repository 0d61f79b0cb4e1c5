//! Brute-force snake enumeration, the oracle behind the solvers' tests.

use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::SnakeSearch;
use domino_snakes::tilesets::fixtures;

fn main() -> domino_snakes::error::Result<()> {
    let z2 = GroupOracle::free_abelian_standard(2)?;
    let loopy = fixtures::loopy();
    let search = SnakeSearch::new(&z2, &loopy)?;
    // one tile with every move allowed: self-avoiding walks
    println!("counts: {:?}", search.count_levels(6));
    let fig1 = fixtures::fig1();
    let search = SnakeSearch::new(&z2, &fig1)?.seed(Some("t1"))?;
    for s in search.enumerate(3) {
        let tiles: Vec<&str> = s.scales.iter().map(|t| fig1.tile_name(*t)).collect();
        println!("{} | {}", z2.alphabet().format_word(&s.word), tiles.join(" "));
    }
    Ok(())
}
