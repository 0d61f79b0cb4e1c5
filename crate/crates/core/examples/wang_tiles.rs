//! Wang tiles as tileset graphs and back.

use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::count_snakes;
use domino_snakes::wang::{fig1_wang, graph_to_wang, wang_to_graph, DEFAULT_TILE_BUDGET};

fn main() -> domino_snakes::error::Result<()> {
    let z2 = GroupOracle::free_abelian_standard(2)?;
    let wang = fig1_wang();
    print!("{}", wang.to_text());
    let graph = wang_to_graph(&wang);
    print!("{}", graph.to_text());
    let encoded = graph_to_wang(&graph, DEFAULT_TILE_BUDGET)?;
    println!("re-encoded as {} Wang tiles", encoded.tiles.tiles().len());
    for n in 0..=4 {
        println!("length {n}: {} snakes", count_snakes(&z2, &graph, n, None)?);
    }
    Ok(())
}
