//! Skeleton automata and their products with a tileset.

use domino_snakes::automata::{builtin_skeleton, has_biinfinite_path, skeleton_approximation, walk_product, Nonemptiness, SkeletonKind};
use domino_snakes::groups::GroupOracle;
use domino_snakes::tilesets::fixtures;

fn main() -> domino_snakes::error::Result<()> {
    let z2 = GroupOracle::free_abelian_standard(2)?;
    let geodesic = builtin_skeleton(&SkeletonKind::ZdGeodesic(2), z2.alphabet())?;
    print!("{}", geodesic.to_text());

    let approx = skeleton_approximation(&z2, 4)?;
    println!("order-4 approximation: {} states", approx.state_count());

    for (name, g) in [("fig1", fixtures::fig1()), ("pingpong", fixtures::pingpong())] {
        let p = walk_product(&geodesic, &g)?;
        let verdict = match has_biinfinite_path(&p, None) {
            Nonemptiness::Empty => "empty",
            Nonemptiness::Nonempty(_) => "has a bi-infinite path",
        };
        println!("{name} x geodesic: {} states, {verdict}", p.state_count());
    }
    Ok(())
}
