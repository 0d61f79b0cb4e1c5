//! Embedding ℤ² into the Heisenberg group and carrying snakes across.

use domino_snakes::embeddings::{center_embedding, transfer_snake, transform_tileset, Direction};
use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::enumerate_snakes;
use domino_snakes::tilesets::fixtures;

fn main() -> domino_snakes::error::Result<()> {
    let z2 = GroupOracle::free_abelian_standard(2)?;
    let h = GroupOracle::heisenberg();
    let a = h.alphabet();
    let e = center_embedding(&h, &a.parse_word("Z")?, &a.parse_word("X")?)?;
    print!("{}", e.transducer.to_text());

    let image = transform_tileset(&e.transducer, &fixtures::fig1())?;
    print!("{}", image.to_text());

    for s in enumerate_snakes(&z2, &fixtures::fig1(), 4, None)? {
        let f = transfer_snake(&e.transducer, &s, Direction::Forward)?;
        let back = transfer_snake(&e.transducer, &f, Direction::Backward)?;
        assert_eq!(back, s);
        println!("{}  ->  {}", z2.alphabet().format_word(&s.word), a.format_word(&f.word));
    }
    Ok(())
}
