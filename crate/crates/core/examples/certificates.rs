//! Certificates: write, read back, verify and catch tampering.

use domino_snakes::certificates::{verify, Certificate};
use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::{solve_infinite_snake, SolveBudget};
use domino_snakes::tilesets::fixtures;

fn main() -> domino_snakes::error::Result<()> {
    let z2 = GroupOracle::free_abelian_standard(2)?;
    let g = fixtures::pingpong();
    let d = solve_infinite_snake(&z2, &g, &SolveBudget::default(), None)?;
    let cert = d.certificate.expect("NO is certified");
    let text = cert.to_text();
    print!("{text}");

    let parsed = Certificate::from_text(&text)?;
    println!("verify: {:?}", verify(&parsed, &z2, &g, None));

    let tampered = Certificate::from_text(&text.replace("depth: 2", "depth: 1"))?;
    match verify(&tampered, &z2, &g, None) {
        Ok(()) => println!("tampered certificate accepted"),
        Err(e) => println!("tampered certificate rejected: {e}"),
    }
    Ok(())
}
