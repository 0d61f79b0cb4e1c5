//! Word problems and G-reduced words in the built-in groups.

use domino_snakes::groups::GroupOracle;

fn main() -> domino_snakes::error::Result<()> {
    let groups = [
        GroupOracle::free_abelian_standard(2)?,
        GroupOracle::free_group(2)?,
        GroupOracle::heisenberg(),
    ];
    for g in &groups {
        let a = g.alphabet();
        let gens: Vec<&str> = a.generator_names().collect();
        let commutator = format!("{0} {1} {0}^-1 {1}^-1", gens[0], gens[1]);
        let w = a.parse_word(&commutator)?;
        println!("{}: `{commutator}` trivial = {}", g.descriptor(), g.wp_check(&w)?);
        println!("  reduced = {}", g.is_g_reduced(&w)?);
        if let Some(p) = g.periodic_skeleton_word(4)? {
            println!("  periodic skeleton: {} (exact: {})", a.format_word(&p.word), p.exact);
        }
    }
    Ok(())
}
