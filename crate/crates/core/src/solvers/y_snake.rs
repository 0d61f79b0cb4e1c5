//! Exact decision for snakes whose skeleton lies in a sofic skeletal subset:
//! a bi-infinite snake exists iff the product of the skeleton automaton and
//! the walk automaton has a bi-infinite path.

use crate::automata::{has_biinfinite_path, product, surviving_states, walk_automaton, BiInfinitePath, Cycle, Nonemptiness, Path, SkeletonAutomaton};
use crate::certificates::{product_fingerprint, skeleton_hash, Certificate, Problem, Segment, Verdict, Witness};
use crate::error::Result;
use crate::groups::GroupOracle;
use crate::tilesets::{over_alphabet, TilesetGraph};

use super::{BudgetSpent, Decision};

/// Total decision of the Y-snake problem. `y` must be a skeletal subset of
/// `group` (the built-ins are; user automata should pass
/// [`crate::automata::audit_skeleton`] first).
pub fn solve_y_snake(group: &GroupOracle, y: &SkeletonAutomaton, g: &TilesetGraph, seed: Option<&str>) -> Result<Decision> {
    decide(Problem::YSnake, group, y, g, seed)
}

pub(crate) fn decide(
    problem: Problem,
    group: &GroupOracle,
    y: &SkeletonAutomaton,
    g: &TilesetGraph,
    seed: Option<&str>,
) -> Result<Decision> {
    let lifted = over_alphabet(g, y.alphabet())?;
    let seed_tile = seed.map(|s| lifted.tile_index(s)).transpose()?;
    let p = product(y, &walk_automaton(&lifted))?;
    let tile = |state: usize| p.pair(state).expect("product state").1;
    let pred = |state: usize| seed_tile.is_none_or(|s| tile(state) == s);
    let spent = BudgetSpent {
        max_length_searched: 0,
        nodes_expanded: p.state_count() as u64,
    };
    let segment = |word: &[_], states: &[usize]| {
        let tiles: Vec<usize> = states.iter().map(|s| tile(*s)).collect();
        Segment::from_indices(y.alphabet(), &lifted, word, &tiles)
    };
    let cycle = |c: &Cycle| segment(&c.word, &c.states);
    let path = |b: &Path| segment(&b.word, &b.states);
    let (verdict, witness) = match has_biinfinite_path(&p, Some(&pred)) {
        Nonemptiness::Nonempty(BiInfinitePath::Periodic(c)) => (Verdict::Yes, Witness::PeriodicSkeleton(cycle(&c))),
        Nonemptiness::Nonempty(BiInfinitePath::Lasso {
            left,
            bridge,
            right,
            seed_position,
        }) => (
            Verdict::Yes,
            Witness::Lasso {
                left: cycle(&left),
                bridge: path(&bridge),
                right: cycle(&right),
                seed_position,
            },
        ),
        Nonemptiness::Empty => {
            let alive = surviving_states(&p);
            let seeds = alive.iter().filter(|s| pred(**s)).count();
            (
                Verdict::No,
                Witness::EmptyProduct {
                    fingerprint: product_fingerprint(problem, group.descriptor(), &g.hash(), seed, p.state_count(), alive.len(), seeds),
                },
            )
        }
    };
    let cert = Certificate {
        problem,
        verdict,
        witness,
        group: group.descriptor().to_string(),
        tileset_hash: g.hash(),
        seed: seed.map(str::to_string),
        skeleton: (problem == Problem::YSnake).then(|| skeleton_hash(y)),
        p: None,
        q: None,
        margin: None,
    };
    Ok(Decision::certified(cert, spent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{builtin_skeleton, SkeletonKind};
    use crate::certificates::verify;
    use crate::tilesets::fixtures;

    fn check(group: &GroupOracle, y: &SkeletonAutomaton, g: &TilesetGraph, seed: Option<&str>) -> Decision {
        let d = solve_y_snake(group, y, g, seed).unwrap();
        assert_eq!(verify(d.certificate.as_ref().unwrap(), group, g, Some(y)), Ok(()));
        d
    }

    #[test]
    fn geodesic_fig1_is_yes_with_staircase() {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let geo = builtin_skeleton(&SkeletonKind::ZdGeodesic(2), z2.alphabet()).unwrap();
        let d = check(&z2, &geo, &fixtures::fig1(), None);
        assert_eq!(d.verdict, Verdict::Yes);
        let Some(Witness::PeriodicSkeleton(s)) = d.witness() else { panic!() };
        assert_eq!(s.word.len(), 2);
        assert!(s.word.contains(&"a".to_string()) && s.word.contains(&"b".to_string()));
    }

    #[test]
    fn directions_a_binv_fig1_is_no() {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let a = z2.alphabet();
        let y = builtin_skeleton(&SkeletonKind::Directions(vec![a.letter("a").unwrap(), a.letter("b^-1").unwrap()]), a).unwrap();
        assert_eq!(check(&z2, &y, &fixtures::fig1(), None).verdict, Verdict::No);
    }

    #[test]
    fn free_loopy_is_yes_with_single_letter() {
        let f2 = GroupOracle::free_group(2).unwrap();
        let y = builtin_skeleton(&SkeletonKind::Free(2), f2.alphabet()).unwrap();
        let d = check(&f2, &y, &fixtures::loopy(), None);
        let Some(Witness::PeriodicSkeleton(s)) = d.witness() else { panic!() };
        assert_eq!(s.word, ["a"]);
    }

    #[test]
    fn pingpong_geodesic_is_no() {
        let z1 = GroupOracle::free_abelian_standard(1).unwrap();
        let y = builtin_skeleton(&SkeletonKind::ZdGeodesic(1), z1.alphabet()).unwrap();
        assert_eq!(check(&z1, &y, &fixtures::pingpong(), None).verdict, Verdict::No);
    }

    #[test]
    fn seeded_lasso_is_certified() {
        // u and t carry a-loops; s sits between them and cannot be revisited
        // without cancelling a letter
        let f2 = GroupOracle::free_group(2).unwrap();
        let mut g = TilesetGraph::new(f2.alphabet().clone(), &["s", "t", "u"]).unwrap();
        g.add_edge_by_name("u", "u", "a").unwrap();
        g.add_edge_by_name("u", "s", "a").unwrap();
        g.add_edge_by_name("s", "t", "a").unwrap();
        g.add_edge_by_name("t", "t", "a").unwrap();
        let y = builtin_skeleton(&SkeletonKind::Free(2), f2.alphabet()).unwrap();
        let d = check(&f2, &y, &g, Some("s"));
        assert!(matches!(d.witness(), Some(Witness::Lasso { .. })), "{d:?}");
    }
}
