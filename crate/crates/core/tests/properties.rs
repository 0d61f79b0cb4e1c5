//! Randomized invariants across modules.

mod common;

use std::collections::HashSet;

use domino_snakes::alphabet::{GeneratorAlphabet, Letter, Word};
use domino_snakes::automata::{builtin_skeleton, has_biinfinite_path, product, trim, walk_automaton, SkeletonKind};
use domino_snakes::certificates::{verify, Certificate, Verdict};
use domino_snakes::embeddings::{apply_transducer, center_embedding, CenterEmbedding};
use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::{
    count_snakes, solve_infinite_snake, solve_ouroboros, solve_reachability, solve_y_snake, SolveBudget,
};
use domino_snakes::tilesets::TilesetGraph;
use proptest::prelude::*;

fn groups() -> Vec<GroupOracle> {
    vec![
        GroupOracle::free_abelian_standard(2).unwrap(),
        GroupOracle::free_group(2).unwrap(),
        GroupOracle::heisenberg(),
    ]
}

fn word_in(letters: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..letters as u32).prop_map(Letter), 0..=max)
}

/// Up to three tiles; `mask` picks generator edges.
fn tileset(alphabet: &GeneratorAlphabet, k: usize, mask: &[bool]) -> TilesetGraph {
    let names: Vec<String> = (0..k).map(|i| format!("t{i}")).collect();
    let mut g = TilesetGraph::new(alphabet.clone(), &names).unwrap();
    let gens: Vec<Letter> = alphabet.generators().collect();
    for (gi, s) in gens.iter().enumerate() {
        for u in 0..k {
            for v in 0..k {
                if mask[gi * 9 + u * 3 + v] {
                    g.add_edge(u, v, *s).unwrap();
                }
            }
        }
    }
    g
}

fn tileset_args() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1..=3usize, prop::collection::vec(prop::bool::weighted(0.35), 27))
}

fn freely_reduced(w: &[Letter]) -> bool {
    w.windows(2).all(|p| p[1] != p[0].inverse())
}

fn z3_embedding() -> CenterEmbedding {
    let g = GroupOracle::from_descriptor("zd:3:names=x,y,c").unwrap();
    let a = g.alphabet().clone();
    center_embedding(&g, &a.parse_word("c").unwrap(), &a.parse_word("x y").unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn word_problem_agrees_with_canonical_forms(gi in 0..3usize, w in word_in(6, 8)) {
        let g = &groups()[gi];
        let w: Word = w.into_iter().filter(|l| g.alphabet().contains(*l)).collect();
        prop_assert_eq!(g.wp_check(&w).unwrap(), g.canonical(&w) == g.canonical(&[]));
    }

    #[test]
    fn g_reduced_iff_prefixes_are_distinct(gi in 0..3usize, w in word_in(6, 8)) {
        let g = &groups()[gi];
        let w: Word = w.into_iter().filter(|l| g.alphabet().contains(*l)).collect();
        prop_assume!(!w.is_empty());
        let prefixes: HashSet<_> = (0..=w.len()).map(|i| g.canonical(&w[..i]).unwrap()).collect();
        prop_assert_eq!(g.is_g_reduced(&w).unwrap(), prefixes.len() == w.len() + 1);
    }

    #[test]
    fn abelian_word_problem_ignores_order(w in word_in(6, 8), rot in 0..8usize, swap in 0..8usize) {
        let z3 = GroupOracle::free_abelian_standard(3).unwrap();
        let mut v = w.clone();
        if !v.is_empty() {
            let len = v.len();
            v.rotate_left(rot % len);
            let (i, j) = (swap % v.len(), (swap + 1) % v.len());
            v.swap(i, j);
        }
        prop_assert_eq!(z3.wp_check(&w).unwrap(), z3.wp_check(&v).unwrap());
    }

    #[test]
    fn free_group_reduction_cross_check(w in word_in(6, 8)) {
        prop_assume!(!w.is_empty());
        let f3 = GroupOracle::free_group(3).unwrap();
        prop_assert_eq!(f3.is_g_reduced(&w).unwrap(), freely_reduced(&w));
    }

    #[test]
    fn trim_keeps_nonemptiness((k, mask) in tileset_args(), si in 0..3usize) {
        let a = common::ab();
        let g = tileset(&a, k, &mask);
        let kinds = [SkeletonKind::Free(2), SkeletonKind::ZdGeodesic(2), SkeletonKind::Directions(a.parse_word("a a^-1 b").unwrap())];
        let x = product(&builtin_skeleton(&kinds[si], &a).unwrap(), &walk_automaton(&g)).unwrap();
        prop_assert_eq!(has_biinfinite_path(&x, None).is_empty(), has_biinfinite_path(&trim(&x), None).is_empty());
    }

    #[test]
    fn transducer_is_length_preserving_and_prefix_monotone(u in word_in(4, 6), v in word_in(4, 6)) {
        let m = &z3_embedding().transducer;
        let fu = apply_transducer(m, &u).unwrap();
        let mut uv = u.clone();
        uv.extend(&v);
        let fuv = apply_transducer(m, &uv).unwrap();
        prop_assert_eq!(fu.len(), u.len());
        prop_assert_eq!(fuv.len(), uv.len());
        prop_assert_eq!(&fuv[..u.len()], &fu[..]);
        let (_, q) = m.run_from(m.initial(), &u).unwrap();
        let (tail, _) = m.run_from(q, &v).unwrap();
        prop_assert_eq!(&fuv[u.len()..], &tail[..]);
    }

    #[test]
    fn embedding_is_well_defined_on_z2(u in word_in(4, 6), rot in 0..6usize, pad in 0..4u32) {
        // v is u rearranged with a cancelling pair inserted: equal in ℤ²
        let emb = z3_embedding();
        let mut v = u.clone();
        if !v.is_empty() {
            let len = v.len();
            v.rotate_left(rot % len);
        }
        let l = Letter(pad);
        v.insert(v.len() / 2, l);
        v.insert(v.len() / 2 + 1, l.inverse());
        let t = &emb.target_group;
        let fu = apply_transducer(&emb.transducer, &u).unwrap();
        let fv = apply_transducer(&emb.transducer, &v).unwrap();
        prop_assert_eq!(t.canonical(&fu), t.canonical(&fv));
    }

    #[test]
    fn solver_certificates_verify_and_round_trip((k, mask) in tileset_args(), gi in 0..3usize, n in 3..=7usize) {
        let group = &groups()[gi];
        let alphabet = GeneratorAlphabet::new(&group.alphabet().generator_names().take(2).collect::<Vec<_>>()).unwrap();
        let g = tileset(&alphabet, k, &mask);
        let budget = SolveBudget { max_nodes: 200_000, ..SolveBudget::with_length(n) };
        let target = alphabet.parse_word(&format!("{} {}", alphabet.name(Letter(0)), alphabet.name(Letter(2)))).unwrap();
        let target: Word = target.iter().map(|l| group.alphabet().letter(alphabet.name(*l)).unwrap()).collect();
        let decisions = [
            solve_infinite_snake(group, &g, &budget, None).unwrap(),
            solve_ouroboros(group, &g, &budget, None).unwrap(),
            solve_reachability(group, &g, &Vec::new(), &target, 2, &budget, None).unwrap(),
        ];
        for d in decisions {
            prop_assert_eq!(d.certificate.is_some(), d.verdict != Verdict::Unknown);
            if let Some(c) = d.certificate {
                prop_assert_eq!(verify(&c, group, &g, None), Ok(()));
                prop_assert_eq!(Certificate::from_text(&c.to_text()).unwrap(), c);
            }
        }
    }

    #[test]
    fn seeded_and_unseeded_agree_on_free_groups((k, mask) in tileset_args()) {
        let f2 = GroupOracle::free_group(2).unwrap();
        let g = tileset(f2.alphabet(), k, &mask);
        let budget = SolveBudget::default();
        let unseeded = solve_infinite_snake(&f2, &g, &budget, None).unwrap().verdict;
        let seeded: Vec<Verdict> = g
            .tiles()
            .iter()
            .map(|t| solve_infinite_snake(&f2, &g, &budget, Some(t)).unwrap().verdict)
            .collect();
        prop_assert!(!seeded.contains(&Verdict::Unknown));
        prop_assert_eq!(unseeded == Verdict::Yes, seeded.contains(&Verdict::Yes));
    }

    #[test]
    fn three_directions_imply_an_infinite_snake((k, mask) in tileset_args()) {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let g = tileset(z2.alphabet(), k, &mask);
        let y3 = builtin_skeleton(&SkeletonKind::Directions(z2.alphabet().parse_word("a a^-1 b").unwrap()), z2.alphabet()).unwrap();
        if solve_y_snake(&z2, &y3, &g, None).unwrap().verdict == Verdict::Yes {
            prop_assert_eq!(solve_infinite_snake(&z2, &g, &SolveBudget::default(), None).unwrap().verdict, Verdict::Yes);
        }
    }

    #[test]
    fn exhaustion_is_monotone((k, mask) in tileset_args(), n in 0..5usize) {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let g = tileset(z2.alphabet(), k, &mask);
        if count_snakes(&z2, &g, n, None).unwrap() == 0 {
            prop_assert_eq!(count_snakes(&z2, &g, n + 1, None).unwrap(), 0);
            prop_assert_eq!(count_snakes(&z2, &g, n + 2, None).unwrap(), 0);
        }
    }

    #[test]
    fn decisions_are_deterministic((k, mask) in tileset_args(), gi in 0..3usize) {
        let group = &groups()[gi];
        let alphabet = GeneratorAlphabet::new(&group.alphabet().generator_names().take(2).collect::<Vec<_>>()).unwrap();
        let g = tileset(&alphabet, k, &mask);
        let budget = SolveBudget { max_nodes: 100_000, ..SolveBudget::with_length(6) };
        prop_assert_eq!(
            solve_infinite_snake(group, &g, &budget, None).unwrap(),
            solve_infinite_snake(group, &g, &budget, None).unwrap()
        );
    }
}
