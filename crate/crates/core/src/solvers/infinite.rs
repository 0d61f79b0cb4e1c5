//! The infinite snake problem: exact for free groups, otherwise exhaustion
//! (NO) interleaved with periodic certificate search (YES).

use std::collections::{BTreeMap, VecDeque};

use crate::alphabet::{Letter, Word};
use crate::automata::{builtin_skeleton, product, skeleton_approximation, trim, walk_automaton, SkeletonAutomaton, SkeletonKind};
use crate::certificates::{exhaustion_fingerprint, Certificate, Problem, Segment, Verdict, Witness};
use crate::error::Result;
use crate::groups::GroupOracle;
use crate::tilesets::{over_alphabet, TilesetGraph};

use super::enumerate::SnakeSearch;
use super::walk::Walker;
use super::{y_snake, BudgetSpent, Decision, SolveBudget};

pub fn solve_infinite_snake(group: &GroupOracle, g: &TilesetGraph, budget: &SolveBudget, seed: Option<&str>) -> Result<Decision> {
    let caps = group.capabilities();
    if caps.exact_skeleton_automaton {
        let y = builtin_skeleton(&SkeletonKind::Free(group.alphabet().generator_count()), group.alphabet())?;
        return y_snake::decide(Problem::InfiniteSnake, group, &y, g, seed);
    }
    let lifted = over_alphabet(g, group.alphabet())?;
    let search = SnakeSearch::new(group, g)?.seed(seed)?;
    let seed_tile = seed.map(|s| lifted.tile_index(s)).transpose()?;
    let mut spent = BudgetSpent::default();
    let mut approximations: BTreeMap<usize, SkeletonAutomaton> = BTreeMap::new();
    let cert = |verdict, witness| Certificate {
        problem: Problem::InfiniteSnake,
        verdict,
        witness,
        group: group.descriptor().to_string(),
        tileset_hash: g.hash(),
        seed: seed.map(str::to_string),
        skeleton: None,
        p: None,
        q: None,
        margin: None,
    };
    for n in 0..=budget.max_snake_length {
        spent.max_length_searched = n;
        let exists = match search.exists_within(n, &mut spent.nodes_expanded, budget.max_nodes) {
            Ok(e) => e,
            Err(_) => return Ok(Decision::unknown(spent)),
        };
        if !exists {
            let counts = search.count_levels(n);
            let fp = exhaustion_fingerprint(Problem::InfiniteSnake, group.descriptor(), &g.hash(), seed, &counts);
            return Ok(Decision::certified(
                cert(Verdict::No, Witness::Exhaustion { depth: n, fingerprint: fp }),
                spent,
            ));
        }
        if n == 0 || !caps.exact_periodic_certification {
            continue;
        }
        let order = n.min(budget.approximation_order).max(2);
        if let std::collections::btree_map::Entry::Vacant(e) = approximations.entry(order) {
            e.insert(skeleton_approximation(group, order)?);
        }
        let p = trim(&product(&approximations[&order], &walk_automaton(&lifted))?);
        let mut finder = CycleFinder::new(group, &p, seed_tile, n, budget.max_nodes);
        finder.nodes = spent.nodes_expanded;
        let found = finder.run();
        spent.nodes_expanded = finder.nodes;
        match found {
            Err(_) => return Ok(Decision::unknown(spent)),
            Ok(Some((word, tiles))) => {
                let seg = Segment::from_indices(group.alphabet(), &lifted, &word, &tiles);
                return Ok(Decision::certified(cert(Verdict::Yes, Witness::PeriodicSkeleton(seg)), spent));
            }
            Ok(None) => {}
        }
    }
    Ok(Decision::unknown(spent))
}

/// Closed walks of one length in a trimmed product, in lexicographic word
/// order, whose periodic extension is injective in the group.
struct CycleFinder<'a> {
    group: &'a GroupOracle,
    p: &'a SkeletonAutomaton,
    starts: Vec<usize>,
    // dist[i][x]: steps from x back to starts[i]
    dist: Vec<Vec<usize>>,
    n: usize,
    letters: Vec<Letter>,
    nodes: u64,
    limit: u64,
}

impl<'a> CycleFinder<'a> {
    fn new(group: &'a GroupOracle, p: &'a SkeletonAutomaton, seed: Option<usize>, n: usize, limit: u64) -> Self {
        let starts: Vec<usize> = (0..p.state_count())
            .filter(|&s| seed.is_none_or(|t| p.pair(s).expect("product").1 == t))
            .collect();
        let mut preds = vec![Vec::new(); p.state_count()];
        for t in p.transitions() {
            preds[t.to].push(t.from);
        }
        let dist = starts
            .iter()
            .map(|&s| {
                let mut d = vec![usize::MAX; p.state_count()];
                d[s] = 0;
                let mut queue = VecDeque::from([s]);
                while let Some(x) = queue.pop_front() {
                    for &y in &preds[x] {
                        if d[y] == usize::MAX {
                            d[y] = d[x] + 1;
                            queue.push_back(y);
                        }
                    }
                }
                d
            })
            .collect();
        CycleFinder {
            group,
            p,
            starts,
            dist,
            n,
            letters: p.alphabet().letters().collect(),
            nodes: 0,
            limit,
        }
    }

    fn run(&mut self) -> std::result::Result<Option<(Word, Vec<usize>)>, super::OutOfBudget> {
        // pairs (start index, current state)
        let pairs: Vec<(usize, usize)> = self.starts.iter().enumerate().map(|(i, &s)| (i, s)).collect();
        let mut walker = Walker::new(self.group);
        self.dfs(&mut walker, pairs)
    }

    fn dfs(&mut self, walker: &mut Walker<'_>, pairs: Vec<(usize, usize)>) -> std::result::Result<Option<(Word, Vec<usize>)>, super::OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(super::OutOfBudget);
        }
        let len = walker.len();
        if len == self.n {
            let closed = pairs.iter().filter(|(i, x)| self.starts[*i] == *x).map(|(i, _)| *i).min();
            if let Some(i) = closed {
                if self.group.periodic_walk_injective(walker.word()) == Some(true) {
                    let states = self.reconstruct(self.starts[i], walker.word());
                    let tiles = states.iter().map(|s| self.p.pair(*s).expect("product").1).collect();
                    return Ok(Some((walker.word().to_vec(), tiles)));
                }
            }
            return Ok(None);
        }
        let remaining = self.n - len - 1;
        for li in 0..self.letters.len() {
            let l = self.letters[li];
            let mut next: Vec<(usize, usize)> = Vec::new();
            for &(i, x) in &pairs {
                for &(m, y) in self.p.outgoing(x) {
                    if m == l && self.dist[i][y] <= remaining {
                        next.push((i, y));
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            if next.is_empty() || !walker.try_push(l) {
                continue;
            }
            let r = self.dfs(walker, next);
            walker.pop();
            if let Some(found) = r? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    /// States `s = x₀, x₁, …, x_{n-1}` of a closed walk reading `w` from `s`,
    /// choosing the lowest state at each step.
    fn reconstruct(&self, s: usize, w: &[Letter]) -> Vec<usize> {
        let mut layers = vec![vec![s]];
        for &l in w {
            let mut next: Vec<usize> = layers
                .last()
                .expect("non-empty")
                .iter()
                .flat_map(|&x| self.p.outgoing(x).iter().filter(|(m, _)| *m == l).map(|(_, y)| *y))
                .collect();
            next.sort_unstable();
            next.dedup();
            layers.push(next);
        }
        let mut states = vec![s];
        for i in (1..w.len()).rev() {
            let after = *states.last().expect("non-empty");
            let x = *layers[i]
                .iter()
                .find(|&&x| self.p.outgoing(x).contains(&(w[i], after)))
                .expect("layer reaches the closing state");
            states.push(x);
        }
        states.reverse();
        states.rotate_right(1);
        states
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::verify;
    use crate::tilesets::fixtures;

    fn solve(group: &GroupOracle, g: &TilesetGraph, seed: Option<&str>) -> Decision {
        let d = solve_infinite_snake(group, g, &SolveBudget::default(), seed).unwrap();
        if let Some(c) = &d.certificate {
            assert_eq!(verify(c, group, g, None), Ok(()));
        }
        d
    }

    #[test]
    fn fig1_staircase() {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let d = solve(&z2, &fixtures::fig1(), None);
        assert_eq!(d.verdict, Verdict::Yes);
        let Some(Witness::PeriodicSkeleton(s)) = d.witness() else { panic!() };
        assert_eq!(s.word, ["a", "b"]);
        assert_eq!(s.scales, ["t1", "t2"]);
    }

    #[test]
    fn pingpong_is_exhausted_at_two() {
        let z1 = GroupOracle::free_abelian_standard(1).unwrap();
        let d = solve(&z1, &fixtures::pingpong(), None);
        assert_eq!(d.verdict, Verdict::No);
        assert!(matches!(d.witness(), Some(Witness::Exhaustion { depth: 2, .. })));
        // lifted into ℤ² it still dies at two
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let d = solve(&z2, &fixtures::pingpong(), None);
        assert!(matches!(d.witness(), Some(Witness::Exhaustion { depth: 2, .. })));
    }

    #[test]
    fn free_groups_use_the_exact_branch() {
        let f1 = GroupOracle::free_group(1).unwrap();
        let d = solve(&f1, &fixtures::pingpong(), None);
        assert!(matches!(d.witness(), Some(Witness::EmptyProduct { .. })));
        let f2 = GroupOracle::free_group(2).unwrap();
        let d = solve(&f2, &fixtures::fig1(), None);
        assert_eq!(d.verdict, Verdict::Yes);
    }

    #[test]
    fn seeded_staircase_starts_at_seed() {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let d = solve(&z2, &fixtures::fig1(), Some("t2"));
        let Some(Witness::PeriodicSkeleton(s)) = d.witness() else { panic!() };
        assert_eq!(s.scales[0], "t2");
    }

    #[test]
    fn heisenberg_without_periodic_certification_stays_unknown() {
        let h = GroupOracle::heisenberg();
        let budget = SolveBudget::with_length(4);
        let mut g = TilesetGraph::new(h.alphabet().clone(), &["t1", "t2"]).unwrap();
        g.add_edge_by_name("t1", "t2", "X").unwrap();
        g.add_edge_by_name("t2", "t1", "Y").unwrap();
        let d = solve_infinite_snake(&h, &g, &budget, None).unwrap();
        assert_eq!(d.verdict, Verdict::Unknown);
        assert!(d.certificate.is_none());
    }

    #[test]
    fn empty_tileset_dies_at_zero() {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let g = TilesetGraph::new(z2.alphabet().clone(), &[] as &[&str]).unwrap();
        let d = solve(&z2, &g, None);
        assert!(matches!(d.witness(), Some(Witness::Exhaustion { depth: 0, .. })));
    }
}
