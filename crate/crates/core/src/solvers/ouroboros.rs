//! The ouroboros problem: search for a tiled simple closed walk. Trees have
//! none; elsewhere only a found loop is conclusive.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Letter, Word};
use crate::certificates::{Certificate, Problem, Segment, Verdict, Witness, ACYCLIC_REASON};
use crate::error::Result;
use crate::groups::{Element, GroupOracle};
use crate::tilesets::{over_alphabet, TileAdjacency, TilesetGraph};

use super::walk::Walker;
use super::{BudgetSpent, Decision, OutOfBudget, SolveBudget};

/// Shortest loop first: lengths `3..=max_ouroboros_length`, words in
/// lexicographic order within each length.
pub fn solve_ouroboros(group: &GroupOracle, g: &TilesetGraph, budget: &SolveBudget, seed: Option<&str>) -> Result<Decision> {
    let cert = |verdict, witness| Certificate {
        problem: Problem::Ouroboros,
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
    let lifted = over_alphabet(g, group.alphabet())?;
    let seed_tile = seed.map(|s| lifted.tile_index(s)).transpose()?;
    if group.capabilities().tree_structured {
        let w = Witness::Structural {
            reason: ACYCLIC_REASON.into(),
        };
        return Ok(Decision::certified(cert(Verdict::No, w), BudgetSpent::default()));
    }
    let radius = budget.max_ouroboros_length / 2 + 1;
    let mut search = LoopSearch {
        g: &lifted,
        letters: group.alphabet().letters().collect(),
        ball: ball(group, radius),
        radius,
        n: 0,
        nodes: 0,
        limit: budget.max_nodes,
    };
    let starts: Vec<usize> = match seed_tile {
        Some(s) => vec![s],
        None => (0..lifted.tile_count()).collect(),
    };
    let mut spent = BudgetSpent::default();
    for n in 3..=budget.max_ouroboros_length {
        search.n = n;
        spent.max_length_searched = n;
        let pairs: Vec<(usize, usize)> = starts.iter().map(|&s| (s, s)).collect();
        let found = search.dfs(&mut Walker::new(group), pairs);
        spent.nodes_expanded = search.nodes;
        match found {
            Err(OutOfBudget) => return Ok(Decision::unknown(spent)),
            Ok(Some((word, start))) => {
                let scales = close_scales(&lifted, start, &word);
                let seg = Segment::from_indices(group.alphabet(), &lifted, &word, &scales);
                return Ok(Decision::certified(cert(Verdict::Yes, Witness::Loop(seg)), spent));
            }
            Ok(None) => {}
        }
    }
    Ok(Decision::unknown(spent))
}

/// Word distances from the identity up to `radius` (built-in groups).
fn ball(group: &GroupOracle, radius: usize) -> HashMap<Element, usize> {
    let mut dist = HashMap::new();
    let Some(id) = group.identity() else {
        return dist;
    };
    dist.insert(id.clone(), 0);
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        let d = dist[&e];
        if d == radius {
            continue;
        }
        for l in group.alphabet().letters() {
            let f = group.step(&e, l);
            if !dist.contains_key(&f) {
                dist.insert(f.clone(), d + 1);
                queue.push_back(f);
            }
        }
    }
    dist
}

struct LoopSearch<'a> {
    g: &'a TilesetGraph,
    letters: Vec<Letter>,
    ball: HashMap<Element, usize>,
    radius: usize,
    n: usize,
    nodes: u64,
    limit: u64,
}

impl LoopSearch<'_> {
    /// Lower bound on the distance back to the identity.
    fn distance_home(&self, e: Option<&Element>) -> usize {
        match e {
            Some(e) if !self.ball.is_empty() => self.ball.get(e).copied().unwrap_or(self.radius + 1),
            _ => 0,
        }
    }

    fn dfs(&mut self, walker: &mut Walker<'_>, pairs: Vec<(usize, usize)>) -> std::result::Result<Option<(Word, usize)>, OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(OutOfBudget);
        }
        let len = walker.len();
        for li in 0..self.letters.len() {
            let l = self.letters[li];
            let mut next: Vec<(usize, usize)> = pairs
                .iter()
                .flat_map(|&(s, t)| self.g.successors(t, l).iter().map(move |&u| (s, u)))
                .collect();
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                continue;
            }
            if len + 1 == self.n {
                if walker.closes(l) {
                    if let Some(&(s, _)) = next.iter().find(|(s, u)| s == u) {
                        let mut w = walker.word().to_vec();
                        w.push(l);
                        return Ok(Some((w, s)));
                    }
                }
                continue;
            }
            let remaining = self.n - len - 1;
            if self.distance_home(walker.peek(l).as_ref()) > remaining || !walker.try_push(l) {
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
}

/// Tiles `start = ζ(0), …, ζ(n) = start` along `w`, lowest tile at each step.
fn close_scales(g: &TilesetGraph, start: usize, w: &[Letter]) -> Vec<usize> {
    let mut layers = vec![vec![start]];
    for &l in w {
        let mut next: Vec<usize> = layers
            .last()
            .expect("non-empty")
            .iter()
            .flat_map(|&t| g.successors(t, l).iter().copied())
            .collect();
        next.sort_unstable();
        next.dedup();
        layers.push(next);
    }
    let mut scales = vec![start];
    for i in (0..w.len()).rev() {
        let after = *scales.last().expect("non-empty");
        let t = if i == 0 {
            start
        } else {
            *layers[i]
                .iter()
                .find(|&&t| g.successors(t, w[i]).contains(&after))
                .expect("layer reaches the closing tile")
        };
        scales.push(t);
    }
    scales.reverse();
    scales
}
