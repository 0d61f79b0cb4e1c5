//! Snake reachability from `p` to `q`. Free groups are decided by the unique
//! reduced path, ℤ^d by a box-bounded search, everything else semi-decided.

use std::collections::HashSet;

use crate::alphabet::{invert_word, Letter, Word};
use crate::certificates::{box_fingerprint, Certificate, Problem, Segment, Verdict, Witness};
use crate::error::Result;
use crate::groups::{Element, GroupOracle, ModelKind};
use crate::tilesets::{over_alphabet, TileAdjacency, TilesetGraph};

use super::walk::Walker;
use super::{BudgetSpent, Decision, OutOfBudget, SolveBudget};

/// Decides whether some snake starts at `p` and ends at `q`. In ℤ^d the
/// search is confined to the bounding box of `p` and `q` grown by
/// `box_margin`, and NO means "no snake inside that box".
pub fn solve_reachability(
    group: &GroupOracle,
    g: &TilesetGraph,
    p: &Word,
    q: &Word,
    box_margin: u64,
    budget: &SolveBudget,
    seed: Option<&str>,
) -> Result<Decision> {
    let alphabet = group.alphabet();
    alphabet.check_word(p)?;
    alphabet.check_word(q)?;
    let lifted = over_alphabet(g, alphabet)?;
    let seed_tile = seed.map(|s| lifted.tile_index(s)).transpose()?;
    let names = |w: &[Letter]| w.iter().map(|l| alphabet.name(*l).to_string()).collect::<Vec<_>>();
    let cert = |verdict, witness, margin| Certificate {
        problem: Problem::Reach,
        verdict,
        witness,
        group: group.descriptor().to_string(),
        tileset_hash: g.hash(),
        seed: seed.map(str::to_string),
        skeleton: None,
        p: Some(names(p)),
        q: Some(names(q)),
        margin,
    };
    let found = |word: &[Letter], scales: &[usize], spent| {
        let seg = Segment::from_indices(alphabet, &lifted, word, scales);
        Decision::certified(cert(Verdict::Yes, Witness::FiniteSnake(seg), None), spent)
    };
    let starts: Vec<usize> = match seed_tile {
        Some(s) => vec![s],
        None => (0..lifted.tile_count()).collect(),
    };
    let mut target = invert_word(p);
    target.extend_from_slice(q);
    let mut spent = BudgetSpent::default();

    if group.wp_check(&target)? {
        return Ok(match starts.first() {
            Some(&t) => found(&[], &[t], spent),
            None => Decision::certified(cert(Verdict::No, Witness::ForcedPath { word: Vec::new() }, None), spent),
        });
    }

    if group.capabilities().tree_structured && group.has_standard_basis() {
        let w = free_reduce(&target);
        spent.max_length_searched = w.len();
        return Ok(match tile_path(&lifted, &starts, &w) {
            Some(scales) => found(&w, &scales, spent),
            None => Decision::certified(cert(Verdict::No, Witness::ForcedPath { word: names(&w) }, None), spent),
        });
    }

    if let ModelKind::FreeAbelian(_) = group.model_kind() {
        let Some(Element::Vector(t)) = group.canonical(&target) else {
            unreachable!("ℤ^d elements are vectors")
        };
        let m = box_margin as i64;
        let mut search = BoxSearch {
            steps: alphabet
                .letters()
                .map(|l| match group.letter_element(l) {
                    Some(Element::Vector(v)) => (l, v),
                    _ => unreachable!("ℤ^d letters are vectors"),
                })
                .collect(),
            g: &lifted,
            lo: t.iter().map(|x| (*x).min(0) - m).collect(),
            hi: t.iter().map(|x| (*x).max(0) + m).collect(),
            target: t,
            visited: HashSet::new(),
            word: Vec::new(),
            scales: Vec::new(),
            nodes: 0,
            limit: budget.max_nodes,
        };
        for &s in &starts {
            let origin = vec![0i64; search.target.len()];
            search.visited = HashSet::from([origin.clone()]);
            search.scales = vec![s];
            let r = search.dfs(origin);
            spent.nodes_expanded = search.nodes;
            match r {
                Err(OutOfBudget) => return Ok(Decision::unknown(spent)),
                Ok(true) => return Ok(found(&search.word, &search.scales, spent)),
                Ok(false) => {}
            }
        }
        let fp = box_fingerprint(
            group.descriptor(),
            &g.hash(),
            seed,
            &alphabet.format_word(p),
            &alphabet.format_word(q),
            box_margin,
            search.nodes,
        );
        return Ok(Decision::certified(
            cert(Verdict::No, Witness::BoxExhaustion { fingerprint: fp }, Some(box_margin)),
            spent,
        ));
    }

    let mut search = BoundedSearch {
        group,
        g: &lifted,
        letters: alphabet.letters().collect(),
        target,
        max: budget.max_snake_length,
        scales: Vec::new(),
        nodes: 0,
        limit: budget.max_nodes,
    };
    spent.max_length_searched = budget.max_snake_length;
    for &s in &starts {
        let mut walker = Walker::new(group);
        search.scales = vec![s];
        let r = search.dfs(&mut walker);
        spent.nodes_expanded = search.nodes;
        match r {
            Err(OutOfBudget) => return Ok(Decision::unknown(spent)),
            Ok(Some(word)) => return Ok(found(&word, &search.scales, spent)),
            Ok(None) => {}
        }
    }
    Ok(Decision::unknown(spent))
}

fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::new();
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// A tiling of the fixed word `w` from one of `starts`, lowest tiles first.
fn tile_path(g: &TilesetGraph, starts: &[usize], w: &[Letter]) -> Option<Vec<usize>> {
    let mut layers = vec![starts.to_vec()];
    for &l in w {
        let mut next: Vec<usize> = layers
            .last()
            .expect("non-empty")
            .iter()
            .flat_map(|&t| g.successors(t, l).iter().copied())
            .collect();
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            return None;
        }
        layers.push(next);
    }
    let mut scales = vec![layers.last().expect("non-empty")[0]];
    for i in (0..w.len()).rev() {
        let after = *scales.last().expect("non-empty");
        let t = *layers[i]
            .iter()
            .find(|&&t| g.successors(t, w[i]).contains(&after))
            .expect("layers are forward-reachable");
        scales.push(t);
    }
    scales.reverse();
    Some(scales)
}

/// Depth-first search over partial snakes inside a box. Node counting
/// mirrors the certificate replay: one node per expanded partial snake.
struct BoxSearch<'a> {
    steps: Vec<(Letter, Vec<i64>)>,
    g: &'a TilesetGraph,
    lo: Vec<i64>,
    hi: Vec<i64>,
    target: Vec<i64>,
    visited: HashSet<Vec<i64>>,
    word: Word,
    scales: Vec<usize>,
    nodes: u64,
    limit: u64,
}

impl BoxSearch<'_> {
    fn dfs(&mut self, pos: Vec<i64>) -> std::result::Result<bool, OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(OutOfBudget);
        }
        let tile = *self.scales.last().expect("non-empty");
        for si in 0..self.steps.len() {
            let l = self.steps[si].0;
            let next: Vec<i64> = pos.iter().zip(&self.steps[si].1).map(|(a, b)| a + b).collect();
            let outside = next.iter().zip(self.lo.iter().zip(&self.hi)).any(|(x, (a, b))| x < a || x > b);
            if outside || self.visited.contains(&next) {
                continue;
            }
            for e in self.g.edges().iter().filter(|e| e.from == tile && e.letter == l) {
                self.word.push(l);
                self.scales.push(e.to);
                if next == self.target {
                    return Ok(true);
                }
                self.visited.insert(next.clone());
                let r = self.dfs(next.clone());
                self.visited.remove(&next);
                if r? {
                    return Ok(true);
                }
                self.word.pop();
                self.scales.pop();
            }
        }
        Ok(false)
    }
}

/// Length-bounded search for groups without a box structure.
struct BoundedSearch<'a> {
    group: &'a GroupOracle,
    g: &'a TilesetGraph,
    letters: Vec<Letter>,
    target: Word,
    max: usize,
    scales: Vec<usize>,
    nodes: u64,
    limit: u64,
}

impl BoundedSearch<'_> {
    fn at_target(&self, w: &[Letter]) -> bool {
        let mut check = invert_word(w);
        check.extend_from_slice(&self.target);
        self.group.wp_check(&check).unwrap_or(false)
    }

    fn dfs(&mut self, walker: &mut Walker<'_>) -> std::result::Result<Option<Word>, OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(OutOfBudget);
        }
        if walker.len() == self.max {
            return Ok(None);
        }
        let tile = *self.scales.last().expect("non-empty");
        for li in 0..self.letters.len() {
            let l = self.letters[li];
            let succ = self.g.successors(tile, l).to_vec();
            if succ.is_empty() || !walker.try_push(l) {
                continue;
            }
            if self.at_target(walker.word()) {
                self.scales.push(succ[0]);
                return Ok(Some(walker.word().to_vec()));
            }
            for t in succ {
                self.scales.push(t);
                let r = self.dfs(walker);
                if let Some(w) = r? {
                    return Ok(Some(w));
                }
                self.scales.pop();
            }
            walker.pop();
        }
        Ok(None)
    }
}
