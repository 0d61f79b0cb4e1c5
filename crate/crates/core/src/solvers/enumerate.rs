//! Brute-force snake enumeration: every snake of a given length starting at
//! the identity.

use std::borrow::Cow;

use crate::alphabet::Letter;
use crate::error::Result;
use crate::groups::GroupOracle;
use crate::tilesets::{over_alphabet, Snake, TileAdjacency, TilesetGraph};

use super::walk::Walker;

/// Node budget exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutOfBudget;

type WordFilter<'a> = &'a dyn Fn(&[Letter]) -> bool;

/// Snake enumeration over one group and tileset. The tileset is lifted to the
/// group alphabet when needed.
pub struct SnakeSearch<'a> {
    group: &'a GroupOracle,
    g: Cow<'a, TilesetGraph>,
    seed: Option<usize>,
    filter: Option<WordFilter<'a>>,
    letters: Vec<Letter>,
}

impl<'a> SnakeSearch<'a> {
    pub fn new(group: &'a GroupOracle, g: &'a TilesetGraph) -> Result<Self> {
        Ok(SnakeSearch {
            group,
            g: over_alphabet(g, group.alphabet())?,
            seed: None,
            filter: None,
            letters: group.alphabet().letters().collect(),
        })
    }

    /// Fixes `ζ(0)` to the named tile.
    pub fn seed(mut self, tile: Option<&str>) -> Result<Self> {
        self.seed = tile.map(|t| self.g.tile_index(t)).transpose()?;
        Ok(self)
    }

    /// Restricts skeleton words to those accepted by a prefix-closed
    /// predicate (called on every prefix).
    pub fn word_filter(mut self, f: &'a dyn Fn(&[Letter]) -> bool) -> Self {
        self.filter = Some(f);
        self
    }

    pub fn tileset(&self) -> &TilesetGraph {
        &self.g
    }

    fn starts(&self) -> Vec<usize> {
        match self.seed {
            Some(s) => vec![s],
            None => (0..self.g.tile_count()).collect(),
        }
    }

    fn allowed(&self, w: &[Letter]) -> bool {
        self.filter.is_none_or(|f| f(w))
    }

    /// All snakes of length `n`, ordered by word (length-lex) then scales.
    pub fn enumerate(&self, n: usize) -> Vec<Snake> {
        let mut out = Vec::new();
        let mut walker = Walker::new(self.group);
        let mut scales = Vec::new();
        for t in self.starts() {
            scales.push(t);
            self.collect(n, &mut walker, &mut scales, &mut out);
            scales.pop();
        }
        out.sort_by(|a, b| a.word.cmp(&b.word).then_with(|| a.scales.cmp(&b.scales)));
        out
    }

    fn collect(&self, n: usize, walker: &mut Walker<'_>, scales: &mut Vec<usize>, out: &mut Vec<Snake>) {
        if walker.len() == n {
            out.push(Snake {
                base: Vec::new(),
                word: walker.word().to_vec(),
                scales: scales.clone(),
            });
            return;
        }
        let tile = *scales.last().expect("non-empty");
        for &l in &self.letters {
            let succ = self.g.successors(tile, l);
            if succ.is_empty() {
                continue;
            }
            let mut w = walker.word().to_vec();
            w.push(l);
            if !self.allowed(&w) || !walker.try_push(l) {
                continue;
            }
            for &t in succ {
                scales.push(t);
                self.collect(n, walker, scales, out);
                scales.pop();
            }
            walker.pop();
        }
    }

    /// Number of snakes at every length `0..=n`.
    pub fn count_levels(&self, n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n + 1];
        let mut init = vec![0u64; self.g.tile_count()];
        for t in self.starts() {
            init[t] += 1;
        }
        let mut nodes = 0;
        let mut walker = Walker::new(self.group);
        self.levels(n, &mut walker, &init, &mut counts, &mut nodes, u64::MAX)
            .expect("unbounded");
        counts
    }

    pub fn count(&self, n: usize) -> u64 {
        self.count_levels(n)[n]
    }

    fn levels(
        &self,
        n: usize,
        walker: &mut Walker<'_>,
        at: &[u64],
        counts: &mut [u64],
        nodes: &mut u64,
        limit: u64,
    ) -> std::result::Result<(), OutOfBudget> {
        *nodes += 1;
        if *nodes > limit {
            return Err(OutOfBudget);
        }
        counts[walker.len()] += at.iter().sum::<u64>();
        if walker.len() == n {
            return Ok(());
        }
        for &l in &self.letters {
            let mut next = vec![0u64; at.len()];
            let mut any = false;
            for (t, &c) in at.iter().enumerate() {
                if c > 0 {
                    for &u in self.g.successors(t, l) {
                        next[u] += c;
                        any = true;
                    }
                }
            }
            if !any {
                continue;
            }
            let mut w = walker.word().to_vec();
            w.push(l);
            if !self.allowed(&w) || !walker.try_push(l) {
                continue;
            }
            let r = self.levels(n, walker, &next, counts, nodes, limit);
            walker.pop();
            r?;
        }
        Ok(())
    }

    /// Is there a snake of length `n`? Counts visited nodes against `limit`.
    pub fn exists_within(&self, n: usize, nodes: &mut u64, limit: u64) -> std::result::Result<bool, OutOfBudget> {
        let mut init = vec![false; self.g.tile_count()];
        for t in self.starts() {
            init[t] = true;
        }
        let mut walker = Walker::new(self.group);
        self.exists_from(n, &mut walker, &init, nodes, limit)
    }

    pub fn exists(&self, n: usize) -> bool {
        self.exists_within(n, &mut 0, u64::MAX).expect("unbounded")
    }

    fn exists_from(
        &self,
        n: usize,
        walker: &mut Walker<'_>,
        at: &[bool],
        nodes: &mut u64,
        limit: u64,
    ) -> std::result::Result<bool, OutOfBudget> {
        *nodes += 1;
        if *nodes > limit {
            return Err(OutOfBudget);
        }
        if !at.iter().any(|b| *b) {
            return Ok(false);
        }
        if walker.len() == n {
            return Ok(true);
        }
        for &l in &self.letters {
            let mut next = vec![false; at.len()];
            for (t, _) in at.iter().enumerate().filter(|(_, b)| **b) {
                for &u in self.g.successors(t, l) {
                    next[u] = true;
                }
            }
            if !next.iter().any(|b| *b) {
                continue;
            }
            let mut w = walker.word().to_vec();
            w.push(l);
            if !self.allowed(&w) || !walker.try_push(l) {
                continue;
            }
            let r = self.exists_from(n, walker, &next, nodes, limit);
            walker.pop();
            if r? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// All snakes of length `n` from the identity, optionally seeded.
pub fn enumerate_snakes(group: &GroupOracle, g: &TilesetGraph, n: usize, seed: Option<&str>) -> Result<Vec<Snake>> {
    Ok(SnakeSearch::new(group, g)?.seed(seed)?.enumerate(n))
}

pub fn count_snakes(group: &GroupOracle, g: &TilesetGraph, n: usize, seed: Option<&str>) -> Result<u64> {
    Ok(SnakeSearch::new(group, g)?.seed(seed)?.count(n))
}
