//! Tileset graphs, snakes, and the generator-lift reduction.

use std::collections::BTreeSet;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::alphabet::{GeneratorAlphabet, Letter, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub letter: Letter,
}

/// Anything that can answer "which tiles may follow tile `t` along letter `s`".
pub trait TileAdjacency {
    fn tile_count(&self) -> usize;
    fn letter_count(&self) -> usize;
    fn successors(&self, tile: usize, letter: Letter) -> &[usize];
}

/// A finite multigraph `Γ = (A, B)` with edges labelled by letters of
/// `S ∪ S⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilesetGraph {
    alphabet: GeneratorAlphabet,
    tiles: Vec<String>,
    edges: Vec<Edge>,
    // adjacency[tile][letter] = sorted successor tiles
    adjacency: Vec<Vec<Vec<usize>>>,
}

/// A broken invariant reported by [`TilesetGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingInverse { edge: String },
    DuplicateEdge { edge: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingInverse { edge } => write!(f, "{edge} lacks inverse"),
            Violation::DuplicateEdge { edge } => write!(f, "{edge} occurs more than once"),
        }
    }
}

impl TilesetGraph {
    /// An edgeless tileset.
    pub fn new<S: AsRef<str>>(alphabet: GeneratorAlphabet, tiles: &[S]) -> Result<Self> {
        let tiles: Vec<String> = tiles.iter().map(|t| t.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for t in &tiles {
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(Error::Precondition(format!("bad tile name `{t}`")));
            }
            if !seen.insert(t.as_str()) {
                return Err(Error::Precondition(format!("duplicate tile `{t}`")));
            }
        }
        let adjacency = vec![vec![Vec::new(); alphabet.letter_count()]; tiles.len()];
        Ok(TilesetGraph {
            alphabet,
            tiles,
            edges: Vec::new(),
            adjacency,
        })
    }

    /// Stores `edges` verbatim, without closing them under inversion. Use
    /// [`TilesetGraph::validate`] to inspect the result.
    pub fn from_raw_edges<S: AsRef<str>>(
        alphabet: GeneratorAlphabet,
        tiles: &[S],
        edges: Vec<Edge>,
    ) -> Result<Self> {
        let mut g = Self::new(alphabet, tiles)?;
        for e in edges {
            g.check_edge(e)?;
            g.edges.push(e);
            let succ = &mut g.adjacency[e.from][e.letter.index()];
            if let Err(pos) = succ.binary_search(&e.to) {
                succ.insert(pos, e.to);
            }
        }
        Ok(g)
    }

    fn check_edge(&self, e: Edge) -> Result<()> {
        if e.from >= self.tiles.len() || e.to >= self.tiles.len() {
            return Err(Error::UnknownTile(format!("#{}", e.from.max(e.to))));
        }
        self.alphabet.check_word(&[e.letter])
    }

    fn insert_one(&mut self, e: Edge) {
        let succ = &mut self.adjacency[e.from][e.letter.index()];
        if let Err(pos) = succ.binary_search(&e.to) {
            succ.insert(pos, e.to);
            self.edges.push(e);
        }
    }

    /// Adds `(from, to, s)` together with `(to, from, s⁻¹)`. Re-adding an
    /// existing edge is a no-op.
    pub fn add_edge(&mut self, from: usize, to: usize, letter: Letter) -> Result<()> {
        let e = Edge { from, to, letter };
        self.check_edge(e)?;
        self.insert_one(e);
        self.insert_one(Edge {
            from: to,
            to: from,
            letter: letter.inverse(),
        });
        Ok(())
    }

    pub fn add_edge_by_name(&mut self, from: &str, to: &str, letter: &str) -> Result<()> {
        let f = self.tile_index(from)?;
        let t = self.tile_index(to)?;
        let l = self.alphabet.letter(letter)?;
        self.add_edge(f, t, l)
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn tiles(&self) -> &[String] {
        &self.tiles
    }

    pub fn tile_name(&self, t: usize) -> &str {
        &self.tiles[t]
    }

    pub fn tile_index(&self, name: &str) -> Result<usize> {
        self.tiles
            .iter()
            .position(|t| t == name)
            .ok_or_else(|| Error::UnknownTile(name.to_string()))
    }

    /// Edges in insertion order (including duplicates for raw graphs).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, from: usize, to: usize, letter: Letter) -> bool {
        self.adjacency
            .get(from)
            .and_then(|a| a.get(letter.index()))
            .is_some_and(|s| s.binary_search(&to).is_ok())
    }

    pub fn format_edge(&self, e: Edge) -> String {
        format!(
            "({},{},{})",
            self.tiles[e.from],
            self.tiles[e.to],
            self.alphabet.name(e.letter)
        )
    }

    /// Checks closure under inversion and uniqueness of edge triples.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        let mut seen = BTreeSet::new();
        for &e in &self.edges {
            if !seen.insert(e) {
                violations.push(Violation::DuplicateEdge {
                    edge: self.format_edge(e),
                });
            }
        }
        for &e in &seen {
            if !self.has_edge(e.to, e.from, e.letter.inverse()) {
                violations.push(Violation::MissingInverse {
                    edge: self.format_edge(e),
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Distinct edges sorted by `(from name, to name, letter name)`.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let set: BTreeSet<Edge> = self.edges.iter().copied().collect();
        let mut v: Vec<Edge> = set.into_iter().collect();
        v.sort_by(|x, y| {
            (&self.tiles[x.from], &self.tiles[x.to], self.alphabet.name(x.letter)).cmp(&(
                &self.tiles[y.from],
                &self.tiles[y.to],
                self.alphabet.name(y.letter),
            ))
        });
        v
    }

    /// Deterministic text form: tiles and edges sorted lexicographically,
    /// only generator-labelled edges listed (inverses are implied).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("generators: {}\n", self.alphabet));
        let mut tiles = self.tiles.clone();
        tiles.sort();
        out.push_str(&format!("tiles: {}\n", tiles.join(" ")));
        for e in self.sorted_edges() {
            if !e.letter.is_inverse() {
                out.push_str(&format!(
                    "edge: {} {} {}\n",
                    self.tiles[e.from],
                    self.tiles[e.to],
                    self.alphabet.name(e.letter)
                ));
            }
        }
        out
    }

    /// Lowercase hex SHA-256 of [`TilesetGraph::to_text`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

impl TileAdjacency for TilesetGraph {
    fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    fn letter_count(&self) -> usize {
        self.alphabet.letter_count()
    }

    fn successors(&self, tile: usize, letter: Letter) -> &[usize] {
        &self.adjacency[tile][letter.index()]
    }
}

/// Reinterprets `g` over a larger alphabet. No edges are added for the new
/// symbols, so snakes of `g` are exactly the snakes of the lift.
pub fn lift_tileset(g: &TilesetGraph, target: &GeneratorAlphabet) -> Result<TilesetGraph> {
    let map = g.alphabet.embedding_into(target)?;
    let edges = g
        .edges
        .iter()
        .map(|e| Edge {
            from: e.from,
            to: e.to,
            letter: map[e.letter.index()],
        })
        .collect();
    TilesetGraph::from_raw_edges(target.clone(), &g.tiles, edges)
}

/// Returns `g` itself when it already uses `target`, otherwise its lift.
pub(crate) fn over_alphabet<'a>(
    g: &'a TilesetGraph,
    target: &GeneratorAlphabet,
) -> Result<std::borrow::Cow<'a, TilesetGraph>> {
    if g.alphabet() == target {
        Ok(std::borrow::Cow::Borrowed(g))
    } else {
        Ok(std::borrow::Cow::Owned(lift_tileset(g, target)?))
    }
}

/// A finite snake normalized to start at `base` (usually the identity):
/// `scales[i]` sits at `base · word[..i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Snake {
    pub base: Word,
    pub word: Word,
    pub scales: Vec<usize>,
}

impl Snake {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Consecutive scales are joined by edges labelled with the step letters.
    pub fn is_consistent<A: TileAdjacency>(&self, adj: &A) -> bool {
        self.scales.len() == self.word.len() + 1
            && self.scales.iter().all(|t| *t < adj.tile_count())
            && self
                .word
                .iter()
                .enumerate()
                .all(|(i, l)| adj.successors(self.scales[i], *l).contains(&self.scales[i + 1]))
    }
}

/// The small tilesets used throughout the docs and tests.
pub mod fixtures {
    use super::*;

    fn ab() -> GeneratorAlphabet {
        GeneratorAlphabet::new(&["a", "b"]).expect("static alphabet")
    }

    /// Two tiles that snake along a staircase in ℤ² but do not tile it:
    /// `t1 -a-> t2`, `t2 -b-> t1`, plus inverses.
    pub fn fig1() -> TilesetGraph {
        let mut g = TilesetGraph::new(ab(), &["t1", "t2"]).expect("static tiles");
        g.add_edge_by_name("t1", "t2", "a").expect("static edge");
        g.add_edge_by_name("t2", "t1", "b").expect("static edge");
        g
    }

    /// One tile with self-loops on every letter of `{a, b}`.
    pub fn loopy() -> TilesetGraph {
        let mut g = TilesetGraph::new(ab(), &["t"]).expect("static tiles");
        g.add_edge_by_name("t", "t", "a").expect("static edge");
        g.add_edge_by_name("t", "t", "b").expect("static edge");
        g
    }

    /// Two tiles over `{a}` with only `t1 -a-> t2` and its inverse, so every
    /// walk of length two backtracks.
    pub fn pingpong() -> TilesetGraph {
        let a = GeneratorAlphabet::new(&["a"]).expect("static alphabet");
        let mut g = TilesetGraph::new(a, &["t1", "t2"]).expect("static tiles");
        g.add_edge_by_name("t1", "t2", "a").expect("static edge");
        g
    }
}
