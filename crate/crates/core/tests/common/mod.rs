//! Shared fixtures for the integration tests: seeded random instances and
//! brute-force oracles written against plain coordinates and reduced words,
//! without going through the solver code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use domino_snakes::alphabet::{GeneratorAlphabet, Letter};
use domino_snakes::tilesets::TilesetGraph;
use domino_snakes::wang::{WangTile, WangTileSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ab() -> GeneratorAlphabet {
    GeneratorAlphabet::new(&["a", "b"]).unwrap()
}

/// Tiles `t0 … t{k-1}`, `1 ≤ k ≤ max_tiles`; every generator edge present
/// with probability `density`.
pub fn random_graph(rng: &mut ChaCha8Rng, alphabet: &GeneratorAlphabet, max_tiles: usize, density: f64) -> TilesetGraph {
    let k = rng.gen_range(1..=max_tiles);
    let names: Vec<String> = (0..k).map(|i| format!("t{i}")).collect();
    let mut g = TilesetGraph::new(alphabet.clone(), &names).unwrap();
    for s in alphabet.generators().collect::<Vec<_>>() {
        for u in 0..k {
            for v in 0..k {
                if rng.gen_bool(density) {
                    g.add_edge(u, v, s).unwrap();
                }
            }
        }
    }
    g
}

pub fn random_wang(rng: &mut ChaCha8Rng) -> WangTileSet {
    let alphabet = ab();
    let colors = rng.gen_range(1..=3usize);
    let tiles = (0..rng.gen_range(1..=4usize))
        .map(|i| WangTile {
            name: format!("w{i}"),
            sides: (0..alphabet.letter_count()).map(|_| rng.gen_range(0..colors)).collect(),
        })
        .collect();
    WangTileSet::new(alphabet, (0..colors).map(|c| format!("c{c}")).collect(), tiles).unwrap()
}

/// `adj[tile][letter]`, read off the raw edge list.
pub fn adjacency(g: &TilesetGraph) -> Vec<Vec<Vec<usize>>> {
    let mut adj = vec![vec![Vec::new(); g.alphabet().letter_count()]; g.tiles().len()];
    for e in g.edges() {
        adj[e.from][e.letter.index()].push(e.to);
    }
    adj
}

/// Unit step of a letter of `{a, b}^±` in ℤ².
pub fn z2_step(l: Letter) -> (i64, i64) {
    let (x, y) = if l.generator_index() == 0 { (1, 0) } else { (0, 1) };
    if l.is_inverse() {
        (-x, -y)
    } else {
        (x, y)
    }
}

pub fn z2_letters() -> Vec<Letter> {
    (0..4).map(|i| Letter(i as u32)).collect()
}

/// Every self-avoiding step word of length exactly `n` in ℤ² using `letters`.
pub fn z2_saw_words(n: usize, letters: &[Letter]) -> Vec<Vec<Letter>> {
    fn go(n: usize, letters: &[Letter], pos: (i64, i64), seen: &mut HashSet<(i64, i64)>, w: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if w.len() == n {
            out.push(w.clone());
            return;
        }
        for &l in letters {
            let d = z2_step(l);
            let p = (pos.0 + d.0, pos.1 + d.1);
            if seen.insert(p) {
                w.push(l);
                go(n, letters, p, seen, w, out);
                w.pop();
                seen.remove(&p);
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = HashSet::from([(0, 0)]);
    go(n, letters, (0, 0), &mut seen, &mut Vec::new(), &mut out);
    out
}

/// Number of tile sequences along `w` allowed by `ok(from, letter, to)`.
pub fn tilings_along(tiles: usize, w: &[Letter], ok: &dyn Fn(usize, Letter, usize) -> bool) -> u64 {
    let mut at = vec![1u64; tiles];
    for &l in w {
        let mut next = vec![0u64; tiles];
        for (u, &c) in at.iter().enumerate() {
            for (v, n) in next.iter_mut().enumerate() {
                if ok(u, l, v) {
                    *n += c;
                }
            }
        }
        at = next;
    }
    at.iter().sum()
}

/// Snake counts at lengths `0..=n` in ℤ² for an arbitrary adjacency predicate.
pub fn z2_counts(n: usize, tiles: usize, ok: &dyn Fn(usize, Letter, usize) -> bool) -> Vec<u64> {
    (0..=n)
        .map(|len| z2_saw_words(len, &z2_letters()).iter().map(|w| tilings_along(tiles, w, ok)).sum())
        .collect()
}

/// Is there a snake of length exactly `n` in ℤ² whose steps use only `letters`?
pub fn z2_snake_exists(g: &TilesetGraph, n: usize, letters: &[Letter]) -> bool {
    fn go(adj: &[Vec<Vec<usize>>], n: usize, letters: &[Letter], pos: (i64, i64), tile: usize, seen: &mut HashSet<(i64, i64)>, len: usize) -> bool {
        if len == n {
            return true;
        }
        for &l in letters {
            let d = z2_step(l);
            let p = (pos.0 + d.0, pos.1 + d.1);
            if adj[tile][l.index()].is_empty() || !seen.insert(p) {
                continue;
            }
            let found = adj[tile][l.index()].iter().any(|&t| go(adj, n, letters, p, t, seen, len + 1));
            seen.remove(&p);
            if found {
                return true;
            }
        }
        false
    }
    let adj = adjacency(g);
    (0..g.tiles().len()).any(|t| go(&adj, n, letters, (0, 0), t, &mut HashSet::from([(0, 0)]), 0))
}

/// Simple closed tiled walks of length `n` in ℤ² returning to the start tile.
pub fn z2_loop_exists(g: &TilesetGraph, n: usize) -> bool {
    fn go(adj: &[Vec<Vec<usize>>], n: usize, start: usize, pos: (i64, i64), tile: usize, seen: &mut HashSet<(i64, i64)>, len: usize) -> bool {
        let far = pos.0.abs() + pos.1.abs();
        if far as usize > n - len {
            return false;
        }
        for l in z2_letters() {
            let d = z2_step(l);
            let p = (pos.0 + d.0, pos.1 + d.1);
            for &t in &adj[tile][l.index()] {
                if len + 1 == n {
                    if p == (0, 0) && t == start {
                        return true;
                    }
                } else if !seen.contains(&p) {
                    seen.insert(p);
                    let found = go(adj, n, start, p, t, seen, len + 1);
                    seen.remove(&p);
                    if found {
                        return true;
                    }
                }
            }
        }
        false
    }
    let adj = adjacency(g);
    (0..g.tiles().len()).any(|t| go(&adj, n, t, (0, 0), t, &mut HashSet::from([(0, 0)]), 0))
}

/// Is there a snake of length exactly `n` in the free group on the
/// alphabet of `g`? Free-group walks are self-avoiding iff freely reduced.
pub fn free_snake_exists(g: &TilesetGraph, n: usize) -> bool {
    fn go(adj: &[Vec<Vec<usize>>], letters: usize, n: usize, tile: usize, last: Option<Letter>, len: usize) -> bool {
        if len == n {
            return true;
        }
        (0..letters as u32).map(Letter).any(|l| {
            last != Some(l.inverse()) && adj[tile][l.index()].iter().any(|&t| go(adj, letters, n, t, Some(l), len + 1))
        })
    }
    let adj = adjacency(g);
    let letters = g.alphabet().letter_count();
    (0..g.tiles().len()).any(|t| go(&adj, letters, n, t, None, 0))
}

/// Distinct `(word, tiles)` pairs in the image of `project` over snakes of
/// a Wang graph, enumerated per skeleton word by carrying the set of Wang
/// tiles that realize each projected prefix.
pub fn projected_wang_count(
    w: &WangTileSet,
    projection: &[usize],
    word: &[Letter],
) -> u64 {
    let tiles = w.tiles();
    let matches = |u: usize, l: Letter, v: usize| tiles[u].sides[l.index()] == tiles[v].sides[l.inverse().index()];
    fn go(
        word: &[Letter],
        i: usize,
        frontier: &BTreeSet<usize>,
        projection: &[usize],
        matches: &dyn Fn(usize, Letter, usize) -> bool,
        count: &mut u64,
    ) {
        if i == word.len() {
            *count += 1;
            return;
        }
        let mut by_tile: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        for &u in frontier {
            for (v, &p) in projection.iter().enumerate() {
                if matches(u, word[i], v) {
                    by_tile.entry(p).or_default().insert(v);
                }
            }
        }
        for next in by_tile.values() {
            go(word, i + 1, next, projection, matches, count);
        }
    }
    let mut starts: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
    for (v, &p) in projection.iter().enumerate() {
        starts.entry(p).or_default().insert(v);
    }
    let mut count = 0;
    for f in starts.values() {
        go(word, 0, f, projection, &matches, &mut count);
    }
    count
}
