//! Wang tiles over `S ∪ S⁻¹` and the snake-preserving conversions to and
//! from tileset graphs.

use std::collections::BTreeSet;

use crate::alphabet::{GeneratorAlphabet, Letter};
use crate::error::{Error, Result};
use crate::tilesets::{TileAdjacency, TilesetGraph};

/// Default cap on the number of Wang tiles [`graph_to_wang`] may emit.
pub const DEFAULT_TILE_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WangTile {
    pub name: String,
    /// `sides[letter]` is a color index; one entry per letter of `S ∪ S⁻¹`.
    pub sides: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WangTileSet {
    alphabet: GeneratorAlphabet,
    colors: Vec<String>,
    tiles: Vec<WangTile>,
}

impl WangTileSet {
    pub fn new(alphabet: GeneratorAlphabet, colors: Vec<String>, tiles: Vec<WangTile>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for t in &tiles {
            if !names.insert(t.name.as_str()) {
                return Err(Error::Precondition(format!("duplicate Wang tile `{}`", t.name)));
            }
            if t.sides.len() != alphabet.letter_count() {
                return Err(Error::Precondition(format!(
                    "Wang tile `{}` must color all {} sides",
                    t.name,
                    alphabet.letter_count()
                )));
            }
            if let Some(c) = t.sides.iter().find(|c| **c >= colors.len()) {
                return Err(Error::Precondition(format!(
                    "Wang tile `{}` uses undeclared color #{c}",
                    t.name
                )));
            }
        }
        Ok(WangTileSet {
            alphabet,
            colors,
            tiles,
        })
    }

    /// Builds a tile set from `(name, [(letter name, color name)])` entries;
    /// colors are collected in order of first use.
    pub fn from_named<S: AsRef<str>>(
        alphabet: GeneratorAlphabet,
        tiles: &[(S, Vec<(S, S)>)],
    ) -> Result<Self> {
        let mut colors: Vec<String> = Vec::new();
        let mut out = Vec::new();
        for (name, sides) in tiles {
            let mut assigned = vec![None; alphabet.letter_count()];
            for (l, c) in sides {
                let l = alphabet.letter(l.as_ref())?;
                let idx = match colors.iter().position(|x| x == c.as_ref()) {
                    Some(i) => i,
                    None => {
                        colors.push(c.as_ref().to_string());
                        colors.len() - 1
                    }
                };
                assigned[l.index()] = Some(idx);
            }
            let sides = assigned
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    c.ok_or_else(|| {
                        Error::Precondition(format!(
                            "Wang tile `{}` has no color for `{}`",
                            name.as_ref(),
                            alphabet.name(Letter(i as u32))
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(WangTile {
                name: name.as_ref().to_string(),
                sides,
            });
        }
        Self::new(alphabet, colors, out)
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn tiles(&self) -> &[WangTile] {
        &self.tiles
    }

    pub fn color(&self, tile: usize, letter: Letter) -> &str {
        &self.colors[self.tiles[tile].sides[letter.index()]]
    }

    /// Text form with tiles and colors sorted by name.
    pub fn to_text(&self) -> String {
        let mut out = format!("generators: {}\n", self.alphabet);
        let mut colors = self.colors.clone();
        colors.sort();
        out.push_str(&format!("colors: {}\n", colors.join(" ")));
        let mut order: Vec<usize> = (0..self.tiles.len()).collect();
        order.sort_by(|a, b| self.tiles[*a].name.cmp(&self.tiles[*b].name));
        for t in order {
            let sides: Vec<String> = self
                .alphabet
                .letters()
                .map(|l| format!("{}={}", self.alphabet.name(l), self.color(t, l)))
                .collect();
            out.push_str(&format!("tile: {} {}\n", self.tiles[t].name, sides.join(" ")));
        }
        out
    }
}

/// Tileset graph on the same tiles with an edge `(θ₁, θ₂, s)` exactly when
/// `θ₁` and `θ₂` agree on the shared side (`θ₁(s) = θ₂(s⁻¹)`).
pub fn wang_to_graph(w: &WangTileSet) -> TilesetGraph {
    let names: Vec<&str> = w.tiles.iter().map(|t| t.name.as_str()).collect();
    let mut g = TilesetGraph::new(w.alphabet.clone(), &names).expect("Wang tile names are unique");
    for (i, t1) in w.tiles.iter().enumerate() {
        for (j, t2) in w.tiles.iter().enumerate() {
            for s in w.alphabet.letters() {
                if t1.sides[s.index()] == t2.sides[s.inverse().index()] {
                    g.add_edge(i, j, s).expect("indices in range");
                }
            }
        }
    }
    g
}

/// Result of [`graph_to_wang`]: the tile set and, for every Wang tile, the
/// graph tile it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WangEncoding {
    pub tiles: WangTileSet,
    pub projection: Vec<usize>,
}

/// Encodes a tileset graph as Wang tiles `θ_{a,N}`, one per tile `a` and
/// neighborhood `N` choosing, for each letter, either an `s`-successor of `a`
/// or nothing.
///
/// The side of `θ_{a,N}` along a generator `s` is colored by the edge
/// `(a, N_s, s)`; along `s⁻¹` by `(N_{s⁻¹}, a, s)`. An empty slot gets a color
/// used nowhere else, so it matches no side at all.
pub fn graph_to_wang(g: &TilesetGraph, tile_budget: usize) -> Result<WangEncoding> {
    if let Err(v) = g.validate() {
        return Err(Error::Precondition(format!(
            "tileset is not valid: {}",
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    let alphabet = g.alphabet();
    let letters: Vec<Letter> = alphabet.letters().collect();
    let total: u128 = (0..g.tile_count())
        .map(|a| {
            letters
                .iter()
                .map(|&s| g.successors(a, s).len() as u128 + 1)
                .product::<u128>()
        })
        .sum();
    if total > tile_budget as u128 {
        return Err(Error::TooLarge {
            what: "graph_to_wang",
            size: total,
            limit: tile_budget as u128,
        });
    }

    let mut colors: Vec<String> = Vec::new();
    let mut color_index = std::collections::HashMap::new();
    let mut intern = |c: String, colors: &mut Vec<String>| -> usize {
        *color_index.entry(c.clone()).or_insert_with(|| {
            colors.push(c);
            colors.len() - 1
        })
    };

    let mut tiles = Vec::new();
    let mut projection = Vec::new();
    for a in 0..g.tile_count() {
        let options: Vec<Vec<Option<usize>>> = letters
            .iter()
            .map(|&s| {
                std::iter::once(None)
                    .chain(g.successors(a, s).iter().map(|&b| Some(b)))
                    .collect()
            })
            .collect();
        let mut choice = vec![0usize; letters.len()];
        let mut k = 0usize;
        loop {
            let name = format!("{}.{}", g.tile_name(a), k);
            let sides = letters
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let c = match options[i][choice[i]] {
                        Some(b) if !s.is_inverse() => format!(
                            "{}>{}:{}",
                            g.tile_name(a),
                            g.tile_name(b),
                            alphabet.name(s)
                        ),
                        Some(b) => format!(
                            "{}>{}:{}",
                            g.tile_name(b),
                            g.tile_name(a),
                            alphabet.name(s.inverse())
                        ),
                        None => format!("~{}:{}", name, alphabet.name(s)),
                    };
                    intern(c, &mut colors)
                })
                .collect();
            tiles.push(WangTile { name, sides });
            projection.push(a);
            k += 1;

            // odometer over the per-letter choices, last letter fastest
            let mut pos = letters.len();
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < options[pos].len() {
                    done = false;
                    break;
                }
                choice[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(WangEncoding {
        tiles: WangTileSet::new(alphabet.clone(), colors, tiles)?,
        projection,
    })
}

/// The staircase tileset as Wang tiles: `t1`'s `a` side meets `t2`'s `a⁻¹` side and `t2`'s
/// `b` side meets `t1`'s `b⁻¹` side; nothing else matches.
pub fn fig1_wang() -> WangTileSet {
    let ab = GeneratorAlphabet::new(&["a", "b"]).expect("static alphabet");
    WangTileSet::from_named(
        ab,
        &[
            (
                "t1",
                vec![("a", "blue"), ("a^-1", "yellow"), ("b", "green"), ("b^-1", "red")],
            ),
            (
                "t2",
                vec![("a", "orange"), ("a^-1", "blue"), ("b", "red"), ("b^-1", "purple")],
            ),
        ],
    )
    .expect("static tiles")
}
