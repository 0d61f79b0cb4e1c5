//! Line-based text formats for tilesets, Wang tile sets and automata.
//!
//! Every format is UTF-8, one `key: value` directive per line, with `#`
//! starting a comment. Errors report 1-based line and column.

use crate::alphabet::{GeneratorAlphabet, Letter};
use crate::automata::{Exactness, SkeletonAutomaton, Transition};
use crate::error::{Error, Result};
use crate::tilesets::TilesetGraph;
use crate::wang::{WangTile, WangTileSet};

/// One whitespace-separated token with its 1-based column.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub column: usize,
}

#[derive(Debug)]
pub(crate) struct Directive<'a> {
    pub line: usize,
    pub key: &'a str,
    pub key_column: usize,
    pub tokens: Vec<Token<'a>>,
    /// Raw value after the colon, comment stripped and trimmed.
    pub value: &'a str,
    pub value_column: usize,
}

impl Directive<'_> {
    pub fn error(&self, column: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.line, column, msg)
    }

    pub fn expect_tokens(&self, n: usize, shape: &str) -> Result<()> {
        if self.tokens.len() != n {
            let col = self.tokens.get(n).map_or(self.value_column, |t| t.column);
            return Err(self.error(col, format!("expected `{}: {shape}`", self.key)));
        }
        Ok(())
    }
}

fn column_of(line: &str, sub: &str) -> usize {
    let offset = sub.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

/// Splits a document into directives, skipping blank and comment lines.
pub(crate) fn directives(text: &str) -> Result<Vec<Directive<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(colon) = body.find(':') else {
            let col = column_of(raw, body.trim_start());
            return Err(Error::parse(line, col, "expected `key: value`"));
        };
        let key_part = &body[..colon];
        let key = key_part.trim();
        let value_raw = &body[colon + 1..];
        let value = value_raw.trim();
        let tokens = value_raw
            .split_whitespace()
            .map(|t| Token {
                text: t,
                column: column_of(raw, t),
            })
            .collect();
        out.push(Directive {
            line,
            key,
            key_column: column_of(raw, key_part.trim_start()),
            tokens,
            value,
            value_column: if value.is_empty() {
                colon + 2
            } else {
                column_of(raw, value)
            },
        });
    }
    Ok(out)
}

pub(crate) fn parse_alphabet(d: &Directive<'_>) -> Result<GeneratorAlphabet> {
    if d.tokens.is_empty() {
        return Err(d.error(d.value_column, "no generators listed"));
    }
    let names: Vec<&str> = d.tokens.iter().map(|t| t.text).collect();
    GeneratorAlphabet::new(&names).map_err(|e| d.error(d.value_column, e.to_string()))
}

pub(crate) fn letter(alphabet: &GeneratorAlphabet, d: &Directive<'_>, t: Token<'_>) -> Result<Letter> {
    alphabet
        .letter(t.text)
        .map_err(|_| d.error(t.column, format!("unknown letter `{}`", t.text)))
}

pub(crate) fn unknown_key(d: &Directive<'_>) -> Error {
    d.error(d.key_column, format!("unknown directive `{}`", d.key))
}

pub(crate) fn need<'a, T>(v: &'a Option<T>, d: &Directive<'_>, what: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| d.error(d.key_column, format!("`{}` before `{what}`", d.key)))
}

/// Parses `generators:` / `tiles:` / `edge: FROM TO LETTER` lines. Inverse
/// edges are added automatically; restating one is harmless.
pub fn parse_tileset(text: &str) -> Result<TilesetGraph> {
    let mut alphabet: Option<GeneratorAlphabet> = None;
    let mut tiles: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, Directive<'_>)> = Vec::new();
    for d in directives(text)? {
        match d.key {
            "generators" => {
                if alphabet.is_some() {
                    return Err(d.error(d.key_column, "duplicate `generators`"));
                }
                alphabet = Some(parse_alphabet(&d)?);
            }
            "tiles" => {
                for t in &d.tokens {
                    if tiles.iter().any(|x| x == t.text) {
                        return Err(d.error(t.column, format!("duplicate tile `{}`", t.text)));
                    }
                    tiles.push(t.text.to_string());
                }
            }
            "edge" => {
                need(&alphabet, &d, "generators")?;
                d.expect_tokens(3, "FROM TO LETTER")?;
                edges.push((d.line, d));
            }
            _ => return Err(unknown_key(&d)),
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::parse(1, 1, "missing `generators`"))?;
    let mut g = TilesetGraph::new(alphabet.clone(), &tiles).map_err(|e| Error::parse(1, 1, e.to_string()))?;
    for (_, d) in &edges {
        let tile = |t: Token<'_>| {
            g.tile_index(t.text)
                .map_err(|_| d.error(t.column, format!("unknown tile `{}`", t.text)))
        };
        let from = tile(d.tokens[0])?;
        let to = tile(d.tokens[1])?;
        let l = letter(&alphabet, d, d.tokens[2])?;
        g.add_edge(from, to, l)?;
    }
    Ok(g)
}

/// Parses `generators:` / `colors:` / `tile: NAME s=COLOR ...` lines. Every
/// tile must color every letter with a declared color.
pub fn parse_wang(text: &str) -> Result<WangTileSet> {
    let mut alphabet: Option<GeneratorAlphabet> = None;
    let mut colors: Vec<String> = Vec::new();
    let mut tiles: Vec<WangTile> = Vec::new();
    for d in directives(text)? {
        match d.key {
            "generators" => {
                if alphabet.is_some() {
                    return Err(d.error(d.key_column, "duplicate `generators`"));
                }
                alphabet = Some(parse_alphabet(&d)?);
            }
            "colors" => {
                for t in &d.tokens {
                    if colors.iter().any(|c| c == t.text) {
                        return Err(d.error(t.column, format!("duplicate color `{}`", t.text)));
                    }
                    colors.push(t.text.to_string());
                }
            }
            "tile" => {
                let alphabet = need(&alphabet, &d, "generators")?;
                let Some((name, sides)) = d.tokens.split_first() else {
                    return Err(d.error(d.value_column, "expected `tile: NAME s=COLOR ...`"));
                };
                if tiles.iter().any(|t| t.name == name.text) {
                    return Err(d.error(name.column, format!("duplicate tile `{}`", name.text)));
                }
                let mut assigned: Vec<Option<usize>> = vec![None; alphabet.letter_count()];
                for t in sides {
                    let Some((l, c)) = t.text.split_once('=') else {
                        return Err(d.error(t.column, format!("expected `letter=color`, found `{}`", t.text)));
                    };
                    let l = alphabet
                        .letter(l)
                        .map_err(|_| d.error(t.column, format!("unknown letter `{l}`")))?;
                    let c = colors
                        .iter()
                        .position(|x| x == c)
                        .ok_or_else(|| d.error(t.column, format!("undeclared color `{c}`")))?;
                    if assigned[l.index()].replace(c).is_some() {
                        return Err(d.error(t.column, format!("side `{}` colored twice", alphabet.name(l))));
                    }
                }
                let sides = assigned
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.ok_or_else(|| {
                            d.error(
                                d.value_column,
                                format!("tile `{}` has no color for `{}`", name.text, alphabet.name(Letter(i as u32))),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                tiles.push(WangTile {
                    name: name.text.to_string(),
                    sides,
                });
            }
            _ => return Err(unknown_key(&d)),
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::parse(1, 1, "missing `generators`"))?;
    WangTileSet::new(alphabet, colors, tiles).map_err(|e| Error::parse(1, 1, e.to_string()))
}

/// Parses `alphabet:` / `state:` / `trans: FROM LETTER TO` lines into a
/// user-supplied automaton.
pub fn parse_automaton(text: &str) -> Result<SkeletonAutomaton> {
    let mut alphabet: Option<GeneratorAlphabet> = None;
    let mut states: Vec<String> = Vec::new();
    let mut transitions = Vec::new();
    let mut pending = Vec::new();
    for d in directives(text)? {
        match d.key {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(d.error(d.key_column, "duplicate `alphabet`"));
                }
                alphabet = Some(parse_alphabet(&d)?);
            }
            "state" => {
                if d.tokens.is_empty() {
                    return Err(d.error(d.value_column, "expected `state: NAME`"));
                }
                for t in &d.tokens {
                    if states.iter().any(|s| s == t.text) {
                        return Err(d.error(t.column, format!("duplicate state `{}`", t.text)));
                    }
                    states.push(t.text.to_string());
                }
            }
            "trans" => {
                need(&alphabet, &d, "alphabet")?;
                d.expect_tokens(3, "FROM LETTER TO")?;
                pending.push(d);
            }
            _ => return Err(unknown_key(&d)),
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::parse(1, 1, "missing `alphabet`"))?;
    for d in &pending {
        let state = |t: Token<'_>| {
            states
                .iter()
                .position(|s| s == t.text)
                .ok_or_else(|| d.error(t.column, format!("unknown state `{}`", t.text)))
        };
        transitions.push(Transition {
            from: state(d.tokens[0])?,
            letter: letter(&alphabet, d, d.tokens[1])?,
            to: state(d.tokens[2])?,
        });
    }
    SkeletonAutomaton::new(alphabet, states, transitions, Exactness::UserSupplied)
}
