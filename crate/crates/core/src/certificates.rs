//! Witnesses for solver verdicts, their text form, and a verifier that
//! re-checks them without calling into the solvers.
//!
//! A certificate is a flat `key: value` document. The first eight keys are
//! always present in this order:
//!
//! ```text
//! problem: infinite-snake
//! verdict: YES
//! variant: periodic-skeleton
//! word: a b
//! scales: t1 t2
//! group: zd:2
//! tileset-hash: 5c1e…
//! fingerprint:
//! ```
//!
//! followed, when relevant, by `depth`, `seed`, `seed-position`, `skeleton`,
//! `p`, `q`, `margin` and `reason`, also in that order.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use sha2::{Digest, Sha256};

use crate::alphabet::{invert_word, GeneratorAlphabet, Letter, Word};
use crate::automata::SkeletonAutomaton;
use crate::error::{Error, Result};
use crate::formats::directives;
use crate::groups::{Element, GroupOracle, ModelKind};
use crate::tilesets::{lift_tileset, TileAdjacency, TilesetGraph};

pub const ACYCLIC_REASON: &str = "acyclic Cayley graph";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    InfiniteSnake,
    Ouroboros,
    Reach,
    YSnake,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::InfiniteSnake => "infinite-snake",
            Problem::Ouroboros => "ouroboros",
            Problem::Reach => "reach",
            Problem::YSnake => "y-snake",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Problem::InfiniteSnake, Problem::Ouroboros, Problem::Reach, Problem::YSnake]
            .into_iter()
            .find(|p| p.as_str() == s)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A word and the tiles placed along it, stored by name so a certificate
/// does not depend on tile or letter numbering.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Segment {
    pub word: Vec<String>,
    pub scales: Vec<String>,
}

impl Segment {
    pub fn from_indices(alphabet: &GeneratorAlphabet, g: &TilesetGraph, word: &[Letter], scales: &[usize]) -> Self {
        Segment {
            word: word.iter().map(|l| alphabet.name(*l).to_string()).collect(),
            scales: scales.iter().map(|t| g.tile_name(*t).to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A finite snake from the identity; `scales` has one more entry than `word`.
    FiniteSnake(Segment),
    /// `word^∞` with the scale cycle `scales` (same length).
    PeriodicSkeleton(Segment),
    /// `left^∞ · bridge · right^∞`; the seed sits at `bridge.scales[seed_position]`.
    Lasso {
        left: Segment,
        bridge: Segment,
        right: Segment,
        seed_position: usize,
    },
    /// A closed tiled walk; `scales` starts and ends with the same tile.
    Loop(Segment),
    /// No snake of length `depth` exists.
    Exhaustion { depth: usize, fingerprint: String },
    /// No snake reaches the target inside the search box.
    BoxExhaustion { fingerprint: String },
    /// The only self-avoiding path to the target carries no tiling.
    ForcedPath { word: Vec<String> },
    /// The product of skeleton and walk automata has no usable bi-infinite path.
    EmptyProduct { fingerprint: String },
    Structural { reason: String },
}

impl Witness {
    pub fn variant(&self) -> &'static str {
        match self {
            Witness::FiniteSnake(_) => "finite-snake",
            Witness::PeriodicSkeleton(_) => "periodic-skeleton",
            Witness::Lasso { .. } => "lasso",
            Witness::Loop(_) => "loop",
            Witness::Exhaustion { .. } => "exhaustion",
            Witness::BoxExhaustion { .. } => "box-exhaustion",
            Witness::ForcedPath { .. } => "forced-path",
            Witness::EmptyProduct { .. } => "empty-product",
            Witness::Structural { .. } => "structural",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub problem: Problem,
    pub verdict: Verdict,
    pub witness: Witness,
    pub group: String,
    pub tileset_hash: String,
    pub seed: Option<String>,
    /// SHA-256 of the skeleton automaton's text form (Y-snake problems).
    pub skeleton: Option<String>,
    pub p: Option<Vec<String>>,
    pub q: Option<Vec<String>>,
    pub margin: Option<u64>,
}

/// Lowercase hex SHA-256 of newline-joined parts.
pub fn fingerprint<S: AsRef<str>>(parts: &[S]) -> String {
    let mut h = Sha256::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            h.update(b"\n");
        }
        h.update(p.as_ref().as_bytes());
    }
    hex::encode(h.finalize())
}

pub fn skeleton_hash(y: &SkeletonAutomaton) -> String {
    hex::encode(Sha256::digest(y.to_text().as_bytes()))
}

fn join_words(w: &[String]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.join(" ")
    }
}

fn split_words(s: &str) -> Vec<String> {
    s.split_whitespace().filter(|t| *t != "ε").map(str::to_string).collect()
}

const MAIN_KEYS: [&str; 8] = [
    "problem",
    "verdict",
    "variant",
    "word",
    "scales",
    "group",
    "tileset-hash",
    "fingerprint",
];
const EXTRA_KEYS: [&str; 8] = ["depth", "seed", "seed-position", "skeleton", "p", "q", "margin", "reason"];

impl Certificate {
    pub fn to_text(&self) -> String {
        let (word, scales) = match &self.witness {
            Witness::FiniteSnake(s) | Witness::PeriodicSkeleton(s) | Witness::Loop(s) => {
                (join_words(&s.word), s.scales.join(" "))
            }
            Witness::Lasso { left, bridge, right, .. } => (
                [left, bridge, right].map(|s| join_words(&s.word)).join(" | "),
                [left, bridge, right].map(|s| s.scales.join(" ")).join(" | "),
            ),
            Witness::ForcedPath { word } => (join_words(word), String::new()),
            _ => (String::new(), String::new()),
        };
        let fp = match &self.witness {
            Witness::Exhaustion { fingerprint, .. }
            | Witness::BoxExhaustion { fingerprint }
            | Witness::EmptyProduct { fingerprint } => fingerprint.as_str(),
            _ => "",
        };
        let mut lines: Vec<(&str, String)> = vec![
            ("problem", self.problem.to_string()),
            ("verdict", self.verdict.to_string()),
            ("variant", self.witness.variant().to_string()),
            ("word", word),
            ("scales", scales),
            ("group", self.group.clone()),
            ("tileset-hash", self.tileset_hash.clone()),
            ("fingerprint", fp.to_string()),
        ];
        if let Witness::Exhaustion { depth, .. } = &self.witness {
            lines.push(("depth", depth.to_string()));
        }
        if let Some(s) = &self.seed {
            lines.push(("seed", s.clone()));
        }
        if let Witness::Lasso { seed_position, .. } = &self.witness {
            lines.push(("seed-position", seed_position.to_string()));
        }
        if let Some(s) = &self.skeleton {
            lines.push(("skeleton", s.clone()));
        }
        if let Some(p) = &self.p {
            lines.push(("p", join_words(p)));
        }
        if let Some(q) = &self.q {
            lines.push(("q", join_words(q)));
        }
        if let Some(m) = self.margin {
            lines.push(("margin", m.to_string()));
        }
        if let Witness::Structural { reason } = &self.witness {
            lines.push(("reason", reason.clone()));
        }
        let mut out = String::new();
        for (k, v) in lines {
            if v.is_empty() {
                out.push_str(&format!("{k}:\n"));
            } else {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let ds = directives(text)?;
        let last_line = text.lines().count() + 1;
        for (i, key) in MAIN_KEYS.iter().enumerate() {
            match ds.get(i) {
                Some(d) if d.key == *key => {}
                Some(d) => return Err(d.error(d.key_column, format!("expected `{key}`, found `{}`", d.key))),
                None => return Err(Error::parse(last_line, 1, format!("truncated certificate: missing `{key}`"))),
            }
        }
        let value = |i: usize| ds[i].value;
        let problem = Problem::parse(value(0))
            .ok_or_else(|| ds[0].error(ds[0].value_column, format!("unknown problem `{}`", value(0))))?;
        let verdict = match value(1) {
            "YES" => Verdict::Yes,
            "NO" => Verdict::No,
            "UNKNOWN" => Verdict::Unknown,
            v => return Err(ds[1].error(ds[1].value_column, format!("unknown verdict `{v}`"))),
        };
        let mut extras: [Option<&str>; 8] = [None; 8];
        let mut next_extra = 0;
        for d in &ds[MAIN_KEYS.len()..] {
            let pos = EXTRA_KEYS
                .iter()
                .position(|k| *k == d.key)
                .ok_or_else(|| d.error(d.key_column, format!("unknown key `{}`", d.key)))?;
            if pos < next_extra {
                return Err(d.error(d.key_column, format!("key `{}` out of order", d.key)));
            }
            extras[pos] = Some(d.value);
            next_extra = pos + 1;
        }
        let [depth, seed, seed_position, skeleton, p, q, margin, reason] = extras;
        let extra_line = |key: &str| ds.iter().find(|d| d.key == key).expect("present");
        let number = |key: &str, v: &str| -> Result<u64> {
            let d = extra_line(key);
            v.parse::<u64>()
                .map_err(|_| d.error(d.value_column, format!("`{key}` must be a non-negative integer")))
        };

        let (word_d, scales_d) = (&ds[3], &ds[4]);
        let segment = |w: &str, s: &str| Segment {
            word: split_words(w),
            scales: s.split_whitespace().map(str::to_string).collect(),
        };
        let single = || segment(word_d.value, scales_d.value);
        let unexpected = |key: &str, present: bool| -> Result<()> {
            if present {
                let d = extra_line(key);
                return Err(d.error(d.key_column, format!("`{key}` does not belong to this variant")));
            }
            Ok(())
        };
        let variant = value(2);
        let fp = value(7).to_string();
        let witness = match variant {
            "finite-snake" => Witness::FiniteSnake(single()),
            "periodic-skeleton" => Witness::PeriodicSkeleton(single()),
            "loop" => Witness::Loop(single()),
            "lasso" => {
                let ws: Vec<&str> = word_d.value.split('|').collect();
                let ss: Vec<&str> = scales_d.value.split('|').collect();
                if ws.len() != 3 {
                    return Err(word_d.error(word_d.value_column, "lasso word needs three `|`-separated parts"));
                }
                if ss.len() != 3 {
                    return Err(scales_d.error(scales_d.value_column, "lasso scales need three `|`-separated parts"));
                }
                let sp = seed_position.ok_or_else(|| Error::parse(last_line, 1, "missing `seed-position`"))?;
                Witness::Lasso {
                    left: segment(ws[0], ss[0]),
                    bridge: segment(ws[1], ss[1]),
                    right: segment(ws[2], ss[2]),
                    seed_position: number("seed-position", sp)? as usize,
                }
            }
            "exhaustion" => {
                let d = depth.ok_or_else(|| Error::parse(last_line, 1, "missing `depth`"))?;
                Witness::Exhaustion {
                    depth: number("depth", d)? as usize,
                    fingerprint: fp.clone(),
                }
            }
            "box-exhaustion" => Witness::BoxExhaustion { fingerprint: fp.clone() },
            "forced-path" => Witness::ForcedPath {
                word: split_words(word_d.value),
            },
            "empty-product" => Witness::EmptyProduct { fingerprint: fp.clone() },
            "structural" => Witness::Structural {
                reason: reason
                    .ok_or_else(|| Error::parse(last_line, 1, "missing `reason`"))?
                    .to_string(),
            },
            other => return Err(ds[2].error(ds[2].value_column, format!("unknown variant `{other}`"))),
        };
        unexpected("depth", depth.is_some() && !matches!(witness, Witness::Exhaustion { .. }))?;
        unexpected("seed-position", seed_position.is_some() && !matches!(witness, Witness::Lasso { .. }))?;
        unexpected("reason", reason.is_some() && !matches!(witness, Witness::Structural { .. }))?;
        // unused main fields must be empty
        let uses_scales = matches!(
            witness,
            Witness::FiniteSnake(_) | Witness::PeriodicSkeleton(_) | Witness::Loop(_) | Witness::Lasso { .. }
        );
        let uses_word = uses_scales || matches!(witness, Witness::ForcedPath { .. });
        let uses_fp = matches!(
            witness,
            Witness::Exhaustion { .. } | Witness::BoxExhaustion { .. } | Witness::EmptyProduct { .. }
        );
        for (d, used) in [(word_d, uses_word), (scales_d, uses_scales), (&ds[7], uses_fp)] {
            if !used && !d.value.is_empty() {
                return Err(d.error(d.value_column, format!("`{}` must be empty for variant `{variant}`", d.key)));
            }
        }
        Ok(Certificate {
            problem,
            verdict,
            witness,
            group: value(5).to_string(),
            tileset_hash: value(6).to_string(),
            seed: seed.map(str::to_string),
            skeleton: skeleton.map(str::to_string),
            p: p.map(split_words),
            q: q.map(split_words),
            margin: margin.map(|m| number("margin", m)).transpose()?,
        })
    }
}

fn reject(msg: impl Into<String>) -> Error {
    Error::CertificateMismatch(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(reject(msg()))
    }
}

/// Re-checks a certificate against the problem instance. `skeleton` is
/// required for Y-snake certificates and ignored otherwise.
pub fn verify(
    cert: &Certificate,
    group: &GroupOracle,
    tileset: &TilesetGraph,
    skeleton: Option<&SkeletonAutomaton>,
) -> Result<()> {
    ensure(cert.group == group.descriptor(), || {
        format!("certificate is for group `{}`, not `{}`", cert.group, group.descriptor())
    })?;
    ensure(cert.tileset_hash == tileset.hash(), || "tileset hash differs".into())?;
    let alphabet = match (cert.problem, skeleton) {
        (Problem::YSnake, Some(y)) => y.alphabet().clone(),
        (Problem::YSnake, None) => return Err(reject("Y-snake certificates need the skeleton automaton")),
        _ => group.alphabet().clone(),
    };
    let g = if tileset.alphabet() == &alphabet {
        tileset.clone()
    } else {
        lift_tileset(tileset, &alphabet).map_err(|e| reject(e.to_string()))?
    };
    let ctx = Ctx {
        cert,
        group,
        g: &g,
        alphabet: &alphabet,
    };
    if let Some(s) = &cert.seed {
        ensure(g.tile_index(s).is_ok(), || format!("seed `{s}` is not a tile"))?;
    }
    ensure(cert.skeleton.is_some() == (cert.problem == Problem::YSnake), || {
        "`skeleton` is present exactly for Y-snake certificates".into()
    })?;
    let reach = cert.problem == Problem::Reach;
    ensure(cert.p.is_some() == reach && cert.q.is_some() == reach, || {
        "`p` and `q` are present exactly for reachability certificates".into()
    })?;
    ensure(
        cert.margin.is_some() == matches!(cert.witness, Witness::BoxExhaustion { .. }),
        || "`margin` belongs to box-exhaustion certificates".into(),
    )?;

    use Problem as P;
    use Verdict as V;
    match (cert.problem, cert.verdict, &cert.witness) {
        (P::InfiniteSnake, V::Yes, Witness::PeriodicSkeleton(s)) => {
            let c = ctx.tiled_cycle(s)?;
            ctx.seed_at(&s.scales, 0)?;
            ctx.periodic_injective(&c)
        }
        (P::InfiniteSnake, V::Yes, Witness::Lasso { left, bridge, right, seed_position }) => {
            ensure(group.model_kind() == ModelKind::Free(group.alphabet().generator_count()) && group.has_standard_basis(), || {
                "lasso witnesses are only checkable in free groups".into()
            })?;
            let (l, b, r) = ctx.lasso(left, bridge, right, *seed_position)?;
            let cyc = |w: &Word| !w.is_empty() && free_reduced(w) && w[0] != w[w.len() - 1].inverse();
            let whole: Word = l.iter().chain(&b).chain(&r).copied().collect();
            ensure(cyc(&l) && cyc(&r) && free_reduced(&whole), || "lasso skeleton is not freely reduced".into())
        }
        (P::InfiniteSnake, V::No, Witness::Exhaustion { depth, fingerprint: fp }) => {
            let counts = ctx.count_levels(*depth)?;
            ensure(counts[*depth] == 0, || format!("{} snakes of length {depth} exist", counts[*depth]))?;
            let expected = exhaustion_fingerprint(cert.problem, group.descriptor(), &cert.tileset_hash, cert.seed.as_deref(), &counts);
            ensure(*fp == expected, || "exhaustion fingerprint does not match the recount".into())
        }
        (P::InfiniteSnake, V::No, Witness::EmptyProduct { fingerprint: fp }) => {
            ensure(group.capabilities().exact_skeleton_automaton, || {
                "product replay needs an exact skeleton automaton".into()
            })?;
            let k = alphabet.letter_count();
            // states: (last letter, tile); a step may not cancel the last letter
            let states: Vec<(usize, usize)> = (0..k).flat_map(|l| (0..g.tile_count()).map(move |t| (l, t))).collect();
            let arcs = |&(l, t): &(usize, usize)| -> Vec<(usize, usize)> {
                g.edges()
                    .iter()
                    .filter(|e| e.from == t && e.letter != Letter(l as u32).inverse())
                    .map(|e| (e.letter.index(), e.to))
                    .collect()
            };
            ctx.empty_product(&states, arcs, |&(_, t)| t, fp)
        }
        (P::YSnake, V::Yes, Witness::PeriodicSkeleton(s)) => {
            let y = skeleton.expect("checked above");
            ctx.skeleton_hash(y)?;
            let c = ctx.tiled_cycle(s)?;
            ctx.seed_at(&s.scales, 0)?;
            ensure(y_cycle_states(y, &c).next().is_some(), || "cycle word is not a cycle of the skeleton".into())?;
            if group.alphabet() == &alphabet {
                if let Some(false) = independent_periodic_check(group, &c) {
                    return Err(reject("periodic skeleton is not injective"));
                }
            }
            Ok(())
        }
        (P::YSnake, V::Yes, Witness::Lasso { left, bridge, right, seed_position }) => {
            let y = skeleton.expect("checked above");
            ctx.skeleton_hash(y)?;
            let (l, b, r) = ctx.lasso(left, bridge, right, *seed_position)?;
            let starts: BTreeSet<usize> = y_cycle_states(y, &l).collect();
            let after = y_read(y, &starts, &b);
            let right_cycle: BTreeSet<usize> = y_cycle_states(y, &r).collect();
            ensure(after.intersection(&right_cycle).next().is_some(), || {
                "lasso is not readable in the skeleton".into()
            })
        }
        (P::YSnake, V::No, Witness::EmptyProduct { fingerprint: fp }) => {
            let y = skeleton.expect("checked above");
            ctx.skeleton_hash(y)?;
            let states: Vec<(usize, usize)> =
                (0..y.state_count()).flat_map(|s| (0..g.tile_count()).map(move |t| (s, t))).collect();
            let arcs = |&(s, t): &(usize, usize)| -> Vec<(usize, usize)> {
                let mut v = Vec::new();
                for tr in y.transitions().iter().filter(|tr| tr.from == s) {
                    for e in g.edges().iter().filter(|e| e.from == t && e.letter == tr.letter) {
                        v.push((tr.to, e.to));
                    }
                }
                v
            };
            ctx.empty_product(&states, arcs, |&(_, t)| t, fp)
        }
        (P::Ouroboros, V::Yes, Witness::Loop(s)) => {
            let (w, tiles) = ctx.tiled_path(s)?;
            ensure(w.len() >= 3, || "a loop needs at least three steps".into())?;
            ensure(tiles[0] == tiles[w.len()], || "loop scales do not close".into())?;
            ctx.seed_at(&s.scales, 0)?;
            ensure(group.wp_check(&w).unwrap_or(false), || "loop word is not a relator".into())?;
            ensure(distinct_prefixes(group, &w[..w.len() - 1]), || "loop revisits a vertex".into())?;
            ensure(distinct_prefixes(group, &w[1..]), || "loop revisits a vertex".into())
        }
        (P::Ouroboros, V::No, Witness::Structural { reason }) => {
            ensure(group.capabilities().tree_structured, || "the group's Cayley graph is not a tree".into())?;
            ensure(reason == ACYCLIC_REASON, || format!("unrecognised structural reason `{reason}`"))
        }
        (P::Reach, V::Yes, Witness::FiniteSnake(s)) => {
            let (w, _) = ctx.tiled_path(s)?;
            ctx.seed_at(&s.scales, 0)?;
            ensure(distinct_prefixes(group, &w), || "snake revisits a vertex".into())?;
            let (p, q) = ctx.endpoints()?;
            let mut check = invert_word(&w);
            check.extend(invert_word(&p));
            check.extend(q);
            ensure(group.wp_check(&check).unwrap_or(false), || "snake does not end at q".into())
        }
        (P::Reach, V::No, Witness::ForcedPath { word }) => {
            let w = ctx.letters(word)?;
            let (p, q) = ctx.endpoints()?;
            let mut diff = invert_word(&p);
            diff.extend(q);
            if group.wp_check(&diff).unwrap_or(false) {
                ensure(w.is_empty(), || "p = q forces the empty path".into())?;
                return ensure(cert.seed.is_none() && g.tile_count() == 0, || "a length-0 snake exists".into());
            }
            ensure(
                group.capabilities().tree_structured && group.has_standard_basis(),
                || "forced paths exist only in free groups".into(),
            )?;
            ensure(w == free_reduce(&diff), || "word is not the reduced path from p to q".into())?;
            let mut layer: BTreeSet<usize> = match &cert.seed {
                Some(s) => BTreeSet::from([g.tile_index(s).expect("checked")]),
                None => (0..g.tile_count()).collect(),
            };
            for &l in &w {
                layer = layer.iter().flat_map(|&t| g.edges().iter().filter(move |e| e.from == t && e.letter == l).map(|e| e.to)).collect();
            }
            ensure(layer.is_empty(), || "a tiling of the forced path exists".into())
        }
        (P::Reach, V::No, Witness::BoxExhaustion { fingerprint: fp }) => {
            let margin = cert.margin.expect("checked above");
            let (p, q) = ctx.endpoints()?;
            let (found, nodes) = box_search(group, &g, &p, &q, margin, cert.seed.as_deref())?;
            ensure(!found, || "a snake reaches q inside the box".into())?;
            let expected = box_fingerprint(
                group.descriptor(),
                &cert.tileset_hash,
                cert.seed.as_deref(),
                &join_words(cert.p.as_ref().expect("checked")),
                &join_words(cert.q.as_ref().expect("checked")),
                margin,
                nodes,
            );
            ensure(*fp == expected, || "box fingerprint does not match the replay".into())
        }
        (_, V::Unknown, _) => Err(reject("UNKNOWN verdicts carry no certificate")),
        (p, v, w) => Err(reject(format!("variant `{}` cannot certify {v} for {p}", w.variant()))),
    }
}

/// Fingerprint of an exhaustion run: per-level snake counts up to the depth.
pub fn exhaustion_fingerprint(problem: Problem, group: &str, tileset_hash: &str, seed: Option<&str>, counts: &[u64]) -> String {
    let counts: Vec<String> = counts.iter().map(u64::to_string).collect();
    fingerprint(&[
        "exhaustion",
        problem.as_str(),
        group,
        tileset_hash,
        seed.unwrap_or("-"),
        &counts.join(","),
    ])
}

/// Fingerprint of a product replay: product size, surviving states after
/// trimming, and the surviving seed states.
pub fn product_fingerprint(
    problem: Problem,
    group: &str,
    tileset_hash: &str,
    seed: Option<&str>,
    states: usize,
    surviving: usize,
    surviving_seeds: usize,
) -> String {
    fingerprint(&[
        "empty-product".to_string(),
        problem.as_str().to_string(),
        group.to_string(),
        tileset_hash.to_string(),
        seed.unwrap_or("-").to_string(),
        format!("{states},{surviving},{surviving_seeds}"),
    ])
}

pub fn box_fingerprint(group: &str, tileset_hash: &str, seed: Option<&str>, p: &str, q: &str, margin: u64, nodes: u64) -> String {
    fingerprint(&[
        "box-exhaustion".to_string(),
        group.to_string(),
        tileset_hash.to_string(),
        seed.unwrap_or("-").to_string(),
        p.to_string(),
        q.to_string(),
        format!("{margin},{nodes}"),
    ])
}

struct Ctx<'a> {
    cert: &'a Certificate,
    group: &'a GroupOracle,
    g: &'a TilesetGraph,
    alphabet: &'a GeneratorAlphabet,
}

impl Ctx<'_> {
    fn letters(&self, names: &[String]) -> Result<Word> {
        names
            .iter()
            .map(|n| self.alphabet.letter(n).map_err(|_| reject(format!("unknown letter `{n}`"))))
            .collect()
    }

    fn tiles(&self, names: &[String]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| self.g.tile_index(n).map_err(|_| reject(format!("unknown tile `{n}`"))))
            .collect()
    }

    fn edge(&self, from: usize, l: Letter, to: usize) -> bool {
        self.g.edges().iter().any(|e| e.from == from && e.letter == l && e.to == to)
    }

    /// A finite path: `|scales| = |word| + 1`, every step a tileset edge.
    fn tiled_path(&self, s: &Segment) -> Result<(Word, Vec<usize>)> {
        let w = self.letters(&s.word)?;
        let t = self.tiles(&s.scales)?;
        ensure(t.len() == w.len() + 1, || "scales must have one more entry than the word".into())?;
        for i in 0..w.len() {
            ensure(self.edge(t[i], w[i], t[i + 1]), || {
                format!("step {i} ({}, {}, {}) is not an edge", s.scales[i], s.word[i], s.scales[i + 1])
            })?;
        }
        Ok((w, t))
    }

    /// A cycle: `|scales| = |word|`, steps wrap around.
    fn tiled_cycle(&self, s: &Segment) -> Result<Word> {
        let w = self.letters(&s.word)?;
        let t = self.tiles(&s.scales)?;
        ensure(!w.is_empty() && t.len() == w.len(), || "scale cycle must match a non-empty word".into())?;
        for i in 0..w.len() {
            let next = t[(i + 1) % t.len()];
            ensure(self.edge(t[i], w[i], next), || format!("cyclic step {i} is not an edge"))?;
        }
        Ok(w)
    }

    fn lasso(&self, left: &Segment, bridge: &Segment, right: &Segment, seed_position: usize) -> Result<(Word, Word, Word)> {
        let l = self.tiled_cycle(left)?;
        let r = self.tiled_cycle(right)?;
        let (b, bt) = self.tiled_path(bridge)?;
        ensure(bridge.scales[0] == left.scales[0], || "bridge does not leave the left cycle".into())?;
        ensure(bridge.scales.last() == right.scales.first(), || "bridge does not enter the right cycle".into())?;
        ensure(seed_position < bt.len(), || "seed position outside the bridge".into())?;
        ensure(self.cert.seed.is_some(), || "lasso witnesses are only used for seeded problems".into())?;
        self.seed_at(&bridge.scales, seed_position)?;
        Ok((l, b, r))
    }

    fn seed_at(&self, scales: &[String], i: usize) -> Result<()> {
        match &self.cert.seed {
            Some(s) => ensure(scales.get(i) == Some(s), || format!("seed `{s}` is not at position {i}")),
            None => Ok(()),
        }
    }

    fn skeleton_hash(&self, y: &SkeletonAutomaton) -> Result<()> {
        ensure(self.cert.skeleton.as_deref() == Some(skeleton_hash(y).as_str()), || {
            "skeleton hash differs".into()
        })
    }

    fn endpoints(&self) -> Result<(Word, Word)> {
        Ok((
            self.letters(self.cert.p.as_ref().expect("checked"))?,
            self.letters(self.cert.q.as_ref().expect("checked"))?,
        ))
    }

    fn periodic_injective(&self, w: &Word) -> Result<()> {
        match independent_periodic_check(self.group, w) {
            Some(true) => Ok(()),
            Some(false) => Err(reject("periodic skeleton is not injective")),
            None => Err(reject("periodic skeletons are only certifiable in ℤ^d and free groups")),
        }
    }

    /// Counts snakes at every length `0..=depth` by plain recursion.
    fn count_levels(&self, depth: usize) -> Result<Vec<u64>> {
        let starts: Vec<usize> = match &self.cert.seed {
            Some(s) => vec![self.g.tile_index(s).expect("checked")],
            None => (0..self.g.tile_count()).collect(),
        };
        let mut counts = vec![0u64; depth + 1];
        let letters: Vec<Letter> = self.alphabet.letters().collect();
        let mut word = Vec::new();
        for t in starts {
            self.count_from(t, depth, &letters, &mut word, &mut counts);
        }
        Ok(counts)
    }

    fn count_from(&self, tile: usize, depth: usize, letters: &[Letter], word: &mut Word, counts: &mut [u64]) {
        counts[word.len()] += 1;
        if word.len() == depth {
            return;
        }
        for &l in letters {
            word.push(l);
            if distinct_prefixes(self.group, word) {
                for e in self.g.edges().iter().filter(|e| e.from == tile && e.letter == l) {
                    self.count_from(e.to, depth, letters, word, counts);
                }
            }
            word.pop();
        }
    }

    fn empty_product<S: Clone + Eq + std::hash::Hash>(
        &self,
        states: &[S],
        arcs: impl Fn(&S) -> Vec<S>,
        tile: impl Fn(&S) -> usize,
        fp: &str,
    ) -> Result<()> {
        // repeatedly drop states without successors or predecessors
        let mut alive: HashSet<S> = states.iter().cloned().collect();
        loop {
            let succ_ok: HashSet<S> = alive.iter().filter(|s| arcs(s).iter().any(|t| alive.contains(t))).cloned().collect();
            let targets: HashSet<S> = succ_ok.iter().flat_map(&arcs).filter(|t| succ_ok.contains(t)).collect();
            let next: HashSet<S> = succ_ok.intersection(&targets).cloned().collect();
            if next.len() == alive.len() {
                break;
            }
            alive = next;
        }
        let seed = self.cert.seed.as_ref().map(|s| self.g.tile_index(s).expect("checked"));
        let seeds = alive.iter().filter(|s| seed.is_none_or(|x| tile(s) == x)).count();
        ensure(seeds == 0, || "the product still has a bi-infinite path".into())?;
        let expected = product_fingerprint(
            self.cert.problem,
            self.group.descriptor(),
            &self.cert.tileset_hash,
            self.cert.seed.as_deref(),
            states.len(),
            alive.len(),
            seeds,
        );
        ensure(fp == expected, || "product fingerprint does not match the replay".into())
    }
}

fn free_reduced(w: &[Letter]) -> bool {
    w.windows(2).all(|p| p[1] != p[0].inverse())
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

/// Pairwise distinct prefixes (including ε and the whole word).
fn distinct_prefixes(group: &GroupOracle, w: &[Letter]) -> bool {
    match group.identity() {
        Some(mut e) => {
            let mut seen = HashSet::from([e.clone()]);
            for &l in w {
                e = group.step(&e, l);
                if !seen.insert(e.clone()) {
                    return false;
                }
            }
            true
        }
        None => (0..w.len()).all(|i| (i + 1..=w.len()).all(|j| !group.wp_check(&w[i..j]).unwrap_or(true))),
    }
}

/// Exact injectivity of `w^∞`: the residue test in ℤ^d, cyclic reduction in
/// standard free groups.
fn independent_periodic_check(group: &GroupOracle, w: &[Letter]) -> Option<bool> {
    if !group.capabilities().exact_periodic_certification || w.is_empty() {
        return None;
    }
    match group.model_kind() {
        ModelKind::Free(_) => Some(free_reduced(w) && w[0] != w[w.len() - 1].inverse()),
        ModelKind::FreeAbelian(_) => {
            let mut pts = Vec::with_capacity(w.len() + 1);
            let mut e = group.identity()?;
            pts.push(e.clone());
            for &l in w {
                e = group.step(&e, l);
                pts.push(e.clone());
            }
            let vec = |e: &Element| match e {
                Element::Vector(v) => v.clone(),
                _ => unreachable!("ℤ^d elements are vectors"),
            };
            let v = vec(&pts[w.len()]);
            if v.iter().all(|x| *x == 0) {
                return Some(false);
            }
            for i in 0..w.len() {
                for j in i + 1..w.len() {
                    let d: Vec<i64> = vec(&pts[j]).iter().zip(vec(&pts[i])).map(|(a, b)| a - b).collect();
                    // d ∈ ℤ·v ?
                    let c = v.iter().position(|x| *x != 0).expect("v ≠ 0");
                    if d[c] % v[c] == 0 && d.iter().zip(&v).all(|(a, b)| *a == d[c] / v[c] * b) {
                        return Some(false);
                    }
                }
            }
            Some(true)
        }
        _ => None,
    }
}

fn y_read(y: &SkeletonAutomaton, from: &BTreeSet<usize>, w: &[Letter]) -> BTreeSet<usize> {
    let mut cur = from.clone();
    for &l in w {
        cur = cur
            .iter()
            .flat_map(|&s| y.transitions().iter().filter(move |t| t.from == s && t.letter == l).map(|t| t.to))
            .collect();
    }
    cur
}

/// Skeleton states that return to themselves after reading `w`.
fn y_cycle_states<'a>(y: &'a SkeletonAutomaton, w: &'a [Letter]) -> impl Iterator<Item = usize> + 'a {
    (0..y.state_count()).filter(move |&s| y_read(y, &BTreeSet::from([s]), w).contains(&s))
}

/// Box-bounded search in ℤ^d for a snake from `p` to `q`; returns whether one
/// exists and the number of partial snakes (word, tile) visited.
fn box_search(group: &GroupOracle, g: &TilesetGraph, p: &[Letter], q: &[Letter], margin: u64, seed: Option<&str>) -> Result<(bool, u64)> {
    let ModelKind::FreeAbelian(_) = group.model_kind() else {
        return Err(reject("box searches are defined for ℤ^d only"));
    };
    let vec = |e: Element| match e {
        Element::Vector(v) => v,
        _ => unreachable!(),
    };
    let mut diff = invert_word(p);
    diff.extend_from_slice(q);
    let target = vec(group.canonical(&diff).expect("built-in"));
    let m = margin as i64;
    let lo: Vec<i64> = target.iter().map(|x| (*x).min(0) - m).collect();
    let hi: Vec<i64> = target.iter().map(|x| (*x).max(0) + m).collect();
    let starts: Vec<usize> = match seed {
        Some(s) => vec![g.tile_index(s).map_err(|e| reject(e.to_string()))?],
        None => (0..g.tile_count()).collect(),
    };
    let origin = vec![0i64; target.len()];
    let letters: Vec<Letter> = g.alphabet().letters().collect();
    let mut nodes = 0u64;
    let mut found = false;
    for t in starts {
        let mut visited = HashSet::from([origin.clone()]);
        if origin == target {
            return Ok((true, nodes + 1));
        }
        box_dfs(group, g, &letters, &target, &lo, &hi, origin.clone(), t, &mut visited, &mut nodes, &mut found);
        if found {
            break;
        }
    }
    Ok((found, nodes))
}

#[allow(clippy::too_many_arguments)]
fn box_dfs(
    group: &GroupOracle,
    g: &TilesetGraph,
    letters: &[Letter],
    target: &[i64],
    lo: &[i64],
    hi: &[i64],
    pos: Vec<i64>,
    tile: usize,
    visited: &mut HashSet<Vec<i64>>,
    nodes: &mut u64,
    found: &mut bool,
) {
    *nodes += 1;
    for &l in letters {
        let Some(Element::Vector(step)) = group.letter_element(l) else { continue };
        let next: Vec<i64> = pos.iter().zip(&step).map(|(a, b)| a + b).collect();
        if next.iter().zip(lo.iter().zip(hi)).any(|(x, (a, b))| x < a || x > b) || visited.contains(&next) {
            continue;
        }
        for e in g.edges().iter().filter(|e| e.from == tile && e.letter == l) {
            if next == target {
                *found = true;
                return;
            }
            visited.insert(next.clone());
            box_dfs(group, g, letters, target, lo, hi, next.clone(), e.to, visited, nodes, found);
            visited.remove(&next);
            if *found {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tilesets::fixtures;

    fn seg(word: &str, scales: &str) -> Segment {
        Segment {
            word: split_words(word),
            scales: scales.split_whitespace().map(str::to_string).collect(),
        }
    }

    fn periodic(word: &str, scales: &str) -> Certificate {
        Certificate {
            problem: Problem::InfiniteSnake,
            verdict: Verdict::Yes,
            witness: Witness::PeriodicSkeleton(seg(word, scales)),
            group: "zd:2".into(),
            tileset_hash: fixtures::fig1().hash(),
            seed: None,
            skeleton: None,
            p: None,
            q: None,
            margin: None,
        }
    }

    #[test]
    fn staircase_is_accepted() {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let c = periodic("a b", "t1 t2");
        assert_eq!(verify(&c, &z2, &fixtures::fig1(), None), Ok(()));
        // oracle: six periods of the walk visit distinct points
        let w = z2.alphabet().parse_word(&"a b ".repeat(6)).unwrap();
        assert!(z2.is_g_reduced(&w).unwrap());
    }

    #[test]
    fn backtracking_periodic_word_is_rejected() {
        let z1 = GroupOracle::free_abelian_standard(1).unwrap();
        let mut g = TilesetGraph::new(z1.alphabet().clone(), &["t"]).unwrap();
        g.add_edge_by_name("t", "t", "a").unwrap();
        let mut c = periodic("a a^-1", "t t");
        c.group = "zd:1".into();
        c.tileset_hash = g.hash();
        assert!(verify(&c, &z1, &g, None).is_err());
        let f1 = GroupOracle::free_group(1).unwrap();
        c.group = f1.descriptor().into();
        assert!(verify(&c, &f1, &g, None).is_err());
    }

    #[test]
    fn square_loop_is_accepted() {
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let g = fixtures::loopy();
        let c = Certificate {
            problem: Problem::Ouroboros,
            witness: Witness::Loop(seg("a b a^-1 b^-1", "t t t t t")),
            tileset_hash: g.hash(),
            ..periodic("a", "t")
        };
        assert_eq!(verify(&c, &z2, &g, None), Ok(()));
        let degenerate = Certificate {
            witness: Witness::Loop(seg("a a^-1", "t t t")),
            ..c.clone()
        };
        assert!(verify(&degenerate, &z2, &g, None).is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = periodic("a b", "t1 t2");
        let text = c.to_text();
        assert!(text.starts_with("problem: infinite-snake\nverdict: YES\nvariant: periodic-skeleton\nword: a b\nscales: t1 t2\n"));
        assert_eq!(Certificate::from_text(&text).unwrap(), c);

        let lasso = Certificate {
            witness: Witness::Lasso {
                left: seg("a", "t"),
                bridge: seg("b b", "t u t"),
                right: seg("a", "t"),
                seed_position: 1,
            },
            seed: Some("u".into()),
            ..c.clone()
        };
        assert_eq!(Certificate::from_text(&lasso.to_text()).unwrap(), lasso);

        let ex = Certificate {
            verdict: Verdict::No,
            witness: Witness::Exhaustion {
                depth: 2,
                fingerprint: "ab".into(),
            },
            ..c
        };
        assert_eq!(Certificate::from_text(&ex.to_text()).unwrap(), ex);
    }

    #[test]
    fn malformed_text_is_rejected() {
        let text = periodic("a b", "t1 t2").to_text();
        let truncated: String = text.lines().take(4).map(|l| format!("{l}\n")).collect();
        assert!(matches!(Certificate::from_text(&truncated), Err(Error::Parse { line: 5, .. })));
        let bad = text.replace("periodic-skeleton", "spiral");
        match Certificate::from_text(&bad) {
            Err(Error::Parse { line: 3, message, .. }) => assert!(message.contains("spiral")),
            other => panic!("{other:?}"),
        }
        let extra = format!("{text}colour: red\n");
        assert!(Certificate::from_text(&extra).is_err());
    }

    #[test]
    fn residue_test_matches_brute_force() {
        // every word of length ≤ 5 over ℤ²: accept iff ten periods are injective
        let z2 = GroupOracle::free_abelian_standard(2).unwrap();
        let letters: Vec<Letter> = z2.alphabet().letters().collect();
        let mut frontier: Vec<Word> = vec![Vec::new()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    let mut x = w.clone();
                    x.push(l);
                    let ten: Word = x.iter().copied().cycle().take(10 * x.len()).collect();
                    let zero = z2.wp_check(&x).unwrap();
                    if !zero {
                        assert_eq!(independent_periodic_check(&z2, &x), Some(distinct_prefixes(&z2, &ten)), "{x:?}");
                    }
                    next.push(x);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn cyclic_reduction_iff_fifth_power_reduced() {
        let f2 = GroupOracle::free_group(2).unwrap();
        let letters: Vec<Letter> = f2.alphabet().letters().collect();
        let mut frontier: Vec<Word> = vec![Vec::new()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    let mut x = w.clone();
                    x.push(l);
                    let five: Word = x.iter().copied().cycle().take(5 * x.len()).collect();
                    assert_eq!(independent_periodic_check(&f2, &x), Some(free_reduced(&five)));
                    next.push(x);
                }
            }
            frontier = next;
        }
    }
}
