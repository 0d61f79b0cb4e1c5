//! Invertible-reversible transducers and the snake embeddings they define.
//!
//! A transducer reads letters of `S` and writes letters of `T` one for one.
//! Reversibility lets it read inverse letters too: `δ(q, s⁻¹)` is the unique
//! `q′` with `δ(q′, s) = q`, and `η(q, s⁻¹) = η(q′, s)⁻¹`. The induced word
//! map `f_M` carries snakes of a tileset to snakes of the transformed tileset
//! whose tiles are pairs `tile@state`.
//!
//! Transducer files:
//!
//! ```text
//! input: a b
//! output: x y c
//! states: q0 q1
//! initial: q0
//! rule: q0 a -> q0 : c
//! ```
//!
//! with one `rule` per state and input generator.

use std::collections::VecDeque;
use std::fmt;

use crate::alphabet::{GeneratorAlphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::formats::{directives, letter, need, parse_alphabet, unknown_key};
use crate::groups::{Element, GroupOracle};
use crate::tilesets::{Snake, TilesetGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    states: Vec<String>,
    initial: usize,
    input: GeneratorAlphabet,
    output: GeneratorAlphabet,
    // delta[q][i], eta[q][i] for input generator i
    delta: Vec<Vec<usize>>,
    eta: Vec<Vec<Letter>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransducerViolation {
    /// `η(q, ·)` sends two generators to the same letter.
    NotInvertible { state: String, letters: (String, String) },
    /// Under `letter`, `preimages` states (not exactly one) lead to `state`.
    NotReversible { state: String, letter: String, preimages: usize },
    /// The inverse extension of `η(q, ·)` is not injective on `S ∪ S⁻¹`.
    ExtensionNotInvertible { state: String, letters: (String, String) },
}

impl fmt::Display for TransducerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransducerViolation::NotInvertible { state, letters } => {
                write!(f, "η({state}, ·) maps {} and {} to the same letter", letters.0, letters.1)
            }
            TransducerViolation::NotReversible { state, letter, preimages } => {
                write!(f, "{preimages} states reach {state} under {letter}, expected 1")
            }
            TransducerViolation::ExtensionNotInvertible { state, letters } => {
                write!(f, "extended η({state}, ·) maps {} and {} to the same letter", letters.0, letters.1)
            }
        }
    }
}

impl Transducer {
    /// Checks only the shape of the tables; see [`validate_transducer`] for
    /// the invertible-reversible conditions.
    pub fn new<S: AsRef<str>>(
        states: &[S],
        initial: usize,
        input: GeneratorAlphabet,
        output: GeneratorAlphabet,
        delta: Vec<Vec<usize>>,
        eta: Vec<Vec<Letter>>,
    ) -> Result<Self> {
        let states: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let bad = |m: String| Err(Error::InvalidTransducer(m));
        if states.is_empty() {
            return bad("no states".into());
        }
        for (i, s) in states.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) || states[..i].contains(s) {
                return bad(format!("bad or duplicate state name `{s}`"));
            }
        }
        if initial >= states.len() {
            return bad("initial state out of range".into());
        }
        let k = input.generator_count();
        if delta.len() != states.len() || eta.len() != states.len() {
            return bad("tables need one row per state".into());
        }
        for q in 0..states.len() {
            if delta[q].len() != k || eta[q].len() != k {
                return bad(format!("row for `{}` needs one entry per input generator", states[q]));
            }
            if delta[q].iter().any(|&r| r >= states.len()) {
                return bad(format!("transition from `{}` leaves the state set", states[q]));
            }
            if eta[q].iter().any(|l| l.index() >= output.letter_count()) {
                return bad(format!("output from `{}` is not an output letter", states[q]));
            }
        }
        Ok(Transducer {
            states,
            initial,
            input,
            output,
            delta,
            eta,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn input(&self) -> &GeneratorAlphabet {
        &self.input
    }

    pub fn output(&self) -> &GeneratorAlphabet {
        &self.output
    }

    /// Unique `q′` with `δ(q′, s) = q`, if there is exactly one.
    fn predecessor(&self, q: usize, generator: usize) -> Option<usize> {
        let mut found = (0..self.states.len()).filter(|&p| self.delta[p][generator] == q);
        let p = found.next()?;
        found.next().is_none().then_some(p)
    }

    /// Extended transition function on `S ∪ S⁻¹`.
    pub fn step(&self, q: usize, l: Letter) -> Option<usize> {
        let i = l.generator_index();
        if l.is_inverse() {
            self.predecessor(q, i)
        } else {
            Some(self.delta[q][i])
        }
    }

    /// Extended output function on `S ∪ S⁻¹`.
    pub fn emit(&self, q: usize, l: Letter) -> Option<Letter> {
        let i = l.generator_index();
        if l.is_inverse() {
            Some(self.eta[self.predecessor(q, i)?][i].inverse())
        } else {
            Some(self.eta[q][i])
        }
    }

    /// `θ_q`: the input letter that `q` turns into `t`.
    pub fn decode(&self, q: usize, t: Letter) -> Option<Letter> {
        self.input.letters().find(|&l| self.emit(q, l) == Some(t))
    }

    /// Reads `w` from `q`; returns the output and the final state.
    pub fn run_from(&self, q: usize, w: &[Letter]) -> Result<(Word, usize)> {
        self.input.check_word(w)?;
        let mut q = q;
        let mut out = Vec::with_capacity(w.len());
        for &l in w {
            let undefined = || Error::InvalidTransducer(format!("no unique predecessor of `{}` under `{}`", self.states[q], self.input.name(l)));
            out.push(self.emit(q, l).ok_or_else(undefined)?);
            q = self.step(q, l).ok_or_else(undefined)?;
        }
        Ok((out, q))
    }

    /// Index of tile `tile@state` in [`transform_tileset`]'s output.
    pub fn product_tile(&self, tile: usize, state: usize) -> usize {
        tile * self.states.len() + state
    }

    /// Inverse of [`Transducer::product_tile`].
    pub fn split_tile(&self, index: usize) -> (usize, usize) {
        (index / self.states.len(), index % self.states.len())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "input: {}\noutput: {}\nstates: {}\ninitial: {}\n",
            self.input,
            self.output,
            self.states.join(" "),
            self.states[self.initial]
        );
        for (q, name) in self.states.iter().enumerate() {
            for (i, s) in self.input.generator_names().enumerate() {
                out.push_str(&format!(
                    "rule: {name} {s} -> {} : {}\n",
                    self.states[self.delta[q][i]],
                    self.output.name(self.eta[q][i])
                ));
            }
        }
        out
    }
}

/// Checks invertibility, reversibility and that the inverse extension of
/// every `η(q, ·)` stays injective (needed to read snakes back).
pub fn validate_transducer(m: &Transducer) -> std::result::Result<(), Vec<TransducerViolation>> {
    let mut violations = Vec::new();
    let name = |l: Letter| m.input.name(l).to_string();
    let k = m.input.generator_count();
    for q in 0..m.states.len() {
        for i in 0..k {
            for j in i + 1..k {
                if m.eta[q][i] == m.eta[q][j] {
                    violations.push(TransducerViolation::NotInvertible {
                        state: m.states[q].clone(),
                        letters: (name(Letter::generator(i)), name(Letter::generator(j))),
                    });
                }
            }
        }
    }
    for q in 0..m.states.len() {
        for i in 0..k {
            let preimages = (0..m.states.len()).filter(|&p| m.delta[p][i] == q).count();
            if preimages != 1 {
                violations.push(TransducerViolation::NotReversible {
                    state: m.states[q].clone(),
                    letter: name(Letter::generator(i)),
                    preimages,
                });
            }
        }
    }
    if violations.is_empty() {
        for q in 0..m.states.len() {
            let letters: Vec<Letter> = m.input.letters().collect();
            for (x, &l1) in letters.iter().enumerate() {
                for &l2 in &letters[x + 1..] {
                    if (l1.is_inverse() || l2.is_inverse()) && m.emit(q, l1) == m.emit(q, l2) {
                        violations.push(TransducerViolation::ExtensionNotInvertible {
                            state: m.states[q].clone(),
                            letters: (name(l1), name(l2)),
                        });
                    }
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

fn require_valid(m: &Transducer) -> Result<()> {
    validate_transducer(m).map_err(|v| {
        let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
        Error::InvalidTransducer(msgs.join("; "))
    })
}

/// `f_M(w)`, read from the initial state.
pub fn apply_transducer(m: &Transducer, w: &[Letter]) -> Result<Word> {
    Ok(m.run_from(m.initial, w)?.0)
}

/// Tiles `A × Q` named `tile@state`, with an edge `(u,q₁) → (v,q₂)` labelled
/// `η(q₁,s)` for every edge `u → v` labelled `s` and `δ(q₁,s) = q₂`.
pub fn transform_tileset(m: &Transducer, g: &TilesetGraph) -> Result<TilesetGraph> {
    require_valid(m)?;
    if g.alphabet() != &m.input {
        return Err(Error::AlphabetMismatch(format!(
            "tileset over `{}`, transducer reads `{}`",
            g.alphabet(),
            m.input
        )));
    }
    let mut names = Vec::with_capacity(g.tiles().len() * m.state_count());
    for t in g.tiles() {
        for q in &m.states {
            names.push(format!("{t}@{q}"));
        }
    }
    let mut out = TilesetGraph::new(m.output.clone(), &names)?;
    for e in g.edges().iter().filter(|e| !e.letter.is_inverse()) {
        let i = e.letter.generator_index();
        for q in 0..m.state_count() {
            out.add_edge(m.product_tile(e.from, q), m.product_tile(e.to, m.delta[q][i]), m.eta[q][i])?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Carries a snake across the embedding. Forward maps a source snake to a
/// snake of the transformed tileset; backward reads one back through `θ_q`.
pub fn transfer_snake(m: &Transducer, s: &Snake, direction: Direction) -> Result<Snake> {
    require_valid(m)?;
    if s.scales.len() != s.word.len() + 1 {
        return Err(Error::Precondition("a snake has one more tile than steps".into()));
    }
    match direction {
        Direction::Forward => {
            let (base, q) = m.run_from(m.initial, &s.base)?;
            let (word, _) = m.run_from(q, &s.word)?;
            let mut scales = Vec::with_capacity(s.scales.len());
            let mut state = q;
            for (i, &t) in s.scales.iter().enumerate() {
                scales.push(m.product_tile(t, state));
                if let Some(&l) = s.word.get(i) {
                    state = m.step(state, l).expect("validated");
                }
            }
            Ok(Snake { base, word, scales })
        }
        Direction::Backward => {
            m.output.check_word(&s.base)?;
            m.output.check_word(&s.word)?;
            let mut q = m.initial;
            let mut base = Vec::with_capacity(s.base.len());
            for &t in &s.base {
                let l = m.decode(q, t).ok_or_else(|| Error::Reconstruction {
                    step: 0,
                    reason: format!("base letter `{}` is not an output of `{}`", m.output.name(t), m.states[q]),
                })?;
                base.push(l);
                q = m.step(q, l).expect("validated");
            }
            let (_, q0) = m.split_tile(s.scales[0]);
            if q != q0 {
                if !s.base.is_empty() {
                    return Err(Error::Reconstruction {
                        step: 0,
                        reason: format!("base leads to `{}`, first tile carries `{}`", m.states[q], m.states[q0]),
                    });
                }
                base = path_to(m, q0);
            }
            let mut word = Vec::with_capacity(s.word.len());
            let mut scales = vec![m.split_tile(s.scales[0]).0];
            for (i, &t) in s.word.iter().enumerate() {
                let (_, qi) = m.split_tile(s.scales[i]);
                let (tile, next) = m.split_tile(s.scales[i + 1]);
                let l = m.decode(qi, t).ok_or_else(|| Error::Reconstruction {
                    step: i,
                    reason: format!("`{}` is not an output of `{}`", m.output.name(t), m.states[qi]),
                })?;
                if m.step(qi, l) != Some(next) {
                    return Err(Error::Reconstruction {
                        step: i,
                        reason: format!("`{}` does not lead from `{}` to `{}`", m.input.name(l), m.states[qi], m.states[next]),
                    });
                }
                word.push(l);
                scales.push(tile);
            }
            Ok(Snake { base, word, scales })
        }
    }
}

/// Shortest (then least) input word leading from the initial state to `q`.
fn path_to(m: &Transducer, q: usize) -> Word {
    let mut prev: Vec<Option<(usize, Letter)>> = vec![None; m.state_count()];
    let mut seen = vec![false; m.state_count()];
    seen[m.initial] = true;
    let mut queue = VecDeque::from([m.initial]);
    while let Some(p) = queue.pop_front() {
        for l in m.input.letters() {
            let r = m.step(p, l).expect("validated");
            if !seen[r] {
                seen[r] = true;
                prev[r] = Some((p, l));
                queue.push_back(r);
            }
        }
    }
    let mut w = Vec::new();
    let mut cur = q;
    while let Some((p, l)) = prev[cur] {
        w.push(l);
        cur = p;
    }
    w.reverse();
    w
}

/// The embedding of `ℤ² = ⟨a, b⟩` into `(G, S ∪ {g})` driven by a central
/// element `g` and a word `w` whose powers avoid `⟨g⟩`.
#[derive(Debug, Clone)]
pub struct CenterEmbedding {
    pub transducer: Transducer,
    pub target_group: GroupOracle,
    /// False when the group is only known through its word problem, so
    /// centrality, infinite order and the `w` audit were not checked.
    pub assumptions_checked: bool,
}

const AUDIT_ORDER: usize = 4;

/// Builds the transducer with states `q₀ … q_{m−1}` (`m = |w|`),
/// `δ(qᵢ, a) = qᵢ`, `δ(qᵢ, b) = q_{i+1 mod m}`, `η(qᵢ, a) = g`, `η(qᵢ, b) = wᵢ`.
/// When `g_word` is a single generator it is used as is; otherwise a new
/// generator named `g` is added to the group.
pub fn center_embedding(group: &GroupOracle, g_word: &[Letter], w: &[Letter]) -> Result<CenterEmbedding> {
    let alphabet = group.alphabet();
    alphabet.check_word(g_word)?;
    alphabet.check_word(w)?;
    if w.is_empty() {
        return Err(Error::Precondition("w must be non-empty".into()));
    }
    if group.wp_check(g_word)? {
        return Err(Error::Precondition("g is trivial".into()));
    }
    let (target, g) = match g_word {
        [l] if !l.is_inverse() => (group.clone(), *l),
        _ => {
            let mut name = "g".to_string();
            while alphabet.letter(&name).is_ok() {
                name.push('\'');
            }
            let t = group.with_extra_generator(&name, g_word)?;
            let g = Letter::generator(t.alphabet().generator_count() - 1);
            (t, g)
        }
    };
    let assumptions_checked = match group.canonical(g_word) {
        Some(ge) => {
            if group.is_central_infinite_order(&ge) != Some(true) {
                return Err(Error::Precondition(format!(
                    "`{}` is not central of infinite order",
                    alphabet.format_word(g_word)
                )));
            }
            audit_power(group, &ge, w)?;
            true
        }
        None => false,
    };
    let m = w.len();
    let states: Vec<String> = (0..m).map(|i| format!("q{i}")).collect();
    let delta = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
    let eta = (0..m).map(|i| vec![g, w[i]]).collect();
    let input = GeneratorAlphabet::new(&["a", "b"])?;
    let transducer = Transducer::new(&states, 0, input, target.alphabet().clone(), delta, eta)?;
    require_valid(&transducer)?;
    Ok(CenterEmbedding {
        transducer,
        target_group: target,
        assumptions_checked,
    })
}

/// No factor of `w^∞` up to the audit window evaluates into `⟨g⟩`.
fn audit_power(group: &GroupOracle, g: &Element, w: &[Letter]) -> Result<()> {
    let window = 2 * w.len() * AUDIT_ORDER;
    for start in 0..w.len() {
        let mut e = group.identity().expect("built-in");
        for k in 0..window {
            e = group.step(&e, w[(start + k) % w.len()]);
            if group.in_cyclic_subgroup(&e, g) == Some(true) {
                let factor: Word = (0..=k).map(|j| w[(start + j) % w.len()]).collect();
                return Err(Error::Precondition(format!(
                    "factor `{}` of w^∞ lies in ⟨g⟩",
                    group.alphabet().format_word(&factor)
                )));
            }
        }
    }
    Ok(())
}

/// Parses the transducer text format (see the module docs).
pub fn parse_transducer(text: &str) -> Result<Transducer> {
    let mut input = None;
    let mut output = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut initial = None;
    let mut table: Vec<Vec<Option<(usize, Letter)>>> = Vec::new();
    for d in directives(text)? {
        match d.key {
            "input" | "output" => {
                let slot = if d.key == "input" { &mut input } else { &mut output };
                if slot.is_some() {
                    return Err(d.error(d.key_column, format!("duplicate `{}`", d.key)));
                }
                *slot = Some(parse_alphabet(&d)?);
            }
            "states" => {
                if states.is_some() {
                    return Err(d.error(d.key_column, "duplicate `states`"));
                }
                if d.tokens.is_empty() {
                    return Err(d.error(d.value_column, "no states listed"));
                }
                let mut names: Vec<String> = Vec::new();
                for t in &d.tokens {
                    if names.iter().any(|n| n == t.text) {
                        return Err(d.error(t.column, format!("duplicate state `{}`", t.text)));
                    }
                    names.push(t.text.to_string());
                }
                states = Some((d.line, names));
            }
            "initial" => {
                let (_, names) = need(&states, &d, "states")?;
                d.expect_tokens(1, "STATE")?;
                let t = d.tokens[0];
                initial = Some(names.iter().position(|n| n == t.text).ok_or_else(|| d.error(t.column, format!("unknown state `{}`", t.text)))?);
            }
            "rule" => {
                let (_, names) = need(&states, &d, "states")?;
                let inp = need(&input, &d, "input")?;
                let out = need(&output, &d, "output")?;
                d.expect_tokens(6, "STATE LETTER -> STATE : LETTER")?;
                for (i, sym) in [(2, "->"), (4, ":")] {
                    if d.tokens[i].text != sym {
                        return Err(d.error(d.tokens[i].column, format!("expected `{sym}`")));
                    }
                }
                let state = |t: crate::formats::Token<'_>| {
                    names.iter().position(|n| n == t.text).ok_or_else(|| d.error(t.column, format!("unknown state `{}`", t.text)))
                };
                let from = state(d.tokens[0])?;
                let to = state(d.tokens[3])?;
                let s = letter(inp, &d, d.tokens[1])?;
                if s.is_inverse() {
                    return Err(d.error(d.tokens[1].column, "rules are given for generators only"));
                }
                let t = letter(out, &d, d.tokens[5])?;
                if table.is_empty() {
                    table = vec![vec![None; inp.generator_count()]; names.len()];
                }
                let cell = &mut table[from][s.generator_index()];
                if cell.is_some() {
                    return Err(d.error(d.key_column, "duplicate rule"));
                }
                *cell = Some((to, t));
            }
            _ => return Err(unknown_key(&d)),
        }
    }
    let missing = |what: &str| Error::parse(1, 1, format!("missing `{what}`"));
    let input = input.ok_or_else(|| missing("input"))?;
    let output = output.ok_or_else(|| missing("output"))?;
    let (states_line, names) = states.ok_or_else(|| missing("states"))?;
    let initial = initial.ok_or_else(|| missing("initial"))?;
    if table.is_empty() {
        table = vec![vec![None; input.generator_count()]; names.len()];
    }
    let mut delta = Vec::new();
    let mut eta = Vec::new();
    for (q, row) in table.iter().enumerate() {
        let mut d_row = Vec::new();
        let mut e_row = Vec::new();
        for (i, cell) in row.iter().enumerate() {
            let Some((to, t)) = cell else {
                return Err(Error::parse(
                    states_line,
                    1,
                    format!("no rule for `{} {}`", names[q], input.name(Letter::generator(i))),
                ));
            };
            d_row.push(*to);
            e_row.push(*t);
        }
        delta.push(d_row);
        eta.push(e_row);
    }
    Transducer::new(&names, initial, input, output, delta, eta)
}
