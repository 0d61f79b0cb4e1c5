//! Finite labelled graphs presenting sofic subshifts over `S ∪ S⁻¹`.
//!
//! A configuration belongs to the presented subshift when it labels a
//! bi-infinite path. Such a path exists iff the graph still has a cycle after
//! [`trim`] removes every state without a predecessor or a successor.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{GeneratorAlphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::groups::GroupOracle;
use crate::tilesets::{over_alphabet, TilesetGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// Over-approximation forbidding relators up to this length.
    Approximation(usize),
    UserSupplied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: usize,
    pub letter: Letter,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonAutomaton {
    alphabet: GeneratorAlphabet,
    states: Vec<String>,
    transitions: Vec<Transition>,
    // out[state] = sorted (letter, to)
    out: Vec<Vec<(Letter, usize)>>,
    exactness: Exactness,
    // for products: the pair of component states behind each state
    pairs: Option<Vec<(usize, usize)>>,
}

impl SkeletonAutomaton {
    pub fn new(
        alphabet: GeneratorAlphabet,
        states: Vec<String>,
        transitions: impl IntoIterator<Item = Transition>,
        exactness: Exactness,
    ) -> Result<Self> {
        let set: BTreeSet<Transition> = transitions.into_iter().collect();
        let mut out = vec![Vec::new(); states.len()];
        for t in &set {
            if t.from >= states.len() || t.to >= states.len() {
                return Err(Error::Precondition(format!("transition {t:?} leaves the state set")));
            }
            alphabet.check_word(&[t.letter])?;
            out[t.from].push((t.letter, t.to));
        }
        for o in &mut out {
            o.sort();
        }
        Ok(SkeletonAutomaton {
            alphabet,
            states,
            transitions: set.into_iter().collect(),
            out,
            exactness,
            pairs: None,
        })
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn with_exactness(mut self, e: Exactness) -> Self {
        self.exactness = e;
        self
    }

    pub fn outgoing(&self, state: usize) -> &[(Letter, usize)] {
        &self.out[state]
    }

    /// Component states of a product state, if this automaton is a product
    /// (or a trimmed product).
    pub fn pair(&self, state: usize) -> Option<(usize, usize)> {
        self.pairs.as_ref().map(|p| p[state])
    }

    /// Can `w` be read along some path, starting anywhere?
    pub fn accepts(&self, w: &[Letter]) -> bool {
        let mut current: BTreeSet<usize> = (0..self.states.len()).collect();
        for &l in w {
            current = current
                .iter()
                .flat_map(|&q| self.out[q].iter().filter(move |(x, _)| *x == l).map(|(_, t)| *t))
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        true
    }

    /// Is `w^∞` readable along a cycle, i.e. does some state return to itself
    /// after reading `w`?
    pub fn accepts_cycle(&self, w: &[Letter]) -> bool {
        (0..self.states.len()).any(|s| {
            let mut current = BTreeSet::from([s]);
            for &l in w {
                current = current
                    .iter()
                    .flat_map(|&q| self.out[q].iter().filter(move |(x, _)| *x == l).map(|(_, t)| *t))
                    .collect();
            }
            current.contains(&s)
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet: {}\n", self.alphabet);
        for s in &self.states {
            out.push_str(&format!("state: {s}\n"));
        }
        for t in &self.transitions {
            out.push_str(&format!(
                "trans: {} {} {}\n",
                self.states[t.from],
                self.alphabet.name(t.letter),
                self.states[t.to]
            ));
        }
        out
    }
}

/// `X_Γ`: states are tiles and every edge of `Γ` is a transition.
pub fn walk_automaton(g: &TilesetGraph) -> SkeletonAutomaton {
    let transitions = g.edges().iter().map(|e| Transition {
        from: e.from,
        letter: e.letter,
        to: e.to,
    });
    SkeletonAutomaton::new(g.alphabet().clone(), g.tiles().to_vec(), transitions, Exactness::Exact)
        .expect("tileset edges are in range")
}

/// The SFT over all letters of `alphabet` avoiding `forbidden`.
pub fn sft_automaton(alphabet: &GeneratorAlphabet, forbidden: &[Word]) -> Result<SkeletonAutomaton> {
    let letters: Vec<Letter> = alphabet.letters().collect();
    sft_automaton_over(alphabet, &letters, forbidden)
}

/// The SFT over the letters `letters ⊆ S ∪ S⁻¹` avoiding `forbidden`,
/// presented on de Bruijn states (words of length `m − 1`, `m` the longest
/// forbidden word).
pub fn sft_automaton_over(
    alphabet: &GeneratorAlphabet,
    letters: &[Letter],
    forbidden: &[Word],
) -> Result<SkeletonAutomaton> {
    if forbidden.iter().any(|w| w.is_empty()) {
        return Err(Error::Precondition("forbidden words must be non-empty".into()));
    }
    alphabet.check_word(letters)?;
    for w in forbidden {
        alphabet.check_word(w)?;
    }
    let letters: Vec<Letter> = letters.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let forbidden: std::collections::HashSet<&[Letter]> = forbidden.iter().map(|w| w.as_slice()).collect();
    let m = forbidden.iter().map(|w| w.len()).max().unwrap_or(0);
    let window = m.saturating_sub(1);

    // a word is admissible if none of its suffixes is forbidden; checking
    // suffixes at every extension covers all factors
    let extends = |w: &[Letter]| (1..=w.len().min(m)).all(|k| !forbidden.contains(&w[w.len() - k..]));

    let mut states: Vec<Word> = vec![Vec::new()];
    for _ in 0..window {
        let mut next = Vec::new();
        for s in &states {
            for &l in &letters {
                let mut w = s.clone();
                w.push(l);
                if extends(&w) {
                    next.push(w);
                }
            }
        }
        states = next;
    }
    let index: HashMap<Word, usize> = states.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut transitions = Vec::new();
    for (i, s) in states.iter().enumerate() {
        for &l in &letters {
            let mut w = s.clone();
            w.push(l);
            if extends(&w) {
                let target: Word = w[w.len() - window..].to_vec();
                transitions.push(Transition {
                    from: i,
                    letter: l,
                    to: index[&target],
                });
            }
        }
    }
    let names = states
        .iter()
        .map(|w| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                w.iter().map(|l| alphabet.name(*l)).collect::<Vec<_>>().join(".")
            }
        })
        .collect();
    SkeletonAutomaton::new(alphabet.clone(), names, transitions, Exactness::Exact)
}

/// Relators of length ≤ `n` none of whose proper factors is a relator.
pub fn minimal_relators(group: &GroupOracle, n: usize) -> Vec<Word> {
    let letters: Vec<Letter> = group.alphabet().letters().collect();
    let mut out = Vec::new();
    // frontier holds G-reduced words; every minimal relator is such a word
    // extended by one letter
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for len in 1..=n {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                let mut x = w.clone();
                x.push(l);
                // x[1..] is a factor; it must be reduced too
                if len >= 2 && !group.is_reduced_unchecked(&x[1..]) {
                    continue;
                }
                if group.wp_check(&x).unwrap_or(false) {
                    out.push(x);
                } else if group.is_reduced_unchecked(&x) {
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Over-approximation of the skeleton subshift forbidding every relator of
/// length ≤ `n`.
pub fn skeleton_approximation(group: &GroupOracle, n: usize) -> Result<SkeletonAutomaton> {
    if n < 2 {
        return Err(Error::Precondition("approximation order must be at least 2".into()));
    }
    let forbidden = minimal_relators(group, n);
    Ok(sft_automaton(group.alphabet(), &forbidden)?.with_exactness(Exactness::Approximation(n)))
}

/// Built-in exact skeletal subshifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkeletonKind {
    /// Freely reduced words on `k` generators.
    Free(usize),
    /// Snakes moving only along the given letters (no immediate backtracking).
    Directions(Vec<Letter>),
    /// Bi-infinite geodesics of ℤ^d with the standard basis.
    ZdGeodesic(usize),
}

impl SkeletonKind {
    /// Parses `free`, `geodesic`, or `directions=a,b^-1` against an alphabet.
    pub fn parse(text: &str, alphabet: &GeneratorAlphabet) -> Result<Self> {
        let k = alphabet.generator_count();
        match text {
            "free" => Ok(SkeletonKind::Free(k)),
            "geodesic" => Ok(SkeletonKind::ZdGeodesic(k)),
            _ => match text.strip_prefix("directions=") {
                Some(list) => Ok(SkeletonKind::Directions(
                    list.split(',')
                        .map(|s| alphabet.letter(s.trim()))
                        .collect::<Result<Vec<_>>>()?,
                )),
                None => Err(Error::UnknownSkeleton(text.to_string())),
            },
        }
    }

    pub fn describe(&self, alphabet: &GeneratorAlphabet) -> String {
        match self {
            SkeletonKind::Free(_) => "builtin:free".into(),
            SkeletonKind::ZdGeodesic(_) => "builtin:geodesic".into(),
            SkeletonKind::Directions(d) => format!(
                "builtin:directions={}",
                d.iter().map(|l| alphabet.name(*l)).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

pub fn builtin_skeleton(kind: &SkeletonKind, alphabet: &GeneratorAlphabet) -> Result<SkeletonAutomaton> {
    match kind {
        SkeletonKind::Free(k) | SkeletonKind::ZdGeodesic(k) if *k != alphabet.generator_count() => {
            Err(Error::AlphabetMismatch(format!(
                "skeleton needs {k} generators, alphabet has {}",
                alphabet.generator_count()
            )))
        }
        SkeletonKind::Free(_) => {
            let forbidden: Vec<Word> = alphabet.letters().map(|l| vec![l, l.inverse()]).collect();
            sft_automaton(alphabet, &forbidden)
        }
        SkeletonKind::Directions(d) => {
            let set: BTreeSet<Letter> = d.iter().copied().collect();
            let forbidden: Vec<Word> = set
                .iter()
                .filter(|l| set.contains(&l.inverse()))
                .map(|l| vec![*l, l.inverse()])
                .collect();
            let letters: Vec<Letter> = set.into_iter().collect();
            sft_automaton_over(alphabet, &letters, &forbidden)
        }
        SkeletonKind::ZdGeodesic(d) => {
            // one single-state component per sign pattern
            let mut states = Vec::new();
            let mut transitions = Vec::new();
            for pattern in 0..(1usize << d) {
                let state = states.len();
                let mut name = String::new();
                for g in 0..*d {
                    let l = Letter::generator(g);
                    let l = if pattern >> (d - 1 - g) & 1 == 1 { l.inverse() } else { l };
                    name.push_str(if l.is_inverse() { "-" } else { "+" });
                    name.push_str(alphabet.generator_names().nth(g).unwrap_or("?"));
                    transitions.push(Transition {
                        from: state,
                        letter: l,
                        to: state,
                    });
                }
                states.push(name);
            }
            SkeletonAutomaton::new(alphabet.clone(), states, transitions, Exactness::Exact)
        }
    }
}

/// Synchronous product; presents the intersection of the two subshifts.
/// State `(i, j)` has index `i · |y| + j`.
pub fn product(x: &SkeletonAutomaton, y: &SkeletonAutomaton) -> Result<SkeletonAutomaton> {
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch(format!(
            "product of automata over `{}` and `{}`",
            x.alphabet, y.alphabet
        )));
    }
    let ny = y.state_count();
    let mut states = Vec::with_capacity(x.state_count() * ny);
    let mut pairs = Vec::with_capacity(x.state_count() * ny);
    for i in 0..x.state_count() {
        for j in 0..ny {
            states.push(format!("({},{})", x.states[i], y.states[j]));
            pairs.push((i, j));
        }
    }
    let mut transitions = Vec::new();
    for i in 0..x.state_count() {
        for &(l, i2) in &x.out[i] {
            for j in 0..ny {
                for &(m, j2) in &y.out[j] {
                    if l == m {
                        transitions.push(Transition {
                            from: i * ny + j,
                            letter: l,
                            to: i2 * ny + j2,
                        });
                    }
                }
            }
        }
    }
    let exactness = match (x.exactness, y.exactness) {
        (Exactness::Exact, Exactness::Exact) => Exactness::Exact,
        (Exactness::Approximation(n), _) | (_, Exactness::Approximation(n)) => Exactness::Approximation(n),
        _ => Exactness::UserSupplied,
    };
    let mut p = SkeletonAutomaton::new(x.alphabet.clone(), states, transitions, exactness)?;
    p.pairs = Some(pairs);
    Ok(p)
}

/// Indices of the states that survive trimming, in increasing order.
pub fn surviving_states(x: &SkeletonAutomaton) -> Vec<usize> {
    let n = x.state_count();
    let mut alive = vec![true; n];
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    let mut preds = vec![Vec::new(); n];
    for t in &x.transitions {
        outdeg[t.from] += 1;
        indeg[t.to] += 1;
        preds[t.to].push(t.from);
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&s| indeg[s] == 0 || outdeg[s] == 0).collect();
    while let Some(s) = queue.pop_front() {
        if !alive[s] {
            continue;
        }
        alive[s] = false;
        for &(_, t) in &x.out[s] {
            if alive[t] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        for &p in &preds[s] {
            if alive[p] {
                outdeg[p] -= 1;
                if outdeg[p] == 0 {
                    queue.push_back(p);
                }
            }
        }
    }
    (0..n).filter(|&s| alive[s]).collect()
}

/// Removes states that lie on no bi-infinite path. Product pairing is kept.
pub fn trim(x: &SkeletonAutomaton) -> SkeletonAutomaton {
    let keep = surviving_states(x);
    let mut renumber = vec![usize::MAX; x.state_count()];
    for (new, &old) in keep.iter().enumerate() {
        renumber[old] = new;
    }
    let transitions = x.transitions.iter().filter(|&t| renumber[t.from] != usize::MAX && renumber[t.to] != usize::MAX).map(|t| Transition {
            from: renumber[t.from],
            letter: t.letter,
            to: renumber[t.to],
        });
    let states = keep.iter().map(|&s| x.states[s].clone()).collect();
    let mut out = SkeletonAutomaton::new(x.alphabet.clone(), states, transitions, x.exactness)
        .expect("renumbered transitions are in range");
    out.pairs = x.pairs.as_ref().map(|p| keep.iter().map(|&s| p[s]).collect());
    out
}

/// A cycle `states[0] -word[0]-> states[1] … -> states[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub word: Word,
    pub states: Vec<usize>,
}

/// A path `states[0] -word[0]-> … -> states[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub word: Word,
    pub states: Vec<usize>,
}

/// Witness of nonemptiness. `Periodic` repeats one cycle; `Lasso` runs the
/// left cycle forever into the past, crosses `bridge` and then runs the
/// right cycle forever. State indices refer to the automaton that was
/// searched (untrimmed input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BiInfinitePath {
    Periodic(Cycle),
    Lasso {
        left: Cycle,
        bridge: Path,
        right: Cycle,
        /// Position in `bridge.states` of the state selected by the seed.
        seed_position: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nonemptiness {
    Empty,
    Nonempty(BiInfinitePath),
}

impl Nonemptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Nonemptiness::Empty)
    }
}

/// Shortest path from `from` to `to` using at least one transition, within
/// `alive` states; BFS in transition order.
fn shortest_path(x: &SkeletonAutomaton, alive: &[bool], from: usize, to: usize, reverse: bool) -> Option<Path> {
    let n = x.state_count();
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut preds: Vec<Vec<(Letter, usize)>> = Vec::new();
    if reverse {
        preds = vec![Vec::new(); n];
        for t in &x.transitions {
            preds[t.to].push((t.letter, t.from));
        }
    }
    let edges = |s: usize| -> &[(Letter, usize)] {
        if reverse {
            &preds[s]
        } else {
            &x.out[s]
        }
    };
    // seed the queue with the successors of `from` so that `to == from`
    // yields a proper cycle
    for &(l, t) in edges(from) {
        if alive[t] && !seen[t] {
            seen[t] = true;
            parent[t] = Some((from, l));
            queue.push_back(t);
        }
    }
    while let Some(s) = queue.pop_front() {
        if s == to {
            // rebuild
            let mut word = Vec::new();
            let mut states = vec![to];
            let mut cur = to;
            loop {
                let (p, l) = parent[cur].expect("reached states have parents");
                word.push(l);
                states.push(p);
                cur = p;
                if cur == from && states.len() > 1 {
                    break;
                }
            }
            word.reverse();
            states.reverse();
            if reverse {
                // walking predecessors; flip into a forward path to -> from
                word.reverse();
                states.reverse();
            }
            return Some(Path { word, states });
        }
        for &(l, t) in edges(s) {
            if alive[t] && !seen[t] {
                seen[t] = true;
                parent[t] = Some((s, l));
                queue.push_back(t);
            }
        }
    }
    None
}

fn shortest_cycle_through(x: &SkeletonAutomaton, alive: &[bool], s: usize) -> Option<Cycle> {
    shortest_path(x, alive, s, s, false).map(|p| Cycle {
        word: p.word,
        states: p.states[..p.states.len() - 1].to_vec(),
    })
}

/// Nonemptiness of the presented subshift. Without a seed the witness is a
/// shortest cycle (ties: lowest starting state). With a seed, a surviving
/// state satisfying it must lie on the path; a cycle through such a state is
/// preferred, otherwise a lasso through it is returned.
pub fn has_biinfinite_path(x: &SkeletonAutomaton, seed: Option<&dyn Fn(usize) -> bool>) -> Nonemptiness {
    let keep = surviving_states(x);
    let mut alive = vec![false; x.state_count()];
    for &s in &keep {
        alive[s] = true;
    }
    let candidates: Vec<usize> = keep.iter().copied().filter(|&s| seed.is_none_or(|p| p(s))).collect();
    let mut best: Option<Cycle> = None;
    for &s in &candidates {
        if let Some(c) = shortest_cycle_through(x, &alive, s) {
            if best.as_ref().is_none_or(|b| c.word.len() < b.word.len()) {
                best = Some(c);
            }
        }
    }
    if let Some(c) = best {
        return Nonemptiness::Nonempty(BiInfinitePath::Periodic(c));
    }
    let Some(&s) = candidates.first() else {
        return Nonemptiness::Empty;
    };
    // s survives trimming but lies on no cycle: walk forward and backward
    // until reaching states on cycles
    let on_cycle: Vec<bool> = (0..x.state_count())
        .map(|q| alive[q] && shortest_cycle_through(x, &alive, q).is_some())
        .collect();
    let reach = |reverse: bool| -> Path {
        keep.iter()
            .filter(|&&q| on_cycle[q])
            .filter_map(|&q| {
                if reverse {
                    shortest_path(x, &alive, s, q, true)
                } else {
                    shortest_path(x, &alive, s, q, false)
                }
            })
            .min_by_key(|p| p.word.len())
            .expect("a surviving state reaches cycles in both directions")
    };
    let back = reach(true); // forward path from a cycle state to s
    let fwd = reach(false); // forward path from s to a cycle state
    let left = shortest_cycle_through(x, &alive, back.states[0]).expect("on a cycle");
    let right = shortest_cycle_through(x, &alive, *fwd.states.last().expect("non-empty")).expect("on a cycle");
    let seed_position = back.word.len();
    let mut word = back.word;
    word.extend(fwd.word);
    let mut states = back.states;
    states.extend(fwd.states.into_iter().skip(1));
    Nonemptiness::Nonempty(BiInfinitePath::Lasso {
        left,
        bridge: Path { word, states },
        right,
        seed_position,
    })
}

/// Checks that every word of length ≤ `n` readable in `y` is G-reduced;
/// returns the first offender in length-lexicographic order.
pub fn audit_skeleton(group: &GroupOracle, y: &SkeletonAutomaton, n: usize) -> Result<Option<Word>> {
    if n == 0 {
        return Err(Error::Precondition("audit length must be at least 1".into()));
    }
    if y.alphabet() != group.alphabet() {
        return Err(Error::AlphabetMismatch("skeleton and group alphabets differ".into()));
    }
    let letters: Vec<Letter> = y.alphabet.letters().collect();
    for len in 1..=n {
        if let Some(w) = audit_level(group, y, &letters, len) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn audit_level(group: &GroupOracle, y: &SkeletonAutomaton, letters: &[Letter], len: usize) -> Option<Word> {
    fn go(
        group: &GroupOracle,
        y: &SkeletonAutomaton,
        letters: &[Letter],
        len: usize,
        word: &mut Word,
        states: &BTreeSet<usize>,
    ) -> Option<Word> {
        if word.len() == len {
            return (!group.is_reduced_unchecked(word)).then(|| word.clone());
        }
        for &l in letters {
            let next: BTreeSet<usize> = states
                .iter()
                .flat_map(|&q| y.out[q].iter().filter(move |(x, _)| *x == l).map(|(_, t)| *t))
                .collect();
            if next.is_empty() {
                continue;
            }
            word.push(l);
            // shorter prefixes were checked at earlier levels
            let found = if word.len() < len && !group.is_reduced_unchecked(word) {
                None
            } else {
                go(group, y, letters, len, word, &next)
            };
            word.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    let all: BTreeSet<usize> = (0..y.state_count()).collect();
    go(group, y, letters, len, &mut Vec::new(), &all)
}

/// `product(y, walk_automaton(g))`, lifting `g` to `y`'s alphabet first.
/// The second component of each product state is a tile of `g`.
pub fn walk_product(y: &SkeletonAutomaton, g: &TilesetGraph) -> Result<SkeletonAutomaton> {
    let lifted = over_alphabet(g, y.alphabet())?;
    product(y, &walk_automaton(&lifted))
}
