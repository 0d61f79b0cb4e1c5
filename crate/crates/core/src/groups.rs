//! Finitely generated groups presented operationally.
//!
//! A [`GroupOracle`] pairs a [`GeneratorAlphabet`] with a concrete model
//! (free abelian, free, Heisenberg, or a bare word-problem predicate). For the
//! built-in models every generator is evaluated to an [`Element`], which is
//! also the canonical form used for self-avoidance hashing.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{GeneratorAlphabet, Letter, Word};
use crate::error::{Error, Result};

/// Canonical group element of a built-in model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Integer vector in ℤ^d.
    Vector(Vec<i64>),
    /// Freely reduced word over the free basis (letters of the basis alphabet).
    Free(Vec<Letter>),
    /// Heisenberg triple `(x, y, z)`.
    Triple([i64; 3]),
}

impl Element {
    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Vector(u), Element::Vector(v)) => {
                Element::Vector(u.iter().zip(v).map(|(a, b)| a + b).collect())
            }
            (Element::Free(u), Element::Free(v)) => {
                let mut out = u.clone();
                for &l in v {
                    free_push(&mut out, l);
                }
                Element::Free(out)
            }
            (Element::Triple(a), Element::Triple(b)) => Element::Triple([
                a[0] + b[0],
                a[1] + b[1],
                a[2] + b[2] + a[0] * b[1],
            ]),
            _ => panic!("multiplying elements of different models"),
        }
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Vector(v) => Element::Vector(v.iter().map(|x| -x).collect()),
            Element::Free(w) => Element::Free(crate::alphabet::invert_word(w)),
            Element::Triple([x, y, z]) => Element::Triple([-x, -y, -z + x * y]),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Element::Free(w) => {
                let parts: Vec<String> = w.iter().map(|l| l.0.to_string()).collect();
                write!(f, "[{}]", parts.join(" "))
            }
            Element::Triple([x, y, z]) => write!(f, "({x},{y},{z})"),
        }
    }
}

fn free_push(w: &mut Vec<Letter>, l: Letter) {
    if w.last() == Some(&l.inverse()) {
        w.pop();
    } else {
        w.push(l);
    }
}

/// Optional abilities of a group oracle that solvers can exploit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Capabilities {
    pub exact_skeleton_automaton: bool,
    pub exact_periodic_certification: bool,
    pub geodesic_automaton: bool,
    pub tree_structured: bool,
}

type WordPredicate = Arc<dyn Fn(&[Letter]) -> bool + Send + Sync>;

#[derive(Clone)]
enum Model {
    FreeAbelian { dim: usize },
    Free { rank: usize },
    Heisenberg,
    WordProblem(WordPredicate),
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::FreeAbelian { dim } => write!(f, "FreeAbelian({dim})"),
            Model::Free { rank } => write!(f, "Free({rank})"),
            Model::Heisenberg => write!(f, "Heisenberg"),
            Model::WordProblem(_) => write!(f, "WordProblem"),
        }
    }
}

/// Which built-in model backs a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    FreeAbelian(usize),
    Free(usize),
    Heisenberg,
    WordProblem,
}

/// A periodic skeleton found by [`GroupOracle::periodic_skeleton_word`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicWord {
    pub word: Word,
    /// `false` when injectivity of `word^∞` was only checked on a finite window.
    pub exact: bool,
}

/// An immutable, finitely generated group with a decidable word problem.
#[derive(Debug, Clone)]
pub struct GroupOracle {
    descriptor: String,
    alphabet: GeneratorAlphabet,
    model: Model,
    images: Vec<Element>,
    standard_basis: bool,
}

fn default_names(n: usize) -> Result<Vec<String>> {
    if n > 26 {
        return Err(Error::InvalidGroup(format!(
            "{n} generators need explicit names"
        )));
    }
    Ok((0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect())
}

impl GroupOracle {
    /// ℤ^d with the standard basis, generators named `a, b, c, …`.
    pub fn free_abelian_standard(dim: usize) -> Result<Self> {
        let gens: Vec<Vec<i64>> = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        let names = default_names(dim)?;
        Self::free_abelian(dim, &names, &gens)
    }

    /// ℤ^d with the given generating vectors. The vectors must generate the
    /// whole lattice, which is checked by integer row reduction.
    pub fn free_abelian<S: AsRef<str>>(dim: usize, names: &[S], gens: &[Vec<i64>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGroup("dimension must be positive".into()));
        }
        if names.len() != gens.len() {
            return Err(Error::InvalidGroup(
                "one name is needed per generating vector".into(),
            ));
        }
        if let Some(v) = gens.iter().find(|v| v.len() != dim) {
            return Err(Error::InvalidGroup(format!(
                "vector {v:?} does not have dimension {dim}"
            )));
        }
        if !spans_lattice(dim, gens) {
            return Err(Error::InvalidGroup(format!(
                "vectors {gens:?} do not generate ℤ^{dim}"
            )));
        }
        let alphabet = GeneratorAlphabet::new(names)?;
        let standard_basis = gens.len() == dim
            && gens
                .iter()
                .enumerate()
                .all(|(i, v)| v.iter().enumerate().all(|(j, x)| *x == i64::from(i == j)));
        let descriptor = if standard_basis && names.iter().map(|s| s.as_ref().to_string()).eq(default_names(dim)?) {
            format!("zd:{dim}")
        } else {
            let vs: Vec<String> = gens
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                .collect();
            let ns: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
            format!("zd:{dim}:gens=({}):names={}", vs.join(";"), ns.join(","))
        };
        Ok(GroupOracle {
            descriptor,
            alphabet,
            model: Model::FreeAbelian { dim },
            images: gens.iter().cloned().map(Element::Vector).collect(),
            standard_basis,
        })
    }

    /// The free group F_k on generators `a, b, …`.
    pub fn free_group(rank: usize) -> Result<Self> {
        let names = default_names(rank)?;
        Self::free_group_named(&names)
    }

    pub fn free_group_named<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidGroup("free group needs a generator".into()));
        }
        let alphabet = GeneratorAlphabet::new(names)?;
        let rank = names.len();
        let descriptor = if names.iter().map(|s| s.as_ref().to_string()).eq(default_names(rank)?) {
            format!("free:{rank}")
        } else {
            let ns: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
            format!("free:{rank}:names={}", ns.join(","))
        };
        Ok(GroupOracle {
            descriptor,
            alphabet,
            model: Model::Free { rank },
            images: (0..rank)
                .map(|i| Element::Free(vec![Letter::generator(i)]))
                .collect(),
            standard_basis: true,
        })
    }

    /// The discrete Heisenberg group with generators `X, Y, Z`, where
    /// `Z = [X, Y]` is central.
    pub fn heisenberg() -> Self {
        GroupOracle {
            descriptor: "heisenberg".into(),
            alphabet: GeneratorAlphabet::new(&["X", "Y", "Z"]).expect("static alphabet"),
            model: Model::Heisenberg,
            images: vec![
                Element::Triple([1, 0, 0]),
                Element::Triple([0, 1, 0]),
                Element::Triple([0, 0, 1]),
            ],
            standard_basis: true,
        }
    }

    /// A group known only through a word-problem predicate. Solvers fall back
    /// to quadratic factor testing for such groups.
    pub fn from_word_problem(
        name: &str,
        alphabet: GeneratorAlphabet,
        wp: impl Fn(&[Letter]) -> bool + Send + Sync + 'static,
    ) -> Self {
        GroupOracle {
            descriptor: name.to_string(),
            alphabet,
            model: Model::WordProblem(Arc::new(wp)),
            images: Vec::new(),
            standard_basis: false,
        }
    }

    /// Parses `zd:<d>`, `zd:<d>:gens=(v1;v2;…)`, `free:<k>` or `heisenberg`,
    /// each optionally followed by `:names=n1,n2,…`.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let unknown = || Error::UnknownGroup(text.to_string());
        let mut parts = text.trim().split(':');
        let kind = parts.next().ok_or_else(unknown)?;
        let mut rest: Vec<&str> = parts.collect();
        // `gens=(…)` contains no ':' so a plain split is enough
        let mut names: Option<Vec<String>> = None;
        if let Some(pos) = rest.iter().position(|p| p.starts_with("names=")) {
            let n = rest.remove(pos);
            names = Some(n["names=".len()..].split(',').map(str::to_string).collect());
        }
        match kind {
            "heisenberg" if rest.is_empty() => match names {
                None => Ok(Self::heisenberg()),
                Some(_) => Err(unknown()),
            },
            "free" if rest.len() == 1 => {
                let k: usize = rest[0].parse().map_err(|_| unknown())?;
                match names {
                    None => Self::free_group(k),
                    Some(n) if n.len() == k => Self::free_group_named(&n),
                    Some(_) => Err(unknown()),
                }
            }
            "zd" if rest.len() == 1 || rest.len() == 2 => {
                let d: usize = rest[0].parse().map_err(|_| unknown())?;
                let gens = if rest.len() == 2 {
                    let g = rest[1]
                        .strip_prefix("gens=(")
                        .and_then(|g| g.strip_suffix(')'))
                        .ok_or_else(unknown)?;
                    g.split(';')
                        .map(|v| {
                            v.split(',')
                                .map(|x| x.trim().parse::<i64>().map_err(|_| unknown()))
                                .collect::<Result<Vec<i64>>>()
                        })
                        .collect::<Result<Vec<_>>>()?
                } else {
                    (0..d)
                        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
                        .collect()
                };
                let names = match names {
                    Some(n) => n,
                    None => default_names(gens.len())?,
                };
                Self::free_abelian(d, &names, &gens)
            }
            _ => Err(unknown()),
        }
    }

    /// Adds a generator standing for `word` (the pair `(G, S ∪ {w})`).
    pub fn with_extra_generator(&self, name: &str, word: &[Letter]) -> Result<Self> {
        let image = self.canonical(word).ok_or_else(|| {
            Error::InvalidGroup("extra generators need a built-in model".into())
        })?;
        let mut pairs = self.alphabet.pairs();
        pairs.push((name.to_string(), format!("{name}^-1")));
        let alphabet = GeneratorAlphabet::with_inverse_names(&pairs)?;
        let mut images = self.images.clone();
        images.push(image);
        Ok(GroupOracle {
            descriptor: format!("{}+{}={}", self.descriptor, name, self.alphabet.format_word(word).replace(' ', ".")),
            alphabet,
            model: self.model.clone(),
            images,
            standard_basis: false,
        })
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    pub fn model_kind(&self) -> ModelKind {
        match self.model {
            Model::FreeAbelian { dim } => ModelKind::FreeAbelian(dim),
            Model::Free { rank } => ModelKind::Free(rank),
            Model::Heisenberg => ModelKind::Heisenberg,
            Model::WordProblem(_) => ModelKind::WordProblem,
        }
    }

    /// True when the alphabet is the standard basis of the model
    /// (unit vectors for ℤ^d, a free basis for F_k, `X, Y, Z`).
    pub fn has_standard_basis(&self) -> bool {
        self.standard_basis
    }

    pub fn capabilities(&self) -> Capabilities {
        match self.model {
            Model::Free { .. } if self.standard_basis => Capabilities {
                exact_skeleton_automaton: true,
                exact_periodic_certification: true,
                geodesic_automaton: true,
                tree_structured: true,
            },
            Model::FreeAbelian { .. } => Capabilities {
                exact_periodic_certification: true,
                geodesic_automaton: self.standard_basis,
                ..Capabilities::default()
            },
            _ => Capabilities::default(),
        }
    }

    pub fn identity(&self) -> Option<Element> {
        match self.model {
            Model::FreeAbelian { dim } => Some(Element::Vector(vec![0; dim])),
            Model::Free { .. } => Some(Element::Free(Vec::new())),
            Model::Heisenberg => Some(Element::Triple([0, 0, 0])),
            Model::WordProblem(_) => None,
        }
    }

    /// Image of a single letter; `None` for word-problem-only groups.
    pub fn letter_element(&self, l: Letter) -> Option<Element> {
        let g = self.images.get(l.generator_index())?;
        Some(if l.is_inverse() { g.inverse() } else { g.clone() })
    }

    /// `e · l`, the right action of a letter.
    pub fn step(&self, e: &Element, l: Letter) -> Element {
        match (e, &self.images[l.generator_index()]) {
            (Element::Free(w), Element::Free(img)) if img.len() == 1 => {
                let mut w = w.clone();
                let x = if l.is_inverse() { img[0].inverse() } else { img[0] };
                free_push(&mut w, x);
                Element::Free(w)
            }
            _ => e.mul(&self.letter_element(l).expect("built-in model")),
        }
    }

    /// Canonical form of the element a word evaluates to.
    pub fn canonical(&self, w: &[Letter]) -> Option<Element> {
        let mut e = self.identity()?;
        for &l in w {
            e = self.step(&e, l);
        }
        Some(e)
    }

    fn wp_raw(&self, w: &[Letter]) -> bool {
        match &self.model {
            Model::WordProblem(p) => p(w),
            _ => self.canonical(w) == self.identity(),
        }
    }

    /// Word problem: does `w` evaluate to the identity?
    pub fn wp_check(&self, w: &[Letter]) -> Result<bool> {
        self.alphabet.check_word(w)?;
        Ok(self.wp_raw(w))
    }

    /// True iff no non-empty factor of `w` evaluates to the identity, i.e.
    /// the walk spelled by `w` from any point is self-avoiding.
    pub fn is_g_reduced(&self, w: &[Letter]) -> Result<bool> {
        if w.is_empty() {
            return Err(Error::Precondition(
                "G-reducedness is defined for non-empty words".into(),
            ));
        }
        self.alphabet.check_word(w)?;
        Ok(self.is_reduced_unchecked(w))
    }

    pub(crate) fn is_reduced_unchecked(&self, w: &[Letter]) -> bool {
        match self.identity() {
            Some(mut e) => {
                let mut seen = HashSet::with_capacity(w.len() + 1);
                seen.insert(e.clone());
                for &l in w {
                    e = self.step(&e, l);
                    if !seen.insert(e.clone()) {
                        return false;
                    }
                }
                true
            }
            None => {
                for i in 0..w.len() {
                    for j in i + 1..=w.len() {
                        if self.wp_raw(&w[i..j]) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    /// Searches words of length ≤ `max_len` in length-lexicographic order for
    /// one whose bi-infinite power is a valid skeleton.
    ///
    /// For ℤ^d and standard free groups the certificate is exact. Other groups
    /// are checked on a window of `2 · max_len` letters and the result is
    /// flagged as bounded.
    pub fn periodic_skeleton_word(&self, max_len: usize) -> Result<Option<PeriodicWord>> {
        if max_len == 0 {
            return Err(Error::Precondition("max_len must be at least 1".into()));
        }
        let letters: Vec<Letter> = self.alphabet.letters().collect();
        for len in 1..=max_len {
            let mut idx = vec![0usize; len];
            loop {
                let w: Word = idx.iter().map(|&i| letters[i]).collect();
                if let Some(p) = self.certify_periodic(&w, max_len) {
                    return Ok(Some(p));
                }
                // odometer, last position fastest
                let mut pos = len;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < letters.len() {
                        break;
                    }
                    idx[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
        }
        Ok(None)
    }

    fn certify_periodic(&self, w: &[Letter], max_len: usize) -> Option<PeriodicWord> {
        match self.model {
            Model::FreeAbelian { .. } => {
                let pts: Vec<Vec<i64>> = prefix_vectors(self, w);
                residue_test(&pts).then(|| PeriodicWord {
                    word: w.to_vec(),
                    exact: true,
                })
            }
            Model::Free { .. } if self.standard_basis => {
                let reduced = w.windows(2).all(|p| p[1] != p[0].inverse());
                let cyclic = w.len() == 1 || w[w.len() - 1] != w[0].inverse();
                (reduced && cyclic).then(|| PeriodicWord {
                    word: w.to_vec(),
                    exact: true,
                })
            }
            _ => {
                let window = 2 * max_len;
                let reps = window.div_ceil(w.len()).max(2);
                let power: Word = w.iter().copied().cycle().take(reps * w.len()).collect();
                self.is_reduced_unchecked(&power).then(|| PeriodicWord {
                    word: w.to_vec(),
                    exact: false,
                })
            }
        }
    }

    /// Exact injectivity of the periodic walk `w^∞`, where the model allows
    /// deciding it (ℤ^d, standard free groups); `None` otherwise.
    pub fn periodic_walk_injective(&self, w: &[Letter]) -> Option<bool> {
        if w.is_empty() {
            return Some(false);
        }
        match self.model {
            Model::FreeAbelian { .. } | Model::Free { .. } if self.capabilities().exact_periodic_certification => {
                Some(self.certify_periodic(w, w.len()).is_some())
            }
            _ => None,
        }
    }

    /// For built-in models: is `e` central and of infinite order?
    pub fn is_central_infinite_order(&self, e: &Element) -> Option<bool> {
        match (&self.model, e) {
            (Model::FreeAbelian { .. }, Element::Vector(v)) => Some(v.iter().any(|x| *x != 0)),
            (Model::Heisenberg, Element::Triple([x, y, z])) => Some(*x == 0 && *y == 0 && *z != 0),
            (Model::Free { rank }, Element::Free(w)) => Some(*rank == 1 && !w.is_empty()),
            _ => None,
        }
    }

    /// For built-in models: does `e` lie in the cyclic subgroup `⟨g⟩`?
    /// Only meaningful for central `g`, as produced by the center embedding.
    pub fn in_cyclic_subgroup(&self, e: &Element, g: &Element) -> Option<bool> {
        match (e, g) {
            (Element::Vector(v), Element::Vector(gv)) => Some(integer_multiple(v, gv).is_some()),
            (Element::Triple([x, y, z]), Element::Triple([0, 0, gz])) if *gz != 0 => {
                Some(*x == 0 && *y == 0 && z % gz == 0)
            }
            (Element::Free(w), Element::Free(gw)) if gw.len() == 1 => {
                Some(w.iter().all(|l| l.generator_index() == gw[0].generator_index()))
            }
            _ => None,
        }
    }
}

/// Prefix sums `p₀ = 0, …, p_{n-1}` followed by the total displacement.
fn prefix_vectors(group: &GroupOracle, w: &[Letter]) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut e = group.identity().expect("built-in model");
    if let Element::Vector(v) = &e {
        out.push(v.clone());
    }
    for &l in w {
        e = group.step(&e, l);
        if let Element::Vector(v) = &e {
            out.push(v.clone());
        }
    }
    out
}

/// `Some(t)` with `v = t · g`, if such an integer exists (`g ≠ 0`).
pub(crate) fn integer_multiple(v: &[i64], g: &[i64]) -> Option<i64> {
    let c = g.iter().position(|x| *x != 0)?;
    if v[c] % g[c] != 0 {
        return None;
    }
    let t = v[c] / g[c];
    v.iter().zip(g).all(|(a, b)| *a == t * b).then_some(t)
}

/// Injectivity of the periodic walk `w^∞` given its prefix points
/// `p₀ … p_n` (with `p_n` the displacement).
fn residue_test(pts: &[Vec<i64>]) -> bool {
    let n = pts.len() - 1;
    let v = &pts[n];
    if v.iter().all(|x| *x == 0) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            let d: Vec<i64> = pts[j].iter().zip(&pts[i]).map(|(a, b)| a - b).collect();
            if integer_multiple(&d, v).is_some() {
                return false;
            }
        }
    }
    true
}

/// Do the integer vectors generate all of ℤ^dim? Row echelon reduction by
/// unimodular row operations; the lattice is full iff every column gets a
/// unit pivot.
fn spans_lattice(dim: usize, gens: &[Vec<i64>]) -> bool {
    let mut rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|v| v.iter().map(|x| i128::from(*x)).collect())
        .collect();
    let mut pivot_row = 0;
    for col in 0..dim {
        loop {
            // smallest non-zero |entry| in this column at or below the pivot row
            let best = (pivot_row..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].abs());
            let Some(b) = best else {
                return false;
            };
            rows.swap(pivot_row, b);
            let p = rows[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                let q = rows[r][col] / p;
                if q != 0 {
                    for c in 0..dim {
                        rows[r][c] -= q * rows[pivot_row][c];
                    }
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].abs() != 1 {
            return false;
        }
        pivot_row += 1;
    }
    true
}
