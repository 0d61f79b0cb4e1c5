//! Generator alphabets `S ∪ S⁻¹` and words over them.
//!
//! A [`Letter`] is an index into the alphabet: generator `i` is letter `2i`
//! and its formal inverse is letter `2i + 1`, so inversion is a bit flip and
//! the natural order on letters is the declared order `s₀, s₀⁻¹, s₁, s₁⁻¹, …`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    pub fn generator(index: usize) -> Self {
        Letter((index as u32) << 1)
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Index of the underlying generator.
    #[inline]
    pub fn generator_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }
}

pub type Word = Vec<Letter>;

/// Inverse of a word: reversed, each letter inverted.
pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Ordered generators with their paired inverse names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorAlphabet {
    // names[2i] is generator i, names[2i + 1] its inverse
    names: Vec<String>,
}

impl GeneratorAlphabet {
    /// Alphabet whose inverses are written `name^-1`.
    pub fn new<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        let pairs: Vec<(String, String)> = generators
            .iter()
            .map(|g| (g.as_ref().to_string(), format!("{}^-1", g.as_ref())))
            .collect();
        Self::with_inverse_names(&pairs)
    }

    /// Alphabet with explicit inverse names, e.g. `("a", "A")`.
    pub fn with_inverse_names(pairs: &[(String, String)]) -> Result<Self> {
        let mut names = Vec::with_capacity(pairs.len() * 2);
        for (g, inv) in pairs {
            for n in [g, inv] {
                if n.is_empty() || n.chars().any(|c| c.is_whitespace()) {
                    return Err(Error::InvalidAlphabet(format!(
                        "symbol name `{n}` is empty or contains whitespace"
                    )));
                }
            }
            if g == inv {
                return Err(Error::InvalidAlphabet(format!(
                    "generator `{g}` is its own inverse (order-2 generators are not supported)"
                )));
            }
            names.push(g.clone());
            names.push(inv.clone());
        }
        let mut seen = HashMap::new();
        for n in &names {
            if seen.insert(n.as_str(), ()).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{n}`")));
            }
        }
        Ok(GeneratorAlphabet { names })
    }

    pub fn generator_count(&self) -> usize {
        self.names.len() / 2
    }

    pub fn letter_count(&self) -> usize {
        self.names.len()
    }

    /// All letters in declared order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len() as u32).map(Letter)
    }

    pub fn generators(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.generator_count()).map(Letter::generator)
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.names.iter().step_by(2).map(String::as_str)
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l.index()]
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        let normalized = name.replace('⁻', "^-").replace('¹', "1");
        self.names
            .iter()
            .position(|n| *n == name || *n == normalized)
            .map(|i| Letter(i as u32))
            .ok_or_else(|| Error::UnknownLetter {
                letter: name.to_string(),
            })
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.index() < self.names.len()
    }

    /// The pairs `(generator, inverse)` in declared order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        self.names
            .chunks(2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect()
    }

    /// Parses a word. Tokens are separated by whitespace; inside a token the
    /// longest matching symbol name is taken greedily, so `ab^-1` and
    /// `a b^-1` are the same word. `ε` (or an empty string) is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.replace('⁻', "^-").replace('¹', "1");
        let mut word = Vec::new();
        for token in text.split_whitespace() {
            if token == "ε" {
                continue;
            }
            let mut rest = token;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((i, n)) => {
                        word.push(Letter(i as u32));
                        rest = &rest[n.len()..];
                    }
                    None => {
                        return Err(Error::UnknownLetter {
                            letter: rest.to_string(),
                        })
                    }
                }
            }
        }
        Ok(word)
    }

    /// Space-separated rendering; the empty word renders as `ε`.
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.iter()
            .map(|l| self.name(*l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::UnknownLetter {
                letter: format!("#{}", l.0),
            }),
            None => Ok(()),
        }
    }

    /// Maps each letter of `self` to the letter with the same name in
    /// `target`, requiring the inverse pairing to agree.
    pub fn embedding_into(&self, target: &GeneratorAlphabet) -> Result<Vec<Letter>> {
        let mut map = Vec::with_capacity(self.letter_count());
        for (g, inv) in self.pairs() {
            let tg = target.letter(&g).map_err(|_| {
                Error::AlphabetMismatch(format!("generator `{g}` is missing from the target"))
            })?;
            if target.name(tg.inverse()) != inv {
                return Err(Error::AlphabetMismatch(format!(
                    "`{g}` has inverse `{inv}` but the target pairs it with `{}`",
                    target.name(tg.inverse())
                )));
            }
            map.push(tg);
            map.push(tg.inverse());
        }
        Ok(map)
    }
}

impl fmt::Display for GeneratorAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.generator_names().collect();
        write!(f, "{}", gens.join(" "))
    }
}
