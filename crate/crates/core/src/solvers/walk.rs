//! Incremental self-avoidance tracking for words read from the identity.

use std::collections::HashSet;

use crate::alphabet::{Letter, Word};
use crate::groups::{Element, GroupOracle};

/// The walk spelled by a growing word. Built-in groups hash canonical forms;
/// word-problem groups test every new suffix.
pub(crate) struct Walker<'a> {
    group: &'a GroupOracle,
    positions: Vec<Element>,
    seen: HashSet<Element>,
    word: Word,
}

impl<'a> Walker<'a> {
    pub fn new(group: &'a GroupOracle) -> Self {
        let mut w = Walker {
            group,
            positions: Vec::new(),
            seen: HashSet::new(),
            word: Vec::new(),
        };
        if let Some(e) = group.identity() {
            w.seen.insert(e.clone());
            w.positions.push(e);
        }
        w
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// Current endpoint (built-in groups only).
    pub fn position(&self) -> Option<&Element> {
        self.positions.last()
    }

    /// Endpoint after reading `l`, without moving.
    pub fn peek(&self, l: Letter) -> Option<Element> {
        self.position().map(|e| self.group.step(e, l))
    }

    /// Does reading `l` return to the start?
    pub fn closes(&self, l: Letter) -> bool {
        match self.peek(l) {
            Some(e) => Some(&e) == self.positions.first(),
            None => {
                let mut w = self.word.clone();
                w.push(l);
                self.group.wp_check(&w).unwrap_or(false)
            }
        }
    }

    /// Reads `l` if the walk stays self-avoiding.
    pub fn try_push(&mut self, l: Letter) -> bool {
        match self.peek(l) {
            Some(e) => {
                if !self.seen.insert(e.clone()) {
                    return false;
                }
                self.positions.push(e);
            }
            None => {
                let mut w = self.word.clone();
                w.push(l);
                let n = w.len();
                if (0..n).any(|i| self.group.wp_check(&w[i..]).unwrap_or(true)) {
                    return false;
                }
            }
        }
        self.word.push(l);
        true
    }

    pub fn pop(&mut self) {
        self.word.pop();
        if self.positions.len() > 1 {
            let e = self.positions.pop().expect("non-empty");
            self.seen.remove(&e);
        }
    }
}
