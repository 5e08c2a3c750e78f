//! Words in the free monoid on weighted generators, and the degree-lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// A word: a sequence of generator indices. The empty word is the unit.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(SmallVec<[u8; 16]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(g: usize) -> Self {
        let mut v = SmallVec::new();
        v.push(g as u8);
        Word(v)
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&g| g as u8).collect())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prepend(&self, g: usize) -> Word {
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.push(g as u8);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(SmallVec::from_slice(&self.0[start..end]))
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// First position at which `pat` occurs as a factor, if any.
    pub fn find(&self, pat: &Word) -> Option<usize> {
        let (h, n) = (&self.0, pat.0.len());
        if n > h.len() {
            return None;
        }
        (0..=h.len() - n).find(|&i| h[i..i + n] == pat.0[..])
    }

    pub fn contains(&self, pat: &Word) -> bool {
        self.find(pat).is_some()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0.as_slice())
    }
}

/// Degree-lexicographic order: total degree first, then left-to-right
/// comparison by generator precedence (declaration order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegLex {
    weights: Vec<u32>,
}

impl DegLex {
    pub fn new(weights: Vec<u32>) -> Self {
        DegLex { weights }
    }

    pub fn from_generators(gens: &[Generator]) -> Self {
        DegLex::new(gens.iter().map(|g| g.degree).collect())
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn num_generators(&self) -> usize {
        self.weights.len()
    }

    pub fn degree(&self, w: &Word) -> u32 {
        w.0.iter().map(|&g| self.weights[g as usize]).sum()
    }

    pub fn compare(&self, a: &Word, b: &Word) -> Ordering {
        self.degree(a)
            .cmp(&self.degree(b))
            .then_with(|| a.0.as_slice().cmp(b.0.as_slice()))
    }

    /// All words of the given degree, in increasing deglex order.
    pub fn words_of_degree(&self, d: u32) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.extend_words(d, &mut cur, &mut out);
        out
    }

    fn extend_words(&self, remaining: u32, cur: &mut Vec<usize>, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(Word::from_letters(cur));
            return;
        }
        for (g, &w) in self.weights.iter().enumerate() {
            if w <= remaining {
                cur.push(g);
                self.extend_words(remaining - w, cur, out);
                cur.pop();
            }
        }
    }
}

pub fn format_word(w: &Word, gens: &[Generator]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    // group runs into powers
    let mut parts: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let name = &gens[letters[i] as usize].name;
        if j - i == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{}^{}", name, j - i));
        }
        i = j;
    }
    parts.join("*")
}
