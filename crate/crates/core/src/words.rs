//! Alphabets, finite words and choice sequences.
//!
//! Letters of an alphabet `S` are the integers `0..|S|`. Choice sequences
//! live over the separate alphabet `1..=|S|` and are ordered letterwise.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Letter = u8;

/// A finite alphabet `{0, .., size - 1}` with at least two letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    size: u8,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=u8::MAX as usize).contains(&size) {
            return Err(Error::InvalidArgument(format!(
                "alphabet size must be between 2 and 255, got {size}"
            )));
        }
        Ok(Alphabet { size: size as u8 })
    }

    #[inline]
    pub fn size(self) -> usize {
        self.size as usize
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> + Clone {
        0..self.size
    }

    #[inline]
    pub fn contains(self, letter: Letter) -> bool {
        letter < self.size
    }

    /// Whether words over this alphabet serialize as plain digit strings.
    pub fn uses_digits(self) -> bool {
        self.size <= 9
    }
}

/// A finite word. Ordering is lexicographic, which gives canonical set
/// representations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word, checking every letter against `alphabet`.
    pub fn over(alphabet: Alphabet, letters: Vec<Letter>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| !alphabet.contains(l)) {
            return Err(Error::InvalidArgument(format!(
                "letter {bad} is outside the alphabet of size {}",
                alphabet.size()
            )));
        }
        Ok(Word(letters))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Deletes `front` letters from the beginning and `back` from the end.
    pub fn trim(&self, front: usize, back: usize) -> Result<Word> {
        if front + back > self.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot trim {front}+{back} letters from a word of length {}",
                self.len()
            )));
        }
        Ok(Word(self.0[front..self.len() - back].to_vec()))
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn suffix(&self, n: usize) -> Word {
        Word(self.0[self.len() - n.min(self.len())..].to_vec())
    }

    /// All distinct factors of length `n`. Empty when `n > |w|`.
    pub fn factors(&self, n: usize) -> BTreeSet<Word> {
        if n > self.len() {
            return BTreeSet::new();
        }
        (0..=self.len() - n)
            .map(|t| Word(self.0[t..t + n].to_vec()))
            .collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Renders the word as digits when every letter fits, otherwise as
    /// comma-separated integers.
    pub fn render(&self, alphabet: Alphabet) -> String {
        render_letters(&self.0, alphabet.uses_digits())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.0.iter().all(|&l| l <= 9);
        f.write_str(&render_letters(&self.0, digits))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_letters(s).map(Word)
    }
}

/// A choice sequence: a word over `{1, .., |S|}` read as the sizes of the
/// subsets Alice offers on consecutive rounds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChoiceSequence(Vec<u8>);

impl ChoiceSequence {
    pub fn empty() -> Self {
        ChoiceSequence(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        ChoiceSequence(letters)
    }

    /// Builds a choice sequence, checking each letter lies in `1..=|S|`.
    pub fn over(alphabet: Alphabet, letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters
            .iter()
            .find(|&&l| l == 0 || l as usize > alphabet.size())
        {
            return Err(Error::InvalidArgument(format!(
                "choice letter {bad} is outside 1..={}",
                alphabet.size()
            )));
        }
        Ok(ChoiceSequence(letters))
    }

    pub fn ones(n: usize) -> Self {
        ChoiceSequence(vec![1; n])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Nonempty and not ending in 1.
    pub fn is_irreducible(&self) -> bool {
        self.0.last().is_some_and(|&l| l > 1)
    }

    /// Letterwise order; sequences of different lengths are incomparable.
    pub fn le(&self, other: &ChoiceSequence) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// The blow-up `k -> k 1^(i-1)` applied letterwise.
    pub fn sigma(&self, i: usize) -> ChoiceSequence {
        assert!(i >= 1, "sigma needs a block length of at least 1");
        let mut out = Vec::with_capacity(self.len() * i);
        for &k in &self.0 {
            out.push(k);
            out.extend(std::iter::repeat_n(1, i - 1));
        }
        ChoiceSequence(out)
    }

    pub fn trim(&self, front: usize, back: usize) -> Result<ChoiceSequence> {
        if front + back > self.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot trim {front}+{back} letters from a sequence of length {}",
                self.len()
            )));
        }
        Ok(ChoiceSequence(self.0[front..self.len() - back].to_vec()))
    }

    /// Everything after the first letter.
    pub fn tail(&self) -> ChoiceSequence {
        ChoiceSequence(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn concat(&self, other: &ChoiceSequence) -> ChoiceSequence {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ChoiceSequence(v)
    }

    pub fn prepend(&self, first: u8) -> ChoiceSequence {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(first);
        v.extend_from_slice(&self.0);
        ChoiceSequence(v)
    }

    pub fn render(&self, alphabet: Alphabet) -> String {
        render_letters(&self.0, alphabet.uses_digits())
    }
}

impl From<Vec<u8>> for ChoiceSequence {
    fn from(v: Vec<u8>) -> Self {
        ChoiceSequence(v)
    }
}

impl fmt::Display for ChoiceSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.0.iter().all(|&l| l <= 9);
        f.write_str(&render_letters(&self.0, digits))
    }
}

impl FromStr for ChoiceSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = parse_letters(s)?;
        if letters.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "choice sequence {s:?} contains 0"
            )));
        }
        Ok(ChoiceSequence(letters))
    }
}

/// Free-function form of [`Word::trim`].
pub fn trim(w: &Word, front: usize, back: usize) -> Result<Word> {
    w.trim(front, back)
}

/// Free-function form of [`Word::factors`].
pub fn factors(w: &Word, n: usize) -> BTreeSet<Word> {
    w.factors(n)
}

pub fn le(u: &ChoiceSequence, v: &ChoiceSequence) -> bool {
    u.le(v)
}

pub fn sigma(i: usize, w: &ChoiceSequence) -> ChoiceSequence {
    w.sigma(i)
}

pub fn is_irreducible(alpha: &ChoiceSequence) -> bool {
    alpha.is_irreducible()
}

fn render_letters(letters: &[u8], digits: bool) -> String {
    if digits {
        letters.iter().map(|&l| char::from(b'0' + l)).collect()
    } else {
        letters
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn parse_letters(s: &str) -> Result<Vec<u8>> {
    let s = s.trim();
    if s.is_empty() || s == "ε" {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidArgument(format!("cannot parse {s:?} as a word"));
    if s.contains(',') {
        s.split(',')
            .map(|p| p.trim().parse::<u8>().map_err(|_| bad()))
            .collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
            .collect()
    }
}
