//! Substitutions, their classification, fixed points and factor languages.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

/// Derived properties of a substitution. All of them are decidable from the
/// images, so they are plain booleans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Common image length when the substitution is uniform.
    pub uniform_length: Option<usize>,
    pub left_marked: bool,
    pub right_marked: bool,
    pub marked: bool,
    pub permutive: bool,
    pub primitive: bool,
}

impl Classification {
    pub fn uniform(&self) -> bool {
        self.uniform_length.is_some()
    }
}

/// A letter-to-word morphism over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
    name: Option<String>,
    class: Classification,
}

/// On-disk form: `{"alphabet": 2, "images": [[0,1],[1,0]], "name": "tm"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionFile {
    pub alphabet: usize,
    pub images: Vec<Vec<Letter>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.size() {
            return Err(Error::Construction(format!(
                "expected {} images, got {}",
                alphabet.size(),
                images.len()
            )));
        }
        for (s, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Construction(format!("image of letter {s} is empty")));
            }
            if let Some(&bad) = img.letters().iter().find(|&&l| !alphabet.contains(l)) {
                return Err(Error::Construction(format!(
                    "image of letter {s} uses letter {bad} outside the alphabet"
                )));
            }
        }
        let m = images[0].len();
        let uniform_length = images.iter().all(|w| w.len() == m).then_some(m);
        if uniform_length == Some(1) {
            return Err(Error::Construction(
                "uniform substitutions must have images of length at least 2".into(),
            ));
        }
        let class = classify(alphabet, &images, uniform_length);
        Ok(Substitution {
            alphabet,
            images,
            name: None,
            class,
        })
    }

    /// Convenience constructor from digit strings such as `["01", "10"]`.
    pub fn from_strs(images: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(images.len())?;
        let images = images
            .iter()
            .map(|s| s.parse::<Word>())
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(alphabet, images)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn from_file(file: &SubstitutionFile) -> Result<Self> {
        let alphabet = Alphabet::new(file.alphabet)?;
        let images = file.images.iter().cloned().map(Word::new).collect();
        let tau = Substitution::new(alphabet, images)?;
        Ok(match &file.name {
            Some(n) => tau.with_name(n.clone()),
            None => tau,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SubstitutionFile = serde_json::from_str(text)
            .map_err(|e| Error::Construction(format!("malformed substitution JSON: {e}")))?;
        Substitution::from_file(&file)
    }

    pub fn to_file(&self) -> SubstitutionFile {
        SubstitutionFile {
            alphabet: self.alphabet.size(),
            images: self.images.iter().map(|w| w.letters().to_vec()).collect(),
            name: self.name.clone(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.images[letter as usize]
    }

    pub fn classification(&self) -> Classification {
        self.class
    }

    pub fn uniform_length(&self) -> Option<usize> {
        self.class.uniform_length
    }

    /// The uniform length, or an error naming the operation that needs it.
    pub fn require_uniform(&self, what: &str) -> Result<usize> {
        self.class
            .uniform_length
            .ok_or_else(|| Error::Unsupported(format!("{what} requires a uniform substitution")))
    }

    pub fn require_primitive(&self, what: &str) -> Result<()> {
        if self.class.primitive {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{what} requires a primitive substitution"
            )))
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.class.primitive
    }

    pub fn is_left_marked(&self) -> bool {
        self.class.left_marked
    }

    pub fn is_marked(&self) -> bool {
        self.class.marked
    }

    pub fn is_permutive(&self) -> bool {
        self.class.permutive
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len() * self.images[0].len());
        for &l in w.letters() {
            out.extend_from_slice(self.images[l as usize].letters());
        }
        Word::new(out)
    }

    pub fn apply_letter(&self, l: Letter) -> &Word {
        self.image(l)
    }

    /// The length-`n` prefix of the fixed point starting with `s`.
    pub fn fixed_point_prefix(&self, s: Letter, n: usize) -> Result<Word> {
        if !self.alphabet.contains(s) {
            return Err(Error::InvalidArgument(format!(
                "letter {s} outside the alphabet"
            )));
        }
        let img = self.image(s);
        if img.first() != Some(s) || img.len() < 2 {
            return Err(Error::NotAFixedPoint(s));
        }
        let mut w = Word::new(vec![s]);
        while w.len() < n {
            w = self.apply(&w);
        }
        Ok(w.prefix(n))
    }

    /// The set of length-`n` factors of the subshift generated by the
    /// substitution.
    ///
    /// For a primitive substitution every factor of every iterate is in the
    /// language, and the language is closed under the substitution. The set
    /// is the least one containing the length-`n` factors of `τ^k(s)` (with
    /// `k` minimal such that `|τ^k(s)| ≥ n`) and closed under
    /// `v ↦ factors_n(τ(v))`. Any length-`n` factor of a deeper iterate sits
    /// inside the image of a length-`n` factor of the previous iterate, so
    /// the closure is exact.
    pub fn language(&self, n: usize) -> Result<FactorLanguage> {
        self.require_primitive("language enumeration")?;
        let mut words = BTreeSet::new();
        if n == 0 {
            words.insert(Word::empty());
            return Ok(FactorLanguage {
                n,
                words,
                stabilized: true,
            });
        }
        let mut work = Vec::new();
        for s in self.alphabet.letters() {
            let mut w = Word::new(vec![s]);
            while w.len() < n {
                w = self.apply(&w);
            }
            for f in w.factors(n) {
                if words.insert(f.clone()) {
                    work.push(f);
                }
            }
        }
        while let Some(v) = work.pop() {
            let img = self.apply(&v);
            for f in img.factors(n) {
                if !words.contains(&f) {
                    words.insert(f.clone());
                    work.push(f);
                }
            }
        }
        Ok(FactorLanguage {
            n,
            words,
            stabilized: true,
        })
    }

    /// Morse–Hedlund probe: reports the first `n ≤ n_max` with
    /// `f(n+1) = f(n)`.
    pub fn periodicity_probe(&self, n_max: usize) -> Result<Periodicity> {
        let mut prev = self.language(1)?.len();
        for n in 1..=n_max {
            let next = self.language(n + 1)?.len();
            if next == prev {
                return Ok(Periodicity::PeriodicDetected(n));
            }
            prev = next;
        }
        Ok(Periodicity::AperiodicUpToBound(n_max))
    }

    /// Default probe bound `max(64, M·|S|·8)`.
    pub fn default_probe_bound(&self) -> usize {
        let m = self
            .uniform_length()
            .unwrap_or_else(|| self.images.iter().map(Word::len).max().unwrap_or(2));
        64.max(m * self.alphabet.size() * 8)
    }
}

/// Outcome of [`Substitution::periodicity_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    AperiodicUpToBound(usize),
    PeriodicDetected(usize),
}

impl Periodicity {
    pub fn is_periodic(self) -> bool {
        matches!(self, Periodicity::PeriodicDetected(_))
    }
}

/// `L_n(τ)` as a canonical sorted set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorLanguage {
    pub n: usize,
    pub words: BTreeSet<Word>,
    pub stabilized: bool,
}

impl FactorLanguage {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }
}

fn classify(alphabet: Alphabet, images: &[Word], uniform_length: Option<usize>) -> Classification {
    let distinct =
        |letters: Vec<Letter>| letters.iter().collect::<BTreeSet<_>>().len() == letters.len();
    let left_marked = distinct(images.iter().map(|w| w.letters()[0]).collect());
    let right_marked = distinct(
        images
            .iter()
            .map(|w| *w.letters().last().unwrap())
            .collect(),
    );
    let permutive = uniform_length
        .is_some_and(|m| (0..m).all(|p| distinct(images.iter().map(|w| w.letters()[p]).collect())));
    Classification {
        uniform_length,
        left_marked,
        right_marked,
        marked: left_marked && right_marked,
        permutive,
        primitive: primitive(alphabet, images),
    }
}

/// Boolean incidence-matrix powers up to the Wielandt exponent bound
/// `(|S|-1)^2 + 1`.
fn primitive(alphabet: Alphabet, images: &[Word]) -> bool {
    let k = alphabet.size();
    let mut base = vec![vec![false; k]; k];
    for (a, img) in images.iter().enumerate() {
        for &b in img.letters() {
            base[a][b as usize] = true;
        }
    }
    let bound = (k - 1) * (k - 1) + 1;
    let mut power = base.clone();
    for _ in 1..=bound {
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        let mut next = vec![vec![false; k]; k];
        for a in 0..k {
            for c in 0..k {
                if power[a][c] {
                    for b in 0..k {
                        next[a][b] |= base[c][b];
                    }
                }
            }
        }
        power = next;
    }
    false
}
