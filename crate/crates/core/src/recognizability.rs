//! Interpretations, synchronization points and the synchronization delay of
//! uniform substitutions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::substitution::Substitution;
use crate::words::Word;

/// A reading of a word as `trim(τ(ancestor), front, back)` with both trims
/// smaller than the image length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation {
    pub ancestor: Word,
    pub front: usize,
    pub back: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyncAnalysis {
    pub word: String,
    /// Front-trim residues over all interpretations.
    pub offsets: BTreeSet<usize>,
    /// Cut positions `p` (`0 ≤ p ≤ |w|`) aligned with image boundaries in
    /// every interpretation.
    pub sync_positions: Vec<usize>,
}

impl SyncAnalysis {
    /// At least one synchronization point exists.
    pub fn is_synchronized(&self) -> bool {
        !self.sync_positions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncDelay {
    pub delay: usize,
    /// An unsynchronized word of length `delay - 1`, certifying minimality.
    pub witness: Word,
    pub witness_offsets: BTreeSet<usize>,
}

/// Number of ancestor letters whose images always cover a word of length
/// `len`: `⌈(len + 2M - 2) / M⌉`.
fn ancestor_span(len: usize, m: usize) -> usize {
    (len + 2 * m - 2).div_ceil(m)
}

fn check_input(tau: &Substitution, what: &str) -> Result<usize> {
    let m = tau.require_uniform(what)?;
    tau.require_primitive(what)?;
    Ok(m)
}

/// Every occurrence of a length-`len` window inside `τ(z)`, `z ∈ L_p(τ)`,
/// normalized to an interpretation.
fn scan_windows(
    tau: &Substitution,
    m: usize,
    len: usize,
    mut visit: impl FnMut(&[u8], Interpretation),
) -> Result<()> {
    let p = ancestor_span(len, m);
    let ancestors = tau.language(p)?;
    for z in ancestors.iter() {
        let img = tau.apply(z);
        for t in 0..=img.len() - len {
            let end = t + len;
            let first = t / m;
            let last = end.div_ceil(m).max(first + 1);
            let interp = Interpretation {
                ancestor: Word::from(&z.letters()[first..last]),
                front: t - first * m,
                back: last * m - end,
            };
            visit(&img.letters()[t..end], interp);
        }
    }
    Ok(())
}

/// All interpretations of `w`.
pub fn interpretations(tau: &Substitution, w: &Word) -> Result<BTreeSet<Interpretation>> {
    let m = check_input(tau, "interpretations")?;
    if !w.is_empty() && !tau.language(w.len())?.contains(w) {
        return Err(Error::NotInLanguage(w.render(tau.alphabet())));
    }
    let mut out = BTreeSet::new();
    scan_windows(tau, m, w.len(), |window, interp| {
        if window == w.letters() {
            out.insert(interp);
        }
    })?;
    Ok(out)
}

fn analysis(word: &Word, offsets: BTreeSet<usize>, m: usize, tau: &Substitution) -> SyncAnalysis {
    let sync_positions = match offsets.iter().collect::<Vec<_>>().as_slice() {
        [&i] => (0..=word.len()).filter(|p| (p + i) % m == 0).collect(),
        _ => Vec::new(),
    };
    SyncAnalysis {
        word: word.render(tau.alphabet()),
        offsets,
        sync_positions,
    }
}

pub fn sync_positions(tau: &Substitution, w: &Word) -> Result<SyncAnalysis> {
    let m = check_input(tau, "synchronization analysis")?;
    let offsets = interpretations(tau, w)?
        .into_iter()
        .map(|i| i.front)
        .collect();
    Ok(analysis(w, offsets, m, tau))
}

/// Offsets of every word of `L_len(τ)` in one pass.
fn offsets_by_word(
    tau: &Substitution,
    m: usize,
    len: usize,
) -> Result<BTreeMap<Word, BTreeSet<usize>>> {
    let mut map: BTreeMap<Word, BTreeSet<usize>> = BTreeMap::new();
    scan_windows(tau, m, len, |window, interp| {
        map.entry(Word::from(window))
            .or_default()
            .insert(interp.front);
    })?;
    Ok(map)
}

fn unsynchronized(
    tau: &Substitution,
    m: usize,
    len: usize,
) -> Result<Option<(Word, BTreeSet<usize>)>> {
    for (w, offsets) in offsets_by_word(tau, m, len)? {
        if !analysis(&w, offsets.clone(), m, tau).is_synchronized() {
            return Ok(Some((w, offsets)));
        }
    }
    Ok(None)
}

/// Default search cap `max(4M², 64)`.
pub fn default_cap(m: usize) -> usize {
    (4 * m * m).max(64)
}

/// The least `L ≤ cap` such that every word of `L_L(τ)` has a
/// synchronization point.
pub fn sync_delay(tau: &Substitution, cap: usize) -> Result<SyncDelay> {
    let m = check_input(tau, "synchronization delay")?;
    // ε is read at every offset
    let mut witness = (Word::empty(), (0..m).collect::<BTreeSet<_>>());
    for len in 1..=cap {
        match unsynchronized(tau, m, len)? {
            Some(w) => witness = w,
            None => {
                // monotonicity: a synchronized length stays synchronized
                if let Some((w, _)) = unsynchronized(tau, m, len + 1)? {
                    return Err(Error::Consistency(format!(
                        "all words of length {len} synchronize but {} does not",
                        w.render(tau.alphabet())
                    )));
                }
                return Ok(SyncDelay {
                    delay: len,
                    witness: witness.0,
                    witness_offsets: witness.1,
                });
            }
        }
    }
    Err(Error::CapExceeded(cap))
}

/// Decomposition residue of `w` given a known delay: the position of the
/// first image boundary inside `w`, i.e. the length of the partial image
/// that `w` starts with.
pub fn decomposition_with_delay(tau: &Substitution, delay: usize, w: &Word) -> Result<usize> {
    let m = tau.require_uniform("decomposition")?;
    if w.len() < delay {
        return Err(Error::LengthOutOfRange {
            len: w.len(),
            min: delay,
        });
    }
    let offsets: BTreeSet<usize> = interpretations(tau, w)?
        .into_iter()
        .map(|i| i.front)
        .collect();
    match offsets.iter().collect::<Vec<_>>().as_slice() {
        [&front] => Ok((m - front) % m),
        _ => Err(Error::Consistency(format!(
            "word {} of length {} ≥ L = {delay} has offsets {offsets:?}",
            w.render(tau.alphabet()),
            w.len()
        ))),
    }
}

/// The decomposition residue of a word at least as long as the
/// synchronization delay. See [`decomposition_with_delay`].
pub fn decomposition(tau: &Substitution, w: &Word) -> Result<usize> {
    let m = check_input(tau, "decomposition")?;
    let delay = sync_delay(tau, default_cap(m))?.delay;
    decomposition_with_delay(tau, delay, w)
}
