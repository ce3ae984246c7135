//! The compact `◇` notation for sets of choice sequences, where `◇` stands
//! for every possible first letter, and the bundled Thue–Morse reference
//! table.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::words::ChoiceSequence;

pub const DIAMOND: char = '◇';

const THUE_MORSE: &str = include_str!("../data/thue_morse_irreducibles.txt");

/// Expands one row such as `◇212` over an alphabet of `size` letters.
pub fn expand_diamond(row: &str, size: usize) -> Result<BTreeSet<ChoiceSequence>> {
    let Some(rest) = row.strip_prefix(DIAMOND) else {
        return Ok(BTreeSet::from([row.parse()?]));
    };
    let rest = rest.strip_prefix(',').unwrap_or(rest);
    let tail: ChoiceSequence = if rest.is_empty() {
        ChoiceSequence::empty()
    } else {
        rest.parse()?
    };
    Ok((1..=size).map(|d| tail.prepend(d as u8)).collect())
}

/// Groups sequences by everything after the first letter and writes a `◇`
/// row whenever all `size` first letters occur.
pub fn compress_diamond(seqs: &BTreeSet<ChoiceSequence>, size: usize) -> Vec<String> {
    let mut by_tail: BTreeMap<ChoiceSequence, BTreeSet<u8>> = BTreeMap::new();
    for s in seqs {
        if let Some(first) = s.first() {
            by_tail.entry(s.tail()).or_default().insert(first);
        }
    }
    let comma = seqs.iter().any(|s| s.letters().iter().any(|&l| l > 9));
    let mut rows = Vec::new();
    for (tail, firsts) in by_tail {
        if firsts.len() == size && firsts.iter().copied().eq(1..=size as u8) {
            let sep = if comma && !tail.is_empty() { "," } else { "" };
            let body = if comma {
                comma_list(&tail)
            } else {
                tail.to_string()
            };
            rows.push(format!(
                "{DIAMOND}{sep}{}",
                if tail.is_empty() { String::new() } else { body }
            ));
        } else {
            for f in firsts {
                let s = tail.prepend(f);
                rows.push(if comma { comma_list(&s) } else { s.to_string() });
            }
        }
    }
    rows
}

fn comma_list(s: &ChoiceSequence) -> String {
    s.letters()
        .iter()
        .map(u8::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Rows of the bundled Thue–Morse table, keyed by length.
pub fn thue_morse_rows() -> BTreeMap<usize, Vec<String>> {
    THUE_MORSE
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut parts = l.split_whitespace();
            let n = parts
                .next()
                .and_then(|n| n.parse().ok())
                .expect("table line starts with a length");
            (n, parts.map(str::to_owned).collect())
        })
        .collect()
}

/// Irreducible Thue–Morse choice sequences of length `n` from the bundled
/// table. Expansion of the length-1 row `◇` yields the reducible `1`,
/// which is dropped.
pub fn thue_morse_expected(n: usize) -> Result<BTreeSet<ChoiceSequence>> {
    let rows = thue_morse_rows();
    let row = rows.get(&n).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "the reference table covers lengths 1..=24, not {n}"
        ))
    })?;
    let mut out = BTreeSet::new();
    for r in row {
        out.extend(
            expand_diamond(r, 2)?
                .into_iter()
                .filter(ChoiceSequence::is_irreducible),
        );
    }
    Ok(out)
}
