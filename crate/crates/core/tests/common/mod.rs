#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use winshift_core::builtin::builtin;
use winshift_core::{ChoiceSequence, Solver, Substitution, WinShift, Word};

pub fn named(name: &str) -> Substitution {
    builtin(name)
        .expect("known built-in")
        .expect("valid built-in")
}

/// Every substitution the game-level properties run on.
pub fn suite() -> &'static [Substitution] {
    static SUITE: OnceLock<Vec<Substitution>> = OnceLock::new();
    SUITE.get_or_init(|| {
        ["tm", "ex42", "ex46", "gtm:2,3", "gtm:3,3"]
            .iter()
            .map(|n| named(n))
            .collect()
    })
}

/// Marked substitutions, two of them not permutive.
pub fn marked_suite() -> &'static [WinShift] {
    static SUITE: OnceLock<Vec<WinShift>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let mut v: Vec<Substitution> = ["tm", "gtm:2,3", "gtm:3,3"]
            .iter()
            .map(|n| named(n))
            .collect();
        v.push(
            Substitution::from_strs(&["001", "100"])
                .unwrap()
                .with_name("bin3"),
        );
        v.push(
            Substitution::from_strs(&["0011", "1202", "2020"])
                .unwrap()
                .with_name("ter4"),
        );
        v.into_iter().map(|t| WinShift::new(t).unwrap()).collect()
    })
}

pub fn words(xs: &[&str]) -> BTreeSet<Word> {
    xs.iter().map(|s| s.parse().unwrap()).collect()
}

pub fn cs(s: &str) -> ChoiceSequence {
    s.parse().unwrap()
}

/// `W(L_n(τ))` for every suite member and `n ≤ 10`, solved once.
pub fn suite_winning_sets() -> &'static Vec<BTreeMap<usize, BTreeSet<ChoiceSequence>>> {
    static SETS: OnceLock<Vec<BTreeMap<usize, BTreeSet<ChoiceSequence>>>> = OnceLock::new();
    SETS.get_or_init(|| {
        suite()
            .iter()
            .map(|t| {
                let mut solver = Solver::new(t.alphabet());
                (0..=10)
                    .map(|n| {
                        (
                            n,
                            (*solver.members(&t.language(n).unwrap().words).unwrap()).clone(),
                        )
                    })
                    .collect()
            })
            .collect()
    })
}

/// Members of `xs` selected by the bits of `mask`, cycling through the mask.
pub fn subset<T: Clone + Ord>(xs: &BTreeSet<T>, mask: &[bool]) -> BTreeSet<T> {
    xs.iter()
        .zip(mask.iter().cycle())
        .filter(|(_, &keep)| keep)
        .map(|(x, _)| x.clone())
        .collect()
}
