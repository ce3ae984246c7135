//! The word game over a finite target set.
//!
//! Alice offers Bob a subset of the alphabet whose size is dictated by the
//! choice sequence; Bob picks a letter from it. Alice wins if the built word
//! lies in the target. Finite games are solved exactly by backward
//! induction: `kβ ∈ W(X)` iff at least `k` letters `c` satisfy
//! `β ∈ W(X_c)`, where `X_c` is the residual `{w : cw ∈ X}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::{Alphabet, ChoiceSequence, Letter, Word};

/// Default length up to which a [`WinningSet`] keeps its explicit members.
pub const DEFAULT_EXPANSION_THRESHOLD: usize = 16;

type Members = Arc<BTreeSet<ChoiceSequence>>;

/// `{w : cw ∈ X}`.
pub fn residual(x: &BTreeSet<Word>, c: Letter) -> BTreeSet<Word> {
    x.iter()
        .filter(|w| w.first() == Some(c))
        .map(|w| Word::from(&w.letters()[1..]))
        .collect()
}

/// Common word length of a target set. `None` for the empty set.
pub fn target_length(x: &BTreeSet<Word>) -> Result<Option<usize>> {
    let mut lens = x.iter().map(Word::len);
    let Some(n) = lens.next() else {
        return Ok(None);
    };
    if lens.any(|l| l != n) {
        return Err(Error::InvalidArgument(
            "target words must all have the same length".into(),
        ));
    }
    Ok(Some(n))
}

/// Backward-induction solver with a memo keyed by canonical residual sets.
///
/// The memo is owned by one solver; independent solvers may run on
/// separate threads.
#[derive(Debug)]
pub struct Solver {
    alphabet: Alphabet,
    expansion_threshold: usize,
    memo: HashMap<Vec<Word>, Members>,
}

impl Solver {
    pub fn new(alphabet: Alphabet) -> Self {
        Solver {
            alphabet,
            expansion_threshold: DEFAULT_EXPANSION_THRESHOLD,
            memo: HashMap::new(),
        }
    }

    pub fn with_expansion_threshold(mut self, threshold: usize) -> Self {
        self.expansion_threshold = threshold;
        self
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn check(&self, x: &BTreeSet<Word>) -> Result<Option<usize>> {
        let n = target_length(x)?;
        for w in x {
            if let Some(&bad) = w.letters().iter().find(|&&l| !self.alphabet.contains(l)) {
                return Err(Error::InvalidArgument(format!(
                    "target uses letter {bad} outside the alphabet"
                )));
            }
        }
        Ok(n)
    }

    /// Explicit `W(X)`. Its size always equals `|X|`.
    pub fn members(&mut self, x: &BTreeSet<Word>) -> Result<Members> {
        self.check(x)?;
        let words: Vec<Word> = x.iter().cloned().collect();
        Ok(self.solve(&words))
    }

    /// `x` is sorted, deduplicated and of uniform length.
    fn solve(&mut self, x: &[Word]) -> Members {
        if let Some(hit) = self.memo.get(x) {
            return hit.clone();
        }
        let result = match x.first() {
            None => BTreeSet::new(),
            Some(w) if w.is_empty() => BTreeSet::from([ChoiceSequence::empty()]),
            Some(_) => {
                let mut counts: BTreeMap<ChoiceSequence, u8> = BTreeMap::new();
                for c in self.alphabet.letters() {
                    let res = residual_slice(x, c);
                    if res.is_empty() {
                        continue;
                    }
                    for beta in self.solve(&res).iter() {
                        *counts.entry(beta.clone()).or_default() += 1;
                    }
                }
                counts
                    .into_iter()
                    .flat_map(|(beta, cnt)| (1..=cnt).map(move |k| beta.prepend(k)))
                    .collect()
            }
        };
        let result = Arc::new(result);
        self.memo.insert(x.to_vec(), result.clone());
        result
    }

    fn wins(&mut self, x: &[Word], alpha: &[u8]) -> bool {
        self.solve(x).contains(&ChoiceSequence::new(alpha.to_vec()))
    }

    pub fn winning_set(&mut self, x: &BTreeSet<Word>) -> Result<WinningSet> {
        let n = self.check(x)?.unwrap_or(0);
        let members = self.members(x)?;
        Ok(WinningSet::from_members(
            n,
            &members,
            n <= self.expansion_threshold,
        ))
    }

    /// A winning strategy for Alice when `α ∈ W(X)`, otherwise a
    /// refutation for Bob.
    pub fn member(&mut self, x: &BTreeSet<Word>, alpha: &ChoiceSequence) -> Result<MemberOutcome> {
        let n = self.check(x)?;
        if n.is_some_and(|n| n != alpha.len()) {
            return Err(Error::InvalidArgument(format!(
                "choice sequence has length {} but target words have length {}",
                alpha.len(),
                n.unwrap()
            )));
        }
        let words: Vec<Word> = x.iter().cloned().collect();
        if self.wins(&words, alpha.letters()) {
            Ok(MemberOutcome::Win(self.strategy(&words, alpha.letters())))
        } else {
            Ok(MemberOutcome::Lose(
                self.refutation(&words, alpha.letters()),
            ))
        }
    }

    /// Canonical strategy: at every node offer the lexicographically least
    /// winning subset, i.e. the smallest eligible letters.
    fn strategy(&mut self, x: &[Word], alpha: &[u8]) -> StrategyTree {
        let Some((&k, rest)) = alpha.split_first() else {
            return StrategyTree::leaf();
        };
        let mut branches = Vec::with_capacity(k as usize);
        for c in self.alphabet.letters() {
            if branches.len() == k as usize {
                break;
            }
            let res = residual_slice(x, c);
            if !res.is_empty() && self.wins(&res, rest) {
                branches.push((c, self.strategy(&res, rest)));
            }
        }
        debug_assert_eq!(branches.len(), k as usize);
        StrategyTree { branches }
    }

    fn refutation(&mut self, x: &[Word], alpha: &[u8]) -> Refutation {
        let (&k, rest) = alpha
            .split_first()
            .expect("a lost game with a live prefix has rounds left");
        let mut responses = Vec::new();
        for offered in subsets(self.alphabet.size(), k as usize) {
            let mut reply = None;
            for &c in &offered {
                let res = residual_slice(x, c);
                if res.is_empty() {
                    reply = Some((c, None));
                    break;
                }
                if !self.wins(&res, rest) {
                    reply = Some((c, Some(res)));
                    break;
                }
            }
            let (pick, res) =
                reply.expect("α ∉ W(X) leaves Bob a losing letter for Alice in every subset");
            let next = res.map(|r| self.refutation(&r, rest));
            responses.push(BobResponse {
                offered,
                pick,
                next,
            });
        }
        Refutation { responses }
    }

    /// `A = {c : u ∈ W(X_c)}` and `k = |A|`, the largest first letter with
    /// `ku ∈ W(X)` (0 when none).
    pub fn max_first_choice(
        &mut self,
        x: &BTreeSet<Word>,
        u: &ChoiceSequence,
    ) -> Result<(usize, BTreeSet<Letter>)> {
        let n = self.check(x)?;
        if n.is_some_and(|n| n != u.len() + 1) {
            return Err(Error::InvalidArgument(
                "suffix must be one shorter than the target words".into(),
            ));
        }
        let words: Vec<Word> = x.iter().cloned().collect();
        let mut a = BTreeSet::new();
        for c in self.alphabet.letters() {
            let res = residual_slice(&words, c);
            if !res.is_empty() && self.wins(&res, u.letters()) {
                a.insert(c);
            }
        }
        Ok((a.len(), a))
    }

    /// `|W(X)|` counted from the antichain; must equal `|X|`.
    pub fn winning_set_cardinality(&mut self, x: &BTreeSet<Word>) -> Result<usize> {
        let ws = self.winning_set(x)?;
        let count = ws.cardinality();
        if count != x.len() {
            return Err(Error::Consistency(format!(
                "|W(X)| = {count} but |X| = {}",
                x.len()
            )));
        }
        Ok(count)
    }
}

fn residual_slice(x: &[Word], c: Letter) -> Vec<Word> {
    let start = x.partition_point(|w| w.first() < Some(c));
    x[start..]
        .iter()
        .take_while(|w| w.first() == Some(c))
        .map(|w| Word::from(&w.letters()[1..]))
        .collect()
}

/// All `k`-subsets of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<Letter>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            if n - c < k - cur.len() {
                break;
            }
            cur.push(c as Letter);
            go(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

pub fn winning_set(alphabet: Alphabet, x: &BTreeSet<Word>) -> Result<WinningSet> {
    Solver::new(alphabet).winning_set(x)
}

pub fn member(
    alphabet: Alphabet,
    x: &BTreeSet<Word>,
    alpha: &ChoiceSequence,
) -> Result<MemberOutcome> {
    Solver::new(alphabet).member(x, alpha)
}

pub fn max_first_choice(
    alphabet: Alphabet,
    x: &BTreeSet<Word>,
    u: &ChoiceSequence,
) -> Result<(usize, BTreeSet<Letter>)> {
    Solver::new(alphabet).max_first_choice(x, u)
}

pub fn winning_set_cardinality(alphabet: Alphabet, x: &BTreeSet<Word>) -> Result<usize> {
    Solver::new(alphabet).winning_set_cardinality(x)
}

/// A downward-closed set of choice sequences of one length, stored as the
/// antichain of its maximal elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinningSet {
    pub n: usize,
    pub maximal: Vec<ChoiceSequence>,
    pub expansion: Option<BTreeSet<ChoiceSequence>>,
}

impl WinningSet {
    fn from_members(n: usize, members: &BTreeSet<ChoiceSequence>, expand: bool) -> Self {
        let maximal = members
            .iter()
            .filter(|a| !members.iter().any(|b| b != *a && ChoiceSequence::le(a, b)))
            .cloned()
            .collect();
        WinningSet {
            n,
            maximal,
            expansion: expand.then(|| members.clone()),
        }
    }

    pub fn contains(&self, alpha: &ChoiceSequence) -> bool {
        match &self.expansion {
            Some(e) => e.contains(alpha),
            None => self.maximal.iter().any(|m| ChoiceSequence::le(alpha, m)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    /// Size of the down-set generated by the antichain.
    pub fn cardinality(&self) -> usize {
        let tails: Vec<&[u8]> = self.maximal.iter().map(|m| m.letters()).collect();
        downset_count(&tails, &mut HashMap::new())
    }

    /// All members, generated from the antichain.
    pub fn members(&self) -> BTreeSet<ChoiceSequence> {
        if let Some(e) = &self.expansion {
            return e.clone();
        }
        let mut out = BTreeSet::new();
        let tails: Vec<&[u8]> = self.maximal.iter().map(|m| m.letters()).collect();
        downset_members(&tails, &mut Vec::new(), &mut out);
        out
    }

    pub fn irreducible(&self) -> BTreeSet<ChoiceSequence> {
        self.members()
            .into_iter()
            .filter(ChoiceSequence::is_irreducible)
            .collect()
    }
}

fn downset_count(maxes: &[&[u8]], memo: &mut HashMap<Vec<Vec<u8>>, usize>) -> usize {
    if maxes.is_empty() {
        return 0;
    }
    if maxes[0].is_empty() {
        return 1;
    }
    let mut key: Vec<Vec<u8>> = maxes.iter().map(|m| m.to_vec()).collect();
    key.sort();
    key.dedup();
    if let Some(&c) = memo.get(&key) {
        return c;
    }
    let top = maxes.iter().map(|m| m[0]).max().unwrap();
    let total = (1..=top)
        .map(|v| {
            let next: Vec<&[u8]> = maxes
                .iter()
                .filter(|m| m[0] >= v)
                .map(|m| &m[1..])
                .collect();
            downset_count(&next, memo)
        })
        .sum();
    memo.insert(key, total);
    total
}

fn downset_members(maxes: &[&[u8]], prefix: &mut Vec<u8>, out: &mut BTreeSet<ChoiceSequence>) {
    if maxes.is_empty() {
        return;
    }
    if maxes[0].is_empty() {
        out.insert(ChoiceSequence::new(prefix.clone()));
        return;
    }
    let top = maxes.iter().map(|m| m[0]).max().unwrap();
    for v in 1..=top {
        let next: Vec<&[u8]> = maxes
            .iter()
            .filter(|m| m[0] >= v)
            .map(|m| &m[1..])
            .collect();
        prefix.push(v);
        downset_members(&next, prefix, out);
        prefix.pop();
    }
}

/// Alice's strategy as a tree. Each node lists the offered letters with the
/// subtree played after Bob picks that letter; a node with no branches ends
/// the game.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StrategyTree {
    branches: Vec<(Letter, StrategyTree)>,
}

impl StrategyTree {
    pub fn leaf() -> Self {
        StrategyTree {
            branches: Vec::new(),
        }
    }

    /// Builds a node; branches are sorted by letter and must be distinct.
    pub fn node(mut branches: Vec<(Letter, StrategyTree)>) -> Result<Self> {
        branches.sort_by_key(|(c, _)| *c);
        if branches.windows(2).any(|p| p[0].0 == p[1].0) {
            return Err(Error::InvalidArgument(
                "strategy node offers a letter twice".into(),
            ));
        }
        Ok(StrategyTree { branches })
    }

    /// The trie of a set of equal-length plays, checked to be a strategy
    /// (every node at a given depth offers the same number of letters).
    pub fn from_plays(plays: &BTreeSet<Word>) -> Result<Self> {
        let n = target_length(plays)?.ok_or_else(|| Error::InvalidArgument("no plays".into()))?;
        fn build(plays: &[&[u8]]) -> StrategyTree {
            if plays[0].is_empty() {
                return StrategyTree::leaf();
            }
            let mut branches: Vec<(Letter, StrategyTree)> = Vec::new();
            let mut start = 0;
            while start < plays.len() {
                let c = plays[start][0];
                let end = start + plays[start..].iter().take_while(|p| p[0] == c).count();
                let tails: Vec<&[u8]> = plays[start..end].iter().map(|p| &p[1..]).collect();
                branches.push((c, build(&tails)));
                start = end;
            }
            StrategyTree { branches }
        }
        let sorted: Vec<&[u8]> = plays.iter().map(Word::letters).collect();
        let tree = build(&sorted);
        tree.choice_sequence()?;
        debug_assert_eq!(tree.depth(), n);
        Ok(tree)
    }

    pub fn is_leaf(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn offered(&self) -> Vec<Letter> {
        self.branches.iter().map(|(c, _)| *c).collect()
    }

    pub fn branches(&self) -> &[(Letter, StrategyTree)] {
        &self.branches
    }

    pub fn child(&self, c: Letter) -> Option<&StrategyTree> {
        self.branches.iter().find(|(l, _)| *l == c).map(|(_, t)| t)
    }

    pub fn depth(&self) -> usize {
        match self.branches.first() {
            None => 0,
            Some((_, t)) => 1 + t.depth(),
        }
    }

    /// The choice sequence this tree plays, or an error if nodes at the same
    /// depth offer subsets of different sizes or leaves sit at different
    /// depths.
    pub fn choice_sequence(&self) -> Result<ChoiceSequence> {
        let mut seq = Vec::new();
        let mut level: Vec<&StrategyTree> = vec![self];
        loop {
            let sizes: BTreeSet<usize> = level.iter().map(|t| t.branches.len()).collect();
            if sizes.len() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "strategy offers subsets of sizes {sizes:?} at depth {}",
                    seq.len()
                )));
            }
            let k = *sizes.iter().next().unwrap();
            if k == 0 {
                return Ok(ChoiceSequence::new(seq));
            }
            seq.push(k as u8);
            level = level
                .iter()
                .flat_map(|t| t.branches.iter().map(|(_, c)| c))
                .collect();
        }
    }

    /// Every root-to-leaf play.
    pub fn plays(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        self.collect_plays(&mut Word::empty(), &mut out);
        out
    }

    fn collect_plays(&self, prefix: &mut Word, out: &mut BTreeSet<Word>) {
        if self.is_leaf() {
            out.insert(prefix.clone());
            return;
        }
        for (c, t) in &self.branches {
            let mut p = prefix.clone();
            p.push(*c);
            t.collect_plays(&mut p, out);
        }
    }

    /// Replaces every leaf by `f(played word)`.
    pub fn graft(&self, f: &mut impl FnMut(&Word) -> Result<StrategyTree>) -> Result<StrategyTree> {
        self.graft_from(&mut Word::empty(), f)
    }

    fn graft_from(
        &self,
        prefix: &mut Word,
        f: &mut impl FnMut(&Word) -> Result<StrategyTree>,
    ) -> Result<StrategyTree> {
        if self.is_leaf() {
            return f(prefix);
        }
        let mut branches = Vec::with_capacity(self.branches.len());
        for (c, t) in &self.branches {
            let mut p = prefix.clone();
            p.push(*c);
            branches.push((*c, t.graft_from(&mut p, f)?));
        }
        Ok(StrategyTree { branches })
    }

    /// Nodes reached after `depth` rounds, with the played prefix.
    pub fn nodes_at(&self, depth: usize) -> Vec<(Word, &StrategyTree)> {
        let mut level = vec![(Word::empty(), self)];
        for _ in 0..depth {
            level = level
                .into_iter()
                .flat_map(|(p, t)| {
                    t.branches.iter().map(move |(c, ch)| {
                        let mut q = p.clone();
                        q.push(*c);
                        (q, ch)
                    })
                })
                .collect();
        }
        level
    }

    /// Depths at which Bob has a real choice.
    pub fn branch_positions(&self) -> Result<Vec<usize>> {
        Ok(self
            .choice_sequence()?
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 1)
            .map(|(i, _)| i)
            .collect())
    }

    /// Well-formed, of the right length, and every play lands in `x`.
    pub fn is_winning(&self, x: &BTreeSet<Word>) -> bool {
        let Ok(alpha) = self.choice_sequence() else {
            return false;
        };
        if target_length(x).ok().flatten() != Some(alpha.len()) {
            return false;
        }
        self.plays().iter().all(|p| x.contains(p))
    }

    /// Graphviz rendering. Nodes are labeled with the played prefix and
    /// forced runs without a branching are collapsed into one edge.
    pub fn to_dot(&self, alphabet: Alphabet) -> String {
        let mut out =
            String::from("digraph strategy {\n  node [shape=box];\n  n0 [label=\"ε\"];\n");
        let mut next_id = 1;
        self.dot_from(0, &Word::empty(), alphabet, &mut next_id, &mut out);
        out.push_str("}\n");
        out
    }

    fn dot_from(
        &self,
        id: usize,
        prefix: &Word,
        alphabet: Alphabet,
        next_id: &mut usize,
        out: &mut String,
    ) {
        for (c, child) in &self.branches {
            let mut played = prefix.clone();
            played.push(*c);
            let mut node = child;
            while node.branches.len() == 1 {
                let (l, t) = &node.branches[0];
                played.push(*l);
                node = t;
            }
            let my = *next_id;
            *next_id += 1;
            let _ = writeln!(out, "  n{my} [label=\"{}\"];", played.render(alphabet));
            let _ = writeln!(out, "  n{id} -> n{my} [label=\"{c}\"];");
            node.dot_from(my, &played, alphabet, next_id, out);
        }
    }
}

/// Bob's answer to one subset Alice may offer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BobResponse {
    pub offered: Vec<Letter>,
    pub pick: Letter,
    /// `None` once the played prefix has left the prefixes of the target:
    /// Bob has already won whatever follows.
    pub next: Option<Refutation>,
}

/// Bob's winning strategy, certifying `α ∉ W(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub responses: Vec<BobResponse>,
}

impl Refutation {
    /// Replays every subset Alice could offer and checks that each play
    /// following the refutation ends outside `x`.
    pub fn verify(&self, alphabet: Alphabet, x: &BTreeSet<Word>, alpha: &ChoiceSequence) -> bool {
        let Some((&k, _)) = alpha.letters().split_first() else {
            return false;
        };
        let all = subsets(alphabet.size(), k as usize);
        if all.len() != self.responses.len() {
            return false;
        }
        all.iter().zip(&self.responses).all(|(offered, r)| {
            if &r.offered != offered || !offered.contains(&r.pick) {
                return false;
            }
            let res = residual(x, r.pick);
            match &r.next {
                None => res.is_empty(),
                Some(next) => !res.is_empty() && next.verify(alphabet, &res, &alpha.tail()),
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberOutcome {
    Win(StrategyTree),
    Lose(Refutation),
}

impl MemberOutcome {
    pub fn is_win(&self) -> bool {
        matches!(self, MemberOutcome::Win(_))
    }

    pub fn strategy(&self) -> Option<&StrategyTree> {
        match self {
            MemberOutcome::Win(s) => Some(s),
            MemberOutcome::Lose(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::Substitution;

    fn words(xs: &[&str]) -> BTreeSet<Word> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn cs(s: &str) -> ChoiceSequence {
        s.parse().unwrap()
    }

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn tm_lang(n: usize) -> BTreeSet<Word> {
        Substitution::from_strs(&["01", "10"])
            .unwrap()
            .language(n)
            .unwrap()
            .words
    }

    #[test]
    fn residual_cases() {
        assert_eq!(
            residual(&words(&["01", "10", "00", "11"]), 0),
            words(&["1", "0"])
        );
        assert!(residual(&words(&["01"]), 1).is_empty());
        assert_eq!(residual(&tm_lang(4), 0).len(), 5);
    }

    #[test]
    fn tm_length_four() {
        let ws = winning_set(bin(), &tm_lang(4)).unwrap();
        assert_eq!(ws.maximal, vec![cs("2121"), cs("2212")]);
        let irr: Vec<_> = ws.irreducible().into_iter().collect();
        assert_eq!(irr, vec![cs("1112"), cs("1212"), cs("2112"), cs("2212")]);
        assert_eq!(ws.cardinality(), 10);
    }

    #[test]
    fn singleton_and_full_targets() {
        let ws = winning_set(bin(), &words(&["0110"])).unwrap();
        assert_eq!(ws.maximal, vec![cs("1111")]);
        let all: BTreeSet<Word> = (0..8u8)
            .map(|i| Word::new(vec![i >> 2 & 1, i >> 1 & 1, i & 1]))
            .collect();
        let ws = winning_set(bin(), &all).unwrap();
        assert_eq!(ws.maximal, vec![cs("222")]);
        assert_eq!(ws.cardinality(), 8);
        assert!(winning_set(bin(), &BTreeSet::new()).unwrap().is_empty());
        assert!(winning_set(bin(), &words(&["0", "01"])).is_err());
    }

    #[test]
    fn member_outcomes() {
        let x = tm_lang(4);
        let MemberOutcome::Win(s) = member(bin(), &x, &cs("2212")).unwrap() else {
            panic!()
        };
        assert!(s.is_winning(&x));
        assert_eq!(s.choice_sequence().unwrap(), cs("2212"));
        assert_eq!(s.branch_positions().unwrap(), vec![0, 1, 3]);

        let x5 = tm_lang(5);
        // the length-5 row ◇1112 contains 21112 but not 12112
        assert!(member(bin(), &x5, &cs("21112")).unwrap().is_win());
        match member(bin(), &x5, &cs("12112")).unwrap() {
            MemberOutcome::Lose(r) => assert!(r.verify(bin(), &x5, &cs("12112"))),
            MemberOutcome::Win(_) => panic!("12112 must lose"),
        }
        assert!(member(bin(), &x5, &cs("2212")).is_err());
    }

    #[test]
    fn max_first_choice_cases() {
        let (k, a) = max_first_choice(bin(), &tm_lang(4), &cs("212")).unwrap();
        assert_eq!((k, a), (2, BTreeSet::from([0, 1])));
        let (k, a) = max_first_choice(bin(), &words(&["0110"]), &cs("111")).unwrap();
        assert_eq!((k, a), (1, BTreeSet::from([0])));
        let (k, _) = max_first_choice(bin(), &tm_lang(4), &cs("222")).unwrap();
        assert_eq!(k, 0);
    }

    #[test]
    fn cardinality_matches() {
        for n in 0..=8 {
            let x = tm_lang(n);
            assert_eq!(winning_set_cardinality(bin(), &x).unwrap(), x.len());
        }
    }

    #[test]
    fn antichain_only_representation() {
        let x = tm_lang(6);
        let full = Solver::new(bin()).winning_set(&x).unwrap();
        let sparse = Solver::new(bin())
            .with_expansion_threshold(0)
            .winning_set(&x)
            .unwrap();
        assert!(sparse.expansion.is_none());
        assert_eq!(sparse.members(), full.members());
        assert_eq!(sparse.cardinality(), x.len());
        for a in full.members() {
            assert!(sparse.contains(&a));
        }
    }

    #[test]
    fn from_plays_round_trip() {
        let x = tm_lang(4);
        let s = member(bin(), &x, &cs("2212"))
            .unwrap()
            .strategy()
            .unwrap()
            .clone();
        assert_eq!(StrategyTree::from_plays(&s.plays()).unwrap(), s);
        assert!(StrategyTree::from_plays(&words(&["00", "01", "10"])).is_err());
    }

    #[test]
    fn dot_export_collapses_forced_runs() {
        let x = tm_lang(4);
        let s = member(bin(), &x, &cs("2212"))
            .unwrap()
            .strategy()
            .unwrap()
            .clone();
        let dot = s.to_dot(bin());
        assert!(dot.starts_with("digraph"));
        // root, two first letters, four forced pairs, eight leaves
        assert_eq!(
            dot.matches("label=").count() - dot.matches("->").count(),
            1 + 2 + 4 + 8
        );
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<Letter>::new()]);
    }
}
