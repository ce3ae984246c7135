//! Substitutive structure of the winning shift `W(τ)`.
//!
//! Long winning strategies are built from short ones by substituting each
//! round with a game played on `τ`-images, and for marked `τ` every long
//! irreducible choice sequence arises this way. Enumeration therefore only
//! solves games up to the synchronization delay `L` and extends level by
//! level above it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::game::{residual, MemberOutcome, Solver, StrategyTree};
use crate::recognizability::{decomposition_with_delay, default_cap, sync_delay, SyncDelay};
use crate::substitution::Substitution;
use crate::words::{ChoiceSequence, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Auto,
    Brute,
    Substitutive,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "brute" => Ok(Method::Brute),
            "substitutive" => Ok(Method::Substitutive),
            _ => Err(Error::InvalidArgument(format!(
                "unknown method {s:?} (auto, brute, substitutive)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::Brute => "brute",
            Method::Substitutive => "substitutive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelSource {
    Brute,
    Substitutive,
}

/// The largest first letter `k` for a suffix together with the unique set
/// of letters Alice offers first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstChoice {
    pub k: usize,
    pub letters: BTreeSet<Letter>,
}

/// All irreducible members of `W(τ)` of length `n`, grouped by their suffix
/// after the first letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelData {
    pub n: usize,
    pub entries: BTreeMap<ChoiceSequence, FirstChoice>,
    pub source: LevelSource,
}

impl LevelData {
    /// Number of irreducible sequences, `Σ k`.
    pub fn count(&self) -> usize {
        self.entries.values().map(|e| e.k).sum()
    }

    pub fn sequences(&self) -> BTreeSet<ChoiceSequence> {
        self.entries
            .iter()
            .flat_map(|(u, e)| (1..=e.k as u8).map(move |t| u.prepend(t)))
            .collect()
    }
}

/// Target length `N = i + (n - 2)M + 1` split into the head length `i` and
/// the base length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionPlan {
    pub target: usize,
    pub i: usize,
    pub n: usize,
}

/// A uniform primitive substitution together with its synchronization
/// delay.
#[derive(Debug, Clone)]
pub struct WinShift {
    tau: Substitution,
    m: usize,
    sync: SyncDelay,
}

impl WinShift {
    pub fn new(tau: Substitution) -> Result<Self> {
        let m = tau.require_uniform("winning shift analysis")?;
        Self::with_cap(tau, default_cap(m))
    }

    pub fn with_cap(tau: Substitution, cap: usize) -> Result<Self> {
        let m = tau.require_uniform("winning shift analysis")?;
        let sync = sync_delay(&tau, cap)?;
        Ok(WinShift { tau, m, sync })
    }

    pub fn substitution(&self) -> &Substitution {
        &self.tau
    }

    pub fn image_length(&self) -> usize {
        self.m
    }

    pub fn delay(&self) -> usize {
        self.sync.delay
    }

    pub fn sync(&self) -> &SyncDelay {
        &self.sync
    }

    fn solver(&self) -> Solver {
        Solver::new(self.tau.alphabet())
    }

    fn require_left_marked(&self, what: &str) -> Result<()> {
        if self.tau.is_left_marked() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{what} requires a left-marked substitution"
            )))
        }
    }

    fn require_marked(&self, what: &str) -> Result<()> {
        if self.tau.is_marked() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{what} requires a marked substitution (left- and right-marked)"
            )))
        }
    }

    fn require_long_irreducible(&self, alpha: &ChoiceSequence) -> Result<()> {
        if !alpha.is_irreducible() {
            return Err(Error::InvalidArgument(format!(
                "{alpha} is not irreducible"
            )));
        }
        if alpha.len() <= self.delay() {
            return Err(Error::LengthOutOfRange {
                len: alpha.len(),
                min: self.delay() + 1,
            });
        }
        Ok(())
    }

    /// `(|α| - 1) mod M`, the residue of every image boundary in every
    /// winning play of `α`.
    pub fn choice_decomposition(&self, alpha: &ChoiceSequence) -> Result<usize> {
        self.require_left_marked("choice decomposition")?;
        self.require_long_irreducible(alpha)?;
        Ok((alpha.len() - 1) % self.m)
    }

    /// As [`Self::choice_decomposition`], but also solves the game and checks
    /// the word decomposition of every play of the canonical strategy.
    pub fn verify_choice_decomposition(&self, alpha: &ChoiceSequence) -> Result<usize> {
        let d = self.choice_decomposition(alpha)?;
        let lang = self.tau.language(alpha.len())?;
        let MemberOutcome::Win(s) = self.solver().member(&lang.words, alpha)? else {
            return Err(Error::InvalidArgument(format!(
                "{alpha} is not in the winning shift"
            )));
        };
        for play in s.plays() {
            let got = decomposition_with_delay(&self.tau, self.delay(), &play)?;
            if got != d {
                return Err(Error::Consistency(format!(
                    "play {} has decomposition {got}, expected {d}",
                    play.render(self.tau.alphabet())
                )));
            }
        }
        Ok(d)
    }

    /// Whether `α` minus its first `(|α| - 1) mod M` letters and its last
    /// letter is a `σ_M`-image.
    pub fn verify_form(&self, alpha: &ChoiceSequence) -> Result<bool> {
        let i = self.choice_decomposition(alpha)?;
        let core = alpha.trim(i, 1)?;
        Ok(core
            .letters()
            .iter()
            .enumerate()
            .all(|(p, &l)| p % self.m == 0 || l == 1))
    }

    /// `{suff_i(τ(c)) : c ∈ letters}`.
    pub fn suffix_targets(&self, letters: &BTreeSet<Letter>, i: usize) -> BTreeSet<Word> {
        letters
            .iter()
            .map(|&c| self.tau.image(c).suffix(i))
            .collect()
    }

    /// `W(suff_i(τ(A)))`. For permutive `τ` this is `σ_i({1, …, |A|})`
    /// without solving.
    pub fn suffix_winning_set(
        &self,
        letters: &BTreeSet<Letter>,
        i: usize,
    ) -> Result<BTreeSet<ChoiceSequence>> {
        if self.tau.is_permutive() {
            return Ok((1..=letters.len() as u8)
                .map(|k| ChoiceSequence::new(vec![k]).sigma(i))
                .collect());
        }
        Ok((*self.solver().members(&self.suffix_targets(letters, i))?).clone())
    }

    /// Winning strategies for every `β` in the product of block winning
    /// sets: a head played on `suff_i` of images, one full image per middle
    /// round of `s`, and a tail played on `pref_j` of images.
    pub fn substitute_strategy(
        &self,
        s: &StrategyTree,
        i: usize,
        j: usize,
    ) -> Result<BTreeMap<ChoiceSequence, StrategyTree>> {
        let m = self.m;
        if !(1..=m).contains(&i) || !(1..=m).contains(&j) {
            return Err(Error::InvalidArgument(format!(
                "i and j must lie in 1..={m}"
            )));
        }
        let alpha = s.choice_sequence()?;
        let n = alpha.len();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "strategy must have at least two rounds".into(),
            ));
        }
        if !s.is_winning(&self.tau.language(n)?.words) {
            return Err(Error::InvalidArgument(
                "strategy is not winning for the language".into(),
            ));
        }
        let mut solver = self.solver();
        let block = |r: usize, c: Letter| -> Word {
            let img = self.tau.image(c);
            match r {
                0 => img.suffix(i),
                r if r == n - 1 => img.prefix(j),
                _ => img.clone(),
            }
        };
        let mut blocks: Vec<BTreeSet<ChoiceSequence>> = Vec::with_capacity(n);
        for r in 0..n {
            let mut acc: Option<BTreeSet<ChoiceSequence>> = None;
            for (_, node) in s.nodes_at(r) {
                let target: BTreeSet<Word> =
                    node.offered().into_iter().map(|c| block(r, c)).collect();
                let w = solver.members(&target)?;
                acc = Some(match acc {
                    None => (*w).clone(),
                    Some(a) => a.intersection(&w).cloned().collect(),
                });
            }
            blocks.push(acc.unwrap_or_default());
        }

        let mut betas = vec![Vec::<ChoiceSequence>::new()];
        for b in &blocks {
            betas = betas
                .into_iter()
                .flat_map(|prefix| {
                    b.iter().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x.clone());
                        p
                    })
                })
                .collect();
        }

        let mut out = BTreeMap::new();
        for parts in betas {
            let beta = parts
                .iter()
                .fold(ChoiceSequence::empty(), |acc, p| acc.concat(p));
            let tree = self.grow(&mut solver, s, 0, &parts, &block)?;
            out.insert(beta, tree);
        }
        Ok(out)
    }

    fn grow(
        &self,
        solver: &mut Solver,
        node: &StrategyTree,
        r: usize,
        parts: &[ChoiceSequence],
        block: &impl Fn(usize, Letter) -> Word,
    ) -> Result<StrategyTree> {
        let offered = node.offered();
        let target: BTreeSet<Word> = offered.iter().map(|&c| block(r, c)).collect();
        let MemberOutcome::Win(t) = solver.member(&target, &parts[r])? else {
            return Err(Error::Consistency(format!(
                "block {r} sequence {} lost",
                parts[r]
            )));
        };
        if r + 1 == parts.len() {
            return Ok(t);
        }
        t.graft(&mut |played| {
            let c = *offered
                .iter()
                .find(|&&c| &block(r, c) == played)
                .expect("block play comes from an offered letter");
            let child = node.child(c).expect("offered letter has a subtree");
            self.grow(solver, child, r + 1, parts, block)
        })
    }

    /// Splits a target length into head length and base length.
    pub fn plan(&self, target: usize) -> Result<ExtensionPlan> {
        if target <= self.delay() {
            return Err(Error::LengthOutOfRange {
                len: target,
                min: self.delay() + 1,
            });
        }
        let m = self.m;
        let i = match (target - 1) % m {
            0 => m,
            r => r,
        };
        Ok(ExtensionPlan {
            target,
            i,
            n: (target - 1 - i) / m + 2,
        })
    }

    /// The shorter strategy that `s` is substituted from, for marked `τ`.
    pub fn desubstitute_strategy(&self, s: &StrategyTree) -> Result<StrategyTree> {
        self.require_marked("desubstitution")?;
        let alpha = s.choice_sequence()?;
        self.require_long_irreducible(&alpha)?;
        if !s.is_winning(&self.tau.language(alpha.len())?.words) {
            return Err(Error::InvalidArgument(
                "strategy is not winning for the language".into(),
            ));
        }
        let plan = self.plan(alpha.len())?;
        let plays = s
            .plays()
            .iter()
            .map(|w| self.desubstitute_play(w, plan))
            .collect::<Result<BTreeSet<Word>>>()?;
        let base = StrategyTree::from_plays(&plays)?;
        if !base.is_winning(&self.tau.language(plan.n)?.words) {
            return Err(Error::Consistency(
                "desubstituted strategy is not winning".into(),
            ));
        }
        Ok(base)
    }

    fn desubstitute_play(&self, w: &Word, plan: ExtensionPlan) -> Result<Word> {
        let m = self.m;
        let letters = w.letters();
        let unique = |pred: &dyn Fn(&Word) -> bool, what: &str| -> Result<Letter> {
            let found: Vec<Letter> = self
                .tau
                .alphabet()
                .letters()
                .filter(|&c| pred(self.tau.image(c)))
                .collect();
            match found.as_slice() {
                [c] => Ok(*c),
                _ => Err(Error::Consistency(format!(
                    "{what} of play {} has {} preimages",
                    w.render(self.tau.alphabet()),
                    found.len()
                ))),
            }
        };
        let head = &letters[..plan.i];
        let mut out = vec![unique(&|img: &Word| img.letters().ends_with(head), "head")?];
        for chunk in letters[plan.i..letters.len() - 1].chunks(m) {
            out.push(unique(
                &|img: &Word| img.letters() == chunk,
                "middle block",
            )?);
        }
        let last = letters[letters.len() - 1];
        out.push(unique(
            &|img: &Word| img.first() == Some(last),
            "last letter",
        )?);
        Ok(Word::new(out))
    }

    /// Level data by solving the game on `L_n(τ)`.
    pub fn brute_level(&self, n: usize) -> Result<LevelData> {
        if n < 2 {
            return Err(Error::InvalidArgument("levels start at length 2".into()));
        }
        let lang = self.tau.language(n)?;
        let mut solver = self.solver();
        let members = solver.members(&lang.words)?;
        let mut entries = BTreeMap::new();
        for alpha in members.iter().filter(|a| a.is_irreducible()) {
            let u = alpha.tail();
            if entries.contains_key(&u) {
                continue;
            }
            let (k, letters) = solver.max_first_choice(&lang.words, &u)?;
            entries.insert(u, FirstChoice { k, letters });
        }
        Ok(LevelData {
            n,
            entries,
            source: LevelSource::Brute,
        })
    }

    fn check_extension(&self, level: &LevelData, i: usize) -> Result<()> {
        self.require_marked("level extension")?;
        if !(1..=self.m).contains(&i) {
            return Err(Error::InvalidArgument(format!(
                "i must lie in 1..={}",
                self.m
            )));
        }
        if level.n < 2 {
            return Err(Error::InvalidArgument("levels start at length 2".into()));
        }
        Ok(())
    }

    fn tail_of(&self, u: &ChoiceSequence) -> ChoiceSequence {
        let l = u.letters();
        let (&last, mid) = l.split_last().expect("level suffixes are nonempty");
        ChoiceSequence::new(mid.to_vec())
            .sigma(self.m)
            .concat(&ChoiceSequence::new(vec![last]))
    }

    /// Irreducible sequences of length `i + (n - 2)M + 1` obtained from a
    /// level: `w · σ_M(a_1 ⋯ a_{n-2}) · a_{n-1}` for `w ∈ W(suff_i(τ(A)))`.
    pub fn extend_level(&self, level: &LevelData, i: usize) -> Result<BTreeSet<ChoiceSequence>> {
        self.check_extension(level, i)?;
        let mut out = BTreeSet::new();
        for (u, e) in &level.entries {
            let tail = self.tail_of(u);
            for w in self.suffix_winning_set(&e.letters, i)? {
                out.insert(w.concat(&tail));
            }
        }
        Ok(out)
    }

    /// Full level data at length `i + (n - 2)M + 1`.
    pub fn next_level(&self, level: &LevelData, i: usize) -> Result<LevelData> {
        self.check_extension(level, i)?;
        let mut solver = self.solver();
        let mut entries = BTreeMap::new();
        for (u, e) in &level.entries {
            let tail = self.tail_of(u);
            let heads = self.suffix_winning_set(&e.letters, i)?;
            let mut best: BTreeMap<ChoiceSequence, u8> = BTreeMap::new();
            for w in &heads {
                let top = best.entry(w.tail()).or_default();
                *top = (*top).max(w.first().unwrap());
            }
            let targets = self.suffix_targets(&e.letters, i);
            for (w_tail, k) in best {
                let letters: BTreeSet<Letter> = if self.tau.is_permutive() {
                    targets.iter().map(|h| h.first().unwrap()).collect()
                } else {
                    let mut a = BTreeSet::new();
                    for c in self.tau.alphabet().letters() {
                        let res = residual(&targets, c);
                        if !res.is_empty() && solver.members(&res)?.contains(&w_tail) {
                            a.insert(c);
                        }
                    }
                    a
                };
                if letters.len() != k as usize {
                    return Err(Error::Consistency(format!(
                        "first-choice set {letters:?} does not match maximal letter {k}"
                    )));
                }
                let key = w_tail.concat(&tail);
                if entries
                    .insert(
                        key.clone(),
                        FirstChoice {
                            k: k as usize,
                            letters,
                        },
                    )
                    .is_some()
                {
                    return Err(Error::Consistency(format!("suffix {key} produced twice")));
                }
            }
        }
        let n = i + (level.n - 2) * self.m + 1;
        Ok(LevelData {
            n,
            entries,
            source: LevelSource::Substitutive,
        })
    }

    /// Level data at any length `n ≥ 2`: solved directly up to `L`, and
    /// extended from a shorter level above it.
    pub fn level(&self, n: usize) -> Result<LevelData> {
        if n <= self.delay() {
            return self.brute_level(n);
        }
        self.require_marked("substitutive enumeration")?;
        let plan = self.plan(n)?;
        let base = self.level(plan.n)?;
        self.next_level(&base, plan.i)
    }

    /// Irreducible members of `W(τ)` of length `n`.
    pub fn enumerate(&self, n: usize, method: Method) -> Result<BTreeSet<ChoiceSequence>> {
        let method = match method {
            Method::Auto if n > self.delay() && self.tau.is_marked() => Method::Substitutive,
            Method::Auto => Method::Brute,
            other => other,
        };
        match method {
            Method::Substitutive => {
                if !self.tau.is_marked() {
                    return Err(Error::Unsupported(
                        "substitutive enumeration requires a marked substitution; use method=brute"
                            .into(),
                    ));
                }
                if n < 2 {
                    return self.enumerate(n, Method::Brute);
                }
                // lengths up to L are the solved seed levels
                Ok(self.level(n)?.sequences())
            }
            _ => {
                let lang = self.tau.language(n)?;
                let members = self.solver().members(&lang.words)?;
                Ok(members
                    .iter()
                    .filter(|a| a.is_irreducible())
                    .cloned()
                    .collect())
            }
        }
    }
}
