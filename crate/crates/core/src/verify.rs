//! Cross-validation of the closed forms and structural results against
//! direct computation. Every check becomes one report line; nothing here
//! returns an error.

// tables are indexed by word length
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::complexity::{delta_direct, delta_recurrence};
use crate::error::{Error, Result};
use crate::game::{MemberOutcome, Solver, WinningSet};
use crate::gtm::GtmParams;
use crate::substitution::Substitution;
use crate::table::thue_morse_expected;
use crate::winshift::{Method, WinShift};
use crate::words::{ChoiceSequence, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub subject: String,
    pub depth: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("verify {} (depth {})\n", self.subject, self.depth);
        for c in &self.checks {
            out.push_str(&format!("{:7} {}", c.status.to_string(), c.name));
            match c.status {
                Status::Fail => {
                    out.push_str(&format!(": expected {}, got {}", c.expected, c.actual))
                }
                Status::Skipped => out.push_str(&format!(" ({})", c.actual)),
                Status::Pass if !c.actual.is_empty() => out.push_str(&format!(": {}", c.actual)),
                Status::Pass => {}
            }
            out.push('\n');
        }
        out.push_str(if self.passed() {
            "overall: PASS\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}

/// `(expected, actual)` of a failed comparison.
type Mismatch = Option<(String, String)>;

/// Outcome of a comparison: `Ok(None)` passes.
type Diff = Result<Mismatch>;

struct Runner {
    checks: Vec<Check>,
}

impl Runner {
    fn record(&mut self, name: &str, outcome: Diff, note: String) {
        let (status, expected, actual) = match outcome {
            Ok(None) => (Status::Pass, String::new(), note),
            Ok(Some((e, a))) => (Status::Fail, e, a),
            Err(err) => (Status::Fail, "no error".into(), err.to_string()),
        };
        self.checks.push(Check {
            name: name.into(),
            status,
            expected,
            actual,
        });
    }

    fn skip(&mut self, name: &str, reason: &str) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Skipped,
            expected: String::new(),
            actual: reason.into(),
        });
    }
}

fn mismatch(
    what: String,
    expected: impl fmt::Debug,
    actual: impl fmt::Debug,
) -> Option<(String, String)> {
    Some((format!("{what}: {expected:?}"), format!("{actual:?}")))
}

fn show(seqs: &BTreeSet<ChoiceSequence>) -> Vec<String> {
    seqs.iter().map(ChoiceSequence::to_string).collect()
}

/// Runs every applicable check on `τ` up to length `depth`. Passing the
/// generalized Thue–Morse parameters adds the closed-form comparisons.
pub fn verify(tau: &Substitution, gtm: Option<GtmParams>, depth: usize) -> VerifyReport {
    let subject = tau.name().map(str::to_owned).unwrap_or_else(|| {
        tau.images()
            .iter()
            .map(|w| w.render(tau.alphabet()))
            .collect::<Vec<_>>()
            .join("/")
    });
    let mut r = Runner { checks: Vec::new() };

    let ws = match WinShift::new(tau.clone()) {
        Ok(ws) => {
            r.record(
                "synchronization delay",
                Ok(None),
                format!("L = {}", ws.delay()),
            );
            ws
        }
        Err(e) => {
            r.record("synchronization delay", Err(e), String::new());
            return VerifyReport {
                subject,
                depth,
                checks: r.checks,
            };
        }
    };
    let (l, m) = (ws.delay(), ws.image_length());
    let marked = tau.is_marked();

    let mut solver = Solver::new(tau.alphabet());
    let mut brute: Vec<BTreeSet<ChoiceSequence>> = vec![BTreeSet::new()];
    let games = (|| -> Result<(Mismatch, Mismatch)> {
        let (mut card, mut closed) = (None, None);
        for n in 1..=depth {
            let lang = tau.language(n)?;
            let members = solver.members(&lang.words)?;
            let ws_n = WinningSet {
                n,
                maximal: maximal(&members),
                expansion: None,
            };
            if card.is_none() && ws_n.cardinality() != lang.len() {
                card = mismatch(format!("|L_{n}|"), lang.len(), ws_n.cardinality());
            }
            if closed.is_none() {
                if let Some(a) = members.iter().find(|a| !down_closed(a, &members)) {
                    closed = Some((
                        format!("W(L_{n}) downward closed"),
                        format!("{a} has a missing predecessor"),
                    ));
                }
            }
            brute.push(
                members
                    .iter()
                    .filter(|a| a.is_irreducible())
                    .cloned()
                    .collect(),
            );
        }
        Ok((card, closed))
    })();
    match games {
        Ok((card, closed)) => {
            r.record(
                "cardinality |W(L_n)| = |L_n|",
                Ok(card),
                format!("n ≤ {depth}"),
            );
            r.record("downward closure", Ok(closed), format!("n ≤ {depth}"));
        }
        Err(e) => {
            r.record(
                "cardinality |W(L_n)| = |L_n|",
                Err(e.clone()),
                String::new(),
            );
            r.record("downward closure", Err(e), String::new());
            return VerifyReport {
                subject,
                depth,
                checks: r.checks,
            };
        }
    }

    let deltas: Result<Vec<usize>> = (0..=depth).map(|n| delta_direct(tau, n)).collect();
    match &deltas {
        Ok(d) => {
            let listed: Vec<String> = (1..=depth).map(|n| format!("Δ({n})={}", d[n])).collect();
            r.record("first differences", Ok(None), listed.join(" "));
            let bad = (1..=depth).find(|&n| d[n] != brute[n].len());
            r.record(
                "Δ(n) = number of irreducibles",
                Ok(bad.and_then(|n| mismatch(format!("Δ({n})"), d[n], brute[n].len()))),
                format!("n ≤ {depth}"),
            );
        }
        Err(e) => r.record("first differences", Err(e.clone()), String::new()),
    }

    let name = "Δ direct = recurrence";
    if !marked {
        r.skip(name, "not marked");
    } else if let Ok(d) = &deltas {
        let outcome = (|| -> Diff {
            for n in 1..=depth {
                let rec = delta_recurrence(&ws, n)?;
                if rec != d[n] {
                    return Ok(mismatch(format!("Δ({n})"), d[n], rec));
                }
            }
            Ok(None)
        })();
        r.record(name, outcome, format!("n ≤ {depth}"));
    }

    let name = "brute = substitutive enumeration";
    if !marked {
        r.skip(name, "not marked");
    } else {
        let outcome = (|| -> Diff {
            for n in l + 1..=l + 2 * m {
                let sub = ws.enumerate(n, Method::Substitutive)?;
                let bru = if n <= depth {
                    brute[n].clone()
                } else {
                    ws.enumerate(n, Method::Brute)?
                };
                if sub != bru {
                    return Ok(mismatch(format!("brute at n={n}"), show(&bru), show(&sub)));
                }
            }
            Ok(None)
        })();
        r.record(name, outcome, format!("{} < n ≤ {}", l, l + 2 * m));
    }

    let name = "decomposition and form of long sequences";
    if !tau.is_left_marked() {
        r.skip(name, "not left-marked");
    } else if depth <= l {
        r.skip(name, "depth does not exceed the synchronization delay");
    } else {
        let outcome = (|| -> Diff {
            for n in l + 1..=depth {
                for alpha in &brute[n] {
                    ws.verify_choice_decomposition(alpha)?;
                    if !ws.verify_form(alpha)? {
                        return Ok(Some((
                            "σ_M form".into(),
                            format!("{alpha} is not of that form"),
                        )));
                    }
                }
            }
            Ok(None)
        })();
        r.record(name, outcome, format!("{} < n ≤ {depth}", l));
    }

    if let Some(p) = gtm {
        gtm_checks(&mut r, &ws, p, depth, &brute);
    }

    let name = "Thue–Morse reference table";
    let tm = [Word::new(vec![0, 1]), Word::new(vec![1, 0])];
    if tau.images() != tm {
        r.skip(name, "not the Thue–Morse substitution");
    } else {
        let top = depth.min(24);
        let outcome = (|| -> Diff {
            for n in 1..=top {
                let want = thue_morse_expected(n)?;
                let got = ws.enumerate(n, Method::Auto)?;
                if got != want {
                    return Ok(mismatch(format!("row {n}"), show(&want), show(&got)));
                }
            }
            Ok(None)
        })();
        r.record(name, outcome, format!("rows 1..={top}"));
    }

    witness_check(&mut r, tau, &mut solver, depth);

    VerifyReport {
        subject,
        depth,
        checks: r.checks,
    }
}

/// Winning sequences known for particular substitutions.
const WITNESSES: &[(&[&str], &str)] =
    &[(&["01", "10"], "2212"), (&["021", "010", "210"], "3111112")];

fn witness_check(r: &mut Runner, tau: &Substitution, solver: &mut Solver, depth: usize) {
    let name = "known winning witness";
    let images: Vec<String> = tau.images().iter().map(Word::to_string).collect();
    let Some(&(_, alpha)) = WITNESSES
        .iter()
        .find(|(imgs, _)| images.iter().map(String::as_str).eq(imgs.iter().copied()))
    else {
        return r.skip(name, "no witness recorded for this substitution");
    };
    let alpha: ChoiceSequence = alpha.parse().expect("witness literal");
    if alpha.len() > depth {
        return r.skip(name, &format!("{alpha} is longer than the depth"));
    }
    let outcome = (|| -> Diff {
        let x = tau.language(alpha.len())?.words;
        match solver.member(&x, &alpha)? {
            MemberOutcome::Win(s) if s.is_winning(&x) => Ok(None),
            MemberOutcome::Win(_) => Ok(Some((
                "a winning tree".into(),
                "a tree that misses the target".into(),
            ))),
            MemberOutcome::Lose(_) => Ok(Some((format!("{alpha} ∈ W"), "Bob wins".into()))),
        }
    })();
    r.record(name, outcome, format!("{alpha} ∈ W(L_{})", alpha.len()));
}

fn gtm_checks(
    r: &mut Runner,
    ws: &WinShift,
    p: GtmParams,
    depth: usize,
    brute: &[BTreeSet<ChoiceSequence>],
) {
    let tau = ws.substitution();
    let factors = (|| -> Diff {
        for n in [2, 3] {
            let closed = p.factors(n)?;
            let direct = tau.language(n)?.words;
            if closed != direct {
                return Ok(mismatch(format!("L_{n}"), direct.len(), closed.len()));
            }
        }
        Ok(None)
    })();
    r.record(
        "closed-form factors of length 2 and 3",
        factors,
        String::new(),
    );

    let delay = if ws.delay() == p.sync_delay() {
        Ok(None)
    } else {
        Ok(mismatch("L".into(), p.sync_delay(), ws.delay()))
    };
    r.record(
        "synchronization delay 2b",
        delay,
        format!("L = {}", p.sync_delay()),
    );

    let irr = (|| -> Diff {
        for n in 1..=depth {
            let closed = p.irreducibles(n);
            if closed != brute[n] {
                return Ok(mismatch(format!("n={n}"), show(&brute[n]), show(&closed)));
            }
        }
        for n in depth + 1..=depth.max(3 * p.b) {
            let closed = p.irreducibles(n);
            let sub = ws.enumerate(n, Method::Auto)?;
            if closed != sub {
                return Ok(mismatch(format!("n={n}"), show(&sub), show(&closed)));
            }
        }
        Ok(None)
    })();
    r.record("closed-form irreducibles", irr, String::new());

    let table = (|| -> Diff {
        for n in 0..=depth {
            let (d, c) = (p.delta(n)?, p.complexity(n)?);
            let (dd, cc) = (delta_direct(tau, n)?, tau.language(n)?.len());
            if (d, c) != (dd, cc) {
                return Ok(mismatch(format!("(Δ, C) at n={n}"), (dd, cc), (d, c)));
            }
        }
        Ok(None)
    })();
    r.record(
        "closed-form Δ and complexity",
        table,
        format!("n ≤ {depth}"),
    );
}

fn maximal(members: &BTreeSet<ChoiceSequence>) -> Vec<ChoiceSequence> {
    members
        .iter()
        .filter(|a| !members.iter().any(|b| b != *a && ChoiceSequence::le(a, b)))
        .cloned()
        .collect()
}

fn down_closed(a: &ChoiceSequence, members: &BTreeSet<ChoiceSequence>) -> bool {
    (0..a.len()).all(|i| {
        let l = a.letters();
        l[i] == 1 || {
            let mut v = l.to_vec();
            v[i] -= 1;
            members.contains(&ChoiceSequence::new(v))
        }
    })
}

/// Fails unless the report passed.
pub fn require_pass(report: &VerifyReport) -> Result<()> {
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.name.as_str())
            .collect();
        Err(Error::Consistency(format!(
            "verification failed: {}",
            failed.join(", ")
        )))
    }
}
