//! Acceptance gate: one PASS/FAIL line per criterion. Every comparison is
//! exact (set or integer equality), so no tolerances apply.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, Output};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;
use winshift_core::builtin::builtin;
use winshift_core::complexity::{delta_direct, delta_recurrence};
use winshift_core::table::thue_morse_expected;
use winshift_core::{
    ChoiceSequence, Error, GtmParams, MemberOutcome, Method, Solver, Substitution, WinShift,
};

const CASES: u32 = 256;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_winshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn bin_json(args: &[&str]) -> Result<Value, String> {
    let out = bin(args);
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: bad JSON: {e}"))
}

fn named(name: &str) -> Substitution {
    builtin(name).expect("built-in").expect("valid built-in")
}

fn cs(s: &str) -> ChoiceSequence {
    s.parse().expect("choice sequence literal")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        failure_persistence: None,
        ..Config::with_cases(CASES)
    })
}

/// Irreducible sets by length from a `winshift --table ... --format json` run.
fn table_from_cli(
    range: &str,
    method: &str,
) -> Result<BTreeMap<usize, BTreeSet<ChoiceSequence>>, String> {
    let v = bin_json(&[
        "winshift", "--subst", "tm", "--table", range, "--method", method, "--format", "json",
    ])?;
    let rows = v.as_array().ok_or("expected an array")?;
    rows.iter()
        .map(|r| {
            let n = r["length"].as_u64().ok_or("missing length")? as usize;
            let seqs = r["irreducible"].as_array().ok_or("missing irreducible")?;
            let set = seqs
                .iter()
                .map(|s| s.as_str().map(cs).ok_or("non-string entry"))
                .collect::<Result<_, _>>()?;
            Ok((n, set))
        })
        .collect::<Result<_, &str>>()
        .map_err(str::to_owned)
}

fn table_one() -> Outcome {
    let sub = table_from_cli("1..24", "substitutive")?;
    let brute = table_from_cli("1..12", "brute")?;
    for n in 1..=24 {
        let want = thue_morse_expected(n).map_err(e)?;
        ensure(sub.get(&n) == Some(&want), || {
            format!("substitutive row {n}: {:?}", sub.get(&n))
        })?;
        if n <= 12 {
            ensure(brute.get(&n) == Some(&want), || {
                format!("brute row {n}: {:?}", brute.get(&n))
            })?;
        }
    }
    Ok("rows 1..24 substitutive, 1..12 brute".into())
}

fn sync_delays() -> Outcome {
    let want = [
        ("tm", 4),
        ("ex42", 5),
        ("ex46", 6),
        ("gtm:2,3", 4),
        ("gtm:3,3", 6),
        ("gtm:4,2", 8),
    ];
    let mut got = Vec::new();
    for (name, l) in want {
        let v = bin_json(&["syncdelay", "--subst", name, "--format", "json"])?;
        let found = v["L"].as_u64().ok_or("missing L")? as usize;
        ensure(found == l, || format!("{name}: L = {found}, expected {l}"))?;
        got.push(format!("{name}={found}"));
    }
    Ok(got.join(" "))
}

fn cardinality() -> Outcome {
    for (name, top) in [
        ("tm", 14),
        ("ex42", 10),
        ("ex46", 10),
        ("gtm:2,3", 10),
        ("gtm:3,3", 10),
    ] {
        let tau = named(name);
        let mut solver = Solver::new(tau.alphabet());
        for n in 0..=top {
            let x = tau.language(n).map_err(e)?.words;
            let w = solver.winning_set(&x).map_err(e)?.cardinality();
            ensure(w == x.len(), || {
                format!("{name} n={n}: |W| = {w}, |L| = {}", x.len())
            })?;
        }
    }
    Ok("tm n ≤ 14, others n ≤ 10".into())
}

fn ex42_deltas() -> Outcome {
    let delta = |n: &str| -> Result<u64, String> {
        let v = bin_json(&[
            "delta", "--subst", "ex42", "--length", n, "--method", "direct", "--format", "json",
        ])?;
        v["delta"].as_u64().ok_or_else(|| "missing delta".into())
    };
    let (d6, d14) = (delta("6")?, delta("14")?);
    ensure(d6 == 4 && d14 == 5, || {
        format!("Δ(6) = {d6}, Δ(14) = {d14}")
    })?;
    let refused = bin(&[
        "delta",
        "--subst",
        "ex42",
        "--length",
        "14",
        "--method",
        "recurrence",
    ]);
    ensure(refused.status.code() == Some(1), || {
        format!("recurrence exit {:?}", refused.status.code())
    })?;
    let ws = WinShift::new(named("ex42")).map_err(e)?;
    ensure(
        matches!(delta_recurrence(&ws, 14), Err(Error::Unsupported(_))),
        || "library accepted ex42".into(),
    )?;
    Ok("Δ(6)=4 Δ(14)=5, recurrence refused with exit 1".into())
}

fn recurrence() -> Outcome {
    for name in ["tm", "gtm:2,3"] {
        let ws = WinShift::new(named(name)).map_err(e)?;
        for n in 1..=14 {
            let (r, d) = (
                delta_recurrence(&ws, n).map_err(e)?,
                delta_direct(ws.substitution(), n).map_err(e)?,
            );
            ensure(r == d, || {
                format!("{name} n={n}: recurrence {r}, direct {d}")
            })?;
        }
    }
    Ok("tm and φ_{2,3}, 1 ≤ n ≤ 14".into())
}

fn gtm_closed_forms() -> Outcome {
    for (b, m) in [(2, 2), (2, 3), (3, 3), (4, 2)] {
        let p = GtmParams::new(b, m).map_err(e)?;
        let tau = p.substitution();
        for n in 0..=12 {
            let (d, c) = (p.delta(n).map_err(e)?, p.complexity(n).map_err(e)?);
            let (dd, cc) = (
                delta_direct(&tau, n).map_err(e)?,
                tau.language(n).map_err(e)?.len(),
            );
            ensure((d, c) == (dd, cc), || {
                format!(
                    "({b},{m}) n={n}: closed {:?}, direct {:?}",
                    (d, c),
                    (dd, cc)
                )
            })?;
        }
        for n in [2, 3] {
            ensure(
                p.factors(n).map_err(e)? == tau.language(n).map_err(e)?.words,
                || format!("({b},{m}) L_{n}"),
            )?;
        }
        let ws = WinShift::new(tau).map_err(e)?;
        for n in 1..=30 {
            let method = if n <= 2 * b {
                Method::Brute
            } else {
                Method::Substitutive
            };
            let got = ws.enumerate(n, method).map_err(e)?;
            ensure(p.irreducibles(n) == got, || {
                format!("({b},{m}) irreducibles n={n} ({method})")
            })?;
        }
    }
    Ok("(2,2) (2,3) (3,3) (4,2)".into())
}

fn witnesses() -> Outcome {
    let ex46 = named("ex46");
    let x7 = ex46.language(7).map_err(e)?.words;
    let win = Solver::new(ex46.alphabet())
        .member(&x7, &cs("3111112"))
        .map_err(e)?;
    ensure(
        matches!(&win, MemberOutcome::Win(s) if s.is_winning(&x7)),
        || "3111112 ∉ W(L_7(ex46))".into(),
    )?;

    let tm = WinShift::new(named("tm")).map_err(e)?;
    let tau = tm.substitution();
    let x4 = tau.language(4).map_err(e)?.words;
    let MemberOutcome::Win(s) = Solver::new(tau.alphabet())
        .member(&x4, &cs("2212"))
        .map_err(e)?
    else {
        return Err("2212 ∉ W(L_4(tm))".into());
    };
    let positions = s.branch_positions().map_err(e)?;
    ensure(positions == [0, 1, 3], || {
        format!("branch positions {positions:?}")
    })?;
    ensure(s.is_winning(&x4) && s.plays().len() == 8, || {
        "tree does not replay".into()
    })?;

    let out = tm.substitute_strategy(&s, 2, 2).map_err(e)?;
    let target = cs("21211121");
    let tree = out
        .get(&target)
        .ok_or_else(|| format!("21211121 not produced: {:?}", out.keys()))?;
    let x8 = tau.language(8).map_err(e)?.words;
    ensure(tree.is_winning(&x8), || "substituted tree loses".into())?;
    ensure(tree.choice_sequence().map_err(e)? == target, || {
        "substituted tree has the wrong shape".into()
    })?;
    Ok("3111112 (ex46), 2212 at {0,1,3}, 21211121 via substitution".into())
}

fn suite() -> Vec<Substitution> {
    ["tm", "ex42", "ex46", "gtm:2,3", "gtm:3,3"]
        .map(named)
        .into()
}

fn marked_suite() -> Vec<WinShift> {
    let mut v: Vec<Substitution> = ["tm", "gtm:2,3", "gtm:3,3"].map(named).into();
    v.push(Substitution::from_strs(&["001", "100"]).unwrap());
    v.push(Substitution::from_strs(&["0011", "1202", "2020"]).unwrap());
    v.into_iter().map(|t| WinShift::new(t).unwrap()).collect()
}

fn down_closed(w: &BTreeSet<ChoiceSequence>) -> bool {
    w.iter().all(|a| {
        (0..a.len()).all(|i| {
            let mut v = a.letters().to_vec();
            v[i] == 1 || {
                v[i] -= 1;
                w.contains(&ChoiceSequence::new(v))
            }
        })
    })
}

fn masked<T: Clone + Ord>(xs: &BTreeSet<T>, mask: &[bool]) -> BTreeSet<T> {
    xs.iter()
        .zip(mask.iter().cycle())
        .filter(|(_, &k)| k)
        .map(|(x, _)| x.clone())
        .collect()
}

fn strategy_for(ws: &WinShift, alpha: &ChoiceSequence) -> Option<winshift_core::StrategyTree> {
    let tau = ws.substitution();
    let x = tau.language(alpha.len()).ok()?.words;
    match Solver::new(tau.alphabet()).member(&x, alpha).ok()? {
        MemberOutcome::Win(s) => Some(s),
        MemberOutcome::Lose(_) => None,
    }
}

fn property_suites() -> Outcome {
    let suite = suite();
    let marked = marked_suite();
    let mut report = Vec::new();
    let fail = |name: &str, err: String| format!("{name}: {err}");

    runner()
        .run(
            &(
                0usize..5,
                1usize..=7,
                prop::collection::vec(any::<bool>(), 1..40),
            ),
            |(which, n, mask)| {
                let t = &suite[which];
                let x = masked(&t.language(n).unwrap().words, &mask);
                let w = Solver::new(t.alphabet()).members(&x).unwrap();
                prop_assert!(down_closed(&w));
                prop_assert_eq!(w.len(), x.len());
                Ok(())
            },
        )
        .map_err(|err| fail("downward closure", err.to_string()))?;
    report.push("closure");

    let subsets = (
        0usize..5,
        1usize..=7,
        prop::collection::vec(any::<bool>(), 1..40),
        prop::collection::vec(any::<bool>(), 1..40),
    );
    runner()
        .run(&subsets, |(which, n, outer, inner)| {
            let t = &suite[which];
            let y = masked(&t.language(n).unwrap().words, &outer);
            let x = masked(&y, &inner);
            let mut solver = Solver::new(t.alphabet());
            prop_assert!(solver
                .members(&x)
                .unwrap()
                .is_subset(&solver.members(&y).unwrap()));
            Ok(())
        })
        .map_err(|err| fail("monotonicity", err.to_string()))?;
    report.push("monotonicity");

    let picks = (
        0usize..5,
        1usize..=9,
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
    );
    runner()
        .run(&picks, |(which, n, pick, a, b)| {
            let t = &suite[which];
            let mut solver = Solver::new(t.alphabet());
            let w = solver.members(&t.language(n).unwrap().words).unwrap();
            let members: Vec<_> = w.iter().collect();
            let alpha = pick.get(&members);
            let (mut lo, mut hi) = (a.index(n + 1), b.index(n + 1));
            if lo > hi {
                std::mem::swap(&mut lo, &mut hi);
            }
            let factor = ChoiceSequence::new(alpha.letters()[lo..hi].to_vec());
            prop_assert!(solver
                .members(&t.language(hi - lo).unwrap().words)
                .unwrap()
                .contains(&factor));
            Ok(())
        })
        .map_err(|err| fail("factor consistency", err.to_string()))?;
    report.push("factor consistency");

    let mut checked = 0;
    for ws in &marked {
        let (l, m) = (ws.delay(), ws.image_length());
        for n in l + 1..=20 {
            for alpha in ws.enumerate(n, Method::Auto).map_err(e)? {
                let d = ws.choice_decomposition(&alpha).map_err(e)?;
                ensure(
                    d == (n - 1) % m && ws.verify_form(&alpha).map_err(e)?,
                    || format!("form of {alpha}"),
                )?;
                checked += 1;
            }
        }
    }
    report.push("form");

    let subs = (
        0usize..5,
        2usize..=4,
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
    );
    runner()
        .run(&subs, |(which, n, pick, i, j)| {
            let ws = &marked[which];
            let tau = ws.substitution();
            let m = ws.image_length();
            let w = Solver::new(tau.alphabet())
                .members(&tau.language(n).unwrap().words)
                .unwrap();
            let members: Vec<_> = w.iter().collect();
            let alpha = pick.get(&members);
            let s = strategy_for(ws, alpha).unwrap();
            let (i, j) = (i.index(m) + 1, j.index(m) + 1);
            let target = tau.language(i + (n - 2) * m + j).unwrap().words;
            for tree in ws.substitute_strategy(&s, i, j).unwrap().values() {
                prop_assert!(tree.is_winning(&target));
            }
            Ok(())
        })
        .map_err(|err| fail("substitution replay", err.to_string()))?;
    report.push("substitution replay");

    let desubs = (
        0usize..5,
        2usize..=5,
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
    );
    runner()
        .run(&desubs, |(which, n, pick, i)| {
            let ws = &marked[which];
            let tau = ws.substitution();
            let i = i.index(ws.image_length()) + 1;
            prop_assume!(i + (n - 2) * ws.image_length() + 1 > ws.delay());
            let w = Solver::new(tau.alphabet())
                .members(&tau.language(n).unwrap().words)
                .unwrap();
            let members: Vec<_> = w.iter().filter(|a| a.is_irreducible()).collect();
            prop_assume!(!members.is_empty());
            let alpha = pick.get(&members);
            let s = strategy_for(ws, alpha).unwrap();
            let out = ws.substitute_strategy(&s, i, 1).unwrap();
            for (beta, long) in &out {
                if !beta.is_irreducible()
                    || out.keys().any(|c| c != beta && ChoiceSequence::le(beta, c))
                {
                    continue;
                }
                let short = ws.desubstitute_strategy(long).unwrap();
                prop_assert_eq!(short.choice_sequence().unwrap().tail(), alpha.tail());
                for c in short.offered() {
                    prop_assert_eq!(short.child(c), s.child(c));
                }
            }
            Ok(())
        })
        .map_err(|err| fail("desubstitution", err.to_string()))?;
    report.push("desubstitution");

    Ok(format!(
        "{} ({CASES} cases each; form checked on {checked} irreducibles)",
        report.join(", ")
    ))
}

fn periodicity_guard() -> Outcome {
    ensure(
        matches!(GtmParams::new(3, 2), Err(Error::Periodic { b: 3, m: 2 })),
        || "φ_{3,2} accepted".into(),
    )?;
    let out = bin(&["gtm", "--b", "3", "--m", "2", "syncdelay"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(
        out.status.code() == Some(1) && stderr.contains("b ≡ 1 (mod m)"),
        || format!("CLI: {stderr}"),
    )?;
    let tau = winshift_core::gtm::gtm_substitution(3, 2).map_err(e)?;
    let probe = tau
        .periodicity_probe(tau.default_probe_bound())
        .map_err(e)?;
    ensure(probe.is_periodic(), || format!("probe: {probe:?}"))?;
    Ok(format!("rejected; probe {probe:?}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Thue–Morse table reproduction", table_one),
        ("synchronization delays", sync_delays),
        ("cardinality |W(L_n)| = |L_n|", cardinality),
        ("ex42 first differences", ex42_deltas),
        ("recurrence soundness", recurrence),
        ("generalized Thue–Morse closed forms", gtm_closed_forms),
        ("winning witnesses", witnesses),
        ("property suites", property_suites),
        ("periodicity guard", periodicity_guard),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
