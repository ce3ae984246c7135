use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use winshift_core::complexity::{
    big_k, complexity_table, delta_decompose, delta_direct, delta_recurrence, ComplexityTable,
    TableMethod,
};
use winshift_core::recognizability::{default_cap, sync_delay};
use winshift_core::table::compress_diamond;
use winshift_core::verify::verify;
use winshift_core::{
    gtm, ChoiceSequence, Error, GtmParams, MemberOutcome, Method, Solver, Substitution, WinShift,
    Word,
};

use crate::source::{load, Source};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(Error),
    /// Carries the rendered report.
    #[error("verification failed")]
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => CliError::Usage(msg),
            e => CliError::Domain(e),
        }
    }
}

type Out = Result<String, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "winshift",
    version,
    about = "Winning shifts of the word game on substitution subshifts"
)]
pub struct Cli {
    /// Search cap for the synchronization delay.
    #[arg(long, global = true, env = "WINSHIFT_SYNC_CAP")]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Subst {
    /// Built-in name (tm, ex42, ex46, gtm:b,m) or path to a JSON substitution.
    #[arg(long)]
    subst: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the derived properties of a substitution.
    Classify {
        #[command(flatten)]
        s: Subst,
        /// Write the substitution as JSON to this path (`-` for stdout).
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Prefix of the fixed point starting with a letter.
    Fixedpoint {
        #[command(flatten)]
        s: Subst,
        #[arg(long, default_value_t = 0)]
        letter: u8,
        #[arg(long)]
        length: usize,
    },
    /// Factors of a given length.
    Language {
        #[command(flatten)]
        s: Subst,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Synchronization delay with its minimality witness.
    Syncdelay {
        #[command(flatten)]
        s: Subst,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Solve the game on the language of one length.
    Winset {
        #[command(flatten)]
        s: Subst,
        #[arg(long)]
        length: usize,
        /// Decide one choice sequence and extract the strategy.
        #[arg(long)]
        choice_seq: Option<ChoiceSequence>,
        /// Write the winning strategy for `--choice-seq` in DOT.
        #[arg(long, requires = "choice_seq")]
        export_dot: Option<PathBuf>,
        /// List every member when the language has at most this many words.
        #[arg(long, default_value_t = 16)]
        expansion_threshold: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Irreducible choice sequences of the winning shift.
    Winshift {
        #[command(flatten)]
        s: Subst,
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, default_value = "auto")]
        method: Method,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// First difference Δ(n) of the complexity.
    Delta {
        #[command(flatten)]
        s: Subst,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value = "auto")]
        method: TableMethod,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Factor complexity f(n) for n = 0..=upto.
    Complexity {
        #[command(flatten)]
        s: Subst,
        #[arg(long)]
        upto: usize,
        #[arg(long, default_value = "auto")]
        method: TableMethod,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Closed forms for the generalized Thue–Morse word t_{b,m}.
    Gtm {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        m: usize,
        /// Cross-check against the generic pipeline.
        #[arg(long, global = true)]
        verify: bool,
        #[command(subcommand)]
        command: GtmCommand,
    },
    /// Run every applicable cross-check.
    Verify {
        #[command(flatten)]
        s: Subst,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Lengths {
    #[arg(long)]
    length: Option<usize>,
    /// Lengths `N` (meaning 1..N) or `A..B`.
    #[arg(long)]
    table: Option<String>,
}

impl Lengths {
    fn range(&self) -> Result<(RangeInclusive<usize>, bool), CliError> {
        if let Some(n) = self.length {
            return Ok((n..=n, false));
        }
        let spec = self.table.as_deref().unwrap_or_default();
        let bad = || CliError::Usage(format!("--table expects N or A..B, got {spec:?}"));
        let (lo, hi) = match spec.split_once("..") {
            Some((a, b)) => (
                a.parse().map_err(|_| bad())?,
                b.trim_start_matches('=').parse().map_err(|_| bad())?,
            ),
            None => (1, spec.parse().map_err(|_| bad())?),
        };
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi, true))
    }
}

#[derive(Debug, Subcommand)]
enum GtmCommand {
    /// Prefix of t_{b,m}.
    Word {
        #[arg(long)]
        length: usize,
    },
    /// Factors of length 2 or 3.
    Factors {
        #[arg(long)]
        length: usize,
    },
    Syncdelay,
    Winshift {
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    Delta {
        #[arg(long)]
        length: usize,
    },
    Complexity {
        #[arg(long)]
        upto: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn allow(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let name = format
            .to_possible_value()
            .map(|v| v.get_name().to_owned())
            .unwrap_or_default();
        Err(CliError::Usage(format!(
            "{command} does not support --format {name}"
        )))
    }
}

fn pretty(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n"
}

pub fn run(cli: Cli) -> Out {
    let cap = cli.cap;
    match cli.command {
        Command::Classify { s, emit, format } => classify(&load(&s.subst)?.tau, emit, format),
        Command::Fixedpoint { s, letter, length } => {
            let tau = load(&s.subst)?.tau;
            Ok(tau
                .fixed_point_prefix(letter, length)?
                .render(tau.alphabet())
                + "\n")
        }
        Command::Language { s, length, format } => language(&load(&s.subst)?.tau, length, format),
        Command::Syncdelay { s, format } => syncdelay(&load(&s.subst)?.tau, cap, format),
        Command::Winset {
            s,
            length,
            choice_seq,
            export_dot,
            expansion_threshold,
            format,
        } => {
            let tau = load(&s.subst)?.tau;
            winset(
                &tau,
                length,
                choice_seq,
                export_dot,
                expansion_threshold,
                format,
            )
        }
        Command::Winshift {
            s,
            lengths,
            method,
            format,
        } => {
            let ws = winshift(load(&s.subst)?.tau, cap)?;
            let (range, table) = lengths.range()?;
            let rows = range
                .map(|n| Ok((n, ws.enumerate(n, method)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            render_irreducibles(&rows, ws.substitution().alphabet().size(), table, format)
        }
        Command::Delta {
            s,
            length,
            method,
            format,
        } => delta(winshift(load(&s.subst)?.tau, cap)?, length, method, format),
        Command::Complexity {
            s,
            upto,
            method,
            format,
        } => {
            allow(
                format,
                &[Format::Text, Format::Csv, Format::Json],
                "complexity",
            )?;
            let ws = winshift(load(&s.subst)?.tau, cap)?;
            Ok(render_table(&complexity_table(&ws, upto, method)?, format))
        }
        Command::Gtm {
            b,
            m,
            verify,
            command,
        } => run_gtm(GtmParams::new(b, m)?, verify, command),
        Command::Verify { s, depth, format } => {
            allow(format, &[Format::Text, Format::Json], "verify")?;
            let Source { tau, gtm } = load(&s.subst)?;
            let report = verify(&tau, gtm, depth);
            let text = match format {
                Format::Json => pretty(serde_json::to_value(&report).expect("report serializes")),
                _ => report.render_text(),
            };
            if report.passed() {
                Ok(text)
            } else {
                Err(CliError::Verification(text))
            }
        }
    }
}

fn winshift(tau: Substitution, cap: Option<usize>) -> Result<WinShift, CliError> {
    Ok(match cap {
        Some(c) => WinShift::with_cap(tau, c)?,
        None => WinShift::new(tau)?,
    })
}

fn classify(tau: &Substitution, emit: Option<PathBuf>, format: Format) -> Out {
    allow(format, &[Format::Text, Format::Json], "classify")?;
    let file = serde_json::to_string(&tau.to_file()).expect("substitution serializes") + "\n";
    if let Some(path) = &emit {
        if path.as_os_str() == "-" {
            return Ok(file);
        }
        std::fs::write(path, &file)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let c = tau.classification();
    if format == Format::Json {
        return Ok(pretty(
            json!({ "substitution": tau.to_file(), "classification": c }),
        ));
    }
    let a = tau.alphabet();
    let mut out = String::new();
    if let Some(name) = tau.name() {
        let _ = writeln!(out, "name: {name}");
    }
    let _ = writeln!(out, "alphabet: {}", a.size());
    for (l, img) in tau.images().iter().enumerate() {
        let _ = writeln!(out, "  {l} -> {}", img.render(a));
    }
    match c.uniform_length {
        Some(m) => {
            let _ = writeln!(out, "uniform length: {m}");
        }
        None => out.push_str("uniform length: none\n"),
    }
    for (flag, value) in [
        ("left-marked", c.left_marked),
        ("right-marked", c.right_marked),
        ("marked", c.marked),
        ("permutive", c.permutive),
        ("primitive", c.primitive),
    ] {
        let _ = writeln!(out, "{flag}: {value}");
    }
    Ok(out)
}

fn language(tau: &Substitution, n: usize, format: Format) -> Out {
    allow(format, &[Format::Text, Format::Json], "language")?;
    let lang = tau.language(n)?;
    let words: Vec<String> = lang.iter().map(|w| w.render(tau.alphabet())).collect();
    Ok(match format {
        Format::Json => pretty(json!({ "length": n, "count": words.len(), "words": words })),
        _ => format!("|L_{n}| = {}\n{}", words.len(), lines(&words)),
    })
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

fn syncdelay(tau: &Substitution, cap: Option<usize>, format: Format) -> Out {
    allow(format, &[Format::Text, Format::Json], "syncdelay")?;
    let m = tau.require_uniform("synchronization delay")?;
    let d = sync_delay(tau, cap.unwrap_or_else(|| default_cap(m)))?;
    let witness = d.witness.render(tau.alphabet());
    Ok(match format {
        Format::Json => pretty(
            json!({ "L": d.delay, "witness": witness, "offsets_of_witness": d.witness_offsets }),
        ),
        _ => {
            let offsets: Vec<String> = d.witness_offsets.iter().map(usize::to_string).collect();
            let shown = if witness.is_empty() { "ε" } else { &witness };
            format!(
                "L = {}\nwitness: {shown} (offsets {})\n",
                d.delay,
                offsets.join(", ")
            )
        }
    })
}

fn winset(
    tau: &Substitution,
    n: usize,
    alpha: Option<ChoiceSequence>,
    dot: Option<PathBuf>,
    threshold: usize,
    format: Format,
) -> Out {
    allow(format, &[Format::Text, Format::Json], "winset")?;
    let a = tau.alphabet();
    let x = tau.language(n)?.words;
    let mut solver = Solver::new(a).with_expansion_threshold(threshold);
    let w = solver.winning_set(&x)?;
    let maximal: Vec<String> = w.maximal.iter().map(|s| s.render(a)).collect();
    let members: Option<Vec<String>> = w
        .expansion
        .as_ref()
        .map(|e| e.iter().map(|s| s.render(a)).collect());

    let query = match &alpha {
        None => None,
        Some(alpha) => {
            if alpha.len() != n {
                return Err(CliError::Usage(format!(
                    "--choice-seq {alpha} has length {}, not {n}",
                    alpha.len()
                )));
            }
            let outcome = solver.member(&x, alpha)?;
            if let (Some(path), MemberOutcome::Win(s)) = (&dot, &outcome) {
                std::fs::write(path, s.to_dot(a)).map_err(|e| {
                    CliError::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Some((alpha.render(a), outcome))
        }
    };

    if format == Format::Json {
        let mut v = json!({
            "length": n,
            "language_size": x.len(),
            "maximal": maximal,
            "cardinality": w.cardinality(),
        });
        if let Some(m) = members {
            v["members"] = json!(m);
        }
        if let Some((seq, outcome)) = &query {
            v["query"] = match outcome {
                MemberOutcome::Win(s) => json!({
                    "choice_seq": seq,
                    "wins": true,
                    "plays": s.plays().iter().map(|p| p.render(a)).collect::<Vec<_>>(),
                    "branch_positions": s.branch_positions()?,
                }),
                MemberOutcome::Lose(_) => json!({ "choice_seq": seq, "wins": false }),
            };
        }
        return Ok(pretty(v));
    }

    let mut out = format!(
        "|L_{n}| = {}\nmaximal: {}\n|W| = {}\n",
        x.len(),
        maximal.join(" "),
        w.cardinality()
    );
    if let Some(m) = members {
        let _ = writeln!(out, "members: {}", m.join(" "));
    }
    if let Some((seq, outcome)) = query {
        match outcome {
            MemberOutcome::Win(s) => {
                let plays: Vec<String> = s.plays().iter().map(|p| p.render(a)).collect();
                let _ = writeln!(out, "{seq}: win");
                let _ = writeln!(out, "plays: {}", plays.join(" "));
                if let Some(path) = dot {
                    let _ = writeln!(out, "strategy written to {}", path.display());
                }
            }
            MemberOutcome::Lose(_) => {
                let _ = writeln!(out, "{seq}: lose");
            }
        }
    }
    Ok(out)
}

fn render_irreducibles(
    rows: &[(usize, BTreeSet<ChoiceSequence>)],
    size: usize,
    table: bool,
    format: Format,
) -> Out {
    let show = |s: &BTreeSet<ChoiceSequence>| -> Vec<String> {
        s.iter().map(ChoiceSequence::to_string).collect()
    };
    Ok(match format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(n, s)| json!({ "length": n, "irreducible": show(s), "count": s.len() }))
                .collect();
            pretty(if table {
                Value::Array(items)
            } else {
                items.into_iter().next().unwrap_or(Value::Null)
            })
        }
        Format::Csv => {
            let mut out = String::from("length,sequence\n");
            for (n, s) in rows {
                for a in show(s) {
                    let _ = writeln!(out, "{n},\"{a}\"");
                }
            }
            out
        }
        Format::Text if table => rows
            .iter()
            .map(|(n, s)| {
                format!("{n} {}\n", compress_diamond(s, size).join(" ")).replace(" \n", "\n")
            })
            .collect(),
        Format::Text => rows
            .iter()
            .flat_map(|(_, s)| compress_diamond(s, size))
            .map(|r| r + "\n")
            .collect(),
    })
}

fn delta(ws: WinShift, n: usize, method: TableMethod, format: Format) -> Out {
    allow(format, &[Format::Text, Format::Json], "delta")?;
    let tau = ws.substitution();
    let recurrence = match method {
        TableMethod::Direct => false,
        TableMethod::Recurrence => true,
        TableMethod::Auto => tau.is_marked(),
    };
    let m = ws.image_length();
    let k = big_k(ws.delay(), m);
    let (value, via) = if recurrence {
        (
            delta_recurrence(&ws, n)?,
            if n <= m * k + 1 {
                "direct"
            } else {
                "recurrence"
            },
        )
    } else {
        (delta_direct(tau, n)?, "direct")
    };
    let dec = (via == "recurrence")
        .then(|| delta_decompose(n, m, k))
        .transpose()?;
    Ok(match format {
        Format::Json => {
            pretty(json!({ "n": n, "delta": value, "method": via, "decomposition": dec }))
        }
        _ => {
            let mut out = format!("Δ({n}) = {value} ({via})\n");
            if let Some(d) = dec {
                let _ = writeln!(
                    out,
                    "n = {m}^{}·{} + {} + 1, Δ({n}) = Δ({})",
                    d.k,
                    d.r,
                    d.l,
                    d.r + 2
                );
            }
            out
        }
    })
}

fn render_table(t: &ComplexityTable, format: Format) -> String {
    match format {
        Format::Json => {
            let rows: Vec<Value> = (0..=t.upto)
                .map(|n| json!({ "n": n, "delta": t.delta[n], "f": t.f[n], "method": t.method[n] }))
                .collect();
            pretty(Value::Array(rows))
        }
        Format::Csv => {
            let mut out = String::from("n,delta,f,method\n");
            for n in 0..=t.upto {
                let _ = writeln!(out, "{n},{},{},{}", t.delta[n], t.f[n], t.method[n]);
            }
            out
        }
        Format::Text => (0..=t.upto)
            .map(|n| format!("n={n}, f={}\n", t.f[n]))
            .collect(),
    }
}

fn mismatch(what: &str, closed: impl std::fmt::Debug, generic: impl std::fmt::Debug) -> CliError {
    CliError::Verification(format!(
        "{what}: closed form {closed:?}, generic {generic:?}\n"
    ))
}

fn run_gtm(p: GtmParams, check: bool, command: GtmCommand) -> Out {
    let tau = p.substitution();
    let a = tau.alphabet();
    match command {
        GtmCommand::Word { length } => {
            let w = Word::new(
                (0..length as u64)
                    .map(|n| gtm::gtm_letter(p.b, p.m, n))
                    .collect(),
            );
            if check {
                let fixed = tau.fixed_point_prefix(0, length)?;
                if fixed != w {
                    return Err(mismatch("prefix", w.render(a), fixed.render(a)));
                }
            }
            Ok(w.render(a) + "\n")
        }
        GtmCommand::Factors { length } => {
            let f = p.factors(length)?;
            if check && f != tau.language(length)?.words {
                return Err(mismatch("factors", f.len(), tau.language(length)?.len()));
            }
            Ok(lines(&f.iter().map(|w| w.render(a)).collect::<Vec<_>>()))
        }
        GtmCommand::Syncdelay => {
            if check {
                let generic = sync_delay(&tau, 4 * p.b)?.delay;
                if generic != p.sync_delay() {
                    return Err(mismatch("L", p.sync_delay(), generic));
                }
            }
            Ok(format!("L = {}\n", p.sync_delay()))
        }
        GtmCommand::Winshift { lengths, format } => {
            let (range, table) = lengths.range()?;
            let rows: Vec<_> = range.map(|n| (n, p.irreducibles(n))).collect();
            if check {
                let ws = WinShift::new(tau.clone())?;
                for (n, closed) in &rows {
                    let generic = ws.enumerate(*n, Method::Auto)?;
                    if &generic != closed {
                        return Err(mismatch(&format!("irreducibles at n={n}"), closed, generic));
                    }
                }
            }
            render_irreducibles(&rows, p.m, table, format)
        }
        GtmCommand::Delta { length } => {
            let d = p.delta(length)?;
            if check && d != delta_direct(&tau, length)? {
                return Err(mismatch(
                    &format!("Δ({length})"),
                    d,
                    delta_direct(&tau, length)?,
                ));
            }
            Ok(format!("Δ({length}) = {d}\n"))
        }
        GtmCommand::Complexity { upto, format } => {
            allow(
                format,
                &[Format::Text, Format::Csv, Format::Json],
                "complexity",
            )?;
            let t = p.complexity_table(upto)?;
            if check {
                for n in 0..=upto {
                    let generic = tau.language(n)?.len();
                    if generic != t.f[n] {
                        return Err(mismatch(&format!("f({n})"), t.f[n], generic));
                    }
                }
            }
            Ok(render_table(&t, format))
        }
    }
}
