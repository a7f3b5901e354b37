//! The `rklat` command line.
//!
//! Exit status: 0 on success (unrefuted, proof found or checked), 1 on a negative
//! answer (refuted, check failed, no proof found), 2 on usage, parse and file errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rklat_core::rewrite::{check, parse_script, print_script, search_with, SearchConfig, Statement};
use rklat_core::semantics::{equiv_bounded, gen_interpretations, leq_bounded, CounterExample};
use rklat_core::syntax::{parse_top, ParseError};
use rklat_core::transform::{
    comb, interone, interone_sum, nf, phi_top_over, positive, reduce, reduce_to_onefree, top_free_vars, up, Obligation,
    TestSet,
};
use rklat_core::{eval, parse, Direction, Expr, GrammarFamily, Interpretation, OracleConfig, Verdict, VarId};

#[derive(Parser, Debug)]
#[command(name = "rklat", version, about = "Reversible Kleene lattice expressions: semantics, proofs and normal forms")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Seed for generated interpretations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Longest word considered.
    #[arg(long, global = true, default_value_t = 6)]
    bound: usize,
    /// Number of letters in generated interpretations.
    #[arg(long, global = true, default_value_t = 2)]
    alphabet: usize,
    /// Words per variable in random interpretations.
    #[arg(long, global = true, default_value_t = 4)]
    words_per_var: usize,
    /// Random interpretations tried after the exhaustive tier.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Never map a variable to a language containing the empty word.
    #[arg(long, global = true)]
    eps_free: bool,
    /// Bound multiplier for constructions that need longer words.
    #[arg(long, global = true, default_value_t = 3)]
    slack: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Lines)]
    format: Format,
    /// Interpretation file; replaces generated interpretations.
    #[arg(long, global = true)]
    interp: Option<String>,
    /// Grammar family every input expression must belong to.
    #[arg(long, global = true)]
    family: Option<GrammarFamily>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Lines,
    JsonLike,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print an expression with its grammar family.
    Parse { expr: String },
    /// Evaluate an expression under an interpretation.
    Eval { expr: String },
    /// Look for an interpretation separating two expressions.
    CheckEquiv { lhs: String, rhs: String },
    /// Look for a word of the left language missing from the right one.
    Refute { lhs: String, rhs: String },
    /// Normal form: a sum of tests and tests times one-free expressions.
    Nf { expr: String },
    /// The tests `C` with `1 & e == sum <C>`.
    Tests { expr: String },
    /// Search for a derivation of `e == f` or `e <= f`.
    Derive {
        statement: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 40)]
        size_cap: usize,
    },
    /// Check a derivation script against a statement (default: the script's header).
    CheckProof { file: String, statement: Option<String> },
    /// Push mirror image down to variables and lift to directed variables.
    MirrorElim { expr: String },
    /// Replace each variable `a` of the set by `1 + a`.
    Reduce {
        /// Comma-separated variables, optionally in braces: `{x,y}`.
        vars: String,
        expr: String,
    },
    /// The one-free part `[f]` of an expression.
    Positive { expr: String },
    /// Reduce `e <= f` to test and one-free obligations.
    Pipeline { lhs: String, rhs: String },
    /// Eliminate the full-language constant `#`; with two expressions, also compare them.
    TopElim { lhs: String, rhs: Option<String> },
}

#[derive(Debug)]
struct Report {
    lines: Vec<String>,
    json: Value,
    status: i32,
}

impl Report {
    fn ok(lines: Vec<String>, json: Value) -> Report {
        Report { lines, json, status: 0 }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl From<ParseError> for UsageError {
    fn from(e: ParseError) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Report, UsageError>;

/// Runs the command line on `argv` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(r) => {
            let _ = match cli.opts.format {
                Format::Lines => r.lines.iter().try_for_each(|l| writeln!(out, "{l}")),
                Format::JsonLike => writeln!(out, "{}", serde_json::to_string_pretty(&r.json).unwrap()),
            };
            r.status
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn oracle_config(o: &GlobalOpts) -> Result<OracleConfig, UsageError> {
    for (name, v) in [("bound", o.bound), ("alphabet", o.alphabet), ("words-per-var", o.words_per_var), ("slack", o.slack)] {
        if v == 0 {
            return Err(UsageError(format!("--{name} must be positive")));
        }
    }
    if o.alphabet > 26 {
        return Err(UsageError("--alphabet is at most 26".into()));
    }
    Ok(OracleConfig {
        alphabet_size: o.alphabet,
        bound: o.bound,
        words_per_var: o.words_per_var,
        trials: o.trials,
        seed: o.seed,
        eps_free: o.eps_free,
        slack: o.slack,
        ..OracleConfig::default()
    })
}

fn expr(text: &str, o: &GlobalOpts, required: GrammarFamily) -> Result<Expr, UsageError> {
    let e = parse(text)?;
    let fam = e.family();
    for g in [Some(required), o.family].into_iter().flatten() {
        if !fam.within(g) {
            return Err(UsageError(format!("`{e}` is {fam}, expected {g}")));
        }
    }
    Ok(e)
}

fn read_file(path: &str) -> Result<String, UsageError> {
    std::fs::read_to_string(path)
        .or_else(|e| shipped_proof(path).map(str::to_string).ok_or(e))
        .map_err(|e| UsageError(format!("{path}: {e}")))
}

macro_rules! shipped {
    ($($name:literal),*) => {
        &[$(($name, include_str!(concat!("../../core/proofs/", $name)))),*]
    };
}

const SHIPPED: &[(&str, &str)] = shipped!(
    "table2/eq7.prf",
    "table2/eq8.prf",
    "table2/eq9.prf",
    "table2/eq10.prf",
    "table2/eq11.prf",
    "table2/eq12.prf",
    "table2/eq13.prf",
    "table2/eq14.prf",
    "table2/eq15.prf",
    "table2/eq16.prf",
    "tests/test-commute.prf",
    "tests/test-conv.prf",
    "tests/test-idem.prf",
    "tests/test-meet-prod.prf",
    "tests/test-meet.prf",
    "tests/test-plus.prf",
    "tests/test-prod.prf",
    "tests/test-sub-id.prf",
    "tests/test-var.prf"
);

/// Scripts bundled with the binary, looked up when a path does not exist on disk.
fn shipped_proof(path: &str) -> Option<&'static str> {
    let p = Path::new(path);
    SHIPPED.iter().find(|(name, _)| p.ends_with(name)).map(|(_, text)| *text)
}

fn interpretation(o: &GlobalOpts) -> Result<Option<Interpretation>, UsageError> {
    match &o.interp {
        None => Ok(None),
        Some(path) => {
            let text = read_file(path)?;
            Interpretation::parse(&text).map(Some).map_err(|e| UsageError(format!("{path}: {e}")))
        }
    }
}

fn eval_or_usage(e: &Expr, s: &Interpretation) -> Result<rklat_core::Language, UsageError> {
    eval(e, s).map_err(|er| UsageError(er.to_string()))
}

fn counterexample_json(c: &CounterExample) -> Value {
    let sigma: serde_json::Map<String, Value> =
        c.sigma.bindings().iter().map(|(v, l)| (v.to_string(), json!(l.to_string()))).collect();
    json!({ "witness": c.witness.to_string(), "interpretation": sigma, "bound": c.sigma.bound() })
}

fn verdict_report(v: Verdict, what: &str) -> Report {
    match v {
        Verdict::Unrefuted { checked } => Report::ok(
            vec![format!("UNREFUTED {what} ({checked} interpretations)")],
            json!({ "verdict": "unrefuted", "statement": what, "checked": checked }),
        ),
        Verdict::Refuted(c) => Report {
            lines: vec![format!("REFUTED {what}"), c.to_string()],
            json: json!({ "verdict": "refuted", "statement": what, "counterexample": counterexample_json(&c) }),
            status: 1,
        },
    }
}

/// Compares two expressions under a single given interpretation.
fn compare_under(e: &Expr, f: &Expr, s: &Interpretation, equiv: bool) -> CmdResult {
    let (l, r) = (eval_or_usage(e, s)?, eval_or_usage(f, s)?);
    let missing = l.difference(&r);
    let extra = if equiv { r.difference(&l) } else { rklat_core::Language::empty() };
    let rel = if equiv { "==" } else { "<=" };
    let what = format!("{e} {rel} {f}");
    let witness = missing.iter().next().or_else(|| extra.iter().next());
    Ok(match witness {
        None => Report::ok(vec![format!("HOLDS {what} under the given interpretation")], json!({ "verdict": "holds", "statement": what })),
        Some(w) => Report {
            lines: vec![format!("REFUTED {what}"), format!("witness {w}: left {l}, right {r}")],
            json: json!({ "verdict": "refuted", "statement": what, "witness": w.to_string(), "left": l.to_string(), "right": r.to_string() }),
            status: 1,
        },
    })
}

fn parse_test_set(text: &str) -> Result<TestSet, UsageError> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match VarId::new(s) {
            Ok(v) if !v.is_reserved() => Ok(v),
            _ => Err(UsageError(format!("invalid variable `{s}` in test set"))),
        })
        .collect()
}

fn obligation_json(o: &Obligation) -> Value {
    match o {
        Obligation::Test { test, rhs, holds } => {
            json!({ "kind": "test", "test": test.to_string(), "rhs": rhs.to_string(), "decided": holds })
        }
        Obligation::OneFree { lhs, rhs, verdict } => {
            let v = match verdict {
                Verdict::Unrefuted { checked } => json!({ "verdict": "unrefuted", "checked": checked }),
                Verdict::Refuted(c) => json!({ "verdict": "refuted", "counterexample": counterexample_json(c) }),
            };
            json!({ "kind": "one-free", "lhs": lhs.to_string(), "rhs": rhs.to_string(), "oracle": v })
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let o = &cli.opts;
    let full = GrammarFamily::Full;
    match &cli.cmd {
        Command::Parse { expr: t } => {
            let e = expr(t, o, full)?;
            Ok(Report::ok(
                vec![e.to_string(), format!("family: {}", e.family())],
                json!({ "expr": e.to_string(), "family": e.family().name(), "size": e.size() }),
            ))
        }
        Command::Eval { expr: t } => {
            let e = expr(t, o, full)?;
            let sigma = match interpretation(o)? {
                Some(s) => s,
                None => {
                    let cfg = OracleConfig { exhaustive: None, trials: 1, ..oracle_config(o)? };
                    gen_interpretations(&rklat_core::free_vars(&e), &cfg).get(0)
                }
            };
            let l = eval_or_usage(&e, &sigma)?;
            let mut lines: Vec<String> = sigma.to_string().lines().map(str::to_string).collect();
            lines.push(format!("[{e}] = {l}"));
            Ok(Report::ok(lines, json!({ "expr": e.to_string(), "interpretation": sigma.to_string(), "language": l.to_string() })))
        }
        Command::CheckEquiv { lhs, rhs } => {
            let (e, f) = (expr(lhs, o, full)?, expr(rhs, o, full)?);
            match interpretation(o)? {
                Some(s) => compare_under(&e, &f, &s, true),
                None => Ok(verdict_report(equiv_bounded(&e, &f, &oracle_config(o)?), &format!("{e} == {f}"))),
            }
        }
        Command::Refute { lhs, rhs } => {
            let (e, f) = (expr(lhs, o, full)?, expr(rhs, o, full)?);
            match interpretation(o)? {
                Some(s) => compare_under(&e, &f, &s, false),
                None => Ok(verdict_report(leq_bounded(&e, &f, &oracle_config(o)?), &format!("{e} <= {f}"))),
            }
        }
        Command::Nf { expr: t } => {
            let e = expr(t, o, full)?;
            let n = nf(&e).map_err(|er| UsageError(er.to_string()))?;
            let items: Vec<Value> = n
                .items()
                .map(|it| json!({ "test": it.test.to_string(), "body": it.body.as_ref().map(|b| b.to_string()) }))
                .collect();
            Ok(Report::ok(vec![n.to_string()], json!({ "expr": e.to_string(), "items": items })))
        }
        Command::Tests { expr: t } => {
            let e = expr(t, o, full)?;
            let sets: Vec<String> = interone(&e).iter().map(|c| c.to_string()).collect();
            let sum = interone_sum(&e);
            let mut lines = sets.clone();
            lines.push(format!("1 & ({e}) == {sum}"));
            Ok(Report::ok(lines, json!({ "expr": e.to_string(), "tests": sets, "sum": sum.to_string() })))
        }
        Command::Derive { statement, depth, size_cap } => {
            let s = Statement::parse(statement).map_err(|e| UsageError(e.to_string()))?;
            if let Some(g) = o.family {
                if !s.family.within(g) {
                    return Err(UsageError(format!("statement is {}, expected {g}", s.family)));
                }
            }
            let cfg = SearchConfig::new(*depth, *size_cap);
            Ok(match search_with(&s, &cfg) {
                Some(d) => {
                    let script = print_script(&d);
                    let mut lines = vec![format!("; statement: {s}")];
                    lines.extend(script.lines().map(str::to_string));
                    Report::ok(lines, json!({ "statement": s.to_string(), "found": true, "steps": d.steps(), "script": script }))
                }
                None => Report {
                    lines: vec![format!("NOT FOUND {s} within depth {depth}, size cap {size_cap}")],
                    json: json!({ "statement": s.to_string(), "found": false }),
                    status: 1,
                },
            })
        }
        Command::CheckProof { file, statement } => {
            let text = read_file(file)?;
            let header = text.lines().next().and_then(|l| l.strip_prefix("; statement: "));
            let stmt_text = statement.as_deref().or(header).ok_or_else(|| {
                UsageError(format!("{file}: no statement given and no `; statement:` header"))
            })?;
            let s = Statement::parse(stmt_text).map_err(|e| UsageError(e.to_string()))?;
            let d = parse_script(&text).map_err(|e| UsageError(format!("{file}: {e}")))?;
            Ok(match check(&d, &s) {
                Ok(()) => Report::ok(
                    vec![format!("OK {s} ({} steps)", d.steps())],
                    json!({ "statement": s.to_string(), "valid": true, "steps": d.steps() }),
                ),
                Err(e) => Report {
                    lines: vec![format!("FAILED {s}"), e.to_string()],
                    json: json!({ "statement": s.to_string(), "valid": false, "error": e.to_string() }),
                    status: 1,
                },
            })
        }
        Command::MirrorElim { expr: t } => {
            let e = expr(t, o, GrammarFamily::OneFree)?;
            let clean = comb(&e, Direction::Fwd).map_err(|er| UsageError(er.to_string()))?;
            let lifted = up(&clean).map_err(|er| UsageError(er.to_string()))?;
            Ok(Report::ok(
                vec![format!("clean: {clean}"), format!("lifted: {lifted}")],
                json!({ "expr": e.to_string(), "clean": clean.to_string(), "lifted": lifted.to_string() }),
            ))
        }
        Command::Reduce { vars, expr: t } => {
            let a = parse_test_set(vars)?;
            let f = expr(t, o, full)?;
            let r = reduce(&a, &f);
            Ok(Report::ok(vec![r.to_string()], json!({ "test": a.to_string(), "expr": f.to_string(), "reduced": r.to_string() })))
        }
        Command::Positive { expr: t } => {
            let f = expr(t, o, full)?;
            let pf = positive(&f).map_err(|er| UsageError(er.to_string()))?;
            Ok(Report::ok(vec![pf.to_string()], json!({ "expr": f.to_string(), "positive": pf.to_string() })))
        }
        Command::Pipeline { lhs, rhs } => {
            let (e, f) = (expr(lhs, o, full)?, expr(rhs, o, full)?);
            let obs = reduce_to_onefree(&e, &f, &oracle_config(o)?).map_err(|er| UsageError(er.to_string()))?;
            let holds = obs.iter().all(Obligation::holds);
            Ok(Report {
                lines: obs.iter().map(|ob| ob.to_string()).collect(),
                json: json!({ "lhs": e.to_string(), "rhs": f.to_string(), "obligations": obs.iter().map(obligation_json).collect::<Vec<_>>() }),
                status: if holds { 0 } else { 1 },
            })
        }
        Command::TopElim { lhs, rhs } => {
            let l = parse_top(lhs)?;
            let r = rhs.as_deref().map(parse_top).transpose()?;
            let mut x: BTreeSet<VarId> = top_free_vars(&l);
            if let Some(r) = &r {
                x.extend(top_free_vars(r));
            }
            let pl = phi_top_over(&l, &x);
            if let Some(g) = o.family {
                if !pl.family().within(g) {
                    return Err(UsageError(format!("`{pl}` is {}, expected {g}", pl.family())));
                }
            }
            match r {
                None => Ok(Report::ok(vec![pl.to_string()], json!({ "expr": lhs, "translated": pl.to_string() }))),
                Some(r) => {
                    let pr = phi_top_over(&r, &x);
                    let mut rep = verdict_report(leq_bounded(&pl, &pr, &oracle_config(o)?), &format!("{lhs} <= {}", rhs.as_ref().unwrap()));
                    rep.lines.splice(0..0, [pl.to_string(), pr.to_string()]);
                    rep.json["translated"] = json!([pl.to_string(), pr.to_string()]);
                    Ok(rep)
                }
            }
        }
    }
}
