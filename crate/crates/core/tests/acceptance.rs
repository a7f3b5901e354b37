//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if
//! any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rklat_core::gen::{random_expr, GenConfig};
use rklat_core::rewrite::library::tests_leq;
use rklat_core::rewrite::{check, parse_script, search, AxiomId, Statement};
use rklat_core::semantics::{
    equiv_bounded, gen_interpretations, leq_bounded, refute_implication, sigma_a, InterpretationStream,
};
use rklat_core::syntax::parse_top;
use rklat_core::transform::*;
use rklat_core::{eval, free_vars, parse, Direction, Expr, GrammarFamily, Interpretation, Language, OracleConfig, Verdict, VarId, Word};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: summary }
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        Outcome { pass: false, detail: format!("{summary}; {} failure(s), first: {}", failures.len(), shown.join(" | ")) }
    }
}

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

fn vars(names: &[&str]) -> BTreeSet<VarId> {
    names.iter().map(|n| VarId::named(n)).collect()
}

/// Plain random interpretations, no exhaustive tier.
fn sampled(x: &BTreeSet<VarId>, trials: usize, bound: usize, seed: u64, eps_free: bool) -> InterpretationStream {
    let cfg = OracleConfig { trials, bound, seed, eps_free, exhaustive: None, ..OracleConfig::default() };
    gen_interpretations(x, &cfg)
}

fn criterion_axioms() -> Outcome {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let mut failures = Vec::new();
    let mut checked = 0;
    for &ax in AxiomId::ALL {
        let s = ax.schema();
        let verdict = match &s.premise {
            None => equiv_bounded(&s.lhs, &s.rhs, &cfg),
            Some((p1, p2)) => refute_implication((p1, p2), (&s.lhs, &s.rhs), &cfg),
        };
        match verdict {
            Verdict::Unrefuted { checked: n } => checked += n,
            Verdict::Refuted(c) => failures.push(format!("{} refuted by witness {}", ax.name(), c.witness)),
        }
    }
    let mutant = (p("(e . f)'"), p("e' . f'"));
    let exhaustive_only = OracleConfig { trials: 0, ..OracleConfig::default() };
    match equiv_bounded(&mutant.0, &mutant.1, &exhaustive_only) {
        Verdict::Refuted(c) => {
            if !c.recheck() {
                failures.push("mutant counterexample does not recheck".into());
            }
        }
        Verdict::Unrefuted { .. } => failures.push("flipped conv-seq not refuted by the exhaustive tier".into()),
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("took {elapsed:?}"));
    }
    outcome(
        &failures,
        format!(
            "{} stored equations unrefuted over {checked} interpretations, flipped conv-seq refuted, {:.1}s",
            AxiomId::ALL.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_table2() -> Outcome {
    let mut failures = Vec::new();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("proofs/table2");
    let mut scripts = 0;
    for n in 7..=16 {
        let path = dir.join(format!("eq{n}.prf"));
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("{}: {e}", path.display()));
                continue;
            }
        };
        let header = text.lines().next().and_then(|l| l.strip_prefix("; statement: "));
        let Some(stmt) = header.and_then(|h| Statement::parse(h).ok()) else {
            failures.push(format!("eq{n}: missing statement header"));
            continue;
        };
        match parse_script(&text) {
            Ok(d) => match check(&d, &stmt) {
                Ok(()) => scripts += 1,
                Err(e) => failures.push(format!("eq{n}: {e}")),
            },
            Err(e) => failures.push(format!("eq{n}: {e}")),
        }
    }
    let mut found = Vec::new();
    for goal in ["e + e == e", "0' == 0", "1' == 1", "0^+ == 0", "1^+ == 1"] {
        let s = Statement::parse(goal).unwrap();
        match search(&s, 6, 40) {
            Some(d) if check(&d, &s).is_ok() => found.push(format!("{goal} ({} steps)", d.steps())),
            Some(_) => failures.push(format!("search returned an unchecked derivation for {goal}")),
            None => failures.push(format!("search did not find {goal}")),
        }
    }
    outcome(&failures, format!("{scripts}/10 scripts check; search found {}", found.join(", ")))
}

fn criterion_mirror() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xyz = vars(&["x", "y", "z"]);
    let gen = GenConfig::new(&["x", "y", "z"], 10, GrammarFamily::OneFree);
    let sigmas: Vec<Interpretation> = sampled(&xyz, 8, 4, 31, false).iter().collect();
    for i in 0..500 {
        let e = random_expr(&mut rng, &gen);
        let (fwd, bwd) = (comb(&e, Direction::Fwd).unwrap(), comb(&e, Direction::Bwd).unwrap());
        if !is_clean(&fwd) || !is_clean(&bwd) {
            failures.push(format!("comb of {e} is not clean"));
        }
        for s in &sigmas {
            let l = eval(&e, s).unwrap();
            if eval(&fwd, s).unwrap() != l || eval(&bwd, s).unwrap() != l.mirror() {
                failures.push(format!("comb #{i} of {e} changes the language under\n{s}"));
                break;
            }
        }
    }
    let clean_gen = GenConfig::new(&["x", "y", "z"], 10, GrammarFamily::OneFree).clean();
    for _ in 0..500 {
        let e = random_expr(&mut rng, &clean_gen);
        match up(&e).and_then(|u| down(&u)) {
            Ok(d) if d == e => {}
            other => failures.push(format!("down(up({e})) = {other:?}")),
        }
    }
    let directed: BTreeSet<VarId> = ["x", "y"]
        .iter()
        .flat_map(|n| [Direction::Fwd, Direction::Bwd].map(|d| VarId::named(n).directed(d)))
        .collect();
    let clean_xy = GenConfig::new(&["x", "y"], 9, GrammarFamily::OneFree).clean();
    let mut pairs = 0;
    let stream = sampled(&directed, 200, 3, 45, true);
    for sigma in stream.iter() {
        let dbl = build_sigma_dblprime(&sigma).unwrap();
        if dbl.bound() != 2 * sigma.bound() || !dbl.bindings().values().all(|l| l.iter().all(is_valid_word)) {
            failures.push(format!("bad doubled interpretation\n{dbl}"));
        }
        for _ in 0..5 {
            let e = random_expr(&mut rng, &clean_xy);
            let lhs = eval(&up(&e).unwrap(), &sigma).unwrap();
            let rhs = psi(&eval(&e, &dbl).unwrap());
            pairs += 1;
            if lhs != rhs {
                failures.push(format!("eval(up({e})) = {lhs} but psi gives {rhs} under\n{sigma}"));
            }
        }
    }
    outcome(
        &failures,
        format!("500 comb terms x {} interpretations, 500 down/up round trips, {pairs} eps-free lifting checks over {} interpretations", sigmas.len(), stream.len()),
    )
}

fn subsets(x: &[&str]) -> Vec<TestSet> {
    (0..1u32 << x.len())
        .map(|m| TestSet((0..x.len()).filter(|i| m & (1 << i) != 0).map(|i| VarId::named(x[i])).collect()))
        .collect()
}

fn criterion_tests() -> Outcome {
    let mut failures = Vec::new();
    let names = ["a", "b", "c", "d"];
    let x = vars(&names);
    let cfg = OracleConfig::quick();
    let all = subsets(&names);
    let mut pairs = 0;
    for a in &all {
        let sa = sigma_a(a.vars(), &x).unwrap();
        for b in &all {
            pairs += 1;
            let subset = b.is_subset(a);
            let eps = eval(&b.to_expr(), &sa).unwrap().contains_epsilon();
            let derivable = match tests_leq(a, b) {
                Some(l) => {
                    let s = Statement::leq(a.to_expr(), b.to_expr(), GrammarFamily::Full);
                    l.lo() == &a.to_expr() && l.hi() == &b.to_expr() && check(&l.into_proof().into_derivation(), &s).is_ok()
                }
                None => false,
            };
            let semantic = !leq_bounded(&a.to_expr(), &b.to_expr(), &cfg).is_refuted();
            if !(subset == eps && eps == derivable && derivable == semantic) {
                failures.push(format!(
                    "A={a} B={b}: subset {subset}, eps {eps}, derivable {derivable}, contained {semantic}"
                ));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gen = GenConfig::new(&["x", "y", "z"], 10, GrammarFamily::Full);
    for _ in 0..500 {
        let e = random_expr(&mut rng, &gen);
        if let Verdict::Refuted(c) = equiv_bounded(&Expr::inter(Expr::One, e.clone()), &interone_sum(&e), &cfg) {
            failures.push(format!("1 & ({e}) differs from its interone sum on {}", c.witness));
        }
    }
    outcome(&failures, format!("{pairs} test pairs agree four ways, 500 interone sums equal"))
}

fn random_item(rng: &mut ChaCha8Rng, gen: &GenConfig) -> NFItem {
    let test = TestSet(gen.vars.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect());
    if rng.gen_bool(0.3) {
        NFItem::test(test)
    } else {
        NFItem::product(test, random_expr(rng, gen))
    }
}

fn criterion_normal_forms() -> Outcome {
    let mut failures = Vec::new();
    let cfg = OracleConfig::quick();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let full = GenConfig::new(&["x", "y", "z"], 12, GrammarFamily::Full);
    let (mut checked, mut guarded) = (0, 0);
    while checked < 500 && guarded < 5000 {
        let e = random_expr(&mut rng, &full);
        match nf(&e) {
            Ok(n) => {
                checked += 1;
                if n.items().any(|it| it.body.as_ref().is_some_and(|b| b.contains_one())) {
                    failures.push(format!("nf({e}) has a body with 1"));
                }
                if let Verdict::Refuted(c) = equiv_bounded(&e, &n.to_expr(), &cfg) {
                    failures.push(format!("nf({e}) = {n} differs on {}", c.witness));
                }
            }
            Err(NfError::TooManyItems { .. }) => guarded += 1,
        }
    }
    if checked < 500 {
        failures.push(format!("only {checked} expressions fit the iteration guard"));
    }
    let onefree = GenConfig::new(&["x", "y", "z"], 6, GrammarFamily::OneFree);
    for _ in 0..200 {
        let (a, b) = (random_item(&mut rng, &onefree), random_item(&mut rng, &onefree));
        let prod = Expr::prod(a.to_expr(), b.to_expr());
        if let Verdict::Refuted(c) = equiv_bounded(&prod, &odot(&a, &b).to_expr(), &cfg) {
            failures.push(format!("{a} odot {b} differs on {}", c.witness));
        }
        let meet = Expr::inter(a.to_expr(), b.to_expr());
        let ot = Expr::sum_of(otimes(&a, &b).iter().map(NFItem::to_expr));
        if let Verdict::Refuted(c) = equiv_bounded(&meet, &ot, &cfg) {
            failures.push(format!("{a} otimes {b} differs on {}", c.witness));
        }
    }
    let small = GenConfig::new(&["x", "y", "z"], 9, GrammarFamily::Full);
    let names = ["x", "y", "z"];
    let all = subsets(&names);
    let xyz = vars(&names);
    let sigmas: Vec<Interpretation> = sampled(&xyz, 6, 4, 61, true).iter().collect();
    for _ in 0..300 {
        let a = &all[rng.gen_range(0..all.len())];
        let f = random_expr(&mut rng, &small);
        let r = reduce(a, &f);
        if let Verdict::Refuted(c) = leq_bounded(&Expr::prod(a.to_expr(), r.clone()), &f, &cfg) {
            failures.push(format!("<{a}> . reduce({a}, {f}) not below f: {}", c.witness));
        }
        if let Verdict::Refuted(c) = leq_bounded(&f, &r, &cfg) {
            failures.push(format!("{f} not below reduce({a}, {f}): {}", c.witness));
        }
        for s in &sigmas {
            let mut tau = s.clone();
            for v in a.vars() {
                let l = s.get(v).unwrap().union(&Language::epsilon());
                tau = tau.with_binding(v.clone(), l).unwrap();
            }
            if eval(&r, s).unwrap() != eval(&r, &tau).unwrap() {
                failures.push(format!("reduce({a}, {f}) changes when eps is added to A under\n{s}"));
                break;
            }
        }
    }
    let mut positives = 0;
    while positives < 300 {
        let f = random_expr(&mut rng, &small);
        let Ok(pf) = positive(&f) else { continue };
        positives += 1;
        if pf.contains_one() {
            failures.push(format!("[{f}] = {pf} contains 1"));
        }
        if let Verdict::Refuted(c) = leq_bounded(&pf, &f, &cfg) {
            failures.push(format!("[{f}] = {pf} not below f: {}", c.witness));
        }
    }
    outcome(
        &failures,
        format!("{checked} normal forms equal ({guarded} over the guard), 200 item pairs, 300 reduce pairs, {positives} positive parts"),
    )
}

/// All words over `a, b, @` up to length 5 and the least relation closed under the
/// four rules defining the insertion order, computed by fixpoint iteration.
struct RuleClosure {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    rel: Vec<Vec<bool>>,
}

impl RuleClosure {
    fn new(max_len: usize) -> RuleClosure {
        let mut words = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for c in ["a", "b", "@"] {
                    next.push(w.concat(&Word::from(c)));
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let n = words.len();
        let mut rel = vec![vec![false; n]; n];
        for (i, w) in words.iter().enumerate() {
            rel[i][i] = true;
            if let Some(&j) = index.get(&Word::from("@").concat(w)) {
                rel[i][j] = true;
            }
        }
        let mut closure = RuleClosure { words, index, rel };
        closure.saturate();
        closure
    }

    fn part(&self, w: &Word, from: usize, to: usize) -> usize {
        self.index[&Word::from_letters(w.letters()[from..to].iter().copied())]
    }

    fn saturate(&mut self) {
        let n = self.words.len();
        loop {
            let mut changed = false;
            for u in 0..n {
                for v in 0..n {
                    if self.rel[u][v] || self.words[u].len() > self.words[v].len() {
                        continue;
                    }
                    let trans = (0..n).any(|w| self.rel[u][w] && self.rel[w][v]);
                    let (wu, wv) = (&self.words[u], &self.words[v]);
                    let congr = trans
                        || (0..=wu.len()).any(|i| {
                            (0..=wv.len()).any(|j| {
                                self.rel[self.part(wu, 0, i)][self.part(wv, 0, j)]
                                    && self.rel[self.part(wu, i, wu.len())][self.part(wv, j, wv.len())]
                            })
                        });
                    if congr {
                        self.rel[u][v] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn leq(&self, u: &Word, v: &Word) -> Option<bool> {
        Some(self.rel[*self.index.get(u)?][*self.index.get(v)?])
    }
}

fn random_closed(rng: &mut ChaCha8Rng, budget: usize) -> Language {
    let gens: Vec<Word> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let len = rng.gen_range(0..=budget / 2);
            Word::from(&(0..len).map(|_| ['a', 'b', '@'][rng.gen_range(0..3)]).collect::<String>())
        })
        .collect();
    upward_closure(&Language::from_words(gens), budget)
}

fn erase_lang(l: &Language) -> Language {
    l.iter().map(erase).collect()
}

fn criterion_bullets() -> Outcome {
    let mut failures = Vec::new();
    let oracle = RuleClosure::new(5);
    let words = &oracle.words;
    let mut agree = 0;
    for u in words {
        for v in words {
            let leq = word_leq(u, v);
            if Some(leq) != oracle.leq(u, v) {
                failures.push(format!("word_leq({u}, {v}) = {leq} disagrees with the rule closure"));
                continue;
            }
            agree += 1;
            if leq {
                if erase(u) != erase(v) {
                    failures.push(format!("{u} <= {v} with different erasures"));
                }
                if !word_leq(&u.mirror(), &v.mirror()) {
                    failures.push(format!("{u} <= {v} but mirrors are unrelated"));
                }
                for i in 0..=u.len() {
                    let (u1, u2) = (&u.letters()[..i], &u.letters()[i..]);
                    let split = (0..=v.len()).any(|j| {
                        word_leq(&Word::from_letters(u1.iter().copied()), &Word::from_letters(v.letters()[..j].iter().copied()))
                            && word_leq(&Word::from_letters(u2.iter().copied()), &Word::from_letters(v.letters()[j..].iter().copied()))
                    });
                    if !split {
                        failures.push(format!("{u} <= {v} has no matching split at {i}"));
                    }
                }
            }
            if erase(u) == erase(v) {
                let Some(j) = word_join(u, v) else {
                    failures.push(format!("no join for {u} and {v}"));
                    continue;
                };
                if !word_leq(u, &j) || !word_leq(v, &j) {
                    failures.push(format!("join {j} of {u} and {v} is not an upper bound"));
                }
                for w in words {
                    if oracle.leq(u, w) == Some(true) && oracle.leq(v, w) == Some(true) && oracle.leq(&j, w) != Some(true) {
                        failures.push(format!("join {j} of {u} and {v} is not below the upper bound {w}"));
                    }
                }
            } else if word_join(u, v).is_some() {
                failures.push(format!("join of {u} and {v} across erasure classes"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let (l, m) = (random_closed(&mut rng, 6), random_closed(&mut rng, 6));
        if !is_upward_closed(&l, 6) {
            failures.push(format!("{l} is not closed"));
        }
        let lhs = erase_lang(&l.intersection(&m));
        let rhs = erase_lang(&l).intersection(&erase_lang(&m));
        if lhs != rhs {
            failures.push(format!("erase does not distribute over {l} & {m}"));
        }
    }
    outcome(&failures, format!("{agree} word pairs agree with the rule closure over {} words; 200 closed pairs distribute", words.len()))
}

fn criterion_top() -> Outcome {
    let mut failures = Vec::new();
    let cfg = OracleConfig::default();
    let mut lines = Vec::new();
    let cases = [
        ("(e1 . e2) & (f1 . f2)", "e1 . # . f2 + f1 . # . e2", true),
        ("(a . b) & (a . c)", "a . ((# . b) & (# . c))", true),
        ("(e1 . e2) & (f1 . f2)", "e1 . # . f1 + f2 . # . e2", false),
    ];
    for (lhs, rhs, valid) in cases {
        let (l, r) = (parse_top(lhs).unwrap(), parse_top(rhs).unwrap());
        let mut x = top_free_vars(&l);
        x.extend(top_free_vars(&r));
        let (pl, pr) = (phi_top_over(&l, &x), phi_top_over(&r, &x));
        match (leq_bounded(&pl, &pr, &cfg), valid) {
            (Verdict::Unrefuted { checked }, true) => lines.push(format!("{lhs} <= {rhs}: unrefuted over {checked}")),
            (Verdict::Refuted(c), false) => {
                let restricted: BTreeSet<VarId> = free_vars(&pl);
                lines.push(format!(
                    "{lhs} <= {rhs}: refuted, witness {} with {}",
                    c.witness,
                    restricted.iter().filter_map(|v| c.sigma.get(v).map(|l| format!("{v}={l}"))).collect::<Vec<_>>().join(" ")
                ));
            }
            (v, _) => failures.push(format!("{lhs} <= {rhs}: unexpected {v}")),
        }
    }
    outcome(&failures, lines.join("; "))
}

fn criterion_pipeline() -> Outcome {
    let pairs = [
        ("x & 1", "x"),
        ("x", "x + y"),
        ("1 & x", "1"),
        ("(x & 1) . y", "y"),
        ("1 & x . y", "x"),
        ("x^+ . x", "x^+"),
        ("(x . y)'", "y' . x'"),
        ("x", "x''"),
        ("1", "1 + x^+"),
        ("x & y", "x"),
        ("(1 + x) . (1 + y)", "1 + x + y + x . y"),
        ("x' & 1", "x"),
        ("x^+ . x^+", "x^+"),
        ("x", "x & 1"),
        ("1", "x"),
        ("x . y", "y . x"),
        ("x + y", "x"),
        ("x^+", "x"),
        ("(x & 1) . y", "x"),
        ("x'", "x"),
    ];
    let exhaustive_only = OracleConfig { trials: 0, ..OracleConfig::default() };
    let cfg = OracleConfig::default();
    let mut failures = Vec::new();
    let (mut valid_count, mut obligations) = (0, 0);
    for (e, f) in pairs {
        let (e, f) = (p(e), p(f));
        let valid = !leq_bounded(&e, &f, &exhaustive_only).is_refuted();
        valid_count += usize::from(valid);
        let obs = reduce_to_onefree(&e, &f, &cfg).unwrap();
        obligations += obs.len();
        let holds = obs.iter().all(|o| o.holds());
        if holds != valid {
            let text: Vec<String> = obs.iter().map(|o| o.to_string()).collect();
            failures.push(format!("{e} <= {f} valid={valid} but pipeline says {holds}: {}", text.join("; ")));
        }
    }
    outcome(&failures, format!("{} pairs ({valid_count} valid), {obligations} obligations, statuses agree", pairs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("axiom soundness", criterion_axioms),
        ("derived laws", criterion_table2),
        ("mirror elimination", criterion_mirror),
        ("tests", criterion_tests),
        ("normal forms", criterion_normal_forms),
        ("insertion order", criterion_bullets),
        ("top elimination fixtures", criterion_top),
        ("pipeline smoke test", criterion_pipeline),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if filter.as_ref().is_some_and(|f| !name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "criterion {} [PRIMARY] {name}: {} ({:.1}s) {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
