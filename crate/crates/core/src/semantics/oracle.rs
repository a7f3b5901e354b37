//! The bounded semantic oracle: a deterministic stream of interpretations and a
//! search for counterexamples along it.
//!
//! The stream starts with an exhaustive tier (every choice of at most `w` words of
//! length at most `l` over `k` letters for each variable) and continues with seeded
//! random interpretations. The oracle can only refute: a verdict of
//! [`Verdict::Unrefuted`] says that no interpretation in the stream separated the
//! two sides, nothing more.
//!
//! The reserved variable `_top` is not enumerated. It is pinned to the set of all
//! single letters, so that after top elimination its starred sum denotes every word.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bits::{BitUniverse, Bits, Program};
use super::eval::eval;
use super::interp::Interpretation;
use super::word::{Language, Letter, Word};
use crate::syntax::{free_vars, Expr, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TierSpec {
    pub alphabet: usize,
    pub bound: usize,
    pub max_words: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub alphabet_size: usize,
    pub bound: usize,
    pub words_per_var: usize,
    pub trials: usize,
    pub seed: u64,
    /// Never bind a variable to a language containing ε.
    pub eps_free: bool,
    /// Multiplier applied to `bound` where a construction needs longer words.
    pub slack: usize,
    pub exhaustive: Option<TierSpec>,
    /// Largest number of interpretations the exhaustive tier may contain. When the
    /// full tier is larger, the biggest smaller tier that fits is used instead.
    pub exhaustive_cap: u64,
    pub shrink: bool,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig {
            alphabet_size: 2,
            bound: 6,
            words_per_var: 4,
            trials: 200,
            seed: 0,
            eps_free: false,
            slack: 3,
            exhaustive: Some(TierSpec { alphabet: 2, bound: 3, max_words: 2 }),
            exhaustive_cap: 2_000_000,
            shrink: true,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(mut self, seed: u64) -> OracleConfig {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> OracleConfig {
        self.trials = trials;
        self
    }

    pub fn with_eps_free(mut self, eps_free: bool) -> OracleConfig {
        self.eps_free = eps_free;
        self
    }

    pub fn without_exhaustive(mut self) -> OracleConfig {
        self.exhaustive = None;
        self
    }

    /// A cheaper configuration for inner loops of property tests.
    pub fn quick() -> OracleConfig {
        OracleConfig {
            trials: 40,
            exhaustive: Some(TierSpec { alphabet: 2, bound: 2, max_words: 2 }),
            exhaustive_cap: 20_000,
            ..OracleConfig::default()
        }
    }
}

/// The exhaustive parameters actually used for `nvars` variables: the tier with the
/// most per-variable choices among those within `spec` whose total fits the cap.
pub fn exhaustive_tier(spec: TierSpec, nvars: usize, cap: u64, eps_free: bool) -> (TierSpec, usize) {
    let mut best: Option<(TierSpec, usize)> = None;
    for k in 1..=spec.alphabet.max(1) {
        for l in 0..=spec.bound {
            for w in 0..=spec.max_words {
                let t = TierSpec { alphabet: k.min(spec.alphabet), bound: l, max_words: w };
                let n = tier_choices(t, eps_free).len();
                let total = (n as u64).checked_pow(nvars as u32);
                if total.is_none_or(|t| t > cap) {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, m)| n > *m) {
                    best = Some((t, n));
                }
            }
        }
    }
    best.unwrap_or((TierSpec { alphabet: 0, bound: 0, max_words: 0 }, 1))
}

fn words_up_to(letters: &[Letter], bound: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..bound {
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |l| w.concat(&Word::from_letters([*l]))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// All languages of at most `max_words` words of length at most `bound` over the
/// first `alphabet` letters, by size and then lexicographically.
fn tier_choices(t: TierSpec, eps_free: bool) -> Vec<Language> {
    let letters: Vec<Letter> = (0..t.alphabet).map(Letter::nth).collect();
    let words: Vec<Word> =
        words_up_to(&letters, t.bound).into_iter().filter(|w| !(eps_free && w.is_empty())).collect();
    let mut out = Vec::new();
    for size in 0..=t.max_words.min(words.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(Language::from_words(idx.iter().map(|&i| words[i].clone())));
            // next combination
            let mut pos = size;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if idx[pos] < words.len() - size + pos {
                    break;
                }
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if size == 0 || pos == usize::MAX || idx[pos] >= words.len() - size + pos {
                break;
            }
            idx[pos] += 1;
            for j in pos + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// A deterministic, randomly addressable sequence of interpretations.
#[derive(Clone, Debug)]
pub struct InterpretationStream {
    vars: Vec<VarId>,
    top: bool,
    letters: Vec<Letter>,
    bound: usize,
    choices: Vec<Language>,
    exhaustive_len: usize,
    cfg: OracleConfig,
}

/// The stream of interpretations for the variables `x` under `cfg`.
pub fn gen_interpretations(x: &BTreeSet<VarId>, cfg: &OracleConfig) -> InterpretationStream {
    InterpretationStream::new(x, cfg)
}

impl InterpretationStream {
    pub fn new(x: &BTreeSet<VarId>, cfg: &OracleConfig) -> InterpretationStream {
        let top = x.contains(&VarId::top());
        let vars: Vec<VarId> = x.iter().filter(|v| !v.is_reserved()).cloned().collect();
        let (choices, tier_bound, tier_alphabet) = match cfg.exhaustive {
            Some(spec) => {
                let (t, _) = exhaustive_tier(spec, vars.len(), cfg.exhaustive_cap, cfg.eps_free);
                (tier_choices(t, cfg.eps_free), t.bound, t.alphabet)
            }
            None => (Vec::new(), 0, 0),
        };
        let exhaustive_len = if cfg.exhaustive.is_none() { 0 } else { choices.len().pow(vars.len() as u32) };
        let k = cfg.alphabet_size.max(tier_alphabet).max(usize::from(top));
        InterpretationStream {
            vars,
            top,
            letters: (0..k).map(Letter::nth).collect(),
            bound: cfg.bound.max(tier_bound),
            choices,
            exhaustive_len,
            cfg: cfg.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.exhaustive_len + self.cfg.trials
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exhaustive_len(&self) -> usize {
        self.exhaustive_len
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    fn choice_indices(&self, mut i: usize) -> Vec<usize> {
        let n = self.choices.len();
        let mut out = vec![0; self.vars.len()];
        for slot in out.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        out
    }

    fn random_languages(&self, trial: usize) -> Vec<Language> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(trial as u64);
        let k = self.cfg.alphabet_size.max(1);
        let l = self.cfg.bound;
        let min_len = usize::from(self.cfg.eps_free);
        self.vars
            .iter()
            .map(|_| {
                let count = rng.gen_range(0..=self.cfg.words_per_var);
                (0..count)
                    .filter_map(|_| {
                        let max = if rng.gen_bool(0.75) { l / 2 } else { l };
                        if max < min_len {
                            return None;
                        }
                        let len = rng.gen_range(min_len..=max);
                        Some(Word::from_letters((0..len).map(|_| Letter::nth(rng.gen_range(0..k)))))
                    })
                    .collect()
            })
            .collect()
    }

    fn languages(&self, i: usize) -> Vec<Language> {
        if i < self.exhaustive_len {
            self.choice_indices(i).into_iter().map(|c| self.choices[c].clone()).collect()
        } else {
            self.random_languages(i - self.exhaustive_len)
        }
    }

    fn top_language(&self) -> Language {
        Language::from_words(self.letters.iter().map(|l| Word::from_letters([*l])))
    }

    fn assemble(&self, langs: Vec<Language>) -> Interpretation {
        let mut map: std::collections::BTreeMap<VarId, Language> = self.vars.iter().cloned().zip(langs).collect();
        if self.top {
            map.insert(VarId::top(), self.top_language());
        }
        Interpretation::new(self.letters.iter().copied().collect(), map, self.bound)
            .expect("generated interpretations respect their alphabet and bound")
    }

    /// The `i`-th interpretation. Panics if `i >= self.len()`.
    pub fn get(&self, i: usize) -> Interpretation {
        assert!(i < self.len(), "stream index {i} out of range");
        self.assemble(self.languages(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = Interpretation> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }
}

/// A concrete disproof: `witness ∈ ⟦lhs⟧_σ` but `witness ∉ ⟦rhs⟧_σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterExample {
    pub sigma: Interpretation,
    pub witness: Word,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Position in the interpretation stream where the disproof was first found.
    pub index: usize,
}

impl CounterExample {
    /// Re-evaluates both sides under `sigma`.
    pub fn recheck(&self) -> bool {
        match (eval(&self.lhs, &self.sigma), eval(&self.rhs, &self.sigma)) {
            (Ok(l), Ok(r)) => l.contains(&self.witness) && !r.contains(&self.witness),
            _ => false,
        }
    }
}

impl fmt::Display for CounterExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sigma)?;
        write!(
            f,
            "witness {} is in [{}] but not in [{}]",
            self.witness, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Refuted(Box<CounterExample>),
    Unrefuted { checked: usize },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn counterexample(&self) -> Option<&CounterExample> {
        match self {
            Verdict::Refuted(c) => Some(c),
            Verdict::Unrefuted { .. } => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Refuted(c) => write!(f, "REFUTED(witness {})", c.witness),
            Verdict::Unrefuted { checked } => write!(f, "UNREFUTED ({checked} interpretations)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Goal {
    /// `⟦0⟧ ⊄ ⟦1⟧`
    NotContained,
    /// `⟦0⟧ ≠ ⟦1⟧`
    Different,
    /// `⟦0⟧ = ⟦1⟧` and `⟦2⟧ ≠ ⟦3⟧`
    PremiseWithoutConclusion,
}

trait SetOps: PartialEq {
    fn subset(&self, other: &Self) -> bool;
}

impl SetOps for Bits {
    fn subset(&self, other: &Bits) -> bool {
        self & !other == 0
    }
}

impl SetOps for Language {
    fn subset(&self, other: &Language) -> bool {
        self.is_subset(other)
    }
}

impl Goal {
    fn bad<V: SetOps>(self, v: &[V]) -> bool {
        match self {
            Goal::NotContained => !v[0].subset(&v[1]),
            Goal::Different => v[0] != v[1],
            Goal::PremiseWithoutConclusion => v[0] == v[1] && v[2] != v[3],
        }
    }

    /// The pair of expressions whose difference carries the witness.
    fn separated<'a>(self, exprs: &'a [Expr], v: &[Language]) -> (&'a Expr, &'a Expr, Word) {
        let (i, j) = match self {
            Goal::NotContained => (0, 1),
            Goal::Different => {
                if v[0].is_subset(&v[1]) {
                    (1, 0)
                } else {
                    (0, 1)
                }
            }
            Goal::PremiseWithoutConclusion => {
                if v[2].is_subset(&v[3]) {
                    (3, 2)
                } else {
                    (2, 3)
                }
            }
        };
        let w = v[i].difference(&v[j]).iter().next().cloned().expect("sides differ");
        (&exprs[i], &exprs[j], w)
    }
}

fn eval_all(exprs: &[Expr], sigma: &Interpretation) -> Vec<Language> {
    exprs.iter().map(|e| eval(e, sigma).expect("stream binds every free variable")).collect()
}

struct Search<'a> {
    exprs: &'a [Expr],
    goal: Goal,
    stream: InterpretationStream,
}

impl Search<'_> {
    fn new<'a>(exprs: &'a [Expr], goal: Goal, cfg: &OracleConfig) -> Search<'a> {
        let vars: BTreeSet<VarId> = exprs.iter().flat_map(free_vars).collect();
        Search { exprs, goal, stream: InterpretationStream::new(&vars, cfg) }
    }

    /// Index of the first interpretation in the stream satisfying the goal.
    fn first_bad(&self) -> Option<usize> {
        let s = &self.stream;
        if let Some(uni) = BitUniverse::new(&s.letters, s.bound) {
            let slot = |v: &VarId| {
                if v.is_reserved() {
                    Some(s.vars.len())
                } else {
                    s.vars.binary_search(v).ok()
                }
            };
            let progs: Vec<Program> =
                self.exprs.iter().map(|e| Program::compile(e, &slot).expect("all variables have slots")).collect();
            let choice_bits: Vec<Bits> =
                s.choices.iter().map(|l| uni.to_bits(l).expect("choices fit the universe")).collect();
            let top_bits = uni.to_bits(&s.top_language()).expect("letters fit the universe");
            let mut vals = vec![0; s.vars.len() + 1];
            vals[s.vars.len()] = top_bits;
            let mut out: Vec<Bits> = vec![0; progs.len()];
            for i in 0..s.len() {
                if i < s.exhaustive_len {
                    for (slot, c) in vals.iter_mut().zip(s.choice_indices(i)) {
                        *slot = choice_bits[c];
                    }
                } else {
                    for (slot, l) in vals.iter_mut().zip(s.languages(i)) {
                        *slot = uni.to_bits(&l).expect("random words fit the universe");
                    }
                }
                for (o, p) in out.iter_mut().zip(&progs) {
                    *o = p.run(&uni, &vals);
                }
                if self.goal.bad(&out) {
                    return Some(i);
                }
            }
            None
        } else {
            (0..s.len()).find(|&i| self.goal.bad(&eval_all(self.exprs, &s.get(i))))
        }
    }

    fn witness(&self, sigma: Interpretation, index: usize) -> CounterExample {
        let v = eval_all(self.exprs, &sigma);
        let (lhs, rhs, witness) = self.goal.separated(self.exprs, &v);
        CounterExample { sigma, witness, lhs: lhs.clone(), rhs: rhs.clone(), index }
    }

    fn still_bad(&self, sigma: &Interpretation) -> bool {
        self.goal.bad(&eval_all(self.exprs, sigma))
    }

    /// Drops whole words, then deletes single letters, as long as the goal survives.
    fn shrink(&self, mut sigma: Interpretation) -> Interpretation {
        let eps_free = self.stream.cfg.eps_free;
        loop {
            let mut changed = false;
            let vars: Vec<VarId> = sigma.vars().filter(|v| !v.is_reserved()).cloned().collect();
            'outer: for v in &vars {
                let lang = sigma.get(v).unwrap().clone();
                for w in &lang {
                    let mut smaller = lang.clone();
                    smaller.remove(w);
                    let cand = sigma.with_binding(v.clone(), smaller).unwrap();
                    if self.still_bad(&cand) {
                        sigma = cand;
                        changed = true;
                        break 'outer;
                    }
                }
            }
            if changed {
                continue;
            }
            'outer2: for v in &vars {
                let lang = sigma.get(v).unwrap().clone();
                for w in &lang {
                    for pos in 0..w.len() {
                        let mut letters = w.letters().to_vec();
                        letters.remove(pos);
                        let shorter = Word::from_letters(letters);
                        if eps_free && shorter.is_empty() {
                            continue;
                        }
                        let mut next = lang.clone();
                        next.remove(w);
                        next.insert(shorter);
                        let cand = sigma.with_binding(v.clone(), next).unwrap();
                        if self.still_bad(&cand) {
                            sigma = cand;
                            changed = true;
                            break 'outer2;
                        }
                    }
                }
            }
            if !changed {
                return sigma;
            }
        }
    }

    fn run(&self) -> Option<CounterExample> {
        let index = self.first_bad()?;
        let mut sigma = self.stream.get(index);
        if self.stream.cfg.shrink {
            sigma = self.shrink(sigma);
        }
        let cex = self.witness(sigma, index);
        assert!(cex.recheck(), "oracle produced a spurious counterexample");
        Some(cex)
    }
}

/// Looks for an interpretation with `⟦e⟧ ⊄ ⟦f⟧`. `None` is inconclusive.
pub fn refute(e: &Expr, f: &Expr, cfg: &OracleConfig) -> Option<CounterExample> {
    let exprs = [e.clone(), f.clone()];
    Search::new(&exprs, Goal::NotContained, cfg).run()
}

/// Refutes `e ≃ f` if some interpretation of the stream separates the two sides.
pub fn equiv_bounded(e: &Expr, f: &Expr, cfg: &OracleConfig) -> Verdict {
    let exprs = [e.clone(), f.clone()];
    let search = Search::new(&exprs, Goal::Different, cfg);
    match search.run() {
        Some(c) => Verdict::Refuted(Box::new(c)),
        None => Verdict::Unrefuted { checked: search.stream.len() },
    }
}

/// Like [`refute`] for `e ≲ f`, as a verdict.
pub fn leq_bounded(e: &Expr, f: &Expr, cfg: &OracleConfig) -> Verdict {
    let exprs = [e.clone(), f.clone()];
    let search = Search::new(&exprs, Goal::NotContained, cfg);
    match search.run() {
        Some(c) => Verdict::Refuted(Box::new(c)),
        None => Verdict::Unrefuted { checked: search.stream.len() },
    }
}

/// Refutes the implication `p₁ ≃ p₂ ⇒ c₁ ≃ c₂`: looks for an interpretation where the
/// premise holds and the conclusion fails.
pub fn refute_implication(premise: (&Expr, &Expr), conclusion: (&Expr, &Expr), cfg: &OracleConfig) -> Verdict {
    let exprs = [premise.0.clone(), premise.1.clone(), conclusion.0.clone(), conclusion.1.clone()];
    let search = Search::new(&exprs, Goal::PremiseWithoutConclusion, cfg);
    match search.run() {
        Some(c) => Verdict::Refuted(Box::new(c)),
        None => Verdict::Unrefuted { checked: search.stream.len() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<VarId> {
        names.iter().map(|n| VarId::named(n)).collect()
    }

    #[test]
    fn tiny_tier_is_the_powerset() {
        let cfg = OracleConfig {
            exhaustive: Some(TierSpec { alphabet: 1, bound: 1, max_words: 2 }),
            trials: 0,
            alphabet_size: 1,
            bound: 1,
            ..OracleConfig::default()
        };
        let s = gen_interpretations(&set(&["x"]), &cfg);
        let got: Vec<Language> = s.iter().map(|i| i.get(&VarId::named("x")).unwrap().clone()).collect();
        assert_eq!(got, vec![Language::empty(), Language::of(&["_"]), Language::of(&["a"]), Language::of(&["_", "a"])]);
    }

    #[test]
    fn default_tier_sizes() {
        let spec = OracleConfig::default().exhaustive.unwrap();
        assert_eq!(exhaustive_tier(spec, 1, 2_000_000, false).1, 121);
        assert_eq!(exhaustive_tier(spec, 3, 2_000_000, false).1, 121);
        let (t, n) = exhaustive_tier(spec, 4, 2_000_000, false);
        assert!((n as u64).pow(4) <= 2_000_000 && t.bound <= 3);
    }

    #[test]
    fn seeded_stream_is_deterministic() {
        let cfg = OracleConfig::default().with_seed(11);
        let a: Vec<_> = gen_interpretations(&set(&["x", "y"]), &cfg).iter().skip(14_000).collect();
        let b: Vec<_> = gen_interpretations(&set(&["x", "y"]), &cfg).iter().skip(14_000).collect();
        assert_eq!(a, b);
        let c: Vec<_> = gen_interpretations(&set(&["x", "y"]), &cfg.clone().with_seed(12)).iter().skip(14_000).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn eps_free_streams() {
        let cfg = OracleConfig::default().with_eps_free(true);
        assert!(gen_interpretations(&set(&["x", "y"]), &cfg).iter().all(|s| s.is_epsilon_free()));
    }

    #[test]
    fn commutation_of_product_is_refuted() {
        let c = refute(&p("x.y"), &p("y.x"), &OracleConfig::default().with_seed(7)).unwrap();
        assert!(c.recheck());
        assert_eq!(c.sigma.get(&VarId::named("x")), Some(&Language::of(&["a"])));
        assert_eq!(c.sigma.get(&VarId::named("y")), Some(&Language::of(&["b"])));
        assert_eq!(c.witness, Word::from("ab"));
    }

    #[test]
    fn trivial_containments_survive() {
        let cfg = OracleConfig::default();
        assert!(refute(&p("x^+ . y"), &p("x^+ . y"), &cfg).is_none());
        assert!(refute(&p("1 & x"), &p("x & 1"), &cfg).is_none());
        assert!(!equiv_bounded(&p("x + x"), &p("x"), &cfg).is_refuted());
        assert!(!equiv_bounded(&p("0"), &p("0^+"), &cfg).is_refuted());
        assert!(equiv_bounded(&p("x.y"), &p("x & y"), &cfg).is_refuted());
    }

    #[test]
    fn implication() {
        let cfg = OracleConfig::default();
        // x.y + y = y  ⇒  x^+.y + y = y
        let v = refute_implication((&p("x.y + y"), &p("y")), (&p("x^+.y + y"), &p("y")), &cfg);
        assert!(!v.is_refuted());
        let v = refute_implication((&p("x.y + y"), &p("y")), (&p("x + y"), &p("y")), &cfg);
        assert!(v.is_refuted());
    }

    #[test]
    fn top_is_pinned() {
        let s = gen_interpretations(&[VarId::top(), VarId::named("x")].into(), &OracleConfig::default());
        let i = s.get(5);
        assert_eq!(i.get(&VarId::top()), Some(&Language::of(&["a", "b"])));
    }

    #[test]
    fn fallback_without_bitsets() {
        let cfg = OracleConfig { alphabet_size: 3, bound: 6, trials: 30, ..OracleConfig::quick() };
        assert!(equiv_bounded(&p("x.y"), &p("y.x"), &cfg).is_refuted());
        assert!(!equiv_bounded(&p("(x.y)'"), &p("y'.x'"), &cfg).is_refuted());
    }
}
