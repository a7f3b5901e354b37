//! Interpretations of variables as finite languages, and their text format:
//!
//! ```text
//! alphabet = { a, b }
//! bound = 6
//! x = { ab, ba, _ }
//! ```
//!
//! `_` is the empty word and `@` the bullet letter. Both header lines are optional;
//! when absent they are inferred from the bindings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::word::{Language, Letter, Word};
use crate::syntax::{self, Expr, VarId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpError {
    #[error("word `{word}` bound to `{var}` is longer than the bound {bound}")]
    TooLong { var: VarId, word: Word, bound: usize },
    #[error("word `{word}` bound to `{var}` uses a letter outside the alphabet")]
    ForeignLetter { var: VarId, word: Word },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0:?} is not a subset of the declared variables")]
    NotSubset(Vec<VarId>),
}

/// A map from a finite set of variables to languages over a finite alphabet,
/// together with the word-length bound evaluation is exact for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interpretation {
    alphabet: BTreeSet<Letter>,
    map: BTreeMap<VarId, Language>,
    bound: usize,
}

impl Interpretation {
    pub fn new(
        alphabet: BTreeSet<Letter>,
        map: BTreeMap<VarId, Language>,
        bound: usize,
    ) -> Result<Interpretation, InterpError> {
        for (var, lang) in &map {
            for w in lang {
                if w.len() > bound {
                    return Err(InterpError::TooLong { var: var.clone(), word: w.clone(), bound });
                }
                if !w.letters().iter().all(|l| alphabet.contains(l)) {
                    return Err(InterpError::ForeignLetter { var: var.clone(), word: w.clone() });
                }
            }
        }
        Ok(Interpretation { alphabet, map, bound })
    }

    /// Alphabet is the set of letters used, bound the longest word.
    pub fn inferred(map: BTreeMap<VarId, Language>) -> Interpretation {
        let alphabet = map.values().flat_map(|l| l.iter()).flat_map(|w| w.letters().iter().copied()).collect();
        let bound = map.values().map(Language::max_len).max().unwrap_or(0);
        Interpretation { alphabet, map, bound }
    }

    pub fn alphabet(&self) -> &BTreeSet<Letter> {
        &self.alphabet
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn get(&self, v: &VarId) -> Option<&Language> {
        self.map.get(v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.map.keys()
    }

    pub fn bindings(&self) -> &BTreeMap<VarId, Language> {
        &self.map
    }

    /// Same bindings, evaluated at a larger bound.
    pub fn with_bound(&self, bound: usize) -> Result<Interpretation, InterpError> {
        Interpretation::new(self.alphabet.clone(), self.map.clone(), bound)
    }

    /// Replaces (or adds) one binding; the word constraints are rechecked.
    pub fn with_binding(&self, v: VarId, lang: Language) -> Result<Interpretation, InterpError> {
        let mut map = self.map.clone();
        map.insert(v, lang);
        Interpretation::new(self.alphabet.clone(), map, self.bound)
    }

    /// True if no bound language contains the empty word.
    pub fn is_epsilon_free(&self) -> bool {
        self.map.values().all(|l| !l.contains_epsilon())
    }

    pub fn parse(text: &str) -> Result<Interpretation, InterpError> {
        let mut alphabet: Option<BTreeSet<Letter>> = None;
        let mut bound: Option<usize> = None;
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| InterpError::Syntax { line: i + 1, msg };
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| err("expected `name = ...`".into()))?;
            let lhs = lhs.trim();
            let rhs = rhs.trim();
            match lhs {
                "bound" => {
                    bound = Some(rhs.parse().map_err(|_| err(format!("invalid bound `{rhs}`")))?);
                }
                "alphabet" => {
                    let mut set = BTreeSet::new();
                    for tok in braced_items(rhs).map_err(err)? {
                        let mut chars = tok.chars();
                        let letter = match (chars.next(), chars.next()) {
                            (Some(c), None) => Letter::new(c),
                            _ => None,
                        };
                        set.insert(letter.ok_or_else(|| err(format!("invalid letter `{tok}`")))?);
                    }
                    alphabet = Some(set);
                }
                _ => {
                    let opts = syntax::ParseOptions { allow_reserved: true, allow_top: false };
                    let var = match syntax::parse_with(lhs, opts) {
                        Ok(Expr::Var(v)) => v,
                        _ => return Err(err(format!("invalid variable `{lhs}`"))),
                    };
                    let mut words = Vec::new();
                    for tok in braced_items(rhs).map_err(err)? {
                        words.push(Word::parse(tok).ok_or_else(|| err(format!("invalid word `{tok}`")))?);
                    }
                    if map.insert(var.clone(), Language::from_words(words)).is_some() {
                        return Err(err(format!("`{var}` bound twice")));
                    }
                }
            }
        }
        let inferred = Interpretation::inferred(map);
        let alphabet = match alphabet {
            Some(a) => a,
            None => inferred.alphabet.clone(),
        };
        let bound = bound.unwrap_or(inferred.bound);
        Interpretation::new(alphabet, inferred.map, bound)
    }
}

fn braced_items(s: &str) -> Result<Vec<&str>, String> {
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| format!("expected `{{ ... }}`, found `{s}`"))?;
    Ok(inner.split(',').map(str::trim).filter(|t| !t.is_empty()).collect())
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("alphabet = { ")?;
        for (i, l) in self.alphabet.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", l.symbol())?;
        }
        if self.alphabet.is_empty() {
            writeln!(f, "}}")?;
        } else {
            writeln!(f, " }}")?;
        }
        writeln!(f, "bound = {}", self.bound)?;
        for (v, l) in &self.map {
            writeln!(f, "{v} = {l}")?;
        }
        Ok(())
    }
}

/// `σ_A`: members of `a` are mapped to `{ε}`, the other variables of `x` to `∅`.
/// The alphabet is empty.
pub fn sigma_a(a: &BTreeSet<VarId>, x: &BTreeSet<VarId>) -> Result<Interpretation, InterpError> {
    let extra: Vec<VarId> = a.difference(x).cloned().collect();
    if !extra.is_empty() {
        return Err(InterpError::NotSubset(extra));
    }
    let map = x
        .iter()
        .map(|v| (v.clone(), if a.contains(v) { Language::epsilon() } else { Language::empty() }))
        .collect();
    Interpretation::new(BTreeSet::new(), map, 0)
}
