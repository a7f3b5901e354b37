//! Normal forms: every expression is a sum of items `⟨A⟩` and `⟨A⟩ · e` with `e`
//! one-free.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::tests::{interone, TestSet};
use crate::syntax::{print_factor, substitute, Expr};

/// `⟨A⟩` when `body` is `None`, `⟨A⟩ · body` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NFItem {
    pub test: TestSet,
    pub body: Option<Expr>,
}

impl NFItem {
    pub fn test(test: TestSet) -> NFItem {
        NFItem { test, body: None }
    }

    pub fn product(test: TestSet, body: Expr) -> NFItem {
        NFItem { test, body: Some(body) }
    }

    pub fn is_test(&self) -> bool {
        self.body.is_none()
    }

    pub fn to_expr(&self) -> Expr {
        let t = self.test.to_expr();
        match &self.body {
            None => t,
            Some(b) => Expr::prod(t, b.clone()),
        }
    }
}

impl fmt::Display for NFItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.test)?;
        if let Some(b) = &self.body {
            write!(f, " . {}", print_factor(b))?;
        }
        Ok(())
    }
}

/// A finite sum of items; the empty sum is `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NormalForm(pub BTreeSet<NFItem>);

impl NormalForm {
    pub fn items(&self) -> impl Iterator<Item = &NFItem> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Left-nested sum of the items in order.
    pub fn to_expr(&self) -> Expr {
        Expr::sum_of(self.0.iter().map(NFItem::to_expr))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, it) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{it}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NfError {
    #[error("iteration over {count} product items exceeds the limit of {limit}")]
    TooManyItems { count: usize, limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NfConfig {
    /// Largest number of product items an iterated normal form may enumerate subsets of.
    pub max_plus_items: usize,
}

impl Default for NfConfig {
    fn default() -> Self {
        NfConfig { max_plus_items: 8 }
    }
}

/// `η ⊙ γ`, the concatenation of two items.
pub fn odot(a: &NFItem, b: &NFItem) -> NFItem {
    let test = a.test.union(&b.test);
    let body = match (&a.body, &b.body) {
        (None, None) => None,
        (Some(e), None) | (None, Some(e)) => Some(e.clone()),
        (Some(e), Some(f)) => Some(Expr::prod(e.clone(), f.clone())),
    };
    NFItem { test, body }
}

/// `η ⊗ γ`, the intersection of two items as a set of items.
pub fn otimes(a: &NFItem, b: &NFItem) -> BTreeSet<NFItem> {
    let ab = a.test.union(&b.test);
    match (&a.body, &b.body) {
        (None, None) => BTreeSet::from([NFItem::test(ab)]),
        (Some(e), None) | (None, Some(e)) => interone(e).iter().map(|c| NFItem::test(ab.union(c))).collect(),
        (Some(e), Some(f)) => BTreeSet::from([NFItem::product(ab, Expr::inter(e.clone(), f.clone()))]),
    }
}

pub fn nf(e: &Expr) -> Result<NormalForm, NfError> {
    nf_with(e, NfConfig::default())
}

pub fn nf_with(e: &Expr, cfg: NfConfig) -> Result<NormalForm, NfError> {
    go(e, cfg).map(NormalForm)
}

fn go(e: &Expr, cfg: NfConfig) -> Result<BTreeSet<NFItem>, NfError> {
    Ok(match e {
        Expr::Zero => BTreeSet::new(),
        Expr::One => BTreeSet::from([NFItem::test(TestSet::empty())]),
        Expr::Var(_) => BTreeSet::from([NFItem::product(TestSet::empty(), e.clone())]),
        Expr::Sum(a, b) => {
            let mut s = go(a, cfg)?;
            s.extend(go(b, cfg)?);
            s
        }
        Expr::Mirror(a) => go(a, cfg)?
            .into_iter()
            .map(|it| match it.body {
                None => it,
                Some(b) => NFItem::product(it.test, Expr::mirror(b)),
            })
            .collect(),
        Expr::Prod(a, b) => {
            let (l, r) = (go(a, cfg)?, go(b, cfg)?);
            l.iter().flat_map(|x| r.iter().map(move |y| odot(x, y))).collect()
        }
        Expr::Inter(a, b) => {
            let (l, r) = (go(a, cfg)?, go(b, cfg)?);
            l.iter().flat_map(|x| r.iter().flat_map(move |y| otimes(x, y))).collect()
        }
        Expr::Plus(a) => {
            let inner = go(a, cfg)?;
            let (tests, prods): (Vec<NFItem>, Vec<NFItem>) = inner.into_iter().partition(NFItem::is_test);
            if prods.len() > cfg.max_plus_items {
                return Err(NfError::TooManyItems { count: prods.len(), limit: cfg.max_plus_items });
            }
            let mut out: BTreeSet<NFItem> = tests.into_iter().collect();
            for mask in 1u32..(1 << prods.len()) {
                let chosen: Vec<&NFItem> = (0..prods.len()).filter(|i| mask & (1 << i) != 0).map(|i| &prods[i]).collect();
                let test = chosen.iter().fold(TestSet::empty(), |acc, it| acc.union(&it.test));
                let body = Expr::sum_of(chosen.iter().map(|it| it.body.clone().unwrap()));
                out.insert(NFItem::product(test, Expr::plus(body)));
            }
            out
        }
    })
}

/// Replaces each `a ∈ A` by `1 + a`.
pub fn reduce(a: &TestSet, f: &Expr) -> Expr {
    let m: BTreeMap<_, _> = a.vars().iter().map(|v| (v.clone(), Expr::sum(Expr::One, Expr::Var(v.clone())))).collect();
    substitute(f, &m)
}

/// `[f]`: the sum of the bodies of the items of `nf(f)` with empty test.
pub fn positive(f: &Expr) -> Result<Expr, NfError> {
    positive_with(f, NfConfig::default())
}

pub fn positive_with(f: &Expr, cfg: NfConfig) -> Result<Expr, NfError> {
    let n = nf_with(f, cfg)?;
    Ok(Expr::sum_of(n.0.into_iter().filter(|it| it.test.is_empty()).filter_map(|it| it.body)))
}
