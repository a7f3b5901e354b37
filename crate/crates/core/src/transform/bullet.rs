//! The bullet letter `@`: erasure, the interleaving `η`, the insertion order `⊑`, and
//! the interpretation builders that use them.
//!
//! A word over `Σ ∪ {@}` is viewed as its erasure together with the lengths of the
//! bullet runs in each of its `n + 1` gaps. `u ⊑ v` holds iff both words have the same
//! erasure and every run of `u` is at most the corresponding run of `v`; the join is
//! the gap-wise maximum.

use std::collections::{BTreeMap, BTreeSet};

use crate::semantics::{InterpError, Interpretation, Language, Letter, Word};
use crate::syntax::{Direction, VarId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BulletError {
    #[error("word `{0}` already contains the bullet letter")]
    BulletInInput(Word),
    #[error("the alphabet already contains the bullet letter")]
    BulletInAlphabet,
    #[error("`{0}` contains the empty word")]
    EmptyWord(VarId),
    #[error("variable `{0}` carries no direction")]
    Undirected(VarId),
    #[error(transparent)]
    Interp(#[from] InterpError),
}

pub fn erase(u: &Word) -> Word {
    Word::from_letters(u.letters().iter().copied().filter(|l| !l.is_bullet()))
}

/// `η(a₁…aₙ) = @a₁…@aₙ`.
pub fn eta(u: &Word) -> Result<Word, BulletError> {
    if u.contains_bullet() {
        return Err(BulletError::BulletInInput(u.clone()));
    }
    Ok(Word::from_letters(u.letters().iter().flat_map(|&l| [Letter::BULLET, l])))
}

/// Erasure and bullet-run lengths of each gap.
fn gaps(u: &Word) -> (Vec<Letter>, Vec<usize>) {
    let mut letters = Vec::new();
    let mut runs = vec![0];
    for &l in u.letters() {
        if l.is_bullet() {
            *runs.last_mut().unwrap() += 1;
        } else {
            letters.push(l);
            runs.push(0);
        }
    }
    (letters, runs)
}

fn ungap(letters: &[Letter], runs: &[usize]) -> Word {
    let mut out = Vec::new();
    for (i, &r) in runs.iter().enumerate() {
        out.extend(std::iter::repeat_n(Letter::BULLET, r));
        if let Some(&l) = letters.get(i) {
            out.push(l);
        }
    }
    Word::from_letters(out)
}

/// `u ⊑ v`: `v` is `u` with bullets inserted.
pub fn word_leq(u: &Word, v: &Word) -> bool {
    let (lu, ru) = gaps(u);
    let (lv, rv) = gaps(v);
    lu == lv && ru.iter().zip(&rv).all(|(a, b)| a <= b)
}

/// Least upper bound for `⊑`, `None` when the erasures differ.
pub fn word_join(u: &Word, v: &Word) -> Option<Word> {
    let (lu, ru) = gaps(u);
    let (lv, rv) = gaps(v);
    if lu != lv {
        return None;
    }
    let runs: Vec<usize> = ru.iter().zip(&rv).map(|(a, b)| *a.max(b)).collect();
    Some(ungap(&lu, &runs))
}

/// Every word of length `≤ budget` obtained from `u` by inserting bullets.
pub fn bullet_insertions(u: &Word, budget: usize) -> Vec<Word> {
    let (letters, runs) = gaps(u);
    if u.len() > budget {
        return Vec::new();
    }
    let spare = budget - u.len();
    let mut out = Vec::new();
    let mut extra = vec![0; runs.len()];
    distribute(&mut extra, 0, spare, &mut |extra| {
        let r: Vec<usize> = runs.iter().zip(extra).map(|(a, b)| a + b).collect();
        out.push(ungap(&letters, &r));
    });
    out
}

fn distribute(extra: &mut Vec<usize>, i: usize, left: usize, emit: &mut impl FnMut(&[usize])) {
    if i == extra.len() {
        emit(extra);
        return;
    }
    for k in 0..=left {
        extra[i] = k;
        distribute(extra, i + 1, left - k, emit);
    }
    extra[i] = 0;
}

/// Closes `l` upwards under `⊑`, keeping words of length `≤ budget`.
pub fn upward_closure(l: &Language, budget: usize) -> Language {
    l.iter().flat_map(|w| bullet_insertions(w, budget)).collect()
}

/// Whether every one-bullet extension of a word of `l` that fits in `budget` is in `l`.
pub fn is_upward_closed(l: &Language, budget: usize) -> bool {
    l.iter().all(|w| {
        w.len() >= budget
            || (0..=w.len()).all(|i| {
                let mut ls = w.letters().to_vec();
                ls.insert(i, Letter::BULLET);
                l.contains(&Word::from_letters(ls))
            })
    })
}

/// `σ′(x) = { u | erase u ∈ σ(x), x ∈ 𝒳 ⇒ u ≠ ε }`, truncated to length `budget`.
pub fn build_sigma_prime(
    sigma: &Interpretation,
    nonempty: &BTreeSet<VarId>,
    budget: usize,
) -> Result<Interpretation, BulletError> {
    if sigma.alphabet().contains(&Letter::BULLET) {
        return Err(BulletError::BulletInAlphabet);
    }
    let mut alphabet = sigma.alphabet().clone();
    alphabet.insert(Letter::BULLET);
    let map = sigma
        .bindings()
        .iter()
        .map(|(x, l)| {
            let mut out = upward_closure(l, budget);
            if nonempty.contains(x) {
                out.remove(&Word::empty());
            }
            (x.clone(), out)
        })
        .collect();
    Ok(Interpretation::new(alphabet, map, budget)?)
}

/// `σ″(x) = η(σ(x!f)) ∪ mirror(η(σ(x!b)))`, with the bound doubled.
pub fn build_sigma_dblprime(sigma: &Interpretation) -> Result<Interpretation, BulletError> {
    if sigma.alphabet().contains(&Letter::BULLET) {
        return Err(BulletError::BulletInAlphabet);
    }
    let mut map: BTreeMap<VarId, Language> = BTreeMap::new();
    for (v, l) in sigma.bindings() {
        let dir = v.dir().ok_or_else(|| BulletError::Undirected(v.clone()))?;
        if l.contains_epsilon() {
            return Err(BulletError::EmptyWord(v.clone()));
        }
        let mut image = Vec::with_capacity(l.len());
        for u in l {
            let w = eta(u)?;
            image.push(match dir {
                Direction::Fwd => w,
                Direction::Bwd => w.mirror(),
            });
        }
        let slot = map.entry(v.undirected()).or_insert_with(Language::empty);
        *slot = slot.union(&Language::from_words(image));
    }
    let mut alphabet = sigma.alphabet().clone();
    alphabet.insert(Letter::BULLET);
    Ok(Interpretation::new(alphabet, map, 2 * sigma.bound())?)
}

/// The η-preimage of `w`, if `w` is of the form `@a₁…@aₙ`.
pub fn eta_inverse(w: &Word) -> Option<Word> {
    if w.len() % 2 != 0 {
        return None;
    }
    let mut out = Vec::with_capacity(w.len() / 2);
    for pair in w.letters().chunks(2) {
        if !pair[0].is_bullet() || pair[1].is_bullet() {
            return None;
        }
        out.push(pair[1]);
    }
    Some(Word::from_letters(out))
}

/// `ψ(L) = { u | η(u) ∈ L }`.
pub fn psi(l: &Language) -> Language {
    l.iter().filter_map(eta_inverse).collect()
}

/// Non-empty products of blocks `a@` and `@a`.
pub fn is_valid_word(u: &Word) -> bool {
    !u.is_empty()
        && u.len() % 2 == 0
        && u.letters().chunks(2).all(|p| p[0].is_bullet() != p[1].is_bullet())
}
