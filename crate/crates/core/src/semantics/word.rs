//! Letters, words and finite languages.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A single letter. Ordinary letters are ASCII alphanumerics; the bullet `@` is the
/// reserved marker letter used by the erasure and η constructions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(char);

impl Letter {
    pub const BULLET: Letter = Letter('@');

    pub fn new(c: char) -> Option<Letter> {
        (c.is_ascii_alphanumeric() || c == '@').then_some(Letter(c))
    }

    /// The `i`-th ordinary letter: `a`, `b`, `c`, ...
    pub fn nth(i: usize) -> Letter {
        assert!(i < 26, "at most 26 generated letters");
        Letter((b'a' + i as u8) as char)
    }

    pub fn symbol(self) -> char {
        self.0
    }

    pub fn is_bullet(self) -> bool {
        self == Letter::BULLET
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word. Ordered shortlex: by length first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[Letter; 12]>);

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }

    /// Parses a word written as consecutive letters; `_` (or the empty string) is ε.
    pub fn parse(s: &str) -> Option<Word> {
        if s == "_" {
            return Some(Word::empty());
        }
        s.chars().map(Letter::new).collect::<Option<SmallVec<_>>>().map(Word)
    }

    /// Panicking variant of [`Word::parse`] for fixtures.
    pub fn from(s: &str) -> Word {
        Word::parse(s).unwrap_or_else(|| panic!("invalid word `{s}`"))
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(it: I) -> Word {
        Word(it.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn mirror(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn contains_bullet(&self) -> bool {
        self.0.iter().any(|l| l.is_bullet())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("_");
        }
        for l in &self.0 {
            write!(f, "{}", l.0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Mirror image of a word.
pub fn mirror_word(u: &Word) -> Word {
    u.mirror()
}

/// A finite set of words, stored sorted (shortlex) without duplicates.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Language {
    words: Vec<Word>,
}

impl Language {
    pub fn empty() -> Language {
        Language::default()
    }

    /// The unit language `{ε}`.
    pub fn epsilon() -> Language {
        Language { words: vec![Word::empty()] }
    }

    pub fn from_words<I: IntoIterator<Item = Word>>(it: I) -> Language {
        let mut words: Vec<Word> = it.into_iter().collect();
        words.sort_unstable();
        words.dedup();
        Language { words }
    }

    /// Fixture helper: `Language::of(&["ab", "_"])`.
    pub fn of(words: &[&str]) -> Language {
        Language::from_words(words.iter().map(|w| Word::from(w)))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.words.iter()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn contains_epsilon(&self) -> bool {
        self.words.first().is_some_and(Word::is_empty)
    }

    pub fn max_len(&self) -> usize {
        self.words.last().map_or(0, Word::len)
    }

    pub fn union(&self, other: &Language) -> Language {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            match self.words[i].cmp(&other.words[j]) {
                Ordering::Less => {
                    out.push(self.words[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.words[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(self.words[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.words[i..]);
        out.extend_from_slice(&other.words[j..]);
        Language { words: out }
    }

    pub fn intersection(&self, other: &Language) -> Language {
        let words = self.words.iter().filter(|w| other.contains(w)).cloned().collect();
        Language { words }
    }

    pub fn difference(&self, other: &Language) -> Language {
        let words = self.words.iter().filter(|w| !other.contains(w)).cloned().collect();
        Language { words }
    }

    pub fn is_subset(&self, other: &Language) -> bool {
        self.words.iter().all(|w| other.contains(w))
    }

    pub fn mirror(&self) -> Language {
        Language::from_words(self.words.iter().map(Word::mirror))
    }

    /// Words of length at most `bound`.
    pub fn restrict(&self, bound: usize) -> Language {
        let words = self.words.iter().take_while(|w| w.len() <= bound).cloned().collect();
        Language { words }
    }

    pub fn map<F: FnMut(&Word) -> Word>(&self, f: F) -> Language {
        Language::from_words(self.words.iter().map(f))
    }

    pub fn filter<F: FnMut(&Word) -> bool>(&self, mut f: F) -> Language {
        Language { words: self.words.iter().filter(|w| f(w)).cloned().collect() }
    }

    pub fn insert(&mut self, w: Word) {
        if let Err(pos) = self.words.binary_search(&w) {
            self.words.insert(pos, w);
        }
    }

    pub fn remove(&mut self, w: &Word) -> bool {
        match self.words.binary_search(w) {
            Ok(pos) => {
                self.words.remove(pos);
                true
            }
            Err(_) => false,
        }
    }
}

impl FromIterator<Word> for Language {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        Language::from_words(iter)
    }
}

impl<'a> IntoIterator for &'a Language {
    type Item = &'a Word;
    type IntoIter = std::slice::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return f.write_str("{ }");
        }
        f.write_str("{ ")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str(" }")
    }
}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `{ uv | u ∈ l, v ∈ m, |uv| ≤ bound }`.
pub fn lang_concat(l: &Language, m: &Language, bound: usize) -> Language {
    let mut out = Vec::new();
    for u in l {
        if u.len() > bound {
            break;
        }
        for v in m {
            if u.len() + v.len() > bound {
                break;
            }
            out.push(u.concat(v));
        }
    }
    Language::from_words(out)
}

/// `L⁺` restricted to words of length at most `bound`: the least fixed point of
/// `S ↦ L ∪ L·S`. Terminates even when `ε ∈ L` because the universe is finite.
pub fn lang_plus(l: &Language, bound: usize) -> Language {
    let base = l.restrict(bound);
    let mut acc = base.clone();
    loop {
        let next = acc.union(&lang_concat(&base, &acc, bound));
        if next.len() == acc.len() {
            return acc;
        }
        acc = next;
    }
}
