//! Bitset evaluation for small universes.
//!
//! When every word of length `≤ L` over the alphabet fits in 128 slots, a language
//! is a `u128`. Words are indexed shortlex, so the block of words of length `n`
//! is contiguous and concatenation with a fixed word of length `m` shifts that
//! block into the block of length `m + n`.

use smallvec::SmallVec;

use super::eval::EvalError;
use super::word::{Language, Letter, Word};
use crate::syntax::{Expr, VarId};

pub(crate) type Bits = u128;

pub(crate) struct BitUniverse {
    letters: Vec<Letter>,
    bound: usize,
    /// `offsets[n]` is the index of the first word of length `n`.
    offsets: Vec<u32>,
    /// `powers[n] = k^n`.
    powers: Vec<u32>,
    len_of: Vec<u8>,
    val_of: Vec<u32>,
    mirror_of: Vec<u8>,
}

fn mask(width: u32) -> Bits {
    if width >= 128 {
        !0
    } else {
        (1u128 << width) - 1
    }
}

impl BitUniverse {
    /// `None` if the universe has more than 128 words.
    pub(crate) fn new(letters: &[Letter], bound: usize) -> Option<BitUniverse> {
        let k = letters.len() as u64;
        let mut offsets = Vec::with_capacity(bound + 2);
        let mut powers = Vec::with_capacity(bound + 1);
        let mut total: u64 = 0;
        let mut pow: u64 = 1;
        for _ in 0..=bound {
            offsets.push(total as u32);
            powers.push(pow as u32);
            total += pow;
            if total > 128 {
                return None;
            }
            pow *= k.max(1);
            if k == 0 {
                pow = 0;
            }
        }
        offsets.push(total as u32);
        let n = total as usize;
        let mut len_of = vec![0u8; n];
        let mut val_of = vec![0u32; n];
        for len in 0..=bound {
            for v in 0..powers[len] {
                let idx = (offsets[len] + v) as usize;
                len_of[idx] = len as u8;
                val_of[idx] = v;
            }
        }
        let mut uni = BitUniverse {
            letters: letters.to_vec(),
            bound,
            offsets,
            powers,
            len_of,
            val_of,
            mirror_of: vec![0; n],
        };
        for idx in 0..n {
            let m = uni.index(&uni.word(idx).mirror()).expect("mirror stays in universe");
            uni.mirror_of[idx] = m as u8;
        }
        Some(uni)
    }

    pub(crate) fn index(&self, w: &Word) -> Option<usize> {
        if w.len() > self.bound {
            return None;
        }
        let k = self.letters.len() as u32;
        let mut v: u32 = 0;
        for l in w.letters() {
            let d = self.letters.binary_search(l).ok()? as u32;
            v = v * k + d;
        }
        Some((self.offsets[w.len()] + v) as usize)
    }

    pub(crate) fn word(&self, idx: usize) -> Word {
        let len = self.len_of[idx] as usize;
        let k = self.letters.len() as u32;
        let mut v = self.val_of[idx];
        let mut out = vec![Letter::BULLET; len];
        for slot in out.iter_mut().rev() {
            *slot = self.letters[(v % k) as usize];
            v /= k;
        }
        Word::from_letters(out)
    }

    /// `None` if some word does not fit the universe.
    pub(crate) fn to_bits(&self, l: &Language) -> Option<Bits> {
        let mut b: Bits = 0;
        for w in l {
            b |= 1u128 << self.index(w)?;
        }
        Some(b)
    }

    #[cfg(test)]
    pub(crate) fn to_language(&self, mut b: Bits) -> Language {
        let mut words = Vec::with_capacity(b.count_ones() as usize);
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            words.push(self.word(i));
            b &= b - 1;
        }
        Language::from_words(words)
    }

    pub(crate) fn concat(&self, a: Bits, b: Bits) -> Bits {
        if b == 0 {
            return 0;
        }
        let mut out: Bits = 0;
        let mut rest = a;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let m = self.len_of[i] as usize;
            let v = self.val_of[i];
            for n in 0..=self.bound - m {
                let width = self.powers[n];
                let block = (b >> self.offsets[n]) & mask(width);
                if block != 0 {
                    out |= block << (self.offsets[m + n] + v * width);
                }
            }
        }
        out
    }

    pub(crate) fn plus(&self, a: Bits) -> Bits {
        let mut s = a;
        loop {
            let next = s | self.concat(s, s);
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub(crate) fn mirror(&self, a: Bits) -> Bits {
        let mut out: Bits = 0;
        let mut rest = a;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1u128 << self.mirror_of[i];
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Zero,
    One,
    Var(usize),
    Sum,
    Prod,
    Inter,
    Plus,
    Mirror,
}

/// An expression flattened to postfix code over variable slots.
#[derive(Clone, Debug)]
pub(crate) struct Program {
    ops: Vec<Op>,
}

impl Program {
    pub(crate) fn compile(e: &Expr, slot: &impl Fn(&VarId) -> Option<usize>) -> Result<Program, EvalError> {
        let mut ops = Vec::with_capacity(e.size());
        emit(e, slot, &mut ops)?;
        Ok(Program { ops })
    }

    pub(crate) fn run(&self, uni: &BitUniverse, vals: &[Bits]) -> Bits {
        let mut stack: SmallVec<[Bits; 16]> = SmallVec::new();
        for op in &self.ops {
            let v = match *op {
                Op::Zero => 0,
                Op::One => 1,
                Op::Var(i) => vals[i],
                Op::Plus => {
                    let a = stack.pop().unwrap();
                    uni.plus(a)
                }
                Op::Mirror => {
                    let a = stack.pop().unwrap();
                    uni.mirror(a)
                }
                Op::Sum | Op::Prod | Op::Inter => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    match *op {
                        Op::Sum => a | b,
                        Op::Inter => a & b,
                        _ => uni.concat(a, b),
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().unwrap_or(0)
    }
}

fn emit(e: &Expr, slot: &impl Fn(&VarId) -> Option<usize>, ops: &mut Vec<Op>) -> Result<(), EvalError> {
    match e {
        Expr::Zero => ops.push(Op::Zero),
        Expr::One => ops.push(Op::One),
        Expr::Var(v) => ops.push(Op::Var(slot(v).ok_or_else(|| EvalError::Unbound(v.clone()))?)),
        Expr::Sum(a, b) | Expr::Prod(a, b) | Expr::Inter(a, b) => {
            emit(a, slot, ops)?;
            emit(b, slot, ops)?;
            ops.push(match e {
                Expr::Sum(..) => Op::Sum,
                Expr::Prod(..) => Op::Prod,
                _ => Op::Inter,
            });
        }
        Expr::Plus(a) => {
            emit(a, slot, ops)?;
            ops.push(Op::Plus);
        }
        Expr::Mirror(a) => {
            emit(a, slot, ops)?;
            ops.push(Op::Mirror);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval::eval;
    use crate::semantics::interp::Interpretation;
    use crate::syntax::parse;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn ab() -> Vec<Letter> {
        vec![Letter::nth(0), Letter::nth(1)]
    }

    #[test]
    fn universe_sizes() {
        assert!(BitUniverse::new(&ab(), 6).is_some());
        assert!(BitUniverse::new(&ab(), 7).is_none());
        let abc = vec![Letter::BULLET, Letter::nth(0), Letter::nth(1)];
        assert!(BitUniverse::new(&abc, 4).is_some());
        assert!(BitUniverse::new(&[Letter::nth(0)], 127).is_some());
        assert!(BitUniverse::new(&[], 3).is_some());
    }

    #[test]
    fn index_round_trip() {
        let u = BitUniverse::new(&ab(), 6).unwrap();
        for i in 0..127 {
            assert_eq!(u.index(&u.word(i)), Some(i));
        }
        assert_eq!(u.index(&Word::from("ba")), Some(5));
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        "[ab]{0,4}".prop_map(|s| if s.is_empty() { Word::empty() } else { Word::from(&s) })
    }

    fn lang_strategy() -> impl Strategy<Value = Language> {
        proptest::collection::vec(word_strategy(), 0..4).prop_map(Language::from_words)
    }

    proptest! {
        // The bitset route and the set route must agree word for word.
        #[test]
        fn agrees_with_set_evaluation(x in lang_strategy(), y in lang_strategy(), pick in 0usize..8) {
            let exprs = ["x.y", "x^+", "(x + y)^+ & x.y'", "(x.y)' + y'^+", "1 & x", "x . 1 . y", "(x & y^+)^+", "0 + x^+.x"];
            let e = parse(exprs[pick]).unwrap();
            let map: BTreeMap<_, _> = [(VarId::named("x"), x.clone()), (VarId::named("y"), y.clone())].into();
            let sigma = Interpretation::new(ab().into_iter().collect(), map, 6).unwrap();
            let uni = BitUniverse::new(&ab(), 6).unwrap();
            let slot = |v: &VarId| match v.name() { "x" => Some(0), "y" => Some(1), _ => None };
            let prog = Program::compile(&e, &slot).unwrap();
            let bits = prog.run(&uni, &[uni.to_bits(&x).unwrap(), uni.to_bits(&y).unwrap()]);
            prop_assert_eq!(uni.to_language(bits), eval(&e, &sigma).unwrap());
        }
    }
}
