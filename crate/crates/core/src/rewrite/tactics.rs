//! Building blocks for writing derivations by hand: proofs that carry their two
//! sides, a chaining builder, normalisation modulo associativity, commutativity and
//! idempotence of `+` and `∩`, and combinators for `≤`.

use std::cmp::Ordering;

use super::axioms::{AxiomId, Bindings};
use super::derivation::{apply_step, CheckFailure, Derivation, Orientation, Step};
use super::path::{replace, subterm, Path};
use crate::syntax::{free_vars, Expr};

use AxiomId::*;
use Orientation::{L2R, R2L};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TacticError {
    #[error(transparent)]
    Step(#[from] CheckFailure),
    #[error("expected `{expected}`, found `{found}`")]
    Mismatch { expected: Expr, found: Expr },
    #[error("`{0}` and `{1}` differ modulo associativity, commutativity and idempotence")]
    NotAci(Expr, Expr),
}

pub type TResult<T> = Result<T, TacticError>;

fn mismatch<T>(expected: &Expr, found: &Expr) -> TResult<T> {
    Err(TacticError::Mismatch { expected: expected.clone(), found: found.clone() })
}

/// A derivation of `lhs ≡ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    lhs: Expr,
    rhs: Expr,
    d: Derivation,
}

/// Keeps only the bindings matching cannot recover in one of the two directions.
fn recorded_bindings(axiom: AxiomId, full: &Bindings) -> Bindings {
    let s = axiom.schema();
    let (l, r) = (free_vars(&s.lhs), free_vars(&s.rhs));
    full.iter().filter(|(k, _)| l.iter().any(|v| v.name() == *k) != r.iter().any(|v| v.name() == *k)).map(|(k, v)| (k.clone(), v.clone())).collect()
}

impl Proof {
    pub fn lhs(&self) -> &Expr {
        &self.lhs
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }

    pub fn derivation(&self) -> &Derivation {
        &self.d
    }

    pub fn into_derivation(self) -> Derivation {
        self.d
    }

    pub fn refl(e: Expr) -> Proof {
        Proof { lhs: e.clone(), rhs: e.clone(), d: Derivation::Refl(e) }
    }

    pub fn is_refl(&self) -> bool {
        matches!(self.d, Derivation::Refl(_))
    }

    /// One axiom step applied to `src`.
    pub fn step(src: &Expr, axiom: AxiomId, o: Orientation, at: &[usize], b: Bindings) -> TResult<Proof> {
        let at = Path(at.to_vec());
        let (rhs, full) = apply_step(axiom, o, &at, &b, src)?;
        let d = Derivation::Ax(Step::new(axiom, o, at, recorded_bindings(axiom, &full)));
        Ok(Proof { lhs: src.clone(), rhs, d })
    }

    /// A left-to-right use of a conditional axiom, with a proof of its premise.
    pub fn conditional(src: &Expr, axiom: AxiomId, at: &[usize], b: Bindings, premise: Proof) -> TResult<Proof> {
        let at = Path(at.to_vec());
        let (rhs, full) = apply_step(axiom, L2R, &at, &b, src)?;
        let inst = super::axioms::instantiate(axiom, &full).map_err(CheckFailure::from)?;
        let (pl, pr) = inst.premise.expect("conditional axiom");
        if premise.lhs != pl {
            return mismatch(&pl, &premise.lhs);
        }
        if premise.rhs != pr {
            return mismatch(&pr, &premise.rhs);
        }
        let d = Derivation::CAx(Step::new(axiom, L2R, at, recorded_bindings(axiom, &full)), Box::new(premise.d));
        Ok(Proof { lhs: src.clone(), rhs, d })
    }

    pub fn then(self, next: Proof) -> TResult<Proof> {
        if self.rhs != next.lhs {
            return mismatch(&self.rhs, &next.lhs);
        }
        if self.is_refl() {
            return Ok(next);
        }
        if next.is_refl() {
            return Ok(self);
        }
        Ok(Proof { lhs: self.lhs, rhs: next.rhs, d: Derivation::trans(self.d, next.d) })
    }

    pub fn sym(self) -> Proof {
        let d = match self.d {
            Derivation::Refl(e) => Derivation::Refl(e),
            Derivation::Sym(inner) => *inner,
            other => Derivation::sym(other),
        };
        Proof { lhs: self.rhs, rhs: self.lhs, d }
    }

    /// Uses the proof on the subterm at `at` of `ctx`.
    pub fn inside(self, ctx: &Expr, at: &[usize]) -> TResult<Proof> {
        let at = Path(at.to_vec());
        match subterm(ctx, &at) {
            Some(s) if *s == self.lhs => {}
            Some(s) => return mismatch(&self.lhs, s),
            None => return Err(CheckFailure::PathOutOfRange { path: at, term: ctx.clone() }.into()),
        }
        let rhs = replace(ctx, &at, self.rhs.clone()).expect("path resolves");
        Ok(Proof { lhs: ctx.clone(), rhs, d: self.d.lift(&at, ctx) })
    }
}

/// Accumulates rewrites of a current term.
#[derive(Clone, Debug)]
pub struct Chain {
    proof: Proof,
}

impl Chain {
    pub fn new(start: Expr) -> Chain {
        Chain { proof: Proof::refl(start) }
    }

    pub fn current(&self) -> &Expr {
        &self.proof.rhs
    }

    pub fn ax(self, axiom: AxiomId, o: Orientation, at: &[usize]) -> TResult<Chain> {
        self.ax_with(axiom, o, at, &[])
    }

    pub fn ax_with(self, axiom: AxiomId, o: Orientation, at: &[usize], b: &[(&str, Expr)]) -> TResult<Chain> {
        let b = b.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let step = Proof::step(&self.proof.rhs, axiom, o, at, b)?;
        Ok(Chain { proof: self.proof.then(step)? })
    }

    pub fn cax(self, axiom: AxiomId, at: &[usize], premise: Proof) -> TResult<Chain> {
        let step = Proof::conditional(&self.proof.rhs, axiom, at, Bindings::new(), premise)?;
        Ok(Chain { proof: self.proof.then(step)? })
    }

    /// Rewrites the subterm at `at` with `p`.
    pub fn by(self, p: Proof, at: &[usize]) -> TResult<Chain> {
        let lifted = p.inside(&self.proof.rhs, at)?;
        Ok(Chain { proof: self.proof.then(lifted)? })
    }

    pub fn done(self) -> Proof {
        self.proof
    }

    /// Finishes, checking the final term.
    pub fn ends_at(self, expected: &Expr) -> TResult<Proof> {
        if self.proof.rhs != *expected {
            return mismatch(expected, &self.proof.rhs);
        }
        Ok(self.proof)
    }
}

/// The associative, commutative, idempotent operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AciOp {
    Sum,
    Inter,
}

impl AciOp {
    fn split(self, e: &Expr) -> Option<(&Expr, &Expr)> {
        match (self, e) {
            (AciOp::Sum, Expr::Sum(a, b)) | (AciOp::Inter, Expr::Inter(a, b)) => Some((a, b)),
            _ => None,
        }
    }

    fn make(self, a: Expr, b: Expr) -> Expr {
        match self {
            AciOp::Sum => Expr::sum(a, b),
            AciOp::Inter => Expr::inter(a, b),
        }
    }

    fn assoc(self) -> AxiomId {
        match self {
            AciOp::Sum => PlusAss,
            AciOp::Inter => InterAssoc,
        }
    }

    fn comm(self) -> AxiomId {
        match self {
            AciOp::Sum => PlusCom,
            AciOp::Inter => InterComm,
        }
    }

    /// `x ⊕ x ≡ x`.
    fn idem(self, x: &Expr) -> TResult<Proof> {
        let t = self.make(x.clone(), x.clone());
        match self {
            AciOp::Inter => Proof::step(&t, InterIdem, L2R, &[], Bindings::new()),
            AciOp::Sum => Ok(sum_idem(x)?),
        }
    }

    /// Operands of nested uses of the operator, left to right.
    pub fn leaves(self, e: &Expr) -> Vec<Expr> {
        match self.split(e) {
            Some((a, b)) => {
                let mut v = self.leaves(a);
                v.extend(self.leaves(b));
                v
            }
            None => vec![e.clone()],
        }
    }
}

/// Canonical operand order: structural, except that `1` goes last so that tests
/// normalise to their canonical shape `a ∩ (b ∩ 1)`.
fn leaf_order(a: &Expr, b: &Expr) -> Ordering {
    (*a == Expr::One, a).cmp(&(*b == Expr::One, b))
}

/// `x + x ≡ x`, from `∩`-idempotence and absorption.
pub fn sum_idem(x: &Expr) -> TResult<Proof> {
    Ok(Chain::new(Expr::sum(x.clone(), x.clone())).ax(InterIdem, R2L, &[0])?.ax(InterPlus, L2R, &[])?.done())
}

struct Aci(AciOp);

impl Aci {
    fn norm(&self, t: &Expr) -> TResult<Proof> {
        let op = self.0;
        let Some((a, b)) = op.split(t) else {
            return Ok(Proof::refl(t.clone()));
        };
        let pa = self.norm(a)?;
        let pb = self.norm(b)?;
        let mid = Chain::new(t.clone()).by(pa, &[0])?.by(pb, &[1])?.done();
        let merged = self.merge(mid.rhs())?;
        mid.then(merged)
    }

    /// `A ⊕ B` with both operands canonical.
    fn merge(&self, t: &Expr) -> TResult<Proof> {
        let op = self.0;
        let (a, _) = op.split(t).expect("merge of a compound term");
        if op.split(a).is_none() {
            return self.insert(t);
        }
        let c = Chain::new(t.clone()).ax(op.assoc(), R2L, &[])?;
        let inner = self.merge(&child(c.current(), 1))?;
        let c = c.by(inner, &[1])?;
        let ins = self.insert(c.current())?;
        Ok(c.by(ins, &[])?.done())
    }

    /// `x ⊕ L` with `x` an operand and `L` canonical.
    fn insert(&self, t: &Expr) -> TResult<Proof> {
        let op = self.0;
        let (x, l) = op.split(t).expect("insert into a compound term");
        let c = Chain::new(t.clone());
        if op == AciOp::Sum && *x == Expr::Zero {
            return Ok(c.ax(PlusCom, L2R, &[])?.ax(Plus0, L2R, &[])?.done());
        }
        if op == AciOp::Sum && *l == Expr::Zero {
            return Ok(c.ax(Plus0, L2R, &[])?.done());
        }
        match op.split(l) {
            None => Ok(match leaf_order(x, l) {
                Ordering::Less => c.done(),
                Ordering::Equal => c.by(op.idem(x)?, &[])?.done(),
                Ordering::Greater => c.ax(op.comm(), L2R, &[])?.done(),
            }),
            Some((y, _)) => Ok(match leaf_order(x, y) {
                Ordering::Less => c.done(),
                Ordering::Equal => c.ax(op.assoc(), L2R, &[])?.by(op.idem(x)?, &[0])?.done(),
                Ordering::Greater => {
                    let c = c.ax(op.assoc(), L2R, &[])?.ax(op.comm(), L2R, &[0])?.ax(op.assoc(), R2L, &[])?;
                    let rest = self.insert(&child(c.current(), 1))?;
                    c.by(rest, &[1])?.done()
                }
            }),
        }
    }
}

fn child(e: &Expr, i: usize) -> Expr {
    e.children()[i].clone()
}

/// Proof of `t ≡ n` where `n` is the canonical form of `t` modulo ACI of `op`:
/// operands right-nested, sorted, without repetition (and without `0` for sums).
pub fn aci_normalize(op: AciOp, t: &Expr) -> TResult<Proof> {
    Aci(op).norm(t)
}

/// `a ≡ b` modulo associativity, commutativity and idempotence of `op`.
pub fn aci_eq(op: AciOp, a: &Expr, b: &Expr) -> TResult<Proof> {
    let pa = aci_normalize(op, a)?;
    let pb = aci_normalize(op, b)?;
    if pa.rhs != pb.rhs {
        return Err(TacticError::NotAci(a.clone(), b.clone()));
    }
    pa.then(pb.sym())
}

/// `e ∩ (e + f) ≡ e`.
pub fn meet_absorb(e: &Expr, f: &Expr) -> TResult<Proof> {
    let t = Expr::inter(e.clone(), Expr::sum(e.clone(), f.clone()));
    Chain::new(t)
        .ax(InterComm, L2R, &[])?
        .ax(PlusInter, L2R, &[])?
        .ax(InterIdem, L2R, &[0])?
        .ax(PlusCom, L2R, &[])?
        .ax(InterComm, L2R, &[0])?
        .ax(InterPlus, L2R, &[])?
        .ends_at(e)
}

/// A derivation of `lo ≤ hi`, that is of `lo + hi ≡ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leq {
    lo: Expr,
    hi: Expr,
    proof: Proof,
}

impl Leq {
    pub fn lo(&self) -> &Expr {
        &self.lo
    }

    pub fn hi(&self) -> &Expr {
        &self.hi
    }

    /// The underlying proof of `lo + hi ≡ hi`.
    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn into_proof(self) -> Proof {
        self.proof
    }

    /// Wraps a proof of `lo + hi ≡ hi`.
    pub fn from_sum_proof(p: Proof) -> TResult<Leq> {
        match (p.lhs(), p.rhs()) {
            (Expr::Sum(lo, hi), r) if **hi == *r => Ok(Leq { lo: (**lo).clone(), hi: r.clone(), proof: p }),
            _ => mismatch(&Expr::sum(Expr::var("_"), p.rhs().clone()), p.lhs()),
        }
    }

    pub fn refl(e: &Expr) -> TResult<Leq> {
        Leq::from_sum_proof(sum_idem(e)?)
    }

    pub fn from_eq(p: Proof) -> TResult<Leq> {
        let (a, b) = (p.lhs().clone(), p.rhs().clone());
        let q = Chain::new(Expr::sum(a, b.clone())).by(p, &[0])?.by(sum_idem(&b)?, &[])?.done();
        Leq::from_sum_proof(q)
    }

    pub fn trans(self, next: Leq) -> TResult<Leq> {
        if self.hi != next.lo {
            return mismatch(&self.hi, &next.lo);
        }
        let q = Chain::new(Expr::sum(self.lo.clone(), next.hi.clone()))
            .by(next.proof.clone().sym(), &[1])?
            .ax(PlusAss, L2R, &[])?
            .by(self.proof, &[0])?
            .by(next.proof, &[])?
            .done();
        Leq::from_sum_proof(q)
    }

    /// `a ≤ c` and `b ≤ c` give `a + b ≤ c`.
    pub fn join(self, other: Leq) -> TResult<Leq> {
        if self.hi != other.hi {
            return mismatch(&self.hi, &other.hi);
        }
        let q = Chain::new(Expr::sum(Expr::sum(self.lo.clone(), other.lo.clone()), self.hi.clone()))
            .ax(PlusAss, R2L, &[])?
            .by(other.proof, &[1])?
            .by(self.proof, &[])?
            .done();
        Leq::from_sum_proof(q)
    }

    /// Joins a non-empty list of bounds of the same upper term, right-nested.
    pub fn join_all(mut parts: Vec<Leq>) -> TResult<Leq> {
        let mut acc = parts.pop().expect("at least one bound");
        while let Some(p) = parts.pop() {
            acc = p.join(acc)?;
        }
        Ok(acc)
    }

    /// `a ≤ b` gives `a·c ≤ b·c`.
    pub fn prod_left(self, c: &Expr) -> TResult<Leq> {
        let q = Chain::new(Expr::sum(Expr::prod(self.lo.clone(), c.clone()), Expr::prod(self.hi.clone(), c.clone())))
            .ax(PlusSeq, R2L, &[])?
            .by(self.proof, &[0])?
            .done();
        Leq::from_sum_proof(q)
    }

    /// `a ≤ b` gives `c·a ≤ c·b`.
    pub fn prod_right(self, c: &Expr) -> TResult<Leq> {
        let q = Chain::new(Expr::sum(Expr::prod(c.clone(), self.lo.clone()), Expr::prod(c.clone(), self.hi.clone())))
            .ax(SeqPlus, R2L, &[])?
            .by(self.proof, &[1])?
            .done();
        Leq::from_sum_proof(q)
    }

    /// `a ≤ b` gives `a' ≤ b'`.
    pub fn mirror(self) -> TResult<Leq> {
        let q = Chain::new(Expr::sum(Expr::mirror(self.lo.clone()), Expr::mirror(self.hi.clone())))
            .ax(ConvPlus, R2L, &[])?
            .by(self.proof, &[0])?
            .done();
        Leq::from_sum_proof(q)
    }

    /// `a ≤ b` and `b ≤ a` give `a ≡ b`.
    pub fn antisym(self, back: Leq) -> TResult<Proof> {
        if self.lo != back.hi || self.hi != back.lo {
            return mismatch(&self.lo, &back.hi);
        }
        Chain::new(self.lo.clone()).by(back.proof.sym(), &[])?.ax(PlusCom, L2R, &[])?.by(self.proof, &[])?.ends_at(&self.hi)
    }

    /// `lo ≤ hi` when every summand of `lo` is a summand of `hi`.
    pub fn by_aci(lo: &Expr, hi: &Expr) -> TResult<Leq> {
        Leq::from_sum_proof(aci_eq(AciOp::Sum, &Expr::sum(lo.clone(), hi.clone()), hi)?)
    }

    /// Replaces the lower side using `eq: a ≡ lo`.
    pub fn lower(self, eq: Proof) -> TResult<Leq> {
        if *eq.rhs() != self.lo {
            return mismatch(&self.lo, eq.rhs());
        }
        let q = Chain::new(Expr::sum(eq.lhs().clone(), self.hi.clone())).by(eq, &[0])?.by(self.proof, &[])?.done();
        Leq::from_sum_proof(q)
    }

    /// Replaces the upper side using `eq: hi ≡ b`.
    pub fn upper(self, eq: Proof) -> TResult<Leq> {
        self.trans(Leq::from_eq(eq)?)
    }

    /// `x ∩ y ≡ x` gives `x ≤ y`.
    pub fn from_meet(p: Proof) -> TResult<Leq> {
        let Expr::Inter(x, y) = p.lhs().clone() else {
            return mismatch(&Expr::inter(p.rhs().clone(), Expr::var("_")), p.lhs());
        };
        if *p.rhs() != *x {
            return mismatch(&x, p.rhs());
        }
        let q = Chain::new(Expr::sum((*x).clone(), (*y).clone()))
            .by(p.sym(), &[0])?
            .ax(InterComm, L2R, &[0])?
            .ax(InterPlus, L2R, &[])?
            .done();
        Leq::from_sum_proof(q)
    }

    /// `x ≤ y` gives `x ∩ y ≡ x`.
    pub fn to_meet(self) -> TResult<Proof> {
        let absorb = meet_absorb(&self.lo, &self.hi)?;
        Chain::new(Expr::inter(self.lo.clone(), self.hi.clone())).by(self.proof.sym(), &[1])?.by(absorb, &[])?.ends_at(&self.lo)
    }

    /// From `e ≤ g` and `g·e ≤ g`, by right induction, `e⁺ ≤ g`.
    pub fn plus_least(base: Leq, step: Leq) -> TResult<Leq> {
        let e = base.lo.clone();
        let g = base.hi.clone();
        if step.lo != Expr::prod(g.clone(), e.clone()) || step.hi != g {
            return mismatch(&Expr::prod(g.clone(), e.clone()), &step.lo);
        }
        let ep = Expr::plus(e.clone());
        // g·e⁺ + g ≡ g
        let ind = Proof::conditional(&Expr::sum(Expr::prod(g.clone(), ep.clone()), g.clone()), RightInd, &[], Bindings::new(), step.proof)?;
        let ind = Leq::from_sum_proof(ind)?;
        let tail = base.clone().prod_left(&ep)?.trans(ind)?;
        let unfold = Proof::step(&ep, IterLeft, L2R, &[], Bindings::new())?;
        base.join(tail)?.lower(unfold)
    }

    /// `e ≤ f` gives `e⁺ ≤ f⁺`.
    pub fn plus_mono(self) -> TResult<Leq> {
        let f = self.hi.clone();
        let fp = Expr::plus(f.clone());
        let left = Proof::step(&fp, IterLeft, L2R, &[], Bindings::new())?;
        let f_le_fp = Leq::by_aci(&f, left.rhs())?.upper(left.sym())?;
        let base = self.clone().trans(f_le_fp)?;
        let right = Proof::step(&fp, IterRight, L2R, &[], Bindings::new())?;
        let fpf_le_fp = Leq::by_aci(&Expr::prod(fp.clone(), f.clone()), right.rhs())?.upper(right.sym())?;
        let step = self.prod_right(&fp)?.trans(fpf_le_fp)?;
        Leq::plus_least(base, step)
    }
}
