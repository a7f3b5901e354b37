//! Derivations of the derived laws of reversible Kleene lattices and of the
//! identities satisfied by tests, built with the tactics.
//!
//! Every function is schematic: the laws hold for arbitrary expressions and test
//! sets. [`table2`] and [`test_identities`] instantiate them at fixed arguments;
//! these are the instances shipped as script files.

use super::axioms::Bindings;
use super::derivation::{Derivation, Orientation, Statement};
use super::tactics::{aci_eq, sum_idem, AciOp, Chain, Leq, Proof, TResult};
use super::AxiomId::*;
use crate::syntax::Expr;
use crate::transform::tests::{test_expr, TestSet};

use Orientation::{L2R, R2L};

fn step(src: &Expr, ax: super::AxiomId, o: Orientation) -> TResult<Proof> {
    Proof::step(src, ax, o, &[], Bindings::new())
}

/// `e + e ≡ e`
pub fn eq7(e: &Expr) -> TResult<Proof> {
    sum_idem(e)
}

/// `e ∩ 0 ≡ 0`
pub fn eq8(e: &Expr) -> TResult<Proof> {
    Chain::new(Expr::inter(e.clone(), Expr::Zero))
        .ax(InterComm, L2R, &[])?
        .ax(Plus0, R2L, &[])?
        .ax(InterPlus, L2R, &[])?
        .ends_at(&Expr::Zero)
}

/// `e ∩ (e + f) ≡ e`
pub fn eq9(e: &Expr, f: &Expr) -> TResult<Proof> {
    super::tactics::meet_absorb(e, f)
}

/// `e·e⁺ + e⁺ ≡ e⁺`, the premise of the induction in [`eq10`].
fn step_into_plus(e: &Expr) -> TResult<Proof> {
    let ep = Expr::plus(e.clone());
    let unfolded = Expr::sum(e.clone(), Expr::prod(e.clone(), ep.clone()));
    let c = Chain::new(Expr::sum(Expr::prod(e.clone(), ep.clone()), ep.clone())).ax(IterLeft, L2R, &[1])?;
    let reorder = aci_eq(AciOp::Sum, c.current(), &unfolded)?;
    c.by(reorder, &[])?.ax(IterLeft, R2L, &[])?.ends_at(&ep)
}

/// `e⁺·e⁺ ≤ e⁺`
pub fn eq10(e: &Expr) -> TResult<Leq> {
    let ep = Expr::plus(e.clone());
    let goal = Expr::sum(Expr::prod(ep.clone(), ep.clone()), ep.clone());
    Leq::from_sum_proof(Chain::new(goal).cax(LeftInd, &[], step_into_plus(e)?)?.ends_at(&ep)?)
}

/// `(e⁺)⁺ ≡ e⁺`
pub fn eq11(e: &Expr) -> TResult<Proof> {
    let ep = Expr::plus(e.clone());
    Chain::new(Expr::plus(ep.clone()))
        .ax(IterRight, L2R, &[])?
        .ax(PlusCom, L2R, &[])?
        .cax(LeftInd, &[], eq10(e)?.into_proof())?
        .ends_at(&ep)
}

/// `e ≤ e⁺`
fn below_plus(e: &Expr) -> TResult<Leq> {
    let unfold = step(&Expr::plus(e.clone()), IterLeft, L2R)?;
    Leq::by_aci(e, unfold.rhs())?.upper(unfold.sym())
}

/// `(1 + e)⁺ ≡ 1 + e⁺`
pub fn eq12(e: &Expr) -> TResult<Proof> {
    let one_e = Expr::sum(Expr::One, e.clone());
    let p = Expr::plus(one_e.clone());
    let ep = Expr::plus(e.clone());
    let q = Expr::sum(Expr::One, ep.clone());

    // 1 + e⁺ ≤ (1 + e)⁺
    let unfold_p = step(&p, IterLeft, L2R)?;
    let one_le_p = Leq::by_aci(&Expr::One, unfold_p.rhs())?.upper(unfold_p.sym())?;
    let ep_le_p = Leq::by_aci(e, &one_e)?.plus_mono()?;
    let q_le_p = one_le_p.join(ep_le_p)?;

    // (1 + e)⁺ ≤ 1 + e⁺, by induction
    let one_le_q = Leq::by_aci(&Expr::One, &q)?;
    let e_le_q = below_plus(e)?.trans(Leq::by_aci(&ep, &q)?)?;
    let base = one_le_q.join(e_le_q)?;
    let expand = Chain::new(Expr::prod(q.clone(), one_e.clone()))
        .ax(PlusSeq, L2R, &[])?
        .ax(Seq1L, L2R, &[0])?
        .ax(SeqPlus, L2R, &[1])?
        .ax(Seq1R, L2R, &[1, 0])?
        .done();
    let widen = Chain::new(q.clone()).by(sum_idem(&ep)?.sym(), &[1])?.ax(IterRight, L2R, &[1, 1])?.done();
    let step_le = Leq::by_aci(expand.rhs(), widen.rhs())?.upper(widen.sym())?.lower(expand)?;
    let p_le_q = Leq::plus_least(base, step_le)?;
    p_le_q.antisym(q_le_p)
}

/// `0' ≡ 0`
pub fn eq13() -> TResult<Proof> {
    let zero_m = Expr::mirror(Expr::Zero);
    Chain::new(zero_m.clone())
        .ax_with(Seq0L, R2L, &[0], &[("e", zero_m)])?
        .ax(ConvSeq, L2R, &[])?
        .ax(ConvConv, L2R, &[1])?
        .ax(Seq0L, L2R, &[])?
        .ends_at(&Expr::Zero)
}

/// `1' ≡ 1`
pub fn eq14() -> TResult<Proof> {
    Chain::new(Expr::mirror(Expr::One))
        .ax(Seq1R, R2L, &[])?
        .ax(ConvConv, R2L, &[1])?
        .ax(ConvSeq, R2L, &[])?
        .ax(Seq1R, L2R, &[0])?
        .ax(ConvConv, L2R, &[])?
        .ends_at(&Expr::One)
}

/// `0⁺ ≡ 0`
pub fn eq15() -> TResult<Proof> {
    Chain::new(Expr::plus(Expr::Zero))
        .ax(IterLeft, L2R, &[])?
        .ax(Seq0R, L2R, &[1])?
        .ax(Plus0, L2R, &[])?
        .ends_at(&Expr::Zero)
}

/// `1⁺ ≡ 1`
pub fn eq16() -> TResult<Proof> {
    let one_one = Expr::sum(Expr::prod(Expr::One, Expr::One), Expr::One);
    let premise = Chain::new(one_one).ax(Seq1L, L2R, &[0])?.by(sum_idem(&Expr::One)?, &[])?.ends_at(&Expr::One)?;
    Chain::new(Expr::plus(Expr::One))
        .ax(IterRight, L2R, &[])?
        .ax(PlusCom, L2R, &[])?
        .cax(LeftInd, &[], premise)?
        .ends_at(&Expr::One)
}

/// `⟨A⟩ ≡ 1 ∩ ⟨A⟩`
pub fn test_lift(a: &TestSet) -> TResult<Proof> {
    let t = test_expr(a);
    aci_eq(AciOp::Inter, &t, &Expr::inter(Expr::One, t.clone()))
}

/// `⟨A⟩ ≤ 1`
pub fn test_sub_id(a: &TestSet) -> TResult<Leq> {
    let t = test_expr(a);
    Leq::from_meet(aci_eq(AciOp::Inter, &Expr::inter(t.clone(), Expr::One), &t)?)
}

/// `⟨A⟩ ≤ ⟨B⟩`, derivable exactly when `B ⊆ A`.
pub fn tests_leq(a: &TestSet, b: &TestSet) -> Option<Leq> {
    if !b.is_subset(a) {
        return None;
    }
    let (ta, tb) = (test_expr(a), test_expr(b));
    let meet = aci_eq(AciOp::Inter, &Expr::inter(ta.clone(), tb), &ta).expect("subset tests meet to the larger one");
    Some(Leq::from_meet(meet).expect("meet proof has the right shape"))
}

/// `⟨A⟩ ≤ a` for `a ∈ A`.
pub fn test_below_var(a: &TestSet, x: &Expr) -> TResult<Leq> {
    let t = test_expr(a);
    Leq::from_meet(aci_eq(AciOp::Inter, &Expr::inter(t.clone(), x.clone()), &t)?)
}

/// `⟨A⟩ ∩ ⟨B⟩ ≡ ⟨A ∪ B⟩`
pub fn test_meet_union(a: &TestSet, b: &TestSet) -> TResult<Proof> {
    aci_eq(AciOp::Inter, &Expr::inter(test_expr(a), test_expr(b)), &test_expr(&a.union(b)))
}

/// `⟨A⟩ · ⟨B⟩ ≡ ⟨A ∪ B⟩`
pub fn test_prod_union(a: &TestSet, b: &TestSet) -> TResult<Proof> {
    let (ta, tb) = (test_expr(a), test_expr(b));
    let x = Expr::prod(ta.clone(), tb.clone());
    let below_one = test_sub_id(a)?
        .prod_left(&tb)?
        .upper(step(&Expr::prod(Expr::One, tb.clone()), Seq1L, L2R)?)?
        .trans(test_sub_id(b)?)?;
    let meet = below_one.to_meet()?;
    let c = Chain::new(x).by(meet.sym(), &[])?.ax(InterComm, L2R, &[])?.ax(TestSeqInter, L2R, &[])?;
    let tidy = aci_eq(AciOp::Inter, c.current(), &test_expr(&a.union(b)))?;
    c.by(tidy, &[])?.ends_at(&test_expr(&a.union(b)))
}

/// `⟨A⟩ ≡ ⟨A⟩ · ⟨A⟩`
pub fn test_idem(a: &TestSet) -> TResult<Proof> {
    Ok(test_prod_union(a, a)?.sym())
}

/// `⟨A⟩ · e ≡ e · ⟨A⟩`
pub fn test_commute(a: &TestSet, e: &Expr) -> TResult<Proof> {
    let lift = test_lift(a)?;
    Chain::new(Expr::prod(test_expr(a), e.clone()))
        .by(lift.clone(), &[0])?
        .ax(TestSeqCom, L2R, &[])?
        .by(lift.sym(), &[1])?
        .ends_at(&Expr::prod(e.clone(), test_expr(a)))
}

/// `(⟨A⟩ · e) ∩ (⟨B⟩ · f) ≡ ⟨A ∪ B⟩ · (e ∩ f)`
pub fn test_meet_prod(a: &TestSet, b: &TestSet, e: &Expr, f: &Expr) -> TResult<Proof> {
    let (la, lb) = (test_lift(a)?, test_lift(b)?);
    let start = Expr::inter(Expr::prod(test_expr(a), e.clone()), Expr::prod(test_expr(b), f.clone()));
    Chain::new(start)
        .by(la.clone(), &[0, 0])?
        .ax(TestInter, L2R, &[])?
        .ax(InterComm, L2R, &[1])?
        .by(lb.clone(), &[1, 0, 0])?
        .ax(TestInter, L2R, &[1])?
        .by(lb.sym(), &[1, 0])?
        .by(la.sym(), &[0])?
        .ax(SeqAssoc, L2R, &[])?
        .by(test_prod_union(a, b)?, &[0])?
        .ax(InterComm, L2R, &[1])?
        .ends_at(&Expr::prod(test_expr(&a.union(b)), Expr::inter(e.clone(), f.clone())))
}

/// `⟨A⟩⁺ ≡ ⟨A⟩`
pub fn test_plus(a: &TestSet) -> TResult<Proof> {
    let t = test_expr(a);
    let square = Leq::from_eq(test_prod_union(a, a)?)?;
    let down = Leq::plus_least(Leq::refl(&t)?, square)?;
    down.antisym(below_plus(&t)?)
}

/// `⟨A⟩' ≡ ⟨A⟩`
pub fn test_conv(a: &TestSet) -> TResult<Proof> {
    let t = test_expr(a);
    let below_one = test_sub_id(a)?.mirror()?.upper(eq14()?)?;
    let meet = below_one.to_meet()?;
    Chain::new(Expr::mirror(t.clone()))
        .by(meet.sym(), &[])?
        .ax(InterComm, L2R, &[])?
        .ax(TestConv, L2R, &[])?
        .by(test_lift(a)?.sym(), &[])?
        .ends_at(&t)
}

/// A named law with its statement and derivation.
#[derive(Clone, Debug)]
pub struct LawProof {
    pub name: &'static str,
    pub statement: Statement,
    pub derivation: Derivation,
}

fn law(name: &'static str, p: Proof) -> LawProof {
    let family = Statement::inferred_family(p.lhs(), p.rhs());
    LawProof { name, statement: Statement::equiv(p.lhs().clone(), p.rhs().clone(), family), derivation: p.into_derivation() }
}

fn leq_law(name: &'static str, l: Leq) -> LawProof {
    let family = Statement::inferred_family(l.lo(), l.hi());
    let statement = Statement::leq(l.lo().clone(), l.hi().clone(), family);
    LawProof { name, statement, derivation: l.into_proof().into_derivation() }
}

/// The derived laws, instantiated at the variables `e` and `f`.
pub fn table2() -> Vec<LawProof> {
    let e = Expr::var("e");
    let f = Expr::var("f");
    let build = || -> TResult<Vec<LawProof>> {
        Ok(vec![
            law("eq7", eq7(&e)?),
            law("eq8", eq8(&e)?),
            law("eq9", eq9(&e, &f)?),
            leq_law("eq10", eq10(&e)?),
            law("eq11", eq11(&e)?),
            law("eq12", eq12(&e)?),
            law("eq13", eq13()?),
            law("eq14", eq14()?),
            law("eq15", eq15()?),
            law("eq16", eq16()?),
        ])
    };
    build().expect("library derivations are well formed")
}

/// The test identities, instantiated at `A = {a, b}`, `B = {b, c}` and the
/// variables `e`, `f`.
pub fn test_identities() -> Vec<LawProof> {
    let a = TestSet::of(&["a", "b"]);
    let b = TestSet::of(&["b", "c"]);
    let e = Expr::var("e");
    let f = Expr::var("f");
    let build = || -> TResult<Vec<LawProof>> {
        Ok(vec![
            leq_law("test-sub-id", test_sub_id(&a)?),
            law("test-meet", test_meet_union(&a, &b)?),
            law("test-prod", test_prod_union(&a, &b)?),
            law("test-idem", test_idem(&a)?),
            leq_law("test-var", test_below_var(&a, &Expr::var("a"))?),
            law("test-commute", test_commute(&a, &e)?),
            law("test-meet-prod", test_meet_prod(&a, &b, &e, &f)?),
            law("test-plus", test_plus(&a)?),
            law("test-conv", test_conv(&a)?),
        ])
    };
    build().expect("library derivations are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::derivation::check;
    use crate::syntax::{parse, GrammarFamily};

    #[test]
    fn table2_checks() {
        for l in table2() {
            assert_eq!(check(&l.derivation, &l.statement), Ok(()), "{}", l.name);
        }
    }

    #[test]
    fn test_identities_check() {
        for l in test_identities() {
            assert_eq!(check(&l.derivation, &l.statement), Ok(()), "{}", l.name);
        }
    }

    #[test]
    fn statements_are_the_laws() {
        let t = table2();
        let stmt = |i: usize| t[i].statement.to_string();
        assert_eq!(stmt(0), "e + e == e");
        assert_eq!(stmt(3), "e^+ . e^+ <= e^+");
        assert_eq!(stmt(5), "(1 + e)^+ == 1 + e^+");
        assert_eq!(t[5].statement.family, GrammarFamily::Full);
    }

    #[test]
    fn schematic_instances() {
        let e = parse("x . y' + z^+").unwrap();
        let f = parse("x & 1").unwrap();
        for (p, fam) in [
            (eq11(&e).unwrap(), GrammarFamily::OneFree),
            (eq12(&e).unwrap(), GrammarFamily::Full),
            (eq9(&e, &f).unwrap(), GrammarFamily::Full),
        ] {
            let s = Statement::equiv(p.lhs().clone(), p.rhs().clone(), fam);
            assert_eq!(check(p.derivation(), &s), Ok(()));
        }
        let a = TestSet::of(&["x"]);
        let b = TestSet::empty();
        let p = test_meet_prod(&a, &b, &e, &f).unwrap();
        let s = Statement::equiv(p.lhs().clone(), p.rhs().clone(), GrammarFamily::Full);
        assert_eq!(check(p.derivation(), &s), Ok(()));
    }
}
