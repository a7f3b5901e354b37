//! Derivations and their checker.
//!
//! A derivation is read as a function on terms: given a source term it either
//! produces the term it rewrites the source into, or fails. `check` runs the
//! derivation forward from the statement's left side and compares with its right
//! side. `Sym` runs its child backward, which for an axiom step means applying the
//! opposite orientation at the same position.

use std::fmt;
use std::str::FromStr;

use super::axioms::{check_metavars, instantiate_schema, match_schema, AxiomError, AxiomId, Bindings};
use super::path::{replace, subterm, Path};
use crate::syntax::{check_family, parse, Expr, GrammarFamily, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    L2R,
    R2L,
}

impl Orientation {
    pub fn flip(self) -> Orientation {
        match self {
            Orientation::L2R => Orientation::R2L,
            Orientation::R2L => Orientation::L2R,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::L2R => "L2R",
            Orientation::R2L => "R2L",
        })
    }
}

/// One use of an axiom at a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub axiom: AxiomId,
    pub orientation: Orientation,
    pub at: Path,
    /// Metavariables not bound here are inferred by matching.
    pub bindings: Bindings,
}

impl Step {
    pub fn new(axiom: AxiomId, orientation: Orientation, at: Path, bindings: Bindings) -> Step {
        Step { axiom, orientation, at, bindings }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Refl(Expr),
    Sym(Box<Derivation>),
    Trans(Box<Derivation>, Box<Derivation>),
    Ax(Step),
    /// A conditional axiom with a derivation of its instantiated premise.
    CAx(Step, Box<Derivation>),
}

impl Derivation {
    pub fn sym(d: Derivation) -> Derivation {
        Derivation::Sym(Box::new(d))
    }

    pub fn trans(a: Derivation, b: Derivation) -> Derivation {
        Derivation::Trans(Box::new(a), Box::new(b))
    }

    /// Left-nested chain of `Trans`; `None` for an empty list.
    pub fn chain(ds: impl IntoIterator<Item = Derivation>) -> Option<Derivation> {
        ds.into_iter().reduce(Derivation::trans)
    }

    /// Number of axiom steps, premises included.
    pub fn steps(&self) -> usize {
        match self {
            Derivation::Refl(_) => 0,
            Derivation::Sym(d) => d.steps(),
            Derivation::Trans(a, b) => a.steps() + b.steps(),
            Derivation::Ax(_) => 1,
            Derivation::CAx(_, p) => 1 + p.steps(),
        }
    }

    /// The same derivation acting on the subterm at `prefix` of a larger term.
    /// Premises are statements of their own and stay unchanged.
    pub fn lift(&self, prefix: &Path, ctx: &Expr) -> Derivation {
        match self {
            Derivation::Refl(e) => Derivation::Refl(replace(ctx, prefix, e.clone()).expect("prefix resolves in context")),
            Derivation::Sym(d) => Derivation::sym(d.lift(prefix, ctx)),
            Derivation::Trans(a, b) => Derivation::trans(a.lift(prefix, ctx), b.lift(prefix, ctx)),
            Derivation::Ax(s) => Derivation::Ax(Step { at: prefix.join(&s.at), ..s.clone() }),
            Derivation::CAx(s, p) => Derivation::CAx(Step { at: prefix.join(&s.at), ..s.clone() }, p.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equiv,
    Leq,
}

/// `lhs ≡ rhs` or `lhs ≤ rhs`, to be derived with the axioms allowed in `family`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub relation: Relation,
    pub lhs: Expr,
    pub rhs: Expr,
    pub family: GrammarFamily,
}

impl Statement {
    pub fn equiv(lhs: Expr, rhs: Expr, family: GrammarFamily) -> Statement {
        Statement { relation: Relation::Equiv, lhs, rhs, family }
    }

    pub fn leq(lhs: Expr, rhs: Expr, family: GrammarFamily) -> Statement {
        Statement { relation: Relation::Leq, lhs, rhs, family }
    }

    /// The smallest family containing both sides.
    pub fn inferred_family(lhs: &Expr, rhs: &Expr) -> GrammarFamily {
        let (a, b) = (lhs.family(), rhs.family());
        if a.within(b) {
            b
        } else {
            a
        }
    }

    /// The equation a derivation has to establish: `e ≤ f` is `e + f ≡ f`.
    pub fn goal(&self) -> (Expr, Expr) {
        match self.relation {
            Relation::Equiv => (self.lhs.clone(), self.rhs.clone()),
            Relation::Leq => (Expr::sum(self.lhs.clone(), self.rhs.clone()), self.rhs.clone()),
        }
    }

    /// Parses `e == f` or `e <= f`; the family is inferred from the sides.
    pub fn parse(text: &str) -> Result<Statement, StatementParseError> {
        let (relation, l, r) = if let Some((l, r)) = text.split_once("==") {
            (Relation::Equiv, l, r)
        } else if let Some((l, r)) = text.split_once("<=") {
            (Relation::Leq, l, r)
        } else {
            return Err(StatementParseError::NoRelation);
        };
        let lhs = parse(l).map_err(StatementParseError::Lhs)?;
        let rhs = parse(r).map_err(StatementParseError::Rhs)?;
        let family = Statement::inferred_family(&lhs, &rhs);
        Ok(Statement { relation, lhs, rhs, family })
    }

    pub fn with_family(mut self, family: GrammarFamily) -> Statement {
        self.family = family;
        self
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Equiv => "==",
            Relation::Leq => "<=",
        };
        write!(f, "{} {rel} {}", self.lhs, self.rhs)
    }
}

impl FromStr for Statement {
    type Err = StatementParseError;

    fn from_str(s: &str) -> Result<Statement, StatementParseError> {
        Statement::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StatementParseError {
    #[error("expected `==` or `<=` between the two sides")]
    NoRelation,
    #[error("left side: {0}")]
    Lhs(ParseError),
    #[error("right side: {0}")]
    Rhs(ParseError),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CheckFailure {
    #[error("path {path} does not resolve in `{term}`")]
    PathOutOfRange { path: Path, term: Expr },
    #[error("`{subterm}` does not match the {side} side `{schema}` of {axiom}")]
    SchemaMismatch { axiom: AxiomId, side: &'static str, schema: Expr, subterm: Expr },
    #[error("{axiom} is not available for {family} expressions")]
    AxiomOutsideFamily { axiom: AxiomId, family: GrammarFamily },
    #[error("term `{term}` is not a {family} expression")]
    TermOutsideFamily { term: Expr, family: GrammarFamily },
    #[error(transparent)]
    Binding(#[from] AxiomError),
    #[error("{0} is conditional and needs a premise derivation (cax)")]
    MissingPremise(AxiomId),
    #[error("{0} is not conditional")]
    UnexpectedPremise(AxiomId),
    #[error("premise derivation proves `{got}` instead of `{expected}`")]
    PremiseMismatch { expected: Expr, got: Expr },
    #[error("refl of `{stated}` applied to `{actual}`")]
    ReflMismatch { stated: Expr, actual: Expr },
    #[error("derivation ends in `{got}` but the statement needs `{expected}`")]
    Conclusion { expected: Expr, got: Expr },
}

/// A failure and the address of the derivation node it occurred at. Children are
/// numbered as written: `sym` has child 0, `trans` children 0 and 1, and the premise
/// of `cax` is its child 0.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at node {node}: {failure}")]
pub struct CheckError {
    pub node: Path,
    pub failure: CheckFailure,
}

pub type Report = Result<(), CheckError>;

struct Checker {
    family: GrammarFamily,
}

impl Checker {
    fn fail<T>(node: &[usize], failure: CheckFailure) -> Result<T, CheckError> {
        Err(CheckError { node: Path(node.to_vec()), failure })
    }

    fn in_family(&self, t: &Expr, node: &[usize]) -> Result<(), CheckError> {
        if check_family(t, self.family) {
            Ok(())
        } else {
            Checker::fail(node, CheckFailure::TermOutsideFamily { term: t.clone(), family: self.family })
        }
    }

    fn run(&self, d: &Derivation, src: &Expr, forward: bool, node: &mut Vec<usize>) -> Result<Expr, CheckError> {
        match d {
            Derivation::Refl(e) => {
                if e != src {
                    return Checker::fail(node, CheckFailure::ReflMismatch { stated: e.clone(), actual: src.clone() });
                }
                Ok(src.clone())
            }
            Derivation::Sym(inner) => {
                node.push(0);
                let r = self.run(inner, src, !forward, node);
                node.pop();
                r
            }
            Derivation::Trans(a, b) => {
                let (first, second, i, j) = if forward { (a, b, 0, 1) } else { (b, a, 1, 0) };
                node.push(i);
                let mid = self.run(first, src, forward, node)?;
                node.pop();
                node.push(j);
                let out = self.run(second, &mid, forward, node)?;
                node.pop();
                Ok(out)
            }
            Derivation::Ax(step) => {
                if step.axiom.is_conditional() {
                    return Checker::fail(node, CheckFailure::MissingPremise(step.axiom));
                }
                let orient = if forward { step.orientation } else { step.orientation.flip() };
                let (out, _) = self.apply(step, orient, src, node)?;
                Ok(out)
            }
            Derivation::CAx(step, premise) => {
                if !step.axiom.is_conditional() {
                    return Checker::fail(node, CheckFailure::UnexpectedPremise(step.axiom));
                }
                let orient = if forward { step.orientation } else { step.orientation.flip() };
                let (out, b) = self.apply(step, orient, src, node)?;
                let (pl, pr) = step.axiom.schema().premise.as_ref().expect("conditional");
                let pl = instantiate_schema(pl, &b).map_err(|e| CheckError { node: Path(node.clone()), failure: e.into() })?;
                let pr = instantiate_schema(pr, &b).map_err(|e| CheckError { node: Path(node.clone()), failure: e.into() })?;
                node.push(0);
                let got = self.run(premise, &pl, true, node)?;
                node.pop();
                if got != pr {
                    return Checker::fail(node, CheckFailure::PremiseMismatch { expected: pr, got });
                }
                Ok(out)
            }
        }
    }

    fn apply(&self, step: &Step, orient: Orientation, src: &Expr, node: &[usize]) -> Result<(Expr, Bindings), CheckError> {
        if !step.axiom.allowed_in(self.family) {
            return Checker::fail(node, CheckFailure::AxiomOutsideFamily { axiom: step.axiom, family: self.family });
        }
        let (out, b) = apply_step(step.axiom, orient, &step.at, &step.bindings, src)
            .map_err(|failure| CheckError { node: Path(node.to_vec()), failure })?;
        self.in_family(&out, node)?;
        Ok((out, b))
    }
}

/// Rewrites the subterm of `src` at `at` with one orientation of `axiom`. Returns the
/// new term and the full bindings. The premise of a conditional axiom is not checked.
pub fn apply_step(
    axiom: AxiomId,
    orient: Orientation,
    at: &Path,
    bindings: &Bindings,
    src: &Expr,
) -> Result<(Expr, Bindings), CheckFailure> {
    check_metavars(axiom, bindings)?;
    let sub = subterm(src, at).ok_or_else(|| CheckFailure::PathOutOfRange { path: at.clone(), term: src.clone() })?;
    let s = axiom.schema();
    let (from, to, side) = match orient {
        Orientation::L2R => (&s.lhs, &s.rhs, "left"),
        Orientation::R2L => (&s.rhs, &s.lhs, "right"),
    };
    let mut b = bindings.clone();
    if !match_schema(from, sub, &mut b) {
        return Err(CheckFailure::SchemaMismatch { axiom, side, schema: from.clone(), subterm: sub.clone() });
    }
    let new = instantiate_schema(to, &b)?;
    let out = replace(src, at, new).expect("path resolved above");
    Ok((out, b))
}

/// Runs `d` forward from `src` using the axioms of `family`.
pub fn rewrite_forward(d: &Derivation, src: &Expr, family: GrammarFamily) -> Result<Expr, CheckError> {
    Checker { family }.run(d, src, true, &mut Vec::new())
}

/// Checks that `d` derives `s`.
pub fn check(d: &Derivation, s: &Statement) -> Report {
    let checker = Checker { family: s.family };
    let (lhs, rhs) = s.goal();
    checker.in_family(&lhs, &[])?;
    checker.in_family(&rhs, &[])?;
    let got = checker.run(d, &lhs, true, &mut Vec::new())?;
    if got != rhs {
        return Checker::fail(&[], CheckFailure::Conclusion { expected: rhs, got });
    }
    Ok(())
}
