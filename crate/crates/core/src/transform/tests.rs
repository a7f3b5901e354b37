//! Tests `⟨A⟩`: intersections of finitely many variables with `1`.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{Expr, VarId};

/// A finite set of variables, read as the test `⟨A⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TestSet(pub BTreeSet<VarId>);

impl TestSet {
    pub fn empty() -> TestSet {
        TestSet(BTreeSet::new())
    }

    pub fn of(names: &[&str]) -> TestSet {
        TestSet(names.iter().map(|n| VarId::named(n)).collect())
    }

    pub fn vars(&self) -> &BTreeSet<VarId> {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn union(&self, other: &TestSet) -> TestSet {
        TestSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &TestSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `1` for the empty set, otherwise `a ∩ (b ∩ (… ∩ 1))` in variable order.
    pub fn to_expr(&self) -> Expr {
        test_expr(self)
    }
}

impl FromIterator<VarId> for TestSet {
    fn from_iter<I: IntoIterator<Item = VarId>>(it: I) -> TestSet {
        TestSet(it.into_iter().collect())
    }
}

impl fmt::Display for TestSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

pub fn test_expr(a: &TestSet) -> Expr {
    a.0.iter().rev().fold(Expr::One, |acc, v| Expr::inter(Expr::Var(v.clone()), acc))
}

/// The sets `C` with `1 ∩ e ≡ Σ ⟨C⟩`.
pub fn interone(e: &Expr) -> BTreeSet<TestSet> {
    match e {
        Expr::Zero => BTreeSet::new(),
        Expr::One => BTreeSet::from([TestSet::empty()]),
        Expr::Var(v) => BTreeSet::from([TestSet(BTreeSet::from([v.clone()]))]),
        Expr::Sum(a, b) => {
            let mut s = interone(a);
            s.extend(interone(b));
            s
        }
        Expr::Prod(a, b) | Expr::Inter(a, b) => {
            let left = interone(a);
            if left.is_empty() {
                return left;
            }
            let right = interone(b);
            left.iter().flat_map(|x| right.iter().map(move |y| x.union(y))).collect()
        }
        Expr::Plus(a) | Expr::Mirror(a) => interone(a),
    }
}

/// `Σ_{C ∈ interone(e)} ⟨C⟩`, left-nested, `0` when empty.
pub fn interone_sum(e: &Expr) -> Expr {
    Expr::sum_of(interone(e).iter().map(test_expr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn test_expressions() {
        assert_eq!(test_expr(&TestSet::empty()), Expr::One);
        assert_eq!(test_expr(&TestSet::of(&["x"])), parse("x & 1").unwrap());
        assert_eq!(test_expr(&TestSet::of(&["y", "x"])), parse("x & (y & 1)").unwrap());
    }

    #[test]
    fn interone_examples() {
        assert_eq!(interone(&parse("x").unwrap()), BTreeSet::from([TestSet::of(&["x"])]));
        assert!(interone(&Expr::Zero).is_empty());
        assert_eq!(
            interone(&parse("x . (y + 1)").unwrap()),
            BTreeSet::from([TestSet::of(&["x", "y"]), TestSet::of(&["x"])])
        );
        assert_eq!(interone(&parse("(x & 1)^+'").unwrap()), BTreeSet::from([TestSet::of(&["x"])]));
    }
}
