use std::fmt;

use crate::syntax::Expr;

/// A position in an expression tree: the sequence of child indices from the root.
/// Binary nodes have children `0` and `1`, unary nodes only `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, i: usize) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    /// `self` followed by `rest`.
    pub fn join(&self, rest: &Path) -> Path {
        Path(self.0.iter().chain(&rest.0).copied().collect())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&[usize]> for Path {
    fn from(v: &[usize]) -> Path {
        Path(v.to_vec())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

pub fn subterm<'a>(e: &'a Expr, p: &Path) -> Option<&'a Expr> {
    let mut cur = e;
    for &i in &p.0 {
        cur = *cur.children().get(i)?;
    }
    Some(cur)
}

/// `e` with the subterm at `p` replaced by `new`; `None` if `p` does not resolve.
pub fn replace(e: &Expr, p: &Path, new: Expr) -> Option<Expr> {
    replace_from(e, &p.0, new)
}

fn replace_from(e: &Expr, p: &[usize], new: Expr) -> Option<Expr> {
    let Some((&i, rest)) = p.split_first() else {
        return Some(new);
    };
    let b = |x: Expr| Box::new(x);
    Some(match (e, i) {
        (Expr::Sum(l, r), 0) => Expr::Sum(b(replace_from(l, rest, new)?), r.clone()),
        (Expr::Sum(l, r), 1) => Expr::Sum(l.clone(), b(replace_from(r, rest, new)?)),
        (Expr::Prod(l, r), 0) => Expr::Prod(b(replace_from(l, rest, new)?), r.clone()),
        (Expr::Prod(l, r), 1) => Expr::Prod(l.clone(), b(replace_from(r, rest, new)?)),
        (Expr::Inter(l, r), 0) => Expr::Inter(b(replace_from(l, rest, new)?), r.clone()),
        (Expr::Inter(l, r), 1) => Expr::Inter(l.clone(), b(replace_from(r, rest, new)?)),
        (Expr::Plus(a), 0) => Expr::Plus(b(replace_from(a, rest, new)?)),
        (Expr::Mirror(a), 0) => Expr::Mirror(b(replace_from(a, rest, new)?)),
        _ => return None,
    })
}

/// Every position of `e`, in pre-order.
pub fn positions(e: &Expr) -> Vec<Path> {
    fn go(e: &Expr, here: &mut Vec<usize>, out: &mut Vec<Path>) {
        out.push(Path(here.clone()));
        for (i, c) in e.children().into_iter().enumerate() {
            here.push(i);
            go(c, here, out);
            here.pop();
        }
    }
    let mut out = Vec::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn resolve_and_replace() {
        let e = parse("(x + y) . z'").unwrap();
        assert_eq!(subterm(&e, &Path(vec![0, 1])), Some(&parse("y").unwrap()));
        assert_eq!(subterm(&e, &Path(vec![1, 0])), Some(&parse("z").unwrap()));
        assert_eq!(subterm(&e, &Path(vec![1, 1])), None);
        assert_eq!(replace(&e, &Path(vec![1]), Expr::One), Some(parse("(x + y) . 1").unwrap()));
        assert_eq!(replace(&e, &Path(vec![2]), Expr::One), None);
        assert_eq!(positions(&e).len(), e.size());
        assert_eq!(Path(vec![0, 1]).to_string(), "[0,1]");
    }
}
