//! Pushing mirror image down to variables, and the translations between clean
//! terms over `X` and simple terms over the duplicated variables `X × 2`.

use crate::syntax::{Direction, Expr, VarId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MirrorError {
    #[error("the constant 1 cannot be combed")]
    One,
    #[error("`{0}` is not clean: mirror is applied to a compound term")]
    NotClean(Expr),
    #[error("`{0}` is not a simple term")]
    NotSimple(Expr),
    #[error("variable `{0}` carries no direction")]
    Undirected(VarId),
    #[error("variable `{0}` is already directed")]
    Directed(VarId),
}

/// `comb(e, Fwd) ≃ e` and `comb(e, Bwd) ≃ e'`, with mirror only on variables.
pub fn comb(e: &Expr, b: Direction) -> Result<Expr, MirrorError> {
    use Direction::*;
    Ok(match e {
        Expr::Zero => Expr::Zero,
        Expr::One => return Err(MirrorError::One),
        Expr::Var(_) => match b {
            Fwd => e.clone(),
            Bwd => Expr::mirror(e.clone()),
        },
        Expr::Sum(x, y) => Expr::sum(comb(x, b)?, comb(y, b)?),
        Expr::Inter(x, y) => Expr::inter(comb(x, b)?, comb(y, b)?),
        Expr::Prod(x, y) => match b {
            Fwd => Expr::prod(comb(x, Fwd)?, comb(y, Fwd)?),
            Bwd => Expr::prod(comb(y, Bwd)?, comb(x, Bwd)?),
        },
        Expr::Plus(x) => Expr::plus(comb(x, b)?),
        Expr::Mirror(x) => comb(x, b.flip())?,
    })
}

/// Mirror occurs only directly above variables.
pub fn is_clean(e: &Expr) -> bool {
    match e {
        Expr::Mirror(x) => matches!(**x, Expr::Var(_)),
        _ => e.children().into_iter().all(is_clean),
    }
}

/// `x ↦ x!f`, `x' ↦ x!b`.
pub fn up(e: &Expr) -> Result<Expr, MirrorError> {
    Ok(match e {
        Expr::One => return Err(MirrorError::One),
        Expr::Var(v) => Expr::Var(undirected(v)?.directed(Direction::Fwd)),
        Expr::Mirror(x) => match &**x {
            Expr::Var(v) => Expr::Var(undirected(v)?.directed(Direction::Bwd)),
            _ => return Err(MirrorError::NotClean(e.clone())),
        },
        _ => {
            let mut err = None;
            let out = e.map_children(|c| {
                up(c).unwrap_or_else(|er| {
                    err.get_or_insert(er);
                    Expr::Zero
                })
            });
            if let Some(er) = err {
                return Err(er);
            }
            out
        }
    })
}

/// `x!f ↦ x`, `x!b ↦ x'`.
pub fn down(e: &Expr) -> Result<Expr, MirrorError> {
    Ok(match e {
        Expr::One | Expr::Mirror(_) => return Err(MirrorError::NotSimple(e.clone())),
        Expr::Var(v) => match v.dir() {
            Some(Direction::Fwd) => Expr::Var(v.undirected()),
            Some(Direction::Bwd) => Expr::mirror(Expr::Var(v.undirected())),
            None => return Err(MirrorError::Undirected(v.clone())),
        },
        _ => {
            let mut err = None;
            let out = e.map_children(|c| {
                down(c).unwrap_or_else(|er| {
                    err.get_or_insert(er);
                    Expr::Zero
                })
            });
            if let Some(er) = err {
                return Err(er);
            }
            out
        }
    })
}

fn undirected(v: &VarId) -> Result<&VarId, MirrorError> {
    if v.is_directed() {
        Err(MirrorError::Directed(v.clone()))
    } else {
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{check_family, parse, GrammarFamily};

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn dv(n: &str, d: Direction) -> Expr {
        Expr::Var(VarId::named(n).directed(d))
    }

    #[test]
    fn comb_examples() {
        assert_eq!(comb(&p("(x . y)'"), Direction::Fwd).unwrap(), p("y' . x'"));
        assert_eq!(comb(&p("x"), Direction::Bwd).unwrap(), p("x'"));
        assert_eq!(comb(&p("x''"), Direction::Fwd).unwrap(), p("x"));
        assert_eq!(comb(&p("x + 1"), Direction::Fwd), Err(MirrorError::One));
        assert!(is_clean(&comb(&p("((x & y')^+ . z)'"), Direction::Bwd).unwrap()));
    }

    #[test]
    fn up_down_examples() {
        let e = p("x & y'");
        let u = up(&e).unwrap();
        assert_eq!(u, Expr::inter(dv("x", Direction::Fwd), dv("y", Direction::Bwd)));
        assert!(check_family(&u, GrammarFamily::Simple));
        assert_eq!(up(&p("x")).unwrap(), dv("x", Direction::Fwd));
        assert_eq!(up(&p("x'^+")).unwrap(), Expr::plus(dv("x", Direction::Bwd)));
        assert_eq!(down(&dv("x", Direction::Bwd)).unwrap(), p("x'"));
        assert_eq!(down(&dv("x", Direction::Fwd)).unwrap(), p("x"));
        assert_eq!(down(&u).unwrap(), e);
        assert!(matches!(up(&p("(x . y)'")), Err(MirrorError::NotClean(_))));
        assert!(matches!(down(&p("x")), Err(MirrorError::Undirected(_))));
    }
}
