//! Eliminating the full-language constant `⊤` by a starred sum over one more variable.

use std::collections::BTreeSet;

use crate::syntax::{Expr, TopExpr, VarId};

pub fn top_free_vars(e: &TopExpr) -> BTreeSet<VarId> {
    let mut out = BTreeSet::new();
    collect(e, &mut out);
    out
}

fn collect(e: &TopExpr, out: &mut BTreeSet<VarId>) {
    match e {
        TopExpr::Top | TopExpr::Zero | TopExpr::One => {}
        TopExpr::Var(v) => {
            out.insert(v.clone());
        }
        TopExpr::Sum(a, b) | TopExpr::Prod(a, b) | TopExpr::Inter(a, b) => {
            collect(a, out);
            collect(b, out);
        }
        TopExpr::Plus(a) | TopExpr::Mirror(a) => collect(a, out),
    }
}

/// `(Σ_{a ∈ X ∪ {_top}} (a + a'))^*`, written `1 + (…)^+`.
pub fn top_image(vars: &BTreeSet<VarId>) -> Expr {
    let letters = vars.iter().filter(|v| !v.is_reserved()).cloned().chain([VarId::top()]);
    let sum = Expr::sum_of(letters.map(|v| Expr::sum(Expr::Var(v.clone()), Expr::mirror(Expr::Var(v)))));
    Expr::sum(Expr::One, Expr::plus(sum))
}

/// Replaces `⊤` by [`top_image`] over the free variables of `e`.
pub fn phi_top(e: &TopExpr) -> Expr {
    phi_top_over(e, &top_free_vars(e))
}

/// Replaces `⊤` by [`top_image`] over `vars`; use the joint variables when comparing
/// two expressions.
pub fn phi_top_over(e: &TopExpr, vars: &BTreeSet<VarId>) -> Expr {
    let image = top_image(vars);
    go(e, &image)
}

fn go(e: &TopExpr, image: &Expr) -> Expr {
    match e {
        TopExpr::Top => image.clone(),
        TopExpr::Zero => Expr::Zero,
        TopExpr::One => Expr::One,
        TopExpr::Var(v) => Expr::Var(v.clone()),
        TopExpr::Sum(a, b) => Expr::sum(go(a, image), go(b, image)),
        TopExpr::Prod(a, b) => Expr::prod(go(a, image), go(b, image)),
        TopExpr::Inter(a, b) => Expr::inter(go(a, image), go(b, image)),
        TopExpr::Plus(a) => Expr::plus(go(a, image)),
        TopExpr::Mirror(a) => Expr::mirror(go(a, image)),
    }
}
