//! Bounded-exact evaluation.
//!
//! Every operator of the signature is length-monotone, so a word of length `≤ L` in
//! `⟦e⟧` is always assembled from witness words of length `≤ L`. Computing every
//! intermediate language up to `L` therefore yields `⟦e⟧ ∩ Σ^{≤L}` exactly.

use super::interp::Interpretation;
use super::word::{lang_concat, lang_plus, Language};
use crate::syntax::{Expr, VarId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable `{0}` is not bound by the interpretation")]
    Unbound(VarId),
}

/// `⟦e⟧_σ` restricted to words of length at most `σ.bound()`.
pub fn eval(e: &Expr, sigma: &Interpretation) -> Result<Language, EvalError> {
    eval_at(e, sigma, sigma.bound())
}

fn eval_at(e: &Expr, sigma: &Interpretation, bound: usize) -> Result<Language, EvalError> {
    Ok(match e {
        Expr::Zero => Language::empty(),
        Expr::One => Language::epsilon(),
        Expr::Var(v) => sigma.get(v).ok_or_else(|| EvalError::Unbound(v.clone()))?.restrict(bound),
        Expr::Sum(a, b) => eval_at(a, sigma, bound)?.union(&eval_at(b, sigma, bound)?),
        Expr::Inter(a, b) => {
            let l = eval_at(a, sigma, bound)?;
            if l.is_empty() {
                // still surface unbound variables on the right
                eval_at(b, sigma, bound)?;
                return Ok(l);
            }
            l.intersection(&eval_at(b, sigma, bound)?)
        }
        Expr::Prod(a, b) => lang_concat(&eval_at(a, sigma, bound)?, &eval_at(b, sigma, bound)?, bound),
        Expr::Plus(a) => lang_plus(&eval_at(a, sigma, bound)?, bound),
        Expr::Mirror(a) => eval_at(a, sigma, bound)?.mirror(),
    })
}
