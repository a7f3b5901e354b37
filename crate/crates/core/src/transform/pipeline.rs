//! Reducing a containment `e ≤ f` to test obligations, decided exactly, and
//! one-free containments, checked by the bounded oracle.

use std::fmt;

use super::normal::{nf_with, positive_with, reduce, NfConfig, NfError};
use super::tests::{interone, TestSet};
use crate::semantics::{leq_bounded, OracleConfig, Verdict};
use crate::syntax::Expr;

#[derive(Clone, Debug)]
pub enum Obligation {
    /// `⟨A⟩ ≤ f`, which holds iff some `C ∈ interone(f)` is a subset of `A`.
    Test { test: TestSet, rhs: Expr, holds: bool },
    /// `e' ≤ [reduce(A, f)]` between one-free expressions.
    OneFree { lhs: Expr, rhs: Expr, verdict: Verdict },
}

impl Obligation {
    /// Decided true, or not refuted by the oracle.
    pub fn holds(&self) -> bool {
        match self {
            Obligation::Test { holds, .. } => *holds,
            Obligation::OneFree { verdict, .. } => !verdict.is_refuted(),
        }
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obligation::Test { test, rhs, holds } => write!(f, "TEST A={test} |- {rhs} : DECIDED {holds}"),
            Obligation::OneFree { lhs, rhs, verdict } => {
                write!(f, "ONEFREE {lhs} <= {rhs} : ")?;
                match verdict {
                    Verdict::Refuted(c) => write!(f, "REFUTED(witness {})", c.witness),
                    Verdict::Unrefuted { .. } => f.write_str("UNREFUTED"),
                }
            }
        }
    }
}

/// Whether `⟨A⟩ ≤ f` is valid.
pub fn decide_test(a: &TestSet, f: &Expr) -> bool {
    interone(f).iter().any(|c| c.is_subset(a))
}

pub fn reduce_to_onefree(e: &Expr, f: &Expr, cfg: &OracleConfig) -> Result<Vec<Obligation>, NfError> {
    reduce_to_onefree_with(e, f, cfg, NfConfig::default())
}

/// One obligation per item of `nf(e)`, in item order.
pub fn reduce_to_onefree_with(
    e: &Expr,
    f: &Expr,
    cfg: &OracleConfig,
    nf_cfg: NfConfig,
) -> Result<Vec<Obligation>, NfError> {
    let mut out = Vec::new();
    for item in nf_with(e, nf_cfg)?.0 {
        match item.body {
            None => {
                let holds = decide_test(&item.test, f);
                out.push(Obligation::Test { test: item.test, rhs: f.clone(), holds });
            }
            Some(body) => {
                let rhs = positive_with(&reduce(&item.test, f), nf_cfg)?;
                let verdict = leq_bounded(&body, &rhs, cfg);
                out.push(Obligation::OneFree { lhs: body, rhs, verdict });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn run(e: &str, f: &str) -> Vec<String> {
        reduce_to_onefree(&p(e), &p(f), &OracleConfig::quick())
            .unwrap()
            .iter()
            .map(|o| o.to_string())
            .collect()
    }

    #[test]
    fn pipeline_examples() {
        assert_eq!(run("x & 1", "x"), ["TEST A={x} |- x : DECIDED true"]);
        assert_eq!(run("x", "x"), ["ONEFREE x <= x : UNREFUTED"]);
        assert_eq!(run("1", "0"), ["TEST A={} |- 0 : DECIDED false"]);
    }

    #[test]
    fn refuted_obligation() {
        let obs = reduce_to_onefree(&p("x . y"), &p("y . x"), &OracleConfig::quick()).unwrap();
        assert_eq!(obs.len(), 1);
        assert!(!obs[0].holds());
        assert!(obs[0].to_string().starts_with("ONEFREE x . y <= y . x : REFUTED(witness "));
    }

    #[test]
    fn tests_on_the_left_are_absorbed() {
        let obs = reduce_to_onefree(&p("(x & 1) . y"), &p("x . y"), &OracleConfig::quick()).unwrap();
        assert_eq!(obs.len(), 1);
        assert!(obs[0].holds(), "{}", obs[0]);
    }
}
