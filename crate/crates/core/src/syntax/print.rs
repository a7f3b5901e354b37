//! Printer. Parenthesizes only where precedence or left-associativity requires it,
//! so that `parse(print(e)) == e`.

use std::fmt;

use super::parse::{TopExpr, TOP_TOKEN};
use super::{Expr, VarId};

const SUM: u8 = 0;
const INTER: u8 = 1;
const CAT: u8 = 2;
const POST: u8 = 3;
const ATOM: u8 = 4;

enum View<'a, T> {
    Top,
    Zero,
    One,
    Var(&'a VarId),
    Bin(u8, &'static str, &'a T, &'a T),
    Post(&'static str, &'a T),
}

trait Printable: Sized {
    fn view(&self) -> View<'_, Self>;
}

impl Printable for Expr {
    fn view(&self) -> View<'_, Self> {
        match self {
            Expr::Zero => View::Zero,
            Expr::One => View::One,
            Expr::Var(v) => View::Var(v),
            Expr::Sum(a, b) => View::Bin(SUM, " + ", a, b),
            Expr::Inter(a, b) => View::Bin(INTER, " & ", a, b),
            Expr::Prod(a, b) => View::Bin(CAT, " . ", a, b),
            Expr::Plus(a) => View::Post("^+", a),
            Expr::Mirror(a) => View::Post("'", a),
        }
    }
}

impl Printable for TopExpr {
    fn view(&self) -> View<'_, Self> {
        match self {
            TopExpr::Top => View::Top,
            TopExpr::Zero => View::Zero,
            TopExpr::One => View::One,
            TopExpr::Var(v) => View::Var(v),
            TopExpr::Sum(a, b) => View::Bin(SUM, " + ", a, b),
            TopExpr::Inter(a, b) => View::Bin(INTER, " & ", a, b),
            TopExpr::Prod(a, b) => View::Bin(CAT, " . ", a, b),
            TopExpr::Plus(a) => View::Post("^+", a),
            TopExpr::Mirror(a) => View::Post("'", a),
        }
    }
}

fn level<T: Printable>(e: &T) -> u8 {
    match e.view() {
        View::Bin(l, ..) => l,
        View::Post(..) => POST,
        _ => ATOM,
    }
}

fn write_at<T: Printable>(f: &mut fmt::Formatter<'_>, e: &T, min: u8) -> fmt::Result {
    if level(e) < min {
        f.write_str("(")?;
        write_at(f, e, SUM)?;
        return f.write_str(")");
    }
    match e.view() {
        View::Top => write!(f, "{TOP_TOKEN}"),
        View::Zero => f.write_str("0"),
        View::One => f.write_str("1"),
        View::Var(v) => write!(f, "{v}"),
        View::Bin(l, op, a, b) => {
            write_at(f, a, l)?;
            f.write_str(op)?;
            write_at(f, b, l + 1)
        }
        View::Post(op, a) => {
            write_at(f, a, POST)?;
            f.write_str(op)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, SUM)
    }
}

impl fmt::Display for TopExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, SUM)
    }
}

/// Prints `e` as an operand of concatenation (parenthesized unless it binds at least as tightly).
pub fn print_factor(e: &Expr) -> String {
    struct Factor<'a>(&'a Expr);
    impl fmt::Display for Factor<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_at(f, self.0, POST)
        }
    }
    Factor(e).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, parse_with, ParseOptions};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(Expr::sum(Expr::Zero, Expr::One).to_string(), "0 + 1");
        assert_eq!(Expr::mirror(Expr::var("x")).to_string(), "x'");
        let e = Expr::plus(Expr::inter(Expr::var("x"), Expr::var("y")));
        assert_eq!(e.to_string(), "(x & y)^+");
    }

    #[test]
    fn right_operands_are_parenthesized() {
        let e = Expr::sum(Expr::var("a"), Expr::sum(Expr::var("b"), Expr::var("c")));
        assert_eq!(e.to_string(), "a + (b + c)");
        let e = Expr::sum(Expr::sum(Expr::var("a"), Expr::var("b")), Expr::var("c"));
        assert_eq!(e.to_string(), "a + b + c");
        let e = Expr::prod(Expr::var("a"), Expr::prod(Expr::var("b"), Expr::var("c")));
        assert_eq!(e.to_string(), "a . (b . c)");
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Zero),
            Just(Expr::One),
            "[a-c]".prop_map(|s| Expr::var(&s)),
            ("[a-c]", any::<bool>()).prop_map(|(s, fwd)| {
                let d = if fwd { crate::syntax::Direction::Fwd } else { crate::syntax::Direction::Bwd };
                Expr::Var(crate::syntax::VarId::named(&s).directed(d))
            }),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sum(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::prod(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::inter(a, b)),
                inner.clone().prop_map(Expr::plus),
                inner.prop_map(Expr::mirror),
            ]
        })
    }

    proptest! {
        #[test]
        fn round_trip(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse(&text).unwrap(), e);
        }

        #[test]
        fn families_nest(e in arb_expr()) {
            use crate::syntax::{check_family, GrammarFamily::*};
            if check_family(&e, Simple) { prop_assert!(check_family(&e, OneFree)); }
            if check_family(&e, OneFree) { prop_assert!(check_family(&e, Full)); }
        }

        #[test]
        fn identity_substitution(e in arb_expr()) {
            let m = crate::syntax::free_vars(&e).into_iter().map(|v| (v.clone(), Expr::Var(v))).collect();
            prop_assert_eq!(crate::syntax::substitute(&e, &m), e);
        }
    }

    #[test]
    fn reserved_round_trip() {
        let e = Expr::sum(Expr::var("x"), Expr::Var(crate::syntax::VarId::top()));
        let opts = ParseOptions { allow_reserved: true, allow_top: false };
        assert_eq!(parse_with(&e.to_string(), opts).unwrap(), e);
    }
}
