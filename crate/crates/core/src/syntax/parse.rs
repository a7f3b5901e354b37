//! Recursive-descent parser for the ASCII expression syntax.
//!
//! ```text
//! expr  := inter ("+" inter)*
//! inter := cat ("&" cat)*
//! cat   := post ("." post)*
//! post  := atom ("^+" | "^*" | "'")*
//! atom  := "0" | "1" | ident | ident "!f" | ident "!b" | "(" expr ")"
//! ```

use std::fmt;

use super::{is_ident_char, Expr, VarId};

/// Token spelling of the full-language constant accepted by [`parse_top`].
pub const TOP_TOKEN: char = '#';

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: expected ", self.offset)?;
        match self.expected.as_slice() {
            [] => f.write_str("nothing")?,
            [one] => f.write_str(one)?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept the reserved top-elimination variable `_top`.
    pub allow_reserved: bool,
    /// Accept the `#` constant (full language).
    pub allow_top: bool,
}

/// Expressions extended with the full-language constant `⊤`, written `#`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TopExpr {
    Top,
    Zero,
    One,
    Var(VarId),
    Sum(Box<TopExpr>, Box<TopExpr>),
    Prod(Box<TopExpr>, Box<TopExpr>),
    Inter(Box<TopExpr>, Box<TopExpr>),
    Plus(Box<TopExpr>),
    Mirror(Box<TopExpr>),
}

impl TopExpr {
    /// Converts to a plain expression, or `None` if `⊤` occurs.
    pub fn to_expr(&self) -> Option<Expr> {
        Some(match self {
            TopExpr::Top => return None,
            TopExpr::Zero => Expr::Zero,
            TopExpr::One => Expr::One,
            TopExpr::Var(v) => Expr::Var(v.clone()),
            TopExpr::Sum(a, b) => Expr::sum(a.to_expr()?, b.to_expr()?),
            TopExpr::Prod(a, b) => Expr::prod(a.to_expr()?, b.to_expr()?),
            TopExpr::Inter(a, b) => Expr::inter(a.to_expr()?, b.to_expr()?),
            TopExpr::Plus(a) => Expr::plus(a.to_expr()?),
            TopExpr::Mirror(a) => Expr::mirror(a.to_expr()?),
        })
    }

    pub fn from_expr(e: &Expr) -> TopExpr {
        let b = |x: &Expr| Box::new(TopExpr::from_expr(x));
        match e {
            Expr::Zero => TopExpr::Zero,
            Expr::One => TopExpr::One,
            Expr::Var(v) => TopExpr::Var(v.clone()),
            Expr::Sum(x, y) => TopExpr::Sum(b(x), b(y)),
            Expr::Prod(x, y) => TopExpr::Prod(b(x), b(y)),
            Expr::Inter(x, y) => TopExpr::Inter(b(x), b(y)),
            Expr::Plus(x) => TopExpr::Plus(b(x)),
            Expr::Mirror(x) => TopExpr::Mirror(b(x)),
        }
    }
}

/// Parses user input. Rejects `_top` and `#`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, opts: ParseOptions) -> Result<Expr, ParseError> {
    let opts = ParseOptions { allow_top: false, ..opts };
    let t = Parser::new(text, opts).run()?;
    Ok(t.to_expr().expect("top token rejected by the lexer"))
}

/// Parses an expression that may contain `#` (the full language).
pub fn parse_top(text: &str) -> Result<TopExpr, ParseError> {
    Parser::new(text, ParseOptions { allow_top: true, allow_reserved: false }).run()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    opts: ParseOptions,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, opts: ParseOptions) -> Self {
        Parser { src, pos: 0, opts }
    }

    fn run(mut self) -> Result<TopExpr, ParseError> {
        let e = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error(&["`+`", "`&`", "`.`", "`^+`", "`^*`", "`'`", "end of input"]));
        }
        Ok(e)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let found = match self.rest().chars().next() {
            None => "end of input".to_string(),
            Some(c) => format!("`{c}`"),
        };
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn expr(&mut self) -> Result<TopExpr, ParseError> {
        let mut lhs = self.inter()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let rhs = self.inter()?;
            lhs = TopExpr::Sum(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn inter(&mut self) -> Result<TopExpr, ParseError> {
        let mut lhs = self.cat()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            let rhs = self.cat()?;
            lhs = TopExpr::Inter(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cat(&mut self) -> Result<TopExpr, ParseError> {
        let mut lhs = self.post()?;
        while self.peek() == Some('.') {
            self.pos += 1;
            let rhs = self.post()?;
            lhs = TopExpr::Prod(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn post(&mut self) -> Result<TopExpr, ParseError> {
        let mut e = self.atom()?;
        loop {
            match self.peek() {
                Some('\'') => {
                    self.pos += 1;
                    e = TopExpr::Mirror(Box::new(e));
                }
                Some('^') => {
                    let op = self.rest()[1..].chars().next();
                    match op {
                        Some('+') => {
                            self.pos += 2;
                            e = TopExpr::Plus(Box::new(e));
                        }
                        Some('*') => {
                            self.pos += 2;
                            e = TopExpr::Sum(Box::new(TopExpr::One), Box::new(TopExpr::Plus(Box::new(e))));
                        }
                        _ => {
                            self.pos += 1;
                            return Err(self.error(&["`+`", "`*`"]));
                        }
                    }
                }
                _ => return Ok(e),
            }
        }
    }

    fn atom(&mut self) -> Result<TopExpr, ParseError> {
        let expected: &[&str] = if self.opts.allow_top {
            &["`0`", "`1`", "identifier", "`(`", "`#`"]
        } else {
            &["`0`", "`1`", "identifier", "`(`"]
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error(&["`)`", "`+`", "`&`", "`.`"]));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(TOP_TOKEN) if self.opts.allow_top => {
                self.pos += 1;
                Ok(TopExpr::Top)
            }
            Some(c) if is_ident_char(c) => self.ident(),
            _ => Err(self.error(expected)),
        }
    }

    fn ident(&mut self) -> Result<TopExpr, ParseError> {
        let start = self.pos;
        let len = self.rest().find(|c: char| !is_ident_char(c)).unwrap_or(self.rest().len());
        let tok = &self.src[start..start + len];
        self.pos += len;
        match tok {
            "0" => return Ok(TopExpr::Zero),
            "1" => return Ok(TopExpr::One),
            _ => {}
        }
        let mut var = VarId::new(tok).map_err(|_| ParseError {
            offset: start,
            expected: vec!["identifier".into()],
            found: format!("`{tok}`"),
        })?;
        if var.is_reserved() && !self.opts.allow_reserved {
            return Err(ParseError {
                offset: start,
                expected: vec!["non-reserved identifier".into()],
                found: format!("`{tok}`"),
            });
        }
        if self.rest().starts_with('!') {
            self.pos += 1;
            let dir = match self.rest().chars().next() {
                Some('f') => super::Direction::Fwd,
                Some('b') => super::Direction::Bwd,
                _ => return Err(self.error(&["`f`", "`b`"])),
            };
            self.pos += 1;
            if self.rest().starts_with(is_ident_char) {
                return Err(self.error(&["end of identifier"]));
            }
            var = var.directed(dir);
        }
        Ok(TopExpr::Var(var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Direction;

    #[test]
    fn constants_and_union() {
        assert_eq!(parse("0 + 1").unwrap(), Expr::sum(Expr::Zero, Expr::One));
    }

    #[test]
    fn star_desugars() {
        let star = Expr::sum(Expr::One, Expr::plus(Expr::var("x")));
        assert_eq!(parse("x ^*").unwrap(), star);
        assert_eq!(parse("x^*").unwrap(), star);
        assert!(parse("x ^ *").is_err());
    }

    #[test]
    fn mirror_of_product() {
        assert_eq!(
            parse("(x . y)'").unwrap(),
            Expr::mirror(Expr::prod(Expr::var("x"), Expr::var("y")))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("a + b & c . d^+").unwrap();
        let expected = Expr::sum(
            Expr::var("a"),
            Expr::inter(Expr::var("b"), Expr::prod(Expr::var("c"), Expr::plus(Expr::var("d")))),
        );
        assert_eq!(e, expected);
        let e = parse("a . b . c").unwrap();
        assert_eq!(e, Expr::prod(Expr::prod(Expr::var("a"), Expr::var("b")), Expr::var("c")));
        let e = parse("x^+'").unwrap();
        assert_eq!(e, Expr::mirror(Expr::plus(Expr::var("x"))));
    }

    #[test]
    fn directed_variables() {
        let e = parse("x!f & y!b").unwrap();
        let x = VarId::named("x").directed(Direction::Fwd);
        let y = VarId::named("y").directed(Direction::Bwd);
        assert_eq!(e, Expr::inter(Expr::Var(x), Expr::Var(y)));
        assert!(parse("x!g").is_err());
        assert!(parse("x!fa").is_err());
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse("x + ").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains(&"identifier".to_string()));
        let err = parse("(x . y").unwrap_err();
        assert_eq!(err.offset, 6);
        let err = parse("x y").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn reserved_and_top() {
        assert!(parse("_top").is_err());
        assert!(parse("#").is_err());
        let opts = ParseOptions { allow_reserved: true, allow_top: false };
        assert_eq!(parse_with("_top", opts).unwrap(), Expr::Var(VarId::top()));
        let t = parse_top("# & x").unwrap();
        assert_eq!(t, TopExpr::Inter(Box::new(TopExpr::Top), Box::new(TopExpr::Var(VarId::named("x")))));
        assert!(t.to_expr().is_none());
    }
}
