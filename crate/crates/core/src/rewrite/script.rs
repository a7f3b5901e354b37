//! Text form of derivations.
//!
//! ```text
//! (trans (ax plus-com L2R at [] {e:=0, f:=x})
//!        (ax plus-0 L2R at []))
//! ```
//!
//! Node kinds are `refl EXPR`, `sym D`, `trans D D...` (more than two children
//! nest to the left), `ax NAME DIR at PATH {BINDINGS}` and
//! `cax NAME DIR at PATH {BINDINGS} PREMISE`. The binding block is optional.
//! `;` starts a comment running to the end of the line.

use std::fmt::Write;

use super::axioms::{AxiomId, Bindings};
use super::derivation::{Derivation, Orientation, Step};
use super::path::Path;
use crate::syntax::{parse, Expr};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("script error at byte {offset}: {msg}")]
pub struct ScriptError {
    pub offset: usize,
    pub msg: String,
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ScriptError> {
        Err(ScriptError { offset: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with(';') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ScriptError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn word(&mut self) -> Result<&'a str, ScriptError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let n = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_')).unwrap_or(rest.len());
        if n == 0 {
            return self.err("expected a word");
        }
        self.pos += n;
        Ok(&rest[..n])
    }

    /// Raw text up to (not including) the first of `stops` at parenthesis depth 0.
    fn raw_until(&mut self, stops: &[char]) -> Result<(&'a str, usize), ScriptError> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        for (i, c) in self.src[start..].char_indices() {
            if depth == 0 && stops.contains(&c) {
                self.pos = start + i;
                return Ok((&self.src[start..start + i], start));
            }
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                _ => {}
            }
        }
        self.err("unterminated expression")
    }

    fn expr_until(&mut self, stops: &[char]) -> Result<Expr, ScriptError> {
        let (text, start) = self.raw_until(stops)?;
        parse(text).map_err(|e| ScriptError { offset: start + e.offset, msg: e.to_string() })
    }

    fn path(&mut self) -> Result<Path, ScriptError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(Path(out));
        }
        loop {
            self.skip_ws();
            let rest = &self.src[self.pos..];
            let n = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            if n == 0 {
                return self.err("expected a child index");
            }
            out.push(rest[..n].parse().map_err(|_| ScriptError { offset: self.pos, msg: "index too large".into() })?);
            self.pos += n;
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(Path(out));
                }
                _ => return self.err("expected `,` or `]`"),
            }
        }
    }

    fn bindings(&mut self) -> Result<Bindings, ScriptError> {
        let mut b = Bindings::new();
        if self.peek() != Some('{') {
            return Ok(b);
        }
        self.pos += 1;
        if self.peek() == Some('}') {
            self.pos += 1;
            return Ok(b);
        }
        loop {
            let mv = self.word()?.to_string();
            self.skip_ws();
            if !self.src[self.pos..].starts_with(":=") {
                return self.err("expected `:=`");
            }
            self.pos += 2;
            let e = self.expr_until(&[',', '}'])?;
            if b.insert(mv.clone(), e).is_some() {
                return self.err(format!("metavariable `{mv}` bound twice"));
            }
            match self.peek() {
                Some(',') => self.pos += 1,
                Some('}') => {
                    self.pos += 1;
                    return Ok(b);
                }
                _ => return self.err("expected `,` or `}`"),
            }
        }
    }

    fn step(&mut self) -> Result<Step, ScriptError> {
        self.skip_ws();
        let at = self.pos;
        let name = self.word()?;
        let axiom = AxiomId::from_name(name).ok_or(ScriptError { offset: at, msg: format!("unknown axiom `{name}`") })?;
        let orientation = match self.word()? {
            "L2R" => Orientation::L2R,
            "R2L" => Orientation::R2L,
            other => return self.err(format!("expected L2R or R2L, found `{other}`")),
        };
        if self.word()? != "at" {
            return self.err("expected `at`");
        }
        let path = self.path()?;
        let bindings = self.bindings()?;
        Ok(Step::new(axiom, orientation, path, bindings))
    }

    fn derivation(&mut self) -> Result<Derivation, ScriptError> {
        self.expect('(')?;
        let kind_at = self.pos;
        let d = match self.word()? {
            "refl" => Derivation::Refl(self.expr_until(&[')'])?),
            "sym" => Derivation::sym(self.derivation()?),
            "trans" => {
                let mut parts = vec![self.derivation()?, self.derivation()?];
                while self.peek() == Some('(') {
                    parts.push(self.derivation()?);
                }
                Derivation::chain(parts).expect("at least two parts")
            }
            "ax" => Derivation::Ax(self.step()?),
            "cax" => {
                let s = self.step()?;
                Derivation::CAx(s, Box::new(self.derivation()?))
            }
            other => return Err(ScriptError { offset: kind_at, msg: format!("unknown node kind `{other}`") }),
        };
        self.expect(')')?;
        Ok(d)
    }
}

pub fn parse_script(text: &str) -> Result<Derivation, ScriptError> {
    let mut r = Reader { src: text, pos: 0 };
    let d = r.derivation()?;
    if r.peek().is_some() {
        return r.err("trailing input after derivation");
    }
    Ok(d)
}

fn trans_parts(d: &Derivation) -> Vec<&Derivation> {
    match d {
        Derivation::Trans(a, b) => {
            let mut v = trans_parts(a);
            v.extend(trans_parts(b));
            v
        }
        _ => vec![d],
    }
}

fn write_step(out: &mut String, s: &Step) {
    write!(out, "{} {} at {}", s.axiom, s.orientation, s.at).unwrap();
    if !s.bindings.is_empty() {
        let parts: Vec<String> = s.bindings.iter().map(|(k, v)| format!("{k}:={v}")).collect();
        write!(out, " {{{}}}", parts.join(", ")).unwrap();
    }
}

fn write_derivation(out: &mut String, d: &Derivation, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match d {
        Derivation::Refl(e) => write!(out, "(refl {e})").unwrap(),
        Derivation::Ax(s) => {
            out.push_str("(ax ");
            write_step(out, s);
            out.push(')');
        }
        Derivation::Sym(inner) => {
            out.push_str("(sym ");
            write_derivation(out, inner, indent + 5);
            out.push(')');
        }
        Derivation::CAx(s, p) => {
            out.push_str("(cax ");
            write_step(out, s);
            out.push('\n');
            pad(out, indent + 2);
            write_derivation(out, p, indent + 2);
            out.push(')');
        }
        Derivation::Trans(..) => {
            out.push_str("(trans");
            for part in trans_parts(d) {
                out.push('\n');
                pad(out, indent + 2);
                write_derivation(out, part, indent + 2);
            }
            out.push(')');
        }
    }
}

/// Renders a derivation in the script format. Chains of `trans` are flattened, so
/// reading the text back gives a derivation that is equal up to how `trans` nests.
pub fn print_script(d: &Derivation) -> String {
    let mut out = String::new();
    write_derivation(&mut out, d, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::derivation::{check, Statement};

    #[test]
    fn documented_example() {
        let d = parse_script("(trans (ax plus-com L2R at [] {e:=0, f:=x}) (ax plus-0 L2R at []))").unwrap();
        let s = Statement::parse("0 + x == x").unwrap();
        assert_eq!(check(&d, &s), Ok(()));
        assert_eq!(parse_script(&print_script(&d)).unwrap(), d);
    }

    #[test]
    fn all_node_kinds_round_trip() {
        let text = "; 1^+ == 1
            (trans (ax iter-right L2R at [])
                   (ax plus-com L2R at [])
                   (cax left-ind L2R at [] {e:=1, f:=1}
                        (trans (ax seq-1-l L2R at [0]) (sym (ax inter-idem L2R at [0])) (ax inter-plus L2R at []))))";
        let d = parse_script(text).unwrap();
        assert_eq!(check(&d, &Statement::parse("1^+ == 1").unwrap()), Ok(()));
        assert_eq!(parse_script(&print_script(&d)).unwrap(), d);
        let r = parse_script("(refl (x + y) . z)").unwrap();
        assert_eq!(r, Derivation::Refl(parse("(x + y) . z").unwrap()));
    }

    #[test]
    fn errors_have_offsets() {
        let e = parse_script("(ax plus-kom L2R at [])").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_script("(ax plus-com L2R at [0,])").is_err());
        assert!(parse_script("(ax plus-com L2R at [] {e:=x +})").is_err());
        assert!(parse_script("(refl x) x").is_err());
        assert!(parse_script("(trans (refl x))").is_err());
    }
}
