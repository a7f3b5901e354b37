//! Expression syntax for reversible Kleene lattices.
//!
//! Terms are built from variables, the constants `0` and `1`, union, concatenation,
//! intersection, non-zero iteration and mirror image. Star is not a node: the surface
//! form `e^*` is read as `1 + e^+`.
//!
//! Three grammar families are distinguished: [`GrammarFamily::Full`] allows every node,
//! [`GrammarFamily::OneFree`] forbids the constant `1`, and [`GrammarFamily::Simple`]
//! additionally forbids mirror image.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use parse::{parse, parse_top, parse_with, ParseError, ParseOptions, TopExpr, TOP_TOKEN};
pub use print::print_factor;

/// Name reserved for the fresh variable introduced by top elimination.
pub const TOP_VAR: &str = "_top";

/// Prints `e` in the concrete syntax, with parentheses only where precedence needs them.
pub fn print(e: &Expr) -> String {
    e.to_string()
}

/// Orientation tag of a variable over the duplicated alphabet `X × 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Forward copy (`x!f`), the `⊤` side.
    Fwd,
    /// Mirrored copy (`x!b`), the `⊥` side.
    Bwd,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Fwd => Direction::Bwd,
            Direction::Bwd => Direction::Fwd,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Direction::Fwd => "!f",
            Direction::Bwd => "!b",
        }
    }
}

/// A variable name, optionally tagged with a [`Direction`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    name: Arc<str>,
    dir: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid variable name `{0}`")]
pub struct InvalidVarName(pub String);

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl VarId {
    /// Builds a plain variable. Names are non-empty tokens over `[a-zA-Z0-9_]`,
    /// excluding the constant spellings `0` and `1`.
    pub fn new(name: &str) -> Result<VarId, InvalidVarName> {
        if name.is_empty() || name == "0" || name == "1" || !name.chars().all(is_ident_char) {
            return Err(InvalidVarName(name.to_string()));
        }
        Ok(VarId { name: Arc::from(name), dir: None })
    }

    /// Shorthand for tests and fixtures; panics on an invalid name.
    pub fn named(name: &str) -> VarId {
        VarId::new(name).expect("valid variable name")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dir(&self) -> Option<Direction> {
        self.dir
    }

    pub fn is_directed(&self) -> bool {
        self.dir.is_some()
    }

    /// The same name tagged with `dir`.
    pub fn directed(&self, dir: Direction) -> VarId {
        VarId { name: self.name.clone(), dir: Some(dir) }
    }

    /// The same name without a direction tag.
    pub fn undirected(&self) -> VarId {
        VarId { name: self.name.clone(), dir: None }
    }

    pub fn top() -> VarId {
        VarId { name: Arc::from(TOP_VAR), dir: None }
    }

    pub fn is_reserved(&self) -> bool {
        &*self.name == TOP_VAR
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if let Some(d) = self.dir {
            f.write_str(d.suffix())?;
        }
        Ok(())
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Expression tree. Values are immutable once built and freely shareable across threads.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Expr {
    Zero,
    One,
    Var(VarId),
    Sum(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Inter(Box<Expr>, Box<Expr>),
    Plus(Box<Expr>),
    Mirror(Box<Expr>),
}

/// Which signature an expression is allowed to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GrammarFamily {
    /// Every node.
    Full,
    /// No `1`.
    OneFree,
    /// No `1`, no mirror.
    Simple,
}

impl GrammarFamily {
    pub fn name(self) -> &'static str {
        match self {
            GrammarFamily::Full => "full",
            GrammarFamily::OneFree => "one-free",
            GrammarFamily::Simple => "simple",
        }
    }

    /// True if every expression of `self` also belongs to `other`.
    pub fn within(self, other: GrammarFamily) -> bool {
        match other {
            GrammarFamily::Full => true,
            GrammarFamily::OneFree => self != GrammarFamily::Full,
            GrammarFamily::Simple => self == GrammarFamily::Simple,
        }
    }
}

impl std::str::FromStr for GrammarFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(GrammarFamily::Full),
            "one-free" | "onefree" => Ok(GrammarFamily::OneFree),
            "simple" => Ok(GrammarFamily::Simple),
            _ => Err(format!("unknown grammar family `{s}`")),
        }
    }
}

impl fmt::Display for GrammarFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// Constructors. They build the literal tree, no simplification.
impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(VarId::named(name))
    }

    pub fn sum(a: Expr, b: Expr) -> Expr {
        Expr::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Expr, b: Expr) -> Expr {
        Expr::Prod(Box::new(a), Box::new(b))
    }

    pub fn inter(a: Expr, b: Expr) -> Expr {
        Expr::Inter(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Expr) -> Expr {
        Expr::Plus(Box::new(a))
    }

    pub fn mirror(a: Expr) -> Expr {
        Expr::Mirror(Box::new(a))
    }

    /// `1 + e^+`.
    pub fn star(a: Expr) -> Expr {
        Expr::sum(Expr::One, Expr::plus(a))
    }

    /// Left-nested sum of `items`; `0` when empty.
    pub fn sum_of<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        items.into_iter().reduce(Expr::sum).unwrap_or(Expr::Zero)
    }

    /// Immediate subterms, in path order.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Zero | Expr::One | Expr::Var(_) => vec![],
            Expr::Sum(a, b) | Expr::Prod(a, b) | Expr::Inter(a, b) => vec![a, b],
            Expr::Plus(a) | Expr::Mirror(a) => vec![a],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Expr::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Expr::depth).max().unwrap_or(0)
    }

    pub fn contains_one(&self) -> bool {
        matches!(self, Expr::One) || self.children().into_iter().any(Expr::contains_one)
    }

    pub fn contains_mirror(&self) -> bool {
        matches!(self, Expr::Mirror(_)) || self.children().into_iter().any(Expr::contains_mirror)
    }

    /// The smallest family containing `self`.
    pub fn family(&self) -> GrammarFamily {
        if self.contains_one() {
            GrammarFamily::Full
        } else if self.contains_mirror() {
            GrammarFamily::OneFree
        } else {
            GrammarFamily::Simple
        }
    }

    /// Applies `f` to every direct child, rebuilding the node.
    pub fn map_children(&self, mut f: impl FnMut(&Expr) -> Expr) -> Expr {
        match self {
            Expr::Zero | Expr::One | Expr::Var(_) => self.clone(),
            Expr::Sum(a, b) => Expr::sum(f(a), f(b)),
            Expr::Prod(a, b) => Expr::prod(f(a), f(b)),
            Expr::Inter(a, b) => Expr::inter(f(a), f(b)),
            Expr::Plus(a) => Expr::plus(f(a)),
            Expr::Mirror(a) => Expr::mirror(f(a)),
        }
    }

    /// All subterms, pre-order, including `self`.
    pub fn subterms(&self) -> Vec<&Expr> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i];
            out.extend(cur.children());
            i += 1;
        }
        out
    }
}

/// True iff `e` uses only nodes allowed by `g`.
pub fn check_family(e: &Expr, g: GrammarFamily) -> bool {
    e.family().within(g)
}

/// Set of variables occurring in `e`.
pub fn free_vars(e: &Expr) -> BTreeSet<VarId> {
    let mut out = BTreeSet::new();
    collect_vars(e, &mut out);
    out
}

fn collect_vars(e: &Expr, out: &mut BTreeSet<VarId>) {
    match e {
        Expr::Var(v) => {
            out.insert(v.clone());
        }
        _ => {
            for c in e.children() {
                collect_vars(c, out);
            }
        }
    }
}

/// Simultaneous substitution of variables.
pub fn substitute(e: &Expr, m: &BTreeMap<VarId, Expr>) -> Expr {
    match e {
        Expr::Var(v) => m.get(v).cloned().unwrap_or_else(|| e.clone()),
        _ => e.map_children(|c| substitute(c, m)),
    }
}
