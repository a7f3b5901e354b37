//! The axioms of reversible Kleene lattices as schemas over the metavariables
//! `e`, `f`, `g`.
//!
//! The chained laws `e·0 = 0 = 0·e` and `1·e = e = e·1` are stored as two equations
//! each (`seq-0-l`/`seq-0-r`, `seq-1-l`/`seq-1-r`), which gives 29 stored equations
//! for 27 named laws. The two induction laws are conditional: their schema carries a
//! premise equation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::syntax::{parse, Expr, GrammarFamily, VarId};

/// Which of the four sub-tables an axiom belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomTable {
    Lattice,
    Concatenation,
    Mirror,
    Unit,
}

impl AxiomTable {
    /// Simple expressions use the lattice and concatenation tables, one-free
    /// expressions add mirror, full expressions add the unit table.
    pub fn allowed_in(self, family: GrammarFamily) -> bool {
        match self {
            AxiomTable::Lattice | AxiomTable::Concatenation => true,
            AxiomTable::Mirror => family != GrammarFamily::Simple,
            AxiomTable::Unit => family == GrammarFamily::Full,
        }
    }
}

macro_rules! axioms {
    ($( $id:ident = $name:literal, $table:ident, $lhs:literal, $rhs:literal $(, if $pl:literal = $pr:literal)?; )*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum AxiomId { $($id),* }

        impl AxiomId {
            pub const ALL: &'static [AxiomId] = &[$(AxiomId::$id),*];

            pub fn name(self) -> &'static str {
                match self { $(AxiomId::$id => $name),* }
            }

            pub fn table(self) -> AxiomTable {
                match self { $(AxiomId::$id => AxiomTable::$table),* }
            }

            fn source(self) -> (&'static str, &'static str, Option<(&'static str, &'static str)>) {
                match self {
                    $(AxiomId::$id => ($lhs, $rhs, axioms!(@premise $($pl, $pr)?))),*
                }
            }
        }
    };
    (@premise) => { None };
    (@premise $pl:literal, $pr:literal) => { Some(($pl, $pr)) };
}

axioms! {
    PlusCom = "plus-com", Lattice, "e + f", "f + e";
    PlusAss = "plus-ass", Lattice, "e + (f + g)", "(e + f) + g";
    Plus0 = "plus-0", Lattice, "e + 0", "e";
    InterComm = "inter-comm", Lattice, "e & f", "f & e";
    InterIdem = "inter-idem", Lattice, "e & e", "e";
    InterAssoc = "inter-assoc", Lattice, "e & (f & g)", "(e & f) & g";
    PlusInter = "plus-inter", Lattice, "(e + f) & g", "e & g + f & g";
    InterPlus = "inter-plus", Lattice, "(e & f) + e", "e";
    SeqAssoc = "seq-assoc", Concatenation, "e . (f . g)", "(e . f) . g";
    Seq0L = "seq-0-l", Concatenation, "e . 0", "0";
    Seq0R = "seq-0-r", Concatenation, "0 . e", "0";
    PlusSeq = "plus-seq", Concatenation, "(e + f) . g", "e . g + f . g";
    SeqPlus = "seq-plus", Concatenation, "e . (f + g)", "e . f + e . g";
    IterLeft = "iter-left", Concatenation, "e^+", "e + e . e^+";
    IterRight = "iter-right", Concatenation, "e^+", "e + e^+ . e";
    LeftInd = "left-ind", Concatenation, "e^+ . f + f", "f", if "e . f + f" = "f";
    RightInd = "right-ind", Concatenation, "f . e^+ + f", "f", if "f . e + f" = "f";
    ConvConv = "conv-conv", Mirror, "e''", "e";
    ConvPlus = "conv-plus", Mirror, "(e + f)'", "e' + f'";
    ConvSeq = "conv-seq", Mirror, "(e . f)'", "f' . e'";
    ConvInter = "conv-inter", Mirror, "(e & f)'", "e' & f'";
    ConvIter = "conv-iter", Mirror, "e^+'", "e'^+";
    Seq1L = "seq-1-l", Unit, "1 . e", "e";
    Seq1R = "seq-1-r", Unit, "e . 1", "e";
    TestSeqInter = "test-seq-inter", Unit, "1 & e . f", "1 & (e & f)";
    TestConv = "test-conv", Unit, "1 & e'", "1 & e";
    TestSeqCom = "test-seq-com", Unit, "(1 & e) . f", "f . (1 & e)";
    TestInter = "test-inter", Unit, "(1 & e) . f & g", "(1 & e) . (f & g)";
    TestIter = "test-iter", Unit, "(g + (1 & e) . f)^+", "g^+ + (1 & e) . (g + f)^+";
}

/// A stored equation `lhs = rhs`, conditional on `premise` when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub lhs: Expr,
    pub rhs: Expr,
    pub premise: Option<(Expr, Expr)>,
}

fn schemas() -> &'static [Schema] {
    static CELL: OnceLock<Vec<Schema>> = OnceLock::new();
    CELL.get_or_init(|| {
        AxiomId::ALL
            .iter()
            .map(|a| {
                let (l, r, p) = a.source();
                let p1 = |s: &str| parse(s).expect("axiom schemas parse");
                Schema { lhs: p1(l), rhs: p1(r), premise: p.map(|(a, b)| (p1(a), p1(b))) }
            })
            .collect()
    })
}

impl AxiomId {
    pub fn schema(self) -> &'static Schema {
        &schemas()[self as usize]
    }

    pub fn is_conditional(self) -> bool {
        self.schema().premise.is_some()
    }

    pub fn allowed_in(self, family: GrammarFamily) -> bool {
        self.table().allowed_in(family)
    }

    pub fn from_name(name: &str) -> Option<AxiomId> {
        AxiomId::ALL.iter().copied().find(|a| a.name() == name)
    }

    /// The stored equations behind a law name: `seq-0` and `seq-1` name two.
    pub fn by_law(name: &str) -> Vec<AxiomId> {
        match name {
            "seq-0" => vec![AxiomId::Seq0L, AxiomId::Seq0R],
            "seq-1" => vec![AxiomId::Seq1L, AxiomId::Seq1R],
            _ => AxiomId::from_name(name).into_iter().collect(),
        }
    }

    /// Metavariables of the schema, in the order `e`, `f`, `g`.
    pub fn metavars(self) -> Vec<&'static str> {
        let s = self.schema();
        let mut all = crate::syntax::free_vars(&s.lhs);
        all.extend(crate::syntax::free_vars(&s.rhs));
        ["e", "f", "g"].into_iter().filter(|m| all.contains(&VarId::named(m))).collect()
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = String;

    fn from_str(s: &str) -> Result<AxiomId, String> {
        AxiomId::from_name(s).ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

/// Assignment of expressions to metavariable names.
pub type Bindings = BTreeMap<String, Expr>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AxiomError {
    #[error("no binding for metavariable `{0}`")]
    MissingBinding(String),
    #[error("axiom `{axiom}` has no metavariable `{mv}`")]
    UnknownMetavar { axiom: AxiomId, mv: String },
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
}

/// First-order syntactic matching of a schema against a term, extending `b`.
/// On failure `b` may hold partial bindings.
pub fn match_schema(pat: &Expr, t: &Expr, b: &mut Bindings) -> bool {
    match (pat, t) {
        (Expr::Var(v), _) => match b.get(v.name()) {
            Some(bound) => bound == t,
            None => {
                b.insert(v.name().to_string(), t.clone());
                true
            }
        },
        (Expr::Zero, Expr::Zero) | (Expr::One, Expr::One) => true,
        (Expr::Sum(a, c), Expr::Sum(x, y))
        | (Expr::Prod(a, c), Expr::Prod(x, y))
        | (Expr::Inter(a, c), Expr::Inter(x, y)) => match_schema(a, x, b) && match_schema(c, y, b),
        (Expr::Plus(a), Expr::Plus(x)) | (Expr::Mirror(a), Expr::Mirror(x)) => match_schema(a, x, b),
        _ => false,
    }
}

pub fn instantiate_schema(pat: &Expr, b: &Bindings) -> Result<Expr, AxiomError> {
    Ok(match pat {
        Expr::Var(v) => b.get(v.name()).cloned().ok_or_else(|| AxiomError::MissingBinding(v.name().to_string()))?,
        Expr::Zero | Expr::One => pat.clone(),
        Expr::Sum(a, c) => Expr::sum(instantiate_schema(a, b)?, instantiate_schema(c, b)?),
        Expr::Prod(a, c) => Expr::prod(instantiate_schema(a, b)?, instantiate_schema(c, b)?),
        Expr::Inter(a, c) => Expr::inter(instantiate_schema(a, b)?, instantiate_schema(c, b)?),
        Expr::Plus(a) => Expr::plus(instantiate_schema(a, b)?),
        Expr::Mirror(a) => Expr::mirror(instantiate_schema(a, b)?),
    })
}

/// A concrete instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub lhs: Expr,
    pub rhs: Expr,
    pub premise: Option<(Expr, Expr)>,
}

pub fn check_metavars(ax: AxiomId, b: &Bindings) -> Result<(), AxiomError> {
    let mvs = ax.metavars();
    match b.keys().find(|k| !mvs.contains(&k.as_str())) {
        Some(k) => Err(AxiomError::UnknownMetavar { axiom: ax, mv: k.clone() }),
        None => Ok(()),
    }
}

pub fn instantiate(ax: AxiomId, b: &Bindings) -> Result<Instance, AxiomError> {
    check_metavars(ax, b)?;
    let s = ax.schema();
    let premise = match &s.premise {
        Some((l, r)) => Some((instantiate_schema(l, b)?, instantiate_schema(r, b)?)),
        None => None,
    };
    Ok(Instance { lhs: instantiate_schema(&s.lhs, b)?, rhs: instantiate_schema(&s.rhs, b)?, premise })
}

/// Instances of every stored equation behind a law name (two for `seq-0`, `seq-1`).
pub fn instantiate_named(name: &str, b: &Bindings) -> Result<Vec<Instance>, AxiomError> {
    let ids = AxiomId::by_law(name);
    if ids.is_empty() {
        return Err(AxiomError::UnknownAxiom(name.to_string()));
    }
    ids.into_iter().map(|a| instantiate(a, b)).collect()
}

/// Convenience constructor for bindings.
pub fn bindings<'a>(pairs: impl IntoIterator<Item = (&'a str, Expr)>) -> Bindings {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
