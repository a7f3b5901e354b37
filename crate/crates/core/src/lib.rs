//! Reversible Kleene lattices: expressions over `0, 1, +, ·, ∩, ⁺` and mirror image,
//! their finite-language semantics, the axiom system with a derivation checker,
//! and the constructive transformations used to reduce containment problems
//! to the one-free fragment.

pub mod gen;
pub mod rewrite;
pub mod semantics;
pub mod syntax;
pub mod transform;

pub use semantics::{eval, Interpretation, Language, Letter, OracleConfig, Verdict, Word};
pub use syntax::{check_family, free_vars, parse, print, substitute, Direction, Expr, GrammarFamily, VarId};
