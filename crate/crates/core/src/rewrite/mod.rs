//! The axiom system, derivations with a checker, a script format and bounded search.

pub mod axioms;
pub mod derivation;
pub mod path;
pub mod script;
pub mod library;
pub mod search;
pub mod tactics;

pub use axioms::{instantiate, instantiate_named, AxiomError, AxiomId, AxiomTable, Bindings, Instance};
pub use derivation::{check, CheckError, CheckFailure, Derivation, Orientation, Relation, Report, Statement, Step};
pub use path::Path;
pub use script::{parse_script, print_script, ScriptError};
pub use search::{search, search_with, SearchConfig};
