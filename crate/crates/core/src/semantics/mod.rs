//! Finite-language semantics: words, bounded-exact evaluation, and the oracle.

mod bits;
mod eval;
mod interp;
pub mod oracle;
mod word;

pub use eval::{eval, EvalError};
pub use interp::{sigma_a, InterpError, Interpretation};
pub use oracle::{
    equiv_bounded, gen_interpretations, leq_bounded, refute, refute_implication, CounterExample,
    InterpretationStream, OracleConfig, TierSpec, Verdict,
};
pub use word::{lang_concat, lang_plus, mirror_word, Language, Letter, Word};
