//! The constructive transformations behind the reduction of containment to the
//! one-free fragment.

pub mod bullet;
pub mod mirror;
pub mod normal;
pub mod pipeline;
pub mod tests;
pub mod top;

pub use bullet::{
    build_sigma_dblprime, build_sigma_prime, erase, eta, is_upward_closed, is_valid_word, psi, upward_closure,
    word_join, word_leq, BulletError,
};
pub use mirror::{comb, down, is_clean, up, MirrorError};
pub use normal::{nf, nf_with, odot, otimes, positive, positive_with, reduce, NFItem, NfConfig, NfError, NormalForm};
pub use pipeline::{decide_test, reduce_to_onefree, reduce_to_onefree_with, Obligation};
pub use tests::{interone, interone_sum, test_expr, TestSet};
pub use top::{phi_top, phi_top_over, top_free_vars, top_image};
