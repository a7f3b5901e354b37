//! Seeded random expressions for property tests and benchmarks.

use rand::Rng;

use crate::syntax::{Expr, GrammarFamily, VarId};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub vars: Vec<VarId>,
    /// Upper bound on the number of nodes.
    pub max_size: usize,
    pub family: GrammarFamily,
    /// Restrict mirror to variables.
    pub clean: bool,
    /// Whether `0` may appear as a leaf.
    pub zero: bool,
}

impl GenConfig {
    pub fn new(names: &[&str], max_size: usize, family: GrammarFamily) -> GenConfig {
        GenConfig {
            vars: names.iter().map(|n| VarId::named(n)).collect(),
            max_size,
            family,
            clean: false,
            zero: true,
        }
    }

    pub fn clean(mut self) -> GenConfig {
        self.clean = true;
        self
    }

    pub fn without_zero(mut self) -> GenConfig {
        self.zero = false;
        self
    }
}

/// A random expression of size between 1 and `cfg.max_size`.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Expr {
    let size = rng.gen_range(1..=cfg.max_size.max(1));
    sized(rng, cfg, size)
}

fn mirror_ok(cfg: &GenConfig) -> bool {
    cfg.family != GrammarFamily::Simple
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Expr {
    let roll = rng.gen_range(0..20);
    if cfg.zero && roll == 0 {
        return Expr::Zero;
    }
    if cfg.family == GrammarFamily::Full && roll <= 2 {
        return Expr::One;
    }
    let v = Expr::Var(cfg.vars[rng.gen_range(0..cfg.vars.len())].clone());
    if cfg.clean && mirror_ok(cfg) && rng.gen_bool(0.3) {
        Expr::mirror(v)
    } else {
        v
    }
}

fn sized<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, size: usize) -> Expr {
    if size <= 1 {
        return leaf(rng, cfg);
    }
    if cfg.clean && size == 2 && mirror_ok(cfg) {
        // a mirrored variable uses both nodes
        let v = Expr::Var(cfg.vars[rng.gen_range(0..cfg.vars.len())].clone());
        return if rng.gen_bool(0.5) { Expr::mirror(v) } else { Expr::plus(v) };
    }
    let unary_mirror = mirror_ok(cfg) && !cfg.clean;
    let ops = if unary_mirror { 5 } else { 4 };
    match rng.gen_range(0..ops) {
        3 => Expr::plus(sized(rng, cfg, size - 1)),
        4 => Expr::mirror(sized(rng, cfg, size - 1)),
        op => {
            let rest = size - 1;
            if rest < 2 {
                return Expr::plus(sized(rng, cfg, rest));
            }
            let l = rng.gen_range(1..rest);
            let (a, b) = (sized(rng, cfg, l), sized(rng, cfg, rest - l));
            match op {
                0 => Expr::sum(a, b),
                1 => Expr::prod(a, b),
                _ => Expr::inter(a, b),
            }
        }
    }
}
