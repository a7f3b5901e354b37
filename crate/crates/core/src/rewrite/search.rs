//! Bounded proof search.
//!
//! Breadth-first search from both sides of the goal equation at once. Each layer
//! applies every single axiom step, at every position, in both orientations. Steps
//! whose result mentions a metavariable that the matched side does not bind take it
//! from a pool: the subterms of the two sides of the goal, plus `0` (and `1` for full
//! expressions). Terms larger than the size cap are dropped and states are closed up
//! to structural equality only, so the search is not complete.
//!
//! Conditional axioms are only used left to right, and only when enabled. Their
//! premise is proved by a nested search without conditional steps.

use std::collections::{HashMap, HashSet};

use super::axioms::{instantiate_schema, match_schema, AxiomId, Bindings};
use super::derivation::{Derivation, Orientation, Statement, Step};
use super::path::{positions, replace, subterm};
use crate::syntax::{check_family, Expr, GrammarFamily, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of top-level steps.
    pub depth: usize,
    pub size_cap: usize,
    pub conditional: bool,
    /// Depth budget of each nested premise search.
    pub premise_depth: usize,
    /// Bound on visited terms across both directions.
    pub max_states: usize,
}

impl SearchConfig {
    pub fn new(depth: usize, size_cap: usize) -> SearchConfig {
        SearchConfig { depth, size_cap, conditional: true, premise_depth: 4, max_states: 60_000 }
    }
}

/// `search_with` using conditional steps and the default state budget.
pub fn search(s: &Statement, depth: usize, size_cap: usize) -> Option<Derivation> {
    search_with(s, &SearchConfig::new(depth, size_cap))
}

pub fn search_with(s: &Statement, cfg: &SearchConfig) -> Option<Derivation> {
    let (lhs, rhs) = s.goal();
    if !check_family(&lhs, s.family) || !check_family(&rhs, s.family) {
        return None;
    }
    let mut pool: Vec<Expr> = Vec::new();
    let mut seen = HashSet::new();
    let extra = if s.family == GrammarFamily::Full { vec![Expr::Zero, Expr::One] } else { vec![Expr::Zero] };
    for t in lhs.subterms().into_iter().chain(rhs.subterms()).chain(extra.iter()) {
        if seen.insert(t.clone()) {
            pool.push(t.clone());
        }
    }
    let mut engine = Engine { family: s.family, size_cap: cfg.size_cap, pool, premises: HashMap::new(), cfg: cfg.clone() };
    engine.bidirectional(&lhs, &rhs, cfg.depth, cfg.conditional, cfg.max_states)
}

struct Engine {
    family: GrammarFamily,
    size_cap: usize,
    pool: Vec<Expr>,
    premises: HashMap<(Expr, Expr), Option<Derivation>>,
    cfg: SearchConfig,
}

type Parents = HashMap<Expr, Option<(Expr, Derivation)>>;

impl Engine {
    /// Every term reachable from `t` in one step, in a fixed order.
    fn moves(&mut self, t: &Expr, conditional: bool) -> Vec<(Expr, Derivation)> {
        let mut out = Vec::new();
        for at in positions(t) {
            let sub = subterm(t, &at).expect("position of t").clone();
            for &ax in AxiomId::ALL {
                if !ax.allowed_in(self.family) {
                    continue;
                }
                let schema = ax.schema();
                if ax.is_conditional() {
                    if !conditional {
                        continue;
                    }
                    let mut b = Bindings::new();
                    if !match_schema(&schema.lhs, &sub, &mut b) {
                        continue;
                    }
                    let (pl, pr) = schema.premise.as_ref().expect("conditional");
                    let goal = (instantiate_schema(pl, &b).unwrap(), instantiate_schema(pr, &b).unwrap());
                    let Some(premise) = self.premise(goal) else { continue };
                    let new = instantiate_schema(&schema.rhs, &b).unwrap();
                    let step = Step::new(ax, Orientation::L2R, at.clone(), b);
                    out.push((replace(t, &at, new).unwrap(), Derivation::CAx(step, Box::new(premise))));
                    continue;
                }
                for orient in [Orientation::L2R, Orientation::R2L] {
                    let (from, to) = match orient {
                        Orientation::L2R => (&schema.lhs, &schema.rhs),
                        Orientation::R2L => (&schema.rhs, &schema.lhs),
                    };
                    let mut b = Bindings::new();
                    if !match_schema(from, &sub, &mut b) {
                        continue;
                    }
                    let free: Vec<String> = crate::syntax::free_vars(to)
                        .into_iter()
                        .map(|v: VarId| v.name().to_string())
                        .filter(|m| !b.contains_key(m))
                        .collect();
                    for full in self.completions(&b, &free) {
                        let new = instantiate_schema(to, &full).unwrap();
                        let result = replace(t, &at, new).unwrap();
                        if result.size() > self.size_cap || !check_family(&result, self.family) {
                            continue;
                        }
                        out.push((result, Derivation::Ax(Step::new(ax, orient, at.clone(), full))));
                    }
                }
            }
        }
        out
    }

    fn completions(&self, b: &Bindings, free: &[String]) -> Vec<Bindings> {
        let mut acc = vec![b.clone()];
        for m in free {
            acc = acc
                .into_iter()
                .flat_map(|partial| {
                    self.pool.iter().map(move |p| {
                        let mut next = partial.clone();
                        next.insert(m.clone(), p.clone());
                        next
                    })
                })
                .collect();
        }
        acc
    }

    fn premise(&mut self, goal: (Expr, Expr)) -> Option<Derivation> {
        if let Some(known) = self.premises.get(&goal) {
            return known.clone();
        }
        // guard against re-entry while this premise is being searched
        self.premises.insert(goal.clone(), None);
        let depth = self.cfg.premise_depth;
        let states = self.cfg.max_states / 4;
        let found = self.bidirectional(&goal.0, &goal.1, depth, false, states);
        self.premises.insert(goal, found.clone());
        found
    }

    fn bidirectional(&mut self, lhs: &Expr, rhs: &Expr, depth: usize, conditional: bool, max_states: usize) -> Option<Derivation> {
        if lhs == rhs {
            return Some(Derivation::Refl(lhs.clone()));
        }
        let mut fwd: Parents = HashMap::from([(lhs.clone(), None)]);
        let mut bwd: Parents = HashMap::from([(rhs.clone(), None)]);
        let mut fwd_layer = vec![lhs.clone()];
        let mut bwd_layer = vec![rhs.clone()];
        for _ in 0..depth {
            let forward = fwd_layer.len() <= bwd_layer.len();
            let (layer, mine, other) =
                if forward { (&mut fwd_layer, &mut fwd, &bwd) } else { (&mut bwd_layer, &mut bwd, &fwd) };
            let mut next = Vec::new();
            for t in std::mem::take(layer) {
                for (u, d) in self.moves(&t, conditional) {
                    if mine.contains_key(&u) {
                        continue;
                    }
                    mine.insert(u.clone(), Some((t.clone(), d)));
                    if other.contains_key(&u) {
                        return Some(join(&fwd_or(forward, mine, other), &bwd_or(forward, mine, other), &u));
                    }
                    next.push(u);
                }
                if mine.len() + other.len() > max_states {
                    return None;
                }
            }
            if next.is_empty() {
                return None;
            }
            *layer = next;
        }
        None
    }
}

fn fwd_or<'a>(forward: bool, mine: &'a Parents, other: &'a Parents) -> &'a Parents {
    if forward {
        mine
    } else {
        other
    }
}

fn bwd_or<'a>(forward: bool, mine: &'a Parents, other: &'a Parents) -> &'a Parents {
    if forward {
        other
    } else {
        mine
    }
}

/// Steps from the root of `parents` to `t`, in order.
fn trail(parents: &Parents, t: &Expr) -> Vec<Derivation> {
    let mut out = Vec::new();
    let mut cur = t.clone();
    while let Some(Some((prev, d))) = parents.get(&cur) {
        out.push(d.clone());
        cur = prev.clone();
    }
    out.reverse();
    out
}

fn join(fwd: &Parents, bwd: &Parents, meet: &Expr) -> Derivation {
    let there = Derivation::chain(trail(fwd, meet));
    let back = Derivation::chain(trail(bwd, meet)).map(Derivation::sym);
    match (there, back) {
        (Some(a), Some(b)) => Derivation::trans(a, b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => Derivation::Refl(meet.clone()),
    }
}
