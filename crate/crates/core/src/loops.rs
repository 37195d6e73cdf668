//! Closed loops: simple alternating species/reaction cycles.
//!
//! A chain `v1 -r1-> v2 -r2-> ... -rq-> v(q+1)` has pairwise distinct
//! `v1..vq`, pairwise distinct `r1..rq`, and each step `vk -rk-> v(k+1)`
//! admissible under the chosen [`Traversal`]. A closed loop is a chain with
//! `v(q+1) = v1` and `q > 1`, stored rotated so that it starts at its
//! lexicographically smallest species label.
//!
//! Steps read the reactant and product complexes (A and B), not N, so
//! catalysts remain traversable.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::network::ReactionNetwork;

/// Default cap on visited search states.
pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("unknown reaction `{0}`")]
    UnknownReaction(String),
    #[error("a chain needs one more vertex than edges (got {vertices} vertices, {edges} edges)")]
    Shape { vertices: usize, edges: usize },
    #[error("loop enumeration exceeded the budget of {0} visited states")]
    BudgetExceeded(u64),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Traversal {
    /// `vk` is a reactant and `v(k+1)` a product of `rk`.
    #[default]
    Directed,
    /// Both in the support of `rk`, never both reactants and never both
    /// products.
    Undirected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopOptions {
    /// Maximum number of reactions in a loop; `None` means no bound.
    pub max_length: Option<usize>,
    pub traversal: Traversal,
    /// Abort after this many visited search states.
    pub state_budget: Option<u64>,
    /// Log a warning when more loops than this are found.
    pub warn_above: usize,
}

impl Default for LoopOptions {
    fn default() -> Self {
        Self {
            max_length: None,
            traversal: Traversal::Directed,
            state_budget: Some(DEFAULT_STATE_BUDGET),
            warn_above: 1_000_000,
        }
    }
}

/// Can `rk` carry the walk from species `from` to species `to`?
pub fn step_allowed(net: &ReactionNetwork, r: usize, from: usize, to: usize, traversal: Traversal) -> bool {
    let (a, b) = (net.reactant_row(r), net.product_row(r));
    match traversal {
        Traversal::Directed => a[from] > 0 && b[to] > 0,
        Traversal::Undirected => {
            let in_supp = |s: usize| a[s] > 0 || b[s] > 0;
            in_supp(from) && in_supp(to) && a[from] * a[to] == 0 && b[from] * b[to] == 0
        }
    }
}

/// Conditions C1–C3 on a labelled chain.
pub fn is_chain(
    net: &ReactionNetwork,
    vertices: &[&str],
    edges: &[&str],
    traversal: Traversal,
) -> Result<bool, LoopError> {
    if edges.is_empty() || vertices.len() != edges.len() + 1 {
        return Err(LoopError::Shape {
            vertices: vertices.len(),
            edges: edges.len(),
        });
    }
    let vs = vertices
        .iter()
        .map(|v| {
            net.species_position(v)
                .ok_or_else(|| LoopError::UnknownSpecies(v.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let es = edges
        .iter()
        .map(|e| {
            net.reaction_position(e)
                .ok_or_else(|| LoopError::UnknownReaction(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(chain_indices_ok(net, &vs, &es, traversal))
}

pub(crate) fn chain_indices_ok(net: &ReactionNetwork, vs: &[usize], es: &[usize], traversal: Traversal) -> bool {
    let q = es.len();
    let distinct = |xs: &[usize]| {
        let mut v = xs.to_vec();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    };
    distinct(&vs[..q]) && distinct(es) && (0..q).all(|k| step_allowed(net, es[k], vs[k], vs[k + 1], traversal))
}

/// A closed loop `species[0] -reactions[0]-> species[1] -> ... -> species[0]`
/// in canonical rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedLoop {
    species: Vec<usize>,
    reactions: Vec<usize>,
}

impl ClosedLoop {
    /// Rotate into canonical form. `species[k] -reactions[k]->
    /// species[k+1 mod q]`; no admissibility check is made.
    pub fn new(net: &ReactionNetwork, species: Vec<usize>, reactions: Vec<usize>) -> Self {
        assert_eq!(species.len(), reactions.len(), "one reaction per species in a loop");
        let labels = net.species();
        let start = (0..species.len())
            .min_by(|&i, &j| labels[species[i]].cmp(&labels[species[j]]))
            .unwrap_or(0);
        let mut species = species;
        let mut reactions = reactions;
        species.rotate_left(start);
        reactions.rotate_left(start);
        Self { species, reactions }
    }

    /// From labels, with the closing vertex omitted.
    pub fn from_labels(net: &ReactionNetwork, species: &[&str], reactions: &[&str]) -> Result<Self, LoopError> {
        if species.len() != reactions.len() {
            return Err(LoopError::Shape {
                vertices: species.len(),
                edges: reactions.len(),
            });
        }
        let vs = species
            .iter()
            .map(|v| {
                net.species_position(v)
                    .ok_or_else(|| LoopError::UnknownSpecies(v.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let es = reactions
            .iter()
            .map(|e| {
                net.reaction_position(e)
                    .ok_or_else(|| LoopError::UnknownReaction(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(net, vs, es))
    }

    /// Number of reactions (q).
    pub fn len(&self) -> usize {
        self.reactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reactions.is_empty()
    }

    pub fn species(&self) -> &[usize] {
        &self.species
    }

    pub fn reactions(&self) -> &[usize] {
        &self.reactions
    }

    pub fn contains_species(&self, s: usize) -> bool {
        self.species.contains(&s)
    }

    /// Alternating `v1 r1 v2 r2 ... vq rq`.
    pub fn canonical_key<'a>(&self, net: &'a ReactionNetwork) -> Vec<&'a str> {
        let (sp, rx) = (net.species(), net.reaction_ids());
        self.species
            .iter()
            .zip(&self.reactions)
            .flat_map(|(&s, &r)| [sp[s].as_str(), rx[r].as_str()])
            .collect()
    }

    /// `v1 -r1-> v2 -r2-> v1`.
    pub fn display(&self, net: &ReactionNetwork) -> String {
        let (sp, rx) = (net.species(), net.reaction_ids());
        let mut out = String::new();
        for (&s, &r) in self.species.iter().zip(&self.reactions) {
            out.push_str(&sp[s]);
            out.push_str(" -");
            out.push_str(&rx[r]);
            out.push_str("-> ");
        }
        if let Some(&s) = self.species.first() {
            out.push_str(&sp[s]);
        }
        out
    }

    /// The loop as a closed chain (closing vertex appended).
    pub fn is_valid(&self, net: &ReactionNetwork, traversal: Traversal) -> bool {
        let mut vs = self.species.clone();
        vs.push(self.species[0]);
        self.len() > 1 && chain_indices_ok(net, &vs, &self.reactions, traversal)
    }
}

struct Search<'a> {
    succ: Vec<Vec<(usize, usize)>>,
    rank: Vec<usize>,
    max_len: usize,
    budget: Option<u64>,
    visited: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

struct Frame {
    start: usize,
    species: Vec<usize>,
    reactions: Vec<usize>,
    on_path: Vec<bool>,
    used: Vec<bool>,
    out: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Search<'_> {
    fn visit(&self, frame: &mut Frame, v: usize) {
        let n = self.visited.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| n > b) {
            self.aborted.store(true, Ordering::Relaxed);
        }
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        let depth = frame.reactions.len();
        for &(r, w) in &self.succ[v] {
            if frame.used[r] {
                continue;
            }
            if w == frame.start {
                if depth + 1 >= 2 {
                    let mut rs = frame.reactions.clone();
                    rs.push(r);
                    frame.out.push((frame.species.clone(), rs));
                }
                continue;
            }
            if frame.on_path[w] || self.rank[w] < self.rank[frame.start] || depth + 2 > self.max_len {
                continue;
            }
            frame.used[r] = true;
            frame.on_path[w] = true;
            frame.reactions.push(r);
            frame.species.push(w);
            self.visit(frame, w);
            frame.species.pop();
            frame.reactions.pop();
            frame.on_path[w] = false;
            frame.used[r] = false;
        }
    }
}

/// Admissible `(reaction, next species)` steps out of every species.
fn successors(net: &ReactionNetwork, traversal: Traversal) -> Vec<Vec<(usize, usize)>> {
    let ns = net.num_species();
    (0..ns)
        .map(|v| {
            let mut out = Vec::new();
            for r in 0..net.num_reactions() {
                for w in 0..ns {
                    if w != v && step_allowed(net, r, v, w, traversal) {
                        out.push((r, w));
                    }
                }
            }
            out
        })
        .collect()
}

/// Every closed loop of length `2..=max_length`, sorted by canonical key.
///
/// Each loop is found exactly once, from its smallest-labelled species.
/// Starting species are searched in parallel.
pub fn enumerate_closed_loops(net: &ReactionNetwork, opts: &LoopOptions) -> Result<Vec<ClosedLoop>, LoopError> {
    let ns = net.num_species();
    let mut order: Vec<usize> = (0..ns).collect();
    order.sort_by(|&a, &b| net.species()[a].cmp(&net.species()[b]));
    let mut rank = vec![0; ns];
    for (k, &s) in order.iter().enumerate() {
        rank[s] = k;
    }
    let visited = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let search = Search {
        succ: successors(net, opts.traversal),
        rank,
        max_len: opts.max_length.unwrap_or(usize::MAX).min(net.num_reactions()),
        budget: opts.state_budget,
        visited: &visited,
        aborted: &aborted,
    };
    let found: Vec<Vec<(Vec<usize>, Vec<usize>)>> = order
        .par_iter()
        .map(|&start| {
            let mut frame = Frame {
                start,
                species: vec![start],
                reactions: Vec::new(),
                on_path: vec![false; ns],
                used: vec![false; net.num_reactions()],
                out: Vec::new(),
            };
            frame.on_path[start] = true;
            search.visit(&mut frame, start);
            frame.out
        })
        .collect();
    if aborted.load(Ordering::Relaxed) {
        return Err(LoopError::BudgetExceeded(opts.state_budget.unwrap_or(u64::MAX)));
    }
    let mut loops: Vec<ClosedLoop> = found
        .into_iter()
        .flatten()
        .map(|(species, reactions)| ClosedLoop { species, reactions })
        .collect();
    sort_loops(net, &mut loops);
    if loops.len() > opts.warn_above {
        log::warn!("{} closed loops enumerated", loops.len());
    }
    Ok(loops)
}

pub fn sort_loops(net: &ReactionNetwork, loops: &mut [ClosedLoop]) {
    loops.sort_by(|a, b| a.canonical_key(net).cmp(&b.canonical_key(net)));
}

/// Number of directed closed loops with no length bound.
pub fn loop_count(net: &ReactionNetwork) -> Result<usize, LoopError> {
    enumerate_closed_loops(net, &LoopOptions::default()).map(|l| l.len())
}
