//! Reaction networks and their weighted hyperdigraph.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::zmodule::{index_set, IndexSet, IntegerMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("reaction `{0}` has identical reactant and product complexes")]
    TrivialReaction(String),
    #[error("duplicate reaction id `{0}`")]
    DuplicateReactionId(String),
    #[error("duplicate species `{0}`")]
    DuplicateSpecies(String),
    #[error("reaction `{0}` has an empty complex (enable open systems to allow this)")]
    EmptyComplex(String),
    #[error("reaction `{reaction}` references undeclared species `{species}`")]
    UnknownSpecies { reaction: String, species: String },
    #[error("zero coefficient for `{0}`")]
    ZeroCoefficient(String),
    #[error("empty species label")]
    EmptyLabel,
}

/// One `coefficient · species` term of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coefficient: u64,
    pub species: String,
}

impl Term {
    pub fn new(coefficient: u64, species: impl Into<String>) -> Self {
        Self {
            coefficient,
            species: species.into(),
        }
    }
}

/// A multiset of species. Terms keep their written order; repeated species
/// are merged into the first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Complex {
    terms: Vec<Term>,
}

impl Complex {
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Result<Self, NetworkError> {
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            if t.species.is_empty() {
                return Err(NetworkError::EmptyLabel);
            }
            if t.coefficient == 0 {
                return Err(NetworkError::ZeroCoefficient(t.species));
            }
            match merged.iter_mut().find(|m| m.species == t.species) {
                Some(m) => m.coefficient += t.coefficient,
                None => merged.push(t),
            }
        }
        Ok(Self { terms: merged })
    }

    /// Complex with unit coefficients.
    pub fn of<S: AsRef<str>>(species: &[S]) -> Self {
        Self::new(species.iter().map(|s| Term::new(1, s.as_ref()))).expect("valid labels")
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, species: &str) -> u64 {
        self.terms
            .iter()
            .find(|t| t.species == species)
            .map_or(0, |t| t.coefficient)
    }

    /// Order-insensitive comparison of the underlying multisets.
    pub fn same_multiset(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .all(|t| other.coefficient(&t.species) == t.coefficient)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    pub id: String,
    pub reactant: Complex,
    pub product: Complex,
}

impl Reaction {
    pub fn new(id: impl Into<String>, reactant: Complex, product: Complex) -> Self {
        Self {
            id: id.into(),
            reactant,
            product,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NetworkOptions {
    /// Allow empty complexes (inflow/outflow reactions).
    pub open_system: bool,
}

/// Species, reactions and the dense reactant/product molecularity tables.
#[derive(Debug, Clone)]
pub struct ReactionNetwork {
    species: IndexSet,
    reaction_ids: IndexSet,
    reactions: Vec<Reaction>,
    species_index: HashMap<String, usize>,
    /// `reactant[r][s]` = A(r, s)
    reactant: Vec<Vec<u64>>,
    /// `product[r][s]` = B(r, s)
    product: Vec<Vec<u64>>,
}

impl PartialEq for ReactionNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.species == other.species && self.reactions == other.reactions
    }
}

impl Eq for ReactionNetwork {}

impl ReactionNetwork {
    /// Species are ordered by first appearance (reactant terms before product
    /// terms, reactions in order).
    pub fn new(reactions: Vec<Reaction>, opts: NetworkOptions) -> Result<Self, NetworkError> {
        let mut species: Vec<String> = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for r in &reactions {
            for t in r.reactant.terms().iter().chain(r.product.terms()) {
                if seen.insert(t.species.as_str()) {
                    species.push(t.species.clone());
                }
            }
        }
        Self::with_species(species, reactions, opts)
    }

    /// Explicit species order; species may be listed that no reaction uses.
    pub fn with_species(
        species: Vec<String>,
        reactions: Vec<Reaction>,
        opts: NetworkOptions,
    ) -> Result<Self, NetworkError> {
        let mut species_index = HashMap::with_capacity(species.len());
        for (i, s) in species.iter().enumerate() {
            if s.is_empty() {
                return Err(NetworkError::EmptyLabel);
            }
            if species_index.insert(s.clone(), i).is_some() {
                return Err(NetworkError::DuplicateSpecies(s.clone()));
            }
        }
        let mut ids = BTreeSet::new();
        let mut reactant = Vec::with_capacity(reactions.len());
        let mut product = Vec::with_capacity(reactions.len());
        for r in &reactions {
            if !ids.insert(r.id.as_str()) {
                return Err(NetworkError::DuplicateReactionId(r.id.clone()));
            }
            if !opts.open_system && (r.reactant.is_empty() || r.product.is_empty()) {
                return Err(NetworkError::EmptyComplex(r.id.clone()));
            }
            if r.reactant.same_multiset(&r.product) {
                return Err(NetworkError::TrivialReaction(r.id.clone()));
            }
            let row = |c: &Complex| -> Result<Vec<u64>, NetworkError> {
                let mut v = vec![0u64; species.len()];
                for t in c.terms() {
                    let &i = species_index
                        .get(&t.species)
                        .ok_or_else(|| NetworkError::UnknownSpecies {
                            reaction: r.id.clone(),
                            species: t.species.clone(),
                        })?;
                    v[i] = t.coefficient;
                }
                Ok(v)
            };
            reactant.push(row(&r.reactant)?);
            product.push(row(&r.product)?);
        }
        for (i, r) in reactions.iter().enumerate() {
            if let Some(j) = (0..i).find(|&j| reactant[j] == reactant[i] && product[j] == product[i]) {
                log::warn!(
                    "reactions `{}` and `{}` have identical complexes",
                    reactions[j].id,
                    r.id
                );
            }
        }
        Ok(Self {
            species: species.into(),
            reaction_ids: index_set(reactions.iter().map(|r| r.id.clone())),
            reactions,
            species_index,
            reactant,
            product,
        })
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), NetworkOptions::default()).expect("empty network is valid")
    }

    pub fn species(&self) -> &IndexSet {
        &self.species
    }

    pub fn reaction_ids(&self) -> &IndexSet {
        &self.reaction_ids
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_position(&self, label: &str) -> Option<usize> {
        self.species_index.get(label).copied()
    }

    pub fn reaction_position(&self, id: &str) -> Option<usize> {
        self.reaction_ids.iter().position(|r| r == id)
    }

    /// A(r, s): molecularity of species `s` in the reactant complex of `r`.
    pub fn reactant_coefficient(&self, r: usize, s: usize) -> u64 {
        self.reactant[r][s]
    }

    /// B(r, s): molecularity of species `s` in the product complex of `r`.
    pub fn product_coefficient(&self, r: usize, s: usize) -> u64 {
        self.product[r][s]
    }

    /// N(s, r) = B(r, s) − A(r, s).
    pub fn net_change(&self, s: usize, r: usize) -> i64 {
        self.product[r][s] as i64 - self.reactant[r][s] as i64
    }

    pub fn reactant_row(&self, r: usize) -> &[u64] {
        &self.reactant[r]
    }

    pub fn product_row(&self, r: usize) -> &[u64] {
        &self.product[r]
    }

    pub fn has_empty_complex(&self) -> bool {
        self.reactions
            .iter()
            .any(|r| r.reactant.is_empty() || r.product.is_empty())
    }
}

fn to_matrix(rows: IndexSet, cols: IndexSet, data: impl Iterator<Item = Vec<BigInt>>) -> IntegerMatrix {
    IntegerMatrix::new(rows, cols, data.collect()).expect("shapes follow the network")
}

/// Reactant and product molecularity matrices `(A, B)`, both |R|×|S|.
pub fn complex_matrices(net: &ReactionNetwork) -> (IntegerMatrix, IntegerMatrix) {
    let conv = |t: &[Vec<u64>]| {
        to_matrix(
            net.reaction_ids.clone(),
            net.species.clone(),
            t.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()),
        )
    };
    (conv(&net.reactant), conv(&net.product))
}

/// N = (B − A)ᵀ, shape |S|×|R|.
pub fn stoichiometric_matrix(net: &ReactionNetwork) -> IntegerMatrix {
    to_matrix(
        net.species.clone(),
        net.reaction_ids.clone(),
        (0..net.num_species()).map(|s| {
            (0..net.num_reactions())
                .map(|r| BigInt::from(net.net_change(s, r)))
                .collect()
        }),
    )
}

/// L = AᵀB, shape |S|×|S|.
pub fn adjacency_matrix(net: &ReactionNetwork) -> IntegerMatrix {
    let n = net.num_species();
    let mut l = vec![vec![0u64; n]; n];
    for r in 0..net.num_reactions() {
        for (s, &a) in net.reactant[r].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (t, &b) in net.product[r].iter().enumerate() {
                l[s][t] += a * b;
            }
        }
    }
    to_matrix(
        net.species.clone(),
        net.species.clone(),
        l.into_iter().map(|row| row.into_iter().map(BigInt::from).collect()),
    )
}

/// A reaction seen as a signed, weighted hyperedge over the species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub reaction_id: String,
    /// E⁺: net producers.
    pub positive: Vec<String>,
    /// E⁻: net consumers.
    pub negative: Vec<String>,
    /// E⁰: untouched, including catalysts.
    pub zero: Vec<String>,
    /// W(s, r) = |N(s, r)| on E⁺ ∪ E⁻, in species order.
    pub weights: Vec<(String, u64)>,
}

impl Hyperedge {
    /// M(s, r) = sign · weight.
    pub fn incidence(&self, species: &str) -> i64 {
        let w = self
            .weights
            .iter()
            .find(|(s, _)| s == species)
            .map_or(0, |&(_, w)| w as i64);
        if self.negative.iter().any(|s| s == species) {
            -w
        } else {
            w
        }
    }
}

pub fn hyperedges(net: &ReactionNetwork) -> Vec<Hyperedge> {
    (0..net.num_reactions())
        .map(|r| {
            let mut e = Hyperedge {
                reaction_id: net.reaction_ids[r].clone(),
                positive: Vec::new(),
                negative: Vec::new(),
                zero: Vec::new(),
                weights: Vec::new(),
            };
            for (s, label) in net.species.iter().enumerate() {
                let n = net.net_change(s, r);
                match n.signum() {
                    1 => e.positive.push(label.clone()),
                    -1 => e.negative.push(label.clone()),
                    _ => {
                        e.zero.push(label.clone());
                        continue;
                    }
                }
                e.weights.push((label.clone(), n.unsigned_abs()));
            }
            e
        })
        .collect()
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Graphviz rendering: species as ellipses, reactions as boxes. With a
/// highlight set, its reactions are drawn solid and the rest dashed;
/// without one every edge is solid.
pub fn to_dot(net: &ReactionNetwork, highlight: Option<&BTreeSet<String>>) -> String {
    let mut out = String::new();
    out.push_str("digraph crn {\n");
    out.push_str("  rankdir=LR;\n");
    for (i, s) in net.species.iter().enumerate() {
        let _ = writeln!(out, "  s{i} [label={}, shape=ellipse];", dot_quote(s));
    }
    for (j, r) in net.reaction_ids.iter().enumerate() {
        let _ = writeln!(out, "  r{j} [label={}, shape=box];", dot_quote(r));
    }
    for (j, r) in net.reaction_ids.iter().enumerate() {
        let style = match highlight {
            Some(h) if !h.contains(r) => ", style=dashed",
            _ => "",
        };
        let edge = |out: &mut String, from: String, to: String, coef: u64| {
            let label = if coef > 1 {
                format!(" [label=\"{coef}\"{style}]")
            } else if style.is_empty() {
                String::new()
            } else {
                " [style=dashed]".to_string()
            };
            let _ = writeln!(out, "  {from} -> {to}{label};");
        };
        for (i, &a) in net.reactant[j].iter().enumerate() {
            if a > 0 {
                edge(&mut out, format!("s{i}"), format!("r{j}"), a);
            }
        }
        for (i, &b) in net.product[j].iter().enumerate() {
            if b > 0 {
                edge(&mut out, format!("r{j}"), format!("s{i}"), b);
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rxn(id: &str, lhs: &[(u64, &str)], rhs: &[(u64, &str)]) -> Reaction {
        let c = |ts: &[(u64, &str)]| Complex::new(ts.iter().map(|&(k, s)| Term::new(k, s))).unwrap();
        Reaction::new(id, c(lhs), c(rhs))
    }

    fn michaelis_menten() -> ReactionNetwork {
        ReactionNetwork::new(
            vec![
                rxn("r1", &[(1, "s"), (1, "e")], &[(1, "c")]),
                rxn("r2", &[(1, "c")], &[(1, "s"), (1, "e")]),
                rxn("r3", &[(1, "c")], &[(1, "p"), (1, "e")]),
            ],
            NetworkOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn mm_complex_matrices() {
        let net = michaelis_menten();
        assert_eq!(net.species().to_vec(), vec!["s", "e", "c", "p"]);
        let (a, b) = complex_matrices(&net);
        assert_eq!(a.to_i64().unwrap()[0], vec![1, 1, 0, 0]);
        assert_eq!(b.to_i64().unwrap()[0], vec![0, 0, 1, 0]);
    }

    #[test]
    fn mm_stoichiometry() {
        let n = stoichiometric_matrix(&michaelis_menten());
        assert_eq!(
            n.to_i64().unwrap(),
            vec![vec![-1, 1, 0], vec![-1, 1, 1], vec![1, -1, -1], vec![0, 0, 1]]
        );
    }

    #[test]
    fn mm_adjacency() {
        let l = adjacency_matrix(&michaelis_menten());
        assert_eq!(
            l.to_i64().unwrap(),
            vec![vec![0, 0, 1, 0], vec![0, 0, 1, 0], vec![1, 2, 0, 1], vec![0, 0, 0, 0]]
        );
    }

    #[test]
    fn self_reaction_rejected() {
        let err = ReactionNetwork::new(vec![rxn("r1", &[(1, "A")], &[(1, "A")])], NetworkOptions::default());
        assert_eq!(err, Err(NetworkError::TrivialReaction("r1".into())));
    }

    #[test]
    fn reordered_terms_still_trivial() {
        let err = ReactionNetwork::new(
            vec![rxn("r1", &[(1, "A"), (1, "B")], &[(1, "B"), (1, "A")])],
            NetworkOptions::default(),
        );
        assert_eq!(err, Err(NetworkError::TrivialReaction("r1".into())));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = ReactionNetwork::new(
            vec![rxn("x", &[(1, "A")], &[(1, "B")]), rxn("x", &[(1, "B")], &[(1, "A")])],
            NetworkOptions::default(),
        );
        assert_eq!(err, Err(NetworkError::DuplicateReactionId("x".into())));
    }

    #[test]
    fn empty_complex_needs_open_system() {
        let r = vec![rxn("out", &[(1, "A")], &[])];
        assert_eq!(
            ReactionNetwork::new(r.clone(), NetworkOptions::default()),
            Err(NetworkError::EmptyComplex("out".into()))
        );
        let net = ReactionNetwork::new(r, NetworkOptions { open_system: true }).unwrap();
        assert_eq!(stoichiometric_matrix(&net).to_i64().unwrap(), vec![vec![-1]]);
    }

    #[test]
    fn duplicate_complexes_are_accepted() {
        let net = ReactionNetwork::new(
            vec![rxn("a", &[(1, "X")], &[(1, "Y")]), rxn("b", &[(1, "X")], &[(1, "Y")])],
            NetworkOptions::default(),
        )
        .unwrap();
        assert_eq!(net.num_reactions(), 2);
    }

    #[test]
    fn empty_network() {
        let net = ReactionNetwork::empty();
        let (a, b) = complex_matrices(&net);
        assert_eq!((a.nrows(), a.ncols(), b.nrows(), b.ncols()), (0, 0, 0, 0));
        assert_eq!(adjacency_matrix(&net).nrows(), 0);
    }

    #[test]
    fn reversible_pair_is_antisymmetric() {
        let net = ReactionNetwork::new(
            vec![
                rxn("f", &[(2, "A"), (1, "B")], &[(1, "C")]),
                rxn("b", &[(1, "C")], &[(2, "A"), (1, "B")]),
            ],
            NetworkOptions::default(),
        )
        .unwrap();
        let n = stoichiometric_matrix(&net).to_i64().unwrap();
        for row in n {
            assert_eq!(row[0], -row[1]);
        }
    }

    #[test]
    fn hyperedge_signs_and_weights() {
        let net = michaelis_menten();
        let e = &hyperedges(&net)[0];
        assert_eq!(e.negative, vec!["s", "e"]);
        assert_eq!(e.positive, vec!["c"]);
        assert_eq!(e.zero, vec!["p"]);
        assert!(e.weights.iter().all(|&(_, w)| w == 1));

        let cat = ReactionNetwork::new(
            vec![rxn("r1", &[(1, "S"), (1, "E")], &[(1, "P"), (1, "E")])],
            NetworkOptions::default(),
        )
        .unwrap();
        let e = &hyperedges(&cat)[0];
        assert!(e.zero.contains(&"E".to_string()));
        // catalyst survives in A and B
        let (a, b) = complex_matrices(&cat);
        assert_eq!(a.entry("r1", "E"), Some(&BigInt::from(1)));
        assert_eq!(b.entry("r1", "E"), Some(&BigInt::from(1)));

        let dimer = ReactionNetwork::new(vec![rxn("r1", &[(2, "A")], &[(1, "B")])], NetworkOptions::default()).unwrap();
        let e = &hyperedges(&dimer)[0];
        assert_eq!(e.negative, vec!["A"]);
        assert_eq!(e.weights[0], ("A".to_string(), 2));
        assert_eq!(e.incidence("A"), -2);
    }

    #[test]
    fn dot_single_reaction() {
        let net = ReactionNetwork::new(vec![rxn("r1", &[(1, "A")], &[(1, "B")])], NetworkOptions::default()).unwrap();
        let dot = to_dot(&net, None);
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(edges, vec!["  s0 -> r0;", "  r0 -> s1;"]);
    }

    #[test]
    fn dot_highlighting() {
        let net = michaelis_menten();
        let none = BTreeSet::new();
        let dot = to_dot(&net, Some(&none));
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        assert!(edges.iter().all(|l| l.contains("dashed")));

        let some: BTreeSet<String> = ["r1".to_string()].into();
        let dot = to_dot(&net, Some(&some));
        assert_eq!(
            dot.lines()
                .filter(|l| l.contains("->") && !l.contains("dashed"))
                .count(),
            3
        );
    }

    #[test]
    fn dot_coefficient_labels() {
        let net = ReactionNetwork::new(vec![rxn("r1", &[(2, "A")], &[(1, "B")])], NetworkOptions::default()).unwrap();
        assert!(to_dot(&net, None).contains("s0 -> r0 [label=\"2\"];"));
    }
}
