//! Bases of the dual hypergraphic matroids.
//!
//! `F = [Nᵀ | Id(R)]` is eliminated with pivots restricted to the species
//! block; the reaction blocks of rows whose species block vanished span
//! `ker N` (hypercycles). `F* = [N | Id(S)]` is eliminated within the
//! reaction block; its nonzero reaction blocks span `im Nᵀ` (cocycles) and
//! the species blocks of the remaining rows span `ker Nᵀ` (conservation
//! laws). Every emitted vector is irreducible with its first nonzero entry
//! positive.
//!
//! The matroids themselves are infinite; they are represented by a basis
//! plus [`crate::zmodule::closure_contains`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::network::{stoichiometric_matrix, ReactionNetwork};
use crate::zmodule::{closure_contains, eliminate_indices, reduce, EliminationOptions, IntegerMatrix, SignedMultiset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("flux vector is indexed by {found:?}, expected the reactions {expected:?}")]
    DimensionMismatch { expected: Vec<String>, found: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Hypercycle,
    Cocycle,
    Conservation,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Hypercycle => "hypercycle",
            BasisKind::Cocycle => "cocycle",
            BasisKind::Conservation => "conservation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSet {
    pub kind: BasisKind,
    pub vectors: Vec<SignedMultiset>,
}

impl BasisSet {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Membership in the saturated span of the basis.
    pub fn spans(&self, v: &SignedMultiset) -> bool {
        closure_contains(&self.vectors, v).unwrap_or(false)
    }
}

/// A flux multiplier per reaction. Length is the support size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluxVector(pub SignedMultiset);

impl FluxVector {
    pub fn length(&self) -> usize {
        self.0.support_size()
    }

    pub fn values(&self) -> &SignedMultiset {
        &self.0
    }
}

fn normalize(values: Vec<BigInt>, index: &IntegerMatrix, from_cols: bool) -> SignedMultiset {
    let labels = if from_cols {
        index.col_labels().clone()
    } else {
        index.row_labels().clone()
    };
    let v = SignedMultiset::new(labels, values).expect("block width matches labels");
    reduce(&v).1.sign_normalized()
}

/// Irreducible basis of `ker N`, one vector per row of `F` whose species
/// block eliminated to zero.
pub fn hypercycle_basis(n: &IntegerMatrix) -> BasisSet {
    let nt = n.transpose();
    let f = nt
        .hstack(&IntegerMatrix::identity(n.col_labels().clone()))
        .expect("Nᵀ has one row per reaction");
    let species_block: Vec<usize> = (0..n.nrows()).collect();
    let res = eliminate_indices(&f, &species_block, EliminationOptions::default());
    let s = n.nrows();
    let vectors = res
        .null_rows()
        .iter()
        .map(|row| normalize(row[s..].to_vec(), n, true))
        .collect();
    BasisSet {
        kind: BasisKind::Hypercycle,
        vectors,
    }
}

fn eliminate_dual(n: &IntegerMatrix) -> (Vec<Vec<BigInt>>, usize) {
    let f = n
        .hstack(&IntegerMatrix::identity(n.row_labels().clone()))
        .expect("N has one row per species");
    let reaction_block: Vec<usize> = (0..n.ncols()).collect();
    let res = eliminate_indices(&f, &reaction_block, EliminationOptions::default());
    (res.matrix.rows().to_vec(), res.row_rank)
}

/// Irreducible basis of `im Nᵀ`: the reaction blocks of `F*` rows that stay
/// nonzero after elimination.
pub fn cocycle_basis(n: &IntegerMatrix) -> BasisSet {
    let r = n.ncols();
    let (rows, _) = eliminate_dual(n);
    let vectors = rows
        .iter()
        .filter(|row| row[..r].iter().any(|v| !v.is_zero()))
        .map(|row| normalize(row[..r].to_vec(), n, true))
        .collect();
    BasisSet {
        kind: BasisKind::Cocycle,
        vectors,
    }
}

/// Irreducible basis of `ker Nᵀ`: species weightings `z` with `zᵀN = 0`.
pub fn conservation_laws(n: &IntegerMatrix) -> BasisSet {
    let r = n.ncols();
    let (rows, rank) = eliminate_dual(n);
    let vectors = rows[rank..]
        .iter()
        .map(|row| normalize(row[r..].to_vec(), n, false))
        .collect();
    BasisSet {
        kind: BasisKind::Conservation,
        vectors,
    }
}

/// `|R| − rank(Nᵀ)`.
pub fn hypercyclomatic_number(n: &IntegerMatrix) -> usize {
    n.ncols() - n.transpose().rank()
}

/// First-fit maximal set of reactions with independent columns of `N`,
/// returned as reaction positions in network order.
pub fn hyperspanning_forest(net: &ReactionNetwork) -> Vec<usize> {
    let n = stoichiometric_matrix(net);
    let mut kept: Vec<SignedMultiset> = Vec::new();
    let mut forest = Vec::new();
    for j in 0..n.ncols() {
        let col = n.column(j);
        let dependent = closure_contains(&kept, &col).expect("columns share the species index");
        if !dependent {
            kept.push(col);
            forest.push(j);
        }
    }
    forest
}

pub fn hyperspanning_forest_ids(net: &ReactionNetwork) -> Vec<String> {
    hyperspanning_forest(net)
        .into_iter()
        .map(|j| net.reaction_ids()[j].clone())
        .collect()
}

/// `N·y = 0` and `y ≠ 0`.
pub fn is_hypercycle(n: &IntegerMatrix, y: &FluxVector) -> Result<bool, MatroidError> {
    let prod = n.mul_vec(&y.0).map_err(|_| MatroidError::DimensionMismatch {
        expected: n.col_labels().to_vec(),
        found: y.0.labels().to_vec(),
    })?;
    Ok(prod.is_zero() && !y.0.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmodule::{index_set, same_closure};

    fn mm_n() -> IntegerMatrix {
        IntegerMatrix::from_i64(
            index_set(["s", "e", "c", "p"]),
            index_set(["r1", "r2", "r3"]),
            &[vec![-1, 1, 0], vec![-1, 1, 1], vec![1, -1, -1], vec![0, 0, 1]],
        )
        .unwrap()
    }

    fn fig1b_n() -> IntegerMatrix {
        IntegerMatrix::from_i64(
            index_set(["v1", "v2", "v3", "v4", "v5"]),
            index_set(["r1", "r2", "r3", "r4", "r5"]),
            &[
                vec![1, -1, 0, 0, 0],
                vec![0, -1, 1, -1, 0],
                vec![0, 0, -1, 1, 0],
                vec![0, 0, 0, 1, -1],
                vec![-1, 1, 0, -1, 1],
            ],
        )
        .unwrap()
    }

    fn flux(n: &IntegerMatrix, v: &[i64]) -> FluxVector {
        FluxVector(SignedMultiset::from_i64(n.col_labels().clone(), v).unwrap())
    }

    #[test]
    fn mm_bases() {
        let n = mm_n();
        let b = hypercycle_basis(&n);
        assert_eq!(b.vectors, vec![flux(&n, &[1, 1, 0]).0]);
        assert_eq!(hypercyclomatic_number(&n), 1);
        assert_eq!(cocycle_basis(&n).rank(), 2);
        let z = conservation_laws(&n);
        assert_eq!(z.rank(), 2);
        let expected = [
            SignedMultiset::from_i64(n.row_labels().clone(), &[0, 1, 1, 0]).unwrap(),
            SignedMultiset::from_i64(n.row_labels().clone(), &[1, 0, 1, 1]).unwrap(),
        ];
        assert!(same_closure(&z.vectors, &expected).unwrap());
    }

    #[test]
    fn fig1b_unique_hypercycle() {
        let n = fig1b_n();
        let b = hypercycle_basis(&n);
        assert_eq!(b.vectors, vec![flux(&n, &[0, 0, 1, 1, 1]).0]);
        assert_eq!(hypercyclomatic_number(&n), 1);
        assert_eq!(cocycle_basis(&n).rank(), 4);
        assert_eq!(conservation_laws(&n).rank(), 1);
    }

    #[test]
    fn hypercycle_checks() {
        let n = fig1b_n();
        assert!(is_hypercycle(&n, &flux(&n, &[0, 0, 1, 1, 1])).unwrap());
        assert!(is_hypercycle(&n, &flux(&n, &[0, 0, 2, 2, 2])).unwrap());
        assert!(!is_hypercycle(&n, &flux(&n, &[0, 0, 0, 0, 0])).unwrap());
        let m = mm_n();
        assert!(!is_hypercycle(&m, &flux(&m, &[1, 0, 0])).unwrap());
        assert!(is_hypercycle(&m, &flux(&n, &[0, 0, 1, 1, 1])).is_err());
    }

    #[test]
    fn flux_vector_length() {
        let n = fig1b_n();
        assert_eq!(flux(&n, &[0, 0, 1, 1, 1]).length(), 3);
    }

    #[test]
    fn empty_matrix() {
        let n = IntegerMatrix::unlabeled(&[]);
        assert_eq!(hypercycle_basis(&n).rank(), 0);
        assert_eq!(cocycle_basis(&n).rank(), 0);
        assert_eq!(conservation_laws(&n).rank(), 0);
        assert_eq!(hypercyclomatic_number(&n), 0);
    }

    #[test]
    fn non_unit_weights_stay_integral() {
        // 2A -> B, B -> 2A, B -> C, C -> B
        let n = IntegerMatrix::from_i64(
            index_set(["A", "B", "C"]),
            index_set(["r1", "r2", "r3", "r4"]),
            &[vec![-2, 2, 0, 0], vec![1, -1, -1, 1], vec![0, 0, 1, -1]],
        )
        .unwrap();
        let z = conservation_laws(&n);
        assert_eq!(
            z.vectors,
            vec![SignedMultiset::from_i64(n.row_labels().clone(), &[1, 2, 2]).unwrap()]
        );
        for y in &hypercycle_basis(&n).vectors {
            assert!(is_hypercycle(&n, &FluxVector(y.clone())).unwrap());
        }
    }
}
