//! Test oracles kept independent of the library's algorithms: rational
//! Gauss–Jordan elimination, brute-force loop enumeration and random
//! network generation.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hypercrn::loops::{is_chain, Traversal};
use hypercrn::{Complex, Reaction, ReactionNetwork, Term};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn q(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

pub fn to_rational(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(q).collect()).collect()
}

/// Reduced row echelon form over ℚ; returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[row].clone();
                for (v, pv) in m[i].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m = to_rational(rows);
    rref(&mut m).len()
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    rank(
        &rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect::<Vec<_>>(),
    )
}

/// Is `v` in the rational row space of `rows`?
pub fn in_span(rows: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(rows) == rank(&with)
}

/// Basis of the right null space `{x : M x = 0}` over ℚ.
pub fn null_space(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = to_rational(rows);
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); ncols];
            x[f] = BigRational::from_integer(1.into());
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector.
pub fn integerize(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_positive() && !x.is_negative())
}

const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

fn random_complex<R: Rng>(rng: &mut R, species: usize, max_coef: u64) -> Complex {
    loop {
        let terms: Vec<Term> = (0..species)
            .filter_map(|s| {
                let c = if rng.gen_bool(0.35) {
                    rng.gen_range(1..=max_coef)
                } else {
                    0
                };
                (c > 0).then(|| Term::new(c, NAMES[s]))
            })
            .collect();
        if !terms.is_empty() {
            return Complex::new(terms).unwrap();
        }
    }
}

/// Closed network with up to `max_species` species and exactly
/// `reactions` reactions.
pub fn random_network<R: Rng>(rng: &mut R, max_species: usize, reactions: usize, max_coef: u64) -> ReactionNetwork {
    let species = rng.gen_range(1..=max_species).max(2);
    let mut rs = Vec::new();
    while rs.len() < reactions {
        let a = random_complex(rng, species, max_coef);
        let b = random_complex(rng, species, max_coef);
        if a.same_multiset(&b) {
            continue;
        }
        rs.push(Reaction::new(format!("r{}", rs.len() + 1), a, b));
    }
    ReactionNetwork::new(rs, Default::default()).unwrap()
}

fn permutations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest, k - 1) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every closed loop as a set of rotation-canonical label keys, found by
/// generating all vertex and edge sequences and filtering with `is_chain`.
pub fn brute_force_loops(net: &ReactionNetwork, traversal: Traversal) -> BTreeSet<Vec<String>> {
    let sp: Vec<usize> = (0..net.num_species()).collect();
    let rx: Vec<usize> = (0..net.num_reactions()).collect();
    let mut found = BTreeSet::new();
    for qlen in 2..=sp.len().min(rx.len()) {
        for vs in permutations(&sp, qlen) {
            for es in permutations(&rx, qlen) {
                let mut vlabels: Vec<&str> = vs.iter().map(|&v| net.species()[v].as_str()).collect();
                vlabels.push(vlabels[0]);
                let elabels: Vec<&str> = es.iter().map(|&e| net.reaction_ids()[e].as_str()).collect();
                if is_chain(net, &vlabels, &elabels, traversal).unwrap() {
                    // rotate to the smallest label
                    let start = (0..qlen).min_by_key(|&i| vlabels[i]).unwrap();
                    let key: Vec<String> = (0..qlen)
                        .flat_map(|k| {
                            let i = (start + k) % qlen;
                            [vlabels[i].to_string(), elabels[i].to_string()]
                        })
                        .collect();
                    found.insert(key);
                }
            }
        }
    }
    found
}
