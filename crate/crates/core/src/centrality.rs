//! Loop-incidence centrality.
//!
//! The centrality of a species is the fraction of all closed loops that pass
//! through it. Species more than one standard deviation above the mean are
//! reported as high, those more than one below as low. The standard
//! deviation uses the `n − 1` denominator.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::loops::{enumerate_closed_loops, ClosedLoop, LoopError, LoopOptions};
use crate::network::ReactionNetwork;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CentralityError {
    #[error("the network has no closed loops")]
    NoLoops,
    #[error("centrality needs at least two items, got {0}")]
    TooFewItems(usize),
    #[error(transparent)]
    Loops(#[from] LoopError),
}

/// Number of loops passing through each species, in network species order.
pub fn species_loop_incidence(net: &ReactionNetwork, loops: &[ClosedLoop]) -> Vec<u64> {
    let mut counts = vec![0u64; net.num_species()];
    for l in loops {
        for &s in l.species() {
            counts[s] += 1;
        }
    }
    counts
}

/// Number of loops using each reaction, in network reaction order.
pub fn reaction_loop_incidence(net: &ReactionNetwork, loops: &[ClosedLoop]) -> Vec<u64> {
    let mut counts = vec![0u64; net.num_reactions()];
    for l in loops {
        for &r in l.reactions() {
            counts[r] += 1;
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityReport {
    /// Species labels or reaction ids, in network order.
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub loop_total: u64,
    /// Exact `counts[i] / loop_total`.
    pub proportions: Vec<Ratio<u64>>,
    pub mean: f64,
    /// Sample standard deviation (`n − 1`).
    pub std: f64,
    /// Population standard deviation (`n`), for reference.
    pub population_std: f64,
    pub hi_threshold: f64,
    pub lo_threshold: f64,
    /// Indices above `hi_threshold`, by decreasing proportion.
    pub high: Vec<usize>,
    /// Indices below `lo_threshold`, by increasing proportion.
    pub low: Vec<usize>,
}

impl CentralityReport {
    pub fn from_counts(labels: Vec<String>, counts: Vec<u64>, loop_total: u64) -> Result<Self, CentralityError> {
        if loop_total == 0 {
            return Err(CentralityError::NoLoops);
        }
        let n = counts.len();
        if n < 2 {
            return Err(CentralityError::TooFewItems(n));
        }
        let proportions: Vec<Ratio<u64>> = counts.iter().map(|&c| Ratio::new(c, loop_total)).collect();

        // moments in exact arithmetic; proportions are c / T
        let t = loop_total as u128;
        let sum: u128 = counts.iter().map(|&c| c as u128).sum();
        let sum_sq: u128 = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
        let n128 = n as u128;
        // Σ (c − sum/n)² · n = n·Σc² − (Σc)²
        let scatter_n = n128 * sum_sq - sum * sum;
        let denom_t2 = (t * t) as f64;
        let mean = sum as f64 / (n as f64 * t as f64);
        let sample_var = scatter_n as f64 / (n128 * (n128 - 1)) as f64 / denom_t2;
        let pop_var = scatter_n as f64 / (n128 * n128) as f64 / denom_t2;
        let std = sample_var.sqrt();
        let population_std = pop_var.sqrt();
        let hi_threshold = mean + std;
        let lo_threshold = mean - std;

        let value = |i: usize| proportions[i].to_f64().unwrap_or(f64::NAN);
        let mut high: Vec<usize> = (0..n).filter(|&i| value(i) > hi_threshold).collect();
        high.sort_by(|&a, &b| proportions[b].cmp(&proportions[a]).then(a.cmp(&b)));
        let mut low: Vec<usize> = (0..n).filter(|&i| value(i) < lo_threshold).collect();
        low.sort_by(|&a, &b| proportions[a].cmp(&proportions[b]).then(a.cmp(&b)));

        Ok(Self {
            labels,
            counts,
            loop_total,
            proportions,
            mean,
            std,
            population_std,
            hi_threshold,
            lo_threshold,
            high,
            low,
        })
    }

    pub fn proportion(&self, label: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == label)?;
        self.proportions[i].to_f64()
    }

    pub fn count(&self, label: &str) -> Option<u64> {
        let i = self.labels.iter().position(|l| l == label)?;
        Some(self.counts[i])
    }

    pub fn high_labels(&self) -> Vec<&str> {
        self.high.iter().map(|&i| self.labels[i].as_str()).collect()
    }

    pub fn low_labels(&self) -> Vec<&str> {
        self.low.iter().map(|&i| self.labels[i].as_str()).collect()
    }

    /// Indices ordered by decreasing proportion, ties in network order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.labels.len()).collect();
        idx.sort_by(|&a, &b| self.proportions[b].cmp(&self.proportions[a]).then(a.cmp(&b)));
        idx
    }
}

pub fn species_centrality(net: &ReactionNetwork, loops: &[ClosedLoop]) -> Result<CentralityReport, CentralityError> {
    CentralityReport::from_counts(
        net.species().to_vec(),
        species_loop_incidence(net, loops),
        loops.len() as u64,
    )
}

pub fn reaction_centrality(net: &ReactionNetwork, loops: &[ClosedLoop]) -> Result<CentralityReport, CentralityError> {
    CentralityReport::from_counts(
        net.reaction_ids().to_vec(),
        reaction_loop_incidence(net, loops),
        loops.len() as u64,
    )
}

/// Enumerate directed loops and rank species.
pub fn centrality_report(net: &ReactionNetwork) -> Result<CentralityReport, CentralityError> {
    let loops = enumerate_closed_loops(net, &LoopOptions::default())?;
    species_centrality(net, &loops)
}
