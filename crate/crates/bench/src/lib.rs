//! Benchmark fixtures.

use hypercrn::{datasets, parse_network, ReactionNetwork};

pub fn mapk() -> ReactionNetwork {
    parse_network(datasets::MAPK).expect("bundled network parses")
}

pub fn michaelis_menten() -> ReactionNetwork {
    parse_network(datasets::MICHAELIS_MENTEN).expect("bundled network parses")
}
