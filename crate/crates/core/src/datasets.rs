//! Networks shipped with the crate.

pub const MICHAELIS_MENTEN: &str = include_str!("../data/mm.crn");
pub const FIG1B: &str = include_str!("../data/fig1b.crn");
pub const MAPK: &str = include_str!("../data/mapk.crn");
pub const MICHAELIS_MENTEN_RATES: &str = include_str!("../data/mm.rates");

/// Bundled `.crn` files by file name.
pub const BUNDLED: [(&str, &str); 3] = [("mm.crn", MICHAELIS_MENTEN), ("fig1b.crn", FIG1B), ("mapk.crn", MAPK)];

pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "mm.rates" => Some(MICHAELIS_MENTEN_RATES),
        _ => BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_network;

    #[test]
    fn bundled_networks_parse() {
        for (name, text) in BUNDLED {
            parse_network(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn mapk_shape() {
        let net = parse_network(MAPK).unwrap();
        assert_eq!((net.num_species(), net.num_reactions()), (26, 38));
    }
}
