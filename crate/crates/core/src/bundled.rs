//! Example networks shipped with the library.

use crate::io::{parse_network, LoadedNetwork};

pub const A: &str = include_str!("../networks/A.json");
pub const B: &str = include_str!("../networks/B.json");
pub const C: &str = include_str!("../networks/C.json");
pub const NONHOM: &str = include_str!("../networks/nonhom.json");
pub const TRIANGLE: &str = include_str!("../networks/triangle.json");

pub const ALL: &[(&str, &str)] = &[("A", A), ("B", B), ("C", C), ("nonhom", NONHOM), ("triangle", TRIANGLE)];

/// Loads a bundled network by name. Panics on unknown names.
pub fn network(name: &str) -> LoadedNetwork {
    let json = ALL.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no bundled network named {name}")).1;
    parse_network(json).expect("bundled network is valid")
}
