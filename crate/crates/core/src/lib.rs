//! Coupled cell networks: balanced partitions, graph fibrations, fundamental
//! networks, hidden symmetry and synchrony-breaking steady states.

pub mod bifurcation;
pub mod bundled;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod fibration;
pub mod fundamental;
pub mod interior;
pub mod io;
pub mod linalg;
pub mod network;
pub mod rng;
pub mod synchrony;
pub mod tolerances;

pub use error::{Error, Result};
pub use fibration::GraphFibration;
pub use fundamental::SemigroupTable;
pub use io::LoadedNetwork;
pub use network::{InputMapNetwork, Network, Partition};
pub use tolerances::Tolerances;
