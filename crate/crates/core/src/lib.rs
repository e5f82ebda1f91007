pub mod bitset;
pub mod catalog;
pub mod error;
pub mod extnat;
pub mod group;

pub use bitset::Subset;
pub use error::{Error, Result};
pub use extnat::{ExtNat, ExtRatio};
pub use group::{FiniteGroup, GroupHom, GroupSpec, Section};
pub mod metric;
pub mod report;
pub mod subsets;
pub mod invariants;
pub mod transport;
pub mod product;
pub mod star;
pub mod action;
pub mod identities;
pub mod suite;
