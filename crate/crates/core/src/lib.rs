//! Retracts, retraction congruences and absorption properties of finite
//! lattices.
//!
//! Lattices are small explicit structures ([`Lattice`]) with precomputed
//! meet/join tables; everything else — congruences, retractions, the retract
//! poset, grid counting, lattice enumeration — is built on top of them.
//! Brute-force searches are guarded by [`Limits`].

pub mod absorption;
pub mod catalog;
pub mod congruence;
pub mod enumerate;
mod error;
pub mod grid;
mod limits;
pub mod order;
pub mod retraction;
pub mod search;

pub use absorption::{
    builtin_property, check_absorption, embeddings, AbsorptionProperty, BuiltinProperty, Gamma, Scope,
    Verdict,
};
pub use catalog::{boolean_minus_element_check, catalog, CatalogEntry, Removal};
pub use congruence::{
    all_compatible_quasiorders, all_congruences, congruence_lattice, principal_congruence, Partition,
    Relation,
};
pub use enumerate::enumerate_lattices;
pub use error::{Error, Result};
pub use grid::{count_retracts, grid_retracts, make_grid, maximal_chains, GridShape, RetractCount};
pub use limits::{Limits, ENV_MAX_N};
pub use order::{Lattice, LatticeJson, StructuralFlags, SubsetMask};
pub use retraction::{all_retractions, rcon, ret_poset, retracts, EndoMap, RetPoset, RetractMode};
pub use search::{search_l8, SearchReport};
