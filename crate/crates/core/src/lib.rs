//! Finite, exact verification of orbifold Euler characteristic generating
//! functions, wreath-product centralizers and Hecke operator identities.

pub mod bundle;
pub mod cli;
pub mod error;
pub mod euler;
pub mod fixtures;
pub mod group;
pub mod gset;
pub mod homspace;
pub mod lattice;
pub mod par;
pub mod presentation;
pub mod series;
pub mod subgroups;
pub mod verify;

pub use error::{Error, Result};
pub use group::{Elem, FiniteGroup, GroupSpec};
pub use gset::FinGSet;
pub use par::{Budget, Context, Exec};
