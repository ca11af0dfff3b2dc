//! Exact element-order statistics for finite groups and the lattice
//! construction of `p`-groups with small average order.

pub mod arith;
pub mod corpus;
pub mod describe;
pub mod error;
pub mod group;
pub mod lattice;
pub mod scan;
pub mod secretive;
pub mod stats;

pub use error::{Error, Result};
