//! Noncrossing partitions of types A, B and D: generation, chain counting,
//! closed-form checks and the bijections between them.

pub mod annulus;
pub mod arith;
pub mod enumeration;
pub mod error;
pub mod formula;
pub mod generate;
pub mod paren;
pub mod partition;
pub mod typeb;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{AnyPartition, Edge, SetPartition, SignedPartition, TypeVector};
