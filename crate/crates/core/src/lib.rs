//! Maniplexes as edge-coloured flag graphs: symmetry invariants, symmetry
//! type graphs, the `2̂^M` extension, voltage covers of two-vertex pregraphs,
//! and certified two-orbit maniplexes of every type `2_I^n`.

pub mod bicolour;
pub mod catalogue;
pub mod construct;
pub mod error;
pub mod exec;
pub mod maniplex;
pub mod perm;
pub mod poset;
pub mod pregraph;
pub mod symmetry;
pub mod twohat;
pub mod voltage;

pub use error::{Error, Result};
pub use exec::Exec;
pub use maniplex::Maniplex;
pub use perm::Perm;
pub use pregraph::Pregraph;
