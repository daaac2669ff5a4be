//! Fusion of labeled Dynkin diagrams into Levi subsets.
//!
//! A labeled diagram `(J1, J2)` determines the nilpotent element
//! `X = sum of X_a over J1 + sum of X_-b over J2`. The fusion map sends it to
//! the Weyl-conjugacy class of `J` with `X` regular in the Levi `L_J`.

pub mod conjugacy;
pub mod diagram;
pub mod epattern;
pub mod error;
pub mod fold;
pub mod fusion;
pub mod oracle;
pub mod partition;
pub mod weight;

pub use diagram::{DynkinDiagram, Family, LabeledDiagram, Sign, VertexSet};
pub use error::{FusionError, Result};
pub use fusion::{fuse, Fuser, FusionOutcome, Method};
