//! Independent exact-arithmetic ground truth: matrix realizations and Jordan
//! types in types A and D, and adjoint rank signatures from a Chevalley basis.

pub mod chevalley;
pub mod classical;
pub mod matrix;
pub mod roots;
pub mod signature;

pub use chevalley::{ad_matrix, structure_constants, ChevalleyAlgebra, StructureConstants};
pub use classical::{classical_matrix, classical_partition, jordan_partition, regular_partition};
pub use matrix::IntMatrix;
pub use roots::RootSystem;
pub use signature::{signature_fuse, AdjointOracle, RankSignature, SignatureMatch, SignatureTable};
