use thiserror::Error;

use crate::diagram::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("rank must be {legal}")]
    InvalidRank { family: Family, rank: u32, legal: &'static str },

    #[error("labels overlap at vertex {0}")]
    LabelsOverlap(u32),

    #[error("vertex {vertex} out of range 1..={rank}")]
    VertexOutOfRange { vertex: u32, rank: u32 },

    #[error("malformed JSON: {0}")]
    MalformedJson(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("{op} does not support family {family}")]
    UnsupportedFamily { family: Family, op: &'static str },

    #[error("permutation is not a diagram automorphism")]
    NotAnAutomorphism,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("partition {0} violates the type D parity rule")]
    PartitionInvariant(String),

    #[error("digraph has a directed cycle")]
    CyclicDigraph,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("no pattern matches {0}")]
    DetectionGap(String),

    #[error("pattern match is stale for this diagram")]
    StaleMatch,

    #[error("subset {0} is not stable under the folding")]
    NotStable(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("no signature class matches {0}")]
    Falsified(String),

    #[error("rank {rank} exceeds the limit {limit} for {op}")]
    CapabilityExceeded { op: &'static str, rank: u32, limit: u32 },

    #[error("cache error: {0}")]
    Cache(String),
}

impl FusionError {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            FusionError::InvalidRank { .. } => "invalid_rank",
            FusionError::LabelsOverlap(_) => "labels_overlap",
            FusionError::VertexOutOfRange { .. } => "vertex_out_of_range",
            FusionError::MalformedJson(_) => "malformed_json",
            FusionError::UnknownFamily(_) => "unknown_family",
            FusionError::UnsupportedFamily { .. } => "unsupported_family",
            FusionError::NotAnAutomorphism => "not_an_automorphism",
            FusionError::Precondition(_) => "precondition",
            FusionError::PartitionInvariant(_) => "partition_invariant",
            FusionError::CyclicDigraph => "cyclic_digraph",
            FusionError::NotNilpotent => "not_nilpotent",
            FusionError::DetectionGap(_) => "detection_gap",
            FusionError::StaleMatch => "stale_match",
            FusionError::NotStable(_) => "not_stable",
            FusionError::Consistency(_) => "consistency",
            FusionError::Falsified(_) => "falsified",
            FusionError::CapabilityExceeded { .. } => "capability_exceeded",
            FusionError::Cache(_) => "cache",
        }
    }

    /// Errors caused by the caller's input rather than by the library.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            FusionError::InvalidRank { .. }
                | FusionError::LabelsOverlap(_)
                | FusionError::VertexOutOfRange { .. }
                | FusionError::MalformedJson(_)
                | FusionError::UnknownFamily(_)
                | FusionError::UnsupportedFamily { .. }
                | FusionError::NotAnAutomorphism
                | FusionError::Precondition(_)
                | FusionError::CapabilityExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, FusionError>;
