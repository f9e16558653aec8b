use thiserror::Error;

use crate::motion::NotConnected;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid linkage: {0}")]
    InvalidSpec(String),
    #[error("malformed linkage file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("cluster must share exactly its two anchors with the rest of the graph: {0}")]
    ClusterShareViolation(String),
    #[error("cluster anchors {0} and {1} coincide in local coordinates")]
    DegenerateCluster(String, String),
    #[error("not tree-decomposable from base non-edge ({0}, {1})")]
    NotTreeDecomposable(String, String),
    #[error("graph plus base non-edge has {edges} edges on {vertices} vertices, expected 2|V|-3")]
    NotOneDof { vertices: usize, edges: usize },
    #[error("base non-edge ({0}, {1}) is a bar or not a vertex pair of the graph")]
    BadBaseNonedge(String, String),
    #[error("linkage does not have low Cayley complexity (construction step {step} has no witness)")]
    NotLowComplexity { step: usize },
    #[error("{types} canonical realization types exceed the cap of {cap}")]
    TooManySteps { types: u64, cap: u64 },
    #[error("circles do not intersect at construction step {step}")]
    Unrealizable { step: usize },
    #[error("sign 0 requested at step {step} but the step is not collinear")]
    AmbiguousZeroSign { step: usize },
    #[error("realization type has {got} signs, linkage has {expected} steps")]
    TypeLength { expected: usize, got: usize },
    #[error("realizations belong to different linkages")]
    MismatchedLinkage,
    #[error("no oriented interval of type {rtype} contains length {length}")]
    NotRealizable { length: f64, rtype: String },
    #[error("interval endpoint is not linked to a neighbor")]
    UnlinkedEndpoint,
    #[error("realizations lie in different connected components")]
    NotConnected(Box<NotConnected>),
    #[error("non-edge ({0}, {1}) is not in the complete Cayley vector")]
    NonedgeNotInVector(String, String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("component index {0} out of range")]
    UnknownComponent(usize),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::Parse(_) => "ParseError",
            Error::ClusterShareViolation(_) => "ClusterShareViolation",
            Error::DegenerateCluster(..) => "DegenerateCluster",
            Error::NotTreeDecomposable(..) => "NotTreeDecomposable",
            Error::NotOneDof { .. } => "NotOneDof",
            Error::BadBaseNonedge(..) => "BadBaseNonedge",
            Error::NotLowComplexity { .. } => "NotLowComplexity",
            Error::TooManySteps { .. } => "TooManySteps",
            Error::Unrealizable { .. } => "Unrealizable",
            Error::AmbiguousZeroSign { .. } => "AmbiguousZeroSign",
            Error::TypeLength { .. } => "TypeLength",
            Error::MismatchedLinkage => "MismatchedLinkage",
            Error::NotRealizable { .. } => "NotRealizable",
            Error::UnlinkedEndpoint => "UnlinkedEndpoint",
            Error::NotConnected(_) => "NotConnected",
            Error::NonedgeNotInVector(..) => "NonedgeNotInVector",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::UnknownComponent(_) => "UnknownComponent",
        }
    }

    /// Errors caused by malformed input rather than by the geometry of a
    /// well-formed linkage.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpec(_)
                | Error::Parse(_)
                | Error::ClusterShareViolation(_)
                | Error::DegenerateCluster(..)
                | Error::BadBaseNonedge(..)
                | Error::TypeLength { .. }
                | Error::UnknownVertex(_)
                | Error::UnknownComponent(_)
        )
    }
}

impl Error {
    /// `{error, message}` plus, for [`Error::NotConnected`], the nearest pair
    /// of realizations (points need the linkage to restore decorations).
    pub fn to_json(&self, tdl: Option<&crate::linkage::TdLinkage>) -> serde_json::Value {
        let mut body = serde_json::json!({ "error": self.name(), "message": self.to_string() });
        match self {
            Error::NotConnected(payload) => {
                let nearest = match tdl {
                    Some(tdl) => payload.nearest.to_json(tdl),
                    None => serde_json::json!({ "distance": payload.nearest.distance }),
                };
                body["nearest"] = nearest;
                body["fromComponent"] = payload.from_component.to_json();
                body["toComponent"] = payload.to_component.to_json();
            }
            Error::Unrealizable { step } | Error::AmbiguousZeroSign { step } | Error::NotLowComplexity { step } => {
                body["step"] = (*step).into();
            }
            _ => {}
        }
        body
    }
}
