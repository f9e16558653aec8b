//! Cayley configuration spaces of 1-dof tree-decomposable planar linkages.
//!
//! A linkage is reduced to a chain of ruler-and-compass construction steps
//! hanging off a base non-edge. The length of that non-edge parametrizes the
//! realization space: for every realization type (one orientation sign per
//! step) the realizable lengths form a union of closed intervals, and the
//! intervals are glued at their collinear endpoints into continuous motions.
//!
//! The usual entry point is [`Analysis`], which bundles a validated
//! [`TdLinkage`] with its [`CayleyConfigSpace`].

pub mod cayley;
pub mod config;
pub mod error;
pub mod linkage;
pub mod motion;
pub mod realization;

pub use cayley::{
    build_ccs, build_oriented_ccs, candidate_endpoints, canonical_types, link_intervals, realizable_at, Candidate,
    CayleyConfigSpace, IntervalId, IntervalLink, OrientedCcs, OrientedInterval, Side,
};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use linkage::{
    check_generic, derive_construction, enumerate_base_nonedges, is_low, reduce_clusters, Bar, ClusterSpec,
    ConstructionStep, Decoration, LinkageSpec, LowComplexity, ReducedGraph, TdLinkage, VertexPair,
};
pub use motion::{
    Analysis, ContinuousMotion, Curve3D, EndpointGraded, MotionKind, MotionLeg, NearestPair, NotConnected, PairCase,
    PairClassification, Sample, Sampler, TracedCurve, Uniform,
};
pub use realization::{
    cayley_distance, complete_cayley_distance_vector, orientation_of, parse_literal, realize, restore_decorations,
    CayleyDistanceVector, Realization, RealizationType,
};

/// 2D point / vector type used throughout.
pub type Vec2 = nalgebra::Vector2<f64>;
