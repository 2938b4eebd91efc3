//! Scenic curve arrangements and route generation over colored points.
//!
//! Given red and blue (or landmark) sites in the plane, every site pair
//! defines an equidistance locus: a perpendicular bisector when the two
//! weights are equal, an Apollonius circle otherwise. The loci intersect
//! inside a bounding box to form a weighted graph; several route
//! generators walk that graph under a prioritized list of requirements.
//! The `lattice` module generalizes the construction to bisecting
//! hyperplanes in R^d.

pub mod geometry;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod routing;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate pair: sites {0} and {1} coincide")]
    DegeneratePair(u32, u32),
    #[error("curve cap exceeded: {generated} curves requested, cap is {cap}; pair enumeration grows on the order of n^4 scenic lines — restrict the input or raise max_curves")]
    CurveCapExceeded { generated: usize, cap: usize },
    #[error("node cap exceeded: graph has {nodes} nodes, cap is {cap}; use a smaller configuration or a tighter bounding box")]
    NodeCapExceeded { nodes: usize, cap: usize },
    #[error("flat cap exceeded: {flats} flats generated, cap is {cap}; hyperplane intersections grow combinatorially — lower depth_limit or the site count")]
    FlatCapExceeded { flats: usize, cap: usize },
    #[error("no line curves in graph: all curves are weighted circles; use the acu, acch, or dpe algorithm instead")]
    NoLineCurves,
    #[error("route references unknown edge {0}")]
    UnknownEdge(usize),
    #[error("{0}")]
    Data(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 3 for data problems, 4 for cap
    /// violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CurveCapExceeded { .. }
            | Error::NodeCapExceeded { .. }
            | Error::FlatCapExceeded { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
