//! Typed topological spaces over a distributive lattice of types.

pub mod basis;
pub mod chains;
pub mod closure;
pub mod connect;
pub mod error;
pub mod ingest;
pub mod io;
pub mod lattice;
pub mod oracle;
pub mod space;
pub mod stats;

pub use chains::{ChainView, NeighborhoodMode, TypeChain};
pub use error::{Error, Result};
pub use lattice::{Clause, Context, Literal, Poset, TypeTerm};
pub use space::{generate_topology, GeneratorSpec, PointSet, TopologyOptions, TypedSpace};

pub type ScoreTable64 = stats::ScoreTable<f64>;
pub type ScoreTable32 = stats::ScoreTable<f32>;
