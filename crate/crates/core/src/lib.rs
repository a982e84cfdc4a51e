//! Signed conflict-network and event-chain analytics for ACLED-style
//! political violence data.
//!
//! The crate covers two pipelines:
//!
//! * **Networks.** [`ingest`] reads event CSVs, [`graph`] aggregates the
//!   incidents into a signed directed actor graph, [`metrics`] computes
//!   per-layer centralities, cohesion, homophily and balance statistics, and
//!   [`spectral`] embeds the signed graph through its Laplacian and scores
//!   each actor's outgoing and incoming aggression from embedded tie lengths.
//! * **Event chains.** [`geo`] orders located events chronologically and
//!   derives yearly step distances, cross-border rates, border distances and
//!   inter-event gaps, plus a sanctuary/mobility classifier and GeoJSON
//!   export.
//!
//! [`cli`] wires both pipelines into file-based stages; the `cnl` binary is a
//! thin wrapper around [`cli::run`].

pub mod artifact;
pub mod cli;
pub mod geo;
pub mod graph;
pub mod ingest;
pub mod linalg;
pub mod metrics;
pub mod spectral;

/// Version tag carried by every JSON document this crate reads or writes.
pub const SCHEMA_VERSION: &str = "1";

pub use geo::{haversine_km, GeoPoint};
pub use graph::{build_graph, BuildOptions, Sign, SignedDiGraph, TieMode, WeightScheme};
pub use ingest::{ActorCatalog, Category, ColumnMapping, EventRecord, EventType};
pub use linalg::SquareMatrix;
pub use spectral::{AggressionClass, AggressionScore, Embedding, SignedLaplacian};
