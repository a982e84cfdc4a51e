//! Chronological event chains and their spatial statistics.
//!
//! Consecutive located events are joined into a chain. The links are
//! hypothetical: they describe where violence happened next, not a route
//! anyone travelled.

mod borders;
mod chain;
mod geojson;
mod point;
mod scenario;

use thiserror::Error;

pub use borders::{distance_to_border, BorderLine, BorderSet, MAX_VERTEX_SPACING_KM};
pub use chain::{
    chain_events, metrics_csv, year_metrics, ChainLink, EventChain, GapMode, YearMetrics,
};
pub use geojson::export_chain_geojson;
pub use point::{haversine_km, GeoPoint, EARTH_RADIUS_KM};
pub use scenario::{classify_scenario, Scenario, ScenarioParams, ScenarioReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("coordinates out of range: lat {lat}, lon {lon}")]
    OutOfRange { lat: f64, lon: f64 },

    #[error("border set is empty")]
    EmptyBorderSet,

    #[error("border line {0:?} has fewer than two vertices")]
    ShortBorderLine(String),

    #[error("invalid borders GeoJSON: {0}")]
    BorderDocument(String),

    #[error("chain has {0} located events, need at least 3")]
    ChainTooShort(usize),

    #[error("chain is empty")]
    EmptyChain,
}
