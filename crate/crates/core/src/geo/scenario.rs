use std::fmt;

use serde::{Deserialize, Serialize};

use super::{haversine_km, EventChain, GeoError, GeoPoint};

/// Thresholds of the sanctuary / mobility rule. The defaults are working
/// values, not calibrated ones; reports echo whichever were used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioParams {
    pub radius_km: f64,
    pub concentration_threshold: f64,
    pub step_threshold_km: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            radius_km: 150.0,
            concentration_threshold: 0.6,
            step_threshold_km: 300.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Events cluster around a base and at least one step changes country.
    Sanctuary,
    /// Events are spread out and the chain takes long steps.
    Mobility,
    Indeterminate,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Sanctuary => "sanctuary",
            Scenario::Mobility => "mobility",
            Scenario::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub n_events: usize,
    /// Index into the chain of the event minimizing summed distance to all others.
    pub medoid_index: usize,
    pub medoid: GeoPoint,
    /// Share of events within `radius_km` of the medoid.
    pub concentration: f64,
    pub crossings: usize,
    pub mean_step_km: f64,
    pub params: ScenarioParams,
}

pub fn classify_scenario(chain: &EventChain, params: ScenarioParams) -> Result<ScenarioReport, GeoError> {
    let n = chain.len();
    if n < 3 {
        return Err(GeoError::ChainTooShort(n));
    }
    let points = chain.points();
    let sums: Vec<f64> = points
        .iter()
        .map(|&p| points.iter().map(|&q| haversine_km(p, q)).sum())
        .collect();
    // First index wins ties.
    let medoid_index = (0..n).fold(0, |best, i| if sums[i] < sums[best] { i } else { best });
    let medoid = points[medoid_index];
    let near = points
        .iter()
        .filter(|&&p| haversine_km(p, medoid) <= params.radius_km)
        .count();
    let concentration = near as f64 / n as f64;
    let crossings = chain.border_crossings();
    let steps = chain.step_lengths();
    let mean_step_km = steps.iter().sum::<f64>() / steps.len() as f64;

    let scenario = if concentration >= params.concentration_threshold {
        if crossings >= 1 {
            Scenario::Sanctuary
        } else {
            Scenario::Indeterminate
        }
    } else if mean_step_km >= params.step_threshold_km {
        Scenario::Mobility
    } else {
        Scenario::Indeterminate
    };

    Ok(ScenarioReport {
        scenario,
        n_events: n,
        medoid_index,
        medoid,
        concentration,
        crossings,
        mean_step_km,
        params,
    })
}
