use chrono::Datelike;
use serde_json::{json, Value};

use super::{haversine_km, ChainLink, EventChain, GeoError};

fn position(link: &ChainLink) -> Value {
    json!([link.point.lon(), link.point.lat()])
}

/// FeatureCollection with one Point per event and one dashed LineString per
/// consecutive pair. The lines are drawn for reading order only.
pub fn export_chain_geojson(chain: &EventChain) -> Result<String, GeoError> {
    if chain.is_empty() {
        return Err(GeoError::EmptyChain);
    }
    let mut features: Vec<Value> = chain
        .links
        .iter()
        .map(|l| {
            let e = &l.event;
            json!({
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": position(l)},
                "properties": {
                    "id": e.id,
                    "date": e.date.format("%Y-%m-%d").to_string(),
                    "year": e.date.year(),
                    "country": e.country,
                    "actors": e.actors().collect::<Vec<_>>(),
                    "fatalities": e.fatalities,
                },
            })
        })
        .collect();
    features.extend(chain.links.windows(2).map(|w| {
        json!({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": [position(&w[0]), position(&w[1])]},
            "properties": {
                "year": w[1].event.date.year(),
                "step_km": haversine_km(w[0].point, w[1].point),
                "crosses_border": w[0].event.country != w[1].event.country,
                "style": "dashed",
            },
        })
    }));
    let doc = json!({"type": "FeatureCollection", "features": features});
    Ok(serde_json::to_string_pretty(&doc).expect("json values serialize"))
}
