use serde_json::Value;

use super::{haversine_km, GeoError, GeoPoint};

/// Maximum distance between consecutive vertices after densification.
pub const MAX_VERTEX_SPACING_KM: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BorderLine {
    /// Usually the country pair, e.g. `"Algeria-Mali"`.
    pub label: String,
    pub points: Vec<GeoPoint>,
}

/// Border polylines, densified on construction so that consecutive vertices
/// are at most [`MAX_VERTEX_SPACING_KM`] apart along the great circle.
#[derive(Debug, Clone, PartialEq)]
pub struct BorderSet {
    lines: Vec<BorderLine>,
}

impl BorderSet {
    pub fn new(lines: Vec<BorderLine>) -> Result<Self, GeoError> {
        if lines.is_empty() {
            return Err(GeoError::EmptyBorderSet);
        }
        let lines = lines
            .into_iter()
            .map(|line| {
                if line.points.len() < 2 {
                    Err(GeoError::ShortBorderLine(line.label))
                } else {
                    Ok(BorderLine {
                        points: densify(&line.points),
                        label: line.label,
                    })
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { lines })
    }

    pub fn lines(&self) -> &[BorderLine] {
        &self.lines
    }

    pub fn vertices(&self) -> impl Iterator<Item = GeoPoint> + '_ {
        self.lines.iter().flat_map(|l| l.points.iter().copied())
    }

    /// Reads a FeatureCollection of LineString / MultiLineString features.
    /// The label is the feature's `countries` property (a string, or an
    /// array of names joined with `-`).
    pub fn from_geojson(text: &str) -> Result<Self, GeoError> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| GeoError::BorderDocument(e.to_string()))?;
        let features = doc
            .get("features")
            .and_then(Value::as_array)
            .ok_or_else(|| GeoError::BorderDocument("missing features array".into()))?;
        let mut lines = Vec::new();
        for (i, feature) in features.iter().enumerate() {
            let label = match feature.pointer("/properties/countries") {
                Some(Value::String(s)) => s.clone(),
                Some(Value::Array(names)) => names
                    .iter()
                    .filter_map(Value::as_str)
                    .collect::<Vec<_>>()
                    .join("-"),
                _ => format!("feature {i}"),
            };
            let geometry = feature
                .get("geometry")
                .ok_or_else(|| GeoError::BorderDocument(format!("feature {i} has no geometry")))?;
            let kind = geometry.get("type").and_then(Value::as_str).unwrap_or("");
            let coords = geometry
                .get("coordinates")
                .ok_or_else(|| GeoError::BorderDocument(format!("feature {i} has no coordinates")))?;
            match kind {
                "LineString" => lines.push(BorderLine {
                    label,
                    points: positions(coords)?,
                }),
                "MultiLineString" => {
                    let parts = coords.as_array().ok_or_else(|| {
                        GeoError::BorderDocument(format!("feature {i}: bad MultiLineString"))
                    })?;
                    for part in parts {
                        lines.push(BorderLine {
                            label: label.clone(),
                            points: positions(part)?,
                        });
                    }
                }
                other => {
                    return Err(GeoError::BorderDocument(format!(
                        "feature {i}: unsupported geometry {other:?}"
                    )))
                }
            }
        }
        Self::new(lines)
    }
}

fn positions(value: &Value) -> Result<Vec<GeoPoint>, GeoError> {
    let bad = || GeoError::BorderDocument("coordinates must be [lon, lat] pairs".into());
    value
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|pair| {
            let pair = pair.as_array().ok_or_else(bad)?;
            let lon = pair.first().and_then(Value::as_f64).ok_or_else(bad)?;
            let lat = pair.get(1).and_then(Value::as_f64).ok_or_else(bad)?;
            GeoPoint::new(lat, lon)
        })
        .collect()
}

fn densify(points: &[GeoPoint]) -> Vec<GeoPoint> {
    let mut out = vec![points[0]];
    for pair in points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let d = haversine_km(a, b);
        let pieces = (d / MAX_VERTEX_SPACING_KM).ceil().max(1.0) as usize;
        for step in 1..pieces {
            out.push(a.interpolate(b, step as f64 / pieces as f64));
        }
        out.push(b);
    }
    out
}

/// Distance from `p` to the nearest border vertex. With vertices at most
/// 1 km apart this overestimates the distance to the true polyline by less
/// than 0.5 km.
pub fn distance_to_border(p: GeoPoint, borders: &BorderSet) -> Result<f64, GeoError> {
    borders
        .vertices()
        .map(|v| haversine_km(p, v))
        .min_by(f64::total_cmp)
        .ok_or(GeoError::EmptyBorderSet)
}
