use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::SCHEMA_VERSION;

/// ACLED-style day-first textual dates, e.g. `12 January 2014`.
pub const DEFAULT_DATE_FORMAT: &str = "%d %B %Y";

/// Logical event fields and the CSV headers they are read from.
///
/// The nine mandatory fields must be mapped; the two ally columns are
/// optional because some exports omit them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Columns {
    pub id: String,
    pub date: String,
    pub event_type: String,
    pub country: String,
    pub latitude: String,
    pub longitude: String,
    pub actor_a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actor_b: Option<String>,
    pub actor_c: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actor_d: Option<String>,
    pub fatalities: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub schema_version: String,
    pub columns: Columns,
    #[serde(default = "default_date_format")]
    pub date_format: String,
}

fn default_date_format() -> String {
    DEFAULT_DATE_FORMAT.to_string()
}

impl Default for ColumnMapping {
    /// ACLED version 5 column names.
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            columns: Columns {
                id: "EVENT_ID_CNTY".into(),
                date: "EVENT_DATE".into(),
                event_type: "EVENT_TYPE".into(),
                country: "COUNTRY".into(),
                latitude: "LATITUDE".into(),
                longitude: "LONGITUDE".into(),
                actor_a: "ACTOR1".into(),
                actor_b: Some("ALLY_ACTOR_1".into()),
                actor_c: "ACTOR2".into(),
                actor_d: Some("ALLY_ACTOR_2".into()),
                fatalities: "FATALITIES".into(),
            },
            date_format: default_date_format(),
        }
    }
}

impl ColumnMapping {
    pub fn from_json(text: &str) -> Result<Self, IngestError> {
        let mapping: ColumnMapping =
            serde_json::from_str(text).map_err(|e| IngestError::Json(e.to_string()))?;
        mapping.validate()?;
        Ok(mapping)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mapping serializes")
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(IngestError::SchemaVersion {
                found: self.schema_version.clone(),
                expected: SCHEMA_VERSION.to_string(),
            });
        }
        for (field, header) in self.mandatory() {
            if header.trim().is_empty() {
                return Err(IngestError::UnmappedField(field));
            }
        }
        if self.date_format.trim().is_empty() {
            return Err(IngestError::UnmappedField("date_format"));
        }
        Ok(())
    }

    pub(crate) fn mandatory(&self) -> [(&'static str, &str); 9] {
        let c = &self.columns;
        [
            ("id", &c.id),
            ("date", &c.date),
            ("event_type", &c.event_type),
            ("country", &c.country),
            ("latitude", &c.latitude),
            ("longitude", &c.longitude),
            ("actor_a", &c.actor_a),
            ("actor_c", &c.actor_c),
            ("fatalities", &c.fatalities),
        ]
    }
}
