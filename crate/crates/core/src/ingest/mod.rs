//! Reading ACLED-style event CSVs.
//!
//! Parsing never aborts on a bad row: each data row becomes either an
//! [`EventRecord`] or a [`RowError`], so `records + errors == data rows`
//! holds for every input. Only a header that lacks a mapped column fails the
//! whole parse.

mod catalog;
mod mapping;

use std::collections::BTreeSet;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::GeoPoint;

pub use catalog::{canonicalize_actor, normalize_whitespace, ActorCatalog, ActorEntry, Category};
pub use mapping::{ColumnMapping, Columns, DEFAULT_DATE_FORMAT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("mapped column {column:?} (field {field}) not found in CSV header")]
    MalformedHeader { field: &'static str, column: String },

    #[error("CSV has no header row")]
    MissingHeader,

    #[error("logical field {0} is not mapped")]
    UnmappedField(&'static str),

    #[error("actor name is empty")]
    EmptyName,

    #[error("alias {alias:?} claimed by both {first:?} and {second:?}")]
    AliasCollision {
        alias: String,
        first: String,
        second: String,
    },

    #[error("unknown actor category {0:?}")]
    UnknownCategory(String),

    #[error("schema_version {found:?} is not supported (expected {expected:?})")]
    SchemaVersion { found: String, expected: String },

    #[error("invalid JSON document: {0}")]
    Json(String),

    #[error("CSV error: {0}")]
    Csv(String),
}

/// ACLED event referents. Labels outside the six recognised violent event
/// types map to `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    BattleNoChange,
    BattleNonStateOvertakes,
    BattleGovernmentRegains,
    RiotsProtests,
    ViolenceAgainstCivilians,
    RemoteViolence,
    Other,
}

impl EventType {
    pub const ALL: [EventType; 7] = [
        EventType::BattleNoChange,
        EventType::BattleNonStateOvertakes,
        EventType::BattleGovernmentRegains,
        EventType::RiotsProtests,
        EventType::ViolenceAgainstCivilians,
        EventType::RemoteViolence,
        EventType::Other,
    ];

    /// The six violent referents, i.e. every variant except `Other`.
    pub const VIOLENT: [EventType; 6] = [
        EventType::BattleNoChange,
        EventType::BattleNonStateOvertakes,
        EventType::BattleGovernmentRegains,
        EventType::RiotsProtests,
        EventType::ViolenceAgainstCivilians,
        EventType::RemoteViolence,
    ];

    /// Parses an ACLED label. Matching ignores case, punctuation and
    /// whitespace, so `"Battle-No change of territory"` and
    /// `"Battle – no change of territory"` are the same label.
    pub fn from_label(label: &str) -> Self {
        let key: String = label
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        match key.as_str() {
            "battlenochangeofterritory" => EventType::BattleNoChange,
            "battlenonstateactorovertakesterritory" => EventType::BattleNonStateOvertakes,
            "battlegovernmentregainsterritory" => EventType::BattleGovernmentRegains,
            "riotsprotests" | "riotsandprotests" | "riots" | "protests" => {
                EventType::RiotsProtests
            }
            "violenceagainstcivilians" => EventType::ViolenceAgainstCivilians,
            "remoteviolence" => EventType::RemoteViolence,
            _ => EventType::Other,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EventType::BattleNoChange => "Battle-No change of territory",
            EventType::BattleNonStateOvertakes => "Battle-Non-state actor overtakes territory",
            EventType::BattleGovernmentRegains => "Battle-Government regains territory",
            EventType::RiotsProtests => "Riots/Protests",
            EventType::ViolenceAgainstCivilians => "Violence against civilians",
            EventType::RemoteViolence => "Remote violence",
            EventType::Other => "Other",
        }
    }

    pub fn key(&self) -> &'static str {
        match self {
            EventType::BattleNoChange => "battle_no_change",
            EventType::BattleNonStateOvertakes => "battle_non_state_overtakes",
            EventType::BattleGovernmentRegains => "battle_government_regains",
            EventType::RiotsProtests => "riots_protests",
            EventType::ViolenceAgainstCivilians => "violence_against_civilians",
            EventType::RemoteViolence => "remote_violence",
            EventType::Other => "other",
        }
    }

    /// Inverse of [`EventType::key`].
    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.key() == key)
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One violent incident with canonicalized actor names.
///
/// Slots follow ACLED: `actor_a` attacks, `actor_b` assists the attacker,
/// `actor_c` is the target and `actor_d` assists (or is a second) target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub id: String,
    pub date: NaiveDate,
    pub event_type: EventType,
    pub country: String,
    /// `None` when the row's coordinates were missing or out of range.
    pub location: Option<GeoPoint>,
    pub actor_a: String,
    pub actor_b: Option<String>,
    pub actor_c: Option<String>,
    pub actor_d: Option<String>,
    pub fatalities: u32,
}

impl EventRecord {
    pub fn actors(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.actor_a.as_str())
            .chain(self.actor_b.as_deref())
            .chain(self.actor_c.as_deref())
            .chain(self.actor_d.as_deref())
    }

    pub fn is_located(&self) -> bool {
        self.location.is_some()
    }
}

/// A data row that could not be turned into a record. `row` is 1-based and
/// counts data rows only (the header is row 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParseOutcome {
    pub records: Vec<EventRecord>,
    pub errors: Vec<RowError>,
}

impl ParseOutcome {
    pub fn rows(&self) -> usize {
        self.records.len() + self.errors.len()
    }
}

struct HeaderIndex {
    id: usize,
    date: usize,
    event_type: usize,
    country: usize,
    latitude: usize,
    longitude: usize,
    actor_a: usize,
    actor_b: Option<usize>,
    actor_c: usize,
    actor_d: Option<usize>,
    fatalities: usize,
}

impl HeaderIndex {
    fn resolve(headers: &csv::StringRecord, mapping: &ColumnMapping) -> Result<Self, IngestError> {
        let find = |field: &'static str, column: &str| {
            headers
                .iter()
                .position(|h| h.trim() == column.trim())
                .ok_or_else(|| IngestError::MalformedHeader {
                    field,
                    column: column.to_string(),
                })
        };
        let optional = |field: &'static str, column: &Option<String>| match column {
            Some(c) => find(field, c).map(Some),
            None => Ok(None),
        };
        let c = &mapping.columns;
        Ok(Self {
            id: find("id", &c.id)?,
            date: find("date", &c.date)?,
            event_type: find("event_type", &c.event_type)?,
            country: find("country", &c.country)?,
            latitude: find("latitude", &c.latitude)?,
            longitude: find("longitude", &c.longitude)?,
            actor_a: find("actor_a", &c.actor_a)?,
            actor_b: optional("actor_b", &c.actor_b)?,
            actor_c: find("actor_c", &c.actor_c)?,
            actor_d: optional("actor_d", &c.actor_d)?,
            fatalities: find("fatalities", &c.fatalities)?,
        })
    }
}

/// Parses CSV text into event records. Rows that fail produce a
/// [`RowError`] and parsing continues.
pub fn parse_events(
    csv_text: &str,
    mapping: &ColumnMapping,
    catalog: &ActorCatalog,
) -> Result<ParseOutcome, IngestError> {
    mapping.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(csv_text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| IngestError::Csv(e.to_string()))?
        .clone();
    if headers.is_empty() || headers.iter().all(|h| h.trim().is_empty()) {
        return Err(IngestError::MissingHeader);
    }
    let index = HeaderIndex::resolve(&headers, mapping)?;

    let mut outcome = ParseOutcome::default();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let parsed = row
            .map_err(|e| format!("malformed CSV row: {e}"))
            .and_then(|r| parse_row(&r, &index, mapping, catalog));
        match parsed {
            Ok(rec) => outcome.records.push(rec),
            Err(reason) => outcome.errors.push(RowError {
                row: row_no,
                reason,
            }),
        }
    }
    Ok(outcome)
}

fn parse_row(
    row: &csv::StringRecord,
    idx: &HeaderIndex,
    mapping: &ColumnMapping,
    catalog: &ActorCatalog,
) -> Result<EventRecord, String> {
    let cell = |i: usize| row.get(i).map(str::trim).unwrap_or("");
    let actor = |i: Option<usize>| -> Option<String> {
        i.map(cell)
            .filter(|s| !s.is_empty())
            .and_then(|s| catalog.canonicalize(s).ok())
    };

    let id = cell(idx.id);
    if id.is_empty() {
        return Err("missing event id".into());
    }
    let raw_date = cell(idx.date);
    if raw_date.is_empty() {
        return Err("missing date".into());
    }
    let date = NaiveDate::parse_from_str(raw_date, &mapping.date_format)
        .map_err(|e| format!("unparseable date {raw_date:?}: {e}"))?;
    let actor_a = actor(Some(idx.actor_a)).ok_or_else(|| "missing actor_a".to_string())?;
    let raw_fatalities = cell(idx.fatalities);
    let fatalities = if raw_fatalities.is_empty() {
        0
    } else {
        raw_fatalities
            .parse::<u32>()
            .map_err(|_| format!("invalid fatalities {raw_fatalities:?}"))?
    };
    let location = match (cell(idx.latitude).parse(), cell(idx.longitude).parse()) {
        (Ok(lat), Ok(lon)) => GeoPoint::new(lat, lon).ok(),
        _ => None,
    };

    Ok(EventRecord {
        id: id.to_string(),
        date,
        event_type: EventType::from_label(cell(idx.event_type)),
        country: normalize_whitespace(cell(idx.country)),
        location,
        actor_a,
        actor_b: actor(idx.actor_b),
        actor_c: actor(Some(idx.actor_c)),
        actor_d: actor(idx.actor_d),
        fatalities,
    })
}

/// Conjunctive event filter. `None` fields do not constrain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventFilter {
    pub types: BTreeSet<EventType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actors: Option<BTreeSet<String>>,
    /// Inclusive date bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_range: Option<(NaiveDate, NaiveDate)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub countries: Option<BTreeSet<String>>,
}

impl Default for EventFilter {
    fn default() -> Self {
        Self {
            types: EventType::ALL.into_iter().collect(),
            actors: None,
            date_range: None,
            countries: None,
        }
    }
}

impl EventFilter {
    pub fn violent_only() -> Self {
        Self {
            types: EventType::VIOLENT.into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn matches(&self, event: &EventRecord) -> bool {
        if !self.types.contains(&event.event_type) {
            return false;
        }
        if let Some(actors) = &self.actors {
            if !event.actors().any(|a| actors.contains(a)) {
                return false;
            }
        }
        if let Some((from, to)) = self.date_range {
            if event.date < from || event.date > to {
                return false;
            }
        }
        if let Some(countries) = &self.countries {
            if !countries.contains(&event.country) {
                return false;
            }
        }
        true
    }
}

/// Events passing `filter`, in input order.
pub fn filter_events(events: &[EventRecord], filter: &EventFilter) -> Vec<EventRecord> {
    events.iter().filter(|e| filter.matches(e)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "EVENT_ID_CNTY,EVENT_DATE,EVENT_TYPE,ACTOR1,ALLY_ACTOR_1,ACTOR2,ALLY_ACTOR_2,COUNTRY,LATITUDE,LONGITUDE,FATALITIES\n";

    fn parse(body: &str) -> ParseOutcome {
        parse_events(
            &format!("{HEADER}{body}"),
            &ColumnMapping::default(),
            &ActorCatalog::default(),
        )
        .unwrap()
    }

    #[test]
    fn header_only_is_empty() {
        let out = parse("");
        assert!(out.records.is_empty());
        assert!(out.errors.is_empty());
    }

    #[test]
    fn five_rows_one_missing_attacker() {
        let body = "\
1MLI,12 January 2014,Battle-No change of territory,Military Forces of France,Military Forces of Mali,Ansar Dine,MUJAO,Mali,16.27,-0.04,11
2MLI,13 January 2014,Violence against civilians,MUJAO,,Civilians (Mali),,Mali,16.5,-0.1,2
3MLI,14 January 2014,Remote violence,,,Military Forces of Mali,,Mali,16.5,-0.1,0
4NIG,15 January 2014,Riots/Protests,Protesters (Niger),,,,Niger,13.5,2.1,0
5ALG,16 January 2014,Battle-Government regains territory,Military Forces of Algeria,,AQIM,,Algeria,36.7,3.0,4
";
        let out = parse(body);
        assert_eq!(out.records.len(), 4);
        assert_eq!(out.errors.len(), 1);
        assert_eq!(out.errors[0].row, 3);
        assert!(out.errors[0].reason.contains("actor_a"));
        assert_eq!(out.rows(), 5);
        let first = &out.records[0];
        assert_eq!(first.actor_b.as_deref(), Some("Military Forces of Mali"));
        assert_eq!(first.actor_d.as_deref(), Some("MUJAO"));
        assert_eq!(first.fatalities, 11);
        assert_eq!(first.date, NaiveDate::from_ymd_opt(2014, 1, 12).unwrap());
        assert_eq!(out.records[2].actor_c, None);
    }

    #[test]
    fn bad_dates_and_fatalities_are_row_errors() {
        let body = "\
1,2014-01-12,Remote violence,A,,B,,Mali,1,1,0
2,12 January 2014,Remote violence,A,,B,,Mali,1,1,lots
3,12 January 2014,Remote violence,A,,B,,Mali,1,1,
";
        let out = parse(body);
        assert_eq!(out.errors.len(), 2);
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].fatalities, 0);
    }

    #[test]
    fn bad_coordinates_keep_record_without_location() {
        let out = parse("1,12 January 2014,Remote violence,A,,B,,Mali,,200,0\n");
        assert_eq!(out.records.len(), 1);
        assert!(out.records[0].location.is_none());
    }

    #[test]
    fn ragged_rows_are_row_errors() {
        let out = parse("1,12 January 2014,Remote violence\n");
        assert_eq!(out.errors.len(), 1);
        assert_eq!(out.rows(), 1);
    }

    #[test]
    fn missing_mapped_column_fails_whole_parse() {
        let text = "EVENT_ID_CNTY,EVENT_DATE\n1,12 January 2014\n";
        let err = parse_events(text, &ColumnMapping::default(), &ActorCatalog::default());
        assert!(matches!(err, Err(IngestError::MalformedHeader { .. })));
    }

    #[test]
    fn quoted_fields_with_commas() {
        let body = "1,12 January 2014,Remote violence,\"Militia (Tripoli, Libya)\",,B,,Libya,32.9,13.2,1\n";
        let out = parse(body);
        assert_eq!(out.records[0].actor_a, "Militia (Tripoli, Libya)");
    }

    #[test]
    fn event_type_labels() {
        assert_eq!(
            EventType::from_label("Battle – no change of territory"),
            EventType::BattleNoChange
        );
        assert_eq!(
            EventType::from_label("Battle-Non-state actor overtakes territory"),
            EventType::BattleNonStateOvertakes
        );
        assert_eq!(
            EventType::from_label("Riots and protests"),
            EventType::RiotsProtests
        );
        assert_eq!(
            EventType::from_label("Strategic development"),
            EventType::Other
        );
        assert_eq!(EventType::from_label(""), EventType::Other);
        for t in EventType::ALL {
            assert_eq!(EventType::from_key(t.key()), Some(t));
            if t != EventType::Other {
                assert_eq!(EventType::from_label(t.label()), t);
            }
        }
    }

    fn event(id: &str, a: &str, c: Option<&str>, day: u32) -> EventRecord {
        EventRecord {
            id: id.into(),
            date: NaiveDate::from_ymd_opt(2013, 1, day).unwrap(),
            event_type: EventType::BattleNoChange,
            country: "Mali".into(),
            location: None,
            actor_a: a.into(),
            actor_b: None,
            actor_c: c.map(Into::into),
            actor_d: None,
            fatalities: 0,
        }
    }

    #[test]
    fn filter_by_actor_preserves_order() {
        let events = vec![
            event("1", "AQIM", Some("Civilians (Mali)"), 1),
            event("2", "Ansar Dine", Some("Military Forces of Mali"), 2),
            event("3", "MUJAO", Some("Civilians (Mali)"), 3),
            event("4", "Military Forces of France", Some("Ansar Dine"), 4),
            event("5", "MNLA", Some("Military Forces of Mali"), 5),
            event("6", "Boko Haram", None, 6),
        ];
        let filter = EventFilter {
            actors: Some(["Ansar Dine".to_string()].into()),
            ..EventFilter::default()
        };
        let ids: Vec<_> = filter_events(&events, &filter)
            .into_iter()
            .map(|e| e.id)
            .collect();
        assert_eq!(ids, ["2", "4"]);
        assert_eq!(filter_events(&events, &EventFilter::default()), events);
    }

    #[test]
    fn filter_by_dates_types_and_countries() {
        let mut events = vec![
            event("1", "A", Some("B"), 1),
            event("2", "A", Some("B"), 10),
            event("3", "A", Some("B"), 20),
        ];
        events[1].event_type = EventType::Other;
        events[2].country = "Niger".into();
        let filter = EventFilter {
            date_range: Some((
                NaiveDate::from_ymd_opt(2013, 1, 1).unwrap(),
                NaiveDate::from_ymd_opt(2013, 1, 20).unwrap(),
            )),
            ..EventFilter::violent_only()
        };
        assert_eq!(filter_events(&events, &filter).len(), 2);
        let filter = EventFilter {
            countries: Some(["Mali".to_string()].into()),
            ..EventFilter::default()
        };
        assert_eq!(filter_events(&events, &filter).len(), 2);
    }
}
