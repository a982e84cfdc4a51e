use std::collections::BTreeMap;

use chrono::Datelike;
use serde::{Deserialize, Serialize};

use super::{distance_to_border, haversine_km, BorderSet, GeoPoint};
use crate::ingest::EventRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub event: EventRecord,
    pub point: GeoPoint,
}

impl ChainLink {
    pub fn year(&self) -> i32 {
        self.event.date.year()
    }
}

/// Located events ordered by date, ties kept in input order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EventChain {
    pub links: Vec<ChainLink>,
    /// Events dropped because they had no coordinates.
    pub unlocated: usize,
}

impl EventChain {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn points(&self) -> Vec<GeoPoint> {
        self.links.iter().map(|l| l.point).collect()
    }

    /// Haversine lengths of consecutive steps.
    pub fn step_lengths(&self) -> Vec<f64> {
        self.links
            .windows(2)
            .map(|w| haversine_km(w[0].point, w[1].point))
            .collect()
    }

    /// Number of steps whose endpoints carry different country labels.
    pub fn border_crossings(&self) -> usize {
        self.links
            .windows(2)
            .filter(|w| w[0].event.country != w[1].event.country)
            .count()
    }
}

pub fn chain_events(events: &[EventRecord]) -> EventChain {
    let mut links: Vec<ChainLink> = events
        .iter()
        .filter_map(|e| {
            e.location.map(|point| ChainLink {
                event: e.clone(),
                point,
            })
        })
        .collect();
    let unlocated = events.len() - links.len();
    // Stable sort keeps input order among same-day events.
    links.sort_by_key(|l| l.event.date);
    EventChain { links, unlocated }
}

/// Which consecutive pairs feed a year's mean inter-event time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMode {
    /// Only pairs with both events inside the year.
    #[default]
    WithinYear,
    /// Every pair ending in the year, including the step from the previous
    /// year's last event.
    CrossYear,
}

/// One row of the yearly chain statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearMetrics {
    pub year: i32,
    pub n_events: usize,
    /// Percentage of steps that change country, rounded to an integer.
    pub cross_border_pct: Option<f64>,
    pub victims: u64,
    pub avg_step_km: Option<f64>,
    /// Absent when no border set was supplied.
    pub avg_border_km: Option<f64>,
    /// Mean days between consecutive events, rounded to one decimal.
    pub avg_gap_days: Option<f64>,
}

impl YearMetrics {
    fn empty(year: i32) -> Self {
        Self {
            year,
            n_events: 0,
            cross_border_pct: None,
            victims: 0,
            avg_step_km: None,
            avg_border_km: None,
            avg_gap_days: None,
        }
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Per-year statistics of a pooled chain.
///
/// Steps join consecutive events of the same year. `years`, when given,
/// adds empty rows for years in the inclusive range that have no events.
pub fn year_metrics(
    chain: &EventChain,
    borders: Option<&BorderSet>,
    gap_mode: GapMode,
    years: Option<(i32, i32)>,
) -> Vec<YearMetrics> {
    let mut by_year: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, link) in chain.links.iter().enumerate() {
        by_year.entry(link.year()).or_default().push(i);
    }
    let mut rows: BTreeMap<i32, YearMetrics> = BTreeMap::new();
    if let Some((from, to)) = years {
        for y in from..=to {
            rows.insert(y, YearMetrics::empty(y));
        }
    }

    for (&year, idx) in &by_year {
        let links: Vec<&ChainLink> = idx.iter().map(|&i| &chain.links[i]).collect();
        let steps: Vec<(&ChainLink, &ChainLink)> =
            links.windows(2).map(|w| (w[0], w[1])).collect();

        let step_km: Vec<f64> = steps.iter().map(|(a, b)| haversine_km(a.point, b.point)).collect();
        let crossings = steps
            .iter()
            .filter(|(a, b)| a.event.country != b.event.country)
            .count();
        let gap_pairs: Vec<(usize, usize)> = match gap_mode {
            GapMode::WithinYear => idx.windows(2).map(|w| (w[0], w[1])).collect(),
            GapMode::CrossYear => idx.iter().filter(|&&i| i > 0).map(|&i| (i - 1, i)).collect(),
        };
        let gaps: Vec<f64> = gap_pairs
            .iter()
            .map(|&(a, b)| (chain.links[b].event.date - chain.links[a].event.date).num_days() as f64)
            .collect();
        let border_km: Option<Vec<f64>> = borders.map(|b| {
            links
                .iter()
                .map(|l| distance_to_border(l.point, b).expect("border sets are non-empty"))
                .collect()
        });

        rows.insert(
            year,
            YearMetrics {
                year,
                n_events: links.len(),
                cross_border_pct: (!steps.is_empty())
                    .then(|| (100.0 * crossings as f64 / steps.len() as f64).round()),
                victims: links.iter().map(|l| u64::from(l.event.fatalities)).sum(),
                avg_step_km: mean(&step_km),
                avg_border_km: border_km.as_deref().and_then(mean),
                avg_gap_days: mean(&gaps).map(|g| (g * 10.0).round() / 10.0),
            },
        );
    }
    rows.into_values().collect()
}

pub const METRICS_HEADER: [&str; 7] = [
    "Year",
    "Number of events",
    "Cross-border movements (%)",
    "Number of victims",
    "Average distance between events (km)",
    "Average distance to borders (km)",
    "Average time between events (days)",
];

/// Yearly metrics as CSV. Absent values are empty cells; the border column
/// is left out entirely when `with_borders` is false. Distances and gaps are
/// written with one decimal.
pub fn metrics_csv(rows: &[YearMetrics], with_borders: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = METRICS_HEADER
        .iter()
        .copied()
        .filter(|h| with_borders || !h.contains("borders"))
        .collect();
    w.write_record(&header).expect("in-memory write");
    let opt = |v: Option<f64>, digits: usize| v.map(|x| format!("{x:.digits$}")).unwrap_or_default();
    for r in rows {
        let mut rec = vec![
            r.year.to_string(),
            r.n_events.to_string(),
            opt(r.cross_border_pct, 0),
            r.victims.to_string(),
            opt(r.avg_step_km, 1),
        ];
        if with_borders {
            rec.push(opt(r.avg_border_km, 1));
        }
        rec.push(opt(r.avg_gap_days, 1));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}
