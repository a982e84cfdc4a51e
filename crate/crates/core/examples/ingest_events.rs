//! Parse an ACLED-style CSV, canonicalize actor names and filter events.
//!
//! cargo run --example ingest_events

use cnl::ingest::{filter_events, parse_events, EventFilter};
use cnl::{ActorCatalog, ColumnMapping};

const EVENTS: &str = include_str!("../fixtures/events.csv");
const CATALOG: &str = include_str!("../fixtures/catalog.json");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = ActorCatalog::from_json(CATALOG)?;
    let outcome = parse_events(EVENTS, &ColumnMapping::default(), &catalog)?;
    println!("{} rows: {} parsed, {} rejected", outcome.rows(), outcome.records.len(), outcome.errors.len());
    for e in &outcome.errors {
        println!("  row {}: {}", e.row, e.reason);
    }

    // "GSPC" rows were folded into the canonical AQIM entry.
    let aqim = outcome.records.iter().filter(|e| e.actors().any(|a| a == "AQIM")).count();
    println!("events involving AQIM: {aqim}");

    let violent = filter_events(&outcome.records, &EventFilter::violent_only());
    let mut mali = EventFilter::violent_only();
    mali.countries = Some(["Mali".to_string()].into());
    println!(
        "violent: {}, violent in Mali: {}, unlocated: {}",
        violent.len(),
        filter_events(&outcome.records, &mali).len(),
        violent.iter().filter(|e| !e.is_located()).count()
    );
    Ok(())
}
