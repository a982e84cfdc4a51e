//! Chronological event chains: yearly step and border statistics, the
//! sanctuary/mobility verdict and a GeoJSON export.
//!
//! cargo run --example event_chains

use chrono::Datelike;
use cnl::geo::{
    chain_events, classify_scenario, export_chain_geojson, metrics_csv, year_metrics, BorderSet,
    GapMode, ScenarioParams,
};
use cnl::ingest::{filter_events, parse_events, EventFilter};
use cnl::{ActorCatalog, ColumnMapping};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = ActorCatalog::from_json(include_str!("../fixtures/catalog.json"))?;
    let parsed = parse_events(include_str!("../fixtures/events.csv"), &ColumnMapping::default(), &catalog)?;
    let events = filter_events(&parsed.records, &EventFilter::violent_only());
    let borders = BorderSet::from_geojson(include_str!("../fixtures/borders.geojson"))?;

    let chain = chain_events(&events);
    println!("{} located events, {} without coordinates", chain.len(), chain.unlocated);
    let first = chain.links[0].event.date.year();
    let last = chain.links[chain.len() - 1].event.date.year();
    let rows = year_metrics(&chain, Some(&borders), GapMode::WithinYear, Some((first, last)));
    print!("{}", metrics_csv(&rows, true));

    let cross = year_metrics(&chain, Some(&borders), GapMode::CrossYear, None);
    println!("2007 mean gap counting the step from 2006: {:?} days", cross.iter().find(|r| r.year == 2007).and_then(|r| r.avg_gap_days));

    for group in ["AQIM", "Boko Haram"] {
        let own: Vec<_> = events.iter().filter(|e| e.actors().any(|a| a == group)).cloned().collect();
        let r = classify_scenario(&chain_events(&own), ScenarioParams::default())?;
        println!(
            "{group}: {} (concentration {:.2}, {} crossings, mean step {:.0} km)",
            r.scenario, r.concentration, r.crossings, r.mean_step_km
        );
    }

    let geojson = export_chain_geojson(&chain)?;
    println!("GeoJSON: {} bytes", geojson.len());
    Ok(())
}
