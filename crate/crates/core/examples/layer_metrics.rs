//! Centrality, cohesion, homophily and balance statistics on each sign
//! layer.
//!
//! cargo run --example layer_metrics

use cnl::graph::symmetrize;
use cnl::ingest::parse_events;
use cnl::metrics::{
    betweenness_centrality, degree_centrality, density, ei_index, eigenvector_centrality,
    signed_transitivity, triad_census, EiOptions, LayerView,
};
use cnl::{build_graph, ActorCatalog, BuildOptions, ColumnMapping};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = ActorCatalog::from_json(include_str!("../fixtures/catalog.json"))?;
    let events = parse_events(include_str!("../fixtures/events.csv"), &ColumnMapping::default(), &catalog)?.records;
    let g = build_graph(&events, BuildOptions::default(), &catalog);

    for (name, view) in [("attack", LayerView::negative()), ("alliance", LayerView::positive())] {
        println!("== {name} layer (density {:.3})", density(&g, view)?);
        let degree = degree_centrality(&g, view)?;
        let eigen = eigenvector_centrality(&g, view, 1e-12, 10_000)?;
        let between = betweenness_centrality(&g, view)?;
        println!("{:<28} {:>8} {:>8} {:>8}", "actor", "degree", "eigen", "between");
        for id in degree.top(5) {
            println!(
                "{id:<28} {:>8.3} {:>8.3} {:>8.3}",
                degree.get(id).unwrap(),
                eigen.get(id).unwrap(),
                between.get(id).unwrap()
            );
        }
        println!("{:<28} {:>8.3} {:>8.3} {:>8.3}", "Mean", degree.mean, eigen.mean, between.mean);

        let ei = ei_index(&g, view, EiOptions { permutations: 5_000, seed: 42, workers: 0 })?;
        println!("E/I index {:+.3} (p = {:.4})", ei.index, ei.p_value);
    }

    let t = signed_transitivity(&g);
    println!(
        "two-paths {}: closed by attack {:.3}, closed by alliance {:.3}, open {:.3}",
        t.two_paths, t.closed_negative_fraction, t.closed_positive_fraction, t.open_fraction
    );
    let census = triad_census(&symmetrize(&g));
    println!(
        "triangles +++ {} ++- {} +-- {} --- {}; balanced share {:.3}",
        census.ppp, census.ppn, census.pnn, census.nnn, census.balanced_fraction
    );
    Ok(())
}
