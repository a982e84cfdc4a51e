//! Aggregate incidents into a signed directed actor graph and compare the
//! two attack-tie rules.
//!
//! cargo run --example build_graph

use cnl::graph::{symmetrize, GraphDocument};
use cnl::ingest::parse_events;
use cnl::{build_graph, ActorCatalog, BuildOptions, ColumnMapping, Sign, TieMode, WeightScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = ActorCatalog::from_json(include_str!("../fixtures/catalog.json"))?;
    let events = parse_events(include_str!("../fixtures/events.csv"), &ColumnMapping::default(), &catalog)?.records;

    for mode in [TieMode::Full, TieMode::PaperLiteral] {
        let g = build_graph(&events, BuildOptions { mode, scheme: WeightScheme::IncidentCount }, &catalog);
        println!(
            "{mode:?}: {} actors, {} alliance ties, {} attack ties",
            g.len(),
            g.edge_count(Sign::Positive),
            g.edge_count(Sign::Negative)
        );
    }

    let options = BuildOptions { mode: TieMode::Full, scheme: WeightScheme::FatalityWeighted };
    let g = build_graph(&events, options, &catalog);
    println!(
        "fatalities attributed to AQIM attacks on the Malian army: {}",
        g.weight("AQIM", "Military Forces of Mali", Sign::Negative)
    );

    let w = symmetrize(&g);
    let i = g.index_of("AQIM").unwrap();
    let j = g.index_of("MUJAO").unwrap();
    println!("net symmetric weight AQIM-MUJAO: {}", w[(i, j)]);

    let doc: GraphDocument = g.to_document();
    println!("graph document: {} nodes, first node {:?}", doc.nodes.len(), doc.nodes[0].id);
    Ok(())
}
