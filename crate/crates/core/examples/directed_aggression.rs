//! Directed aggression through the node-split expansion: each actor gets an
//! outgoing and an incoming position, and attack ties are measured from
//! the attacker's outgoing role to the target's incoming role.
//!
//! cargo run --example directed_aggression

use cnl::graph::{directed_expand, Node};
use cnl::spectral::{directed_aggression_scores, embed_directed};
use cnl::{Category, SignedDiGraph, SquareMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let names = ["Raider", "Village-1", "Village-2", "Village-3", "Village-4", "Patrol"];
    let n = names.len();
    let nodes = names
        .iter()
        .map(|id| Node { id: id.to_string(), category: Category::Militias, country: None })
        .collect();
    let mut pos = SquareMatrix::zeros(n);
    let mut neg = SquareMatrix::zeros(n);
    for v in 1..=4 {
        neg[(0, v)] = 1.0;
    }
    neg[(5, 0)] = 1.0;
    pos[(5, 1)] = 1.0;
    let g = SignedDiGraph::from_layers(nodes, pos, neg)?;

    let split = directed_expand(&g, 1.0)?;
    println!("expanded to {} role nodes", split.matrix.dim());

    let emb = embed_directed(&g, 2, 1.0, true)?;
    for s in directed_aggression_scores(&emb, &g, true)? {
        println!("{:<10} out {:.3} in {:.3} {}", s.actor, s.outaggression, s.inaggression, s.class);
    }
    Ok(())
}
