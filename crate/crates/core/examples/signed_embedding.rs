//! Embed two hostile coalitions with the signed Laplacian, score aggression
//! and render the layout as SVG.
//!
//! cargo run --example signed_embedding [output.svg]

use std::collections::BTreeMap;

use cnl::graph::{symmetrize, Node};
use cnl::spectral::{aggression_scores, embed, render_embedding_svg, signed_laplacian};
use cnl::{Category, SignedDiGraph, SquareMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Coalition 0..4 is allied internally; 0 and 1 raid every member of
    // coalition 5..9, which never strikes back.
    let n = 10;
    let nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            id: format!("{}{}", if i < 5 { "North-" } else { "South-" }, i % 5),
            category: if i < 5 { Category::Rebels } else { Category::Government },
            country: None,
        })
        .collect();
    let mut pos = SquareMatrix::zeros(n);
    let mut neg = SquareMatrix::zeros(n);
    for block in [0..5, 5..10] {
        for i in block.clone() {
            for j in block.clone() {
                if i < j {
                    pos[(i, j)] = 1.0;
                }
            }
        }
    }
    for attacker in [0, 1] {
        for target in 5..10 {
            neg[(attacker, target)] = 2.0;
        }
    }
    let g = SignedDiGraph::from_layers(nodes, pos, neg)?;

    let l = signed_laplacian(&symmetrize(&g), &g.ids(), true)?;
    let emb = embed(&l, 2)?;
    println!("eigenvalues {:?}", emb.eigenvalues);
    for (id, row) in emb.node_order.iter().zip(&emb.coords) {
        println!("{id:<9} {:+.4} {:+.4}", row[0], row[1]);
    }

    let scores = aggression_scores(&emb, &g, true)?;
    for s in &scores {
        println!("{:<9} out {:.3} in {:.3} net {:+.3} {}", s.actor, s.outaggression, s.inaggression, s.net, s.class);
    }

    let classes: BTreeMap<_, _> = scores.iter().map(|s| (s.actor.clone(), s.class)).collect();
    let svg = render_embedding_svg(&emb, &g, &classes);
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, svg).map(|_| println!("wrote {path}"))?,
        None => println!("svg: {} bytes (pass a path to save it)", svg.len()),
    }
    Ok(())
}
