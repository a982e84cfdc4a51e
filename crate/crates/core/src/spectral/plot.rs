use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{AggressionClass, AggressionScore, Embedding};
use crate::graph::{Sign, SignedDiGraph};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 60.0;

/// `actor,x1,..,xk` rows in embedding order.
pub fn embedding_csv(emb: &Embedding) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["actor".to_string()];
    header.extend((1..=emb.k).map(|j| format!("x{j}")));
    w.write_record(&header).expect("in-memory write");
    for (id, row) in emb.node_order.iter().zip(&emb.coords) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// Scores sorted by net aggression descending, then actor ascending.
pub fn aggression_csv(scores: &[AggressionScore]) -> String {
    let mut rows: Vec<&AggressionScore> = scores.iter().collect();
    rows.sort_by(|a, b| b.net.total_cmp(&a.net).then_with(|| a.actor.cmp(&b.actor)));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["actor", "aggression", "outaggression", "inaggression", "class"])
        .expect("in-memory write");
    for s in rows {
        w.write_record([
            s.actor.as_str(),
            &s.net.to_string(),
            &s.outaggression.to_string(),
            &s.inaggression.to_string(),
            s.class.as_str(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fill(class: Option<AggressionClass>) -> &'static str {
    match class {
        Some(AggressionClass::Red) => "#d62728",
        Some(AggressionClass::Orange) => "#ff7f0e",
        Some(AggressionClass::Green) => "#2ca02c",
        None => "#7f7f7f",
    }
}

/// Scatter plot of the first two embedding coordinates (the second axis is
/// flat when `k == 1`). Attack ties are drawn in red, alliance ties in
/// green, and nodes are filled by aggression class.
pub fn render_embedding_svg(
    emb: &Embedding,
    g: &SignedDiGraph,
    classes: &BTreeMap<String, AggressionClass>,
) -> String {
    let xy: Vec<(f64, f64)> = emb
        .coords
        .iter()
        .map(|row| (row[0], row.get(1).copied().unwrap_or(0.0)))
        .collect();
    let extent = xy
        .iter()
        .fold(0.0_f64, |m, (x, y)| m.max(x.abs()).max(y.abs()))
        .max(1e-12);
    let half = (SIZE - 2.0 * MARGIN) / 2.0;
    let project = |(x, y): (f64, f64)| (SIZE / 2.0 + x / extent * half, SIZE / 2.0 - y / extent * half);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<g stroke="#cccccc" stroke-width="1"><line x1="{m}" y1="{c}" x2="{e}" y2="{c}"/><line x1="{c}" y1="{m}" x2="{c}" y2="{e}"/></g>"##,
        m = MARGIN,
        c = SIZE / 2.0,
        e = SIZE - MARGIN
    );

    for (sign, colour) in [(Sign::Positive, "#2ca02c"), (Sign::Negative, "#d62728")] {
        let layer = g.layer(sign);
        let _ = writeln!(svg, r#"<g stroke="{colour}" stroke-width="1" stroke-opacity="0.6">"#);
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                if layer[(i, j)] + layer[(j, i)] <= 0.0 {
                    continue;
                }
                let (Some(a), Some(b)) = (emb.index_of(&g.nodes()[i].id), emb.index_of(&g.nodes()[j].id))
                else {
                    continue;
                };
                let ((x1, y1), (x2, y2)) = (project(xy[a]), project(xy[b]));
                let _ = writeln!(
                    svg,
                    r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
                );
            }
        }
        let _ = writeln!(svg, "</g>");
    }

    let _ = writeln!(svg, r#"<g font-family="sans-serif" font-size="9">"#);
    for (id, &p) in emb.node_order.iter().zip(&xy) {
        let (x, y) = project(p);
        let name = escape(id);
        let _ = writeln!(
            svg,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{}" stroke="black" stroke-width="0.5"><title>{name}</title></circle><text x="{:.2}" y="{:.2}">{name}</text>"#,
            fill(classes.get(id).copied()),
            x + 5.0,
            y - 5.0
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}
