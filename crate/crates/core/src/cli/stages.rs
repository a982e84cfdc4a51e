//! Pipeline stages. Each stage turns in-memory inputs into a [`Bundle`] of
//! files plus the values the next stage needs; nothing touches the disk
//! here except through [`Source`].

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use chrono::Datelike;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::config::Context;
use super::CliError;
use crate::artifact::{check_schema, sha256_hex, verify_files, ArtifactError, Bundle};
use crate::geo::{
    chain_events, classify_scenario, export_chain_geojson, metrics_csv, year_metrics, EventChain,
};
use crate::graph::{build_graph, symmetrize, BuildOptions, SignedDiGraph};
use crate::ingest::{filter_events, parse_events, EventRecord};
use crate::metrics::{
    betweenness_centrality, clustering_coefficient, degree_centrality, density, ei_index,
    eigenvector_centrality, signed_transitivity, triad_census, EiOptions, LayerView, MetricReport,
    MetricsError, Treatment,
};
use crate::spectral::{
    aggression_csv, aggression_scores, embed, embedding_csv, render_embedding_svg,
    signed_laplacian, AggressionScore, Embedding, DEFAULT_EPSILON,
};
use crate::SCHEMA_VERSION;

pub const EVENTS: &str = "events.json";
pub const ROW_ERRORS: &str = "row_errors.csv";
pub const GRAPH: &str = "graph.json";
pub const METRICS: &str = "metrics.json";
pub const EMBEDDING: &str = "embedding.json";
pub const EMBEDDING_CSV: &str = "embedding.csv";
pub const EMBEDDING_SVG: &str = "embedding.svg";
pub const AGGRESSION: &str = "aggression.json";
pub const AGGRESSION_CSV: &str = "aggression.csv";
pub const GEO: &str = "geo.json";
pub const YEARS_CSV: &str = "year_metrics.csv";
pub const CHAINS_GEOJSON: &str = "chains.geojson";
pub const REPORT: &str = "report.json";

/// Where upstream artifacts come from: the output directory, or a bundle
/// produced earlier in the same process.
pub enum Source<'a> {
    Disk(&'a Path),
    Memory(&'a Bundle),
}

impl Source<'_> {
    fn bytes(&self, name: &str) -> Result<Vec<u8>, ArtifactError> {
        match self {
            Source::Disk(dir) => {
                let path = dir.join(name);
                fs::read(&path).map_err(|e| match e.kind() {
                    std::io::ErrorKind::NotFound => ArtifactError::Missing(path),
                    _ => ArtifactError::io(path, e),
                })
            }
            Source::Memory(b) => b
                .get(name)
                .map(<[u8]>::to_vec)
                .ok_or_else(|| ArtifactError::Missing(PathBuf::from(name))),
        }
    }

    fn document(&self, name: &str, digest: &str) -> Result<Value, ArtifactError> {
        let bytes = self.bytes(name)?;
        let malformed = |message: String| ArtifactError::Malformed {
            path: PathBuf::from(name),
            message,
        };
        let doc: Value = serde_json::from_slice(&bytes).map_err(|e| malformed(e.to_string()))?;
        check_schema(&doc, Path::new(name))?;
        if doc.get("config_digest").and_then(Value::as_str) != Some(digest) {
            eprintln!("warning: {name} was produced with a different configuration");
        }
        Ok(doc)
    }

    fn verify(&self, files: &Map<String, Value>) -> Result<(), ArtifactError> {
        match self {
            Source::Disk(dir) => verify_files(dir, files),
            Source::Memory(b) => {
                for (name, want) in files {
                    let got = b
                        .get(name)
                        .ok_or_else(|| ArtifactError::Missing(PathBuf::from(name)))?;
                    if want.as_str() != Some(sha256_hex(got).as_str()) {
                        return Err(ArtifactError::Tampered { path: PathBuf::from(name) });
                    }
                }
                Ok(())
            }
        }
    }
}

fn field<T: for<'de> Deserialize<'de>>(doc: &Value, key: &str, name: &str) -> Result<T, CliError> {
    let v = doc.get(key).cloned().unwrap_or(Value::Null);
    serde_json::from_value(v).map_err(|e| {
        CliError::Pipeline(format!("{name}: field {key:?}: {e}"))
    })
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s.into_bytes()
}

fn header(ctx: &Context) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("config_digest".into(), json!(ctx.digest));
    m
}

/// Adds a non-JSON file to `bundle` and records its digest in `files`.
fn attach(bundle: &mut Bundle, files: &mut Map<String, Value>, name: &str, contents: String) {
    files.insert(name.to_string(), json!(sha256_hex(contents.as_bytes())));
    bundle.add(name, contents);
}

// ---------------------------------------------------------------- ingest

pub struct Ingested {
    pub events: Vec<EventRecord>,
    pub summary: String,
}

pub fn ingest(ctx: &Context) -> Result<(Ingested, Bundle), CliError> {
    let outcome = parse_events(&ctx.events_csv, &ctx.mapping, &ctx.catalog)
        .map_err(|e| CliError::Pipeline(format!("events CSV: {e}")))?;
    let filter = ctx.config.settings.filter.to_filter();
    let events = filter_events(&outcome.records, &filter);
    let organizations: BTreeSet<&str> = events.iter().flat_map(|e| e.actors()).collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["row", "reason"]).expect("in-memory write");
    for e in &outcome.errors {
        w.write_record([e.row.to_string(), e.reason.clone()])
            .expect("in-memory write");
    }
    let errors_csv = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");

    let mut bundle = Bundle::new();
    let mut files = Map::new();
    attach(&mut bundle, &mut files, ROW_ERRORS, errors_csv);
    let mut doc = header(ctx);
    doc.insert("rows".into(), json!(outcome.rows()));
    doc.insert("row_errors".into(), json!(outcome.errors.len()));
    doc.insert("filtered_out".into(), json!(outcome.records.len() - events.len()));
    doc.insert("organizations".into(), json!(organizations.len()));
    doc.insert("located".into(), json!(events.iter().filter(|e| e.is_located()).count()));
    doc.insert("events".into(), json!(events));
    doc.insert("files".into(), Value::Object(files));
    bundle.add(EVENTS, pretty(&Value::Object(doc)));

    let summary = format!(
        "{} events, {} organizations ({} rows read, {} row errors)",
        events.len(),
        organizations.len(),
        outcome.rows(),
        outcome.errors.len()
    );
    Ok((Ingested { events, summary }, bundle))
}

pub fn load_events(src: &Source, ctx: &Context) -> Result<Vec<EventRecord>, CliError> {
    let doc = src.document(EVENTS, &ctx.digest)?;
    field(&doc, "events", EVENTS)
}

// ----------------------------------------------------------------- graph

pub fn graph(ctx: &Context, events: &[EventRecord]) -> Result<(SignedDiGraph, Bundle), CliError> {
    let s = &ctx.config.settings;
    let options = BuildOptions {
        mode: s.tie_mode,
        scheme: s.weight_scheme,
    };
    let mut g = build_graph(events, options, &ctx.catalog);
    if let Some(scope) = &s.scope {
        g = g.subgraph(|n| n.country.as_deref() == Some(scope.as_str()));
    }
    let mut doc = g.to_document();
    doc.config_digest = Some(ctx.digest.clone());
    let value = serde_json::to_value(&doc).expect("graph serializes");
    let mut bundle = Bundle::new();
    bundle.add(GRAPH, pretty(&value));
    Ok((g, bundle))
}

pub fn load_graph(src: &Source, ctx: &Context) -> Result<SignedDiGraph, CliError> {
    let doc = src.document(GRAPH, &ctx.digest)?;
    let doc: crate::graph::GraphDocument = serde_json::from_value(doc)
        .map_err(|e| CliError::Pipeline(format!("{GRAPH}: {e}")))?;
    SignedDiGraph::try_from(doc).map_err(|e| CliError::Pipeline(format!("{GRAPH}: {e}")))
}

// --------------------------------------------------------------- metrics

fn report_value<T: serde::Serialize>(r: Result<T, MetricsError>, unavailable: &mut Map<String, Value>, key: &str) -> Value {
    match r {
        Ok(v) => json!(v),
        Err(e) => {
            unavailable.insert(key.into(), json!(e.to_string()));
            Value::Null
        }
    }
}

fn centrality_summary(r: &MetricReport) -> Value {
    json!({"mean": r.mean, "std_dev": r.std_dev, "top5": r.top(5)})
}

pub fn metrics(ctx: &Context, g: &SignedDiGraph) -> Result<Bundle, CliError> {
    let s = &ctx.config.settings;
    let mut bundle = Bundle::new();
    let mut files = Map::new();
    let mut layers = Map::new();
    for (name, base) in [("negative", LayerView::negative()), ("positive", LayerView::positive())] {
        let view = LayerView {
            treat_as: if s.metrics.weighted {
                Treatment::UndirectedWeighted
            } else {
                Treatment::UndirectedUnweighted
            },
            ..base
        };
        let mut layer = Map::new();
        let mut unavailable = Map::new();
        let centralities = [
            ("degree", degree_centrality(g, view)),
            (
                "eigenvector",
                eigenvector_centrality(g, view, s.metrics.eigen_tol, s.metrics.eigen_max_iter),
            ),
            ("betweenness", betweenness_centrality(g, view)),
        ];
        for (metric, result) in centralities {
            match result {
                Ok(r) => {
                    attach(&mut bundle, &mut files, &format!("{name}_{metric}.csv"), r.to_csv(true));
                    layer.insert(metric.into(), centrality_summary(&r));
                }
                Err(e) => {
                    unavailable.insert(metric.into(), json!(e.to_string()));
                    layer.insert(metric.into(), Value::Null);
                }
            }
        }
        layer.insert("density".into(), report_value(density(g, view), &mut unavailable, "density"));
        layer.insert(
            "clustering".into(),
            report_value(clustering_coefficient(g, view), &mut unavailable, "clustering"),
        );
        let ei = ei_index(
            g,
            view,
            EiOptions {
                permutations: s.ei.permutations,
                seed: s.ei.seed,
                workers: s.ei.workers,
            },
        );
        layer.insert("ei".into(), report_value(ei, &mut unavailable, "ei"));
        layer.insert("edges".into(), json!(g.edge_count(view.which)));
        layer.insert("unavailable".into(), Value::Object(unavailable));
        layers.insert(name.into(), Value::Object(layer));
    }

    let mut doc = header(ctx);
    doc.insert("nodes".into(), json!(g.len()));
    doc.insert("layers".into(), Value::Object(layers));
    doc.insert("transitivity".into(), json!(signed_transitivity(g)));
    doc.insert("triads".into(), json!(triad_census(&symmetrize(g))));
    doc.insert("files".into(), Value::Object(files));
    bundle.add(METRICS, pretty(&Value::Object(doc)));
    Ok(bundle)
}

// ------------------------------------------------------- embed/aggression

/// Aggression over the actors that survived isolate removal.
fn scores(ctx: &Context, g: &SignedDiGraph, emb: &Embedding) -> Result<Vec<AggressionScore>, CliError> {
    let kept: BTreeSet<&str> = emb.node_order.iter().map(String::as_str).collect();
    let sub = g.subgraph(|n| kept.contains(n.id.as_str()));
    Ok(aggression_scores(emb, &sub, ctx.config.settings.embedding.weighted_aggression)?)
}

pub fn embedding(ctx: &Context, g: &SignedDiGraph) -> Result<(Embedding, Bundle), CliError> {
    let e = &ctx.config.settings.embedding;
    let l = signed_laplacian(&symmetrize(g), &g.ids(), e.normalized)?;
    let emb = embed(&l, e.k)?;
    let classes: BTreeMap<String, _> = scores(ctx, g, &emb)?
        .into_iter()
        .map(|s| (s.actor, s.class))
        .collect();

    let mut bundle = Bundle::new();
    let mut files = Map::new();
    attach(&mut bundle, &mut files, EMBEDDING_CSV, embedding_csv(&emb));
    attach(&mut bundle, &mut files, EMBEDDING_SVG, render_embedding_svg(&emb, g, &classes));
    let mut doc = header(ctx);
    doc.insert("k".into(), json!(e.k));
    doc.insert("normalized".into(), json!(e.normalized));
    doc.insert("dropped".into(), json!(l.dropped));
    doc.insert("embedding".into(), json!(emb));
    doc.insert("files".into(), Value::Object(files));
    bundle.add(EMBEDDING, pretty(&Value::Object(doc)));
    Ok((emb, bundle))
}

pub fn load_embedding(src: &Source, ctx: &Context) -> Result<Embedding, CliError> {
    let doc = src.document(EMBEDDING, &ctx.digest)?;
    field(&doc, "embedding", EMBEDDING)
}

pub fn aggression(ctx: &Context, g: &SignedDiGraph, emb: &Embedding) -> Result<Bundle, CliError> {
    let mut scores = scores(ctx, g, emb)?;
    scores.sort_by(|a, b| b.net.total_cmp(&a.net).then_with(|| a.actor.cmp(&b.actor)));
    let mut bundle = Bundle::new();
    let mut files = Map::new();
    attach(&mut bundle, &mut files, AGGRESSION_CSV, aggression_csv(&scores));
    let mut doc = header(ctx);
    doc.insert("weighted".into(), json!(ctx.config.settings.embedding.weighted_aggression));
    doc.insert("epsilon".into(), json!(DEFAULT_EPSILON));
    doc.insert("scores".into(), json!(scores));
    doc.insert("files".into(), Value::Object(files));
    bundle.add(AGGRESSION, pretty(&Value::Object(doc)));
    Ok(bundle)
}

// ------------------------------------------------------------------- geo

fn scenario_value(ctx: &Context, chain: &EventChain) -> Value {
    match classify_scenario(chain, ctx.config.settings.geo.scenario_params()) {
        Ok(r) => json!(r),
        Err(e) => json!({"scenario": Value::Null, "reason": e.to_string()}),
    }
}

pub fn geo(ctx: &Context, events: &[EventRecord]) -> Result<Bundle, CliError> {
    let g = &ctx.config.settings.geo;
    let chain = chain_events(events);
    let years = match (chain.links.first(), chain.links.last()) {
        (Some(a), Some(b)) => Some((a.event.date.year(), b.event.date.year())),
        _ => None,
    };
    let rows = year_metrics(&chain, ctx.borders.as_ref(), g.gap_mode, years);

    let mut bundle = Bundle::new();
    let mut files = Map::new();
    attach(&mut bundle, &mut files, YEARS_CSV, metrics_csv(&rows, ctx.borders.is_some()));
    if !chain.is_empty() {
        let text = export_chain_geojson(&chain).map_err(|e| CliError::Pipeline(e.to_string()))?;
        attach(&mut bundle, &mut files, CHAINS_GEOJSON, text + "\n");
    }

    let groups: Map<String, Value> = g
        .groups
        .iter()
        .map(|actor| {
            let own: Vec<EventRecord> = events
                .iter()
                .filter(|e| e.actors().any(|a| a == actor))
                .cloned()
                .collect();
            (actor.clone(), scenario_value(ctx, &chain_events(&own)))
        })
        .collect();

    let mut doc = header(ctx);
    doc.insert("gap_mode".into(), json!(g.gap_mode));
    doc.insert("borders".into(), json!(ctx.borders.is_some()));
    doc.insert("located".into(), json!(chain.len()));
    doc.insert("unlocated".into(), json!(chain.unlocated));
    doc.insert("years".into(), json!(rows));
    doc.insert("scenario".into(), scenario_value(ctx, &chain));
    doc.insert("groups".into(), Value::Object(groups));
    doc.insert("files".into(), Value::Object(files));
    bundle.add(GEO, pretty(&Value::Object(doc)));
    Ok(bundle)
}

// ---------------------------------------------------------------- report

fn strip(mut doc: Value) -> Value {
    if let Some(m) = doc.as_object_mut() {
        m.remove("schema_version");
        m.remove("config_digest");
    }
    doc
}

/// Merges every stage document into one. The only provenance fields are
/// at the top level; nested documents lose their own copies.
pub fn report(ctx: &Context, src: &Source) -> Result<Bundle, CliError> {
    let names = [EVENTS, GRAPH, METRICS, EMBEDDING, AGGRESSION, GEO];
    let mut docs = BTreeMap::new();
    let mut artifacts = Map::new();
    for name in names {
        let doc = src.document(name, &ctx.digest)?;
        if let Some(files) = doc.get("files").and_then(Value::as_object) {
            src.verify(files)?;
            artifacts.extend(files.clone());
        }
        docs.insert(name, strip(doc));
    }
    let mut events = docs.remove(EVENTS).expect("loaded above");
    if let Some(m) = events.as_object_mut() {
        m.remove("events");
        m.remove("files");
    }
    let graph = docs.remove(GRAPH).expect("loaded above");
    let count = |k: &str| graph.get(k).and_then(Value::as_array).map_or(0, Vec::len);
    let mut without_files = |name: &str| {
        let mut d = docs.remove(name).expect("loaded above");
        if let Some(m) = d.as_object_mut() {
            m.remove("files");
        }
        d
    };
    let metrics = without_files(METRICS);
    let mut embedding = without_files(EMBEDDING);
    if let Some(m) = embedding.as_object_mut() {
        let eigenvalues = m.get("embedding").and_then(|e| e.get("eigenvalues")).cloned();
        m.remove("embedding");
        m.insert("eigenvalues".into(), eigenvalues.unwrap_or(Value::Null));
    }
    let aggression = without_files(AGGRESSION);
    let geo = without_files(GEO);

    let mut doc = header(ctx);
    doc.insert(
        "tool".into(),
        json!({"name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION")}),
    );
    doc.insert("config".into(), ctx.provenance());
    doc.insert("seed".into(), json!(ctx.config.settings.ei.seed));
    doc.insert(
        "graph".into(),
        json!({
            "nodes": count("nodes"),
            "positive_edges": count("pos_edges"),
            "negative_edges": count("neg_edges"),
        }),
    );
    doc.insert("ingest".into(), events);
    doc.insert("metrics".into(), metrics);
    doc.insert("embedding".into(), embedding);
    doc.insert("aggression".into(), aggression);
    doc.insert("geo".into(), geo);
    doc.insert("artifacts".into(), Value::Object(artifacts));
    let mut bundle = Bundle::new();
    bundle.add(REPORT, pretty(&Value::Object(doc)));
    Ok(bundle)
}
