use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::artifact::sha256_hex;
use crate::geo::{BorderSet, GapMode, ScenarioParams};
use crate::graph::{TieMode, WeightScheme};
use crate::ingest::{ActorCatalog, ColumnMapping, EventFilter, EventType};
use crate::SCHEMA_VERSION;

/// Input and output locations. Relative paths are resolved against the
/// directory holding the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub events: PathBuf,
    pub catalog: PathBuf,
    /// Defaults to the ACLED v5 column names when absent.
    #[serde(default)]
    pub mapping: Option<PathBuf>,
    /// Without borders the border-distance column is omitted.
    #[serde(default)]
    pub borders: Option<PathBuf>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingConfig {
    pub k: usize,
    pub normalized: bool,
    /// Role-coupling factor of the directed expansion.
    pub coupling: f64,
    pub weighted_aggression: bool,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            k: 2,
            normalized: true,
            coupling: 1.0,
            weighted_aggression: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EiConfig {
    pub permutations: usize,
    pub seed: u64,
    /// 0 means one worker per core. Results do not depend on this value.
    pub workers: usize,
}

impl Default for EiConfig {
    fn default() -> Self {
        Self {
            permutations: 10_000,
            seed: 0,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsConfig {
    /// Read tie weights in degree and eigenvector centrality.
    pub weighted: bool,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            weighted: false,
            eigen_tol: 1e-12,
            eigen_max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeoConfig {
    pub radius_km: f64,
    pub concentration_threshold: f64,
    pub step_threshold_km: f64,
    pub gap_mode: GapMode,
    /// Actors that get their own scenario verdict besides the pooled chain.
    pub groups: Vec<String>,
}

impl Default for GeoConfig {
    fn default() -> Self {
        let p = ScenarioParams::default();
        Self {
            radius_km: p.radius_km,
            concentration_threshold: p.concentration_threshold,
            step_threshold_km: p.step_threshold_km,
            gap_mode: GapMode::default(),
            groups: Vec::new(),
        }
    }
}

impl GeoConfig {
    pub fn scenario_params(&self) -> ScenarioParams {
        ScenarioParams {
            radius_km: self.radius_km,
            concentration_threshold: self.concentration_threshold,
            step_threshold_km: self.step_threshold_km,
        }
    }
}

/// Event selection applied at ingest. Absent fields do not constrain;
/// `types` defaults to the six violent event types.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub types: Option<BTreeSet<EventType>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actors: Option<BTreeSet<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<NaiveDate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<NaiveDate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countries: Option<BTreeSet<String>>,
}

impl FilterConfig {
    pub fn to_filter(&self) -> EventFilter {
        let base = EventFilter::violent_only();
        EventFilter {
            types: self.types.clone().unwrap_or(base.types),
            actors: self.actors.clone(),
            date_range: match (self.from, self.to) {
                (None, None) => None,
                (from, to) => Some((from.unwrap_or(NaiveDate::MIN), to.unwrap_or(NaiveDate::MAX))),
            },
            countries: self.countries.clone(),
        }
    }
}

/// Settings that shape the artifacts. Everything except file locations.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Settings {
    pub tie_mode: TieMode,
    pub weight_scheme: WeightScheme,
    pub embedding: EmbeddingConfig,
    pub ei: EiConfig,
    pub metrics: MetricsConfig,
    pub geo: GeoConfig,
    pub filter: FilterConfig,
    /// Keep only actors tagged with this country when building the graph.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub schema_version: String,
    pub paths: Paths,
    pub settings: Settings,
}

/// On-disk layout: paths and settings side by side at the top level.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema_version: String,
    paths: Paths,
    #[serde(default)]
    tie_mode: TieMode,
    #[serde(default)]
    weight_scheme: WeightScheme,
    #[serde(default)]
    embedding: EmbeddingConfig,
    #[serde(default)]
    ei: EiConfig,
    #[serde(default)]
    metrics: MetricsConfig,
    #[serde(default)]
    geo: GeoConfig,
    #[serde(default)]
    filter: FilterConfig,
    #[serde(default)]
    scope: Option<String>,
}

impl From<ConfigFile> for RunConfig {
    fn from(f: ConfigFile) -> Self {
        RunConfig {
            schema_version: f.schema_version,
            paths: f.paths,
            settings: Settings {
                tie_mode: f.tie_mode,
                weight_scheme: f.weight_scheme,
                embedding: f.embedding,
                ei: f.ei,
                metrics: f.metrics,
                geo: f.geo,
                filter: f.filter,
                scope: f.scope,
            },
        }
    }
}

/// Command-line replacements for config fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tie_mode: Option<TieMode>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub permutations: Option<usize>,
    pub scope: Option<String>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        let cfg = RunConfig::from(file);
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "config schema_version {:?}, expected {SCHEMA_VERSION:?}",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        let s = &mut self.settings;
        if let Some(m) = o.tie_mode {
            s.tie_mode = m;
        }
        if let Some(k) = o.k {
            s.embedding.k = k;
        }
        if let Some(seed) = o.seed {
            s.ei.seed = seed;
        }
        if let Some(p) = o.permutations {
            s.ei.permutations = p;
        }
        if let Some(scope) = &o.scope {
            s.scope = Some(scope.clone());
        }
        if let Some(out) = &o.out {
            self.paths.out = out.clone();
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let s = &self.settings;
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if s.embedding.k == 0 {
            return bad("embedding.k must be at least 1");
        }
        if !(s.embedding.coupling.is_finite() && s.embedding.coupling >= 0.0) {
            return bad("embedding.coupling must be finite and non-negative");
        }
        if s.ei.permutations == 0 {
            return bad("ei.permutations must be at least 1");
        }
        if !(s.geo.radius_km > 0.0 && s.geo.step_threshold_km >= 0.0) {
            return bad("geo radius_km must be positive and step_threshold_km non-negative");
        }
        if !(0.0..=1.0).contains(&s.geo.concentration_threshold) {
            return bad("geo.concentration_threshold must lie in [0, 1]");
        }
        if let (Some(from), Some(to)) = (s.filter.from, s.filter.to) {
            if from > to {
                return bad("filter.from is after filter.to");
            }
        }
        Ok(())
    }

    fn resolve(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        join(&mut self.paths.events);
        join(&mut self.paths.catalog);
        join(&mut self.paths.out);
        if let Some(p) = self.paths.mapping.as_mut() {
            join(p);
        }
        if let Some(p) = self.paths.borders.as_mut() {
            join(p);
        }
    }
}

/// Input file hashes, part of the config digest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigests {
    pub events: String,
    pub catalog: String,
    pub mapping: Option<String>,
    pub borders: Option<String>,
}

/// Parsed inputs plus the effective settings.
#[derive(Debug)]
pub struct Context {
    pub config: RunConfig,
    pub events_csv: String,
    pub catalog: ActorCatalog,
    pub mapping: ColumnMapping,
    pub borders: Option<BorderSet>,
    pub inputs: InputDigests,
    /// SHA-256 over the settings and input hashes. Output paths do not
    /// contribute, so the same run in another directory has the same digest.
    pub digest: String,
}

impl Context {
    pub fn out_dir(&self) -> &Path {
        &self.config.paths.out
    }

    /// Digest preimage as it appears in the report.
    pub fn provenance(&self) -> serde_json::Value {
        serde_json::json!({
            "settings": self.config.settings,
            "inputs": self.inputs,
        })
    }
}

fn read(path: &Path, what: &str) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("cannot read {what} {}: {e}", path.display())))
}

fn utf8(bytes: Vec<u8>, path: &Path) -> Result<String, CliError> {
    String::from_utf8(bytes).map_err(|_| CliError::Io(format!("{} is not UTF-8", path.display())))
}

/// Loads the config, applies overrides and reads every input before any
/// computation starts.
pub fn load(config_path: &Path, overrides: &Overrides) -> Result<Context, CliError> {
    let text = fs::read_to_string(config_path).map_err(|e| {
        CliError::Config(format!("cannot read config {}: {e}", config_path.display()))
    })?;
    let mut config = RunConfig::from_json(&text)?;
    // Overrides given on the command line are relative to the working
    // directory, so they are applied after resolution.
    let base = config_path.parent().unwrap_or(Path::new("."));
    config.resolve(base);
    config.apply(overrides);
    config.validate()?;

    let p = &config.paths;
    let events_bytes = read(&p.events, "events CSV")?;
    let catalog_bytes = read(&p.catalog, "catalog")?;
    let mapping_bytes = p.mapping.as_deref().map(|m| read(m, "mapping")).transpose()?;
    let borders_bytes = p.borders.as_deref().map(|b| read(b, "borders")).transpose()?;

    let inputs = InputDigests {
        events: sha256_hex(&events_bytes),
        catalog: sha256_hex(&catalog_bytes),
        mapping: mapping_bytes.as_deref().map(sha256_hex),
        borders: borders_bytes.as_deref().map(sha256_hex),
    };

    let catalog_text = utf8(catalog_bytes, &p.catalog)?;
    let catalog = ActorCatalog::from_json(&catalog_text)
        .map_err(|e| CliError::Config(format!("catalog {}: {e}", p.catalog.display())))?;
    let mapping = match (mapping_bytes, &p.mapping) {
        (Some(bytes), Some(path)) => ColumnMapping::from_json(&utf8(bytes, path)?)
            .map_err(|e| CliError::Config(format!("mapping {}: {e}", path.display())))?,
        _ => ColumnMapping::default(),
    };
    let borders = match (borders_bytes, &p.borders) {
        (Some(bytes), Some(path)) => Some(
            BorderSet::from_geojson(&utf8(bytes, path)?)
                .map_err(|e| CliError::Pipeline(format!("borders {}: {e}", path.display())))?,
        ),
        _ => None,
    };
    let events_csv = utf8(events_bytes, &p.events)?;

    let preimage = serde_json::to_vec(&serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "settings": config.settings,
        "inputs": inputs,
    }))
    .expect("config serializes");
    let digest = sha256_hex(&preimage);

    Ok(Context {
        config,
        events_csv,
        catalog,
        mapping,
        borders,
        inputs,
        digest,
    })
}
