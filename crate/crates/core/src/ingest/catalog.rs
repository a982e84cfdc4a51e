use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::SCHEMA_VERSION;

/// Closed set of actor categories used for homophily analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Government,
    Rebels,
    Militias,
    Civilians,
    Islamists,
    External,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Government,
        Category::Rebels,
        Category::Militias,
        Category::Civilians,
        Category::Islamists,
        Category::External,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Government => "government",
            Category::Rebels => "rebels",
            Category::Militias => "militias",
            Category::Civilians => "civilians",
            Category::Islamists => "islamists",
            Category::External => "external",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, IngestError> {
        let key = s.trim().to_ascii_lowercase();
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == key)
            .ok_or_else(|| IngestError::UnknownCategory(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorEntry {
    #[serde(default)]
    pub aliases: Vec<String>,
    pub category: Category,
    /// Optional country tag used for regional subgraphs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CatalogDocument {
    schema_version: String,
    #[serde(default = "default_fallback")]
    fallback_category: Category,
    actors: BTreeMap<String, ActorEntry>,
}

fn default_fallback() -> Category {
    Category::Militias
}

/// Canonical actor names with their aliases and categories.
///
/// Lookup keys are case-folded with internal whitespace collapsed, so
/// `"  aqim "` and `"AQIM"` resolve to the same entry.
#[derive(Debug, Clone)]
pub struct ActorCatalog {
    entries: BTreeMap<String, ActorEntry>,
    fallback: Category,
    lookup: HashMap<String, String>,
}

impl Default for ActorCatalog {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
            fallback: default_fallback(),
            lookup: HashMap::new(),
        }
    }
}

/// Trims and collapses runs of whitespace to a single space.
pub fn normalize_whitespace(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn lookup_key(raw: &str) -> String {
    normalize_whitespace(raw).to_lowercase()
}

impl ActorCatalog {
    pub fn new(
        entries: BTreeMap<String, ActorEntry>,
        fallback: Category,
    ) -> Result<Self, IngestError> {
        let mut lookup: HashMap<String, String> = HashMap::new();
        for (canonical, entry) in &entries {
            if normalize_whitespace(canonical).is_empty() {
                return Err(IngestError::EmptyName);
            }
            let names = std::iter::once(canonical).chain(entry.aliases.iter());
            for name in names {
                let key = lookup_key(name);
                match lookup.get(&key) {
                    Some(owner) if owner != canonical => {
                        return Err(IngestError::AliasCollision {
                            alias: name.clone(),
                            first: owner.clone(),
                            second: canonical.clone(),
                        });
                    }
                    _ => {
                        lookup.insert(key, canonical.clone());
                    }
                }
            }
        }
        Ok(Self {
            entries,
            fallback,
            lookup,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, IngestError> {
        let doc: CatalogDocument =
            serde_json::from_str(text).map_err(|e| IngestError::Json(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(IngestError::SchemaVersion {
                found: doc.schema_version,
                expected: SCHEMA_VERSION.to_string(),
            });
        }
        Self::new(doc.actors, doc.fallback_category)
    }

    pub fn to_json(&self) -> String {
        let doc = CatalogDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            fallback_category: self.fallback,
            actors: self.entries.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("catalog serializes")
    }

    pub fn with_fallback(mut self, fallback: Category) -> Self {
        self.fallback = fallback;
        self
    }

    pub fn fallback(&self) -> Category {
        self.fallback
    }

    pub fn entries(&self) -> &BTreeMap<String, ActorEntry> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Resolves a raw actor string to its canonical id. Names without a
    /// catalog entry are their own canonical id (whitespace-normalized).
    pub fn canonicalize(&self, raw_name: &str) -> Result<String, IngestError> {
        let cleaned = normalize_whitespace(raw_name);
        if cleaned.is_empty() {
            return Err(IngestError::EmptyName);
        }
        Ok(self
            .lookup
            .get(&cleaned.to_lowercase())
            .cloned()
            .unwrap_or(cleaned))
    }

    /// Category of a canonical id, or the fallback category when unknown.
    pub fn category(&self, id: &str) -> Category {
        self.entries
            .get(id)
            .map(|e| e.category)
            .unwrap_or(self.fallback)
    }

    pub fn country(&self, id: &str) -> Option<&str> {
        self.entries.get(id).and_then(|e| e.country.as_deref())
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }
}

/// Free-function form of [`ActorCatalog::canonicalize`].
pub fn canonicalize_actor(raw_name: &str, catalog: &ActorCatalog) -> Result<String, IngestError> {
    catalog.canonicalize(raw_name)
}
