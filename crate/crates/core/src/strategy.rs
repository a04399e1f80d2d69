//! Named algorithm variants and the registries that select them at runtime.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::gkm::{Connection, GkmError, GkmGraph, GkmSubgraph};
use crate::matroid::{ClosureBfs, Flat, SubsetScan, WeightSystem};

/// Anything selectable by name.
pub trait Named {
    fn name(&self) -> &'static str;
}

/// Produces every flat of a weight system exactly once, in any order.
pub trait FlatEnumerator: Named + Send + Sync {
    fn enumerate(&self, ws: &WeightSystem) -> Vec<Flat>;
}

/// Decides which faces of a GKM-graph are kept by an enumeration.
pub trait FaceFilter: Named + Send + Sync {
    fn needs_connection(&self) -> bool;
    fn admits(&self, g: &GkmGraph, connection: Option<&Connection>, face: &GkmSubgraph) -> bool;
}

/// Supplies the connection used by connection-aware face filters.
pub trait ConnectionRule: Named + Send + Sync {
    fn connection(&self, g: &GkmGraph) -> Result<Connection, GkmError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} `{name}`; expected one of: {}", .known.join(", "))]
pub struct UnknownStrategy {
    pub kind: &'static str,
    pub name: String,
    pub known: Vec<&'static str>,
}

/// Strategies of one kind, keyed by name.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    default: &'static str,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str, default: Arc<T>) -> Self {
        let mut entries = BTreeMap::new();
        let name = default.name();
        entries.insert(name, default);
        Registry {
            kind,
            default: name,
            entries,
        }
    }

    /// Adds or replaces the entry under `strategy.name()`.
    pub fn register(&mut self, strategy: Arc<T>) -> &mut Self {
        self.entries.insert(strategy.name(), strategy);
        self
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }

    pub fn default_name(&self) -> &'static str {
        self.default
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>, UnknownStrategy> {
        self.entries.get(name).cloned().ok_or_else(|| UnknownStrategy {
            kind: self.kind,
            name: name.to_string(),
            known: self.names(),
        })
    }

    pub fn default_strategy(&self) -> Arc<T> {
        self.entries[self.default].clone()
    }

    /// `get` for `Some`, the default for `None`.
    pub fn resolve(&self, name: Option<&str>) -> Result<Arc<T>, UnknownStrategy> {
        match name {
            Some(n) => self.get(n),
            None => Ok(self.default_strategy()),
        }
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("default", &self.default)
            .field("entries", &self.entries.keys().collect::<Vec<_>>())
            .finish()
    }
}

pub fn flat_enumerators() -> Registry<dyn FlatEnumerator> {
    let mut r: Registry<dyn FlatEnumerator> = Registry::new("flat enumerator", Arc::new(ClosureBfs));
    r.register(Arc::new(SubsetScan));
    r
}

pub fn face_filters() -> Registry<dyn FaceFilter> {
    let mut r: Registry<dyn FaceFilter> = Registry::new("face mode", Arc::new(crate::gkm::AllFaces));
    r.register(Arc::new(crate::gkm::TotallyGeodesic));
    r
}

pub fn connection_rules() -> Registry<dyn ConnectionRule> {
    let mut r: Registry<dyn ConnectionRule> = Registry::new("connection rule", Arc::new(crate::gkm::AutoConnection));
    r.register(Arc::new(crate::gkm::DeclaredConnection));
    r.register(Arc::new(crate::gkm::CanonicalConnection));
    r
}

/// Strategy names and limits read from a JSON document; absent keys take
/// the registry defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrategyConfig {
    pub flats: Option<String>,
    pub mode: Option<String>,
    pub connection: Option<String>,
    pub cap: Option<usize>,
}

impl StrategyConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Fields of `other` that are set win.
    pub fn overridden_by(&self, other: &StrategyConfig) -> StrategyConfig {
        StrategyConfig {
            flats: other.flats.clone().or_else(|| self.flats.clone()),
            mode: other.mode.clone().or_else(|| self.mode.clone()),
            connection: other.connection.clone().or_else(|| self.connection.clone()),
            cap: other.cap.or(self.cap),
        }
    }
}
