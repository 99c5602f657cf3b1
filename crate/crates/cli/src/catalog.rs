//! Built-in scenarios, compiled into the binary.

use serde::Serialize;

use crate::scenario::{parse_scenario, Scenario};
use crate::CliError;

macro_rules! entries {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../catalog/", $name, ".json")))),*]
    };
}

static SOURCES: &[(&str, &str)] = entries![
    "euclidean-plane",
    "euclidean-3space",
    "hyperbolic-plane",
    "hyperbolic-3space",
    "de-sitter-slice",
    "einstein-de-sitter",
    "fischler-susskind",
    "cor35-plane-violation",
    "euclidean-plane-recurrence",
    "euclidean-3space-recurrence",
];

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: String,
    pub analyses: Vec<String>,
}

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

/// JSON source of a built-in scenario.
pub fn source(name: &str) -> Result<&'static str, CliError> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| CliError::UnknownScenario(name.to_string()))
}

pub fn load(name: &str) -> Result<Scenario, CliError> {
    parse_scenario(source(name)?)
}

pub fn catalog() -> Vec<CatalogEntry> {
    SOURCES
        .iter()
        .map(|(name, src)| {
            let s = parse_scenario(src).expect("built-in scenarios parse");
            CatalogEntry {
                name,
                description: s.description.unwrap_or_default(),
                analyses: s.analyses.iter().map(|a| a.name().to_string()).collect(),
            }
        })
        .collect()
}
