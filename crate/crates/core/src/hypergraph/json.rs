use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use super::{Generated, Hypergraph, Vertex};
use crate::error::{Error, Result};

/// A hyperedge written as three vertex names. Deserialization rejects
/// arrays of any other length, so the JSON error carries its position.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EdgeNames(pub [String; 3]);

impl<'de> Deserialize<'de> for EdgeNames {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct EdgeVisitor;

        impl<'de> Visitor<'de> for EdgeVisitor {
            type Value = EdgeNames;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a hyperedge of exactly 3 vertex names")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<EdgeNames, A::Error> {
                let mut names = Vec::with_capacity(3);
                while let Some(name) = seq.next_element::<String>()? {
                    names.push(name);
                    if names.len() > 3 {
                        return Err(de::Error::custom(
                            "hyperedge has more than 3 vertices; only 3-uniform hypergraphs are supported",
                        ));
                    }
                }
                match <[String; 3]>::try_from(names) {
                    Ok(arr) => Ok(EdgeNames(arr)),
                    Err(v) => Err(de::Error::invalid_length(v.len(), &self)),
                }
            }
        }

        d.deserialize_seq(EdgeVisitor)
    }
}

/// Generator provenance stored next to generated instances.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub min_girth: u32,
    pub attempts: usize,
    pub attempts_used: usize,
    pub exhausted: bool,
    pub girth: String,
    pub chromatic_number: usize,
}

/// On-disk hypergraph: `{"vertices": [...], "edges": [[..3 names..], ...]}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeNames>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorMeta>,
}

impl HypergraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("hypergraph JSON: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("hypergraph file serializes")
    }

    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        let index: HashMap<&str, Vertex> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i as Vertex))
            .collect();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, EdgeNames(names)) in self.edges.iter().enumerate() {
            let mut e = [0; 3];
            for (slot, name) in e.iter_mut().zip(names) {
                *slot = *index.get(name.as_str()).ok_or_else(|| {
                    Error::InvalidHypergraph(format!("edge {i} names unknown vertex {name:?}"))
                })?;
            }
            edges.push(e);
        }
        Hypergraph::new(self.vertices.clone(), edges)
    }

    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        HypergraphFile {
            vertices: h.names().to_vec(),
            edges: h
                .edges()
                .iter()
                .map(|e| EdgeNames(e.map(|v| h.name(v).to_string())))
                .collect(),
            seed: None,
            generator: None,
        }
    }

    pub fn from_generated(g: &Generated, seed: u64, min_girth: u32, attempts: usize) -> Self {
        HypergraphFile {
            seed: Some(seed),
            generator: Some(GeneratorMeta {
                min_girth,
                attempts,
                attempts_used: g.attempts_used,
                exhausted: g.exhausted,
                girth: g.girth.to_string(),
                chromatic_number: g.chromatic_number,
            }),
            ..Self::from_hypergraph(&g.hypergraph)
        }
    }
}

impl Hypergraph {
    pub fn load_json(path: impl AsRef<Path>) -> Result<Hypergraph> {
        HypergraphFile::load(path)?.to_hypergraph()
    }

    pub fn parse_json(text: &str) -> Result<Hypergraph> {
        HypergraphFile::parse(text)?.to_hypergraph()
    }

    pub fn to_json(&self) -> String {
        HypergraphFile::from_hypergraph(self).to_json()
    }
}
