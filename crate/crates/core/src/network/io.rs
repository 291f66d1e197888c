use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Network, VertexId};
use crate::error::{Error, Result};

/// On-disk network: `{"vertices": n, "edges": [{"u":..,"v":..,"c":..}], "labels": {..}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub vertices: usize,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub c: f64,
}

impl NetworkFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network file serialises")
    }

    pub fn into_network(self) -> Result<Network> {
        let mut net =
            Network::with_vertex_count(self.vertices, self.edges.iter().map(|e| (e.u, e.v, e.c)))?;
        if let Some(map) = self.labels {
            let mut labels = net.labels().to_vec();
            for (key, label) in map {
                let id: usize = key
                    .parse()
                    .map_err(|_| Error::Format(format!("label key {key:?} is not a vertex id")))?;
                net.check_vertex(VertexId(id))?;
                labels[id] = label;
            }
            net.set_labels(labels);
        }
        Ok(net)
    }

    pub fn from_network(net: &Network) -> Self {
        let labels: BTreeMap<String, String> = net
            .labels()
            .iter()
            .enumerate()
            .filter(|(i, l)| **l != i.to_string())
            .map(|(i, l)| (i.to_string(), l.clone()))
            .collect();
        NetworkFile {
            vertices: net.vertex_count(),
            edges: net.edge_triples().map(|(u, v, c)| EdgeRecord { u, v, c }).collect(),
            labels: (!labels.is_empty()).then_some(labels),
        }
    }
}

impl Network {
    pub fn from_json(text: &str) -> Result<Self> {
        NetworkFile::from_json(text)?.into_network()
    }

    pub fn to_json(&self) -> String {
        NetworkFile::from_network(self).to_json()
    }
}
