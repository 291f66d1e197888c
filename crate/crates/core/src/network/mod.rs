//! Finite weighted graphs with symmetric positive conductances.
//!
//! A [`Network`] stores each undirected edge once; the edge is read in its
//! stored (forward) orientation `u -> v` or reversed. Vertex ids are dense
//! indices `0..V`. Parallel input edges are merged by summing conductances and
//! self-loops are dropped, so an edge index identifies an unordered vertex
//! pair unambiguously.

mod io;
mod markov;
mod surgery;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::NetworkFile;
pub use markov::MarkovView;
pub use surgery::{
    contract_vertices, exhaustion, series_parallel_reduce, Ball, Contracted, Exhausted,
    Exhaustible, HalfLine, RadialSymmetry, Reduced,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge with conductance `c`, stored with orientation `u -> v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub c: f64,
}

impl Edge {
    #[inline]
    pub fn resistance(&self) -> f64 {
        1.0 / self.c
    }

    /// The endpoint opposite to `x`.
    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }

    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Reverse => -1.0,
        }
    }
}

/// An edge read in one of its two orientations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub edge: usize,
    pub direction: Direction,
}

impl OrientedEdge {
    pub fn forward(edge: usize) -> Self {
        OrientedEdge { edge, direction: Direction::Forward }
    }

    pub fn reversed(self) -> Self {
        OrientedEdge { edge: self.edge, direction: self.direction.reversed() }
    }

    /// Tail `e-` of the oriented edge.
    pub fn tail(self, net: &Network) -> VertexId {
        let e = net.edge(self.edge);
        match self.direction {
            Direction::Forward => e.u,
            Direction::Reverse => e.v,
        }
    }

    /// Head `e+` of the oriented edge.
    pub fn head(self, net: &Network) -> VertexId {
        let e = net.edge(self.edge);
        match self.direction {
            Direction::Forward => e.v,
            Direction::Reverse => e.u,
        }
    }
}

/// A real function on vertices: voltages, harmonic functions, divergences.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexFunction(pub Vec<f64>);

impl VertexFunction {
    pub fn zeros(n: usize) -> Self {
        VertexFunction(vec![0.0; n])
    }

    pub fn constant(n: usize, value: f64) -> Self {
        VertexFunction(vec![value; n])
    }

    pub fn indicator(n: usize, x: VertexId) -> Self {
        let mut f = Self::zeros(n);
        f.0[x.0] = 1.0;
        f
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Plain sum `sum_x f(x) g(x)`.
    pub fn dot(&self, other: &VertexFunction) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl Index<VertexId> for VertexFunction {
    type Output = f64;
    fn index(&self, x: VertexId) -> &f64 {
        &self.0[x.0]
    }
}

impl IndexMut<VertexId> for VertexFunction {
    fn index_mut(&mut self, x: VertexId) -> &mut f64 {
        &mut self.0[x.0]
    }
}

/// An antisymmetric function on oriented edges, stored by its value on the
/// forward orientation of each edge. The reverse orientation reads the
/// negation, so `theta(reverse e) = -theta(e)` holds by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeFunction(pub Vec<f64>);

impl EdgeFunction {
    pub fn zeros(m: usize) -> Self {
        EdgeFunction(vec![0.0; m])
    }

    /// The unit flow `chi^e` along an oriented edge.
    pub fn unit(m: usize, e: OrientedEdge) -> Self {
        let mut f = Self::zeros(m);
        f.0[e.edge] = e.direction.sign();
        f
    }

    #[inline]
    pub fn at(&self, e: OrientedEdge) -> f64 {
        e.direction.sign() * self.0[e.edge]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, k: f64) -> Self {
        EdgeFunction(self.0.iter().map(|x| k * x).collect())
    }

    pub fn add(&self, other: &EdgeFunction) -> Self {
        EdgeFunction(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &EdgeFunction) -> Self {
        EdgeFunction(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Index<usize> for EdgeFunction {
    type Output = f64;
    fn index(&self, e: usize) -> &f64 {
        &self.0[e]
    }
}

impl IndexMut<usize> for EdgeFunction {
    fn index_mut(&mut self, e: usize) -> &mut f64 {
        &mut self.0[e]
    }
}

/// A connected finite network. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Network {
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    // (neighbour, edge index), grouped by vertex through `offsets`
    adjacency: Vec<(VertexId, usize)>,
    weights: Vec<f64>,
    labels: Vec<String>,
}

impl Network {
    /// Builds a network from `(u, v, c)` triples with arbitrary integer ids.
    ///
    /// Ids are remapped to `0..V` in increasing order of the original id; the
    /// original ids are kept as labels. Identity for already dense input.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let raw: Vec<_> = edges.into_iter().collect();
        let mut ids: Vec<usize> = raw.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let dense: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let labels = ids.iter().map(|id| id.to_string()).collect();
        let remapped = raw.into_iter().map(|(u, v, c)| (dense[&u], dense[&v], c));
        Self::assemble(ids.len(), remapped, Some(labels))
    }

    /// Builds a network on exactly `vertex_count` vertices; ids must already
    /// be dense.
    pub fn with_vertex_count<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::assemble(vertex_count, edges, None)
    }

    fn assemble<I>(n: usize, edges: I, labels: Option<Vec<String>>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut merged: Vec<Edge> = Vec::new();
        let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
        for (u, v, c) in edges {
            if !c.is_finite() || c <= 0.0 {
                return Err(Error::NonpositiveConductance { u, v, c });
            }
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex(x));
                }
            }
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            match slot.get(&key) {
                Some(&i) => merged[i].c += c,
                None => {
                    slot.insert(key, merged.len());
                    merged.push(Edge { u: VertexId(u), v: VertexId(v), c });
                }
            }
        }
        if merged.is_empty() {
            return Err(Error::EmptyInput);
        }
        let net = Self::from_merged(n, merged, labels);
        let components = net.component_count();
        if components != 1 {
            return Err(Error::DisconnectedGraph { components });
        }
        Ok(net)
    }

    /// Internal constructor: `edges` already canonical (no loops, no
    /// duplicates, positive conductances). Connectivity is not checked.
    pub(crate) fn from_merged(n: usize, edges: Vec<Edge>, labels: Option<Vec<String>>) -> Self {
        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            degree[e.u.0 + 1] += 1;
            degree[e.v.0 + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut adjacency = vec![(VertexId(0), 0usize); 2 * edges.len()];
        let mut weights = vec![0.0; n];
        for (i, e) in edges.iter().enumerate() {
            adjacency[fill[e.u.0]] = (e.v, i);
            fill[e.u.0] += 1;
            adjacency[fill[e.v.0]] = (e.u, i);
            fill[e.v.0] += 1;
            weights[e.u.0] += e.c;
            weights[e.v.0] += e.c;
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        Network { edges, offsets, adjacency, weights, labels }
    }

    fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in self.neighbors(VertexId(x)) {
                    if !seen[y.0] {
                        seen[y.0] = true;
                        queue.push_back(y.0);
                    }
                }
            }
        }
        components
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(VertexId)
    }

    /// `(neighbour, edge index)` pairs of `x`.
    #[inline]
    pub fn neighbors(&self, x: VertexId) -> &[(VertexId, usize)] {
        &self.adjacency[self.offsets[x.0]..self.offsets[x.0 + 1]]
    }

    /// Position of the first adjacency entry of `x`; entries of `x` occupy
    /// `adjacency_offset(x)..adjacency_offset(x) + degree(x)`.
    #[inline]
    pub fn adjacency_offset(&self, x: VertexId) -> usize {
        self.offsets[x.0]
    }

    /// Number of adjacency entries, i.e. oriented edges.
    pub fn adjacency_len(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn adjacency_entry(&self, pos: usize) -> (VertexId, usize) {
        self.adjacency[pos]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.offsets[x.0 + 1] - self.offsets[x.0]
    }

    pub fn contains(&self, x: VertexId) -> bool {
        x.0 < self.vertex_count()
    }

    pub fn check_vertex(&self, x: VertexId) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::InvalidVertex(x.0))
        }
    }

    /// The reversibility weight `pi(x)`: total conductance at `x`.
    pub fn vertex_weight(&self, x: VertexId) -> Result<f64> {
        self.check_vertex(x)?;
        Ok(self.weights[x.0])
    }

    #[inline]
    pub(crate) fn weight(&self, x: VertexId) -> f64 {
        self.weights[x.0]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Index of the edge joining `x` and `y`, with the orientation `x -> y`.
    pub fn find_edge(&self, x: VertexId, y: VertexId) -> Option<OrientedEdge> {
        self.neighbors(x).iter().find(|(n, _)| *n == y).map(|&(_, i)| {
            let direction = if self.edges[i].u == x { Direction::Forward } else { Direction::Reverse };
            OrientedEdge { edge: i, direction }
        })
    }

    pub fn conductance(&self, x: VertexId, y: VertexId) -> f64 {
        self.find_edge(x, y).map_or(0.0, |e| self.edges[e.edge].c)
    }

    pub fn total_conductance(&self) -> f64 {
        self.edges.iter().map(|e| e.c).sum()
    }

    pub fn label(&self, x: VertexId) -> &str {
        &self.labels[x.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn set_labels(&mut self, labels: Vec<String>) {
        debug_assert_eq!(labels.len(), self.vertex_count());
        self.labels = labels;
    }

    /// All edges as `(u, v, c)` triples, in edge order.
    pub fn edge_triples(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|e| (e.u.0, e.v.0, e.c))
    }

    pub fn markov_view(&self) -> MarkovView {
        MarkovView::new(self)
    }
}
