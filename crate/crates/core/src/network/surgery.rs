//! Graph surgery: contraction, exhaustion of infinite graphs by balls, and
//! series/parallel reduction.

use std::collections::{BTreeMap, HashSet, VecDeque};

use super::{Network, VertexId};
use crate::error::{Error, Result};

/// Result of [`contract_vertices`].
#[derive(Clone, Debug)]
pub struct Contracted {
    pub net: Network,
    /// The vertex standing for the whole contracted set.
    pub z: VertexId,
    /// Old vertex id to new vertex id; contracted vertices map to `z`.
    pub map: Vec<VertexId>,
}

/// Identifies every vertex of `set` with a single new vertex `z`.
///
/// Edges inside `set` become loops and are thrown away; edges from the
/// complement into `set` are merged per neighbour by summing conductances.
/// Surviving vertices keep their relative order and `z` is the last id.
pub fn contract_vertices(net: &Network, set: &[VertexId]) -> Result<Contracted> {
    if set.is_empty() {
        return Err(Error::EmptyContractionSet);
    }
    let n = net.vertex_count();
    let mut inside = vec![false; n];
    for &x in set {
        net.check_vertex(x)?;
        inside[x.0] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&x| !inside[x]).collect();
    if kept.is_empty() || !induced_connected(net, &inside, kept[0], kept.len()) {
        return Err(Error::ComplementDisconnected);
    }
    let z = kept.len();
    let mut map = vec![VertexId(z); n];
    for (new, &old) in kept.iter().enumerate() {
        map[old] = VertexId(new);
    }
    let edges = net.edges().iter().filter_map(|e| match (inside[e.u.0], inside[e.v.0]) {
        (true, true) => None,
        _ => Some((map[e.u.0].0, map[e.v.0].0, e.c)),
    });
    let mut contracted = Network::with_vertex_count(z + 1, edges)?;
    let mut labels: Vec<String> = kept.iter().map(|&x| net.label(VertexId(x)).to_owned()).collect();
    labels.push("z".to_owned());
    contracted.set_labels(labels);
    Ok(Contracted { net: contracted, z: VertexId(z), map })
}

// Whether the vertices with `excluded[x] == false` induce a connected graph.
fn induced_connected(net: &Network, excluded: &[bool], start: usize, expected: usize) -> bool {
    let mut seen = vec![false; net.vertex_count()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &(y, _) in net.neighbors(VertexId(x)) {
            if !excluded[y.0] && !seen[y.0] {
                seen[y.0] = true;
                count += 1;
                queue.push_back(y.0);
            }
        }
    }
    count == expected
}

/// The ball of radius `n` around the root of a locally finite graph.
#[derive(Clone, Debug, Default)]
pub struct Ball {
    pub vertex_count: usize,
    /// Edges with both endpoints in the ball.
    pub edges: Vec<(usize, usize, f64)>,
    /// Edges leaving the ball, as `(inner endpoint, conductance)`.
    pub boundary: Vec<(usize, f64)>,
    /// Graph distance to the root for every vertex of the ball.
    pub depth: Vec<usize>,
}

/// A locally finite infinite graph, presented through its balls around a
/// root (vertex `0`). Ids must be breadth-first so that the ball of radius
/// `n` is a prefix of the ball of radius `n + 1`.
pub trait Exhaustible {
    fn ball(&self, radius: usize) -> Ball;

    /// Spherical symmetry around the root, if the graph has it.
    fn radial(&self) -> Option<&dyn RadialSymmetry> {
        None
    }
}

/// Graphs whose Dirichlet problem between the root and infinity (or a
/// contracted exterior) has a solution constant on spheres.
pub trait RadialSymmetry {
    /// Total conductance between sphere `k` and sphere `k + 1`.
    fn shell_conductance(&self, k: usize) -> f64;
    fn depth_of(&self, x: VertexId) -> usize;
    fn weight_at_depth(&self, depth: usize) -> f64;

    /// Spheres `0..=radius` and the exterior `z` collapsed to a path: vertex
    /// `k` is sphere `k`, vertex `radius + 1` is `z`.
    fn quotient(&self, radius: usize) -> Network {
        let edges = (0..=radius).map(|k| (k, k + 1, self.shell_conductance(k)));
        Network::with_vertex_count(radius + 2, edges).expect("radial quotient is a path")
    }
}

/// Result of [`exhaustion`].
#[derive(Clone, Debug)]
pub struct Exhausted {
    pub net: Network,
    pub z: VertexId,
    pub depth: Vec<usize>,
}

/// `G^(n)`: the ball of radius `n` with everything outside it contracted to
/// a single vertex `z_n` (the last id).
pub fn exhaustion(gen: &dyn Exhaustible, n: usize) -> Result<Exhausted> {
    let ball = gen.ball(n);
    if ball.boundary.is_empty() {
        return Err(Error::InvalidRadius(n));
    }
    let z = ball.vertex_count;
    let edges = ball.edges.iter().copied().chain(ball.boundary.iter().map(|&(u, c)| (u, z, c)));
    let net = Network::with_vertex_count(z + 1, edges)?;
    let mut depth = ball.depth;
    depth.push(n + 1);
    Ok(Exhausted { net, z: VertexId(z), depth })
}

/// The half-line `0 - 1 - 2 - ...` with unit resistors; recurrent.
#[derive(Clone, Copy, Debug, Default)]
pub struct HalfLine;

impl Exhaustible for HalfLine {
    fn ball(&self, radius: usize) -> Ball {
        Ball {
            vertex_count: radius + 1,
            edges: (0..radius).map(|k| (k, k + 1, 1.0)).collect(),
            boundary: vec![(radius, 1.0)],
            depth: (0..=radius).collect(),
        }
    }

    fn radial(&self) -> Option<&dyn RadialSymmetry> {
        Some(self)
    }
}

impl RadialSymmetry for HalfLine {
    fn shell_conductance(&self, _k: usize) -> f64 {
        1.0
    }

    fn depth_of(&self, x: VertexId) -> usize {
        x.0
    }

    fn weight_at_depth(&self, depth: usize) -> f64 {
        if depth == 0 {
            1.0
        } else {
            2.0
        }
    }
}

/// Result of [`series_parallel_reduce`].
#[derive(Clone, Debug)]
pub struct Reduced {
    pub net: Network,
    /// Old id to new id for surviving vertices.
    pub map: Vec<Option<VertexId>>,
}

/// Applies parallel merges, series merges of degree-2 vertices outside
/// `keep`, and removal of dangling (degree-1) vertices outside `keep` until
/// none applies. Effective resistances between kept vertices are unchanged.
pub fn series_parallel_reduce(net: &Network, keep: &[VertexId]) -> Result<Reduced> {
    let n = net.vertex_count();
    let mut protected = vec![false; n];
    for &x in keep {
        net.check_vertex(x)?;
        protected[x.0] = true;
    }
    // parallel edges collapse on insertion
    let mut adj: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
    for e in net.edges() {
        *adj[e.u.0].entry(e.v.0).or_insert(0.0) += e.c;
        *adj[e.v.0].entry(e.u.0).or_insert(0.0) += e.c;
    }
    let mut alive = vec![true; n];
    let mut work: VecDeque<usize> = (0..n).filter(|&x| !protected[x]).collect();
    let mut queued: HashSet<usize> = work.iter().copied().collect();
    while let Some(x) = work.pop_front() {
        queued.remove(&x);
        if !alive[x] || protected[x] {
            continue;
        }
        let touched: Vec<usize> = match adj[x].len() {
            1 => {
                let (&y, _) = adj[x].iter().next().unwrap();
                adj[y].remove(&x);
                vec![y]
            }
            2 => {
                let mut it = adj[x].iter();
                let (&y, &cy) = it.next().unwrap();
                let (&w, &cw) = it.next().unwrap();
                let c = 1.0 / (1.0 / cy + 1.0 / cw);
                adj[y].remove(&x);
                adj[w].remove(&x);
                *adj[y].entry(w).or_insert(0.0) += c;
                *adj[w].entry(y).or_insert(0.0) += c;
                vec![y, w]
            }
            _ => continue,
        };
        adj[x].clear();
        alive[x] = false;
        for y in touched {
            if !protected[y] && alive[y] && queued.insert(y) {
                work.push_back(y);
            }
        }
    }
    let mut map = vec![None; n];
    let mut labels = Vec::new();
    for x in (0..n).filter(|&x| alive[x]) {
        map[x] = Some(VertexId(labels.len()));
        labels.push(net.label(VertexId(x)).to_owned());
    }
    let edges: Vec<(usize, usize, f64)> = (0..n)
        .filter(|&x| alive[x])
        .flat_map(|x| {
            let map = &map;
            adj[x]
                .iter()
                .filter(move |(&y, _)| x < y)
                .map(move |(&y, &c)| (map[x].unwrap().0, map[y].unwrap().0, c))
        })
        .collect();
    let mut reduced = Network::with_vertex_count(labels.len(), edges)?;
    reduced.set_labels(labels);
    Ok(Reduced { net: reduced, map })
}
