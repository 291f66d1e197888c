//! Homogeneous trees of degree `q + 1` with unit conductances.
//!
//! Vertices are numbered breadth-first: the root is `0`, its `q + 1`
//! children are `1..=q+1`, and the children of each later vertex follow in
//! parent order, `q` per parent. With that numbering every sphere is a
//! contiguous id range and balls are prefixes, which the closed forms and
//! the radial quotient rely on.
//!
//! Two truncations appear:
//!
//! * [`build_tree`] keeps levels `0..=n`; with `contract_boundary` the level
//!   `n + 1` exterior becomes a single vertex `z`. This is the exhaustion
//!   `G^(n)` (ball of radius `n`).
//! * [`contracted_tree`] is `T^(n)`: levels `0..n` kept and every vertex of
//!   level `>= n` concentrated in `z_n`, so `R(0 <-> z_n)` has `n` series
//!   terms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Ball, Edge, Exhaustible, Network, RadialSymmetry, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub q: usize,
    pub levels: usize,
    pub contract_boundary: bool,
}

impl TreeSpec {
    pub fn new(q: usize, levels: usize) -> Self {
        TreeSpec { q, levels, contract_boundary: false }
    }

    pub fn contracted(q: usize, levels: usize) -> Self {
        TreeSpec { q, levels, contract_boundary: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::InvalidSpec(format!("q must be >= 2, got {}", self.q)));
        }
        // ids must fit comfortably; 2^28 vertices is far beyond any solve we run
        if level_start(self.q, self.levels + 1).is_none_or(|n| n > (1 << 28)) {
            return Err(Error::InvalidSpec(format!("tree q={} n={} is too large", self.q, self.levels)));
        }
        Ok(())
    }

    /// Vertex count of the uncontracted tree, `1 + (q+1)(q^n - 1)/(q - 1)`.
    pub fn vertex_count(&self) -> usize {
        level_start(self.q, self.levels + 1).expect("validated spec")
    }
}

/// BFS id of the first vertex at depth `d` of the `q`-ary tree (the same
/// numbering in trees built here and in balls of [`HomogeneousTree`]).
pub fn first_vertex_at_depth(q: usize, d: usize) -> Option<VertexId> {
    level_start(q, d).map(VertexId)
}

/// Shell depth for Monte Carlo on trees: 20 for `q = 2`, 12 for `q = 3`,
/// otherwise the smallest `L` with `q^-L <= 1e-6`.
pub fn default_shell_depth(q: usize) -> usize {
    match q {
        0..=2 => 20,
        3 => 12,
        _ => {
            let mut l = 1;
            while (q as f64).powi(-(l as i32)) > 1e-6 {
                l += 1;
            }
            l
        }
    }
}

/// First BFS id of level `k`, or `None` on overflow.
fn level_start(q: usize, k: usize) -> Option<usize> {
    if k == 0 {
        return Some(0);
    }
    // 1 + (q+1)(1 + q + ... + q^{k-2})
    let mut total: usize = 1;
    let mut width: usize = q + 1;
    for _ in 1..k {
        total = total.checked_add(width)?;
        width = width.checked_mul(q)?;
    }
    Some(total)
}

fn level_width(q: usize, k: usize) -> usize {
    if k == 0 {
        1
    } else {
        (q + 1) * q.pow(k as u32 - 1)
    }
}

fn depth_in(q: usize, x: usize) -> usize {
    let mut k = 0;
    while level_start(q, k + 1).is_some_and(|s| s <= x) {
        k += 1;
    }
    k
}

fn tree_edges(q: usize, levels: usize) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(level_start(q, levels + 1).unwrap_or(1));
    for k in 0..levels {
        let (start, next) = (level_start(q, k).unwrap(), level_start(q, k + 1).unwrap());
        let fan = if k == 0 { q + 1 } else { q };
        for j in 0..level_width(q, k) {
            for t in 0..fan {
                edges.push(Edge { u: VertexId(start + j), v: VertexId(next + j * fan + t), c: 1.0 });
            }
        }
    }
    edges
}

/// A truncated homogeneous tree as a network, with its level structure.
#[derive(Clone, Debug)]
pub struct TreeNetwork {
    pub net: Network,
    pub spec: TreeSpec,
    /// Distance to the root; `z` (if any) gets `levels + 1`.
    pub depth: Vec<usize>,
    pub parent: Vec<Option<VertexId>>,
    pub z: Option<VertexId>,
}

pub fn build_tree(spec: TreeSpec) -> Result<TreeNetwork> {
    spec.validate()?;
    let (q, n) = (spec.q, spec.levels);
    let count = spec.vertex_count();
    let mut edges = tree_edges(q, n);
    if !spec.contract_boundary && edges.is_empty() {
        return Err(Error::InvalidSpec("a single vertex is not a network".into()));
    }
    let mut depth: Vec<usize> = (0..=n).flat_map(|k| std::iter::repeat_n(k, level_width(q, k))).collect();
    let mut parent = vec![None; count];
    for e in &edges {
        parent[e.v.0] = Some(e.u);
    }
    let z = spec.contract_boundary.then(|| {
        // the q (q + 1 at the root) outward edges of each level-n vertex merge into one
        let fan = if n == 0 { q + 1 } else { q };
        let start = level_start(q, n).unwrap();
        for j in 0..level_width(q, n) {
            edges.push(Edge { u: VertexId(start + j), v: VertexId(count), c: fan as f64 });
        }
        depth.push(n + 1);
        parent.push(None);
        VertexId(count)
    });
    let total = count + usize::from(z.is_some());
    let mut labels: Vec<String> = (0..count).map(|i| i.to_string()).collect();
    if z.is_some() {
        labels.push("z".into());
    }
    let net = Network::from_merged(total, edges, Some(labels));
    Ok(TreeNetwork { net, spec, depth, parent, z })
}

/// `T^(n)`: levels `0..n` plus `z_n` standing for all levels `>= n`.
pub fn contracted_tree(q: usize, n: usize) -> Result<TreeNetwork> {
    if n == 0 {
        return Err(Error::InvalidSpec("T^(n) needs n >= 1".into()));
    }
    build_tree(TreeSpec::contracted(q, n - 1))
}

impl TreeNetwork {
    pub fn q(&self) -> usize {
        self.spec.q
    }

    pub fn root(&self) -> VertexId {
        VertexId(0)
    }

    /// Vertices of level `k`, as a contiguous id range.
    pub fn level(&self, k: usize) -> Vec<VertexId> {
        if k > self.spec.levels {
            return Vec::new();
        }
        let start = level_start(self.q(), k).unwrap();
        (start..start + level_width(self.q(), k)).map(VertexId).collect()
    }

    pub fn first_at_depth(&self, k: usize) -> Option<VertexId> {
        (k <= self.spec.levels).then(|| VertexId(level_start(self.q(), k).unwrap()))
    }

    pub fn children(&self, x: VertexId) -> Vec<VertexId> {
        let d = self.depth[x.0];
        if Some(x) == self.z || d >= self.spec.levels {
            return Vec::new();
        }
        let fan = if d == 0 { self.q() + 1 } else { self.q() };
        let j = x.0 - level_start(self.q(), d).unwrap();
        let next = level_start(self.q(), d + 1).unwrap();
        (0..fan).map(|t| VertexId(next + j * fan + t)).collect()
    }

    pub fn is_leaf(&self, x: VertexId) -> bool {
        Some(x) != self.z && self.depth[x.0] == self.spec.levels
    }

    /// Ancestors of `x` from `x` itself up to the root.
    pub fn path_to_root(&self, x: VertexId) -> Vec<VertexId> {
        let mut path = vec![x];
        let mut cur = x;
        while let Some(p) = self.parent[cur.0] {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Geodesic distance in the uncontracted tree.
    pub fn distance(&self, a: VertexId, x: VertexId) -> usize {
        let (pa, px) = (self.path_to_root(a), self.path_to_root(x));
        // common suffix is the shared ancestry
        let shared = pa.iter().rev().zip(px.iter().rev()).take_while(|(u, v)| u == v).count();
        pa.len() + px.len() - 2 * shared
    }

    /// Every vertex of the subtree hanging from `x` (inclusive).
    pub fn subtree(&self, x: VertexId) -> Vec<VertexId> {
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            let kids = self.children(out[i]);
            out.extend(kids);
            i += 1;
        }
        out
    }
}

/// `R(a <-> x)` on an uncontracted finite tree: the geodesic distance. No
/// current flows off the geodesic, so only its unit resistors count.
pub fn finite_tree_pair_resistance(tree: &TreeNetwork, a: VertexId, x: VertexId) -> Result<f64> {
    if tree.z.is_some() {
        return Err(Error::InvalidSpec("pair resistance needs an uncontracted tree".into()));
    }
    tree.net.check_vertex(a)?;
    tree.net.check_vertex(x)?;
    if a == x {
        return Err(Error::SameVertex);
    }
    Ok(tree.distance(a, x) as f64)
}

/// The infinite homogeneous tree as an exhaustible, spherically symmetric
/// graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomogeneousTree {
    pub q: usize,
}

impl HomogeneousTree {
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidQ(q));
        }
        Ok(HomogeneousTree { q })
    }
}

impl Exhaustible for HomogeneousTree {
    fn ball(&self, radius: usize) -> Ball {
        let q = self.q;
        let edges = tree_edges(q, radius).into_iter().map(|e| (e.u.0, e.v.0, e.c)).collect();
        let fan = if radius == 0 { q + 1 } else { q };
        let start = level_start(q, radius).unwrap();
        Ball {
            vertex_count: level_start(q, radius + 1).unwrap(),
            edges,
            boundary: (start..start + level_width(q, radius)).map(|x| (x, fan as f64)).collect(),
            depth: (0..=radius).flat_map(|k| std::iter::repeat_n(k, level_width(q, k))).collect(),
        }
    }

    fn radial(&self) -> Option<&dyn RadialSymmetry> {
        Some(self)
    }
}

impl RadialSymmetry for HomogeneousTree {
    fn shell_conductance(&self, k: usize) -> f64 {
        (self.q + 1) as f64 * (self.q as f64).powi(k as i32)
    }

    fn depth_of(&self, x: VertexId) -> usize {
        depth_in(self.q, x.0)
    }

    fn weight_at_depth(&self, _depth: usize) -> f64 {
        (self.q + 1) as f64
    }
}

fn check_q(q: usize) -> Result<f64> {
    if q < 2 {
        Err(Error::InvalidQ(q))
    } else {
        Ok(q as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

/// Closed form of `R(0 <-> z_n)`: `(1/(q+1)) (1 - q^-n) / (1 - 1/q)`, and
/// `q / (q^2 - 1)` to infinity.
pub fn oracle_resistance(q: usize, depth: Depth) -> Result<f64> {
    let qf = check_q(q)?;
    match depth {
        Depth::Finite(0) => Err(Error::InvalidSpec("R(0 <-> z_n) needs n >= 1".into())),
        Depth::Finite(n) => Ok((1.0 - qf.powi(-(n as i32))) / ((qf + 1.0) * (1.0 - 1.0 / qf))),
        Depth::Infinite => Ok(qf / (qf * qf - 1.0)),
    }
}

/// Limit voltage and downward current at depth `|x|` for the unit current
/// from the root to infinity: `v = (q/(q^2-1)) q^-|x|`,
/// `i(x -> child) = (1/(q+1)) q^-|x|`. Towards the parent the current is the
/// negation of the parent's downward value.
pub fn oracle_potential_current(q: usize, depth: usize) -> Result<(f64, f64)> {
    let qf = check_q(q)?;
    let scale = qf.powi(-(depth as i32));
    Ok((qf / (qf * qf - 1.0) * scale, scale / (qf + 1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenHitting {
    /// `G(a, x) = (q/(q-1)) q^-d`
    pub green: f64,
    /// `P_x(tau_a < infinity) = q^-d`
    pub hitting: f64,
    /// `E_a[S_xy] = (q/(q^2-1)) q^-d` for any neighbour `y` of `x`
    pub transitions: f64,
}

pub fn oracle_green_hitting(q: usize, distance: usize) -> Result<GreenHitting> {
    let qf = check_q(q)?;
    let scale = qf.powi(-(distance as i32));
    Ok(GreenHitting {
        green: qf / (qf - 1.0) * scale,
        hitting: scale,
        transitions: qf / (qf * qf - 1.0) * scale,
    })
}

/// Escape-probability configurations on finite trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EscapeCase {
    /// `a` the root, `Z` the level-`n` set of an `n`-level tree.
    A,
    /// `n` levels, `a` a leaf, `Z` the root plus every branch not holding `a`.
    B,
    /// More than `n` levels, `a` at level `n`, `Z` as in `B`.
    C,
    /// `a` a leaf, `Z = {x}` at distance `dist`.
    D,
    /// `a` an interior vertex, `Z = {x}` at distance `dist`.
    E,
}

impl std::str::FromStr for EscapeCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(EscapeCase::A),
            "b" => Ok(EscapeCase::B),
            "c" => Ok(EscapeCase::C),
            "d" => Ok(EscapeCase::D),
            "e" => Ok(EscapeCase::E),
            other => Err(Error::InvalidCase(format!("unknown case {other:?}"))),
        }
    }
}

/// Closed-form `P[a -> Z]` for each [`EscapeCase`]. `n` is used by cases
/// A–C, `dist` by D and E.
pub fn oracle_finite_escape(case: EscapeCase, q: usize, n: usize, dist: usize) -> Result<f64> {
    let qf = check_q(q)?;
    let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(Error::InvalidCase(what.to_owned())) };
    match case {
        EscapeCase::A => {
            need(n >= 1, "case a needs n >= 1")?;
            Ok(qf.powi(n as i32 - 1) * (qf - 1.0) / (qf.powi(n as i32) - 1.0))
        }
        EscapeCase::B => {
            need(n >= 1, "case b needs n >= 1")?;
            Ok(1.0 / n as f64)
        }
        EscapeCase::C => {
            need(n >= 1, "case c needs n >= 1")?;
            Ok(1.0 / (n as f64 * (qf + 1.0)))
        }
        EscapeCase::D => {
            need(dist >= 1, "case d needs dist >= 1")?;
            Ok(1.0 / dist as f64)
        }
        EscapeCase::E => {
            need(dist >= 1, "case e needs dist >= 1")?;
            Ok(1.0 / (dist as f64 * (qf + 1.0)))
        }
    }
}

/// `R(0 <-> z_n)` by collapsing the tree level by level: the `(q+1) q^k`
/// unit resistors between levels `k` and `k + 1` are in parallel, and the
/// resulting shells are in series.
pub fn ladder_resistance(q: usize, n: usize) -> Result<f64> {
    let qf = check_q(q)?;
    if n == 0 {
        return Err(Error::InvalidSpec("ladder needs n >= 1".into()));
    }
    let mut r = 0.0;
    for k in (0..n).rev() {
        let shell = (qf + 1.0) * qf.powi(k as i32);
        r += 1.0 / shell;
    }
    Ok(r)
}

/// A concrete network, source and target set for an [`EscapeCase`].
#[derive(Clone, Debug)]
pub struct EscapeInstance {
    pub tree: TreeNetwork,
    pub a: VertexId,
    pub z: Vec<VertexId>,
}

/// Builds the standard instance of each case: A on an `n`-level tree;
/// B on `n` levels with `a` the first leaf; C on `n + 3` levels with `a` the
/// first level-`n` vertex; D with `a` the first leaf of a `dist + 1`-level
/// tree and `x` its ancestor at distance `dist`; E with `a` the first
/// level-1 vertex of a `dist + 2`-level tree and `x` its first descendant at
/// distance `dist`.
pub fn escape_instance(case: EscapeCase, q: usize, n: usize, dist: usize) -> Result<EscapeInstance> {
    oracle_finite_escape(case, q, n, dist)?;
    let rest_of_tree = |tree: &TreeNetwork, a: VertexId| {
        let path = tree.path_to_root(a);
        let branch = path[path.len() - 2];
        let own: std::collections::HashSet<VertexId> = tree.subtree(branch).into_iter().collect();
        tree.net.vertices().filter(|x| !own.contains(x)).collect::<Vec<_>>()
    };
    match case {
        EscapeCase::A => {
            let tree = build_tree(TreeSpec::new(q, n))?;
            let z = tree.level(n);
            Ok(EscapeInstance { tree, a: VertexId(0), z })
        }
        EscapeCase::B | EscapeCase::C => {
            let levels = if case == EscapeCase::B { n } else { n + 3 };
            let tree = build_tree(TreeSpec::new(q, levels))?;
            let a = tree.first_at_depth(n).unwrap();
            let z = rest_of_tree(&tree, a);
            Ok(EscapeInstance { tree, a, z })
        }
        EscapeCase::D => {
            let tree = build_tree(TreeSpec::new(q, dist + 1))?;
            let a = tree.first_at_depth(dist + 1).unwrap();
            let x = tree.path_to_root(a)[dist];
            Ok(EscapeInstance { tree, a, z: vec![x] })
        }
        EscapeCase::E => {
            let tree = build_tree(TreeSpec::new(q, dist + 2))?;
            let a = tree.first_at_depth(1).unwrap();
            let mut x = a;
            for _ in 0..dist {
                x = tree.children(x)[0];
            }
            Ok(EscapeInstance { tree, a, z: vec![x] })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vertex_counts_and_degrees() {
        let t = build_tree(TreeSpec::new(2, 1)).unwrap();
        assert_eq!(t.net.vertex_count(), 4);
        assert_eq!(t.net.degree(VertexId(0)), 3);
        let t = build_tree(TreeSpec::new(2, 2)).unwrap();
        assert_eq!(t.net.vertex_count(), 10);
        assert_eq!(t.level(2).len(), 6);
        for x in t.level(1) {
            assert_eq!(t.net.vertex_weight(x).unwrap(), 3.0);
        }
        for x in t.level(2) {
            assert_eq!(t.net.vertex_weight(x).unwrap(), 1.0);
            assert!(t.is_leaf(x));
        }
    }

    #[test]
    fn contracted_root_only() {
        let t = build_tree(TreeSpec::contracted(3, 0)).unwrap();
        assert_eq!(t.net.vertex_count(), 2);
        assert_eq!(t.net.edge(0).c, 4.0);
        assert_eq!(t.z, Some(VertexId(1)));
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(build_tree(TreeSpec::new(1, 3)), Err(Error::InvalidSpec(_))));
        assert!(matches!(build_tree(TreeSpec::new(2, 0)), Err(Error::InvalidSpec(_))));
        assert!(matches!(build_tree(TreeSpec::new(2, 40)), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn depth_and_parents_are_consistent() {
        let t = build_tree(TreeSpec::new(3, 3)).unwrap();
        for x in t.net.vertices().skip(1) {
            let p = t.parent[x.0].unwrap();
            assert_eq!(t.depth[x.0], t.depth[p.0] + 1);
            assert_eq!(HomogeneousTree { q: 3 }.depth_of(x), t.depth[x.0]);
        }
        assert_eq!(t.distance(VertexId(0), t.first_at_depth(3).unwrap()), 3);
    }

    #[test]
    fn resistance_oracle_values() {
        assert_relative_eq!(oracle_resistance(2, Depth::Infinite).unwrap(), 2.0 / 3.0);
        assert_relative_eq!(oracle_resistance(2, Depth::Finite(2)).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(oracle_resistance(3, Depth::Infinite).unwrap(), 3.0 / 8.0);
        assert_eq!(oracle_resistance(1, Depth::Infinite), Err(Error::InvalidQ(1)));
    }

    #[test]
    fn potential_current_oracle_values() {
        let (v, i) = oracle_potential_current(2, 0).unwrap();
        assert_relative_eq!(v, 2.0 / 3.0);
        assert_relative_eq!(i, 1.0 / 3.0);
        let (v, i) = oracle_potential_current(2, 1).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0);
        assert_relative_eq!(i, 1.0 / 6.0);
        let (v, i) = oracle_potential_current(3, 2).unwrap();
        assert_relative_eq!(v, 1.0 / 24.0);
        assert_relative_eq!(i, 1.0 / 36.0);
    }

    #[test]
    fn green_hitting_oracle_values() {
        let g = oracle_green_hitting(2, 0).unwrap();
        assert_relative_eq!(g.green, 2.0);
        assert_relative_eq!(g.hitting, 1.0);
        assert_relative_eq!(g.transitions, 2.0 / 3.0);
        let g = oracle_green_hitting(2, 2).unwrap();
        assert_relative_eq!(g.green, 0.5);
        assert_relative_eq!(g.hitting, 0.25);
        assert_relative_eq!(g.transitions, 1.0 / 6.0);
        let g = oracle_green_hitting(3, 1).unwrap();
        assert_relative_eq!(g.green, 0.5);
        assert_relative_eq!(g.hitting, 1.0 / 3.0);
        assert_relative_eq!(g.transitions, 1.0 / 8.0);
    }

    #[test]
    fn escape_oracle_values() {
        assert_relative_eq!(oracle_finite_escape(EscapeCase::A, 2, 2, 0).unwrap(), 2.0 / 3.0);
        assert_relative_eq!(oracle_finite_escape(EscapeCase::B, 2, 4, 0).unwrap(), 0.25);
        assert_relative_eq!(oracle_finite_escape(EscapeCase::E, 2, 0, 3).unwrap(), 1.0 / 9.0);
        assert!(matches!(oracle_finite_escape(EscapeCase::D, 2, 3, 0), Err(Error::InvalidCase(_))));
        assert!("f".parse::<EscapeCase>().is_err());
    }

    #[test]
    fn ladder_values() {
        assert_relative_eq!(ladder_resistance(2, 1).unwrap(), 1.0 / 3.0);
        assert_relative_eq!(ladder_resistance(2, 3).unwrap(), 7.0 / 12.0, epsilon = 1e-15);
        assert_relative_eq!(ladder_resistance(5, 2).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn pair_resistance_is_distance() {
        let t = build_tree(TreeSpec::new(2, 3)).unwrap();
        let leaf = t.first_at_depth(3).unwrap();
        let sibling = VertexId(leaf.0 + 1);
        assert_eq!(finite_tree_pair_resistance(&t, VertexId(0), VertexId(1)).unwrap(), 1.0);
        assert_eq!(finite_tree_pair_resistance(&t, leaf, VertexId(0)).unwrap(), 3.0);
        assert_eq!(finite_tree_pair_resistance(&t, leaf, sibling).unwrap(), 2.0);
        assert_eq!(finite_tree_pair_resistance(&t, leaf, leaf), Err(Error::SameVertex));
    }

    #[test]
    fn escape_instances_have_expected_shape() {
        let inst = escape_instance(EscapeCase::B, 2, 3, 0).unwrap();
        assert!(inst.tree.is_leaf(inst.a));
        assert!(inst.z.contains(&VertexId(0)));
        // two of the three level-1 branches, 7 vertices each, plus the root
        assert_eq!(inst.z.len(), 15);
        let inst = escape_instance(EscapeCase::D, 2, 0, 3).unwrap();
        assert_eq!(inst.tree.distance(inst.a, inst.z[0]), 3);
        let inst = escape_instance(EscapeCase::E, 3, 0, 2).unwrap();
        assert!(!inst.tree.is_leaf(inst.a));
        assert_eq!(inst.tree.distance(inst.a, inst.z[0]), 2);
    }
}
