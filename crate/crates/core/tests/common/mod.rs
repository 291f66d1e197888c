//! Test-side oracles and generators. Nothing here calls the library's
//! solvers.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use resistive_walks::{Network, VertexId};

/// A random connected graph on `2..=max_n` vertices: a random spanning tree
/// plus each remaining pair with probability `extra`, conductances drawn
/// uniformly from `[0.1, 10]`.
pub fn random_connected<R: Rng>(rng: &mut R, max_n: usize, extra: f64) -> Network {
    let n = rng.random_range(2..=max_n);
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        present.insert((u, v));
        edges.push((u, v, rng.random_range(0.1..=10.0)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.random_bool(extra) {
                edges.push((u, v, rng.random_range(0.1..=10.0)));
            }
        }
    }
    Network::with_vertex_count(n, edges).expect("spanning tree keeps it connected")
}

/// Every connected simple graph on exactly `n` labelled vertices with unit
/// conductances.
pub fn connected_graphs(n: usize) -> Vec<Network> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<_> =
            pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &(u, v))| (u, v, 1.0)).collect();
        if let Ok(net) = Network::with_vertex_count(n, edges) {
            out.push(net);
        }
    }
    out
}

/// Transition matrix built straight from the edge list.
pub fn transition_matrix(net: &Network) -> DMatrix<f64> {
    let n = net.vertex_count();
    let mut c = DMatrix::zeros(n, n);
    for e in net.edges() {
        c[(e.u.0, e.v.0)] += e.c;
        c[(e.v.0, e.u.0)] += e.c;
    }
    for x in 0..n {
        let pi: f64 = c.row(x).sum();
        c.row_mut(x).scale_mut(1.0 / pi);
    }
    c
}

/// `P_x(tau_a < tau_Z)` for every `x` by solving the absorbing chain
/// `(I - Q) h = r` with LU, where `Q` is `P` restricted to the transient
/// states and `r(x) = p(x, a)`.
pub fn absorbing_chain_hit(net: &Network, a: VertexId, z: &[VertexId]) -> Vec<f64> {
    let n = net.vertex_count();
    let p = transition_matrix(net);
    let absorbing = |x: usize| x == a.0 || z.iter().any(|y| y.0 == x);
    let free: Vec<usize> = (0..n).filter(|&x| !absorbing(x)).collect();
    let m = free.len();
    let mut out = vec![0.0; n];
    out[a.0] = 1.0;
    if m == 0 {
        return out;
    }
    let mut lhs = DMatrix::identity(m, m);
    let mut rhs = DVector::zeros(m);
    for (i, &x) in free.iter().enumerate() {
        for (j, &y) in free.iter().enumerate() {
            lhs[(i, j)] -= p[(x, y)];
        }
        rhs[i] = p[(x, a.0)];
    }
    let h = lhs.lu().solve(&rhs).expect("absorbing chain is nonsingular");
    for (i, &x) in free.iter().enumerate() {
        out[x] = h[i];
    }
    out
}

/// Expected visit counts `E_a[#{n < tau_Z : X_n = x}]` from the
/// fundamental matrix `(I - Q)^-1` of the chain killed on `Z`.
pub fn killed_green_row(net: &Network, a: VertexId, z: &[VertexId]) -> Vec<f64> {
    let n = net.vertex_count();
    let p = transition_matrix(net);
    let free: Vec<usize> = (0..n).filter(|x| !z.iter().any(|y| y.0 == *x)).collect();
    let m = free.len();
    let mut lhs = DMatrix::identity(m, m);
    for (i, &x) in free.iter().enumerate() {
        for (j, &y) in free.iter().enumerate() {
            lhs[(i, j)] -= p[(x, y)];
        }
    }
    let inv = lhs.try_inverse().expect("killed chain is transient");
    let row = free.iter().position(|&x| x == a.0).expect("a is not in Z");
    let mut out = vec![0.0; n];
    for (j, &y) in free.iter().enumerate() {
        out[y] = inv[(row, j)];
    }
    out
}

/// Effective resistance between `a` and the set `z` from the Laplacian
/// pseudo-solve with `z` grounded, by LU.
pub fn lu_resistance(net: &Network, a: VertexId, z: &[VertexId]) -> f64 {
    let n = net.vertex_count();
    let grounded = |x: usize| z.iter().any(|y| y.0 == x);
    let free: Vec<usize> = (0..n).filter(|&x| !grounded(x)).collect();
    let idx = |x: usize| free.iter().position(|&f| f == x);
    let m = free.len();
    let mut l = DMatrix::zeros(m, m);
    for e in net.edges() {
        let (u, v) = (idx(e.u.0), idx(e.v.0));
        if let Some(i) = u {
            l[(i, i)] += e.c;
        }
        if let Some(j) = v {
            l[(j, j)] += e.c;
        }
        if let (Some(i), Some(j)) = (u, v) {
            l[(i, j)] -= e.c;
            l[(j, i)] -= e.c;
        }
    }
    let mut rhs = DVector::zeros(m);
    rhs[idx(a.0).unwrap()] = 1.0;
    let phi = l.lu().solve(&rhs).expect("grounded Laplacian is nonsingular");
    phi[idx(a.0).unwrap()]
}
