//! Discrete calculus on networks.
//!
//! For a vertex function `F` and an antisymmetric edge function `theta`:
//!
//! * `dF(e) = F(e-) - F(e+)`
//! * `d*theta(x) = sum_{e- = x} theta(e)` (net outflow at `x`)
//!
//! Inner products on edge functions sum over oriented edges with a factor
//! one half, which equals a single sum over undirected edges:
//! `(theta, eta)_r = sum_e theta(e) eta(e) r(e)`. The unweighted pairing
//! `(theta, dF)` used for adjointness is the same sum without `r`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::{solve_poisson, BoundarySpec, SolveOptions};
use crate::network::{Direction, EdgeFunction, Network, OrientedEdge, VertexFunction, VertexId};

const PROJECTION_TOL: f64 = 1e-13;

pub fn apply_d(net: &Network, f: &VertexFunction) -> EdgeFunction {
    EdgeFunction(net.edges().iter().map(|e| f[e.u] - f[e.v]).collect())
}

pub fn apply_d_star(net: &Network, theta: &EdgeFunction) -> VertexFunction {
    let mut out = VertexFunction::zeros(net.vertex_count());
    for (e, t) in net.edges().iter().zip(theta.values()) {
        out[e.u] += t;
        out[e.v] -= t;
    }
    out
}

/// `(theta, eta)_r`.
pub fn inner_r(net: &Network, theta: &EdgeFunction, eta: &EdgeFunction) -> f64 {
    net.edges()
        .iter()
        .zip(theta.values().iter().zip(eta.values()))
        .map(|(e, (a, b))| a * b / e.c)
        .sum()
}

/// Unweighted pairing `(theta, eta) = sum_e theta(e) eta(e)`.
pub fn inner(theta: &EdgeFunction, eta: &EdgeFunction) -> f64 {
    theta.values().iter().zip(eta.values()).map(|(a, b)| a * b).sum()
}

/// `epsilon(theta) = (theta, theta)_r`.
pub fn energy(net: &Network, theta: &EdgeFunction) -> f64 {
    inner_r(net, theta, theta)
}

pub fn strength(net: &Network, theta: &EdgeFunction, sources: &[VertexId]) -> f64 {
    let div = apply_d_star(net, theta);
    sources.iter().map(|&a| div[a]).sum()
}

/// `|(theta, dF) - (d*theta, F)|`.
pub fn adjointness_residual(net: &Network, theta: &EdgeFunction, f: &VertexFunction) -> f64 {
    (inner(theta, &apply_d(net, f)) - apply_d_star(net, theta).dot(f)).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expected {
    Positive,
    Negative,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: VertexId,
    pub divergence: f64,
    pub expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowReport {
    pub is_flow: bool,
    pub violations: Vec<Violation>,
}

/// Checks that `theta` is a flow from `A` to `Z`: `d*theta > 0` on `A`,
/// `< 0` on `Z` and `= 0` (within `zero_tol`) everywhere else.
pub fn validate_flow(
    net: &Network,
    theta: &EdgeFunction,
    sources: &[VertexId],
    sinks: &[VertexId],
    zero_tol: f64,
) -> Result<FlowReport> {
    let a: BTreeSet<VertexId> = sources.iter().copied().collect();
    let z: BTreeSet<VertexId> = sinks.iter().copied().collect();
    for &x in a.iter().chain(&z) {
        net.check_vertex(x)?;
    }
    if let Some(&x) = a.intersection(&z).next() {
        return Err(Error::OverlappingSets(x));
    }
    let div = apply_d_star(net, theta);
    let mut violations = Vec::new();
    for x in net.vertices() {
        let d = div[x];
        let (ok, expected) = if a.contains(&x) {
            (d > 0.0, Expected::Positive)
        } else if z.contains(&x) {
            (d < 0.0, Expected::Negative)
        } else {
            (d.abs() <= zero_tol, Expected::Zero)
        };
        if !ok {
            violations.push(Violation { vertex: x, divergence: d, expected });
        }
    }
    Ok(FlowReport { is_flow: violations.is_empty(), violations })
}

/// Fundamental cycles of a breadth-first spanning tree rooted at vertex 0.
/// Each non-tree edge `u -> v` closes the cycle `u -> v ~> u` through the
/// tree; there are `E - V + 1` of them.
pub fn cycle_basis(net: &Network) -> Vec<Vec<OrientedEdge>> {
    let n = net.vertex_count();
    // parent edge oriented from the parent towards the child
    let mut parent: Vec<Option<OrientedEdge>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut in_tree = vec![false; net.edge_count()];
    depth[0] = 0;
    let mut queue = VecDeque::from([VertexId(0)]);
    while let Some(x) = queue.pop_front() {
        for &(y, e) in net.neighbors(x) {
            if depth[y.0] == usize::MAX {
                depth[y.0] = depth[x.0] + 1;
                in_tree[e] = true;
                parent[y.0] = net.find_edge(x, y);
                queue.push_back(y);
            }
        }
    }
    let climb = |x: VertexId| {
        let e = parent[x.0].expect("non-root vertex has a parent");
        (e, e.tail(net))
    };
    let mut cycles = Vec::new();
    for (i, edge) in net.edges().iter().enumerate().filter(|(i, _)| !in_tree[*i]) {
        // walk both endpoints up to their common ancestor
        let (mut u, mut v) = (edge.u, edge.v);
        let mut from_v = Vec::new(); // v upwards: traversed child -> parent
        let mut from_u = Vec::new(); // u upwards: later traversed parent -> child
        while u != v {
            if depth[u.0] >= depth[v.0] {
                let (e, p) = climb(u);
                from_u.push(e);
                u = p;
            } else {
                let (e, p) = climb(v);
                from_v.push(e.reversed());
                v = p;
            }
        }
        let mut cycle = vec![OrientedEdge { edge: i, direction: Direction::Forward }];
        cycle.extend(from_v);
        cycle.extend(from_u.into_iter().rev());
        cycles.push(cycle);
    }
    cycles
}

/// The edge function `sum_j chi^{e_j}` of an oriented cycle.
pub fn cycle_flow(net: &Network, cycle: &[OrientedEdge]) -> EdgeFunction {
    let mut f = EdgeFunction::zeros(net.edge_count());
    for &e in cycle {
        f[e.edge] += e.direction.sign();
    }
    f
}

/// The current flow `c dF` with prescribed divergence, `d*(c dF) = div`.
/// `div` must sum to zero.
pub fn current_with_divergence(net: &Network, div: &VertexFunction, opts: &SolveOptions) -> Result<EdgeFunction> {
    let ground = BoundarySpec::new().clamp(VertexId(0), 0.0);
    let f = solve_poisson(net, &ground, div, opts)?;
    let df = apply_d(net, &f);
    Ok(EdgeFunction(net.edges().iter().zip(df.values()).map(|(e, d)| e.c * d).collect()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// Projection onto the star space `span{ sum_{e- = x} c(e) chi^e }`.
    pub star: EdgeFunction,
    /// Projection onto the cycle space.
    pub cycle: EdgeFunction,
}

/// Orthogonal decomposition of `theta` in `(., .)_r` into star and cycle
/// parts. The star part is `c dF` with `d*(c dF) = d*theta`.
pub fn decompose_star_cycle(net: &Network, theta: &EdgeFunction) -> Result<Decomposition> {
    let star = current_with_divergence(net, &apply_d_star(net, theta), &SolveOptions::with_tol(PROJECTION_TOL))?;
    let cycle = theta.sub(&star);
    Ok(Decomposition { star, cycle })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KirchhoffReport {
    /// `max |d* i(x)|` over non-exempt vertices.
    pub node_residual: f64,
    pub worst_vertex: Option<VertexId>,
    /// `max |(sum_j chi^{e_j}, i)_r|` over the fundamental cycle basis.
    pub cycle_residual: f64,
    pub cycles_checked: usize,
}

/// Node law `(sum_{e- = x} c(e) chi^e, i)_r = 0` away from `exempt` and the
/// cycle law `(sum_j chi^{e_j}, i)_r = 0` on every basis cycle.
pub fn verify_kirchhoff(net: &Network, current: &EdgeFunction, exempt: &[VertexId]) -> KirchhoffReport {
    let div = apply_d_star(net, current);
    let (worst_vertex, node_residual) = net
        .vertices()
        .filter(|x| !exempt.contains(x))
        .map(|x| (Some(x), div[x].abs()))
        .fold((None, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let cycles = cycle_basis(net);
    let cycle_residual = cycles
        .iter()
        .map(|c| inner_r(net, &cycle_flow(net, c), current).abs())
        .fold(0.0, f64::max);
    KirchhoffReport { node_residual, worst_vertex, cycle_residual, cycles_checked: cycles.len() }
}

/// `epsilon(theta) - epsilon(i)` where `i` is the current flow with the same
/// divergence as `theta`. Nonnegative up to round-off.
pub fn thomson_gap(net: &Network, theta: &EdgeFunction, sources: &[VertexId], sinks: &[VertexId]) -> Result<f64> {
    let report = validate_flow(net, theta, sources, sinks, 1e-9)?;
    if !report.is_flow {
        let v = &report.violations[0];
        return Err(Error::NotAFlow(format!(
            "divergence {} at vertex {} (expected {:?})",
            v.divergence, v.vertex, v.expected
        )));
    }
    let div = apply_d_star(net, theta);
    let current = current_with_divergence(net, &div, &SolveOptions::with_tol(PROJECTION_TOL))?;
    Ok(energy(net, theta) - energy(net, &current))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn triangle() -> Network {
        Network::from_edges([(0, 1, 1.0), (1, 2, 2.0), (2, 0, 0.5)]).unwrap()
    }

    #[test]
    fn d_of_indicator_and_constants() {
        let net = Network::from_edges([(0, 1, 1.0)]).unwrap();
        assert_eq!(apply_d(&net, &VertexFunction::indicator(2, VertexId(0))).0, vec![1.0]);
        assert_eq!(apply_d(&net, &VertexFunction::constant(2, 4.0)).0, vec![0.0]);
    }

    #[test]
    fn d_star_of_unit_and_cycle_flows() {
        let net = Network::from_edges([(0, 1, 1.0)]).unwrap();
        let chi = EdgeFunction::unit(1, OrientedEdge::forward(0));
        assert_eq!(apply_d_star(&net, &chi).0, vec![1.0, -1.0]);

        let tri = triangle();
        let cycles = cycle_basis(&tri);
        assert_eq!(cycles.len(), 1);
        let flow = cycle_flow(&tri, &cycles[0]);
        assert_eq!(apply_d_star(&tri, &flow).0, vec![0.0, 0.0, 0.0]);
        assert_eq!(flow.max_abs(), 1.0);
    }

    #[test]
    fn cycles_are_closed_walks() {
        let net = Network::from_edges([
            (0, 1, 1.0),
            (0, 2, 1.0),
            (1, 3, 1.0),
            (2, 3, 1.0),
            (3, 4, 1.0),
            (4, 1, 1.0),
            (0, 3, 1.0),
        ])
        .unwrap();
        let cycles = cycle_basis(&net);
        assert_eq!(cycles.len(), net.edge_count() - net.vertex_count() + 1);
        for c in &cycles {
            for w in c.windows(2) {
                assert_eq!(w[0].head(&net), w[1].tail(&net));
            }
            assert_eq!(c.last().unwrap().head(&net), c[0].tail(&net));
        }
    }

    #[test]
    fn validate_flow_cases() {
        let net = Network::from_edges([(0, 1, 1.0)]).unwrap();
        let chi = EdgeFunction::unit(1, OrientedEdge::forward(0));
        let a = [VertexId(0)];
        let z = [VertexId(1)];
        assert!(validate_flow(&net, &chi, &a, &z, 0.0).unwrap().is_flow);
        let zero = EdgeFunction::zeros(1);
        let report = validate_flow(&net, &zero, &a, &z, 0.0).unwrap();
        assert!(!report.is_flow);
        assert_eq!(report.violations.len(), 2);
        assert_eq!(
            validate_flow(&net, &chi, &a, &a, 0.0).unwrap_err(),
            Error::OverlappingSets(VertexId(0))
        );
    }

    #[test]
    fn strength_and_energy_scale() {
        let net = Network::from_edges([(0, 1, 1.0)]).unwrap();
        let chi = EdgeFunction::unit(1, OrientedEdge::forward(0));
        assert_eq!(strength(&net, &chi, &[VertexId(0)]), 1.0);
        assert_eq!(strength(&net, &chi.scaled(2.5), &[VertexId(0)]), 2.5);
        assert_eq!(energy(&net, &chi), 1.0);
        let theta = EdgeFunction(vec![0.3]);
        assert_relative_eq!(energy(&net, &theta.scaled(2.0)), 4.0 * energy(&net, &theta));
    }

    #[test]
    fn cycle_flow_has_no_star_part() {
        let tri = triangle();
        let flow = cycle_flow(&tri, &cycle_basis(&tri)[0]);
        let parts = decompose_star_cycle(&tri, &flow).unwrap();
        assert!(parts.star.max_abs() < 1e-12);
        assert!(parts.cycle.sub(&flow).max_abs() < 1e-12);
    }

    #[test]
    fn gradient_on_tree_has_no_cycle_part() {
        let tree = Network::from_edges([(0, 1, 2.0), (1, 2, 0.5), (1, 3, 3.0)]).unwrap();
        let f = VertexFunction(vec![0.2, -1.0, 3.0, 0.7]);
        let df = apply_d(&tree, &f);
        let grad = EdgeFunction(tree.edges().iter().zip(df.values()).map(|(e, d)| e.c * d).collect());
        let parts = decompose_star_cycle(&tree, &grad).unwrap();
        assert!(parts.cycle.max_abs() < 1e-12);
    }

    #[test]
    fn kirchhoff_on_unit_flow_and_gradients() {
        let net = Network::from_edges([(0, 1, 1.0)]).unwrap();
        let chi = EdgeFunction::unit(1, OrientedEdge::forward(0));
        let report = verify_kirchhoff(&net, &chi, &[]);
        assert_eq!(report.node_residual, 1.0);

        let tri = triangle();
        let df = apply_d(&tri, &VertexFunction(vec![1.0, -2.0, 0.5]));
        let grad = EdgeFunction(tri.edges().iter().zip(df.values()).map(|(e, d)| e.c * d).collect());
        let report = verify_kirchhoff(&tri, &grad, &[]);
        assert!(report.cycle_residual < 1e-14);
        assert_eq!(report.cycles_checked, 1);
    }

    #[test]
    fn thomson_gap_of_current_is_zero_and_cycles_add_energy() {
        let tri = triangle();
        let (a, z) = ([VertexId(0)], [VertexId(2)]);
        let mut div = VertexFunction::zeros(3);
        div[VertexId(0)] = 1.0;
        div[VertexId(2)] = -1.0;
        let current = current_with_divergence(&tri, &div, &SolveOptions::with_tol(1e-13)).unwrap();
        assert!(thomson_gap(&tri, &current, &a, &z).unwrap().abs() < 1e-12);

        let cyc = cycle_flow(&tri, &cycle_basis(&tri)[0]).scaled(0.4);
        let gap = thomson_gap(&tri, &current.add(&cyc), &a, &z).unwrap();
        assert_relative_eq!(gap, energy(&tri, &cyc), epsilon = 1e-12);

        assert!(matches!(thomson_gap(&tri, &cyc, &a, &z), Err(Error::NotAFlow(_))));
    }

    #[test]
    fn adjointness_trivial_cases() {
        let tri = triangle();
        let f = VertexFunction(vec![1.0, 2.0, 3.0]);
        assert_eq!(adjointness_residual(&tri, &EdgeFunction::zeros(3), &f), 0.0);
        let chi = EdgeFunction::unit(3, OrientedEdge::forward(0));
        assert!(adjointness_residual(&tri, &chi, &VertexFunction::constant(3, 5.0)) < 1e-15);
    }
}
