//! Dirichlet problems on finite networks and the quantities derived from
//! them: voltages, currents, effective conductance/resistance and escape
//! probabilities. [`limits`] takes these along exhaustions of infinite
//! graphs.

mod limits;
mod linear;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{EdgeFunction, Network, VertexFunction, VertexId};

pub use limits::{
    classify_transience, green_function, hitting_probability, resistance_to_infinity,
    LimitEstimate, Verdict, TRANSIENCE_EPS,
};

use linear::FreeSystem;

/// A solved voltage function.
pub type Potential = VertexFunction;

/// Free-vertex count above which [`Method::Auto`] switches to CG.
pub const DENSE_LIMIT: usize = 2000;
pub const DEFAULT_DIRECT_TOL: f64 = 1e-9;
pub const DEFAULT_ITERATIVE_TOL: f64 = 1e-8;

/// Prescribed voltages; every other vertex is free (harmonic).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub clamped: BTreeMap<VertexId, f64>,
}

impl BoundarySpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clamp(mut self, x: VertexId, value: f64) -> Self {
        self.clamped.insert(x, value);
        self
    }

    /// The battery `v(a) = 1`, `v|Z = 0`.
    pub fn battery(a: VertexId, z: &[VertexId]) -> Self {
        let mut bc = Self::new().clamp(a, 1.0);
        for &x in z {
            bc.clamped.insert(x, 0.0);
        }
        bc
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("boundary serialises")
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub enum Method {
    /// Dense Cholesky up to [`DENSE_LIMIT`] free vertices, CG above.
    #[default]
    Auto,
    Direct,
    /// CG from the given starting potential (zeros when `None`).
    Iterative { initial: Option<VertexFunction> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub method: Method,
    /// Bound on the harmonic defect `|sum_y p(x,y) v(y) - v(x)|` at free
    /// vertices. `None` picks the method's default.
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { method: Method::Auto, tol: None, max_iter: None }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolveOptions { tol: Some(tol), ..Self::default() }
    }

    pub fn iterative(initial: Option<VertexFunction>, tol: f64) -> Self {
        SolveOptions { method: Method::Iterative { initial }, tol: Some(tol), max_iter: None }
    }

    pub fn direct(tol: f64) -> Self {
        SolveOptions { method: Method::Direct, tol: Some(tol), max_iter: None }
    }
}

/// Solves the Dirichlet problem with the default method and tolerance `tol`.
pub fn solve_dirichlet(net: &Network, bc: &BoundarySpec, tol: f64) -> Result<Potential> {
    solve_dirichlet_with(net, bc, &SolveOptions::with_tol(tol))
}

/// The unique function equal to `bc` on clamped vertices and harmonic on all
/// others.
pub fn solve_dirichlet_with(net: &Network, bc: &BoundarySpec, opts: &SolveOptions) -> Result<Potential> {
    solve_with_source(net, bc, None, opts)
}

/// Like [`solve_dirichlet_with`], but free vertices satisfy
/// `sum_y c(x,y) (v(x) - v(y)) = source(x)` instead of harmonicity.
pub fn solve_poisson(
    net: &Network,
    bc: &BoundarySpec,
    source: &VertexFunction,
    opts: &SolveOptions,
) -> Result<Potential> {
    solve_with_source(net, bc, Some(source.values()), opts)
}

fn solve_with_source(
    net: &Network,
    bc: &BoundarySpec,
    source: Option<&[f64]>,
    opts: &SolveOptions,
) -> Result<Potential> {
    if bc.clamped.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let n = net.vertex_count();
    let mut values = vec![0.0; n];
    let mut clamped = vec![false; n];
    for (&x, &value) in &bc.clamped {
        net.check_vertex(x)?;
        values[x.0] = value;
        clamped[x.0] = true;
    }
    let system = FreeSystem::new(net, &values, &clamped, source);
    let m = system.len();
    if m == 0 {
        return Ok(VertexFunction(values));
    }
    let max_iter = opts.max_iter.unwrap_or_else(|| 10 * m + 1000);
    let direct = match &opts.method {
        Method::Auto => m <= DENSE_LIMIT,
        Method::Direct => true,
        Method::Iterative { .. } => false,
    };
    let solution = if direct {
        let tol = opts.tol.unwrap_or(DEFAULT_DIRECT_TOL);
        let x = system.solve_dense()?;
        if system.defect(&x) < tol {
            x
        } else {
            // polish round-off with a few CG steps from the direct answer
            system.solve_cg(x, tol, max_iter)?
        }
    } else {
        let tol = opts.tol.unwrap_or(DEFAULT_ITERATIVE_TOL);
        let start = match &opts.method {
            Method::Iterative { initial: Some(f) } => system.free().iter().map(|x| f[*x]).collect(),
            _ => vec![0.0; m],
        };
        system.solve_cg(start, tol, max_iter)?
    };
    for (&x, v) in system.free().iter().zip(solution) {
        values[x.0] = v;
    }
    Ok(VertexFunction(values))
}

/// Largest harmonic defect of `v` over vertices not in `clamped`.
pub fn harmonic_defect(net: &Network, v: &VertexFunction, clamped: &BTreeSet<VertexId>) -> f64 {
    net.vertices()
        .filter(|x| !clamped.contains(x))
        .map(|x| {
            let avg: f64 =
                net.neighbors(x).iter().map(|&(y, e)| net.edge(e).c * v[y]).sum::<f64>() / net.weight(x);
            (avg - v[x]).abs()
        })
        .fold(0.0, f64::max)
}

/// Ohm's law `i(e) = c(e) (v(e-) - v(e+))` on every edge.
pub fn ohm_current(net: &Network, v: &VertexFunction) -> EdgeFunction {
    EdgeFunction(net.edges().iter().map(|e| e.c * (v[e.u] - v[e.v])).collect())
}

/// Effective conductance, resistance and escape probability from `a` to `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveQuantities {
    pub conductance: f64,
    pub resistance: f64,
    pub escape_probability: f64,
}

/// Unit-voltage solution of the battery between `a` and `Z`, together with
/// the effective quantities it determines.
#[derive(Clone, Debug)]
pub struct Battery {
    /// `v(a) = 1`, `v|Z = 0`; also `v(x) = P_x(tau_a < tau_Z)`.
    pub voltage: Potential,
    pub effective: EffectiveQuantities,
}

impl Battery {
    /// Voltage of the unit current flow from `a` to `Z` (`v|Z = 0`).
    pub fn unit_current_voltage(&self) -> Potential {
        let r = self.effective.resistance;
        VertexFunction(self.voltage.0.iter().map(|v| v * r).collect())
    }

    pub fn unit_current(&self, net: &Network) -> EdgeFunction {
        ohm_current(net, &self.unit_current_voltage())
    }
}

pub fn battery(net: &Network, a: VertexId, z: &[VertexId], opts: &SolveOptions) -> Result<Battery> {
    net.check_vertex(a)?;
    if z.is_empty() {
        return Err(Error::EmptyTarget);
    }
    if z.contains(&a) {
        return Err(Error::VertexInTarget(a));
    }
    let voltage = solve_dirichlet_with(net, &BoundarySpec::battery(a, z), opts)?;
    let conductance: f64 =
        net.neighbors(a).iter().map(|&(x, e)| net.edge(e).c * (1.0 - voltage[x])).sum();
    let effective = EffectiveQuantities {
        conductance,
        resistance: 1.0 / conductance,
        escape_probability: conductance / net.weight(a),
    };
    Ok(Battery { voltage, effective })
}

/// `C(a <-> Z)`, `R(a <-> Z)` and `P[a -> Z] = C / pi(a)`.
pub fn effective(net: &Network, a: VertexId, z: &[VertexId]) -> Result<EffectiveQuantities> {
    Ok(battery(net, a, z, &SolveOptions::default())?.effective)
}

pub fn effective_with(
    net: &Network,
    a: VertexId,
    z: &[VertexId],
    opts: &SolveOptions,
) -> Result<EffectiveQuantities> {
    Ok(battery(net, a, z, opts)?.effective)
}
