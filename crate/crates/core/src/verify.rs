//! Three-way cross-validation on homogeneous trees: closed form, solver and
//! Monte Carlo, one row per quantity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::{battery, effective, green_function, hitting_probability, SolveOptions};
use crate::network::{EdgeFunction, VertexId};
use crate::tree::{
    contracted_tree, default_shell_depth, escape_instance, first_vertex_at_depth, oracle_finite_escape,
    oracle_green_hitting, oracle_potential_current, oracle_resistance, Depth, EscapeCase, HomogeneousTree,
};
use crate::walk::{estimate_hitting, run_walks, Tracking, WalkConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub quantity: String,
    pub closed_form: f64,
    pub solver_value: Option<f64>,
    pub mc_estimate: Option<f64>,
    pub mc_std_err: Option<f64>,
    pub verdict: Verdict,
    /// Set when a computation failed outright.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub q: usize,
    pub levels: usize,
    pub walks: u64,
    pub seed: u64,
    pub tol: f64,
    /// Shell depth of the Monte Carlo tree; `None` uses [`default_shell_depth`].
    pub shell_depth: Option<usize>,
}

impl VerifyConfig {
    pub fn new(q: usize, levels: usize, walks: u64, seed: u64, tol: f64) -> Self {
        VerifyConfig { q, levels, walks, seed, tol, shell_depth: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::InvalidQ(self.q));
        }
        if self.levels == 0 {
            return Err(Error::InvalidConfig("levels must be >= 1".into()));
        }
        if self.walks == 0 {
            return Err(Error::InvalidConfig("walks must be >= 1".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidConfig("tol must be >= 0".into()));
        }
        Ok(())
    }
}

/// Standard errors allowed between a Monte Carlo estimate and its target.
pub const MC_SIGMAS: f64 = 3.0;

const LIMIT_LEVELS: usize = 400;

fn deterministic(quantity: String, closed_form: f64, solver: Result<f64>, tol: f64) -> Row {
    match solver {
        Ok(v) => Row {
            quantity,
            closed_form,
            solver_value: Some(v),
            mc_estimate: None,
            mc_std_err: None,
            verdict: Verdict::from_bool((v - closed_form).abs() < tol),
            error: None,
        },
        Err(e) => failed(quantity, closed_form, e),
    }
}

fn failed(quantity: String, closed_form: f64, e: Error) -> Row {
    Row {
        quantity,
        closed_form,
        solver_value: None,
        mc_estimate: None,
        mc_std_err: None,
        verdict: Verdict::Fail,
        error: Some(e.to_string()),
    }
}

fn limit_tol(tol: f64) -> f64 {
    tol * 1e-3
}

/// Runs the battery. Deterministic rows pass when `|solver - closed| < tol`
/// (so `tol = 0` always fails); Monte Carlo rows additionally need the
/// estimate within [`MC_SIGMAS`] standard errors of the closed form.
pub fn cross_validate(cfg: &VerifyConfig) -> Result<Vec<Row>> {
    cfg.validate()?;
    let (q, tol) = (cfg.q, cfg.tol);
    let mut rows = Vec::new();

    for n in 1..=cfg.levels {
        let closed = oracle_resistance(q, Depth::Finite(n))?;
        let solved = contracted_tree(q, n).and_then(|t| effective(&t.net, t.root(), &[t.z.unwrap()]));
        rows.push(deterministic(format!("resistance n={n}"), closed, solved.map(|e| e.resistance), tol));
    }

    rows.extend(current_rows(q, cfg.levels, tol));

    let gen = HomogeneousTree::new(q)?;
    for d in 0..=cfg.levels.min(3) {
        let x = first_vertex_at_depth(q, d).expect("small depth");
        let oracle = oracle_green_hitting(q, d)?;
        let g = green_function(&gen, x, LIMIT_LEVELS, limit_tol(tol)).map(|l| l.value);
        rows.push(deterministic(format!("green d={d}"), oracle.green, g, tol));
        let h = hitting_probability(&gen, x, LIMIT_LEVELS, limit_tol(tol)).map(|l| l.value);
        rows.push(deterministic(format!("hitting d={d}"), oracle.hitting, h, tol));
    }

    let n_max = cfg.levels.min(4);
    for case in [EscapeCase::A, EscapeCase::B, EscapeCase::C] {
        for n in 1..=n_max {
            rows.push(escape_row(case, q, n, 0, tol));
        }
    }
    for case in [EscapeCase::D, EscapeCase::E] {
        for dist in 1..=4 {
            rows.push(escape_row(case, q, 0, dist, tol));
        }
    }

    rows.extend(monte_carlo_rows(cfg, &gen)?);
    Ok(rows)
}

fn escape_row(case: EscapeCase, q: usize, n: usize, dist: usize, tol: f64) -> Row {
    let label = match case {
        EscapeCase::A | EscapeCase::B | EscapeCase::C => format!("escape {case:?} n={n}"),
        _ => format!("escape {case:?} dist={dist}"),
    };
    let closed = match oracle_finite_escape(case, q, n, dist) {
        Ok(c) => c,
        Err(e) => return failed(label, f64::NAN, e),
    };
    let solved = escape_instance(case, q, n, dist)
        .and_then(|inst| effective(&inst.tree.net, inst.a, &inst.z))
        .map(|e| e.escape_probability);
    deterministic(label, closed, solved, tol)
}

/// Unit current on the contracted tree with `levels` kept levels against
/// its closed form, worst edge per depth.
fn current_rows(q: usize, levels: usize, tol: f64) -> Vec<Row> {
    let tree = match contracted_tree(q, levels) {
        Ok(t) => t,
        Err(e) => return vec![failed(format!("current n={levels}"), f64::NAN, e)],
    };
    let z = tree.z.unwrap();
    let current: Result<EdgeFunction> =
        battery(&tree.net, tree.root(), &[z], &SolveOptions::default()).map(|b| b.unit_current(&tree.net));
    let current = match current {
        Ok(i) => i,
        Err(e) => return vec![failed(format!("current n={levels}"), f64::NAN, e)],
    };
    (0..levels)
        .map(|d| {
            let closed = oracle_potential_current(q, d).map(|(_, i)| i).unwrap_or(f64::NAN);
            // edges leaving depth d, oriented away from the root; a merged edge into
            // z carries one unit-conductance edge per unit of c
            let worst = tree
                .net
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| tree.depth[e.u.0].min(tree.depth[e.v.0]) == d)
                .map(|(k, e)| {
                    let sign = if tree.depth[e.u.0] <= tree.depth[e.v.0] { 1.0 } else { -1.0 };
                    sign * current[k] / e.c
                })
                .max_by(|a, b| (a - closed).abs().total_cmp(&(b - closed).abs()));
            deterministic(format!("current d={d}"), closed, Ok(worst.unwrap_or(f64::NAN)), tol)
        })
        .collect()
}

fn monte_carlo_rows(cfg: &VerifyConfig, gen: &HomogeneousTree) -> Result<Vec<Row>> {
    let q = cfg.q;
    let qf = q as f64;
    let depth = cfg.shell_depth.unwrap_or_else(|| default_shell_depth(q));
    let tree = contracted_tree(q, depth)?;
    let (root, z) = (tree.root(), tree.z.unwrap());
    let child = tree.first_at_depth(1).unwrap();
    let lt = limit_tol(cfg.tol);

    let mut green_cfg = WalkConfig::new(root, cfg.seed, cfg.walks).absorbing(&[z]);
    green_cfg.tracking = Tracking { visits: Some(vec![root]), transitions: Some(vec![(child, root)]) };
    let stats = run_walks(&tree.net, &green_cfg)?;
    let hit_cfg = WalkConfig::new(child, cfg.seed, cfg.walks).absorbing(&[z]);
    let hit = estimate_hitting(&tree.net, &hit_cfg, root)?;

    let mut rows = Vec::new();
    let mut mc_row = |quantity: String, closed: f64, solver: Result<f64>, est: f64, se: f64| {
        let mut row = deterministic(quantity, closed, solver, cfg.tol);
        row.mc_estimate = Some(est);
        row.mc_std_err = Some(se);
        if (est - closed).abs() > MC_SIGMAS * se || !est.is_finite() {
            row.verdict = Verdict::Fail;
        }
        rows.push(row);
    };

    let oracle1 = oracle_green_hitting(q, 1)?;
    let h_solver = hitting_probability(gen, first_vertex_at_depth(q, 1).unwrap(), LIMIT_LEVELS, lt).map(|l| l.value);
    mc_row(format!("mc hitting d=1 L={depth}"), oracle1.hitting, h_solver, hit.estimate, hit.std_err);

    let g0 = oracle_green_hitting(q, 0)?.green;
    let (g_est, g_se) = stats.visits(root).unwrap_or_default().mean_and_err(stats.num_walks);
    let g_solver = green_function(gen, VertexId(0), LIMIT_LEVELS, lt).map(|l| l.value);
    mc_row(format!("mc green d=0 L={depth}"), g0, g_solver, g_est, g_se);

    // E_0[S_{y,0}] = G(0, y) p(y, 0) with p(y, 0) = 1/(q+1)
    let (t_est, t_se) = stats.transitions(&tree.net, child, root).unwrap_or_default().mean_and_err(stats.num_walks);
    let t_solver = green_function(gen, first_vertex_at_depth(q, 1).unwrap(), LIMIT_LEVELS, lt)
        .map(|l| l.value / (qf + 1.0));
    mc_row(format!("mc transitions child->root L={depth}"), oracle1.transitions, t_solver, t_est, t_se);

    Ok(rows)
}

pub fn all_pass(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.verdict == Verdict::Pass)
}
