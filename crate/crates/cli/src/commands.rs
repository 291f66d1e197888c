use anyhow::{anyhow, Context};
use resistive_walks::harmonic::{battery, effective_with, resistance_to_infinity, SolveOptions};
use resistive_walks::tree::{
    default_shell_depth, oracle_finite_escape, oracle_green_hitting, oracle_potential_current, oracle_resistance,
    Depth, EscapeCase, HomogeneousTree,
};
use resistive_walks::verify::{all_pass, cross_validate, Verdict, VerifyConfig};
use resistive_walks::walk::{
    estimate_escape, estimate_green, estimate_hitting, estimate_transitions, run_walks, Estimate, Tracking,
    WalkConfig,
};
use resistive_walks::{Error, Network, VertexId};
use serde::Serialize;

use crate::input::{full_tree, load_network, parse_pair, parse_set, parse_vertex, shell_tree, Source};
use crate::report::{Row, RunReport, Status};
use crate::{OracleArgs, ResistArgs, SimulateArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or input data; exit 2.
    Usage(anyhow::Error),
    /// A computation failed; exit 1.
    Failure(anyhow::Error),
}

pub type Outcome<T> = std::result::Result<T, CliError>;

trait Classify<T> {
    fn usage(self) -> Outcome<T>;
}

impl<T> Classify<T> for anyhow::Result<T> {
    fn usage(self) -> Outcome<T> {
        self.map_err(CliError::Usage)
    }
}

/// Input problems are usage errors, everything else a failure.
fn lib<T>(r: resistive_walks::Result<T>) -> Outcome<T> {
    r.map_err(|e| match e {
        Error::SolverDivergence { .. } | Error::BudgetExceededWithoutConvergence { .. } | Error::NotTransient(_) => {
            CliError::Failure(e.into())
        }
        _ => CliError::Usage(e.into()),
    })
}

/// Agreement test used for deterministic comparisons in reports.
const MATCH_TOL: f64 = 1e-9;

pub fn resist(args: &ResistArgs) -> Outcome<RunReport<Row>> {
    let mut report = RunReport::new("resist");
    if let Some(path) = &args.network {
        report.input("network", path.display().to_string());
    }
    if let Some(tree) = args.tree {
        report.input("tree", tree.to_string());
    }

    if args.to_infinity {
        let tree = args.tree.context("--to-infinity needs --tree").usage()?;
        let tol = args.tol.unwrap_or(1e-6);
        report.input("to_infinity", true);
        report.input("tol", tol);
        report.input("max_levels", args.max_levels);
        let q = tree.q as f64;
        if let Some(n) = tree.n.filter(|&n| n >= 1) {
            let t = shell_tree(tree.q, n).usage()?;
            let eff = lib(effective_with(&t.net, t.root(), &[t.z.unwrap()], &SolveOptions::default()))?;
            let closed = lib(oracle_resistance(tree.q, Depth::Finite(n)))?;
            report.results.push(
                Row::new(format!("resistance n={n}"))
                    .closed(closed)
                    .solver(eff.resistance)
                    .verdict((eff.resistance - closed).abs() < MATCH_TOL),
            );
        }
        let gen = lib(HomogeneousTree::new(tree.q))?;
        let est = lib(resistance_to_infinity(&gen, args.max_levels, tol))?;
        let closed = q / (q * q - 1.0);
        report.results.push(
            Row::new("resistance_to_infinity")
                .closed(closed)
                .solver(est.value)
                .verdict(est.converged && (est.value - closed).abs() < 2.0 * tol),
        );
        report.results.push(Row::new("conductance_to_infinity").closed(1.0 / closed).solver(1.0 / est.value));
        report.meta("converged", est.converged);
        report.meta("levels_used", est.radius);
        report.exit_status = if est.converged && !report.results.iter().any(Row::failed) {
            Status::Pass
        } else {
            Status::Fail
        };
        return Ok(report);
    }

    let source = match (&args.network, args.tree) {
        (Some(path), None) => Source::File(load_network(path).usage()?),
        (None, Some(tree)) => Source::Tree(full_tree(tree).usage()?),
        _ => return Err(CliError::Usage(anyhow!("give exactly one of --network and --tree"))),
    };
    let net = source.net();
    let a_text = args.source.as_deref().context("--source is required without --to-infinity").usage()?;
    let z_text = args.target_set.as_deref().context("--target-set is required without --to-infinity").usage()?;
    let a = parse_vertex(net, a_text, source.tree()).usage()?;
    let z = parse_set(net, z_text, source.tree()).usage()?;
    let tol = args.tol.unwrap_or(1e-9);
    report.input("source", a.0);
    report.input("target_set", z.iter().map(|x| x.0).collect::<Vec<_>>());
    report.input("tol", tol);

    let eff = lib(effective_with(net, a, &z, &SolveOptions::with_tol(tol)))?;
    // closed forms exist for the root against a whole level of a tree
    let closed = source.tree().and_then(|t| {
        let n = t.spec.levels;
        (a == t.root() && z == t.level(n)).then(|| {
            let r = oracle_resistance(t.q(), Depth::Finite(n)).ok()?;
            let p = oracle_finite_escape(EscapeCase::A, t.q(), n, 0).ok()?;
            Some((r, p))
        })?
    });
    let mut rows = vec![
        Row::new("conductance").solver(eff.conductance),
        Row::new("resistance").solver(eff.resistance),
        Row::new("escape_probability").solver(eff.escape_probability),
    ];
    if let Some((r, p)) = closed {
        rows[0] = rows[0].clone().closed(1.0 / r);
        rows[1] = rows[1].clone().closed(r);
        rows[2] = rows[2].clone().closed(p);
        for row in &mut rows {
            let ok = (row.solver_value.unwrap() - row.closed_form.unwrap()).abs() < MATCH_TOL;
            *row = row.clone().verdict(ok);
        }
    }
    report.exit_status = if rows.iter().any(Row::failed) { Status::Fail } else { Status::Pass };
    report.results = rows;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub d: usize,
    pub voltage: f64,
    pub current: f64,
    pub green: f64,
    pub hitting: f64,
    pub transitions: f64,
}

pub fn oracle(args: &OracleArgs) -> Outcome<RunReport<OracleRow>> {
    let mut report = RunReport::new("oracle");
    report.input("q", args.q);
    report.input("max_depth", args.max_depth);
    if args.q < 2 {
        return Err(CliError::Usage(anyhow!("q must be >= 2, got {}", args.q)));
    }
    for d in 0..=args.max_depth {
        let (voltage, current) = lib(oracle_potential_current(args.q, d))?;
        let gh = lib(oracle_green_hitting(args.q, d))?;
        report.results.push(OracleRow {
            d,
            voltage,
            current,
            green: gh.green,
            hitting: gh.hitting,
            transitions: gh.transitions,
        });
    }
    report.meta("resistance_to_infinity", lib(oracle_resistance(args.q, Depth::Infinite))?);
    Ok(report)
}

fn mc_row(quantity: String, est: Estimate, closed: Option<f64>, solver: Option<f64>) -> Row {
    let mut row = Row::new(quantity);
    row.closed_form = closed;
    row.solver_value = solver;
    row.mc_estimate = Some(est.estimate);
    row.mc_std_err = Some(est.std_err);
    if let Some(reference) = solver.or(closed) {
        let ok = if est.std_err > 0.0 {
            (est.estimate - reference).abs() <= 3.0 * est.std_err
        } else {
            (est.estimate - reference).abs() <= MATCH_TOL
        };
        row = row.verdict(ok);
    }
    row
}

/// `G_Z(a, x) = pi(x) phi(x)` with `phi` the unit-current voltage from `a`
/// grounded on `Z`; `None` when that problem is not well posed.
fn killed_green(net: &Network, a: VertexId, z: &[VertexId], x: VertexId) -> Option<f64> {
    if z.is_empty() || z.contains(&a) {
        return None;
    }
    if z.contains(&x) {
        return Some(0.0);
    }
    let b = battery(net, a, z, &SolveOptions::with_tol(1e-12)).ok()?;
    Some(net.vertex_weight(x).ok()? * b.unit_current_voltage()[x])
}

pub fn simulate(args: &SimulateArgs) -> Outcome<RunReport<Row>> {
    let mut report = RunReport::new("simulate");
    if args.walks == 0 {
        return Err(CliError::Usage(anyhow!("--walks must be >= 1")));
    }
    let source = match (&args.network, args.tree) {
        (Some(path), None) => {
            report.input("network", path.display().to_string());
            Source::File(load_network(path).usage()?)
        }
        (None, Some(tree)) => {
            let depth = tree.n.unwrap_or_else(|| default_shell_depth(tree.q));
            report.input("tree", format!("{},{}", tree.q, depth));
            report.meta("shell_depth", depth);
            report.meta("truncation_bias_bound", (tree.q as f64).powi(-(depth as i32)));
            Source::Tree(shell_tree(tree.q, depth).usage()?)
        }
        _ => return Err(CliError::Usage(anyhow!("give exactly one of --network and --tree"))),
    };
    let net = source.net();
    let tree = source.tree();
    let start = match &args.start {
        Some(s) => parse_vertex(net, s, tree).usage()?,
        None => VertexId(0),
    };
    let absorbing = match (&args.absorb, tree) {
        (Some(s), _) => parse_set(net, s, tree).usage()?,
        (None, Some(t)) => vec![t.z.unwrap()],
        (None, None) => Vec::new(),
    };
    let mut cfg = WalkConfig::new(start, args.seed, args.walks).absorbing(&absorbing).max_steps(args.max_steps);
    cfg.workers = args.workers;
    report.input("start", start.0);
    report.input("absorbing", absorbing.iter().map(|x| x.0).collect::<Vec<_>>());
    report.input("walks", args.walks);
    report.input("seed", args.seed);
    report.input("max_steps", args.max_steps);

    // closed forms on trees are for walks from the root or towards it
    let q = tree.map(|t| t.q() as f64);
    let depth_of = |x: VertexId| tree.map(|t| t.depth[x.0] as i32);
    let from_root = tree.is_some_and(|t| start == t.root());

    let mut base = cfg.clone();
    base.tracking = Tracking::nothing();
    let stats = lib(run_walks(net, &base))?;
    for &z in &absorbing {
        let frac = stats.hits_at(z) as f64 / (stats.num_walks - stats.censored).max(1) as f64;
        report.results.push(Row {
            quantity: format!("absorbed_at {z}"),
            mc_estimate: Some(frac),
            mc_std_err: Some((frac * (1.0 - frac) / stats.num_walks as f64).sqrt()),
            ..Row::default()
        });
    }
    report.meta("censored", stats.censored);
    report.meta("mean_steps", stats.total_steps as f64 / stats.num_walks as f64);

    for s in &args.hit {
        let y = parse_vertex(net, s, tree).usage()?;
        let est = lib(estimate_hitting(net, &cfg, y))?;
        let others: Vec<VertexId> = absorbing.iter().copied().filter(|&z| z != y).collect();
        let solver = if start == y {
            Some(1.0)
        } else if others.is_empty() {
            None
        } else {
            battery(net, y, &others, &SolveOptions::with_tol(1e-12)).ok().map(|b| b.voltage[start])
        };
        let closed = match (q, tree) {
            (Some(q), Some(t)) if y == t.root() => depth_of(start).map(|d| q.powi(-d)),
            _ => None,
        };
        report.results.push(mc_row(format!("hitting {y}"), est, closed, solver));
    }
    for s in &args.green {
        let x = parse_vertex(net, s, tree).usage()?;
        let est = lib(estimate_green(net, &cfg, x))?;
        let closed = match q {
            Some(q) if from_root => depth_of(x).map(|d| q / (q - 1.0) * q.powi(-d)),
            _ => None,
        };
        report.results.push(mc_row(format!("green {x}"), est, closed, killed_green(net, start, &absorbing, x)));
    }
    for s in &args.transition {
        let (x, y) = parse_pair(net, s, tree).usage()?;
        let est = lib(estimate_transitions(net, &cfg, x, y))?;
        let p = net.markov_view().p(x, y);
        let closed = match q {
            Some(q) if from_root => depth_of(x).map(|d| q / (q * q - 1.0) * q.powi(-d)),
            _ => None,
        };
        let solver = killed_green(net, start, &absorbing, x).map(|g| g * p);
        report.results.push(mc_row(format!("transitions {x}->{y}"), est, closed, solver));
    }
    if args.escape {
        let est = lib(estimate_escape(net, &cfg, start, &absorbing))?;
        let solver = effective_with(net, start, &absorbing, &SolveOptions::with_tol(1e-12)).ok();
        let closed = tree.filter(|t| from_root && absorbing == [t.z.unwrap()]).and_then(|t| {
            oracle_finite_escape(EscapeCase::A, t.q(), t.spec.levels + 1, 0).ok()
        });
        report.results.push(mc_row("escape".into(), est, closed, solver.map(|e| e.escape_probability)));
    }
    report.exit_status = if report.results.iter().any(Row::failed) { Status::Fail } else { Status::Pass };
    Ok(report)
}

pub fn verify(args: &VerifyArgs) -> Outcome<RunReport<Row>> {
    let mut report = RunReport::new("verify");
    report.input("q", args.q);
    report.input("levels", args.levels);
    report.input("walks", args.walks);
    report.input("seed", args.seed);
    report.input("tol", args.tol);
    let mut cfg = VerifyConfig::new(args.q, args.levels, args.walks, args.seed, args.tol);
    cfg.shell_depth = args.shell_depth;
    lib(cfg.validate())?;
    let depth = args.shell_depth.unwrap_or_else(|| default_shell_depth(args.q));
    report.meta("shell_depth", depth);
    report.meta("mc_sigmas", resistive_walks::verify::MC_SIGMAS);
    let rows = lib(cross_validate(&cfg))?;
    for r in &rows {
        if r.verdict == Verdict::Fail {
            match &r.error {
                Some(e) => eprintln!("check failed: {}: {e}", r.quantity),
                None => eprintln!(
                    "check failed: {}: closed {} solver {:?} mc {:?} ± {:?}",
                    r.quantity, r.closed_form, r.solver_value, r.mc_estimate, r.mc_std_err
                ),
            }
        }
    }
    report.exit_status = if all_pass(&rows) { Status::Pass } else { Status::Fail };
    report.results = rows
        .into_iter()
        .map(|r| Row {
            quantity: r.quantity,
            closed_form: Some(r.closed_form).filter(|v| v.is_finite()),
            solver_value: r.solver_value,
            mc_estimate: r.mc_estimate,
            mc_std_err: r.mc_std_err,
            verdict: Some(r.verdict),
        })
        .collect();
    Ok(report)
}
