//! Acceptance battery. Runs without the libtest harness so every criterion
//! prints one line; exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resistive_walks::flow::{
    adjointness_residual, cycle_basis, cycle_flow, current_with_divergence, decompose_star_cycle,
    energy, inner_r, thomson_gap,
};
use resistive_walks::harmonic::{
    battery, effective_with, green_function, solve_dirichlet_with, BoundarySpec, SolveOptions,
};
use resistive_walks::tree::{
    contracted_tree, escape_instance, first_vertex_at_depth, ladder_resistance, oracle_finite_escape,
    EscapeCase, HomogeneousTree,
};
use resistive_walks::walk::{estimate_hitting, run_walks, Tracking, WalkConfig};
use resistive_walks::{EdgeFunction, Network, VertexFunction, VertexId};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ladder_closed_form(q: f64, n: usize) -> f64 {
    (1.0 / (q + 1.0)) * (1.0 - q.powi(-(n as i32))) / (1.0 - 1.0 / q)
}

fn resistance_ladder() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for q in 2..=5 {
        for n in 1..=8 {
            let tree = contracted_tree(q, n).map_err(|e| e.to_string())?;
            let eff = effective_with(&tree.net, tree.root(), &[tree.z.unwrap()], &SolveOptions::with_tol(1e-12))
                .map_err(|e| e.to_string())?;
            worst = worst.max((eff.resistance - ladder_closed_form(q as f64, n)).abs());
        }
    }
    let elapsed = start.elapsed();
    check(
        worst < 1e-9 && elapsed < Duration::from_secs(10),
        format!("max |R - closed| = {worst:.2e}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn ladder_limits() -> Outcome {
    let r2 = ladder_resistance(2, 21).map_err(|e| e.to_string())?;
    let r3 = ladder_resistance(3, 13).map_err(|e| e.to_string())?;
    let (e2, e3) = ((r2 - 2.0 / 3.0).abs(), (r3 - 3.0 / 8.0).abs());
    check(e2 < 1e-6 && e3 < 1e-6, format!("|R_21(q=2) - 2/3| = {e2:.2e}, |R_13(q=3) - 3/8| = {e3:.2e}"))
}

fn finite_level_currents() -> Outcome {
    let (q, n) = (2usize, 6usize);
    let tree = contracted_tree(q, n).map_err(|e| e.to_string())?;
    let b = battery(&tree.net, tree.root(), &[tree.z.unwrap()], &SolveOptions::with_tol(1e-13))
        .map_err(|e| e.to_string())?;
    let current = b.unit_current(&tree.net);
    let mut worst = 0.0f64;
    for (k, e) in tree.net.edges().iter().enumerate() {
        let (du, dv) = (tree.depth[e.u.0], tree.depth[e.v.0]);
        let sign = if du < dv { 1.0 } else { -1.0 };
        // an edge into z merges c unit edges, each carrying the same current
        let per_edge = sign * current[k] / e.c;
        let closed = (1.0 / (q as f64 + 1.0)) * (q as f64).powi(-(du.min(dv) as i32));
        worst = worst.max((per_edge - closed).abs());
    }
    check(worst < 1e-9, format!("{} edges, max |i - closed| = {worst:.2e}", tree.net.edge_count()))
}

fn green_function_limits() -> Outcome {
    let mut worst = 0.0f64;
    for q in [2usize, 3] {
        let gen = HomogeneousTree::new(q).map_err(|e| e.to_string())?;
        for d in 0..=3 {
            let x = first_vertex_at_depth(q, d).unwrap();
            let est = green_function(&gen, x, 500, 1e-10).map_err(|e| e.to_string())?;
            let qf = q as f64;
            let closed = qf / (qf - 1.0) * qf.powi(-(d as i32));
            worst = worst.max((est.value - closed).abs());
        }
    }
    check(worst < 1e-6, format!("max |G - closed| = {worst:.2e}"))
}

fn hitting_vector() -> Outcome {
    let start = Instant::now();
    let tree = contracted_tree(2, 20).map_err(|e| e.to_string())?;
    let bc = BoundarySpec::battery(tree.root(), &[tree.z.unwrap()]);
    let v = solve_dirichlet_with(&tree.net, &bc, &SolveOptions::with_tol(1e-10)).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for d in 1..=3 {
        let target = 2f64.powi(-d);
        for x in tree.level(d as usize) {
            worst = worst.max((v[x] - target).abs());
        }
    }
    check(
        worst < 1e-4,
        format!(
            "{} vertices, max |P_x - 2^-d| = {worst:.2e}, {:.2}s",
            tree.net.vertex_count(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn escape_probabilities() -> Outcome {
    let q = 2;
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut cases = Vec::new();
    for case in [EscapeCase::A, EscapeCase::B, EscapeCase::C] {
        for n in 2..=4 {
            cases.push((case, n, 0));
        }
    }
    for case in [EscapeCase::D, EscapeCase::E] {
        for dist in 1..=4 {
            cases.push((case, 0, dist));
        }
    }
    for (case, n, dist) in cases {
        let inst = escape_instance(case, q, n, dist).map_err(|e| e.to_string())?;
        let eff = effective_with(&inst.tree.net, inst.a, &inst.z, &SolveOptions::with_tol(1e-13))
            .map_err(|e| e.to_string())?;
        let closed = oracle_finite_escape(case, q, n, dist).map_err(|e| e.to_string())?;
        worst = worst.max((eff.escape_probability - closed).abs());
        count += 1;
    }
    check(worst < 1e-9, format!("{count} instances, max |P - closed| = {worst:.2e}"))
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let (seed, walks, depth) = (42u64, 100_000u64, 20usize);
    let tree = contracted_tree(2, depth).map_err(|e| e.to_string())?;
    let (root, z) = (tree.root(), tree.z.unwrap());
    let child = tree.first_at_depth(1).unwrap();

    let hit = estimate_hitting(&tree.net, &WalkConfig::new(child, seed, walks).absorbing(&[z]), root)
        .map_err(|e| e.to_string())?;

    let mut cfg = WalkConfig::new(root, seed, walks).absorbing(&[z]);
    cfg.tracking = Tracking { visits: Some(vec![root]), transitions: Some(vec![(child, root), (root, child)]) };
    let stats = run_walks(&tree.net, &cfg).map_err(|e| e.to_string())?;
    let (g, g_se) = stats.visits(root).unwrap_or_default().mean_and_err(walks);
    let back = stats.transitions(&tree.net, child, root).unwrap_or_default();
    let out = stats.transitions(&tree.net, root, child).unwrap_or_default();
    let (t, t_se) = back.mean_and_err(walks);
    // on a tree the net number of crossings of an edge is 0 or 1 per walk
    let net_cross = (out.sum as f64 - back.sum as f64) / walks as f64;
    let net_se = (net_cross * (1.0 - net_cross) / walks as f64).sqrt();
    let elapsed = start.elapsed();

    let within = |est: f64, se: f64, target: f64| (est - target).abs() <= 3.0 * se;
    let ok = within(hit.estimate, hit.std_err, 0.5)
        && within(g, g_se, 2.0)
        && within(t, t_se, 1.0 / 3.0)
        && within(net_cross, net_se, 1.0 / 3.0)
        && stats.censored == 0
        && elapsed < Duration::from_secs(60);
    check(
        ok,
        format!(
            "hitting {:.4}±{:.4} (0.5), green {g:.4}±{g_se:.4} (2), child->root {t:.4}±{t_se:.4} (1/3), \
             net crossings {net_cross:.4}±{net_se:.4} (1/3), {:.1}s",
            hit.estimate,
            hit.std_err,
            elapsed.as_secs_f64()
        ),
    )
}

fn random_battery() -> Vec<Network> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    (0..50).map(|_| common::random_connected(&mut rng, 12, 0.3)).collect()
}

fn random_edge_function<R: Rng>(rng: &mut R, m: usize) -> EdgeFunction {
    EdgeFunction((0..m).map(|_| rng.random_range(-1.0..1.0)).collect())
}

fn flow_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut adj, mut recomb, mut orth, mut min_gap) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    let (mut flows, mut strict_checked, mut strict_failed) = (0, 0, 0);
    for net in random_battery() {
        let (n, m) = (net.vertex_count(), net.edge_count());
        let theta = random_edge_function(&mut rng, m);
        let f = VertexFunction((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
        adj = adj.max(adjointness_residual(&net, &theta, &f));

        let dec = decompose_star_cycle(&net, &theta).map_err(|e| e.to_string())?;
        recomb = recomb.max(dec.star.add(&dec.cycle).sub(&theta).max_abs());
        orth = orth.max(inner_r(&net, &dec.star, &dec.cycle).abs());

        // two flows per graph from vertex 0 to the last vertex
        let (a, zv) = (VertexId(0), VertexId(n - 1));
        let mut div = VertexFunction::zeros(n);
        div.0[0] = 1.0;
        div.0[n - 1] = -1.0;
        let current = current_with_divergence(&net, &div, &SolveOptions::with_tol(1e-13)).map_err(|e| e.to_string())?;
        let cycles = cycle_basis(&net);
        for _ in 0..2 {
            let mut theta = current.clone();
            let mut cyc = EdgeFunction::zeros(m);
            for c in &cycles {
                cyc = cyc.add(&cycle_flow(&net, c).scaled(rng.random_range(-0.5..0.5)));
            }
            theta = theta.add(&cyc);
            let gap = thomson_gap(&net, &theta, &[a], &[zv]).map_err(|e| e.to_string())?;
            min_gap = min_gap.min(gap);
            flows += 1;
            if energy(&net, &cyc) > 1e-4 {
                strict_checked += 1;
                if gap <= 1e-6 {
                    strict_failed += 1;
                }
            }
        }
    }
    check(
        adj < 1e-10 && recomb < 1e-10 && orth < 1e-10 && min_gap >= -1e-10 && strict_failed == 0,
        format!(
            "adjointness {adj:.1e}, recombination {recomb:.1e}, r-orthogonality {orth:.1e}, \
             min gap {min_gap:.1e} over {flows} flows, {strict_checked} strict ({strict_failed} failed)"
        ),
    )
}

fn extremum_and_uniqueness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = 1e-10;
    let (mut excess, mut disagreement) = (0.0f64, 0.0f64);
    for net in random_battery() {
        let n = net.vertex_count();
        let k = rng.random_range(1..n);
        let mut bc = BoundarySpec::new();
        let mut ids: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.random_range(i..n);
            ids.swap(i, j);
            bc = bc.clamp(VertexId(ids[i]), rng.random_range(-5.0..5.0));
        }
        let (lo, hi) = bc.clamped.values().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let zero_start = SolveOptions::iterative(None, tol);
        let random_start = SolveOptions::iterative(
            Some(VertexFunction((0..n).map(|_| rng.random_range(-100.0..100.0)).collect())),
            tol,
        );
        let v1 = solve_dirichlet_with(&net, &bc, &zero_start).map_err(|e| e.to_string())?;
        let v2 = solve_dirichlet_with(&net, &bc, &random_start).map_err(|e| e.to_string())?;
        let v3 = solve_dirichlet_with(&net, &bc, &SolveOptions::direct(tol)).map_err(|e| e.to_string())?;
        for x in net.vertices() {
            excess = excess.max(v1[x] - hi).max(lo - v1[x]);
            disagreement = disagreement.max((v1[x] - v2[x]).abs()).max((v1[x] - v3[x]).abs());
        }
    }
    check(
        excess <= tol && disagreement <= 2.0 * tol,
        format!("extremum excess {excess:.1e}, initialisation disagreement {disagreement:.1e} (2 tol = {:.0e})", 2.0 * tol),
    )
}

fn brute_force_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut problems = 0;
    for n in 2..=5 {
        for net in common::connected_graphs(n) {
            for a in 0..n {
                let others: Vec<usize> = (0..n).filter(|&x| x != a).collect();
                for mask in 1u32..(1 << others.len()) {
                    let z: Vec<VertexId> =
                        others.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| VertexId(x)).collect();
                    let bc = BoundarySpec::battery(VertexId(a), &z);
                    let v = solve_dirichlet_with(&net, &bc, &SolveOptions::with_tol(1e-12)).map_err(|e| e.to_string())?;
                    let oracle = common::absorbing_chain_hit(&net, VertexId(a), &z);
                    for x in net.vertices() {
                        worst = worst.max((v[x] - oracle[x.0]).abs());
                    }
                    problems += 1;
                }
            }
        }
    }
    check(worst < 1e-9, format!("{problems} problems, max |v - P| = {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 resistance ladder", resistance_ladder),
        ("2 ladder limits", ladder_limits),
        ("3 finite-level currents", finite_level_currents),
        ("4 Green function", green_function_limits),
        ("5 hitting vector", hitting_vector),
        ("6 escape probabilities", escape_probabilities),
        ("7 Monte Carlo concordance", monte_carlo),
        ("8 flow calculus", flow_calculus),
        ("9 maximum and uniqueness", extremum_and_uniqueness),
        ("10 brute-force oracle", brute_force_oracle),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
