//! Seeded Monte Carlo for the random walk of a network.
//!
//! Walk `k` draws from the ChaCha8 stream `(seed, k)`, so every walk is a
//! pure function of the seed and its index. Workers take contiguous blocks
//! of walk indices and tallies are integer sums, so the statistics do not
//! depend on the worker count.
//!
//! Time conventions: a walk starts at `start` at time 0 and is absorbed the
//! first time `X_n` lies in the absorbing set for some `n >= 1`. A start
//! vertex that is itself absorbing is therefore only absorbed on return.
//! Visits are counted at times strictly before absorption.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Network, VertexId};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Which vertices and oriented edges get per-walk tallies. `None` tracks all.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tracking {
    pub visits: Option<Vec<VertexId>>,
    pub transitions: Option<Vec<(VertexId, VertexId)>>,
}

impl Tracking {
    pub fn nothing() -> Self {
        Tracking { visits: Some(Vec::new()), transitions: Some(Vec::new()) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkConfig {
    pub seed: u64,
    pub num_walks: u64,
    pub max_steps: u64,
    pub absorbing: Vec<VertexId>,
    pub start: VertexId,
    /// Thread count; 0 uses the available parallelism.
    pub workers: usize,
    pub tracking: Tracking,
}

impl WalkConfig {
    pub fn new(start: VertexId, seed: u64, num_walks: u64) -> Self {
        WalkConfig {
            seed,
            num_walks,
            max_steps: DEFAULT_MAX_STEPS,
            absorbing: Vec::new(),
            start,
            workers: 0,
            tracking: Tracking::default(),
        }
    }

    pub fn absorbing(mut self, set: &[VertexId]) -> Self {
        self.absorbing = set.to_vec();
        self
    }

    pub fn max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// Sum and sum of squares of a per-walk count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub sum: u64,
    pub sum_sq: u64,
}

impl Tally {
    fn add_walk(&mut self, count: u64) {
        self.sum += count;
        self.sum_sq += count * count;
    }

    fn merge(&mut self, other: &Tally) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    /// Mean over `n` walks with the standard error of the mean.
    pub fn mean_and_err(&self, n: u64) -> (f64, f64) {
        let nf = n as f64;
        let mean = self.sum as f64 / nf;
        if n < 2 {
            return (mean, 0.0);
        }
        let var = ((self.sum_sq as f64 - nf * mean * mean) / (nf - 1.0)).max(0.0);
        (mean, (var / nf).sqrt())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkStats {
    pub seed: u64,
    pub num_walks: u64,
    /// Absorption counts per absorbing vertex.
    pub hits: BTreeMap<VertexId, u64>,
    /// Walks stopped by `max_steps`.
    pub censored: u64,
    pub total_steps: u64,
    visit_slot: Vec<u32>,
    visits: Vec<Tally>,
    edge_slot: Vec<u32>,
    transitions: Vec<Tally>,
}

const UNTRACKED: u32 = u32::MAX;

impl WalkStats {
    pub fn absorbed_total(&self) -> u64 {
        self.hits.values().sum()
    }

    pub fn hits_at(&self, x: VertexId) -> u64 {
        self.hits.get(&x).copied().unwrap_or(0)
    }

    /// Visit tally of `x`, if tracked.
    pub fn visits(&self, x: VertexId) -> Option<Tally> {
        match self.visit_slot.get(x.0) {
            Some(&s) if s != UNTRACKED => Some(self.visits[s as usize]),
            _ => None,
        }
    }

    /// Tally of steps `x -> y`, if tracked.
    pub fn transitions(&self, net: &Network, x: VertexId, y: VertexId) -> Option<Tally> {
        let pos = adjacency_position(net, x, y)?;
        match self.edge_slot.get(pos) {
            Some(&s) if s != UNTRACKED => Some(self.transitions[s as usize]),
            _ => None,
        }
    }

    /// Nonzero visit tallies, by vertex.
    pub fn visit_table(&self) -> BTreeMap<VertexId, Tally> {
        self.visit_slot
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != UNTRACKED && self.visits[s as usize].sum > 0)
            .map(|(x, &s)| (VertexId(x), self.visits[s as usize]))
            .collect()
    }

    /// Nonzero transition tallies, by `(x, y)`.
    pub fn transition_table(&self, net: &Network) -> BTreeMap<(VertexId, VertexId), Tally> {
        let mut out = BTreeMap::new();
        for x in net.vertices() {
            let off = net.adjacency_offset(x);
            for (k, &(y, _)) in net.neighbors(x).iter().enumerate() {
                let s = self.edge_slot[off + k];
                if s != UNTRACKED && self.transitions[s as usize].sum > 0 {
                    out.insert((x, y), self.transitions[s as usize]);
                }
            }
        }
        out
    }
}

fn adjacency_position(net: &Network, x: VertexId, y: VertexId) -> Option<usize> {
    if !net.contains(x) {
        return None;
    }
    net.neighbors(x).iter().position(|(n, _)| *n == y).map(|k| net.adjacency_offset(x) + k)
}

/// Per-vertex alias tables, stored flat and aligned with the network's
/// adjacency entries.
struct AliasTables {
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTables {
    fn new(net: &Network) -> Self {
        let mut prob = vec![0.0; net.adjacency_len()];
        let mut alias = vec![0u32; net.adjacency_len()];
        let mut small = Vec::new();
        let mut large = Vec::new();
        for x in net.vertices() {
            let off = net.adjacency_offset(x);
            let nbrs = net.neighbors(x);
            let k = nbrs.len();
            let pi = net.weight(x);
            let mut scaled: Vec<f64> = nbrs.iter().map(|&(_, e)| net.edge(e).c * k as f64 / pi).collect();
            small.clear();
            large.clear();
            for (i, &p) in scaled.iter().enumerate() {
                if p < 1.0 {
                    small.push(i);
                } else {
                    large.push(i);
                }
            }
            while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
                small.pop();
                prob[off + s] = scaled[s];
                alias[off + s] = l as u32;
                scaled[l] -= 1.0 - scaled[s];
                if scaled[l] < 1.0 {
                    large.pop();
                    small.push(l);
                }
            }
            for &i in large.iter().chain(&small) {
                prob[off + i] = 1.0;
                alias[off + i] = i as u32;
            }
        }
        AliasTables { prob, alias }
    }

    #[inline]
    fn sample<R: Rng>(&self, net: &Network, x: VertexId, rng: &mut R) -> usize {
        let off = net.adjacency_offset(x);
        let k = rng.random_range(0..net.degree(x));
        if rng.random::<f64>() < self.prob[off + k] {
            off + k
        } else {
            off + self.alias[off + k] as usize
        }
    }
}

struct Plan<'a> {
    net: &'a Network,
    tables: AliasTables,
    absorbing: Vec<bool>,
    visit_slot: Vec<u32>,
    visit_count: usize,
    edge_slot: Vec<u32>,
    edge_count: usize,
    cfg: &'a WalkConfig,
}

struct Block {
    hits: Vec<u64>,
    censored: u64,
    steps: u64,
    visits: Vec<Tally>,
    transitions: Vec<Tally>,
}

impl Plan<'_> {
    fn run_block(&self, walks: std::ops::Range<u64>) -> Block {
        let n = self.net.vertex_count();
        let mut block = Block {
            hits: vec![0; n],
            censored: 0,
            steps: 0,
            visits: vec![Tally::default(); self.visit_count],
            transitions: vec![Tally::default(); self.edge_count],
        };
        let mut visit_scratch = vec![0u64; self.visit_count];
        let mut edge_scratch = vec![0u64; self.edge_count];
        let mut touched_v: Vec<u32> = Vec::new();
        let mut touched_e: Vec<u32> = Vec::new();
        for walk in walks {
            let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
            rng.set_stream(walk);
            let mut x = self.cfg.start;
            let mut steps = 0u64;
            let visit = |x: VertexId, scratch: &mut Vec<u64>, touched: &mut Vec<u32>| {
                let s = self.visit_slot[x.0];
                if s != UNTRACKED {
                    if scratch[s as usize] == 0 {
                        touched.push(s);
                    }
                    scratch[s as usize] += 1;
                }
            };
            visit(x, &mut visit_scratch, &mut touched_v);
            loop {
                if steps == self.cfg.max_steps {
                    block.censored += 1;
                    break;
                }
                let pos = self.tables.sample(self.net, x, &mut rng);
                let s = self.edge_slot[pos];
                if s != UNTRACKED {
                    if edge_scratch[s as usize] == 0 {
                        touched_e.push(s);
                    }
                    edge_scratch[s as usize] += 1;
                }
                steps += 1;
                let y = self.net.adjacency_entry(pos).0;
                if self.absorbing[y.0] {
                    block.hits[y.0] += 1;
                    break;
                }
                visit(y, &mut visit_scratch, &mut touched_v);
                x = y;
            }
            block.steps += steps;
            for s in touched_v.drain(..) {
                block.visits[s as usize].add_walk(visit_scratch[s as usize]);
                visit_scratch[s as usize] = 0;
            }
            for s in touched_e.drain(..) {
                block.transitions[s as usize].add_walk(edge_scratch[s as usize]);
                edge_scratch[s as usize] = 0;
            }
        }
        block
    }
}

/// Runs `cfg.num_walks` independent walks and tallies absorptions, visits
/// and directed transitions.
pub fn run_walks(net: &Network, cfg: &WalkConfig) -> Result<WalkStats> {
    if !net.contains(cfg.start) {
        return Err(Error::InvalidStart(cfg.start.0));
    }
    if cfg.num_walks == 0 {
        return Err(Error::InvalidConfig("num_walks must be >= 1".into()));
    }
    if cfg.max_steps == 0 {
        return Err(Error::InvalidConfig("max_steps must be >= 1".into()));
    }
    let n = net.vertex_count();
    let mut absorbing = vec![false; n];
    for &x in &cfg.absorbing {
        net.check_vertex(x)?;
        absorbing[x.0] = true;
    }

    let (visit_slot, visit_count) = match &cfg.tracking.visits {
        None => ((0..n as u32).collect(), n),
        Some(list) => {
            let mut slots = vec![UNTRACKED; n];
            let mut count = 0;
            for &x in list {
                net.check_vertex(x)?;
                if slots[x.0] == UNTRACKED {
                    slots[x.0] = count as u32;
                    count += 1;
                }
            }
            (slots, count)
        }
    };
    let m2 = net.adjacency_len();
    let (edge_slot, edge_count) = match &cfg.tracking.transitions {
        None => ((0..m2 as u32).collect(), m2),
        Some(list) => {
            let mut slots = vec![UNTRACKED; m2];
            let mut count = 0;
            for &(x, y) in list {
                let pos = adjacency_position(net, x, y).ok_or(Error::NotAdjacent(x, y))?;
                if slots[pos] == UNTRACKED {
                    slots[pos] = count as u32;
                    count += 1;
                }
            }
            (slots, count)
        }
    };

    let plan = Plan {
        net,
        tables: AliasTables::new(net),
        absorbing,
        visit_slot,
        visit_count,
        edge_slot,
        edge_count,
        cfg,
    };
    let workers = match cfg.workers {
        0 => std::thread::available_parallelism().map_or(1, |p| p.get()),
        w => w,
    }
    .min(cfg.num_walks as usize)
    .max(1) as u64;
    let per = cfg.num_walks.div_ceil(workers);
    let ranges: Vec<_> = (0..workers)
        .map(|w| (w * per).min(cfg.num_walks)..((w + 1) * per).min(cfg.num_walks))
        .collect();
    let blocks: Vec<Block> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let plan = &plan;
                scope.spawn(move || plan.run_block(r))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("walk worker panicked")).collect()
    });

    let mut hits = vec![0u64; n];
    let mut censored = 0;
    let mut total_steps = 0;
    let mut visits = vec![Tally::default(); plan.visit_count];
    let mut transitions = vec![Tally::default(); plan.edge_count];
    for b in &blocks {
        for (h, bh) in hits.iter_mut().zip(&b.hits) {
            *h += bh;
        }
        censored += b.censored;
        total_steps += b.steps;
        for (t, bt) in visits.iter_mut().zip(&b.visits) {
            t.merge(bt);
        }
        for (t, bt) in transitions.iter_mut().zip(&b.transitions) {
            t.merge(bt);
        }
    }
    let hits = cfg.absorbing.iter().map(|&x| (x, hits[x.0])).collect();
    Ok(WalkStats {
        seed: cfg.seed,
        num_walks: cfg.num_walks,
        hits,
        censored,
        total_steps,
        visit_slot: plan.visit_slot,
        visits,
        edge_slot: plan.edge_slot,
        transitions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub std_err: f64,
    pub walks: u64,
    pub censored: u64,
}

impl Estimate {
    fn exact(value: f64, walks: u64) -> Self {
        Estimate { estimate: value, std_err: 0.0, walks, censored: 0 }
    }

    /// Binomial proportion over uncensored walks.
    fn proportion(successes: u64, stats: &WalkStats) -> Self {
        let n = stats.num_walks - stats.censored;
        let p = if n == 0 { 0.0 } else { successes as f64 / n as f64 };
        let std_err = if n == 0 { 0.0 } else { (p * (1.0 - p) / n as f64).sqrt() };
        Estimate { estimate: p, std_err, walks: stats.num_walks, censored: stats.censored }
    }

    fn mean(t: Tally, stats: &WalkStats) -> Self {
        let (estimate, std_err) = t.mean_and_err(stats.num_walks);
        Estimate { estimate, std_err, walks: stats.num_walks, censored: stats.censored }
    }

    /// Whether `value` lies within `k` standard errors.
    pub fn brackets(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.std_err
    }
}

fn with_absorbing(cfg: &WalkConfig, extra: &[VertexId], tracking: Tracking) -> WalkConfig {
    let mut c = cfg.clone();
    for &x in extra {
        if !c.absorbing.contains(&x) {
            c.absorbing.push(x);
        }
    }
    c.tracking = tracking;
    c
}

/// Fraction of walks reaching `target` before the configured absorbing set
/// (hitting time counted from 0: a walk starting on `target` has hit it).
pub fn estimate_hitting(net: &Network, cfg: &WalkConfig, target: VertexId) -> Result<Estimate> {
    net.check_vertex(target)?;
    if cfg.start == target {
        return Ok(Estimate::exact(1.0, cfg.num_walks));
    }
    let stats = run_walks(net, &with_absorbing(cfg, &[target], Tracking::nothing()))?;
    Ok(Estimate::proportion(stats.hits_at(target), &stats))
}

/// Mean number of visits to `x` before absorption, time 0 included.
pub fn estimate_green(net: &Network, cfg: &WalkConfig, x: VertexId) -> Result<Estimate> {
    let tracking = Tracking { visits: Some(vec![x]), transitions: Some(Vec::new()) };
    let stats = run_walks(net, &with_absorbing(cfg, &[], tracking))?;
    Ok(Estimate::mean(stats.visits(x).unwrap_or_default(), &stats))
}

/// Mean number of steps `x -> y` before absorption.
pub fn estimate_transitions(net: &Network, cfg: &WalkConfig, x: VertexId, y: VertexId) -> Result<Estimate> {
    adjacency_position(net, x, y).ok_or(Error::NotAdjacent(x, y))?;
    let tracking = Tracking { visits: Some(Vec::new()), transitions: Some(vec![(x, y)]) };
    let stats = run_walks(net, &with_absorbing(cfg, &[], tracking))?;
    Ok(Estimate::mean(stats.transitions(net, x, y).unwrap_or_default(), &stats))
}

/// `P_a(tau_Z < T_a)`: walks from `a` reaching `Z` before returning to `a`.
pub fn estimate_escape(net: &Network, cfg: &WalkConfig, a: VertexId, z: &[VertexId]) -> Result<Estimate> {
    net.check_vertex(a)?;
    if z.contains(&a) {
        return Err(Error::VertexInTarget(a));
    }
    let mut c = with_absorbing(cfg, z, Tracking::nothing());
    c.start = a;
    // return to a (at n >= 1) stops the walk as a failure
    if !c.absorbing.contains(&a) {
        c.absorbing.push(a);
    }
    let stats = run_walks(net, &c)?;
    let escaped = z.iter().map(|&x| stats.hits_at(x)).sum();
    Ok(Estimate::proportion(escaped, &stats))
}
