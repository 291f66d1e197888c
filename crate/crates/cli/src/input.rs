//! Network sources and vertex-set expressions on the command line.

use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use resistive_walks::tree::{build_tree, contracted_tree, TreeNetwork, TreeSpec};
use resistive_walks::{Network, VertexId};

/// `q,n` with `n` optional.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeArg {
    pub q: usize,
    pub n: Option<usize>,
}

impl FromStr for TreeArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut parts = s.split(',');
        let q = parts.next().unwrap_or("").trim().parse::<usize>().map_err(|e| format!("bad q: {e}"))?;
        let n = match parts.next() {
            Some(t) => Some(t.trim().parse::<usize>().map_err(|e| format!("bad n: {e}"))?),
            None => None,
        };
        if parts.next().is_some() {
            return Err("expected q,n".into());
        }
        if q < 2 {
            return Err(format!("q must be >= 2, got {q}"));
        }
        Ok(TreeArg { q, n })
    }
}

impl std::fmt::Display for TreeArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.n {
            Some(n) => write!(f, "{},{}", self.q, n),
            None => write!(f, "{}", self.q),
        }
    }
}

pub enum Source {
    File(Network),
    Tree(TreeNetwork),
}

impl Source {
    pub fn net(&self) -> &Network {
        match self {
            Source::File(net) => net,
            Source::Tree(t) => &t.net,
        }
    }

    pub fn tree(&self) -> Option<&TreeNetwork> {
        match self {
            Source::Tree(t) => Some(t),
            Source::File(_) => None,
        }
    }
}

pub fn load_network(path: &Path) -> Result<Network> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Network::from_json(&text)?)
}

/// The `q`-ary tree with levels `0..=n`.
pub fn full_tree(arg: TreeArg) -> Result<TreeNetwork> {
    let Some(n) = arg.n else { bail!("--tree needs q,n here") };
    if n == 0 {
        bail!("--tree needs n >= 1");
    }
    Ok(build_tree(TreeSpec::new(arg.q, n))?)
}

/// The tree with every level `>= n` contracted into one vertex `z`.
pub fn shell_tree(q: usize, n: usize) -> Result<TreeNetwork> {
    Ok(contracted_tree(q, n)?)
}

pub fn parse_vertex(net: &Network, s: &str, tree: Option<&TreeNetwork>) -> Result<VertexId> {
    let s = s.trim();
    if s == "z" {
        return tree.and_then(|t| t.z).context("vertex z only exists on shell-truncated trees");
    }
    let id: usize = s.parse().with_context(|| format!("bad vertex id {s:?}"))?;
    net.check_vertex(VertexId(id))?;
    Ok(VertexId(id))
}

/// `level:k`, `z`, or a comma-separated list of ids.
pub fn parse_set(net: &Network, s: &str, tree: Option<&TreeNetwork>) -> Result<Vec<VertexId>> {
    if let Some(k) = s.trim().strip_prefix("level:") {
        let k: usize = k.parse().with_context(|| format!("bad level {k:?}"))?;
        let tree = tree.context("level:k needs --tree")?;
        let level = tree.level(k);
        if level.is_empty() {
            bail!("the tree has no level {k}");
        }
        return Ok(level);
    }
    let set: Vec<VertexId> = s.split(',').map(|t| parse_vertex(net, t, tree)).collect::<Result<_>>()?;
    if set.is_empty() {
        bail!("empty vertex set");
    }
    Ok(set)
}

/// `x,y` as an ordered pair of vertices.
pub fn parse_pair(net: &Network, s: &str, tree: Option<&TreeNetwork>) -> Result<(VertexId, VertexId)> {
    match s.split_once(',') {
        Some((x, y)) => Ok((parse_vertex(net, x, tree)?, parse_vertex(net, y, tree)?)),
        None => bail!("expected x,y, got {s:?}"),
    }
}
