use super::{Network, VertexId};

/// The reversible chain of a network: `pi(x) = sum_y c(x,y)` and
/// `p(x,y) = c(x,y) / pi(x)`.
#[derive(Clone, Debug)]
pub struct MarkovView {
    pi: Vec<f64>,
    offsets: Vec<usize>,
    entries: Vec<(VertexId, f64)>,
}

impl MarkovView {
    pub fn new(net: &Network) -> Self {
        let n = net.vertex_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut entries = Vec::with_capacity(2 * net.edge_count());
        offsets.push(0);
        for x in net.vertices() {
            let pi = net.weight(x);
            for &(y, e) in net.neighbors(x) {
                entries.push((y, net.edge(e).c / pi));
            }
            offsets.push(entries.len());
        }
        MarkovView { pi: net.weights().to_vec(), offsets, entries }
    }

    pub fn pi(&self, x: VertexId) -> f64 {
        self.pi[x.0]
    }

    pub fn stationary_weights(&self) -> &[f64] {
        &self.pi
    }

    /// Non-zero entries `(y, p(x,y))` of row `x`.
    pub fn row(&self, x: VertexId) -> &[(VertexId, f64)] {
        &self.entries[self.offsets[x.0]..self.offsets[x.0 + 1]]
    }

    pub fn p(&self, x: VertexId, y: VertexId) -> f64 {
        self.row(x).iter().find(|(z, _)| *z == y).map_or(0.0, |&(_, p)| p)
    }

    pub fn vertex_count(&self) -> usize {
        self.pi.len()
    }

    /// Largest `|sum_y p(x,y) - 1|` over all rows.
    pub fn max_row_defect(&self) -> f64 {
        (0..self.vertex_count())
            .map(|x| (self.row(VertexId(x)).iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|pi(x) p(x,y) - pi(y) p(y,x)|` over all adjacent pairs.
    pub fn max_balance_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in 0..self.vertex_count() {
            let x = VertexId(x);
            for &(y, pxy) in self.row(x) {
                let d = (self.pi(x) * pxy - self.pi(y) * self.p(y, x)).abs();
                worst = worst.max(d);
            }
        }
        worst
    }
}
