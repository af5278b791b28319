use crate::graph::CutGraph;

/// Side membership plus per-node weight toward side S, so a node can be
/// moved across the cut in O(n).
#[derive(Debug, Clone)]
pub(crate) struct CutState<'g> {
    graph: &'g CutGraph,
    in_s: Vec<bool>,
    to_s: Vec<u64>,
    weight: u64,
}

impl<'g> CutState<'g> {
    pub fn new(graph: &'g CutGraph, in_s: Vec<bool>) -> Self {
        let n = graph.n_nodes();
        let to_s = (0..n)
            .map(|v| {
                graph
                    .row(v)
                    .iter()
                    .zip(&in_s)
                    .filter(|(_, &s)| s)
                    .map(|(&w, _)| w as u64)
                    .sum()
            })
            .collect();
        let weight = graph.membership_weight(&in_s);
        Self {
            graph,
            in_s,
            to_s,
            weight,
        }
    }

    #[inline]
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn membership(&self) -> &[bool] {
        &self.in_s
    }

    /// Weight from `v` to nodes on the other side.
    #[inline]
    fn external(&self, v: usize) -> u64 {
        if self.in_s[v] {
            self.graph.row_sum(v) - self.to_s[v]
        } else {
            self.to_s[v]
        }
    }

    /// Weight from `v` to other nodes on its own side.
    #[inline]
    fn internal(&self, v: usize) -> u64 {
        self.graph.row_sum(v) - self.external(v)
    }

    /// Moves `x` to the other side.
    pub fn toggle(&mut self, x: usize) {
        let ext = self.external(x);
        let int = self.internal(x);
        self.weight = self.weight - ext + int;
        let entering = !self.in_s[x];
        self.in_s[x] = entering;
        let row = self.graph.row(x);
        if entering {
            for (t, &w) in self.to_s.iter_mut().zip(row) {
                *t += w as u64;
            }
        } else {
            for (t, &w) in self.to_s.iter_mut().zip(row) {
                *t -= w as u64;
            }
        }
    }

    /// Change in cut weight if `a` and `b` (on opposite sides) exchange sides.
    #[inline]
    pub fn swap_gain(&self, a: usize, b: usize) -> i64 {
        debug_assert_ne!(self.in_s[a], self.in_s[b]);
        self.internal(a) as i64 - self.external(a) as i64 + self.internal(b) as i64
            - self.external(b) as i64
            + 2 * self.graph.weight(a, b) as i64
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        self.toggle(a);
        self.toggle(b);
    }
}
