//! Successive shortest paths with Johnson potentials on integer costs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub(crate) struct MinCostFlow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    pub(crate) pot: Vec<i64>,
}

impl MinCostFlow {
    pub(crate) fn new(nodes: usize) -> Self {
        MinCostFlow { adj: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new(), cost: Vec::new(), pot: vec![0; nodes] }
    }

    /// Adds `a → b`; its residual twin is the returned id xor 1.
    pub(crate) fn add_edge(&mut self, a: usize, b: usize, cap: i64, cost: i64) -> usize {
        debug_assert!(cost >= 0);
        let id = self.to.len();
        self.adj[a].push(id);
        self.to.push(b);
        self.cap.push(cap);
        self.cost.push(cost);
        self.adj[b].push(id + 1);
        self.to.push(a);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    pub(crate) fn flow_on(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    /// Pushes up to `limit` units from `s` to `t`; returns `(flow, cost)`.
    pub(crate) fn run(&mut self, s: usize, t: usize, limit: i64) -> (i64, i128) {
        self.run_steps(s, t, limit, |_, _| {})
    }

    /// Successive shortest paths; `on_step` sees the running flow and cost
    /// after each augmentation.
    pub(crate) fn run_steps(
        &mut self,
        s: usize,
        t: usize,
        limit: i64,
        mut on_step: impl FnMut(i64, i128),
    ) -> (i64, i128) {
        let nodes = self.adj.len();
        let mut flow = 0i64;
        let mut total: i128 = 0;
        let mut dist = vec![i64::MAX; nodes];
        let mut parent = vec![usize::MAX; nodes];
        while flow < limit {
            dist.iter_mut().for_each(|d| *d = i64::MAX);
            parent.iter_mut().for_each(|p| *p = usize::MAX);
            dist[s] = 0;
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, x))) = heap.pop() {
                if d > dist[x] {
                    continue;
                }
                for &e in &self.adj[x] {
                    if self.cap[e] <= 0 {
                        continue;
                    }
                    let y = self.to[e];
                    let nd = d + self.cost[e] + self.pot[x] - self.pot[y];
                    if nd < dist[y] {
                        dist[y] = nd;
                        parent[y] = e;
                        heap.push(Reverse((nd, y)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            let reach = dist.iter().copied().filter(|&d| d != i64::MAX).max().unwrap_or(0);
            for (p, &d) in self.pot.iter_mut().zip(&dist) {
                *p += if d == i64::MAX { reach } else { d };
            }
            let mut push = limit - flow;
            let mut y = t;
            while y != s {
                let e = parent[y];
                push = push.min(self.cap[e]);
                y = self.to[e ^ 1];
            }
            let mut y = t;
            while y != s {
                let e = parent[y];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                total += push as i128 * self.cost[e] as i128;
                y = self.to[e ^ 1];
            }
            flow += push;
            on_step(flow, total);
        }
        (flow, total)
    }

    /// Every residual arc has non-negative reduced cost.
    pub(crate) fn potentials_feasible(&self) -> bool {
        (0..self.to.len()).all(|e| {
            let from = self.to[e ^ 1];
            self.cap[e] <= 0 || self.cost[e] + self.pot[from] - self.pot[self.to[e]] >= 0
        })
    }
}
