//! Exact minimum mean cycles in integer-weighted digraphs.
//!
//! Two independent solvers are provided:
//!
//! * [`karp`]: Karp's dynamic program. `O(V·E)` time and `O(V²)` memory, so it
//!   is only meant for graphs with a few thousand nodes.
//! * [`howard`]: policy iteration. Each round is `O(V + E)` and the number of
//!   rounds is small in practice, which makes it usable on the `2^16`-node
//!   window graphs built by [`crate::stategraph`].
//!
//! Both report the same canonical cycle among all optimal ones: the shortest,
//! then the one whose smallest node is least, listed from that node, then the
//! lexicographically least node sequence. Graphs are assumed to have no
//! parallel edges.

use std::collections::VecDeque;

use crate::rational::Rational;

/// Read access to a digraph with integer edge weights.
pub trait WeightedGraph {
    fn node_count(&self) -> usize;
    fn for_each_edge(&self, v: usize, f: &mut dyn FnMut(usize, i64));
}

/// Adjacency-list digraph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdjacencyGraph {
    adj: Vec<Vec<(usize, i64)>>,
}

impl AdjacencyGraph {
    pub fn new(n: usize) -> Self {
        AdjacencyGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: i64) {
        self.adj[from].push((to, weight));
    }

    pub fn edges(&self, v: usize) -> &[(usize, i64)] {
        &self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<i64> {
        self.adj[from].iter().find(|e| e.0 == to).map(|e| e.1)
    }

    /// Keeps only the edges accepted by `keep(from, to, weight)`.
    pub fn filtered(&self, mut keep: impl FnMut(usize, usize, i64) -> bool) -> AdjacencyGraph {
        AdjacencyGraph {
            adj: self
                .adj
                .iter()
                .enumerate()
                .map(|(v, es)| es.iter().copied().filter(|&(u, w)| keep(v, u, w)).collect())
                .collect(),
        }
    }
}

impl WeightedGraph for AdjacencyGraph {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn for_each_edge(&self, v: usize, f: &mut dyn FnMut(usize, i64)) {
        for &(u, w) in &self.adj[v] {
            f(u, w);
        }
    }
}

/// An optimal cycle `cycle[0] → cycle[1] → … → cycle[0]` and its mean weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanCycle {
    pub mean: Rational,
    pub cycle: Vec<usize>,
}

/// Compressed sparse rows, successors sorted by target.
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<i64>,
}

impl Csr {
    fn from_graph<G: WeightedGraph + ?Sized>(g: &G) -> Csr {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut buf: Vec<(usize, i64)> = Vec::new();
        offsets.push(0);
        for v in 0..n {
            buf.clear();
            g.for_each_edge(v, &mut |u, w| buf.push((u, w)));
            buf.sort_unstable();
            for &(u, w) in &buf {
                targets.push(u);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Csr {
            offsets,
            targets,
            weights,
        }
    }

    fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    fn edges(&self, v: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    /// Nodes from which some cycle is reachable.
    fn cyclic_core(&self) -> Vec<bool> {
        let n = self.n();
        let mut alive = vec![true; n];
        let mut outdeg: Vec<usize> = (0..n)
            .map(|v| self.offsets[v + 1] - self.offsets[v])
            .collect();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            for (u, _) in self.edges(v) {
                rev[u].push(v);
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| outdeg[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            alive[v] = false;
            for &p in &rev[v] {
                outdeg[p] -= 1;
                if outdeg[p] == 0 {
                    queue.push_back(p);
                }
            }
        }
        alive
    }
}

/// Whether the graph has any directed cycle.
pub fn has_cycle<G: WeightedGraph + ?Sized>(g: &G) -> bool {
    Csr::from_graph(g).cyclic_core().iter().any(|&a| a)
}

/// Canonical shortest cycle in the subgraph of critical edges.
///
/// `critical[v]` lists the critical successors of `v`, sorted. Returns `None`
/// when the subgraph is acyclic.
fn canonical_cycle(critical: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = critical.len();
    let mut best: Option<(usize, usize)> = None; // (length, start)
    let mut dist = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for v in 0..n {
        if critical[v].is_empty() {
            continue;
        }
        // Shortest cycle through v using only nodes >= v.
        let limit = best.map_or(usize::MAX, |b| b.0);
        dist[v] = 0;
        touched.push(v);
        queue.push_back(v);
        let mut found = None;
        'bfs: while let Some(x) = queue.pop_front() {
            if dist[x] + 1 >= limit {
                break;
            }
            for &y in &critical[x] {
                if y == v {
                    found = Some(dist[x] + 1);
                    break 'bfs;
                }
                if y > v && dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    touched.push(y);
                    queue.push_back(y);
                }
            }
        }
        for &t in &touched {
            dist[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        if let Some(len) = found {
            if best.is_none_or(|b| len < b.0) {
                best = Some((len, v));
            }
        }
    }
    let (len, start) = best?;

    // Distances to `start` over nodes >= start, by reverse BFS.
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in start..n {
        for &y in &critical[x] {
            if y >= start {
                rev[y].push(x);
            }
        }
    }
    let mut to_start = vec![usize::MAX; n];
    to_start[start] = 0;
    queue.push_back(start);
    while let Some(y) = queue.pop_front() {
        for &x in &rev[y] {
            if to_start[x] == usize::MAX {
                to_start[x] = to_start[y] + 1;
                queue.push_back(x);
            }
        }
    }

    let mut cycle = vec![start];
    let mut cur = start;
    for step in 1..len {
        let remaining = len - step;
        cur = *critical[cur]
            .iter()
            .find(|&&y| y > start && to_start[y] == remaining)
            .expect("a shortest cycle continues from every node on it");
        cycle.push(cur);
    }
    Some(cycle)
}

fn cycle_mean(csr: &Csr, cycle: &[usize]) -> Rational {
    let total: i64 = (0..cycle.len())
        .map(|i| {
            let (v, u) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            csr.edges(v).find(|e| e.0 == u).expect("cycle edge").1
        })
        .sum();
    Rational::new(total, cycle.len() as i64).expect("nonempty cycle")
}

/// Karp's algorithm. Returns `None` for acyclic graphs.
pub fn karp<G: WeightedGraph + ?Sized>(g: &G) -> Option<MeanCycle> {
    let csr = Csr::from_graph(g);
    let n = csr.n();
    if n == 0 {
        return None;
    }
    const INF: i64 = i64::MAX;
    // walks[k][v]: least weight of a walk with exactly k edges ending at v.
    let mut walks = vec![vec![INF; n]; n + 1];
    walks[0].iter_mut().for_each(|d| *d = 0);
    for k in 1..=n {
        let (prev, next) = walks.split_at_mut(k);
        let (prev, next) = (&prev[k - 1], &mut next[0]);
        for v in 0..n {
            if prev[v] == INF {
                continue;
            }
            for (u, w) in csr.edges(v) {
                let cand = prev[v] + w;
                if cand < next[u] {
                    next[u] = cand;
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for v in 0..n {
        if walks[n][v] == INF {
            continue;
        }
        let worst = (0..n)
            .filter(|&k| walks[k][v] != INF)
            .map(|k| Rational::new(walks[n][v] - walks[k][v], (n - k) as i64).expect("n > k"))
            .max()
            .expect("k = 0 is always finite");
        if best.is_none_or(|b| worst < b) {
            best = Some(worst);
        }
    }
    let mean = best?;

    // Potentials for the reduced weights w·q - p, which have no negative cycle.
    let (p, q) = (mean.numer(), mean.denom());
    let mut pot = vec![0i64; n];
    for _ in 0..n {
        let mut changed = false;
        for v in 0..n {
            for (u, w) in csr.edges(v) {
                let cand = pot[v] + w * q - p;
                if cand < pot[u] {
                    pot[u] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let critical: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            csr.edges(v)
                .filter(|&(u, w)| pot[v] + w * q - p == pot[u])
                .map(|(u, _)| u)
                .collect()
        })
        .collect();
    let cycle = canonical_cycle(&critical).expect("an optimal cycle is critical");
    debug_assert_eq!(cycle_mean(&csr, &cycle), mean);
    Some(MeanCycle { mean, cycle })
}

/// Policy iteration state for one node: the mean `p/q` of the cycle its
/// policy path ends in, and its bias scaled by `q`.
#[derive(Clone, Copy, Debug)]
struct Value {
    p: i64,
    q: i64,
    bias: i64,
}

impl Value {
    fn mean_cmp(&self, other: &Value) -> std::cmp::Ordering {
        (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
    }
}

/// Upper bound on policy-improvement rounds before giving up.
const HOWARD_MAX_ROUNDS: usize = 100_000;

/// Howard's policy iteration. Returns `None` for acyclic graphs.
///
/// # Panics
///
/// If the iteration fails to converge within an internal round limit.
pub fn howard<G: WeightedGraph + ?Sized>(g: &G) -> Option<MeanCycle> {
    let csr = Csr::from_graph(g);
    let n = csr.n();
    let alive = csr.cyclic_core();
    if !alive.iter().any(|&a| a) {
        return None;
    }

    let mut policy: Vec<usize> = (0..n)
        .map(|v| {
            if !alive[v] {
                return usize::MAX;
            }
            csr.edges(v)
                .filter(|&(u, _)| alive[u])
                .min_by_key(|&(u, w)| (w, u))
                .map(|(u, _)| u)
                .expect("alive nodes keep an alive successor")
        })
        .collect();
    let weight_of = |v: usize, u: usize| csr.edges(v).find(|e| e.0 == u).expect("policy edge").1;

    let mut values = vec![
        Value {
            p: 0,
            q: 1,
            bias: 0
        };
        n
    ];
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on current path, 2 done
    let mut path = Vec::new();

    for _round in 0..HOWARD_MAX_ROUNDS {
        // Value determination on the functional graph of the policy.
        state.iter_mut().for_each(|s| *s = 0);
        for start in 0..n {
            if !alive[start] || state[start] != 0 {
                continue;
            }
            path.clear();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                v = policy[v];
            }
            if state[v] == 1 {
                // New cycle: v..end of path.
                let pos = path.iter().position(|&x| x == v).expect("on path");
                let cyc = &path[pos..];
                let total: i64 = cyc.iter().map(|&x| weight_of(x, policy[x])).sum();
                let mean = Rational::new(total, cyc.len() as i64).expect("nonempty");
                let (p, q) = (mean.numer(), mean.denom());
                let root_idx = (0..cyc.len()).min_by_key(|&i| cyc[i]).expect("nonempty");
                let root = cyc[root_idx];
                values[root] = Value { p, q, bias: 0 };
                state[root] = 2;
                // Walk backwards around the cycle from the root.
                let len = cyc.len();
                for k in 1..len {
                    let x = cyc[(root_idx + len - k) % len];
                    let next = values[policy[x]];
                    values[x] = Value {
                        p,
                        q,
                        bias: weight_of(x, policy[x]) * q - p + next.bias,
                    };
                    state[x] = 2;
                }
                path.truncate(pos);
            }
            // Remaining path nodes hang off finished nodes.
            while let Some(x) = path.pop() {
                let next = values[policy[x]];
                values[x] = Value {
                    p: next.p,
                    q: next.q,
                    bias: weight_of(x, policy[x]) * next.q - next.p + next.bias,
                };
                state[x] = 2;
            }
        }

        // Improvement of the cycle means.
        let mut changed = false;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let mut best = policy[v];
            for (u, _) in csr.edges(v) {
                if alive[u] && values[u].mean_cmp(&values[best]).is_lt() {
                    best = u;
                }
            }
            if best != policy[v] {
                policy[v] = best;
                changed = true;
            }
        }
        if changed {
            continue;
        }

        // Improvement of the biases among successors with equal mean.
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let own = values[v];
            let mut best = (own.bias, policy[v]);
            for (u, w) in csr.edges(v) {
                if !alive[u] || values[u].mean_cmp(&own).is_ne() {
                    continue;
                }
                let cand = w * own.q - own.p + values[u].bias;
                if cand < best.0 {
                    best = (cand, u);
                }
            }
            if best.1 != policy[v] {
                policy[v] = best.1;
                changed = true;
            }
        }
        if changed {
            continue;
        }

        let opt = (0..n)
            .filter(|&v| alive[v])
            .map(|v| values[v])
            .min_by(|a, b| a.mean_cmp(b))
            .expect("some node is alive");
        let mean = Rational::new(opt.p, opt.q).expect("positive length");
        let critical: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if !alive[v] || values[v].mean_cmp(&opt).is_ne() {
                    return Vec::new();
                }
                csr.edges(v)
                    .filter(|&(u, w)| {
                        alive[u]
                            && values[u].mean_cmp(&opt).is_eq()
                            && w * opt.q - opt.p + values[u].bias == values[v].bias
                    })
                    .map(|(u, _)| u)
                    .collect()
            })
            .collect();
        let cycle = canonical_cycle(&critical).expect("the optimal policy cycle is critical");
        debug_assert_eq!(cycle_mean(&csr, &cycle), mean);
        return Some(MeanCycle { mean, cycle });
    }
    panic!("policy iteration did not converge within {HOWARD_MAX_ROUNDS} rounds");
}
