//! The weighted de Bruijn graph of a depth-k potential and cycle
//! optimization on it.
//!
//! Nodes are the 2^k words of length k; `u -> v` is an edge when `v` drops
//! the first symbol of `u` and appends one new symbol, and both edges
//! leaving `u` carry weight `f(u)`. Orbit averages of the potential become
//! mean weights of walks, so the extreme Birkhoff-average values realized by
//! points of the shift are exactly the extreme cycle means of this graph.
//! A cycle achieving the maximum yields a periodic witness configuration.
//!
//! The maximizing part of the graph (the "tight" subgraph) is found with a
//! potential function: with reduced weights `w~(u->v) = f(u) - mean*` there
//! is no positive-mean cycle, so relaxation of
//! `phi(v) >= phi(u) + w~(u->v)` stabilizes, and edges satisfying it with
//! equality carry every maximizing cycle. The topological entropy of that
//! subgraph (log of its adjacency spectral radius) is the measure-theoretic
//! entropy available at the endpoint.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::shift::{periodic_birkhoff_average, PccFunction, PeriodicPoint, SymbolFunction};

/// Which end of the Birkhoff-average support is being optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Min,
    Max,
}

/// Largest graph order accepted by the cycle optimizers: the dynamic
/// program costs O(|V|·|E|) = O(4^order) time.
pub const MAX_CYCLE_ORDER: usize = 16;

/// Largest order for the exact-rational path (big-rational arithmetic is
/// hundreds of times slower than f64).
pub const MAX_EXACT_ORDER: usize = 10;

/// Relative scale of the zero-reduced-weight test: relaxation accumulates
/// O(|V|) rounding, so tightness is judged at 1e-9 * max(1, sup-norm).
pub const TIGHTNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct WeightedDeBruijn {
    order: usize,
    weights: Vec<f64>,
}

impl WeightedDeBruijn {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.weights.len()
    }

    #[inline]
    fn mask(&self) -> usize {
        self.weights.len() - 1
    }

    /// Both edges leaving `u`, in increasing appended-symbol order.
    #[inline]
    pub fn successors(&self, u: usize) -> [usize; 2] {
        let s = (u << 1) & self.mask();
        [s, s | 1]
    }

    /// Both edges entering `v`, in increasing dropped-symbol order.
    #[inline]
    pub fn predecessors(&self, v: usize) -> [usize; 2] {
        let high = 1 << (self.order - 1);
        [v >> 1, (v >> 1) | high]
    }

    /// Weight carried by both edges leaving `u`.
    #[inline]
    pub fn weight(&self, u: usize) -> f64 {
        self.weights[u]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sup_norm(&self) -> f64 {
        self.weights.iter().fold(0.0f64, |m, w| m.max(w.abs()))
    }
}

/// Builds the order-k graph from a depth-k potential.
pub fn build_graph(f: &PccFunction) -> WeightedDeBruijn {
    WeightedDeBruijn { order: f.depth(), weights: f.table().to_vec() }
}

/// One extreme cycle: its mean, its simple node cycle, and the periodic
/// configuration reading the cycle's leading symbols.
#[derive(Debug, Clone)]
pub struct CycleReport {
    pub mean: f64,
    pub cycle: Vec<usize>,
    pub witness: PeriodicPoint,
}

/// Maximum cycle mean of the (optionally negated) weights by the two-pass
/// dynamic program: `d[j][v]` is the best j-edge walk weight from node 0,
/// and `mean* = max_v min_j (d[n][v] - d[j][v]) / (n - j)`.
///
/// The first pass keeps only `d[n]`; the second replays the recursion and
/// folds the min over j on the fly, so memory stays O(|V|). The value
/// returned is in the negated scale when `negate` is set; callers flip the
/// sign when reporting minima.
fn karp_max_mean(g: &WeightedDeBruijn, negate: bool) -> Result<f64> {
    if g.order() > MAX_CYCLE_ORDER {
        return Err(Error::DepthTooLarge { depth: g.order(), cap: MAX_CYCLE_ORDER });
    }
    let n = g.node_count();
    let sign = if negate { -1.0 } else { 1.0 };
    let w = |u: usize| sign * g.weight(u);

    let step = |cur: &[f64], nxt: &mut [f64]| {
        for v in 0..n {
            let [p0, p1] = g.predecessors(v);
            nxt[v] = (cur[p0] + w(p0)).max(cur[p1] + w(p1));
        }
    };

    let mut cur = vec![f64::NEG_INFINITY; n];
    let mut nxt = vec![f64::NEG_INFINITY; n];
    cur[0] = 0.0;
    for _ in 0..n {
        step(&cur, &mut nxt);
        std::mem::swap(&mut cur, &mut nxt);
    }
    let d_n = cur.clone();

    cur.fill(f64::NEG_INFINITY);
    cur[0] = 0.0;
    let mut best = vec![f64::INFINITY; n];
    for j in 0..n {
        for v in 0..n {
            if cur[v] > f64::NEG_INFINITY {
                let ratio = (d_n[v] - cur[v]) / (n - j) as f64;
                if ratio < best[v] {
                    best[v] = ratio;
                }
            }
        }
        step(&cur, &mut nxt);
        std::mem::swap(&mut cur, &mut nxt);
    }

    let mean = best
        .iter()
        .cloned()
        .filter(|b| b.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !mean.is_finite() {
        return Err(Error::NoConvergence("cycle-mean recursion produced no finite value".into()));
    }
    Ok(mean)
}

/// Potential for the reduced weights `sign*f(u) - mu`: after at most |V|
/// relaxation rounds `phi(v) >= phi(u) + w~(u)` holds on every edge.
fn relax_potentials(g: &WeightedDeBruijn, mu: f64, negate: bool) -> Result<Vec<f64>> {
    let n = g.node_count();
    let sign = if negate { -1.0 } else { 1.0 };
    let reduced = |u: usize| sign * g.weight(u) - mu;
    let stab_tol = 1e-11 * g.sup_norm().max(1.0);

    let mut phi = vec![0.0f64; n];
    let mut nxt = vec![0.0f64; n];
    let mut rounds = 0usize;
    loop {
        let mut biggest = 0.0f64;
        for v in 0..n {
            let [p0, p1] = g.predecessors(v);
            let cand = (phi[p0] + reduced(p0)).max(phi[p1] + reduced(p1));
            if cand > phi[v] {
                biggest = biggest.max(cand - phi[v]);
                nxt[v] = cand;
            } else {
                nxt[v] = phi[v];
            }
        }
        std::mem::swap(&mut phi, &mut nxt);
        rounds += 1;
        if biggest <= stab_tol {
            return Ok(phi);
        }
        if rounds > n + 2 {
            return Err(Error::NoConvergence(format!(
                "potential relaxation still moving by {biggest:.3e} after {rounds} rounds"
            )));
        }
    }
}

/// A subgraph of a de Bruijn graph, stored as sorted node and edge lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    order: usize,
    nodes: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Subgraph {
    /// Builds from an explicit edge list; every edge must be a legal
    /// de Bruijn overlap edge of the given order.
    pub fn new(order: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        let count = 1usize << order;
        let mask = count - 1;
        for &(u, v) in &edges {
            if u >= count || v >= count {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) outside the order-{order} node range"
                )));
            }
            if (v >> 1) != (u & (mask >> 1)) {
                return Err(Error::InvalidParameter(format!(
                    "({u},{v}) is not an overlap edge at order {order}"
                )));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut nodes: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        Ok(Self { order, nodes, edges })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// The maximizing subgraph together with the certifying potential and the
/// extreme mean it realizes.
#[derive(Debug, Clone)]
pub struct TightSubgraph {
    pub subgraph: Subgraph,
    /// Potential certifying `phi(u) + w~(u->v) <= phi(v)` graph-wide
    /// (computed on the negated weights when `side` is `Min`).
    pub potential: Vec<f64>,
    /// The extreme cycle mean: alpha*_max for `Max`, alpha*_min for `Min`.
    pub mean: f64,
    pub side: Side,
}

/// Strongly connected components (iterative Tarjan) of an adjacency list
/// over `0..n`; returns a component id per node.
fn scc_ids(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut ids = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut index = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![UNSEEN; n];
    let mut next_index = 0usize;
    let mut next_comp = 0usize;

    for root in 0..n {
        if ids[root] != UNSEEN {
            continue;
        }
        // explicit DFS frame: (node, next child position)
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        ids[root] = next_index;
        low[root] = next_index;
        index[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut child)) = frames.last_mut() {
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if ids[w] == UNSEEN {
                    ids[w] = next_index;
                    low[w] = next_index;
                    index[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Keeps only nodes lying on cycles: nodes whose strongly connected
/// component contains an edge. Returns (kept nodes, edges among them).
fn cyclic_core(order: usize, edges: &[(usize, usize)]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut nodes: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    let pos: std::collections::HashMap<usize, usize> =
        nodes.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut adj = vec![Vec::new(); nodes.len()];
    for &(u, v) in edges {
        adj[pos[&u]].push(pos[&v]);
    }
    let comp = scc_ids(nodes.len(), &adj);
    let mut cyclic = vec![false; nodes.len()];
    for (i, targets) in adj.iter().enumerate() {
        for &j in targets {
            if comp[i] == comp[j] {
                // an intra-component edge puts the whole component on a cycle
                cyclic[i] = true;
                cyclic[j] = true;
            }
        }
    }
    // propagate within components: one cyclic member marks all members
    let mut comp_cyclic = vec![false; nodes.len()];
    for i in 0..nodes.len() {
        if cyclic[i] {
            comp_cyclic[comp[i]] = true;
        }
    }
    let kept_nodes: Vec<usize> =
        (0..nodes.len()).filter(|&i| comp_cyclic[comp[i]]).map(|i| nodes[i]).collect();
    let kept: std::collections::HashSet<usize> = kept_nodes.iter().cloned().collect();
    let kept_edges: Vec<(usize, usize)> = edges
        .iter()
        .cloned()
        .filter(|&(u, v)| kept.contains(&u) && kept.contains(&v))
        .collect();
    let _ = order;
    (kept_nodes, kept_edges)
}

/// Maximizing (side = Max) or minimizing (side = Min) subgraph: the edges
/// whose potential-corrected reduced weight vanishes, restricted to nodes
/// on cycles. Every cycle inside has mean equal to the extreme value.
pub fn tight_subgraph(g: &WeightedDeBruijn, side: Side) -> Result<TightSubgraph> {
    let negate = matches!(side, Side::Min);
    let mu = karp_max_mean(g, negate)?;
    let phi = relax_potentials(g, mu, negate)?;
    let sign = if negate { -1.0 } else { 1.0 };
    let tol = TIGHTNESS_TOL * g.sup_norm().max(1.0);

    let mut edges = Vec::new();
    for u in 0..g.node_count() {
        let reduced = sign * g.weight(u) - mu;
        for v in g.successors(u) {
            if (phi[u] + reduced - phi[v]).abs() <= tol {
                edges.push((u, v));
            }
        }
    }
    let (nodes, edges) = cyclic_core(g.order(), &edges);
    if edges.is_empty() {
        return Err(Error::NoConvergence(
            "tightness tolerance retained no cycle; potentials did not certify the mean".into(),
        ));
    }
    let subgraph = Subgraph { order: g.order(), nodes, edges };
    Ok(TightSubgraph { subgraph, potential: phi, mean: sign * mu, side })
}

/// Deterministic cycle inside a cyclic subgraph: start at the smallest
/// node, repeatedly take the smallest successor, and cut at the first
/// repeat. Smallest-successor preference makes witnesses reproducible and
/// picks the all-zero loop whenever it is available.
fn extract_cycle(sub: &Subgraph) -> Vec<usize> {
    let mut succ: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for &(u, v) in sub.edges() {
        succ.entry(u).or_default().push(v);
    }
    for list in succ.values_mut() {
        list.sort_unstable();
    }
    let start = sub.nodes()[0];
    let mut seen_at: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut path = Vec::new();
    let mut u = start;
    loop {
        if let Some(&i) = seen_at.get(&u) {
            return path[i..].to_vec();
        }
        seen_at.insert(u, path.len());
        path.push(u);
        u = succ[&u][0];
    }
}

/// Periodic witness reading off the leading symbols along a node cycle.
fn cycle_witness(order: usize, cycle: &[usize]) -> PeriodicPoint {
    let bits: Vec<u8> = cycle.iter().map(|&u| ((u >> (order - 1)) & 1) as u8).collect();
    PeriodicPoint::new(bits).expect("cycle is nonempty").canonical()
}

fn extreme_mean_cycle(g: &WeightedDeBruijn, f: &PccFunction, side: Side) -> Result<CycleReport> {
    let tight = tight_subgraph(g, side)?;
    let cycle = extract_cycle(&tight.subgraph);
    let witness = cycle_witness(g.order(), &cycle);
    let sf: SymbolFunction = f.clone().into();
    let mean = periodic_birkhoff_average(&sf, &witness)?;
    // the walk may only pick up tolerance-level error against the DP value
    let slack = 64.0 * TIGHTNESS_TOL * g.sup_norm().max(1.0);
    if (mean - tight.mean).abs() > slack {
        return Err(Error::NoConvergence(format!(
            "extracted cycle mean {mean} disagrees with optimized mean {}",
            tight.mean
        )));
    }
    Ok(CycleReport { mean, cycle, witness })
}

/// Cycle of maximum mean weight; its witness realizes alpha*_max.
pub fn max_mean_cycle(g: &WeightedDeBruijn) -> Result<CycleReport> {
    let f = PccFunction::new(g.order(), g.weights().to_vec())?;
    extreme_mean_cycle(g, &f, Side::Max)
}

/// Cycle of minimum mean weight; its witness realizes alpha*_min.
pub fn min_mean_cycle(g: &WeightedDeBruijn) -> Result<CycleReport> {
    let f = PccFunction::new(g.order(), g.weights().to_vec())?;
    extreme_mean_cycle(g, &f, Side::Min)
}

/// Support endpoints of the Birkhoff-average spectrum with periodic
/// witnesses for both extremes.
#[derive(Debug, Clone)]
pub struct Endpoints {
    pub alpha_star_min: f64,
    pub alpha_star_max: f64,
    pub witness_min: PeriodicPoint,
    pub witness_max: PeriodicPoint,
}

pub fn endpoints(f: &PccFunction) -> Result<Endpoints> {
    let g = build_graph(f);
    let min = min_mean_cycle(&g)?;
    let max = max_mean_cycle(&g)?;
    Ok(Endpoints {
        alpha_star_min: min.mean,
        alpha_star_max: max.mean,
        witness_min: min.witness,
        witness_max: max.witness,
    })
}

/// Exact-rational maximum cycle mean. Table values convert exactly:
/// every finite f64 is a dyadic rational.
fn karp_max_mean_exact(order: usize, weights: &[BigRational]) -> Result<BigRational> {
    if order > MAX_EXACT_ORDER {
        return Err(Error::DepthTooLarge { depth: order, cap: MAX_EXACT_ORDER });
    }
    let n = weights.len();
    let mask = n - 1;
    let high = 1usize << (order - 1);
    let preds = |v: usize| [v >> 1, (v >> 1) | high];
    let _ = mask;

    let step = |cur: &[Option<BigRational>], nxt: &mut Vec<Option<BigRational>>| {
        for v in 0..n {
            let mut best: Option<BigRational> = None;
            for p in preds(v) {
                if let Some(d) = &cur[p] {
                    let cand = d + &weights[p];
                    if best.as_ref().is_none_or(|b| cand > *b) {
                        best = Some(cand);
                    }
                }
            }
            nxt[v] = best;
        }
    };

    let mut cur: Vec<Option<BigRational>> = vec![None; n];
    let mut nxt: Vec<Option<BigRational>> = vec![None; n];
    cur[0] = Some(BigRational::zero());
    for _ in 0..n {
        step(&cur, &mut nxt);
        std::mem::swap(&mut cur, &mut nxt);
    }
    let d_n = cur.clone();

    cur.iter_mut().for_each(|d| *d = None);
    cur[0] = Some(BigRational::zero());
    let mut best: Vec<Option<BigRational>> = vec![None; n];
    for j in 0..n {
        for v in 0..n {
            if let (Some(dj), Some(dn)) = (&cur[v], &d_n[v]) {
                let ratio = (dn - dj) / BigRational::from_integer(((n - j) as i64).into());
                if best[v].as_ref().is_none_or(|b| ratio < *b) {
                    best[v] = Some(ratio);
                }
            }
        }
        step(&cur, &mut nxt);
        std::mem::swap(&mut cur, &mut nxt);
    }

    best.into_iter()
        .flatten()
        .max()
        .ok_or_else(|| Error::NoConvergence("exact cycle-mean recursion found no cycle".into()))
}

/// Support endpoints in exact rational arithmetic.
pub fn endpoints_exact(f: &PccFunction) -> Result<(BigRational, BigRational)> {
    let weights: Vec<BigRational> = f
        .table()
        .iter()
        .map(|&v| {
            BigRational::from_float(v)
                .ok_or_else(|| Error::InvalidParameter(format!("non-finite value {v}")))
        })
        .collect::<Result<_>>()?;
    let negated: Vec<BigRational> = weights.iter().map(|w| -w).collect();
    let max = karp_max_mean_exact(f.depth(), &weights)?;
    let min = -karp_max_mean_exact(f.depth(), &negated)?;
    Ok((min, max))
}

/// Topological entropy of the sub-shift read off a subgraph: log of the
/// adjacency spectral radius.
///
/// The radius is the maximum over strongly connected components; each
/// component is irreducible, so power iteration on I + A (primitive there)
/// has Collatz-Wielandt bounds closing on the Perron root.
pub fn subgraph_entropy(sub: &Subgraph) -> Result<f64> {
    if sub.is_empty() {
        return Err(Error::Empty("subgraph has no edges".into()));
    }
    let nodes = sub.nodes();
    let pos: std::collections::HashMap<usize, usize> =
        nodes.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut adj = vec![Vec::new(); nodes.len()];
    for &(u, v) in sub.edges() {
        adj[pos[&u]].push(pos[&v]);
    }
    let comp = scc_ids(nodes.len(), &adj);
    let ncomp = comp.iter().max().map_or(0, |&c| c + 1);

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (i, &c) in comp.iter().enumerate() {
        members[c].push(i);
    }

    let mut best_rho = f64::NAN;
    for member in &members {
        let mut internal: Vec<(usize, usize)> = Vec::new();
        for &i in member {
            for &j in &adj[i] {
                if comp[j] == comp[i] {
                    internal.push((i, j));
                }
            }
        }
        if internal.is_empty() {
            continue;
        }
        let local: std::collections::HashMap<usize, usize> =
            member.iter().enumerate().map(|(li, &i)| (i, li)).collect();
        let m = member.len();
        let edges: Vec<(usize, usize)> =
            internal.iter().map(|&(i, j)| (local[&i], local[&j])).collect();
        let rho = component_radius(m, &edges)?;
        if best_rho.is_nan() || rho > best_rho {
            best_rho = rho;
        }
    }
    if best_rho.is_nan() {
        return Err(Error::InvalidParameter(
            "subgraph has nodes on no cycle; entropy is defined on cyclic cores".into(),
        ));
    }
    Ok(best_rho.ln())
}

/// Perron root of an irreducible 0/1 adjacency via power iteration on
/// I + A, subtracting the shift at the end.
fn component_radius(m: usize, edges: &[(usize, usize)]) -> Result<f64> {
    let mut v = vec![1.0f64; m];
    let mut next = vec![0.0f64; m];
    for iter in 0..1_000_000usize {
        next.copy_from_slice(&v);
        for &(i, j) in edges {
            next[i] += v[j];
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..m {
            let ratio = next[i] / v[i];
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        let norm = next.iter().fold(0.0f64, |a, &x| a.max(x));
        for x in next.iter_mut() {
            *x /= norm;
        }
        std::mem::swap(&mut v, &mut next);
        if hi - lo <= 1e-13 * hi {
            let _ = iter;
            return Ok(0.5 * (hi + lo) - 1.0);
        }
    }
    Err(Error::NoConvergence("power iteration on subgraph adjacency hit the cap".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::parse_word;
    use num_traits::{FromPrimitive, Signed};
    use proptest::prelude::*;

    fn depth3_signed() -> PccFunction {
        PccFunction::new(3, vec![-2.0, -3.0, -2.0, 1.0, -1.0, 2.0, 3.0, 2.0]).unwrap()
    }

    fn indicator() -> PccFunction {
        PccFunction::new(1, vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn graph_counts() {
        let g1 = build_graph(&indicator());
        assert_eq!((g1.node_count(), g1.edge_count()), (2, 4));
        assert_eq!(g1.successors(0), [0, 1]);
        assert_eq!(g1.successors(1), [0, 1]);
        let g3 = build_graph(&depth3_signed());
        assert_eq!((g3.node_count(), g3.edge_count()), (8, 16));
    }

    #[test]
    fn edge_weight_is_source_value() {
        let g = build_graph(&depth3_signed());
        let u = crate::shift::word_index(&parse_word("001").unwrap());
        let v = crate::shift::word_index(&parse_word("010").unwrap());
        assert!(g.successors(u).contains(&v));
        assert_eq!(g.weight(u), -3.0);
    }

    #[test]
    fn signed_function_extreme_cycles() {
        let g = build_graph(&depth3_signed());
        let max = max_mean_cycle(&g).unwrap();
        assert_eq!(max.mean, 2.0);
        assert_eq!(max.witness.period_word(), parse_word("011").unwrap().as_slice());
        let min = min_mean_cycle(&g).unwrap();
        assert_eq!(min.mean, -2.0);
        assert_eq!(min.witness.period_word(), &[0]);
    }

    #[test]
    fn indicator_endpoints_exact_floats() {
        let e = endpoints(&indicator()).unwrap();
        assert_eq!(e.alpha_star_min, 0.0);
        assert_eq!(e.alpha_star_max, 1.0);
        assert_eq!(e.witness_min.period_word(), &[0]);
        assert_eq!(e.witness_max.period_word(), &[1]);
    }

    #[test]
    fn constant_function_endpoints() {
        let f = PccFunction::constant(2, 0.75).unwrap();
        let e = endpoints(&f).unwrap();
        assert_eq!(e.alpha_star_min, 0.75);
        assert_eq!(e.alpha_star_max, 0.75);
    }

    #[test]
    fn exact_rational_endpoints() {
        let (min, max) = endpoints_exact(&depth3_signed()).unwrap();
        assert_eq!(min, BigRational::from_i64(-2).unwrap());
        assert_eq!(max, BigRational::from_i64(2).unwrap());
    }

    #[test]
    fn tight_subgraph_of_constant_is_whole_graph() {
        let f = PccFunction::constant(2, 1.5).unwrap();
        let t = tight_subgraph(&build_graph(&f), Side::Max).unwrap();
        assert_eq!(t.subgraph.nodes(), &[0, 1, 2, 3]);
        assert_eq!(t.subgraph.edges().len(), 8);
    }

    #[test]
    fn tight_subgraph_of_indicator_max_is_ones_loop() {
        let t = tight_subgraph(&build_graph(&indicator()), Side::Max).unwrap();
        assert_eq!(t.subgraph.nodes(), &[1]);
        assert_eq!(t.subgraph.edges(), &[(1, 1)]);
        assert_eq!(t.mean, 1.0);
    }

    #[test]
    fn tight_subgraph_min_side_of_signed_function() {
        let t = tight_subgraph(&build_graph(&depth3_signed()), Side::Min).unwrap();
        // 000, 001, 010, 100 in index form
        assert_eq!(t.subgraph.nodes(), &[0, 1, 2, 4]);
        let expected = vec![(0, 0), (0, 1), (1, 2), (2, 4), (4, 0), (4, 1)];
        assert_eq!(t.subgraph.edges(), expected.as_slice());
        assert_eq!(t.mean, -2.0);
    }

    #[test]
    fn tight_edges_have_zero_reduced_weight() {
        let f = depth3_signed();
        let g = build_graph(&f);
        let t = tight_subgraph(&g, Side::Max).unwrap();
        let tol = TIGHTNESS_TOL * g.sup_norm().max(1.0);
        for u in 0..g.node_count() {
            let reduced = g.weight(u) - t.mean;
            for v in g.successors(u) {
                let corrected = t.potential[u] + reduced - t.potential[v];
                assert!(corrected <= tol, "edge ({u},{v}) violates the potential");
                if t.subgraph.edges().contains(&(u, v)) {
                    assert!(corrected.abs() <= tol);
                }
            }
        }
    }

    #[test]
    fn entropy_of_full_graph_and_loop() {
        let full = tight_subgraph(&build_graph(&PccFunction::constant(3, 0.0).unwrap()), Side::Max)
            .unwrap()
            .subgraph;
        assert!((subgraph_entropy(&full).unwrap() - 2.0f64.ln()).abs() < 1e-12);
        let self_loop = Subgraph::new(2, vec![(3, 3)]).unwrap();
        assert!(subgraph_entropy(&self_loop).unwrap().abs() < 1e-12);
    }

    #[test]
    fn entropy_of_branch_every_three_steps() {
        // free symbol every third coordinate, zeros elsewhere: the shift
        // closure is the 6-edge graph on {000,001,010,100}
        let sub = Subgraph::new(3, vec![(0, 0), (0, 1), (1, 2), (2, 4), (4, 0), (4, 1)]).unwrap();
        let h = subgraph_entropy(&sub).unwrap();
        assert!(h / 2.0f64.ln() >= 1.0 / 3.0);
        // spectral radius solves rho^3 = rho^2 + 1; compare against bisection
        let mut lo = 1.0f64;
        let mut hi = 2.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid - mid * mid - 1.0 > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((h - lo.ln()).abs() < 1e-12);
    }

    #[test]
    fn subgraph_rejects_non_overlap_edges() {
        assert!(Subgraph::new(2, vec![(0, 3)]).is_err());
        assert!(Subgraph::new(2, vec![(0, 1)]).is_ok());
    }

    #[test]
    fn entropy_needs_a_cycle() {
        let path_only = Subgraph::new(2, vec![(0, 1)]).unwrap();
        assert!(subgraph_entropy(&path_only).is_err());
    }

    /// Random dyadic tables keep every cycle mean an exact small rational,
    /// so the float and exact optimizers must agree to the last bit.
    fn dyadic_table(depth: usize, seed: u64) -> PccFunction {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = || {
            state ^= state >> 27;
            state = state.wrapping_mul(0x2545f4914f6cdd1d);
            ((state >> 32) % 33) as f64 / 16.0 - 1.0
        };
        let table: Vec<f64> = (0..1usize << depth).map(|_| next()).collect();
        PccFunction::new(depth, table).unwrap()
    }

    proptest! {
        #[test]
        fn endpoints_inside_table_range(seed in 0u64..500, depth in 1usize..5) {
            let f = dyadic_table(depth, seed);
            let e = endpoints(&f).unwrap();
            prop_assert!(f.alpha_min() <= e.alpha_star_min + 1e-12);
            prop_assert!(e.alpha_star_min <= e.alpha_star_max);
            prop_assert!(e.alpha_star_max <= f.alpha_max() + 1e-12);
        }

        #[test]
        fn negation_flips_extremes(seed in 0u64..200, depth in 1usize..5) {
            let f = dyadic_table(depth, seed);
            let neg = f.scale(-1.0).unwrap();
            let e = endpoints(&f).unwrap();
            let en = endpoints(&neg).unwrap();
            prop_assert_eq!(e.alpha_star_max, -en.alpha_star_min);
            prop_assert_eq!(e.alpha_star_min, -en.alpha_star_max);
        }

        #[test]
        fn constant_shift_moves_means(seed in 0u64..200, depth in 1usize..5, c in -8i32..8) {
            let f = dyadic_table(depth, seed);
            let c = c as f64 / 4.0;
            let shifted = PccFunction::new(
                depth,
                f.table().iter().map(|v| v + c).collect(),
            ).unwrap();
            let a = max_mean_cycle(&build_graph(&f)).unwrap().mean;
            let b = max_mean_cycle(&build_graph(&shifted)).unwrap().mean;
            prop_assert!((b - (a + c)).abs() < 1e-13);
        }

        #[test]
        fn witness_average_equals_mean(seed in 0u64..300, depth in 1usize..5) {
            let f = dyadic_table(depth, seed);
            let report = max_mean_cycle(&build_graph(&f)).unwrap();
            let sf: SymbolFunction = f.into();
            let via_orbit = periodic_birkhoff_average(&sf, &report.witness).unwrap();
            prop_assert!((via_orbit - report.mean).abs() < 1e-12);
        }

        #[test]
        fn float_karp_matches_exact_karp(seed in 0u64..150, depth in 1usize..5) {
            let f = dyadic_table(depth, seed);
            let e = endpoints(&f).unwrap();
            let (min, max) = endpoints_exact(&f).unwrap();
            // dyadic cycle means have denominators <= 16*16, so converting
            // the float result back is collision-free
            let fmin = BigRational::from_float(e.alpha_star_min).unwrap();
            let fmax = BigRational::from_float(e.alpha_star_max).unwrap();
            let tol = BigRational::new(1.into(), 1_000_000_000i64.into());
            prop_assert!((fmin - min).abs() < tol);
            prop_assert!((fmax - max).abs() < tol);
        }
    }
}
