//! Min-fill elimination and the first-stage edge scores.
//!
//! The elimination works on dense bitset rows, so one step costs
//! `O(n * d * n/64)` for the fill counts; at a few hundred vertices the
//! whole trace takes milliseconds.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, UGraph};
use crate::interaction::InteractionGraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationStep {
    pub vertex: usize,
    /// `{vertex}` plus its neighbors at elimination time, ascending.
    pub bag: Vec<usize>,
    pub fill_edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EliminationTrace {
    pub ordering: Vec<usize>,
    pub steps: Vec<EliminationStep>,
    pub tw_ub: usize,
}

impl EliminationTrace {
    /// One JSON object per step: `{"step", "vertex", "bag", "fill_edges"}`.
    pub fn to_json_lines(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            step: usize,
            #[serde(flatten)]
            inner: &'a EliminationStep,
        }
        let mut out = String::new();
        for (step, inner) in self.steps.iter().enumerate() {
            out.push_str(&serde_json::to_string(&Line { step, inner }).expect("plain data"));
            out.push('\n');
        }
        out
    }
}

struct Rows {
    words: usize,
    bits: Vec<u64>,
}

impl Rows {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Rows {
            words,
            bits: vec![0; n * words],
        }
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    fn clear(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn common(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn members(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.row(u).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// Min-fill elimination with ties going to the smallest vertex id.
pub fn min_fill_trace(g: &UGraph) -> Result<EliminationTrace> {
    let rank: Vec<usize> = (0..g.node_count()).collect();
    min_fill_trace_ranked(g, &rank)
}

/// Min-fill elimination with ties going to the vertex of smallest `rank`.
/// `rank` must be a permutation of `0..n`.
pub fn min_fill_trace_ranked(g: &UGraph, rank: &[usize]) -> Result<EliminationTrace> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut seen = vec![false; n];
    if rank.len() != n || rank.iter().any(|&r| r >= n || std::mem::replace(&mut seen[r], true)) {
        return Err(Error::param("rank", "must be a permutation of the vertex ids"));
    }

    let mut adj = Rows::new(n);
    for e in g.edges() {
        adj.set(e.u(), e.v());
        adj.set(e.v(), e.u());
    }
    let mut alive = vec![true; n];
    let mut ordering = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    let mut tw_ub = 0;

    let fill_count = |adj: &Rows, v: usize| -> usize {
        let nb = adj.members(v);
        let d = nb.len();
        let linked: usize = nb.iter().map(|&x| adj.common(v, x)).sum();
        (d * d.saturating_sub(1) - linked) / 2
    };

    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill_count(&adj, v), rank[v]))
            .expect("a vertex is left");
        let nb = adj.members(v);
        let mut fill_edges = Vec::new();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if !adj.has(x, y) {
                    fill_edges.push(Edge::new(x, y));
                }
            }
        }
        for e in &fill_edges {
            adj.set(e.u(), e.v());
            adj.set(e.v(), e.u());
        }
        for &x in &nb {
            adj.clear(x, v);
        }
        debug_assert_eq!(adj.degree(v), nb.len());
        alive[v] = false;

        let mut bag = nb;
        bag.push(v);
        bag.sort_unstable();
        tw_ub = tw_ub.max(bag.len() - 1);
        ordering.push(v);
        steps.push(EliminationStep {
            vertex: v,
            bag,
            fill_edges,
        });
    }
    Ok(EliminationTrace {
        ordering,
        steps,
        tw_ub,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage1Scores {
    pub alpha: f64,
    pub beta: f64,
    /// score1 for every interaction edge, zero included.
    pub scores: BTreeMap<Edge, f64>,
}

impl Stage1Scores {
    pub fn get(&self, e: Edge) -> f64 {
        self.scores.get(&e).copied().unwrap_or(0.0)
    }
}

/// `score1(e) = w(e) * Σ_v g(v) * #{fill edges of v with an endpoint x such
/// that e = {v, x}}`, with `g(v) = α(|B(v)| - 1) + β|F(v)|`. Only original
/// interaction edges collect credit.
pub fn stage1_scores(
    ig: &InteractionGraph,
    trace: &EliminationTrace,
    alpha: f64,
    beta: f64,
) -> Stage1Scores {
    let mut acc: BTreeMap<Edge, f64> = ig.weighted_edges().map(|(e, _)| (e, 0.0)).collect();
    for step in &trace.steps {
        let v = step.vertex;
        let g = alpha * (step.bag.len() - 1) as f64 + beta * step.fill_edges.len() as f64;
        for f in &step.fill_edges {
            for x in [f.u(), f.v()] {
                if let Some(a) = acc.get_mut(&Edge::new(v, x)) {
                    *a += g;
                }
            }
        }
    }
    let scores = acc
        .into_iter()
        .map(|(e, a)| (e, ig.weight(e) as f64 * a))
        .collect();
    Stage1Scores {
        alpha,
        beta,
        scores,
    }
}

/// Top-`k` edges by score1, ties in edge order. When every score is zero
/// the highest-weight edges are returned instead, and every edge tied with
/// the `k`-th weight is kept so the second stage can separate them.
pub fn shortlist(scores: &Stage1Scores, ig: &InteractionGraph, k: usize) -> Result<Vec<Edge>> {
    if k == 0 {
        return Err(Error::param("k", "must be >= 1"));
    }
    if ig.edge_count() == 0 {
        return Err(Error::NoTwoQubitGates);
    }
    let mut edges: Vec<Edge> = ig
        .weighted_edges()
        .filter(|&(e, _)| !ig.occurrences(e).is_empty())
        .map(|(e, _)| e)
        .collect();
    if edges.iter().all(|&e| scores.get(e) == 0.0) {
        edges.sort_by(|a, b| ig.weight(*b).cmp(&ig.weight(*a)).then(a.cmp(b)));
        let cutoff = ig.weight(edges[k.min(edges.len()) - 1]);
        edges.retain(|&e| ig.weight(e) >= cutoff);
        return Ok(edges);
    }
    edges.sort_by(|a, b| scores.get(*b).total_cmp(&scores.get(*a)).then(a.cmp(b)));
    edges.truncate(k);
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_from_graph, Circuit, Gate};
    use crate::graph::{generate, GraphFamily, GraphFamilySpec};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ig_of(g: &UGraph) -> InteractionGraph {
        InteractionGraph::extract(&circuit_from_graph(g).unwrap())
    }

    fn cycle(n: usize) -> UGraph {
        UGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn clique(n: usize) -> UGraph {
        let mut g = UGraph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    }

    /// Width of eliminating in a fixed order, computed on neighbor sets.
    fn width_of_order(g: &UGraph, order: &[usize]) -> usize {
        let n = g.node_count();
        let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|u| g.neighbors(u).collect()).collect();
        let mut width = 0;
        for &v in order {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            width = width.max(nb.len());
            for &x in &nb {
                adj[x].remove(&v);
                for &y in &nb {
                    if x != y {
                        adj[x].insert(y);
                    }
                }
            }
        }
        width
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn path_cycle_clique_widths() {
        let p5 = UGraph::from_edges(5, (0..4).map(|i| (i, i + 1))).unwrap();
        let t = min_fill_trace(&p5).unwrap();
        assert_eq!(t.tw_ub, 1);
        assert!(t.steps.iter().all(|s| s.fill_edges.is_empty()));

        let c5 = cycle(5);
        assert_eq!(min_fill_trace(&c5).unwrap().tw_ub, 2);
        let exact = permutations(5).iter().map(|o| width_of_order(&c5, o)).min().unwrap();
        assert_eq!(exact, 2);

        assert_eq!(min_fill_trace(&clique(4)).unwrap().tw_ub, 3);
        assert!(min_fill_trace(&UGraph::new(0)).is_err());
    }

    #[test]
    fn trace_shape() {
        let g = generate(&GraphFamilySpec::new(GraphFamily::ErdosRenyi { n: 30, p: 0.2 }, 3)).unwrap();
        let t = min_fill_trace(&g).unwrap();
        assert_eq!(t.steps.len(), 30);
        let mut ord = t.ordering.clone();
        ord.sort_unstable();
        assert_eq!(ord, (0..30).collect::<Vec<_>>());
        for s in &t.steps {
            assert!(s.bag.contains(&s.vertex));
            for f in &s.fill_edges {
                assert!(f.u() != s.vertex && f.v() != s.vertex);
                assert!(s.bag.contains(&f.u()) && s.bag.contains(&f.v()));
            }
        }
        assert_eq!(t.tw_ub, t.steps.iter().map(|s| s.bag.len() - 1).max().unwrap());
        assert_eq!(t.tw_ub, width_of_order(&g, &t.ordering));
    }

    #[test]
    fn json_lines_shape() {
        let t = min_fill_trace(&cycle(4)).unwrap();
        let first = t.to_json_lines().lines().next().unwrap().to_string();
        assert_eq!(first, r#"{"step":0,"vertex":0,"bag":[0,1,3],"fill_edges":[[1,3]]}"#);
    }

    /// Independent reimplementation on neighbor sets, straight from the
    /// definition of the score.
    fn naive_scores(g: &UGraph, weights: &BTreeMap<Edge, usize>) -> BTreeMap<Edge, f64> {
        let n = g.node_count();
        let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|u| g.neighbors(u).collect()).collect();
        let mut alive: BTreeSet<usize> = (0..n).collect();
        let mut acc: BTreeMap<Edge, f64> = weights.keys().map(|&e| (e, 0.0)).collect();
        while !alive.is_empty() {
            let fills = |v: usize, adj: &Vec<BTreeSet<usize>>| -> Vec<(usize, usize)> {
                let nb: Vec<usize> = adj[v].iter().copied().collect();
                let mut out = vec![];
                for i in 0..nb.len() {
                    for j in i + 1..nb.len() {
                        if !adj[nb[i]].contains(&nb[j]) {
                            out.push((nb[i], nb[j]));
                        }
                    }
                }
                out
            };
            let mut best = None;
            for &v in &alive {
                let f = fills(v, &adj).len();
                if best.map_or(true, |(bf, _)| f < bf) {
                    best = Some((f, v));
                }
            }
            let v = best.unwrap().1;
            let f = fills(v, &adj);
            let g_v = adj[v].len() as f64 + f.len() as f64;
            for &(x, y) in &f {
                for end in [x, y] {
                    if let Some(a) = acc.get_mut(&Edge::new(v, end)) {
                        *a += g_v;
                    }
                }
            }
            for &(x, y) in &f {
                adj[x].insert(y);
                adj[y].insert(x);
            }
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            for x in nb {
                adj[x].remove(&v);
            }
            adj[v].clear();
            alive.remove(&v);
        }
        acc.into_iter().map(|(e, a)| (e, weights[&e] as f64 * a)).collect()
    }

    #[test]
    fn c4_scores() {
        let g = cycle(4);
        let ig = ig_of(&g);
        let t = min_fill_trace(&g).unwrap();
        assert_eq!(t.steps[0].vertex, 0);
        assert_eq!(t.steps[0].fill_edges, vec![Edge::new(1, 3)]);
        let s = stage1_scores(&ig, &t, 1.0, 1.0);
        assert_eq!(s.get(Edge::new(0, 1)), 3.0);
        assert_eq!(s.get(Edge::new(0, 3)), 3.0);
        assert_eq!(s.get(Edge::new(1, 2)), 0.0);
        assert_eq!(s.get(Edge::new(2, 3)), 0.0);
        let weights = ig.weighted_edges().collect();
        assert_eq!(naive_scores(&g, &weights), s.scores);

        let sl = shortlist(&s, &ig, 3).unwrap();
        assert_eq!(&sl[..2], &[Edge::new(0, 1), Edge::new(0, 3)]);
        assert_eq!(sl.len(), 3);
    }

    #[test]
    fn tree_scores_zero_and_fallback() {
        // star plus a doubled edge: weights decide the fallback
        let mut c = Circuit::new(5);
        for (a, b) in [(0, 1), (0, 2), (0, 3), (3, 4), (3, 4), (0, 2)] {
            c.push(Gate::Cx { control: a, target: b }).unwrap();
        }
        let ig = InteractionGraph::extract(&c);
        let s = stage1_scores(&ig, &min_fill_trace(ig.base()).unwrap(), 1.0, 1.0);
        assert!(s.scores.values().all(|&x| x == 0.0));
        let sl = shortlist(&s, &ig, 2).unwrap();
        assert_eq!(sl, vec![Edge::new(0, 2), Edge::new(3, 4)]);
        // third place is a three-way weight tie, all kept
        let sl = shortlist(&s, &ig, 3).unwrap();
        assert_eq!(sl, vec![Edge::new(0, 2), Edge::new(3, 4), Edge::new(0, 1), Edge::new(0, 3)]);
        assert!(shortlist(&s, &ig, 0).is_err());
        let empty = InteractionGraph::extract(&Circuit::new(2));
        assert!(shortlist(&s, &empty, 3).is_err());
    }

    #[test]
    fn shortlist_truncates() {
        let g = generate(&GraphFamilySpec::new(GraphFamily::Grid { rows: 4, cols: 4 }, 0)).unwrap();
        let ig = ig_of(&g);
        let s = stage1_scores(&ig, &min_fill_trace(&g).unwrap(), 1.0, 1.0);
        assert!(s.scores.values().filter(|&&x| x > 0.0).count() > 3);
        let sl = shortlist(&s, &ig, 3).unwrap();
        assert_eq!(sl.len(), 3);
        assert!(sl.windows(2).all(|w| s.get(w[0]) >= s.get(w[1])));
    }

    #[test]
    fn doubling_weights_doubles_scores() {
        let g = generate(&GraphFamilySpec::new(GraphFamily::ErdosRenyi { n: 12, p: 0.35 }, 11)).unwrap();
        let once = circuit_from_graph(&g).unwrap();
        let mut twice = Circuit::new(12);
        for gate in once.gates() {
            twice.push(*gate).unwrap();
            twice.push(*gate).unwrap();
        }
        let (a, b) = (InteractionGraph::extract(&once), InteractionGraph::extract(&twice));
        let t = min_fill_trace(&g).unwrap();
        let (sa, sb) = (stage1_scores(&a, &t, 1.0, 1.0), stage1_scores(&b, &t, 1.0, 1.0));
        for (e, v) in &sa.scores {
            assert_eq!(2.0 * v, sb.get(*e));
        }
        assert_eq!(shortlist(&sa, &a, 3).unwrap(), shortlist(&sb, &b, 3).unwrap());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = UGraph> {
        (2..=max_n, any::<u64>(), 0.1f64..0.9).prop_map(|(n, seed, p)| {
            generate(&GraphFamilySpec::new(GraphFamily::ErdosRenyi { n, p }, seed)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn scores_match_naive(g in arb_graph(14)) {
            let ig = ig_of(&g);
            let s = stage1_scores(&ig, &min_fill_trace(&g).unwrap(), 1.0, 1.0);
            let weights = ig.weighted_edges().collect();
            prop_assert_eq!(naive_scores(&g, &weights), s.scores);
        }

        #[test]
        fn upper_bounds_exact_width(g in arb_graph(7)) {
            let n = g.node_count();
            let exact = permutations(n).iter().map(|o| width_of_order(&g, o)).min().unwrap();
            prop_assert!(min_fill_trace(&g).unwrap().tw_ub >= exact);
        }

        #[test]
        fn relabeling_is_equivariant(g in arb_graph(12), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let n = g.node_count();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut crate::rng::seeded(seed));
            let h = UGraph::from_edges(n, g.edges().map(|e| (perm[e.u()], perm[e.v()]))).unwrap();
            // tie-break rank follows the relabeling
            let mut rank = vec![0; n];
            for (old, &new) in perm.iter().enumerate() {
                rank[new] = old;
            }
            let tg = min_fill_trace(&g).unwrap();
            let th = min_fill_trace_ranked(&h, &rank).unwrap();
            prop_assert_eq!(tg.tw_ub, th.tw_ub);
            let sg = stage1_scores(&ig_of(&g), &tg, 1.0, 1.0);
            let sh = stage1_scores(&ig_of(&h), &th, 1.0, 1.0);
            for (e, v) in &sg.scores {
                prop_assert_eq!(*v, sh.get(Edge::new(perm[e.u()], perm[e.v()])));
            }
        }

        #[test]
        fn chordal_graphs_are_exact(n in 2usize..30, k in 1usize..5, seed in any::<u64>()) {
            use rand::Rng as _;
            // random k-tree: start from a (k+1)-clique, attach each new
            // vertex to an existing k-clique
            let k = k.min(n - 1);
            let mut rng = crate::rng::seeded(seed);
            let mut g = UGraph::new(n);
            let mut cliques: Vec<Vec<usize>> = Vec::new();
            for a in 0..=k {
                for b in a + 1..=k {
                    g.add_edge(a, b).unwrap();
                }
            }
            for skip in 0..=k {
                cliques.push((0..=k).filter(|&x| x != skip).collect());
            }
            for v in k + 1..n {
                let base = cliques[rng.gen_range(0..cliques.len())].clone();
                for &x in &base {
                    g.add_edge(x, v).unwrap();
                }
                for skip in 0..k {
                    let mut c: Vec<usize> = base.iter().copied().enumerate().filter(|&(i, _)| i != skip).map(|(_, x)| x).collect();
                    c.push(v);
                    cliques.push(c);
                }
            }
            let t = min_fill_trace(&g).unwrap();
            prop_assert_eq!(t.tw_ub, k);
            prop_assert!(t.steps.iter().all(|s| s.fill_edges.is_empty()));
        }
    }
}
