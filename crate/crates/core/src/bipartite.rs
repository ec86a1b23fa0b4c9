//! Bipartitions `(P, N)` of the asset set, bipartite digraphs with arcs in
//! `P × N`, their spanning trees and tree degree sequences.
//!
//! Also hosts the combinatorial facts the extreme-direction theory rests on:
//! equal numbers of left and right degree sequences over the spanning trees of
//! any bipartite graph, alternating cycles between two trees with the same
//! left degrees, and the characterization of left degree sequences by
//! draconian sequences.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arc `(i, j)` from `i ∈ P` to `j ∈ N`, 0-based.
pub type Arc = (usize, usize);

/// Default cap on the number of spanning trees a single call may visit.
pub const DEFAULT_TREE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    P,
    N,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::P => Side::N,
            Side::N => Side::P,
        }
    }
}

/// Ordered split of `{0, …, d−1}` into nonempty disjoint sorted sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipartition {
    p: Vec<usize>,
    n: Vec<usize>,
}

impl Bipartition {
    pub fn new(mut p: Vec<usize>, mut n: Vec<usize>) -> Result<Self> {
        p.sort_unstable();
        n.sort_unstable();
        if p.is_empty() || n.is_empty() {
            return Err(Error::input("both sides of a bipartition must be nonempty"));
        }
        let d = p.len() + n.len();
        let mut seen = vec![false; d];
        for &v in p.iter().chain(&n) {
            if v >= d || seen[v] {
                return Err(Error::input(format!(
                    "sides must partition {{1, …, {d}}}; offending index {}",
                    v + 1
                )));
            }
            seen[v] = true;
        }
        Ok(Self { p, n })
    }

    /// `P` is the given set, `N` its complement in `{0, …, d−1}`.
    pub fn from_p(d: usize, p: &[usize]) -> Result<Self> {
        if let Some(&v) = p.iter().find(|&&v| v >= d) {
            return Err(Error::input(format!("index {} out of range 1..={d}", v + 1)));
        }
        let n = (0..d).filter(|v| !p.contains(v)).collect();
        Self::new(p.to_vec(), n)
    }

    /// All `2^d − 2` bipartitions ordered by `|P|`, then `P` lexicographically.
    pub fn all(d: usize) -> Vec<Bipartition> {
        let mut out: Vec<Bipartition> = (1u64..(1u64 << d) - 1)
            .map(|mask| {
                let p = (0..d).filter(|&v| mask >> v & 1 == 1).collect();
                let n = (0..d).filter(|&v| mask >> v & 1 == 0).collect();
                Bipartition { p, n }
            })
            .collect();
        out.sort_by(|a, b| (a.p.len(), &a.p).cmp(&(b.p.len(), &b.p)));
        out
    }

    pub fn d(&self) -> usize {
        self.p.len() + self.n.len()
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn side(&self, side: Side) -> &[usize] {
        match side {
            Side::P => &self.p,
            Side::N => &self.n,
        }
    }

    pub fn side_of(&self, v: usize) -> Side {
        if self.p.binary_search(&v).is_ok() {
            Side::P
        } else {
            Side::N
        }
    }

    /// Position of `v` within its side's sorted index list.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.p
            .binary_search(&v)
            .or_else(|_| self.n.binary_search(&v))
            .ok()
    }

    pub fn is_arc(&self, (i, j): Arc) -> bool {
        self.p.binary_search(&i).is_ok() && self.n.binary_search(&j).is_ok()
    }

    /// The complete arc set `P × N` in lexicographic order.
    pub fn all_arcs(&self) -> Vec<Arc> {
        self.p
            .iter()
            .flat_map(|&i| self.n.iter().map(move |&j| (i, j)))
            .collect()
    }

    pub fn to_json(&self) -> BipartitionJson {
        BipartitionJson {
            p: self.p.iter().map(|v| v + 1).collect(),
            n: self.n.iter().map(|v| v + 1).collect(),
        }
    }
}

/// External form with 1-based indices: `{"P": [...], "N": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionJson {
    #[serde(rename = "P")]
    pub p: Vec<usize>,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
}

impl BipartitionJson {
    pub fn to_bipartition(&self) -> Result<Bipartition> {
        Bipartition::new(zero_based(&self.p)?, zero_based(&self.n)?)
    }
}

pub(crate) fn zero_based(v: &[usize]) -> Result<Vec<usize>> {
    v.iter()
        .map(|&x| {
            x.checked_sub(1)
                .ok_or_else(|| Error::input("indices are 1-based; found 0"))
        })
        .collect()
}

pub fn arcs_one_based(arcs: &[Arc]) -> Vec<[usize; 2]> {
    arcs.iter().map(|&(i, j)| [i + 1, j + 1]).collect()
}

#[derive(Debug, Clone)]
struct Dsu {
    parent: Vec<usize>,
    components: usize,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }
}

/// A digraph on `P ∪ N` whose arcs all run from `P` to `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteDigraph {
    bipartition: Bipartition,
    arcs: Vec<Arc>,
}

impl BipartiteDigraph {
    pub fn new(bipartition: Bipartition, mut arcs: Vec<Arc>) -> Result<Self> {
        arcs.sort_unstable();
        arcs.dedup();
        if let Some(&(i, j)) = arcs.iter().find(|&&a| !bipartition.is_arc(a)) {
            return Err(Error::input(format!("arc ({}, {}) is not in P x N", i + 1, j + 1)));
        }
        Ok(Self { bipartition, arcs })
    }

    pub fn bipartition(&self) -> &Bipartition {
        &self.bipartition
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn d(&self) -> usize {
        self.bipartition.d()
    }

    pub fn is_connected(&self) -> bool {
        let mut dsu = Dsu::new(self.d());
        for &(i, j) in &self.arcs {
            dsu.union(i, j);
        }
        dsu.components == 1
    }

    pub fn has_isolated_vertex(&self) -> bool {
        let mut deg = vec![0usize; self.d()];
        for &(i, j) in &self.arcs {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg.contains(&0)
    }

    /// Right neighborhoods `I_i` of the nodes of `P`, in `P` order.
    pub fn right_neighborhoods(&self) -> Vec<Vec<usize>> {
        self.bipartition
            .p()
            .iter()
            .map(|&i| {
                self.arcs
                    .iter()
                    .filter(|a| a.0 == i)
                    .map(|a| a.1)
                    .collect()
            })
            .collect()
    }
}

/// `G(P, N)`: every arc of `P × N`.
pub fn complete_bipartite(bp: &Bipartition) -> BipartiteDigraph {
    BipartiteDigraph {
        bipartition: bp.clone(),
        arcs: bp.all_arcs(),
    }
}

/// A spanning tree of some subgraph of `G(P, N)`: `d − 1` arcs of `P × N`
/// connecting all `d` nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanningTree {
    bipartition: Bipartition,
    arcs: Vec<Arc>,
}

impl SpanningTree {
    pub fn new(bipartition: Bipartition, mut arcs: Vec<Arc>) -> Result<Self> {
        arcs.sort_unstable();
        arcs.dedup();
        let d = bipartition.d();
        if let Some(&(i, j)) = arcs.iter().find(|&&a| !bipartition.is_arc(a)) {
            return Err(Error::input(format!("arc ({}, {}) is not in P x N", i + 1, j + 1)));
        }
        if arcs.len() != d - 1 {
            return Err(Error::input(format!(
                "a spanning tree on {d} nodes has {} arcs, got {}",
                d - 1,
                arcs.len()
            )));
        }
        let mut dsu = Dsu::new(d);
        for &(i, j) in &arcs {
            if !dsu.union(i, j) {
                return Err(Error::input("arc set contains a cycle"));
            }
        }
        Ok(Self { bipartition, arcs })
    }

    pub fn bipartition(&self) -> &Bipartition {
        &self.bipartition
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn contains(&self, arc: Arc) -> bool {
        self.arcs.binary_search(&arc).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.0 == v || a.1 == v).count()
    }
}

/// Positive integer vector over one side, indexed by that side's sorted
/// index list, summing to `d − 1`. Also used for the degree vector of a
/// tree restricted to one side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub side: Side,
    pub values: Vec<usize>,
}

impl Configuration {
    pub fn new(bp: &Bipartition, side: Side, values: Vec<usize>) -> Result<Self> {
        let len = bp.side(side).len();
        if values.len() != len {
            return Err(Error::input(format!(
                "{side:?}-configuration needs {len} entries, got {}",
                values.len()
            )));
        }
        if values.contains(&0) {
            return Err(Error::input("configuration entries must be positive"));
        }
        let sum: usize = values.iter().sum();
        if sum != bp.d() - 1 {
            return Err(Error::input(format!(
                "configuration entries must sum to d - 1 = {}, got {sum}",
                bp.d() - 1
            )));
        }
        Ok(Self { side, values })
    }
}

/// All vectors of `len` positive integers summing to `total`, in
/// lexicographically increasing order.
pub fn compositions(len: usize, total: usize) -> Vec<Vec<usize>> {
    if len == 0 || total < len {
        return Vec::new();
    }
    weak_compositions(len, total - len)
        .into_iter()
        .map(|v| v.into_iter().map(|x| x + 1).collect())
        .collect()
}

/// All vectors of `len` nonnegative integers summing to `total`, in
/// lexicographically increasing order.
pub fn weak_compositions(len: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if len == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(len - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len > 0 {
        rec(len, total, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

/// Every `side`-configuration of `bp`, lexicographically increasing.
pub fn all_configurations(bp: &Bipartition, side: Side) -> Vec<Configuration> {
    compositions(bp.side(side).len(), bp.d() - 1)
        .into_iter()
        .map(|values| Configuration { side, values })
        .collect()
}

/// Iterator over the spanning trees of a bipartite digraph.
///
/// Include/exclude branching over the arcs in lexicographic order: an arc
/// is included only if it joins two components, and a branch is cut as soon
/// as the chosen arcs plus the undecided ones can no longer connect the
/// graph. Trees come out in lexicographic order of their sorted arc lists.
pub struct SpanningTrees<'a> {
    graph: &'a BipartiteDigraph,
    stack: Vec<(usize, Vec<usize>)>,
}

impl Iterator for SpanningTrees<'_> {
    type Item = SpanningTree;

    fn next(&mut self) -> Option<SpanningTree> {
        let arcs = &self.graph.arcs;
        let d = self.graph.d();
        while let Some((pos, chosen)) = self.stack.pop() {
            if chosen.len() == d - 1 {
                return Some(SpanningTree {
                    bipartition: self.graph.bipartition.clone(),
                    arcs: chosen.iter().map(|&k| arcs[k]).collect(),
                });
            }
            if pos == arcs.len() {
                continue;
            }
            let mut partial = Dsu::new(d);
            for &k in &chosen {
                partial.union(arcs[k].0, arcs[k].1);
            }
            let mut reach = partial.clone();
            for &(i, j) in &arcs[pos..] {
                reach.union(i, j);
            }
            if reach.components != 1 {
                continue;
            }
            self.stack.push((pos + 1, chosen.clone()));
            let (i, j) = arcs[pos];
            if partial.find(i) != partial.find(j) {
                let mut with = chosen;
                with.push(pos);
                self.stack.push((pos + 1, with));
            }
        }
        None
    }
}

/// Streams every spanning tree of `graph` exactly once. Disconnected graphs
/// yield nothing.
pub fn enumerate_spanning_trees(graph: &BipartiteDigraph) -> SpanningTrees<'_> {
    SpanningTrees {
        graph,
        stack: vec![(0, Vec::new())],
    }
}

/// Collects all spanning trees, failing once more than `budget` are seen.
pub fn collect_spanning_trees(graph: &BipartiteDigraph, budget: u64) -> Result<Vec<SpanningTree>> {
    let mut out = Vec::new();
    for t in enumerate_spanning_trees(graph) {
        if out.len() as u64 >= budget {
            return Err(Error::Budget {
                budget,
                context: format!("spanning trees of graph on P = {:?}", graph.bipartition.to_json().p),
            });
        }
        out.push(t);
    }
    Ok(out)
}

/// `p^(n−1) · n^(p−1)`, the number of spanning trees of `G(P, N)`.
pub fn complete_bipartite_tree_count(p: usize, n: usize) -> u128 {
    (p as u128).pow(n as u32 - 1) * (n as u128).pow(p as u32 - 1)
}

/// Degrees of the tree restricted to one side, in that side's index order.
pub fn degree_sequence(tree: &SpanningTree, side: Side) -> Configuration {
    let nodes = tree.bipartition.side(side);
    let mut values = vec![0usize; nodes.len()];
    for &(i, j) in &tree.arcs {
        let v = if side == Side::P { i } else { j };
        let pos = nodes.binary_search(&v).expect("arc endpoint on this side");
        values[pos] += 1;
    }
    Configuration { side, values }
}

pub type ConfigurationSet = BTreeSet<Configuration>;

/// Left and right degree sequences over all spanning trees of `h`.
pub fn degree_sequence_sets(
    h: &BipartiteDigraph,
    budget: u64,
) -> Result<(ConfigurationSet, ConfigurationSet)> {
    if !h.is_connected() {
        return Err(Error::input("graph is not connected; it has no spanning tree"));
    }
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    for (count, t) in enumerate_spanning_trees(h).enumerate() {
        if count as u64 >= budget {
            return Err(Error::Budget {
                budget,
                context: "degree sequence sets".into(),
            });
        }
        left.insert(degree_sequence(&t, Side::P));
        right.insert(degree_sequence(&t, Side::N));
    }
    Ok((left, right))
}

/// One arc of an alternating cycle, with the tree it was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleArc {
    pub arc: Arc,
    /// `true`: traversed from `P` to `N` and taken from `S`.
    /// `false`: traversed from `N` to `P` and taken from `T`.
    pub forward: bool,
}

/// A closed walk with pairwise distinct nodes: `nodes[0] == nodes[last]`
/// and `arcs[k]` joins `nodes[k]` and `nodes[k + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingCycle {
    pub nodes: Vec<usize>,
    pub arcs: Vec<CycleArc>,
}

impl AlternatingCycle {
    pub fn arc_set(&self) -> BTreeSet<Arc> {
        self.arcs.iter().map(|a| a.arc).collect()
    }
}

/// For spanning trees `s`, `t` with equal left degree sequences and an arc
/// `(i, j)` of `t` missing from `s`, finds a cycle through that arc whose
/// forward arcs lie in `s` and whose backward arcs lie in `t`.
///
/// Searches the auxiliary digraph with `s`-edges oriented `P → N` and
/// `t`-edges oriented `N → P` for a directed path from `i` back to `j`;
/// together with `j → i` it closes the cycle. The cycle starts at `j`.
pub fn alternating_cycle(s: &SpanningTree, t: &SpanningTree, arc: Arc) -> Result<AlternatingCycle> {
    if s.bipartition != t.bipartition {
        return Err(Error::input("trees live on different bipartitions"));
    }
    if degree_sequence(s, Side::P) != degree_sequence(t, Side::P) {
        return Err(Error::input("trees have different left degree sequences"));
    }
    if !t.contains(arc) || s.contains(arc) {
        return Err(Error::input(format!(
            "arc ({}, {}) must belong to the second tree but not the first",
            arc.0 + 1,
            arc.1 + 1
        )));
    }
    let d = s.bipartition.d();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); d];
    for &(k, l) in &s.arcs {
        out[k].push(l);
    }
    for &(k, l) in &t.arcs {
        out[l].push(k);
    }
    for v in out.iter_mut() {
        v.sort_unstable();
    }

    let (i, j) = arc;
    let mut parent: Vec<Option<usize>> = vec![None; d];
    let mut visited = vec![false; d];
    let mut stack = vec![i];
    visited[i] = true;
    while let Some(u) = stack.pop() {
        if u == j {
            break;
        }
        for &w in out[u].iter().rev() {
            if !visited[w] {
                visited[w] = true;
                parent[w] = Some(u);
                stack.push(w);
            }
        }
    }
    if !visited[j] {
        // Impossible when the preconditions hold: the auxiliary digraph is
        // strongly connected.
        return Err(Error::input("no alternating cycle exists for this arc"));
    }
    let mut path = vec![j];
    let mut cur = j;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse(); // i -> ... -> j

    let mut nodes = vec![j];
    let mut arcs = vec![CycleArc {
        arc,
        forward: false,
    }];
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        let forward = s.bipartition.side_of(a) == Side::P;
        let arc = if forward { (a, b) } else { (b, a) };
        nodes.push(a);
        arcs.push(CycleArc { arc, forward });
    }
    nodes.push(j);
    Ok(AlternatingCycle { nodes, arcs })
}

/// Alternating cycles for every arc of `t` that is not in `s`. Empty when
/// the trees coincide.
pub fn alternating_cycles(s: &SpanningTree, t: &SpanningTree) -> Result<Vec<AlternatingCycle>> {
    t.arcs
        .iter()
        .filter(|a| !s.contains(**a))
        .map(|&a| alternating_cycle(s, t, a))
        .collect()
}

/// `a` (indexed by sorted `P`) is draconian for `h`: it sums to `|N| − 1`
/// and every subset of `P` has a right neighborhood strictly larger than
/// its partial sum.
pub fn is_draconian(h: &BipartiteDigraph, a: &[usize]) -> Result<bool> {
    let bp = h.bipartition();
    let (p, n) = (bp.p().len(), bp.n().len());
    if a.len() != p {
        return Err(Error::input(format!("sequence has {} entries, |P| = {p}", a.len())));
    }
    if h.has_isolated_vertex() {
        return Err(Error::input("graph has an isolated vertex"));
    }
    if p > 24 {
        return Err(Error::input("|P| too large for subset enumeration"));
    }
    if a.iter().sum::<usize>() != n - 1 {
        return Ok(false);
    }
    let pos: HashMap<usize, usize> = bp.n().iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let masks: Vec<u64> = h
        .right_neighborhoods()
        .iter()
        .map(|nb| nb.iter().fold(0u64, |m, v| m | 1 << pos[v]))
        .collect();
    for subset in 1u32..(1u32 << p) {
        let mut union = 0u64;
        let mut sum = 0usize;
        for k in 0..p {
            if subset >> k & 1 == 1 {
                union |= masks[k];
                sum += a[k];
            }
        }
        if (union.count_ones() as usize) < sum + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that the draconian sequences of `h` are exactly the left degree
/// sequences of its spanning trees minus one.
pub fn draconian_equals_degrees(h: &BipartiteDigraph, budget: u64) -> Result<bool> {
    let (left, _) = degree_sequence_sets(h, budget)?;
    let shifted: BTreeSet<Vec<usize>> = left
        .into_iter()
        .map(|c| c.values.into_iter().map(|x| x - 1).collect())
        .collect();
    let bp = h.bipartition();
    let mut draconian = BTreeSet::new();
    for a in weak_compositions(bp.p().len(), bp.n().len() - 1) {
        if is_draconian(h, &a)? {
            draconian.insert(a);
        }
    }
    Ok(draconian == shifted)
}
