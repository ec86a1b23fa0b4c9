//! The dual cone `K_d^+ = {y : π_ij y_i ≥ y_j for all i, j}` and its extreme
//! directions.
//!
//! A vector is an extreme direction iff it is a feasible tree solution for
//! some bipartition `(P, N)`: generated by a spanning tree `T` of `G(P, N)`
//! (`π_ij y_i = y_j` on the arcs of `T`) and feasible (`π_ij y_i ≥ y_j` on
//! all of `P × N`). Directions are identified up to positive scaling and
//! stored with their largest component equal to 1.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithm;
use crate::bipartite::{
    all_configurations, arcs_one_based, complete_bipartite, complete_bipartite_tree_count,
    degree_sequence, degree_sequence_sets, enumerate_spanning_trees, Arc, BipartiteDigraph,
    Bipartition, BipartitionJson, Configuration, ConfigurationSet, Side, SpanningTree,
    DEFAULT_TREE_BUDGET,
};
use crate::error::{Error, Result};
use crate::linalg::IncrementalBasis;
use crate::prices::PriceMatrix;
use crate::rational::{dot, format_rational, scale_to_unit_max, serde_rational};

/// A strictly positive vector in canonical scaling (largest component 1).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DualDirection(#[serde(with = "serde_rational::vec")] Vec<BigRational>);

impl DualDirection {
    /// Rescales `v` so its maximum is 1. Fails unless every entry is positive.
    pub fn new(v: &[BigRational]) -> Result<Self> {
        scale_to_unit_max(v)
            .map(DualDirection)
            .ok_or_else(|| Error::input("a dual direction must be strictly positive"))
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<BigRational> {
        self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for DualDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `y` generated by `tree` and feasible on all of `P × N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleTreeSolution {
    pub y: DualDirection,
    pub tree: SpanningTree,
}

impl FeasibleTreeSolution {
    pub fn bipartition(&self) -> &Bipartition {
        self.tree.bipartition()
    }
}

/// Arcs of `P × N` on which `π_ij y_i = y_j` holds exactly.
pub type TightGraph = BipartiteDigraph;

/// Solves `π_ij y_i = y_j` along the tree arcs starting from `y_root = 1`.
pub fn propagate_from_root(pi: &PriceMatrix, tree: &SpanningTree, root: usize) -> Vec<BigRational> {
    let d = tree.bipartition().d();
    let mut y: Vec<Option<BigRational>> = vec![None; d];
    y[root] = Some(BigRational::one());
    let mut adj: Vec<Vec<Arc>> = vec![Vec::new(); d];
    for &(i, j) in tree.arcs() {
        adj[i].push((i, j));
        adj[j].push((i, j));
    }
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &(i, j) in &adj[u] {
            let next = if u == i { j } else { i };
            if y[next].is_some() {
                continue;
            }
            let yu = y[u].as_ref().unwrap();
            y[next] = Some(if u == i {
                pi.pi(i, j) * yu
            } else {
                yu / pi.pi(i, j)
            });
            stack.push(next);
        }
    }
    y.into_iter()
        .map(|v| v.expect("tree spans all nodes"))
        .collect()
}

/// The direction generated by a spanning tree of `G(P, N)`, canonical.
pub fn generate_from_tree(pi: &PriceMatrix, tree: &SpanningTree) -> DualDirection {
    let root = tree.bipartition().p()[0];
    DualDirection::new(&propagate_from_root(pi, tree, root)).expect("prices are positive")
}

/// `π_ij y_i ≥ y_j > 0` for every arc of `P × N`.
pub fn is_feasible(pi: &PriceMatrix, bp: &Bipartition, y: &[BigRational]) -> bool {
    if y.len() != bp.d() || y.iter().any(|v| !v.is_positive()) {
        return false;
    }
    bp.p()
        .iter()
        .all(|&i| bp.n().iter().all(|&j| pi.pi(i, j) * &y[i] >= y[j]))
}

/// `π_ij y_i ≥ y_j` for all `i, j`.
pub fn in_dual_cone(pi: &PriceMatrix, y: &[BigRational]) -> bool {
    let d = pi.d();
    y.len() == d && (0..d).all(|i| (0..d).all(|j| pi.pi(i, j) * &y[i] >= y[j]))
}

/// Equality arcs of a feasible `y`.
pub fn tight_graph(pi: &PriceMatrix, bp: &Bipartition, y: &[BigRational]) -> Result<TightGraph> {
    if !is_feasible(pi, bp, y) {
        return Err(Error::input("vector is not feasible for this bipartition"));
    }
    let arcs = bp
        .all_arcs()
        .into_iter()
        .filter(|&(i, j)| pi.pi(i, j) * &y[i] == y[j])
        .collect();
    BipartiteDigraph::new(bp.clone(), arcs)
}

/// Coefficient row of the constraint `π_ij y_i − y_j ≥ 0`.
pub fn constraint_row(pi: &PriceMatrix, i: usize, j: usize) -> Vec<BigRational> {
    let mut row = vec![BigRational::zero(); pi.d()];
    row[i] += pi.pi(i, j);
    row[j] -= BigRational::one();
    row
}

/// Result of [`is_extreme`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremality {
    pub extreme: bool,
    pub in_cone: bool,
    /// All pairs `i ≠ j` with `π_ij y_i = y_j`.
    pub tight: Vec<Arc>,
    /// A maximal linearly independent subset of `tight`, greedy in `(i, j)` order.
    pub basis: Vec<Arc>,
}

/// `y` is a nonzero member of `K_d^+` and `d − 1` of its tight constraints
/// (over all of `V × V`) are linearly independent.
pub fn is_extreme(pi: &PriceMatrix, y: &[BigRational]) -> Extremality {
    let d = pi.d();
    let in_cone = in_dual_cone(pi, y);
    if !in_cone || y.iter().all(Zero::is_zero) {
        return Extremality {
            extreme: false,
            in_cone,
            tight: Vec::new(),
            basis: Vec::new(),
        };
    }
    let tight: Vec<Arc> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && pi.pi(i, j) * &y[i] == y[j])
        .collect();
    let mut basis = IncrementalBasis::new();
    let independent: Vec<Arc> = tight
        .iter()
        .copied()
        .filter(|&(i, j)| basis.insert(&constraint_row(pi, i, j)))
        .collect();
    Extremality {
        extreme: independent.len() == d - 1,
        in_cone,
        tight,
        basis: independent,
    }
}

/// All distinct feasible tree solutions of one bipartition with every tree
/// of `G(P, N)` generating each, found by exhaustive tree enumeration.
/// Sorted by `y`.
pub fn feasible_tree_solutions(
    pi: &PriceMatrix,
    bp: &Bipartition,
    budget: u64,
) -> Result<Vec<(DualDirection, Vec<SpanningTree>)>> {
    let count = complete_bipartite_tree_count(bp.p().len(), bp.n().len());
    if count > u128::from(budget) {
        return Err(Error::Budget {
            budget,
            context: format!("bipartition P = {:?}", bp.to_json().p),
        });
    }
    let g = complete_bipartite(bp);
    let mut found: BTreeMap<DualDirection, Vec<SpanningTree>> = BTreeMap::new();
    for t in enumerate_spanning_trees(&g) {
        let y = generate_from_tree(pi, &t);
        if is_feasible(pi, bp, y.as_slice()) {
            found.entry(y).or_default().push(t);
        }
    }
    Ok(found.into_iter().collect())
}

/// `(𝒫(y), 𝒩(y))`: degree sequences of the spanning trees of `H(y)`.
pub fn config_sets(
    pi: &PriceMatrix,
    sol: &FeasibleTreeSolution,
    budget: u64,
) -> Result<(ConfigurationSet, ConfigurationSet)> {
    let h = tight_graph(pi, sol.bipartition(), sol.y.as_slice())?;
    degree_sequence_sets(&h, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Exhaustive for `d ≤ 8`, algorithmic above.
    #[default]
    Auto,
    /// Every spanning tree of every `G(P, N)`, filtered by feasibility.
    Exhaustive,
    /// One extraction per `P`-configuration of every bipartition.
    Algorithmic,
}

/// Largest dimension handled exhaustively by [`Strategy::Auto`].
pub const EXHAUSTIVE_MAX_D: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    pub strategy: Strategy,
    /// Cap on spanning trees visited, summed over bipartitions.
    pub tree_budget: u64,
    /// Compute `𝒫(y)` and `𝒩(y)` for every direction.
    pub config_sets: bool,
    pub parallel: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::Auto,
            tree_budget: DEFAULT_TREE_BUDGET,
            config_sets: true,
            parallel: true,
        }
    }
}

/// One extreme direction with the bipartition and a tree generating it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeDirection {
    pub y: DualDirection,
    pub tree: SpanningTree,
    pub p_configs: Vec<Configuration>,
    pub n_configs: Vec<Configuration>,
}

impl ExtremeDirection {
    pub fn bipartition(&self) -> &Bipartition {
        self.tree.bipartition()
    }

    pub fn to_json(&self) -> ExtremeDirectionJson {
        let bp = self.bipartition().to_json();
        ExtremeDirectionJson {
            bipartition: bp,
            tree: arcs_one_based(self.tree.arcs()),
            y: self.y.clone(),
            p_config: degree_sequence(&self.tree, Side::P).values,
            n_config: degree_sequence(&self.tree, Side::N).values,
            p_configs: self.p_configs.iter().map(|c| c.values.clone()).collect(),
            n_configs: self.n_configs.iter().map(|c| c.values.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremeDirectionJson {
    #[serde(flatten)]
    pub bipartition: BipartitionJson,
    pub tree: Vec<[usize; 2]>,
    pub y: DualDirection,
    #[serde(rename = "P_config")]
    pub p_config: Vec<usize>,
    #[serde(rename = "N_config")]
    pub n_config: Vec<usize>,
    #[serde(rename = "P_configs")]
    pub p_configs: Vec<Vec<usize>>,
    #[serde(rename = "N_configs")]
    pub n_configs: Vec<Vec<usize>>,
}

/// Pairwise non-proportional extreme directions, ordered by
/// `(|P|, P, y)` of the first bipartition producing each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeSet {
    pub d: usize,
    pub directions: Vec<ExtremeDirection>,
}

impl ExtremeSet {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn vectors(&self) -> Vec<&DualDirection> {
        self.directions.iter().map(|e| &e.y).collect()
    }

    pub fn vector_set(&self) -> std::collections::BTreeSet<DualDirection> {
        self.directions.iter().map(|e| e.y.clone()).collect()
    }

    pub fn contains(&self, y: &[BigRational]) -> bool {
        DualDirection::new(y)
            .map(|c| self.directions.iter().any(|e| e.y == c))
            .unwrap_or(false)
    }

    pub fn to_json(&self) -> Vec<ExtremeDirectionJson> {
        self.directions.iter().map(ExtremeDirection::to_json).collect()
    }
}

fn per_bipartition(
    pi: &PriceMatrix,
    bp: &Bipartition,
    strategy: Strategy,
) -> Result<Vec<(DualDirection, SpanningTree)>> {
    match strategy {
        Strategy::Exhaustive | Strategy::Auto => Ok(feasible_tree_solutions(pi, bp, u64::MAX)?
            .into_iter()
            .map(|(y, trees)| (y, trees.into_iter().next().unwrap()))
            .collect()),
        Strategy::Algorithmic => {
            let mut found: BTreeMap<DualDirection, SpanningTree> = BTreeMap::new();
            for c in all_configurations(bp, Side::P) {
                let r = algorithm::getb(pi, bp, &c)?;
                found.entry(r.y).or_insert(r.tree);
            }
            Ok(found.into_iter().collect())
        }
    }
}

/// Every extreme direction of `K_d^+`, deduplicated and in canonical order.
pub fn enumerate_extreme_directions(pi: &PriceMatrix, opts: &EnumerationOptions) -> Result<ExtremeSet> {
    let d = pi.d();
    let strategy = match opts.strategy {
        Strategy::Auto if d <= EXHAUSTIVE_MAX_D => Strategy::Exhaustive,
        Strategy::Auto => Strategy::Algorithmic,
        s => s,
    };
    let bipartitions = Bipartition::all(d);
    if strategy == Strategy::Exhaustive {
        let mut total: u128 = 0;
        for bp in &bipartitions {
            total += complete_bipartite_tree_count(bp.p().len(), bp.n().len());
            if total > u128::from(opts.tree_budget) {
                return Err(Error::Budget {
                    budget: opts.tree_budget,
                    context: format!("bipartition P = {:?}", bp.to_json().p),
                });
            }
        }
    }
    let per_bp: Vec<Vec<(DualDirection, SpanningTree)>> = if opts.parallel {
        bipartitions
            .par_iter()
            .map(|bp| per_bipartition(pi, bp, strategy))
            .collect::<Result<_>>()?
    } else {
        bipartitions
            .iter()
            .map(|bp| per_bipartition(pi, bp, strategy))
            .collect::<Result<_>>()?
    };

    let mut seen: HashSet<DualDirection> = HashSet::new();
    let mut directions = Vec::new();
    for (y, tree) in per_bp.into_iter().flatten() {
        if seen.insert(y.clone()) {
            directions.push(ExtremeDirection {
                y,
                tree,
                p_configs: Vec::new(),
                n_configs: Vec::new(),
            });
        }
    }
    if opts.config_sets {
        let budget = opts.tree_budget;
        let fill = |e: &mut ExtremeDirection| -> Result<()> {
            let sol = FeasibleTreeSolution {
                y: e.y.clone(),
                tree: e.tree.clone(),
            };
            let (p, n) = config_sets(pi, &sol, budget)?;
            e.p_configs = p.into_iter().collect();
            e.n_configs = n.into_iter().collect();
            Ok(())
        };
        if opts.parallel {
            directions.par_iter_mut().try_for_each(fill)?;
        } else {
            directions.iter_mut().try_for_each(fill)?;
        }
    }
    Ok(ExtremeSet { d, directions })
}

/// Lower bound `2^d − 2` (valid under strict friction) and the upper bound
/// `Σ_{p=1}^{d−1} C(d−2, p−1) · C(d, p)`.
pub fn count_bounds(d: usize) -> Result<(BigUint, BigUint)> {
    if d < 2 {
        return Err(Error::input("dimension must be at least 2"));
    }
    let lower = (BigUint::one() << d) - BigUint::from(2u32);
    let upper = (1..d)
        .map(|p| binomial(d - 2, p - 1) * binomial(d, p))
        .sum();
    Ok((lower, upper))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Verdict of [`solvency_report`]: the value `yᵀx` on every extreme
/// direction, with the indices of negative and zero values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvencyReport {
    pub solvent: bool,
    pub values: Vec<BigRational>,
    pub violated: Vec<usize>,
    pub tight: Vec<usize>,
}

pub fn solvency_report(extremes: &ExtremeSet, x: &[BigRational]) -> Result<SolvencyReport> {
    if extremes.is_empty() {
        return Err(Error::input("extreme set is empty"));
    }
    if x.len() != extremes.d {
        return Err(Error::input(format!(
            "portfolio has {} entries, expected {}",
            x.len(),
            extremes.d
        )));
    }
    let values: Vec<BigRational> = extremes
        .directions
        .iter()
        .map(|e| dot(e.y.as_slice(), x))
        .collect();
    let violated: Vec<usize> = (0..values.len()).filter(|&k| values[k].is_negative()).collect();
    let tight = (0..values.len()).filter(|&k| values[k].is_zero()).collect();
    Ok(SolvencyReport {
        solvent: violated.is_empty(),
        values,
        violated,
        tight,
    })
}

/// `x ∈ K_d` iff `yᵀx ≥ 0` for every extreme direction `y` of `K_d^+`.
pub fn is_solvent(extremes: &ExtremeSet, x: &[BigRational]) -> Result<bool> {
    Ok(solvency_report(extremes, x)?.solvent)
}

/// A candidate price system for rebalancing a portfolio, with the trees
/// realizing it (arcs read as "exchange asset i into asset j").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanEntry {
    pub y: DualDirection,
    /// `yᵀx`.
    pub value: BigRational,
    pub trees: Vec<SpanningTree>,
    /// `deg_T(P)` for each tree, in the same order.
    pub contributions: Vec<Configuration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradePlan {
    pub bipartition: Bipartition,
    pub entries: Vec<PlanEntry>,
    /// Present when an extreme set was supplied.
    pub solvent: Option<bool>,
}

/// Splits `x` into kept assets `P = {i : x_i ≥ 0}` and targets
/// `N = {j : x_j < 0}` and lists the feasible tree solutions of that
/// bipartition.
pub fn trade_plan(
    pi: &PriceMatrix,
    extremes: Option<&ExtremeSet>,
    x: &[BigRational],
    budget: u64,
) -> Result<TradePlan> {
    let d = pi.d();
    if x.len() != d {
        return Err(Error::input(format!("portfolio has {} entries, expected {d}", x.len())));
    }
    if x.iter().all(|v| !v.is_negative()) {
        return Err(Error::input("portfolio has no negative position: already solvent"));
    }
    if x.iter().all(|v| v.is_negative()) {
        return Err(Error::input("portfolio has no positive position"));
    }
    let p: Vec<usize> = (0..d).filter(|&i| !x[i].is_negative()).collect();
    let bp = Bipartition::from_p(d, &p)?;
    let solutions: Vec<(DualDirection, Vec<SpanningTree>)> = if d <= EXHAUSTIVE_MAX_D {
        feasible_tree_solutions(pi, &bp, budget)?
    } else {
        let mut found: BTreeMap<DualDirection, Vec<SpanningTree>> = BTreeMap::new();
        for c in all_configurations(&bp, Side::P) {
            let r = algorithm::getb(pi, &bp, &c)?;
            found.entry(r.y).or_default().push(r.tree);
        }
        found.into_iter().collect()
    };
    let entries = solutions
        .into_iter()
        .map(|(y, trees)| PlanEntry {
            value: dot(y.as_slice(), x),
            contributions: trees.iter().map(|t| degree_sequence(t, Side::P)).collect(),
            y,
            trees,
        })
        .collect();
    let solvent = extremes.map(|e| is_solvent(e, x)).transpose()?;
    Ok(TradePlan {
        bipartition: bp,
        entries,
        solvent,
    })
}
