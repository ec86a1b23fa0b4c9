//! Extraction of a single extreme direction for a prescribed bipartition and
//! tree degree vector.
//!
//! [`getb`] takes a `P`-configuration `c` and returns a feasible tree
//! solution generated by a tree `T` with `deg_T(P) = c`, together with
//! `deg_T(N)`. [`getc`] is the mirror image for an `N`-configuration. Each
//! works by one of three branches:
//!
//! * base: one node on the prescribed side, the tree is a star;
//! * peel: drop the degree-1 nodes of the prescribed side, solve the smaller
//!   problem, reattach each dropped node by its best arc;
//! * fallback: every entry is at least 2, so the other side must contain
//!   degree-1 nodes; try the opposite-side configurations in lexicographic
//!   order until the complementary degree vector matches the request.
//!
//! Fallback loops revisit the same sub-problems many times, so by default a
//! call caches sub-problem results for its own duration. The cache only
//! avoids recomputation; [`extract_with`] can switch it off.

use std::collections::HashMap;
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bipartite::{
    arcs_one_based, compositions, degree_sequence, enumerate_spanning_trees, Arc,
    BipartiteDigraph, Bipartition, Configuration, Side, SpanningTree,
};
use crate::dual_cone::{is_feasible, DualDirection};
use crate::error::{Error, Result};
use crate::prices::PriceMatrix;

/// A feasible tree solution realizing a requested degree vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionResult {
    pub y: DualDirection,
    pub tree: SpanningTree,
    /// The requested configuration.
    pub given_config: Configuration,
    /// Degree vector of `tree` on the other side.
    pub complementary_config: Configuration,
}

impl ExtractionResult {
    pub fn to_json(&self) -> ExtractionJson {
        let bp = self.tree.bipartition();
        ExtractionJson {
            bipartition: bp.to_json(),
            side: self.given_config.side,
            config: self.given_config.values.clone(),
            y: self.y.clone(),
            tree: arcs_one_based(self.tree.arcs()),
            complementary_config: self.complementary_config.values.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractionJson {
    #[serde(flatten)]
    pub bipartition: crate::bipartite::BipartitionJson,
    pub side: Side,
    pub config: Vec<usize>,
    pub y: DualDirection,
    pub tree: Vec<[usize; 2]>,
    pub complementary_config: Vec<usize>,
}

/// Solution of a sub-problem on the node set `p ∪ n ⊆ V`.
#[derive(Clone)]
struct Partial {
    /// `(node, y_node)` for the nodes of the sub-problem. Values are left
    /// unreduced until [`finish`].
    y: Vec<(usize, BigRational)>,
    arcs: Vec<Arc>,
    /// Degrees on the side opposite to the request, in that side's order.
    other: Vec<usize>,
}

impl Partial {
    fn value(&self, v: usize) -> &BigRational {
        &self.y.iter().find(|e| e.0 == v).expect("node solved").1
    }
}

/// `(x / y) > (u / v)` for positive rationals, without normalizing.
fn ratio_greater(x: &BigRational, y: &BigRational, u: &BigRational, v: &BigRational) -> bool {
    // x/y > u/v  ⇔  x·v > u·y; each side as numer/denom products
    let lhs = x.numer() * v.numer() * u.denom() * y.denom();
    let rhs = u.numer() * y.numer() * x.denom() * v.denom();
    lhs > rhs
}

/// `x·y` without reducing. Tree paths have fewer than `d` arcs, so the
/// unreduced values stay bounded; [`finish`] reduces them once.
fn raw_mul(x: &BigRational, y: &BigRational) -> BigRational {
    BigRational::new_raw(x.numer() * y.numer(), x.denom() * y.denom())
}

/// `x / y` for positive rationals without reducing.
fn raw_div(x: &BigRational, y: &BigRational) -> BigRational {
    BigRational::new_raw(x.numer() * y.denom(), x.denom() * y.numer())
}

/// `x·y < u·v` for positive rationals, without normalizing.
fn product_less(x: &BigRational, y: &BigRational, u: &BigRational, v: &BigRational) -> bool {
    let lhs = x.numer() * y.numer() * u.denom() * v.denom();
    let rhs = u.numer() * v.numer() * x.denom() * y.denom();
    lhs < rhs
}

/// Side tag, `|p|`, then `p`, `n` and the configuration.
type Key = Vec<u32>;

struct Solver<'a> {
    pi: &'a PriceMatrix,
    memo: Option<HashMap<Key, Rc<Partial>>>,
}

impl<'a> Solver<'a> {
    fn new(pi: &'a PriceMatrix, cache: bool) -> Self {
        Solver {
            pi,
            memo: cache.then(HashMap::new),
        }
    }

    fn solve(&mut self, side: Side, p: &[usize], n: &[usize], config: &[usize]) -> Result<Rc<Partial>> {
        let mut key: Key = Vec::with_capacity(2 + p.len() + n.len() + config.len());
        key.push(u32::from(side == Side::N));
        key.push(p.len() as u32);
        key.extend(p.iter().chain(n).chain(config).map(|&v| v as u32));
        if let Some(hit) = self.memo.as_ref().and_then(|m| m.get(&key)) {
            return Ok(Rc::clone(hit));
        }
        let sol = Rc::new(match side {
            Side::P => getb_rec(self, p, n, config)?,
            Side::N => getc_rec(self, p, n, config)?,
        });
        if let Some(m) = self.memo.as_mut() {
            m.insert(key, Rc::clone(&sol));
        }
        Ok(sol)
    }
}

fn getb_rec(s: &mut Solver, p: &[usize], n: &[usize], c: &[usize]) -> Result<Partial> {
    let pi = s.pi;
    if p.len() == 1 {
        let i = p[0];
        let mut y = vec![(i, BigRational::one())];
        y.extend(n.iter().map(|&j| (j, pi.pi(i, j).clone())));
        return Ok(Partial {
            y,
            arcs: n.iter().map(|&j| (i, j)).collect(),
            other: vec![1; n.len()],
        });
    }

    let (kept, peeled): (Vec<usize>, Vec<usize>) = (0..p.len()).partition(|&k| c[k] != 1);
    if !kept.is_empty() && !peeled.is_empty() {
        let p0: Vec<usize> = kept.iter().map(|&k| p[k]).collect();
        let c0: Vec<usize> = kept.iter().map(|&k| c[k]).collect();
        let mut sol = Partial::clone(&*s.solve(Side::P, &p0, n, &c0)?);
        for &i in peeled.iter().map(|&k| &p[k]) {
            // k(i) = argmax_j y_j / π_ij, smallest j on ties
            let mut pos = 0;
            for (cand, &j) in n.iter().enumerate().skip(1) {
                let k = n[pos];
                if ratio_greater(sol.value(j), pi.pi(i, j), sol.value(k), pi.pi(i, k)) {
                    pos = cand;
                }
            }
            let yi = raw_div(sol.value(n[pos]), pi.pi(i, n[pos]));
            sol.y.push((i, yi));
            sol.other[pos] += 1;
            sol.arcs.push((i, n[pos]));
        }
        return Ok(sol);
    }

    let total = p.len() + n.len() - 1;
    let mut candidates = Vec::new();
    for b in compositions(n.len(), total) {
        let sol = s.solve(Side::N, p, n, &b)?;
        if sol.other == c {
            return Ok(Partial {
                other: b,
                ..Partial::clone(&sol)
            });
        }
        candidates.push(sol);
    }
    // Only reachable with ties in the prices: the trees found above realize
    // other degree vectors of the same directions. Search their tight graphs.
    for sol in candidates {
        if let Some(found) = realize_in_tight_graph(pi, p, n, &sol, Side::P, c)? {
            return Ok(found);
        }
    }
    Err(Error::input(format!(
        "no feasible tree solution realizes configuration {c:?} (prices violate the market axioms?)"
    )))
}

fn getc_rec(s: &mut Solver, p: &[usize], n: &[usize], b: &[usize]) -> Result<Partial> {
    let pi = s.pi;
    if n.len() == 1 {
        let j = n[0];
        let mut y: Vec<(usize, BigRational)> =
            p.iter().map(|&i| (i, BigRational::one() / pi.pi(i, j))).collect();
        y.push((j, BigRational::one()));
        return Ok(Partial {
            y,
            arcs: p.iter().map(|&i| (i, j)).collect(),
            other: vec![1; p.len()],
        });
    }

    let (kept, peeled): (Vec<usize>, Vec<usize>) = (0..n.len()).partition(|&k| b[k] != 1);
    if !kept.is_empty() && !peeled.is_empty() {
        let n0: Vec<usize> = kept.iter().map(|&k| n[k]).collect();
        let b0: Vec<usize> = kept.iter().map(|&k| b[k]).collect();
        let mut sol = Partial::clone(&*s.solve(Side::N, p, &n0, &b0)?);
        for &j in peeled.iter().map(|&k| &n[k]) {
            // k(j) = argmin_i π_ij y_i, smallest i on ties
            let mut pos = 0;
            for (cand, &i) in p.iter().enumerate().skip(1) {
                let k = p[pos];
                if product_less(pi.pi(i, j), sol.value(i), pi.pi(k, j), sol.value(k)) {
                    pos = cand;
                }
            }
            let yj = raw_mul(pi.pi(p[pos], j), sol.value(p[pos]));
            sol.y.push((j, yj));
            sol.other[pos] += 1;
            sol.arcs.push((p[pos], j));
        }
        return Ok(sol);
    }

    let total = p.len() + n.len() - 1;
    let mut candidates = Vec::new();
    for c in compositions(p.len(), total) {
        let sol = s.solve(Side::P, p, n, &c)?;
        if sol.other == b {
            return Ok(Partial {
                other: c,
                ..Partial::clone(&sol)
            });
        }
        candidates.push(sol);
    }
    for sol in candidates {
        if let Some(found) = realize_in_tight_graph(pi, p, n, &sol, Side::N, b)? {
            return Ok(found);
        }
    }
    Err(Error::input(format!(
        "no feasible tree solution realizes configuration {b:?} (prices violate the market axioms?)"
    )))
}

/// Looks for a spanning tree of the tight graph of `sol.y` on the
/// sub-problem `p ∪ n` whose degrees on `side` equal `want`.
fn realize_in_tight_graph(
    pi: &PriceMatrix,
    p: &[usize],
    n: &[usize],
    sol: &Partial,
    side: Side,
    want: &[usize],
) -> Result<Option<Partial>> {
    // Relabel the sub-problem onto 0..p+n so the graph types apply.
    let nodes: Vec<usize> = p.iter().chain(n).copied().collect();
    let local = |v: usize| nodes.iter().position(|&u| u == v).unwrap();
    let bp = Bipartition::new((0..p.len()).collect(), (p.len()..nodes.len()).collect())?;
    let arcs: Vec<Arc> = p
        .iter()
        .flat_map(|&i| n.iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| pi.pi(i, j) * sol.value(i) == *sol.value(j))
        .map(|(i, j)| (local(i), local(j)))
        .collect();
    let h = BipartiteDigraph::new(bp, arcs)?;
    for t in enumerate_spanning_trees(&h) {
        if degree_sequence(&t, side).values == want {
            let other = degree_sequence(&t, side.other()).values;
            let arcs = t.arcs().iter().map(|&(i, j)| (nodes[i], nodes[j])).collect();
            return Ok(Some(Partial {
                y: sol.y.clone(),
                arcs,
                other,
            }));
        }
    }
    Ok(None)
}

fn finish(
    pi: &PriceMatrix,
    bp: &Bipartition,
    config: &Configuration,
    sol: Partial,
) -> Result<ExtractionResult> {
    let mut y = vec![BigRational::zero(); bp.d()];
    for (v, value) in sol.y {
        y[v] = value.reduced();
    }
    let tree = SpanningTree::new(bp.clone(), sol.arcs)?;
    debug_assert!(is_feasible(pi, bp, &y));
    debug_assert_eq!(degree_sequence(&tree, config.side), *config);
    Ok(ExtractionResult {
        y: DualDirection::new(&y)?,
        tree,
        given_config: config.clone(),
        complementary_config: Configuration {
            side: config.side.other(),
            values: sol.other,
        },
    })
}

fn check_dims(pi: &PriceMatrix, bp: &Bipartition, config: &Configuration, side: Side) -> Result<()> {
    if bp.d() != pi.d() {
        return Err(Error::input(format!(
            "bipartition covers {} assets, matrix has {}",
            bp.d(),
            pi.d()
        )));
    }
    if config.side != side {
        return Err(Error::input(format!("expected a {side:?}-configuration")));
    }
    Configuration::new(bp, side, config.values.clone()).map(|_| ())
}

/// Feasible tree solution whose tree has `P`-degrees `c`.
pub fn getb(pi: &PriceMatrix, bp: &Bipartition, c: &Configuration) -> Result<ExtractionResult> {
    check_dims(pi, bp, c, Side::P)?;
    extract_with(pi, bp, c, true)
}

/// Feasible tree solution whose tree has `N`-degrees `b`.
pub fn getc(pi: &PriceMatrix, bp: &Bipartition, b: &Configuration) -> Result<ExtractionResult> {
    check_dims(pi, bp, b, Side::N)?;
    extract_with(pi, bp, b, true)
}

/// Dispatches on the configuration's side.
pub fn extract(pi: &PriceMatrix, bp: &Bipartition, config: &Configuration) -> Result<ExtractionResult> {
    extract_with(pi, bp, config, true)
}

/// [`extract`] with the sub-problem cache on or off. Both give the same
/// result; without the cache large fallbacks are much slower.
pub fn extract_with(
    pi: &PriceMatrix,
    bp: &Bipartition,
    config: &Configuration,
    cache: bool,
) -> Result<ExtractionResult> {
    check_dims(pi, bp, config, config.side)?;
    let mut solver = Solver::new(pi, cache);
    let sol = solver.solve(config.side, bp.p(), bp.n(), &config.values)?;
    drop(solver);
    let sol = Rc::try_unwrap(sol).unwrap_or_else(|rc| Partial::clone(&rc));
    finish(pi, bp, config, sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::all_configurations;
    use crate::dual_cone::{feasible_tree_solutions, is_extreme};
    use crate::prices::prime_matrix;
    use crate::rational::int;

    fn bp(p: &[usize], n: &[usize]) -> Bipartition {
        let z = |v: &[usize]| v.iter().map(|x| x - 1).collect::<Vec<_>>();
        Bipartition::new(z(p), z(n)).unwrap()
    }

    #[test]
    fn single_p_node_is_a_star() {
        let pi = prime_matrix(3, 59).unwrap();
        let b = bp(&[1], &[2, 3]);
        let c = Configuration::new(&b, Side::P, vec![2]).unwrap();
        let r = getb(&pi, &b, &c).unwrap();
        let expected = DualDirection::new(&[int(1), pi.pi(0, 1).clone(), pi.pi(0, 2).clone()]).unwrap();
        assert_eq!(r.y, expected);
        assert_eq!(r.complementary_config.values, vec![1, 1]);
    }

    #[test]
    fn single_n_node_is_a_star() {
        let pi = prime_matrix(3, 59).unwrap();
        let b = bp(&[1, 2], &[3]);
        let c = Configuration::new(&b, Side::N, vec![2]).unwrap();
        let r = getc(&pi, &b, &c).unwrap();
        let y = vec![int(1) / pi.pi(0, 2), int(1) / pi.pi(1, 2), int(1)];
        assert_eq!(r.y, DualDirection::new(&y).unwrap());
        assert_eq!(r.complementary_config.values, vec![1, 1]);
    }

    #[test]
    fn peel_matches_hand_computation() {
        // b = (2, 1, 1) on P = {1, 4}, N = {2, 3, 5}: solve on {1, 4} x {2},
        // then attach 3 and 5 by the cheaper of the two arcs.
        let pi = prime_matrix(5, 59).unwrap();
        let b = bp(&[1, 4], &[2, 3, 5]);
        let cfg = Configuration::new(&b, Side::N, vec![2, 1, 1]).unwrap();
        let r = getc(&pi, &b, &cfg).unwrap();
        let p = |i: usize, j: usize| pi.pi(i - 1, j - 1).clone();
        let y1 = int(1) / p(1, 2);
        let y4 = int(1) / p(4, 2);
        let attach = |j: usize| {
            let (a, b) = (p(1, j) * &y1, p(4, j) * &y4);
            if a <= b { a } else { b }
        };
        let y = vec![y1.clone(), int(1), attach(3), y4.clone(), attach(5)];
        assert_eq!(r.y, DualDirection::new(&y).unwrap());
    }

    #[test]
    fn fallback_finds_the_unique_solution() {
        let pi = prime_matrix(5, 59).unwrap();
        let b = bp(&[1, 4], &[2, 3, 5]);
        let c = Configuration::new(&b, Side::P, vec![2, 2]).unwrap();
        let r = getb(&pi, &b, &c).unwrap();
        let oracle: Vec<_> = feasible_tree_solutions(&pi, &b, 1000)
            .unwrap()
            .into_iter()
            .filter(|(_, trees)| degree_sequence(&trees[0], Side::P) == c)
            .collect();
        assert_eq!(oracle.len(), 1);
        assert_eq!(r.y, oracle[0].0);
        assert_eq!(degree_sequence(&r.tree, Side::P), c);
        assert!(is_extreme(&pi, r.y.as_slice()).extreme);
    }

    #[test]
    fn every_n_configuration_is_realized() {
        let pi = prime_matrix(6, 59).unwrap();
        for b in Bipartition::all(6) {
            for cfg in all_configurations(&b, Side::N) {
                let r = getc(&pi, &b, &cfg).unwrap();
                assert_eq!(degree_sequence(&r.tree, Side::N), cfg);
                assert!(is_feasible(&pi, &b, r.y.as_slice()));
            }
        }
    }

    #[test]
    fn cache_does_not_change_results() {
        let pi = prime_matrix(6, 59).unwrap();
        for b in Bipartition::all(6) {
            for side in [Side::P, Side::N] {
                for cfg in all_configurations(&b, side) {
                    let cached = extract_with(&pi, &b, &cfg, true).unwrap();
                    let plain = extract_with(&pi, &b, &cfg, false).unwrap();
                    assert_eq!(cached, plain);
                }
            }
        }
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        let pi = prime_matrix(5, 59).unwrap();
        let b = bp(&[1, 4], &[2, 3, 5]);
        let bad = Configuration {
            side: Side::P,
            values: vec![3, 2],
        };
        assert!(getb(&pi, &b, &bad).is_err());
        let wrong_side = Configuration {
            side: Side::N,
            values: vec![2, 2],
        };
        assert!(getb(&pi, &b, &wrong_side).is_err());
        let small = bp(&[1], &[2]);
        let c = Configuration::new(&small, Side::P, vec![1]).unwrap();
        assert!(getb(&pi, &small, &c).is_err());
    }

    #[test]
    fn degenerate_prices_still_realize_every_configuration() {
        // Uniform friction: all off-diagonal prices equal, lots of ties.
        let rows: Vec<Vec<_>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { int(1) } else { int(2) }).collect())
            .collect();
        let pi = PriceMatrix::new(rows).unwrap();
        for b in Bipartition::all(5) {
            for side in [Side::P, Side::N] {
                for cfg in all_configurations(&b, side) {
                    let r = extract(&pi, &b, &cfg).unwrap();
                    assert_eq!(degree_sequence(&r.tree, side), cfg);
                    assert!(is_feasible(&pi, &b, r.y.as_slice()));
                }
            }
        }
    }
}
