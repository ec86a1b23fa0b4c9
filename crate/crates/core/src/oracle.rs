//! Independent cross-checks of the dual cone.
//!
//! Nothing here goes through the tree-generation code in `dual_cone`: the
//! brute-force enumerator has its own arc subsets, propagation and
//! feasibility test, the double description method works from the
//! H-representation alone, and the rank certificate uses its own
//! Gauss-Jordan elimination.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::bipartite::{Bipartition, BipartiteDigraph, SpanningTree};
use crate::dual_cone::{is_extreme, DualDirection, ExtremeDirection, ExtremeSet};
use crate::error::{Error, Result};
use crate::prices::PriceMatrix;
use crate::rational::{dot, scale_to_unit_max};

/// Default dimension cap for the double description oracle.
pub const DD_MAX_D: usize = 5;

/// `K_d^+` as `{y : A y ≥ 0}`. Rows are `π_ij e^i − e^j` for all ordered
/// pairs (diagonal rows are zero) followed by the nonnegativity rows `e^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRepresentation {
    pub d: usize,
    pub rows: Vec<Vec<BigRational>>,
}

impl HRepresentation {
    pub fn from_prices(pi: &PriceMatrix) -> Self {
        let d = pi.d();
        let mut rows = Vec::with_capacity(d * d + d);
        for i in 0..d {
            for j in 0..d {
                let mut r = vec![BigRational::zero(); d];
                r[i] += pi.pi(i, j);
                r[j] -= BigRational::one();
                rows.push(r);
            }
        }
        for i in 0..d {
            let mut r = vec![BigRational::zero(); d];
            r[i] = BigRational::one();
            rows.push(r);
        }
        HRepresentation { d, rows }
    }

    pub fn contains(&self, y: &[BigRational]) -> bool {
        self.rows.iter().all(|r| !dot(r, y).is_negative())
    }
}

struct Ray {
    v: Vec<BigRational>,
    zeros: BTreeSet<usize>,
}

/// Extreme rays of `{y : A y ≥ 0}` by the double description method, each
/// scaled to max entry 1 and sorted. Assumes the nonnegativity rows are
/// present (as in [`HRepresentation::from_prices`]), so the cone is pointed
/// and the orthant is a valid starting point.
pub fn double_description_extremes(h: &HRepresentation, max_d: usize) -> Result<Vec<DualDirection>> {
    let d = h.d;
    if d > max_d {
        return Err(Error::Budget {
            budget: max_d as u64,
            context: format!("double description in dimension {d} (maximum dimension)"),
        });
    }
    let unit_rows: Vec<usize> = (0..h.rows.len())
        .filter(|&r| {
            let row = &h.rows[r];
            row.iter().filter(|x| !x.is_zero()).count() == 1
                && row.iter().all(|x| !x.is_negative())
        })
        .collect();
    let mut orthant = vec![None; d];
    for &r in &unit_rows {
        let i = h.rows[r].iter().position(|x| !x.is_zero()).expect("nonzero");
        orthant[i].get_or_insert(r);
    }
    if orthant.iter().any(Option::is_none) {
        return Err(Error::input("H-representation lacks nonnegativity rows"));
    }
    let orthant: Vec<usize> = orthant.into_iter().map(|r| r.expect("checked")).collect();

    let mut rays: Vec<Ray> = (0..d)
        .map(|i| {
            let mut v = vec![BigRational::zero(); d];
            v[i] = BigRational::one();
            let zeros = (0..d).filter(|&j| j != i).map(|j| orthant[j]).collect();
            Ray { v, zeros }
        })
        .collect();

    for (r, row) in h.rows.iter().enumerate() {
        if orthant.contains(&r) || row.iter().all(Zero::is_zero) {
            continue;
        }
        let s: Vec<BigRational> = rays.iter().map(|ray| dot(row, &ray.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| s[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| s[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, ray) in rays.iter_mut().enumerate() {
                if s[k].is_zero() {
                    ray.zeros.insert(r);
                }
            }
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: BTreeSet<usize> =
                    rays[p].zeros.intersection(&rays[n].zeros).copied().collect();
                if common.len() + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&k| k != p && k != n)
                    .all(|k| !common.is_subset(&rays[k].zeros));
                if !adjacent {
                    continue;
                }
                let v: Vec<BigRational> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[n].v)
                    .map(|(a, b)| &s[p] * b - &s[n] * a)
                    .collect();
                let mut zeros = common;
                zeros.insert(r);
                fresh.push(Ray { v: canonical(&v), zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + fresh.len());
        for (k, mut ray) in rays.into_iter().enumerate() {
            if s[k].is_zero() {
                ray.zeros.insert(r);
                next.push(ray);
            } else if s[k].is_positive() {
                next.push(ray);
            }
        }
        next.extend(fresh);
        rays = next;
    }
    let set: BTreeSet<DualDirection> = rays
        .iter()
        .map(|ray| DualDirection::new(&ray.v))
        .collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

fn canonical(v: &[BigRational]) -> Vec<BigRational> {
    let max = v.iter().max().expect("nonempty").clone();
    v.iter().map(|x| x / &max).collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn is_spanning(d: usize, arcs: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..d).collect();
    for &(i, j) in arcs {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

fn solve_tree(pi: &PriceMatrix, arcs: &[(usize, usize)], d: usize) -> Vec<BigRational> {
    let mut y: Vec<Option<BigRational>> = vec![None; d];
    y[arcs[0].0] = Some(BigRational::one());
    let mut changed = true;
    while changed {
        changed = false;
        for &(i, j) in arcs {
            match (&y[i], &y[j]) {
                (Some(yi), None) => {
                    y[j] = Some(pi.pi(i, j) * yi);
                    changed = true;
                }
                (None, Some(yj)) => {
                    y[i] = Some(yj / pi.pi(i, j));
                    changed = true;
                }
                _ => {}
            }
        }
    }
    y.into_iter().map(|v| v.expect("tree spans")).collect()
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All feasible tree solutions by trying every `(d − 1)`-subset of `P × N`
/// for every bipartition. `budget` caps the number of subsets examined.
pub fn brute_force_extremes(pi: &PriceMatrix, budget: u64) -> Result<ExtremeSet> {
    let d = pi.d();
    if d >= 63 {
        return Err(Error::input("dimension too large for brute force"));
    }
    let mut seen: BTreeSet<DualDirection> = BTreeSet::new();
    let mut directions = Vec::new();
    let mut examined: u64 = 0;
    for bp in Bipartition::all(d) {
        let arcs = bp.all_arcs();
        let mut found: Vec<(DualDirection, Vec<(usize, usize)>)> = Vec::new();
        let mut over = false;
        combinations(arcs.len(), d - 1, |idx| {
            if over {
                return;
            }
            examined += 1;
            if examined > budget {
                over = true;
                return;
            }
            let chosen: Vec<(usize, usize)> = idx.iter().map(|&k| arcs[k]).collect();
            if !is_spanning(d, &chosen) {
                return;
            }
            let y = solve_tree(pi, &chosen, d);
            let feasible = arcs.iter().all(|&(i, j)| pi.pi(i, j) * &y[i] >= y[j]);
            if feasible {
                let y = DualDirection::new(&scale_to_unit_max(&y).expect("positive")).expect("positive");
                found.push((y, chosen));
            }
        });
        if over {
            return Err(Error::Budget {
                budget,
                context: "brute-force arc subsets".into(),
            });
        }
        found.sort();
        for (y, arcs) in found {
            if seen.insert(y.clone()) {
                let tree = SpanningTree::new(bp.clone(), arcs)?;
                directions.push(ExtremeDirection {
                    y,
                    tree,
                    p_configs: Vec::new(),
                    n_configs: Vec::new(),
                });
            }
        }
    }
    Ok(ExtremeSet { d, directions })
}

/// Rank of a rational matrix by Gauss-Jordan elimination.
pub fn gauss_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Three independent verdicts on whether `y ∈ K_d^+` is extreme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankCertificate {
    /// [`is_extreme`] from the dual cone module.
    pub extreme: bool,
    /// Gauss-Jordan rank of the tight rows is at least `d − 1`.
    pub rank_ok: bool,
    /// The tight pairs span `V` as an undirected graph.
    pub connected: bool,
}

impl RankCertificate {
    pub fn agree(&self) -> bool {
        self.extreme == self.rank_ok && self.rank_ok == self.connected
    }
}

pub fn rank_certificate_check(pi: &PriceMatrix, y: &[BigRational]) -> Result<RankCertificate> {
    let d = pi.d();
    if y.len() != d {
        return Err(Error::input(format!("vector has {} entries, expected {d}", y.len())));
    }
    let h = HRepresentation::from_prices(pi);
    if !h.contains(y) || y.iter().all(Zero::is_zero) {
        return Err(Error::input("vector is not a nonzero element of the dual cone"));
    }
    let mut tight_rows = Vec::new();
    let mut parent: Vec<usize> = (0..d).collect();
    for i in 0..d {
        for j in (0..d).filter(|&j| j != i) {
            if pi.pi(i, j) * &y[i] == y[j] {
                tight_rows.push(h.rows[i * d + j].clone());
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    let connected = (0..d).all(|v| find(&mut parent, v) == root);
    Ok(RankCertificate {
        extreme: is_extreme(pi, y).extreme,
        rank_ok: gauss_rank(&tight_rows) + 1 >= d,
        connected,
    })
}

/// Random valid price matrix: random rational arc weights in `[1, 3]` closed
/// under cheapest conversion paths. Redrawn until some friction exists.
pub fn random_price_matrix<R: Rng>(rng: &mut R, d: usize) -> PriceMatrix {
    loop {
        let mut w: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            let den: i64 = rng.gen_range(1..=4);
                            let num: i64 = rng.gen_range(den..=3 * den);
                            BigRational::new(num.into(), den.into())
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let via = &w[i][k] * &w[k][j];
                    if via < w[i][j] {
                        w[i][j] = via;
                    }
                }
            }
        }
        if let Ok(pi) = PriceMatrix::new(w) {
            return pi;
        }
    }
}

/// Random connected subgraph of some `G(P, N)` with `d ≥ 2` nodes and at most
/// `max_arcs` arcs: a random spanning tree plus random extra arcs.
pub fn random_connected_bipartite<R: Rng>(rng: &mut R, max_arcs: usize) -> BipartiteDigraph {
    let max_d = (max_arcs + 1).max(2);
    loop {
        let d = rng.gen_range(2..=max_d.min(12));
        let mask: u64 = rng.gen_range(1..(1u64 << d) - 1);
        let p: Vec<usize> = (0..d).filter(|&v| mask >> v & 1 == 1).collect();
        let bp = Bipartition::from_p(d, &p).expect("proper mask");
        let all = bp.all_arcs();
        if d - 1 > max_arcs {
            continue;
        }
        // random spanning tree by shuffled Kruskal
        let mut order = all.clone();
        for k in (1..order.len()).rev() {
            order.swap(k, rng.gen_range(0..=k));
        }
        let mut parent: Vec<usize> = (0..d).collect();
        let mut arcs = Vec::new();
        let mut rest = Vec::new();
        for &(i, j) in &order {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
                arcs.push((i, j));
            } else {
                rest.push((i, j));
            }
        }
        let extra = rng.gen_range(0..=(max_arcs - arcs.len()).min(rest.len()));
        arcs.extend(rest.into_iter().take(extra));
        return BipartiteDigraph::new(bp, arcs).expect("arcs of P x N");
    }
}
