//! Closed forms for bid-ask markets, `π_ij = a_j / b_i`.
//!
//! Here every spanning tree of `G(P, N)` generates the same vector, namely
//! `y_i = b_i` on `P` and `y_j = a_j` on `N`, so the generators of the dual
//! cone are indexed by bipartitions. When an asset `k` has no spread
//! (`b_k = a_k`) they are indexed by subsets of `V \ {k}` instead.

use std::collections::{BTreeSet, HashSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bipartite::Bipartition;
use crate::dual_cone::DualDirection;
use crate::error::{Error, Result};
use crate::prices::{from_bid_ask, BidAskQuote};
use crate::rational::{dot, serde_rational};

/// Generators of `K_d^+` as columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorMatrix {
    pub d: usize,
    #[serde(with = "serde_rational::matrix")]
    pub columns: Vec<Vec<BigRational>>,
}

impl GeneratorMatrix {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Columns in canonical scaling, as a set.
    pub fn canonical_set(&self) -> BTreeSet<DualDirection> {
        self.columns
            .iter()
            .map(|c| DualDirection::new(c).expect("generators are positive"))
            .collect()
    }

    /// Canonically scaled columns in sorted order.
    pub fn sorted_view(&self) -> Vec<DualDirection> {
        self.canonical_set().into_iter().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Row `i` of the matrix.
    pub fn row(&self, i: usize) -> Vec<BigRational> {
        self.columns.iter().map(|c| c[i].clone()).collect()
    }
}

fn column_for(q: &BidAskQuote, bp: &Bipartition) -> Vec<BigRational> {
    (0..q.d())
        .map(|v| {
            if bp.p().binary_search(&v).is_ok() {
                q.bid()[v].clone()
            } else {
                q.ask()[v].clone()
            }
        })
        .collect()
}

/// One column per bipartition: `b_i` on `P`, `a_j` on `N`.
pub fn bid_ask_generators(q: &BidAskQuote) -> GeneratorMatrix {
    GeneratorMatrix {
        d: q.d(),
        columns: Bipartition::all(q.d()).iter().map(|bp| column_for(q, bp)).collect(),
    }
}

/// The same generators built by the block recursion
/// `Y_d = [Y_{d−1}; a_d … a_d | (b_1..b_{d−1}, a_d) | Y_{d−1}; b_d … b_d | (a_1..a_{d−1}, b_d)]`
/// starting from `Y_2 = [[a_1, b_1], [b_2, a_2]]`.
pub fn bid_ask_generators_recursive(q: &BidAskQuote) -> GeneratorMatrix {
    let (a, b) = (q.ask(), q.bid());
    let mut cols: Vec<Vec<BigRational>> = vec![
        vec![a[0].clone(), b[1].clone()],
        vec![b[0].clone(), a[1].clone()],
    ];
    for m in 2..q.d() {
        let mut next = Vec::with_capacity(2 * cols.len() + 2);
        let extend = |c: &Vec<BigRational>, v: &BigRational| {
            let mut c = c.clone();
            c.push(v.clone());
            c
        };
        next.extend(cols.iter().map(|c| extend(c, &a[m])));
        next.push(b[..=m].iter().take(m).chain([&a[m]]).cloned().collect());
        next.extend(cols.iter().map(|c| extend(c, &b[m])));
        next.push(a[..m].iter().chain([&b[m]]).cloned().collect());
        cols = next;
    }
    GeneratorMatrix {
        d: q.d(),
        columns: cols,
    }
}

/// `Σ_{i∈P} b_i x_i + Σ_{j∈N} a_j x_j ≥ 0` for every bipartition.
pub fn halfspace_test(q: &BidAskQuote, x: &[BigRational]) -> Result<bool> {
    let d = q.d();
    if x.len() != d {
        return Err(Error::input(format!("portfolio has {} entries, expected {d}", x.len())));
    }
    if d >= 63 {
        return Err(Error::input("too many assets for bipartition enumeration"));
    }
    for mask in 1u64..(1u64 << d) - 1 {
        let value: BigRational = (0..d)
            .map(|v| {
                let price = if mask >> v & 1 == 1 { &q.bid()[v] } else { &q.ask()[v] };
                price * &x[v]
            })
            .sum();
        if value.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_zero_spread(q: &BidAskQuote, k: usize) -> Result<()> {
    if k >= q.d() {
        return Err(Error::input(format!("asset {} out of range", k + 1)));
    }
    if q.ask()[k] != q.bid()[k] {
        return Err(Error::input(format!(
            "asset {} has a positive spread; it must satisfy bid = ask",
            k + 1
        )));
    }
    Ok(())
}

/// Generators when asset `k` has no spread: starting from the single entry
/// `a_k`, every other asset `m` (ascending) doubles the column list as
/// `[Y with a_m | Y with b_m]`. Columns equal to an earlier one (further
/// zero-spread assets) are dropped, halving the count per extra equality.
pub fn degenerate_generators(q: &BidAskQuote, k: usize) -> Result<GeneratorMatrix> {
    check_zero_spread(q, k)?;
    let d = q.d();
    let mut cols: Vec<Vec<Option<BigRational>>> = vec![{
        let mut c = vec![None; d];
        c[k] = Some(q.ask()[k].clone());
        c
    }];
    for m in (0..d).filter(|&m| m != k) {
        let with = |v: &BigRational| {
            cols.iter()
                .map(|c| {
                    let mut c = c.clone();
                    c[m] = Some(v.clone());
                    c
                })
                .collect::<Vec<_>>()
        };
        let mut next = with(&q.ask()[m]);
        next.extend(with(&q.bid()[m]));
        cols = next;
    }
    let mut seen = HashSet::new();
    let columns = cols
        .into_iter()
        .map(|c| c.into_iter().map(|v| v.expect("filled")).collect::<Vec<_>>())
        .filter(|c| seen.insert(c.clone()))
        .collect();
    Ok(GeneratorMatrix { d, columns })
}

/// The subset form: one column per `Q ⊆ V \ {k}` with `b_i` on `Q` and
/// `a_j` elsewhere. No deduplication.
pub fn degenerate_generators_by_subset(q: &BidAskQuote, k: usize) -> Result<GeneratorMatrix> {
    check_zero_spread(q, k)?;
    let d = q.d();
    let others: Vec<usize> = (0..d).filter(|&m| m != k).collect();
    let columns = (0u64..1 << others.len())
        .map(|mask| {
            let mut c = q.ask().to_vec();
            for (bit, &m) in others.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    c[m] = q.bid()[m].clone();
                }
            }
            c
        })
        .collect();
    Ok(GeneratorMatrix { d, columns })
}

/// A generator `a_j e^i − b_i e^j` of the solvency cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalGenerator {
    pub from: usize,
    pub to: usize,
    pub vector: Vec<BigRational>,
}

fn unit(d: usize, i: usize, scale: BigRational) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); d];
    v[i] = scale;
    v
}

fn add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `π_ij e^i − e^j`.
fn price_generator(q: &BidAskQuote, i: usize, j: usize) -> Vec<BigRational> {
    let d = q.d();
    let pij = &q.ask()[j] / &q.bid()[i];
    add(&unit(d, i, pij), &unit(d, j, -BigRational::one()))
}

/// `(a_j / a_k)(π_ik e^i − e^k) + (π_kj e^k − e^j)`, which equals
/// `π_ij e^i − e^j` whenever `b_k = a_k`.
pub fn two_term_combination(q: &BidAskQuote, k: usize, i: usize, j: usize) -> Vec<BigRational> {
    let coef = &q.ask()[j] / &q.ask()[k];
    let first: Vec<BigRational> = price_generator(q, i, k).iter().map(|x| x * &coef).collect();
    add(&first, &price_generator(q, k, j))
}

/// The `2(d − 1)` generators through the zero-spread asset `k`. Every other
/// generator `π_ij e^i − e^j` is checked to be the two-term combination of
/// [`two_term_combination`].
pub fn reduced_primal_generators(q: &BidAskQuote, k: usize) -> Result<Vec<PrimalGenerator>> {
    check_zero_spread(q, k)?;
    let d = q.d();
    for i in (0..d).filter(|&i| i != k) {
        for j in (0..d).filter(|&j| j != k && j != i) {
            if two_term_combination(q, k, i, j) != price_generator(q, i, j) {
                return Err(Error::input(format!(
                    "generator ({}, {}) is not reducible through asset {}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
        }
    }
    let make = |i: usize, j: usize| PrimalGenerator {
        from: i,
        to: j,
        vector: add(
            &unit(d, i, q.ask()[j].clone()),
            &unit(d, j, -q.bid()[i].clone()),
        ),
    };
    let mut out: Vec<PrimalGenerator> = (0..d).filter(|&i| i != k).map(|i| make(i, k)).collect();
    out.extend((0..d).filter(|&j| j != k).map(|j| make(k, j)));
    Ok(out)
}

/// Solvency against an explicit generator list of the dual cone.
pub fn solvent_against(generators: &GeneratorMatrix, x: &[BigRational]) -> bool {
    generators.columns.iter().all(|y| !dot(y, x).is_negative())
}

/// Convenience: the price matrix of `q` alongside its closed-form generators.
pub fn bid_ask_market(q: &BidAskQuote) -> Result<(crate::prices::PriceMatrix, GeneratorMatrix)> {
    Ok((from_bid_ask(q)?, bid_ask_generators(q)))
}
