//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use solvency_cone::algorithm::{getb, getc};
use solvency_cone::bipartite::{
    all_configurations, degree_sequence, degree_sequence_sets, draconian_equals_degrees, Bipartition,
    Configuration, Side, DEFAULT_TREE_BUDGET,
};
use solvency_cone::dual_cone::{
    config_sets, count_bounds, enumerate_extreme_directions, feasible_tree_solutions, is_feasible,
    is_solvent, DualDirection, EnumerationOptions, ExtremeSet, FeasibleTreeSolution, Strategy,
};
use solvency_cone::oracle::{
    brute_force_extremes, double_description_extremes, random_connected_bipartite, random_price_matrix,
    rank_certificate_check, HRepresentation, DD_MAX_D,
};
use solvency_cone::prices::{from_bid_ask, prime_matrix, BidAskQuote, PriceMatrix};
use solvency_cone::special_case::{bid_ask_generators, degenerate_generators, halfspace_test};

const SEED: u64 = 20_240_601;
const EXAMPLE_RUNTIME: Duration = Duration::from_secs(5);
const COUNT_RUNTIME: Duration = Duration::from_secs(60);
const TRIANGULATION_RUNTIME: Duration = Duration::from_secs(600);
const ALGORITHM_RUNTIME: Duration = Duration::from_secs(300);
const SEQUENCE_RUNTIME: Duration = Duration::from_secs(120);
const TRIANGULATION_MATRICES: usize = 24;
const SEQUENCE_GRAPHS: usize = 200;
const SEQUENCE_MAX_ARCS: usize = 12;
const PORTFOLIOS: usize = 1000;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn r(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn frac(num: &[u64], den: &[u64]) -> BigRational {
    let p = |v: &[u64]| v.iter().fold(BigRational::one(), |acc, &x| acc * r(x));
    p(num) / p(den)
}

fn exhaustive(strategy: Strategy) -> EnumerationOptions {
    EnumerationOptions {
        strategy,
        config_sets: false,
        ..EnumerationOptions::default()
    }
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{:.2?} < {:?}", t, limit))
    } else {
        Err(format!("took {:.2?}, limit {:?}", t, limit))
    }
}

fn worked_extraction() -> Outcome {
    let start = Instant::now();
    let pi = prime_matrix(20, 59).map_err(|e| e.to_string())?;
    let bp = Bipartition::from_p(20, &(4..=10).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
    let c = Configuration::new(&bp, Side::P, vec![3, 2, 4, 2, 2, 2, 4]).map_err(|e| e.to_string())?;
    let res = getb(&pi, &bp, &c).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    let expected = vec![
        frac(&[487, 757], &[503, 859]),
        frac(&[491, 757], &[503, 859]),
        frac(&[619, 947, 1367], &[677, 953, 1427]),
        frac(&[757], &[859]),
        frac(&[757], &[503, 859]),
        frac(&[947, 1367], &[677, 953, 1427]),
        frac(&[1], &[859]),
        frac(&[1367], &[953, 1427]),
        frac(&[1], &[1117]),
        frac(&[839], &[859, 1237]),
        frac(&[1], &[1427]),
        frac(&[1327], &[1427]),
        frac(&[947, 1367], &[953, 1427]),
        frac(&[1367], &[1427]),
        frac(&[1373], &[1427]),
        frac(&[829], &[859]),
        frac(&[839], &[859]),
        frac(&[839, 1249], &[859, 1237]),
        frac(&[1109], &[1117]),
        r(1),
    ];
    let expected = DualDirection::new(&expected).map_err(|e| e.to_string())?;
    ensure!(res.y == expected, "vector differs: got {}", res.y);
    let b = vec![1, 1, 1, 2, 1, 2, 2, 1, 1, 2, 1, 1, 3];
    ensure!(
        res.complementary_config.values == b,
        "N-configuration {:?}, expected {:?}",
        res.complementary_config.values,
        b
    );
    ensure!(
        degree_sequence(&res.tree, Side::P) == c,
        "tree does not realize the requested P-configuration"
    );
    ensure!(is_feasible(&pi, &bp, res.y.as_slice()), "vector infeasible");
    ensure!(
        elapsed < EXAMPLE_RUNTIME,
        "exact vector and b match, but took {elapsed:.2?}, limit {EXAMPLE_RUNTIME:?}"
    );
    Ok(format!("exact vector and b match; {elapsed:.2?} < {EXAMPLE_RUNTIME:?}"))
}

fn counting() -> Outcome {
    let (lower, upper) = count_bounds(20).map_err(|e| e.to_string())?;
    ensure!(lower == BigUint::from(1_048_574u64), "lower bound {lower}");
    ensure!(upper == BigUint::from(35_345_263_800u64), "upper bound {upper}");
    let mut timing = String::new();
    for (d, n) in [(3usize, 6usize), (4, 20), (5, 70)] {
        let start = Instant::now();
        let pi = prime_matrix(d, 59).map_err(|e| e.to_string())?;
        let set = enumerate_extreme_directions(&pi, &exhaustive(Strategy::Exhaustive))
            .map_err(|e| e.to_string())?;
        ensure!(set.len() == n, "prime d={d}: {} directions, expected {n}", set.len());
        let (_, up) = count_bounds(d).map_err(|e| e.to_string())?;
        ensure!(up == BigUint::from(n), "upper bound at d={d} is {up}, expected {n}");
        if d == 5 {
            timing = within(start, COUNT_RUNTIME)?;
        }
    }
    Ok(format!("bounds at d=20 and counts 6/20/70 match; d=5 in {timing}"))
}

fn quote(a: &[u64], b: &[u64]) -> std::result::Result<BidAskQuote, String> {
    BidAskQuote::new(a.iter().map(|&x| r(x)).collect(), b.iter().map(|&x| r(x)).collect())
        .map_err(|e| e.to_string())
}

fn bid_ask() -> Outcome {
    let asks = [3u64, 5, 7, 11, 13];
    let bids = [2u64, 4, 6, 10, 12];
    for d in 3..=5 {
        let q = quote(&asks[..d], &bids[..d])?;
        let pi = from_bid_ask(&q).map_err(|e| e.to_string())?;
        let set = enumerate_extreme_directions(&pi, &exhaustive(Strategy::Exhaustive))
            .map_err(|e| e.to_string())?;
        let expected = (1usize << d) - 2;
        ensure!(set.len() == expected, "strict d={d}: {} directions, expected {expected}", set.len());
        ensure!(
            set.vector_set() == bid_ask_generators(&q).canonical_set(),
            "strict d={d}: directions differ from closed form"
        );

        let mut degenerate_bids = bids[..d].to_vec();
        degenerate_bids[1] = asks[1];
        let q = quote(&asks[..d], &degenerate_bids)?;
        let pi = from_bid_ask(&q).map_err(|e| e.to_string())?;
        let set = enumerate_extreme_directions(&pi, &exhaustive(Strategy::Exhaustive))
            .map_err(|e| e.to_string())?;
        let expected = 1usize << (d - 1);
        ensure!(set.len() == expected, "degenerate d={d}: {} directions, expected {expected}", set.len());
        let closed = degenerate_generators(&q, 1).map_err(|e| e.to_string())?;
        ensure!(
            set.vector_set() == closed.canonical_set(),
            "degenerate d={d}: directions differ from closed form"
        );
    }
    Ok("strict 6/14/30 and degenerate 4/8/16 match closed forms".into())
}

fn triangulation() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut directions = 0;
    for k in 0..TRIANGULATION_MATRICES {
        let d = 2 + k % 4;
        let pi = random_price_matrix(&mut rng, d);
        let tree = enumerate_extreme_directions(&pi, &exhaustive(Strategy::Exhaustive))
            .map_err(|e| e.to_string())?;
        let alg = enumerate_extreme_directions(&pi, &exhaustive(Strategy::Algorithmic))
            .map_err(|e| e.to_string())?;
        let brute = brute_force_extremes(&pi, DEFAULT_TREE_BUDGET).map_err(|e| e.to_string())?;
        let dd: BTreeSet<DualDirection> =
            double_description_extremes(&HRepresentation::from_prices(&pi), DD_MAX_D)
                .map_err(|e| e.to_string())?
                .into_iter()
                .collect();
        let set = tree.vector_set();
        ensure!(set == alg.vector_set(), "matrix {k} (d={d}): algorithmic enumeration differs\n{pi}");
        ensure!(set == brute.vector_set(), "matrix {k} (d={d}): brute force differs\n{pi}");
        ensure!(set == dd, "matrix {k} (d={d}): double description differs\n{pi}");
        for y in &set {
            let cert = rank_certificate_check(&pi, y.as_slice()).map_err(|e| e.to_string())?;
            ensure!(cert.extreme && cert.agree(), "matrix {k}: certificate fails for {y}: {cert:?}");
        }
        directions += set.len();
    }
    let timing = within(start, TRIANGULATION_RUNTIME)?;
    Ok(format!(
        "{TRIANGULATION_MATRICES} matrices, {directions} directions agree; {timing}"
    ))
}

fn algorithm_soundness() -> Outcome {
    let start = Instant::now();
    let mut calls = 0usize;
    for d in 2..=6 {
        let pi = prime_matrix(d, 59).map_err(|e| e.to_string())?;
        for bp in Bipartition::all(d) {
            let solutions = feasible_tree_solutions(&pi, &bp, DEFAULT_TREE_BUDGET).map_err(|e| e.to_string())?;
            let known: BTreeSet<&DualDirection> = solutions.iter().map(|(y, _)| y).collect();
            for side in [Side::P, Side::N] {
                let mut reached = BTreeSet::new();
                for c in all_configurations(&bp, side) {
                    let res = match side {
                        Side::P => getb(&pi, &bp, &c),
                        Side::N => getc(&pi, &bp, &c),
                    }
                    .map_err(|e| format!("d={d} {:?} {c:?}: {e}", bp.to_json()))?;
                    calls += 1;
                    ensure!(
                        degree_sequence(&res.tree, side) == c,
                        "d={d}: tree degrees differ from {c:?}"
                    );
                    ensure!(
                        degree_sequence(&res.tree, side.other()) == res.complementary_config,
                        "d={d}: complementary configuration mismatch"
                    );
                    ensure!(known.contains(&res.y), "d={d}: {} is not a feasible tree solution", res.y);
                    let trees = &solutions.iter().find(|(y, _)| *y == res.y).expect("known").1;
                    ensure!(trees.contains(&res.tree), "d={d}: returned tree does not generate {}", res.y);
                    reached.insert(res.y);
                }
                ensure!(
                    reached.len() == known.len(),
                    "d={d}: {side:?}-configurations reach {} of {} solutions",
                    reached.len(),
                    known.len()
                );
            }
        }
    }
    let timing = within(start, ALGORITHM_RUNTIME)?;
    Ok(format!("{calls} extractions verified for d <= 6; {timing}"))
}

fn sequence_sets() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x4c34);
    for k in 0..SEQUENCE_GRAPHS {
        let g = random_connected_bipartite(&mut rng, SEQUENCE_MAX_ARCS);
        let (left, right) = degree_sequence_sets(&g, DEFAULT_TREE_BUDGET).map_err(|e| e.to_string())?;
        ensure!(
            left.len() == right.len(),
            "graph {k}: {} left vs {} right sequences",
            left.len(),
            right.len()
        );
        ensure!(
            draconian_equals_degrees(&g, DEFAULT_TREE_BUDGET).map_err(|e| e.to_string())?,
            "graph {k}: draconian sequences differ from degrees"
        );
    }
    let timing = within(start, SEQUENCE_RUNTIME)?;
    Ok(format!("{SEQUENCE_GRAPHS} graphs (seed {SEED}); {timing}"))
}

fn disjoint_configurations() -> Outcome {
    let mut pairs = 0usize;
    for d in 2..=6 {
        let pi = prime_matrix(d, 59).map_err(|e| e.to_string())?;
        for bp in Bipartition::all(d) {
            let solutions = feasible_tree_solutions(&pi, &bp, DEFAULT_TREE_BUDGET).map_err(|e| e.to_string())?;
            let sets: Vec<_> = solutions
                .into_iter()
                .map(|(y, trees)| {
                    let sol = FeasibleTreeSolution { y, tree: trees[0].clone() };
                    config_sets(&pi, &sol, DEFAULT_TREE_BUDGET)
                })
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for a in 0..sets.len() {
                for b in a + 1..sets.len() {
                    pairs += 1;
                    ensure!(sets[a].0.is_disjoint(&sets[b].0), "d={d}: P-sets intersect");
                    ensure!(sets[a].1.is_disjoint(&sets[b].1), "d={d}: N-sets intersect");
                }
            }
        }
    }
    Ok(format!("{pairs} pairs of distinct solutions have disjoint configuration sets"))
}

fn grid(d: usize, values: &[i64]) -> Vec<Vec<BigRational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                values.iter().map(move |&x| {
                    let mut v = v.clone();
                    v.push(BigRational::from_integer(x.into()));
                    v
                })
            })
            .collect();
    }
    out
}

fn random_quote(rng: &mut ChaCha8Rng, d: usize) -> BidAskQuote {
    loop {
        let b: Vec<BigRational> = (0..d)
            .map(|_| BigRational::new(rng.gen_range(1..=20i64).into(), rng.gen_range(1..=4i64).into()))
            .collect();
        let a: Vec<BigRational> = b
            .iter()
            .map(|x| x * BigRational::new(rng.gen_range(8..=12i64).into(), 8.into()).max(BigRational::one()))
            .collect();
        if let Ok(q) = BidAskQuote::new(a, b) {
            return q;
        }
    }
}

fn solvency_checks(pi: &PriceMatrix, set: &ExtremeSet) -> std::result::Result<(), String> {
    let d = pi.d();
    for i in 0..d {
        let mut e = vec![BigRational::zero(); d];
        e[i] = BigRational::one();
        ensure!(is_solvent(set, &e).map_err(|e| e.to_string())?, "unit vector {} insolvent", i + 1);
        for j in 0..d {
            let mut g = vec![BigRational::zero(); d];
            g[i] += pi.pi(i, j);
            g[j] -= BigRational::one();
            ensure!(
                is_solvent(set, &g).map_err(|e| e.to_string())?,
                "generator ({}, {}) insolvent",
                i + 1,
                j + 1
            );
        }
    }
    for x in grid(d, &[-2, -1, 0]) {
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        ensure!(!is_solvent(set, &x).map_err(|e| e.to_string())?, "nonpositive {x:?} solvent");
    }
    Ok(())
}

fn solvency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x50_1f);
    for d in 2..=5 {
        let pi = prime_matrix(d, 59).map_err(|e| e.to_string())?;
        let set = enumerate_extreme_directions(&pi, &exhaustive(Strategy::Exhaustive)).map_err(|e| e.to_string())?;
        solvency_checks(&pi, &set)?;
    }
    let mut solvent = 0usize;
    for k in 0..PORTFOLIOS {
        let d = 2 + k % 4;
        let q = random_quote(&mut rng, d);
        let pi = from_bid_ask(&q).map_err(|e| e.to_string())?;
        let set = enumerate_extreme_directions(&pi, &exhaustive(Strategy::Exhaustive)).map_err(|e| e.to_string())?;
        if k < 8 {
            solvency_checks(&pi, &set)?;
        }
        let x: Vec<BigRational> = (0..d)
            .map(|_| BigRational::new(rng.gen_range(-10..=10i64).into(), rng.gen_range(1..=5i64).into()))
            .collect();
        let by_halfspace = halfspace_test(&q, &x).map_err(|e| e.to_string())?;
        let by_dual = is_solvent(&set, &x).map_err(|e| e.to_string())?;
        ensure!(by_halfspace == by_dual, "portfolio {k} disagrees: {x:?}");
        solvent += usize::from(by_dual);
    }
    Ok(format!("{PORTFOLIOS} portfolios agree ({solvent} solvent)"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 example extraction", worked_extraction),
        ("2 counting", counting),
        ("3 bid-ask exactness", bid_ask),
        ("4 oracle triangulation", triangulation),
        ("5 algorithm soundness", algorithm_soundness),
        ("6 degree sequence sets", sequence_sets),
        ("7 configuration disjointness", disjoint_configurations),
        ("8 solvency sanity", solvency),
    ];
    // Optional substring filter, e.g. `cargo test --test acceptance -- counting`.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected: Vec<_> = criteria
        .into_iter()
        .filter(|(name, _)| filter.is_empty() || filter.iter().any(|f| name.contains(f.as_str())))
        .collect();
    let mut failed = 0;
    for &(name, run) in &selected {
        match run() {
            Ok(msg) => println!("PASS  criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", selected.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
