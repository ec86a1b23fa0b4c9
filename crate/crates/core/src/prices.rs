//! Price matrices, the market axioms they must satisfy, and constructors
//! for the bid-ask case and for prime-filled test matrices.
//!
//! The axioms checked by [`validate_axioms`]:
//!
//! 1. `π_ii = 1`
//! 2. `π_ij > 0`
//! 3. `π_ij ≤ π_ik π_kj` for all `i, j, k`
//! 4. `π_ij < π_ik π_kj` for at least one triple (some friction exists)
//! 5. `π_ij < π_ik π_kj` for all `i, j` and all `k ∉ {i, j}` (strict friction)

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, serde_rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "eq1")]
    UnitDiagonal,
    #[serde(rename = "eq2")]
    Positive,
    #[serde(rename = "eq3")]
    Triangle,
    #[serde(rename = "eq4")]
    SomeFriction,
    #[serde(rename = "eq5")]
    StrictFriction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A counterexample to a universal axiom.
    Violation,
    /// An instance proving an existential axiom.
    Instance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub axiom: Axiom,
    pub kind: WitnessKind,
    /// 0-based in memory, written 1-based.
    #[serde(serialize_with = "one_based")]
    pub indices: Vec<usize>,
}

fn one_based<S: Serializer>(v: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    let shifted: Vec<usize> = v.iter().map(|i| i + 1).collect();
    shifted.serialize(s)
}

/// Outcome of [`validate_axioms`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub d: usize,
    pub holds_1: bool,
    pub holds_2: bool,
    pub holds_3: bool,
    pub holds_4: bool,
    pub holds_5_strict: bool,
    pub witnesses: Vec<Witness>,
}

impl AxiomReport {
    /// Axioms 1 to 4, the requirement for building a solvency cone.
    pub fn is_market(&self) -> bool {
        self.holds_1 && self.holds_2 && self.holds_3 && self.holds_4
    }

    pub fn witness(&self, axiom: Axiom) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.axiom == axiom)
    }
}

fn check_square(rows: &[Vec<BigRational>]) -> Result<usize> {
    let d = rows.len();
    if d < 2 {
        return Err(Error::input(format!("matrix must be at least 2x2, got {d} rows")));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
        return Err(Error::input(format!(
            "matrix is not square: row {} has {} entries, expected {d}",
            i + 1,
            r.len()
        )));
    }
    Ok(d)
}

/// Checks the five axioms on a raw square matrix. Triples are searched in
/// lexicographic `(i, j, k)` order and the first hit becomes the witness.
///
/// Only a malformed shape is an error; a non-positive entry is reported as
/// `holds_2 = false`.
pub fn validate_axioms(rows: &[Vec<BigRational>]) -> Result<AxiomReport> {
    let d = check_square(rows)?;
    let mut witnesses = Vec::new();

    let unit_diag = (0..d).find(|&i| !rows[i][i].is_one());
    if let Some(i) = unit_diag {
        witnesses.push(Witness {
            axiom: Axiom::UnitDiagonal,
            kind: WitnessKind::Violation,
            indices: vec![i, i],
        });
    }

    let nonpositive = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .find(|&(i, j)| !rows[i][j].is_positive());
    if let Some((i, j)) = nonpositive {
        witnesses.push(Witness {
            axiom: Axiom::Positive,
            kind: WitnessKind::Violation,
            indices: vec![i, j],
        });
    }

    let mut triangle_violation = None;
    let mut strict_instance = None;
    let mut strict_violation = None;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let via = &rows[i][k] * &rows[k][j];
                let direct = &rows[i][j];
                if triangle_violation.is_none() && *direct > via {
                    triangle_violation = Some(vec![i, j, k]);
                }
                if strict_instance.is_none() && *direct < via {
                    strict_instance = Some(vec![i, j, k]);
                }
                if strict_violation.is_none() && k != i && k != j && *direct >= via {
                    strict_violation = Some(vec![i, j, k]);
                }
            }
        }
    }

    let holds_1 = unit_diag.is_none();
    let holds_2 = nonpositive.is_none();
    let holds_3 = triangle_violation.is_none();
    let holds_4 = strict_instance.is_some();
    let holds_5_strict = holds_1 && holds_2 && strict_violation.is_none();

    if let Some(indices) = triangle_violation {
        witnesses.push(Witness {
            axiom: Axiom::Triangle,
            kind: WitnessKind::Violation,
            indices,
        });
    }
    if let Some(indices) = strict_instance {
        witnesses.push(Witness {
            axiom: Axiom::SomeFriction,
            kind: WitnessKind::Instance,
            indices,
        });
    }
    if let Some(indices) = strict_violation {
        witnesses.push(Witness {
            axiom: Axiom::StrictFriction,
            kind: WitnessKind::Violation,
            indices,
        });
    }

    Ok(AxiomReport {
        d,
        holds_1,
        holds_2,
        holds_3,
        holds_4,
        holds_5_strict,
        witnesses,
    })
}

/// A `d × d` matrix of exact exchange rates satisfying axioms 1 to 4.
///
/// `pi(i, j)` is the number of units of asset `i` paid for one unit of
/// asset `j`. Frictionless matrices (axiom 4 fails) are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceMatrix {
    rows: Vec<Vec<BigRational>>,
    strict: bool,
}

impl PriceMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let report = validate_axioms(&rows)?;
        if !report.is_market() {
            let failed: Vec<&str> = [
                (report.holds_1, "1 (unit diagonal)"),
                (report.holds_2, "2 (positivity)"),
                (report.holds_3, "3 (triangle inequality)"),
                (report.holds_4, "4 (some transaction cost)"),
            ]
            .iter()
            .filter(|(ok, _)| !ok)
            .map(|(_, name)| *name)
            .collect();
            return Err(Error::Axiom(format!("axioms failing: {}", failed.join(", "))));
        }
        Ok(Self {
            rows,
            strict: report.holds_5_strict,
        })
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn pi(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    /// Whether the strict friction axiom 5 holds.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn report(&self) -> AxiomReport {
        validate_axioms(&self.rows).expect("validated at construction")
    }

    pub fn to_json(&self) -> String {
        matrix_to_json(&self.rows)
    }

    pub fn to_csv(&self) -> String {
        matrix_to_csv(&self.rows)
    }
}

impl fmt::Display for PriceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// Bid and ask prices of every asset, quoted in a common numéraire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidAskQuote {
    #[serde(with = "serde_rational::vec")]
    a: Vec<BigRational>,
    #[serde(with = "serde_rational::vec")]
    b: Vec<BigRational>,
}

impl BidAskQuote {
    /// Requires `0 < b_i ≤ a_i` everywhere and `b_k < a_k` somewhere.
    pub fn new(ask: Vec<BigRational>, bid: Vec<BigRational>) -> Result<Self> {
        if ask.len() != bid.len() {
            return Err(Error::input(format!(
                "ask has {} entries but bid has {}",
                ask.len(),
                bid.len()
            )));
        }
        if ask.len() < 2 {
            return Err(Error::input("a quote needs at least 2 assets"));
        }
        for (i, (a, b)) in ask.iter().zip(&bid).enumerate() {
            if !b.is_positive() || b > a {
                return Err(Error::input(format!(
                    "asset {}: need 0 < bid <= ask, got bid {b}, ask {a}",
                    i + 1
                )));
            }
        }
        if ask == bid {
            return Err(Error::input("at least one asset needs a positive spread"));
        }
        Ok(Self { a: ask, b: bid })
    }

    pub fn d(&self) -> usize {
        self.a.len()
    }

    pub fn ask(&self) -> &[BigRational] {
        &self.a
    }

    pub fn bid(&self) -> &[BigRational] {
        &self.b
    }

    /// `b_i < a_i` for every asset.
    pub fn is_strict(&self) -> bool {
        self.a.iter().zip(&self.b).all(|(a, b)| b < a)
    }

    /// Assets without spread (`b_k = a_k`).
    pub fn zero_spread_assets(&self) -> Vec<usize> {
        (0..self.d()).filter(|&k| self.a[k] == self.b[k]).collect()
    }
}

/// `π_ii = 1`, `π_ij = a_j / b_i`.
pub fn from_bid_ask(q: &BidAskQuote) -> Result<PriceMatrix> {
    let d = q.d();
    let rows = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        &q.a[j] / &q.b[i]
                    }
                })
                .collect()
        })
        .collect();
    PriceMatrix::new(rows)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Off-diagonal entries filled row by row with consecutive primes from
/// `start`, diagonal 1. Rejected unless `min² > max` over the off-diagonal
/// entries, which makes the matrix satisfy axiom 5.
pub fn prime_matrix(d: usize, start: u64) -> Result<PriceMatrix> {
    if d < 2 {
        return Err(Error::input("dimension must be at least 2"));
    }
    if !is_prime(start) {
        return Err(Error::input(format!("start value {start} is not prime")));
    }
    let count = d * (d - 1);
    let mut primes = Vec::with_capacity(count);
    let mut p = start;
    while primes.len() < count {
        if is_prime(p) {
            primes.push(p);
        }
        p += 1;
    }
    let (min, max) = (primes[0], primes[count - 1]);
    if u128::from(min) * u128::from(min) <= u128::from(max) {
        return Err(Error::input(format!(
            "square condition fails for d = {d}, start = {start}: min {min}, max {max}, {min}^2 = {} <= {max}",
            u128::from(min) * u128::from(min)
        )));
    }
    let mut it = primes.into_iter();
    let rows = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::from_integer(BigInt::from(it.next().unwrap()))
                    }
                })
                .collect()
        })
        .collect();
    PriceMatrix::new(rows)
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    d: usize,
    #[serde(with = "serde_rational::matrix")]
    pi: Vec<Vec<BigRational>>,
}

pub fn matrix_to_json(rows: &[Vec<BigRational>]) -> String {
    let m = MatrixJson {
        d: rows.len(),
        pi: rows.to_vec(),
    };
    serde_json::to_string_pretty(&m).expect("matrix serializes")
}

pub fn matrix_from_json(text: &str) -> Result<Vec<Vec<BigRational>>> {
    let m: MatrixJson = serde_json::from_str(text)?;
    if m.pi.len() != m.d {
        return Err(Error::input(format!(
            "field d = {} but pi has {} rows",
            m.d,
            m.pi.len()
        )));
    }
    Ok(m.pi)
}

pub fn matrix_to_csv(rows: &[Vec<BigRational>]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
    for row in rows {
        w.write_record(row.iter().map(format_rational))
            .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
}

pub fn matrix_from_csv(text: &str) -> Result<Vec<Vec<BigRational>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(rec.iter().map(parse_rational).collect::<Result<Vec<_>>>()?);
    }
    Ok(rows)
}

/// Reads a matrix file; `.csv` files use the CSV encoding, anything else JSON.
pub fn read_matrix_file(path: &Path) -> Result<Vec<Vec<BigRational>>> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        matrix_from_csv(&text)
    } else {
        matrix_from_json(&text)
    }
}
