//! Exact rank computations by fraction-free integer elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Clears denominators and divides out the content, giving a primitive
/// integer vector spanning the same line.
pub fn primitive_integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    make_primitive(ints)
}

fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Row echelon basis built one row at a time. Each stored row has a pivot
/// column where every later stored row is zero.
#[derive(Debug, Clone, Default)]
pub struct IncrementalBasis {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IncrementalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis; keeps it and returns `true` if it is
    /// independent of the rows already held.
    pub fn insert(&mut self, row: &[BigRational]) -> bool {
        let mut r = primitive_integer_row(row);
        for (pivot, b) in &self.rows {
            if r[*pivot].is_zero() {
                continue;
            }
            // r <- b[p]*r - r[p]*b cancels the pivot entry without fractions.
            let bp = &b[*pivot];
            let rp = r[*pivot].clone();
            for (x, y) in r.iter_mut().zip(b) {
                *x = &*x * bp - &rp * y;
            }
            r = make_primitive(r);
        }
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                if r[p].is_negative() {
                    r.iter_mut().for_each(|x| *x = -&*x);
                }
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

/// Exact rank of a list of rational rows.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut basis = IncrementalBasis::new();
    for r in rows {
        basis.insert(r);
    }
    basis.rank()
}

/// Indices of a maximal independent subset, chosen greedily in input order.
pub fn independent_subset(rows: &[Vec<BigRational>]) -> Vec<usize> {
    let mut basis = IncrementalBasis::new();
    rows.iter()
        .enumerate()
        .filter_map(|(i, r)| basis.insert(r).then_some(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn rank_of_small_matrices() {
        let rows = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(rank(&rows), 2);
        assert_eq!(independent_subset(&rows), vec![0, 2]);
        assert_eq!(rank(&[vec![int(0), int(0)]]), 0);
        let id = vec![
            vec![rat(1, 3), int(0)],
            vec![int(0), rat(-2, 7)],
        ];
        assert_eq!(rank(&id), 2);
    }

    #[test]
    fn fractional_dependence_detected() {
        let rows = vec![
            vec![rat(1, 2), rat(1, 3), int(1)],
            vec![int(3), int(2), int(6)],
        ];
        assert_eq!(rank(&rows), 1);
    }
}
