use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{Field, FieldSpec, Matrix, SeededRng};
use crate::error::{Error, Result};

/// Largest value drawn by [`Rationals::sample`].
const SAMPLE_MAX: i64 = 1 << 20;

/// Exact rationals. Sampling draws integers uniformly from `[1, 2^20]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn sample(&self, rng: &mut SeededRng) -> BigRational {
        self.from_i64(rng.inner().gen_range(1..=SAMPLE_MAX))
    }

    fn sample_space(&self) -> BigUint {
        BigUint::from(SAMPLE_MAX as u64)
    }

    fn format(&self, a: &BigRational) -> String {
        format!("{}/{}", a.numer(), a.denom())
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let bad = |detail: String| Error::Parse {
            what: "rational",
            detail,
        };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|e| bad(format!("{s:?}: {e}")))?;
        let den: BigInt = den.parse().map_err(|e| bad(format!("{s:?}: {e}")))?;
        if den.is_zero() {
            return Err(bad(format!("{s:?} has a zero denominator")));
        }
        Ok(BigRational::new(num, den))
    }

    /// Fraction-free (Bareiss) elimination on the integer matrix obtained by
    /// clearing each row's denominators.
    fn rank(&self, a: &Matrix<BigRational>) -> usize {
        let mut rows: Vec<Vec<BigInt>> = (0..a.rows())
            .map(|i| {
                let row = a.row(i);
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect();
        bareiss_rank(&mut rows, a.cols())
    }
}

/// Rank of an integer matrix by fraction-free elimination. Every division
/// is exact: after each step the active entries are minors of the input.
pub(crate) fn bareiss_rank(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for i in rank + 1..rows {
            let lead = a[i][c].clone();
            for j in c + 1..cols {
                let v = &a[i][j] * &pivot - &lead * &a[rank][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = pivot.abs();
        rank += 1;
    }
    rank
}
