//! Exact arithmetic: prime fields, rationals, dense matrices, rank and
//! kernels, and seeded sampling.

mod matrix;
mod prime;
mod rational;
mod rng;

pub use matrix::{read_matrix, write_matrix, Matrix, RowEchelon};
pub use prime::{is_prime, PrimeField, DEFAULT_PRIME};
pub use rational::Rationals;
pub use rng::{child_seed, SeededRng};

use std::fmt::Debug;

use num_bigint::BigUint;

use crate::error::Result;

/// Which field a computation runs over. Recorded with every output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl FieldSpec {
    /// Modulus as written in export headers; `0` stands for the rationals.
    pub fn modulus(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }
}

pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Draws one element uniformly from the sampling range.
    fn sample(&self, rng: &mut SeededRng) -> Self::Elem;
    /// Size of the sampling range of [`Field::sample`].
    fn sample_space(&self) -> BigUint;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn rank(&self, a: &Matrix<Self::Elem>) -> usize {
        let mut m = a.clone();
        rref(self, &mut m).len()
    }
}

/// Rank over the matrix's field.
pub fn matrix_rank<F: Field>(field: &F, a: &Matrix<F::Elem>) -> usize {
    field.rank(a)
}

/// Reduced row echelon form in place, pivoting on the first nonzero entry
/// at or below the current row. Returns the pivot columns.
pub fn rref<F: Field>(field: &F, a: &mut Matrix<F::Elem>) -> Vec<usize> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = field.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = field.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || field.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..cols {
                let v = field.sub(a.get(i, j), &field.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{x : A x = 0}`, one vector per free column in
/// ascending order; the vector for free column `f` has a 1 at `f` and zeros
/// at every other free column.
pub fn nullspace<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut r = a.clone();
    let pivots = rref(field, &mut r);
    let cols = a.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![field.zero(); cols];
            x[f] = field.one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = field.neg(r.get(row, f));
            }
            x
        })
        .collect()
}

/// Matrix with every entry drawn by [`Field::sample`], row-major.
pub fn random_matrix<F: Field>(
    rows: usize,
    cols: usize,
    field: &F,
    rng: &mut SeededRng,
) -> Matrix<F::Elem> {
    let data = (0..rows * cols).map(|_| field.sample(rng)).collect();
    Matrix::from_vec(rows, cols, data).expect("length matches")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::default()
    }

    fn m<F: Field>(field: &F, rows: &[&[i64]]) -> Matrix<F::Elem> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = fp();
        assert_eq!(matrix_rank(&f, &Matrix::identity(&f, 3)), 3);
        assert_eq!(matrix_rank(&f, &Matrix::zeros(&f, 2, 2)), 0);
        let q = Rationals;
        assert_eq!(matrix_rank(&q, &m(&q, &[&[1, 2], &[2, 4]])), 1);
        assert_eq!(matrix_rank(&f, &m(&f, &[&[1, 2], &[2, 4]])), 1);
        assert_eq!(matrix_rank(&f, &Matrix::zeros(&f, 0, 5)), 0);
    }

    #[test]
    fn nullspace_examples() {
        let f = fp();
        let basis = nullspace(&f, &m(&f, &[&[1, 1]]));
        assert_eq!(basis, vec![vec![f.from_i64(-1), f.one()]]);
        assert!(nullspace(&f, &Matrix::identity(&f, 2)).is_empty());
        assert_eq!(nullspace(&f, &Matrix::zeros(&f, 2, 2)).len(), 2);

        let q = Rationals;
        let a = m(&q, &[&[2, 4, 1], &[1, 2, 3]]);
        let basis = nullspace(&q, &a);
        assert_eq!(basis.len(), 1);
        let x = Matrix::from_vec(3, 1, basis[0].clone()).unwrap();
        assert!(a.mul(&q, &x).unwrap().is_zero(&q));
    }

    #[test]
    fn random_matrix_determinism() {
        let f = fp();
        let empty = random_matrix(0, 5, &f, &mut SeededRng::new(3));
        assert_eq!((empty.rows(), empty.cols()), (0, 5));
        let a = random_matrix(4, 4, &f, &mut SeededRng::new(42));
        let b = random_matrix(4, 4, &f, &mut SeededRng::new(42));
        assert_eq!(a, b);
        let c = random_matrix(4, 4, &f, &mut SeededRng::new(43));
        assert_ne!(a, c);
        let r = random_matrix(3, 3, &Rationals, &mut SeededRng::new(42));
        assert_eq!(r, random_matrix(3, 3, &Rationals, &mut SeededRng::new(42)));
    }

    #[test]
    fn random_3x3_full_rank_over_many_seeds() {
        // Schwartz-Zippel: det is a degree-3 polynomial, so a singular draw has
        // probability at most 3/p (about 1.3e-18); 10^4 draws should all be full rank.
        let f = fp();
        let singular = (0..10_000u64)
            .filter(|&s| matrix_rank(&f, &random_matrix(3, 3, &f, &mut SeededRng::new(s))) < 3)
            .count();
        assert_eq!(singular, 0);
    }
}
