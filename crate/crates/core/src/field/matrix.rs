use std::fmt::Write as _;

use super::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix. Arithmetic goes through a [`Field`] passed by the
/// caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// All rows must have the same length. An empty list gives a 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Rows `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let data = indices
            .iter()
            .flat_map(|&i| self.row(i).iter().cloned())
            .collect();
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// Leading `count` columns.
    pub fn leading_cols(&self, count: usize) -> Self {
        let count = count.min(self.cols);
        let data = (0..self.rows)
            .flat_map(|i| self.row(i)[..count].iter().cloned())
            .collect();
        Matrix {
            rows: self.rows,
            cols: count,
            data,
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Matrix<E>) -> Result<Matrix<E>> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), &field.mul(a, other.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }
}

/// Rows kept in echelon form for incremental independence tests.
#[derive(Clone, Debug)]
pub struct RowEchelon<F: Field> {
    field: F,
    /// `(pivot column, row scaled so the pivot is 1)`; each row is zero at
    /// the pivot columns of the rows stored before it.
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> RowEchelon<F> {
    pub fn new(field: F) -> Self {
        RowEchelon {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = row.to_vec();
        for (pc, r) in &self.rows {
            if f.is_zero(&v[*pc]) {
                continue;
            }
            let factor = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(r) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        v
    }

    /// Is `row` outside the span of the stored rows?
    pub fn is_independent(&self, row: &[F::Elem]) -> bool {
        let v = self.reduce(row);
        v.iter().any(|x| !self.field.is_zero(x))
    }

    /// Adds `row` if it is independent of the stored rows; returns whether
    /// it was added.
    pub fn insert(&mut self, row: &[F::Elem]) -> bool {
        let f = &self.field;
        let v = self.reduce(row);
        let Some(pc) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[pc]).expect("nonzero pivot");
        let v = v.iter().map(|x| f.mul(x, &inv)).collect();
        self.rows.push((pc, v));
        true
    }
}

/// Export format: a `rows cols modulus` header line (modulus 0 for the
/// rationals), then one line per row with space-separated entries.
pub fn write_matrix<F: Field>(field: &F, m: &Matrix<F::Elem>) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", m.rows(), m.cols(), field.spec().modulus()).unwrap();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|x| field.format(x)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses [`write_matrix`] output. The header modulus must match `field`.
pub fn read_matrix<F: Field>(field: &F, text: &str) -> Result<Matrix<F::Elem>> {
    let bad = |detail: String| Error::Parse {
        what: "matrix",
        detail,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [rows, cols, modulus] = fields[..] else {
        return Err(bad(format!("bad header {header:?}")));
    };
    let parse = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("{s:?}: {e}")));
    let (rows, cols, modulus) = (
        parse(rows)? as usize,
        parse(cols)? as usize,
        parse(modulus)?,
    );
    if modulus != field.spec().modulus() {
        return Err(bad(format!(
            "modulus {modulus}, expected {}",
            field.spec().modulus()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| bad(format!("missing row {i}")))?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(bad(format!(
                "row {i} has {} entries, expected {cols}",
                entries.len()
            )));
        }
        for e in entries {
            data.push(field.parse(e)?);
        }
    }
    Matrix::from_vec(rows, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn export_round_trip() {
        let f = PrimeField::new(101).unwrap();
        let m = Matrix::from_rows(vec![vec![1u64, 0, 100], vec![7, 8, 9]]).unwrap();
        let text = write_matrix(&f, &m);
        assert_eq!(text, "2 3 101\n1 0 100\n7 8 9\n");
        assert_eq!(read_matrix(&f, &text).unwrap(), m);
        assert!(read_matrix(&PrimeField::default(), &text).is_err());

        let q = Rationals;
        let r = Matrix::from_rows(vec![vec![q.parse("1/2").unwrap(), q.from_i64(-3)]]).unwrap();
        let text = write_matrix(&q, &r);
        assert_eq!(text, "1 2 0\n1/2 -3/1\n");
        assert_eq!(read_matrix(&q, &text).unwrap(), r);
    }

    #[test]
    fn read_rejects_malformed() {
        let f = PrimeField::new(7).unwrap();
        assert!(read_matrix(&f, "").is_err());
        assert!(read_matrix(&f, "1 2\n1 2\n").is_err());
        assert!(read_matrix(&f, "1 2 7\n1\n").is_err());
        assert!(read_matrix(&f, "2 1 7\n1\n").is_err());
    }

    #[test]
    fn echelon_insertion() {
        let f = PrimeField::new(7).unwrap();
        let mut e = RowEchelon::new(f);
        assert!(e.insert(&[1, 2, 0]));
        assert!(!e.insert(&[2, 4, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.is_independent(&[1, 3, 1]));
        assert!(e.insert(&[0, 0, 3]));
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn product_and_transpose() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_rows(vec![vec![1u64, 2], vec![3, 4]]).unwrap();
        let b = Matrix::identity(&f, 2);
        assert_eq!(a.mul(&f, &b).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(*a.transpose().get(0, 1), 3);
        assert!(a.mul(&f, &Matrix::zeros(&f, 3, 1)).is_err());
        assert_eq!(a.leading_cols(1).row(1), &[3]);
    }
}
