//! Natural realization matrices.
//!
//! A realization of a hypergraph `G` on `n` vertices is an `m x kn` matrix
//! whose row for edge `e` may be nonzero only in the `k` columns of each
//! endpoint of `e`. For `l > 0` every row is additionally orthogonal to the
//! columns of a random `kn x l` matrix `U`: the row's support entries are a
//! random combination of a kernel basis of `U` restricted to the support.
//!
//! Randomness is split by [`child_seed`]: stream 0 draws `U`, stream `e + 1`
//! draws the entries of row `e`. Rows are therefore independent of each other
//! and reproducible from the seed alone.

use crate::error::{Error, Result};
use crate::field::{child_seed, nullspace, random_matrix, Field, Matrix, SeededRng};
use crate::hypergraph::Hypergraph;
use crate::oracle::Orientation;
use crate::params::{Grading, SparsityParams};

/// Allowed nonzero columns of each row: `k*v .. k*v + k` for every endpoint
/// `v`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPattern {
    k: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl SupportPattern {
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.k * self.n
    }

    pub fn support(&self, row: usize) -> &[usize] {
        &self.rows[row]
    }

    pub fn allows(&self, row: usize, col: usize) -> bool {
        self.rows[row].binary_search(&col).is_ok()
    }
}

pub fn build_pattern(g: &Hypergraph, k: usize) -> SupportPattern {
    let rows = g
        .edges()
        .iter()
        .map(|e| {
            e.endpoints()
                .iter()
                .flat_map(|&v| k * v..k * v + k)
                .collect()
        })
        .collect();
    SupportPattern { k, n: g.n(), rows }
}

/// A realization matrix with everything needed to reproduce and audit it.
#[derive(Clone, Debug)]
pub struct Realization<F: Field> {
    matrix: Matrix<F::Elem>,
    pattern: SupportPattern,
    params: Option<SparsityParams>,
    ells: Vec<usize>,
    /// `kn x max(ells)`; level `i` uses the leading `ells[i]` columns.
    u: Matrix<F::Elem>,
    /// Number of leading `u` columns each row is orthogonal to.
    row_ell: Vec<usize>,
    seed: Option<u64>,
    field: F,
}

impl<F: Field> Realization<F> {
    pub fn matrix(&self) -> &Matrix<F::Elem> {
        &self.matrix
    }

    pub fn pattern(&self) -> &SupportPattern {
        &self.pattern
    }

    /// Parameters for realizations built by [`realize_kl`].
    pub fn params(&self) -> Option<&SparsityParams> {
        self.params.as_ref()
    }

    pub fn k(&self) -> usize {
        self.pattern.k
    }

    /// `[l]` for a plain realization, `(l_1, …, l_s)` for a graded one.
    pub fn ells(&self) -> &[usize] {
        &self.ells
    }

    /// The largest constraint matrix `U_s`.
    pub fn u(&self) -> &Matrix<F::Elem> {
        &self.u
    }

    /// `U_i` (0-based level): the leading `l_i` columns.
    pub fn u_level(&self, level: usize) -> Matrix<F::Elem> {
        self.u.leading_cols(self.ells[level])
    }

    /// `None` for the deterministic identity specialization.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.field.rank(&self.matrix)
    }

    /// Rank of the rows `indices`.
    pub fn rank_of_rows(&self, indices: &[usize]) -> usize {
        self.field.rank(&self.matrix.select_rows(indices))
    }
}

/// Fills every row of the pattern; row `e` is orthogonal to the leading
/// `row_ell[e]` columns of a `kn x u_cols` random matrix.
fn build<F: Field>(
    g: &Hypergraph,
    k: usize,
    row_ell: Vec<usize>,
    u_cols: usize,
    field: &F,
    seed: u64,
) -> (Matrix<F::Elem>, SupportPattern, Matrix<F::Elem>, Vec<usize>) {
    let pattern = build_pattern(g, k);
    let kn = k * g.n();
    let u = random_matrix(kn, u_cols, field, &mut SeededRng::new(child_seed(seed, 0)));
    let mut matrix = Matrix::zeros(field, g.m(), kn);
    for (e, &ell) in row_ell.iter().enumerate() {
        let mut rng = SeededRng::new(child_seed(seed, e as u64 + 1));
        let support = pattern.support(e);
        let values = if ell == 0 {
            support.iter().map(|_| field.sample(&mut rng)).collect()
        } else {
            solve_row(field, &u, support, ell, &mut rng)
        };
        for (&c, v) in support.iter().zip(values) {
            matrix.set(e, c, v);
        }
    }
    (matrix, pattern, u, row_ell)
}

/// Random vector `x` on `support` with `x . U[support, ..ell] = 0`.
fn solve_row<F: Field>(
    field: &F,
    u: &Matrix<F::Elem>,
    support: &[usize],
    ell: usize,
    rng: &mut SeededRng,
) -> Vec<F::Elem> {
    // local system: ell equations in |support| unknowns
    let local = u.select_rows(support).leading_cols(ell).transpose();
    let basis = nullspace(field, &local);
    assert!(
        basis.len() + ell >= support.len() && !basis.is_empty(),
        "local kernel of dimension {} for support {} and l = {ell}",
        basis.len(),
        support.len()
    );
    let mut x = vec![field.zero(); support.len()];
    for b in &basis {
        let c = field.sample(rng);
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi = field.add(xi, &field.mul(&c, bi));
        }
    }
    x
}

/// Generic `(k, 0)` realization: independent random entries on the pattern.
pub fn realize_k0<F: Field>(
    g: &Hypergraph,
    k: usize,
    field: &F,
    seed: u64,
) -> Result<Realization<F>> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let (matrix, pattern, u, row_ell) = build(g, k, vec![0; g.m()], 0, field, seed);
    Ok(Realization {
        matrix,
        pattern,
        params: None,
        ells: vec![0],
        u,
        row_ell,
        seed: Some(seed),
        field: field.clone(),
    })
}

/// Realization of the `(k, l)`-sparsity matroid: `M U = 0` for a random
/// `kn x l` matrix `U`, each row a random point of its local solution space.
/// For `l = 0` this is [`realize_k0`].
pub fn realize_kl<F: Field>(
    g: &Hypergraph,
    p: &SparsityParams,
    field: &F,
    seed: u64,
) -> Result<Realization<F>> {
    p.check_graph(g)?;
    let (matrix, pattern, u, row_ell) = build(g, p.k, vec![p.ell; g.m()], p.ell, field, seed);
    Ok(Realization {
        matrix,
        pattern,
        params: Some(*p),
        ells: vec![p.ell],
        u,
        row_ell,
        seed: Some(seed),
        field: field.clone(),
    })
}

/// The 0/1 specialization driven by a `k`-regular orientation: the `j`-th
/// edge (in ground-set order) tailed at vertex `i` gets a single 1 in column
/// `k*i + j`. The result is a permutation matrix of rank `kn`.
pub fn specialize_identity<F: Field>(
    g: &Hypergraph,
    k: usize,
    orientation: &Orientation,
    field: &F,
) -> Result<Realization<F>> {
    let orientation = Orientation::new(g, orientation.tails().to_vec())?;
    let degrees = orientation.out_degrees(g.n());
    if let Some((v, &deg)) = degrees.iter().enumerate().find(|&(_, &deg)| deg != k) {
        return Err(Error::Orientation(format!(
            "vertex {v} is the tail of {deg} edges, expected {k}"
        )));
    }
    let pattern = build_pattern(g, k);
    let mut matrix = Matrix::zeros(field, g.m(), k * g.n());
    let mut used = vec![0; g.n()];
    for e in 0..g.m() {
        let tail = orientation.tail(e);
        matrix.set(e, k * tail + used[tail], field.one());
        used[tail] += 1;
    }
    Ok(Realization {
        matrix,
        pattern,
        params: None,
        ells: vec![0],
        u: Matrix::zeros(field, k * g.n(), 0),
        row_ell: vec![0; g.m()],
        seed: None,
        field: field.clone(),
    })
}

/// Graded realization: nested `U_1 ⊂ … ⊂ U_s`, `U_i` being the leading
/// `l_i` columns of one random `kn x l_s` matrix. An edge whose deepest
/// level is `g` is solved against `U_g`. `ells` must be non-decreasing.
pub fn realize_graded<F: Field>(
    g: &Hypergraph,
    grading: &Grading,
    k: usize,
    ells: &[usize],
    field: &F,
    seed: u64,
) -> Result<Realization<F>> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    if grading.m() != g.m() {
        return Err(Error::Grading(format!(
            "grading covers {} edges, hypergraph has {}",
            grading.m(),
            g.m()
        )));
    }
    if ells.len() != grading.len() {
        return Err(Error::Grading(format!(
            "{} levels but {} values of l",
            grading.len(),
            ells.len()
        )));
    }
    if ells.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Parameter(format!(
            "graded l must be non-decreasing, got {ells:?}"
        )));
    }
    let row_ell: Vec<usize> = (0..g.m()).map(|e| ells[grading.depth(e)]).collect();
    for (e, &ell) in row_ell.iter().enumerate() {
        let size = g.edge(e).size();
        if size * k <= ell {
            return Err(Error::Parameter(format!(
                "edge {e} of size {size} violates size*k - l >= 1 for k = {k}, l = {ell}"
            )));
        }
    }
    let u_cols = *ells.last().expect("at least one level");
    let (matrix, pattern, u, row_ell) = build(g, k, row_ell, u_cols, field, seed);
    Ok(Realization {
        matrix,
        pattern,
        params: None,
        ells: ells.to_vec(),
        u,
        row_ell,
        seed: Some(seed),
        field: field.clone(),
    })
}

/// Every nonzero entry lies in `G`'s support pattern and every row is
/// orthogonal to the `U` columns it was solved against.
pub fn verify_pattern<F: Field>(r: &Realization<F>, g: &Hypergraph, k: usize) -> Result<bool> {
    let m = r.matrix();
    if m.rows() != g.m() || m.cols() != k * g.n() {
        return Err(Error::Dimension(format!(
            "realization is {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            g.m(),
            k * g.n()
        )));
    }
    let f = r.field();
    let pattern = build_pattern(g, k);
    for i in 0..m.rows() {
        let row = m.row(i);
        if row
            .iter()
            .enumerate()
            .any(|(c, x)| !f.is_zero(x) && !pattern.allows(i, c))
        {
            return Ok(false);
        }
    }
    if r.u.rows() != m.cols() {
        return Err(Error::Dimension(format!(
            "U has {} rows, expected {}",
            r.u.rows(),
            m.cols()
        )));
    }
    for (i, &ell) in r.row_ell.iter().enumerate() {
        for j in 0..ell {
            let dot = (0..m.cols()).fold(f.zero(), |acc, c| {
                f.add(&acc, &f.mul(m.get(i, c), r.u.get(c, j)))
            });
            if !f.is_zero(&dot) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
