//! Matroid queries answered by realization matrices, refereed by the
//! brute-force oracle.
//!
//! A random realization can only lose rank relative to the generic one, so
//! every answer here errs on one side: ranks may come out low, independent
//! sets may look dependent, never the reverse. Several seeds are combined by
//! taking the best answer among them.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{child_seed, Field, RowEchelon};
use crate::hypergraph::Hypergraph;
use crate::oracle::SparsityOracle;
use crate::params::{Grading, SparsityParams};
use crate::realization::{realize_graded, realize_kl, Realization};

/// How many seeds to spend before declaring a disagreement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RetryPolicy {
    /// Extra seeds after the first when the rank comes out low.
    pub retries: usize,
    /// Further fresh seeds tried before failing with a discrepancy.
    pub resample_rounds: usize,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            retries: 2,
            resample_rounds: 5,
        }
    }
}

impl RetryPolicy {
    pub fn max_seeds(&self) -> usize {
        1 + self.retries + self.resample_rounds
    }
}

/// The first `count` child seeds of `base_seed`.
pub fn derive_seeds(base_seed: u64, count: usize) -> Vec<u64> {
    (0..count as u64)
        .map(|i| child_seed(base_seed, i))
        .collect()
}

/// `(m / |S|)^t` capped at 1, where `|S|` is the sampling range of the field
/// and `t` the number of independent realizations.
pub fn failure_bound<F: Field>(field: &F, m: usize, trials: usize) -> BigRational {
    if m == 0 {
        return BigRational::zero();
    }
    let space: BigUint = field.sample_space();
    let single = BigRational::new(BigInt::from(m), BigInt::from(space));
    if single >= BigRational::one() {
        return BigRational::one();
    }
    Pow::pow(single, trials)
}

/// The row matroid of one or more realizations of the same hypergraph.
#[derive(Clone, Debug)]
pub struct LinearMatroid<F: Field> {
    m: usize,
    realizations: Vec<Realization<F>>,
}

impl<F: Field> LinearMatroid<F> {
    /// One `(k, l)` realization per seed.
    pub fn new(g: &Hypergraph, p: &SparsityParams, field: &F, seeds: &[u64]) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::Parameter("at least one seed is required".into()));
        }
        let realizations = seeds
            .iter()
            .map(|&s| realize_kl(g, p, field, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearMatroid {
            m: g.m(),
            realizations,
        })
    }

    /// One graded realization per seed.
    pub fn graded(
        g: &Hypergraph,
        grading: &Grading,
        k: usize,
        ells: &[usize],
        field: &F,
        seeds: &[u64],
    ) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::Parameter("at least one seed is required".into()));
        }
        let realizations = seeds
            .iter()
            .map(|&s| realize_graded(g, grading, k, ells, field, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearMatroid {
            m: g.m(),
            realizations,
        })
    }

    /// Realizations must all have `m` rows.
    pub fn from_realizations(m: usize, realizations: Vec<Realization<F>>) -> Result<Self> {
        if realizations.is_empty() {
            return Err(Error::Parameter(
                "at least one realization is required".into(),
            ));
        }
        if let Some(r) = realizations.iter().find(|r| r.matrix().rows() != m) {
            return Err(Error::Dimension(format!(
                "realization has {} rows, expected {m}",
                r.matrix().rows()
            )));
        }
        Ok(LinearMatroid { m, realizations })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn realizations(&self) -> &[Realization<F>] {
        &self.realizations
    }

    fn push(&mut self, r: Realization<F>) {
        self.realizations.push(r);
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.realizations.iter().filter_map(|r| r.seed()).collect()
    }

    pub fn seed_ranks(&self) -> Vec<usize> {
        self.realizations.iter().map(Realization::rank).collect()
    }

    pub fn rank(&self) -> usize {
        self.seed_ranks().into_iter().max().unwrap_or(0)
    }

    fn check_indices(&self, idx: &[usize]) -> Result<Vec<usize>> {
        let mut idx = idx.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&index) = idx.iter().find(|&&i| i >= self.m) {
            return Err(Error::EdgeIndexOutOfRange { index, m: self.m });
        }
        Ok(idx)
    }

    fn independent_sorted(&self, idx: &[usize]) -> bool {
        idx.is_empty()
            || self
                .realizations
                .iter()
                .any(|r| r.rank_of_rows(idx) == idx.len())
    }

    /// Full row rank in at least one realization.
    pub fn is_independent(&self, idx: &[usize]) -> Result<bool> {
        let idx = self.check_indices(idx)?;
        Ok(self.independent_sorted(&idx))
    }

    /// Greedy basis in ground-set order, taken in the first realization of
    /// maximum rank.
    pub fn basis(&self) -> Vec<usize> {
        let ranks = self.seed_ranks();
        let best = ranks
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i);
        let Some(best) = best else {
            return Vec::new();
        };
        let r = &self.realizations[best];
        let mut echelon = RowEchelon::new(r.field().clone());
        (0..self.m)
            .filter(|&e| echelon.insert(r.matrix().row(e)))
            .collect()
    }

    /// Inclusion-minimal dependent subset of `idx`, by deleting every edge
    /// (in ground-set order) whose removal leaves the set dependent.
    pub fn circuit(&self, idx: &[usize]) -> Result<Vec<usize>> {
        let idx = self.check_indices(idx)?;
        if self.independent_sorted(&idx) {
            return Err(Error::Independent);
        }
        let mut current = idx.clone();
        for e in idx {
            let without: Vec<usize> = current.iter().copied().filter(|&x| x != e).collect();
            if !self.independent_sorted(&without) {
                current = without;
            }
        }
        Ok(current)
    }

    pub fn failure_bound(&self) -> BigRational {
        failure_bound(
            self.realizations[0].field(),
            self.m,
            self.realizations.len(),
        )
    }
}

/// Upper bound `min(m, kn - l)` on the rank of any realization.
pub fn rank_ceiling(g: &Hypergraph, p: &SparsityParams) -> usize {
    let cols = p.bound(g.n()).max(0) as usize;
    g.m().min(cols)
}

/// Best rank over `seeds`, stopping early once the ceiling `min(m, kn - l)`
/// is reached.
pub fn rank_linear<F: Field>(
    g: &Hypergraph,
    p: &SparsityParams,
    field: &F,
    seeds: &[u64],
) -> Result<usize> {
    p.check_graph(g)?;
    let ceiling = rank_ceiling(g, p);
    let mut best = 0;
    for &s in seeds {
        best = best.max(realize_kl(g, p, field, s)?.rank());
        if best == ceiling {
            break;
        }
    }
    Ok(best)
}

pub fn is_independent<F: Field>(
    g: &Hypergraph,
    p: &SparsityParams,
    idx: &[usize],
    field: &F,
    seeds: &[u64],
) -> Result<bool> {
    LinearMatroid::new(g, p, field, seeds)?.is_independent(idx)
}

pub fn extract_basis<F: Field>(
    g: &Hypergraph,
    p: &SparsityParams,
    field: &F,
    seeds: &[u64],
) -> Result<Vec<usize>> {
    Ok(LinearMatroid::new(g, p, field, seeds)?.basis())
}

pub fn find_circuit<F: Field>(
    g: &Hypergraph,
    p: &SparsityParams,
    idx: &[usize],
    field: &F,
    seeds: &[u64],
) -> Result<Vec<usize>> {
    LinearMatroid::new(g, p, field, seeds)?.circuit(idx)
}

/// Linear answers next to the combinatorial reference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatroidReport {
    pub rank_linear: usize,
    pub rank_combinatorial: Option<usize>,
    pub agree: bool,
    pub seeds: Vec<u64>,
    /// `a/b`
    pub failure_bound: String,
    pub basis: Option<Vec<usize>>,
    pub circuit: Option<Vec<usize>>,
    /// Rank of each individual realization, aligned with `seeds`.
    #[serde(skip)]
    pub seed_ranks: Vec<usize>,
}

impl MatroidReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

pub(crate) fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn instance_dump(g: &Hypergraph, p: &SparsityParams, seeds: &[u64]) -> String {
    serde_json::json!({
        "graph": g,
        "params": p,
        "seeds": seeds,
    })
    .to_string()
}

/// Compares the linear rank against the greedy oracle rank.
///
/// Seeds are `child_seed(base_seed, 0..)`. After the first seed, up to
/// `policy.retries` more are tried while the linear rank is below the
/// combinatorial one, then up to `policy.resample_rounds` more; if it is
/// still low the call fails with [`Error::Discrepancy`]. A linear rank above
/// the combinatorial one, or a linear basis the oracle rejects, fails
/// immediately.
pub fn cross_validate<F: Field>(
    g: &Hypergraph,
    p: &SparsityParams,
    field: &F,
    base_seed: u64,
    policy: RetryPolicy,
    oracle: &SparsityOracle,
) -> Result<MatroidReport> {
    let combinatorial = oracle.rank(g, p)?;
    let mut seeds = derive_seeds(base_seed, policy.max_seeds()).into_iter();
    let first = seeds.next().expect("at least one seed");
    let mut matroid = LinearMatroid::new(g, p, field, &[first])?;
    let mut best = matroid.rank();
    while best < combinatorial {
        let Some(seed) = seeds.next() else {
            return Err(Error::Discrepancy {
                linear: best,
                combinatorial,
                instance: instance_dump(g, p, &matroid.seeds()),
            });
        };
        let r = realize_kl(g, p, field, seed)?;
        best = best.max(r.rank());
        matroid.push(r);
    }
    let seed_ranks = matroid.seed_ranks();
    if best > combinatorial {
        return Err(Error::Discrepancy {
            linear: best,
            combinatorial,
            instance: instance_dump(g, p, &matroid.seeds()),
        });
    }
    let basis = matroid.basis();
    let basis_graph = g.edge_subset(&basis)?;
    if basis.len() != best || !oracle.is_sparse(&basis_graph, p)?.is_sparse() {
        return Err(Error::Discrepancy {
            linear: basis.len(),
            combinatorial,
            instance: instance_dump(g, p, &matroid.seeds()),
        });
    }
    let circuit = if best < g.m() {
        let all: Vec<usize> = (0..g.m()).collect();
        Some(matroid.circuit(&all)?)
    } else {
        None
    };
    Ok(MatroidReport {
        rank_linear: best,
        rank_combinatorial: Some(combinatorial),
        agree: true,
        seeds: matroid.seeds(),
        failure_bound: format_ratio(&matroid.failure_bound()),
        basis: Some(basis),
        circuit,
        seed_ranks,
    })
}

/// Report without a combinatorial reference, for hypergraphs beyond the
/// oracle cap.
pub fn linear_report<F: Field>(
    g: &Hypergraph,
    p: &SparsityParams,
    field: &F,
    base_seed: u64,
    policy: RetryPolicy,
) -> Result<MatroidReport> {
    let seeds = derive_seeds(base_seed, 1 + policy.retries);
    let matroid = LinearMatroid::new(g, p, field, &seeds)?;
    let basis = matroid.basis();
    Ok(MatroidReport {
        rank_linear: matroid.rank(),
        rank_combinatorial: None,
        agree: false,
        seeds,
        failure_bound: format_ratio(&matroid.failure_bound()),
        basis: Some(basis),
        circuit: None,
        seed_ranks: matroid.seed_ranks(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    const F: PrimeField = PrimeField::DEFAULT;

    fn p(k: usize, l: usize, d: usize) -> SparsityParams {
        SparsityParams::uniform(k, l, d).unwrap()
    }

    fn seeds() -> Vec<u64> {
        derive_seeds(1, 3)
    }

    fn oracle() -> SparsityOracle {
        SparsityOracle::with_cap(12).unwrap()
    }

    #[test]
    fn rank_examples() {
        let k4 = Hypergraph::complete_uniform(4, 2, 1).unwrap();
        assert_eq!(rank_linear(&k4, &p(2, 3, 2), &F, &seeds()).unwrap(), 5);
        let tri = Hypergraph::complete_uniform(3, 2, 1).unwrap();
        assert_eq!(rank_linear(&tri, &p(2, 3, 2), &F, &seeds()).unwrap(), 3);
        let four = Hypergraph::new(2, vec![vec![0, 1]; 4]).unwrap();
        assert_eq!(rank_linear(&four, &p(2, 3, 2), &F, &seeds()).unwrap(), 1);
    }

    #[test]
    fn independence_examples() {
        let k4 = Hypergraph::complete_uniform(4, 2, 1).unwrap();
        let q = p(2, 3, 2);
        let m = LinearMatroid::new(&k4, &q, &F, &seeds()).unwrap();
        for skip in 0..6 {
            let five: Vec<usize> = (0..6).filter(|&e| e != skip).collect();
            assert!(m.is_independent(&five).unwrap());
        }
        assert!(!m.is_independent(&[0, 1, 2, 3, 4, 5]).unwrap());
        assert!(m.is_independent(&[]).unwrap());
        assert!(m.is_independent(&[6]).is_err());
    }

    #[test]
    fn basis_examples() {
        let k4 = Hypergraph::complete_uniform(4, 2, 1).unwrap();
        let q = p(2, 3, 2);
        assert_eq!(
            extract_basis(&k4, &q, &F, &seeds()).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        let tri = Hypergraph::complete_uniform(3, 2, 1).unwrap();
        assert_eq!(
            extract_basis(&tri, &q, &F, &seeds()).unwrap(),
            vec![0, 1, 2]
        );
        let empty = Hypergraph::empty(4);
        assert!(extract_basis(&empty, &q, &F, &seeds()).unwrap().is_empty());
    }

    #[test]
    fn circuit_examples() {
        let k4 = Hypergraph::complete_uniform(4, 2, 1).unwrap();
        let q = p(2, 3, 2);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(find_circuit(&k4, &q, &all, &F, &seeds()).unwrap(), all);
        assert!(matches!(
            find_circuit(&k4, &q, &[0, 1, 2], &F, &seeds()),
            Err(Error::Independent)
        ));

        // (2,1,3): dk - l = 5 copies are tight, the 6th closes a circuit
        let q = p(2, 1, 3);
        let mut edges = vec![vec![0, 1, 3]];
        edges.extend(vec![vec![0, 1, 2]; 6]);
        let h = Hypergraph::new(4, edges).unwrap();
        let all: Vec<usize> = (0..7).collect();
        assert_eq!(
            find_circuit(&h, &q, &all, &F, &seeds()).unwrap(),
            vec![1, 2, 3, 4, 5, 6]
        );
    }

    #[test]
    fn cross_validate_examples() {
        let k = Hypergraph::complete_uniform(4, 3, 5).unwrap();
        let r = cross_validate(&k, &p(2, 1, 3), &F, 3, RetryPolicy::default(), &oracle()).unwrap();
        assert_eq!(r.rank_linear, 7);
        assert_eq!(r.rank_combinatorial, Some(7));
        assert!(r.agree);

        let empty = Hypergraph::empty(3);
        let r = cross_validate(
            &empty,
            &p(2, 3, 2),
            &F,
            3,
            RetryPolicy::default(),
            &oracle(),
        )
        .unwrap();
        assert_eq!((r.rank_linear, r.rank_combinatorial), (0, Some(0)));
        assert_eq!(r.failure_bound, "0/1");
        assert_eq!(r.circuit, None);
    }

    #[test]
    fn report_json_key_order() {
        let k4 = Hypergraph::complete_uniform(4, 2, 1).unwrap();
        let r = cross_validate(&k4, &p(2, 3, 2), &F, 7, RetryPolicy::default(), &oracle()).unwrap();
        let json = r.to_json();
        let keys = [
            "rank_linear",
            "rank_combinatorial",
            "agree",
            "seeds",
            "failure_bound",
            "basis",
            "circuit",
        ];
        let positions: Vec<usize> = keys
            .iter()
            .map(|k| json.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(json.contains(r#""circuit":[0,1,2,3,4,5]"#));
        assert!(!json.contains("seed_ranks"));
    }

    #[test]
    fn failure_bounds() {
        assert_eq!(format_ratio(&failure_bound(&F, 0, 3)), "0/1");
        let one = failure_bound(&F, 6, 1);
        assert_eq!(
            one,
            BigRational::new(6.into(), BigInt::from(crate::field::DEFAULT_PRIME))
        );
        assert_eq!(failure_bound(&F, 6, 2), &one * &one);
        assert_eq!(failure_bound(&Rationals, 1 << 21, 1), BigRational::one());
        let small = PrimeField::new(5).unwrap();
        assert_eq!(failure_bound(&small, 7, 3), BigRational::one());
    }

    #[test]
    fn rationals_agree_with_prime_field() {
        let k4 = Hypergraph::complete_uniform(4, 2, 2).unwrap();
        let q = p(2, 2, 2);
        let a = rank_linear(&k4, &q, &F, &seeds()).unwrap();
        let b = rank_linear(&k4, &q, &Rationals, &seeds()).unwrap();
        assert_eq!((a, b), (6, 6));
    }
}
