//! Brute-force combinatorial side: sparsity counts, greedy matroid rank,
//! k-regular orientations and graded sparsity.
//!
//! Every check is exhaustive over vertex subsets, so the oracle is limited to
//! small vertex counts (see [`oracle_cap`]). Subsets that induce no edge are
//! exempt from the count; any other subset `V'` must satisfy
//! `m(V') <= k|V'| - l`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::params::{Grading, SparsityParams};

/// Largest vertex count the brute-force oracle will ever accept.
pub const HARD_ORACLE_CAP: usize = 20;
pub const DEFAULT_ORACLE_CAP: usize = 12;
pub const ORACLE_CAP_ENV: &str = "SPARSITY_ORACLE_CAP";

/// Vertex cap from `SPARSITY_ORACLE_CAP`, default 12, clamped to 20.
pub fn oracle_cap() -> usize {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
        .min(HARD_ORACLE_CAP)
}

/// Witness that a vertex set induces too many edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparsityViolation {
    pub vertices: Vec<VertexId>,
    pub m_induced: usize,
    pub bound: i64,
}

/// Outcome of a sparsity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityVerdict {
    /// Smallest violating vertex set, ties broken lexicographically.
    pub violation: Option<SparsityViolation>,
}

impl SparsityVerdict {
    pub fn is_sparse(&self) -> bool {
        self.violation.is_none()
    }
}

/// Induced edge counts for every vertex subset, maintained incrementally.
struct SubsetCounts {
    n: usize,
    counts: Vec<u32>,
}

impl SubsetCounts {
    fn new(n: usize) -> Self {
        SubsetCounts {
            n,
            counts: vec![0; 1 << n],
        }
    }

    fn full(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// Calls `f` on every superset of `mask` within the vertex set.
    fn for_supersets(&self, mask: u64, mut f: impl FnMut(u64) -> bool) -> bool {
        let free = self.full() & !mask;
        let mut sub = free;
        loop {
            if !f(mask | sub) {
                return false;
            }
            if sub == 0 {
                return true;
            }
            sub = (sub - 1) & free;
        }
    }

    /// Would adding an edge with support `mask` keep every superset within
    /// `k|S| - l`?
    fn admits(&self, mask: u64, k: usize, ell: usize) -> bool {
        self.for_supersets(mask, |s| {
            let bound = (k * s.count_ones() as usize) as i64 - ell as i64;
            i64::from(self.counts[s as usize]) < bound
        })
    }

    fn add(&mut self, mask: u64) {
        let free = self.full() & !mask;
        let mut sub = free;
        loop {
            self.counts[(mask | sub) as usize] += 1;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }

    fn smallest_violation(&self, k: usize, ell: usize) -> Option<SparsityViolation> {
        let mut best: Option<(u32, Vec<VertexId>, u64)> = None;
        for s in 1..self.counts.len() as u64 {
            let count = self.counts[s as usize];
            if count == 0 {
                continue;
            }
            let size = s.count_ones();
            let bound = (k * size as usize) as i64 - ell as i64;
            if i64::from(count) <= bound {
                continue;
            }
            let vertices = bits(s);
            let better = match &best {
                None => true,
                Some((bsize, bverts, _)) => (size, &vertices) < (*bsize, bverts),
            };
            if better {
                best = Some((size, vertices, s));
            }
        }
        best.map(|(size, vertices, s)| SparsityViolation {
            vertices,
            m_induced: self.counts[s as usize] as usize,
            bound: (k * size as usize) as i64 - ell as i64,
        })
    }
}

fn bits(mask: u64) -> Vec<VertexId> {
    (0..64).filter(|&v| mask & (1u64 << v) != 0).collect()
}

/// Brute-force sparsity oracle with a vertex cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SparsityOracle {
    cap: usize,
}

impl Default for SparsityOracle {
    fn default() -> Self {
        SparsityOracle { cap: oracle_cap() }
    }
}

impl SparsityOracle {
    pub fn with_cap(cap: usize) -> Result<Self> {
        if cap > HARD_ORACLE_CAP {
            return Err(Error::Parameter(format!(
                "oracle cap {cap} exceeds the hard limit {HARD_ORACLE_CAP}"
            )));
        }
        Ok(SparsityOracle { cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_size(&self, g: &Hypergraph) -> Result<()> {
        if g.n() > self.cap {
            return Err(Error::OracleCap {
                n: g.n(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    pub fn is_sparse(&self, g: &Hypergraph, p: &SparsityParams) -> Result<SparsityVerdict> {
        self.check_size(g)?;
        p.check_graph(g)?;
        let mut counts = SubsetCounts::new(g.n());
        for e in g.edges() {
            counts.add(e.mask());
        }
        Ok(SparsityVerdict {
            violation: counts.smallest_violation(p.k, p.ell),
        })
    }

    pub fn is_tight(&self, g: &Hypergraph, p: &SparsityParams) -> Result<bool> {
        let sparse = self.is_sparse(g, p)?.is_sparse();
        Ok(sparse && g.m() as i64 == p.bound(g.n()))
    }

    /// Greedy maximal sparse subset in ground-set order.
    pub fn greedy_basis(&self, g: &Hypergraph, p: &SparsityParams) -> Result<Vec<usize>> {
        self.check_size(g)?;
        p.check_graph(g)?;
        let mut counts = SubsetCounts::new(g.n());
        let mut basis = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            let mask = e.mask();
            if counts.admits(mask, p.k, p.ell) {
                counts.add(mask);
                basis.push(i);
            }
        }
        Ok(basis)
    }

    /// Rank of the edge set in the sparsity matroid.
    pub fn rank(&self, g: &Hypergraph, p: &SparsityParams) -> Result<usize> {
        Ok(self.greedy_basis(g, p)?.len())
    }

    fn check_graded(
        &self,
        g: &Hypergraph,
        grading: &Grading,
        k: usize,
        ells: &[usize],
    ) -> Result<()> {
        self.check_size(g)?;
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
        if k == 0 {
            return Err(Error::Parameter("k must be positive".into()));
        }
        for (i, (level, &ell)) in grading.levels().iter().zip(ells).enumerate() {
            for &e in level {
                let size = g.edge(e).size();
                if size * k <= ell {
                    return Err(Error::Parameter(format!(
                        "l_{} = {ell} is outside the matroidal range 0..={} for edge {e} of size {size}",
                        i + 1,
                        size * k - 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every level `G_{>=i}` (edges in `E_i`) must be `(k, l_i)`-sparse.
    pub fn graded_is_sparse(
        &self,
        g: &Hypergraph,
        grading: &Grading,
        k: usize,
        ells: &[usize],
    ) -> Result<bool> {
        self.check_graded(g, grading, k, ells)?;
        for (level, &ell) in grading.levels().iter().zip(ells) {
            let mut counts = SubsetCounts::new(g.n());
            for &e in level {
                counts.add(g.edge(e).mask());
            }
            if counts.smallest_violation(k, ell).is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Greedy basis under graded sparsity, in ground-set order.
    pub fn graded_greedy_basis(
        &self,
        g: &Hypergraph,
        grading: &Grading,
        k: usize,
        ells: &[usize],
    ) -> Result<Vec<usize>> {
        self.check_graded(g, grading, k, ells)?;
        let mut counts: Vec<SubsetCounts> = (0..grading.len())
            .map(|_| SubsetCounts::new(g.n()))
            .collect();
        let mut basis = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            let mask = e.mask();
            let levels = 0..=grading.depth(i);
            if levels.clone().all(|l| counts[l].admits(mask, k, ells[l])) {
                for l in levels {
                    counts[l].add(mask);
                }
                basis.push(i);
            }
        }
        Ok(basis)
    }

    pub fn graded_rank(
        &self,
        g: &Hypergraph,
        grading: &Grading,
        k: usize,
        ells: &[usize],
    ) -> Result<usize> {
        Ok(self.graded_greedy_basis(g, grading, k, ells)?.len())
    }
}

pub fn is_sparse(g: &Hypergraph, p: &SparsityParams) -> Result<SparsityVerdict> {
    SparsityOracle::default().is_sparse(g, p)
}

pub fn is_tight(g: &Hypergraph, p: &SparsityParams) -> Result<bool> {
    SparsityOracle::default().is_tight(g, p)
}

pub fn matroid_rank_combinatorial(g: &Hypergraph, p: &SparsityParams) -> Result<usize> {
    SparsityOracle::default().rank(g, p)
}

pub fn graded_is_sparse(
    g: &Hypergraph,
    grading: &Grading,
    k: usize,
    ells: &[usize],
) -> Result<bool> {
    SparsityOracle::default().graded_is_sparse(g, grading, k, ells)
}

/// Choice of one tail endpoint per edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Orientation {
    tails: Vec<VertexId>,
}

impl Orientation {
    pub fn new(g: &Hypergraph, tails: Vec<VertexId>) -> Result<Self> {
        if tails.len() != g.m() {
            return Err(Error::Orientation(format!(
                "{} tails for {} edges",
                tails.len(),
                g.m()
            )));
        }
        if let Some((e, &t)) = tails
            .iter()
            .enumerate()
            .find(|&(e, &t)| !g.edge(e).contains(t))
        {
            return Err(Error::Orientation(format!(
                "vertex {t} is not an endpoint of edge {e}"
            )));
        }
        Ok(Orientation { tails })
    }

    pub fn tail(&self, edge: usize) -> VertexId {
        self.tails[edge]
    }

    pub fn tails(&self) -> &[VertexId] {
        &self.tails
    }

    /// Number of edges tailed at each vertex.
    pub fn out_degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for &t in &self.tails {
            deg[t] += 1;
        }
        deg
    }
}

/// Finds an orientation with every vertex the tail of exactly `k` edges, by
/// augmenting paths in the edge/vertex incidence graph (edge supply 1,
/// vertex capacity `k`). Edges are processed in ground-set order and
/// endpoints in ascending order.
pub fn find_orientation(g: &Hypergraph, k: usize) -> Result<Option<Orientation>> {
    if g.m() != k * g.n() {
        return Err(Error::EdgeCount {
            m: g.m(),
            kn: k * g.n(),
        });
    }
    let mut tail: Vec<Option<VertexId>> = vec![None; g.m()];
    let mut load: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for e in 0..g.m() {
        let mut visited = vec![false; g.n()];
        if !augment(g, k, e, &mut tail, &mut load, &mut visited) {
            return Ok(None);
        }
    }
    let tails = tail
        .into_iter()
        .map(|t| t.expect("every edge assigned"))
        .collect();
    Ok(Some(Orientation { tails }))
}

fn augment(
    g: &Hypergraph,
    k: usize,
    e: usize,
    tail: &mut [Option<VertexId>],
    load: &mut [Vec<usize>],
    visited: &mut [bool],
) -> bool {
    for &v in g.edge(e).endpoints() {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        if load[v].len() < k {
            load[v].push(e);
            tail[e] = Some(v);
            return true;
        }
        for slot in 0..load[v].len() {
            let other = load[v][slot];
            if augment(g, k, other, tail, load, visited) {
                // `other` moved away; `e` takes its slot at `v`
                let pos = load[v]
                    .iter()
                    .position(|&x| x == other)
                    .expect("still assigned");
                load[v][pos] = e;
                tail[e] = Some(v);
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    fn p(k: usize, l: usize, d: usize) -> SparsityParams {
        SparsityParams::uniform(k, l, d).unwrap()
    }

    fn oracle() -> SparsityOracle {
        SparsityOracle::with_cap(12).unwrap()
    }

    #[test]
    fn sparse_examples() {
        let tri = g(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(oracle().is_sparse(&tri, &p(2, 3, 2)).unwrap().is_sparse());

        let k4 = Hypergraph::complete_uniform(4, 2, 1).unwrap();
        let verdict = oracle().is_sparse(&k4, &p(2, 3, 2)).unwrap();
        assert_eq!(
            verdict.violation,
            Some(SparsityViolation {
                vertices: vec![0, 1, 2, 3],
                m_induced: 6,
                bound: 5
            })
        );

        let single = g(3, &[&[0, 1, 2]]);
        assert!(oracle()
            .is_sparse(&single, &p(1, 2, 3))
            .unwrap()
            .is_sparse());
        assert!(oracle().is_tight(&single, &p(1, 2, 3)).unwrap());

        let k5 = Hypergraph::complete_uniform(5, 2, 1).unwrap();
        assert!(!oracle().is_sparse(&k5, &p(2, 3, 2)).unwrap().is_sparse());
    }

    #[test]
    fn witness_is_smallest_then_lexicographic() {
        // two violating pairs: {1,2} and {0,3}; {0,3} is lexicographically first
        let h = g(4, &[&[1, 2], &[1, 2], &[0, 3], &[0, 3]]);
        let v = oracle()
            .is_sparse(&h, &p(2, 3, 2))
            .unwrap()
            .violation
            .unwrap();
        assert_eq!(v.vertices, vec![0, 3]);
        assert_eq!((v.m_induced, v.bound), (2, 1));
    }

    #[test]
    fn tight_examples() {
        let k4_minus = g(4, &[&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3]]);
        assert!(oracle().is_tight(&k4_minus, &p(2, 3, 2)).unwrap());
        let path = g(3, &[&[0, 1], &[1, 2]]);
        assert!(!oracle().is_tight(&path, &p(2, 3, 2)).unwrap());
    }

    #[test]
    fn parameter_errors() {
        let tri = g(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(oracle().is_sparse(&tri, &p(1, 0, 3)).is_err());
        let big = Hypergraph::empty(13);
        assert!(matches!(
            oracle().is_sparse(&big, &p(1, 0, 2)),
            Err(Error::OracleCap { n: 13, cap: 12 })
        ));
        assert!(SparsityOracle::with_cap(21).is_err());
    }

    #[test]
    fn greedy_rank_examples() {
        let k4 = Hypergraph::complete_uniform(4, 2, 1).unwrap();
        assert_eq!(
            oracle().greedy_basis(&k4, &p(2, 3, 2)).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        let tri = g(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(oracle().rank(&tri, &p(2, 3, 2)).unwrap(), 3);
        let par = g(2, &[&[0, 1], &[0, 1], &[0, 1]]);
        assert_eq!(oracle().rank(&par, &p(2, 2, 2)).unwrap(), 2);
    }

    #[test]
    fn greedy_matches_subset_definition() {
        // independent <=> is_sparse on the kept subgraph
        let k5 = Hypergraph::complete_uniform(5, 2, 2).unwrap();
        let q = p(2, 2, 2);
        let basis = oracle().greedy_basis(&k5, &q).unwrap();
        let kept = k5.edge_subset(&basis).unwrap();
        assert!(oracle().is_tight(&kept, &q).unwrap());
        for e in 0..k5.m() {
            if basis.contains(&e) {
                continue;
            }
            let mut more = basis.clone();
            more.push(e);
            let bigger = k5.edge_subset(&more).unwrap();
            assert!(!oracle().is_sparse(&bigger, &q).unwrap().is_sparse());
        }
    }

    #[test]
    fn orientation_examples() {
        let cycle = g(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]);
        let o = find_orientation(&cycle, 1).unwrap().unwrap();
        assert_eq!(o.out_degrees(4), vec![1, 1, 1, 1]);

        let pendant = g(4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        let o = find_orientation(&pendant, 1).unwrap().unwrap();
        assert_eq!(o.tail(3), 3);
        assert_eq!(o.out_degrees(4), vec![1, 1, 1, 1]);

        let doubled = g(4, &[&[0, 1], &[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(find_orientation(&doubled, 1).unwrap(), None);

        assert!(matches!(
            find_orientation(&doubled, 2),
            Err(Error::EdgeCount { m: 4, kn: 8 })
        ));
    }

    #[test]
    fn orientation_needs_reassignment() {
        // greedy first-endpoint choice would put edges 0 and 1 both on vertex 0
        let h = g(3, &[&[0, 1], &[0, 2], &[0, 1, 2]]);
        let o = find_orientation(&h, 1).unwrap().unwrap();
        assert_eq!(o.out_degrees(3), vec![1, 1, 1]);
    }

    #[test]
    fn orientation_validation() {
        let tri = g(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(Orientation::new(&tri, vec![0, 1, 2]).is_ok());
        assert!(Orientation::new(&tri, vec![2, 1, 0]).is_err());
        assert!(Orientation::new(&tri, vec![0, 1]).is_err());
    }

    #[test]
    fn graded_examples() {
        let tri = g(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let trivial = Grading::trivial(3);
        assert_eq!(
            oracle().graded_is_sparse(&tri, &trivial, 2, &[3]).unwrap(),
            oracle().is_sparse(&tri, &p(2, 3, 2)).unwrap().is_sparse()
        );
        let two = Grading::new(3, vec![vec![0, 1, 2], vec![2]]).unwrap();
        assert!(oracle().graded_is_sparse(&tri, &two, 2, &[3, 3]).unwrap());
        assert!(matches!(
            oracle().graded_is_sparse(&tri, &two, 2, &[3, 4]),
            Err(Error::Parameter(_))
        ));
        assert!(oracle().graded_is_sparse(&tri, &two, 2, &[3]).is_err());
    }

    #[test]
    fn graded_rank_respects_deeper_levels() {
        // three copies of {0,1}, two of them at level 2 with l_2 = 3:
        // level 2 admits only one copy, level 1 (l = 2) admits two.
        let h = g(2, &[&[0, 1], &[0, 1], &[0, 1]]);
        let grading = Grading::new(3, vec![vec![0, 1, 2], vec![1, 2]]).unwrap();
        assert_eq!(
            oracle()
                .graded_greedy_basis(&h, &grading, 2, &[2, 3])
                .unwrap(),
            vec![0, 1]
        );
        let grading = Grading::new(3, vec![vec![0, 1, 2], vec![0, 1]]).unwrap();
        assert_eq!(
            oracle()
                .graded_greedy_basis(&h, &grading, 2, &[2, 3])
                .unwrap(),
            vec![0, 2]
        );
    }
}
