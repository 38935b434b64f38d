//! Sparsity parameters and edge gradings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Edge-size regime of a parameter triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arity {
    /// Every edge has exactly this many endpoints.
    Uniform(usize),
    /// Mixed edge sizes; the value is the declared minimum size used for the
    /// matroidal range check.
    NonUniform(usize),
}

/// The triple `(k, l, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityParams {
    pub k: usize,
    pub ell: usize,
    pub arity: Arity,
}

impl SparsityParams {
    pub fn uniform(k: usize, ell: usize, d: usize) -> Result<Self> {
        Self::with_arity(k, ell, Arity::Uniform(d))
    }

    pub fn non_uniform(k: usize, ell: usize, min_size: usize) -> Result<Self> {
        Self::with_arity(k, ell, Arity::NonUniform(min_size))
    }

    fn with_arity(k: usize, ell: usize, arity: Arity) -> Result<Self> {
        let p = SparsityParams { k, ell, arity };
        let d = p.d();
        if k == 0 {
            return Err(Error::Parameter("k must be positive".into()));
        }
        if d < 2 {
            return Err(Error::Parameter(format!(
                "edge size d = {d} must be at least 2"
            )));
        }
        if ell + 1 > d * k {
            return Err(Error::Parameter(format!(
                "l = {ell} is outside the matroidal range 0..={} for k = {k}, d = {d}",
                d * k - 1
            )));
        }
        Ok(p)
    }

    pub fn d(&self) -> usize {
        match self.arity {
            Arity::Uniform(d) | Arity::NonUniform(d) => d,
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.arity, Arity::Uniform(_))
    }

    /// `d*k - l`: the number of parallel copies that one `d`-set supports.
    pub fn copies(&self) -> usize {
        self.d() * self.k - self.ell
    }

    /// `k*n - l` as a signed value (negative for tiny `n`).
    pub fn bound(&self, n: usize) -> i64 {
        (self.k * n) as i64 - self.ell as i64
    }

    /// Checks that `g` fits these parameters: exact size `d` in the uniform
    /// case, `size * k - l >= 1` for every edge otherwise.
    pub fn check_graph(&self, g: &Hypergraph) -> Result<()> {
        for (i, e) in g.edges().iter().enumerate() {
            match self.arity {
                Arity::Uniform(d) if e.size() != d => {
                    return Err(Error::Parameter(format!(
                        "edge {i} has {} endpoints but the parameters are {d}-uniform",
                        e.size()
                    )));
                }
                _ if e.size() * self.k <= self.ell => {
                    return Err(Error::Parameter(format!(
                        "edge {i} of size {} violates size*k - l >= 1 for k = {}, l = {}",
                        e.size(),
                        self.k,
                        self.ell
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// A strictly decreasing chain `E_1 ⊋ E_2 ⊋ … ⊋ E_s` of edge-index sets,
/// with `E_1` the full edge set of a host hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    levels: Vec<Vec<usize>>,
    /// Deepest level (0-based) containing each edge.
    depth: Vec<usize>,
}

impl Grading {
    /// `levels[0]` must be `0..m`; each later level must be a strict subset
    /// of the one before. Indices are sorted and deduplicated.
    pub fn new(m: usize, levels: Vec<Vec<usize>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Grading("a grading needs at least one level".into()));
        }
        let levels: Vec<Vec<usize>> = levels
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        if levels[0] != (0..m).collect::<Vec<_>>() {
            return Err(Error::Grading(
                "the first level must contain every edge".into(),
            ));
        }
        for (i, pair) in levels.windows(2).enumerate() {
            let (outer, inner) = (&pair[0], &pair[1]);
            if inner.len() >= outer.len() || inner.iter().any(|e| outer.binary_search(e).is_err()) {
                return Err(Error::Grading(format!(
                    "level {} is not a strict subset of level {}",
                    i + 2,
                    i + 1
                )));
            }
        }
        let mut depth = vec![0; m];
        for (i, level) in levels.iter().enumerate() {
            for &e in level {
                depth[e] = i;
            }
        }
        Ok(Grading { levels, depth })
    }

    /// The single-level grading `E_1 = all edges`.
    pub fn trivial(m: usize) -> Self {
        Grading {
            levels: vec![(0..m).collect()],
            depth: vec![0; m],
        }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn m(&self) -> usize {
        self.depth.len()
    }

    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    /// Deepest level (0-based) that contains edge `e`.
    pub fn depth(&self, e: usize) -> usize {
        self.depth[e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matroidal_range() {
        assert!(SparsityParams::uniform(2, 3, 2).is_ok());
        assert!(SparsityParams::uniform(2, 4, 2).is_err());
        assert!(SparsityParams::uniform(2, 5, 3).is_ok());
        assert!(SparsityParams::uniform(0, 0, 2).is_err());
        assert!(SparsityParams::uniform(1, 0, 1).is_err());
        assert_eq!(SparsityParams::uniform(2, 1, 3).unwrap().copies(), 5);
    }

    #[test]
    fn graph_checks() {
        let p = SparsityParams::uniform(2, 3, 2).unwrap();
        let mixed = Hypergraph::new(3, [vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert!(p.check_graph(&mixed).is_err());
        let q = SparsityParams::non_uniform(2, 3, 2).unwrap();
        assert!(q.check_graph(&mixed).is_ok());
        // size-2 edges need 2k - l >= 1
        let q = SparsityParams::non_uniform(1, 2, 3).unwrap();
        assert!(q.check_graph(&mixed).is_err());
    }

    #[test]
    fn grading_validation() {
        assert!(Grading::new(3, vec![vec![0, 1, 2], vec![2]]).is_ok());
        assert!(Grading::new(3, vec![vec![0, 1], vec![1]]).is_err());
        assert!(Grading::new(3, vec![vec![0, 1, 2], vec![0, 1, 2]]).is_err());
        assert!(Grading::new(3, vec![vec![0, 1, 2], vec![1], vec![2]]).is_err());
        assert!(Grading::new(3, vec![]).is_err());
        let g = Grading::new(4, vec![vec![0, 1, 2, 3], vec![3, 1], vec![3]]).unwrap();
        assert_eq!((g.depth(0), g.depth(1), g.depth(3)), (0, 1, 2));
    }
}
