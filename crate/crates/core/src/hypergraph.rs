//! Multi-hypergraphs with an ordered edge multiset.
//!
//! The order of `edges` is the ground-set order of every matroid built on a
//! hypergraph, and therefore also the row order of every realization matrix.
//! Derived hypergraphs (edge subsets, induced subgraphs) always keep the
//! relative order of the edges they retain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// A hyperedge: at least two distinct endpoints, stored ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Hyperedge(Vec<VertexId>);

impl Hyperedge {
    /// Canonicalizes `endpoints`. `index` is only used for error messages.
    fn new(index: usize, mut endpoints: Vec<VertexId>, n: usize) -> Result<Self> {
        if let Some(&endpoint) = endpoints.iter().find(|&&v| v >= n) {
            return Err(Error::EndpointOutOfRange {
                edge: index,
                endpoint,
                n,
            });
        }
        endpoints.sort_unstable();
        if let Some(w) = endpoints.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedEndpoint {
                edge: index,
                endpoint: w[0],
            });
        }
        if endpoints.len() < 2 {
            return Err(Error::EdgeTooSmall {
                edge: index,
                size: endpoints.len(),
            });
        }
        Ok(Hyperedge(endpoints))
    }

    pub fn endpoints(&self) -> &[VertexId] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Bitmask of the endpoints; only meaningful for `n <= 64`.
    pub(crate) fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &v| acc | (1u64 << v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Hyperedge>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHypergraph {
    n: usize,
    edges: Vec<Vec<VertexId>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.n, raw.edges)
    }
}

/// A vertex-induced subgraph together with the maps back to its host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Hypergraph,
    /// `vertices[i]` is the host vertex re-indexed as `i`.
    pub vertices: Vec<VertexId>,
    /// `edges[j]` is the host edge index of edge `j`.
    pub edges: Vec<usize>,
}

impl Hypergraph {
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = VertexId>,
    {
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, e)| Hyperedge::new(i, e.into_iter().collect(), n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Hypergraph { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        Hypergraph {
            n,
            edges: Vec::new(),
        }
    }

    /// Complete `d`-uniform hypergraph with every `d`-subset repeated
    /// `multiplicity` times. Copies of one subset are adjacent; subsets are
    /// listed in lexicographic order.
    pub fn complete_uniform(n: usize, d: usize, multiplicity: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Parameter(format!(
                "edge size d = {d} must be at least 2"
            )));
        }
        if n < d {
            return Err(Error::Parameter(format!("n = {n} is smaller than d = {d}")));
        }
        if multiplicity == 0 {
            return Err(Error::Parameter("multiplicity must be at least 1".into()));
        }
        let mut edges = Vec::with_capacity(multiplicity * binomial(n, d));
        for subset in Subsets::new(n, d) {
            for _ in 0..multiplicity {
                edges.push(Hyperedge(subset.clone()));
            }
        }
        Ok(Hypergraph { n, edges })
    }

    /// Complete non-uniform hypergraph truncated at `max_size`: every
    /// `d`-subset appears `d * k` times for each `d` in `2..=max_size`.
    pub fn complete_plus(n: usize, k: usize, max_size: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("n = {n} must be at least 2")));
        }
        if max_size > n {
            return Err(Error::Parameter(format!(
                "max_size = {max_size} exceeds n = {n}"
            )));
        }
        if k == 0 {
            return Err(Error::Parameter("k must be positive".into()));
        }
        let mut edges = Vec::new();
        for d in 2..=max_size {
            for subset in Subsets::new(n, d) {
                for _ in 0..d * k {
                    edges.push(Hyperedge(subset.clone()));
                }
            }
        }
        Ok(Hypergraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Hyperedge {
        &self.edges[index]
    }

    /// `Some(d)` if every edge has exactly `d` endpoints (`None` when edgeless
    /// or mixed).
    pub fn uniform_size(&self) -> Option<usize> {
        let first = self.edges.first()?.size();
        self.edges
            .iter()
            .all(|e| e.size() == first)
            .then_some(first)
    }

    /// Keeps every edge whose endpoints all lie in `vertices`, re-indexing the
    /// kept vertices densely in ascending order.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Result<InducedSubgraph> {
        if let Some(&vertex) = vertices.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex, n: self.n });
        }
        let mut kept: Vec<VertexId> = vertices.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (j, e) in self.edges.iter().enumerate() {
            if e.endpoints().iter().all(|&v| new_index[v] != usize::MAX) {
                // re-indexing is monotone, so endpoints stay sorted
                edges.push(Hyperedge(
                    e.endpoints().iter().map(|&v| new_index[v]).collect(),
                ));
                edge_map.push(j);
            }
        }
        Ok(InducedSubgraph {
            graph: Hypergraph {
                n: kept.len(),
                edges,
            },
            vertices: kept,
            edges: edge_map,
        })
    }

    /// Same vertex set, only the selected edges, in ground-set order.
    /// Duplicate indices are collapsed.
    pub fn edge_subset(&self, indices: &[usize]) -> Result<Hypergraph> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&index) = idx.iter().find(|&&i| i >= self.m()) {
            return Err(Error::EdgeIndexOutOfRange { index, m: self.m() });
        }
        Ok(Hypergraph {
            n: self.n,
            edges: idx.iter().map(|&i| self.edges[i].clone()).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraph serialization is infallible")
    }

    /// Structural problems (bad endpoints) surface as graph errors rather
    /// than JSON errors.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawHypergraph = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// Lexicographic iterator over the `size`-subsets of `[0, n)`.
#[derive(Clone, Debug)]
pub struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    pub fn new(n: usize, size: usize) -> Self {
        let current = (size <= n).then(|| (0..size).collect());
        Subsets { n, current }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let size = out.len();
        let mut next = out.clone();
        let mut i = size;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - size + i {
                next[i] += 1;
                for j in i + 1..size {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
