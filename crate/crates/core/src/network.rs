//! Undirected, loop-free social networks and the similarity-driven rewiring
//! rule.

use alloc::vec::Vec;

use rand::Rng;

use crate::rng::uniform;
use crate::{Error, Result};

/// Symmetric boolean adjacency over `size` agents, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SocialNetwork {
    size: usize,
    adjacency: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkStats {
    pub average_degree: f64,
    pub isolated_count: usize,
    /// Zero when the network has fewer than two agents.
    pub density: f64,
}

/// Distance thresholds and probabilities for link creation and removal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewiringParams {
    delta_add: f64,
    delta_cut: f64,
    p_add: f64,
    p_cut: f64,
}

impl RewiringParams {
    pub fn new(delta_add: f64, delta_cut: f64, p_add: f64, p_cut: f64) -> Result<Self> {
        unit("delta_add", delta_add)?;
        unit("delta_cut", delta_cut)?;
        unit("p_add", p_add)?;
        unit("p_cut", p_cut)?;
        Ok(Self {
            delta_add,
            delta_cut,
            p_add,
            p_cut,
        })
    }

    /// Rewiring that never changes the network.
    pub fn frozen() -> Self {
        Self {
            delta_add: 0.0,
            delta_cut: 1.0,
            p_add: 0.0,
            p_cut: 0.0,
        }
    }

    pub fn delta_add(&self) -> f64 {
        self.delta_add
    }
    pub fn delta_cut(&self) -> f64 {
        self.delta_cut
    }
    pub fn p_add(&self) -> f64 {
        self.p_add
    }
    pub fn p_cut(&self) -> f64 {
        self.p_cut
    }
}

fn unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { name, value })
    }
}

impl SocialNetwork {
    pub fn empty(size: usize) -> Self {
        Self {
            size,
            adjacency: alloc::vec![false; size * size],
        }
    }

    pub fn complete(size: usize) -> Self {
        let mut net = Self::empty(size);
        for i in 0..size {
            for j in i + 1..size {
                net.set(i, j, true);
            }
        }
        net
    }

    /// Builds a network from undirected edges. Duplicates and either
    /// orientation are accepted; self-loops are not.
    pub fn from_edges<I>(size: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut net = Self::empty(size);
        for (i, j) in edges {
            net.check_vertex(i)?;
            net.check_vertex(j)?;
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            net.set(i, j, true);
        }
        Ok(net)
    }

    /// Erdős–Rényi graph: one draw per unordered pair, pairs visited in
    /// ascending `(i, j)` order, edge present iff the draw is below `edge_prob`.
    pub fn random<R: Rng + ?Sized>(size: usize, edge_prob: f64, rng: &mut R) -> Result<Self> {
        unit("edge_prob", edge_prob)?;
        let mut net = Self::empty(size);
        for i in 0..size {
            for j in i + 1..size {
                if uniform(rng) < edge_prob {
                    net.set(i, j, true);
                }
            }
        }
        Ok(net)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn is_linked(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.size + j]
    }

    fn set(&mut self, i: usize, j: usize, linked: bool) {
        self.adjacency[i * self.size + j] = linked;
        self.adjacency[j * self.size + i] = linked;
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.row(vertex).iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count() / 2
    }

    /// Linked vertices of `vertex` in ascending order.
    pub fn neighbors(&self, vertex: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(vertex)
            .iter()
            .enumerate()
            .filter_map(|(j, &a)| a.then_some(j))
    }

    /// Edges `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.size {
            for j in i + 1..self.size {
                if self.is_linked(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn row(&self, vertex: usize) -> &[bool] {
        &self.adjacency[vertex * self.size..(vertex + 1) * self.size]
    }

    fn check_vertex(&self, vertex: usize) -> Result<()> {
        if vertex < self.size {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex,
                size: self.size,
            })
        }
    }

    fn require_pairs(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::TooFewAgents {
                required: 2,
                actual: self.size,
            });
        }
        Ok(())
    }

    /// Edge count over `N(N-1)/2`.
    pub fn density(&self) -> Result<f64> {
        self.require_pairs()?;
        let n = self.size as f64;
        Ok(self.edge_count() as f64 / (n * (n - 1.0) / 2.0))
    }

    /// Degree centrality `(C_in + C_out) / (2(N-1))`. In- and out-degree
    /// coincide on a symmetric network, so this is `degree / (N-1)`.
    pub fn centrality(&self, vertex: usize) -> Result<f64> {
        self.require_pairs()?;
        self.check_vertex(vertex)?;
        let d = self.degree(vertex) as f64;
        Ok((d + d) / (2.0 * (self.size as f64 - 1.0)))
    }

    pub fn stats(&self) -> NetworkStats {
        let edges = self.edge_count();
        let isolated_count = (0..self.size).filter(|&v| self.degree(v) == 0).count();
        let average_degree = if self.size == 0 {
            0.0
        } else {
            2.0 * edges as f64 / self.size as f64
        };
        NetworkStats {
            average_degree,
            isolated_count,
            density: self.density().unwrap_or(0.0),
        }
    }

    pub fn rewire<R: Rng + ?Sized>(
        &self,
        opinions: &[f64],
        params: &RewiringParams,
        rng: &mut R,
    ) -> Result<Self> {
        self.rewire_counted(opinions, params, rng)
            .map(|(net, _)| net)
    }

    /// Applies one rewiring pass and reports how many unordered pairs were
    /// examined.
    ///
    /// Each pair `i < j` is visited once in lexicographic order. An unlinked
    /// pair closer than `delta_add` is linked with probability `p_add`; a
    /// linked pair farther than `delta_cut` is unlinked with probability
    /// `p_cut`. Every eligible pair consumes exactly one draw, and all
    /// decisions read the adjacency as it was before the pass.
    pub fn rewire_counted<R: Rng + ?Sized>(
        &self,
        opinions: &[f64],
        params: &RewiringParams,
        rng: &mut R,
    ) -> Result<(Self, usize)> {
        if opinions.len() != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                actual: opinions.len(),
            });
        }
        if let Some(&bad) = opinions.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OpinionOutOfRange(bad));
        }

        let mut next = self.clone();
        let mut visits = 0;
        for i in 0..self.size {
            for j in i + 1..self.size {
                visits += 1;
                let d = (opinions[i] - opinions[j]).abs();
                if self.is_linked(i, j) {
                    if d > params.delta_cut && uniform(rng) < params.p_cut {
                        next.set(i, j, false);
                    }
                } else if d < params.delta_add && uniform(rng) < params.p_add {
                    next.set(i, j, true);
                }
            }
        }
        Ok((next, visits))
    }
}
