//! Simple undirected graphs and the small amount of graph machinery the
//! certification pipeline and its test oracles need.

mod adjtext;
mod gm;
mod graph6;
mod iso;

pub use adjtext::parse_adjacency_text;
pub use gm::{find_gm_partitions, find_gm_partitions_with_sizes, gm_switch, GmPartition};
pub use graph6::{encode_graph6, parse_graph6};
pub use iso::is_isomorphic;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::BigIntMatrix;

/// A simple undirected graph on vertices `0..n`.
///
/// The adjacency relation is stored as a dense, row-major `n*n` boolean
/// table that is kept symmetric with a false diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph({}, {:?})", self.n, self.edges())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        complement(&Graph::empty(n))
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges).expect("cycle edges are valid")
    }

    /// Builds a graph from an edge list. Loops and out-of-range endpoints are
    /// rejected; repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("loop at vertex {u}")));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Builds a graph from a 0/1 adjacency table given as rows.
    pub fn from_adjacency_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Graph::empty(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, &bit) in row.iter().enumerate() {
                if i == j && bit {
                    return Err(Error::InvalidArgument(format!("loop at vertex {i}")));
                }
                if bit != rows[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "adjacency is not symmetric at ({i}, {j})"
                    )));
                }
                g.adj[i * n + j] = bit;
            }
        }
        Ok(g)
    }

    /// Decodes the `n <= 11` graph whose upper triangle is packed into `mask`,
    /// bit `k` standing for the `k`-th pair in lexicographic order
    /// `(0,1), (0,2), ..., (1,2), ...`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> k & 1 == 1 {
                    g.set_edge(i, j, true);
                }
                k += 1;
            }
        }
        g
    }

    /// Inverse of [`Graph::from_pair_mask`].
    pub fn pair_mask(&self) -> u64 {
        assert!(self.n <= 11, "pair mask only fits graphs with n <= 11");
        let mut mask = 0u64;
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    mask |= 1 << k;
                }
                k += 1;
            }
        }
        mask
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        debug_assert!(u != v);
        self.adj[u * self.n + v] = on;
        self.adj[v * self.n + u] = on;
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v * self.n..(v + 1) * self.n]
            .iter()
            .filter(|&&b| b)
            .count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_edge(v, u))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Relabels vertices so that vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v], true);
        }
        g
    }

    pub fn adjacency_matrix(&self) -> BigIntMatrix {
        BigIntMatrix::from_fn(self.n, self.n, |i, j| i64::from(self.has_edge(i, j)))
    }

    /// Adjacency as rows of 0/1 values.
    pub fn adjacency_rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| u8::from(self.has_edge(i, j))).collect())
            .collect()
    }
}

/// The complement graph: distinct vertices are adjacent iff they are not
/// adjacent in `g`.
pub fn complement(g: &Graph) -> Graph {
    let n = g.n;
    let mut h = Graph::empty(n);
    for i in 0..n {
        for j in 0..n {
            h.adj[i * n + j] = i != j && !g.adj[i * n + j];
        }
    }
    h
}

/// Samples from G(n, 1/2) using stream 0 of the generator keyed by `seed`.
/// See [`random_gnp_half_stream`].
pub fn random_gnp_half(n: usize, seed: u64) -> Graph {
    random_gnp_half_stream(n, seed, 0)
}

/// Samples from G(n, 1/2).
///
/// The generator is ChaCha8 with a 256-bit key holding `seed` in its first
/// eight bytes (little endian, remaining bytes zero) and with the given
/// 64-bit stream id. Pairs `(i, j)`, `i < j`, are visited in lexicographic
/// order and each consumes one 32-bit output word; the pair is an edge iff
/// the top bit of that word is set.
pub fn random_gnp_half_stream(n: usize, seed: u64, stream: u64) -> Graph {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.next_u32() >> 31 == 1 {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}
