//! Single-cell Godsil–McKay switching.
//!
//! A cell `C` of even size whose induced subgraph is regular, such that every
//! vertex outside `C` sees 0, |C|/2 or |C| of its vertices, can be switched:
//! each outside vertex with exactly |C|/2 neighbours in `C` swaps its
//! neighbours and non-neighbours inside `C`. The result is cospectral with the
//! original, and so are the complements.

use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GmPartition {
    /// Sorted vertices of the switching cell.
    pub cell: Vec<usize>,
    /// Sorted remaining vertices.
    pub outside: Vec<usize>,
}

impl GmPartition {
    pub fn new(n: usize, mut cell: Vec<usize>) -> Self {
        cell.sort_unstable();
        cell.dedup();
        let outside = (0..n).filter(|v| cell.binary_search(v).is_err()).collect();
        GmPartition { cell, outside }
    }

    /// Vertices outside the cell with exactly half of their cell-neighbours;
    /// these are the ones whose adjacency a switch flips.
    pub fn switched_vertices(&self, g: &Graph) -> Vec<usize> {
        let half = self.cell.len() / 2;
        self.outside
            .iter()
            .copied()
            .filter(|&v| self.cell.iter().filter(|&&c| g.has_edge(v, c)).count() == half)
            .collect()
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.order();
        let k = self.cell.len();
        if k < 4 || !k.is_multiple_of(2) {
            return Err(Error::InvalidPartition(format!(
                "cell size {k} must be even and at least 4"
            )));
        }
        if self.cell.iter().chain(&self.outside).any(|&v| v >= n)
            || self.cell.len() + self.outside.len() != n
        {
            return Err(Error::InvalidPartition(
                "cell and outside do not partition the vertex set".into(),
            ));
        }
        let inner_degree = |c: usize| self.cell.iter().filter(|&&d| g.has_edge(c, d)).count();
        let d0 = inner_degree(self.cell[0]);
        if self.cell.iter().any(|&c| inner_degree(c) != d0) {
            return Err(Error::InvalidPartition("cell does not induce a regular graph".into()));
        }
        for &v in &self.outside {
            let m = self.cell.iter().filter(|&&c| g.has_edge(v, c)).count();
            if m != 0 && m != k / 2 && m != k {
                return Err(Error::InvalidPartition(format!(
                    "vertex {v} has {m} neighbours in a cell of size {k}"
                )));
            }
        }
        Ok(())
    }
}

/// Every valid single-cell partition with cell size in `sizes`
/// (4 and/or 6), in lexicographic order of the cell.
pub fn find_gm_partitions_with_sizes(g: &Graph, sizes: &[usize]) -> Vec<GmPartition> {
    let n = g.order();
    let mut out = Vec::new();
    for &k in sizes {
        if k > n {
            continue;
        }
        let mut cell: Vec<usize> = (0..k).collect();
        loop {
            let p = GmPartition::new(n, cell.clone());
            if p.validate(g).is_ok() {
                out.push(p);
            }
            // next k-combination
            let mut i = k;
            while i > 0 && cell[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cell[i - 1] += 1;
            for j in i..k {
                cell[j] = cell[j - 1] + 1;
            }
        }
    }
    out
}

/// All valid partitions with a 4-vertex cell.
pub fn find_gm_partitions(g: &Graph) -> Vec<GmPartition> {
    find_gm_partitions_with_sizes(g, &[4])
}

pub fn gm_switch(g: &Graph, p: &GmPartition) -> Result<Graph> {
    if p.cell.len() + p.outside.len() != g.order() {
        return Err(Error::InvalidPartition("partition does not match graph order".into()));
    }
    p.validate(g)?;
    let mut h = g.clone();
    for v in p.switched_vertices(g) {
        for &c in &p.cell {
            h.set_edge(v, c, !g.has_edge(v, c));
        }
    }
    Ok(h)
}
