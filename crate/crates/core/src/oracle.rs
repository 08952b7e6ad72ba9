//! Ground truth at small order, and forensics for cospectral pairs.
//!
//! Two graphs share a generalized spectrum iff their adjacency matrices and
//! their complements' adjacency matrices have equal characteristic
//! polynomials. For such a pair with `G` controllable there is a unique
//! rational orthogonal `Q` with `Q e = e` and `Q^T A(G) Q = A(H)`, namely the
//! solution of `Q^T W(G) = W(H)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{prime_support, Budget};
use crate::criterion::Analysis;
use crate::error::{Error, Result};
use crate::graph::{
    complement, encode_graph6, find_gm_partitions_with_sizes, gm_switch, is_isomorphic, GmPartition, Graph,
};
use crate::linalg::{char_poly, solve_rational, BigIntMatrix, CharPoly, RationalMatrix};
use crate::walk::build_walk_bundle;

/// Characteristic polynomials of a graph and of its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectrumKey {
    pub adjacency: CharPoly,
    pub complement: CharPoly,
}

pub fn spectrum_key(g: &Graph) -> SpectrumKey {
    let a = char_poly(&g.adjacency_matrix()).expect("adjacency is square");
    let c = char_poly(&complement(g).adjacency_matrix()).expect("adjacency is square");
    SpectrumKey {
        adjacency: a,
        complement: c,
    }
}

/// Graphs on `n` vertices sharing one spectrum key, one per isomorphism
/// class.
#[derive(Debug, Clone)]
pub struct CospectralClass {
    pub key: SpectrumKey,
    pub representatives: Vec<Graph>,
}

pub const MAX_ENUMERATION_ORDER: usize = 7;

/// Index permutation induced on the `n(n-1)/2` vertex pairs by `perm`.
fn pair_permutation(n: usize, perm: &[usize]) -> Vec<u32> {
    let mut index = vec![vec![0u32; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            index[i][j] = k;
            index[j][i] = k;
            k += 1;
        }
    }
    let mut out = Vec::with_capacity(k as usize);
    for i in 0..n {
        for j in i + 1..n {
            out.push(index[perm[i]][perm[j]]);
        }
    }
    out
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn apply_pair_perm(mask: u32, pp: &[u32]) -> u32 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        out |= 1 << pp[b];
        m &= m - 1;
    }
    out
}

/// One representative (the smallest pair mask) of every isomorphism class
/// of graphs on `n <= 7` labelled vertices.
pub fn isomorphism_representatives(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::InvalidArgument(format!(
            "exhaustive enumeration supports 1 <= n <= {MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    let pairs = n * (n - 1) / 2;
    let perms: Vec<Vec<u32>> = all_permutations(n)
        .iter()
        .map(|p| pair_permutation(n, p))
        .collect();
    let total = 1usize << pairs;
    let mut seen = vec![false; total];
    let mut reps = Vec::new();
    for mask in 0..total {
        if seen[mask] {
            continue;
        }
        for pp in &perms {
            seen[apply_pair_perm(mask as u32, pp) as usize] = true;
        }
        reps.push(Graph::from_pair_mask(n, mask as u64));
    }
    Ok(reps)
}

/// Partitions all graphs of order `n <= 7` into generalized-cospectral
/// classes of pairwise non-isomorphic representatives, ordered by key.
pub fn enumerate_cospectral_classes(n: usize) -> Result<Vec<CospectralClass>> {
    let reps = isomorphism_representatives(n)?;
    let mut by_key: BTreeMap<SpectrumKey, Vec<Graph>> = BTreeMap::new();
    for g in reps {
        by_key.entry(spectrum_key(&g)).or_default().push(g);
    }
    Ok(by_key
        .into_iter()
        .map(|(key, representatives)| CospectralClass {
            key,
            representatives,
        })
        .collect())
}

/// Summary of an exhaustive run at one order.
#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub n: usize,
    pub graphs: usize,
    pub classes: usize,
    pub non_singleton_classes: usize,
    pub controllable: usize,
    pub certified_dgs: usize,
    /// Certified graphs that nevertheless have a non-isomorphic mate. Must
    /// be zero.
    pub violations: usize,
    pub non_dgs_examples: Vec<Vec<String>>,
}

pub fn oracle_summary(n: usize, budget: &Budget) -> Result<OracleSummary> {
    let classes = enumerate_cospectral_classes(n)?;
    let mut summary = OracleSummary {
        n,
        graphs: 0,
        classes: classes.len(),
        non_singleton_classes: 0,
        controllable: 0,
        certified_dgs: 0,
        violations: 0,
        non_dgs_examples: Vec::new(),
    };
    for class in &classes {
        let singleton = class.representatives.len() == 1;
        if !singleton {
            summary.non_singleton_classes += 1;
            summary.non_dgs_examples.push(
                class
                    .representatives
                    .iter()
                    .map(encode_graph6)
                    .collect(),
            );
        }
        for g in &class.representatives {
            summary.graphs += 1;
            let mut analysis = Analysis::new(g, budget)?;
            if analysis.det().is_zero() {
                continue;
            }
            summary.controllable += 1;
            let verdict = analysis.certify();
            if verdict.kind.is_dgs() {
                summary.certified_dgs += 1;
                if !singleton {
                    summary.violations += 1;
                }
            }
        }
    }
    Ok(summary)
}

/// Tab-separated rendering of oracle summaries.
pub fn format_oracle_report(rows: &[OracleSummary], seed: u64) -> String {
    let mut out = String::new();
    out.push_str(&format!("# generalized-cospectral oracle (seed {seed})\n"));
    out.push_str("n\tgraphs\tclasses\tnon_singleton\tcontrollable\tcertified_dgs\tviolations\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.n, r.graphs, r.classes, r.non_singleton_classes, r.controllable, r.certified_dgs, r.violations
        ));
    }
    for r in rows {
        for class in &r.non_dgs_examples {
            out.push_str(&format!("class\t{}\t{}\n", r.n, class.join(" ")));
        }
    }
    out
}

/// The reconstructed `Q` together with the identities it was checked
/// against.
#[derive(Debug, Clone)]
pub struct QReport {
    pub q: RationalMatrix,
    pub transports_walk_matrix: bool,
    pub orthogonal: bool,
    pub fixes_all_ones: bool,
    pub conjugates_adjacency: bool,
    pub level: BigInt,
}

impl QReport {
    pub fn verified(&self) -> bool {
        self.transports_walk_matrix && self.orthogonal && self.fixes_all_ones && self.conjugates_adjacency
    }
}

/// Solves `Q^T W(g) = W(h)` and checks the result.
pub fn reconstruct_q(g: &Graph, h: &Graph) -> Result<QReport> {
    if g.order() != h.order() {
        return Err(Error::Dimension("graphs of different order".into()));
    }
    let wg = build_walk_bundle(g)?.w;
    let wh = build_walk_bundle(h)?.w;
    if wg.det_bareiss()?.is_zero() {
        return Err(Error::NotControllable);
    }
    let q = solve_rational(&wg.transpose(), &wh.transpose())?;
    let qt = q.transpose();
    let n = g.order();

    let transports = qt.mul(&RationalMatrix::from_integer(&wg))?.equals_integer(&wh);
    let orthogonal = qt.mul(&q)?.equals_integer(&BigIntMatrix::identity(n));
    let ones = BigIntMatrix::from_fn(n, 1, |_, _| 1);
    let fixes = q.mul(&RationalMatrix::from_integer(&ones))?.equals_integer(&ones);
    let conj = qt
        .mul(&RationalMatrix::from_integer(&g.adjacency_matrix()))?
        .mul(&q)?
        .equals_integer(&h.adjacency_matrix());
    let level = q.level().clone();
    Ok(QReport {
        q,
        transports_walk_matrix: transports,
        orthogonal,
        fixes_all_ones: fixes,
        conjugates_adjacency: conj,
        level,
    })
}

/// Primes dividing the level of `q`; `None` if the level could not be
/// factored within `budget`.
pub fn level_prime_support(q: &RationalMatrix, budget: &Budget) -> Option<Vec<BigUint>> {
    let level = q.level().magnitude().clone();
    prime_support(&level, budget)
}

/// The switching matrix of a single-cell GM switch: `(2/|C|) J - I` on the
/// cell and the identity elsewhere.
pub fn gm_switching_matrix(n: usize, cell: &[usize]) -> RationalMatrix {
    let k = cell.len() as i64;
    let mut data = vec![BigRational::zero(); n * n];
    for i in 0..n {
        data[i * n + i] = BigRational::one();
    }
    for &i in cell {
        for &j in cell {
            let mut x = BigRational::new(BigInt::from(2), BigInt::from(k));
            if i == j {
                x -= BigRational::one();
            }
            data[i * n + j] = x;
        }
    }
    RationalMatrix::new(n, n, data)
}

/// Q forensics for one mate, in serializable form.
#[derive(Debug, Clone, Serialize)]
pub struct QSummary {
    pub transports_walk_matrix: bool,
    pub orthogonal: bool,
    pub fixes_all_ones: bool,
    pub conjugates_adjacency: bool,
    #[serde(with = "crate::report::bigint_string")]
    pub level: BigInt,
    /// `None` when the level could not be factored within budget.
    pub level_primes: Option<Vec<String>>,
    /// Whether the level divides the last invariant factor of `W(g)`.
    pub level_divides_dn: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mate {
    pub partition: GmPartition,
    pub graph6: String,
    pub same_spectrum_key: bool,
    pub q: Option<QSummary>,
}

/// Pairwise non-isomorphic Godsil–McKay mates of `g` that are not
/// isomorphic to `g`, from single cells of size 4 and 6. `Q` is
/// reconstructed when `g` is controllable.
pub fn gm_mates(g: &Graph, budget: &Budget) -> Result<Vec<Mate>> {
    let key = spectrum_key(g);
    let mut analysis = Analysis::new(g, budget)?;
    let controllable = !analysis.det().is_zero();
    let dn = if controllable {
        Some(analysis.snf().last().clone())
    } else {
        None
    };
    let mut seen: Vec<Graph> = Vec::new();
    let mut out = Vec::new();
    for p in find_gm_partitions_with_sizes(g, &[4, 6]) {
        let h = gm_switch(g, &p)?;
        if is_isomorphic(g, &h) || seen.iter().any(|s| is_isomorphic(s, &h)) {
            continue;
        }
        let q = match &dn {
            Some(dn) => {
                let r = reconstruct_q(g, &h)?;
                let level_primes = level_prime_support(&r.q, budget)
                    .map(|ps| ps.iter().map(|p| p.to_string()).collect());
                Some(QSummary {
                    transports_walk_matrix: r.transports_walk_matrix,
                    orthogonal: r.orthogonal,
                    fixes_all_ones: r.fixes_all_ones,
                    conjugates_adjacency: r.conjugates_adjacency,
                    level_divides_dn: (dn % &r.level).is_zero(),
                    level: r.level,
                    level_primes,
                })
            }
            None => None,
        };
        out.push(Mate {
            partition: p,
            graph6: encode_graph6(&h),
            same_spectrum_key: spectrum_key(&h) == key,
            q,
        });
        seen.push(h);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{find_gm_partitions, random_gnp_half};

    #[test]
    fn key_of_k2() {
        let k = spectrum_key(&Graph::complete(2));
        assert_eq!(k.adjacency.to_string(), "x^2 - 1");
        assert_eq!(k.complement.to_string(), "x^2");
    }

    #[test]
    fn complement_swaps_key() {
        let g = random_gnp_half(8, 5);
        let a = spectrum_key(&g);
        let b = spectrum_key(&complement(&g));
        assert_eq!(a.adjacency, b.complement);
        assert_eq!(a.complement, b.adjacency);
    }

    #[test]
    fn representative_counts() {
        // number of unlabeled graphs on n vertices
        let expected = [1usize, 2, 4, 11, 34, 156];
        for (n, &e) in (1..=6).zip(&expected) {
            assert_eq!(isomorphism_representatives(n).unwrap().len(), e);
        }
        assert!(isomorphism_representatives(8).is_err());
    }

    #[test]
    fn tiny_orders_have_singleton_classes() {
        for n in 1..=3 {
            for class in enumerate_cospectral_classes(n).unwrap() {
                assert_eq!(class.representatives.len(), 1);
            }
        }
    }

    #[test]
    fn saltire_pair_is_separated_by_complement() {
        let c4_k1 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let a = spectrum_key(&c4_k1);
        let b = spectrum_key(&star);
        assert_eq!(a.adjacency, b.adjacency);
        assert_ne!(a.complement, b.complement);
    }

    #[test]
    fn classes_agree_on_edge_count() {
        for class in enumerate_cospectral_classes(5).unwrap() {
            let e = class.representatives[0].edge_count();
            assert!(class.representatives.iter().all(|g| g.edge_count() == e));
        }
    }

    #[test]
    fn permutation_gives_permutation_matrix() {
        // find a controllable graph, then relabel it
        let g = (0..)
            .map(|s| random_gnp_half(8, s))
            .find(|g| !crate::walk::det_walk(g).unwrap().is_zero())
            .unwrap();
        let perm = [3, 1, 7, 0, 2, 6, 4, 5];
        let h = g.permuted(&perm);
        let rep = reconstruct_q(&g, &h).unwrap();
        assert!(rep.verified());
        assert_eq!(rep.level, BigInt::one());
        assert!(level_prime_support(&rep.q, &Budget::default()).unwrap().is_empty());
        // Q^T maps vertex v to perm[v]: Q[v][perm[v]] = 1
        for (v, &pv) in perm.iter().enumerate() {
            assert!(rep.q[(v, pv)].is_one());
        }
    }

    #[test]
    fn uncontrollable_rejected() {
        let g = Graph::complete(3);
        assert_eq!(reconstruct_q(&g, &g).unwrap_err(), Error::NotControllable);
    }

    #[test]
    fn gm_pair_reconstructs_switching_matrix() {
        let mut done = 0;
        for seed in 0..400 {
            let g = random_gnp_half(9, seed);
            if crate::walk::det_walk(&g).unwrap().is_zero() {
                continue;
            }
            for p in find_gm_partitions(&g) {
                if p.switched_vertices(&g).is_empty() {
                    continue;
                }
                let h = gm_switch(&g, &p).unwrap();
                assert_eq!(spectrum_key(&g), spectrum_key(&h));
                let rep = reconstruct_q(&g, &h).unwrap();
                assert!(rep.verified());
                assert_eq!(rep.q, gm_switching_matrix(9, &p.cell));
                assert_eq!(rep.level, BigInt::from(2));
                assert_eq!(
                    level_prime_support(&rep.q, &Budget::default()).unwrap(),
                    vec![BigUint::from(2u32)]
                );
                done += 1;
            }
            if done >= 5 {
                break;
            }
        }
        assert!(done >= 5);
    }

    #[test]
    fn mates_of_random_graphs() {
        let budget = Budget::default();
        let mut found = 0;
        for seed in 0..60 {
            let g = random_gnp_half(10, seed);
            for m in gm_mates(&g, &budget).unwrap() {
                assert!(m.same_spectrum_key);
                let h = crate::graph::parse_graph6(&m.graph6).unwrap();
                assert!(!is_isomorphic(&g, &h));
                if let Some(q) = &m.q {
                    assert!(q.orthogonal && q.fixes_all_ones && q.conjugates_adjacency);
                    assert!(q.level_divides_dn);
                }
                found += 1;
            }
        }
        assert!(found > 0);
    }
}
