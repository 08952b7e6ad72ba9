use std::collections::BTreeMap;

use super::Graph;

/// Colour refinement run on the disjoint union of `g` and `h`, so that the
/// resulting colours are comparable across the two graphs.
fn joint_refinement(g: &Graph, h: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n = g.order();
    let graphs = [g, h];
    let mut colors: Vec<usize> = graphs
        .iter()
        .flat_map(|x| (0..n).map(move |v| x.degree(v)))
        .collect();
    let mut classes = usize::MAX;
    loop {
        let mut table: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let signatures: Vec<(usize, Vec<usize>)> = (0..2 * n)
            .map(|idx| {
                let (which, v) = (idx / n, idx % n);
                let mut nb: Vec<usize> = graphs[which]
                    .neighbors(v)
                    .map(|u| colors[which * n + u])
                    .collect();
                nb.sort_unstable();
                (colors[idx], nb)
            })
            .collect();
        for sig in &signatures {
            let next = table.len();
            table.entry(sig.clone()).or_insert(next);
        }
        colors = signatures.iter().map(|s| table[s]).collect();
        if table.len() == classes {
            break;
        }
        classes = table.len();
    }
    let (a, b) = colors.split_at(n);
    (a.to_vec(), b.to_vec())
}

/// Exact isomorphism test by backtracking over colour-preserving bijections.
/// Graphs of different order are simply non-isomorphic.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }

    let (cg, ch) = joint_refinement(g, h);
    let mut hist_g = cg.clone();
    let mut hist_h = ch.clone();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return false;
    }

    // Visit small colour classes first.
    let mut class_size = BTreeMap::new();
    for &c in &cg {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&cg[v]], cg[v], v));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(g, h, &cg, &ch, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    h: &Graph,
    cg: &[usize],
    ch: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..h.order() {
        if used[w] || ch[w] != cg[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(g, h, cg, ch, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_gnp_half;

    /// Brute-force oracle over all n! bijections.
    fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
        fn rec(g: &Graph, h: &Graph, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let n = g.order();
            if perm.len() == n {
                return g.permuted(perm) == *h;
            }
            for w in 0..n {
                if !used[w] {
                    used[w] = true;
                    perm.push(w);
                    if rec(g, h, perm, used) {
                        return true;
                    }
                    perm.pop();
                    used[w] = false;
                }
            }
            false
        }
        g.order() == h.order() && rec(g, h, &mut Vec::new(), &mut vec![false; g.order()])
    }

    #[test]
    fn small_examples() {
        let p3 = Graph::path(3);
        let relabeled = p3.permuted(&[2, 0, 1]);
        assert!(is_isomorphic(&p3, &relabeled));
        assert!(!is_isomorphic(&p3, &Graph::complete(3)));

        let c4_k1 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(!is_isomorphic(&c4_k1, &star));
        assert!(!brute_isomorphic(&c4_k1, &star));
        assert!(!is_isomorphic(&Graph::empty(2), &Graph::empty(3)));
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..150u64 {
            let g = random_gnp_half(6, seed);
            let h = random_gnp_half(6, seed + 1000);
            assert_eq!(is_isomorphic(&g, &h), brute_isomorphic(&g, &h), "{g:?} {h:?}");
            let perm = [3, 5, 0, 1, 4, 2];
            assert!(is_isomorphic(&g, &g.permuted(&perm)));
        }
    }

    #[test]
    fn regular_graphs_need_search() {
        // C6 and two disjoint triangles are both 2-regular.
        let c6 = Graph::cycle(6);
        let two_k3 =
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!is_isomorphic(&c6, &two_k3));
        assert!(is_isomorphic(&c6, &c6.permuted(&[1, 3, 5, 0, 2, 4])));
    }
}
